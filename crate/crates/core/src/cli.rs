//! Command-line frontend.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::adaptation::{adapt_report, default_k, AdaptationError, AdaptationReport, AdaptationSetting};
use crate::oracle::{brute_force_justifications, chase_is_consistent, DEFAULT_BOUND};
use crate::reasoner::Reasoner;
use crate::repair::{find_justifications_with, RepairError};
use crate::revision::{b_mw_with, BmwOptions};
use crate::syntax::{parse_assertion, parse_kb, Abox, Assertion, KnowledgeBase, Tbox};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEMANTIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "eladapt", version, about = "Case adaptation by EL-bottom knowledge-base revision")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Print reasoning work counters on stderr.
    #[arg(long, global = true)]
    pub stats: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide consistency of the union of the given files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Decide whether the union of the given files entails an assertion.
    Entail {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Assertion such as "C(a)" or "R(a, b)".
        #[arg(long)]
        query: String,
    },
    /// List the justifications for the clash between A and N.
    Justify {
        tbox: PathBuf,
        solution: PathBuf,
        target: PathBuf,
        /// Justify against the revision graph of A built with this bound.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Adapt solution A to target N under TBox T.
    Adapt {
        tbox: PathBuf,
        solution: PathBuf,
        target: PathBuf,
        /// Depth bound; defaults to the largest depth of T, A and N.
        #[arg(long)]
        k: Option<usize>,
        /// Print the revision graph on stderr.
        #[arg(long)]
        dump_graph: bool,
        /// Emit only the best N outcomes.
        #[arg(long)]
        top: Option<usize>,
        /// Re-check every outcome with independent procedures.
        #[arg(long)]
        verify: bool,
    },
}

/// A failure mapped to an exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
    fn semantic(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_SEMANTIC, message: message.into() }
    }
}

fn read_kb(path: &Path) -> Result<KnowledgeBase, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_kb(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn read_union(paths: &[PathBuf]) -> Result<KnowledgeBase, Failure> {
    let mut kb = KnowledgeBase::default();
    for p in paths {
        let part = read_kb(p)?;
        kb.tbox.extend(part.tbox);
        kb.abox.extend(part.abox);
    }
    Ok(kb)
}

fn read_tbox_file(path: &Path) -> Result<Tbox, Failure> {
    let kb = read_kb(path)?;
    if !kb.abox.is_empty() {
        return Err(Failure::usage(format!("{}: TBox file contains assertions", path.display())));
    }
    Ok(kb.tbox)
}

fn read_abox_file(path: &Path) -> Result<Abox, Failure> {
    let kb = read_kb(path)?;
    if !kb.tbox.is_empty() {
        return Err(Failure::usage(format!("{}: ABox file contains GCIs", path.display())));
    }
    if let Some(a) = kb.abox.iter().find(|a| a.mentions_variable()) {
        return Err(Failure::usage(format!("{}: variables are not allowed here: {a}", path.display())));
    }
    Ok(kb.abox)
}

fn printed(abox: &Abox) -> Vec<String> {
    let mut out: Vec<String> = abox.iter().map(Assertion::to_string).collect();
    out.sort();
    out
}

fn emit(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(v).expect("json values serialize"))
}

/// Runs a parsed command line, writing results to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::semantic(format!("write failed: {e}"));
    match &cli.command {
        Command::Check { files } => {
            let kb = read_union(files)?;
            let r = Reasoner::new(&kb.tbox);
            let ok = r.is_consistent(&kb.abox);
            match cli.format {
                Format::Text => writeln!(out, "{}", if ok { "consistent" } else { "inconsistent" }).map_err(io)?,
                Format::Json => emit(out, &json!({ "consistent": ok })).map_err(io)?,
            }
            stats(cli, err, &r);
            Ok(EXIT_OK)
        }
        Command::Entail { files, query } => {
            let kb = read_union(files)?;
            let q = parse_assertion(query).map_err(|e| Failure::usage(format!("query: {e}")))?;
            let r = Reasoner::new(&kb.tbox);
            let yes = r.entails(&kb.abox, &q);
            match cli.format {
                Format::Text => writeln!(out, "{yes}").map_err(io)?,
                Format::Json => emit(out, &json!({ "entailed": yes, "query": q.to_string() })).map_err(io)?,
            }
            stats(cli, err, &r);
            Ok(EXIT_OK)
        }
        Command::Justify { tbox, solution, target, k } => {
            let (t, mut a, n) = (read_tbox_file(tbox)?, read_abox_file(solution)?, read_abox_file(target)?);
            let r = Reasoner::new(&t);
            if let Some(k) = k {
                a = b_mw_with(&r, &t, &a, *k, BmwOptions::default())
                    .map_err(|e| Failure::semantic(e.to_string()))?
                    .to_abox();
            }
            let js = match find_justifications_with(&r, &a, &n) {
                Ok(js) => js,
                Err(RepairError::ConsistentUnion) => Default::default(),
                Err(e @ RepairError::TargetInconsistent) => return Err(Failure::semantic(e.to_string())),
            };
            let arrays: Vec<Value> = js.iter().map(|j| json!(printed(j))).collect();
            match cli.format {
                Format::Text => {
                    for a in &arrays {
                        emit(out, a).map_err(io)?;
                    }
                }
                Format::Json => emit(out, &json!({ "justifications": arrays })).map_err(io)?,
            }
            stats(cli, err, &r);
            Ok(EXIT_OK)
        }
        Command::Adapt { tbox, solution, target, k, dump_graph, top, verify } => {
            let setting = AdaptationSetting::new(read_tbox_file(tbox)?, read_abox_file(solution)?, read_abox_file(target)?);
            let dk = default_k(&setting);
            let k = match k {
                Some(k) if *k < dk => {
                    let _ = writeln!(
                        err,
                        "warning: k = {k} is below the depth bound {dk}; outcomes may depend on how A and N are written"
                    );
                    *k
                }
                Some(k) => *k,
                None => dk,
            };
            let report = adapt_report(&setting, k, BmwOptions::default()).map_err(|e| match e {
                AdaptationError::TargetInconsistent | AdaptationError::SolutionInconsistent => {
                    Failure::semantic(e.to_string())
                }
                other => Failure::usage(other.to_string()),
            })?;
            if *dump_graph {
                if let Some(g) = &report.graph {
                    let _ = write!(err, "# revision graph\n{}", g.dump());
                }
            }
            if let Some(d) = &report.diagnostic {
                let _ = writeln!(err, "note: {d}");
            }
            let shown = top.unwrap_or(usize::MAX);
            match cli.format {
                Format::Json => emit(out, &adapt_json(&report, shown)).map_err(io)?,
                Format::Text => write_adapt_text(out, &report, shown).map_err(io)?,
            }
            if cli.stats {
                let s = report.stats;
                let _ = writeln!(
                    err,
                    "saturations: {}\nqueries: {}\ngraph nodes: {}\ngraph assertions: {}",
                    s.saturations, s.queries, s.graph_nodes, s.graph_assertions
                );
            }
            if *verify {
                let problems = verify_report(&setting, &report);
                if problems.is_empty() {
                    let _ = writeln!(err, "verify: ok");
                } else {
                    for p in &problems {
                        let _ = writeln!(err, "verify: {p}");
                    }
                    return Ok(EXIT_SEMANTIC);
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn stats(cli: &Cli, err: &mut dyn Write, r: &Reasoner) {
    if cli.stats {
        let _ = writeln!(err, "saturations: {}\nqueries: {}", r.saturation_count(), r.query_count());
    }
}

/// The JSON document for an adaptation run. Keys come out sorted.
pub fn adapt_json(report: &AdaptationReport, top: usize) -> Value {
    let outcomes: Vec<Value> = report
        .outcomes
        .iter()
        .take(top)
        .map(|o| {
            json!({
                "rank": o.rank,
                "solution": printed(&o.solution),
                "removed": printed(&o.removed),
                "removed_has_role_assertion": o.removed_has_role_assertion(),
            })
        })
        .collect();
    json!({ "outcomes": outcomes, "k": report.k, "consistent_union": report.consistent_union })
}

fn write_adapt_text(out: &mut dyn Write, report: &AdaptationReport, top: usize) -> std::io::Result<()> {
    writeln!(out, "k = {}", report.k)?;
    if report.consistent_union {
        writeln!(out, "A and N are consistent together; nothing to remove")?;
    }
    for o in report.outcomes.iter().take(top) {
        writeln!(out, "outcome {}", o.rank)?;
        writeln!(out, "  solution:")?;
        for a in printed(&o.solution) {
            writeln!(out, "    {a}")?;
        }
        writeln!(out, "  removed:")?;
        for a in printed(&o.removed) {
            writeln!(out, "    {a}")?;
        }
    }
    Ok(())
}

/// Re-checks a report: every solution entails N and is consistent, rolling
/// output follows from its input, and, within bounds, justifications agree
/// with enumeration and consistency with the chase.
pub fn verify_report(setting: &AdaptationSetting, report: &AdaptationReport) -> Vec<String> {
    let r = Reasoner::new(&setting.tbox);
    let n = &setting.target_abox;
    let mut problems = Vec::new();
    for o in &report.outcomes {
        if !r.entails_all(&o.solution, n) {
            problems.push(format!("outcome {} does not entail the target", o.rank));
        }
        if !r.is_consistent(&o.solution) {
            problems.push(format!("outcome {} is inconsistent", o.rank));
        }
        if chase_is_consistent(&setting.tbox, &o.solution) == Some(false) {
            problems.push(format!("outcome {} is inconsistent by the chase", o.rank));
        }
        if o.solution.iter().any(Assertion::mentions_variable) {
            problems.push(format!("outcome {} mentions a variable", o.rank));
        }
        if let Some((input, output)) = &o.rolled {
            if !r.entails_all(input, output) {
                problems.push(format!("outcome {}: rolled ABox does not follow from its input", o.rank));
            }
        }
    }
    if report.consistent_union {
        let union: Abox = setting.solution_abox.union(n).cloned().collect();
        if report.outcomes.len() != 1 || report.outcomes[0].solution != union || !report.outcomes[0].removed.is_empty() {
            problems.push("consistent input was changed".into());
        }
    } else if let Some(g) = &report.graph {
        let a_g = g.to_abox();
        if let Some(expected) = brute_force_justifications(&setting.tbox, &a_g, n, DEFAULT_BOUND) {
            if expected != report.justifications {
                problems.push("justifications differ from enumeration".into());
            }
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from(["eladapt", "--format", "json", "adapt", "t", "a", "n", "--k", "1", "--top", "1"]).unwrap();
        assert_eq!(cli.format, Format::Json);
        assert!(matches!(cli.command, Command::Adapt { k: Some(1), top: Some(1), .. }));
        assert!(Cli::try_parse_from(["eladapt", "entail", "t"]).is_err());
        assert!(Cli::try_parse_from(["eladapt", "adapt", "t", "a", "n", "--k", "-1"]).is_err());
    }

    #[test]
    fn missing_file_is_a_usage_error() {
        let cli = Cli::try_parse_from(["eladapt", "check", "/nonexistent/file.kb"]).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(&cli, &mut out, &mut err), EXIT_USAGE);
        assert!(String::from_utf8(err).unwrap().contains("error:"));
    }
}
