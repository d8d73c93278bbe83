//! Adaptation of a retrieved solution to a target problem by revision.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::reasoner::Reasoner;
use crate::repair::{find_repairs_with, Justification};
use crate::revision::{b_mw_with, rolling_with, BmwOptions, RevisionError, RevisionGraph};
use crate::syntax::{depth, print_kb, Abox, KnowledgeBase, Tbox};

/// Domain knowledge `T`, retrieved solution `A`, and target problem `N`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdaptationSetting {
    pub tbox: Tbox,
    pub solution_abox: Abox,
    pub target_abox: Abox,
}

impl AdaptationSetting {
    pub fn new(tbox: Tbox, solution_abox: Abox, target_abox: Abox) -> Self {
        AdaptationSetting { tbox, solution_abox, target_abox }
    }
}

/// A candidate solution and the assertions removed to reach it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptationOutcome {
    pub solution: Abox,
    pub removed: Abox,
    pub rank: usize,
    /// Input and output of the rolling step, when one ran.
    pub rolled: Option<(Abox, Abox)>,
}

impl AdaptationOutcome {
    pub fn removed_has_role_assertion(&self) -> bool {
        self.removed.iter().any(|a| a.is_role())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdaptationError {
    #[error("target problem inconsistent")]
    TargetInconsistent,
    #[error("retrieved solution inconsistent with the TBox")]
    SolutionInconsistent,
    #[error("variable {0} in an input ABox")]
    VariableInInput(String),
    #[error(transparent)]
    Revision(#[from] RevisionError),
}

/// Counters of reasoning work done during one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WorkStats {
    pub saturations: u64,
    pub queries: u64,
    pub graph_nodes: usize,
    pub graph_assertions: usize,
}

/// Everything one adaptation run produced.
#[derive(Clone, Debug)]
pub struct AdaptationReport {
    pub k: usize,
    pub consistent_union: bool,
    pub graph: Option<RevisionGraph>,
    pub justifications: BTreeSet<Justification>,
    pub outcomes: Vec<AdaptationOutcome>,
    /// Set when the clash admits no repair.
    pub diagnostic: Option<String>,
    pub stats: WorkStats,
}

/// The smallest `k` covering the depths of `T`, `A` and `N`.
pub fn default_k(setting: &AdaptationSetting) -> usize {
    depth(&setting.tbox).max(depth(&setting.solution_abox)).max(depth(&setting.target_abox))
}

/// Ranked outcomes of adapting `setting` with bound `k`.
pub fn adapt(setting: &AdaptationSetting, k: usize) -> Result<Vec<AdaptationOutcome>, AdaptationError> {
    Ok(adapt_report(setting, k, BmwOptions::default())?.outcomes)
}

pub fn adapt_report(
    setting: &AdaptationSetting,
    k: usize,
    opts: BmwOptions,
) -> Result<AdaptationReport, AdaptationError> {
    let (a, n) = (&setting.solution_abox, &setting.target_abox);
    if let Some(bad) = a.iter().chain(n.iter()).find(|x| x.mentions_variable()) {
        return Err(AdaptationError::VariableInInput(bad.to_string()));
    }
    let reasoner = Reasoner::new(&setting.tbox);
    if !reasoner.is_consistent(n) {
        return Err(AdaptationError::TargetInconsistent);
    }
    let stats = |r: &Reasoner, g: Option<&RevisionGraph>| WorkStats {
        saturations: r.saturation_count(),
        queries: r.query_count(),
        graph_nodes: g.map_or(0, RevisionGraph::node_count),
        graph_assertions: g.map_or(0, |g| g.to_abox().len()),
    };

    let union: Abox = a.union(n).cloned().collect();
    if reasoner.is_consistent(&union) {
        return Ok(AdaptationReport {
            k,
            consistent_union: true,
            graph: None,
            justifications: BTreeSet::new(),
            outcomes: vec![AdaptationOutcome { solution: union, removed: Abox::new(), rank: 0, rolled: None }],
            diagnostic: None,
            stats: stats(&reasoner, None),
        });
    }
    if !reasoner.is_consistent(a) {
        return Err(AdaptationError::SolutionInconsistent);
    }

    let graph = b_mw_with(&reasoner, &setting.tbox, a, k, opts)?;
    let a_g = graph.to_abox();
    let repairs = find_repairs_with(&reasoner, &a_g, n).map_err(|_| AdaptationError::TargetInconsistent)?;
    let mut outcomes = Vec::new();
    for r in &repairs.repairs {
        let kept: Abox = a_g.difference(r).cloned().collect();
        let rolled = rolling_with(&reasoner, &kept)?;
        let solution = rolled.union(n).cloned().collect();
        outcomes.push(AdaptationOutcome { solution, removed: r.clone(), rank: 0, rolled: Some((kept, rolled)) });
    }
    let diagnostic = repairs.diagnostic();
    Ok(AdaptationReport {
        k,
        consistent_union: false,
        stats: stats(&reasoner, Some(&graph)),
        graph: Some(graph),
        justifications: repairs.justifications,
        outcomes: rank_outcomes(outcomes),
        diagnostic,
    })
}

/// Orders outcomes: removed sets without role assertions first, then fewer
/// removed assertions, then printed form. Ranks become `0..n`.
pub fn rank_outcomes(mut outcomes: Vec<AdaptationOutcome>) -> Vec<AdaptationOutcome> {
    let printed = |a: &Abox| print_kb(&KnowledgeBase::new(Tbox::new(), a.clone()));
    outcomes.sort_by(|x, y| {
        x.removed_has_role_assertion()
            .cmp(&y.removed_has_role_assertion())
            .then(x.removed.len().cmp(&y.removed.len()))
            .then_with(|| match printed(&x.solution).cmp(&printed(&y.solution)) {
                Ordering::Equal => printed(&x.removed).cmp(&printed(&y.removed)),
                o => o,
            })
    });
    for (i, o) in outcomes.iter_mut().enumerate() {
        o.rank = i;
    }
    outcomes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_kb;

    const T1: &str = "A SubClassOf (some R. A).\nA SubClassOf C.\n(E and (some R. A)) SubClassOf Bottom.\n";

    fn abox(text: &str) -> Abox {
        parse_kb(text).unwrap().abox
    }
    fn setting(a: &str, n: &str) -> AdaptationSetting {
        AdaptationSetting::new(parse_kb(T1).unwrap().tbox, abox(a), abox(n))
    }

    #[test]
    fn worked_example() {
        let s = setting("assert A(a).", "assert E(a).");
        assert_eq!(default_k(&s), 1);
        let out = adapt(&s, 1).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].solution, abox("assert E(a).\nassert C(a).\nassert (some R. (C and (some R. A)))(a)."));
        assert_eq!(out[0].removed, abox("assert A(a).\nassert A(?x1)."));
        assert_eq!(out[1].solution, abox("assert E(a).\nassert C(a)."));
        assert_eq!(out[1].removed, abox("assert A(a).\nassert R(a, ?x1)."));
        assert_eq!((out[0].rank, out[1].rank), (0, 1));
    }

    #[test]
    fn consistent_union_is_kept() {
        let out = adapt(&setting("assert C(a).", "assert E(a)."), 1).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].solution, abox("assert C(a).\nassert E(a)."));
        assert!(out[0].removed.is_empty());
    }

    #[test]
    fn errors() {
        assert_eq!(adapt(&setting("assert C(a).", "assert E(a).\nassert A(a)."), 1), Err(AdaptationError::TargetInconsistent));
        assert!(matches!(adapt(&setting("assert C(?x1).", "assert E(a)."), 1), Err(AdaptationError::VariableInInput(_))));
        assert_eq!(
            adapt(&setting("assert A(a).\nassert E(a).", "assert E(b)."), 1),
            Err(AdaptationError::SolutionInconsistent)
        );
    }

    #[test]
    fn default_k_of_empty_setting() {
        assert_eq!(default_k(&AdaptationSetting::default()), 0);
    }

    fn outcome(removed: &str) -> AdaptationOutcome {
        AdaptationOutcome { solution: Abox::new(), removed: abox(removed), rank: 9, rolled: None }
    }

    #[test]
    fn ranking() {
        let ranked = rank_outcomes(vec![outcome("assert R(a, b).\nassert A(b).")]);
        assert_eq!(ranked[0].rank, 0);
        let ranked = rank_outcomes(vec![
            outcome("assert R(a, b)."),
            outcome("assert A(a).\nassert B(a).\nassert C(a)."),
            outcome("assert A(b)."),
        ]);
        let sizes: Vec<(bool, usize)> = ranked.iter().map(|o| (o.removed_has_role_assertion(), o.removed.len())).collect();
        assert_eq!(sizes, vec![(false, 1), (false, 3), (true, 1)]);
        assert_eq!(ranked.iter().map(|o| o.rank).collect::<Vec<_>>(), vec![0, 1, 2]);
    }
}
