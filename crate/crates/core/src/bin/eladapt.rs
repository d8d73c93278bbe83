use std::io::Write;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::Parser;
use eladapt::cli::{run, Cli, EXIT_TIMEOUT, EXIT_USAGE};

fn timeout() -> Duration {
    let secs = std::env::var("ELADAPT_TIMEOUT_SECS").ok().and_then(|s| s.parse::<u64>().ok()).unwrap_or(60);
    Duration::from_secs(secs)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&cli, &mut out, &mut err);
        let _ = tx.send((code, out, err));
    });
    match rx.recv_timeout(timeout()) {
        Ok((code, out, err)) => {
            let _ = std::io::stdout().write_all(&out);
            let _ = std::io::stderr().write_all(&err);
            ExitCode::from(code as u8)
        }
        Err(_) => {
            eprintln!("error: timed out after {} s", timeout().as_secs());
            ExitCode::from(EXIT_TIMEOUT as u8)
        }
    }
}
