mod args;
mod commands;

use std::process::ExitCode;
use std::time::Instant;

use braceforge::{Budget, Exec};
use clap::Parser;
use serde_json::json;

use args::Cli;
use commands::{Context, Failure, Outcome, Status};

const EXIT_USAGE: u8 = 2;
const EXIT_CHECK: u8 = 3;
const EXIT_BUDGET: u8 = 4;

fn configure_threads(threads: Option<usize>) -> Result<Exec, String> {
    match threads {
        Some(0) => Err("--threads must be at least 1".into()),
        Some(1) => Ok(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
            Ok(Exec::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Exec::Sequential),
        None => Ok(Exec::default()),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = Cli::parse();
    let exec = match configure_threads(cli.threads) {
        Ok(e) => e,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let budget = match cli.time_budget {
        Some(s) if s.is_nan() || s < 0.0 => {
            eprintln!("error: --time-budget must be a nonnegative number of seconds");
            return ExitCode::from(EXIT_USAGE);
        }
        Some(s) => Budget::seconds(s),
        None => Budget::unlimited(),
    };
    let ctx = Context { seed: cli.seed, budget, exec };
    let code = match commands::run(&cli.command, &ctx) {
        Ok(Outcome::Raw(text)) => {
            println!("{text}");
            0
        }
        Ok(Outcome::Report(result, status)) => {
            let envelope = json!({
                "tool": "braceforge",
                "version": env!("CARGO_PKG_VERSION"),
                "command": std::env::args().skip(1).collect::<Vec<_>>(),
                "seed": cli.seed,
                "result": result,
            });
            println!("{}", serde_json::to_string_pretty(&envelope).expect("reports serialize"));
            match status {
                Status::Ok => 0,
                Status::CheckFailed => {
                    eprintln!("error: a check failed");
                    EXIT_CHECK
                }
                Status::BudgetExceeded => {
                    eprintln!("error: time budget exceeded; report is partial");
                    EXIT_BUDGET
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CHECK
        }
    };
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
