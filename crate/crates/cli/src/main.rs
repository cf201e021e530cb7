//! `troplane`: analyze 3×3 tropical matrices, draw their triangles and run
//! the seeded property suites.

mod analyze;
mod figure;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use troplane::verify::{self, Hooks};
use troplane::Error;

#[derive(Parser)]
#[command(name = "troplane", version, about = "Tropical linear maps of the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form, triangle, cell census and map class as JSON.
    Analyze(IoArgs),
    /// SVG picture in the chart Z = 0.
    Figure {
        #[command(flatten)]
        io: IoArgs,
        /// "xmin,xmax,ymin,ymax", rationals allowed.
        #[arg(long, allow_hyphen_values = true)]
        viewport: Option<String>,
    },
    /// Run the seeded property suites.
    Verify {
        #[arg(long, env = "TROPLANE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Run a single suite by name.
        #[arg(long)]
        suite: Option<String>,
        /// Write the JSON summary here.
        #[arg(long)]
        out: Option<String>,
        /// Swap two parameters inside make_F, to check that the harness notices.
        #[arg(long, hide = true)]
        corrupt_make_f: bool,
    },
}

#[derive(Args)]
struct IoArgs {
    /// Matrix JSON: a path, "-" for stdin, or inline text.
    #[arg(long)]
    input: String,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<String>,
}

fn fail(e: &Error) -> ExitCode {
    let body = json!({ "error": e.code(), "reason": e.to_string() });
    eprintln!("{body}");
    ExitCode::from(if e.is_input_error() { 2 } else { 3 })
}

fn emit(out: Option<&str>, text: &str) -> ExitCode {
    let res = match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": "io", "reason": e.to_string() }));
            ExitCode::from(2)
        }
    }
}

fn load(io: &IoArgs) -> Result<troplane::TropMatrix3, Error> {
    input::parse_matrix(&input::read_input(&io.input)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(io) => {
            let report = load(&io).and_then(|a| analyze::analyze(&a));
            match report {
                Ok(r) => {
                    let text = serde_json::to_string_pretty(&r).expect("serializable") + "\n";
                    emit(io.out.as_deref(), &text)
                }
                Err(e) => fail(&e),
            }
        }
        Command::Figure { io, viewport } => {
            let vp = match viewport.as_deref().map(input::parse_viewport).transpose() {
                Ok(v) => v,
                Err(e) => return fail(&e),
            };
            match load(&io).and_then(|a| figure::render(&a, vp)) {
                Ok(svg) => emit(io.out.as_deref(), &svg),
                Err(e) => fail(&e),
            }
        }
        Command::Verify {
            seed,
            trials,
            suite,
            out,
            corrupt_make_f,
        } => {
            let hooks = if corrupt_make_f {
                Hooks {
                    make_f: verify::corrupted_make_f,
                }
            } else {
                Hooks::default()
            };
            let outcomes = match suite {
                Some(name) => match verify::find_suite(&name) {
                    Some((i, s)) => vec![verify::run_suite(i, &s, seed, trials, &hooks)],
                    None => {
                        return fail(&Error::Parse {
                            input: name,
                            reason: "unknown suite".to_string(),
                        })
                    }
                },
                None => verify::run_all(seed, trials, &hooks),
            };
            let mut ok = true;
            for o in &outcomes {
                let status = if o.ok() { "ok" } else { "FAIL" };
                println!(
                    "{:<26} {:>6} trials {:>6} passed {:>5} discarded  {status}",
                    o.name, o.trials, o.passed, o.discarded
                );
                if let Some(c) = &o.failure {
                    ok = false;
                    println!("counterexample: {}", serde_json::to_string(c).expect("serializable"));
                }
            }
            let failed = outcomes.iter().filter(|o| !o.ok()).count();
            println!("seed {seed}, {trials} trials per suite: {} of {} suites passed", outcomes.len() - failed, outcomes.len());
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&outcomes).expect("serializable") + "\n";
                if emit(Some(&path), &text) != ExitCode::SUCCESS {
                    return ExitCode::from(2);
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
