use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rank3_closure::closure::{two_closure, verify_candidate, OracleMode, Resolution};
use rank3_closure::format::{format_group, read_group};
use rank3_closure::perm::{two_orbits, PermutationGroup};
use rank3_closure::{aut, zoo, Error, Limits};

#[derive(Parser)]
#[command(name = "rank3", version, about = "2-closures of rank 3 permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    On,
    Off,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the 2-closure of the group in FILE.
    Closure {
        #[arg(long, value_enum, default_value = "auto")]
        oracle: Oracle,
        /// Largest degree for which `--oracle auto` runs the automorphism search.
        #[arg(long, default_value_t = 256)]
        threshold: usize,
        #[arg(long)]
        json: bool,
        file: PathBuf,
    },
    /// Print the rank and subdegrees.
    Rank { file: PathBuf },
    /// 2-closure by automorphism search alone.
    Oracle { file: PathBuf },
    /// Write a named instance in the group file format.
    Zoo {
        name: String,
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that CANDIDATE contains the group in FILE and preserves its 2-orbits.
    Verify { file: PathBuf, candidate: PathBuf },
}

const PARSE: u8 = 2;
const RANK: u8 = 3;
const UNRESOLVED: u8 = 4;

fn load(path: &Path) -> Result<PermutationGroup, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        ExitCode::FAILURE
    })?;
    read_group(&text).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        match e {
            Error::Parse { .. } | Error::MalformedPermutation(_) => ExitCode::from(PARSE),
            _ => ExitCode::FAILURE,
        }
    })
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::NotRank3 { .. } | Error::Intransitive => ExitCode::from(RANK),
        Error::DegreeCap { .. } => ExitCode::from(UNRESOLVED),
        _ => ExitCode::FAILURE,
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    let limits = Limits::default();
    match cli.command {
        Command::Closure { oracle, threshold, json, file } => {
            let g = load(&file)?;
            let mode = match oracle {
                Oracle::On => OracleMode::On,
                Oracle::Off => OracleMode::Off,
                Oracle::Auto => OracleMode::Auto,
            };
            let report = two_closure(&g, mode, threshold, &limits).map_err(fail)?;
            if json {
                println!("{}", serde_json::to_string(&report).expect("report serialises"));
            } else {
                let subdegrees: Vec<String> = report.subdegrees.iter().map(|s| s.to_string()).collect();
                println!("# degree {}, rank {}, subdegrees {}", report.degree, report.rank, subdegrees.join(" "));
                for (name, b) in &report.branches {
                    let detail = b.order.as_deref().or(b.reason.as_deref()).unwrap_or("");
                    println!("# {name}: {} {detail}", b.status);
                }
                for d in &report.diagnostics {
                    println!("# note: {d}");
                }
                match (&report.chosen, &report.group) {
                    (Some(chosen), Some(h)) => {
                        let oracle = report.oracle_order.as_deref().map(|o| format!(", oracle {o}")).unwrap_or_default();
                        println!("# chosen {chosen}, order {}{oracle}", h.order());
                        print!("{}", format_group(h.degree(), h.generators()));
                    }
                    _ => println!("# unresolved"),
                }
            }
            Ok(match report.resolution {
                Resolution::Resolved => ExitCode::SUCCESS,
                Resolution::Unresolved => ExitCode::from(UNRESOLVED),
            })
        }
        Command::Rank { file } => {
            let g = load(&file)?;
            let o = two_orbits(&g).map_err(fail)?;
            let subdegrees: Vec<String> = o.subdegrees().iter().map(|s| s.to_string()).collect();
            println!("rank {}", o.rank());
            println!("subdegrees {}", subdegrees.join(" "));
            Ok(if o.rank() == 3 { ExitCode::SUCCESS } else { ExitCode::from(RANK) })
        }
        Command::Oracle { file } => {
            let g = load(&file)?;
            let h = aut::oracle_two_closure(&g, &limits).map_err(fail)?;
            println!("# order {}", h.order());
            print!("{}", format_group(h.degree(), h.generators()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Zoo { name, params, output } => {
            let params: Vec<String> = params.iter().flat_map(|p| p.split(',')).map(str::to_string).collect();
            let inst = zoo::by_name(&name, &params).map_err(fail)?;
            let mut text = format!(
                "# {}({})\n# subdegrees 1 {} {}\n",
                inst.name, inst.parameters, inst.subdegrees.0, inst.subdegrees.1
            );
            if let Some(o) = &inst.closure_order {
                text.push_str(&format!("# closure order {o}\n"));
            }
            text.push_str(&format_group(inst.degree(), inst.group.generators()));
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|e| {
                    eprintln!("{}: {e}", path.display());
                    ExitCode::FAILURE
                })?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, candidate } => {
            let g = load(&file)?;
            let h = load(&candidate)?;
            let ok = verify_candidate(&g, &h).map_err(fail)?;
            println!("{ok}");
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|code| code)
}
