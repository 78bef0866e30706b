use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bas_cli::commands::{self, Outcome, EXIT_INVALID};
use clap::{Parser, Subcommand};

/// Bismut–Ambrose–Singer checks for invariant Hermitian structures.
#[derive(Parser)]
#[command(name = "bas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on an algebra document.
    Check {
        file: PathBuf,
        /// Checks that must pass, comma separated.
        #[arg(long, value_delimiter = ',')]
        expect: Vec<String>,
        /// Write the canonical JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Include stage timings in JSON output (breaks byte identity).
        #[arg(long)]
        timings: bool,
    },
    /// Built-in examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Canonical presentation of a BAS structure.
    Present { file: PathBuf },
    /// Canonical reduction of a BAS structure.
    Reduce { file: PathBuf },
    /// Decide whether a nilpotent algebra carries a BAS structure.
    ClassifyNil { file: PathBuf },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Verify {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
        /// Entry parameter, `key=value`.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, String)>,
    },
    Export {
        name: String,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, String)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    s.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())).ok_or_else(|| format!("expected key=value, got {s:?}"))
}

fn read(path: &PathBuf) -> Result<Vec<u8>, Outcome> {
    std::fs::read(path).map_err(|e| Outcome { stderr: format!("cannot read {}: {e}\n", path.display()), code: EXIT_INVALID, ..Default::default() })
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Outcome> {
    std::fs::write(path, contents).map_err(|e| Outcome { stderr: format!("cannot write {}: {e}\n", path.display()), code: EXIT_INVALID, ..Default::default() })
}

fn run(cli: Cli) -> Outcome {
    let go = || -> Result<Outcome, Outcome> {
        Ok(match cli.command {
            Command::Check { file, expect, report, json, timings } => {
                let (out, canonical) = commands::check(&read(&file)?, &expect, json, timings);
                if let (Some(path), Some(text)) = (report, canonical) {
                    write_file(&path, &text)?;
                }
                out
            }
            Command::Catalog { action: CatalogAction::List } => commands::catalog_list(),
            Command::Catalog { action: CatalogAction::Verify { name, all, params } } => {
                if name.is_none() && !all {
                    return Err(Outcome { stderr: "give an entry name or --all\n".into(), code: EXIT_INVALID, ..Default::default() });
                }
                commands::catalog_verify(name.as_deref(), &params.into_iter().collect::<BTreeMap<_, _>>())
            }
            Command::Catalog { action: CatalogAction::Export { name, params, out } } => {
                let o = commands::catalog_export(&name, &params.into_iter().collect());
                match out {
                    Some(path) if o.code == 0 => {
                        write_file(&path, &o.stdout)?;
                        Outcome::default()
                    }
                    _ => o,
                }
            }
            Command::Present { file } => commands::present(&read(&file)?),
            Command::Reduce { file } => commands::reduce(&read(&file)?),
            Command::ClassifyNil { file } => commands::classify_nil(&read(&file)?),
        })
    };
    go().unwrap_or_else(|o| o)
}

fn main() -> ExitCode {
    let out = run(Cli::parse());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
