use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use stc_core::bundled;
use stc_core::dsl::{parse_query, parse_scenario, QueryExpression, ScenarioDocument};
use stc_core::report::{evaluate, frames_report, ExplainReport, Style};

/// Space-time counterfactuals over finite scenarios.
#[derive(Parser)]
#[command(name = "stc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print TRUE or FALSE for a query. Exit status 0 for TRUE, 1 for FALSE.
    Eval {
        file: PathBuf,
        /// Query name from the file, or an inline `φ => ψ` expression.
        query: String,
    },
    /// Show the worlds, regions and witnesses behind a verdict.
    Explain {
        file: PathBuf,
        query: String,
        /// Emit the versioned JSON report instead of text.
        #[arg(long)]
        structured: bool,
    },
    /// Evaluate a query in every realizable time ordering (1+1 only).
    Frames { file: PathBuf, query: String },
    /// Write a bundled scenario: epr, vaidman, ghz-fig1, ghz-fig2, divergence.
    Examples {
        name: String,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<ScenarioDocument> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_scenario(&text).map_err(|diags| {
        let lines: Vec<String> = diags
            .iter()
            .map(|d| format!("{}:{d}", path.display()))
            .collect();
        anyhow!(lines.join("\n"))
    })
}

fn resolve_query(doc: &ScenarioDocument, query: &str) -> Result<QueryExpression> {
    if query.contains("=>") {
        return parse_query(query).map_err(|diags| {
            let lines: Vec<String> = diags.iter().map(|d| format!("query:{d}")).collect();
            anyhow!(lines.join("\n"))
        });
    }
    match doc.query(query) {
        Some(q) => Ok(q.clone()),
        None => {
            let known: Vec<&str> = doc.queries.iter().map(|q| q.name.as_str()).collect();
            bail!(
                "no query named `{query}` (file defines: {})",
                known.join(", ")
            )
        }
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let style = Style::from_env();
    match cli.command {
        Command::Eval { file, query } => {
            let doc = load(&file)?;
            let q = resolve_query(&doc, &query)?;
            let v = evaluate(&doc.scenario, &q)?;
            emit(&format!("{}\n", style.verdict(v.truth, v.vacuous)))?;
            Ok(if v.truth {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Explain {
            file,
            query,
            structured,
        } => {
            let doc = load(&file)?;
            let q = resolve_query(&doc, &query)?;
            let r = ExplainReport::build(&doc.scenario, &q)?;
            if structured {
                emit(&format!("{}\n", r.to_json()))?;
            } else {
                emit(&r.to_text(&style))?;
            }
            Ok(if r.truth {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Frames { file, query } => {
            let doc = load(&file)?;
            let q = resolve_query(&doc, &query)?;
            emit(&frames_report(&doc.scenario, &q, &style)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Examples { name, output } => {
            let text = bundled::source(&name).ok_or_else(|| {
                anyhow!(
                    "unknown example `{name}` (available: {})",
                    bundled::NAMES.join(", ")
                )
            })?;
            match output {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => emit(text)?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
