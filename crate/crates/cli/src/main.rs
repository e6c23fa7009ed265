use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use supergal::emit::{dot_dual_graph, dot_frobenius_orbits, latex_cluster_picture};
use supergal::{assemble_report, AnalysisOptions, CurveInput, Error};

const EXIT_PRECONDITION: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "supergal",
    version,
    about = "Semistable reduction of superelliptic curves over Q_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze the curve y^n = c * prod (x - r) described by a JSON file.
    Analyze {
        input: PathBuf,
        /// Write the cluster picture as LaTeX clusterpicture source.
        #[arg(long, value_name = "OUT.tex")]
        latex: Option<PathBuf>,
        /// Write the dual graph as DOT; Frobenius orbits go to OUT.frobenius.dot.
        #[arg(long, value_name = "OUT.dot")]
        dot: Option<PathBuf>,
        /// Cross-check the cluster tree against the brute-force triple oracle.
        #[arg(long)]
        oracle: bool,
        /// Write the report here instead of stdout.
        #[arg(long, value_name = "OUT.json")]
        json: Option<PathBuf>,
        #[arg(long, value_name = "N", default_value_t = supergal::clusters::DEFAULT_MAX_ROOTS)]
        max_roots: usize,
    },
}

enum Failure {
    Precondition(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Precondition(e.to_string())
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::Precondition(format!("cannot write {}: {e}", path.display())))
}

fn frobenius_dot_path(dot: &Path) -> PathBuf {
    let stem = dot.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
    dot.with_file_name(format!("{stem}.frobenius.dot"))
}

fn analyze(
    input: &Path,
    latex: Option<&Path>,
    dot: Option<&Path>,
    oracle: bool,
    json: Option<&Path>,
    max_roots: usize,
) -> Result<(), Failure> {
    let text = fs::read_to_string(input)
        .map_err(|e| Failure::Precondition(format!("cannot read {}: {e}", input.display())))?;
    let curve: CurveInput = serde_json::from_str(&text)
        .map_err(|e| Failure::Precondition(format!("invalid input JSON: {e}")))?;

    let options = AnalysisOptions {
        max_roots,
        run_oracle: oracle,
        ..AnalysisOptions::default()
    };
    let analysis = assemble_report(&curve, options)?;

    if let Some(path) = latex {
        write_file(path, &latex_cluster_picture(&analysis.picture))?;
    }
    if let Some(path) = dot {
        write_file(path, &dot_dual_graph(&analysis.graph, &analysis.families))?;
        write_file(
            &frobenius_dot_path(path),
            &dot_frobenius_orbits(&analysis.graph, &analysis.families),
        )?;
    }
    let report = serde_json::to_string_pretty(&analysis.to_json())
        .map_err(|e| Failure::Internal(format!("cannot serialize report: {e}")))?;
    match json {
        Some(path) => write_file(path, &report)?,
        None => println!("{report}"),
    }

    if let Some(o) = analysis.oracle.as_ref().filter(|o| !o.passed) {
        return Err(Failure::Internal(format!(
            "triple oracle disagrees with the cluster tree: {}",
            o.first_discrepancy.as_deref().unwrap_or("unknown")
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze {
            input,
            latex,
            dot,
            oracle,
            json,
            max_roots,
        } => analyze(
            input,
            latex.as_deref(),
            dot.as_deref(),
            *oracle,
            json.as_deref(),
            *max_roots,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PRECONDITION)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
