use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use haarlab_core::bounds::to_log2;
use haarlab_harness::run::{write_outputs, write_records};
use haarlab_harness::summary::write_csv;
use haarlab_harness::{render_table, report_files, run, ExperimentConfig, ExperimentKind, HarnessError, Overrides};

#[derive(Parser)]
#[command(name = "haarlab", version, about = "Entanglement experiments on Haar random and stabilizer states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deviation of a small marginal from maximally mixed.
    Page(Overrides),
    /// Entropies, mutual information, negativity and hashing bound.
    Measures(Overrides),
    /// EPR distillation with local unitaries.
    DistillLu(Overrides),
    /// EPR distillation with local isometries.
    DistillLo(Overrides),
    /// Best logical Pauli fidelity on A for random encodings.
    Logical(Overrides),
    /// EPR and GHZ counts of random stabilizer states.
    Stabilizer(Overrides),
    /// Log-domain probability bounds.
    Bounds(Overrides),
    /// Post-selected logical operator between A and one qubit of C.
    NonunitaryDemo(Overrides),
    /// Summarize record files.
    Report {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Summary CSV destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn bounds_table(values: &std::collections::BTreeMap<String, f64>) -> String {
    let mut text = format!("{:<24} {:>16} {:>16}\n", "term", "ln", "log2");
    for (k, v) in values {
        if k.ends_with("_log2") || k.ends_with("_delta") || k.ends_with("_eps") {
            continue;
        }
        text.push_str(&format!("{k:<24} {v:>16.6e} {:>16.6e}\n", to_log2(*v)));
    }
    text
}

fn experiment(kind: ExperimentKind, flags: &Overrides) -> Result<(), HarnessError> {
    let config = ExperimentConfig::from_flags(kind, flags)?;
    let output = run(&config)?;
    match &config.out {
        Some(path) => write_outputs(&output, path)?,
        None => write_records(&output.records, std::io::stdout().lock())
            .map_err(|e| HarnessError::io("<stdout>", e))?,
    }
    let table = match (kind, output.records.first()) {
        (ExperimentKind::Bounds, Some(r)) => bounds_table(&r.values),
        _ => render_table(&output.summary()),
    };
    eprint!("{table}");
    output.into_result().map(|_| ())
}

fn report(paths: &[PathBuf], out: Option<&PathBuf>) -> Result<(), HarnessError> {
    let rows = report_files(paths)?;
    match out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
            write_csv(&rows, file)?;
            eprint!("{}", render_table(&rows));
        }
        None => {
            write_csv(&rows, std::io::stdout().lock())?;
            std::io::stdout().flush().map_err(|e| HarnessError::io("<stdout>", e))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Page(f) => experiment(ExperimentKind::Page, f),
        Command::Measures(f) => experiment(ExperimentKind::Measures, f),
        Command::DistillLu(f) => experiment(ExperimentKind::DistillLu, f),
        Command::DistillLo(f) => experiment(ExperimentKind::DistillLo, f),
        Command::Logical(f) => experiment(ExperimentKind::Logical, f),
        Command::Stabilizer(f) => experiment(ExperimentKind::Stabilizer, f),
        Command::Bounds(f) => experiment(ExperimentKind::Bounds, f),
        Command::NonunitaryDemo(f) => experiment(ExperimentKind::NonunitaryDemo, f),
        Command::Report { paths, out } => report(paths, out.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
