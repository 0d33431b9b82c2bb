use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use tabling_cli::{compare, default_n, run, write_report, Format, LoadMode, RunOptions, RunReport};
use tabling_core::stats::DEFAULT_WORD_BYTES;
use tabling_core::{Design, WorkloadSpec};

#[derive(Parser)]
#[command(name = "bench", about = "Measure table space designs on tabled workloads")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Print candidate/baseline ratios for two JSON reports.
    Compare { baseline: PathBuf, candidate: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    /// original, gt-t or gt-st
    #[arg(long)]
    design: Option<Design>,
    /// table1:<kind>, table2:f<a>.g<b>, factfile:<path> or random:<seed>
    #[arg(long)]
    workload: Option<WorkloadSpec>,
    /// Number of terms (defaults depend on the workload family)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// bottomup, compiled or both
    #[arg(long, default_value = "both")]
    load: LoadMode,
    #[arg(long, default_value_t = DEFAULT_WORD_BYTES)]
    word_bytes: usize,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv
    #[arg(long, default_value = "json")]
    format: Format,
    /// Use every pair of argument positions for table1 workloads
    #[arg(long)]
    all_pairs: bool,
    /// Check node counts against the reference model before reporting
    #[arg(long)]
    verify_oracle: bool,
}

fn read_report(path: &PathBuf) -> anyhow::Result<RunReport> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(file).with_context(|| format!("parsing {}", path.display()))
}

fn bench(args: RunArgs) -> anyhow::Result<()> {
    let design = args.design.context("--design is required")?;
    let spec = args.workload.context("--workload is required")?;
    if args.runs == 0 {
        anyhow::bail!("--runs must be at least 1");
    }
    if args.word_bytes == 0 {
        anyhow::bail!("--word-bytes must be at least 1");
    }
    if let Some(w) = spec.warning() {
        eprintln!("warning: {w}");
    }
    let n = args.n.unwrap_or_else(|| default_n(&spec));
    let workload = spec.build(n, args.all_pairs).map_err(anyhow::Error::msg)?;
    let opts = RunOptions {
        design,
        runs: args.runs,
        load: args.load,
        word_bytes: args.word_bytes,
        verify_oracle: args.verify_oracle,
    };
    let mut report = run(&workload, n, opts)?;
    if matches!(spec, WorkloadSpec::FactFile(_)) {
        // report what was actually read
        report.n = workload.answer_count();
    }
    report.workload = spec.to_string();

    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_report(BufWriter::new(file), &[report], args.format)?;
        }
        None => write_report(io::stdout().lock(), &[report], args.format)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Some(Command::Compare { baseline, candidate }) => read_report(&baseline)
            .and_then(|a| read_report(&candidate).map(|b| (a, b)))
            .map(|(a, b)| print!("{}", compare(&a, &b))),
        None => bench(cli.run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
