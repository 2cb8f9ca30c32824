use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};
use convfix_core::group::all_subgroups;
use convfix_core::measure::{random_contractive, seeded_profile, ProfileKind};
use convfix_core::GroupTable;
use convfix_cli::config::{ScenarioConfig, Suite};
use convfix_cli::explain::{explain, find_case, parse_replay};
use convfix_cli::json;
use convfix_cli::run::{run_suites, write_report, write_summary, Totals};
use serde_json::json;

/// Fixed points and Cesàro limits of convolution operators.
#[derive(Parser)]
#[command(name = "convfix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites selected by a scenario config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// JSON-lines report, one record per case.
        #[arg(long)]
        out: PathBuf,
        /// CSV summary, one row per case.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Worker threads (defaults to the number of cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Re-run one case verbosely.
    Explain {
        /// A report record, case inputs or measure JSON file.
        #[arg(long, conflicts_with_all = ["report", "case_id"])]
        replay: Option<PathBuf>,
        /// A JSON-lines report to look the case up in.
        #[arg(long, requires = "case_id")]
        report: Option<PathBuf>,
        #[arg(long, requires_all = ["report", "suite"])]
        case_id: Option<String>,
        #[arg(long)]
        suite: Option<String>,
        /// Print the recomputed record as one JSON line instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print a seeded random measure as JSON.
    GenMeasure {
        #[arg(long)]
        group: String,
        /// real-signed, complex or character-twisted.
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Describe a group, or dump its Cayley table as JSON.
    Group {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        dump: bool,
    },
}

/// Exit statuses: 0 clean, 1 failed cases, 2 bad input, 3 I/O trouble.
enum Failure {
    Input(anyhow::Error),
    Io(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn io_error<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Io(e.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(io_error)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).with_context(|| format!("cannot create {}", path.display())).map_err(io_error)
}

fn run(config: &Path, out: &Path, summary: Option<&Path>, threads: Option<usize>) -> Result<u8, Failure> {
    let config = ScenarioConfig::parse(&read(config)?)
        .map_err(|e| input(anyhow::Error::new(e).context(format!("invalid config {}", config.display()))))?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build().map_err(io_error)?;
    let records = pool.install(|| run_suites(&config)).map_err(input)?;

    let mut writer = create(out)?;
    write_report(&records, &mut writer).map_err(io_error)?;
    writer.flush().map_err(io_error)?;
    if let Some(path) = summary {
        write_summary(&records, create(path)?).map_err(io_error)?;
    }
    let totals = Totals::of(&records);
    print!("{}", totals.render());
    println!("report: {}", out.display());
    Ok(if totals.failures() == 0 { 0 } else { 1 })
}

fn explain_command(
    replay: Option<&Path>,
    report: Option<&Path>,
    case_id: Option<&str>,
    suite: Option<&str>,
    as_json: bool,
) -> Result<u8, Failure> {
    let inputs = match (replay, report, case_id) {
        (Some(path), _, _) => parse_replay(&read(path)?).map_err(input)?,
        (None, Some(path), Some(id)) => {
            let suite: Suite = serde_json::from_value(json!(suite.unwrap_or_default()))
                .with_context(|| format!("unknown suite `{}`", suite.unwrap_or_default()))
                .map_err(input)?;
            find_case(&read(path)?, suite, id).map_err(input)?
        }
        _ => return Err(input(anyhow::anyhow!("pass --replay FILE or --report FILE --suite NAME --case-id ID"))),
    };
    let (text, record) = explain(&inputs).map_err(input)?;
    if as_json {
        println!("{}", json::to_line(&record).map_err(io_error)?);
    } else {
        print!("{text}");
    }
    Ok(0)
}

fn gen_measure(group: &str, profile: &str, seed: u64) -> Result<u8, Failure> {
    let g = Arc::new(GroupTable::parse(group).map_err(input)?);
    let kind: ProfileKind = profile.parse().map_err(input)?;
    let w = random_contractive(&g, seed, &seeded_profile(&g, kind, seed));
    println!("{}", json::to_line(&w.to_json()).map_err(io_error)?);
    Ok(0)
}

fn group_command(spec: &str, dump: bool) -> Result<u8, Failure> {
    let g = Arc::new(GroupTable::parse(spec).map_err(input)?);
    if dump {
        let n = g.order();
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| g.mul(a, b)).collect()).collect();
        let doc = json!({
            "name": g.name(),
            "order": n,
            "identity": g.identity(),
            "abelian": g.is_abelian(),
            "labels": g.labels(),
            "table": table,
        });
        println!("{}", json::to_pretty(&doc).map_err(io_error)?);
    } else {
        let subgroups = all_subgroups(&g);
        println!("{}: order {}, {}abelian, {} subgroups", g.name(), g.order(), if g.is_abelian() { "" } else { "non-" }, subgroups.len());
        for x in g.elements() {
            println!("  {:>3}  {:<10} order {}", x, g.label(x), g.element_order(x));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run { config, out, summary, threads } => run(config, out, summary.as_deref(), *threads),
        Command::Explain { replay, report, case_id, suite, json } => {
            explain_command(replay.as_deref(), report.as_deref(), case_id.as_deref(), suite.as_deref(), *json)
        }
        Command::GenMeasure { group, profile, seed } => gen_measure(group, profile, *seed),
        Command::Group { spec, dump } => group_command(spec, *dump),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            let (Failure::Input(e) | Failure::Io(e)) = &failure;
            let _ = writeln!(io::stderr(), "error: {e:#}");
            ExitCode::from(failure.code())
        }
    }
}
