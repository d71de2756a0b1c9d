use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use leonav::io::{build_report, parse_scenario, render, timestamp_now, Format, KeyPolicy, Report};
use leonav::tradestudy::Scenario;
use leonav::Error;

#[derive(Parser)]
#[command(name = "leonav", version, about = "LEO navigation constellation trade studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-site PDOP for the scenario's constellation
    DopMap(Common),
    /// Percentile PDOP over constellation size and altitude
    DopSweep(Common),
    /// Smallest constellation meeting the PDOP target
    Optimize(Common),
    /// Free-space path loss against altitude
    Pathloss(Common),
    /// Footprint gain of LEO over MEO
    Footprint(Common),
    /// Material penetration and jammer range per margin
    Jammer(Common),
    /// Navigation payload power budget
    Power(Common),
    /// PDOP of the GPS-like reference constellation
    Baseline(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON); defaults apply when omitted
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = ["csv", "json", "svg"])]
    format: String,
    /// Suppress progress and warnings on stderr
    #[arg(long)]
    quiet: bool,
    /// Warn about unknown scenario keys instead of rejecting them
    #[arg(long)]
    lenient: bool,
    /// Worker thread cap; does not change results
    #[arg(long, env = "LEO_NAV_THREADS")]
    threads: Option<usize>,
}

impl Command {
    fn split(&self) -> (Report, &Common) {
        match self {
            Command::DopMap(c) => (Report::DopMap, c),
            Command::DopSweep(c) => (Report::DopSweep, c),
            Command::Optimize(c) => (Report::Optimize, c),
            Command::Pathloss(c) => (Report::Pathloss, c),
            Command::Footprint(c) => (Report::Footprint, c),
            Command::Jammer(c) => (Report::Jammer, c),
            Command::Power(c) => (Report::Power, c),
            Command::Baseline(c) => (Report::Baseline, c),
        }
    }
}

fn load_scenario(opts: &Common) -> Result<Scenario, Error> {
    let Some(path) = &opts.config else {
        return Ok(Scenario::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::scenario_file(path, e))?;
    let policy = if opts.lenient {
        KeyPolicy::Lenient
    } else {
        KeyPolicy::Strict
    };
    let parsed = parse_scenario(&text, policy)?;
    if !opts.quiet {
        for w in &parsed.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(parsed.scenario)
}

fn run(report: Report, opts: &Common) -> Result<(), Error> {
    let format: Format = opts.format.parse()?;
    let scenario = load_scenario(opts)?;
    let threads = opts.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Serialize(e.to_string()))?;
    if !opts.quiet {
        eprintln!("scenario {}", &scenario.hash()[..12]);
    }
    let envelope = pool.install(|| build_report(report, &scenario, &timestamp_now()))?;
    let bytes = render(&envelope, format)?;
    match &opts.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|source| Error::Write {
            path: path.clone(),
            source,
        })?,
        None => std::io::stdout().write_all(&bytes).map_err(|source| Error::Write {
            path: "<stdout>".into(),
            source,
        })?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, opts) = cli.command.split();
    match run(report, opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
