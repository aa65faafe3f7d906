use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semihier::classify::SplitCase;
use semihier_cli::{commands, render, to_machine, CliError, Report, Settings, SystemSpec};

#[derive(Parser)]
#[command(name = "semihier", version, about = "Exact analysis of color systems and their semigroup hierarchies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// System description (TOML); reads standard input when omitted
    input: Option<PathBuf>,
    /// Emit JSON instead of text tables
    #[arg(long)]
    machine: bool,
    /// Maximum semigroup size before giving up
    #[arg(long)]
    cap: Option<usize>,
    /// Level(s) to analyze; repeat for several
    #[arg(long = "level")]
    levels: Vec<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Induced level matrices of each color
    Hierarchy {
        #[command(flatten)]
        common: Common,
        /// Append the collapsed state
        #[arg(long)]
        augmented: bool,
        /// Cross-check against the permanent formula
        #[arg(long)]
        oracle: bool,
        /// Also print the inclusion operator to the level below
        #[arg(long)]
        inclusion: bool,
    },
    /// Kernel table of idempotents by partition and range
    Kernel {
        #[command(flatten)]
        common: Common,
    },
    /// Limit measure and its partition and range factors
    Limits {
        #[command(flatten)]
        common: Common,
    },
    /// Stationary and splitting fields at each level
    Fields {
        #[command(flatten)]
        common: Common,
    },
    /// Kernel rank read from the stationary distribution
    Rank {
        #[command(flatten)]
        common: Common,
    },
    /// Right group test with recovered partition
    Rightgroup {
        #[command(flatten)]
        common: Common,
    },
    /// Build a rank n-1 system from two permutations and classify it
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    A,
    B,
}

fn read_spec(path: &Option<PathBuf>) -> Result<SystemSpec, CliError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Parse(e.to_string()))?;
            s
        }
    };
    SystemSpec::parse(&text)
}

fn settings(common: &Common) -> Settings {
    Settings { levels: common.levels.clone(), cap: common.cap, ..Settings::default() }
}

fn run(cli: Cli) -> Result<(Report, bool), CliError> {
    let report_for = |common: &Common, f: fn(&SystemSpec, &Settings) -> Result<Report, CliError>| {
        let spec = read_spec(&common.input)?;
        f(&spec, &settings(common)).map(|r| (r, common.machine))
    };
    match cli.command {
        Command::Hierarchy { common, augmented, oracle, inclusion } => {
            let spec = read_spec(&common.input)?;
            let s = Settings { augmented, oracle, inclusion, ..settings(&common) };
            Ok((commands::hierarchy(&spec, &s)?, common.machine))
        }
        Command::Kernel { common } => report_for(&common, commands::kernel),
        Command::Limits { common } => report_for(&common, commands::limits),
        Command::Fields { common } => report_for(&common, commands::fields),
        Command::Rank { common } => report_for(&common, commands::rank),
        Command::Rightgroup { common } => report_for(&common, commands::right_group),
        Command::Construct { common, case } => {
            let spec = read_spec(&common.input)?;
            let case = case.map(|c| match c {
                CaseArg::A => SplitCase::A,
                CaseArg::B => SplitCase::B,
            });
            Ok((commands::construct(&spec, case)?, common.machine))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((report, machine)) => {
            let text = if machine { to_machine(&report) } else { render::render(&report) };
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("semihier: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
