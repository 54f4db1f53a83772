// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dietbench::{execute, CliError, Command, Overrides, RunConfig};
use dietbench_core::afford::{RankVariable, WeightUnit};

#[derive(Parser)]
#[command(name = "dietbench", version, about = "Least-cost healthy diet costing, affordability and adequacy")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check inputs and write validation_report.json
    Validate(Args),
    /// Cost the healthy diet at every location
    Cohd(Args),
    /// Classify households by affordability
    Afford(Args),
    /// Score nutrient and food-group adequacy
    Adequacy(Args),
    /// All stages plus run_manifest.json
    Run(Args),
}

#[derive(ValueEnum, Clone, Copy)]
enum Rank {
    Percapita,
    Perae,
}

#[derive(ValueEnum, Clone, Copy)]
enum Weight {
    Persons,
    Households,
}

#[derive(clap::Args)]
struct Args {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Leave discretionary foods out of the costed diet
    #[arg(long)]
    no_discretionary: bool,
    /// Fill unsatisfiable groups from the region's pooled prices
    #[arg(long)]
    fallback_region: bool,
    #[arg(long, value_enum)]
    quintile_rank: Option<Rank>,
    #[arg(long, value_enum)]
    quintile_weight: Option<Weight>,
}

impl Args {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            no_discretionary: self.no_discretionary,
            fallback_region: self.fallback_region,
            quintile_rank: self.quintile_rank.map(|r| match r {
                Rank::Percapita => RankVariable::PerCapita,
                Rank::Perae => RankVariable::PerAe,
            }),
            quintile_weight: self.quintile_weight.map(|w| match w {
                Weight::Persons => WeightUnit::Persons,
                Weight::Households => WeightUnit::Households,
            }),
        }
    }
}

/// `DIETBENCH_THREADS`, when set, must be a positive integer.
fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var("DIETBENCH_THREADS") {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("DIETBENCH_THREADS must be a positive integer, got '{v}'"))),
        },
        _ => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (command, args) = match cli.command {
        Cmd::Validate(a) => (Command::Validate, a),
        Cmd::Cohd(a) => (Command::Cohd, a),
        Cmd::Afford(a) => (Command::Afford, a),
        Cmd::Adequacy(a) => (Command::Adequacy, a),
        Cmd::Run(a) => (Command::Run, a),
    };
    let threads = thread_cap()?;
    let config = RunConfig::load(&args.config, &args.overrides())?;
    let outcome = execute(command, &config, threads)?;
    let report = &outcome.report;
    eprintln!(
        "{}: {} warning(s), {} file(s) written to {}",
        command.name(),
        report.warning_count(),
        outcome.written.len() + usize::from(command == Command::Run),
        config.output_dir.display()
    );
    for note in &outcome.notes {
        eprintln!("note: {note}");
    }
    Ok(())
}

fn main() -> ExitCode {
    // usage errors are configuration errors (3), not clap's default 2
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dietbench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
