use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nussbaum_cli::{
    cmd_certify, cmd_compare, cmd_run, cmd_synthesize_params, cmd_validate_params, default_out_dir,
    RunOptions,
};

#[derive(Parser)]
#[command(name = "nussbaum", version, about = "Adaptive consensus under unknown control directions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Overrides {
    /// Override the config's integration step.
    #[arg(long)]
    dt: Option<f64>,
    /// Override the config's final time.
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    /// Spread below which agents count as settled.
    #[arg(long)]
    tol: Option<f64>,
}

impl From<Overrides> for RunOptions {
    fn from(o: Overrides) -> Self {
        RunOptions {
            dt: o.dt,
            t_final: o.t_final,
            tol: o.tol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write trajectory, metrics and manifest.
    Run {
        /// Config file, or a bundled scenario name.
        #[arg(long)]
        config: PathBuf,
        /// Output directory [default: out/<config stem>].
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Simulate two scenarios and compare their peak inputs.
    Compare {
        /// Pass twice: first the candidate, then the baseline.
        #[arg(long = "config", num_args = 1, required = true)]
        configs: Vec<PathBuf>,
        #[arg(long, default_value = "out/compare")]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Check the fastest agent's (a_N, b_N) against the constraints.
    ValidateParams {
        #[arg(long)]
        config: PathBuf,
    },
    /// Choose (a_N, b_N) satisfying the constraints; optionally write the updated config.
    SynthesizeParams {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1.1)]
        margin: f64,
        /// Where to write the config with the synthesized values.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid-certify the interval lemmas and the ratio property for the config's chain.
    Certify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run { config, out, overrides } => {
            let out = out.unwrap_or_else(|| default_out_dir(&config));
            let summary = cmd_run(&config, &out, &overrides.into())?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            if let Some(b) = summary.blowup {
                eprintln!("error: simulation stopped at step {} (t = {}): {}", b.step, b.t, b.reason);
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { configs, out, overrides } => {
            let [a, b] = configs.as_slice() else {
                anyhow::bail!("compare needs exactly two --config values, got {}", configs.len());
            };
            let record = cmd_compare(a, b, &out, &overrides.into())?;
            println!("{}", serde_json::to_string_pretty(&record)?);
            if record.any_blowup() {
                eprintln!("error: at least one run stopped early; see {}", out.display());
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ValidateParams { config } => {
            let report = cmd_validate_params(&config)?;
            println!("{report}");
            Ok(if report.all_satisfied() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::SynthesizeParams { config, margin, out } => {
            let s = cmd_synthesize_params(&config, margin)?;
            println!("a_N = {:?}\nb_N = {:?}\n{}", s.a_n, s.b_n, s.report);
            if let Some(path) = out {
                std::fs::write(&path, s.config.to_json_pretty() + "\n")?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { config, out, grid } => {
            let report = cmd_certify(&config, out.as_deref(), grid)?;
            println!("{}", report.render());
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
