//! `paramp`: covariance dynamics, windowed output entropy, fluxes, and the
//! Fock-space demo, emitted as plot-ready CSV or JSON.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use paramp_cli::config::{
    preset_fig1, preset_fig2, InitialState, OutputFormat, OutputSpec, ScenarioConfig,
    ScheduleSpec, TimeGrid, WindowSpec,
};
use paramp_cli::scenarios::{run_scenario, GlobalOpts};
use paramp_core::output::DEFAULT_K_MAX_CAP;
use paramp_core::ParampParams;

const EXIT_CONFIG: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

/// Environment variable capping the worker pool.
const THREADS_ENV: &str = "PARAMP_MAX_THREADS";

#[derive(Parser)]
#[command(name = "paramp", version, about)]
struct Cli {
    /// Worker threads for sweeps (default: machine parallelism; the
    /// PARAMP_MAX_THREADS environment variable caps it).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Ceiling on the harmonic cutoff accepted by any computation.
    #[arg(long, global = true, default_value_t = DEFAULT_K_MAX_CAP)]
    k_max_cap: usize,

    #[command(subcommand)]
    command: Command,
}

/// Model parameters; all rates are in units of the decay rate by default
/// (gamma = 1), overridable with --gamma.
#[derive(Args, Clone)]
struct ParamArgs {
    /// Decay rate into the output line.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,

    /// Drive amplitude (must satisfy |delta_omega| < f).
    #[arg(long, allow_negative_numbers = true)]
    f: f64,

    /// Detuning from half the pump frequency.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta_omega: f64,

    /// Pump frequency, used only for powers.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega_p: f64,
}

impl ParamArgs {
    fn params(&self) -> ParampParams {
        ParampParams {
            gamma: self.gamma,
            f: self.f,
            delta_omega: self.delta_omega,
            omega_p: self.omega_p,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement entropy of the paramp over time (CSV curves).
    ParampEntropy {
        #[command(flatten)]
        params: ParamArgs,
        /// Squeezing of the initial state; repeat for several curves.
        /// Omitting it gives the vacuum-equivalent start.
        #[arg(long = "r", value_name = "R", allow_negative_numbers = true)]
        r_values: Vec<f64>,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<String>,
    },
    /// Window entropy of the output line at one grid point (JSON report).
    OutputEntropy {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        delta_t: f64,
        #[arg(long)]
        k_max: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Entropy, number, and power flows for one window (JSON report).
    Fluxes {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        delta_t: f64,
        #[arg(long)]
        k_max: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Fock-space entanglement transfer and swap demonstration (JSON).
    FockDemo {
        #[arg(long)]
        out: Option<String>,
    },
    /// Converged window entropy per window width (CSV + fitted exponent).
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// Window widths, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        delta_t: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        k_start: usize,
        #[arg(long, default_value_t = 1e-3)]
        cauchy_tol: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Built-in figure-data presets.
    Preset {
        #[command(subcommand)]
        which: PresetCommand,
    },
    /// Execute a scenario config written by an earlier run (or by hand).
    Run {
        /// Path to a JSON scenario config.
        #[arg(long)]
        config: String,
        /// Override the output path of the loaded config.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum PresetCommand {
    /// Paramp entropy curves: gamma = 1, f = 0.4 at resonance,
    /// r in {0, 1, 2, 3} over t in [0, 10].
    Fig1 {
        #[arg(long)]
        out: Option<String>,
    },
    /// Output window entropy against harmonic cutoff: gamma = 1, f = 0.3
    /// at f' = 0.2, window widths {20, 40, 80}.
    Fig2 {
        #[arg(long)]
        out: Option<String>,
    },
}

fn build_config(command: Command) -> ScenarioConfig {
    match command {
        Command::ParampEntropy { params, r_values, t_max, steps, out } => {
            let initials = if r_values.is_empty() {
                vec![InitialState::Vacuum]
            } else {
                r_values
                    .into_iter()
                    .map(|r| {
                        if r == 0.0 {
                            InitialState::Vacuum
                        } else {
                            InitialState::Squeezed { r }
                        }
                    })
                    .collect()
            };
            ScenarioConfig::ParampEntropy {
                params: params.params(),
                initials,
                time: TimeGrid { t_max, steps },
                outputs: OutputSpec { path: out, format: OutputFormat::Csv },
            }
        }
        Command::OutputEntropy { params, delta_t, k_max, out } => ScenarioConfig::OutputEntropy {
            params: params.params(),
            window: WindowSpec { delta_t, k_max },
            outputs: OutputSpec { path: out, format: OutputFormat::Json },
        },
        Command::Fluxes { params, delta_t, k_max, out } => ScenarioConfig::Fluxes {
            params: params.params(),
            window: WindowSpec { delta_t, k_max },
            outputs: OutputSpec { path: out, format: OutputFormat::Json },
        },
        Command::FockDemo { out } => ScenarioConfig::FockDemo {
            outputs: OutputSpec { path: out, format: OutputFormat::Json },
        },
        Command::Sweep { params, delta_t, k_start, cauchy_tol, out } => ScenarioConfig::Sweep {
            params: params.params(),
            delta_ts: delta_t,
            schedule: ScheduleSpec { start: k_start, cauchy_tol, ..ScheduleSpec::default() },
            outputs: OutputSpec { path: out, format: OutputFormat::Csv },
        },
        Command::Preset { which } => match which {
            PresetCommand::Fig1 { out } => {
                let mut config = preset_fig1();
                config.outputs_mut().path = out;
                config
            }
            PresetCommand::Fig2 { out } => {
                let mut config = preset_fig2();
                config.outputs_mut().path = out;
                config
            }
        },
        Command::Run { .. } => unreachable!("handled before config construction"),
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<paramp_core::Error>() {
        Some(paramp_core::Error::ResourceGuard { .. }) => EXIT_RESOURCE,
        Some(paramp_core::Error::NumericalFailure { .. }) => EXIT_NUMERICAL,
        Some(_) => EXIT_CONFIG,
        None => {
            if err.downcast_ref::<serde_json::Error>().is_some() {
                EXIT_CONFIG
            } else {
                1
            }
        }
    }
}

fn init_thread_pool(flag: Option<usize>) {
    let env_cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    let threads = match (flag, env_cap) {
        (Some(n), Some(cap)) => Some(n.min(cap)),
        (Some(n), None) => Some(n),
        (None, cap) => cap,
    };
    if let Some(n) = threads.filter(|n| *n > 0) {
        // ignore failure if a pool already exists (tests call this twice)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool(cli.threads);
    let opts = GlobalOpts { k_max_cap: cli.k_max_cap };

    let config = match cli.command {
        Command::Run { config, out } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {config}: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            match serde_json::from_str::<ScenarioConfig>(&text) {
                Ok(mut parsed) => {
                    if out.is_some() {
                        parsed.outputs_mut().path = out;
                    }
                    parsed
                }
                Err(e) => {
                    eprintln!("error: invalid scenario config: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            }
        }
        other => build_config(other),
    };

    match run_scenario(&config, &opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
