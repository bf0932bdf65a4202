//! Scenario configuration: everything a run needs, serializable so that the
//! echo embedded in every output file re-parses to an identical config.

use paramp_core::ParampParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialState {
    Vacuum,
    Squeezed { r: f64 },
}

impl InitialState {
    pub fn r(&self) -> f64 {
        match self {
            InitialState::Vacuum => 0.0,
            InitialState::Squeezed { r } => *r,
        }
    }

    pub fn label(&self) -> String {
        match self {
            InitialState::Vacuum => "vacuum".into(),
            InitialState::Squeezed { r } => format!("r_{}", fmt_label(*r)),
        }
    }
}

fn fmt_label(x: f64) -> String {
    let s = format!("{x}");
    s.replace('-', "m").replace('.', "p")
}

/// Uniform time grid `0, t_max/steps, ..., t_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_max: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let dt = self.t_max / self.steps as f64;
        (0..=self.steps).map(move |i| i as f64 * dt)
    }
}

/// One analysis window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub delta_t: f64,
    pub k_max: usize,
}

/// Harmonic-cutoff doubling schedule for convergence scans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSpec {
    pub start: usize,
    pub cap: usize,
    pub cauchy_tol: f64,
}

impl Default for ScheduleSpec {
    fn default() -> Self {
        Self { start: 64, cap: paramp_core::output::DEFAULT_K_MAX_CAP, cauchy_tol: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Where results go. `path = None` writes to stdout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub format: OutputFormat,
}

/// A fully resolved run. The variant tag names the computation; each output
/// file carries the serialized form back out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "kebab-case")]
pub enum ScenarioConfig {
    /// Entanglement entropy of the paramp over a time grid, one curve per
    /// initial state. CSV.
    ParampEntropy {
        params: ParampParams,
        initials: Vec<InitialState>,
        time: TimeGrid,
        outputs: OutputSpec,
    },
    /// Window entropy of the output line at one grid point. JSON report.
    OutputEntropy {
        params: ParampParams,
        window: WindowSpec,
        outputs: OutputSpec,
    },
    /// Window entropy against the harmonic cutoff, one column per window
    /// width. CSV.
    OutputEntropyCurve {
        params: ParampParams,
        delta_ts: Vec<f64>,
        k_max_list: Vec<usize>,
        outputs: OutputSpec,
    },
    /// Entropy, number, and power flows for one window. JSON report.
    Fluxes {
        params: ParampParams,
        window: WindowSpec,
        outputs: OutputSpec,
    },
    /// The Fock-space entanglement-transfer and swap demonstration. JSON.
    FockDemo { outputs: OutputSpec },
    /// Converged window entropy per window width with the fitted flux
    /// exponent. CSV.
    Sweep {
        params: ParampParams,
        delta_ts: Vec<f64>,
        schedule: ScheduleSpec,
        outputs: OutputSpec,
    },
}

impl ScenarioConfig {
    pub fn outputs(&self) -> &OutputSpec {
        match self {
            ScenarioConfig::ParampEntropy { outputs, .. }
            | ScenarioConfig::OutputEntropy { outputs, .. }
            | ScenarioConfig::OutputEntropyCurve { outputs, .. }
            | ScenarioConfig::Fluxes { outputs, .. }
            | ScenarioConfig::FockDemo { outputs }
            | ScenarioConfig::Sweep { outputs, .. } => outputs,
        }
    }

    pub fn outputs_mut(&mut self) -> &mut OutputSpec {
        match self {
            ScenarioConfig::ParampEntropy { outputs, .. }
            | ScenarioConfig::OutputEntropy { outputs, .. }
            | ScenarioConfig::OutputEntropyCurve { outputs, .. }
            | ScenarioConfig::Fluxes { outputs, .. }
            | ScenarioConfig::FockDemo { outputs }
            | ScenarioConfig::Sweep { outputs, .. } => outputs,
        }
    }
}

/// The two built-in presets reproducing the reference figures.
pub fn preset_fig1() -> ScenarioConfig {
    ScenarioConfig::ParampEntropy {
        params: ParampParams { gamma: 1.0, f: 0.4, delta_omega: 0.0, omega_p: 1.0 },
        initials: vec![
            InitialState::Vacuum,
            InitialState::Squeezed { r: 1.0 },
            InitialState::Squeezed { r: 2.0 },
            InitialState::Squeezed { r: 3.0 },
        ],
        time: TimeGrid { t_max: 10.0, steps: 1000 },
        outputs: OutputSpec { path: None, format: OutputFormat::Csv },
    }
}

pub fn preset_fig2() -> ScenarioConfig {
    // f = 0.3 operated off-resonance at f' = 0.2
    let delta_omega = (0.3f64 * 0.3 - 0.2 * 0.2).sqrt();
    ScenarioConfig::OutputEntropyCurve {
        params: ParampParams { gamma: 1.0, f: 0.3, delta_omega, omega_p: 1.0 },
        delta_ts: vec![20.0, 40.0, 80.0],
        k_max_list: (0..8).map(|i| 64usize << i).collect(),
        outputs: OutputSpec { path: None, format: OutputFormat::Csv },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_through_json() {
        for config in [preset_fig1(), preset_fig2()] {
            let text = serde_json::to_string(&config).unwrap();
            let back: ScenarioConfig = serde_json::from_str(&text).unwrap();
            assert_eq!(config, back);
        }
    }

    #[test]
    fn fig2_kmax_doublings() {
        if let ScenarioConfig::OutputEntropyCurve { k_max_list, .. } = preset_fig2() {
            assert_eq!(k_max_list.first(), Some(&64));
            assert_eq!(k_max_list.last(), Some(&8192));
            for w in k_max_list.windows(2) {
                assert_eq!(w[1], 2 * w[0]);
            }
        } else {
            panic!("fig2 preset changed shape");
        }
    }
}
