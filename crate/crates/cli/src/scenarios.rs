//! Scenario execution: validate, compute through the library, and emit
//! deterministic artifacts.

use anyhow::Result;
use num_complex::Complex64 as C64;
use paramp_core::flux::{
    delta_n, drive_power, entropy_flux_scan, flux_limit_exponent, number_flux, output_entropy,
    output_power, KmaxSchedule,
};
use paramp_core::fock::{beamsplitter_transfer, entanglement_swap, pair_projection_state};
use paramp_core::output::ModeGrid;
use paramp_core::paramp::{paramp_entropy, squeezed_initial_covariance, DerivedParams};
use paramp_core::ParampParams;
use rayon::prelude::*;

use crate::config::{ScenarioConfig, ScheduleSpec};
use crate::report::{render_csv, render_json, write_artifact, Cell};

/// Options that apply across scenarios, resolved from flags and environment.
#[derive(Debug, Clone, Copy)]
pub struct GlobalOpts {
    pub k_max_cap: usize,
}

fn derive_checked(params: &ParampParams) -> Result<DerivedParams, paramp_core::Error> {
    ParampParams::new(params.gamma, params.f, params.delta_omega, params.omega_p)?.derive()
}

fn warn_if_unresolved(g: &ModeGrid, d: &DerivedParams) {
    if !g.resolves(d) {
        eprintln!(
            "warning: delta_t |lambda1| = {:.3} is below the recommended 5; \
             late-time formulas neglect terms exponential in that product",
            g.delta_t() * d.lambda1.abs()
        );
    }
}

fn guard_cap(k_max: usize, cap: usize) -> Result<(), paramp_core::Error> {
    if k_max > cap {
        return Err(paramp_core::Error::ResourceGuard { requested: k_max, cap });
    }
    Ok(())
}

pub fn run_scenario(config: &ScenarioConfig, opts: &GlobalOpts) -> Result<()> {
    let text = match config {
        ScenarioConfig::ParampEntropy { params, initials, time, .. } => {
            let d = derive_checked(params)?;
            let mut header = vec!["time_inverse_gamma".to_string()];
            for init in initials {
                header.push(format!("entropy_nats_{}", init.label()));
            }
            let covs: Vec<_> = initials
                .iter()
                .map(|init| squeezed_initial_covariance(init.r(), &d))
                .collect();
            let times: Vec<f64> = time.times().collect();
            let rows: Vec<Vec<Cell>> = times
                .par_iter()
                .map(|&t| {
                    let mut row = vec![Cell::Float(t)];
                    for c0 in &covs {
                        row.push(Cell::Float(
                            paramp_entropy(t, c0, &d).expect("t >= 0 on the grid"),
                        ));
                    }
                    row
                })
                .collect();
            render_csv(&header, &rows, &[], config)?
        }

        ScenarioConfig::OutputEntropy { params, window, .. } => {
            let d = derive_checked(params)?;
            guard_cap(window.k_max, opts.k_max_cap)?;
            let g = ModeGrid::new(window.delta_t, window.k_max)?;
            warn_if_unresolved(&g, &d);
            let entropy = output_entropy(&d, &g)?;
            render_json(&entropy, config)?
        }

        ScenarioConfig::OutputEntropyCurve { params, delta_ts, k_max_list, .. } => {
            let d = derive_checked(params)?;
            for &k in k_max_list {
                guard_cap(k, opts.k_max_cap)?;
            }
            let mut header = vec!["k_max".to_string()];
            for &dt in delta_ts {
                header.push(format!("delta_s_out_nats_dt_{dt}"));
            }
            let rows: Vec<Vec<Cell>> = k_max_list
                .par_iter()
                .map(|&k_max| {
                    let mut row = vec![Cell::Int(k_max as u64)];
                    for &dt in delta_ts {
                        let g = ModeGrid::new(dt, k_max).expect("delta_t > 0 validated");
                        let e = output_entropy(&d, &g).expect("in-regime parameters");
                        row.push(Cell::Float(e.delta_s_out));
                    }
                    row
                })
                .collect();
            render_csv(&header, &rows, &[], config)?
        }

        ScenarioConfig::Fluxes { params, window, .. } => {
            let d = derive_checked(params)?;
            guard_cap(window.k_max, opts.k_max_cap)?;
            let g = ModeGrid::new(window.delta_t, window.k_max)?;
            warn_if_unresolved(&g, &d);
            let report = paramp_core::flux::flux_report(&d, &g, params.omega_p)?;
            render_json(&report, config)?
        }

        ScenarioConfig::FockDemo { .. } => {
            let swap = entanglement_swap();
            let fidelity = swap.post_state.fidelity(&pair_projection_state());
            let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let transfer = beamsplitter_transfer(w, w)?;
            let results = serde_json::json!({
                "projection_probability": swap.projection_probability,
                "b_pair_entanglement_nats": swap.b_pair_entanglement,
                "post_state_fidelity": fidelity,
                "beamsplitter": {
                    "b_squared_coherence_abs": transfer.b_squared_coherence.norm(),
                    "residual_entanglement_nats": transfer.residual_entanglement,
                },
            });
            render_json(&results, config)?
        }

        ScenarioConfig::Sweep { params, delta_ts, schedule, .. } => {
            let d = derive_checked(params)?;
            let ScheduleSpec { start, cap, cauchy_tol } = *schedule;
            guard_cap(start, opts.k_max_cap)?;
            let schedule = KmaxSchedule { start, cap: cap.min(opts.k_max_cap), cauchy_tol };
            // points are independent; compute in parallel, aggregate in order
            let rows_result: Vec<_> = delta_ts
                .par_iter()
                .map(|&dt| entropy_flux_scan(&d, &[dt], &schedule).map(|mut v| v.remove(0)))
                .collect();
            let mut scan = Vec::with_capacity(rows_result.len());
            for row in rows_result {
                scan.push(row?);
            }
            let header: Vec<String> = [
                "delta_t_inverse_gamma",
                "k_max_converged",
                "delta_s_out_nats",
                "entropy_flux_nats_per_time",
                "converged",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let rows: Vec<Vec<Cell>> = scan
                .iter()
                .map(|r| {
                    vec![
                        Cell::Float(r.delta_t),
                        Cell::Int(r.k_max as u64),
                        Cell::Float(r.delta_s_out),
                        Cell::Float(r.flux_estimate),
                        Cell::Bool(r.converged),
                    ]
                })
                .collect();
            let mut comments = Vec::new();
            if let Some(expo) = flux_limit_exponent(&scan) {
                comments.push(format!("fitted_flux_exponent = {expo:.16e}"));
            }
            comments.push(format!(
                "number_flux_quanta_per_time = {:.16e}",
                number_flux(&d)
            ));
            comments.push(format!(
                "windowed_delta_n_largest_window = {:.16e}",
                scan.last()
                    .map(|r| delta_n(&d, &ModeGrid::new(r.delta_t, r.k_max).unwrap()))
                    .unwrap_or(0.0)
            ));
            comments.push(format!(
                "output_power = {:.16e}",
                output_power(&d, params.omega_p)
            ));
            comments.push(format!(
                "drive_power = {:.16e}",
                drive_power(&d, params.omega_p)
            ));
            render_csv(&header, &rows, &comments, config)?
        }
    };
    write_artifact(config.outputs().path.as_deref(), &text)
}
