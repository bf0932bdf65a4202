//! Entropy, particle-number, and energy fluxes of the output line, with the
//! convergence studies in harmonic cutoff and window width.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::Result;
use crate::gaussian::{symplectic_spectrum, thermal_entropy, SymplecticSpectrum};
use crate::output::{
    atom_occupation, diagonal_block, output_covariance_with_cap, output_spectrum_fast, ModeGrid,
    DEFAULT_K_MAX_CAP,
};
use crate::paramp::{asymptotic_covariance, DerivedParams};

/// Eigenvalues within this distance of 1 are judged to be vacuum modes when
/// counting the nontrivial part of the output spectrum.
pub const TOL_TRIV: f64 = 1e-9;

/// Everything the output line carries per window: entropy, quanta, energy.
#[derive(Debug, Clone, Serialize)]
pub struct FluxReport {
    /// Entanglement entropy of one window, nats.
    pub delta_s_out: f64,
    /// Number of symplectic eigenvalues with `gamma - 1 < tol_triv`.
    pub n_trivial_modes: usize,
    /// The eigenvalues exceeding `1 + tol_triv`, descending.
    pub nontrivial_gammas: Vec<f64>,
    /// Quanta per window, summed over atoms.
    pub delta_n_out: f64,
    /// Closed-form number flux, quanta per unit time.
    pub number_flux: f64,
    /// `omega_p / 2` per output quantum.
    pub output_power: f64,
    /// Power drawn from the drive, reconstructed independently.
    pub drive_power: f64,
    /// `delta_s_out / delta_t`, nats per unit time.
    pub entropy_flux_estimate: f64,
}

/// Entropy content of one output window.
#[derive(Debug, Clone, Serialize)]
pub struct OutputEntropy {
    pub delta_s_out: f64,
    pub n_trivial_modes: usize,
    pub nontrivial_gammas: Vec<f64>,
    pub entropy_flux_estimate: f64,
}

fn split_spectrum(spectrum: &SymplecticSpectrum, tol_triv: f64) -> (Vec<f64>, usize) {
    let nontrivial: Vec<f64> = spectrum
        .gammas()
        .iter()
        .copied()
        .filter(|g| *g - 1.0 > tol_triv)
        .collect();
    let trivial = spectrum.len() - nontrivial.len();
    (nontrivial, trivial)
}

fn entropy_from(spectrum: &SymplecticSpectrum, g: &ModeGrid, tol_triv: f64) -> OutputEntropy {
    let (nontrivial_gammas, n_trivial_modes) = split_spectrum(spectrum, tol_triv);
    let delta_s_out = spectrum.entropy();
    OutputEntropy {
        delta_s_out,
        n_trivial_modes,
        nontrivial_gammas,
        entropy_flux_estimate: delta_s_out / g.delta_t(),
    }
}

/// Window entropy via the structured fast spectrum path.
pub fn output_entropy(d: &DerivedParams, g: &ModeGrid) -> Result<OutputEntropy> {
    output_entropy_with_tol(d, g, TOL_TRIV)
}

pub fn output_entropy_with_tol(
    d: &DerivedParams,
    g: &ModeGrid,
    tol_triv: f64,
) -> Result<OutputEntropy> {
    let spectrum = output_spectrum_fast(d, g)?;
    Ok(entropy_from(&spectrum, g, tol_triv))
}

/// Window entropy via dense symplectic diagonalization of the assembled
/// covariance; the oracle for the fast path.
pub fn output_entropy_dense(d: &DerivedParams, g: &ModeGrid) -> Result<OutputEntropy> {
    output_entropy_dense_with_cap(d, g, DEFAULT_K_MAX_CAP, TOL_TRIV)
}

pub fn output_entropy_dense_with_cap(
    d: &DerivedParams,
    g: &ModeGrid,
    k_max_cap: usize,
    tol_triv: f64,
) -> Result<OutputEntropy> {
    let c = output_covariance_with_cap(d, g, k_max_cap)?;
    let spectrum = symplectic_spectrum(&c)?;
    Ok(entropy_from(&spectrum, g, tol_triv))
}

/// Closed-form number flux `Gamma f^2 / (2 lambda1 lambda2)`, quanta per
/// unit time.
pub fn number_flux(d: &DerivedParams) -> f64 {
    let f = d.f();
    d.gamma() * f * f / (2.0 * d.lambda1 * d.lambda2)
}

/// Quanta per window from the windowed sum over atoms,
/// `sum_k <B_k^dag B_k>` up to the grid cutoff.
pub fn delta_n(d: &DerivedParams, g: &ModeGrid) -> f64 {
    (0..g.n_harmonics()).map(|k| atom_occupation(k, d, g)).sum()
}

/// Output power, `omega_p/2` per quantum: `omega_p Gamma f^2 / (4 l1 l2)`.
pub fn output_power(d: &DerivedParams, omega_p: f64) -> f64 {
    0.5 * omega_p * number_flux(d)
}

/// Power supplied by the drive, `(omega_p f / 2) <(a~^dag)^2 + a~^2>`, with
/// the coherence reconstructed from the asymptotic covariance.
pub fn drive_power(d: &DerivedParams, omega_p: f64) -> f64 {
    0.5 * omega_p * d.f() * 2.0 * mean_a_squared(d).re
}

/// Late-time `<a~^2>` from the quadrature covariance:
/// `(N/4) [e^{-2i phi} C11 - e^{2i phi} C22 + 2i C12]`.
pub fn mean_a_squared(d: &DerivedParams) -> C64 {
    let c = asymptotic_covariance(d);
    let e2 = C64::from_polar(1.0, 2.0 * d.phi);
    let i = C64::new(0.0, 1.0);
    (e2.conj() * c.c11() - e2 * c.c22() + i * 2.0 * c.c12()) * (0.25 * d.norm_n)
}

/// The diagonal (bulk) approximation of the window entropy: a sum of pure
/// blocks, hence zero up to floating-point noise.
pub fn naive_blockwise_entropy(d: &DerivedParams, g: &ModeGrid) -> f64 {
    (0..g.n_harmonics())
        .map(|k| {
            let gamma = diagonal_block(g.omega(k), d).symplectic_eigenvalue();
            thermal_entropy(0.5 * (gamma - 1.0))
        })
        .sum()
}

/// How the harmonic cutoff is raised when looking for convergence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KmaxSchedule {
    /// First cutoff tried.
    pub start: usize,
    /// Doubling stops at this cutoff.
    pub cap: usize,
    /// Convergence criterion: `|S(2k) - S(k)| < cauchy_tol`.
    pub cauchy_tol: f64,
}

impl Default for KmaxSchedule {
    fn default() -> Self {
        Self { start: 64, cap: DEFAULT_K_MAX_CAP, cauchy_tol: 1e-3 }
    }
}

/// One row of an entropy-flux scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub delta_t: f64,
    /// Cutoff at which the Cauchy criterion was met (or the cap).
    pub k_max: usize,
    pub delta_s_out: f64,
    pub flux_estimate: f64,
    /// False when the schedule hit the cap without meeting the criterion.
    pub converged: bool,
}

/// Converged window entropy for a single window width: doubles `k_max` from
/// `schedule.start` until the entropy is Cauchy or the cap is reached.
pub fn converged_output_entropy(
    d: &DerivedParams,
    delta_t: f64,
    schedule: &KmaxSchedule,
) -> Result<ScanRow> {
    let mut k_max = schedule.start.max(1);
    let mut prev = output_entropy(d, &ModeGrid::new(delta_t, k_max)?)?.delta_s_out;
    loop {
        let next_k = k_max.saturating_mul(2);
        if next_k > schedule.cap {
            return Ok(ScanRow {
                delta_t,
                k_max,
                delta_s_out: prev,
                flux_estimate: prev / delta_t,
                converged: false,
            });
        }
        let cur = output_entropy(d, &ModeGrid::new(delta_t, next_k)?)?.delta_s_out;
        if (cur - prev).abs() < schedule.cauchy_tol {
            return Ok(ScanRow {
                delta_t,
                k_max: next_k,
                delta_s_out: cur,
                flux_estimate: cur / delta_t,
                converged: true,
            });
        }
        prev = cur;
        k_max = next_k;
    }
}

/// Converged entropy and flux estimate per window width. Rows that exhaust
/// the schedule are flagged, never silently dropped.
pub fn entropy_flux_scan(
    d: &DerivedParams,
    delta_ts: &[f64],
    schedule: &KmaxSchedule,
) -> Result<Vec<ScanRow>> {
    delta_ts
        .iter()
        .map(|&dt| converged_output_entropy(d, dt, schedule))
        .collect()
}

/// Least-squares slope of `ln(flux)` against `ln(delta_t)` over the scan;
/// an exponent near -1 means the window entropy is constant and the flux
/// vanishes in the wide-window limit. Needs at least two converged rows.
pub fn flux_limit_exponent(rows: &[ScanRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.converged && r.flux_estimate > 0.0)
        .map(|r| (r.delta_t.ln(), r.flux_estimate.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Full per-window report: entropy via the fast path, the windowed number
/// sum, and both power routes.
pub fn flux_report(d: &DerivedParams, g: &ModeGrid, omega_p: f64) -> Result<FluxReport> {
    flux_report_with_tol(d, g, omega_p, TOL_TRIV)
}

pub fn flux_report_with_tol(
    d: &DerivedParams,
    g: &ModeGrid,
    omega_p: f64,
    tol_triv: f64,
) -> Result<FluxReport> {
    let entropy = output_entropy_with_tol(d, g, tol_triv)?;
    Ok(FluxReport {
        delta_s_out: entropy.delta_s_out,
        n_trivial_modes: entropy.n_trivial_modes,
        nontrivial_gammas: entropy.nontrivial_gammas,
        delta_n_out: delta_n(d, g),
        number_flux: number_flux(d),
        output_power: output_power(d, omega_p),
        drive_power: drive_power(d, omega_p),
        entropy_flux_estimate: entropy.entropy_flux_estimate,
    })
}
