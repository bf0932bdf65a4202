//! Shared fixtures and independent oracles for the integration suites.
#![allow(dead_code)] // each test target uses a different subset

use paramp_core::gaussian::QuadCovariance;
use paramp_core::paramp::{noise_matrices, DerivedParams, ParampParams};
use rand::rngs::StdRng;
use rand::Rng;

/// Parameters of the resonant figure: Gamma = 1, f = 0.4, delta_omega = 0.
pub fn fig1_params() -> ParampParams {
    ParampParams::new(1.0, 0.4, 0.0, 1.0).unwrap()
}

pub fn fig1() -> DerivedParams {
    fig1_params().derive().unwrap()
}

/// Parameters of the off-resonant figure: Gamma = 1, f = 0.3 at f' = 0.2.
pub fn fig2_params() -> ParampParams {
    let delta_omega = (0.3f64 * 0.3 - 0.2 * 0.2).sqrt();
    ParampParams::new(1.0, 0.3, delta_omega, 1.0).unwrap()
}

pub fn fig2() -> DerivedParams {
    fig2_params().derive().unwrap()
}

/// Random in-regime parameter point: below threshold and inside the
/// resonant window by construction.
pub fn random_params(rng: &mut StdRng) -> ParampParams {
    let gamma: f64 = rng.random_range(0.5..2.0);
    let f_prime = 0.5 * gamma * rng.random_range(0.05..0.9);
    let two_phi: f64 = rng.random_range(-1.2..1.2); // |phi| < pi/4
    let f = f_prime / two_phi.cos();
    let delta_omega = f * two_phi.sin();
    let omega_p = rng.random_range(0.5..20.0);
    ParampParams::new(gamma, f, delta_omega, omega_p).unwrap()
}

/// Fourth-order fixed-step integrator for the covariance flow
/// `dC/dt = Lambda C + C Lambda + Gamma N`, independent of the closed form.
/// Step size is `1e-4 / Gamma`.
pub struct CovarianceFlowOracle {
    rates: [f64; 3],
    source: [f64; 3],
    step: f64,
}

impl CovarianceFlowOracle {
    pub fn new(d: &DerivedParams) -> Self {
        let gamma = d.gamma();
        let nm = noise_matrices(d).n_hat;
        Self {
            rates: [2.0 * d.lambda1, d.lambda1 + d.lambda2, 2.0 * d.lambda2],
            source: [gamma * nm.c11(), gamma * nm.c12(), gamma * nm.c22()],
            step: 1e-4 / gamma,
        }
    }

    fn deriv(&self, c: [f64; 3]) -> [f64; 3] {
        [
            self.rates[0] * c[0] + self.source[0],
            self.rates[1] * c[1] + self.source[1],
            self.rates[2] * c[2] + self.source[2],
        ]
    }

    /// Integrate from `c0` to time `t`, shortening the last step to land
    /// exactly on `t`.
    pub fn evolve(&self, c0: &QuadCovariance, t: f64) -> QuadCovariance {
        let mut c = [c0.c11(), c0.c12(), c0.c22()];
        let mut remaining = t;
        while remaining > 0.0 {
            let h = self.step.min(remaining);
            let k1 = self.deriv(c);
            let k2 = self.deriv(add(c, scale(k1, 0.5 * h)));
            let k3 = self.deriv(add(c, scale(k2, 0.5 * h)));
            let k4 = self.deriv(add(c, scale(k3, h)));
            for i in 0..3 {
                c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            remaining -= h;
        }
        QuadCovariance::new(c[0], c[1], c[2]).unwrap()
    }
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}
