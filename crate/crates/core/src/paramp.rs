//! Model parameters and covariance dynamics of the driven degenerate paramp
//! coupled to a vacuum Markovian bath, plus the closed-form asymptotics of
//! its entanglement entropy.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{thermal_entropy, QuadCovariance};

/// Raw model parameters. All rates share one inverse-time unit; the pump
/// frequency enters only through powers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParampParams {
    /// Decay rate into the output line, `Gamma > 0`.
    pub gamma: f64,
    /// Drive amplitude, `f > 0`.
    pub f: f64,
    /// Detuning of the signal from half the pump frequency.
    pub delta_omega: f64,
    /// Pump frequency, used only for power bookkeeping.
    pub omega_p: f64,
}

impl ParampParams {
    pub fn new(gamma: f64, f: f64, delta_omega: f64, omega_p: f64) -> Result<Self> {
        for (name, value) in [
            ("gamma", gamma),
            ("f", f),
            ("delta_omega", delta_omega),
            ("omega_p", omega_p),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    constraint: "finite",
                });
            }
        }
        if gamma <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                constraint: "gamma > 0",
            });
        }
        if f <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "f",
                value: f,
                constraint: "f > 0",
            });
        }
        if omega_p <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega_p",
                value: omega_p,
                constraint: "omega_p > 0",
            });
        }
        Ok(Self { gamma, f, delta_omega, omega_p })
    }

    pub fn derive(&self) -> Result<DerivedParams> {
        derive(self)
    }
}

/// Quantities derived from [`ParampParams`]: relaxation exponents, the
/// reduced drive `f'`, the quadrature angle `phi`, and the normalization
/// `N = 1 / cos(2 phi) = f / f'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// Slow relaxation exponent `-Gamma/2 + f'` (negative below threshold).
    pub lambda1: f64,
    /// Fast relaxation exponent `-Gamma/2 - f'`.
    pub lambda2: f64,
    /// `sqrt(f^2 - delta_omega^2)`.
    pub f_prime: f64,
    /// Quadrature rotation angle, `|phi| < pi/4`.
    pub phi: f64,
    /// `1 / cos(2 phi)`.
    pub norm_n: f64,
}

impl DerivedParams {
    /// `Gamma = -(lambda1 + lambda2)`, exact by construction.
    pub fn gamma(&self) -> f64 {
        -(self.lambda1 + self.lambda2)
    }

    /// Drive amplitude `f = N f'`.
    pub fn f(&self) -> f64 {
        self.norm_n * self.f_prime
    }

    /// Detuning recovered from `f sin(2 phi)`.
    pub fn delta_omega(&self) -> f64 {
        self.f() * self.sin_2phi()
    }

    pub fn sin_2phi(&self) -> f64 {
        (2.0 * self.phi).sin()
    }

    pub fn cos_2phi(&self) -> f64 {
        (2.0 * self.phi).cos()
    }
}

/// Derive relaxation exponents and quadrature parameters.
///
/// Errors when `|delta_omega| >= f` (no real exponents) or `f' >= Gamma/2`
/// (above the instability threshold).
pub fn derive(p: &ParampParams) -> Result<DerivedParams> {
    if p.delta_omega.abs() >= p.f {
        return Err(Error::DetuningOutOfRegime {
            delta_omega_abs: p.delta_omega.abs(),
            f: p.f,
        });
    }
    let f_prime = (p.f * p.f - p.delta_omega * p.delta_omega).sqrt();
    if f_prime >= 0.5 * p.gamma {
        return Err(Error::AboveThreshold {
            f_prime,
            half_gamma: 0.5 * p.gamma,
        });
    }
    // atan2 keeps the sign right for delta_omega < 0 within |phi| < pi/4.
    let phi = 0.5 * p.delta_omega.atan2(f_prime);
    Ok(DerivedParams {
        lambda1: -0.5 * p.gamma + f_prime,
        lambda2: -0.5 * p.gamma - f_prime,
        f_prime,
        phi,
        norm_n: p.f / f_prime,
    })
}

/// Weight matrices of the input and output correlators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseMatrices {
    /// Unsymmetrized input correlator weight `M`, complex Hermitian.
    pub m_hat: [[C64; 2]; 2],
    /// Symmetrized weight `N`, the Hermitian part of `M`; doubles as the
    /// vacuum-equivalent covariance in the rotated quadratures.
    pub n_hat: QuadCovariance,
    /// Diagonal output kernel weight `L = diag(-f/lambda1, f/lambda2)`.
    pub l_hat: [f64; 2],
}

pub fn noise_matrices(d: &DerivedParams) -> NoiseMatrices {
    let n = d.norm_n;
    let f = d.f();
    let e2 = C64::from_polar(1.0, 2.0 * d.phi);
    let i = C64::new(0.0, 1.0);
    let m_hat = [
        [C64::new(n, 0.0), i * e2.conj() * n],
        [-i * e2 * n, C64::new(n, 0.0)],
    ];
    let n_hat = QuadCovariance::new(n, n * d.sin_2phi(), n)
        .expect("norm_n > 0 for in-regime parameters");
    NoiseMatrices {
        m_hat,
        n_hat,
        l_hat: [-f / d.lambda1, f / d.lambda2],
    }
}

/// Covariance of a squeezed vacuum with squeezing `r` along the real part of
/// the rotating-frame mode. At `r = 0` this reduces to `N`.
pub fn squeezed_initial_covariance(r: f64, d: &DerivedParams) -> QuadCovariance {
    let n = d.norm_n;
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let (s2, c2) = (d.sin_2phi(), d.cos_2phi());
    QuadCovariance::new(n * (ch + sh * c2), n * ch * s2, n * (ch - sh * c2))
        .expect("cosh dominates sinh, diagonal is positive")
}

/// Exact covariance at time `t >= 0` under the quantum Langevin flow:
/// `C_ab(t) = C_ab(0) e^{(la+lb)t} + Gamma N_ab/(la+lb) [e^{(la+lb)t} - 1]`.
pub fn covariance_at(t: f64, c0: &QuadCovariance, d: &DerivedParams) -> Result<QuadCovariance> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Contract(format!("time must be nonnegative, got {t}")));
    }
    let gamma = d.gamma();
    let nm = noise_matrices(d).n_hat;
    let evolve = |c0: f64, n_ab: f64, rate: f64| -> f64 {
        let e = (rate * t).exp();
        c0 * e + gamma * n_ab / rate * (e - 1.0)
    };
    let c11 = evolve(c0.c11(), nm.c11(), 2.0 * d.lambda1);
    let c12 = evolve(c0.c12(), nm.c12(), d.lambda1 + d.lambda2);
    let c22 = evolve(c0.c22(), nm.c22(), 2.0 * d.lambda2);
    QuadCovariance::new(c11, c12, c22)
}

/// Fixed point of the covariance flow, `C_ab = -Gamma N_ab / (la + lb)`,
/// with `det = 1 + f^2/(lambda1 lambda2)`.
pub fn asymptotic_covariance(d: &DerivedParams) -> QuadCovariance {
    let gamma = d.gamma();
    let nm = noise_matrices(d).n_hat;
    QuadCovariance::new(
        -gamma * nm.c11() / (2.0 * d.lambda1),
        nm.c12(),
        -gamma * nm.c22() / (2.0 * d.lambda2),
    )
    .expect("asymptotic diagonal is positive below threshold")
}

/// Determinant of the asymptotic covariance, `1 + f^2/(lambda1 lambda2)`.
pub fn asymptotic_det(d: &DerivedParams) -> f64 {
    let f = d.f();
    1.0 + f * f / (d.lambda1 * d.lambda2)
}

/// Entanglement entropy of the paramp at time `t`, in nats.
pub fn paramp_entropy(t: f64, c0: &QuadCovariance, d: &DerivedParams) -> Result<f64> {
    Ok(covariance_at(t, c0, d)?.entropy())
}

/// Linear-order determinant at small `t` (valid for `t << 1/Gamma`):
/// `det C(0) (1 - 2 Gamma t) + Gamma N t [C11(0) + C22(0) - 2 C12(0) sin 2phi]`.
///
/// For a squeezed initial state this reduces to `1 + 4 Gamma t sinh^2 r`.
pub fn early_time_det(c0: &QuadCovariance, d: &DerivedParams, t: f64) -> f64 {
    let gamma = d.gamma();
    c0.det() * (1.0 - 2.0 * gamma * t)
        + gamma
            * d.norm_n
            * t
            * (c0.c11() + c0.c22() - 2.0 * c0.c12() * d.sin_2phi())
}

fn require_resonant(d: &DerivedParams) -> Result<()> {
    if d.phi.abs() > 1e-12 {
        return Err(Error::NotResonant { delta_omega: d.delta_omega() });
    }
    Ok(())
}

/// The squeeze parameter `x = 2 |lambda1| e^{2r} / Gamma` that carries all
/// initial-state dependence of the resonant transition.
pub fn resonant_x(r: f64, d: &DerivedParams) -> Result<f64> {
    require_resonant(d)?;
    Ok(2.0 * d.lambda1.abs() * (2.0 * r).exp() / d.gamma())
}

/// Approximate determinant during the resonant early-to-late transition for
/// a squeezed start with `r > 0`:
/// `Gamma^2/(4 l1 l2) [1 - x e^{-2 Gamma t} + (x - 1) e^{2 lambda1 t}]`.
///
/// Not accurate at very small times; callers should restrict to times after
/// the initial free-streaming growth.
pub fn resonant_transition(t: f64, r: f64, d: &DerivedParams) -> Result<f64> {
    let x = resonant_x(r, d)?;
    let gamma = d.gamma();
    let pref = gamma * gamma / (4.0 * d.lambda1 * d.lambda2);
    Ok(pref * (1.0 - x * (-2.0 * gamma * t).exp() + (x - 1.0) * (2.0 * d.lambda1 * t).exp()))
}

/// Time of the entropy maximum during the resonant transition,
/// `t_max = ln[Gamma x / (|lambda1| (x-1))] / (2 |lambda2|)`, defined for x > 1.
pub fn resonant_transition_tmax(r: f64, d: &DerivedParams) -> Result<f64> {
    let x = resonant_x(r, d)?;
    if x <= 1.0 {
        return Err(Error::TmaxUndefined { x });
    }
    let gamma = d.gamma();
    Ok((gamma * x / (d.lambda1.abs() * (x - 1.0))).ln() / (2.0 * d.lambda2.abs()))
}

/// Entropy from a determinant through the ideal-gas formula.
pub fn entropy_from_det(det: f64) -> f64 {
    thermal_entropy(0.5 * (det.max(0.0).sqrt() - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> DerivedParams {
        ParampParams::new(1.0, 0.4, 0.0, 1.0).unwrap().derive().unwrap()
    }

    fn fig2() -> DerivedParams {
        // f = 0.3 operated off-resonance at f' = 0.2.
        let delta_omega = (0.3f64 * 0.3 - 0.2 * 0.2).sqrt();
        ParampParams::new(1.0, 0.3, delta_omega, 1.0).unwrap().derive().unwrap()
    }

    #[test]
    fn derive_on_resonance() {
        let d = fig1();
        assert!((d.lambda1 - (-0.1)).abs() < 1e-15);
        assert!((d.lambda2 - (-0.9)).abs() < 1e-15);
        assert_eq!(d.phi, 0.0);
        assert_eq!(d.norm_n, 1.0);
        assert!((d.f_prime - 0.4).abs() < 1e-15);
    }

    #[test]
    fn derive_off_resonance() {
        let d = fig2();
        assert!((d.f_prime - 0.2).abs() < 1e-12);
        assert!((d.lambda1 - (-0.3)).abs() < 1e-12);
        assert!((d.lambda2 - (-0.7)).abs() < 1e-12);
        assert!((d.norm_n - 1.5).abs() < 1e-12);
        assert!((d.phi - 0.4205343353) .abs() < 1e-9);
        // f' + i delta_omega = f e^{2 i phi}
        let lhs = C64::new(d.f_prime, d.delta_omega());
        let rhs = C64::from_polar(d.f(), 2.0 * d.phi);
        assert!((lhs - rhs).norm() < 1e-12 * d.f());
    }

    #[test]
    fn derive_third_point() {
        let d = ParampParams::new(1.0, 0.5, 0.4, 1.0).unwrap().derive().unwrap();
        assert!((d.f_prime - 0.3).abs() < 1e-12);
        assert!((d.lambda1 - (-0.2)).abs() < 1e-12);
        assert!((d.lambda2 - (-0.8)).abs() < 1e-12);
        assert!((d.norm_n - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn derive_rejects_out_of_regime() {
        let p = ParampParams::new(1.0, 0.3, 0.35, 1.0).unwrap();
        assert!(matches!(p.derive(), Err(Error::DetuningOutOfRegime { .. })));
        let p = ParampParams::new(1.0, 0.6, 0.0, 1.0).unwrap();
        assert!(matches!(p.derive(), Err(Error::AboveThreshold { .. })));
    }

    #[test]
    fn params_reject_nonpositive() {
        assert!(ParampParams::new(0.0, 0.4, 0.0, 1.0).is_err());
        assert!(ParampParams::new(1.0, -0.4, 0.0, 1.0).is_err());
        assert!(ParampParams::new(1.0, 0.4, 0.0, 0.0).is_err());
    }

    #[test]
    fn noise_matrices_on_resonance() {
        let nm = noise_matrices(&fig1());
        assert_eq!(nm.m_hat[0][0], C64::new(1.0, 0.0));
        assert!((nm.m_hat[0][1] - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((nm.m_hat[1][0] - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(nm.n_hat.c12(), 0.0);
        assert!((nm.l_hat[0] - 4.0).abs() < 1e-12);
        assert!((nm.l_hat[1] + 4.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn noise_matrices_off_resonance() {
        let d = fig2();
        let nm = noise_matrices(&d);
        // sin 2phi = delta_omega / f
        let s2 = d.delta_omega() / d.f();
        assert!((s2 - 0.7453560).abs() < 1e-6);
        assert!((nm.n_hat.c11() - 1.5).abs() < 1e-12);
        assert!((nm.n_hat.c12() - 1.5 * s2).abs() < 1e-12);
        // N is the Hermitian part of M
        assert!((nm.m_hat[0][1].re - nm.n_hat.c12()).abs() < 1e-12);
    }

    #[test]
    fn squeezed_covariance_matches_closed_form() {
        let d = fig2();
        let c = squeezed_initial_covariance(0.5, &d);
        let ch = 1.0f64.cosh();
        let sh = 1.0f64.sinh();
        assert!((c.c11() - 1.5 * (ch + sh * (2.0 / 3.0))).abs() < 1e-12);
        assert!((c.c12() - 1.5 * ch * d.sin_2phi()).abs() < 1e-12);
        assert!((c.det() - 1.0).abs() < 1e-12);
        // r = 0 reduces to N
        let c0 = squeezed_initial_covariance(0.0, &d);
        let nm = noise_matrices(&d).n_hat;
        assert!((c0.c11() - nm.c11()).abs() < 1e-15);
        assert!((c0.c12() - nm.c12()).abs() < 1e-15);
        // r = 1 on resonance
        let c1 = squeezed_initial_covariance(1.0, &fig1());
        assert!((c1.c11() - (2.0f64).exp()).abs() < 1e-12);
        assert!((c1.c22() - (-2.0f64).exp()).abs() < 1e-12);
        assert_eq!(c1.c12(), 0.0);
    }

    #[test]
    fn covariance_at_zero_is_identity_map() {
        let d = fig1();
        let c0 = squeezed_initial_covariance(1.3, &d);
        let c = covariance_at(0.0, &c0, &d).unwrap();
        assert_eq!(c.c11(), c0.c11());
        assert_eq!(c.c12(), c0.c12());
        assert_eq!(c.c22(), c0.c22());
    }

    #[test]
    fn covariance_converges_to_fixed_point() {
        for d in [fig1(), fig2()] {
            let c0 = squeezed_initial_covariance(1.0, &d);
            let t = 50.0 / d.lambda1.abs();
            let c = covariance_at(t, &c0, &d).unwrap();
            let cinf = asymptotic_covariance(&d);
            assert!((c.c11() - cinf.c11()).abs() < 1e-10);
            assert!((c.c12() - cinf.c12()).abs() < 1e-10);
            assert!((c.c22() - cinf.c22()).abs() < 1e-10);
        }
    }

    #[test]
    fn negative_time_rejected() {
        let d = fig1();
        assert!(matches!(
            covariance_at(-0.1, &QuadCovariance::identity(), &d),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn asymptotic_determinant_routes_agree() {
        let d = fig1();
        let c = asymptotic_covariance(&d);
        assert!((c.c11() - 5.0).abs() < 1e-12);
        assert!((c.c22() - 0.5 / 0.9).abs() < 1e-12);
        assert!((c.det() - asymptotic_det(&d)).abs() < 1e-12);
        assert!((asymptotic_det(&d) - (1.0 + 0.16 / 0.09)).abs() < 1e-12);
        let d2 = fig2();
        assert!((asymptotic_det(&d2) - (1.0 + 0.09 / 0.21)).abs() < 1e-12);
    }

    #[test]
    fn undriven_limit_is_vacuum() {
        let d = ParampParams::new(1.0, 1e-6, 0.0, 1.0).unwrap().derive().unwrap();
        let c = asymptotic_covariance(&d);
        assert!((c.c11() - 1.0).abs() < 1e-5);
        assert!((c.c22() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn asymptotic_entropy_value() {
        let d = fig1();
        let s = entropy_from_det(asymptotic_det(&d));
        assert!((s - 0.7497802).abs() < 1e-6);
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        // det of the squeezed start is 1 up to cosh/sinh cancellation noise
        for d in [fig1(), fig2()] {
            for r in [0.0, 1.0, 3.0] {
                let c0 = squeezed_initial_covariance(r, &d);
                let s = paramp_entropy(0.0, &c0, &d).unwrap();
                assert!(s < 1e-9, "r = {r}: S(0) = {s}");
            }
        }
    }

    #[test]
    fn early_time_det_squeezed_slope() {
        let d = fig1();
        let c0 = squeezed_initial_covariance(1.0, &d);
        let t = 0.01;
        let expect = 1.0 + 4.0 * t * 1.0f64.sinh().powi(2);
        assert!((early_time_det(&c0, &d, t) - expect).abs() < 1e-12);
    }

    #[test]
    fn early_time_det_vacuum_slope_vanishes() {
        // a vacuum-equivalent start stays pure at linear order for any phi
        for d in [fig1(), fig2()] {
            let nm = noise_matrices(&d).n_hat;
            let det = early_time_det(&nm, &d, 1e-4);
            assert!((det - 1.0).abs() < 1e-12, "det = {det}");
        }
    }

    #[test]
    fn resonant_transition_values() {
        let d = fig1();
        let x = resonant_x(2.0, &d).unwrap();
        assert!((x - 0.2 * (4.0f64).exp()).abs() < 1e-12);
        let tmax = resonant_transition_tmax(2.0, &d).unwrap();
        let expect = (x / (0.1 * (x - 1.0))).ln() / 1.8;
        assert!((tmax - expect).abs() < 1e-12);
        // limit t -> infinity recovers the asymptotic determinant
        let late = resonant_transition(1e4, 2.0, &d).unwrap();
        assert!((late - asymptotic_det(&d)).abs() < 1e-10);
    }

    #[test]
    fn resonant_transition_requires_resonance() {
        let d = fig2();
        assert!(matches!(
            resonant_transition(1.0, 2.0, &d),
            Err(Error::NotResonant { .. })
        ));
    }

    #[test]
    fn tmax_undefined_below_x_one() {
        let d = fig1();
        // r small enough that x = 0.2 e^{2r} <= 1
        assert!(matches!(
            resonant_transition_tmax(0.1, &d),
            Err(Error::TmaxUndefined { .. })
        ));
    }

    #[test]
    fn lambda_product_identity() {
        for d in [fig1(), fig2()] {
            let gamma = d.gamma();
            let f = d.f();
            let dw = d.delta_omega();
            let expect = 0.25 * gamma * gamma - f * f + dw * dw;
            assert!((d.lambda1 * d.lambda2 - expect).abs() < 1e-12);
        }
    }
}
