use thiserror::Error;

/// Errors for the whole library. Validation variants name the violated
/// inequality so front ends can report it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {name} = {value} violates {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The relaxation exponents are complex outside this regime.
    #[error("out of resonant regime: |delta_omega| = {delta_omega_abs} >= f = {f}")]
    DetuningOutOfRegime { delta_omega_abs: f64, f: f64 },

    /// At f' >= Gamma/2 the linear model is unstable and nothing here applies.
    #[error("above instability threshold: f' = {f_prime} >= Gamma/2 = {half_gamma}")]
    AboveThreshold { f_prime: f64, half_gamma: f64 },

    /// Closed forms restricted to delta_omega = 0.
    #[error("requires resonant operation: delta_omega = {delta_omega} != 0")]
    NotResonant { delta_omega: f64 },

    /// The entropy transient has no interior maximum for x <= 1.
    #[error("t_max undefined: squeeze parameter x = {x} <= 1")]
    TmaxUndefined { x: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("eigenvalue solver failed to converge on a {size}x{size} matrix")]
    NumericalFailure { size: usize },

    #[error("resource guard: k_max = {requested} exceeds cap {cap}")]
    ResourceGuard { requested: usize, cap: usize },

    #[error("truncation overflow: total occupation {needed} exceeds cutoff {cutoff}")]
    TruncationOverflow { needed: usize, cutoff: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
