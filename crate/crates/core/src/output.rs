//! Discretization of the output line into Gabor atoms via a windowed cosine
//! transform: the late-time multimode covariance, coherence matrices, and a
//! structured fast path for its symplectic spectrum.

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gaussian::{MultimodeCovariance, QuadCovariance, SymplecticSpectrum, TOL_PHYS};
use crate::paramp::{noise_matrices, DerivedParams};

/// Default ceiling on `k_max`; dense work at dimension `2 (k_max + 1)`
/// beyond this is not desk-scale.
pub const DEFAULT_K_MAX_CAP: usize = 8192;

/// Recommended minimum of `delta_t |lambda1|`; the late-time formulas neglect
/// terms exponentially small in that product.
pub const MIN_WINDOW_RESOLUTION: f64 = 5.0;

/// Which quadrature a kernel or block refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    /// The slowly relaxing, amplified quadrature (exponent `lambda1`).
    Amplified,
    /// The fast, squeezed quadrature (exponent `lambda2`).
    Squeezed,
}

impl Quadrature {
    pub fn lambda(self, d: &DerivedParams) -> f64 {
        match self {
            Quadrature::Amplified => d.lambda1,
            Quadrature::Squeezed => d.lambda2,
        }
    }
}

/// Windowing specification: window width, harmonic cutoff, and the derived
/// cosine frequencies `omega_k = pi k / delta_t` with weights `eta_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeGrid {
    delta_t: f64,
    k_max: usize,
}

impl ModeGrid {
    pub fn new(delta_t: f64, k_max: usize) -> Result<Self> {
        if !delta_t.is_finite() || delta_t <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "delta_t",
                value: delta_t,
                constraint: "delta_t > 0",
            });
        }
        Ok(Self { delta_t, k_max })
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Number of harmonics, `k_max + 1`.
    pub fn n_harmonics(&self) -> usize {
        self.k_max + 1
    }

    pub fn omega(&self, k: usize) -> f64 {
        std::f64::consts::PI * k as f64 / self.delta_t
    }

    pub fn eta(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            std::f64::consts::SQRT_2
        }
    }

    /// Whether the window is wide enough for the late-time formulas,
    /// `delta_t |lambda1| >= 5`.
    pub fn resolves(&self, d: &DerivedParams) -> bool {
        self.delta_t * d.lambda1.abs() >= MIN_WINDOW_RESOLUTION
    }

    pub fn with_k_max(&self, k_max: usize) -> Self {
        Self { delta_t: self.delta_t, k_max }
    }
}

/// Cosine-transform kernel
/// `F_kk'(a) = d_kk' / (l_a^2 + w_k^2)
///  - [k+k' even] |l_a| eta_k eta_k' / (dt (l_a^2 + w_k^2)(l_a^2 + w_k'^2))`.
///
/// The parity selection rule is applied as an exact branch.
pub fn f_kernel(
    k: usize,
    k_prime: usize,
    quad: Quadrature,
    d: &DerivedParams,
    g: &ModeGrid,
) -> f64 {
    let lambda = quad.lambda(d);
    let l2 = lambda * lambda;
    let dk = l2 + g.omega(k).powi(2);
    let mut val = 0.0;
    if k == k_prime {
        val += 1.0 / dk;
    }
    if (k + k_prime).is_multiple_of(2) {
        let dk_prime = l2 + g.omega(k_prime).powi(2);
        val -= lambda.abs() * g.eta(k) * g.eta(k_prime) / (g.delta_t() * dk * dk_prime);
    }
    val
}

/// The pure 2x2 block of the diagonal (bulk) approximation at frequency
/// `omega`; its determinant is identically 1.
pub fn diagonal_block(omega: f64, d: &DerivedParams) -> QuadCovariance {
    let n = d.norm_n;
    let two_gf = 2.0 * d.gamma() * d.f_prime;
    let c11 = n * (1.0 + two_gf / (d.lambda1 * d.lambda1 + omega * omega));
    let c22 = n * (1.0 - two_gf / (d.lambda2 * d.lambda2 + omega * omega));
    QuadCovariance::new(c11, n * d.sin_2phi(), c22)
        .expect("diagonal block is positive definite below threshold")
}

fn guard_k_max(g: &ModeGrid, cap: usize) -> Result<()> {
    if g.k_max() > cap {
        return Err(Error::ResourceGuard { requested: g.k_max(), cap });
    }
    Ok(())
}

/// Late-time covariance of the windowed output quadratures, assembled
/// entrywise from [`f_kernel`] in the interleaved `(Z1_k, Z2_k)` ordering.
pub fn output_covariance(d: &DerivedParams, g: &ModeGrid) -> Result<MultimodeCovariance> {
    output_covariance_with_cap(d, g, DEFAULT_K_MAX_CAP)
}

pub fn output_covariance_with_cap(
    d: &DerivedParams,
    g: &ModeGrid,
    k_max_cap: usize,
) -> Result<MultimodeCovariance> {
    guard_k_max(g, k_max_cap)?;
    let n = g.n_harmonics();
    let nm = noise_matrices(d).n_hat;
    let two_gf = 2.0 * d.gamma() * d.f();
    let mut m = Mat::<f64>::zeros(2 * n, 2 * n);
    for k in 0..n {
        for kp in k..n {
            let f1 = two_gf * f_kernel(k, kp, Quadrature::Amplified, d, g);
            let f2 = -two_gf * f_kernel(k, kp, Quadrature::Squeezed, d, g);
            let (mut c11, mut c22, mut c12) = (f1, f2, 0.0);
            if k == kp {
                c11 += nm.c11();
                c22 += nm.c22();
                c12 = nm.c12();
            }
            m[(2 * k, 2 * kp)] = c11;
            m[(2 * kp, 2 * k)] = c11;
            m[(2 * k + 1, 2 * kp + 1)] = c22;
            m[(2 * kp + 1, 2 * k + 1)] = c22;
            m[(2 * k, 2 * kp + 1)] = c12;
            m[(2 * kp + 1, 2 * k)] = c12;
            m[(2 * k + 1, 2 * kp)] = c12;
            m[(2 * kp, 2 * k + 1)] = c12;
        }
    }
    MultimodeCovariance::from_matrix(m)
}

/// Same covariance assembled from its diagonal-plus-rank-one structure: per
/// parity class and quadrature the window correction is
/// `sigma v v^T` with `v_k = eta_k / (lambda^2 + omega_k^2)`.
pub fn output_covariance_structured(d: &DerivedParams, g: &ModeGrid) -> Result<MultimodeCovariance> {
    let n = g.n_harmonics();
    let nm = noise_matrices(d).n_hat;
    let two_gf = 2.0 * d.gamma() * d.f();
    let (l1, l2) = (d.lambda1, d.lambda2);
    let sigma1 = -two_gf * l1.abs() / g.delta_t();
    let sigma2 = two_gf * l2.abs() / g.delta_t();
    let v1: Vec<f64> = (0..n).map(|k| g.eta(k) / (l1 * l1 + g.omega(k).powi(2))).collect();
    let v2: Vec<f64> = (0..n).map(|k| g.eta(k) / (l2 * l2 + g.omega(k).powi(2))).collect();
    let mut m = Mat::<f64>::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, 2 * k)] = nm.c11() + two_gf / (l1 * l1 + g.omega(k).powi(2));
        m[(2 * k + 1, 2 * k + 1)] = nm.c22() - two_gf / (l2 * l2 + g.omega(k).powi(2));
        m[(2 * k, 2 * k + 1)] = nm.c12();
        m[(2 * k + 1, 2 * k)] = nm.c12();
        for kp in (k..n).step_by(2) {
            let c11 = sigma1 * v1[k] * v1[kp];
            let c22 = sigma2 * v2[k] * v2[kp];
            m[(2 * k, 2 * kp)] += c11;
            m[(2 * k + 1, 2 * kp + 1)] += c22;
            if kp != k {
                m[(2 * kp, 2 * k)] += c11;
                m[(2 * kp + 1, 2 * k + 1)] += c22;
            }
        }
    }
    MultimodeCovariance::from_matrix(m)
}

/// Which second moments a coherence matrix holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceKind {
    /// `<B_k B_k'>`: complex symmetric, the squeezing-type coherences.
    OffDiagonal,
    /// `<B_k^dag B_k'>`: Hermitian with nonnegative diagonal.
    Diagonal,
}

/// Complex `(k_max+1) x (k_max+1)` matrix of output-mode coherences.
/// Entries vanish whenever `k + k'` is odd.
#[derive(Debug, Clone)]
pub struct CoherenceMatrix {
    kind: CoherenceKind,
    entries: Mat<C64>,
}

impl CoherenceMatrix {
    pub fn kind(&self) -> CoherenceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entry(&self, k: usize, k_prime: usize) -> C64 {
        self.entries[(k, k_prime)]
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.entries
    }
}

/// Off-diagonal coherences
/// `<B_k B_k'> = (Gamma f N / 2) [e^{-2i phi} F_kk'(1) + e^{2i phi} F_kk'(2)]`.
pub fn offdiag_coherences(d: &DerivedParams, g: &ModeGrid) -> CoherenceMatrix {
    let n = g.n_harmonics();
    let kappa_half = 0.5 * d.gamma() * d.f() * d.norm_n;
    let e2 = C64::from_polar(1.0, 2.0 * d.phi);
    let mut m = Mat::<C64>::zeros(n, n);
    for k in 0..n {
        for kp in k..n {
            let f1 = f_kernel(k, kp, Quadrature::Amplified, d, g);
            let f2 = f_kernel(k, kp, Quadrature::Squeezed, d, g);
            let v = (e2.conj() * f1 + e2 * f2) * kappa_half;
            m[(k, kp)] = v;
            m[(kp, k)] = v;
        }
    }
    CoherenceMatrix { kind: CoherenceKind::OffDiagonal, entries: m }
}

/// Diagonal coherences `<B_k^dag B_k'> = (Gamma f N / 2) [F_kk'(1) - F_kk'(2)]`.
pub fn diag_coherences(d: &DerivedParams, g: &ModeGrid) -> CoherenceMatrix {
    let n = g.n_harmonics();
    let kappa_half = 0.5 * d.gamma() * d.f() * d.norm_n;
    let mut m = Mat::<C64>::zeros(n, n);
    for k in 0..n {
        for kp in k..n {
            let f1 = f_kernel(k, kp, Quadrature::Amplified, d, g);
            let f2 = f_kernel(k, kp, Quadrature::Squeezed, d, g);
            let v = C64::new(kappa_half * (f1 - f2), 0.0);
            m[(k, kp)] = v;
            m[(kp, k)] = v;
        }
    }
    CoherenceMatrix { kind: CoherenceKind::Diagonal, entries: m }
}

/// Occupation of a single output atom, `<B_k^dag B_k>`, without building the
/// full coherence matrix.
pub fn atom_occupation(k: usize, d: &DerivedParams, g: &ModeGrid) -> f64 {
    let kappa_half = 0.5 * d.gamma() * d.f() * d.norm_n;
    kappa_half
        * (f_kernel(k, k, Quadrature::Amplified, d, g)
            - f_kernel(k, k, Quadrature::Squeezed, d, g))
}

/// Stationary continuum correlator of the output quadratures, split into its
/// smooth part `Gamma L_ab h_ab(t, t')` and the weight of the
/// `delta(t - t')` contact term (the matrix `M`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumCorrelator {
    pub smooth: [[C64; 2]; 2],
    pub delta_weight: [[C64; 2]; 2],
}

/// `h_ab(t, t') = e^{lambda_a (t - t')}` for `t > t'`, `e^{lambda_b (t' - t)}`
/// for `t < t'`; both branches give 1 at equal times.
pub fn h_func(lambda_a: f64, lambda_b: f64, t: f64, t_prime: f64) -> f64 {
    if t >= t_prime {
        (lambda_a * (t - t_prime)).exp()
    } else {
        (lambda_b * (t_prime - t)).exp()
    }
}

/// Late-time correlator of the output quadratures at `(t, t')`, both well
/// inside the stationary regime (`t, t' >> 1/|lambda1|`). The delta-function
/// weight is returned separately; it cannot be sampled pointwise.
pub fn corz_continuum(t: f64, t_prime: f64, d: &DerivedParams) -> ContinuumCorrelator {
    let gamma = d.gamma();
    let nm = noise_matrices(d);
    let lambdas = [d.lambda1, d.lambda2];
    let mut smooth = [[C64::new(0.0, 0.0); 2]; 2];
    for (a, row) in smooth.iter_mut().enumerate() {
        // L is diagonal, so only the diagonal smooth entries survive.
        row[a] = C64::new(
            gamma * nm.l_hat[a] * h_func(lambdas[a], lambdas[a], t, t_prime),
            0.0,
        );
    }
    ContinuumCorrelator { smooth, delta_weight: nm.m_hat }
}

/// Stationary number density on the output line,
/// `<b_out^dag b_out> = (kappa/4)(1/|lambda1| - 1/|lambda2|)`, which equals
/// the number flux.
pub fn continuum_occupation(d: &DerivedParams) -> f64 {
    let kappa = d.gamma() * d.f() * d.norm_n;
    0.25 * kappa * (1.0 / d.lambda1.abs() - 1.0 / d.lambda2.abs())
}

/// Split harmonic indices into the (even, odd) parity classes that the
/// covariance factorizes over.
pub fn parity_classes(k_max: usize) -> (Vec<usize>, Vec<usize>) {
    let even = (0..=k_max).step_by(2).collect();
    let odd = (1..=k_max).step_by(2).collect();
    (even, odd)
}

/// Apply the per-mode symplectic form to a packed `(Z1, Z2)` vector.
fn apply_j(v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for m in 0..v.len() / 2 {
        out[2 * m] = v[2 * m + 1];
        out[2 * m + 1] = -v[2 * m];
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormalize with two modified Gram-Schmidt passes, dropping vectors
/// whose residual falls below `1e-12` of their original norm.
fn orthonormalize(vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        let orig = dot(&v, &v).sqrt();
        if orig == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-12 * orig {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

/// Nontrivial symplectic eigenvalues of one parity block.
///
/// After a per-mode symplectic congruence by the square roots of the pure
/// diagonal blocks, the block covariance becomes
/// `I + sigma1 a a^T + sigma2 b b^T`; the span of `{a, Ja, b, Jb}` is
/// invariant under `J C`, so at most two eigenvalue pairs differ from the
/// vacuum and everything else is exactly 1.
fn parity_block_gammas(ks: &[usize], d: &DerivedParams, g: &ModeGrid) -> Result<Vec<f64>> {
    let m = ks.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let two_gf = 2.0 * d.gamma() * d.f();
    let (l1, l2) = (d.lambda1, d.lambda2);
    let sigma1 = -two_gf * l1.abs() / g.delta_t();
    let sigma2 = two_gf * l2.abs() / g.delta_t();

    let mut a = vec![0.0; 2 * m];
    let mut b = vec![0.0; 2 * m];
    for (i, &k) in ks.iter().enumerate() {
        let w1 = g.eta(k) / (l1 * l1 + g.omega(k).powi(2));
        let w2 = g.eta(k) / (l2 * l2 + g.omega(k).powi(2));
        let s_inv = diagonal_block(g.omega(k), d).inv_sqrt_matrix();
        a[2 * i] = s_inv[0][0] * w1;
        a[2 * i + 1] = s_inv[1][0] * w1;
        b[2 * i] = s_inv[0][1] * w2;
        b[2 * i + 1] = s_inv[1][1] * w2;
    }

    let basis = orthonormalize(vec![a.clone(), apply_j(&a), b.clone(), apply_j(&b)]);
    let dim = basis.len();
    debug_assert!(dim.is_multiple_of(2), "J-invariant subspace has even dimension");

    // T = Q^T J (I + sigma1 a a^T + sigma2 b b^T) Q on the small subspace
    let mut t = Mat::<f64>::zeros(dim, dim);
    for (j, q) in basis.iter().enumerate() {
        let mut y = q.clone();
        let ca = sigma1 * dot(&a, q);
        let cb = sigma2 * dot(&b, q);
        for i in 0..y.len() {
            y[i] += ca * a[i] + cb * b[i];
        }
        let z = apply_j(&y);
        for (i, qi) in basis.iter().enumerate() {
            t[(i, j)] = dot(qi, &z);
        }
    }
    let eigs = t
        .eigenvalues()
        .map_err(|_| Error::NumericalFailure { size: dim })?;
    let mut ims: Vec<f64> = eigs.iter().map(|z| z.im.abs()).collect();
    ims.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut gammas: Vec<f64> = ims.into_iter().step_by(2).collect();
    gammas.resize(m, 1.0);
    Ok(gammas)
}

/// Symplectic spectrum of the output covariance through the parity-block,
/// diagonal-plus-rank-one structure. Costs `O(k_max)` instead of a dense
/// eigendecomposition; modes outside the two small invariant subspaces are
/// vacuum eigenvalues, returned as exactly 1.
pub fn output_spectrum_fast(d: &DerivedParams, g: &ModeGrid) -> Result<SymplecticSpectrum> {
    output_spectrum_fast_with_tol(d, g, TOL_PHYS)
}

pub fn output_spectrum_fast_with_tol(
    d: &DerivedParams,
    g: &ModeGrid,
    tol_phys: f64,
) -> Result<SymplecticSpectrum> {
    let (even, odd) = parity_classes(g.k_max());
    let mut gammas = parity_block_gammas(&even, d, g)?;
    gammas.extend(parity_block_gammas(&odd, d, g)?);
    Ok(SymplecticSpectrum::from_raw(gammas, tol_phys))
}
