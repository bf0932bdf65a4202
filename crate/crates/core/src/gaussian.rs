//! Gaussian-state linear algebra: covariance types, symplectic spectra, and
//! the ideal-gas entropy, in the normalization where the vacuum covariance is
//! the identity and the per-mode commutator is `[Z1, Z2] = 2i`.

use faer::Mat;

use crate::error::{Error, Result};

/// Symplectic eigenvalues of pure states land slightly below 1 in floating
/// point; anything within this distance is clamped to exactly 1.
pub const TOL_PHYS: f64 = 1e-10;

/// Relative symmetry defect above which a matrix is rejected as input.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Ideal-gas entropy of a single thermal mode with occupancy `n`, in nats.
///
/// The `n ln n` term is defined to be 0 at `n = 0` by an explicit branch, so
/// clamped pure modes contribute exactly zero instead of NaN.
pub fn thermal_entropy(n: f64) -> f64 {
    if n <= 0.0 {
        0.0
    } else {
        (n + 1.0) * (n + 1.0).ln() - n * n.ln()
    }
}

/// Real symmetric 2x2 covariance of one mode's quadratures.
///
/// `c21 = c12` is implied; the diagonal must be positive. Vacuum is the
/// identity, so a state is physical iff `det >= 1` up to tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadCovariance {
    c11: f64,
    c12: f64,
    c22: f64,
}

impl QuadCovariance {
    pub fn new(c11: f64, c12: f64, c22: f64) -> Result<Self> {
        for (name, value) in [("c11", c11), ("c12", c12), ("c22", c22)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    constraint: "finite",
                });
            }
        }
        if c11 <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "c11",
                value: c11,
                constraint: "c11 > 0",
            });
        }
        if c22 <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "c22",
                value: c22,
                constraint: "c22 > 0",
            });
        }
        Ok(Self { c11, c12, c22 })
    }

    pub fn identity() -> Self {
        Self { c11: 1.0, c12: 0.0, c22: 1.0 }
    }

    pub fn c11(&self) -> f64 {
        self.c11
    }

    pub fn c12(&self) -> f64 {
        self.c12
    }

    pub fn c22(&self) -> f64 {
        self.c22
    }

    pub fn det(&self) -> f64 {
        self.c11 * self.c22 - self.c12 * self.c12
    }

    pub fn trace(&self) -> f64 {
        self.c11 + self.c22
    }

    /// Closed-form symplectic eigenvalue of a 2x2 covariance: `sqrt(det)`.
    pub fn symplectic_eigenvalue(&self) -> f64 {
        self.det().max(0.0).sqrt()
    }

    /// Thermal occupancy `(gamma - 1) / 2` of the Williamson normal form.
    pub fn thermal_occupancy(&self) -> f64 {
        0.5 * (self.symplectic_eigenvalue() - 1.0)
    }

    /// Single-mode entanglement entropy in nats.
    pub fn entropy(&self) -> f64 {
        thermal_entropy(self.thermal_occupancy())
    }

    /// Uncertainty-principle check: `det >= 1 - tol`.
    pub fn is_physical_with_tol(&self, tol: f64) -> bool {
        self.det() >= 1.0 - tol
    }

    pub fn is_physical(&self) -> bool {
        self.is_physical_with_tol(TOL_PHYS)
    }

    pub fn to_matrix(&self) -> [[f64; 2]; 2] {
        [[self.c11, self.c12], [self.c12, self.c22]]
    }

    /// Principal square root. Positive definite input assumed; for the
    /// covariances handled here `det = 1`, which makes the root symplectic.
    pub fn sqrt_matrix(&self) -> [[f64; 2]; 2] {
        let s = self.det().max(0.0).sqrt();
        let t = (self.trace() + 2.0 * s).sqrt();
        [
            [(self.c11 + s) / t, self.c12 / t],
            [self.c12 / t, (self.c22 + s) / t],
        ]
    }

    /// Inverse of the principal square root.
    pub fn inv_sqrt_matrix(&self) -> [[f64; 2]; 2] {
        let r = self.sqrt_matrix();
        let det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
        [
            [r[1][1] / det, -r[0][1] / det],
            [-r[1][0] / det, r[0][0] / det],
        ]
    }

    /// Embed as a one-mode multimode covariance.
    pub fn to_multimode(&self) -> MultimodeCovariance {
        let mut m = Mat::<f64>::zeros(2, 2);
        m[(0, 0)] = self.c11;
        m[(0, 1)] = self.c12;
        m[(1, 0)] = self.c12;
        m[(1, 1)] = self.c22;
        MultimodeCovariance { n_modes: 1, entries: m }
    }
}

/// Real symmetric 2n x 2n covariance of n modes, quadratures interleaved as
/// `(Z1 of mode 0, Z2 of mode 0, Z1 of mode 1, Z2 of mode 1, ...)`.
///
/// Exact symmetry is enforced on construction, not assumed.
#[derive(Debug, Clone)]
pub struct MultimodeCovariance {
    n_modes: usize,
    entries: Mat<f64>,
}

impl MultimodeCovariance {
    /// Build from a full matrix. Rejects odd dimensions and matrices whose
    /// symmetry defect exceeds [`SYMMETRY_TOL`] relative to the largest
    /// entry, then symmetrizes exactly.
    pub fn from_matrix(m: Mat<f64>) -> Result<Self> {
        let dim = m.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || m.ncols() != dim {
            return Err(Error::Contract(format!(
                "covariance must be square with even dimension, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut scale: f64 = 0.0;
        let mut defect: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                scale = scale.max(m[(i, j)].abs());
                defect = defect.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if defect > SYMMETRY_TOL * scale.max(1.0) {
            return Err(Error::Contract(format!(
                "covariance not symmetric: defect {defect:.3e} exceeds {SYMMETRY_TOL:.0e} relative"
            )));
        }
        let mut sym = Mat::<f64>::zeros(dim, dim);
        for i in 0..dim {
            sym[(i, i)] = m[(i, i)];
            for j in (i + 1)..dim {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                sym[(i, j)] = v;
                sym[(j, i)] = v;
            }
        }
        Ok(Self { n_modes: dim / 2, entries: sym })
    }

    /// Block-diagonal covariance from per-mode 2x2 blocks.
    pub fn from_blocks(blocks: &[QuadCovariance]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Contract("need at least one mode".into()));
        }
        let dim = 2 * blocks.len();
        let mut m = Mat::<f64>::zeros(dim, dim);
        for (i, b) in blocks.iter().enumerate() {
            m[(2 * i, 2 * i)] = b.c11();
            m[(2 * i, 2 * i + 1)] = b.c12();
            m[(2 * i + 1, 2 * i)] = b.c12();
            m[(2 * i + 1, 2 * i + 1)] = b.c22();
        }
        Ok(Self { n_modes: blocks.len(), entries: m })
    }

    pub fn identity(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Contract("need at least one mode".into()));
        }
        Ok(Self {
            n_modes,
            entries: Mat::identity(2 * n_modes, 2 * n_modes),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.entries
    }

    /// Direct sum of two covariances (independent mode sets).
    pub fn direct_sum(&self, other: &MultimodeCovariance) -> MultimodeCovariance {
        let (da, db) = (self.dim(), other.dim());
        let mut m = Mat::<f64>::zeros(da + db, da + db);
        for i in 0..da {
            for j in 0..da {
                m[(i, j)] = self.entries[(i, j)];
            }
        }
        for i in 0..db {
            for j in 0..db {
                m[(da + i, da + j)] = other.entries[(i, j)];
            }
        }
        MultimodeCovariance {
            n_modes: self.n_modes + other.n_modes,
            entries: m,
        }
    }

    /// Reorder modes; `perm[new] = old`. Quadrature pairs move together.
    pub fn permute_modes(&self, perm: &[usize]) -> Result<MultimodeCovariance> {
        if perm.len() != self.n_modes {
            return Err(Error::Contract(format!(
                "permutation length {} != n_modes {}",
                perm.len(),
                self.n_modes
            )));
        }
        let mut seen = vec![false; self.n_modes];
        for &p in perm {
            if p >= self.n_modes || seen[p] {
                return Err(Error::Contract("invalid mode permutation".into()));
            }
            seen[p] = true;
        }
        let dim = self.dim();
        let mut m = Mat::<f64>::zeros(dim, dim);
        for (ni, &oi) in perm.iter().enumerate() {
            for (nj, &oj) in perm.iter().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        m[(2 * ni + a, 2 * nj + b)] = self.entries[(2 * oi + a, 2 * oj + b)];
                    }
                }
            }
        }
        Ok(MultimodeCovariance { n_modes: self.n_modes, entries: m })
    }
}

/// Symplectic eigenvalues (descending) with their thermal occupancies.
#[derive(Debug, Clone)]
pub struct SymplecticSpectrum {
    gammas: Vec<f64>,
    tol_phys: f64,
}

impl SymplecticSpectrum {
    /// Wrap raw eigenvalues: sorts descending and clamps values within
    /// `tol_phys` below 1 to exactly 1.
    pub fn from_raw(mut gammas: Vec<f64>, tol_phys: f64) -> Self {
        for g in gammas.iter_mut() {
            if *g < 1.0 && *g >= 1.0 - tol_phys {
                *g = 1.0;
            }
        }
        gammas.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Self { gammas, tol_phys }
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn occupancies(&self) -> Vec<f64> {
        self.gammas.iter().map(|g| 0.5 * (g - 1.0)).collect()
    }

    pub fn min_gamma(&self) -> f64 {
        *self.gammas.last().expect("spectrum is never empty")
    }

    /// True iff every eigenvalue satisfies the uncertainty bound up to
    /// the clamping tolerance.
    pub fn is_physical(&self) -> bool {
        self.min_gamma() >= 1.0 - self.tol_phys
    }

    /// Ideal-gas entropy: sum of per-mode thermal entropies, in nats.
    pub fn entropy(&self) -> f64 {
        self.gammas
            .iter()
            .map(|g| thermal_entropy(0.5 * (g - 1.0)))
            .sum()
    }
}

/// Multiply by the symplectic form without materializing it: `(J c)` where J
/// is block diagonal in per-mode `[[0, 1], [-1, 0]]` blocks.
fn j_times(c: &Mat<f64>) -> Mat<f64> {
    let dim = c.nrows();
    let mut jc = Mat::<f64>::zeros(dim, dim);
    for m in 0..dim / 2 {
        for j in 0..dim {
            jc[(2 * m, j)] = c[(2 * m + 1, j)];
            jc[(2 * m + 1, j)] = -c[(2 * m, j)];
        }
    }
    jc
}

/// Symplectic spectrum by dense eigendecomposition of the non-symmetric
/// matrix `J C`, pairing the `+-(i gamma)` eigenvalues by sorting absolute
/// imaginary parts and taking every second entry.
pub fn symplectic_spectrum_with_tol(
    c: &MultimodeCovariance,
    tol_phys: f64,
) -> Result<SymplecticSpectrum> {
    let dim = c.dim();
    let jc = j_times(c.matrix());
    let eigs = jc
        .eigenvalues()
        .map_err(|_| Error::NumericalFailure { size: dim })?;
    let mut ims: Vec<f64> = eigs.iter().map(|z| z.im.abs()).collect();
    ims.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let gammas: Vec<f64> = ims.into_iter().step_by(2).collect();
    Ok(SymplecticSpectrum::from_raw(gammas, tol_phys))
}

pub fn symplectic_spectrum(c: &MultimodeCovariance) -> Result<SymplecticSpectrum> {
    symplectic_spectrum_with_tol(c, TOL_PHYS)
}

/// Entropy of a covariance matrix through its symplectic spectrum, in nats.
pub fn entropy_from_spectrum(spectrum: &SymplecticSpectrum) -> f64 {
    spectrum.entropy()
}

/// Uncertainty-principle check: all symplectic eigenvalues `>= 1 - tol`.
pub fn is_physical(c: &MultimodeCovariance) -> Result<bool> {
    Ok(symplectic_spectrum(c)?.is_physical())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_spectrum_is_one() {
        let c = QuadCovariance::identity().to_multimode();
        let s = symplectic_spectrum(&c).unwrap();
        assert_eq!(s.gammas(), &[1.0]);
        assert_eq!(s.entropy(), 0.0);
    }

    #[test]
    fn pure_squeezed_spectrum_is_one() {
        let c = QuadCovariance::new((2.0f64).exp(), 0.0, (-2.0f64).exp())
            .unwrap()
            .to_multimode();
        let s = symplectic_spectrum(&c).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.gammas()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_determinant_block() {
        // k = 0 diagonal block of the output covariance at Gamma = 1,
        // f = f' = 0.4: det = 81 * (1/81) = 1.
        let c = QuadCovariance::new(81.0, 0.0, 1.0 / 81.0).unwrap().to_multimode();
        let s = symplectic_spectrum(&c).unwrap();
        assert!((s.gammas()[0] - 1.0).abs() < 1e-7, "gamma = {}", s.gammas()[0]);
    }

    #[test]
    fn thermal_times_vacuum_product() {
        let thermal = QuadCovariance::new(3.0, 0.0, 3.0).unwrap();
        let c = MultimodeCovariance::from_blocks(&[thermal, QuadCovariance::identity()]).unwrap();
        let s = symplectic_spectrum(&c).unwrap();
        assert!((s.gammas()[0] - 3.0).abs() < 1e-12);
        assert!((s.gammas()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_values() {
        // gamma = 3 is occupancy 1: S = 2 ln 2.
        let s = SymplecticSpectrum::from_raw(vec![3.0], TOL_PHYS);
        assert!((s.entropy() - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);
        let s = SymplecticSpectrum::from_raw(vec![1.0], TOL_PHYS);
        assert_eq!(s.entropy(), 0.0);
        // gamma = 5/3 is occupancy 1/3
        let s = SymplecticSpectrum::from_raw(vec![5.0 / 3.0], TOL_PHYS);
        assert!((s.entropy() - 0.749780).abs() < 1e-6);
    }

    #[test]
    fn unphysical_detected() {
        let c = QuadCovariance::new(0.5, 0.0, 0.5).unwrap().to_multimode();
        assert!(!is_physical(&c).unwrap());
        assert!(is_physical(&QuadCovariance::identity().to_multimode()).unwrap());
    }

    #[test]
    fn asymmetric_input_rejected() {
        let mut m = Mat::<f64>::identity(2, 2);
        m[(0, 1)] = 1e-3;
        assert!(matches!(
            MultimodeCovariance::from_matrix(m),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn near_symmetric_input_symmetrized() {
        let mut m = Mat::<f64>::identity(2, 2);
        m[(0, 1)] = 1e-14;
        let c = MultimodeCovariance::from_matrix(m).unwrap();
        assert_eq!(c.entry(0, 1), c.entry(1, 0));
    }

    #[test]
    fn clamp_below_one() {
        let s = SymplecticSpectrum::from_raw(vec![1.0 - 1e-12], TOL_PHYS);
        assert_eq!(s.gammas()[0], 1.0);
        let s = SymplecticSpectrum::from_raw(vec![1.0 - 1e-8], TOL_PHYS);
        assert!(s.gammas()[0] < 1.0);
        assert!(!s.is_physical());
    }
}
