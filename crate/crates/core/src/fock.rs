//! Few-mode truncated Fock-space demonstration of entanglement transfer
//! through a beamsplitter and of the entanglement-swapping projection.
//!
//! Everything here is exact linear algebra on spaces of dimension at most
//! `(cutoff + 1)^n_modes <= 625`.

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const MAX_MODES: usize = 4;
const MAX_CUTOFF: usize = 4;

/// Amplitudes below this threshold are treated as unoccupied when checking
/// for truncation overflow.
const OCCUPIED_EPS: f64 = 1e-12;

/// Pure state of up to four bosonic modes with per-mode occupation cutoff.
///
/// Basis ordering is lexicographic in the occupation tuple
/// `(n_0, n_1, ..)` with mode 0 most significant:
/// `index = sum_i n_i (cutoff+1)^(n_modes-1-i)`.
#[derive(Debug, Clone)]
pub struct FockState {
    n_modes: usize,
    cutoff: usize,
    amplitudes: Vec<C64>,
}

impl FockState {
    pub fn vacuum(n_modes: usize, cutoff: usize) -> Result<Self> {
        if n_modes == 0 || n_modes > MAX_MODES {
            return Err(Error::InvalidParameter {
                name: "n_modes",
                value: n_modes as f64,
                constraint: "1 <= n_modes <= 4",
            });
        }
        if cutoff == 0 || cutoff > MAX_CUTOFF {
            return Err(Error::InvalidParameter {
                name: "cutoff",
                value: cutoff as f64,
                constraint: "1 <= cutoff <= 4",
            });
        }
        let dim = (cutoff + 1).pow(n_modes as u32);
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[0] = C64::new(1.0, 0.0);
        Ok(Self { n_modes, cutoff, amplitudes })
    }

    /// Wrap raw amplitudes and normalize. Zero vectors are rejected.
    pub fn from_amplitudes(n_modes: usize, cutoff: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let mut state = Self::vacuum(n_modes, cutoff)?;
        if amplitudes.len() != state.dim() {
            return Err(Error::Contract(format!(
                "expected {} amplitudes, got {}",
                state.dim(),
                amplitudes.len()
            )));
        }
        state.amplitudes = amplitudes;
        let norm = state.norm();
        if norm < OCCUPIED_EPS {
            return Err(Error::Contract("cannot normalize a zero state".into()));
        }
        for a in state.amplitudes.iter_mut() {
            *a /= norm;
        }
        Ok(state)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn index_of(&self, occ: &[usize]) -> usize {
        debug_assert_eq!(occ.len(), self.n_modes);
        occ.iter().fold(0, |acc, &n| acc * (self.cutoff + 1) + n)
    }

    pub fn occupations_of(&self, mut index: usize) -> Vec<usize> {
        let base = self.cutoff + 1;
        let mut occ = vec![0; self.n_modes];
        for i in (0..self.n_modes).rev() {
            occ[i] = index % base;
            index /= base;
        }
        occ
    }

    pub fn amplitude(&self, occ: &[usize]) -> C64 {
        self.amplitudes[self.index_of(occ)]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &FockState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn fidelity(&self, other: &FockState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Apply a raising operator `a_mode^dag` (with the usual `sqrt(n+1)`
    /// factors). Errors if weight would leave the truncated space.
    pub fn raised(&self, mode: usize) -> Result<FockState> {
        let mut out = self.clone();
        for a in out.amplitudes.iter_mut() {
            *a = C64::new(0.0, 0.0);
        }
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            if amp.norm() <= OCCUPIED_EPS {
                continue;
            }
            let mut occ = self.occupations_of(idx);
            if occ[mode] + 1 > self.cutoff {
                return Err(Error::TruncationOverflow {
                    needed: occ[mode] + 1,
                    cutoff: self.cutoff,
                });
            }
            occ[mode] += 1;
            let target = self.index_of(&occ);
            out.amplitudes[target] += amp * (occ[mode] as f64).sqrt();
        }
        Ok(out)
    }

    /// Total quanta of the most-occupied basis state carrying amplitude.
    pub fn max_total_occupation(&self) -> usize {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > OCCUPIED_EPS)
            .map(|(idx, _)| self.occupations_of(idx).iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Reduced density matrix over the kept modes (trace out the rest).
    pub fn reduced_density(&self, keep: &[usize]) -> Mat<C64> {
        let base = self.cutoff + 1;
        let drop: Vec<usize> = (0..self.n_modes).filter(|m| !keep.contains(m)).collect();
        let dim_keep = base.pow(keep.len() as u32);
        let dim_drop = base.pow(drop.len() as u32);
        // reshape into (keep, drop) and form A A^dag
        let mut a = Mat::<C64>::zeros(dim_keep, dim_drop);
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let occ = self.occupations_of(idx);
            let row = keep.iter().fold(0, |acc, &m| acc * base + occ[m]);
            let col = drop.iter().fold(0, |acc, &m| acc * base + occ[m]);
            a[(row, col)] = *amp;
        }
        let mut rho = Mat::<C64>::zeros(dim_keep, dim_keep);
        for i in 0..dim_keep {
            for j in 0..dim_keep {
                let mut s = C64::new(0.0, 0.0);
                for c in 0..dim_drop {
                    s += a[(i, c)] * a[(j, c)].conj();
                }
                rho[(i, j)] = s;
            }
        }
        rho
    }

    /// Von Neumann entropy of the reduced state over `keep`, in nats.
    pub fn entanglement_entropy(&self, keep: &[usize]) -> Result<f64> {
        let rho = self.reduced_density(keep);
        let evs = rho
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .map_err(|_| Error::NumericalFailure { size: rho.nrows() })?;
        Ok(evs
            .into_iter()
            .map(|p| if p > 0.0 { -p * p.ln() } else { 0.0 })
            .sum())
    }
}

/// Matrix exponential by scaling and squaring with a Taylor series; exact to
/// machine precision at these dimensions.
fn expm(a: &Mat<C64>) -> Mat<C64> {
    let dim = a.nrows();
    let norm: f64 = (0..dim)
        .map(|i| (0..dim).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings as i32);
    let mut scaled = Mat::<C64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            scaled[(i, j)] = a[(i, j)] * scale;
        }
    }
    let mut result = Mat::<C64>::identity(dim, dim);
    let mut term = Mat::<C64>::identity(dim, dim);
    for order in 1..=24 {
        term = &term * &scaled;
        let inv = 1.0 / order as f64;
        for i in 0..dim {
            for j in 0..dim {
                term[(i, j)] *= inv;
                result[(i, j)] += term[(i, j)];
            }
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Beamsplitter generator `b^dag a - a^dag b` on the two-mode truncated
/// space (anti-Hermitian, so its exponential is unitary).
fn beamsplitter_generator(cutoff: usize) -> Mat<C64> {
    let base = cutoff + 1;
    let dim = base * base;
    let mut g = Mat::<C64>::zeros(dim, dim);
    for na in 0..base {
        for nb in 0..base {
            let idx = na * base + nb;
            // b^dag a: (na, nb) -> (na - 1, nb + 1)
            if na >= 1 && nb < cutoff {
                let tgt = (na - 1) * base + (nb + 1);
                g[(tgt, idx)] += C64::new((na as f64).sqrt() * ((nb + 1) as f64).sqrt(), 0.0);
            }
            // -a^dag b: (na, nb) -> (na + 1, nb - 1)
            if nb >= 1 && na < cutoff {
                let tgt = (na + 1) * base + (nb - 1);
                g[(tgt, idx)] -= C64::new((nb as f64).sqrt() * ((na + 1) as f64).sqrt(), 0.0);
            }
        }
    }
    g
}

/// The beamsplitter unitary `exp[theta (b^dag a - a^dag b)]` on the
/// truncated two-mode space.
pub fn beamsplitter_unitary(cutoff: usize, theta: f64) -> Mat<C64> {
    let mut g = beamsplitter_generator(cutoff);
    let dim = g.nrows();
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] *= theta;
        }
    }
    expm(&g)
}

/// Rotate a two-mode state through the beamsplitter. The generator conserves
/// total quanta, so the rotation is exact whenever every occupied basis state
/// has total occupation within the cutoff; otherwise this errors instead of
/// silently leaking amplitude.
pub fn apply_beamsplitter(state: &FockState, theta: f64) -> Result<FockState> {
    if state.n_modes() != 2 {
        return Err(Error::Contract(format!(
            "beamsplitter acts on 2 modes, state has {}",
            state.n_modes()
        )));
    }
    let total = state.max_total_occupation();
    if total > state.cutoff() {
        return Err(Error::TruncationOverflow { needed: total, cutoff: state.cutoff() });
    }
    let u = beamsplitter_unitary(state.cutoff(), theta);
    let dim = state.dim();
    let mut out = state.clone();
    for i in 0..dim {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..dim {
            s += u[(i, j)] * state.amplitudes[j];
        }
        out.amplitudes[i] = s;
    }
    Ok(out)
}

/// Result of routing `[c1 + c2 (a^dag)^2]|0>` through the 50/50-swap
/// beamsplitter.
#[derive(Debug, Clone)]
pub struct BeamsplitterTransfer {
    /// Off-diagonal coherence `<b^2>` of the outgoing mode.
    pub b_squared_coherence: C64,
    /// Entanglement entropy left between mode a and mode b, in nats.
    pub residual_entanglement: f64,
}

/// Build `[c1 + c2 (a^dag)^2]|0>` on modes `(a, b)`, apply the angle-`pi/2`
/// beamsplitter (which maps `a^dag -> b^dag` exactly), and report the
/// outgoing `<b^2>` coherence and the leftover a:b entanglement.
///
/// The phase of `<b^2>` depends on the sign convention of the rotation; its
/// magnitude does not.
pub fn beamsplitter_transfer(c1: C64, c2: C64) -> Result<BeamsplitterTransfer> {
    if c1.norm() <= OCCUPIED_EPS && c2.norm() <= OCCUPIED_EPS {
        return Err(Error::Contract("c1 and c2 must not both be zero".into()));
    }
    let cutoff = 4;
    let mut state = FockState::vacuum(2, cutoff)?;
    // (a^dag)^2 |0> = sqrt(2) |2, 0>
    let two_zero = state.index_of(&[2, 0]);
    state.amplitudes[0] = c1;
    state.amplitudes[two_zero] = c2 * std::f64::consts::SQRT_2;
    let state = FockState::from_amplitudes(2, cutoff, state.amplitudes)?;

    let rotated = apply_beamsplitter(&state, std::f64::consts::FRAC_PI_2)?;

    // <b^2> over the rotated state
    let mut coherence = C64::new(0.0, 0.0);
    for (idx, amp) in rotated.amplitudes.iter().enumerate() {
        let occ = rotated.occupations_of(idx);
        if occ[1] + 2 > cutoff {
            continue;
        }
        let src = rotated.index_of(&[occ[0], occ[1] + 2]);
        let factor = (((occ[1] + 1) * (occ[1] + 2)) as f64).sqrt();
        coherence += amp.conj() * rotated.amplitudes[src] * factor;
    }

    Ok(BeamsplitterTransfer {
        b_squared_coherence: coherence,
        residual_entanglement: rotated.entanglement_entropy(&[0])?,
    })
}

/// Outcome of the entanglement-swapping projection.
#[derive(Debug, Clone)]
pub struct SwapOutcome {
    /// Probability of the projection, exactly 1/4 here.
    pub projection_probability: f64,
    /// Normalized post-measurement state of the `(b1, b2)` pair.
    pub post_state: FockState,
    /// Entanglement entropy between b1 and b2 afterwards, in nats.
    pub b_pair_entanglement: f64,
}

/// Pair state `(1/2)(1 + a1^dag b1^dag)(1 + a2^dag b2^dag)|0>` on modes
/// ordered `(a1, a2, b1, b2)`.
pub fn swap_input_state() -> FockState {
    let mut state = FockState::vacuum(4, 1).expect("4 modes, cutoff 1");
    let half = C64::new(0.5, 0.0);
    let terms: [[usize; 4]; 4] = [
        [0, 0, 0, 0],
        [1, 0, 1, 0],
        [0, 1, 0, 1],
        [1, 1, 1, 1],
    ];
    for a in state.amplitudes.iter_mut() {
        *a = C64::new(0.0, 0.0);
    }
    for occ in terms {
        let idx = state.index_of(&occ);
        state.amplitudes[idx] = half;
    }
    state
}

/// Two-mode Bell-type target `(1/sqrt 2)(1 + c1^dag c2^dag)|0>`.
pub fn pair_projection_state() -> FockState {
    let mut state = FockState::vacuum(2, 1).expect("2 modes, cutoff 1");
    let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for a in state.amplitudes.iter_mut() {
        *a = C64::new(0.0, 0.0);
    }
    let i00 = state.index_of(&[0, 0]);
    let i11 = state.index_of(&[1, 1]);
    state.amplitudes[i00] = w;
    state.amplitudes[i11] = w;
    state
}

/// Project the `(a1, a2)` pair of [`swap_input_state`] onto the Bell-type
/// state; the projection succeeds with probability 1/4 and leaves the
/// `(b1, b2)` pair in the same Bell-type state, carrying `ln 2` of
/// entanglement.
pub fn entanglement_swap() -> SwapOutcome {
    let psi = swap_input_state();
    let phi = pair_projection_state();
    let base = 2; // cutoff 1
    // partial inner product <phi_(a1,a2) | psi>, leaving a (b1, b2) state
    let mut amp_b = vec![C64::new(0.0, 0.0); base * base];
    for (idx, amp) in psi.amplitudes().iter().enumerate() {
        let occ = psi.occupations_of(idx);
        let a_idx = phi.index_of(&[occ[0], occ[1]]);
        let b_idx = occ[2] * base + occ[3];
        amp_b[b_idx] += phi.amplitudes()[a_idx].conj() * amp;
    }
    let probability: f64 = amp_b.iter().map(|a| a.norm_sqr()).sum();
    let post_state =
        FockState::from_amplitudes(2, 1, amp_b).expect("projection amplitude is nonzero");
    let entropy = post_state
        .entanglement_entropy(&[0])
        .expect("4x4 reduced density");
    SwapOutcome {
        projection_probability: probability,
        post_state,
        b_pair_entanglement: entropy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_ordering_roundtrip() {
        let s = FockState::vacuum(3, 2).unwrap();
        for idx in 0..s.dim() {
            assert_eq!(s.index_of(&s.occupations_of(idx)), idx);
        }
        // lexicographic: (0,0,1) is index 1, (1,0,0) is index 9
        assert_eq!(s.index_of(&[0, 0, 1]), 1);
        assert_eq!(s.index_of(&[1, 0, 0]), 9);
    }

    #[test]
    fn unitarity_of_beamsplitter() {
        for cutoff in [2usize, 4] {
            let u = beamsplitter_unitary(cutoff, std::f64::consts::FRAC_PI_2);
            let dim = u.nrows();
            let mut defect: f64 = 0.0;
            for i in 0..dim {
                for j in 0..dim {
                    let mut s = C64::new(0.0, 0.0);
                    for k in 0..dim {
                        s += u[(k, i)].conj() * u[(k, j)];
                    }
                    let expect = if i == j { 1.0 } else { 0.0 };
                    defect = defect.max((s - expect).norm());
                }
            }
            assert!(defect < 1e-12, "defect = {defect}");
        }
    }

    #[test]
    fn beamsplitter_moves_all_quanta() {
        // U at pi/2 empties mode a for any g(a^dag)|0> input
        let cutoff = 4;
        for n in 0..=cutoff {
            let mut s = FockState::vacuum(2, cutoff).unwrap();
            for a in s.amplitudes.iter_mut() {
                *a = C64::new(0.0, 0.0);
            }
            let idx = s.index_of(&[n, 0]);
            s.amplitudes[idx] = C64::new(1.0, 0.0);
            let out = apply_beamsplitter(&s, std::f64::consts::FRAC_PI_2).unwrap();
            let mut mean_na = 0.0;
            for (i, amp) in out.amplitudes().iter().enumerate() {
                mean_na += out.occupations_of(i)[0] as f64 * amp.norm_sqr();
            }
            assert!(mean_na < 1e-24, "n = {n}: <n_a> = {mean_na}");
        }
    }

    #[test]
    fn transfer_vacuum_passthrough() {
        let out = beamsplitter_transfer(C64::new(1.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        assert!(out.b_squared_coherence.norm() < 1e-14);
        assert!(out.residual_entanglement < 1e-12);
    }

    #[test]
    fn transfer_moves_entanglement_out() {
        let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let out = beamsplitter_transfer(w, w).unwrap();
        assert!(out.b_squared_coherence.norm() > 0.1);
        assert!(out.residual_entanglement < 1e-10);
    }

    #[test]
    fn transfer_norm_preserved() {
        let s = FockState::from_amplitudes(
            2,
            3,
            {
                let mut v = vec![C64::new(0.0, 0.0); 16];
                v[0] = C64::new(0.6, 0.0);
                v[4] = C64::new(0.0, 0.8); // |1,0>
                v
            },
        )
        .unwrap();
        let out = apply_beamsplitter(&s, 0.7).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_overflow_detected() {
        let mut s = FockState::vacuum(2, 2).unwrap();
        for a in s.amplitudes.iter_mut() {
            *a = C64::new(0.0, 0.0);
        }
        let idx = s.index_of(&[2, 1]); // total 3 > cutoff 2
        s.amplitudes[idx] = C64::new(1.0, 0.0);
        assert!(matches!(
            apply_beamsplitter(&s, 0.3),
            Err(Error::TruncationOverflow { needed: 3, cutoff: 2 })
        ));
    }

    #[test]
    fn entanglement_bookkeeping_through_transfer() {
        // entropy of the a side before equals entropy of the b side after
        let c1 = C64::new(0.3, 0.1);
        let c2 = C64::new(-0.5, 0.7);
        let cutoff = 4;
        let mut s = FockState::vacuum(2, cutoff).unwrap();
        let i20 = s.index_of(&[2, 0]);
        s.amplitudes[0] = c1;
        s.amplitudes[i20] = c2 * std::f64::consts::SQRT_2;
        let s = FockState::from_amplitudes(2, cutoff, s.amplitudes).unwrap();
        let before_a = s.entanglement_entropy(&[0]).unwrap();
        let after = apply_beamsplitter(&s, std::f64::consts::FRAC_PI_2).unwrap();
        let after_b = after.entanglement_entropy(&[1]).unwrap();
        assert!((before_a - after_b).abs() < 1e-10);
    }

    #[test]
    fn swap_protocol_outcome() {
        let out = entanglement_swap();
        assert!((out.projection_probability - 0.25).abs() < 1e-14);
        assert!((out.b_pair_entanglement - std::f64::consts::LN_2).abs() < 1e-12);
        let target = pair_projection_state();
        assert!((out.post_state.fidelity(&target) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_probability_complement() {
        // P(phi) + P(complement) = 1 on the full state
        let psi = swap_input_state();
        let out = entanglement_swap();
        assert!((psi.norm() - 1.0).abs() < 1e-14);
        let complement = 1.0 - out.projection_probability;
        assert!((complement - 0.75).abs() < 1e-14);
    }

    #[test]
    fn raising_operator_and_overflow() {
        let s = FockState::vacuum(2, 2).unwrap();
        let s1 = s.raised(0).unwrap();
        assert!((s1.amplitude(&[1, 0]).re - 1.0).abs() < 1e-15);
        let s2 = s1.raised(0).unwrap();
        assert!((s2.amplitude(&[2, 0]).re - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(matches!(
            s2.raised(0),
            Err(Error::TruncationOverflow { .. })
        ));
    }
}
