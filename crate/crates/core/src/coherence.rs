//! Coherence of a state with respect to an orthonormal basis.
//!
//! Three measures are provided: relative entropy of coherence, l1 norm of
//! coherence, and (for qubits) coherence of formation through its closed
//! form in terms of the l1 norm. [`cf_oracle`] is an independent,
//! sampling-based upper bound on the coherence of formation used to check
//! that closed form.

use std::fmt;
use std::str::FromStr;

use crate::harness::sampling::{derived_rng, gaussian_vector, orthonormalize, random_isometry};
use crate::numlin::{
    entropy_term, h2, hermitian_eigen, shannon_entropy, von_neumann_entropy, ComplexMatrix, DensityMatrix, OrthonormalBasis, C64,
    IDENTITY_TOL,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MeasureKind {
    RelativeEntropy,
    Formation,
    L1,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 3] = [MeasureKind::RelativeEntropy, MeasureKind::Formation, MeasureKind::L1];

    /// Short lowercase tag used in CSV columns and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            MeasureKind::RelativeEntropy => "re",
            MeasureKind::Formation => "cf",
            MeasureKind::L1 => "l1",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "re" | "relative-entropy" => Ok(MeasureKind::RelativeEntropy),
            "cf" | "formation" => Ok(MeasureKind::Formation),
            "l1" => Ok(MeasureKind::L1),
            other => Err(Error::InvalidInput(format!("unknown measure '{other}' (expected re, cf or l1)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherenceValue {
    pub kind: MeasureKind,
    pub value: f64,
}

impl CoherenceValue {
    fn new(kind: MeasureKind, value: f64) -> Self {
        // round-off below zero
        let value = if (-IDENTITY_TOL..0.0).contains(&value) { 0.0 } else { value };
        Self { kind, value }
    }
}

/// `sum_i <b_i|rho|b_i> |b_i><b_i|`.
pub fn dephase(rho: &DensityMatrix, basis: &OrthonormalBasis) -> Result<DensityMatrix> {
    let probs = basis.probabilities(rho)?;
    let mut m = ComplexMatrix::zeros(rho.dim());
    for (p, b) in probs.iter().zip(basis.vectors()) {
        m = &m + &b.projector().scale(C64::new(*p, 0.0));
    }
    Ok(DensityMatrix::new_unchecked(m))
}

/// `H(rho_diag) - H(rho)`, in bits.
pub fn coherence_relative_entropy(rho: &DensityMatrix, basis: &OrthonormalBasis) -> Result<CoherenceValue> {
    let probs = basis.probabilities(rho)?;
    Ok(CoherenceValue::new(
        MeasureKind::RelativeEntropy,
        shannon_entropy(&probs) - von_neumann_entropy(rho),
    ))
}

/// Sum of the moduli of the off-diagonal entries of `rho` in `basis`.
pub fn coherence_l1(rho: &DensityMatrix, basis: &OrthonormalBasis) -> Result<CoherenceValue> {
    let m = basis.represent(rho)?;
    let d = m.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += m[(i, j)].norm();
            }
        }
    }
    Ok(CoherenceValue::new(MeasureKind::L1, sum))
}

/// Qubit coherence of formation as a function of the l1 coherence:
/// `h((1 + sqrt(1 - l1^2)) / 2)`.
pub fn formation_from_l1(l1: f64) -> f64 {
    let l1 = l1.clamp(0.0, 1.0);
    h2((1.0 + (1.0 - l1 * l1).max(0.0).sqrt()) / 2.0)
}

/// Coherence of formation of a qubit, via [`formation_from_l1`].
pub fn coherence_formation_qubit(rho: &DensityMatrix, basis: &OrthonormalBasis) -> Result<CoherenceValue> {
    if rho.dim() != 2 {
        return Err(Error::UnsupportedDimension(rho.dim()));
    }
    let l1 = coherence_l1(rho, basis)?.value;
    Ok(CoherenceValue::new(MeasureKind::Formation, formation_from_l1(l1)))
}

pub fn coherence(kind: MeasureKind, rho: &DensityMatrix, basis: &OrthonormalBasis) -> Result<CoherenceValue> {
    match kind {
        MeasureKind::RelativeEntropy => coherence_relative_entropy(rho, basis),
        MeasureKind::Formation => coherence_formation_qubit(rho, basis),
        MeasureKind::L1 => coherence_l1(rho, basis),
    }
}

/// Upper bound on the qubit coherence of formation by direct search over
/// ensemble decompositions.
///
/// Every `K`-element decomposition of `rho = sum_j l_j |v_j><v_j|` has the
/// form `|psi_e> = sum_j U_ej sqrt(l_j) |v_j>` for a `K x 2` isometry `U`.
/// The first half of the `trials` draws Haar-random isometries; the second
/// half perturbs the best one found so far with a geometrically shrinking
/// step. The result is the smallest average pure-state relative entropy of
/// coherence seen, so it never undercuts the true value and converges to it
/// as `trials` grows. Deterministic for a fixed `seed`.
pub fn cf_oracle(
    rho: &DensityMatrix,
    basis: &OrthonormalBasis,
    ensembles: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::UnsupportedDimension(rho.dim()));
    }
    basis.check_dim(2)?;
    if !(2..=4).contains(&ensembles) {
        return Err(Error::InvalidInput(format!("ensemble size must be 2, 3 or 4, got {ensembles}")));
    }
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be positive".into()));
    }

    let weighted: Vec<Vec<C64>> = hermitian_eigen(rho.matrix())?
        .into_iter()
        .map(|p| {
            let s = p.value.max(0.0).sqrt();
            p.vector.amplitudes().iter().map(|a| a * s).collect()
        })
        .collect();
    let bras: Vec<&[C64]> = basis.vectors().iter().map(|b| b.amplitudes()).collect();

    let average = |iso: &[Vec<C64>]| -> f64 {
        let mut total = 0.0;
        for e in 0..ensembles {
            let psi: Vec<C64> = (0..2).map(|i| iso[0][e] * weighted[0][i] + iso[1][e] * weighted[1][i]).collect();
            let weight: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            if weight < 1e-300 {
                continue;
            }
            let entropy: f64 = bras
                .iter()
                .map(|b| {
                    let amp: C64 = b.iter().zip(&psi).map(|(x, y)| x.conj() * y).sum();
                    entropy_term(amp.norm_sqr() / weight)
                })
                .sum();
            total += weight * entropy;
        }
        total
    };

    let mut rng = derived_rng(seed, 0xCF, 0);
    // start from the spectral decomposition itself
    let mut best_iso: Vec<Vec<C64>> = (0..2)
        .map(|j| (0..ensembles).map(|e| C64::new(if e == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let mut best = average(&best_iso);

    let global = trials.div_ceil(2);
    for _ in 1..global {
        let iso = random_isometry(ensembles, 2, &mut rng);
        let v = average(&iso);
        if v < best {
            best = v;
            best_iso = iso;
        }
    }

    let local = trials - global;
    let (step_start, step_end) = (0.3f64, 1e-5f64);
    for t in 0..local {
        let frac = if local > 1 { t as f64 / (local - 1) as f64 } else { 0.0 };
        let step = step_start * (step_end / step_start).powf(frac);
        let candidate: Vec<Vec<C64>> = best_iso
            .iter()
            .map(|col| {
                let noise = gaussian_vector(ensembles, &mut rng);
                col.iter().zip(noise).map(|(a, n)| a + n * step).collect()
            })
            .collect();
        if let Some(iso) = orthonormalize(candidate) {
            let v = average(&iso);
            if v < best {
                best = v;
                best_iso = iso;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use crate::harness::sampling::{random_mixed_state, random_qubit, random_unitary};
    use crate::numlin::{binary_entropy, state_from_bloch, BlochVector, PureState};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn plus_state() -> DensityMatrix {
        DensityMatrix::from_pure(&PureState::new(vec![C64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap())
    }

    fn z_basis() -> OrthonormalBasis {
        OrthonormalBasis::computational(2)
    }

    /// p = 0.75 with the dominant eigenvector along +x: Bloch vector (0.5, 0, 0).
    fn mixed_x() -> DensityMatrix {
        state_from_bloch(&BlochVector::new(0.5, 0.0, 0.0).unwrap()).unwrap()
    }

    #[test]
    fn dephase_examples() {
        let diag = DensityMatrix::new(ComplexMatrix::diagonal(&[0.3, 0.7])).unwrap();
        assert!(dephase(&diag, &z_basis()).unwrap().matrix().max_abs_diff(diag.matrix()) < 1e-15);
        let d = dephase(&plus_state(), &z_basis()).unwrap();
        assert!(d.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
        let rho = state_from_bloch(&BlochVector::new(0.5, 0.0, 0.5).unwrap()).unwrap();
        let expected = state_from_bloch(&BlochVector::new(0.0, 0.0, 0.5).unwrap()).unwrap();
        assert!(dephase(&rho, &z_basis()).unwrap().matrix().max_abs_diff(expected.matrix()) < 1e-15);
    }

    #[test]
    fn dephase_is_idempotent_and_trace_preserving() {
        let mut rng = derived_rng(11, 0, 0);
        let rho = random_mixed_state(4, &mut rng);
        let b = crate::harness::sampling::random_basis(4, &mut rng);
        let once = dephase(&rho, &b).unwrap();
        let twice = dephase(&once, &b).unwrap();
        assert!(once.matrix().max_abs_diff(twice.matrix()) < 1e-12);
        assert!((once.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(coherence_l1(&once, &b).unwrap().value < 1e-12);
    }

    #[test]
    fn relative_entropy_examples() {
        let diag = DensityMatrix::new(ComplexMatrix::diagonal(&[0.3, 0.7])).unwrap();
        assert!(coherence_relative_entropy(&diag, &z_basis()).unwrap().value.abs() < 1e-12);
        assert!((coherence_relative_entropy(&plus_state(), &z_basis()).unwrap().value - 1.0).abs() < 1e-12);
        // H(1/2) - H(3/4), mpmath: 0.18872187554086713609
        let v = coherence_relative_entropy(&mixed_x(), &z_basis()).unwrap().value;
        assert!((v - 0.188_721_875_540_867_1).abs() < 1e-12);
    }

    #[test]
    fn l1_examples() {
        let diag = DensityMatrix::new(ComplexMatrix::diagonal(&[0.3, 0.7])).unwrap();
        assert_eq!(coherence_l1(&diag, &z_basis()).unwrap().value, 0.0);
        assert!((coherence_l1(&plus_state(), &z_basis()).unwrap().value - 1.0).abs() < 1e-15);
        let rho = mixed_x();
        assert!((rho.purity() - 0.625).abs() < 1e-15);
        assert!((coherence_l1(&rho, &z_basis()).unwrap().value - 0.5).abs() < 1e-15);
        // sqrt(2P - 1) sin(alpha) with alpha = pi/2
        assert!((coherence_l1(&rho, &z_basis()).unwrap().value - (2.0f64 * 0.625 - 1.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn formation_examples() {
        let diag = DensityMatrix::new(ComplexMatrix::diagonal(&[0.3, 0.7])).unwrap();
        assert_eq!(coherence_formation_qubit(&diag, &z_basis()).unwrap().value, 0.0);
        assert!((coherence_formation_qubit(&plus_state(), &z_basis()).unwrap().value - 1.0).abs() < 1e-12);
        // l1 = 0.5 -> h((1 + sqrt(0.75)) / 2), mpmath: 0.35457890266526988420
        let v = coherence_formation_qubit(&mixed_x(), &z_basis()).unwrap().value;
        assert!((v - 0.354_578_902_665_269_9).abs() < 1e-12);
        assert!((v - binary_entropy((1.0 + 0.75f64.sqrt()) / 2.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn formation_needs_qubit() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            coherence_formation_qubit(&rho, &OrthonormalBasis::computational(3)),
            Err(Error::UnsupportedDimension(3))
        ));
    }

    #[test]
    fn measure_dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(2);
        let b = OrthonormalBasis::computational(3);
        for kind in MeasureKind::ALL {
            assert!(coherence(kind, &rho, &b).is_err());
        }
    }

    #[test]
    fn formation_equals_relative_entropy_for_pure_states() {
        let mut rng = derived_rng(12, 0, 0);
        for _ in 0..1000 {
            let psi = crate::harness::sampling::random_pure_state(2, &mut rng);
            let rho = DensityMatrix::from_pure(&psi);
            let b = crate::harness::sampling::random_basis(2, &mut rng);
            let cf = coherence_formation_qubit(&rho, &b).unwrap().value;
            let re = coherence_relative_entropy(&rho, &b).unwrap().value;
            assert!((cf - re).abs() < 1e-9);
        }
    }

    #[test]
    fn oracle_edge_cases() {
        let b = z_basis();
        let pure = plus_state();
        assert!((cf_oracle(&pure, &b, 3, 100, 1).unwrap() - 1.0).abs() < 1e-9);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(cf_oracle(&mixed, &b, 2, 1, 1).unwrap().abs() < 1e-12);
        assert!(cf_oracle(&mixed, &b, 5, 10, 1).is_err());
        assert!(cf_oracle(&mixed, &b, 1, 10, 1).is_err());
        assert!(cf_oracle(&DensityMatrix::maximally_mixed(3), &OrthonormalBasis::computational(3), 3, 10, 1).is_err());
    }

    #[test]
    fn oracle_is_deterministic() {
        let rho = mixed_x();
        let a = cf_oracle(&rho, &z_basis(), 3, 2000, 42).unwrap();
        let b = cf_oracle(&rho, &z_basis(), 3, 2000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn oracle_converges_to_closed_form() {
        let mut rng = derived_rng(13, 0, 0);
        for i in 0..5 {
            let rho = random_qubit(&mut rng);
            let b = crate::harness::sampling::random_basis(2, &mut rng);
            let closed = coherence_formation_qubit(&rho, &b).unwrap().value;
            let oracle = cf_oracle(&rho, &b, 3, 100_000, i).unwrap();
            assert!(oracle >= closed - 1e-6, "oracle {oracle} below closed form {closed}");
            assert!(oracle - closed < 1e-4, "oracle {oracle} vs closed form {closed}");
        }
    }

    #[test]
    fn faithful_and_non_negative() {
        let mut rng = derived_rng(14, 0, 0);
        for _ in 0..2000 {
            let rho = random_qubit(&mut rng);
            let b = crate::harness::sampling::random_basis(2, &mut rng);
            let diagonal = dephase(&rho, &b).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-12;
            for kind in MeasureKind::ALL {
                let v = coherence(kind, &rho, &b).unwrap().value;
                assert!(v >= 0.0);
                if diagonal {
                    assert!(v < 1e-9);
                }
            }
        }
        let diag = DensityMatrix::new(ComplexMatrix::diagonal(&[0.1, 0.9])).unwrap();
        for kind in MeasureKind::ALL {
            assert!(coherence(kind, &diag, &z_basis()).unwrap().value < 1e-9);
        }
    }

    #[test]
    fn formation_increases_with_l1() {
        let mut rng = derived_rng(15, 0, 0);
        let mut samples: Vec<(f64, f64)> = (0..10_000)
            .map(|_| {
                let rho = random_qubit(&mut rng);
                let b = crate::harness::sampling::random_basis(2, &mut rng);
                (
                    coherence_l1(&rho, &b).unwrap().value,
                    coherence_formation_qubit(&rho, &b).unwrap().value,
                )
            })
            .collect();
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in samples.windows(2) {
            if w[1].0 > w[0].0 + 1e-9 && w[0].0 > 0.0 {
                assert!(w[1].1 > w[0].1, "{w:?}");
            }
        }
    }

    #[test]
    fn convexity() {
        let mut rng = derived_rng(16, 0, 0);
        for _ in 0..10_000 {
            let a = random_qubit(&mut rng);
            let b = random_qubit(&mut rng);
            let basis = crate::harness::sampling::random_basis(2, &mut rng);
            let t: f64 = rng.random();
            let mix = a.mix(t, &b).unwrap();
            for kind in MeasureKind::ALL {
                let lhs = coherence(kind, &mix, &basis).unwrap().value;
                let rhs = t * coherence(kind, &a, &basis).unwrap().value
                    + (1.0 - t) * coherence(kind, &b, &basis).unwrap().value;
                assert!(lhs <= rhs + 1e-9, "{kind}: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn unitary_covariance() {
        let mut rng = derived_rng(17, 0, 0);
        for d in [2usize, 3, 4] {
            for _ in 0..200 {
                let rho = random_mixed_state(d, &mut rng);
                let b = crate::harness::sampling::random_basis(d, &mut rng);
                let u = random_unitary(d, &mut rng);
                let rho_u = rho.conjugated(&u).unwrap();
                let b_u = b.transformed(&u).unwrap();
                let kinds: &[MeasureKind] = if d == 2 { &MeasureKind::ALL } else { &[MeasureKind::RelativeEntropy, MeasureKind::L1] };
                for &kind in kinds {
                    let before = coherence(kind, &rho, &b).unwrap().value;
                    let after = coherence(kind, &rho_u, &b_u).unwrap().value;
                    assert!((before - after).abs() < 1e-10, "{kind} d={d}: {before} vs {after}");
                }
            }
        }
    }
}
