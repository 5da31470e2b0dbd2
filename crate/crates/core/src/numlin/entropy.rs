use super::eigen::hermitian_eigenvalues;
use super::{DensityMatrix, IDENTITY_TOL, STRUCTURE_TOL};
use crate::error::check_range;
use crate::Result;

/// `-q log2 q` with `0 log 0 = 0`.
#[inline]
pub(crate) fn entropy_term(q: f64) -> f64 {
    if q <= 0.0 {
        0.0
    } else {
        -q * q.log2()
    }
}

/// Binary entropy without range checking; the argument is clamped to `[0, 1]`.
#[inline]
pub(crate) fn h2(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    entropy_term(x) + entropy_term(1.0 - x)
}

/// Shannon entropy of a two-outcome distribution `(x, 1 - x)`, in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    let x = check_range("probability", x, 0.0, 1.0, IDENTITY_TOL)?;
    Ok(h2(x))
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().map(|&q| entropy_term(q)).sum()
}

/// Von Neumann entropy `-Tr[rho log2 rho]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let values = if rho.dim() == 2 {
        // eigenvalues of a qubit are (1 ± sqrt(2P - 1)) / 2
        let r = (2.0 * rho.purity() - 1.0).max(0.0).sqrt();
        vec![(1.0 + r) / 2.0, (1.0 - r) / 2.0]
    } else {
        hermitian_eigenvalues(rho.matrix()).expect("density matrices are Hermitian")
    };
    values
        .into_iter()
        .map(|l| if l < 0.0 && l >= -STRUCTURE_TOL { 0.0 } else { l })
        .map(entropy_term)
        .sum::<f64>()
        .max(0.0)
}
