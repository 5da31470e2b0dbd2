//! Seeded random states, bases and unitaries.
//!
//! All randomness flows from [`StreamRng`] (ChaCha8), so a seed and a stream
//! index fully determine every sample on every platform.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bounds::purity_to_p;
use crate::numlin::{BlochVector, ComplexMatrix, DensityMatrix, OrthonormalBasis, PureState, C64};
use crate::error::check_range;
use crate::{Error, Result};

/// The generator used throughout the crate: ChaCha with 8 rounds, a
/// counter-based stream cipher with 2^64 independent streams per seed.
pub type StreamRng = ChaCha8Rng;

/// Generator for stream `stream` of a check identified by `check_index`.
/// The key is `seed ^ check_index`.
pub fn derived_rng(seed: u64, check_index: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ check_index);
    rng.set_stream(stream);
    rng
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Gaussian vector with i.i.d. complex normal entries (not normalized).
pub(crate) fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    (0..dim).map(|_| complex_gaussian(rng)).collect()
}

/// Haar-distributed pure state: a normalized complex Gaussian vector.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    assert!(dim >= 1);
    loop {
        if let Ok(s) = PureState::normalized(gaussian_vector(dim, rng)) {
            return s;
        }
    }
}

/// Gram-Schmidt on the columns of a list of vectors; `None` if they are
/// numerically dependent.
pub(crate) fn orthonormalize(mut cols: Vec<Vec<C64>>) -> Option<Vec<Vec<C64>>> {
    for j in 0..cols.len() {
        for k in 0..j {
            let proj: C64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
            let (head, tail) = cols.split_at_mut(j);
            for (x, y) in tail[0].iter_mut().zip(&head[k]) {
                *x -= proj * y;
            }
        }
        let n = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-10 {
            return None;
        }
        for x in &mut cols[j] {
            *x /= n;
        }
    }
    Some(cols)
}

/// `cols` random columns of a Haar unitary of size `dim`: an isometry
/// `C^cols -> C^dim`, returned column by column.
pub fn random_isometry<R: Rng + ?Sized>(dim: usize, cols: usize, rng: &mut R) -> Vec<Vec<C64>> {
    assert!(cols <= dim);
    loop {
        let raw = (0..cols).map(|_| gaussian_vector(dim, rng)).collect();
        if let Some(q) = orthonormalize(raw) {
            return q;
        }
    }
}

/// Haar-random unitary (Gram-Schmidt on a complex Ginibre matrix).
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let cols = random_isometry(dim, dim, rng);
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn random_basis<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> OrthonormalBasis {
    OrthonormalBasis::from_unitary(&random_unitary(dim, rng)).expect("Haar unitary columns are orthonormal")
}

/// Uniformly distributed unit vector in R^3.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let (x, y, z): (f64, f64, f64) = (
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        if let Ok(v) = BlochVector::direction(x, y, z) {
            if (x * x + y * y + z * z) > 1e-12 {
                return v;
            }
        }
    }
}

/// Random mixed state: uniformly random spectrum on the simplex, Haar
/// eigenbasis.
pub fn random_mixed_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let mut w: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    let u = random_unitary(dim, rng);
    let m = ComplexMatrix::from_fn(dim, |i, j| (0..dim).map(|k| u[(i, k)] * w[k] * u[(j, k)].conj()).sum());
    DensityMatrix::new_unchecked(m)
}

/// Random qubit with Bloch radius uniform in `[0, 1]` (so purities cover
/// `[1/2, 1]`), plus a 10% chance of an exactly pure state.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let dir = random_direction(rng);
    let radius = if rng.random::<f64>() < 0.1 { 1.0 } else { rng.random::<f64>() };
    crate::numlin::state_from_bloch(&dir.scaled(radius)).expect("radius <= 1")
}

/// Qubit of purity `purity` whose eigenvector for the larger eigenvalue
/// points along a uniformly random Bloch direction.
pub fn random_qubit_with<R: Rng + ?Sized>(purity: f64, rng: &mut R) -> Result<DensityMatrix> {
    let p = purity_to_p(purity)?;
    qubit_with_direction(p, &random_direction(rng))
}

/// Qubit with larger eigenvalue `p` and that eigenvector along `dir`.
pub fn qubit_with_direction(p: f64, dir: &BlochVector) -> Result<DensityMatrix> {
    crate::numlin::state_from_bloch(&dir.scaled(2.0 * p - 1.0))
}

/// A unit vector orthogonal to `v`, uniformly random in the orthogonal circle.
pub fn random_orthogonal_direction<R: Rng + ?Sized>(v: &BlochVector, rng: &mut R) -> BlochVector {
    loop {
        let w = random_direction(rng);
        let d = w.dot(v);
        let perp = BlochVector {
            x: w.x - d * v.x,
            y: w.y - d * v.y,
            z: w.z - d * v.z,
        };
        if perp.norm() > 1e-6 {
            return BlochVector::direction(perp.x, perp.y, perp.z).expect("non-zero");
        }
    }
}

/// The qubit basis `{|n>, |-n>}` for a unit Bloch direction `n`.
pub fn qubit_basis_along(n: &BlochVector) -> OrthonormalBasis {
    let up = n.pure_state().expect("unit direction");
    // |-n> is orthogonal to |n>; build it explicitly to avoid phase noise.
    let a = up.amplitudes();
    let down = PureState::normalized(vec![-a[1].conj(), a[0].conj()]).expect("non-zero");
    OrthonormalBasis::new(vec![up, down]).expect("orthogonal by construction")
}

/// Two qubit bases together with the Bloch directions of their first vectors.
#[derive(Clone, Debug)]
pub struct QubitBasisPair {
    pub x: OrthonormalBasis,
    pub z: OrthonormalBasis,
    pub x_dir: BlochVector,
    pub z_dir: BlochVector,
}

/// Two qubit bases whose first vectors have squared overlap `c_max`: Bloch
/// directions at angle `arccos(2 c_max - 1)`, randomly oriented.
pub fn random_basis_pair_with<R: Rng + ?Sized>(c_max: f64, rng: &mut R) -> Result<QubitBasisPair> {
    let c = check_range("c_max", c_max, 0.5, 1.0, 1e-12)?;
    let gamma = (2.0 * c - 1.0).clamp(-1.0, 1.0).acos();
    let nx = random_direction(rng);
    let perp = random_orthogonal_direction(&nx, rng);
    let (s, co) = gamma.sin_cos();
    let nz = BlochVector::direction(co * nx.x + s * perp.x, co * nx.y + s * perp.y, co * nx.z + s * perp.z)?;
    Ok(QubitBasisPair {
        x: qubit_basis_along(&nx),
        z: qubit_basis_along(&nz),
        x_dir: nx,
        z_dir: nz,
    })
}

/// Random real 3-vector with i.i.d. normal entries, rejecting near-zero ones.
pub fn random_real_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-12 {
            return v;
        }
    }
}

/// Uniform angle in `[0, 2 pi)`.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    2.0 * PI * rng.random::<f64>()
}

pub(crate) fn check_dim(dim: usize, min: usize, max: usize) -> Result<()> {
    if dim < min || dim > max {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(())
}
