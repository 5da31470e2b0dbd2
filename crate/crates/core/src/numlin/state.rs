use super::eigen::hermitian_eigenvalues;
use super::{ComplexMatrix, C64, STRUCTURE_TOL};
use crate::{Error, Result};

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
}

impl PureState {
    /// Wraps amplitudes that must already have unit norm (within `1e-10`).
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidInput("state vector must be non-empty".into()));
        }
        let norm = norm(&amps);
        if !norm.is_finite() || (norm - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::InvalidInput(format!("state vector has norm {norm}, expected 1")));
        }
        Ok(Self { amps })
    }

    /// Normalizes arbitrary non-zero amplitudes.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let n = norm(&amps);
        if amps.is_empty() || !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidInput("cannot normalize a zero vector".into()));
        }
        for a in &mut amps {
            *a /= n;
        }
        Ok(Self { amps })
    }

    /// The computational basis vector `|index>` in dimension `dim`.
    pub fn basis_vector(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(inner(&self.amps, &other.amps))
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amps, &self.amps)
    }

    /// Multiplies by the global phase `e^{i theta}`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let ph = C64::from_polar(1.0, theta);
        Self {
            amps: self.amps.iter().map(|a| a * ph).collect(),
        }
    }

    pub fn apply(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        Self::new(u.mul_vec(&self.amps))
    }
}

pub(crate) fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Squared overlap `|<u|v>|^2`.
pub fn overlap(u: &PureState, v: &PureState) -> Result<f64> {
    Ok(u.inner(v)?.norm_sqr().min(1.0))
}

/// A complete set of orthonormal vectors in `C^d`: a projective measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalBasis {
    vectors: Vec<PureState>,
}

impl OrthonormalBasis {
    pub fn new(vectors: Vec<PureState>) -> Result<Self> {
        let dim = vectors.len();
        if dim == 0 {
            return Err(Error::InvalidInput("basis must contain at least one vector".into()));
        }
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        for i in 0..dim {
            for j in i + 1..dim {
                let ip = vectors[i].inner(&vectors[j])?.norm();
                if ip > STRUCTURE_TOL {
                    return Err(Error::InvalidInput(format!(
                        "basis vectors {i} and {j} are not orthogonal (|<.|.>| = {ip:.3e})"
                    )));
                }
            }
        }
        Ok(Self { vectors })
    }

    pub fn computational(dim: usize) -> Self {
        Self {
            vectors: (0..dim).map(|i| PureState::basis_vector(dim, i)).collect(),
        }
    }

    /// The basis formed by the columns of a unitary matrix.
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        let d = u.dim();
        let cols = (0..d)
            .map(|j| PureState::new((0..d).map(|i| u[(i, j)]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(cols)
    }

    /// The matrix whose columns are the basis vectors.
    pub fn to_unitary(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, |i, j| self.vectors[j].amplitudes()[i])
    }

    /// Applies a unitary to every basis vector.
    pub fn transformed(&self, u: &ComplexMatrix) -> Result<Self> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| v.apply(u))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vectors)
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    /// Outcome distribution `<b_i|rho|b_i>` of measuring `rho` in this basis.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        self.check_dim(rho.dim())?;
        Ok(self
            .vectors
            .iter()
            .map(|b| rho.matrix().sandwich(b.amplitudes(), b.amplitudes()).re.max(0.0))
            .collect())
    }

    /// The matrix of `rho` written in this basis, `<b_i|rho|b_j>`.
    pub fn represent(&self, rho: &DensityMatrix) -> Result<ComplexMatrix> {
        self.check_dim(rho.dim())?;
        let d = self.dim();
        let m = rho.matrix();
        let images: Vec<Vec<C64>> = self.vectors.iter().map(|b| m.mul_vec(b.amplitudes())).collect();
        Ok(ComplexMatrix::from_fn(d, |i, j| inner(self.vectors[i].amplitudes(), &images[j])))
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }
}

/// Largest and smallest squared overlap between a vector of `x` and a
/// vector of `z`.
pub fn basis_pair_geometry(x: &OrthonormalBasis, z: &OrthonormalBasis) -> Result<(f64, f64)> {
    if x.dim() != z.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: z.dim(),
        });
    }
    let mut c_max = 0.0f64;
    let mut c_min = 1.0f64;
    for u in x.vectors() {
        for v in z.vectors() {
            let o = overlap(u, v)?;
            c_max = c_max.max(o);
            c_min = c_min.min(o);
        }
    }
    Ok((c_max, c_min))
}

/// A unit-trace positive semidefinite Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, each within `1e-10`.
    /// The error names the first invariant that fails.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let herm = m.hermiticity_error();
        if herm > STRUCTURE_TOL {
            return Err(Error::NonPhysical {
                invariant: "hermiticity",
                detail: format!("max |m_ij - conj(m_ji)| = {herm:.3e}"),
            });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STRUCTURE_TOL || tr.im.abs() > STRUCTURE_TOL {
            return Err(Error::NonPhysical {
                invariant: "trace",
                detail: format!("trace = {:.12}, expected 1", tr.re),
            });
        }
        let eigs = hermitian_eigenvalues(&m)?;
        let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -STRUCTURE_TOL {
            return Err(Error::NonPhysical {
                invariant: "positive semidefiniteness",
                detail: format!("smallest eigenvalue {min:.3e}"),
            });
        }
        Ok(Self { m })
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self { m }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self { m: psi.projector() }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            m: ComplexMatrix::diagonal(&vec![1.0 / dim as f64; dim]),
        }
    }

    /// `sum_i w_i |v_i><v_i|` for orthonormal `vectors`; weights must be a
    /// probability distribution.
    pub fn from_spectrum(weights: &[f64], vectors: &[PureState]) -> Result<Self> {
        if weights.len() != vectors.len() || vectors.is_empty() {
            return Err(Error::InvalidInput("need one weight per eigenvector".into()));
        }
        let dim = vectors[0].dim();
        let mut m = ComplexMatrix::zeros(dim);
        for (w, v) in weights.iter().zip(vectors) {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            m = &m + &v.projector().scale(C64::new(*w, 0.0));
        }
        Self::new(m)
    }

    /// `t * self + (1 - t) * other`.
    pub fn mix(&self, t: f64, other: &DensityMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let t = crate::error::check_range("mixing weight", t, 0.0, 1.0, 0.0)?;
        Ok(Self {
            m: &self.m.scale(C64::new(t, 0.0)) + &other.m.scale(C64::new(1.0 - t, 0.0)),
        })
    }

    /// `U rho U^dagger`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        Ok(Self {
            m: &(u * &self.m) * &u.adjoint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        // Tr[rho^2] = sum_ij |rho_ij|^2 for Hermitian rho.
        self.m.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}
