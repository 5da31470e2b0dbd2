//! Dense complex linear algebra for small dimensions.
//!
//! Everything here is sized for `d <= 16`: matrices are stored row-major in
//! a flat `Vec`, and the Hermitian eigensolver is a closed form for `d = 2`
//! and cyclic Jacobi above that.

mod bloch;
mod eigen;
mod entropy;
mod matrix;
mod state;

pub use bloch::{bloch_angle_overlap, bloch_from_state, state_from_bloch, AngleTriple, BlochVector};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, EigenPair};
pub use entropy::{binary_entropy, shannon_entropy, von_neumann_entropy};
pub(crate) use entropy::{entropy_term, h2};
pub use matrix::ComplexMatrix;
pub use state::{basis_pair_geometry, overlap, DensityMatrix, OrthonormalBasis, PureState};

pub use num_complex::Complex64 as C64;

/// Tolerance for structural checks (Hermiticity, trace, positivity, norms).
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Tolerance for numeric identities between scalars.
pub const IDENTITY_TOL: f64 = 1e-12;
