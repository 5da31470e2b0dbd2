use std::f64::consts::PI;

use super::{ComplexMatrix, DensityMatrix, PureState, C64, IDENTITY_TOL, STRUCTURE_TOL};
use crate::error::check_range;
use crate::{Error, Result};

/// Real 3-vector `r` with `rho = (I + r . sigma) / 2`.
///
/// Convention: `|0>` maps to `(0, 0, 1)`, Pauli matrices in `(x, y, z)` order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        let n = v.norm();
        if !n.is_finite() || n > 1.0 + IDENTITY_TOL {
            return Err(Error::domain("Bloch vector norm", n, 0.0, 1.0));
        }
        Ok(v)
    }

    /// Unit vector along `(x, y, z)`.
    pub fn direction(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidInput("zero vector has no direction".into()));
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn origin() -> Self {
        Self { x: 0.0, y: 0.0, z: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    /// Angle in `[0, pi]` between two non-zero vectors.
    pub fn angle_to(&self, other: &BlochVector) -> f64 {
        let denom = self.norm() * other.norm();
        (self.dot(other) / denom).clamp(-1.0, 1.0).acos()
    }

    /// The pure state whose Bloch vector is this (unit) direction.
    pub fn pure_state(&self) -> Result<PureState> {
        let n = self.norm();
        if (n - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::InvalidInput(format!(
                "pure states need a unit Bloch vector, got norm {n}"
            )));
        }
        let (x, y, z) = (self.x / n, self.y / n, self.z / n);
        let cos_half = ((1.0 + z) / 2.0).max(0.0).sqrt();
        let sin_half = ((1.0 - z) / 2.0).max(0.0).sqrt();
        let rho_xy = x.hypot(y);
        let phase = if rho_xy < 1e-300 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(x / rho_xy, y / rho_xy)
        };
        PureState::normalized(vec![C64::new(cos_half, 0.0), phase * sin_half])
    }
}

/// Bloch vector of a qubit density matrix.
pub fn bloch_from_state(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::UnsupportedDimension(rho.dim()));
    }
    let m = rho.matrix();
    // rho_01 = (x - i y) / 2, rho_00 - rho_11 = z
    let off = m[(0, 1)];
    BlochVector::new(2.0 * off.re, -2.0 * off.im, m[(0, 0)].re - m[(1, 1)].re)
}

/// `(I + r . sigma) / 2`.
pub fn state_from_bloch(r: &BlochVector) -> Result<DensityMatrix> {
    let r = BlochVector::new(r.x, r.y, r.z)?;
    let m = ComplexMatrix::new(
        2,
        vec![
            C64::new((1.0 + r.z) / 2.0, 0.0),
            C64::new(r.x / 2.0, -r.y / 2.0),
            C64::new(r.x / 2.0, r.y / 2.0),
            C64::new((1.0 - r.z) / 2.0, 0.0),
        ],
    )?;
    Ok(DensityMatrix::new_unchecked(m))
}

/// Squared overlap `cos^2(alpha / 2)` of two pure qubit states whose Bloch
/// vectors subtend the angle `alpha`. The angle is clamped to `[0, pi]`.
pub fn bloch_angle_overlap(alpha: f64) -> f64 {
    let a = alpha.clamp(0.0, PI);
    let c = (a / 2.0).cos();
    c * c
}

/// Three angles in `[0, pi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl AngleTriple {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            alpha: check_range("alpha", alpha, 0.0, PI, IDENTITY_TOL)?,
            beta: check_range("beta", beta, 0.0, PI, IDENTITY_TOL)?,
            gamma: check_range("gamma", gamma, 0.0, PI, IDENTITY_TOL)?,
        })
    }

    /// Pairwise angles of three non-zero vectors: `alpha = ∠(a, b)`,
    /// `beta = ∠(b, c)`, `gamma = ∠(c, a)`.
    pub fn of_vectors(a: &BlochVector, b: &BlochVector, c: &BlochVector) -> Self {
        Self {
            alpha: a.angle_to(b),
            beta: b.angle_to(c),
            gamma: c.angle_to(a),
        }
    }
}
