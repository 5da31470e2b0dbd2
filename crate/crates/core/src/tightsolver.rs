//! Exact lower bound on the two-basis coherence sum for fixed `(c, P)`.
//!
//! For a qubit with larger eigenvalue `p` and eigenvector `|r>`, the coherence
//! in basis `X` depends only on `a = |<x|r>|^2` through a per-measure
//! function `f(a)` that is concave and symmetric about `1/2`. Writing the
//! overlaps as Bloch angles (`a = cos^2(alpha/2)`, `b = cos^2(beta/2)`,
//! `c = cos^2(gamma/2)`), the minimum of `f(a) + f(b)` over the spherical
//! triangle constraints is attained on the edge `alpha + beta = gamma`, which
//! leaves a one-dimensional search over `alpha` in `[gamma/2, gamma]`.
//!
//! [`tight_bound_1d`] solves that reduced problem with a dense grid followed
//! by golden-section refinement. [`tight_bound_2d_crosscheck`] brute-forces
//! the full two-angle region and exists to validate the reduction.

use std::f64::consts::PI;

use crate::bounds::purity_to_p;
use crate::coherence::MeasureKind;
use crate::error::check_range;
use crate::numlin::{h2, IDENTITY_TOL};
use crate::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Per-measure single-overlap objective for a qubit with larger eigenvalue `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectiveKind {
    pub measure: MeasureKind,
    p: f64,
}

impl ObjectiveKind {
    pub fn new(measure: MeasureKind, p: f64) -> Result<Self> {
        Ok(Self {
            measure,
            p: check_range("p", p, 0.5, 1.0, IDENTITY_TOL)?,
        })
    }

    pub fn from_purity(measure: MeasureKind, purity: f64) -> Result<Self> {
        Self::new(measure, purity_to_p(purity)?)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `f` evaluated from `x` and the product `x (1 - x)`, which callers can
    /// supply in a cancellation-free form.
    fn eval_parts(&self, x: f64, x_one_minus_x: f64) -> f64 {
        let p = self.p;
        let bias = 2.0 * p - 1.0;
        match self.measure {
            MeasureKind::RelativeEntropy => h2((1.0 - p) + x * bias) - h2(p),
            MeasureKind::L1 => 2.0 * bias.abs() * x_one_minus_x.max(0.0).sqrt(),
            MeasureKind::Formation => {
                let inner = 1.0 - 4.0 * bias * bias * x_one_minus_x;
                h2((1.0 + inner.max(0.0).sqrt()) / 2.0)
            }
        }
    }

    /// `f(cos^2(theta / 2))` for a Bloch angle `theta`.
    fn eval_angle(&self, theta: f64) -> f64 {
        let half = (theta / 2.0).cos();
        let s = theta.sin();
        self.eval_parts(half * half, s * s / 4.0)
    }
}

/// Coherence of a qubit in a basis whose vector has squared overlap `x` with
/// the dominant eigenvector.
pub fn objective_f(kind: &ObjectiveKind, x: f64) -> Result<f64> {
    let x = check_range("x", x, 0.0, 1.0, IDENTITY_TOL)?;
    Ok(kind.eval_parts(x, x * (1.0 - x)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub grid_points: usize,
    pub refine_tolerance: f64,
    pub max_refine_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            grid_points: 2048,
            refine_tolerance: 1e-10,
            max_refine_iterations: 200,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 16 {
            return Err(Error::InvalidInput(format!(
                "grid_points must be at least 16, got {}",
                self.grid_points
            )));
        }
        if !(self.refine_tolerance > 0.0) {
            return Err(Error::InvalidInput("refine_tolerance must be positive".into()));
        }
        if self.max_refine_iterations == 0 {
            return Err(Error::InvalidInput("max_refine_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Boundary1d,
    Grid2dCrosscheck,
}

impl SolveMethod {
    pub fn name(self) -> &'static str {
        match self {
            SolveMethod::Boundary1d => "boundary_1d",
            SolveMethod::Grid2dCrosscheck => "grid_2d_crosscheck",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TightBound {
    pub value: f64,
    /// Bloch angle between the dominant eigenvector and the `X` vector at the
    /// minimum, in `[gamma/2, gamma]`.
    pub argmin_alpha: f64,
    pub method: SolveMethod,
}

/// Bloch angle between the two basis vectors with squared overlap `c`.
pub fn basis_angle(c: f64) -> Result<f64> {
    let c = check_range("c", c, 0.5, 1.0, IDENTITY_TOL)?;
    Ok((2.0 * c - 1.0).clamp(-1.0, 1.0).acos())
}

/// Minimizes `f(alpha) + f(gamma - alpha)` over `alpha` in `[gamma/2, gamma]`.
///
/// A grid of `grid_points` values is scanned first (ties resolve to the
/// smallest angle), then golden-section search refines within the two cells
/// adjacent to the best grid point. The refined point replaces the grid
/// point only when strictly better.
pub fn tight_bound_1d(measure: MeasureKind, c: f64, purity: f64, opts: &SolverOptions) -> Result<TightBound> {
    opts.validate()?;
    let gamma = basis_angle(c)?;
    let objective = ObjectiveKind::from_purity(measure, purity)?;
    let g = |alpha: f64| objective.eval_angle(alpha) + objective.eval_angle(gamma - alpha);

    if gamma == 0.0 {
        return Ok(TightBound {
            value: g(0.0),
            argmin_alpha: 0.0,
            method: SolveMethod::Boundary1d,
        });
    }

    let lo = gamma / 2.0;
    let n = opts.grid_points;
    let step = (gamma - lo) / (n - 1) as f64;
    let at = |i: usize| if i == n - 1 { gamma } else { lo + step * i as f64 };

    let mut best_i = 0;
    let mut best = g(at(0));
    for i in 1..n {
        let v = g(at(i));
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let mut argmin = at(best_i);

    let left = at(best_i.saturating_sub(1));
    let right = at((best_i + 1).min(n - 1));
    let (x, v) = golden_section(&g, left, right, opts.refine_tolerance, opts.max_refine_iterations);
    if v < best - 4.0 * f64::EPSILON * best.abs().max(1.0) {
        best = v;
        argmin = x;
    }

    Ok(TightBound {
        value: best,
        argmin_alpha: argmin.clamp(lo, gamma),
        method: SolveMethod::Boundary1d,
    })
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Brute-force minimum of `f(alpha) + f(beta)` over the whole feasible
/// region `gamma <= alpha + beta <= 2 pi - gamma`, `0 <= alpha - beta <= gamma`.
///
/// The region is scanned on a `grid x grid` lattice in the coordinates
/// `A = alpha + beta`, `B = alpha - beta`, in which it is the rectangle
/// `[gamma, 2 pi - gamma] x [0, gamma]`. Both edges are lattice lines. The
/// best lattice point is then polished by alternating golden-section
/// searches confined to its neighbouring cells.
pub fn tight_bound_2d_crosscheck(measure: MeasureKind, c: f64, purity: f64, grid: usize) -> Result<f64> {
    if !(2..=4096).contains(&grid) {
        return Err(Error::InvalidInput(format!("grid must be in [2, 4096], got {grid}")));
    }
    let gamma = basis_angle(c)?;
    let objective = ObjectiveKind::from_purity(measure, purity)?;
    let a_lo = gamma;
    let a_hi = 2.0 * PI - gamma;
    let lattice = |lo: f64, hi: f64, k: usize| {
        if k == grid - 1 {
            hi
        } else {
            lo + (hi - lo) * k as f64 / (grid - 1) as f64
        }
    };
    let g = |a: f64, b: f64| {
        let alpha = ((a + b) / 2.0).min(PI);
        let beta = ((a - b) / 2.0).max(0.0);
        objective.eval_angle(alpha) + objective.eval_angle(beta)
    };

    let (mut best, mut best_a, mut best_b) = (f64::INFINITY, a_lo, 0.0);
    for j in 0..grid {
        let b = lattice(0.0, gamma, j);
        for k in 0..grid {
            let a = lattice(a_lo, a_hi, k);
            let v = g(a, b);
            if v < best {
                (best, best_a, best_b) = (v, a, b);
            }
        }
    }

    let step_a = (a_hi - a_lo) / (grid - 1) as f64;
    let step_b = gamma / (grid - 1) as f64;
    for _ in 0..POLISH_ROUNDS {
        let lo = (best_b - step_b).max(0.0);
        let hi = (best_b + step_b).min(gamma);
        let (b, v) = golden_section(&|b| g(best_a, b), lo, hi, 1e-13, 200);
        if v < best {
            (best, best_b) = (v, b);
        }
        let lo = (best_a - step_a).max(a_lo);
        let hi = (best_a + step_a).min(a_hi);
        let (a, v) = golden_section(&|a| g(a, best_b), lo, hi, 1e-13, 200);
        if v < best {
            (best, best_a) = (v, a);
        }
    }
    Ok(best)
}

const POLISH_ROUNDS: usize = 4;

/// Candidate extreme points `(a, b) = (0, sqrt(c))` and `(0, sqrt(1 - c))` of
/// the relaxed overlap region; the analytic bounds evaluate `f(a) + f(b)` at
/// the first.
pub fn feasible_region_vertices(c: f64) -> Result<[(f64, f64); 2]> {
    let c = check_range("c", c, 0.5, 1.0, IDENTITY_TOL)?;
    Ok([(0.0, c.sqrt()), (0.0, (1.0 - c).sqrt())])
}
