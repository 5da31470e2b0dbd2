use super::{ComplexMatrix, PureState, C64, STRUCTURE_TOL};
use crate::{Error, Result};

/// Largest dimension the dense eigensolver accepts.
pub const MAX_EIGEN_DIM: usize = 16;

const MAX_SWEEPS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: PureState,
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// Uses the closed-form quadratic for `d = 2` and cyclic Jacobi rotations for
/// larger `d`. Inputs whose Hermiticity error exceeds `1e-10` are rejected;
/// smaller asymmetries are averaged out before solving.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<Vec<EigenPair>> {
    let a = symmetrized(m)?;
    let (values, vectors) = match a.dim() {
        1 => (vec![a[(0, 0)].re], vec![vec![C64::new(1.0, 0.0)]]),
        2 => qubit_eigen(&a),
        _ => jacobi_eigen(a),
    };
    let mut pairs = values
        .into_iter()
        .zip(vectors)
        .map(|(value, v)| {
            Ok(EigenPair {
                value,
                vector: PureState::normalized(v)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    pairs.sort_by(|x, y| y.value.total_cmp(&x.value));
    Ok(pairs)
}

/// Eigenvalues only, sorted descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let a = symmetrized(m)?;
    let mut values = match a.dim() {
        1 => vec![a[(0, 0)].re],
        2 => {
            let (mean, radius) = qubit_mean_radius(&a);
            vec![mean + radius, mean - radius]
        }
        _ => jacobi_eigen(a).0,
    };
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

fn symmetrized(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.dim() > MAX_EIGEN_DIM {
        return Err(Error::UnsupportedDimension(m.dim()));
    }
    let err = m.hermiticity_error();
    if err > STRUCTURE_TOL {
        return Err(Error::InvalidInput(format!(
            "matrix is not Hermitian (max |m_ij - conj(m_ji)| = {err:.3e})"
        )));
    }
    Ok(ComplexMatrix::from_fn(m.dim(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5))
}

fn qubit_mean_radius(a: &ComplexMatrix) -> (f64, f64) {
    let (p, q) = (a[(0, 0)].re, a[(1, 1)].re);
    ((p + q) / 2.0, ((p - q) / 2.0).hypot(a[(0, 1)].norm()))
}

fn qubit_eigen(a: &ComplexMatrix) -> (Vec<f64>, Vec<Vec<C64>>) {
    let (mean, radius) = qubit_mean_radius(a);
    let hi = mean + radius;
    let (p, q, b) = (a[(0, 0)].re, a[(1, 1)].re, a[(0, 1)]);
    // Two candidate eigenvectors for `hi`; the longer one is better conditioned.
    let v1 = [b, C64::new(hi - p, 0.0)];
    let v2 = [C64::new(hi - q, 0.0), b.conj()];
    let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
    let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
    let top = if n1.max(n2) < 1e-300 {
        // Degenerate: any basis diagonalizes a multiple of the identity.
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    } else if n1 >= n2 {
        v1
    } else {
        v2
    };
    let n = (top[0].norm_sqr() + top[1].norm_sqr()).sqrt();
    let top = [top[0] / n, top[1] / n];
    let bottom = [-top[1].conj(), top[0].conj()];
    (vec![hi, mean - radius], vec![top.to_vec(), bottom.to_vec()])
}

fn off_diagonal_norm_sqr(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Cyclic Jacobi for complex Hermitian matrices. Each rotation first removes
/// the phase of `a_pq` and then applies a real Givens rotation.
fn jacobi_eigen(mut a: ComplexMatrix) -> (Vec<f64>, Vec<Vec<C64>>) {
    let n = a.dim();
    let mut v = ComplexMatrix::identity(n);
    let total: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let threshold = (1e-32 * total).max(1e-300);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sqr(&a) <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                let theta = 0.5 * (2.0 * mag).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                // G restricted to (p, q): [[c, -s], [conj(phase) s, conj(phase) c]].
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(-s, 0.0);
                let g_qp = phase.conj() * s;
                let g_qq = phase.conj() * c;

                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
    }

    let values = (0..n).map(|i| a[(i, i)].re).collect();
    let vectors = (0..n).map(|j| (0..n).map(|i| v[(i, j)]).collect()).collect();
    (values, vectors)
}
