//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real rotation, so the whole update
//! is a single 2×2 unitary acting on rows/columns `p, q`.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// `U diag(f(λ)) U*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let u = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                if fl[k] != 0.0 {
                    acc += u[(i, k)] * u[(j, k)].conj() * fl[k];
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

pub(crate) fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.hermitian_defect();
    if defect > tol {
        return Err(Error::NotHermitian { defect, tol });
    }
    Ok(())
}

pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<HermitianEig> {
    hermitian_eig_with_budget(m, tol, DEFAULT_MAX_SWEEPS)
}

pub fn hermitian_eig_with_budget(m: &ComplexMatrix, tol: f64, max_sweeps: usize) -> Result<HermitianEig> {
    check_hermitian(m, tol)?;
    let n = m.rows();
    // Work on the exactly Hermitian part so roundoff asymmetry cannot accumulate.
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius();
    if n <= 1 || scale == 0.0 {
        return Ok(finish(a, v));
    }
    let threshold = f64::EPSILON * scale * 1e-3;

    let mut converged = false;
    for _sweep in 0..max_sweeps {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let z = a[(p, q)];
                let r = z.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Negligible pivot relative to both diagonal entries: zero it outright.
                if r <= f64::EPSILON * 0.5 * (app.abs() + aqq.abs()) * 1e-2 {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = z / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = [[c, s], [-s·conj(phase), c·conj(phase)]] acting on columns p, q.
                let g11 = Complex64::new(c, 0.0);
                let g12 = Complex64::new(s, 0.0);
                let g21 = -phase.conj() * s;
                let g22 = phase.conj() * c;
                rotate_columns(&mut a, p, q, g11, g12, g21, g22);
                rotate_rows_adjoint(&mut a, p, q, g11, g12, g21, g22);
                rotate_columns(&mut v, p, q, g11, g12, g21, g22);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    if !converged {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off > threshold {
            return Err(Error::NoConvergence { sweeps: max_sweeps });
        }
    }
    Ok(finish(a, v))
}

fn rotate_columns(
    m: &mut ComplexMatrix,
    p: usize,
    q: usize,
    g11: Complex64,
    g12: Complex64,
    g21: Complex64,
    g22: Complex64,
) {
    for i in 0..m.rows() {
        let xp = m[(i, p)];
        let xq = m[(i, q)];
        m[(i, p)] = xp * g11 + xq * g21;
        m[(i, q)] = xp * g12 + xq * g22;
    }
}

/// Left-multiplies by `G*` on rows `p, q`.
fn rotate_rows_adjoint(
    m: &mut ComplexMatrix,
    p: usize,
    q: usize,
    g11: Complex64,
    g12: Complex64,
    g21: Complex64,
    g22: Complex64,
) {
    for j in 0..m.cols() {
        let xp = m[(p, j)];
        let xq = m[(q, j)];
        m[(p, j)] = g11.conj() * xp + g21.conj() * xq;
        m[(q, j)] = g12.conj() * xp + g22.conj() * xq;
    }
}

fn finish(a: ComplexMatrix, v: ComplexMatrix) -> HermitianEig {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    HermitianEig {
        eigenvalues,
        eigenvectors,
    }
}
