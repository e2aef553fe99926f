//! Thin SVD by one-sided (Hestenes) Jacobi.
//!
//! Columns are orthogonalised pairwise with the same phase-then-rotate
//! update as the Hermitian solver, which keeps singular values accurate in
//! absolute terms even when they are tiny.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// `M = left · diag(singulars) · right*` with `k = min(rows, cols)` columns each.
#[derive(Debug, Clone)]
pub struct Svd {
    pub left: ComplexMatrix,
    pub singulars: Vec<f64>,
    pub right: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singulars.len();
        let (m, n) = (self.left.rows(), self.right.rows());
        ComplexMatrix::from_fn(m, n, |i, j| {
            (0..k)
                .map(|t| self.left[(i, t)] * self.right[(j, t)].conj() * self.singulars[t])
                .sum()
        })
    }

    pub fn max_singular(&self) -> f64 {
        self.singulars.first().copied().unwrap_or(0.0)
    }
}

pub fn svd(m: &ComplexMatrix, _tol: f64) -> Result<Svd> {
    if m.rows() >= m.cols() {
        tall_svd(m)
    } else {
        let t = tall_svd(&m.adjoint())?;
        Ok(Svd {
            left: t.right,
            singulars: t.singulars,
            right: t.left,
        })
    }
}

/// Largest singular value (operator norm).
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    match svd(m, 0.0) {
        Ok(s) => s.max_singular(),
        // Unreachable in practice; the Frobenius norm is a safe upper bound.
        Err(_) => m.frobenius(),
    }
}

fn tall_svd(m: &ComplexMatrix) -> Result<Svd> {
    let (rows, n) = (m.rows(), m.cols());
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    // Pairs whose inner product is negligible against the whole matrix are left
    // alone; otherwise roundoff-sized columns of a rank-deficient input keep rotating.
    let floor = f64::EPSILON * f64::EPSILON * m.frobenius().powi(2);
    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g <= floor || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let pc = phase.conj();
                for vecs in [&mut cols, &mut v] {
                    let (head, tail) = vecs.split_at_mut(q);
                    let (xp, xq) = (&mut head[p], &mut tail[0]);
                    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
                        let bq = *b * pc;
                        let ap = *a;
                        *a = ap * c - bq * s;
                        *b = ap * s + bq * c;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let scale = norms.iter().copied().fold(0.0, f64::max);
    if !scale.is_finite() {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let cut = scale * f64::EPSILON * 8.0;
    let mut left: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut right: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut singulars = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for &j in &order {
        let s = norms[j];
        singulars.push(s);
        right.push(v[j].clone());
        // Columns of small singular values are orthogonal only up to about
        // eps·scale/s; re-orthogonalising in decreasing order moves them by that
        // much, which costs at most eps·scale in the reconstruction.
        let mut u: Vec<Complex64> = if s > cut { cols[j].iter().map(|z| z / s).collect() } else { Vec::new() };
        if !u.is_empty() {
            project_out(&mut u, &left);
            let r = norm(&u);
            if r > 0.5 {
                u.iter_mut().for_each(|z| *z /= r);
            } else {
                u.clear();
            }
        }
        if u.is_empty() {
            deficient.push(left.len());
        }
        left.push(u);
    }
    complete_orthonormal(rows, &mut left, &deficient);

    Ok(Svd {
        left: ComplexMatrix::from_columns(rows, &left),
        singulars,
        right: ComplexMatrix::from_columns(n, &right),
    })
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Two passes of Gram-Schmidt against the nonempty columns.
fn project_out(x: &mut [Complex64], columns: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for c in columns.iter().filter(|c| !c.is_empty()) {
            let proj: Complex64 = c.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
            for (y, a) in x.iter_mut().zip(c) {
                *y -= proj * a;
            }
        }
    }
}

/// Fills the listed slots with unit vectors orthogonal to every other column,
/// taking for each slot the coordinate vector with the largest residual.
fn complete_orthonormal(dim: usize, columns: &mut [Vec<Complex64>], slots: &[usize]) {
    for &slot in slots {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for candidate in 0..dim {
            let mut e = vec![ZERO; dim];
            e[candidate] = Complex64::new(1.0, 0.0);
            project_out(&mut e, columns);
            let r = norm(&e);
            if best.as_ref().map_or(true, |(b, _)| r > *b) {
                best = Some((r, e));
            }
        }
        let (r, e) = best.expect("a tall matrix has at least as many rows as columns");
        columns[slot] = e.iter().map(|z| z / r).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::eig::hermitian_eig;
    use crate::kernel::testutil::{random_matrix, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-11;

    fn check(m: &ComplexMatrix) -> Svd {
        let s = svd(m, TOL).unwrap();
        assert!((&s.reconstruct() - m).max_abs() <= TOL * (1.0 + m.max_abs()));
        let k = s.singulars.len();
        let lg = &s.left.adjoint() * &s.left;
        let rg = &s.right.adjoint() * &s.right;
        assert!((&lg - &ComplexMatrix::identity(k)).max_abs() <= TOL);
        assert!((&rg - &ComplexMatrix::identity(k)).max_abs() <= TOL);
        assert!(s.singulars.windows(2).all(|w| w[0] >= w[1]));
        assert!(s.singulars.iter().all(|&x| x >= 0.0));
        s
    }

    #[test]
    fn zero_matrix_has_zero_singulars() {
        let s = check(&ComplexMatrix::zeros(3, 2));
        assert_eq!(s.singulars, vec![0.0, 0.0]);
    }

    #[test]
    fn unitary_has_unit_singulars() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..8 {
            let u = random_unitary(&mut rng, n);
            let s = check(&u);
            assert!(s.singulars.iter().all(|&x| (x - 1.0).abs() <= TOL));
        }
    }

    #[test]
    fn matrix_unit_matches_eig_oracle() {
        let e12 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        // Oracle: e12* e12 = diag(0, 1), whose eigenvalues are the squared singulars.
        let gram = &e12.adjoint() * &e12;
        let eig = hermitian_eig(&gram, TOL).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0, 1.0]);
        let s = check(&e12);
        assert_eq!(s.singulars, vec![1.0, 0.0]);
    }

    #[test]
    fn random_rectangular_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for r in 1..7 {
            for c in 1..7 {
                let m = random_matrix(&mut rng, r, c, 2.0);
                let s = check(&m);
                let gram = &m.adjoint() * &m;
                let eig = hermitian_eig(&gram, TOL).unwrap();
                let top = eig.max_eigenvalue().max(0.0).sqrt();
                assert!((top - s.max_singular()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rank_deficient_left_factor_is_completed() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0], &[0.0, 0.0]]);
        let s = check(&m);
        assert!((s.singulars[0] - 2.0).abs() < 1e-14);
        assert!(s.singulars[1] < 1e-15);
    }
}
