//! Functional calculus for Hermitian matrices and explicit paths in the unitary group.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::eig::{check_hermitian, hermitian_eig, HermitianEig};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Eigenvalues in `[-DEFAULT_TOL_CLIP, 0)` are treated as zero before applying `f`.
pub const DEFAULT_TOL_CLIP: f64 = 1e-10;

/// `U diag(f(λ)) U*`, with small negative eigenvalues clipped to zero.
///
/// `f` returning a non-finite value at a (clipped) eigenvalue is a domain error.
pub fn matrix_func(m: &ComplexMatrix, f: impl Fn(f64) -> f64, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m, tol)?;
    let mut values = Vec::with_capacity(eig.eigenvalues.len());
    for &l in &eig.eigenvalues {
        let clipped = if (-DEFAULT_TOL_CLIP..0.0).contains(&l) { 0.0 } else { l };
        let y = f(clipped);
        if !y.is_finite() {
            return Err(Error::DomainError(clipped));
        }
        values.push(y);
    }
    let shaped = HermitianEig {
        eigenvalues: values,
        eigenvectors: eig.eigenvectors,
    };
    Ok(shaped.reconstruct().hermitian_part())
}

/// True iff `m` is Hermitian within `tol` and its least eigenvalue is at least `-tol`.
pub fn psd_within(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    check_hermitian(m, tol)?;
    if m.rows() == 0 {
        return Ok(true);
    }
    Ok(hermitian_eig(m, tol)?.min_eigenvalue() >= -tol)
}

/// Spectral decomposition of a unitary: `U = V diag(e^{iθ}) V*` with `θ ∈ (-π, π]`.
#[derive(Debug, Clone)]
pub struct UnitarySpectrum {
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl UnitarySpectrum {
    /// `V diag(e^{i t θ}) V*`.
    pub fn power(&self, t: f64) -> ComplexMatrix {
        let diag: Vec<Complex64> = self.phases.iter().map(|&th| Complex64::from_polar(1.0, t * th)).collect();
        let v = &self.vectors;
        &(v * &ComplexMatrix::from_complex_diag(&diag)) * &v.adjoint()
    }
}

pub fn unitary_defect(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    (&(&u.adjoint() * u) - &ComplexMatrix::identity(u.rows())).max_abs()
}

/// Diagonalises a unitary through its commuting Hermitian parts: the real part
/// first, then the imaginary part restricted to each eigenspace cluster of the real part.
pub fn unitary_spectrum(u: &ComplexMatrix, tol: f64) -> Result<UnitarySpectrum> {
    if !u.is_square() || unitary_defect(u) > tol {
        return Err(Error::NotUnitary);
    }
    let n = u.rows();
    let adj = u.adjoint();
    let re = (u + &adj).scale_real(0.5);
    let im = (u - &adj).scale(Complex64::new(0.0, -0.5));
    let eig_re = hermitian_eig(&re, 1e-8)?;

    let cluster_gap = 1e-7;
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut phases = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig_re.eigenvalues[end] - eig_re.eigenvalues[end - 1] < cluster_gap {
            end += 1;
        }
        let q = eig_re.eigenvectors.block(0, start, n, end - start);
        let compressed = &(&q.adjoint() * &im) * &q;
        let inner = hermitian_eig(&compressed.hermitian_part(), 1e-8)?;
        let rotated = &q * &inner.eigenvectors;
        vectors.set_block(0, start, &rotated);
        for k in 0..end - start {
            let col = rotated.column(k);
            // Rayleigh quotient gives the eigenvalue of U on this vector.
            let uc: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| u[(i, j)] * col[j]).sum()).collect();
            let lambda: Complex64 = col.iter().zip(&uc).map(|(a, b)| a.conj() * b).sum();
            let mut th = lambda.arg();
            if th <= -PI {
                th = PI;
            }
            phases.push(th);
        }
        start = end;
    }
    Ok(UnitarySpectrum { phases, vectors })
}

/// Samples `t ↦ exp(i t H)` for `t = k/(samples-1)`, with `U = exp(iH)` on the
/// principal branch. The first sample is exactly `I` and the last exactly `U`.
pub fn unitary_log_path(u: &ComplexMatrix, samples: usize, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let spec = unitary_spectrum(u, tol)?;
    let n = u.rows();
    let samples = samples.max(2);
    let mut path = Vec::with_capacity(samples);
    path.push(ComplexMatrix::identity(n));
    for k in 1..samples - 1 {
        path.push(spec.power(k as f64 / (samples - 1) as f64));
    }
    path.push(u.clone());
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::svd::spectral_norm;
    use crate::kernel::testutil::{random_psd, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL_EIG: f64 = 1e-11;
    const TOL_PATH: f64 = 1e-8;

    #[test]
    fn sqrt_of_diagonal_and_identity() {
        let m = ComplexMatrix::from_diag(&[4.0, 9.0]);
        let r = matrix_func(&m, f64::sqrt, TOL_EIG).unwrap();
        assert!((&r - &ComplexMatrix::from_diag(&[2.0, 3.0])).max_abs() < 1e-14);
        let i = ComplexMatrix::identity(3);
        let r = matrix_func(&i, f64::sqrt, TOL_EIG).unwrap();
        assert!((&r - &i).max_abs() < 1e-15);
    }

    #[test]
    fn sqrt_of_two_by_two() {
        let m = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let s3 = 3f64.sqrt();
        let expected = ComplexMatrix::from_real_rows(&[&[s3 + 1.0, s3 - 1.0], &[s3 - 1.0, s3 + 1.0]]).scale_real(0.5);
        let r = matrix_func(&m, f64::sqrt, TOL_EIG).unwrap();
        assert!((&r - &expected).max_abs() < 1e-14);
        assert!((&(&r * &r) - &m).max_abs() < 1e-13);
    }

    #[test]
    fn clipping_and_domain_errors() {
        let m = ComplexMatrix::from_diag(&[-1e-12, 1.0]);
        let r = matrix_func(&m, f64::sqrt, TOL_EIG).unwrap();
        assert_eq!(r[(0, 0)].re, 0.0);
        let m = ComplexMatrix::from_diag(&[-1.0, 1.0]);
        assert!(matches!(matrix_func(&m, f64::sqrt, TOL_EIG), Err(Error::DomainError(_))));
    }

    #[test]
    fn sqrt_squares_back_on_random_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=12 {
            for _ in 0..100 {
                let m = random_psd(&mut rng, n);
                let r = matrix_func(&m, f64::sqrt, TOL_EIG).unwrap();
                assert!((&(&r * &r) - &m).max_abs() <= 10.0 * TOL_EIG * (1.0 + m.max_abs()));
                assert!(r.hermitian_defect() <= TOL_EIG);
            }
        }
    }

    #[test]
    fn psd_checks() {
        assert!(psd_within(&ComplexMatrix::identity(2), 1e-9).unwrap());
        assert!(!psd_within(&ComplexMatrix::from_diag(&[1.0, -1.0]), 1e-9).unwrap());
        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(psd_within(&ones, 1e-9).unwrap());
        let skew = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(psd_within(&skew, 1e-9), Err(Error::NotHermitian { .. })));
    }

    fn check_path(u: &ComplexMatrix, samples: usize) -> Vec<ComplexMatrix> {
        let path = unitary_log_path(u, samples, TOL_PATH).unwrap();
        assert_eq!(path.len(), samples);
        assert_eq!(path[0], ComplexMatrix::identity(u.rows()));
        assert!((&path[samples - 1] - u).max_abs() <= TOL_PATH);
        for s in &path {
            assert!(unitary_defect(s) <= TOL_PATH);
        }
        for w in path.windows(2) {
            assert!(spectral_norm(&(&w[1] - &w[0])) <= PI / (samples - 1) as f64 + TOL_PATH);
        }
        // The interior reaches the endpoint continuously.
        assert!((&spec_endpoint(u) - u).max_abs() <= TOL_PATH);
        path
    }

    fn spec_endpoint(u: &ComplexMatrix) -> ComplexMatrix {
        unitary_spectrum(u, TOL_PATH).unwrap().power(1.0)
    }

    #[test]
    fn identity_path_is_constant() {
        let path = check_path(&ComplexMatrix::identity(3), 9);
        for s in path {
            assert!((&s - &ComplexMatrix::identity(3)).max_abs() < 1e-15);
        }
    }

    #[test]
    fn minus_identity_path_rotates_by_pi() {
        let u = ComplexMatrix::identity(2).scale_real(-1.0);
        let path = check_path(&u, 129);
        for (k, s) in path.iter().enumerate() {
            let t = k as f64 / 128.0;
            let z = Complex64::from_polar(1.0, PI * t);
            let expect = ComplexMatrix::identity(2).scale(z);
            assert!((s - &expect).max_abs() < 1e-12 || k == 128);
        }
    }

    #[test]
    fn flip_path_is_unitary_throughout() {
        let u = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        check_path(&u, 129);
    }

    #[test]
    fn random_unitary_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..8 {
            for _ in 0..5 {
                check_path(&random_unitary(&mut rng, n), 129);
            }
        }
    }

    #[test]
    fn conjugate_eigenphases_are_separated() {
        // Real parts coincide for e^{±iθ}; the imaginary part splits them.
        let u = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let spec = unitary_spectrum(&u, TOL_PATH).unwrap();
        let mut ph = spec.phases.clone();
        ph.sort_by(f64::total_cmp);
        assert!((ph[0] + PI / 2.0).abs() < 1e-12 && (ph[1] - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = ComplexMatrix::from_diag(&[1.0, 2.0]);
        assert!(matches!(unitary_log_path(&m, 5, TOL_PATH), Err(Error::NotUnitary)));
    }
}
