//! Dense complex linear algebra: the numerical substrate for every absolute
//! value, norm and path computation in the crate.

mod eig;
mod func;
mod matrix;
mod svd;

pub use eig::{hermitian_eig, hermitian_eig_with_budget, HermitianEig, DEFAULT_MAX_SWEEPS};
pub use func::{
    matrix_func, psd_within, unitary_defect, unitary_log_path, unitary_spectrum, UnitarySpectrum,
    DEFAULT_TOL_CLIP,
};
pub use matrix::ComplexMatrix;
pub use svd::{spectral_norm, svd, Svd};

#[cfg(test)]
pub(crate) mod testutil {
    use num_complex::Complex64;
    use rand::Rng;

    use super::{matrix_func, ComplexMatrix};

    fn gaussian(rng: &mut impl Rng) -> f64 {
        let u1: f64 = rng.gen::<f64>().max(1e-300);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn random_matrix(rng: &mut impl Rng, r: usize, c: usize, scale: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, c, |_, _| Complex64::new(gaussian(rng), gaussian(rng)) * scale)
    }

    pub fn random_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> ComplexMatrix {
        random_matrix(rng, n, n, scale).hermitian_part()
    }

    pub fn random_psd(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let a = random_matrix(rng, n, n, 1.0);
        (&a.adjoint() * &a).hermitian_part()
    }

    pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let h = random_hermitian(rng, n, 1.5);
        let c = matrix_func(&h, f64::cos, 1e-9).unwrap();
        let s = matrix_func(&h, f64::sin, 1e-9).unwrap();
        &c + &s.scale(Complex64::new(0.0, 1.0))
    }
}
