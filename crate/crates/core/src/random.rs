//! Seeded random elements. Every recipe here is part of the reproducibility
//! contract: a `(seed, trial)` pair fixes the element exactly.
//!
//! The generator is ChaCha8 seeded with `seed_from_u64(seed)` and switched to
//! stream `trial`. Scalars are standard normals by Box-Muller from two
//! uniform `f64` draws.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{matrix_func, ComplexMatrix};
use crate::model::{AlgebraSpec, Element};

/// The RNG for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Entries `x + iy` with `x, y` standard normal, times `scale`.
pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex64::new(gaussian(rng), gaussian(rng)) * scale)
}

pub fn hermitian_matrix(rng: &mut impl Rng, n: usize, scale: f64) -> ComplexMatrix {
    gaussian_matrix(rng, n, n, scale).hermitian_part()
}

/// `exp(iH)` for a Hermitian `H`.
pub fn exp_i(h: &ComplexMatrix) -> ComplexMatrix {
    let c = matrix_func(h, f64::cos, f64::INFINITY).expect("Hermitian input");
    let s = matrix_func(h, f64::sin, f64::INFINITY).expect("Hermitian input");
    &c + &s.scale(Complex64::new(0.0, 1.0))
}

/// `exp(iH)` with `H` a Hermitian Gaussian matrix of scale 1.5.
pub fn unitary_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    exp_i(&hermitian_matrix(rng, n, 1.5))
}

/// Diagonal 0/1 matrix with ones in the first `rank` slots.
pub fn corner(rows: usize, cols: usize, rank: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        if i == j && i < rank {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Samples `z ↦ H₀ + z H₁ + z̄ H₁*` of a Hermitian trigonometric polynomial.
fn circle_hermitian(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize, scale: f64) -> Vec<ComplexMatrix> {
    let h0 = hermitian_matrix(rng, n, scale);
    // Coarse grids get a slower loop so consecutive samples stay resolved.
    let resolved = (alg.num_parts() as f64 / 64.0).min(1.0);
    let h1 = gaussian_matrix(rng, n, n, scale * 0.5 * resolved);
    sample_loop(alg, |z| &(&h0 + &h1.scale(z)) + &h1.adjoint().scale(z.conj()))
}

fn sample_loop(alg: &AlgebraSpec, f: impl Fn(Complex64) -> ComplexMatrix) -> Vec<ComplexMatrix> {
    (0..alg.num_parts()).map(|j| f(alg.sample_point(j).expect("circle algebra"))).collect()
}

fn build(alg: &AlgebraSpec, rows: usize, cols: usize, parts: Vec<ComplexMatrix>) -> Element {
    Element::new(alg.clone(), rows, cols, parts).expect("generated parts have the right shape")
}

/// A general element at level `rows × cols`. Blocks get Gaussian entries; over
/// the circle the element is `A + zB + z̄C` with Gaussian `A, B, C` of scale 1/√3.
pub fn element(rng: &mut impl Rng, alg: &AlgebraSpec, rows: usize, cols: usize) -> Element {
    if alg.is_fd() {
        let parts = alg
            .part_dims()
            .iter()
            .map(|&d| gaussian_matrix(rng, rows * d, cols * d, 1.0))
            .collect();
        return build(alg, rows, cols, parts);
    }
    let d = alg.part_dim(0);
    let s = 1.0 / 3f64.sqrt();
    let (a, b, c) = (
        gaussian_matrix(rng, rows * d, cols * d, s),
        gaussian_matrix(rng, rows * d, cols * d, s),
        gaussian_matrix(rng, rows * d, cols * d, s),
    );
    build(alg, rows, cols, sample_loop(alg, |z| &(&a + &b.scale(z)) + &c.scale(z.conj())))
}

/// The Hermitian part of [`element`].
pub fn selfadjoint(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize) -> Element {
    let x = element(rng, alg, n, n);
    x.add(&x.adjoint()).expect("same shape").scale_real(0.5)
}

/// `x* x` for `x` from [`element`].
pub fn positive(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize) -> Element {
    let x = element(rng, alg, n, n);
    x.adjoint().mul(&x).expect("square").map_parts(n, n, |_, m| m.hermitian_part())
}

/// Continuous unitary change of basis per part: `exp(iH)` per block, or
/// `exp(iH(z))` for a Hermitian trigonometric polynomial over the circle.
pub fn unitary_frame(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize) -> Vec<ComplexMatrix> {
    if alg.is_fd() {
        return alg.part_dims().iter().map(|&d| unitary_matrix(rng, n * d)).collect();
    }
    circle_hermitian(rng, alg, n * alg.part_dim(0), 1.0).iter().map(exp_i).collect()
}

/// A unitary at level `n`. Blocks get `exp(iH)`. Over the circle the sample at
/// `z` is `diag(z^{w₁}, …) · exp(iH(z))` with each `wₖ` uniform in `{-1, 0, 1}`.
pub fn unitary(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize) -> Element {
    if alg.is_fd() {
        return build(alg, n, n, unitary_frame(rng, alg, n));
    }
    let size = n * alg.part_dim(0);
    let windings: Vec<i32> = (0..size).map(|_| rng.gen_range(-1..=1)).collect();
    unitary_with_windings(rng, alg, n, &windings)
}

/// A circle unitary `diag(z^{w₁}, …) · exp(iH(z))` with prescribed exponents.
pub fn unitary_with_windings(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize, windings: &[i32]) -> Element {
    let f = unitary_frame(rng, alg, n);
    let parts = f
        .iter()
        .enumerate()
        .map(|(j, u)| {
            let z = alg.sample_point(j).expect("circle algebra");
            let d: Vec<Complex64> = windings.iter().map(|&w| z.powi(w)).collect();
            &ComplexMatrix::from_complex_diag(&d) * u
        })
        .collect();
    build(alg, n, n, parts)
}

/// Per-part ranks for a projection at level `n`: uniform in `0..=n·dᵢ` per
/// block, one common rank over the circle.
pub fn ranks(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize) -> Vec<usize> {
    if alg.is_fd() {
        return alg.part_dims().iter().map(|&d| rng.gen_range(0..=n * d)).collect();
    }
    let r = rng.gen_range(0..=n * alg.part_dim(0));
    vec![r; alg.num_parts()]
}

/// `W D W*` with `D` a 0/1 diagonal of the given per-part ranks and `W` from a
/// continuous frame.
pub fn projection_with_ranks(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize, ranks: &[usize]) -> Element {
    let f = unitary_frame(rng, alg, n);
    let parts = f
        .iter()
        .zip(ranks)
        .map(|(w, &r)| (&(w * &corner(w.rows(), w.cols(), r)) * &w.adjoint()).hermitian_part())
        .collect();
    build(alg, n, n, parts)
}

pub fn projection(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize) -> Element {
    let r = ranks(rng, alg, n);
    projection_with_ranks(rng, alg, n, &r)
}

/// `U D V*` with continuous unitary frames `U`, `V` and a 0/1 corner `D` of rank
/// uniform in `0..=min` (one rank shared by all parts over the circle).
pub fn partial_isometry(rng: &mut impl Rng, alg: &AlgebraSpec, rows: usize, cols: usize) -> Element {
    let left = unitary_frame(rng, alg, rows);
    let right = unitary_frame(rng, alg, cols);
    let shared = rng.gen_range(0..=rows.min(cols) * alg.part_dim(0));
    let parts = left
        .iter()
        .zip(&right)
        .map(|(u, v)| {
            let r = if alg.is_fd() { rng.gen_range(0..=u.rows().min(v.rows())) } else { shared };
            &(u * &corner(u.rows(), v.rows(), r)) * &v.adjoint()
        })
        .collect();
    build(alg, rows, cols, parts)
}

/// `W (D · exp(i D H D)) W*` with `D` a 0/1 corner: a unitary on the range of
/// `W D W*` and zero off it. Over the circle `W` is constant, the corner unitary
/// varies continuously and its winding is shifted by `z^w` on the first slot
/// with `w` uniform in `{-1, 0, 1}`.
pub fn partial_unitary(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize) -> Element {
    let r = ranks(rng, alg, n);
    partial_unitary_with_ranks(rng, alg, n, &r)
}

pub fn partial_unitary_with_ranks(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize, ranks: &[usize]) -> Element {
    if alg.is_fd() {
        let parts = alg
            .part_dims()
            .iter()
            .zip(ranks)
            .map(|(&d, &r)| {
                let w = unitary_matrix(rng, n * d);
                let p = corner(n * d, n * d, r);
                let h = &(&p * &hermitian_matrix(rng, n * d, 1.5)) * &p;
                let core = &p * &exp_i(&h);
                &(&w * &core) * &w.adjoint()
            })
            .collect();
        return build(alg, n, n, parts);
    }
    let size = n * alg.part_dim(0);
    let r = ranks[0];
    let w = unitary_matrix(rng, size);
    let p = corner(size, size, r);
    let shift: i32 = rng.gen_range(-1..=1);
    let hs = circle_hermitian(rng, alg, size, 1.0);
    let parts = hs
        .iter()
        .enumerate()
        .map(|(j, h)| {
            let z = alg.sample_point(j).expect("circle algebra");
            let h = &(&p * h) * &p;
            let mut core = &p * &exp_i(&h);
            if r > 0 {
                for c in 0..size {
                    core[(0, c)] *= z.powi(shift);
                }
            }
            &(&w * &core) * &w.adjoint()
        })
        .collect();
    build(alg, n, n, parts)
}
