//! Orthonormal bases of projection ranges with deterministic phases, and the
//! unitaries built from them.

use num_complex::Complex64;

use crate::error::Result;
use crate::kernel::{hermitian_eig, svd, unitary_spectrum, ComplexMatrix};

/// Rotates each column so its largest-magnitude entry is real and positive.
/// Ties are broken by the lowest row index.
pub(crate) fn fix_phases(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.clone();
    for j in 0..m.cols() {
        let mut best = 0;
        let mut best_abs = -1.0;
        for i in 0..m.rows() {
            let a = m[(i, j)].norm();
            // Entries equal up to roundoff count as ties.
            if a > best_abs * (1.0 + 1e-9) + 1e-14 {
                best = i;
                best_abs = a;
            }
        }
        if best_abs > 0.0 {
            let phase = m[(best, j)].conj() / m[(best, j)].norm();
            for i in 0..m.rows() {
                out[(i, j)] = m[(i, j)] * phase;
            }
        }
    }
    out
}

/// `(range, complement)` column bases of a projection, from eigenvalues above and
/// below one half.
pub(crate) fn split_bases(p: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = p.rows();
    if n == 0 {
        return Ok((ComplexMatrix::zeros(0, 0), ComplexMatrix::zeros(0, 0)));
    }
    let eig = hermitian_eig(&p.hermitian_part(), f64::INFINITY)?;
    let split = eig.eigenvalues.iter().filter(|&&l| l <= 0.5).count();
    let comp = eig.eigenvectors.block(0, 0, n, split);
    let range = eig.eigenvectors.block(0, split, n, n - split);
    Ok((fix_phases(&range), fix_phases(&comp)))
}

/// Unitary factor `U V*` of the polar decomposition `M = U Σ V*`.
pub(crate) fn polar_unitary(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    let s = svd(m, 0.0)?;
    Ok(&s.left * &s.right.adjoint())
}

/// Range bases along a closed loop of projections, rotated so neighbouring
/// samples agree and the holonomy around the loop is spread evenly.
pub(crate) fn loop_range_bases(ps: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let mut bases: Vec<ComplexMatrix> = Vec::with_capacity(ps.len());
    for p in ps {
        let (b, _) = split_bases(p)?;
        let b = match bases.last() {
            Some(prev) if b.cols() > 0 => &b * &polar_unitary(&(&b.adjoint() * prev))?,
            _ => b,
        };
        bases.push(b);
    }
    let n = bases.len();
    if n < 2 || bases[0].cols() == 0 {
        return Ok(bases);
    }
    // After the sweep B₀ ≈ B_{n-1}·G; spreading G over the loop closes it up.
    let g = polar_unitary(&(&bases[n - 1].adjoint() * &bases[0]))?;
    let spec = unitary_spectrum(&g, 1e-8)?;
    for (j, b) in bases.iter_mut().enumerate().skip(1) {
        *b = &*b * &spec.power(j as f64 / n as f64);
    }
    Ok(bases)
}

/// A unitary carrying range and complement bases of one projection onto those of another.
pub(crate) fn transport_unitary(
    from: &(ComplexMatrix, ComplexMatrix),
    to: &(ComplexMatrix, ComplexMatrix),
) -> ComplexMatrix {
    let a = &to.0 * &from.0.adjoint();
    let b = &to.1 * &from.1.adjoint();
    &a + &b
}

pub(crate) fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}
