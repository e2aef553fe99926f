//! Absolute values, order-unit norms, positivity, orthogonality and the
//! classification predicates, evaluated part by part.

use serde::Serialize;

use super::element::Element;
use crate::error::{Error, Result};
use crate::kernel::{hermitian_eig, psd_within, svd, ComplexMatrix};

/// `(a*a)^{1/2}` for a single part, from the right singular vectors.
///
/// Going through the SVD rather than the square root of `a*a` keeps the error
/// at the level of machine precision near zero singular values.
pub fn part_abs(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.cols();
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    if a.rows() == 0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let s = svd(a, 0.0)?;
    let r = &s.right;
    let k = s.singulars.len();
    let out = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..k)
            .filter(|&t| s.singulars[t] != 0.0)
            .map(|t| r[(i, t)] * r[(j, t)].conj() * s.singulars[t])
            .sum()
    });
    Ok(out.hermitian_part())
}

/// `(|a|, |a*|)` from one SVD `a = U S V*`: `V S V*` and `U S U*`.
fn part_abs_pair(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok((part_abs(a)?, ComplexMatrix::zeros(a.rows(), a.rows())));
    }
    let s = svd(a, 0.0)?;
    let gram = |w: &ComplexMatrix| {
        let n = w.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..s.singulars.len())
                .filter(|&t| s.singulars[t] != 0.0)
                .map(|t| w[(i, t)] * w[(j, t)].conj() * s.singulars[t])
                .sum()
        })
        .hermitian_part()
    };
    Ok((gram(&s.right), gram(&s.left)))
}

/// `|v|`, an `n`-level positive element for `v` at level `m × n`.
pub fn abs_value(v: &Element) -> Result<Element> {
    v.try_map_parts(v.col_level(), v.col_level(), |_, p| part_abs(p))
}

/// `|v*|`.
pub fn abs_adjoint(v: &Element) -> Result<Element> {
    abs_value(&v.adjoint())
}

/// `‖v‖ = inf{k : [[k eⁿ, v], [v*, k eⁿ]] ⪰ 0}` by bisection on `k`.
///
/// Rectangular elements are measured through their dilation `[[0, v], [v*, 0]]`,
/// which has the same norm.
pub fn order_unit_norm(v: &Element, tol_bisect: f64) -> Result<f64> {
    if !v.is_square() {
        return order_unit_norm(&v.dilation(), tol_bisect);
    }
    let scale = v.parts().iter().map(ComplexMatrix::frobenius).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    // Feasibility is decided against a tolerance far below the bisection width.
    // The spectrum of [[k e, v], [v*, k e]] is that of [[0, v], [v*, 0]] shifted
    // by k, so each part is decomposed once and the bisection reads the shift.
    let psd_tol = 1e-14 * scale;
    let mut least = f64::INFINITY;
    for p in v.parts() {
        let z = ComplexMatrix::zeros(p.rows(), p.rows());
        let m = ComplexMatrix::block_2x2(&z, p, &p.adjoint(), &z);
        least = least.min(hermitian_eig(&m, psd_tol)?.min_eigenvalue());
    }
    let (mut lo, mut hi) = (0.0, scale * (1.0 + 1e-12));
    while hi - lo > tol_bisect {
        let mid = 0.5 * (lo + hi);
        if least + mid >= -psd_tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn is_selfadjoint(v: &Element, tol: f64) -> bool {
    v.is_square() && v.within(&v.adjoint(), tol).expect("same shape")
}

pub fn is_positive(v: &Element, tol: f64) -> Result<bool> {
    if !is_selfadjoint(v, tol) {
        return Ok(false);
    }
    for p in v.parts() {
        if !psd_within(&p.hermitian_part(), tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn close(a: &Element, b: &Element, tol: f64) -> Result<bool> {
    a.within(b, tol)
}

/// `‖w*w − eⁿ‖ ≤ tol` implies `‖|w| − eⁿ‖ ≤ tol`, because `|√λ − 1| ≤ |λ − 1|`
/// for `λ ≥ 0`. Bounding the left side by its Frobenius norm gives a cheap
/// sufficient test for `|w| = eⁿ` (or `|w*| = eⁿ` with `outer`); callers fall
/// back to the exact test when it fails.
fn square_near_unit(w: &Element, outer: bool, tol: f64) -> bool {
    w.parts().iter().all(|p| p.gram_defect_frobenius(outer) <= tol)
}

/// `v* = v` and `|2v − eⁿ| = eⁿ`.
pub fn is_order_projection(v: &Element, tol: f64) -> Result<bool> {
    if !is_selfadjoint(v, tol) {
        return Ok(false);
    }
    let e = Element::unit(v.algebra(), v.row_level());
    let w = v.scale_real(2.0).sub(&e)?;
    if square_near_unit(&w, false, tol) {
        return Ok(true);
    }
    close(&abs_value(&w)?, &e, tol)
}

/// Frobenius bounds `(ε, δ)` with `ε ≥ ‖v − v v* v‖` and `δ ≥ ‖v*v − vv*‖`,
/// padded for the rounding in forming them.
///
/// The singular values of `v − v v* v` are `|σ − σ³|`, so every singular value
/// `σ` of `v` lies within `4ε/3` of `{0, 1}`. Then `|v|` and `|v*|` are within
/// `4ε/3` of the source and range projections, `‖|2|v| − e| − e‖ ≤ 8ε/3`, and
/// `‖|v| − |v*|‖ ≤ 8ε + 4ε² + δ`.
fn isometry_bounds(p: &ComplexMatrix) -> (f64, f64) {
    let fro = p.frobenius();
    let guard = 64.0 * (p.rows() + p.cols()) as f64 * f64::EPSILON * (1.0 + fro).powi(3);
    let inner = &p.adjoint() * p;
    let eps = p.frobenius_distance(&(p * &inner)) + guard;
    let delta = if p.is_square() { inner.frobenius_distance(&(p * &p.adjoint())) + guard } else { f64::INFINITY };
    (eps, delta)
}

/// `|v|` and `|v*|` are order projections.
pub fn is_partial_isometry(v: &Element, tol: f64) -> Result<bool> {
    if v.parts().iter().all(|p| 8.0 / 3.0 * isometry_bounds(p).0 <= tol) {
        return Ok(true);
    }
    Ok(is_order_projection(&abs_value(v)?, tol)? && is_order_projection(&abs_adjoint(v)?, tol)?)
}

/// `|u| = eⁿ = |u*|`.
pub fn is_unitary(v: &Element, tol: f64) -> Result<bool> {
    require_square(v)?;
    if square_near_unit(v, false, tol) && square_near_unit(v, true, tol) {
        return Ok(true);
    }
    let e = Element::unit(v.algebra(), v.row_level());
    Ok(close(&abs_value(v)?, &e, tol)? && close(&abs_adjoint(v)?, &e, tol)?)
}

/// `|u| = |u*|` and this common value is an order projection.
pub fn is_partial_unitary(v: &Element, tol: f64) -> Result<bool> {
    require_square(v)?;
    for p in v.parts() {
        let (eps, delta) = isometry_bounds(p);
        if 8.0 * eps + 4.0 * eps * eps + delta <= tol {
            continue;
        }
        let (a, b) = part_abs_pair(p)?;
        if !a.within(&b, tol) || !part_is_order_projection(&a, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`is_order_projection`] for one square part.
fn part_is_order_projection(p: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !p.within(&p.adjoint(), tol) {
        return Ok(false);
    }
    let e = ComplexMatrix::identity(p.rows());
    let w = &p.scale_real(2.0) - &e;
    Ok(w.gram_defect_frobenius(false) <= tol || part_abs(&w)?.within(&e, tol))
}

fn require_square(v: &Element) -> Result<()> {
    if !v.is_square() {
        return Err(Error::LevelMismatch(format!(
            "expected a square level, got {}x{}",
            v.row_level(),
            v.col_level()
        )));
    }
    Ok(())
}

/// Membership flags for the distinguished subsets of `Mₙ(V)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElementClass {
    pub is_selfadjoint: bool,
    pub is_positive: bool,
    pub is_order_projection: bool,
    pub is_partial_isometry: bool,
    pub is_unitary: bool,
    pub is_partial_unitary: bool,
}

/// Evaluates every predicate at `tol`. Rectangular elements are rejected; use
/// [`is_partial_isometry`] directly for those.
pub fn classify(v: &Element, tol: f64) -> Result<ElementClass> {
    require_square(v)?;
    Ok(ElementClass {
        is_selfadjoint: is_selfadjoint(v, tol),
        is_positive: is_positive(v, tol)?,
        is_order_projection: is_order_projection(v, tol)?,
        is_partial_isometry: is_partial_isometry(v, tol)?,
        is_unitary: is_unitary(v, tol)?,
        is_partial_unitary: is_partial_unitary(v, tol)?,
    })
}

fn positive_orthogonal(u: &Element, v: &Element, tol: f64) -> Result<bool> {
    close(&abs_value(&u.sub(v)?)?, &u.add(v)?, tol)
}

/// `u ⊥ v`: `|u − v| = u + v` for positives, otherwise `|u| ⊥ |v|` and `|u*| ⊥ |v*|`.
pub fn orthogonal(u: &Element, v: &Element, tol: f64) -> Result<bool> {
    u.same_shape(v)?;
    if u.is_square() && is_positive(u, tol)? && is_positive(v, tol)? {
        return positive_orthogonal(u, v, tol);
    }
    Ok(positive_orthogonal(&abs_value(u)?, &abs_value(v)?, tol)?
        && positive_orthogonal(&abs_adjoint(u)?, &abs_adjoint(v)?, tol)?)
}

/// `u ⊥∞ v` through `‖ u/‖u‖ + v/‖v‖ ‖ = 1` for nonzero positives.
///
/// Norms are taken as operator norms, which coincide with the order-unit norm in
/// both models.
pub fn orthogonal_infty(u: &Element, v: &Element, tol: f64) -> Result<bool> {
    u.same_shape(v)?;
    let (nu, nv) = (u.norm(), v.norm());
    if nu <= tol || nv <= tol {
        return Err(Error::ZeroOperand);
    }
    let s = u.scale_real(1.0 / nu).add(&v.scale_real(1.0 / nv))?;
    Ok((s.norm() - 1.0).abs() <= tol)
}

/// `u ⊥∞ᵃ v`, decided by the algebraic characterisation `uv = 0`.
pub fn orthogonal_infty_a(u: &Element, v: &Element, tol: f64) -> Result<bool> {
    u.same_shape(v)?;
    Ok(u.mul(v)?.norm() <= tol)
}
