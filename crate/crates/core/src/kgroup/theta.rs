//! The splitting `θ = (η, μ): K → K₀ ⊕ K₁` and the constructions relating
//! partial unitaries to unitaries behind it.

use super::class::{GroupTag, KClass};
use super::lattice::IntMatrix;
use crate::equivalence::pad_with_zero;
use crate::error::{Error, Result};
use crate::model::{
    abs_adjoint, abs_value, is_order_projection, is_partial_isometry, is_partial_unitary, is_unitary, orthogonal,
    AlgebraSpec, Element,
};
use crate::tolerance::Tolerances;

fn require_fd(alg: &AlgebraSpec) -> Result<()> {
    if alg.is_fd() {
        Ok(())
    } else {
        Err(Error::Unsupported("the K-group of circle partial unitaries is only partly classified".into()))
    }
}

/// `[η; μ]` on invariant coordinates. Over block algebras `η` is the identity on
/// support ranks and `μ` lands in the trivial group.
pub fn theta_matrix(alg: &AlgebraSpec) -> Result<IntMatrix> {
    require_fd(alg)?;
    let k = alg.invariant_len();
    Ok(IntMatrix::identity(k).stack(&IntMatrix::zero(GroupTag::K1.invariant_len(alg), k)))
}

/// `u + eⁿ − |u|`, the unitary attached to a partial unitary.
pub fn mu_witness(u: &Element, tol: &Tolerances) -> Result<Element> {
    if !is_partial_unitary(u, tol.pred)? {
        return Err(Error::NotPartialUnitary);
    }
    let e = Element::unit(u.algebra(), u.row_level());
    let w = u.add(&e)?.sub(&abs_value(u)?)?;
    if !is_unitary(&w, tol.pred)? {
        return Err(Error::Inconsistent("u + e − |u| is not unitary".into()));
    }
    Ok(w)
}

/// The image of a K class under `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaImage {
    pub k0: KClass,
    pub k1: KClass,
}

/// `θ(x)`. With a witness pair `(u, v)` the components are computed from
/// `|u|, |v|` and `u + e − |u|, v + e − |v|` and must agree with the invariant formula.
pub fn theta_map(alg: &AlgebraSpec, x: &KClass, tol: &Tolerances) -> Result<ThetaImage> {
    require_fd(alg)?;
    if x.group != GroupTag::K {
        return Err(Error::PreconditionFailure(format!("θ acts on K, not {}", x.group)));
    }
    let m = theta_matrix(alg)?;
    let k = alg.invariant_len();
    let split = |v: &[i64]| {
        let image = m.apply(v);
        (image[..k].to_vec(), image[k..].to_vec())
    };
    let (plus0, plus1) = split(&x.plus);
    let (minus0, minus1) = split(&x.minus);
    let mut k0 = KClass::from_invariants(GroupTag::K0, plus0, minus0);
    let mut k1 = KClass::from_invariants(GroupTag::K1, plus1, minus1);
    if let Some((u, v)) = &x.witness {
        let eta = KClass::from_pair(GroupTag::K0, &abs_value(u)?, &abs_value(v)?, tol)?;
        let mu = KClass::from_pair(GroupTag::K1, &mu_witness(u, tol)?, &mu_witness(v, tol)?, tol)?;
        if eta != k0 || mu != k1 {
            return Err(Error::Inconsistent("θ on witnesses disagrees with θ on invariants".into()));
        }
        k0 = eta;
        k1 = mu;
    }
    Ok(ThetaImage { k0, k1 })
}

/// The preimage `[(v, 0)] − [(e − p, 0)]` of `([(p, 0)], [(v, e)])`, after
/// padding `p` with zeros and `v` with units to a common level.
pub fn theta_preimage(p: &Element, v: &Element, tol: &Tolerances) -> Result<KClass> {
    require_fd(p.algebra())?;
    p.same_algebra(v)?;
    if !is_order_projection(p, tol.pred)? {
        return Err(Error::NotProjection);
    }
    if !is_unitary(v, tol.pred)? {
        return Err(Error::NotUnitary);
    }
    let n = p.row_level().max(v.row_level());
    let p = pad_with_zero(p, n);
    let v = crate::equivalence::pad_with_unit(v, n);
    let complement = Element::unit(p.algebra(), n).sub(&p)?;
    KClass::from_pair(GroupTag::K, &v, &complement, tol)
}

/// `v₁ = v − e + |v|` and `v₂ = v + e − |v|`: two unitaries with mean `v`.
pub fn partial_unitary_decompose(v: &Element, tol: &Tolerances) -> Result<(Element, Element)> {
    if !is_partial_unitary(v, tol.pred)? {
        return Err(Error::NotPartialUnitary);
    }
    let e = Element::unit(v.algebra(), v.row_level());
    let defect = e.sub(&abs_value(v)?)?;
    let v1 = v.sub(&defect)?;
    let v2 = v.add(&defect)?;
    if !is_unitary(&v1, tol.pred)? || !is_unitary(&v2, tol.pred)? {
        return Err(Error::Inconsistent("v ± (e − |v|) is not unitary".into()));
    }
    Ok((v1, v2))
}

/// The sum of mutually orthogonal partial isometries whose sources and targets
/// each add up to `eⁿ`; the sum is unitary.
pub fn orthogonal_sum_unitary(vs: &[Element], tol: &Tolerances) -> Result<Element> {
    let fail = |what: String| Err(Error::PreconditionFailure(what));
    let Some(first) = vs.first() else {
        return fail("no summands".into());
    };
    if !first.is_square() {
        return fail("summands must be square".into());
    }
    for (i, v) in vs.iter().enumerate() {
        if v.same_shape(first).is_err() {
            return fail(format!("summand {i} has a different shape"));
        }
        if !is_partial_isometry(v, tol.pred)? {
            return fail(format!("summand {i} is not a partial isometry"));
        }
    }
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if !orthogonal(&vs[i], &vs[j], tol.pred)? {
                return fail(format!("summands {i} and {j} are not orthogonal"));
            }
        }
    }
    let e = Element::unit(first.algebra(), first.row_level());
    let mut sources = Element::zero(first.algebra(), first.row_level(), first.col_level());
    let mut targets = sources.clone();
    let mut sum = sources.clone();
    for v in vs {
        sources = sources.add(&abs_value(v)?)?;
        targets = targets.add(&abs_adjoint(v)?)?;
        sum = sum.add(v)?;
    }
    if sources.distance(&e)? > tol.pred {
        return fail("the sources do not add up to the unit".into());
    }
    if targets.distance(&e)? > tol.pred {
        return fail("the targets do not add up to the unit".into());
    }
    if !is_unitary(&sum, tol.pred)? {
        return Err(Error::Inconsistent("orthogonal sum is not unitary".into()));
    }
    Ok(sum)
}

/// For a partial isometry `v`: `v` is a partial unitary iff `|v*| ⊥ e − |v|` and
/// `v + e − |v|` is unitary.
pub fn partial_unitary_by_completion(v: &Element, tol: &Tolerances) -> Result<bool> {
    if !is_partial_isometry(v, tol.pred)? {
        return Err(Error::NotPartialIsometry);
    }
    let e = Element::unit(v.algebra(), v.row_level());
    let defect = e.sub(&abs_value(v)?)?;
    Ok(orthogonal(&abs_adjoint(v)?, &defect, tol.pred)? && is_unitary(&v.add(&defect)?, tol.pred)?)
}

/// `v` is a partial unitary iff `v ⊥ e − |v|` and both `v ± (e − |v|)` are unitary.
pub fn partial_unitary_by_orthogonality(v: &Element, tol: &Tolerances) -> Result<bool> {
    if !v.is_square() {
        return Err(Error::LevelMismatch("partial unitaries are square".into()));
    }
    let e = Element::unit(v.algebra(), v.row_level());
    let defect = e.sub(&abs_value(v)?)?;
    Ok(orthogonal(v, &defect, tol.pred)?
        && is_unitary(&v.add(&defect)?, tol.pred)?
        && is_unitary(&v.sub(&defect)?, tol.pred)?)
}
