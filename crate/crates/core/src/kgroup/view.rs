//! The three groups of a model algebra as ordered abelian groups.

use num_complex::Complex64;
use serde::Serialize;

use super::class::{class_invariant, grothendieck_complete, GroupTag, KClass, MonoidElement};
use super::theta::theta_matrix;
use crate::equivalence::{homotopic_unitaries, STEP_BOUND};
use crate::error::Result;
use crate::kernel::ComplexMatrix;
use crate::model::{AlgebraSpec, Element};
use crate::random::{trial_rng, unitary};
use crate::tolerance::Tolerances;

/// Shape of the positive cone inside the invariant lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cone {
    /// Componentwise nonnegative vectors.
    #[serde(rename = "nonneg-orthant")]
    NonnegOrthant,
    /// Every element is positive.
    #[serde(rename = "whole-group")]
    WholeGroup,
    /// `(r, w)` with support rank `r > 0` and any winding `w`, plus zero.
    #[serde(rename = "positive-rank-or-zero")]
    PositiveRankOrZero,
}

impl Cone {
    pub fn contains(self, g: &[i64]) -> bool {
        match self {
            Cone::NonnegOrthant => g.iter().all(|&x| x >= 0),
            Cone::WholeGroup => true,
            Cone::PositiveRankOrZero => g[0] > 0 || g.iter().all(|&x| x == 0),
        }
    }

    /// Whether `K⁺ ∩ (−K⁺) = {0}`.
    pub fn is_proper(self, rank: usize) -> bool {
        match self {
            Cone::NonnegOrthant | Cone::PositiveRankOrZero => true,
            Cone::WholeGroup => rank == 0,
        }
    }
}

/// A generator of the group together with a representative realizing it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generator {
    pub invariant: Vec<i64>,
    pub witness: Element,
}

/// Facts about the group that are reported rather than assumed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupFlags {
    pub cone_proper: bool,
    /// For K₁: whether `v ⊕ v* ~ₕ e²ⁿ` held with a validated path for every sampled `v`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub whitehead: Option<bool>,
    /// Set when only part of the group is computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fragment: Option<String>,
    /// For K over block algebras: rank of the kernel of `K → K₀ ⊕ K₁`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_kernel_rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderedGroupView {
    pub group: GroupTag,
    pub rank: usize,
    pub cone: Cone,
    pub order_unit: Vec<i64>,
    pub generators: Vec<Generator>,
    pub flags: GroupFlags,
}

impl OrderedGroupView {
    pub fn in_cone(&self, x: &KClass) -> bool {
        x.group == self.group && self.cone.contains(&x.normal_form)
    }

    pub fn order_unit_class(&self) -> KClass {
        let z = vec![0; self.order_unit.len()];
        match self.group {
            // The distinguished unit of K₁ is [(e, e)].
            GroupTag::K1 => KClass::from_invariants(self.group, z.clone(), z),
            _ => KClass::from_invariants(self.group, self.order_unit.clone(), z),
        }
    }

    /// `a ≤ b` in the cone order.
    pub fn le(&self, a: &KClass, b: &KClass) -> bool {
        self.in_cone(&b.sub(a))
    }

    /// Least `n ≤ limit` with `−n·u ≤ g ≤ n·u` for the order unit `u`.
    pub fn order_unit_bound(&self, g: &KClass, limit: i64) -> Option<i64> {
        let u = self.order_unit_class();
        (0..=limit).find(|&n| self.le(&u.times(-n), g) && self.le(g, &u.times(n)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("group views always serialize")
    }
}

fn rank_one_corner(alg: &AlgebraSpec, part: usize) -> Element {
    Element::from_parts_fn(alg, 1, 1, |i, d| {
        let mut diag = vec![0.0; d];
        if !alg.is_fd() || i == part {
            diag[0] = 1.0;
        }
        ComplexMatrix::from_diag(&diag)
    })
    .expect("diagonal parts")
}

/// `z ↦ diag(first·z, rest, …, rest)`.
fn winding_one(alg: &AlgebraSpec, first: Complex64, rest: f64) -> Element {
    Element::from_parts_fn(alg, 1, 1, |j, d| {
        let z = alg.sample_point(j).expect("circle algebra");
        let mut diag = vec![Complex64::new(rest, 0.0); d];
        diag[0] = z * first;
        ComplexMatrix::from_complex_diag(&diag)
    })
    .expect("diagonal parts")
}

fn complete(group: GroupTag, witnesses: Vec<Element>, tol: &Tolerances) -> Result<(usize, Vec<Generator>)> {
    let gens = witnesses
        .iter()
        .map(|w| MonoidElement::of(group, w, tol))
        .collect::<Result<Vec<_>>>()?;
    let description = grothendieck_complete(group, &gens, tol)?;
    let generators = gens
        .into_iter()
        .map(|g| Generator {
            invariant: g.invariant,
            witness: g.witness.expect("built from witnesses"),
        })
        .collect();
    Ok((description.rank, generators))
}

/// K₀: projection ranks, one per block (one for the circle), ordered by the
/// nonnegative orthant with unit `[(e, 0)]`.
pub fn k0_group(alg: &AlgebraSpec, tol: &Tolerances) -> Result<OrderedGroupView> {
    let witnesses = (0..alg.invariant_len()).map(|i| rank_one_corner(alg, i)).collect();
    let (rank, generators) = complete(GroupTag::K0, witnesses, tol)?;
    let cone = Cone::NonnegOrthant;
    Ok(OrderedGroupView {
        group: GroupTag::K0,
        rank,
        cone,
        order_unit: class_invariant(GroupTag::K0, &Element::unit(alg, 1), tol)?,
        generators,
        flags: GroupFlags {
            cone_proper: cone.is_proper(rank),
            whitehead: None,
            fragment: None,
            theta_kernel_rank: None,
        },
    })
}

/// Checks `v ⊕ v* ~ₕ e²ⁿ` by building and validating the path.
pub fn whitehead_holds(v: &Element, tol: &Tolerances) -> Result<bool> {
    let w = v.direct_sum(&v.adjoint())?;
    let e = Element::unit(v.algebra(), w.row_level());
    match homotopic_unitaries(&w, &e, tol)? {
        (true, Some(path)) => Ok(path.validate(&w, &e, tol.path, STEP_BOUND).is_ok()),
        _ => Ok(false),
    }
}

/// K₁: trivial over block algebras, `ℤ` by winding over the circle. Every class
/// `[(v, e)]` is positive, so the cone is the whole group.
pub fn k1_group(alg: &AlgebraSpec, tol: &Tolerances) -> Result<OrderedGroupView> {
    let witnesses = if alg.is_fd() {
        vec![Element::unit(alg, 1)]
    } else {
        vec![winding_one(alg, Complex64::new(1.0, 0.0), 1.0)]
    };
    let (rank, generators) = complete(GroupTag::K1, witnesses.clone(), tol)?;
    let mut samples = witnesses;
    let mut rng = trial_rng(0, 0);
    samples.extend((1..=2).map(|n| unitary(&mut rng, alg, n)));
    let mut whitehead = true;
    for v in &samples {
        whitehead &= whitehead_holds(v, tol)?;
    }
    let cone = Cone::WholeGroup;
    Ok(OrderedGroupView {
        group: GroupTag::K1,
        rank,
        cone,
        order_unit: vec![0; GroupTag::K1.invariant_len(alg)],
        generators,
        flags: GroupFlags {
            cone_proper: cone.is_proper(rank),
            whitehead: Some(whitehead),
            fragment: None,
            theta_kernel_rank: None,
        },
    })
}

/// K: support ranks over block algebras. Over the circle only partial unitaries
/// with constant support are classified; the view covers that fragment and says so.
pub fn k_group(alg: &AlgebraSpec, tol: &Tolerances) -> Result<OrderedGroupView> {
    let (witnesses, cone, fragment, kernel) = if alg.is_fd() {
        let w = (0..alg.invariant_len()).map(|i| rank_one_corner(alg, i)).collect();
        (w, Cone::NonnegOrthant, None, Some(theta_matrix(alg)?.kernel_rank()))
    } else {
        let p = rank_one_corner(alg, 0);
        let d = alg.part_dim(0);
        let zp = winding_one(alg, Complex64::new(1.0, 0.0), 0.0);
        let note = format!(
            "constant-support partial unitaries only; coordinates are (support rank, winding) with unit rank {d}"
        );
        (vec![p, zp], Cone::PositiveRankOrZero, Some(note), None)
    };
    let (rank, generators) = complete(GroupTag::K, witnesses, tol)?;
    Ok(OrderedGroupView {
        group: GroupTag::K,
        rank,
        cone,
        order_unit: class_invariant(GroupTag::K, &Element::unit(alg, 1), tol)?,
        generators,
        flags: GroupFlags {
            cone_proper: cone.is_proper(rank),
            whitehead: None,
            fragment,
            theta_kernel_rank: kernel,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_of_blocks() {
        let tol = Tolerances::default();
        let v = k0_group(&AlgebraSpec::fd(&[2, 3]).unwrap(), &tol).unwrap();
        assert_eq!((v.rank, v.order_unit.clone()), (2, vec![2, 3]));
        assert!(v.flags.cone_proper);
        let g = KClass::from_invariants(GroupTag::K0, vec![1, 0], vec![0, 7]);
        assert_eq!(v.order_unit_bound(&g, 10), Some(3));
        let text = v.to_json();
        assert!(text.starts_with(r#"{"group":"K0","rank":2,"cone":"nonneg-orthant","order_unit":[2,3],"generators":["#));
        let line = k0_group(&AlgebraSpec::fd(&[1]).unwrap(), &tol).unwrap();
        assert_eq!((line.rank, line.order_unit), (1, vec![1]));
    }

    #[test]
    fn k1_of_both_models() {
        let tol = Tolerances::default();
        let fd = k1_group(&AlgebraSpec::fd(&[2]).unwrap(), &tol).unwrap();
        assert_eq!(fd.rank, 0);
        assert_eq!(fd.flags.whitehead, Some(true));
        let circle = k1_group(&AlgebraSpec::circle(1, 32).unwrap(), &tol).unwrap();
        assert_eq!(circle.rank, 1);
        assert_eq!(circle.generators[0].invariant, vec![1]);
        assert_eq!(circle.flags.whitehead, Some(true));
        assert!(!circle.flags.cone_proper);
    }

    #[test]
    fn k_of_both_models() {
        let tol = Tolerances::default();
        let fd = k_group(&AlgebraSpec::fd(&[2, 3]).unwrap(), &tol).unwrap();
        assert_eq!((fd.rank, fd.flags.theta_kernel_rank), (2, Some(0)));
        let circle = k_group(&AlgebraSpec::circle(2, 16).unwrap(), &tol).unwrap();
        assert_eq!((circle.rank, circle.order_unit.clone()), (2, vec![2, 0]));
        assert!(circle.flags.fragment.is_some());
        let x = KClass::from_invariants(GroupTag::K, vec![1, -4], vec![0, 0]);
        assert!(circle.in_cone(&x) && !circle.in_cone(&x.neg()));
    }
}
