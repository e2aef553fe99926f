//! Monoid classes, their Grothendieck completion, and group elements stored as
//! invariant differences.

use std::fmt;

use serde::Serialize;

use super::lattice::{add, hermite_basis, sub};
use crate::equivalence::{partial_unitary_invariant, projection_ranks, unitary_class};
use crate::error::{Error, Result};
use crate::model::{AlgebraSpec, Element};
use crate::tolerance::Tolerances;

/// Which Grothendieck group: projections, unitaries, or partial unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GroupTag {
    K0,
    K1,
    K,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupTag::K0 => "K0",
            GroupTag::K1 => "K1",
            GroupTag::K => "K",
        })
    }
}

impl GroupTag {
    /// Number of integer coordinates of a class over `alg`.
    pub fn invariant_len(self, alg: &AlgebraSpec) -> usize {
        match (self, alg.is_fd()) {
            (GroupTag::K0, _) => alg.invariant_len(),
            (GroupTag::K1, true) => 0,
            (GroupTag::K1, false) => 1,
            (GroupTag::K, true) => alg.invariant_len(),
            (GroupTag::K, false) => 2,
        }
    }

    /// The neutral second entry of a monoid generator's pair: `0` for K₀ and K,
    /// `e` for K₁.
    pub fn base_point(self, alg: &AlgebraSpec) -> Element {
        match self {
            GroupTag::K1 => Element::unit(alg, 1),
            _ => Element::zero(alg, 1, 1),
        }
    }
}

/// Complete invariant of `v` in the monoid underlying `group`: projection ranks,
/// unitary windings, or partial-unitary support ranks followed by the winding.
pub fn class_invariant(group: GroupTag, v: &Element, tol: &Tolerances) -> Result<Vec<i64>> {
    match group {
        GroupTag::K0 => Ok(projection_ranks(v, tol)?.ranks),
        GroupTag::K1 => Ok(unitary_class(v, tol)?.winding),
        GroupTag::K => {
            let inv = partial_unitary_invariant(v, tol)?;
            Ok(inv.ranks.into_iter().chain(inv.winding).collect())
        }
    }
}

/// A monoid class: its invariant and optionally a representative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonoidElement {
    pub invariant: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Element>,
}

impl MonoidElement {
    pub fn new(invariant: Vec<i64>) -> Self {
        Self { invariant, witness: None }
    }

    pub fn of(group: GroupTag, v: &Element, tol: &Tolerances) -> Result<Self> {
        Ok(Self {
            invariant: class_invariant(group, v, tol)?,
            witness: Some(v.clone()),
        })
    }
}

/// The group completing a finitely generated submonoid of `ℤ^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupDescription {
    pub group: GroupTag,
    pub rank: usize,
    /// Canonical lattice basis of the subgroup the generators span.
    pub basis: Vec<Vec<i64>>,
    pub identity: Vec<i64>,
}

/// Completes the monoid generated by `classes`. Representatives, where present,
/// are reclassified and checked for additivity under `⊕` pairwise; the monoid
/// then embeds in its invariant lattice and so cancels.
pub fn grothendieck_complete(group: GroupTag, classes: &[MonoidElement], tol: &Tolerances) -> Result<GroupDescription> {
    let dim = classes.first().map_or(0, |c| c.invariant.len());
    if classes.iter().any(|c| c.invariant.len() != dim) {
        return Err(Error::NotCancellative("generators carry invariants of different lengths".into()));
    }
    for (i, c) in classes.iter().enumerate() {
        let Some(w) = &c.witness else { continue };
        if class_invariant(group, w, tol)? != c.invariant {
            return Err(Error::NotCancellative(format!("generator {i} does not have its stated class")));
        }
    }
    for (i, a) in classes.iter().enumerate() {
        for (j, b) in classes.iter().enumerate().skip(i) {
            let (Some(wa), Some(wb)) = (&a.witness, &b.witness) else { continue };
            if class_invariant(group, &wa.direct_sum(wb)?, tol)? != add(&a.invariant, &b.invariant) {
                return Err(Error::NotCancellative(format!("class of generators {i} ⊕ {j} is not the sum")));
            }
        }
    }
    let vectors: Vec<Vec<i64>> = classes.iter().map(|c| c.invariant.clone()).collect();
    let basis = hermite_basis(&vectors, dim);
    Ok(GroupDescription {
        group,
        rank: basis.len(),
        basis,
        identity: vec![0; dim],
    })
}

/// A group element `[(u, v)]`. Equality compares the difference of invariants;
/// the formal pair is kept as a witness only.
#[derive(Debug, Clone, Serialize)]
pub struct KClass {
    pub group: GroupTag,
    pub plus: Vec<i64>,
    pub minus: Vec<i64>,
    pub normal_form: Vec<i64>,
    #[serde(skip)]
    pub witness: Option<(Element, Element)>,
}

impl PartialEq for KClass {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.normal_form == other.normal_form
    }
}

impl KClass {
    pub fn from_invariants(group: GroupTag, plus: Vec<i64>, minus: Vec<i64>) -> Self {
        assert_eq!(plus.len(), minus.len());
        let normal_form = sub(&plus, &minus);
        Self {
            group,
            plus,
            minus,
            normal_form,
            witness: None,
        }
    }

    pub fn identity(group: GroupTag, len: usize) -> Self {
        Self::from_invariants(group, vec![0; len], vec![0; len])
    }

    /// `[(u, v)]` from two representatives, which may sit at different levels.
    pub fn from_pair(group: GroupTag, u: &Element, v: &Element, tol: &Tolerances) -> Result<Self> {
        u.same_algebra(v)?;
        let mut c = Self::from_invariants(group, class_invariant(group, u, tol)?, class_invariant(group, v, tol)?);
        c.witness = Some((u.clone(), v.clone()));
        Ok(c)
    }

    /// The image of a single representative: `[(v, 0)]` for K₀ and K, `[(v, e)]` for K₁.
    pub fn of(group: GroupTag, v: &Element, tol: &Tolerances) -> Result<Self> {
        Self::from_pair(group, v, &group.base_point(v.algebra()), tol)
    }

    pub fn is_identity(&self) -> bool {
        self.normal_form.iter().all(|&x| x == 0)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.group, other.group, "classes from different groups");
        assert_eq!(self.plus.len(), other.plus.len(), "classes over different algebras");
    }

    /// `[(u₁, v₁)] + [(u₂, v₂)] = [(u₁ ⊕ u₂, v₁ ⊕ v₂)]`.
    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut c = Self::from_invariants(self.group, add(&self.plus, &other.plus), add(&self.minus, &other.minus));
        if let (Some((u1, v1)), Some((u2, v2))) = (&self.witness, &other.witness) {
            if let (Ok(u), Ok(v)) = (u1.direct_sum(u2), v1.direct_sum(v2)) {
                c.witness = Some((u, v));
            }
        }
        c
    }

    /// `−[(u, v)] = [(v, u)]`.
    pub fn neg(&self) -> Self {
        let mut c = Self::from_invariants(self.group, self.minus.clone(), self.plus.clone());
        c.witness = self.witness.as_ref().map(|(u, v)| (v.clone(), u.clone()));
        c
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `n · x` on invariants; witnesses are not carried.
    pub fn times(&self, n: i64) -> Self {
        let scale = |v: &[i64]| v.iter().map(|x| x * n.abs()).collect::<Vec<_>>();
        let c = Self::from_invariants(self.group, scale(&self.plus), scale(&self.minus));
        if n < 0 {
            c.neg()
        } else {
            c
        }
    }
}
