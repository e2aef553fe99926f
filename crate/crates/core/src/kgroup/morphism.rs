//! Multiplicity-plus-conjugation maps between block algebras and the integer
//! matrices they induce on the groups.

use super::class::GroupTag;
use super::lattice::IntMatrix;
use crate::error::{Error, Result};
use crate::kernel::{unitary_defect, ComplexMatrix};
use crate::model::{AlgebraSpec, Element};

/// The map sending `v` to `Cᵢ* · blockdiag(mult[i][j] copies of vⱼ) · Cᵢ` on target
/// block `i`, padded with zeros when the copies do not fill the block.
#[derive(Debug, Clone, PartialEq)]
pub struct MorphismSpec {
    source: AlgebraSpec,
    target: AlgebraSpec,
    multiplicity: Vec<Vec<usize>>,
    conjugators: Vec<ComplexMatrix>,
}

fn dims(alg: &AlgebraSpec) -> Result<Vec<usize>> {
    match alg {
        AlgebraSpec::FdBlocks { block_dims } => Ok(block_dims.clone()),
        AlgebraSpec::CircleGrid { .. } => Err(Error::Unsupported("morphisms are defined between block algebras".into())),
    }
}

impl MorphismSpec {
    /// A unital map: every target block is filled exactly.
    pub fn new(
        source: AlgebraSpec,
        target: AlgebraSpec,
        multiplicity: Vec<Vec<usize>>,
        conjugators: Vec<ComplexMatrix>,
        tol: f64,
    ) -> Result<Self> {
        let m = Self::corner(source, target, multiplicity, conjugators, tol)?;
        m.require_unital()?;
        Ok(m)
    }

    /// A possibly non-unital map: copies may leave part of a target block empty.
    pub fn corner(
        source: AlgebraSpec,
        target: AlgebraSpec,
        multiplicity: Vec<Vec<usize>>,
        conjugators: Vec<ComplexMatrix>,
        tol: f64,
    ) -> Result<Self> {
        let (sd, td) = (dims(&source)?, dims(&target)?);
        if multiplicity.len() != td.len() || multiplicity.iter().any(|r| r.len() != sd.len()) {
            return Err(Error::ShapeMismatch(format!(
                "multiplicity must be {}×{}",
                td.len(),
                sd.len()
            )));
        }
        if conjugators.len() != td.len() {
            return Err(Error::ShapeMismatch(format!("expected {} conjugators", td.len())));
        }
        for (i, (row, c)) in multiplicity.iter().zip(&conjugators).enumerate() {
            let filled: usize = row.iter().zip(&sd).map(|(m, d)| m * d).sum();
            if filled > td[i] {
                return Err(Error::ShapeMismatch(format!(
                    "target block {i} has size {} but receives {filled}",
                    td[i]
                )));
            }
            if c.rows() != td[i] || c.cols() != td[i] {
                return Err(Error::ShapeMismatch(format!("conjugator {i} must be {0}×{0}", td[i])));
            }
            if unitary_defect(c) > tol {
                return Err(Error::NotUnitary);
            }
        }
        Ok(Self {
            source,
            target,
            multiplicity,
            conjugators,
        })
    }

    pub fn identity(alg: &AlgebraSpec) -> Result<Self> {
        let d = dims(alg)?;
        let k = d.len();
        let mult = (0..k).map(|i| (0..k).map(|j| usize::from(i == j)).collect()).collect();
        let conj = d.iter().map(|&n| ComplexMatrix::identity(n)).collect();
        Self::new(alg.clone(), alg.clone(), mult, conj, 0.0)
    }

    /// The map sending everything to zero.
    pub fn zero(source: &AlgebraSpec, target: &AlgebraSpec) -> Result<Self> {
        let (sd, td) = (dims(source)?, dims(target)?);
        let mult = vec![vec![0; sd.len()]; td.len()];
        let conj = td.iter().map(|&n| ComplexMatrix::identity(n)).collect();
        Self::corner(source.clone(), target.clone(), mult, conj, 0.0)
    }

    pub fn source(&self) -> &AlgebraSpec {
        &self.source
    }

    pub fn target(&self) -> &AlgebraSpec {
        &self.target
    }

    pub fn multiplicity(&self) -> &[Vec<usize>] {
        &self.multiplicity
    }

    pub fn conjugators(&self) -> &[ComplexMatrix] {
        &self.conjugators
    }

    pub fn is_unital(&self) -> bool {
        self.require_unital().is_ok()
    }

    fn require_unital(&self) -> Result<()> {
        let (sd, td) = (self.source.part_dims(), self.target.part_dims());
        for (i, row) in self.multiplicity.iter().enumerate() {
            let filled: usize = row.iter().zip(&sd).map(|(m, d)| m * d).sum();
            if filled != td[i] {
                return Err(Error::NotUnital(format!(
                    "target block {i}: Σ mult·d = {filled} but the block has size {}",
                    td[i]
                )));
            }
        }
        Ok(())
    }

    /// Offsets of the copies of each source block inside target block `i`, in
    /// the order they are laid out.
    fn layout(&self, i: usize) -> Vec<(usize, usize)> {
        let sd = self.source.part_dims();
        let mut out = Vec::new();
        let mut offset = 0;
        for (j, &m) in self.multiplicity[i].iter().enumerate() {
            for _ in 0..m {
                out.push((j, offset));
                offset += sd[j];
            }
        }
        out
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &MorphismSpec) -> Result<MorphismSpec> {
        if first.target != self.source {
            return Err(Error::AlgebraMismatch);
        }
        let a = first.source.part_dims();
        let b = first.target.part_dims();
        let c = self.target.part_dims();
        let mult: Vec<Vec<usize>> = (0..c.len())
            .map(|l| {
                (0..a.len())
                    .map(|j| (0..b.len()).map(|i| self.multiplicity[l][i] * first.multiplicity[i][j]).sum())
                    .collect()
            })
            .collect();
        let mut conjugators = Vec::with_capacity(c.len());
        for l in 0..c.len() {
            // Nested layout: copies of the middle blocks, each holding the source blocks.
            let mut frame = ComplexMatrix::zeros(c[l], c[l]);
            let mut nested: Vec<(usize, usize)> = Vec::new();
            for (i, outer) in self.layout(l) {
                frame.set_block(outer, outer, &first.conjugators[i]);
                for (j, inner) in first.layout(i) {
                    nested.push((j, outer + inner));
                }
            }
            let filled: usize = nested.iter().map(|&(j, _)| a[j]).sum();
            // Grouped layout of the composite, matched copy by copy in order.
            let mut grouped: Vec<(usize, usize)> = Vec::new();
            let mut offset = 0;
            for (j, &m) in mult[l].iter().enumerate() {
                for _ in 0..m {
                    grouped.push((j, offset));
                    offset += a[j];
                }
            }
            let mut perm = ComplexMatrix::zeros(c[l], c[l]);
            let mut used = vec![false; nested.len()];
            for &(j, g) in &grouped {
                let k = (0..nested.len()).find(|&k| !used[k] && nested[k].0 == j).expect("copy counts agree");
                used[k] = true;
                for r in 0..a[j] {
                    perm[(g + r, nested[k].1 + r)] = 1.0.into();
                }
            }
            // The part of the block outside every middle copy maps to itself.
            let outer_filled: usize = self.layout(l).iter().map(|&(i, _)| b[i]).sum();
            for r in outer_filled..c[l] {
                frame[(r, r)] = 1.0.into();
            }
            let rest: Vec<usize> = (0..c[l]).filter(|&r| (0..c[l]).all(|s| perm[(s, r)].norm() == 0.0)).collect();
            for (g, r) in (filled..c[l]).zip(rest) {
                perm[(g, r)] = 1.0.into();
            }
            conjugators.push(&(&perm * &frame) * &self.conjugators[l]);
        }
        MorphismSpec::corner(first.source.clone(), self.target.clone(), mult, conjugators, 1e-9)
    }

    /// Inverse of a map whose multiplicity is a permutation matrix.
    pub fn inverse(&self) -> Result<MorphismSpec> {
        let k = self.multiplicity.len();
        let is_perm = self.source.num_parts() == k
            && self.multiplicity.iter().all(|r| r.iter().sum::<usize>() == 1 && r.iter().all(|&m| m <= 1))
            && (0..k).all(|j| self.multiplicity.iter().map(|r| r[j]).sum::<usize>() == 1);
        if !is_perm || !self.is_unital() {
            return Err(Error::PreconditionFailure("multiplicity is not a permutation matrix".into()));
        }
        let mult: Vec<Vec<usize>> = (0..k).map(|j| (0..k).map(|i| self.multiplicity[i][j]).collect()).collect();
        let conjugators = (0..k)
            .map(|j| {
                let i = (0..k).find(|&i| self.multiplicity[i][j] == 1).expect("permutation");
                self.conjugators[i].adjoint()
            })
            .collect();
        MorphismSpec::new(self.target.clone(), self.source.clone(), mult, conjugators, 1e-9)
    }
}

/// `φ(v)` at the same matrix level as `v`.
pub fn apply_morphism(phi: &MorphismSpec, v: &Element) -> Result<Element> {
    if v.algebra() != phi.source() {
        return Err(Error::AlgebraMismatch);
    }
    let (m, n) = (v.row_level(), v.col_level());
    let sd = phi.source.part_dims();
    let parts = phi
        .target
        .part_dims()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let layout = phi.layout(i);
            let c = &phi.conjugators[i];
            let mut out = ComplexMatrix::zeros(m * d, n * d);
            for a in 0..m {
                for b in 0..n {
                    let mut block = ComplexMatrix::zeros(d, d);
                    for &(j, off) in &layout {
                        block.set_block(off, off, &v.part(j).block(a * sd[j], b * sd[j], sd[j], sd[j]));
                    }
                    out.set_block(a * d, b * d, &(&(&c.adjoint() * &block) * c));
                }
            }
            out
        })
        .collect();
    Element::new(phi.target.clone(), m, n, parts)
}

/// The homomorphism `φ` induces on invariant coordinates. K₁ over block
/// algebras is trivial, so its induced map is the empty matrix; it still
/// requires a unital map since only those carry unitaries to unitaries.
pub fn induced_map(phi: &MorphismSpec, group: GroupTag) -> Result<IntMatrix> {
    let (k, kp) = (phi.source.num_parts(), phi.target.num_parts());
    match group {
        GroupTag::K0 | GroupTag::K => Ok(IntMatrix::new(
            kp,
            k,
            phi.multiplicity.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect(),
        )),
        GroupTag::K1 => {
            phi.require_unital()?;
            Ok(IntMatrix::zero(0, 0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::testutil::random_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag_block(alg: &AlgebraSpec, diags: &[&[f64]]) -> Element {
        Element::new(alg.clone(), 1, 1, diags.iter().map(|d| ComplexMatrix::from_diag(d)).collect()).unwrap()
    }

    #[test]
    fn identity_fixes_elements() {
        let a = AlgebraSpec::fd(&[1, 2]).unwrap();
        let v = diag_block(&a, &[&[0.5], &[1.0, -2.0]]);
        assert_eq!(apply_morphism(&MorphismSpec::identity(&a).unwrap(), &v).unwrap(), v);
    }

    #[test]
    fn two_lines_into_a_plane() {
        let a = AlgebraSpec::fd(&[1, 1]).unwrap();
        let b = AlgebraSpec::fd(&[2]).unwrap();
        let phi = MorphismSpec::new(a.clone(), b.clone(), vec![vec![1, 1]], vec![ComplexMatrix::identity(2)], 1e-9).unwrap();
        let p = diag_block(&a, &[&[1.0], &[0.0]]);
        assert_eq!(apply_morphism(&phi, &p).unwrap(), diag_block(&b, &[&[1.0, 0.0]]));
        assert_eq!(induced_map(&phi, GroupTag::K0).unwrap().apply(&[3, 4]), vec![7]);
        assert_eq!(apply_morphism(&phi, &Element::unit(&a, 1)).unwrap(), Element::unit(&b, 1));
    }

    #[test]
    fn unitality_is_enforced() {
        let a = AlgebraSpec::fd(&[1]).unwrap();
        let b = AlgebraSpec::fd(&[2]).unwrap();
        let r = MorphismSpec::new(a.clone(), b.clone(), vec![vec![1]], vec![ComplexMatrix::identity(2)], 1e-9);
        assert!(matches!(r, Err(Error::NotUnital(_))));
        let z = MorphismSpec::zero(&a, &b).unwrap();
        assert!(matches!(induced_map(&z, GroupTag::K1), Err(Error::NotUnital(_))));
        assert_eq!(induced_map(&z, GroupTag::K).unwrap(), IntMatrix::zero(1, 1));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = AlgebraSpec::fd(&[1, 2]).unwrap();
        let b = AlgebraSpec::fd(&[3, 4]).unwrap();
        let c = AlgebraSpec::fd(&[7, 4]).unwrap();
        let phi = MorphismSpec::new(
            a.clone(),
            b.clone(),
            vec![vec![1, 1], vec![0, 2]],
            vec![random_unitary(&mut rng, 3), random_unitary(&mut rng, 4)],
            1e-9,
        )
        .unwrap();
        let psi = MorphismSpec::new(
            b,
            c,
            vec![vec![1, 1], vec![0, 1]],
            vec![random_unitary(&mut rng, 7), random_unitary(&mut rng, 4)],
            1e-9,
        )
        .unwrap();
        let both = psi.after(&phi).unwrap();
        let v = Element::from_parts_fn(&a, 2, 1, |_, d| {
            crate::kernel::testutil::random_matrix(&mut ChaCha8Rng::seed_from_u64(d as u64), 2 * d, d, 1.0)
        })
        .unwrap();
        let direct = apply_morphism(&both, &v).unwrap();
        let stepwise = apply_morphism(&psi, &apply_morphism(&phi, &v).unwrap()).unwrap();
        assert!(direct.distance(&stepwise).unwrap() < 1e-12);
        assert_eq!(
            induced_map(&both, GroupTag::K0).unwrap(),
            induced_map(&psi, GroupTag::K0).unwrap().compose(&induced_map(&phi, GroupTag::K0).unwrap())
        );
    }

    #[test]
    fn corner_maps_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = AlgebraSpec::fd(&[1]).unwrap();
        let b = AlgebraSpec::fd(&[3]).unwrap();
        let c = AlgebraSpec::fd(&[2, 5]).unwrap();
        let phi = MorphismSpec::corner(a.clone(), b.clone(), vec![vec![2]], vec![random_unitary(&mut rng, 3)], 1e-9).unwrap();
        let psi = MorphismSpec::corner(
            b,
            c,
            vec![vec![0], vec![1]],
            vec![random_unitary(&mut rng, 2), random_unitary(&mut rng, 5)],
            1e-9,
        )
        .unwrap();
        let v = Element::from_parts_fn(&a, 2, 2, |_, _| {
            crate::kernel::testutil::random_matrix(&mut ChaCha8Rng::seed_from_u64(9), 2, 2, 1.0)
        })
        .unwrap();
        let direct = apply_morphism(&psi.after(&phi).unwrap(), &v).unwrap();
        let stepwise = apply_morphism(&psi, &apply_morphism(&phi, &v).unwrap()).unwrap();
        assert!(direct.distance(&stepwise).unwrap() < 1e-12);
    }

    #[test]
    fn permutation_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = AlgebraSpec::fd(&[2, 3]).unwrap();
        let b = AlgebraSpec::fd(&[3, 2]).unwrap();
        let phi = MorphismSpec::new(
            a.clone(),
            b,
            vec![vec![0, 1], vec![1, 0]],
            vec![random_unitary(&mut rng, 3), random_unitary(&mut rng, 2)],
            1e-9,
        )
        .unwrap();
        let inv = phi.inverse().unwrap();
        let v = diag_block(&a, &[&[1.0, 2.0], &[3.0, 4.0, 5.0]]);
        let back = apply_morphism(&inv, &apply_morphism(&phi, &v).unwrap()).unwrap();
        assert!(back.distance(&v).unwrap() < 1e-12);
        let m = induced_map(&phi, GroupTag::K0).unwrap();
        assert_eq!(induced_map(&inv, GroupTag::K0).unwrap().compose(&m), IntMatrix::identity(2));
    }
}
