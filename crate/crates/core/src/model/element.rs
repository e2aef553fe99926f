use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::kernel::{spectral_norm, ComplexMatrix};

/// An `m × n` matrix over a model algebra.
///
/// Stored as one complex matrix per part (block, or circle sample), each of size
/// `(m·d) × (n·d)` with the level index `a` and intra-part index `r` laid out as
/// `a·d + r`. Under this layout `⊕` is block-diagonal concatenation and scalar
/// matrices act as `α ⊗ I_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: AlgebraSpec,
    rows: usize,
    cols: usize,
    parts: Vec<ComplexMatrix>,
}

impl Element {
    pub fn new(algebra: AlgebraSpec, row_level: usize, col_level: usize, parts: Vec<ComplexMatrix>) -> Result<Self> {
        if parts.len() != algebra.num_parts() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} parts, got {}",
                algebra.num_parts(),
                parts.len()
            )));
        }
        for (i, p) in parts.iter().enumerate() {
            let d = algebra.part_dim(i);
            if p.rows() != row_level * d || p.cols() != col_level * d {
                return Err(Error::ShapeMismatch(format!(
                    "part {i} is {}x{}, expected {}x{}",
                    p.rows(),
                    p.cols(),
                    row_level * d,
                    col_level * d
                )));
            }
        }
        Ok(Self {
            algebra,
            rows: row_level,
            cols: col_level,
            parts,
        })
    }

    /// Builds each part from its index and level-one dimension.
    pub fn from_parts_fn(
        algebra: &AlgebraSpec,
        row_level: usize,
        col_level: usize,
        mut f: impl FnMut(usize, usize) -> ComplexMatrix,
    ) -> Result<Self> {
        let parts = (0..algebra.num_parts()).map(|i| f(i, algebra.part_dim(i))).collect();
        Self::new(algebra.clone(), row_level, col_level, parts)
    }

    pub fn zero(algebra: &AlgebraSpec, row_level: usize, col_level: usize) -> Self {
        let parts = algebra
            .part_dims()
            .into_iter()
            .map(|d| ComplexMatrix::zeros(row_level * d, col_level * d))
            .collect();
        Self {
            algebra: algebra.clone(),
            rows: row_level,
            cols: col_level,
            parts,
        }
    }

    /// The order unit `eⁿ = e ⊕ ⋯ ⊕ e`.
    pub fn unit(algebra: &AlgebraSpec, level: usize) -> Self {
        let parts = algebra
            .part_dims()
            .into_iter()
            .map(|d| ComplexMatrix::identity(level * d))
            .collect();
        Self {
            algebra: algebra.clone(),
            rows: level,
            cols: level,
            parts,
        }
    }

    /// The same matrix in every part (a "constant" element); `m` must be `(m_l·d) × (n_l·d)`
    /// for a single common `d`, so this is mostly useful for circle algebras and single blocks.
    pub fn constant(algebra: &AlgebraSpec, row_level: usize, col_level: usize, m: &ComplexMatrix) -> Result<Self> {
        Self::new(algebra.clone(), row_level, col_level, vec![m.clone(); algebra.num_parts()])
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn row_level(&self) -> usize {
        self.rows
    }

    pub fn col_level(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn parts(&self) -> &[ComplexMatrix] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &ComplexMatrix {
        &self.parts[i]
    }

    pub fn into_parts(self) -> Vec<ComplexMatrix> {
        self.parts
    }

    /// Applies `f` to every part; the result levels are read off the first part.
    pub fn map_parts(&self, row_level: usize, col_level: usize, f: impl Fn(usize, &ComplexMatrix) -> ComplexMatrix) -> Self {
        Self {
            algebra: self.algebra.clone(),
            rows: row_level,
            cols: col_level,
            parts: self.parts.iter().enumerate().map(|(i, p)| f(i, p)).collect(),
        }
    }

    pub fn try_map_parts(
        &self,
        row_level: usize,
        col_level: usize,
        f: impl Fn(usize, &ComplexMatrix) -> Result<ComplexMatrix>,
    ) -> Result<Self> {
        let parts = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, p)| f(i, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            algebra: self.algebra.clone(),
            rows: row_level,
            cols: col_level,
            parts,
        })
    }

    pub fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        self.same_algebra(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch(format!(
                "levels {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn zip_parts(&self, other: &Self, f: impl Fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: self.cols,
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_parts(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_parts(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map_parts(self.rows, self.cols, |_, p| p.scale(s))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        self.map_parts(self.cols, self.rows, |_, p| p.adjoint())
    }

    /// Product in the algebra: `(m × n) · (n × l) → m × l`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply levels {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: other.cols,
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a * b).collect(),
        })
    }

    /// `u ⊕ v = [[u, 0], [0, v]]`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        Ok(Self {
            algebra: self.algebra.clone(),
            rows: self.rows + other.rows,
            cols: self.cols + other.cols,
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| ComplexMatrix::block_diag(a, b))
                .collect(),
        })
    }

    /// `[[a, b], [c, d]]` at level `(m_a + m_c) × (n_a + n_b)`.
    pub fn block_2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        a.same_algebra(b)?;
        a.same_algebra(c)?;
        a.same_algebra(d)?;
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::ShapeMismatch("block levels do not line up".into()));
        }
        let parts = (0..a.parts.len())
            .map(|i| ComplexMatrix::block_2x2(&a.parts[i], &b.parts[i], &c.parts[i], &d.parts[i]))
            .collect();
        Ok(Self {
            algebra: a.algebra.clone(),
            rows: a.rows + c.rows,
            cols: a.cols + b.cols,
            parts,
        })
    }

    /// `[[0, v], [v*, 0]]`, a self-adjoint element at level `m + n`.
    pub fn dilation(&self) -> Self {
        let zm = Self::zero(&self.algebra, self.rows, self.rows);
        let zn = Self::zero(&self.algebra, self.cols, self.cols);
        Self::block_2x2(&zm, self, &self.adjoint(), &zn).expect("dilation blocks line up")
    }

    /// `[v; 0]` with `extra` zero rows of level.
    pub fn pad_rows(&self, extra: usize) -> Self {
        self.map_parts(self.rows + extra, self.cols, |i, p| {
            let d = self.algebra.part_dim(i);
            let mut out = ComplexMatrix::zeros(p.rows() + extra * d, p.cols());
            out.set_block(0, 0, p);
            out
        })
    }

    /// `[v 0]` with `extra` zero columns of level.
    pub fn pad_cols(&self, extra: usize) -> Self {
        self.map_parts(self.rows, self.cols + extra, |i, p| {
            let d = self.algebra.part_dim(i);
            let mut out = ComplexMatrix::zeros(p.rows(), p.cols() + extra * d);
            out.set_block(0, 0, p);
            out
        })
    }

    /// `α v β` for scalar matrices `α ∈ M_{r,m}`, `β ∈ M_{n,s}`.
    pub fn scalar_conjugate(alpha: &ComplexMatrix, v: &Self, beta: &ComplexMatrix) -> Result<Self> {
        if alpha.cols() != v.rows || beta.rows() != v.cols {
            return Err(Error::ShapeMismatch(format!(
                "scalars {}x{} and {}x{} cannot act on level {}x{}",
                alpha.rows(),
                alpha.cols(),
                beta.rows(),
                beta.cols(),
                v.rows,
                v.cols
            )));
        }
        Ok(v.map_parts(alpha.rows(), beta.cols(), |i, p| {
            let d = v.algebra.part_dim(i);
            &(&alpha.kron_identity(d) * p) * &beta.kron_identity(d)
        }))
    }

    /// Operator norm, the maximum over parts of the largest singular value.
    pub fn norm(&self) -> f64 {
        self.parts.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    /// `‖self − other‖` in operator norm.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// `‖self − other‖ ≤ tol` in operator norm, part by part.
    pub fn within(&self, other: &Self, tol: f64) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.parts.iter().zip(&other.parts).all(|(a, b)| a.within(b, tol)))
    }

    pub fn max_abs(&self) -> f64 {
        self.parts.iter().map(ComplexMatrix::max_abs).fold(0.0, f64::max)
    }

    /// Largest deviation from `v* = v` over parts (infinite for rectangular levels).
    pub fn selfadjoint_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.parts.iter().map(|p| spectral_norm(&(p - &p.adjoint()))).fold(0.0, f64::max)
    }
}

/// Wire format: `{"algebra", "row_level", "col_level", "data"}` where `data`
/// lists parts, each a list of rows of `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementJson {
    algebra: AlgebraSpec,
    row_level: usize,
    col_level: usize,
    data: Vec<Vec<Vec<[f64; 2]>>>,
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let data = self
            .parts
            .iter()
            .map(|p| {
                (0..p.rows())
                    .map(|i| (0..p.cols()).map(|j| [p[(i, j)].re, p[(i, j)].im]).collect())
                    .collect()
            })
            .collect();
        ElementJson {
            algebra: self.algebra.clone(),
            row_level: self.rows,
            col_level: self.cols,
            data,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ElementJson::deserialize(deserializer)?;
        let mut parts = Vec::with_capacity(raw.data.len());
        for (k, rows) in raw.data.iter().enumerate() {
            let r = rows.len();
            let c = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|row| row.len() != c) {
                return Err(serde::de::Error::custom(format!("part {k} has ragged rows")));
            }
            let entries = rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
            let m = ComplexMatrix::from_vec(r, c, entries).map_err(serde::de::Error::custom)?;
            parts.push(m);
        }
        // Zero-width parts carry no rows; rebuild them at the declared shape.
        for (k, p) in parts.iter_mut().enumerate() {
            if k < raw.algebra.num_parts() && p.rows() * p.cols() == 0 {
                let d = raw.algebra.part_dim(k);
                *p = ComplexMatrix::zeros(raw.row_level * d, raw.col_level * d);
            }
        }
        Element::new(raw.algebra, raw.row_level, raw.col_level, parts).map_err(serde::de::Error::custom)
    }
}

impl Element {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("elements always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SpecParse(format!("element: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> AlgebraSpec {
        AlgebraSpec::fd(&[2]).unwrap()
    }

    #[test]
    fn shapes_are_checked() {
        let a = AlgebraSpec::fd(&[2, 3]).unwrap();
        assert!(Element::new(a.clone(), 1, 1, vec![ComplexMatrix::zeros(2, 2)]).is_err());
        assert!(Element::new(a.clone(), 1, 1, vec![ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(3, 2)]).is_err());
        assert!(Element::new(a, 1, 2, vec![ComplexMatrix::zeros(2, 4), ComplexMatrix::zeros(3, 6)]).is_ok());
    }

    #[test]
    fn units_add_under_direct_sum() {
        let a = AlgebraSpec::fd(&[1, 2]).unwrap();
        let e1 = Element::unit(&a, 1);
        assert_eq!(e1.direct_sum(&e1).unwrap(), Element::unit(&a, 2));
    }

    #[test]
    fn flip_swaps_summands() {
        let a = m2();
        let u = Element::unit(&a, 1);
        let z = Element::zero(&a, 1, 1);
        let sigma = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let uv = u.direct_sum(&z).unwrap();
        let swapped = Element::scalar_conjugate(&sigma, &uv, &sigma).unwrap();
        assert_eq!(swapped, z.direct_sum(&u).unwrap());
        let same = Element::scalar_conjugate(&ComplexMatrix::identity(2), &uv, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(same, uv);
    }

    #[test]
    fn mismatched_algebras_rejected() {
        let a = Element::unit(&m2(), 1);
        let b = Element::unit(&AlgebraSpec::fd(&[3]).unwrap(), 1);
        assert_eq!(a.direct_sum(&b), Err(Error::AlgebraMismatch));
        assert_eq!(a.add(&b), Err(Error::AlgebraMismatch));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let a = AlgebraSpec::fd(&[1, 2]).unwrap();
        let v = Element::from_parts_fn(&a, 1, 2, |i, d| {
            ComplexMatrix::from_fn(d, 2 * d, |r, c| Complex64::new((i + r) as f64, c as f64 - 0.5))
        })
        .unwrap();
        let text = v.to_json();
        assert!(text.starts_with(r#"{"algebra":{"variant":"fd","blocks":[1,2]},"row_level":1,"col_level":2,"data":"#));
        assert_eq!(Element::from_json(&text).unwrap(), v);
        let extra = text.replacen("\"row_level\"", "\"bogus\":0,\"row_level\"", 1);
        assert!(matches!(Element::from_json(&extra), Err(Error::SpecParse(_))));
        let wrong = r#"{"algebra":{"variant":"fd","blocks":[2]},"row_level":1,"col_level":1,"data":[[[[1,0]]]]}"#;
        assert!(Element::from_json(wrong).is_err());
        let ok = r#"{"algebra":{"variant":"fd","blocks":[1]},"row_level":1,"col_level":1,"data":[[[[1,0]]]]}"#;
        assert_eq!(Element::from_json(ok).unwrap(), Element::unit(&AlgebraSpec::fd(&[1]).unwrap(), 1));
    }
}
