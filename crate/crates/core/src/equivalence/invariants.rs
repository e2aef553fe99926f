use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{hermitian_eig, ComplexMatrix};
use crate::model::{is_order_projection, is_unitary, Element};

/// Rank data deciding `p ~ q`: one rank per block, or a single rank constant
/// over the circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ProjInvariant {
    pub ranks: Vec<i64>,
}

/// Homotopy data of a unitary: empty over block algebras, the winding number
/// of `det u(z)` over the circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UnitaryInvariant {
    pub winding: Vec<i64>,
}

/// Number of eigenvalues above one half.
pub(crate) fn part_rank(p: &ComplexMatrix) -> Result<usize> {
    if p.rows() == 0 {
        return Ok(0);
    }
    let eig = hermitian_eig(&p.hermitian_part(), f64::INFINITY)?;
    Ok(eig.eigenvalues.iter().filter(|&&l| l > 0.5).count())
}

/// Ranks of an order projection. Fails with `NotProjection` when `p` is not one
/// at `tol`, and with `PreconditionFailure` when a circle projection changes rank
/// between samples (no continuous projection does).
pub fn proj_invariant(p: &Element, tol: f64) -> Result<ProjInvariant> {
    if !p.is_square() || !is_order_projection(p, tol)? {
        return Err(Error::NotProjection);
    }
    rank_vector(p)
}

/// Ranks without re-checking the projection predicate.
pub(crate) fn rank_vector(p: &Element) -> Result<ProjInvariant> {
    let ranks = p
        .parts()
        .iter()
        .map(|m| part_rank(m).map(|r| r as i64))
        .collect::<Result<Vec<_>>>()?;
    if p.algebra().is_fd() {
        return Ok(ProjInvariant { ranks });
    }
    let first = ranks[0];
    if ranks.iter().any(|&r| r != first) {
        return Err(Error::PreconditionFailure(
            "projection rank varies across the circle grid".into(),
        ));
    }
    Ok(ProjInvariant { ranks: vec![first] })
}

/// Degree of a closed loop of nonzero samples, from summed principal phase increments.
pub fn winding_of_samples(values: &[Complex64], tol_wind: f64) -> Result<i64> {
    let n = values.len();
    if values.iter().any(|z| z.norm() == 0.0) {
        return Err(Error::Inconsistent("loop passes through zero".into()));
    }
    let total: f64 = (0..n).map(|j| (values[(j + 1) % n] / values[j]).arg()).sum();
    let turns = total / (2.0 * PI);
    let w = turns.round();
    if (turns - w).abs() > tol_wind {
        return Err(Error::Inconsistent(format!("phase increments sum to {turns} turns")));
    }
    Ok(w as i64)
}

/// Winding of `det u(z)` for a unitary over either model.
pub fn unitary_invariant(u: &Element, tol: f64, tol_wind: f64) -> Result<UnitaryInvariant> {
    if !is_unitary(u, tol)? {
        return Err(Error::NotUnitary);
    }
    Ok(UnitaryInvariant {
        winding: det_winding(u.parts(), u.algebra().is_fd(), tol_wind)?,
    })
}

pub(crate) fn det_winding(parts: &[ComplexMatrix], fd: bool, tol_wind: f64) -> Result<Vec<i64>> {
    if fd {
        return Ok(Vec::new());
    }
    let dets: Vec<Complex64> = parts.iter().map(ComplexMatrix::determinant).collect();
    Ok(vec![winding_of_samples(&dets, tol_wind)?])
}
