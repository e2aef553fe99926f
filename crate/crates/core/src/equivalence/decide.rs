use num_complex::Complex64;
use serde::Serialize;

use super::bases::{loop_range_bases, phase, polar_unitary, split_bases, transport_unitary};
use super::certificate::{CertificateKind, HomotopyPath, PartialIsometryCertificate, PathKind, PathDomain, PATH_SAMPLES, STEP_BOUND};
use super::invariants::{det_winding, rank_vector, unitary_invariant, ProjInvariant, UnitaryInvariant};
use crate::error::{Error, Result};
use crate::kernel::{svd, unitary_log_path, unitary_spectrum, ComplexMatrix};
use crate::model::{abs_value, is_order_projection, is_partial_unitary, is_unitary, Element};
use crate::tolerance::Tolerances;

fn require_projection(p: &Element, tol: f64) -> Result<()> {
    if !p.is_square() || !is_order_projection(p, tol)? {
        return Err(Error::NotProjection);
    }
    Ok(())
}

fn require_unitary(u: &Element, tol: f64) -> Result<()> {
    if !u.is_square() || !is_unitary(u, tol)? {
        return Err(Error::NotUnitary);
    }
    Ok(())
}

fn require_partial_unitary(u: &Element, tol: f64) -> Result<()> {
    if !u.is_square() || !is_partial_unitary(u, tol)? {
        return Err(Error::NotPartialUnitary);
    }
    Ok(())
}

fn same_level(u: &Element, v: &Element) -> Result<()> {
    u.same_algebra(v)?;
    if u.row_level() != v.row_level() {
        return Err(Error::LevelMismatch(format!(
            "levels {} and {} differ",
            u.row_level(),
            v.row_level()
        )));
    }
    Ok(())
}

/// `u ⊕ eᵏ⁻ᵐ`.
pub fn pad_with_unit(u: &Element, level: usize) -> Element {
    let extra = level - u.row_level();
    if extra == 0 {
        return u.clone();
    }
    u.direct_sum(&Element::unit(u.algebra(), extra)).expect("same algebra")
}

/// `u ⊕ 0ₖ₋ₘ`.
pub fn pad_with_zero(u: &Element, level: usize) -> Element {
    let extra = level - u.row_level();
    if extra == 0 {
        return u.clone();
    }
    u.direct_sum(&Element::zero(u.algebra(), extra, extra)).expect("same algebra")
}

/// Decides `p ~ q`, returning a validated partial isometry `v` with `|v*| = p`, `|v| = q`.
pub fn mvn_equivalent(
    p: &Element,
    q: &Element,
    tol: &Tolerances,
) -> Result<(bool, Option<PartialIsometryCertificate>)> {
    p.same_algebra(q)?;
    require_projection(p, tol.pred)?;
    require_projection(q, tol.pred)?;
    if rank_vector(p)? != rank_vector(q)? {
        return Ok((false, None));
    }
    let (bp, bq) = if p.algebra().is_fd() {
        let bp = p.parts().iter().map(|m| split_bases(m).map(|b| b.0)).collect::<Result<Vec<_>>>()?;
        let bq = q.parts().iter().map(|m| split_bases(m).map(|b| b.0)).collect::<Result<Vec<_>>>()?;
        (bp, bq)
    } else {
        (loop_range_bases(p.parts())?, loop_range_bases(q.parts())?)
    };
    let parts = bp.iter().zip(&bq).map(|(a, b)| a * &b.adjoint()).collect();
    let v = Element::new(p.algebra().clone(), p.row_level(), q.row_level(), parts)?;
    let cert = PartialIsometryCertificate {
        kind: CertificateKind::PartialIsometry,
        v,
        source: q.clone(),
        target: p.clone(),
    };
    cert.validate(tol.pred)?;
    Ok((true, Some(cert)))
}

/// Decides `p ≈ q`. Both the plain and the `⊕ e`-stabilised decisions are made and
/// required to agree, since the rank invariant cancels.
pub fn stabilized_projection_equiv(p: &Element, q: &Element, tol: &Tolerances) -> Result<bool> {
    let plain = mvn_equivalent(p, q, tol)?.0;
    let e = Element::unit(p.algebra(), 1);
    let stable = mvn_equivalent(&p.direct_sum(&e)?, &q.direct_sum(&e)?, tol)?.0;
    if plain != stable {
        return Err(Error::Inconsistent("stabilisation changed the projection decision".into()));
    }
    Ok(plain)
}

/// Rounds singular values to 0 or 1.
fn round_to_partial_isometry(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(m.clone());
    }
    let s = svd(m, 0.0)?;
    let k = s.singulars.len();
    Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        (0..k)
            .filter(|&t| s.singulars[t] > 0.5)
            .map(|t| s.left[(i, t)] * s.right[(j, t)].conj())
            .sum()
    }))
}

/// Condition (T): from `u`, `v` with a common source builds `w = u v*` with
/// `|w*| = |u*|` and `|w| = |v*|`.
pub fn condition_t_transport(
    u: &PartialIsometryCertificate,
    v: &PartialIsometryCertificate,
    tol: &Tolerances,
) -> Result<PartialIsometryCertificate> {
    u.v.same_algebra(&v.v)?;
    if u.source.row_level() != v.source.row_level() || u.source.distance(&v.source)? > tol.pred {
        return Err(Error::SourceMismatch);
    }
    let raw = u.v.mul(&v.v.adjoint())?;
    let w = raw.try_map_parts(raw.row_level(), raw.col_level(), |_, m| round_to_partial_isometry(m))?;
    let cert = PartialIsometryCertificate {
        kind: CertificateKind::PartialIsometry,
        v: w,
        source: v.target.clone(),
        target: u.target.clone(),
    };
    cert.validate(tol.pred)?;
    Ok(cert)
}

fn samples_from_parts(template: &Element, per_sample: Vec<Vec<ComplexMatrix>>) -> Result<Vec<Element>> {
    per_sample
        .into_iter()
        .map(|parts| Element::new(template.algebra().clone(), template.row_level(), template.col_level(), parts))
        .collect()
}

fn pin_endpoints(mut samples: Vec<Element>, from: &Element, to: &Element) -> Vec<Element> {
    let n = samples.len();
    samples[0] = from.clone();
    samples[n - 1] = to.clone();
    samples
}

/// Per-part path `x · exp(i t log(x* y))` from `x` to `y`.
fn corner_log_paths(xs: &[ComplexMatrix], ys: &[ComplexMatrix], samples: usize) -> Result<Vec<Vec<ComplexMatrix>>> {
    let mut out = vec![Vec::with_capacity(xs.len()); samples];
    for (x, y) in xs.iter().zip(ys) {
        let w = &x.adjoint() * y;
        let path = if w.rows() == 0 {
            vec![w.clone(); samples]
        } else {
            unitary_log_path(&w, samples, 1e-6)?
        };
        for (k, s) in path.iter().enumerate() {
            out[k].push(x * s);
        }
    }
    Ok(out)
}

/// `V w` for the `V` with `V a = b` (unit vectors `a`, `b` with `a*b ≠ 0`) acting
/// on the plane they span and as the identity on its orthogonal complement.
/// `V` is continuous in `(a, b)` and equal to `I` when `a = b`. With
/// `r = b − (a*b) a`, `V = I + ((a*b) − 1) a a* + r a* − phase(a*b) a r* − r r* / (1 + |a*b|)`,
/// applied to `w` as two rank-one updates.
fn apply_plane_rotation(a: &[Complex64], b: &[Complex64], w: &mut ComplexMatrix) {
    let n = a.len();
    let alpha: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let r: Vec<Complex64> = b.iter().zip(a).map(|(y, x)| y - alpha * x).collect();
    let unit_alpha = alpha / alpha.norm();
    let shrink = 1.0 / (1.0 + alpha.norm());
    let row = |v: &[Complex64], j: usize| -> Complex64 { (0..n).map(|i| v[i].conj() * w[(i, j)]).sum() };
    let (x, y): (Vec<Complex64>, Vec<Complex64>) = (0..w.cols()).map(|j| (row(a, j), row(&r, j))).unzip();
    for i in 0..n {
        let p = (alpha - 1.0) * a[i] + r[i];
        let q = unit_alpha * a[i] + shrink * r[i];
        for j in 0..w.cols() {
            w[(i, j)] += p * x[j] - q * y[j];
        }
    }
}

fn normalise(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// A fixed unit vector supported on coordinates `k..d` that stays as far as
/// possible from the antipodes of the given loop of vectors.
fn contraction_target(loop_vectors: &[Vec<Complex64>], k: usize, d: usize) -> Result<Vec<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    let mut candidates = Vec::new();
    for i in k..d {
        let mut e = vec![Complex64::new(0.0, 0.0); d];
        e[i] = one;
        candidates.push(e);
        for l in i + 1..d {
            for c in [one, -one, Complex64::i(), -Complex64::i()] {
                let mut v = vec![Complex64::new(0.0, 0.0); d];
                v[i] = one;
                v[l] = c;
                candidates.push(normalise(v));
            }
        }
    }
    let margin = |p: &Vec<Complex64>| {
        loop_vectors
            .iter()
            .map(|a| a.iter().zip(p).map(|(x, y)| (x + y).norm_sqr()).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min)
    };
    let mut best = 0;
    let mut best_margin = margin(&candidates[0]);
    for (i, c) in candidates.iter().enumerate().skip(1) {
        let m = margin(c);
        if m > best_margin {
            best = i;
            best_margin = m;
        }
    }
    if best_margin < 0.05 {
        return Err(Error::Unsupported("sampled loop comes too close to every contraction target".into()));
    }
    Ok(candidates.swap_remove(best))
}

/// Unitary `M` fixing `e₀..e_{k-1}` with `M e_k = p`, for a unit vector `p` on coordinates `k..d`.
fn basis_with_column(p: &[Complex64], k: usize) -> ComplexMatrix {
    let d = p.len();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut e = vec![Complex64::new(0.0, 0.0); d];
        e[i] = Complex64::new(1.0, 0.0);
        cols.push(e);
    }
    cols[k] = p.to_vec();
    // Gram-Schmidt on the remaining coordinates, starting from e_k..e_d in order.
    let mut done: Vec<Vec<Complex64>> = vec![p.to_vec()];
    let mut slot = k + 1;
    for i in k..d {
        if slot == d {
            break;
        }
        let mut e = vec![Complex64::new(0.0, 0.0); d];
        e[i] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for c in &done {
                let proj: Complex64 = c.iter().zip(&e).map(|(x, y)| x.conj() * y).sum();
                for (y, x) in e.iter_mut().zip(c) {
                    *y -= proj * x;
                }
            }
        }
        let norm = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.5 {
            let e = normalise(e);
            done.push(e.clone());
            cols[slot] = e;
            slot += 1;
        }
    }
    ComplexMatrix::from_columns(d, &cols)
}

/// Path from the loop `ws` to the constant loop `I`, given that `det w` has winding zero.
///
/// Column by column, the loop of unit vectors `w(z)e_k` is pulled onto a fixed
/// vector along normalised straight lines (the sphere is simply connected), the
/// fixed vector is rotated onto `e_k`, and the remaining scalar loop is unwound
/// along its lifted phase.
fn contract_loop(ws: &[ComplexMatrix], min_samples: usize) -> Result<Vec<Vec<ComplexMatrix>>> {
    let n = ws.len();
    let d = ws[0].rows();
    let mut current = ws.to_vec();
    let mut out = vec![current.clone()];
    for k in 0..d.saturating_sub(1) {
        let a: Vec<Vec<Complex64>> = current.iter().map(|w| w.column(k)).collect();
        let p = contraction_target(&a, k, d)?;
        let line = |t: f64, j: usize| -> Vec<Complex64> {
            normalise(a[j].iter().zip(&p).map(|(x, y)| x * (1.0 - t) + y * t).collect())
        };
        let lines_at = |steps: usize| -> Vec<Vec<Vec<Complex64>>> {
            (0..n)
                .map(|j| {
                    let mut l: Vec<Vec<Complex64>> = (0..=steps).map(|s| line(s as f64 / steps as f64, j)).collect();
                    l[0] = a[j].clone();
                    l
                })
                .collect()
        };
        let longest = |lines: &[Vec<Vec<Complex64>>]| -> f64 {
            lines
                .iter()
                .flat_map(|l| l.windows(2))
                .map(|w| w[0].iter().zip(&w[1]).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt())
                .fold(0.0, f64::max)
        };
        let mut steps = 8usize;
        let mut lines = lines_at(steps);
        while longest(&lines) > 0.05 && steps < 4096 {
            steps *= 2;
            lines = lines_at(steps);
        }
        for s in 1..=steps {
            for (w, l) in current.iter_mut().zip(&lines) {
                apply_plane_rotation(&l[s - 1], &l[s], w);
            }
            out.push(current.clone());
        }
        let q = basis_with_column(&p, k).adjoint();
        let spectrum = unitary_spectrum(&q, 1e-6)?;
        let angle = spectrum.phases.iter().fold(0.0f64, |m, th| m.max(th.abs()));
        if angle == 0.0 {
            continue;
        }
        let rotation = unitary_log_path(&q, 2 + (angle / 0.1).ceil() as usize, 1e-6)?;
        let base = current.clone();
        for r in rotation.iter().skip(1) {
            current = base.iter().map(|w| r * w).collect();
            out.push(current.clone());
        }
    }
    let last: Vec<Complex64> = current.iter().map(|w| w[(d - 1, d - 1)]).collect();
    let mut lifted = Vec::with_capacity(n);
    lifted.push(last[0].arg());
    for j in 1..n {
        let prev = lifted[j - 1];
        lifted.push(prev + (last[j] / last[j - 1]).arg());
    }
    // A loop finer than the grid resolves can wind on the grid while its
    // blocks do not; each sample is then unwound along its principal phase.
    let closing = lifted[n - 1] + (last[0] / last[n - 1]).arg() - lifted[0];
    if closing.abs() > 1e-6 {
        lifted = last.iter().map(|x| x.arg()).collect();
    }
    let max_phase = lifted.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let steps = 2usize
        .max((max_phase / 0.1).ceil() as usize)
        .max(min_samples.saturating_sub(out.len()));
    let base = current.clone();
    for s in 1..=steps {
        let t = s as f64 / steps as f64;
        current = base
            .iter()
            .zip(&lifted)
            .map(|(w, &phi)| {
                let mut w = w.clone();
                for i in 0..d {
                    w[(i, d - 1)] *= phase(-t * phi);
                }
                w
            })
            .collect();
        out.push(current.clone());
    }
    Ok(out)
}

/// Path from the loop `xs` to the loop `ys` of unitaries with `det(x* y)` of winding zero.
fn circle_loop_path(xs: &[ComplexMatrix], ys: &[ComplexMatrix], min_samples: usize) -> Result<Vec<Vec<ComplexMatrix>>> {
    if xs[0].rows() == 0 {
        return Ok(vec![xs.to_vec(); min_samples.max(2)]);
    }
    let ws: Vec<ComplexMatrix> = xs.iter().zip(ys).map(|(x, y)| &x.adjoint() * y).collect();
    let mut to_identity = contract_loop(&ws, min_samples)?;
    to_identity.reverse();
    Ok(to_identity
        .into_iter()
        .map(|row| row.iter().zip(xs).map(|(s, x)| x * s).collect())
        .collect())
}

/// Decides `u ~ₕ v` at a fixed level and returns a validated path when true.
pub fn homotopic_unitaries(u: &Element, v: &Element, tol: &Tolerances) -> Result<(bool, Option<HomotopyPath>)> {
    same_level(u, v)?;
    require_unitary(u, tol.pred)?;
    require_unitary(v, tol.pred)?;
    let per_sample = if u.algebra().is_fd() {
        corner_log_paths(u.parts(), v.parts(), PATH_SAMPLES)?
    } else {
        if unitary_invariant(u, tol.pred, tol.wind)? != unitary_invariant(v, tol.pred, tol.wind)? {
            return Ok((false, None));
        }
        circle_loop_path(u.parts(), v.parts(), PATH_SAMPLES)?
    };
    let path = HomotopyPath {
        kind: PathKind::Path,
        domain: PathDomain::Unitary,
        samples: pin_endpoints(samples_from_parts(u, per_sample)?, u, v),
    };
    path.validate(u, v, tol.path, STEP_BOUND)?;
    Ok((true, Some(path)))
}

/// `u ~₁ v` with the padded path used to decide it.
pub fn sim1_path(u: &Element, v: &Element, tol: &Tolerances) -> Result<(bool, Option<HomotopyPath>)> {
    u.same_algebra(v)?;
    require_unitary(u, tol.pred)?;
    require_unitary(v, tol.pred)?;
    let k = u.row_level().max(v.row_level()) + 1;
    let (pu, pv) = (pad_with_unit(u, k), pad_with_unit(v, k));
    let decided = homotopic_unitaries(&pu, &pv, tol)?;
    let shortcut = unitary_invariant(u, tol.pred, tol.wind)? == unitary_invariant(v, tol.pred, tol.wind)?;
    if decided.0 != shortcut {
        return Err(Error::Inconsistent("path decision disagrees with the winding invariant".into()));
    }
    Ok(decided)
}

pub fn sim1_equivalent(u: &Element, v: &Element, tol: &Tolerances) -> Result<bool> {
    Ok(sim1_path(u, v, tol)?.0)
}

/// `u ≈₁ v`, cross-checked against `u ⊕ v* ~₁ v ⊕ v*`.
pub fn approx1_equivalent(u: &Element, v: &Element, tol: &Tolerances) -> Result<bool> {
    let plain = sim1_equivalent(u, v, tol)?;
    let w = v.adjoint();
    let stable = sim1_equivalent(&u.direct_sum(&w)?, &v.direct_sum(&w)?, tol)?;
    if plain != stable {
        return Err(Error::Inconsistent("adding a common summand changed the unitary decision".into()));
    }
    Ok(plain)
}

/// Complete invariant of a partial unitary: support ranks, plus over the circle
/// the winding of the unitary obtained by compressing to the (constant) support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PartialUnitaryInvariant {
    pub ranks: Vec<i64>,
    pub winding: Vec<i64>,
}

/// The support `|u|` of a circle partial unitary as one constant projection.
fn constant_support(support: &Element, tol: f64) -> Result<ComplexMatrix> {
    let first = support.part(0);
    for p in support.parts() {
        if crate::kernel::spectral_norm(&(p - first)) > tol {
            return Err(Error::Unsupported(
                "partial unitaries whose support varies over the circle".into(),
            ));
        }
    }
    Ok(first.clone())
}

pub fn partial_unitary_invariant(u: &Element, tol: &Tolerances) -> Result<PartialUnitaryInvariant> {
    require_partial_unitary(u, tol.pred)?;
    let support = abs_value(u)?;
    let ranks = rank_vector(&support)?.ranks;
    if u.algebra().is_fd() {
        return Ok(PartialUnitaryInvariant { ranks, winding: Vec::new() });
    }
    let q = constant_support(&support, tol.pred)?;
    let (b, _) = split_bases(&q)?;
    let compressed: Vec<ComplexMatrix> = u.parts().iter().map(|m| &(&b.adjoint() * m) * &b).collect();
    Ok(PartialUnitaryInvariant {
        ranks,
        winding: det_winding(&compressed, false, tol.wind)?,
    })
}

/// Decides `u ~ₕ v` inside the partial unitaries of one level. The path first
/// rotates the support of `u` onto that of `v` by unitary conjugation, then
/// deforms inside the common corner.
pub fn homotopic_partial_unitaries(
    u: &Element,
    v: &Element,
    tol: &Tolerances,
) -> Result<(bool, Option<HomotopyPath>)> {
    same_level(u, v)?;
    let (iu, iv) = (partial_unitary_invariant(u, tol)?, partial_unitary_invariant(v, tol)?);
    if iu.ranks != iv.ranks {
        return Ok((false, None));
    }
    let fd = u.algebra().is_fd();
    let (su, sv) = (abs_value(u)?, abs_value(v)?);
    // One transport unitary per block, or one constant unitary for the whole circle.
    let (from, to): (Vec<ComplexMatrix>, Vec<ComplexMatrix>) = if fd {
        (su.parts().to_vec(), sv.parts().to_vec())
    } else {
        (
            vec![constant_support(&su, tol.pred)?],
            vec![constant_support(&sv, tol.pred)?],
        )
    };
    let mut rotations = Vec::with_capacity(from.len());
    let mut corners = Vec::with_capacity(from.len());
    for (p, q) in from.iter().zip(&to) {
        let (bp, bq) = (split_bases(p)?, split_bases(q)?);
        let w = transport_unitary(&bp, &bq);
        rotations.push(unitary_log_path(&polar_unitary(&w)?, PATH_SAMPLES, 1e-6)?);
        corners.push(bq.0);
    }
    let rot = |j: usize| if fd { j } else { 0 };

    let mut stage1 = Vec::with_capacity(PATH_SAMPLES);
    for k in 0..PATH_SAMPLES {
        let parts: Vec<ComplexMatrix> = u
            .parts()
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let w = &rotations[rot(j)][k];
                &(w * m) * &w.adjoint()
            })
            .collect();
        stage1.push(parts);
    }
    let rotated = stage1[PATH_SAMPLES - 1].clone();
    let compress = |parts: &[ComplexMatrix]| -> Vec<ComplexMatrix> {
        parts
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let b = &corners[rot(j)];
                &(&b.adjoint() * m) * b
            })
            .collect()
    };
    let (xs, ys) = (compress(&rotated), compress(v.parts()));
    let inner = if fd {
        corner_log_paths(&xs, &ys, PATH_SAMPLES)?
    } else {
        if iu.winding != iv.winding {
            return Ok((false, None));
        }
        circle_loop_path(&xs, &ys, 2)?
    };
    let stage2: Vec<Vec<ComplexMatrix>> = inner
        .into_iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, s)| {
                    let b = &corners[rot(j)];
                    &(b * s) * &b.adjoint()
                })
                .collect()
        })
        .collect();

    let first = HomotopyPath {
        kind: PathKind::Path,
        domain: PathDomain::PartialUnitary,
        samples: samples_from_parts(u, stage1)?,
    };
    let second = HomotopyPath {
        kind: PathKind::Path,
        domain: PathDomain::PartialUnitary,
        samples: samples_from_parts(u, stage2)?,
    };
    let mut path = first.concat(second);
    path.samples = pin_endpoints(path.samples, u, v);
    path.validate(u, v, tol.path, STEP_BOUND)?;
    Ok((true, Some(path)))
}

/// `u ~_K v` with the zero-padded path used to decide it.
pub fn sim_k_path(u: &Element, v: &Element, tol: &Tolerances) -> Result<(bool, Option<HomotopyPath>)> {
    u.same_algebra(v)?;
    let k = u.row_level().max(v.row_level());
    let (pu, pv) = (pad_with_zero(u, k), pad_with_zero(v, k));
    let decided = homotopic_partial_unitaries(&pu, &pv, tol)?;
    let shortcut = partial_unitary_invariant(u, tol)? == partial_unitary_invariant(v, tol)?;
    if decided.0 != shortcut {
        return Err(Error::Inconsistent("path decision disagrees with the support invariant".into()));
    }
    Ok(decided)
}

pub fn sim_k_equivalent(u: &Element, v: &Element, tol: &Tolerances) -> Result<bool> {
    Ok(sim_k_path(u, v, tol)?.0)
}

/// `u ≈_K v`, cross-checked against `u ⊕ e ~_K v ⊕ e`.
pub fn approx_k_equivalent(u: &Element, v: &Element, tol: &Tolerances) -> Result<bool> {
    let plain = sim_k_equivalent(u, v, tol)?;
    let e = Element::unit(u.algebra(), 1);
    let stable = sim_k_equivalent(&u.direct_sum(&e)?, &v.direct_sum(&e)?, tol)?;
    if plain != stable {
        return Err(Error::Inconsistent("adding a common summand changed the partial-unitary decision".into()));
    }
    Ok(plain)
}

/// Paths derived from a partial-unitary path `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferredPaths {
    /// `t ↦ |f(t)|`.
    pub support: HomotopyPath,
    /// `t ↦ f(t) + (eⁿ − |f(t)|)`.
    pub plus: HomotopyPath,
    /// `t ↦ f(t) − (eⁿ − |f(t)|)`.
    pub minus: HomotopyPath,
}

/// Applies `|·|` and `f ↦ f ± (eⁿ − |f|)` samplewise, checking each derived sample.
pub fn abs_homotopy_transfer(path: &HomotopyPath, tol: &Tolerances) -> Result<TransferredPaths> {
    let mut support = Vec::with_capacity(path.samples.len());
    let mut plus = Vec::with_capacity(path.samples.len());
    let mut minus = Vec::with_capacity(path.samples.len());
    for (index, f) in path.samples.iter().enumerate() {
        let fail = |predicate: &str| Error::PredicateFailure {
            index,
            predicate: predicate.into(),
        };
        if !f.is_square() || !is_partial_unitary(f, tol.path)? {
            return Err(fail("partial_unitary"));
        }
        let a = abs_value(f)?;
        let gap = Element::unit(f.algebra(), f.row_level()).sub(&a)?;
        let (p, m) = (f.add(&gap)?, f.sub(&gap)?);
        if !is_order_projection(&a, tol.path)? {
            return Err(fail("order_projection"));
        }
        if !is_unitary(&p, tol.path)? || !is_unitary(&m, tol.path)? {
            return Err(fail("unitary"));
        }
        support.push(a);
        plus.push(p);
        minus.push(m);
    }
    Ok(TransferredPaths {
        support: HomotopyPath {
        kind: PathKind::Path,
            domain: PathDomain::OrderProjection,
            samples: support,
        },
        plus: HomotopyPath {
        kind: PathKind::Path,
            domain: PathDomain::Unitary,
            samples: plus,
        },
        minus: HomotopyPath {
        kind: PathKind::Path,
            domain: PathDomain::Unitary,
            samples: minus,
        },
    })
}

/// Invariant of a projection, re-exported for callers that already hold one.
pub fn projection_ranks(p: &Element, tol: &Tolerances) -> Result<ProjInvariant> {
    require_projection(p, tol.pred)?;
    rank_vector(p)
}

pub fn unitary_class(u: &Element, tol: &Tolerances) -> Result<UnitaryInvariant> {
    unitary_invariant(u, tol.pred, tol.wind)
}
