//! Seeded property suites over the model calculus and the equivalence engine.
//!
//! Each property draws its inputs from the trial's RNG and returns a residual;
//! the trial passes when the residual is at most the path tolerance. Checks
//! that are true or false report residual 0 or 1.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::equivalence::{
    abs_homotopy_transfer, approx1_equivalent, approx_k_equivalent, condition_t_transport, homotopic_partial_unitaries,
    mvn_equivalent, partial_unitary_invariant, sim1_equivalent, sim1_path, sim_k_equivalent, unitary_class,
    PartialIsometryCertificate, STEP_BOUND,
};
use crate::error::{Error, Result};
use crate::kernel::{hermitian_eig, spectral_norm, ComplexMatrix};
use crate::model::{
    abs_adjoint, abs_value, classify, is_order_projection, is_partial_isometry, is_partial_unitary, is_unitary,
    order_unit_norm, orthogonal, orthogonal_infty_a, AlgebraSpec, Element,
};
use crate::random::{
    element, gaussian, gaussian_matrix, partial_isometry, partial_unitary, partial_unitary_with_ranks,
    positive, projection, ranks, selfadjoint, trial_rng, unitary, unitary_frame,
    unitary_matrix, unitary_with_windings,
};
use crate::tolerance::Tolerances;

type Check = fn(&mut ChaCha8Rng, &AlgebraSpec, &Tolerances) -> Result<f64>;

pub struct Property {
    pub name: &'static str,
    pub check: Check,
    /// Reason the property is out of scope over the circle, if it is.
    pub circle_unsupported: Option<&'static str>,
}

/// A failing trial, reproducible from `(seed, trial)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub trial: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub worst_residual: f64,
    /// The first few failures in trial order.
    pub failures: Vec<Failure>,
    /// Set when a trial stopped with a numerical error rather than a wrong answer.
    pub numerical_error: bool,
    #[serde(skip)]
    pub elapsed: std::time::Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub properties: Vec<PropertyResult>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.failed == 0)
    }

    pub fn numerical_error(&self) -> bool {
        self.properties.iter().any(|p| p.numerical_error)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }
}

const KEPT_FAILURES: usize = 5;

/// Trial streams are disjoint across properties: property `k` uses streams
/// starting at `k · 2³²`.
fn stream(property: usize, trial: u64) -> u64 {
    ((property as u64) << 32) | trial
}

pub fn run_property(
    index: usize,
    prop: &Property,
    alg: &AlgebraSpec,
    seed: u64,
    trials: u64,
    tol: &Tolerances,
) -> PropertyResult {
    let start = std::time::Instant::now();
    let outcomes: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| (prop.check)(&mut trial_rng(seed, stream(index, t)), alg, tol))
        .collect();
    let mut result = PropertyResult {
        name: prop.name.into(),
        trials,
        passed: 0,
        failed: 0,
        worst_residual: 0.0,
        failures: Vec::new(),
        numerical_error: false,
        elapsed: start.elapsed(),
    };
    for (t, out) in outcomes.into_iter().enumerate() {
        let detail = match out {
            Ok(r) if r <= tol.path => {
                result.passed += 1;
                result.worst_residual = result.worst_residual.max(r);
                continue;
            }
            Ok(r) => {
                result.worst_residual = result.worst_residual.max(r);
                format!("residual {r:.3e}")
            }
            Err(e) => {
                result.numerical_error |= e.is_numerical();
                result.worst_residual = f64::INFINITY;
                e.to_string()
            }
        };
        result.failed += 1;
        if result.failures.len() < KEPT_FAILURES {
            result.failures.push(Failure {
                seed,
                trial: stream(index, t as u64),
                detail,
            });
        }
    }
    result
}

/// Runs every in-scope property; out-of-scope ones are returned by name with the reason.
pub fn run_suite(
    name: &str,
    props: &[Property],
    alg: &AlgebraSpec,
    seed: u64,
    trials: u64,
    tol: &Tolerances,
    offset: usize,
) -> (SuiteResult, Vec<String>) {
    let mut results = Vec::new();
    let mut unsupported = Vec::new();
    for (k, p) in props.iter().enumerate() {
        match (alg.is_fd(), p.circle_unsupported) {
            (false, Some(why)) => unsupported.push(format!("{}: {why}", p.name)),
            _ => results.push(run_property(offset + k, p, alg, seed, trials, tol)),
        }
    }
    (
        SuiteResult {
            suite: name.into(),
            properties: results,
        },
        unsupported,
    )
}

fn holds(b: bool) -> f64 {
    if b {
        0.0
    } else {
        1.0
    }
}

fn level(rng: &mut impl Rng) -> usize {
    rng.gen_range(1..=3)
}

fn any_element(rng: &mut impl Rng, alg: &AlgebraSpec) -> Element {
    let (m, n) = (level(rng), level(rng));
    element(rng, alg, m, n)
}

fn relative(a: &Element, b: &Element, scale: f64) -> Result<f64> {
    Ok(a.distance(b)? / scale.max(1.0))
}

/// How far a square element is from positive: Hermitian defect plus the most
/// negative eigenvalue, over all parts.
fn psd_deficit(x: &Element) -> Result<f64> {
    let mut worst = x.selfadjoint_defect();
    for m in x.parts() {
        let eig = hermitian_eig(&m.hermitian_part(), f64::INFINITY)?;
        worst = worst.max(-eig.min_eigenvalue());
    }
    Ok(worst)
}

/// The same core in every sample over the circle, a fresh one per block otherwise.
fn per_part(alg: &AlgebraSpec, n: usize, mut f: impl FnMut(usize) -> ComplexMatrix) -> Vec<ComplexMatrix> {
    if alg.is_fd() {
        return alg.part_dims().iter().map(|&d| f(n * d)).collect();
    }
    let core = f(n * alg.part_dim(0));
    vec![core; alg.num_parts()]
}

fn in_frame(alg: &AlgebraSpec, n: usize, left: &[ComplexMatrix], cores: &[ComplexMatrix], right: &[ComplexMatrix]) -> Element {
    let parts = left
        .iter()
        .zip(cores)
        .zip(right)
        .map(|((l, c), r)| &(l * c) * &r.adjoint())
        .collect();
    Element::new(alg.clone(), n, n, parts).expect("frame and core sizes agree")
}

fn random_psd(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = gaussian_matrix(rng, n, n, 1.0);
    (&a.adjoint() * &a).hermitian_part()
}

/// `a ⊕ b` as one square matrix.
fn split(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::block_diag(a, b)
}

/// Positives `u = W (A ⊕ 0) W*` and `v = W (0 ⊕ B) W*`, plus `w = W (0 ⊕ C) W*`
/// with `0 ≤ C ≤ B`.
fn orthogonal_positives(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize) -> (Element, Element, Element) {
    let w = unitary_frame(rng, alg, n);
    let mut cuts = Vec::new();
    let mut a_cores = Vec::new();
    let mut b_cores = Vec::new();
    let mut c_cores = Vec::new();
    let sizes = per_part(alg, n, |s| ComplexMatrix::zeros(s, 0));
    let circle_cut = rng.gen_range(0..=sizes[0].rows());
    for (i, z) in sizes.iter().enumerate() {
        let s = z.rows();
        let cut = if alg.is_fd() { rng.gen_range(0..=s) } else { circle_cut };
        cuts.push(cut);
        if alg.is_fd() || i == 0 {
            let a = random_psd(rng, cut);
            let b = random_psd(rng, s - cut);
            let t = unitary_matrix(rng, s - cut);
            let shrink: Vec<f64> = (0..s - cut).map(|_| rng.gen::<f64>()).collect();
            let t = &(&t * &ComplexMatrix::from_diag(&shrink)) * &t.adjoint();
            let root = crate::kernel::matrix_func(&b, |x| x.max(0.0).sqrt(), f64::INFINITY).expect("psd");
            let c = (&(&root * &t) * &root).hermitian_part();
            a_cores.push(split(&a, &ComplexMatrix::zeros(s - cut, s - cut)));
            b_cores.push(split(&ComplexMatrix::zeros(cut, cut), &b));
            c_cores.push(split(&ComplexMatrix::zeros(cut, cut), &c));
        } else {
            a_cores.push(a_cores[0].clone());
            b_cores.push(b_cores[0].clone());
            c_cores.push(c_cores[0].clone());
        }
    }
    let herm = |e: Element| e.map_parts(n, n, |_, m| m.hermitian_part());
    (
        herm(in_frame(alg, n, &w, &a_cores, &w)),
        herm(in_frame(alg, n, &w, &b_cores, &w)),
        herm(in_frame(alg, n, &w, &c_cores, &w)),
    )
}

/// General `u = U (X ⊕ 0) V*` and `v = U (0 ⊕ Y) V*`, orthogonal by construction.
fn orthogonal_pair(rng: &mut impl Rng, alg: &AlgebraSpec, n: usize) -> (Element, Element) {
    let left = unitary_frame(rng, alg, n);
    let right = unitary_frame(rng, alg, n);
    let mut xs: Vec<ComplexMatrix> = Vec::new();
    let mut ys: Vec<ComplexMatrix> = Vec::new();
    let sizes = per_part(alg, n, |s| ComplexMatrix::zeros(s, 0));
    for (i, z) in sizes.iter().enumerate() {
        if !alg.is_fd() && i > 0 {
            xs.push(xs[0].clone());
            ys.push(ys[0].clone());
            continue;
        }
        let s = z.rows();
        let (r, c) = (rng.gen_range(0..=s), rng.gen_range(0..=s));
        let mut x = ComplexMatrix::zeros(s, s);
        x.set_block(0, 0, &gaussian_matrix(rng, r, c, 1.0));
        let mut y = ComplexMatrix::zeros(s, s);
        y.set_block(r, c, &gaussian_matrix(rng, s - r, s - c, 1.0));
        xs.push(x);
        ys.push(y);
    }
    (in_frame(alg, n, &left, &xs, &right), in_frame(alg, n, &left, &ys, &right))
}

fn complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

// ---- model calculus -------------------------------------------------------

fn abs_fixes_positives(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let n = level(rng);
    let p = positive(rng, alg, n);
    relative(&abs_value(&p)?, &p, p.norm())
}

fn abs_dominates_selfadjoint(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let n = level(rng);
    let v = selfadjoint(rng, alg, n);
    let a = abs_value(&v)?;
    Ok(psd_deficit(&a.add(&v)?)?.max(psd_deficit(&a.sub(&v)?)?) / v.norm().max(1.0))
}

fn abs_real_homogeneous(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let v = any_element(rng, alg);
    let k = gaussian(rng);
    relative(&abs_value(&v.scale_real(k))?, &abs_value(&v)?.scale_real(k.abs()), v.norm() * k.abs())
}

fn orthogonality_hereditary(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = level(rng);
    let (u, v, w) = orthogonal_positives(rng, alg, n);
    let scale = u.norm().max(v.norm()).max(1.0);
    let t = tol.pred * scale;
    Ok(holds(orthogonal(&u, &v, t)? && psd_deficit(&w)? <= t && psd_deficit(&v.sub(&w)?)? <= t && orthogonal(&u, &w, t)?))
}

fn orthogonality_absorbs_abs_sums(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = level(rng);
    let (u, v, w) = orthogonal_positives(rng, alg, n);
    let w = w.scale(complex(rng));
    let scale = u.norm().max(v.norm()).max(w.norm()).max(1.0);
    let t = tol.pred * scale;
    let plus = abs_value(&v.add(&w)?)?;
    let minus = abs_value(&v.sub(&w)?)?;
    Ok(holds(orthogonal(&u, &plus, t)? && orthogonal(&u, &minus, t)?))
}

fn scalar_contraction_bound(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let (m, n, r, s) = (level(rng), level(rng), level(rng), level(rng));
    let v = element(rng, alg, m, n);
    let alpha = gaussian_matrix(rng, r, m, 1.0);
    let beta = gaussian_matrix(rng, n, s, 1.0);
    let lhs = abs_value(&Element::scalar_conjugate(&alpha, &v, &beta)?)?;
    let inner = Element::scalar_conjugate(&ComplexMatrix::identity(n), &abs_value(&v)?, &beta)?;
    let a = spectral_norm(&alpha);
    let rhs = abs_value(&inner)?.scale_real(a);
    Ok(psd_deficit(&rhs.sub(&lhs)?)? / (a * spectral_norm(&beta) * v.norm()).max(1.0))
}

fn abs_of_direct_sum(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let v = any_element(rng, alg);
    let w = any_element(rng, alg);
    let lhs = abs_value(&v.direct_sum(&w)?)?;
    relative(&lhs, &abs_value(&v)?.direct_sum(&abs_value(&w)?)?, v.norm().max(w.norm()))
}

fn isometry_invariance(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let (m, n) = (level(rng), level(rng));
    let r = m + rng.gen_range(0..=2);
    let u = unitary_matrix(rng, r);
    let alpha = u.block(0, 0, r, m);
    let v = element(rng, alg, m, n);
    let lhs = abs_value(&Element::scalar_conjugate(&alpha, &v, &ComplexMatrix::identity(n))?)?;
    relative(&lhs, &abs_value(&v)?, v.norm())
}

fn dilation_abs(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let v = any_element(rng, alg);
    let lhs = abs_value(&v.dilation())?;
    relative(&lhs, &abs_adjoint(&v)?.direct_sum(&abs_value(&v)?)?, v.norm())
}

fn abs_block_positive(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let v = any_element(rng, alg);
    let block = Element::block_2x2(&abs_adjoint(&v)?, &v, &v.adjoint(), &abs_value(&v)?)?;
    Ok(psd_deficit(&block)? / v.norm().max(1.0))
}

fn row_padding_abs(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let v = any_element(rng, alg);
    relative(&abs_value(&v.pad_rows(level(rng)))?, &abs_value(&v)?, v.norm())
}

fn column_padding_abs(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let v = any_element(rng, alg);
    let s = level(rng);
    let rhs = abs_value(&v)?.direct_sum(&Element::zero(alg, s, s))?;
    relative(&abs_value(&v.pad_cols(s))?, &rhs, v.norm())
}

fn unitary_conjugation(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let n = level(rng);
    let v = element(rng, alg, n, n);
    let a = unitary_matrix(rng, n);
    let lhs = abs_value(&Element::scalar_conjugate(&a.adjoint(), &v, &a)?)?;
    let rhs = Element::scalar_conjugate(&a.adjoint(), &abs_value(&v)?, &a)?;
    relative(&lhs, &rhs, v.norm())
}

/// Residual of `|u ± v| = |u| + |v|` and `|u* ± v*| = |u*| + |v*|`.
fn sum_criterion(u: &Element, v: &Element) -> Result<f64> {
    let (au, av) = (abs_value(u)?, abs_value(v)?);
    let (bu, bv) = (abs_adjoint(u)?, abs_adjoint(v)?);
    let mut worst: f64 = 0.0;
    for s in [1.0, -1.0] {
        let w = u.add(&v.scale_real(s))?;
        worst = worst.max(abs_value(&w)?.distance(&au.add(&av)?)?);
        worst = worst.max(abs_adjoint(&w)?.distance(&bu.add(&bv)?)?);
    }
    Ok(worst)
}

fn orthogonality_sum_criterion(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = level(rng);
    let (u, v) = orthogonal_pair(rng, alg, n);
    let scale = u.norm().max(v.norm()).max(1.0);
    let forward = orthogonal(&u, &v, tol.pred * scale)? && sum_criterion(&u, &v)? <= tol.pred * scale;
    let (x, y) = (element(rng, alg, n, n), element(rng, alg, n, n));
    let scale = x.norm().max(y.norm()).max(1.0);
    let backward = !orthogonal(&x, &y, tol.pred * scale)? && sum_criterion(&x, &y)? > tol.pred * scale;
    Ok(holds(forward && backward))
}

fn orthogonality_scalar_invariance(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = level(rng);
    let (u, v) = orthogonal_pair(rng, alg, n);
    let mut ok = true;
    for _ in 0..3 {
        let (a, b) = (complex(rng), complex(rng));
        let scale = (u.norm() * a.norm()).max(v.norm() * b.norm()).max(1.0);
        ok &= orthogonal(&u.scale(a), &v.scale(b), tol.pred * scale)?;
    }
    Ok(holds(ok))
}

fn orthogonality_matches_product_test(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = level(rng);
    let (u, v, _) = orthogonal_positives(rng, alg, n);
    let p = projection(rng, alg, n);
    let q = Element::unit(alg, n).sub(&p)?;
    let (x, y) = (positive(rng, alg, n), positive(rng, alg, n));
    let mut ok = true;
    for (a, b, expect) in [(&u, &v, Some(true)), (&p, &q, Some(true)), (&x, &y, None)] {
        let t = tol.pred * a.norm().max(b.norm()).max(1.0).powi(2);
        let (by_abs, by_product) = (orthogonal(a, b, t)?, orthogonal_infty_a(a, b, t)?);
        ok &= by_abs == by_product && expect.map_or(true, |e| e == by_abs);
    }
    Ok(holds(ok))
}

/// Largest singular value as the square root of the top eigenvalue of `v*v`,
/// independent of the SVD used elsewhere.
fn gram_norm(v: &Element) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for m in v.parts() {
        let g = (&m.adjoint() * m).hermitian_part();
        worst = worst.max(hermitian_eig(&g, f64::INFINITY)?.max_eigenvalue().max(0.0).sqrt());
    }
    Ok(worst)
}

fn norm_matches_singular_values(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let v = any_element(rng, alg);
    Ok((order_unit_norm(&v, tol.bisect)? - gram_norm(&v)?).abs())
}

fn norm_of_direct_sum_is_max(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let u = any_element(rng, alg);
    let v = any_element(rng, alg).scale_real(rng.gen_range(0.2..2.0));
    let lhs = order_unit_norm(&u.direct_sum(&v)?, tol.bisect)?;
    let rhs = order_unit_norm(&u, tol.bisect)?.max(order_unit_norm(&v, tol.bisect)?);
    Ok((lhs - rhs).abs())
}

/// `‖|v + Δ| − |v|‖ ≤ (‖v‖ + ‖v + Δ‖)^{1/2} ‖Δ‖^{1/2}`; the residual is how far
/// the worst ratio exceeds that constant.
fn abs_square_root_continuity(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, _: &Tolerances) -> Result<f64> {
    let (m, n) = (level(rng), level(rng));
    let v = element(rng, alg, m, n);
    let dir = element(rng, alg, m, n);
    let dir = dir.scale_real(1.0 / dir.norm());
    let base = abs_value(&v)?;
    let mut worst: f64 = 0.0;
    for delta in [1e-2, 1e-4, 1e-6] {
        let w = v.add(&dir.scale_real(delta))?;
        let c = (v.norm() + w.norm()).sqrt();
        let ratio = abs_value(&w)?.distance(&base)? / delta.sqrt();
        worst = worst.max(ratio / c - 1.0);
    }
    Ok(worst.max(0.0))
}

fn classification_lattice(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = level(rng);
    let kind = rng.gen_range(0..6);
    let v = match kind {
        0 => projection(rng, alg, n),
        1 => unitary(rng, alg, n),
        2 => partial_isometry(rng, alg, n, n),
        3 => partial_unitary(rng, alg, n),
        4 => projection(rng, alg, n).scale_real(0.5),
        _ => element(rng, alg, n, n),
    };
    let c = classify(&v, tol.pred)?;
    let sound = match kind {
        0 => c.is_order_projection,
        1 => c.is_unitary,
        2 => c.is_partial_isometry,
        3 => c.is_partial_unitary,
        _ => true,
    };
    let lattice = (!c.is_order_projection || (c.is_selfadjoint && c.is_positive && c.is_partial_unitary))
        && (!c.is_unitary || (c.is_partial_isometry && c.is_partial_unitary))
        && (!c.is_partial_unitary || c.is_partial_isometry);
    Ok(holds(sound && lattice))
}

pub fn model_properties() -> Vec<Property> {
    let p = |name, check: Check| Property {
        name,
        check,
        circle_unsupported: None,
    };
    vec![
        p("abs_fixes_positives", abs_fixes_positives),
        p("abs_dominates_selfadjoint", abs_dominates_selfadjoint),
        p("abs_real_homogeneous", abs_real_homogeneous),
        p("orthogonality_hereditary", orthogonality_hereditary),
        p("orthogonality_absorbs_abs_sums", orthogonality_absorbs_abs_sums),
        p("scalar_contraction_bound", scalar_contraction_bound),
        p("abs_of_direct_sum", abs_of_direct_sum),
        p("isometry_invariance", isometry_invariance),
        p("dilation_abs", dilation_abs),
        p("abs_block_positive", abs_block_positive),
        p("row_padding_abs", row_padding_abs),
        p("column_padding_abs", column_padding_abs),
        p("unitary_conjugation", unitary_conjugation),
        p("orthogonality_sum_criterion", orthogonality_sum_criterion),
        p("orthogonality_scalar_invariance", orthogonality_scalar_invariance),
        p("orthogonality_matches_product_test", orthogonality_matches_product_test),
        p("norm_matches_singular_values", norm_matches_singular_values),
        p("norm_of_direct_sum_is_max", norm_of_direct_sum_is_max),
        p("abs_square_root_continuity", abs_square_root_continuity),
        p("classification_lattice", classification_lattice),
    ]
}

// ---- equivalence engine ---------------------------------------------------

fn small_level(rng: &mut impl Rng) -> usize {
    rng.gen_range(1..=2)
}

fn certified(p: &Element, q: &Element, tol: &Tolerances) -> Result<bool> {
    match mvn_equivalent(p, q, tol)? {
        (true, Some(c)) => Ok(c.validate(tol.pred).is_ok()),
        _ => Ok(false),
    }
}

/// `W p W*` for a continuous unitary frame `W`.
fn rotate(rng: &mut impl Rng, p: &Element) -> Element {
    let n = p.row_level();
    let w = unitary_frame(rng, p.algebra(), n);
    let parts: Vec<ComplexMatrix> = p.parts().to_vec();
    in_frame(p.algebra(), n, &w, &parts, &w).map_parts(n, n, |_, m| m.hermitian_part())
}

fn projection_padding(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let p = projection(rng, alg, n);
    let k = small_level(rng);
    let z = Element::zero(alg, k, k);
    Ok(holds(certified(&p, &p.direct_sum(&z)?, tol)? && certified(&p, &z.direct_sum(&p)?, tol)?))
}

fn projection_sum_swap(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let p = projection(rng, alg, n);
    let n = small_level(rng);
    let q = projection(rng, alg, n);
    Ok(holds(certified(&p.direct_sum(&q)?, &q.direct_sum(&p)?, tol)?))
}

fn projection_sum_congruence(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let p = projection(rng, alg, n);
    let n = small_level(rng);
    let q = projection(rng, alg, n);
    let (pp, qq) = (rotate(rng, &p), rotate(rng, &q));
    Ok(holds(
        certified(&p, &pp, tol)? && certified(&q, &qq, tol)? && certified(&p.direct_sum(&q)?, &pp.direct_sum(&qq)?, tol)?,
    ))
}

fn orthogonal_sum_is_direct_sum(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let w = unitary_frame(rng, alg, n);
    let size = w[0].rows();
    let shared = {
        let a = rng.gen_range(0..=size);
        (a, rng.gen_range(a..=size))
    };
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for m in &w {
        let s = m.rows();
        let (rank, cut) = if alg.is_fd() {
            let r = rng.gen_range(0..=s);
            (r, rng.gen_range(r..=s))
        } else {
            shared
        };
        let d1: Vec<f64> = (0..s).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
        let d2: Vec<f64> = (0..s).map(|i| if i >= rank && i < cut { 1.0 } else { 0.0 }).collect();
        a.push(ComplexMatrix::from_diag(&d1));
        b.push(ComplexMatrix::from_diag(&d2));
    }
    let herm = |e: Element| e.map_parts(n, n, |_, m| m.hermitian_part());
    let p = herm(in_frame(alg, n, &w, &a, &w));
    let q = herm(in_frame(alg, n, &w, &b, &w));
    if !orthogonal(&p, &q, tol.pred)? {
        return Ok(1.0);
    }
    Ok(holds(certified(&p.add(&q)?, &p.direct_sum(&q)?, tol)?))
}

/// Rank from the trace, independent of the eigensolver.
fn trace_ranks(p: &Element) -> Vec<i64> {
    let r: Vec<i64> = p.parts().iter().map(|m| m.trace().re.round() as i64).collect();
    if p.algebra().is_fd() {
        r
    } else {
        vec![r[0]]
    }
}

fn projection_decision_coherence(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let p = projection(rng, alg, n);
    let q = if rng.gen_bool(0.5) { rotate(rng, &p) } else { projection(rng, alg, n) };
    let (decided, cert) = mvn_equivalent(&p, &q, tol)?;
    let oracle = trace_ranks(&p) == trace_ranks(&q);
    let cert_ok = cert.map_or(!decided, |c| c.validate(tol.pred).is_ok());
    Ok(holds(decided == oracle && cert_ok))
}

/// Winding of `det u` from `arg det(u_j* u_{j+1})`, a second route to the invariant.
fn product_winding(u: &Element) -> Option<i64> {
    if u.algebra().is_fd() {
        return None;
    }
    let n = u.parts().len();
    let total: f64 = (0..n)
        .map(|j| (&u.part(j).adjoint() * u.part((j + 1) % n)).determinant().arg())
        .sum();
    Some((total / (2.0 * std::f64::consts::PI)).round() as i64)
}

fn matched_unitaries(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, n: usize) -> (Element, Element) {
    if alg.is_fd() {
        return (unitary(rng, alg, n), unitary(rng, alg, n));
    }
    let size = n * alg.part_dim(0);
    let w: Vec<i32> = (0..size).map(|_| rng.gen_range(-1..=1)).collect();
    let mut shuffled = w.clone();
    shuffled.rotate_left(1);
    (unitary_with_windings(rng, alg, n, &w), unitary_with_windings(rng, alg, n, &shuffled))
}

fn unitary_homotopy_paths(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let (u, v) = matched_unitaries(rng, alg, n);
    let (decided, path) = sim1_path(&u, &v, tol)?;
    let Some(path) = path else { return Ok(1.0) };
    let valid = path.validate(path.first(), path.last(), tol.path, STEP_BOUND).is_ok();
    let n = small_level(rng);
    let other = unitary(rng, alg, n);
    let oracle = product_winding(&u) == product_winding(&other);
    Ok(holds(decided && valid && sim1_equivalent(&u, &other, tol)? == oracle))
}

fn unitary_relation_laws(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let (u, v) = matched_unitaries(rng, alg, n);
    let n = small_level(rng);
    let w = unitary(rng, alg, n);
    let mut ok = true;
    for rel in [sim1_equivalent, approx1_equivalent] {
        let uv = rel(&u, &v, tol)?;
        let (vw, uw) = (rel(&v, &w, tol)?, rel(&u, &w, tol)?);
        ok &= rel(&u, &u, tol)? && uv == rel(&v, &u, tol)? && (!(uv && vw) || uw);
    }
    Ok(holds(ok))
}

fn partial_unitary_relation_laws(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let r = ranks(rng, alg, n);
    let u = partial_unitary_with_ranks(rng, alg, n, &r);
    let v = partial_unitary_with_ranks(rng, alg, n, &r);
    let n = small_level(rng);
    let w = partial_unitary(rng, alg, n);
    let mut ok = true;
    for rel in [sim_k_equivalent, approx_k_equivalent] {
        let uv = rel(&u, &v, tol)?;
        let (vw, uw) = (rel(&v, &w, tol)?, rel(&u, &w, tol)?);
        ok &= rel(&u, &u, tol)? && uv == rel(&v, &u, tol)? && (!(uv && vw) || uw);
    }
    Ok(holds(ok))
}

fn transport_certificates(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let p = projection(rng, alg, n);
    let (q1, q2) = (rotate(rng, &p), rotate(rng, &p));
    let cert = |target: &Element| -> Result<PartialIsometryCertificate> {
        mvn_equivalent(target, &p, tol)?.1.ok_or_else(|| Error::Inconsistent("rotated projection not equivalent".into()))
    };
    let w = condition_t_transport(&cert(&q1)?, &cert(&q2)?, tol)?;
    let linked = w.target.distance(&q1)? <= tol.pred && w.source.distance(&q2)? <= tol.pred;
    Ok(holds(linked && w.validate(tol.pred).is_ok()))
}

fn partial_unitary_path_transfer(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let r = ranks(rng, alg, n);
    let u = partial_unitary_with_ranks(rng, alg, n, &r);
    let v = partial_unitary_with_ranks(rng, alg, n, &r);
    let same = partial_unitary_invariant(&u, tol)? == partial_unitary_invariant(&v, tol)?;
    let (decided, path) = homotopic_partial_unitaries(&u, &v, tol)?;
    if decided != same {
        return Ok(1.0);
    }
    let Some(path) = path else { return Ok(0.0) };
    let t = abs_homotopy_transfer(&path, tol)?;
    let e = Element::unit(alg, n);
    let ends = |x: &Element, s: f64| -> Result<Element> { x.add(&e.sub(&abs_value(x)?)?.scale_real(s)) };
    let ok = t.support.validate(&abs_value(&u)?, &abs_value(&v)?, tol.path, STEP_BOUND).is_ok()
        && t.plus.validate(&ends(&u, 1.0)?, &ends(&v, 1.0)?, tol.path, STEP_BOUND).is_ok()
        && t.minus.validate(&ends(&u, -1.0)?, &ends(&v, -1.0)?, tol.path, STEP_BOUND).is_ok();
    Ok(holds(ok))
}

/// `u ~ₕ WuW*` for a unitary frame `W`, which moves the support of `u`.
fn moving_support_homotopy(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let n = small_level(rng);
    let u = partial_unitary(rng, alg, n);
    let frame = unitary_frame(rng, alg, n);
    let parts = frame.iter().zip(u.parts()).map(|(w, m)| &(w * m) * &w.adjoint()).collect();
    let v = Element::new(alg.clone(), n, n, parts)?;
    let (decided, path) = homotopic_partial_unitaries(&u, &v, tol)?;
    let valid = path.is_some_and(|p| p.validate(&u, &v, tol.path, STEP_BOUND).is_ok());
    Ok(holds(decided && valid))
}

fn class_cancellation(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, tol: &Tolerances) -> Result<f64> {
    let (m, n) = (small_level(rng), small_level(rng));
    let (u, v, w) = (unitary(rng, alg, m), unitary(rng, alg, n), unitary(rng, alg, 1));
    let c = |x: &Element| unitary_class(x, tol).map(|i| i.winding);
    let add = |a: Vec<i64>, b: Vec<i64>| a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>();
    let (cu, cv, cw) = (c(&u)?, c(&v)?, c(&w)?);
    let additive = c(&u.direct_sum(&w)?)? == add(cu.clone(), cw.clone()) && c(&v.direct_sum(&w)?)? == add(cv.clone(), cw);
    let cancels = (c(&u.direct_sum(&w)?)? == c(&v.direct_sum(&w)?)?) == (cu == cv);
    let n = small_level(rng);
    let p = projection(rng, alg, n);
    let n = small_level(rng);
    let q = projection(rng, alg, n);
    let r = projection(rng, alg, 1);
    let cancels_proj = mvn_equivalent(&p.direct_sum(&r)?, &q.direct_sum(&r)?, tol)?.0 == mvn_equivalent(&p, &q, tol)?.0;
    Ok(holds(additive && cancels && cancels_proj))
}

pub fn equivalence_properties() -> Vec<Property> {
    let p = |name, check: Check| Property {
        name,
        check,
        circle_unsupported: None,
    };
    vec![
        p("projection_padding", projection_padding),
        p("projection_sum_swap", projection_sum_swap),
        p("projection_sum_congruence", projection_sum_congruence),
        p("orthogonal_sum_is_direct_sum", orthogonal_sum_is_direct_sum),
        p("projection_decision_coherence", projection_decision_coherence),
        p("unitary_homotopy_paths", unitary_homotopy_paths),
        p("unitary_relation_laws", unitary_relation_laws),
        p("partial_unitary_relation_laws", partial_unitary_relation_laws),
        p("transport_certificates", transport_certificates),
        p("partial_unitary_path_transfer", partial_unitary_path_transfer),
        p("class_cancellation", class_cancellation),
        Property {
            name: "partial_unitaries_with_moving_support",
            check: moving_support_homotopy,
            circle_unsupported: Some("homotopy classes of partial unitaries whose support varies are not classified"),
        },
    ]
}

/// Checked before trusting generated witnesses anywhere else.
pub fn generator_soundness(alg: &AlgebraSpec, seed: u64, tol: &Tolerances) -> Result<bool> {
    let mut rng = trial_rng(seed, u64::MAX);
    let n = 2;
    Ok(is_unitary(&unitary(&mut rng, alg, n), tol.pred)?
        && is_order_projection(&projection(&mut rng, alg, n), tol.pred)?
        && is_partial_isometry(&partial_isometry(&mut rng, alg, n, 1), tol.pred)?
        && is_partial_unitary(&partial_unitary(&mut rng, alg, n), tol.pred)?)
}
