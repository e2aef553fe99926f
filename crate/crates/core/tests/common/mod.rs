//! Checks shared by the property tests and the acceptance target. Each returns
//! whether it held and a one-line summary.

#![allow(dead_code)]

use std::f64::consts::PI;

use amou_ktheory::equivalence::{condition_t_transport, mvn_equivalent, pad_with_unit, sim1_path, unitary_class, HomotopyPath, PartialIsometryCertificate, PATH_SAMPLES, STEP_BOUND};
use amou_ktheory::kernel::ComplexMatrix;
use amou_ktheory::kgroup::{
    apply_morphism, class_invariant, induced_map, k0_group, k1_group, k_group, orthogonal_sum_unitary,
    partial_unitary_by_completion, partial_unitary_by_orthogonality, partial_unitary_decompose, theta_map,
    theta_preimage, GroupTag, IntMatrix, KClass, MorphismSpec,
};
use amou_ktheory::model::{abs_value, is_unitary, orthogonal, AlgebraSpec, Element};
use amou_ktheory::random::{
    partial_isometry, partial_unitary, projection, projection_with_ranks, trial_rng, unitary, unitary_frame,
    unitary_matrix, unitary_with_windings,
};
use amou_ktheory::Tolerances;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn fd(dims: &[usize]) -> AlgebraSpec {
    AlgebraSpec::fd(dims).unwrap()
}

/// All block algebras with at most three blocks of size at most three.
pub fn small_block_algebras() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 1..=3u32 {
        for code in 0..3usize.pow(k) {
            out.push((0..k).map(|i| code / 3usize.pow(i) % 3 + 1).collect());
        }
    }
    out
}

/// Every rank vector of a projection at `level`, realized as a conjugated
/// 0/1 diagonal, must come back as its own K₀ invariant, lie in the cone and
/// be the matching combination of the generators.
pub fn k0_brute_force(dims: &[usize], seed: u64) -> Outcome {
    let alg = fd(dims);
    let t = tol();
    let view = k0_group(&alg, &t).unwrap();
    let k = dims.len();
    let gens_are_corners = view
        .generators
        .iter()
        .enumerate()
        .all(|(i, g)| g.invariant == (0..k).map(|j| i64::from(u8::from(i == j))).collect::<Vec<_>>());
    let mut checked = 0;
    let mut rng = trial_rng(seed, 0);
    for level in 1..=2 {
        let bounds: Vec<usize> = dims.iter().map(|d| level * d + 1).collect();
        let total: usize = bounds.iter().product();
        for code in 0..total {
            let mut c = code;
            let ranks: Vec<usize> = bounds
                .iter()
                .map(|b| {
                    let r = c % b;
                    c /= b;
                    r
                })
                .collect();
            let p = projection_with_ranks(&mut rng, &alg, level, &ranks);
            let inv = class_invariant(GroupTag::K0, &p, &t).unwrap();
            let expect: Vec<i64> = ranks.iter().map(|&r| r as i64).collect();
            if inv != expect || !view.cone.contains(&inv) {
                return Outcome::new(false, format!("{dims:?}: ranks {ranks:?} gave {inv:?}"));
            }
            checked += 1;
        }
    }
    let unit: Vec<i64> = dims.iter().map(|&d| d as i64).collect();
    let ok = view.rank == k && view.order_unit == unit && view.flags.cone_proper && gens_are_corners;
    Outcome::new(ok, format!("{dims:?}: rank {} unit {:?}, {checked} projections", view.rank, view.order_unit))
}

/// Winding of `det u` from the increments `arg det(u_j* u_{j+1})`, independent
/// of the eigenvalue-based invariant.
pub fn argument_principle_winding(u: &Element) -> i64 {
    let n = u.parts().len();
    let total: f64 = (0..n)
        .map(|j| (&u.part(j).adjoint() * u.part((j + 1) % n)).determinant().arg())
        .sum();
    (total / (2.0 * PI)).round() as i64
}

/// `z ↦ zⁿ` at level 1 over a circle algebra of dimension 1.
pub fn power_of_z(alg: &AlgebraSpec, n: i32) -> Element {
    Element::from_parts_fn(alg, 1, 1, |j, _| {
        let z = alg.sample_point(j).unwrap();
        ComplexMatrix::from_complex_diag(&[z.powi(n)])
    })
    .unwrap()
}

pub fn path_is_valid(path: &HomotopyPath, from: &Element, to: &Element) -> bool {
    path.samples.len() >= PATH_SAMPLES && path.validate(from, to, tol().path, STEP_BOUND).is_ok()
}

/// `K₁` of block algebras: trivial, and every pair of unitaries is joined by a
/// validated path after padding.
pub fn k1_blocks_trivial(seed: u64, pairs: u64) -> Outcome {
    let t = tol();
    for dims in [vec![1], vec![2], vec![5], vec![2, 3]] {
        let alg = fd(&dims);
        let view = k1_group(&alg, &t).unwrap();
        if view.rank != 0 || view.flags.whitehead != Some(true) {
            return Outcome::new(false, format!("{dims:?}: rank {}", view.rank));
        }
        for trial in 0..pairs {
            let mut rng = trial_rng(seed, trial);
            let (m, n) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let (u, v) = (unitary(&mut rng, &alg, m), unitary(&mut rng, &alg, n));
            let k = m.max(n) + 1;
            match sim1_path(&u, &v, &t) {
                Ok((true, Some(p))) if path_is_valid(&p, &pad_with_unit(&u, k), &pad_with_unit(&v, k)) => {}
                _ => return Outcome::new(false, format!("{dims:?}: trial {trial} has no validated path")),
            }
        }
    }
    Outcome::new(true, format!("rank 0 on 4 algebras, {pairs} validated paths each"))
}

/// `K₁` of the circle: `ℤ`, with `zⁿ` of winding `n` by both the invariant and
/// the argument principle, and random unitaries of prescribed winding.
pub fn k1_circle_integers(seed: u64, trials: u64) -> Outcome {
    let t = tol();
    let alg = AlgebraSpec::circle(1, 64).unwrap();
    let view = k1_group(&alg, &t).unwrap();
    if view.rank != 1 {
        return Outcome::new(false, format!("rank {}", view.rank));
    }
    for n in -2..=2 {
        let u = power_of_z(&alg, n);
        let w = unitary_class(&u, &t).unwrap().winding;
        if w != vec![i64::from(n)] || argument_principle_winding(&u) != i64::from(n) {
            return Outcome::new(false, format!("z^{n} has winding {w:?}"));
        }
    }
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let level = rng.gen_range(1..=2);
        let ws: Vec<i32> = (0..level).map(|_| rng.gen_range(-2..=2)).collect();
        let u = unitary_with_windings(&mut rng, &alg, level, &ws);
        let expect: i64 = ws.iter().map(|&w| i64::from(w)).sum();
        let w = unitary_class(&u, &t).unwrap().winding;
        if w != vec![expect] || argument_principle_winding(&u) != expect {
            return Outcome::new(false, format!("trial {trial}: windings {ws:?} gave {w:?}"));
        }
    }
    Outcome::new(true, format!("rank 1, z^n for n in -2..=2 and {trials} random unitaries"))
}

pub fn random_partial_unitary_pair(rng: &mut ChaCha8Rng, alg: &AlgebraSpec) -> (Element, Element) {
    let (m, n) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    (partial_unitary(rng, alg, m), partial_unitary(rng, alg, n))
}

pub fn random_k_class(rng: &mut ChaCha8Rng, alg: &AlgebraSpec) -> KClass {
    let (u, v) = random_partial_unitary_pair(rng, alg);
    KClass::from_pair(GroupTag::K, &u, &v, &tol()).unwrap()
}

/// `θ` on K over `{2, 3}`: homomorphism on random classes, preimages hit random
/// targets, and the kernel on small invariant vectors is trivial.
pub fn theta_splitting(seed: u64, classes: u64, targets: u64) -> Outcome {
    let t = tol();
    let alg = fd(&[2, 3]);
    let view = k_group(&alg, &t).unwrap();
    if view.rank != 2 || view.flags.theta_kernel_rank != Some(0) {
        return Outcome::new(false, format!("K has rank {}", view.rank));
    }
    for trial in 0..classes {
        let mut rng = trial_rng(seed, trial);
        let (x, y) = (random_k_class(&mut rng, &alg), random_k_class(&mut rng, &alg));
        let (tx, ty, txy) = (
            theta_map(&alg, &x, &t).unwrap(),
            theta_map(&alg, &y, &t).unwrap(),
            theta_map(&alg, &x.add(&y), &t).unwrap(),
        );
        if txy.k0 != tx.k0.add(&ty.k0) || txy.k1 != tx.k1.add(&ty.k1) {
            return Outcome::new(false, format!("trial {trial}: θ(x + y) differs from θ(x) + θ(y)"));
        }
    }
    for trial in 0..targets {
        let mut rng = trial_rng(seed ^ 0x5eed, trial);
        let (m, n) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let p = projection(&mut rng, &alg, m);
        let v = unitary(&mut rng, &alg, n);
        let pre = theta_preimage(&p, &v, &t).unwrap();
        let image = theta_map(&alg, &pre, &t).unwrap();
        let want0 = KClass::of(GroupTag::K0, &p, &t).unwrap();
        let want1 = KClass::of(GroupTag::K1, &v, &t).unwrap();
        if image.k0 != want0 || image.k1 != want1 {
            return Outcome::new(false, format!("target {trial} missed"));
        }
    }
    for a in -3..=3 {
        for b in -3..=3 {
            let x = KClass::from_invariants(GroupTag::K, vec![a, b], vec![0, 0]);
            let image = theta_map(&alg, &x, &t).unwrap();
            if (image.k0.is_identity() && image.k1.is_identity()) != (a == 0 && b == 0) {
                return Outcome::new(false, format!("θ vanishes on ({a}, {b})"));
            }
        }
    }
    Outcome::new(true, format!("rank 2, {classes} homomorphism checks, {targets} targets, ker θ = 0"))
}

/// `W (D₁ ⊕ … ⊕ D_r) V*` cut along a random partition of the diagonal: the
/// partial isometries `W Dᵢ V*` are orthogonal with sources and targets adding to `e`.
pub fn orthogonal_family(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, n: usize) -> Vec<Element> {
    let (w, v) = (unitary_frame(rng, alg, n), unitary_frame(rng, alg, n));
    let pieces = rng.gen_range(1..=3);
    let labels: Vec<Vec<usize>> = w.iter().map(|m| (0..m.rows()).map(|_| rng.gen_range(0..pieces)).collect()).collect();
    (0..pieces)
        .map(|k| {
            let parts = w
                .iter()
                .zip(&v)
                .zip(&labels)
                .map(|((a, b), l)| {
                    let d: Vec<f64> = l.iter().map(|&x| if x == k { 1.0 } else { 0.0 }).collect();
                    &(a * &ComplexMatrix::from_diag(&d)) * &b.adjoint()
                })
                .collect();
            Element::new(alg.clone(), n, n, parts).unwrap()
        })
        .collect()
}

pub fn section_five_constructions(seed: u64, decompositions: u64, families: u64) -> Outcome {
    let t = tol();
    let algebras = [fd(&[2]), fd(&[2, 3]), fd(&[1, 1, 2])];
    for trial in 0..decompositions {
        let mut rng = trial_rng(seed, trial);
        let alg = &algebras[trial as usize % algebras.len()];
        let n = rng.gen_range(1..=2);
        let v = partial_unitary(&mut rng, alg, n);
        let (v1, v2) = partial_unitary_decompose(&v, &t).unwrap();
        let mean = v1.add(&v2).unwrap().scale_real(0.5);
        let ok = is_unitary(&v1, t.pred).unwrap()
            && is_unitary(&v2, t.pred).unwrap()
            && mean.distance(&v).unwrap() <= t.pred
            && orthogonal(&v1.sub(&v2).unwrap(), &v1.add(&v2).unwrap(), t.pred).unwrap();
        if !ok {
            return Outcome::new(false, format!("decomposition trial {trial} failed"));
        }
    }
    for trial in 0..families {
        let mut rng = trial_rng(seed ^ 0xfa, trial);
        let alg = &algebras[trial as usize % algebras.len()];
        let n = rng.gen_range(1..=2);
        let vs = orthogonal_family(&mut rng, alg, n);
        let sum = vs.iter().skip(1).fold(vs[0].clone(), |s, v| s.add(v).unwrap());
        match orthogonal_sum_unitary(&vs, &t) {
            Ok(u) if u.distance(&sum).unwrap() <= t.pred && is_unitary(&u, t.pred).unwrap() => {}
            _ => return Outcome::new(false, format!("family {trial} did not sum to a unitary")),
        }
    }
    // Both characterisations of partial unitaries, on positives and on partial
    // isometries whose source and target differ.
    for trial in 0..decompositions {
        let mut rng = trial_rng(seed ^ 0x53, trial);
        let alg = &algebras[trial as usize % algebras.len()];
        let n = rng.gen_range(1..=2);
        let yes = partial_unitary(&mut rng, alg, n);
        let no = skewed_partial_isometry(&mut rng, alg, n);
        let ok = partial_unitary_by_completion(&yes, &t).unwrap()
            && partial_unitary_by_orthogonality(&yes, &t).unwrap()
            && !partial_unitary_by_completion(&no, &t).unwrap()
            && !partial_unitary_by_orthogonality(&no, &t).unwrap();
        if !ok {
            return Outcome::new(false, format!("characterisation trial {trial} disagrees"));
        }
    }
    Outcome::new(
        true,
        format!("{decompositions} decompositions, {families} orthogonal families, {decompositions} iff checks each way"),
    )
}

/// A partial isometry `W D V*` with `0 < rank D < size` in some block and
/// independent frames, so `|v| ≠ |v*|`.
pub fn skewed_partial_isometry(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, n: usize) -> Element {
    loop {
        let v = partial_isometry(rng, alg, n, n);
        let (a, b) = (abs_value(&v).unwrap(), abs_value(&v.adjoint()).unwrap());
        if a.distance(&b).unwrap() > 0.1 {
            return v;
        }
    }
}

/// Target dimensions filled by `mult · source` plus a random slack when corners are allowed.
pub fn random_morphism(rng: &mut ChaCha8Rng, source: &[usize], targets: usize, unital: bool) -> MorphismSpec {
    let mult: Vec<Vec<usize>> = (0..targets)
        .map(|_| loop {
            let row: Vec<usize> = source.iter().map(|_| rng.gen_range(0..=2)).collect();
            if row.iter().any(|&m| m > 0) {
                break row;
            }
        })
        .collect();
    let dims: Vec<usize> = mult
        .iter()
        .map(|row| {
            let filled: usize = row.iter().zip(source).map(|(m, d)| m * d).sum();
            filled + if unital { 0 } else { rng.gen_range(0..=1) }
        })
        .collect();
    let conj = dims.iter().map(|&d| unitary_matrix(rng, d)).collect();
    let (s, t) = (fd(source), fd(&dims));
    if unital {
        MorphismSpec::new(s, t, mult, conj, tol().pred).unwrap()
    } else {
        MorphismSpec::corner(s, t, mult, conj, tol().pred).unwrap()
    }
}

/// A composable pair `φ: A → B`, `ψ: B → C`.
pub fn random_pair(rng: &mut ChaCha8Rng, unital: bool) -> (MorphismSpec, MorphismSpec) {
    let k = rng.gen_range(1..=2);
    let source: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=2)).collect();
    let targets = rng.gen_range(1..=2);
    let phi = random_morphism(rng, &source, targets, unital);
    let targets = rng.gen_range(1..=2);
    let psi = random_morphism(rng, &phi.target().part_dims(), targets, unital);
    (phi, psi)
}

/// Functor laws on random pairs and the commuting square on random elements.
pub fn functoriality(seed: u64, pairs: u64, elements: u64) -> Outcome {
    let t = tol();
    for trial in 0..pairs {
        let mut rng = trial_rng(seed, trial);
        let unital = trial % 2 == 0;
        let (phi, psi) = random_pair(&mut rng, unital);
        let composite = psi.after(&phi).unwrap();
        let groups: &[GroupTag] = if unital { &[GroupTag::K0, GroupTag::K1, GroupTag::K] } else { &[GroupTag::K0, GroupTag::K] };
        for &g in groups {
            let (a, b, c) = (
                induced_map(&phi, g).unwrap(),
                induced_map(&psi, g).unwrap(),
                induced_map(&composite, g).unwrap(),
            );
            let id = induced_map(&MorphismSpec::identity(phi.source()).unwrap(), g).unwrap();
            let zero = induced_map(&MorphismSpec::zero(phi.source(), phi.target()).unwrap(), GroupTag::K).unwrap();
            let want_id = match g {
                GroupTag::K1 => IntMatrix::zero(0, 0),
                _ => IntMatrix::identity(phi.source().num_parts()),
            };
            let zero_ok = zero == IntMatrix::zero(phi.target().num_parts(), phi.source().num_parts());
            if c != b.compose(&a) || id != want_id || !zero_ok {
                return Outcome::new(false, format!("pair {trial}: functor law fails for {g}"));
            }
        }
        if !phi.is_unital() && induced_map(&phi, GroupTag::K1).is_ok() {
            return Outcome::new(false, format!("pair {trial}: non-unital map accepted on K1"));
        }
    }
    for trial in 0..elements {
        let mut rng = trial_rng(seed ^ 0xc0, trial);
        let (phi, _) = random_pair(&mut rng, trial % 2 == 0);
        let alg = phi.source().clone();
        let n = rng.gen_range(1..=2);
        let (v, g) = match trial % 3 {
            0 => (projection(&mut rng, &alg, n), GroupTag::K0),
            1 => (partial_unitary(&mut rng, &alg, n), GroupTag::K),
            _ => (unitary(&mut rng, &alg, n), GroupTag::K0),
        };
        let (v, g) = if trial % 3 == 2 { (abs_value(&v).unwrap(), g) } else { (v, g) };
        let image = apply_morphism(&phi, &v).unwrap();
        let lhs = class_invariant(g, &image, &t).unwrap();
        let rhs = induced_map(&phi, g).unwrap().apply(&class_invariant(g, &v, &t).unwrap());
        let abs_ok = abs_value(&image).unwrap().distance(&apply_morphism(&phi, &abs_value(&v).unwrap()).unwrap()).unwrap() <= t.pred;
        if lhs != rhs || !abs_ok {
            return Outcome::new(false, format!("element {trial}: class(φ(v)) = {lhs:?}, M·class(v) = {rhs:?}"));
        }
    }
    Outcome::new(true, format!("{pairs} morphism pairs, {elements} commuting squares"))
}

/// Certificates and paths from the decision procedures re-validate after a
/// JSON round trip, and condition (T) transports validate.
pub fn certificate_validity(seed: u64, pairs: u64, transports: u64) -> Outcome {
    let t = tol();
    let algebras = [fd(&[2]), fd(&[2, 3]), AlgebraSpec::circle(1, 64).unwrap()];
    let mut emitted = 0;
    for trial in 0..pairs {
        let mut rng = trial_rng(seed, trial);
        let alg = &algebras[trial as usize % algebras.len()];
        let n = rng.gen_range(1..=2);
        let p = projection(&mut rng, alg, n);
        let q = conjugate(&mut rng, &p);
        let Ok((true, Some(cert))) = mvn_equivalent(&p, &q, &t) else {
            return Outcome::new(false, format!("trial {trial}: conjugate projections not equivalent"));
        };
        let back: PartialIsometryCertificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
        let u = unitary(&mut rng, alg, n);
        let v = if alg.is_fd() { unitary(&mut rng, alg, n) } else { u.clone() };
        let Ok((true, Some(path))) = sim1_path(&u, &v, &t) else {
            return Outcome::new(false, format!("trial {trial}: no unitary path"));
        };
        let path_back: HomotopyPath = serde_json::from_str(&serde_json::to_string(&path).unwrap()).unwrap();
        let (pu, pv) = (pad_with_unit(&u, n + 1), pad_with_unit(&v, n + 1));
        let drift = back.v.distance(&cert.v).unwrap();
        if drift > 1e-12 || back.validate(t.pred).is_err() || !path_is_valid(&path_back, &pu, &pv) {
            return Outcome::new(false, format!("trial {trial}: emitted evidence fails validation"));
        }
        emitted += 2;
    }
    for trial in 0..transports {
        let mut rng = trial_rng(seed ^ 0x7, trial);
        let alg = &algebras[trial as usize % algebras.len()];
        let n = rng.gen_range(1..=2);
        let p = projection(&mut rng, alg, n);
        let (q1, q2) = (conjugate(&mut rng, &p), conjugate(&mut rng, &p));
        let c1 = mvn_equivalent(&q1, &p, &t).unwrap().1.unwrap();
        let c2 = mvn_equivalent(&q2, &p, &t).unwrap().1.unwrap();
        match condition_t_transport(&c1, &c2, &t) {
            Ok(w) if w.validate(t.pred).is_ok() && w.target.distance(&q1).unwrap() <= t.pred && w.source.distance(&q2).unwrap() <= t.pred => {}
            _ => return Outcome::new(false, format!("transport {trial} fails validation")),
        }
    }
    Outcome::new(true, format!("{emitted} certificates and paths, {transports} transports"))
}

/// `W p W*` for a random continuous frame `W`.
pub fn conjugate(rng: &mut ChaCha8Rng, p: &Element) -> Element {
    let n = p.row_level();
    let w = unitary_frame(rng, p.algebra(), n);
    let parts = w
        .iter()
        .zip(p.parts())
        .map(|(a, m)| (&(a * m) * &a.adjoint()).hermitian_part())
        .collect();
    Element::new(p.algebra().clone(), n, n, parts).unwrap()
}

pub fn scalar(c: f64) -> Complex64 {
    Complex64::new(c, 0.0)
}
