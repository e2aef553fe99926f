use std::time::Instant;

use serde_json::{json, Value};

use super::suite::{equivalence_properties, generator_soundness, model_properties, run_suite};
use super::{Report, RunConfig};
use crate::equivalence::{
    approx1_equivalent, approx_k_equivalent, homotopic_partial_unitaries, homotopic_unitaries, mvn_equivalent,
    partial_unitary_invariant, projection_ranks, sim1_path, sim_k_path, unitary_class, HomotopyPath, STEP_BOUND,
};
use crate::error::{Error, Result};
use crate::kgroup::{k0_group, k1_group, k_group, mu_witness, theta_map, GroupTag, KClass};
use crate::model::{abs_adjoint, abs_value, classify, is_unitary, order_unit_norm, AlgebraSpec, Element};

/// Offset between the trial streams of the two suites.
const EQUIVALENCE_STREAM_OFFSET: usize = 1000;

fn report(command: &str, alg: &AlgebraSpec, cfg: &RunConfig, start: Instant) -> Report {
    Report {
        command: command.into(),
        algebra: alg.to_string(),
        config: cfg.clone(),
        suites: Vec::new(),
        unsupported: Vec::new(),
        result: Value::Null,
        passed: true,
        elapsed: start.elapsed(),
    }
}

fn value(x: impl serde::Serialize) -> Value {
    serde_json::to_value(x).expect("results always serialize")
}

/// Runs the model and equivalence suites.
pub fn check_axioms(alg: &AlgebraSpec, cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let mut r = report("check-axioms", alg, cfg, start);
    let sound = generator_soundness(alg, cfg.seed, &cfg.tol)?;
    let (model, mut unsupported) = run_suite("model", &model_properties(), alg, cfg.seed, cfg.trials, &cfg.tol, 0);
    let (equiv, more) = run_suite(
        "equivalence",
        &equivalence_properties(),
        alg,
        cfg.seed,
        cfg.trials,
        &cfg.tol,
        EQUIVALENCE_STREAM_OFFSET,
    );
    unsupported.extend(more);
    r.passed = sound && model.passed() && equiv.passed();
    r.result = json!({ "generator_soundness": sound });
    r.suites = vec![model, equiv];
    r.unsupported = unsupported;
    r.elapsed = start.elapsed();
    Ok(r)
}

fn require_algebra(v: &Element, alg: &AlgebraSpec) -> Result<()> {
    if v.algebra() != alg {
        return Err(Error::ShapeMismatch(format!(
            "element lives over {}, expected {alg}",
            v.algebra()
        )));
    }
    Ok(())
}

/// Membership flags plus `|v|`, `|v*|` and the order-unit norm.
pub fn classify_element(alg: &AlgebraSpec, v: &Element, cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    require_algebra(v, alg)?;
    let class = classify(v, cfg.tol.pred)?;
    let mut r = report("classify", alg, cfg, start);
    r.result = json!({
        "class": value(class),
        "abs": value(abs_value(v)?),
        "abs_adjoint": value(abs_adjoint(v)?),
        "norm": order_unit_norm(v, cfg.tol.bisect)?,
    });
    r.elapsed = start.elapsed();
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    K0,
    K1,
    K,
}

pub fn kgroup(alg: &AlgebraSpec, which: Which, cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let view = match which {
        Which::K0 => k0_group(alg, &cfg.tol)?,
        Which::K1 => k1_group(alg, &cfg.tol)?,
        Which::K => k_group(alg, &cfg.tol)?,
    };
    let mut r = report("kgroup", alg, cfg, start);
    r.passed = view.flags.whitehead != Some(false);
    if let Some(note) = &view.flags.fragment {
        r.unsupported.push(note.clone());
    }
    r.result = value(&view);
    r.elapsed = start.elapsed();
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Relation {
    /// Murray-von Neumann equivalence of order projections.
    Mvn,
    /// Homotopy at a fixed level (unitaries or partial unitaries).
    H,
    /// Stabilized homotopy of unitaries.
    Sim1,
    /// The relation generating K₁.
    Approx1,
    /// Stabilized homotopy of partial unitaries.
    SimK,
    /// The relation generating K.
    ApproxK,
}

fn path_value(path: Option<HomotopyPath>, tol: f64) -> Result<Value> {
    match path {
        Some(p) => {
            p.validate(p.first(), p.last(), tol, STEP_BOUND)?;
            Ok(value(p))
        }
        None => Ok(Value::Null),
    }
}

pub fn equiv(alg: &AlgebraSpec, u: &Element, v: &Element, relation: Relation, cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    require_algebra(u, alg)?;
    require_algebra(v, alg)?;
    let tol = &cfg.tol;
    let unitary_invariants = || -> Result<Value> {
        Ok(json!({ "u": unitary_class(u, tol)?.winding, "v": unitary_class(v, tol)?.winding }))
    };
    let partial_invariants =
        || -> Result<Value> { Ok(json!({ "u": value(partial_unitary_invariant(u, tol)?), "v": value(partial_unitary_invariant(v, tol)?) })) };
    let (decision, evidence, invariants) = match relation {
        Relation::Mvn => {
            let (d, cert) = mvn_equivalent(u, v, tol)?;
            let evidence = match cert {
                Some(c) => {
                    c.validate(tol.pred)?;
                    value(c)
                }
                None => Value::Null,
            };
            let inv = json!({ "u": projection_ranks(u, tol)?.ranks, "v": projection_ranks(v, tol)?.ranks });
            (d, evidence, inv)
        }
        Relation::H => {
            if is_unitary(u, tol.pred)? && is_unitary(v, tol.pred)? {
                let (d, p) = homotopic_unitaries(u, v, tol)?;
                (d, path_value(p, tol.path)?, unitary_invariants()?)
            } else {
                let (d, p) = homotopic_partial_unitaries(u, v, tol)?;
                (d, path_value(p, tol.path)?, partial_invariants()?)
            }
        }
        Relation::Sim1 => {
            let (d, p) = sim1_path(u, v, tol)?;
            (d, path_value(p, tol.path)?, unitary_invariants()?)
        }
        Relation::Approx1 => (approx1_equivalent(u, v, tol)?, Value::Null, unitary_invariants()?),
        Relation::SimK => {
            let (d, p) = sim_k_path(u, v, tol)?;
            (d, path_value(p, tol.path)?, partial_invariants()?)
        }
        Relation::ApproxK => (approx_k_equivalent(u, v, tol)?, Value::Null, partial_invariants()?),
    };
    let mut r = report("equiv", alg, cfg, start);
    r.result = json!({
        "relation": format!("{relation:?}").to_lowercase(),
        "equivalent": decision,
        "invariants": invariants,
        "evidence": evidence,
    });
    r.elapsed = start.elapsed();
    Ok(r)
}

/// `θ([(plus, minus)])` with both μ-witnesses checked to be unitary.
pub fn theta(alg: &AlgebraSpec, plus: &Element, minus: &Element, cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    require_algebra(plus, alg)?;
    require_algebra(minus, alg)?;
    let tol = &cfg.tol;
    let x = KClass::from_pair(GroupTag::K, plus, minus, tol)?;
    let image = theta_map(alg, &x, tol)?;
    let (mu_plus, mu_minus) = (mu_witness(plus, tol)?, mu_witness(minus, tol)?);
    let witnesses_unitary = is_unitary(&mu_plus, tol.pred)? && is_unitary(&mu_minus, tol.pred)?;
    let mut r = report("theta", alg, cfg, start);
    r.passed = witnesses_unitary;
    r.result = json!({
        "class": value(&x),
        "k0": value(&image.k0),
        "k1": value(&image.k1),
        "mu_witness": { "plus": value(mu_plus), "minus": value(mu_minus) },
        "witnesses_unitary": witnesses_unitary,
    });
    r.elapsed = start.elapsed();
    Ok(r)
}
