use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{abs_adjoint, abs_value, is_order_projection, is_partial_isometry, is_partial_unitary, is_unitary, Element};

/// Type tag of a serialized certificate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    #[default]
    #[serde(rename = "partial_isometry")]
    PartialIsometry,
}

/// Type tag of a serialized path.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathKind {
    #[default]
    #[serde(rename = "path")]
    Path,
}

/// A partial isometry `v` with `|v| = source` and `|v*| = target`, witnessing
/// `target ~ source`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialIsometryCertificate {
    pub kind: CertificateKind,
    pub v: Element,
    pub source: Element,
    pub target: Element,
}

impl PartialIsometryCertificate {
    pub fn validate(&self, tol: f64) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidCertificate(what.into()));
        if self.v.algebra() != self.source.algebra() || self.v.algebra() != self.target.algebra() {
            return bad("certificate parts live over different algebras");
        }
        if self.source.row_level() != self.v.col_level() || self.target.row_level() != self.v.row_level() {
            return bad("source or target level does not match v");
        }
        if !is_partial_isometry(&self.v, tol)? {
            return bad("v is not a partial isometry");
        }
        if abs_value(&self.v)?.distance(&self.source)? > tol {
            return bad("|v| differs from the source projection");
        }
        if abs_adjoint(&self.v)?.distance(&self.target)? > tol {
            return bad("|v*| differs from the target projection");
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates always serialize")
    }
}

/// The set a homotopy path is required to stay in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathDomain {
    Unitary,
    PartialUnitary,
    OrderProjection,
}

impl PathDomain {
    pub fn name(self) -> &'static str {
        match self {
            PathDomain::Unitary => "unitary",
            PathDomain::PartialUnitary => "partial_unitary",
            PathDomain::OrderProjection => "order_projection",
        }
    }

    pub fn contains(self, v: &Element, tol: f64) -> Result<bool> {
        match self {
            PathDomain::Unitary => is_unitary(v, tol),
            PathDomain::PartialUnitary => is_partial_unitary(v, tol),
            PathDomain::OrderProjection => is_order_projection(v, tol),
        }
    }
}

/// Default number of samples on constructed paths.
pub const PATH_SAMPLES: usize = 129;
/// Largest allowed operator-norm distance between consecutive samples.
pub const STEP_BOUND: f64 = 0.2;

/// A sampled path `t ↦ f(t)` inside a fixed level of the domain set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyPath {
    pub kind: PathKind,
    pub domain: PathDomain,
    pub samples: Vec<Element>,
}

impl HomotopyPath {
    pub fn constant(domain: PathDomain, v: &Element) -> Self {
        Self {
            kind: PathKind::Path,
            domain,
            samples: vec![v.clone(); PATH_SAMPLES],
        }
    }

    pub fn first(&self) -> &Element {
        &self.samples[0]
    }

    pub fn last(&self) -> &Element {
        &self.samples[self.samples.len() - 1]
    }

    /// Checks every sample against the domain predicate, every step against
    /// `step_bound`, and both endpoints against `from` and `to`.
    pub fn validate(&self, from: &Element, to: &Element, tol: f64, step_bound: f64) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidCertificate(what));
        if self.samples.len() < 2 {
            return bad("a path needs at least two samples".into());
        }
        for (k, s) in self.samples.iter().enumerate() {
            s.same_shape(from).map_err(|_| Error::InvalidCertificate(format!("sample {k} has the wrong shape")))?;
            if !self.domain.contains(s, tol)? {
                return bad(format!("sample {k} leaves the {} set", self.domain.name()));
            }
        }
        for (k, w) in self.samples.windows(2).enumerate() {
            if !w[1].within(&w[0], step_bound)? {
                let step = w[1].distance(&w[0])?;
                return bad(format!("step {k} has length {step:.3e} above {step_bound}"));
            }
        }
        if !self.first().within(from, tol)? {
            return bad("first sample differs from the start point".into());
        }
        if !self.last().within(to, tol)? {
            return bad("last sample differs from the end point".into());
        }
        Ok(())
    }

    /// Joins two paths whose endpoints agree, dropping the repeated sample.
    pub fn concat(mut self, other: HomotopyPath) -> Self {
        self.samples.extend(other.samples.into_iter().skip(1));
        self
    }

    pub fn max_step(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| w[1].distance(&w[0]).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("paths always serialize")
    }
}
