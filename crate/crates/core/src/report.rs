//! Uniform pass/fail records for every verified claim.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::scalar::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Whether the checked identity is supposed to hold (claims) or to break (negative controls).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    #[default]
    Holds,
    Fails,
}

/// Thresholds for float checks; exact checks always use literal zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Algebra-level identities (single evaluation, no sampling).
    pub algebra: f64,
    /// Identities evaluated at sampled group elements.
    pub group: f64,
    /// Leaf-equation residuals.
    pub leaf: f64,
    /// Relative singular-value cutoff for numerical ranks.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebra: 1e-9,
            group: 1e-8,
            leaf: 1e-10,
            rank: 1e-7,
        }
    }
}

impl Tolerances {
    /// Uniform override of the float thresholds (rank cutoff is kept).
    pub fn overridden(self, tol: f64) -> Self {
        Tolerances {
            algebra: tol,
            group: tol,
            leaf: tol,
            rank: self.rank,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckReport {
    /// Unique key within a run: claim family, grid point and check name.
    #[serde(default)]
    pub id: String,
    pub claim: String,
    pub mode: Mode,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_or_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub expect: Expect,
    /// Residual within tolerance.
    pub holds: bool,
    /// `holds` matches `expect`.
    pub pass: bool,
    pub millis: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(claim: impl Into<String>, mode: Mode, n: usize) -> Self {
        let claim = claim.into();
        CheckReport {
            id: claim.clone(),
            claim,
            mode,
            n,
            m_or_k: None,
            l: None,
            c: None,
            samples: 0,
            max_residual: 0.0,
            tolerance: 0.0,
            expect: Expect::Holds,
            holds: true,
            pass: true,
            millis: 0,
            notes: Vec::new(),
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn m_or_k(mut self, v: usize) -> Self {
        self.m_or_k = Some(v);
        self
    }

    pub fn l(mut self, v: usize) -> Self {
        self.l = Some(v);
        self
    }

    pub fn c(mut self, c: &Rational) -> Self {
        self.c = Some(c.to_string());
        self
    }

    pub fn expect(mut self, e: Expect) -> Self {
        self.expect = e;
        self
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Seals the report: `holds` compares the residual with the tolerance (literal zero in exact mode).
    pub fn finish(
        mut self,
        max_residual: f64,
        tolerance: f64,
        samples: usize,
        started: Instant,
    ) -> Self {
        self.max_residual = max_residual;
        self.tolerance = if self.mode == Mode::Exact {
            0.0
        } else {
            tolerance
        };
        self.samples = samples;
        self.holds = max_residual.is_finite() && max_residual <= self.tolerance;
        self.pass = self.holds == (self.expect == Expect::Holds);
        self.millis = started.elapsed().as_millis() as u64;
        self
    }

    /// Seals a report whose verdict is a boolean (dimension counts, verdict agreement).
    pub fn finish_bool(self, ok: bool, samples: usize, started: Instant) -> Self {
        self.finish(if ok { 0.0 } else { 1.0 }, 0.0, samples, started)
    }

    /// Copy with timing zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        CheckReport {
            millis: 0,
            ..self.clone()
        }
    }
}

/// Largest entry, propagating NaN so that a broken sample cannot hide.
pub fn max_residual(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc, v| {
        if v.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(v)
        }
    })
}
