//! Closed-form right-hand sides of the weighted-product inequalities.
//!
//! Every bound is `Σ coefficient · β(m, n)` with coefficients built from the
//! endpoint values and `(b-a)^{p+q+1}`. The individual terms are kept in
//! [`BoundValue::beta_terms`] so reports can show what entered a verdict.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special_fn::{beta, BetaArgs, SpecialFnError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("invalid endpoint data: {0}")]
    Endpoints(String),
    #[error("parameter {name}={value} is outside the domain ({requirement})")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error(transparent)]
    Beta(#[from] SpecialFnError),
}

/// Stable identifiers of the evaluated formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormulaId {
    /// The change-of-variables identity between the two integral forms.
    #[serde(rename = "lemma2.1")]
    Lemma21,
    #[serde(rename = "thm2.1")]
    Thm21,
    #[serde(rename = "cor2.1")]
    Cor21,
    #[serde(rename = "cor2.2")]
    Cor22,
    #[serde(rename = "cor2.3")]
    Cor23,
    #[serde(rename = "cor2.4")]
    Cor24,
    #[serde(rename = "cor2.5")]
    Cor25,
    #[serde(rename = "cor2.6")]
    Cor26,
    #[serde(rename = "thm2.2")]
    Thm22,
    #[serde(rename = "thm2.3")]
    Thm23,
    #[serde(rename = "thm2.4")]
    Thm24,
}

impl FormulaId {
    pub const ALL: [FormulaId; 11] = [
        FormulaId::Lemma21,
        FormulaId::Thm21,
        FormulaId::Cor21,
        FormulaId::Cor22,
        FormulaId::Cor23,
        FormulaId::Cor24,
        FormulaId::Cor25,
        FormulaId::Cor26,
        FormulaId::Thm22,
        FormulaId::Thm23,
        FormulaId::Thm24,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaId::Lemma21 => "lemma2.1",
            FormulaId::Thm21 => "thm2.1",
            FormulaId::Cor21 => "cor2.1",
            FormulaId::Cor22 => "cor2.2",
            FormulaId::Cor23 => "cor2.3",
            FormulaId::Cor24 => "cor2.4",
            FormulaId::Cor25 => "cor2.5",
            FormulaId::Cor26 => "cor2.6",
            FormulaId::Thm22 => "thm2.2",
            FormulaId::Thm23 => "thm2.3",
            FormulaId::Thm24 => "thm2.4",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| format!("unknown formula id {s:?}"))
    }
}

/// Endpoint values `f(a)`, `f(b)` and the interval they were taken on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointData {
    pub fa: f64,
    pub fb: f64,
    pub a: f64,
    pub b: f64,
}

impl EndpointData {
    pub fn new(fa: f64, fb: f64, a: f64, b: f64) -> Result<Self, BoundsError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(BoundsError::Endpoints(format!(
                "need finite a < b, got a={a}, b={b}"
            )));
        }
        if !(fa.is_finite() && fb.is_finite()) {
            return Err(BoundsError::Endpoints(format!(
                "endpoint values must be finite, got f(a)={fa}, f(b)={fb}"
            )));
        }
        Ok(Self { fa, fb, a, b })
    }

    /// `(b-a)^{p+q+1}`
    pub fn prefactor(&self, p: f64, q: f64) -> f64 {
        (self.b - self.a).powf(p + q + 1.0)
    }

    fn require_nonnegative(&self) -> Result<(), BoundsError> {
        for (name, value) in [("f(a)", self.fa), ("f(b)", self.fb)] {
            if value < 0.0 {
                return Err(BoundsError::Domain {
                    name,
                    value,
                    requirement: ">= 0",
                });
            }
        }
        Ok(())
    }
}

/// One `coefficient · β(m, n)` summand of a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaTerm {
    pub m: f64,
    pub n: f64,
    pub coefficient: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub formula_id: FormulaId,
    pub beta_terms: Vec<BetaTerm>,
}

impl BoundValue {
    fn from_terms(formula_id: FormulaId, terms: &[(f64, f64, f64)]) -> Result<Self, BoundsError> {
        let beta_terms = terms
            .iter()
            .map(|&(m, n, coefficient)| {
                Ok(BetaTerm {
                    m,
                    n,
                    coefficient,
                    beta: beta(BetaArgs::new(m, n)?)?,
                })
            })
            .collect::<Result<Vec<_>, BoundsError>>()?;
        let value = beta_terms.iter().map(|t| t.coefficient * t.beta).sum();
        Ok(Self {
            value,
            formula_id,
            beta_terms,
        })
    }

    /// Same value, relabelled with the specialization it instantiates.
    pub fn labelled(mut self, formula_id: FormulaId) -> Self {
        self.formula_id = formula_id;
        self
    }
}

fn require(name: &'static str, value: f64, ok: bool, requirement: &'static str) -> Result<(), BoundsError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(BoundsError::Domain {
            name,
            value,
            requirement,
        })
    }
}

fn require_exponents(p: f64, q: f64, min: f64, requirement: &'static str) -> Result<(), BoundsError> {
    require("p", p, p > min, requirement)?;
    require("q", q, q > min, requirement)
}

/// s-convex (second sense) bound:
/// `((b-a)^{p+q+1}/2){(fa²+fb²)[β(p+1,2s+q+1)+β(q+1,2s+p+1)] + 4 fa fb β(p+s+1,q+s+1)}`.
pub fn bound_s_convex(e: &EndpointData, p: f64, q: f64, s: f64) -> Result<BoundValue, BoundsError> {
    require_exponents(p, q, 0.0, "> 0")?;
    require("s", s, s > 0.0 && s <= 1.0, "0 < s <= 1")?;
    e.require_nonnegative()?;
    let half = 0.5 * e.prefactor(p, q);
    let squares = half * (e.fa * e.fa + e.fb * e.fb);
    let cross = half * 4.0 * e.fa * e.fb;
    BoundValue::from_terms(
        FormulaId::Thm21,
        &[
            (p + 1.0, 2.0 * s + q + 1.0, squares),
            (q + 1.0, 2.0 * s + p + 1.0, squares),
            (p + s + 1.0, q + s + 1.0, cross),
        ],
    )
}

/// Convex bound: the s-convex bound at `s = 1`.
pub fn bound_convex(e: &EndpointData, p: f64, q: f64) -> Result<BoundValue, BoundsError> {
    Ok(bound_s_convex(e, p, q, 1.0)?.labelled(FormulaId::Cor23))
}

/// Quasi-convex bound: `(b-a)^{p+q+1} max(fa, fb)² β(p+1, q+1)`.
pub fn bound_quasi_convex(e: &EndpointData, p: f64, q: f64) -> Result<BoundValue, BoundsError> {
    require_exponents(p, q, 0.0, "> 0")?;
    e.require_nonnegative()?;
    let top = e.fa.max(e.fb);
    BoundValue::from_terms(
        FormulaId::Thm22,
        &[(p + 1.0, q + 1.0, e.prefactor(p, q) * top * top)],
    )
}

/// P-class bound: `(b-a)^{p+q+1} (fa + fb)² β(p+1, q+1)`.
pub fn bound_p_class(e: &EndpointData, p: f64, q: f64) -> Result<BoundValue, BoundsError> {
    require_exponents(p, q, 0.0, "> 0")?;
    e.require_nonnegative()?;
    let sum = e.fa + e.fb;
    BoundValue::from_terms(
        FormulaId::Thm23,
        &[(p + 1.0, q + 1.0, e.prefactor(p, q) * sum * sum)],
    )
}

/// Q(I)-class bound, `p, q > 1`:
/// `((b-a)^{p+q+1}/2){(fa²+fb²)(β(p+1,q-1)+β(p-1,q+1)) + 4 fa fb β(p,q)}`.
pub fn bound_q_class(e: &EndpointData, p: f64, q: f64) -> Result<BoundValue, BoundsError> {
    require_exponents(p, q, 1.0, "> 1")?;
    e.require_nonnegative()?;
    let half = 0.5 * e.prefactor(p, q);
    let squares = half * (e.fa * e.fa + e.fb * e.fb);
    let cross = half * 4.0 * e.fa * e.fb;
    BoundValue::from_terms(
        FormulaId::Thm24,
        &[
            (p + 1.0, q - 1.0, squares),
            (p - 1.0, q + 1.0, squares),
            (p, q, cross),
        ],
    )
}
