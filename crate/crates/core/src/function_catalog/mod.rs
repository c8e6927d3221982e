//! Test functions, convexity classes, grid certification and generators.
//!
//! Every class is certified on the function's own domain `[a, b] ⊂ [0, ∞)`.
//! The weight convention is shared across classes: a triple `(x, y, λ)`
//! tests the point `λx + (1-λ)y`, so the s-convex weights are `α = λ`,
//! `β = 1 - λ`.

mod certify;
mod expr;
mod generate;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::RealFunction;

pub use certify::{
    certify, check_nonnegative, defining_violation, CertificationResult, CertificationVerdict,
    GridSpec, ViolationKind, Witness, DEFAULT_CERTIFICATION_TOL,
};
pub use expr::Expr;
pub use generate::{generate, generate_certified, GeneratorShape};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("invalid generator shape: {0}")]
    InvalidShape(String),
    #[error("function {function} is not finite at x={x}")]
    Evaluation { function: String, x: f64 },
    #[error("could not generate a {class} member after {attempts} attempts")]
    GenerationFailed { class: String, attempts: usize },
    #[error("unknown function id {0:?}")]
    UnknownFunction(String),
}

/// The convexity classes the inequalities are stated for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConvexityClass {
    /// s-convex in the second sense, `s ∈ (0, 1]`.
    #[serde(rename = "s-convex")]
    SConvex { s: f64 },
    Convex,
    #[serde(rename = "quasi")]
    QuasiConvex,
    #[serde(rename = "p")]
    PFunction,
    #[serde(rename = "q")]
    QClass,
}

impl ConvexityClass {
    pub fn s_convex(s: f64) -> Result<Self, CatalogError> {
        if s > 0.0 && s <= 1.0 {
            Ok(Self::SConvex { s })
        } else {
            Err(CatalogError::InvalidClass(format!("s must lie in (0, 1], got {s}")))
        }
    }

    /// Short name used on the command line and in reports.
    pub fn kind_name(&self) -> &'static str {
        self.kind().name()
    }

    pub fn kind(&self) -> ClassKind {
        match self {
            Self::SConvex { .. } => ClassKind::SConvex,
            Self::Convex => ClassKind::Convex,
            Self::QuasiConvex => ClassKind::QuasiConvex,
            Self::PFunction => ClassKind::PFunction,
            Self::QClass => ClassKind::QClass,
        }
    }

    /// `s` for the s-convex family; ordinary convexity is `s = 1`.
    pub fn s_exponent(&self) -> Option<f64> {
        match self {
            Self::SConvex { s } => Some(*s),
            Self::Convex => Some(1.0),
            _ => None,
        }
    }

    /// Whether the definition quantifies over the open interval `λ ∈ (0, 1)`.
    pub fn open_lambda(&self) -> bool {
        matches!(self, Self::SConvex { .. } | Self::Convex | Self::QClass)
    }

    /// P and Q(I) members must be nonnegative by definition.
    pub fn requires_nonnegative(&self) -> bool {
        matches!(self, Self::PFunction | Self::QClass)
    }
}

impl fmt::Display for ConvexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SConvex { s } => write!(f, "s-convex(s={s})"),
            other => f.write_str(other.kind_name()),
        }
    }
}

/// Class name without its parameter, as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    #[serde(rename = "s-convex")]
    SConvex,
    #[serde(rename = "convex")]
    Convex,
    #[serde(rename = "quasi")]
    QuasiConvex,
    #[serde(rename = "p")]
    PFunction,
    #[serde(rename = "q")]
    QClass,
}

impl ClassKind {
    pub const ALL: [ClassKind; 5] = [
        ClassKind::SConvex,
        ClassKind::Convex,
        ClassKind::QuasiConvex,
        ClassKind::PFunction,
        ClassKind::QClass,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ClassKind::SConvex => "s-convex",
            ClassKind::Convex => "convex",
            ClassKind::QuasiConvex => "quasi",
            ClassKind::PFunction => "p",
            ClassKind::QClass => "q",
        }
    }

    /// Attach the parameter: `s` is required for s-convex and rejected otherwise.
    pub fn with_s(&self, s: Option<f64>) -> Result<ConvexityClass, CatalogError> {
        match (self, s) {
            (ClassKind::SConvex, Some(s)) => ConvexityClass::s_convex(s),
            (ClassKind::SConvex, None) => Err(CatalogError::InvalidClass(
                "s-convex requires s".into(),
            )),
            (_, Some(_)) => Err(CatalogError::InvalidClass(format!(
                "s only applies to s-convex, not {}",
                self.name()
            ))),
            (ClassKind::Convex, None) => Ok(ConvexityClass::Convex),
            (ClassKind::QuasiConvex, None) => Ok(ConvexityClass::QuasiConvex),
            (ClassKind::PFunction, None) => Ok(ConvexityClass::PFunction),
            (ClassKind::QClass, None) => Ok(ConvexityClass::QClass),
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ClassKind {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                CatalogError::InvalidClass(format!(
                    "unknown class {s:?} (expected s-convex, convex, quasi, p or q)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// A nonempty interval inside `[0, ∞)`.
    pub fn new(lo: f64, hi: f64) -> Result<Self, CatalogError> {
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) || lo < 0.0 {
            return Err(CatalogError::InvalidDomain(format!(
                "need 0 <= a < b < inf, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `n` evenly spaced nodes including both endpoints exactly.
    pub fn nodes(&self, n: usize) -> Vec<f64> {
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.hi
                } else {
                    self.lo + self.width() * (i as f64 / last)
                }
            })
            .collect()
    }
}

/// A named, evaluable test function with its declared class memberships.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub id: String,
    pub expr: Expr,
    pub domain: Interval,
    pub declared_classes: Vec<ConvexityClass>,
    pub symmetric_about_midpoint: Option<bool>,
    pub monotonicity: Monotonicity,
}

impl FunctionSpec {
    pub fn eval(&self, x: f64) -> f64 {
        self.expr.eval(x)
    }

    /// Evaluate, failing on non-finite values.
    pub fn eval_checked(&self, x: f64) -> Result<f64, CatalogError> {
        let value = self.expr.eval(x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(CatalogError::Evaluation {
                function: self.id.clone(),
                x,
            })
        }
    }

    /// Whether this function is declared a member of `class`.
    ///
    /// A declared convex member (the catalog only declares nonnegative ones)
    /// is also s-convex for every `s`, and an s-convex member is s'-convex
    /// for every `s' <= s`.
    pub fn declares(&self, class: &ConvexityClass) -> bool {
        match class {
            ConvexityClass::SConvex { s } => self.declared_classes.iter().any(|c| match c {
                ConvexityClass::Convex => true,
                ConvexityClass::SConvex { s: declared } => *declared >= *s,
                _ => false,
            }),
            other => self.declared_classes.contains(other),
        }
    }

    /// `c * f`; every class membership is preserved for `c > 0`.
    pub fn scaled(&self, factor: f64) -> FunctionSpec {
        FunctionSpec {
            id: format!("{factor}*{}", self.id),
            expr: Expr::Scaled {
                factor,
                inner: Box::new(self.expr.clone()),
            },
            ..self.clone()
        }
    }
}

impl RealFunction for FunctionSpec {
    fn eval(&self, x: f64) -> f64 {
        self.expr.eval(x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.expr.breakpoints()
    }
}

fn nonnegative_convex() -> Vec<ConvexityClass> {
    vec![
        ConvexityClass::Convex,
        ConvexityClass::QuasiConvex,
        ConvexityClass::PFunction,
        ConvexityClass::QClass,
    ]
}

/// Built-in functions instantiated on `[a, b]`.
///
/// Some members (the centered absolute value, the concave ramp) depend on the
/// interval; the rest are fixed formulas.
pub fn builtin_catalog_on(a: f64, b: f64) -> Result<Vec<FunctionSpec>, CatalogError> {
    let domain = Interval::new(a, b)?;
    let mid = domain.midpoint();
    let spec = |id: &str,
                expr: Expr,
                declared_classes: Vec<ConvexityClass>,
                symmetric: bool,
                monotonicity: Monotonicity| FunctionSpec {
        id: id.to_string(),
        expr,
        domain,
        declared_classes,
        symmetric_about_midpoint: Some(symmetric),
        monotonicity,
    };

    let mut catalog = vec![
        spec(
            "const1",
            Expr::Const { value: 1.0 },
            nonnegative_convex(),
            true,
            Monotonicity::None,
        ),
        spec(
            "const-half",
            Expr::Const { value: 0.5 },
            nonnegative_convex(),
            true,
            Monotonicity::None,
        ),
        spec(
            "x",
            Expr::Polynomial {
                coeffs: vec![0.0, 1.0],
            },
            nonnegative_convex(),
            false,
            Monotonicity::Increasing,
        ),
        spec(
            "x2",
            Expr::Polynomial {
                coeffs: vec![0.0, 0.0, 1.0],
            },
            nonnegative_convex(),
            false,
            Monotonicity::Increasing,
        ),
    ];
    for (id, s) in [("pow-0.25", 0.25), ("sqrt", 0.5), ("pow-0.75", 0.75)] {
        catalog.push(spec(
            id,
            Expr::Power {
                coeff: 1.0,
                exponent: s,
            },
            vec![
                ConvexityClass::SConvex { s },
                ConvexityClass::QuasiConvex,
                ConvexityClass::PFunction,
                ConvexityClass::QClass,
            ],
            false,
            Monotonicity::Increasing,
        ));
    }
    catalog.extend([
        spec(
            "exp",
            Expr::Exp {
                coeff: 1.0,
                rate: 1.0,
            },
            nonnegative_convex(),
            false,
            Monotonicity::Increasing,
        ),
        spec(
            "exp-neg",
            Expr::Exp {
                coeff: 1.0,
                rate: -1.0,
            },
            nonnegative_convex(),
            false,
            Monotonicity::Decreasing,
        ),
        spec(
            "abs-centered",
            Expr::AbsAffine {
                offset: 0.0,
                slope: 1.0,
                center: mid,
            },
            nonnegative_convex(),
            true,
            Monotonicity::None,
        ),
        // Increasing and concave: quasi-convex without being convex.
        spec(
            "ramp-concave",
            Expr::PiecewiseLinear {
                knots: vec![(a, 1.0), (mid, 2.0), (b, 2.5)],
            },
            vec![
                ConvexityClass::QuasiConvex,
                ConvexityClass::PFunction,
                ConvexityClass::QClass,
            ],
            false,
            Monotonicity::Increasing,
        ),
    ]);
    // sin(pi x) is symmetric about the midpoint exactly when a + b is an odd integer.
    let sum = a + b;
    let symmetric = sum.fract() == 0.0 && (sum as i64) % 2 == 1;
    catalog.push(spec(
        "sin-pi",
        Expr::SinPi,
        Vec::new(),
        symmetric,
        Monotonicity::None,
    ));
    Ok(catalog)
}

/// Built-in functions on `[0, 1]`.
pub fn builtin_catalog() -> Vec<FunctionSpec> {
    builtin_catalog_on(0.0, 1.0).expect("[0, 1] is a valid domain")
}

/// Look up a built-in function by id, instantiated on `[a, b]`.
pub fn catalog_function(id: &str, a: f64, b: f64) -> Result<FunctionSpec, CatalogError> {
    builtin_catalog_on(a, b)?
        .into_iter()
        .find(|f| f.id == id)
        .ok_or_else(|| CatalogError::UnknownFunction(id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_contents() {
        let cat = builtin_catalog();
        let get = |id: &str| cat.iter().find(|f| f.id == id).unwrap();
        assert_eq!(get("exp").monotonicity, Monotonicity::Increasing);
        assert_eq!(get("abs-centered").symmetric_about_midpoint, Some(true));
        assert!(get("sin-pi").declared_classes.is_empty());
        assert!(cat.len() >= 8);
        for id in ["const1", "x", "x2", "pow-0.25", "sqrt", "pow-0.75", "exp", "abs-centered", "ramp-concave"] {
            assert!(cat.iter().any(|f| f.id == id), "{id}");
        }
    }

    #[test]
    fn sin_pi_symmetry_depends_on_interval() {
        let flag = |a, b| catalog_function("sin-pi", a, b).unwrap().symmetric_about_midpoint;
        assert_eq!(flag(0.0, 1.0), Some(true));
        assert_eq!(flag(0.5, 2.5), Some(true));
        assert_eq!(flag(1.0, 3.0), Some(false));
    }

    #[test]
    fn declares_follows_inclusions() {
        let exp = catalog_function("exp", 0.0, 1.0).unwrap();
        assert!(exp.declares(&ConvexityClass::SConvex { s: 0.3 }));
        let sqrt = catalog_function("sqrt", 0.0, 1.0).unwrap();
        assert!(sqrt.declares(&ConvexityClass::SConvex { s: 0.25 }));
        assert!(!sqrt.declares(&ConvexityClass::SConvex { s: 0.75 }));
        assert!(!sqrt.declares(&ConvexityClass::Convex));
    }

    #[test]
    fn rejects_bad_domains_and_classes() {
        assert!(Interval::new(-1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(ConvexityClass::s_convex(0.0).is_err());
        assert!(ConvexityClass::s_convex(1.5).is_err());
        assert!(matches!(
            catalog_function("nope", 0.0, 1.0),
            Err(CatalogError::UnknownFunction(_))
        ));
    }

    #[test]
    fn class_kind_attaches_s() {
        let kind: ClassKind = "s-convex".parse().unwrap();
        assert_eq!(kind.with_s(Some(0.5)).unwrap(), ConvexityClass::SConvex { s: 0.5 });
        assert!(kind.with_s(None).is_err());
        assert!(ClassKind::Convex.with_s(Some(0.5)).is_err());
        assert!("cvx".parse::<ClassKind>().is_err());
        for k in ClassKind::ALL {
            let s = (k == ClassKind::SConvex).then_some(1.0);
            assert_eq!(k.with_s(s).unwrap().kind(), k);
        }
    }

    #[test]
    fn nodes_hit_endpoints_exactly() {
        let iv = Interval::new(0.1, 0.7).unwrap();
        let n = iv.nodes(101);
        assert_eq!(n[0], 0.1);
        assert_eq!(n[100], 0.7);
    }
}
