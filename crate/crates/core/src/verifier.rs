//! End-to-end checks: quadrature of the left-hand side against the Beta
//! bounds, the dual-route identity, parameter sweeps and seeded
//! falsification runs.
//!
//! Class membership is certified on the problem interval before any verdict;
//! an unmet hypothesis makes the verdict inconclusive, never a violation.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    bound_convex, bound_p_class, bound_q_class, bound_quasi_convex, bound_s_convex, BetaTerm,
    BoundValue, BoundsError, EndpointData, FormulaId,
};
use crate::function_catalog::{
    catalog_function, certify, check_nonnegative, generate_certified, CatalogError,
    CertificationResult, ClassKind, ConvexityClass, FunctionSpec, GeneratorShape, GridSpec,
    Interval, Monotonicity, DEFAULT_CERTIFICATION_TOL,
};
use crate::quadrature::{
    integrate_t_form, integrate_weighted, IntegralProblem, QuadratureError, QuadratureResult,
    ToleranceSpec,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifierError {
    /// Parameters outside a formula's domain or an otherwise invalid request.
    #[error("{0}")]
    Usage(String),
}

impl From<CatalogError> for VerifierError {
    fn from(e: CatalogError) -> Self {
        VerifierError::Usage(e.to_string())
    }
}

impl From<QuadratureError> for VerifierError {
    fn from(e: QuadratureError) -> Self {
        VerifierError::Usage(e.to_string())
    }
}

impl From<BoundsError> for VerifierError {
    fn from(e: BoundsError) -> Self {
        VerifierError::Usage(e.to_string())
    }
}

/// Quadrature accuracy plus the margins used to call a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyTolerance {
    pub quadrature: ToleranceSpec,
    pub verdict_atol: f64,
    pub verdict_rtol: f64,
    pub certification_tol: f64,
    pub grid: GridSpec,
}

impl Default for VerifyTolerance {
    fn default() -> Self {
        Self {
            quadrature: ToleranceSpec::default(),
            verdict_atol: 1e-9,
            verdict_rtol: 1e-8,
            certification_tol: DEFAULT_CERTIFICATION_TOL,
            grid: GridSpec::default(),
        }
    }
}

impl VerifyTolerance {
    pub fn validate(&self) -> Result<(), VerifierError> {
        self.quadrature.validate()?;
        self.grid.validate()?;
        for (name, v) in [
            ("verdict_atol", self.verdict_atol),
            ("verdict_rtol", self.verdict_rtol),
            ("certification_tol", self.certification_tol),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(VerifierError::Usage(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// `max(atol, rtol·|scale|)`
    pub fn margin(&self, scale: f64) -> f64 {
        self.verdict_atol.max(self.verdict_rtol * scale.abs())
    }
}

/// Interval and weight exponents of one integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub q: f64,
}

impl ProblemSpec {
    pub fn new(a: f64, b: f64, p: f64, q: f64) -> Result<Self, VerifierError> {
        IntegralProblem::new(a, b, p, q, &|_: f64| 0.0)?;
        Ok(Self { a, b, p, q })
    }

    fn bind<'f>(&self, f: &'f FunctionSpec) -> IntegralProblem<'f> {
        IntegralProblem {
            a: self.a,
            b: self.b,
            p: self.p,
            q: self.q,
            f,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDescriptor {
    pub function_id: String,
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub q: f64,
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub problem: ProblemDescriptor,
    /// `None` for the identity check.
    pub class: Option<ConvexityClass>,
    pub formula_id: FormulaId,
    pub lhs: Option<f64>,
    pub lhs_error: Option<f64>,
    pub rhs: Option<f64>,
    /// Quadrature error of the right-hand side; only the identity check has one.
    pub rhs_error: Option<f64>,
    /// `rhs - lhs`
    pub slack: Option<f64>,
    /// `lhs / rhs`, when `rhs > 0`
    pub ratio: Option<f64>,
    pub verdict: Verdict,
    pub certifications: Vec<CertificationResult>,
    pub beta_terms: Vec<BetaTerm>,
    pub seed: Option<u64>,
    /// Why the verdict is inconclusive, when it is.
    pub note: Option<String>,
}

impl VerificationReport {
    fn new(f: &FunctionSpec, problem: &ProblemSpec, class: Option<ConvexityClass>, formula_id: FormulaId) -> Self {
        Self {
            problem: ProblemDescriptor {
                function_id: f.id.clone(),
                a: problem.a,
                b: problem.b,
                p: problem.p,
                q: problem.q,
                s: class.and_then(|c| match c {
                    ConvexityClass::SConvex { s } => Some(s),
                    _ => None,
                }),
            },
            class,
            formula_id,
            lhs: None,
            lhs_error: None,
            rhs: None,
            rhs_error: None,
            slack: None,
            ratio: None,
            verdict: Verdict::Inconclusive,
            certifications: Vec::new(),
            beta_terms: Vec::new(),
            seed: None,
            note: None,
        }
    }

    fn inconclusive(mut self, note: impl Into<String>) -> Self {
        self.verdict = Verdict::Inconclusive;
        self.note = Some(note.into());
        self
    }

    fn set_sides(&mut self, lhs: &QuadratureResult, rhs: f64) {
        self.lhs = Some(lhs.value);
        self.lhs_error = Some(lhs.error_estimate);
        self.rhs = Some(rhs);
        self.slack = Some(rhs - lhs.value);
        self.ratio = (rhs > 0.0).then(|| lhs.value / rhs);
    }
}

/// Both routes of the change-of-variables identity; `Holds` when they agree
/// within their combined error estimates plus the verdict margin.
pub fn check_identity(
    f: &FunctionSpec,
    problem: &ProblemSpec,
    tol: &VerifyTolerance,
) -> Result<VerificationReport, VerifierError> {
    tol.validate()?;
    let bound = problem.bind(f);
    let mut report = VerificationReport::new(f, problem, None, FormulaId::Lemma21);
    let weighted = integrate_weighted(&bound, &tol.quadrature);
    let t_form = integrate_t_form(&bound, &tol.quadrature);
    let (lhs, rhs) = match (weighted, t_form) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return Ok(report.inconclusive(e.to_string())),
    };
    report.set_sides(&lhs, rhs.value);
    report.rhs_error = Some(rhs.error_estimate);
    if !(lhs.converged && rhs.converged) {
        return Ok(report.inconclusive("quadrature did not converge"));
    }
    let gap = (lhs.value - rhs.value).abs();
    let allowed = lhs.error_estimate + rhs.error_estimate + tol.margin(lhs.value.abs().max(rhs.value.abs()));
    report.verdict = if gap <= allowed {
        Verdict::Holds
    } else {
        Verdict::Violated
    };
    Ok(report)
}

/// Parameter checks that make a request malformed rather than inconclusive.
fn check_preconditions(class: &ConvexityClass, problem: &ProblemSpec) -> Result<(), VerifierError> {
    ProblemSpec::new(problem.a, problem.b, problem.p, problem.q)?;
    Interval::new(problem.a, problem.b)?;
    if let ConvexityClass::SConvex { s } = class {
        ConvexityClass::s_convex(*s)?;
    }
    if *class == ConvexityClass::QClass && !(problem.p > 1.0 && problem.q > 1.0) {
        return Err(VerifierError::Usage(format!(
            "class q needs p > 1 and q > 1, got p={}, q={}",
            problem.p, problem.q
        )));
    }
    Ok(())
}

fn on_interval(f: &FunctionSpec, problem: &ProblemSpec) -> Result<FunctionSpec, VerifierError> {
    Ok(FunctionSpec {
        domain: Interval::new(problem.a, problem.b)?,
        ..f.clone()
    })
}

fn evaluate_bound(
    f: &FunctionSpec,
    class: &ConvexityClass,
    e: &EndpointData,
    p: f64,
    q: f64,
) -> Result<BoundValue, BoundsError> {
    match class {
        ConvexityClass::SConvex { s } => bound_s_convex(e, p, q, *s),
        ConvexityClass::Convex => bound_convex(e, p, q),
        ConvexityClass::QuasiConvex => {
            let bound = bound_quasi_convex(e, p, q)?;
            Ok(match f.monotonicity {
                Monotonicity::Increasing | Monotonicity::Decreasing => bound.labelled(FormulaId::Cor25),
                Monotonicity::None => bound,
            })
        }
        ConvexityClass::PFunction => bound_p_class(e, p, q),
        ConvexityClass::QClass => bound_q_class(e, p, q),
    }
}

fn nominal_formula(class: &ConvexityClass) -> FormulaId {
    match class {
        ConvexityClass::SConvex { .. } => FormulaId::Thm21,
        ConvexityClass::Convex => FormulaId::Cor23,
        ConvexityClass::QuasiConvex => FormulaId::Thm22,
        ConvexityClass::PFunction => FormulaId::Thm23,
        ConvexityClass::QClass => FormulaId::Thm24,
    }
}

fn certify_on(
    f: &FunctionSpec,
    class: &ConvexityClass,
    problem: &ProblemSpec,
    tol: &VerifyTolerance,
) -> Result<Result<CertificationResult, CatalogError>, VerifierError> {
    let restricted = on_interval(f, problem)?;
    Ok(certify(&restricted, class, &tol.grid, tol.certification_tol))
}

/// Check the bound for `class` on `f`, certifying membership first.
pub fn verify(
    f: &FunctionSpec,
    class: &ConvexityClass,
    problem: &ProblemSpec,
    tol: &VerifyTolerance,
) -> Result<VerificationReport, VerifierError> {
    check_preconditions(class, problem)?;
    tol.validate()?;
    let certification = certify_on(f, class, problem, tol)?;
    Ok(verify_certified(f, class, problem, tol, certification))
}

/// [`verify`] with the certification already computed for `problem`'s interval.
fn verify_certified(
    f: &FunctionSpec,
    class: &ConvexityClass,
    problem: &ProblemSpec,
    tol: &VerifyTolerance,
    certification: Result<CertificationResult, CatalogError>,
) -> VerificationReport {
    let mut report = VerificationReport::new(f, problem, Some(*class), nominal_formula(class));
    let certification = match certification {
        Ok(c) => c,
        Err(e) => return report.inconclusive(format!("certification failed: {e}")),
    };
    let certified = certification.is_certified();
    report.certifications.push(certification);

    // Every bound is stated for nonnegative functions.
    let restricted = match on_interval(f, problem) {
        Ok(r) => r,
        Err(e) => return report.inconclusive(e.to_string()),
    };
    let negative_at = match check_nonnegative(&restricted, tol.grid.x_nodes, tol.certification_tol) {
        Ok(found) => found,
        Err(e) => return report.inconclusive(e.to_string()),
    };

    let lhs = match integrate_weighted(&problem.bind(f), &tol.quadrature) {
        Ok(l) => l,
        Err(e) => return report.inconclusive(e.to_string()),
    };
    report.lhs = Some(lhs.value);
    report.lhs_error = Some(lhs.error_estimate);
    if let Some(x) = negative_at {
        return report.inconclusive(format!("f is negative at x={x}"));
    }

    let endpoints = EndpointData::new(f.eval(problem.a), f.eval(problem.b), problem.a, problem.b)
        .map_err(|e| e.to_string());
    let bound = endpoints.and_then(|e| evaluate_bound(f, class, &e, problem.p, problem.q).map_err(|e| e.to_string()));
    let bound = match bound {
        Ok(b) => b,
        Err(e) => return report.inconclusive(e),
    };
    report.formula_id = bound.formula_id;
    report.beta_terms = bound.beta_terms;
    report.set_sides(&lhs, bound.value);

    if !certified {
        return report.inconclusive(format!("f is not certified {class}"));
    }
    if !lhs.converged {
        return report.inconclusive("quadrature did not converge");
    }
    let limit = bound.value + lhs.error_estimate + tol.margin(bound.value);
    report.verdict = if lhs.value <= limit {
        Verdict::Holds
    } else {
        Verdict::Violated
    };
    report
}

/// How the p and q grids are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pairing {
    /// Every (p, q) in `p_grid × q_grid`.
    #[default]
    Cartesian,
    /// `p = q` over `p_grid`; `q_grid` is ignored.
    Diagonal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Catalog ids.
    pub functions: Vec<String>,
    pub classes: Vec<ClassKind>,
    pub p_grid: Vec<f64>,
    pub q_grid: Vec<f64>,
    /// Used by s-convex entries only.
    pub s_grid: Vec<f64>,
    pub interval: (f64, f64),
    pub pairing: Pairing,
    pub tolerance: VerifyTolerance,
}

impl SweepConfig {
    fn exponent_pairs(&self) -> Vec<(f64, f64)> {
        match self.pairing {
            Pairing::Cartesian => self
                .p_grid
                .iter()
                .flat_map(|&p| self.q_grid.iter().map(move |&q| (p, q)))
                .collect(),
            Pairing::Diagonal => self.p_grid.iter().map(|&p| (p, p)).collect(),
        }
    }

    fn expanded_classes(&self) -> Result<Vec<ConvexityClass>, VerifierError> {
        let mut out = Vec::new();
        for kind in &self.classes {
            if *kind == ClassKind::SConvex {
                for &s in &self.s_grid {
                    out.push(kind.with_s(Some(s))?);
                }
            } else {
                out.push(kind.with_s(None)?);
            }
        }
        Ok(out)
    }
}

/// One report per (function, class, p, q, s) in lexicographic grid order.
pub fn sweep(config: &SweepConfig) -> Result<Vec<VerificationReport>, VerifierError> {
    if config.functions.is_empty() {
        return Err(VerifierError::Usage("sweep needs at least one function".into()));
    }
    if config.classes.is_empty() || config.p_grid.is_empty() {
        return Err(VerifierError::Usage("sweep needs nonempty class and p grids".into()));
    }
    if config.pairing == Pairing::Cartesian && config.q_grid.is_empty() {
        return Err(VerifierError::Usage("sweep needs a nonempty q grid".into()));
    }
    if config.classes.contains(&ClassKind::SConvex) && config.s_grid.is_empty() {
        return Err(VerifierError::Usage("s-convex sweeps need a nonempty s grid".into()));
    }
    config.tolerance.validate()?;
    let (a, b) = config.interval;
    let functions = config
        .functions
        .iter()
        .map(|id| catalog_function(id, a, b))
        .collect::<Result<Vec<_>, _>>()?;
    let classes = config.expanded_classes()?;
    let pairs = config.exponent_pairs();
    let mut jobs = Vec::new();
    for fi in 0..functions.len() {
        for (ci, class) in classes.iter().enumerate() {
            for &(p, q) in &pairs {
                let problem = ProblemSpec { a, b, p, q };
                check_preconditions(class, &problem)?;
                jobs.push((fi, ci, problem));
            }
        }
    }

    // Certification depends only on (function, class) for a fixed interval.
    let probe = ProblemSpec { a, b, p: 1.0, q: 1.0 };
    let keys: Vec<(usize, usize)> = (0..functions.len())
        .flat_map(|fi| (0..classes.len()).map(move |ci| (fi, ci)))
        .collect();
    let certifications: HashMap<(usize, usize), Result<CertificationResult, CatalogError>> = keys
        .par_iter()
        .map(|&(fi, ci)| {
            let restricted = on_interval(&functions[fi], &probe)?;
            let cert = certify(&restricted, &classes[ci], &config.tolerance.grid, config.tolerance.certification_tol);
            Ok(((fi, ci), cert))
        })
        .collect::<Result<_, VerifierError>>()?;

    Ok(jobs
        .par_iter()
        .map(|(fi, ci, problem)| {
            verify_certified(
                &functions[*fi],
                &classes[*ci],
                problem,
                &config.tolerance,
                certifications[&(*fi, *ci)].clone(),
            )
        })
        .collect())
}

/// Sampling ranges for falsification trials; each is `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemTemplate {
    pub a_range: (f64, f64),
    pub width_range: (f64, f64),
    pub p_range: (f64, f64),
    pub q_range: (f64, f64),
    /// When set, `s` is drawn per trial for s-convex runs.
    pub s_range: Option<(f64, f64)>,
    pub shape_max_nodes: usize,
    pub shape_value_scale: f64,
}

impl ProblemTemplate {
    /// Defaults for `class`; Q(I) draws exponents from `(1.1, 4)`.
    pub fn for_class(class: &ConvexityClass) -> Self {
        let exponents = if *class == ConvexityClass::QClass {
            (1.1, 4.0)
        } else {
            (0.25, 4.0)
        };
        let defaults = GeneratorShape::default();
        Self {
            a_range: (0.0, 2.0),
            width_range: (0.5, 3.0),
            p_range: exponents,
            q_range: exponents,
            s_range: None,
            shape_max_nodes: defaults.max_nodes,
            shape_value_scale: defaults.value_scale,
        }
    }

    fn validate(&self, class: &ConvexityClass) -> Result<(), VerifierError> {
        let mut ranges = vec![
            ("a", self.a_range, 0.0),
            ("width", self.width_range, f64::MIN_POSITIVE),
            ("p", self.p_range, f64::MIN_POSITIVE),
            ("q", self.q_range, f64::MIN_POSITIVE),
        ];
        if let Some(s) = self.s_range {
            ranges.push(("s", s, f64::MIN_POSITIVE));
        }
        for (name, (lo, hi), min) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi && lo >= min) {
                return Err(VerifierError::Usage(format!(
                    "{name} range [{lo}, {hi}) is invalid"
                )));
            }
        }
        if *class == ConvexityClass::QClass && !(self.p_range.0 > 1.0 && self.q_range.0 > 1.0) {
            return Err(VerifierError::Usage("class q needs p and q ranges above 1".into()));
        }
        if let Some((_, hi)) = self.s_range {
            if hi > 1.0 {
                return Err(VerifierError::Usage("s range must lie in (0, 1]".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsificationSummary {
    pub class: ConvexityClass,
    pub seed: u64,
    pub trials: usize,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    /// Smallest slack among `Holds` trials.
    pub min_slack: Option<f64>,
    pub min_slack_report: Option<VerificationReport>,
    pub violations: Vec<VerificationReport>,
    pub inconclusive_reports: Vec<VerificationReport>,
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo < hi {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

fn falsification_trial(
    class: &ConvexityClass,
    template: &ProblemTemplate,
    tol: &VerifyTolerance,
    seed: u64,
    trial: u64,
) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let a = draw(&mut rng, template.a_range);
    let b = a + draw(&mut rng, template.width_range);
    let p = draw(&mut rng, template.p_range);
    let q = draw(&mut rng, template.q_range);
    let class = match (class, template.s_range) {
        (ConvexityClass::SConvex { .. }, Some(range)) => ConvexityClass::SConvex {
            s: draw(&mut rng, range),
        },
        _ => *class,
    };
    let function_seed: u64 = rng.gen();
    let problem = ProblemSpec { a, b, p, q };
    let shape = GeneratorShape {
        domain: Interval { lo: a, hi: b },
        max_nodes: template.shape_max_nodes,
        value_scale: template.shape_value_scale,
    };
    let mut report = match generate_certified(&class, function_seed, &shape, &tol.grid, tol.certification_tol) {
        Ok((f, cert)) => verify_certified(&f, &class, &problem, tol, Ok(cert)),
        Err(e) => {
            let placeholder = FunctionSpec {
                id: format!("gen-{}-{function_seed}", class.kind_name()),
                expr: crate::function_catalog::Expr::Const { value: 0.0 },
                domain: shape.domain,
                declared_classes: vec![class],
                symmetric_about_midpoint: None,
                monotonicity: Monotonicity::None,
            };
            VerificationReport::new(&placeholder, &problem, Some(class), nominal_formula(&class))
                .inconclusive(e.to_string())
        }
    };
    report.seed = Some(function_seed);
    report
}

/// Seeded random search for counterexamples among generated class members.
pub fn falsify(
    class: &ConvexityClass,
    template: &ProblemTemplate,
    trials: usize,
    seed: u64,
    tol: &VerifyTolerance,
) -> Result<FalsificationSummary, VerifierError> {
    if trials == 0 {
        return Err(VerifierError::Usage("trials must be at least 1".into()));
    }
    if let ConvexityClass::SConvex { s } = class {
        ConvexityClass::s_convex(*s)?;
    }
    template.validate(class)?;
    tol.validate()?;
    if template.shape_max_nodes < 3 || !(template.shape_value_scale > 0.0) {
        return Err(VerifierError::Usage("generator shape needs >= 3 nodes and a positive scale".into()));
    }

    let reports: Vec<VerificationReport> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| falsification_trial(class, template, tol, seed, trial))
        .collect();

    let mut summary = FalsificationSummary {
        class: *class,
        seed,
        trials,
        holds: 0,
        violated: 0,
        inconclusive: 0,
        min_slack: None,
        min_slack_report: None,
        violations: Vec::new(),
        inconclusive_reports: Vec::new(),
    };
    for report in reports {
        match report.verdict {
            Verdict::Holds => {
                summary.holds += 1;
                let slack = report.slack.unwrap_or(f64::INFINITY);
                if summary.min_slack.is_none_or(|m| slack < m) {
                    summary.min_slack = Some(slack);
                    summary.min_slack_report = Some(report);
                }
            }
            Verdict::Violated => {
                summary.violated += 1;
                summary.violations.push(report);
            }
            Verdict::Inconclusive => {
                summary.inconclusive += 1;
                summary.inconclusive_reports.push(report);
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn unit(p: f64, q: f64) -> ProblemSpec {
        ProblemSpec::new(0.0, 1.0, p, q).unwrap()
    }

    fn cat(id: &str) -> FunctionSpec {
        catalog_function(id, 0.0, 1.0).unwrap()
    }

    fn close(actual: Option<f64>, expected: f64, abs: f64) {
        let actual = actual.unwrap();
        assert!((actual - expected).abs() <= abs, "{actual} vs {expected}");
    }

    #[test]
    fn exp_convex() {
        let r = verify(&cat("exp"), &ConvexityClass::Convex, &unit(1.0, 1.0), &VerifyTolerance::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.formula_id, FormulaId::Cor23);
        close(r.lhs, E / 6.0, 1e-12);
        // (1+e²)·2β(2,4)/2 + 4e·β(3,3)/2
        close(r.rhs, (1.0 + E * E) / 20.0 + E / 15.0, 1e-12);
        close(r.ratio, (E / 6.0) / ((1.0 + E * E) / 20.0 + E / 15.0), 1e-12);
        assert_eq!(r.beta_terms.len(), 3);
        assert!(r.certifications[0].is_certified());
    }

    #[test]
    fn sqrt_half_convex() {
        let class = ConvexityClass::SConvex { s: 0.5 };
        let r = verify(&cat("sqrt"), &class, &unit(1.0, 1.0), &VerifyTolerance::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.formula_id, FormulaId::Thm21);
        assert_eq!(r.problem.s, Some(0.5));
        close(r.lhs, 3.0 * PI / 128.0, 1e-12);
        close(r.rhs, 1.0 / 12.0, 1e-14);
        close(r.ratio, 9.0 * PI / 32.0, 1e-11);
    }

    #[test]
    fn constant_q_class() {
        let r = verify(&cat("const1"), &ConvexityClass::QClass, &unit(2.0, 2.0), &VerifyTolerance::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        close(r.lhs, 1.0 / 30.0, 1e-14);
        close(r.rhs, 1.0, 1e-14);
    }

    #[test]
    fn q_class_rejects_small_exponents() {
        let err = verify(&cat("const1"), &ConvexityClass::QClass, &unit(1.0, 2.0), &VerifyTolerance::default());
        assert!(matches!(err, Err(VerifierError::Usage(_))));
    }

    #[test]
    fn refuted_hypothesis_is_inconclusive() {
        let r = verify(&cat("sin-pi"), &ConvexityClass::PFunction, &unit(1.0, 1.0), &VerifyTolerance::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        // lhs > rhs = 0, but the function is not a P-function.
        assert!(r.lhs.unwrap() > r.rhs.unwrap());
        let w = r.certifications[0].witness.unwrap();
        assert_eq!((w.x, w.y, w.lambda), (0.0, 1.0, 0.5));
    }

    #[test]
    fn monotone_quasi_uses_the_resolved_formula() {
        let r = verify(&cat("exp"), &ConvexityClass::QuasiConvex, &unit(1.0, 1.0), &VerifyTolerance::default()).unwrap();
        assert_eq!(r.formula_id, FormulaId::Cor25);
        close(r.rhs, E * E / 6.0, 1e-14);
        let r = verify(&cat("abs-centered"), &ConvexityClass::QuasiConvex, &unit(1.0, 1.0), &VerifyTolerance::default()).unwrap();
        assert_eq!(r.formula_id, FormulaId::Thm22);
    }

    #[test]
    fn identity_examples() {
        let tol = VerifyTolerance::default();
        let r = check_identity(&cat("const1"), &unit(1.0, 1.0), &tol).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.formula_id, FormulaId::Lemma21);
        close(r.lhs, 1.0 / 6.0, 1e-15);
        close(r.rhs, 1.0 / 6.0, 1e-15);
        let r = check_identity(&cat("x"), &unit(1.0, 1.0), &tol).unwrap();
        close(r.lhs, 1.0 / 30.0, 1e-15);
        close(r.rhs, 1.0 / 30.0, 1e-15);
        let exp = catalog_function("exp", 1.0, 3.0).unwrap();
        let r = check_identity(&exp, &ProblemSpec::new(1.0, 3.0, 1.0, 2.0).unwrap(), &tol).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    fn sweep_config(functions: &[&str], classes: Vec<ClassKind>, p_grid: Vec<f64>, pairing: Pairing) -> SweepConfig {
        SweepConfig {
            functions: functions.iter().map(|s| s.to_string()).collect(),
            classes,
            p_grid: p_grid.clone(),
            q_grid: p_grid,
            s_grid: vec![0.5],
            interval: (0.0, 1.0),
            pairing,
            tolerance: VerifyTolerance::default(),
        }
    }

    #[test]
    fn degenerate_sweep_matches_verify() {
        let config = sweep_config(&["exp"], vec![ClassKind::Convex], vec![1.0], Pairing::Cartesian);
        let reports = sweep(&config).unwrap();
        let single = verify(&cat("exp"), &ConvexityClass::Convex, &unit(1.0, 1.0), &VerifyTolerance::default()).unwrap();
        assert_eq!(reports, vec![single]);
    }

    #[test]
    fn diagonal_sweep_on_x() {
        let config = sweep_config(&["x"], vec![ClassKind::Convex], vec![1.0, 2.0], Pairing::Diagonal);
        let reports = sweep(&config).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().all(|r| r.verdict == Verdict::Holds));
        close(reports[0].lhs, 1.0 / 30.0, 1e-15);
        close(reports[0].rhs, 1.0 / 20.0, 1e-15);
        assert_eq!(reports[1].problem.p, 2.0);
    }

    #[test]
    fn sweep_order_is_lexicographic() {
        let config = sweep_config(
            &["x", "exp"],
            vec![ClassKind::SConvex, ClassKind::PFunction],
            vec![0.5, 2.0],
            Pairing::Cartesian,
        );
        let reports = sweep(&config).unwrap();
        assert_eq!(reports.len(), 2 * 2 * 4);
        let keys: Vec<_> = reports
            .iter()
            .map(|r| (r.problem.function_id.clone(), r.class.unwrap().kind_name(), r.problem.p, r.problem.q))
            .collect();
        assert_eq!(keys[0], ("x".to_string(), "s-convex", 0.5, 0.5));
        assert_eq!(keys[1], ("x".to_string(), "s-convex", 0.5, 2.0));
        assert_eq!(keys[4], ("x".to_string(), "p", 0.5, 0.5));
        assert_eq!(keys[8], ("exp".to_string(), "s-convex", 0.5, 0.5));
    }

    #[test]
    fn sweep_usage_errors() {
        let empty = sweep_config(&[], vec![ClassKind::Convex], vec![1.0], Pairing::Cartesian);
        assert!(matches!(sweep(&empty), Err(VerifierError::Usage(_))));
        let unknown = sweep_config(&["nope"], vec![ClassKind::Convex], vec![1.0], Pairing::Cartesian);
        assert!(sweep(&unknown).is_err());
        let q_small = sweep_config(&["x"], vec![ClassKind::QClass], vec![1.0], Pairing::Cartesian);
        assert!(sweep(&q_small).is_err());
    }

    #[test]
    fn falsify_is_deterministic() {
        let class = ConvexityClass::Convex;
        let template = ProblemTemplate::for_class(&class);
        let tol = VerifyTolerance::default();
        let first = falsify(&class, &template, 1, 5, &tol).unwrap();
        let second = falsify(&class, &template, 1, 5, &tol).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.holds, 1);
        assert!(first.min_slack.unwrap() > 0.0);
        assert!(falsify(&class, &template, 0, 5, &tol).is_err());
    }
}
