//! Adaptive Gauss–Kronrod integration of weighted-product integrands.
//!
//! Two entry points evaluate the same quantity by different routes:
//! [`integrate_weighted`] works directly on `[a, b]` with the integrand
//! `(x-a)^p (b-x)^q f(x) f(a+b-x)`, and [`integrate_t_form`] works on `[0, 1]`
//! after the substitution `x = ta + (1-t)b`, carrying the `(b-a)^(p+q+1)`
//! prefactor. Agreement between them is the change-of-variables identity.
//!
//! Panels are refined worst-error-first (ties broken by panel index) so a
//! call is bit-reproducible. When `p < 1` or `q < 1` the integrand has an
//! unbounded derivative at an endpoint; the initial mesh is then graded
//! geometrically toward that endpoint before adaptivity starts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Geometric ratio of the graded initial mesh.
pub const GRADING_RATIO: f64 = 0.25;
/// Number of graded levels toward a singular endpoint.
pub const GRADING_DEPTH: i32 = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid integral problem: {0}")]
    InvalidProblem(String),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("integrand is not finite at x={x} (value {value})")]
    NonFinite { x: f64, value: f64 },
}

/// A real function of one variable that can be integrated.
///
/// `breakpoints` lists interior points where the function has kinks; the
/// integrator seeds its mesh with them.
pub trait RealFunction: Sync {
    fn eval(&self, x: f64) -> f64;

    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<F> RealFunction for F
where
    F: Fn(f64) -> f64 + Sync,
{
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// One instance of `∫_a^b (x-a)^p (b-x)^q f(x) f(a+b-x) dx`.
#[derive(Clone, Copy)]
pub struct IntegralProblem<'f> {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub q: f64,
    pub f: &'f dyn RealFunction,
}

impl<'f> IntegralProblem<'f> {
    pub fn new(
        a: f64,
        b: f64,
        p: f64,
        q: f64,
        f: &'f dyn RealFunction,
    ) -> Result<Self, QuadratureError> {
        if !a.is_finite() || !b.is_finite() || !(a < b) {
            return Err(QuadratureError::InvalidProblem(format!(
                "need finite a < b, got a={a}, b={b}"
            )));
        }
        if !(p > 0.0) || !p.is_finite() || !(q > 0.0) || !q.is_finite() {
            return Err(QuadratureError::InvalidProblem(format!(
                "need finite p, q > 0, got p={p}, q={q}"
            )));
        }
        Ok(Self { a, b, p, q, f })
    }

    /// `(b-a)^(p+q+1)`, the Jacobian-and-weight prefactor of the t-form.
    pub fn prefactor(&self) -> f64 {
        (self.b - self.a).powf(self.p + self.q + 1.0)
    }

    fn eval_f(&self, x: f64) -> Result<f64, QuadratureError> {
        let value = self.f.eval(x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(QuadratureError::NonFinite { x, value })
        }
    }

    fn interior_breakpoints(&self) -> Vec<f64> {
        self.f
            .breakpoints()
            .into_iter()
            .filter(|x| *x > self.a && *x < self.b)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSpec {
    pub atol: f64,
    pub rtol: f64,
    pub max_subdivisions: usize,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self {
            atol: 1e-12,
            rtol: 1e-10,
            max_subdivisions: 4096,
        }
    }
}

impl ToleranceSpec {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.atol > 0.0) || !(self.rtol > 0.0) {
            return Err(QuadratureError::InvalidTolerance(format!(
                "atol and rtol must be positive, got atol={}, rtol={}",
                self.atol, self.rtol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(QuadratureError::InvalidTolerance(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Error budget for an integral of the given magnitude.
    pub fn budget(&self, value: f64) -> f64 {
        self.atol.max(self.rtol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Panels in the final partition.
    pub subdivisions: usize,
    pub converged: bool,
}

/// Initial-mesh hints for [`integrate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeshHints {
    pub breakpoints: Vec<f64>,
    pub grade_lo: bool,
    pub grade_hi: bool,
}

/// Kronrod value, embedded-Gauss error estimate and `∫|g|` on one panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelEstimate {
    pub value: f64,
    pub error: f64,
    pub abs_value: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 21-point Kronrod rule with the embedded 10-point Gauss rule on `[lo, hi]`.
///
/// Exact for polynomials of degree up to 31. The error model is the usual
/// `resasc * min(1, (200 |K - G| / resasc)^1.5)` with a roundoff floor.
pub fn gauss_kronrod_21<G>(mut g: G, lo: f64, hi: f64) -> Result<PanelEstimate, QuadratureError>
where
    G: FnMut(f64) -> Result<f64, QuadratureError>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = g(center)?;

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_kronrod = f_center * WGK[10];
    let mut res_gauss = 0.0;
    let mut res_abs = res_kronrod.abs();

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = g(center - dx)?;
        let f2 = g(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        // Odd indices are the Gauss nodes.
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let scale = half.abs();
    let value = res_kronrod * half;
    let res_abs = res_abs * scale;
    let res_asc = res_asc * scale;
    let mut error = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(PanelEstimate {
        value,
        error,
        abs_value: res_abs,
    })
}

fn initial_mesh(lo: f64, hi: f64, hints: &MeshHints) -> Vec<f64> {
    let width = hi - lo;
    let mut points = vec![lo, hi];
    points.extend(hints.breakpoints.iter().copied().filter(|x| *x > lo && *x < hi));
    for level in 1..=GRADING_DEPTH {
        let offset = width * GRADING_RATIO.powi(level);
        if hints.grade_lo {
            points.push(lo + offset);
        }
        if hints.grade_hi {
            points.push(hi - offset);
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points.retain(|x| *x >= lo && *x <= hi);
    points
}

struct Panel {
    lo: f64,
    hi: f64,
    estimate: PanelEstimate,
}

/// Adaptive driver; `scale` multiplies both value and error before the
/// tolerance test (the t-form prefactor).
fn adaptive<G>(
    mut g: G,
    lo: f64,
    hi: f64,
    hints: &MeshHints,
    tol: &ToleranceSpec,
    scale: f64,
) -> Result<QuadratureResult, QuadratureError>
where
    G: FnMut(f64) -> Result<f64, QuadratureError>,
{
    tol.validate()?;
    let mesh = initial_mesh(lo, hi, hints);
    let mut panels = Vec::with_capacity(mesh.len().max(64));
    for w in mesh.windows(2) {
        let estimate = gauss_kronrod_21(&mut g, w[0], w[1])?;
        panels.push(Panel {
            lo: w[0],
            hi: w[1],
            estimate,
        });
    }

    let totals = |panels: &[Panel]| {
        panels.iter().fold((0.0, 0.0), |(v, e), p| {
            (v + p.estimate.value, e + p.estimate.error)
        })
    };

    loop {
        let (value, error) = totals(&panels);
        let (value, error) = (value * scale, error * scale.abs());
        if error <= tol.budget(value) {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                subdivisions: panels.len(),
                converged: true,
            });
        }
        if panels.len() >= tol.max_subdivisions {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                subdivisions: panels.len(),
                converged: false,
            });
        }

        // Worst panel first; on equal error the lowest index wins.
        let worst = panels
            .iter()
            .enumerate()
            .fold(0usize, |best, (i, p)| {
                if p.estimate.error > panels[best].estimate.error {
                    i
                } else {
                    best
                }
            });
        let Panel { lo: plo, hi: phi, .. } = panels[worst];
        let mid = 0.5 * (plo + phi);
        if !(mid > plo && mid < phi) {
            // Panel cannot be split further in floating point.
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                subdivisions: panels.len(),
                converged: false,
            });
        }
        let left = gauss_kronrod_21(&mut g, plo, mid)?;
        let right = gauss_kronrod_21(&mut g, mid, phi)?;
        panels[worst] = Panel {
            lo: plo,
            hi: mid,
            estimate: left,
        };
        panels.push(Panel {
            lo: mid,
            hi: phi,
            estimate: right,
        });
    }
}

/// Adaptively integrate an arbitrary function over `[lo, hi]`.
pub fn integrate<G>(
    g: G,
    lo: f64,
    hi: f64,
    hints: &MeshHints,
    tol: &ToleranceSpec,
) -> Result<QuadratureResult, QuadratureError>
where
    G: Fn(f64) -> f64,
{
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(QuadratureError::InvalidProblem(format!(
            "need finite lo < hi, got lo={lo}, hi={hi}"
        )));
    }
    let checked = |x: f64| {
        let value = g(x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(QuadratureError::NonFinite { x, value })
        }
    };
    adaptive(checked, lo, hi, hints, tol, 1.0)
}

fn weighted_integrand<'a>(
    problem: &'a IntegralProblem<'_>,
) -> impl Fn(f64) -> Result<f64, QuadratureError> + 'a {
    let IntegralProblem { a, b, p, q, .. } = *problem;
    move |x| {
        let weight = (x - a).powf(p) * (b - x).powf(q);
        Ok(weight * problem.eval_f(x)? * problem.eval_f(a + b - x)?)
    }
}

fn t_form_integrand<'a>(
    problem: &'a IntegralProblem<'_>,
) -> impl Fn(f64) -> Result<f64, QuadratureError> + 'a {
    let IntegralProblem { a, b, p, q, .. } = *problem;
    move |t| {
        let s = 1.0 - t;
        let weight = s.powf(p) * t.powf(q);
        Ok(weight * problem.eval_f(t * a + s * b)? * problem.eval_f(s * a + t * b)?)
    }
}

/// `∫_a^b (x-a)^p (b-x)^q f(x) f(a+b-x) dx`, adaptively.
pub fn integrate_weighted(
    problem: &IntegralProblem<'_>,
    tol: &ToleranceSpec,
) -> Result<QuadratureResult, QuadratureError> {
    let (a, b) = (problem.a, problem.b);
    let mut breakpoints = problem.interior_breakpoints();
    let mirrored: Vec<f64> = breakpoints.iter().map(|x| a + b - x).collect();
    breakpoints.extend(mirrored);
    let hints = MeshHints {
        breakpoints,
        grade_lo: problem.p < 1.0,
        grade_hi: problem.q < 1.0,
    };
    adaptive(weighted_integrand(problem), a, b, &hints, tol, 1.0)
}

/// `(b-a)^(p+q+1) ∫_0^1 (1-t)^p t^q f(ta+(1-t)b) f((1-t)a+tb) dt`, adaptively.
pub fn integrate_t_form(
    problem: &IntegralProblem<'_>,
    tol: &ToleranceSpec,
) -> Result<QuadratureResult, QuadratureError> {
    let (a, b) = (problem.a, problem.b);
    let width = b - a;
    let breakpoints = problem
        .interior_breakpoints()
        .into_iter()
        .flat_map(|x| [(b - x) / width, (x - a) / width])
        .collect();
    // Weight (1-t)^p t^q: q acts at t = 0, p at t = 1.
    let hints = MeshHints {
        breakpoints,
        grade_lo: problem.q < 1.0,
        grade_hi: problem.p < 1.0,
    };
    adaptive(
        t_form_integrand(problem),
        0.0,
        1.0,
        &hints,
        tol,
        problem.prefactor(),
    )
}

/// Single 21-point Kronrod panel over `[a, b]`, no adaptivity.
pub fn integrate_weighted_base(problem: &IntegralProblem<'_>) -> Result<PanelEstimate, QuadratureError> {
    gauss_kronrod_21(weighted_integrand(problem), problem.a, problem.b)
}

/// Single 21-point Kronrod panel over `[0, 1]` for the t-form, prefactor applied.
pub fn integrate_t_form_base(problem: &IntegralProblem<'_>) -> Result<PanelEstimate, QuadratureError> {
    let scale = problem.prefactor();
    let raw = gauss_kronrod_21(t_form_integrand(problem), 0.0, 1.0)?;
    Ok(PanelEstimate {
        value: raw.value * scale,
        error: raw.error * scale,
        abs_value: raw.abs_value * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::beta_of;
    use std::f64::consts::{E, PI};

    fn tol() -> ToleranceSpec {
        ToleranceSpec::default()
    }

    fn within(result: &QuadratureResult, expected: f64) -> bool {
        (result.value - expected).abs() <= result.error_estimate + 1e-13 * expected.abs().max(1.0)
    }

    #[test]
    fn weighted_examples() {
        let one = |_: f64| 1.0;
        let pb = IntegralProblem::new(0.0, 1.0, 1.0, 1.0, &one).unwrap();
        let r = integrate_weighted(&pb, &tol()).unwrap();
        assert!(r.converged && within(&r, 1.0 / 6.0), "{r:?}");

        let exp = |x: f64| x.exp();
        let pb = IntegralProblem::new(0.0, 1.0, 1.0, 1.0, &exp).unwrap();
        let r = integrate_weighted(&pb, &tol()).unwrap();
        assert!(within(&r, E / 6.0), "{r:?}");

        let sqrt = |x: f64| x.sqrt();
        let pb = IntegralProblem::new(0.0, 1.0, 1.0, 1.0, &sqrt).unwrap();
        let r = integrate_weighted(&pb, &tol()).unwrap();
        assert!(within(&r, 3.0 * PI / 128.0), "{r:?}");
        assert!((r.value - beta_of(2.5, 2.5).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn t_form_examples() {
        let one = |_: f64| 1.0;
        let pb = IntegralProblem::new(0.0, 1.0, 1.0, 1.0, &one).unwrap();
        assert!(within(&integrate_t_form(&pb, &tol()).unwrap(), 1.0 / 6.0));

        let id = |x: f64| x;
        let pb = IntegralProblem::new(0.0, 1.0, 1.0, 1.0, &id).unwrap();
        assert!(within(&integrate_t_form(&pb, &tol()).unwrap(), 1.0 / 30.0));

        let exp = |x: f64| x.exp();
        let pb = IntegralProblem::new(1.0, 3.0, 1.0, 2.0, &exp).unwrap();
        let lhs = integrate_weighted(&pb, &tol()).unwrap();
        let rhs = integrate_t_form(&pb, &tol()).unwrap();
        let gap = (lhs.value - rhs.value).abs();
        assert!(gap <= lhs.error_estimate + rhs.error_estimate + 1e-12 * lhs.value.abs().max(1.0));
    }

    #[test]
    fn singular_endpoint_weights_converge() {
        // (x^0.5 (1-x)^0.25) with f = 1 is β(1.5, 1.25).
        let one = |_: f64| 1.0;
        let pb = IntegralProblem::new(0.0, 1.0, 0.5, 0.25, &one).unwrap();
        let expected = beta_of(1.5, 1.25).unwrap();
        for r in [integrate_weighted(&pb, &tol()).unwrap(), integrate_t_form(&pb, &tol()).unwrap()] {
            assert!(r.converged, "{r:?}");
            assert!((r.value - expected).abs() < 1e-11, "{r:?} vs {expected}");
        }
    }

    #[test]
    fn converged_implies_within_budget() {
        let f = |x: f64| (3.0 * x).sin() + 2.0;
        let pb = IntegralProblem::new(0.5, 2.5, 0.5, 3.5, &f).unwrap();
        let r = integrate_weighted(&pb, &tol()).unwrap();
        assert!(r.converged);
        assert!(r.error_estimate <= tol().budget(r.value));
    }

    #[test]
    fn non_convergence_is_reported_not_raised() {
        let f = |x: f64| (200.0 * x).sin() + 1.5;
        let pb = IntegralProblem::new(0.0, 1.0, 1.0, 1.0, &f).unwrap();
        let tight = ToleranceSpec {
            max_subdivisions: 2,
            ..ToleranceSpec::default()
        };
        let r = integrate_weighted(&pb, &tight).unwrap();
        assert!(!r.converged);
        assert_eq!(r.subdivisions, 2);
    }

    #[test]
    fn non_finite_sample_names_the_point() {
        let f = |x: f64| if x > 0.7 { f64::NAN } else { 1.0 };
        let pb = IntegralProblem::new(0.0, 1.0, 1.0, 1.0, &f).unwrap();
        match integrate_weighted(&pb, &tol()) {
            Err(QuadratureError::NonFinite { x, .. }) => assert!(x > 0.7),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_problems_and_tolerances() {
        let one = |_: f64| 1.0;
        assert!(IntegralProblem::new(1.0, 1.0, 1.0, 1.0, &one).is_err());
        assert!(IntegralProblem::new(0.0, 1.0, 0.0, 1.0, &one).is_err());
        assert!(IntegralProblem::new(0.0, 1.0, 1.0, -1.0, &one).is_err());
        let pb = IntegralProblem::new(0.0, 1.0, 1.0, 1.0, &one).unwrap();
        let bad = ToleranceSpec {
            atol: 0.0,
            ..ToleranceSpec::default()
        };
        assert!(matches!(integrate_weighted(&pb, &bad), Err(QuadratureError::InvalidTolerance(_))));
    }

    #[test]
    fn bit_reproducible() {
        let f = |x: f64| (x * x + 0.3).sqrt();
        let pb = IntegralProblem::new(0.5, 2.5, 0.5, 2.0, &f).unwrap();
        let r1 = integrate_weighted(&pb, &tol()).unwrap();
        let r2 = integrate_weighted(&pb, &tol()).unwrap();
        assert_eq!(r1.value.to_bits(), r2.value.to_bits());
        assert_eq!(r1.error_estimate.to_bits(), r2.error_estimate.to_bits());
    }

    #[test]
    fn breakpoints_seed_the_mesh() {
        struct Kink;
        impl RealFunction for Kink {
            fn eval(&self, x: f64) -> f64 {
                (x - 0.3).abs() + 0.1
            }
            fn breakpoints(&self) -> Vec<f64> {
                vec![0.3]
            }
        }
        let pb = IntegralProblem::new(0.0, 1.0, 1.0, 1.0, &Kink).unwrap();
        let r = integrate_weighted(&pb, &tol()).unwrap();
        // With the kink and its mirror in the mesh the integrand is piecewise polynomial.
        assert!(r.converged);
        assert!(r.subdivisions <= 3, "{r:?}");
    }
}
