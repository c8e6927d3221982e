use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::certify::{certify, CertificationResult, GridSpec, DEFAULT_CERTIFICATION_TOL};
use super::{CatalogError, ConvexityClass, Expr, FunctionSpec, Interval, Monotonicity};

const MAX_ATTEMPTS: usize = 16;

/// Size limits for generated functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorShape {
    pub domain: Interval,
    /// Maximum knots of a piecewise-linear piece, endpoints included.
    pub max_nodes: usize,
    /// Typical magnitude of generated values.
    pub value_scale: f64,
}

impl Default for GeneratorShape {
    fn default() -> Self {
        Self {
            domain: Interval { lo: 0.0, hi: 1.0 },
            max_nodes: 6,
            value_scale: 4.0,
        }
    }
}

impl GeneratorShape {
    pub fn on(domain: Interval) -> Self {
        Self {
            domain,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), CatalogError> {
        Interval::new(self.domain.lo, self.domain.hi)?;
        if self.max_nodes < 3 {
            return Err(CatalogError::InvalidShape(format!(
                "max_nodes must be >= 3, got {}",
                self.max_nodes
            )));
        }
        if !(self.value_scale > 0.0) || !self.value_scale.is_finite() {
            return Err(CatalogError::InvalidShape(format!(
                "value_scale must be positive, got {}",
                self.value_scale
            )));
        }
        Ok(())
    }
}

/// Knot abscissae with both endpoints and strictly positive spacing.
fn knot_positions(rng: &mut ChaCha8Rng, shape: &GeneratorShape) -> Vec<f64> {
    let n = rng.gen_range(3..=shape.max_nodes);
    let gaps: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = gaps.iter().sum();
    let Interval { lo, hi } = shape.domain;
    let mut xs = Vec::with_capacity(n);
    let mut acc = 0.0;
    xs.push(lo);
    for gap in &gaps[..n - 2] {
        acc += gap;
        xs.push(lo + (hi - lo) * acc / total);
    }
    xs.push(hi);
    xs
}

/// Nonnegative convex piecewise-linear function: strictly increasing slopes.
fn convex_piecewise(rng: &mut ChaCha8Rng, shape: &GeneratorShape) -> (Expr, Monotonicity) {
    let xs = knot_positions(rng, shape);
    let slope_scale = shape.value_scale / shape.domain.width();
    let mut slope = rng.gen_range(-1.0..1.0) * slope_scale;
    let first_slope = slope;
    let mut last_slope = slope;
    let mut ys = vec![0.0];
    for w in xs.windows(2) {
        let last = *ys.last().unwrap();
        ys.push(last + slope * (w[1] - w[0]));
        last_slope = slope;
        slope += rng.gen_range(0.1..1.0) * slope_scale;
    }
    let floor = rng.gen_range(0.0..0.5) * shape.value_scale;
    let min = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let knots = xs.into_iter().zip(ys.into_iter().map(|y| y - min + floor)).collect();
    let monotonicity = if first_slope >= 0.0 {
        Monotonicity::Increasing
    } else if last_slope <= 0.0 {
        Monotonicity::Decreasing
    } else {
        Monotonicity::None
    };
    (Expr::PiecewiseLinear { knots }, monotonicity)
}

/// Nonnegative unimodal piecewise-linear function with a single minimum knot.
fn unimodal_piecewise(rng: &mut ChaCha8Rng, shape: &GeneratorShape) -> (Expr, Monotonicity) {
    let xs = knot_positions(rng, shape);
    let n = xs.len();
    let argmin = rng.gen_range(0..n);
    let mut ys = vec![0.0; n];
    ys[argmin] = rng.gen_range(0.0..0.5) * shape.value_scale;
    for i in (0..argmin).rev() {
        ys[i] = ys[i + 1] + rng.gen_range(0.1..1.0) * shape.value_scale;
    }
    for i in argmin + 1..n {
        ys[i] = ys[i - 1] + rng.gen_range(0.1..1.0) * shape.value_scale;
    }
    let monotonicity = if argmin == 0 {
        Monotonicity::Increasing
    } else if argmin == n - 1 {
        Monotonicity::Decreasing
    } else {
        Monotonicity::None
    };
    (
        Expr::PiecewiseLinear {
            knots: xs.into_iter().zip(ys).collect(),
        },
        monotonicity,
    )
}

fn candidate(rng: &mut ChaCha8Rng, class: &ConvexityClass, shape: &GeneratorShape) -> (Expr, Monotonicity) {
    match class {
        ConvexityClass::Convex => convex_piecewise(rng, shape),
        ConvexityClass::QuasiConvex => unimodal_piecewise(rng, shape),
        ConvexityClass::PFunction | ConvexityClass::QClass => {
            // Nonnegative convex and sums of nonnegative quasi-convex pieces are P, and P ⊂ Q.
            if rng.gen_bool(0.5) {
                convex_piecewise(rng, shape)
            } else {
                let (first, _) = unimodal_piecewise(rng, shape);
                let (second, _) = unimodal_piecewise(rng, shape);
                (
                    Expr::Sum {
                        terms: vec![first, second],
                    },
                    Monotonicity::None,
                )
            }
        }
        ConvexityClass::SConvex { s } => {
            // c1 x^s + c2 x^s2 (s <= s2 <= 1) + d, optionally plus a nonnegative convex piece.
            let hi = shape.domain.hi;
            let scale = shape.value_scale;
            let s2 = rng.gen_range(*s..=1.0);
            let mut terms = vec![
                Expr::Power {
                    coeff: rng.gen_range(0.2..1.0) * scale / hi.powf(*s),
                    exponent: *s,
                },
                Expr::Power {
                    coeff: rng.gen_range(0.0..1.0) * scale / hi.powf(s2),
                    exponent: s2,
                },
                Expr::Const {
                    value: rng.gen_range(0.0..0.5) * scale,
                },
            ];
            if rng.gen_bool(0.5) {
                terms.push(convex_piecewise(rng, shape).0);
                (Expr::Sum { terms }, Monotonicity::None)
            } else {
                (Expr::Sum { terms }, Monotonicity::Increasing)
            }
        }
    }
}

/// Generate a member of `class` and the certification that accepted it.
pub fn generate_certified(
    class: &ConvexityClass,
    seed: u64,
    shape: &GeneratorShape,
    grid: &GridSpec,
    tol: f64,
) -> Result<(FunctionSpec, CertificationResult), CatalogError> {
    shape.validate()?;
    if let ConvexityClass::SConvex { s } = class {
        ConvexityClass::s_convex(*s)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_ATTEMPTS {
        let (expr, monotonicity) = candidate(&mut rng, class, shape);
        let suffix = if attempt == 0 { String::new() } else { format!("-r{attempt}") };
        let spec = FunctionSpec {
            id: format!("gen-{}-{seed}{suffix}", class.kind_name()),
            expr,
            domain: shape.domain,
            declared_classes: vec![*class],
            symmetric_about_midpoint: None,
            monotonicity,
        };
        let cert = certify(&spec, class, grid, tol)?;
        if cert.is_certified() {
            return Ok((spec, cert));
        }
    }
    Err(CatalogError::GenerationFailed {
        class: class.to_string(),
        attempts: MAX_ATTEMPTS,
    })
}

/// Generate a certified member of `class`, deterministically from `seed`.
pub fn generate(
    class: &ConvexityClass,
    seed: u64,
    shape: &GeneratorShape,
) -> Result<FunctionSpec, CatalogError> {
    generate_certified(class, seed, shape, &GridSpec::default(), DEFAULT_CERTIFICATION_TOL)
        .map(|(spec, _)| spec)
}
