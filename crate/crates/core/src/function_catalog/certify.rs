use serde::{Deserialize, Serialize};

use super::{CatalogError, ConvexityClass, FunctionSpec};

/// Absolute slack allowed on a defining inequality before it counts as violated.
pub const DEFAULT_CERTIFICATION_TOL: f64 = 1e-9;

/// Resolution of the certification grid.
///
/// `x` and `y` run over evenly spaced nodes of the domain (endpoints
/// included). The weights are `λ = k/(lambda_nodes+1)`: `k = 1..=lambda_nodes`
/// for definitions on the open interval, `k = 0..=lambda_nodes+1` for the
/// closed one, so the open grid is always a subset of the closed grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_nodes: usize,
    pub y_nodes: usize,
    pub lambda_nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_nodes: 101,
            y_nodes: 101,
            lambda_nodes: 99,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), CatalogError> {
        if self.x_nodes < 3 || self.y_nodes < 3 || self.lambda_nodes < 3 {
            return Err(CatalogError::InvalidGrid(format!(
                "need at least 3 nodes per axis, got {}",
                self.descriptor()
            )));
        }
        Ok(())
    }

    pub fn descriptor(&self) -> String {
        format!("{}x{}x{}", self.x_nodes, self.y_nodes, self.lambda_nodes)
    }

    pub fn lambdas(&self, open: bool) -> Vec<f64> {
        let denom = (self.lambda_nodes + 1) as f64;
        let range = if open {
            1..=self.lambda_nodes
        } else {
            0..=self.lambda_nodes + 1
        };
        range.map(|k| k as f64 / denom).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificationVerdict {
    Certified,
    Refuted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// The class's defining inequality fails at `(x, y, λ)`.
    Inequality,
    /// `f(x) < 0` where the class demands nonnegativity; `y = x`.
    Negativity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
    pub kind: ViolationKind,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationResult {
    pub class: ConvexityClass,
    pub grid: GridSpec,
    pub tolerance: f64,
    /// Largest signed `lhs - rhs` seen; `<= tolerance` when certified.
    pub max_violation: f64,
    pub witness: Option<Witness>,
    pub verdict: CertificationVerdict,
}

impl CertificationResult {
    pub fn is_certified(&self) -> bool {
        self.verdict == CertificationVerdict::Certified
    }
}

/// Signed violation `f(λx+(1-λ)y) - bound(x, y, λ)` of the defining inequality.
///
/// Positive means the inequality fails. Written independently of the grid
/// loop so witnesses can be re-checked.
pub fn defining_violation(
    f: impl Fn(f64) -> f64,
    class: &ConvexityClass,
    x: f64,
    y: f64,
    lambda: f64,
) -> f64 {
    let (fx, fy) = (f(x), f(y));
    let at_mix = f(lambda * x + (1.0 - lambda) * y);
    let bound = match class {
        ConvexityClass::SConvex { s } => lambda.powf(*s) * fx + (1.0 - lambda).powf(*s) * fy,
        ConvexityClass::Convex => lambda * fx + (1.0 - lambda) * fy,
        ConvexityClass::QuasiConvex => fx.max(fy),
        ConvexityClass::PFunction => fx + fy,
        ConvexityClass::QClass => fx / lambda + fy / (1.0 - lambda),
    };
    at_mix - bound
}

/// Check the defining inequality of `class` over every grid triple.
pub fn certify(
    f: &FunctionSpec,
    class: &ConvexityClass,
    grid: &GridSpec,
    tol: f64,
) -> Result<CertificationResult, CatalogError> {
    grid.validate()?;
    if let ConvexityClass::SConvex { s } = class {
        ConvexityClass::s_convex(*s)?;
    }
    let xs = f.domain.nodes(grid.x_nodes);
    let ys = f.domain.nodes(grid.y_nodes);
    let fx: Vec<f64> = xs.iter().map(|&x| f.eval_checked(x)).collect::<Result<_, _>>()?;
    let fy: Vec<f64> = ys.iter().map(|&y| f.eval_checked(y)).collect::<Result<_, _>>()?;
    let lambdas = grid.lambdas(class.open_lambda());

    // Per-λ coefficients (cx, cy) of the linear bounds cx f(x) + cy f(y).
    let coefficients: Vec<(f64, f64)> = lambdas
        .iter()
        .map(|&l| match class {
            ConvexityClass::SConvex { s } => (l.powf(*s), (1.0 - l).powf(*s)),
            ConvexityClass::Convex => (l, 1.0 - l),
            ConvexityClass::PFunction => (1.0, 1.0),
            ConvexityClass::QClass => (1.0 / l, 1.0 / (1.0 - l)),
            ConvexityClass::QuasiConvex => (f64::NAN, f64::NAN),
        })
        .collect();

    let mut max_violation = f64::NEG_INFINITY;
    let mut worst: Option<Witness> = None;
    let mut record = |max_violation: &mut f64, violation: f64, witness: Witness| {
        if violation > *max_violation {
            *max_violation = violation;
            worst = Some(witness);
        }
    };

    // A negative value refutes the class outright and takes precedence as witness.
    if class.requires_nonnegative() {
        for (points, values) in [(&xs, &fx), (&ys, &fy)] {
            for (&x, &v) in points.iter().zip(values.iter()) {
                record(
                    &mut max_violation,
                    -v,
                    Witness {
                        x,
                        y: x,
                        lambda: 0.5,
                        kind: ViolationKind::Negativity,
                        violation: -v,
                    },
                );
            }
        }
        if max_violation > tol {
            return Ok(CertificationResult {
                class: *class,
                grid: *grid,
                tolerance: tol,
                max_violation,
                witness: worst,
                verdict: CertificationVerdict::Refuted,
            });
        }
    }

    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            for (k, &lambda) in lambdas.iter().enumerate() {
                let z = lambda * x + (1.0 - lambda) * y;
                let at_mix = f.eval_checked(z)?;
                let bound = match class {
                    ConvexityClass::QuasiConvex => fx[i].max(fy[j]),
                    _ => {
                        let (cx, cy) = coefficients[k];
                        cx * fx[i] + cy * fy[j]
                    }
                };
                let violation = at_mix - bound;
                record(
                    &mut max_violation,
                    violation,
                    Witness {
                        x,
                        y,
                        lambda,
                        kind: ViolationKind::Inequality,
                        violation,
                    },
                );
            }
        }
    }

    let refuted = max_violation > tol;
    Ok(CertificationResult {
        class: *class,
        grid: *grid,
        tolerance: tol,
        max_violation,
        witness: if refuted { worst } else { None },
        verdict: if refuted {
            CertificationVerdict::Refuted
        } else {
            CertificationVerdict::Certified
        },
    })
}

/// First grid node (of `nodes` evenly spaced) where `f < -tol`, if any.
pub fn check_nonnegative(
    f: &FunctionSpec,
    nodes: usize,
    tol: f64,
) -> Result<Option<f64>, CatalogError> {
    for x in f.domain.nodes(nodes.max(2)) {
        if f.eval_checked(x)? < -tol {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
