use serde::{Deserialize, Serialize};

/// Closed set of function combinators the catalog and generators build from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Expr {
    Const { value: f64 },
    /// `Σ coeffs[i] x^i`
    Polynomial { coeffs: Vec<f64> },
    /// `coeff * x^exponent`, for `x >= 0`
    Power { coeff: f64, exponent: f64 },
    /// `coeff * e^(rate x)`
    Exp { coeff: f64, rate: f64 },
    /// `offset + slope * |x - center|`
    AbsAffine { offset: f64, slope: f64, center: f64 },
    /// Linear interpolation through `knots`, extended linearly past the ends.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    /// `sin(pi x)`
    SinPi,
    Sum { terms: Vec<Expr> },
    Scaled { factor: f64, inner: Box<Expr> },
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Const { value } => *value,
            Expr::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Expr::Power { coeff, exponent } => coeff * x.powf(*exponent),
            Expr::Exp { coeff, rate } => coeff * (rate * x).exp(),
            Expr::AbsAffine {
                offset,
                slope,
                center,
            } => offset + slope * (x - center).abs(),
            Expr::PiecewiseLinear { knots } => eval_piecewise_linear(knots, x),
            // Exact zeros at the integers, where sin(π x) would leave roundoff.
            Expr::SinPi if x.fract() == 0.0 => 0.0,
            Expr::SinPi => (std::f64::consts::PI * x).sin(),
            Expr::Sum { terms } => terms.iter().map(|t| t.eval(x)).sum(),
            Expr::Scaled { factor, inner } => factor * inner.eval(x),
        }
    }

    /// Points where the expression is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Expr::AbsAffine { center, .. } => vec![*center],
            Expr::PiecewiseLinear { knots } => knots.iter().map(|k| k.0).collect(),
            Expr::Sum { terms } => {
                let mut all: Vec<f64> = terms.iter().flat_map(Expr::breakpoints).collect();
                all.sort_by(f64::total_cmp);
                all.dedup();
                all
            }
            Expr::Scaled { inner, .. } => inner.breakpoints(),
            _ => Vec::new(),
        }
    }
}

fn eval_piecewise_linear(knots: &[(f64, f64)], x: f64) -> f64 {
    match knots.len() {
        0 => f64::NAN,
        1 => knots[0].1,
        n => {
            // Segment i spans knots[i]..knots[i+1]; clamp for extrapolation.
            let upper = knots.partition_point(|k| k.0 <= x);
            let i = upper.clamp(1, n - 1) - 1;
            let (x0, y0) = knots[i];
            let (x1, y1) = knots[i + 1];
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_linear_interpolates_and_extends() {
        let pl = Expr::PiecewiseLinear {
            knots: vec![(0.0, 1.0), (1.0, 0.0), (2.0, 2.0)],
        };
        assert_eq!(pl.eval(0.0), 1.0);
        assert_eq!(pl.eval(0.5), 0.5);
        assert_eq!(pl.eval(1.0), 0.0);
        assert_eq!(pl.eval(1.5), 1.0);
        assert_eq!(pl.eval(2.0), 2.0);
        assert_eq!(pl.eval(3.0), 4.0);
        assert_eq!(pl.eval(-1.0), 2.0);
    }

    #[test]
    fn sin_pi_vanishes_exactly_at_integers() {
        assert_eq!(Expr::SinPi.eval(1.0), 0.0);
        assert_eq!(Expr::SinPi.eval(3.0), 0.0);
        assert_eq!(Expr::SinPi.eval(0.5), 1.0);
    }

    #[test]
    fn polynomial_horner() {
        let p = Expr::Polynomial {
            coeffs: vec![1.0, -2.0, 3.0],
        };
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
    }

    #[test]
    fn sum_breakpoints_are_merged() {
        let e = Expr::Sum {
            terms: vec![
                Expr::AbsAffine {
                    offset: 0.0,
                    slope: 1.0,
                    center: 0.5,
                },
                Expr::PiecewiseLinear {
                    knots: vec![(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)],
                },
            ],
        };
        assert_eq!(e.breakpoints(), vec![0.0, 0.5, 1.0]);
    }
}
