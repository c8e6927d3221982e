use ineq_core::function_catalog::{builtin_catalog_on, generate, ClassKind, GeneratorShape};
use ineq_core::quadrature::{
    integrate_t_form, integrate_weighted, integrate_weighted_base, IntegralProblem, ToleranceSpec,
};
use ineq_core::special_fn::{beta_exact, ExactRational};
use proptest::prelude::*;

type Poly = Vec<ExactRational>;

fn poly_mul(x: &Poly, y: &Poly) -> Poly {
    let mut out = vec![ExactRational::zero(); x.len() + y.len() - 1];
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            out[i + j] = &out[i + j] + &(xi * yj);
        }
    }
    out
}

fn poly_add(x: &Poly, y: &Poly) -> Poly {
    let mut out = vec![ExactRational::zero(); x.len().max(y.len())];
    for (i, c) in x.iter().enumerate() {
        out[i] = &out[i] + c;
    }
    for (i, c) in y.iter().enumerate() {
        out[i] = &out[i] + c;
    }
    out
}

/// `f(c0 + c1 u)` as a polynomial in `u`.
fn compose_affine(f: &[i64], c0: &ExactRational, c1: &ExactRational) -> Poly {
    let inner = vec![c0.clone(), c1.clone()];
    f.iter().rev().fold(vec![ExactRational::zero()], |acc, &c| {
        poly_add(&poly_mul(&acc, &inner), &vec![ExactRational::from_integer(c)])
    })
}

/// Exact `∫_a^b (x-a)^p (b-x)^q f(x) f(a+b-x) dx` for integer-coefficient `f`
/// and `a = a2/2`, `b = b2/2`.
fn exact_weighted(f: &[i64], a2: i64, b2: i64, p: u64, q: u64) -> ExactRational {
    let a = ExactRational::from_ratio(a2, 2).unwrap();
    let b = ExactRational::from_ratio(b2, 2).unwrap();
    let width = &b - &a;
    // x = a + w u and a + b - x = b - w u
    let left = compose_affine(f, &a, &width);
    let right = compose_affine(f, &b, &(&ExactRational::zero() - &width));
    let product = poly_mul(&left, &right);
    let integral = product
        .iter()
        .enumerate()
        .fold(ExactRational::zero(), |acc, (k, c)| {
            &acc + &(c * &beta_exact(p + k as u64 + 1, q + 1).unwrap())
        });
    &integral * &width.pow((p + q + 1) as u32)
}

fn eval_poly(f: &[i64], x: f64) -> f64 {
    f.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn base_rule_is_exact_for_low_degree(
        coeffs in prop::collection::vec(0i64..6, 1..5),
        p in 1u64..8,
        q in 1u64..8,
        a2 in 0i64..5,
        w2 in 1i64..5,
    ) {
        let degree = coeffs.len() as u64 - 1;
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        prop_assume!(p + q + 2 * degree <= 30);
        let f = |x: f64| eval_poly(&coeffs, x);
        let (a, b) = (a2 as f64 / 2.0, (a2 + w2) as f64 / 2.0);
        let problem = IntegralProblem::new(a, b, p as f64, q as f64, &f).unwrap();
        let got = integrate_weighted_base(&problem).unwrap().value;
        let exact = exact_weighted(&coeffs, a2, a2 + w2, p, q).to_f64();
        prop_assert!((got - exact).abs() <= 1e-13 * exact.abs(), "{} vs {}", got, exact);
    }

    #[test]
    fn nonnegative_integrand_is_nonnegative(seed in 0u64..1000, p in 0.2f64..4.0, q in 0.2f64..4.0) {
        let f = generate(&ClassKind::QuasiConvex.with_s(None).unwrap(), seed, &GeneratorShape::default()).unwrap();
        let problem = IntegralProblem::new(0.0, 1.0, p, q, &f).unwrap();
        let r = integrate_weighted(&problem, &ToleranceSpec::default()).unwrap();
        prop_assert!(r.value >= -r.error_estimate);
    }

    #[test]
    fn translation_invariant(shift in -0.5f64..3.0, p in 0.3f64..4.0, q in 0.3f64..4.0, which in 0usize..64) {
        let (a, b) = (0.5, 1.75);
        let specs = builtin_catalog_on(a, b).unwrap();
        let spec = &specs[which % specs.len()];
        let base = IntegralProblem::new(a, b, p, q, spec).unwrap();
        let moved_fn = |x: f64| spec.eval(x - shift);
        let moved = IntegralProblem::new(a + shift, b + shift, p, q, &moved_fn).unwrap();
        let tol = ToleranceSpec::default();
        let r1 = integrate_weighted(&base, &tol).unwrap();
        let r2 = integrate_weighted(&moved, &tol).unwrap();
        prop_assert!(r1.converged && r2.converged);
        prop_assert!(
            (r1.value - r2.value).abs() <= r1.error_estimate + r2.error_estimate,
            "{} vs {} (errors {}, {})", r1.value, r2.value, r1.error_estimate, r2.error_estimate
        );
    }
}

#[test]
fn dual_routes_agree_on_catalog_grid() {
    let tol = ToleranceSpec::default();
    let exponents = [0.5, 1.0, 2.0, 3.5];
    for (a, b) in [(0.0, 1.0), (1.0, 3.0), (0.5, 2.5)] {
        for spec in builtin_catalog_on(a, b).unwrap() {
            for p in exponents {
                for q in exponents {
                    let problem = IntegralProblem::new(a, b, p, q, &spec).unwrap();
                    let l = integrate_weighted(&problem, &tol).unwrap();
                    let r = integrate_t_form(&problem, &tol).unwrap();
                    let allowed = l.error_estimate + r.error_estimate + 1e-12 * l.value.abs().max(1.0);
                    assert!(
                        (l.value - r.value).abs() <= allowed,
                        "{} on [{a},{b}] p={p} q={q}: {} vs {}",
                        spec.id,
                        l.value,
                        r.value
                    );
                }
            }
        }
    }
}
