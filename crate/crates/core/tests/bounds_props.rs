use ineq_core::bounds::{
    bound_convex, bound_p_class, bound_q_class, bound_quasi_convex, bound_s_convex, BoundValue,
    BoundsError, EndpointData,
};
use ineq_core::special_fn::beta_of;
use proptest::prelude::*;

fn rel_close(actual: f64, expected: f64, rel: f64) -> bool {
    (actual - expected).abs() <= rel * expected.abs().max(f64::MIN_POSITIVE)
}

type Bound = fn(&EndpointData, f64, f64) -> Result<BoundValue, BoundsError>;

fn s_half(e: &EndpointData, p: f64, q: f64) -> Result<BoundValue, BoundsError> {
    bound_s_convex(e, p, q, 0.5)
}

/// Every bound with a fixed `s`; exponents are shifted above 1 by the caller for Q(I).
const BOUNDS: [(&str, Bound); 5] = [
    ("s-convex", s_half),
    ("convex", bound_convex),
    ("quasi", bound_quasi_convex),
    ("p", bound_p_class),
    ("q", bound_q_class),
];

fn endpoints() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.0f64..5.0, 0.0f64..5.0, 0.0f64..3.0, 0.1f64..3.0).prop_map(|(fa, fb, a, w)| (fa, fb, a, a + w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn quadratic_scaling((fa, fb, a, b) in endpoints(), p in 1.05f64..5.0, q in 1.05f64..5.0, c in 0.01f64..10.0) {
        let e = EndpointData::new(fa, fb, a, b).unwrap();
        let scaled = EndpointData::new(c * fa, c * fb, a, b).unwrap();
        for (name, bound) in BOUNDS {
            let v = bound(&e, p, q).unwrap().value;
            let w = bound(&scaled, p, q).unwrap().value;
            prop_assert!(rel_close(w, c * c * v, 1e-13), "{}: {} vs {}", name, w, c * c * v);
        }
    }

    #[test]
    fn swap_symmetry((fa, fb, a, b) in endpoints(), p in 1.05f64..5.0, q in 1.05f64..5.0, s in 0.05f64..=1.0) {
        let e = EndpointData::new(fa, fb, a, b).unwrap();
        let swapped = EndpointData::new(fb, fa, a, b).unwrap();
        let pairs = [
            (bound_s_convex(&e, p, q, s).unwrap().value, bound_s_convex(&swapped, q, p, s).unwrap().value),
            (bound_quasi_convex(&e, p, q).unwrap().value, bound_quasi_convex(&swapped, q, p).unwrap().value),
            (bound_p_class(&e, p, q).unwrap().value, bound_p_class(&swapped, q, p).unwrap().value),
            (bound_q_class(&e, p, q).unwrap().value, bound_q_class(&swapped, q, p).unwrap().value),
        ];
        for (v, w) in pairs {
            prop_assert!(rel_close(w, v, 1e-13), "{} vs {}", w, v);
        }
    }

    #[test]
    fn quasi_below_p((fa, fb, a, b) in endpoints(), p in 0.05f64..5.0, q in 0.05f64..5.0) {
        let e = EndpointData::new(fa, fb, a, b).unwrap();
        prop_assert!(bound_quasi_convex(&e, p, q).unwrap().value <= bound_p_class(&e, p, q).unwrap().value);
    }

    #[test]
    fn nonnegative((fa, fb, a, b) in endpoints(), p in 1.05f64..5.0, q in 1.05f64..5.0) {
        let e = EndpointData::new(fa, fb, a, b).unwrap();
        for (_, bound) in BOUNDS {
            prop_assert!(bound(&e, p, q).unwrap().value >= 0.0);
        }
    }

    #[test]
    fn equal_exponents_double_the_first_bracket(p in 0.05f64..5.0, s in 0.05f64..=1.0) {
        let e = EndpointData::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let b = bound_s_convex(&e, p, p, s).unwrap();
        // fa=1, fb=0, b-a=1: value = (1/2)·first bracket
        let doubled = 2.0 * beta_of(p + 1.0, 2.0 * s + p + 1.0).unwrap();
        prop_assert!(rel_close(2.0 * b.value, doubled, 1e-13));
        prop_assert_eq!(b.beta_terms[0].beta, b.beta_terms[1].beta);
    }

    #[test]
    fn convex_equal_exponents((fa, fb, a, b) in endpoints(), p in 0.05f64..5.0) {
        let e = EndpointData::new(fa, fb, a, b).unwrap();
        let v = bound_convex(&e, p, p).unwrap().value;
        let closed = (b - a).powf(2.0 * p + 1.0)
            * ((fa * fa + fb * fb) * beta_of(p + 1.0, p + 3.0).unwrap()
                + 2.0 * fa * fb * beta_of(p + 2.0, p + 2.0).unwrap());
        prop_assert!(rel_close(v, closed, 1e-13), "{} vs {}", v, closed);
    }

    #[test]
    fn q_class_equal_endpoints(fa in 0.0f64..5.0, a in 0.0f64..3.0, w in 0.1f64..3.0, p in 1.05f64..5.0, q in 1.05f64..5.0) {
        let b = a + w;
        let e = EndpointData::new(fa, fa, a, b).unwrap();
        let v = bound_q_class(&e, p, q).unwrap().value;
        let closed = (b - a).powf(p + q + 1.0)
            * fa
            * fa
            * (beta_of(p + 1.0, q - 1.0).unwrap() + 2.0 * beta_of(p, q).unwrap() + beta_of(p - 1.0, q + 1.0).unwrap());
        prop_assert!(rel_close(v, closed, 1e-13), "{} vs {}", v, closed);
    }
}
