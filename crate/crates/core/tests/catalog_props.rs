use ineq_core::function_catalog::{
    builtin_catalog_on, certify, defining_violation, generate, generate_certified, ConvexityClass,
    GeneratorShape, GridSpec, Interval, ViolationKind, DEFAULT_CERTIFICATION_TOL,
};

const CLASSES: [ConvexityClass; 5] = [
    ConvexityClass::SConvex { s: 0.5 },
    ConvexityClass::Convex,
    ConvexityClass::QuasiConvex,
    ConvexityClass::PFunction,
    ConvexityClass::QClass,
];

fn coarse() -> GridSpec {
    GridSpec {
        x_nodes: 41,
        y_nodes: 41,
        lambda_nodes: 39,
    }
}

#[test]
fn declared_classes_are_certified() {
    for (a, b) in [(0.0, 1.0), (1.0, 3.0), (0.5, 2.5)] {
        for f in builtin_catalog_on(a, b).unwrap() {
            for class in &f.declared_classes {
                let r = certify(&f, class, &GridSpec::default(), DEFAULT_CERTIFICATION_TOL).unwrap();
                assert!(r.is_certified(), "{} on [{a},{b}] as {class}: {:?}", f.id, r.witness);
            }
        }
    }
}

#[test]
fn certified_convex_nonnegative_is_p_and_p_is_q() {
    let mut specs = builtin_catalog_on(0.0, 1.0).unwrap();
    for seed in 0..20 {
        specs.push(generate(&ConvexityClass::Convex, seed, &GeneratorShape::default()).unwrap());
        specs.push(generate(&ConvexityClass::PFunction, seed, &GeneratorShape::default()).unwrap());
    }
    let tol = DEFAULT_CERTIFICATION_TOL;
    for f in &specs {
        let convex = certify(f, &ConvexityClass::Convex, &coarse(), tol).unwrap();
        let p = certify(f, &ConvexityClass::PFunction, &coarse(), tol).unwrap();
        let q = certify(f, &ConvexityClass::QClass, &coarse(), tol).unwrap();
        let nonnegative = f.domain.nodes(41).iter().all(|&x| f.eval(x) >= 0.0);
        if convex.is_certified() && nonnegative {
            assert!(p.is_certified(), "{}", f.id);
        }
        if p.is_certified() {
            assert!(q.is_certified(), "{}", f.id);
        }
    }
}

#[test]
fn generators_are_sound_over_100_seeds() {
    let shape = GeneratorShape::on(Interval::new(0.5, 2.0).unwrap());
    for class in CLASSES {
        for seed in 0..100 {
            let f = generate(&class, seed, &shape).unwrap();
            let r = certify(&f, &class, &GridSpec::default(), DEFAULT_CERTIFICATION_TOL).unwrap();
            assert!(r.is_certified(), "{class} seed {seed}");
        }
    }
}

#[test]
fn generation_is_seed_deterministic() {
    for class in CLASSES {
        let (f1, c1) = generate_certified(&class, 99, &GeneratorShape::default(), &coarse(), 1e-9).unwrap();
        let (f2, c2) = generate_certified(&class, 99, &GeneratorShape::default(), &coarse(), 1e-9).unwrap();
        assert_eq!(f1, f2);
        assert_eq!(c1, c2);
    }
}

#[test]
fn symmetry_flags_are_sound() {
    for (a, b) in [(0.0, 1.0), (1.0, 3.0), (0.5, 2.5)] {
        for f in builtin_catalog_on(a, b).unwrap() {
            if f.symmetric_about_midpoint != Some(true) {
                continue;
            }
            for x in f.domain.nodes(1001) {
                assert!((f.eval(x) - f.eval(a + b - x)).abs() <= 1e-12, "{} at {x}", f.id);
            }
        }
    }
}

#[test]
fn refutation_witnesses_reproduce() {
    for (a, b) in [(0.0, 1.0), (0.5, 2.5)] {
        for f in builtin_catalog_on(a, b).unwrap() {
            for class in CLASSES {
                let r = certify(&f, &class, &coarse(), DEFAULT_CERTIFICATION_TOL).unwrap();
                if let Some(w) = r.witness {
                    let again = match w.kind {
                        ViolationKind::Inequality => {
                            defining_violation(|x| f.eval(x), &class, w.x, w.y, w.lambda)
                        }
                        ViolationKind::Negativity => -f.eval(w.x),
                    };
                    assert!(again > DEFAULT_CERTIFICATION_TOL, "{} {class}", f.id);
                    assert_eq!(again, w.violation);
                }
            }
        }
    }
}
