use proptest::prelude::*;

use quadmap::analyze::{preimage, Preimage};
use quadmap::cli::MapSpec;
use quadmap::critical::det_jacobian_conic;
use quadmap::normalize::{classify_exact, classify_with, ClassifySettings};
use quadmap::sampling::{quadratic_to_rational, to_rational};
use quadmap::scalar::{format_rational, parse_rational};
use quadmap::{compose, AffineMap2, ClassLabel, QuadraticMap, Rational, Tolerance};

/// Multiples of 1/64 in [-2, 2].
fn grid() -> impl Strategy<Value = f64> {
    (-128i32..=128).prop_map(|v| v as f64 / 64.0)
}

fn affine(max_cond: f64) -> impl Strategy<Value = AffineMap2> {
    proptest::array::uniform6(grid())
        .prop_map(AffineMap2::from_array)
        .prop_filter("well conditioned", move |a| a.det().abs() > 1e-3 && a.condition_number() <= max_cond)
}

fn label() -> impl Strategy<Value = ClassLabel> {
    (0..18usize).prop_map(|i| ClassLabel::ALL[i])
}

fn quadratic() -> impl Strategy<Value = QuadraticMap> {
    proptest::array::uniform12(grid())
        .prop_map(QuadraticMap::new)
        .prop_filter("has quadratic terms", |q| q.quadratic_scale() > 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn label_is_invariant_under_conjugation(l in label(), h in affine(20.0), k in affine(20.0)) {
        let q = compose(&k, &l.normal_form(), &h).unwrap();
        let r = classify_with(&q, ClassifySettings::default()).unwrap();
        prop_assert_eq!(r.label, l);
        prop_assert!(r.residual <= 1e-6 * q.scale().max(1.0));
    }

    #[test]
    fn exact_label_is_invariant_under_conjugation(l in label(), h in affine(100.0), k in affine(100.0)) {
        let n = quadratic_to_rational(&l.normal_form());
        let q = compose(&to_rational(&k), &n, &to_rational(&h)).unwrap();
        prop_assert_eq!(classify_exact(&q).unwrap().label, l);
    }

    #[test]
    fn jacobian_determinant_transforms_by_the_affine_determinants(
        q in quadratic(), h in affine(100.0), k in affine(100.0), p in proptest::array::uniform2(grid()),
    ) {
        // det D(k∘Q∘h⁻¹)(p) = det k · det DQ(h⁻¹ p) / det h
        let (q, h, k) = (quadratic_to_rational(&q), to_rational(&h), to_rational(&k));
        let conj = compose(&k, &q, &h).unwrap();
        let p = [Rational::from_float(p[0]).unwrap(), Rational::from_float(p[1]).unwrap()];
        let hp = h.inverse(Tolerance::default()).unwrap().apply(&p);
        let lhs = det_jacobian_conic(&conj).evaluate(&p);
        let rhs = k.det() * det_jacobian_conic(&q).evaluate(&hp) / h.det();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn preimages_map_to_the_target(q in quadratic(), t in proptest::array::uniform2(grid())) {
        if let Preimage::Points(points) = preimage(&q, t, Tolerance::default()) {
            prop_assert!(points.len() <= 4);
            for p in &points {
                let v = q.evaluate(p);
                let size = 1.0 + q.scale() * (1.0 + p[0].abs() + p[1].abs()).powi(2);
                prop_assert!((v[0] - t[0]).hypot(v[1] - t[1]) <= 1e-8 * size, "{:?} -> {:?}", p, v);
            }
        }
    }

    #[test]
    fn rationals_round_trip_through_text(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = Rational::new(n.into(), d.into());
        prop_assert_eq!(parse_rational(&format_rational(&r)), Some(r));
    }

    #[test]
    fn map_specs_round_trip(c in proptest::array::uniform12(-1e6f64..1e6)) {
        let spec = MapSpec::from_f64s(c);
        let back = MapSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(back.to_map().unwrap().to_array(), c);
    }
}
