use super::*;
use crate::algebra::AffineMap2;
use crate::sampling::{random_affine, to_rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn qm(c: [f64; 12]) -> QuadraticMap {
    QuadraticMap::new(c)
}

#[test]
fn normal_forms_are_fixed_points() {
    for l in ClassLabel::ALL {
        let r = classify(&l.normal_form()).unwrap();
        assert_eq!(r.label, l);
        assert_eq!(r.residual, 0.0, "{l}");
        assert_eq!(r.witness.h.m11, 1.0, "{l}");
        let lin = |a: &AffineMap2| [a.m11, a.m12, a.m21, a.m22];
        assert_eq!(lin(&r.witness.h), [1.0, 0.0, 0.0, 1.0], "{l}");
        assert_eq!(lin(&r.witness.k), [1.0, 0.0, 0.0, 1.0], "{l}");
    }
}

#[test]
fn worked_examples() {
    let deltoid = qm([1., 0., -1., 2., 0., 0., 0., 2., 0., 0., -2., 0.]);
    assert_eq!(classify(&deltoid).unwrap().label, ClassLabel::E1);
    let h2 = qm([1., 0., 1., 1., 0., 0., 0., 1., 0., -0.5, 0., 0.]);
    assert_eq!(classify(&h2).unwrap().label, ClassLabel::H2);
    let h1 = qm([1., 0., 1., 1., 0., 0., 0., 1., 0., 2., 0., 0.]);
    assert_eq!(classify(&h1).unwrap().label, ClassLabel::H1);
}

#[test]
fn witness_sensitivity() {
    let q = qm([1., 0., -1., 1., 0., 0., 0., 1., 0., 1., 0., 0.]);
    let r = classify(&q).unwrap();
    assert!(r.residual <= 1e-7);
    let mut bad = r.witness.clone();
    bad.h.m11 += 1e-2;
    assert!(verify_witness(&q, ClassLabel::E1, &bad) > 1e-4);
    assert_eq!(verify_witness(&ClassLabel::E1.normal_form(), ClassLabel::E1, &WitnessPair::identity()), 0.0);
}

#[test]
fn not_quadratic_is_rejected() {
    let q = qm([0., 0., 0., 1., 0., 0., 0., 0., 0., 0., 1., 0.]);
    assert!(matches!(classify(&q), Err(Error::NotQuadratic)));
}

#[test]
fn conjugates_keep_their_label() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for l in ClassLabel::ALL {
        for _ in 0..20 {
            let h = random_affine(&mut rng, 100.0);
            let k = random_affine(&mut rng, 100.0);
            let q = compose(&k, &l.normal_form(), &h).unwrap();
            let r = classify(&q).unwrap_or_else(|e| panic!("{l}: {e}"));
            assert_eq!(r.label, l);
            assert!(r.residual <= 1e-6 * q.scale().max(1.0));
        }
    }
}

#[test]
fn exact_mode_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for l in ClassLabel::ALL {
        let h = to_rational(&random_affine(&mut rng, 10.0));
        let k = to_rational(&random_affine(&mut rng, 10.0));
        let n = l.normal_form().map_scalars(|v| Rational::from_float(*v).unwrap());
        let q = compose(&k, &n, &h).unwrap();
        assert_eq!(classify_exact(&q).unwrap().label, l);
    }
}

#[test]
fn trace_names_steps() {
    let q = qm([1., 0., 1., 3., 1., 0., 0., 1., 0., 0.2, 2., 5.]);
    let r = classify(&q).unwrap();
    assert_eq!(r.label, ClassLabel::H1);
    assert!(r.trace.iter().any(|s| s.step.contains("long case")));
}
