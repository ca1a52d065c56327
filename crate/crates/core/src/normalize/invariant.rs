//! Class label from affine invariants alone (no witnesses). Runs in either
//! arithmetic; with rationals every zero test is exact.

use std::cmp::Ordering;

use crate::algebra::{Point, QuadraticMap};
use crate::critical::{conic_kind, det_jacobian_conic, ConicKind};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};

use super::label::{ClassLabel, Family};

fn divide_all<S: Scalar>(q: &QuadraticMap<S>, s: &S) -> QuadraticMap<S> {
    q.map_scalars(|c| c.clone() / s.clone())
}

/// Family of the homogeneous part.
pub fn family_of<S: Scalar>(q: &QuadraticMap<S>, tol: Tolerance) -> Result<Family> {
    let hs = q.quadratic_scale();
    if hs.is_zero() || hs.is_negligible(&q.scale(), tol) {
        return Err(Error::NotQuadratic);
    }
    let h = divide_all(&q.homogeneous_part().as_map(), &hs);
    let c = det_jacobian_conic(&h);
    let one = S::one();
    let four = S::from_i64(4);
    let quad = S::max_abs([&c.a, &c.b, &c.c]);
    if !quad.is_negligible(&one, tol) {
        let disc = c.b.clone() * c.b.clone() - four.clone() * c.a.clone() * c.c.clone();
        let mag = c.b.clone() * c.b.clone() + four * (c.a.clone() * c.c.clone()).abs();
        return Ok(match disc.sign(&mag, tol) {
            Ordering::Less => Family::Elliptic,
            Ordering::Greater => Family::Hyperbolic,
            Ordering::Equal => Family::Parabolic,
        });
    }
    // both components are multiples of one quadratic form
    let fa = S::max_abs([&h.a20, &h.a11, &h.a02]);
    let fb = S::max_abs([&h.b20, &h.b11, &h.b02]);
    let (a20, a11, a02) = if fa >= fb { (&h.a20, &h.a11, &h.a02) } else { (&h.b20, &h.b11, &h.b02) };
    let prod = four.clone() * a20.clone() * a02.clone();
    let disc = a11.clone() * a11.clone() - prod.clone();
    let mag = a11.clone() * a11.clone() + prod.abs();
    Ok(match disc.sign(&mag, tol) {
        Ordering::Greater => Family::DegenerateElliptic,
        Ordering::Less => Family::DegenerateHyperbolic,
        Ordering::Equal => Family::DegenerateParabolic,
    })
}

/// `max |DQ(p)|` compared against the map scale at `p`.
fn jacobian_vanishes<S: Scalar>(q: &QuadraticMap<S>, p: &Point<S>, tol: Tolerance) -> bool {
    let j = q.jacobian(p);
    let m = S::max_abs([&j[0][0], &j[0][1], &j[1][0], &j[1][1]]);
    let size = S::one() + S::max_abs([&p[0], &p[1]]);
    m.is_negligible(&size, tol)
}

/// True when `Q` is constant along the line `Dx + Ey + F = 0`.
fn constant_on_line<S: Scalar>(q: &QuadraticMap<S>, d: &S, e: &S, f: &S, tol: Tolerance) -> bool {
    let zero = S::zero();
    let p0: Point<S> = if d.abs() >= e.abs() {
        [-f.clone() / d.clone(), zero.clone()]
    } else {
        [zero.clone(), -f.clone() / e.clone()]
    };
    let n = S::max_abs([d, e]);
    let dir: Point<S> = [-e.clone() / n.clone(), d.clone() / n];
    let j = q.jacobian(&p0);
    let c1 = [
        j[0][0].clone() * dir[0].clone() + j[0][1].clone() * dir[1].clone(),
        j[1][0].clone() * dir[0].clone() + j[1][1].clone() * dir[1].clone(),
    ];
    let sq = |a: &S, b: &S, c: &S| {
        a.clone() * dir[0].clone() * dir[0].clone()
            + b.clone() * dir[0].clone() * dir[1].clone()
            + c.clone() * dir[1].clone() * dir[1].clone()
    };
    let c2 = [sq(&q.a20, &q.a11, &q.a02), sq(&q.b20, &q.b11, &q.b02)];
    let one = S::one();
    let size = one.clone() + S::max_abs([&p0[0], &p0[1]]);
    S::max_abs([&c2[0], &c2[1]]).is_negligible(&one, tol)
        && S::max_abs([&c1[0], &c1[1]]).is_negligible(&size, tol)
}

/// Non-constant coefficients `[x², xy, y², x, y]` of each component.
fn nonconstant<S: Scalar>(q: &QuadraticMap<S>) -> ([S; 5], [S; 5]) {
    let f = q.first();
    let g = q.second();
    (
        std::array::from_fn(|i| f[i].clone()),
        std::array::from_fn(|i| g[i].clone()),
    )
}

/// Label of a map whose Jacobian is singular everywhere and whose
/// quadratic part is a multiple of a square.
fn degenerate_parabolic_plane<S: Scalar>(q: &QuadraticMap<S>, tol: Tolerance) -> ClassLabel {
    let (f, g) = nonconstant(q);
    let mf = S::max_abs(f.iter());
    let mg = S::max_abs(g.iter());
    let mag = mf.clone() * mg.clone();
    let mut rank_two = false;
    for i in 0..5 {
        for j in (i + 1)..5 {
            let minor = f[i].clone() * g[j].clone() - f[j].clone() * g[i].clone();
            if !minor.is_negligible(&mag, tol) {
                rank_two = true;
            }
        }
    }
    if rank_two {
        return ClassLabel::DP4;
    }
    let big = if mf >= mg { f } else { g };
    // the quadratic part of `big` is α ℓ²
    let l: Point<S> = if big[0].abs() >= big[2].abs() {
        [big[0].clone(), big[1].clone() / S::from_i64(2)]
    } else {
        [big[1].clone() / S::from_i64(2), big[2].clone()]
    };
    let m = [big[3].clone(), big[4].clone()];
    let cross = l[0].clone() * m[1].clone() - l[1].clone() * m[0].clone();
    let size = S::max_abs(l.iter()) * S::max_abs(big.iter());
    if cross.is_negligible(&size, tol) {
        ClassLabel::DP5
    } else {
        ClassLabel::DP3
    }
}

/// The class label, decided from the homogeneous family and the geometry of
/// the critical set. Scale-free: the map is normalized by its largest
/// coefficient first.
pub fn invariant_label<S: Scalar>(q: &QuadraticMap<S>, tol: Tolerance) -> Result<ClassLabel> {
    let family = family_of(q, tol)?;
    let q = divide_all(q, &q.scale());
    let c = det_jacobian_conic(&q);
    let kind = conic_kind(&c, &S::one(), tol);
    use ClassLabel::*;
    Ok(match family {
        Family::Elliptic => {
            if kind == ConicKind::Ellipse {
                E1
            } else {
                E2
            }
        }
        Family::Hyperbolic => match kind {
            ConicKind::Hyperbola => H1,
            ConicKind::IntersectingLines => {
                let two = S::from_i64(2);
                let disc = c.b.clone() * c.b.clone() - S::from_i64(4) * c.a.clone() * c.c.clone();
                let cx = (two.clone() * c.c.clone() * c.d.clone() - c.b.clone() * c.e.clone())
                    / disc.clone();
                let cy = (two * c.a.clone() * c.e.clone() - c.b.clone() * c.d.clone()) / disc;
                if jacobian_vanishes(&q, &[cx, cy], tol) {
                    H3
                } else {
                    H2
                }
            }
            _ => H1,
        },
        Family::Parabolic => match kind {
            ConicKind::Parabola => P1,
            ConicKind::ParallelLines => P2,
            _ => P3,
        },
        Family::DegenerateElliptic => match kind {
            ConicKind::AllPlane => DE3,
            ConicKind::SingleLine if constant_on_line(&q, &c.d, &c.e, &c.f, tol) => DE2,
            _ => DE1,
        },
        Family::DegenerateHyperbolic => match kind {
            ConicKind::AllPlane => DH2,
            _ => DH1,
        },
        Family::DegenerateParabolic => match kind {
            ConicKind::Empty => DP1,
            ConicKind::SingleLine => DP2,
            _ => degenerate_parabolic_plane(&q, tol),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn normal_forms_label_themselves() {
        for l in ClassLabel::ALL {
            assert_eq!(invariant_label(&l.normal_form(), Tolerance::default()).unwrap(), l);
            let exact = l.normal_form().map_scalars(|v| Rational::from_f64(*v).unwrap());
            assert_eq!(invariant_label(&exact, Tolerance::default()).unwrap(), l);
        }
    }

    #[test]
    fn rejects_affine_maps() {
        let q = QuadraticMap::new([0., 0., 0., 1., 2., 3., 0., 0., 0., 4., 5., 6.]);
        assert!(matches!(invariant_label(&q, Tolerance::default()), Err(Error::NotQuadratic)));
    }

    #[test]
    fn deltoid_map_is_e1() {
        let q = QuadraticMap::new([1., 0., -1., 2., 0., 0., 0., 2., 0., 0., -2., 0.]);
        assert_eq!(invariant_label(&q, Tolerance::default()).unwrap(), ClassLabel::E1);
    }

    #[test]
    fn sign_flipped_h2_is_h2() {
        let q = QuadraticMap::new([1., 0., 1., 1., 0., 0., 0., 1., 0., -0.5, 0., 0.]);
        assert_eq!(invariant_label(&q, Tolerance::default()).unwrap(), ClassLabel::H2);
    }

    #[test]
    fn henon_is_dp1() {
        let q = QuadraticMap::new([-1.4, 0., 0., 0., 1., 1., 0., 0., 0., 0.3, 0., 0.]);
        assert_eq!(invariant_label(&q, Tolerance::default()).unwrap(), ClassLabel::DP1);
    }

    #[test]
    fn shifted_square_is_dp5() {
        let q = QuadraticMap::new([1., 0., 0., 1., 0., 0., 2., 0., 0., 2., 0., 0.]);
        assert_eq!(invariant_label(&q, Tolerance::default()).unwrap(), ClassLabel::DP5);
    }
}
