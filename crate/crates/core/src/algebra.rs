//! Quadratic maps of the plane, affine changes of coordinates, and the
//! action `Q -> k ∘ Q ∘ h⁻¹`.
//!
//! Coefficients are stored by monomial in the order
//! `x², xy, y², x, y, 1`, first component (`a`) then second (`b`):
//! `a20 a11 a02 a10 a01 a00 b20 b11 b02 b10 b01 b00`.
//! The same order is used by every serialized form in this crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};

/// Coefficient names in storage order.
pub const COEFFICIENT_NAMES: [&str; 12] = [
    "a20", "a11", "a02", "a10", "a01", "a00", "b20", "b11", "b02", "b10", "b01", "b00",
];

/// A point of the plane.
pub type Point<S = f64> = [S; 2];

/// Row-major 2×2 matrix.
pub type Matrix2<S = f64> = [[S; 2]; 2];

/// Coefficients of one quadratic polynomial in `x, y`, ordered
/// `[x², xy, y², x, y, 1]`.
pub type Poly2<S = f64> = [S; 6];

/// `Q(x,y) = (a20 x² + a11 xy + a02 y² + a10 x + a01 y + a00, b20 x² + ... + b00)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticMap<S = f64> {
    pub a20: S,
    pub a11: S,
    pub a02: S,
    pub a10: S,
    pub a01: S,
    pub a00: S,
    pub b20: S,
    pub b11: S,
    pub b02: S,
    pub b10: S,
    pub b01: S,
    pub b00: S,
}

/// Invertible affine map `(x,y) -> (m11 x + m12 y + t1, m21 x + m22 y + t2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMap2<S = f64> {
    pub m11: S,
    pub m12: S,
    pub m21: S,
    pub m22: S,
    pub t1: S,
    pub t2: S,
}

/// Degree-two truncation `πQ` of a quadratic map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousPart<S = f64> {
    pub a20: S,
    pub a11: S,
    pub a02: S,
    pub b20: S,
    pub b11: S,
    pub b02: S,
}

impl<S: Scalar> QuadraticMap<S> {
    pub fn new(c: [S; 12]) -> Self {
        let [a20, a11, a02, a10, a01, a00, b20, b11, b02, b10, b01, b00] = c;
        Self { a20, a11, a02, a10, a01, a00, b20, b11, b02, b10, b01, b00 }
    }

    pub fn from_components(first: Poly2<S>, second: Poly2<S>) -> Self {
        let [a20, a11, a02, a10, a01, a00] = first;
        let [b20, b11, b02, b10, b01, b00] = second;
        Self { a20, a11, a02, a10, a01, a00, b20, b11, b02, b10, b01, b00 }
    }

    pub fn zero() -> Self {
        Self::new(std::array::from_fn(|_| S::zero()))
    }

    pub fn to_array(&self) -> [S; 12] {
        [
            self.a20.clone(),
            self.a11.clone(),
            self.a02.clone(),
            self.a10.clone(),
            self.a01.clone(),
            self.a00.clone(),
            self.b20.clone(),
            self.b11.clone(),
            self.b02.clone(),
            self.b10.clone(),
            self.b01.clone(),
            self.b00.clone(),
        ]
    }

    pub fn first(&self) -> Poly2<S> {
        [
            self.a20.clone(),
            self.a11.clone(),
            self.a02.clone(),
            self.a10.clone(),
            self.a01.clone(),
            self.a00.clone(),
        ]
    }

    pub fn second(&self) -> Poly2<S> {
        [
            self.b20.clone(),
            self.b11.clone(),
            self.b02.clone(),
            self.b10.clone(),
            self.b01.clone(),
            self.b00.clone(),
        ]
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> QuadraticMap<T> {
        let c = self.to_array();
        QuadraticMap::new(std::array::from_fn(|i| f(&c[i])))
    }

    pub fn to_f64(&self) -> QuadraticMap<f64> {
        self.map_scalars(|v| v.to_f64())
    }

    /// `max |coefficient|`.
    pub fn scale(&self) -> S {
        S::max_abs(self.to_array().iter())
    }

    pub fn quadratic_scale(&self) -> S {
        S::max_abs([&self.a20, &self.a11, &self.a02, &self.b20, &self.b11, &self.b02])
    }

    /// At least one degree-two coefficient survives the zero test.
    pub fn is_quadratic(&self, tol: Tolerance) -> bool {
        let q = self.quadratic_scale();
        !q.is_zero() && !q.is_negligible(&self.scale(), tol)
    }

    pub fn evaluate(&self, p: &Point<S>) -> Point<S> {
        [poly_eval(&self.first(), p), poly_eval(&self.second(), p)]
    }

    pub fn jacobian(&self, p: &Point<S>) -> Matrix2<S> {
        let [x, y] = p.clone();
        let two = S::from_i64(2);
        [
            [
                two.clone() * self.a20.clone() * x.clone()
                    + self.a11.clone() * y.clone()
                    + self.a10.clone(),
                self.a11.clone() * x.clone()
                    + two.clone() * self.a02.clone() * y.clone()
                    + self.a01.clone(),
            ],
            [
                two.clone() * self.b20.clone() * x.clone()
                    + self.b11.clone() * y.clone()
                    + self.b10.clone(),
                self.b11.clone() * x + two * self.b02.clone() * y + self.b01.clone(),
            ],
        ]
    }

    pub fn homogeneous_part(&self) -> HomogeneousPart<S> {
        HomogeneousPart {
            a20: self.a20.clone(),
            a11: self.a11.clone(),
            a02: self.a02.clone(),
            b20: self.b20.clone(),
            b11: self.b11.clone(),
            b02: self.b02.clone(),
        }
    }

    pub fn without_constants(&self) -> Self {
        let mut q = self.clone();
        q.a00 = S::zero();
        q.b00 = S::zero();
        q
    }

    /// `Q ∘ g`, by substituting `g` into both components.
    pub fn pullback(&self, g: &AffineMap2<S>) -> Self {
        Self::from_components(substitute(&self.first(), g), substitute(&self.second(), g))
    }

    /// `k ∘ Q`.
    pub fn pushforward(&self, k: &AffineMap2<S>) -> Self {
        let p = self.first();
        let q = self.second();
        let mut first: Poly2<S> =
            std::array::from_fn(|i| k.m11.clone() * p[i].clone() + k.m12.clone() * q[i].clone());
        let mut second: Poly2<S> =
            std::array::from_fn(|i| k.m21.clone() * p[i].clone() + k.m22.clone() * q[i].clone());
        first[5] = first[5].clone() + k.t1.clone();
        second[5] = second[5].clone() + k.t2.clone();
        Self::from_components(first, second)
    }

    /// Largest coefficient difference, ignoring the two constant terms.
    pub fn max_deviation_ignoring_constants(&self, other: &Self) -> S {
        let a = self.to_array();
        let b = other.to_array();
        (0..12)
            .filter(|&i| i != 5 && i != 11)
            .map(|i| (a[i].clone() - b[i].clone()).abs())
            .fold(S::zero(), |acc, d| if d > acc { d } else { acc })
    }
}

impl QuadraticMap<f64> {
    pub fn from_f64s(c: [f64; 12]) -> Self {
        Self::new(c)
    }

    pub fn det_jacobian_at(&self, p: &Point) -> f64 {
        let j = self.jacobian(p);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }
}

impl<S: Scalar> HomogeneousPart<S> {
    pub fn as_map(&self) -> QuadraticMap<S> {
        let z = S::zero;
        QuadraticMap::new([
            self.a20.clone(),
            self.a11.clone(),
            self.a02.clone(),
            z(),
            z(),
            z(),
            self.b20.clone(),
            self.b11.clone(),
            self.b02.clone(),
            z(),
            z(),
            z(),
        ])
    }

    pub fn scale(&self) -> S {
        S::max_abs([&self.a20, &self.a11, &self.a02, &self.b20, &self.b11, &self.b02])
    }
}

impl<S: Scalar> AffineMap2<S> {
    pub fn new(m11: S, m12: S, m21: S, m22: S, t1: S, t2: S) -> Self {
        Self { m11, m12, m21, m22, t1, t2 }
    }

    pub fn identity() -> Self {
        Self::linear(S::one(), S::zero(), S::zero(), S::one())
    }

    pub fn linear(m11: S, m12: S, m21: S, m22: S) -> Self {
        Self::new(m11, m12, m21, m22, S::zero(), S::zero())
    }

    pub fn translation(t1: S, t2: S) -> Self {
        Self::new(S::one(), S::zero(), S::zero(), S::one(), t1, t2)
    }

    pub fn scaling(sx: S, sy: S) -> Self {
        Self::linear(sx, S::zero(), S::zero(), sy)
    }

    /// `(x, y) -> (y, x)`.
    pub fn swap() -> Self {
        Self::linear(S::zero(), S::one(), S::one(), S::zero())
    }

    pub fn to_array(&self) -> [S; 6] {
        [
            self.m11.clone(),
            self.m12.clone(),
            self.m21.clone(),
            self.m22.clone(),
            self.t1.clone(),
            self.t2.clone(),
        ]
    }

    pub fn from_array(a: [S; 6]) -> Self {
        let [m11, m12, m21, m22, t1, t2] = a;
        Self { m11, m12, m21, m22, t1, t2 }
    }

    pub fn to_f64(&self) -> AffineMap2<f64> {
        let a = self.to_array();
        AffineMap2::from_array(std::array::from_fn(|i| a[i].to_f64()))
    }

    pub fn det(&self) -> S {
        self.m11.clone() * self.m22.clone() - self.m12.clone() * self.m21.clone()
    }

    pub fn linear_scale(&self) -> S {
        S::max_abs([&self.m11, &self.m12, &self.m21, &self.m22])
    }

    pub fn is_invertible(&self, tol: Tolerance) -> bool {
        let s = self.linear_scale();
        let det = self.det();
        !det.is_zero() && !det.is_negligible(&(s.clone() * s), tol)
    }

    pub fn apply(&self, p: &Point<S>) -> Point<S> {
        let [x, y] = p.clone();
        [
            self.m11.clone() * x.clone() + self.m12.clone() * y.clone() + self.t1.clone(),
            self.m21.clone() * x + self.m22.clone() * y + self.t2.clone(),
        ]
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Self) -> Self {
        let o = self;
        let i = inner;
        Self::new(
            o.m11.clone() * i.m11.clone() + o.m12.clone() * i.m21.clone(),
            o.m11.clone() * i.m12.clone() + o.m12.clone() * i.m22.clone(),
            o.m21.clone() * i.m11.clone() + o.m22.clone() * i.m21.clone(),
            o.m21.clone() * i.m12.clone() + o.m22.clone() * i.m22.clone(),
            o.m11.clone() * i.t1.clone() + o.m12.clone() * i.t2.clone() + o.t1.clone(),
            o.m21.clone() * i.t1.clone() + o.m22.clone() * i.t2.clone() + o.t2.clone(),
        )
    }

    pub fn inverse(&self, tol: Tolerance) -> Result<Self> {
        if !self.is_invertible(tol) {
            return Err(Error::SingularAffine { det: self.det().to_f64() });
        }
        let d = self.det();
        let m11 = self.m22.clone() / d.clone();
        let m12 = -self.m12.clone() / d.clone();
        let m21 = -self.m21.clone() / d.clone();
        let m22 = self.m11.clone() / d;
        let t1 = -(m11.clone() * self.t1.clone() + m12.clone() * self.t2.clone());
        let t2 = -(m21.clone() * self.t1.clone() + m22.clone() * self.t2.clone());
        Ok(Self::new(m11, m12, m21, m22, t1, t2))
    }
}

impl AffineMap2<f64> {
    /// Counter-clockwise rotation by `theta` about the origin.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::linear(c, -s, s, c)
    }

    /// Condition number of the linear part in the spectral norm.
    pub fn condition_number(&self) -> f64 {
        let (a, b, c, d) = (self.m11, self.m12, self.m21, self.m22);
        let frob2 = a * a + b * b + c * c + d * d;
        let det = (a * d - b * c).abs();
        let disc = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
        let s_max = ((frob2 + disc) / 2.0).sqrt();
        let s_min = ((frob2 - disc) / 2.0).max(0.0).sqrt();
        if s_min == 0.0 {
            f64::INFINITY
        } else {
            s_max / s_min
        }
    }
}

/// Evaluates a quadratic polynomial at `p`.
pub fn poly_eval<S: Scalar>(c: &Poly2<S>, p: &Point<S>) -> S {
    let [x, y] = p.clone();
    c[0].clone() * x.clone() * x.clone()
        + c[1].clone() * x.clone() * y.clone()
        + c[2].clone() * y.clone() * y.clone()
        + c[3].clone() * x
        + c[4].clone() * y
        + c[5].clone()
}

/// Coefficients of `P(g(x, y))` for affine `g`.
pub fn substitute<S: Scalar>(c: &Poly2<S>, g: &AffineMap2<S>) -> Poly2<S> {
    // x -> al X + be Y + ga,  y -> de X + ep Y + ze
    let (al, be, ga) = (g.m11.clone(), g.m12.clone(), g.t1.clone());
    let (de, ep, ze) = (g.m21.clone(), g.m22.clone(), g.t2.clone());
    let two = S::from_i64(2);
    let xx: Poly2<S> = [
        al.clone() * al.clone(),
        two.clone() * al.clone() * be.clone(),
        be.clone() * be.clone(),
        two.clone() * al.clone() * ga.clone(),
        two.clone() * be.clone() * ga.clone(),
        ga.clone() * ga.clone(),
    ];
    let xy: Poly2<S> = [
        al.clone() * de.clone(),
        al.clone() * ep.clone() + be.clone() * de.clone(),
        be.clone() * ep.clone(),
        al.clone() * ze.clone() + ga.clone() * de.clone(),
        be.clone() * ze.clone() + ga.clone() * ep.clone(),
        ga.clone() * ze.clone(),
    ];
    let yy: Poly2<S> = [
        de.clone() * de.clone(),
        two.clone() * de.clone() * ep.clone(),
        ep.clone() * ep.clone(),
        two.clone() * de.clone() * ze.clone(),
        two * ep.clone() * ze.clone(),
        ze.clone() * ze.clone(),
    ];
    let z = S::zero;
    let x: Poly2<S> = [z(), z(), z(), al, be, ga];
    let y: Poly2<S> = [z(), z(), z(), de, ep, ze];
    let mut out: Poly2<S> = std::array::from_fn(|_| S::zero());
    for (i, o) in out.iter_mut().enumerate() {
        *o = c[0].clone() * xx[i].clone()
            + c[1].clone() * xy[i].clone()
            + c[2].clone() * yy[i].clone()
            + c[3].clone() * x[i].clone()
            + c[4].clone() * y[i].clone();
    }
    out[5] = out[5].clone() + c[5].clone();
    out
}

/// Evaluates `Q` at `p`.
pub fn evaluate<S: Scalar>(q: &QuadraticMap<S>, p: &Point<S>) -> Point<S> {
    q.evaluate(p)
}

/// Jacobian matrix `DQ(p)`, rows are the gradients of the two components.
pub fn jacobian<S: Scalar>(q: &QuadraticMap<S>, p: &Point<S>) -> Matrix2<S> {
    q.jacobian(p)
}

/// `πQ`: the homogeneous degree-two terms.
pub fn homogeneous_part<S: Scalar>(q: &QuadraticMap<S>) -> HomogeneousPart<S> {
    q.homogeneous_part()
}

pub fn affine_invert<S: Scalar>(h: &AffineMap2<S>) -> Result<AffineMap2<S>> {
    h.inverse(Tolerance::default())
}

/// `k ∘ Q ∘ h⁻¹`, expanded coefficient-wise.
pub fn compose<S: Scalar>(
    k: &AffineMap2<S>,
    q: &QuadraticMap<S>,
    h: &AffineMap2<S>,
) -> Result<QuadraticMap<S>> {
    let tol = Tolerance::default();
    if !k.is_invertible(tol) {
        return Err(Error::SingularAffine { det: k.det().to_f64() });
    }
    let h_inv = h.inverse(tol)?;
    Ok(q.pullback(&h_inv).pushforward(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e1() -> QuadraticMap {
        QuadraticMap::new([1., 0., -1., 1., 0., 0., 0., 1., 0., 0., 0., 0.])
    }

    fn random_map(rng: &mut ChaCha8Rng) -> QuadraticMap {
        QuadraticMap::new(std::array::from_fn(|_| rng.random_range(-2.0..2.0)))
    }

    fn random_affine(rng: &mut ChaCha8Rng) -> AffineMap2 {
        loop {
            let h = AffineMap2::from_array(std::array::from_fn(|_| rng.random_range(-2.0..2.0)));
            if h.det().abs() > 0.2 {
                return h;
            }
        }
    }

    #[test]
    fn evaluates_hand_examples() {
        let e2 = QuadraticMap::new([1., 0., -1., 0., 0., 0., 0., 1., 0., 0., 0., 0.]);
        assert_eq!(e2.evaluate(&[0., 0.]), [0., 0.]);
        assert_eq!(e1().evaluate(&[1., 1.]), [1., 1.]);
        let dp1 = QuadraticMap::new([1., 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0.]);
        assert_eq!(dp1.evaluate(&[2., 3.]), [7., 2.]);
    }

    #[test]
    fn jacobian_hand_examples() {
        assert_eq!(e1().jacobian(&[0., 0.]), [[1., 0.], [0., 0.]]);
        let dp1 = QuadraticMap::new([1., 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0.]);
        for p in [[0., 0.], [3., -2.], [-1.5, 7.]] {
            assert_eq!(dp1.det_jacobian_at(&p), -1.0);
        }
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let step = 1e-6;
        for _ in 0..20 {
            let q = random_map(&mut rng);
            for _ in 0..100 {
                let p = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
                let j = q.jacobian(&p);
                for col in 0..2 {
                    let mut hi = p;
                    let mut lo = p;
                    hi[col] += step;
                    lo[col] -= step;
                    let (fh, fl) = (q.evaluate(&hi), q.evaluate(&lo));
                    for row in 0..2 {
                        let fd = (fh[row] - fl[row]) / (2.0 * step);
                        let rel = (fd - j[row][col]).abs() / (1.0 + j[row][col].abs());
                        assert!(rel <= 1e-6, "row {row} col {col}: {fd} vs {}", j[row][col]);
                    }
                }
            }
        }
    }

    #[test]
    fn compose_identity_is_noop() {
        let id = AffineMap2::identity();
        assert_eq!(compose(&id, &e1(), &id).unwrap(), e1());
    }

    #[test]
    fn compose_matches_pointwise_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e2 = QuadraticMap::new([1., 0., -1., 0., 0., 0., 0., 1., 0., 0., 0., 0.]);
        let rot = AffineMap2::rotation(0.7);
        let r = compose(&rot, &e2, &rot).unwrap();
        let rot_inv = rot.inverse(Tolerance::default()).unwrap();
        for _ in 0..100 {
            let p = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let direct = rot.apply(&e2.evaluate(&rot_inv.apply(&p)));
            let expanded = r.evaluate(&p);
            assert!((direct[0] - expanded[0]).abs() <= 1e-10);
            assert!((direct[1] - expanded[1]).abs() <= 1e-10);
        }
    }

    #[test]
    fn compose_reproduces_hyperbolic_sign_flip() {
        // (x²+y²+x, xy-x/2) -> (x²+y²+x, xy+x/2). The pair
        // h = (-y-1/2, x+1/2), k = (x,-y) satisfies Q∘h = k∘H2, so it enters
        // compose with h inverted; the reflection h = k = (x,-y) works directly.
        let q = QuadraticMap::new([1., 0., 1., 1., 0., 0., 0., 1., 0., -0.5, 0., 0.]);
        let h2 = QuadraticMap::new([1., 0., 1., 1., 0., 0., 0., 1., 0., 0.5, 0., 0.]);
        let h = AffineMap2::new(0., -1., 1., 0., -0.5, 0.5);
        let k = AffineMap2::linear(1., 0., 0., -1.);
        let h_inv = h.inverse(Tolerance::default()).unwrap();
        let r = compose(&k, &q, &h_inv).unwrap();
        assert!(r.max_deviation_ignoring_constants(&h2) < 1e-15, "{r:?}");
        let r = compose(&k, &q, &h).unwrap();
        assert!(r.max_deviation_ignoring_constants(&h2) > 0.5);
        let r = compose(&k, &q, &k).unwrap();
        assert_eq!(r, h2);
    }

    #[test]
    fn compose_rejects_singular_maps() {
        let sing = AffineMap2::linear(1., 2., 2., 4.);
        let id = AffineMap2::identity();
        assert!(matches!(compose(&id, &e1(), &sing), Err(Error::SingularAffine { .. })));
        assert!(matches!(compose(&sing, &e1(), &id), Err(Error::SingularAffine { .. })));
    }

    #[test]
    fn inverse_examples() {
        let tol = Tolerance::default();
        assert_eq!(AffineMap2::<f64>::identity().inverse(tol).unwrap(), AffineMap2::identity());
        assert_eq!(
            AffineMap2::translation(2.0, -3.0).inverse(tol).unwrap(),
            AffineMap2::translation(-2.0, 3.0)
        );
        let h = AffineMap2::new(2., 1., 1., 1., 1., 0.);
        let hi = h.inverse(tol).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
            let back = hi.apply(&h.apply(&p));
            assert!((back[0] - p[0]).abs() <= 1e-12 && (back[1] - p[1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn rational_inverse_is_exact() {
        let r = |n: i64| Rational::from_integer(n.into());
        let h = AffineMap2::new(r(2), r(1), r(1), r(1), r(1), r(0));
        let hi = h.inverse(Tolerance::default()).unwrap();
        assert_eq!(h.after(&hi), AffineMap2::identity());
    }

    #[test]
    fn homogeneous_projection_ignores_lower_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let q = random_map(&mut rng);
            let h = random_affine(&mut rng);
            let k = random_affine(&mut rng);
            let full = compose(&k, &q, &h).unwrap().homogeneous_part();
            let trunc = compose(&k, &q.homogeneous_part().as_map(), &h)
                .unwrap()
                .homogeneous_part();
            let a = full.as_map().to_array();
            let b = trunc.as_map().to_array();
            for i in 0..12 {
                assert!((a[i] - b[i]).abs() <= 1e-10 * (1.0 + a[i].abs()));
            }
        }
    }

    #[test]
    fn homogeneous_part_examples() {
        let p = e1().homogeneous_part();
        assert_eq!(
            p.as_map(),
            QuadraticMap::new([1., 0., -1., 0., 0., 0., 0., 1., 0., 0., 0., 0.])
        );
        let dp3 = QuadraticMap::new([1., 0., 0., 0., 1., 0., 0., 0., 0., 0., 0., 0.]);
        assert_eq!(
            dp3.homogeneous_part().as_map(),
            QuadraticMap::new([1., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.])
        );
    }
}
