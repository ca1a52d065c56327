//! Explicit witnesses removing the `b·x` term from
//! `(x² ∓ y² + x, xy + b·x)` via a cubic in `p0`.

use serde::{Deserialize, Serialize};

use crate::algebra::AffineMap2;
use crate::error::{Error, Result};
use crate::poly;

/// Largest acceptable residual in any of the twelve matching equations.
pub const EQUATION_TOL: f64 = 1e-9;

/// Excluded hyperbolic parameters are detected at this distance.
const BRANCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LongCaseKind {
    /// Target `(x² − y² + x, xy)`.
    Elliptic,
    /// Target `(x² + y² + x, xy)`.
    Hyperbolic,
}

/// `h = (p0 x + q0 y + u0, r0 x + s0 y + v0)`, `k = (p x + q y + u, r x + s y + v)`
/// with `N∘h = k∘Q`, where `Q = (x² ∓ y² + x, xy + b10·x)` and `N` is the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongCaseSolution {
    pub kind: LongCaseKind,
    pub b10: f64,
    pub p0: f64,
    pub q0: f64,
    pub r0: f64,
    pub s0: f64,
    pub u0: f64,
    pub v0: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub u: f64,
    pub v: f64,
}

impl LongCaseSolution {
    pub fn h(&self) -> AffineMap2 {
        AffineMap2::new(self.p0, self.q0, self.r0, self.s0, self.u0, self.v0)
    }

    pub fn k(&self) -> AffineMap2 {
        AffineMap2::new(self.p, self.q, self.r, self.s, self.u, self.v)
    }

    /// Residuals of the twelve coefficient-matching equations, in order.
    pub fn residuals(&self) -> [f64; 12] {
        let &Self { b10: b, p0, q0, r0, s0, u0, v0, p, q, r, s, u, v, .. } = self;
        match self.kind {
            LongCaseKind::Elliptic => [
                p0 * p0 - r0 * r0 - p,
                2.0 * p0 * q0 - 2.0 * r0 * s0 - q,
                q0 * q0 - s0 * s0 + p,
                2.0 * p0 * u0 - 2.0 * r0 * v0 + p0 - b * q - p,
                2.0 * q0 * u0 - 2.0 * s0 * v0 + q0,
                u0 * u0 - v0 * v0 + u0 - u,
                p0 * r0 - r,
                p0 * s0 + q0 * r0 - s,
                q0 * s0 + r,
                p0 * v0 + r0 * u0 - b * s - r,
                q0 * v0 + s0 * u0,
                u0 * v0 - v,
            ],
            LongCaseKind::Hyperbolic => [
                r0 * r0 + p0 * p0 - p,
                2.0 * r0 * s0 + 2.0 * p0 * q0 - q,
                s0 * s0 + q0 * q0 - p,
                2.0 * r0 * v0 + 2.0 * p0 * u0 + p0 - b * q - p,
                2.0 * s0 * v0 + 2.0 * q0 * u0 + q0,
                v0 * v0 + u0 * u0 + u0 - u,
                p0 * r0 - r,
                p0 * s0 + q0 * r0 - s,
                q0 * s0 - r,
                p0 * v0 + r0 * u0 - b * s - r,
                q0 * v0 + s0 * u0,
                u0 * v0 - v,
            ],
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// `p0 s0 − q0 r0` and `p s − q r`.
    pub fn determinants(&self) -> (f64, f64) {
        (self.p0 * self.s0 - self.q0 * self.r0, self.p * self.s - self.q * self.r)
    }

    /// `max(1, |unknown|²)`, the natural size of an equation's terms.
    pub fn magnitude(&self) -> f64 {
        let &Self { p0, q0, r0, s0, u0, v0, p, q, r, s, u, v, .. } = self;
        let m = [p0, q0, r0, s0, u0, v0, p, q, r, s, u, v].iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        m * m
    }

    /// Accepts residuals up to `EQUATION_TOL · magnitude()`; close to the
    /// excluded values `b10 = ±½` the unknowns grow.
    fn check(self) -> Result<Self> {
        let residuals = self.residuals().to_vec();
        let max = self.max_residual();
        let (d0, d1) = self.determinants();
        if !(max <= EQUATION_TOL * self.magnitude()) || d0 == 0.0 || d1 == 0.0 || !d0.is_finite() || !d1.is_finite() {
            return Err(Error::LongCaseResidual { residuals, max });
        }
        Ok(self)
    }
}

/// Coefficients `(c3, c1, c0)` of the elliptic cubic in `p0`.
pub fn elliptic_cubic(b10: f64) -> (f64, f64, f64) {
    let b2 = b10 * b10;
    (64.0 * b2 * b2 + 32.0 * b2 + 4.0, -12.0 * b2 - 3.0, -1.0)
}

/// Coefficients `(c3, c1, c0)` of the hyperbolic cubic in `p0`.
pub fn hyperbolic_cubic(b10: f64) -> (f64, f64, f64) {
    let b2 = b10 * b10;
    (64.0 * b2 * b2 - 32.0 * b2 + 4.0, 12.0 * b2 - 3.0, -1.0)
}

/// Positive root of `c3 p³ + c1 p + c0` for `c3 > 0`, `c0 < 0`.
///
/// The bracket `[0, hi]` is doubled until `f(hi) > 0` and then bisected to
/// adjacent floats. Under these sign conditions there is exactly one
/// positive root.
pub fn find_positive_cubic_root(c3: f64, c1: f64, c0: f64) -> Result<f64> {
    if !(c3 > 0.0) || !(c0 < 0.0) || !c1.is_finite() || !c3.is_finite() || !c0.is_finite() {
        return Err(Error::NoGuaranteedRoot {
            reason: format!("need c3 > 0 and c0 < 0, got c3 = {c3:e}, c0 = {c0:e}"),
        });
    }
    let coeffs = [c0, c1, 0.0, c3];
    let f = |x: f64| poly::eval_compensated(&coeffs, x);
    let mut hi = 1.0_f64;
    let mut fhi = f(hi);
    while fhi < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoGuaranteedRoot { reason: "bracket overflow".into() });
        }
        fhi = f(hi);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    Ok(poly::bisect(f, 0.0, hi, c0))
}

/// Witness taking `(x² − y² + x, xy + b10·x)` to `(x² − y² + x, xy)`.
pub fn solve_elliptic_longcase(b10: f64) -> Result<LongCaseSolution> {
    let b = b10;
    let (c3, c1, c0) = elliptic_cubic(b);
    let p0 = find_positive_cubic_root(c3, c1, c0)?;
    let r = -2.0 * b * p0 * p0 / ((8.0 * b * b + 2.0) * p0 + 1.0);
    let s0 = p0;
    let r0 = r / p0;
    let q0 = -r / s0;
    let den = 2.0 * (q0 * q0 + s0 * s0);
    let u0 = -q0 * q0 / den;
    let v0 = s0 * q0 / den;
    let p = p0 * p0 - r0 * r0;
    LongCaseSolution {
        kind: LongCaseKind::Elliptic,
        b10,
        p0,
        q0,
        r0,
        s0,
        u0,
        v0,
        p,
        q: -4.0 * r,
        r,
        s: p,
        u: u0 * u0 - v0 * v0 + u0,
        v: u0 * v0,
    }
    .check()
}

/// Witness taking `(x² + y² + x, xy + b10·x)` to `(x² + y² + x, xy)` for
/// `b10 ∉ {0, ±½}`.
pub fn solve_hyperbolic_longcase(b10: f64) -> Result<LongCaseSolution> {
    let b = b10;
    if b.abs() <= BRANCH_TOL || (b.abs() - 0.5).abs() <= BRANCH_TOL {
        return Err(Error::WrongBranch { b10 });
    }
    let (c3, c1, c0) = hyperbolic_cubic(b);
    let p0 = find_positive_cubic_root(c3, c1, c0)?;
    let r = 2.0 * b * p0 * p0 / ((8.0 * b * b - 2.0) * p0 - 1.0);
    let s0 = p0;
    let r0 = r / p0;
    let q0 = r0;
    let den = 2.0 * (q0 * q0 - s0 * s0);
    let u0 = -q0 * q0 / den;
    let v0 = s0 * q0 / den;
    let p = p0 * p0 + r0 * r0;
    LongCaseSolution {
        kind: LongCaseKind::Hyperbolic,
        b10,
        p0,
        q0,
        r0,
        s0,
        u0,
        v0,
        p,
        q: 4.0 * r,
        r,
        s: p,
        u: v0 * v0 + u0 * u0 + u0,
        v: u0 * v0,
    }
    .check()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{compose, QuadraticMap};

    #[test]
    fn both_cubics_reduce_at_zero() {
        assert_eq!(elliptic_cubic(0.0), (4.0, -3.0, -1.0));
        assert_eq!(hyperbolic_cubic(0.0), (4.0, -3.0, -1.0));
        assert_eq!(find_positive_cubic_root(4.0, -3.0, -1.0).unwrap(), 1.0);
    }

    #[test]
    fn elliptic_at_zero_is_identity() {
        let s = solve_elliptic_longcase(0.0).unwrap();
        assert_eq!((s.p0, s.s0, s.p, s.s), (1.0, 1.0, 1.0, 1.0));
        for v in [s.r, s.r0, s.q0, s.u0, s.v0, s.q, s.u, s.v] {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn root_preconditions() {
        assert!(find_positive_cubic_root(-1.0, 0.0, -1.0).is_err());
        assert!(find_positive_cubic_root(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn hyperbolic_excluded_values() {
        for b in [0.0, 0.5, -0.5] {
            assert!(matches!(solve_hyperbolic_longcase(b), Err(Error::WrongBranch { .. })));
        }
    }

    fn check_witness(s: &LongCaseSolution, sign: f64) {
        let q = QuadraticMap::new([1., 0., -sign, 1., 0., 0., 0., 1., 0., s.b10, 0., 0.]);
        let target = QuadraticMap::new([1., 0., -sign, 1., 0., 0., 0., 1., 0., 0., 0., 0.]);
        let got = compose(&s.k(), &q, &s.h()).unwrap();
        let dev = got.max_deviation_ignoring_constants(&target);
        assert!(dev <= 1e-9, "b10 = {} deviation {dev:e}", s.b10);
        assert!(got.a00.abs() <= 1e-9 && got.b00.abs() <= 1e-9);
    }

    #[test]
    fn witnesses_match_targets() {
        for b in [1.0, -1.0, 0.3, 2.5, -7.0] {
            let s = solve_elliptic_longcase(b).unwrap();
            check_witness(&s, 1.0);
            let (d0, d1) = s.determinants();
            assert!(d0 > 0.0 && d1 > 0.0);
        }
        for b in [0.25, 2.0, -0.75, 6.0, 0.01] {
            check_witness(&solve_hyperbolic_longcase(b).unwrap(), -1.0);
        }
    }

    #[test]
    fn elliptic_b_one_residuals() {
        let s = solve_elliptic_longcase(1.0).unwrap();
        assert!(s.max_residual() <= 1e-9);
        let (d0, d1) = s.determinants();
        assert!((d0 - (s.p0 * s.p0 + s.r0 * s.r0)).abs() < 1e-12);
        assert!((d1 - (s.p * s.p + 4.0 * s.r * s.r)).abs() < 1e-12);
    }
}
