//! Seeded random maps for tests, self-checks and profile sampling.

use rand::Rng;

use crate::algebra::{AffineMap2, QuadraticMap};
use crate::scalar::Rational;

/// Entries are drawn on a grid of this spacing so that rational copies
/// stay small.
const GRID: f64 = 1.0 / 64.0;

fn grid_value<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo..hi) / GRID).round() * GRID
}

/// Invertible affine map with entries in `[-2, 2]` and condition number at
/// most `max_cond`.
pub fn random_affine<R: Rng + ?Sized>(rng: &mut R, max_cond: f64) -> AffineMap2 {
    loop {
        let a = AffineMap2::new(
            grid_value(rng, -2.0, 2.0),
            grid_value(rng, -2.0, 2.0),
            grid_value(rng, -2.0, 2.0),
            grid_value(rng, -2.0, 2.0),
            grid_value(rng, -2.0, 2.0),
            grid_value(rng, -2.0, 2.0),
        );
        if a.det().abs() > 1e-3 && a.condition_number() <= max_cond {
            return a;
        }
    }
}

/// Quadratic map with coefficients in `[-1, 1]`. When `sparse` is set,
/// each coefficient is zeroed with probability one half.
pub fn random_quadratic<R: Rng + ?Sized>(rng: &mut R, sparse: bool) -> QuadraticMap {
    loop {
        let c: [f64; 12] = std::array::from_fn(|_| {
            if sparse && rng.random_bool(0.5) {
                0.0
            } else {
                grid_value(rng, -1.0, 1.0)
            }
        });
        let q = QuadraticMap::new(c);
        if q.quadratic_scale() > 0.0 {
            return q;
        }
    }
}

pub fn to_rational(a: &AffineMap2) -> AffineMap2<Rational> {
    AffineMap2::from_array(a.to_array().map(|v| Rational::from_float(v).expect("finite")))
}

pub fn quadratic_to_rational(q: &QuadraticMap) -> QuadraticMap<Rational> {
    q.map_scalars(|v| Rational::from_float(*v).expect("finite"))
}
