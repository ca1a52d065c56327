//! Univariate real polynomials, coefficients in ascending order
//! (`c[i]` multiplies `x^i`).

/// Leading coefficients below this fraction of the largest are dropped.
const TRIM_REL: f64 = 1e-13;

/// A critical point whose value is this small relative to the size of the
/// summed terms counts as a (multiple) root.
const SNAP_REL: f64 = 1e-9;

/// Roots closer than this (relative to `1 + |r|`) are merged.
pub const CLUSTER_REL: f64 = 1e-8;

pub fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// `Σ |c_i| |x|^i`, the natural rounding scale of `eval(c, x)`.
pub fn eval_magnitude(c: &[f64], x: f64) -> f64 {
    let ax = x.abs();
    c.iter().rev().fold(0.0, |acc, &ci| acc * ax + ci.abs())
}

/// Horner evaluation with an error-free transformation of each step.
/// Accurate to about twice working precision.
pub fn eval_compensated(c: &[f64], x: f64) -> f64 {
    let mut s = 0.0_f64;
    let mut err = 0.0_f64;
    for &ci in c.iter().rev() {
        let p = s * x;
        let pe = s.mul_add(x, -p);
        let t = p + ci;
        let z = t - p;
        let se = (p - (t - z)) + (ci - z);
        s = t;
        err = err * x + (pe + se);
    }
    s + err
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, &ci)| i as f64 * ci).collect()
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
        .collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
        .collect()
}

pub fn max_abs(c: &[f64]) -> f64 {
    c.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Drops negligible leading coefficients.
pub fn trim(c: &[f64]) -> Vec<f64> {
    let m = max_abs(c);
    let mut v = c.to_vec();
    while let Some(&last) = v.last() {
        if last == 0.0 || last.abs() <= TRIM_REL * m {
            v.pop();
        } else {
            break;
        }
    }
    v
}

/// Real roots in increasing order, each multiple root reported once.
///
/// Returns an empty list for the zero polynomial; callers that care must
/// test for it separately.
pub fn real_roots(c: &[f64]) -> Vec<f64> {
    let c = trim(c);
    // exact roots at zero defeat the relative snapping test
    let zeros = c.iter().take_while(|v| **v == 0.0).count();
    if zeros > 0 && zeros < c.len() {
        let mut roots = raw_roots(&c[zeros..]);
        roots.push(0.0);
        roots.sort_by(|a, b| a.total_cmp(b));
        return cluster(&roots, CLUSTER_REL);
    }
    let mut roots = raw_roots(&c);
    roots.sort_by(|a, b| a.total_cmp(b));
    cluster(&roots, CLUSTER_REL)
}

fn raw_roots(c: &[f64]) -> Vec<f64> {
    match c.len() {
        0 | 1 => Vec::new(),
        2 => vec![-c[0] / c[1]],
        _ => {
            let crit = real_roots(&derivative(c));
            let bound = cauchy_bound(c);
            let mut knots = vec![-bound];
            knots.extend(crit.iter().copied().filter(|x| x.abs() < bound));
            knots.push(bound);
            let values: Vec<f64> = knots.iter().map(|&k| eval(c, k)).collect();
            let mut roots = Vec::new();
            let mut bracketed = vec![false; knots.len() - 1];
            for i in 0..knots.len() - 1 {
                let (flo, fhi) = (values[i], values[i + 1]);
                if flo != 0.0 && fhi != 0.0 && flo.signum() != fhi.signum() {
                    roots.push(bisect(|x| eval(c, x), knots[i], knots[i + 1], flo));
                    bracketed[i] = true;
                }
            }
            // a critical value at rounding level with no sign change beside
            // it is a multiple root
            for (i, &k) in knots.iter().enumerate() {
                let near = values[i] == 0.0 || values[i].abs() <= SNAP_REL * eval_magnitude(c, k);
                let left = i > 0 && bracketed[i - 1];
                let right = i < bracketed.len() && bracketed[i];
                if near && (values[i] == 0.0 || !(left || right)) {
                    roots.push(k);
                }
            }
            roots
        }
    }
}

/// `1 + max |c_i / c_n|` bounds the modulus of every root.
pub fn cauchy_bound(c: &[f64]) -> f64 {
    let n = c.len() - 1;
    let lead = c[n].abs();
    1.0 + c[..n].iter().fold(0.0_f64, |m, v| m.max(v.abs() / lead))
}

/// Bisection down to adjacent floating-point numbers.
/// `flo` is `f(lo)`; the caller guarantees a sign change on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let slo = flo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Merges sorted values closer than `rel * (1 + |x|)`.
pub fn cluster(sorted: &[f64], rel: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    let mut count = 0usize;
    for &x in sorted {
        if let Some(last) = out.last_mut() {
            if (x - *last).abs() <= rel * (1.0 + x.abs().max(last.abs())) {
                // running mean of the cluster
                count += 1;
                *last += (x - *last) / count as f64;
                continue;
            }
        }
        out.push(x);
        count = 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(roots: &[f64]) -> Vec<f64> {
        roots.iter().fold(vec![1.0], |acc, &r| mul(&acc, &[-r, 1.0]))
    }

    #[test]
    fn simple_roots() {
        let r = real_roots(&from_roots(&[-2.0, 0.5, 3.0, 7.0]));
        assert_eq!(r.len(), 4);
        for (a, b) in r.iter().zip([-2.0, 0.5, 3.0, 7.0]) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn double_and_triple_roots_count_once() {
        let r = real_roots(&from_roots(&[1.0, 1.0, -3.0]));
        assert_eq!(r.len(), 2, "{r:?}");
        let r = real_roots(&from_roots(&[2.0, 2.0, 2.0, -1.0]));
        assert_eq!(r.len(), 2, "{r:?}");
        // x^2 + 1 has none
        assert!(real_roots(&[1.0, 0.0, 1.0]).is_empty());
    }

    #[test]
    fn trims_negligible_leading_terms() {
        let r = real_roots(&[-1.0, 1.0, 1e-20]);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compensated_eval_beats_plain_near_root() {
        // (x - 1)^3 expanded, evaluated just off the root
        let c = from_roots(&[1.0, 1.0, 1.0]);
        let x = 1.0 + 1e-6;
        let exact = 1e-18;
        let comp = eval_compensated(&c, x);
        assert!((comp - exact).abs() < 1e-20, "{comp}");
    }

    #[test]
    fn cluster_merges_close_values() {
        assert_eq!(cluster(&[1.0, 1.0 + 1e-12, 2.0], 1e-8).len(), 2);
    }
}
