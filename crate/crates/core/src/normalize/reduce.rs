//! Witness construction: the homogeneous chain followed by the
//! family-specific chain. Branches are taken from the invariant label; the
//! coefficients only supply the numbers.

use serde::{Deserialize, Serialize};

use crate::algebra::{AffineMap2, HomogeneousPart, QuadraticMap};
use crate::error::{Error, Result};
use crate::scalar::Tolerance;

use super::label::{ClassLabel, Family};
use super::longcase::{solve_elliptic_longcase, solve_hyperbolic_longcase};

/// One coordinate change: the map after the step is `k ∘ (before) ∘ h⁻¹`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: String,
    pub map: QuadraticMap,
    pub h: AffineMap2,
    pub k: AffineMap2,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Domain change `h` and range change `k` with `k ∘ Q ∘ h⁻¹ = N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub h: AffineMap2,
    pub k: AffineMap2,
}

impl WitnessPair {
    pub fn identity() -> Self {
        Self { h: AffineMap2::identity(), k: AffineMap2::identity() }
    }
}

/// Running reduction `q = k ∘ Q_input ∘ h⁻¹`.
pub(crate) struct Reducer {
    pub q: QuadraticMap,
    pub h: AffineMap2,
    pub k: AffineMap2,
    pub trace: Vec<TraceStep>,
    tol: Tolerance,
}

impl Reducer {
    pub fn new(q: QuadraticMap, tol: Tolerance) -> Self {
        Self { q, h: AffineMap2::identity(), k: AffineMap2::identity(), trace: Vec::new(), tol }
    }

    fn record(&mut self, step: &str, h: AffineMap2, k: AffineMap2) {
        self.trace.push(TraceStep { step: step.to_string(), map: self.q.clone(), h, k, note: None });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        if let Some(last) = self.trace.last_mut() {
            last.note = Some(text.into());
        } else {
            let (h, k) = (AffineMap2::identity(), AffineMap2::identity());
            self.record("start", h, k);
            self.trace.last_mut().unwrap().note = Some(text.into());
        }
    }

    /// `Q := Q ∘ g`.
    pub fn sub(&mut self, step: &str, g: AffineMap2) -> Result<()> {
        let g_inv = g.inverse(self.tol)?;
        self.q = self.q.pullback(&g);
        self.h = g_inv.after(&self.h);
        self.record(step, g_inv, AffineMap2::identity());
        Ok(())
    }

    /// `Q := k ∘ Q`.
    pub fn range(&mut self, step: &str, k: AffineMap2) -> Result<()> {
        if !k.is_invertible(self.tol) {
            return Err(Error::SingularAffine { det: k.det() });
        }
        self.q = self.q.pushforward(&k);
        self.k = k.after(&self.k);
        self.record(step, AffineMap2::identity(), k);
        Ok(())
    }

    /// `Q := k ∘ Q ∘ h⁻¹`.
    pub fn witness(&mut self, step: &str, h: AffineMap2, k: AffineMap2) -> Result<()> {
        let h_inv = h.inverse(self.tol)?;
        if !k.is_invertible(self.tol) {
            return Err(Error::SingularAffine { det: k.det() });
        }
        self.q = self.q.pullback(&h_inv).pushforward(&k);
        self.h = h.after(&self.h);
        self.k = k.after(&self.k);
        self.record(step, h, k);
        Ok(())
    }

    /// Removes both constant terms by a range translation.
    pub fn clear_constants(&mut self) -> Result<()> {
        if self.q.a00 != 0.0 || self.q.b00 != 0.0 {
            let t = AffineMap2::translation(-self.q.a00, -self.q.b00);
            self.range("translate constants away", t)?;
            self.q.a00 = 0.0;
            self.q.b00 = 0.0;
        }
        Ok(())
    }

    /// Replaces the homogeneous part of the working map by its exact value
    /// (the chain guarantees it up to rounding).
    fn snap_homogeneous(&mut self, target: &QuadraticMap) {
        self.q.a20 = target.a20;
        self.q.a11 = target.a11;
        self.q.a02 = target.a02;
        self.q.b20 = target.b20;
        self.q.b11 = target.b11;
        self.q.b02 = target.b02;
    }

    fn scale(&self) -> f64 {
        self.q.scale()
    }

    fn negligible(&self, v: f64) -> bool {
        self.tol.is_zero(v, self.scale().max(1.0))
    }
}

fn x20_02(q: &QuadraticMap) -> f64 {
    q.a20 * q.b02 - q.a02 * q.b20
}

fn conjugated_by_rotation(q: &QuadraticMap, theta: f64) -> QuadraticMap {
    let r = AffineMap2::rotation(theta);
    let r_inv = AffineMap2::rotation(-theta);
    q.pullback(&r_inv).pushforward(&r)
}

/// Angle in `[0, π/2]` with `X_{20:02}(R Q R⁻¹) = 0`. The quantity changes
/// sign between the endpoints, so bisection always succeeds.
fn rotation_angle(q: &QuadraticMap, tol: Tolerance) -> f64 {
    let mag = q.quadratic_scale().powi(2);
    let f = |t: f64| x20_02(&conjugated_by_rotation(q, t));
    let f0 = f(0.0);
    if tol.is_zero(f0, mag) {
        return 0.0;
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let f1 = f(half_pi);
    if tol.is_zero(f1, mag) {
        return half_pi;
    }
    crate::poly::bisect(f, 0.0, half_pi, f0)
}

/// Runs the homogeneous chain on the working map; the family decides the
/// final branch.
pub(crate) fn homogeneous_chain(r: &mut Reducer, family: Family) -> Result<()> {
    let tol = r.tol;
    let theta = rotation_angle(&r.q, tol);
    if theta != 0.0 {
        let rot = AffineMap2::rotation(theta);
        r.witness("Q0->Q1 rotation killing X20:02", rot.clone(), rot)?;
    }
    let hs = r.q.quadratic_scale();
    let cands = [r.q.a20.abs(), r.q.b20.abs(), r.q.a02.abs(), r.q.b02.abs()];
    let best = (0..4).fold(0, |b, i| if cands[i] > cands[b] { i } else { b });
    if tol.is_zero(cands[best], hs) {
        // only the xy terms survive
        r.sub("Q1->Q2 shear (x+y, x-y)", AffineMap2::linear(1.0, 1.0, 1.0, -1.0))?;
        if tol.is_zero(r.q.a20, hs) {
            r.range("Q1->Q2 swap components", AffineMap2::swap())?;
        }
    } else {
        if best == 1 || best == 3 {
            r.range("Q1->Q2 swap components", AffineMap2::swap())?;
        }
        if best == 2 || best == 3 {
            r.sub("Q1->Q2 swap variables", AffineMap2::swap())?;
        }
    }
    let rr = r.q.b20 / r.q.a20;
    if rr != 0.0 {
        r.range("Q2->Q3 clear b20", AffineMap2::linear(1.0, 0.0, -rr, 1.0))?;
    }
    r.q.b20 = 0.0;
    r.q.b02 = 0.0;
    let a20 = r.q.a20;
    if a20 != 1.0 {
        r.range("Q2->Q3 normalize a20", AffineMap2::scaling(1.0 / a20, 1.0))?;
    }
    r.q.a20 = 1.0;
    let degenerate = matches!(
        family,
        Family::DegenerateElliptic | Family::DegenerateHyperbolic | Family::DegenerateParabolic
    );
    if !degenerate {
        let b11 = r.q.b11;
        if b11 == 0.0 {
            return Err(Error::NotApplicable("homogeneous chain lost the xy term".into()));
        }
        let t = r.q.a11 / b11;
        if t != 0.0 {
            r.range("Q3->Q4 clear a11", AffineMap2::linear(1.0, -t, 0.0, 1.0))?;
        }
        r.q.a11 = 0.0;
        let a02 = r.q.a02;
        if family != Family::Parabolic {
            let s = a02.abs().sqrt();
            if s != 1.0 {
                r.sub("Q4->normal form scale y", AffineMap2::scaling(1.0, 1.0 / s))?;
            }
        }
        let b11 = r.q.b11;
        if b11 != 1.0 {
            r.range("Q4->normal form scale second component", AffineMap2::scaling(1.0, 1.0 / b11))?;
        }
    } else {
        r.q.b11 = 0.0;
        let a11 = r.q.a11;
        if a11 != 0.0 {
            r.sub("Q3->Q5 complete the square", AffineMap2::linear(1.0, -a11 / 2.0, 0.0, 1.0))?;
        }
        r.q.a11 = 0.0;
        let a02 = r.q.a02;
        if family != Family::DegenerateParabolic {
            let s = a02.abs().sqrt();
            if s != 1.0 {
                r.sub("Q5->normal form scale y", AffineMap2::scaling(1.0, 1.0 / s))?;
            }
        }
    }
    let target = family.homogeneous_label().normal_form();
    r.snap_homogeneous(&target);
    Ok(())
}

/// Linear witnesses taking a homogeneous quadratic map to one of the six
/// homogeneous normal forms.
pub fn reduce_homogeneous(h0: &HomogeneousPart) -> Result<(ClassLabel, WitnessPair)> {
    let tol = Tolerance::default();
    let q = h0.as_map();
    let family = super::invariant::family_of(&q, tol)?;
    let mut r = Reducer::new(q, tol);
    homogeneous_chain(&mut r, family)?;
    Ok((family.homogeneous_label(), WitnessPair { h: r.h, k: r.k }))
}

/// Chooses the nearer of `±target` for a coefficient that the label says
/// must be `±target`.
fn nearest_sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn family_chain(r: &mut Reducer, label: ClassLabel) -> Result<()> {
    use ClassLabel::*;
    let q = r.q.clone();
    match label.family() {
        Family::Elliptic => {
            r.sub("Q0->Q1 translate", AffineMap2::translation(-q.b01, q.a01 / 2.0))?;
            if label == E2 {
                return Ok(());
            }
            let (a10, b10) = (r.q.a10, r.q.b10);
            if !r.negligible(a10) {
                let (i, i2) = (1.0 / a10, 1.0 / (a10 * a10));
                r.witness("Q1->Q2 scale by a10", AffineMap2::scaling(i, i), AffineMap2::scaling(i2, i2))?;
                let b = r.q.b10;
                if b != 0.0 {
                    let sol = solve_elliptic_longcase(b)?;
                    r.witness("Q2->E1 long case", sol.h(), sol.k())?;
                }
            } else {
                if r.negligible(b10) {
                    r.note("label E1 but a10 and b10 both negligible");
                }
                let (i, i2) = (1.0 / b10, 1.0 / (b10 * b10));
                r.witness("Q1->Q3 scale by b10", AffineMap2::scaling(i, i), AffineMap2::scaling(i2, i2))?;
                r.witness(
                    "Q3->E1",
                    AffineMap2::new(0.0, -0.5, 0.5, 0.0, -0.5, 0.0),
                    AffineMap2::new(-0.25, 0.0, 0.0, -0.25, -0.25, 0.0),
                )?;
            }
        }
        Family::Hyperbolic => {
            r.sub("Q0->Q1 translate", AffineMap2::translation(-q.b01, -q.a01 / 2.0))?;
            if label == H3 {
                return Ok(());
            }
            let (a10, b10) = (r.q.a10, r.q.b10);
            if !r.negligible(a10) {
                let (i, i2) = (1.0 / a10, 1.0 / (a10 * a10));
                r.witness("Q1->Q2 scale by a10", AffineMap2::scaling(i, i), AffineMap2::scaling(i2, i2))?;
                let b = r.q.b10;
                if label == H2 {
                    if nearest_sign(b) < 0.0 {
                        let flip = AffineMap2::scaling(1.0, -1.0);
                        r.witness("Q2->H2 reflect b10 = -1/2", flip.clone(), flip)?;
                    }
                } else if b.abs() > 1e-12 {
                    let sol = solve_hyperbolic_longcase(b).map_err(|e| {
                        if let Error::WrongBranch { .. } = e {
                            r.note("label H1 but b10 sits on an excluded value");
                        }
                        e
                    })?;
                    r.witness("Q2->H1 long case", sol.h(), sol.k())?;
                }
            } else {
                if label == H2 {
                    return Err(Error::NotApplicable("label H2 requires a10 != 0".into()));
                }
                let (i, i2) = (1.0 / b10, 1.0 / (b10 * b10));
                r.witness("Q1->Q3 scale by b10", AffineMap2::scaling(i, i), AffineMap2::scaling(i2, i2))?;
                r.witness(
                    "Q3->H1",
                    AffineMap2::new(0.0, -0.5, -0.5, 0.0, -0.5, 0.0),
                    AffineMap2::new(0.25, 0.0, 0.0, 0.25, -0.25, 0.0),
                )?;
            }
        }
        Family::Parabolic => {
            r.sub("Q0->Q1 translate", AffineMap2::translation(-q.a10 / 2.0, -q.b10))?;
            match label {
                P1 => {
                    let a01 = r.q.a01;
                    let (i, i2) = (1.0 / a01, 1.0 / (a01 * a01));
                    r.witness("Q1->Q2 scale by a01", AffineMap2::scaling(i, i), AffineMap2::scaling(i2, i2))?;
                    let b = r.q.b01;
                    if b != 0.0 {
                        let h = AffineMap2::new(1.0, 0.0, -2.0 * b / 3.0, 1.0, b / 3.0, 2.0 * b * b / 9.0);
                        let k = AffineMap2::new(
                            1.0,
                            0.0,
                            -2.0 * b / 3.0,
                            1.0,
                            b * b / 3.0,
                            2.0 * b * b * b / 27.0,
                        );
                        r.witness("Q2->P1", h, k)?;
                    }
                }
                P2 => {
                    let b01 = r.q.b01;
                    if b01 != 1.0 {
                        r.witness(
                            "Q1->P2",
                            AffineMap2::scaling(1.0 / b01, 1.0),
                            AffineMap2::scaling(1.0 / (b01 * b01), 1.0 / b01),
                        )?;
                    }
                }
                _ => {}
            }
        }
        Family::DegenerateElliptic => {
            r.sub("Q0->Q1 translate", AffineMap2::translation(-q.a10 / 2.0, q.a01 / 2.0))?;
            if label == DE3 {
                return Ok(());
            }
            let (b10, b01) = (r.q.b10, r.q.b01);
            if r.negligible(b10) {
                r.range("Q1->DE1 scale second component", AffineMap2::scaling(1.0, 1.0 / b01))?;
                if label == DE2 {
                    r.note("label DE2 but b10 negligible");
                }
                return Ok(());
            }
            if b10.abs() < b01.abs() {
                r.sub("Q1 swap variables", AffineMap2::swap())?;
                r.range("Q1 restore sign", AffineMap2::scaling(-1.0, 1.0))?;
            }
            let b10 = r.q.b10;
            if b10 != 1.0 {
                r.range("Q1->Q2 scale second component", AffineMap2::scaling(1.0, 1.0 / b10))?;
            }
            let b = r.q.b01;
            if label == DE2 {
                if nearest_sign(b) < 0.0 {
                    r.sub("Q2->DE2 reflect y", AffineMap2::scaling(1.0, -1.0))?;
                }
            } else {
                r.witness(
                    "Q2->DE1",
                    AffineMap2::linear(b, 1.0, 1.0, b),
                    AffineMap2::scaling(b * b - 1.0, 1.0),
                )?;
            }
        }
        Family::DegenerateHyperbolic => {
            r.sub("Q0->Q1 translate", AffineMap2::translation(-q.a10 / 2.0, -q.a01 / 2.0))?;
            if label == DH2 {
                return Ok(());
            }
            let (b10, b01) = (r.q.b10, r.q.b01);
            if r.negligible(b10) {
                r.range("Q1->DH1 scale second component", AffineMap2::scaling(1.0, 1.0 / b01))?;
                return Ok(());
            }
            if b10 != 1.0 {
                r.range("Q1->Q2 scale second component", AffineMap2::scaling(1.0, 1.0 / b10))?;
            }
            let b = r.q.b01;
            if (b - 1.0).abs() >= 0.1 {
                let (h, k) = dh_step(b);
                r.witness("Q2->Q3", h, k)?;
                let (h0, k0) = dh_step(0.0);
                let tol = r.tol;
                r.witness("Q3->Q4", h0.inverse(tol)?, k0.inverse(tol)?)?;
                r.sub("Q4->DH1 swap variables", AffineMap2::swap())?;
            } else {
                // x + b y becomes n·y under a rotation, which fixes x² + y²
                let n = (1.0 + b * b).sqrt();
                let (c, s) = (b / n, -1.0 / n);
                r.sub("Q2->DH1 rotate", AffineMap2::linear(c, -s, s, c))?;
                r.range("Q2->DH1 scale second component", AffineMap2::scaling(1.0, 1.0 / n))?;
                r.note("rotation used instead of the Q3/Q4 route (b01 close to 1)");
            }
        }
        Family::DegenerateParabolic => {
            r.sub("Q0->Q1 translate", AffineMap2::translation(-q.a10 / 2.0, 0.0))?;
            let (a01, b10, b01) = (r.q.a01, r.q.b10, r.q.b01);
            match label {
                DP5 => {}
                DP3 => r.sub("Q1->DP3", AffineMap2::scaling(1.0, 1.0 / a01))?,
                DP4 => r.range("Q1->DP4", AffineMap2::scaling(1.0, 1.0 / b10))?,
                DP1 => {
                    r.range("Q1->Q2", AffineMap2::scaling(1.0, 1.0 / b10))?;
                    let a01 = r.q.a01;
                    r.sub("Q2->DP1", AffineMap2::scaling(1.0, 1.0 / a01))?;
                }
                DP2 if !r.negligible(b10) => {
                    r.range("Q1->Q2", AffineMap2::scaling(1.0, 1.0 / b10))?;
                    let b01 = r.q.b01;
                    r.sub("Q2->Q3", AffineMap2::scaling(1.0, 1.0 / b01))?;
                    let a = r.q.a01;
                    r.witness(
                        "Q3->DP2",
                        AffineMap2::new(2.0, 0.0, 1.0, 1.0, -a, 0.0),
                        AffineMap2::new(4.0, -4.0 * a, 0.0, 1.0, a * a, 0.0),
                    )?;
                }
                DP2 => {
                    r.range("Q1->Q4", AffineMap2::scaling(1.0, 1.0 / b01))?;
                    let a = r.q.a01;
                    if a != 0.0 {
                        r.range("Q4->DP2", AffineMap2::linear(1.0, -a, 0.0, 1.0))?;
                    }
                }
                _ => unreachable!("label outside the degenerate parabolic family"),
            }
            let _ = a01;
        }
    }
    Ok(())
}

/// `(h, k)` with `(x²+y², x+y) = k ∘ (x²+y², x+b y) ∘ h⁻¹`.
fn dh_step(b: f64) -> (AffineMap2, AffineMap2) {
    let c = (b + 1.0) / (b - 1.0);
    let h = AffineMap2::linear(1.0, -c, -c, -1.0);
    let k = AffineMap2::scaling(2.0 * (b * b + 1.0) / ((b - 1.0) * (b - 1.0)), -2.0 / (b - 1.0));
    (h, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::compose;

    fn homog(c: [f64; 6]) -> HomogeneousPart {
        HomogeneousPart { a20: c[0], a11: c[1], a02: c[2], b20: c[3], b11: c[4], b02: c[5] }
    }

    fn check(h: &HomogeneousPart, want: ClassLabel) -> WitnessPair {
        let (label, w) = reduce_homogeneous(h).unwrap();
        assert_eq!(label, want);
        assert_eq!((w.h.t1, w.h.t2, w.k.t1, w.k.t2), (0.0, 0.0, 0.0, 0.0));
        let got = compose(&w.k, &h.as_map(), &w.h).unwrap();
        let dev = got.max_deviation_ignoring_constants(&want.normal_form());
        assert!(dev < 1e-12, "{want}: {got:?}");
        w
    }

    #[test]
    fn homogeneous_examples() {
        let w = check(&homog([1., 0., -1., 0., 1., 0.]), ClassLabel::E2);
        assert_eq!(w, WitnessPair::identity());
        check(&homog([0., 1., 0., 0., 0., 0.]), ClassLabel::DE3);
        let w = check(&homog([1., 0., 1., 0., 2., 0.]), ClassLabel::H3);
        assert_eq!(w.h, AffineMap2::identity());
        assert_eq!(w.k, AffineMap2::scaling(1.0, 0.5));
    }

    #[test]
    fn homogeneous_rotated_forms() {
        for (c, l) in [
            ([0.3, 1.1, -2.0, 0.7, -0.4, 0.9], None),
            ([0., 1., 0., 0., 1., 0.], Some(ClassLabel::DE3)),
            ([1., 2., 1., 2., 4., 2.], Some(ClassLabel::DP5)),
            ([1., 0., 1., 2., 0., 2.], Some(ClassLabel::DH2)),
            ([0., 1., 0., 0., 2., 0.], Some(ClassLabel::DE3)),
            ([0., 0., 1., 1., 0., 0.], None),
        ] {
            let h = homog(c);
            let (label, _) = reduce_homogeneous(&h).unwrap();
            if let Some(l) = l {
                assert_eq!(label, l);
            }
            check(&h, label);
        }
    }
}
