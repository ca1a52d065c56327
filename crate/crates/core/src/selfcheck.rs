//! The acceptance criteria as runnable checks, shared by `quadmap selftest`
//! and the `acceptance` test target.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{compose, Point, QuadraticMap};
use crate::analyze::{
    critical_set_class_of, distinguishing_invariant, group_identities, preimage, preimage_profile,
    quadratic_inverse, smooth_class_of, LabelInvariants, Preimage, SeparatingInvariant, SmoothClass,
};
use crate::critical::{
    analyze_critical_image, count_cusps, critical_conic, critical_set_with, det_jacobian_conic,
    j0j1_class_with, CriticalSetClass,
};
use crate::error::{Error, Result};
use crate::normalize::{
    classify_with, elliptic_cubic, find_positive_cubic_root, hyperbolic_cubic,
    solve_elliptic_longcase, solve_hyperbolic_longcase, ClassLabel, ClassifySettings,
    LongCaseSolution, EQUATION_TOL,
};
use crate::sampling::{quadratic_to_rational, random_affine, random_quadratic};
use crate::scalar::{Rational, Tolerance};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SelfCheckConfig {
    pub seed: u64,
    pub tol: Tolerance,
}

impl SelfCheckConfig {
    fn settings(&self) -> ClassifySettings {
        ClassifySettings { tol: self.tol, ..ClassifySettings::default() }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
    }
}

/// Identifier, short title and time budget of each criterion.
pub const CRITERIA: [(u8, &str, u64); 9] = [
    (1, "normal forms are fixed points", 1),
    (2, "conjugation invariance", 30),
    (3, "classification table", 60),
    (4, "long-case cubics", 20),
    (5, "deltoid", 5),
    (6, "inequivalence certificates", 30),
    (7, "collapse maps", 5),
    (8, "quadratic inverses", 10),
    (9, "oracle agreement", 60),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    /// All checks held.
    pub checks_passed: bool,
    pub elapsed: Duration,
    pub budget: Duration,
    /// Summary lines, followed by the first failures if any.
    pub details: Vec<String>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.checks_passed && self.elapsed <= self.budget
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {} {:.3}s (budget {}s) {}",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.title
        )?;
        if self.checks_passed && self.elapsed > self.budget {
            write!(f, " [over budget]")?;
        }
        Ok(())
    }
}

/// Collects check outcomes, keeping the first few failure messages.
#[derive(Default)]
struct Log {
    lines: Vec<String>,
    failures: usize,
}

impl Log {
    const MAX_FAILURES_SHOWN: usize = 8;

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            if self.failures < Self::MAX_FAILURES_SHOWN {
                self.lines.push(format!("failed: {}", msg()));
            }
            self.failures += 1;
        }
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.lines.push(msg.into());
    }
}

pub fn run_criterion(id: u8, cfg: &SelfCheckConfig) -> Result<CriterionResult> {
    let &(_, title, budget) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::InvalidArgument(format!("no criterion {id}")))?;
    let start = Instant::now();
    let mut log = Log::default();
    match id {
        1 => fixed_points(cfg, &mut log),
        2 => conjugation(cfg, &mut log),
        3 => table(cfg, &mut log),
        4 => long_case(cfg, &mut log),
        5 => deltoid(cfg, &mut log),
        6 => certificates(cfg, &mut log),
        7 => collapses(cfg, &mut log),
        8 => inverses(cfg, &mut log),
        _ => oracles(cfg, &mut log),
    }
    if log.failures > Log::MAX_FAILURES_SHOWN {
        log.note(format!("{} failures in total", log.failures));
    }
    Ok(CriterionResult {
        id,
        title: title.to_string(),
        checks_passed: log.failures == 0,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget),
        details: log.lines,
    })
}

pub fn run_all(cfg: &SelfCheckConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| run_criterion(c.0, cfg).expect("known criterion")).collect()
}

fn fixed_points(cfg: &SelfCheckConfig, log: &mut Log) {
    for l in ClassLabel::ALL {
        match classify_with(&l.normal_form(), cfg.settings()) {
            Ok(r) => log.check(r.label == l && r.residual == 0.0, || {
                format!("{l}: got {} with residual {:e}", r.label, r.residual)
            }),
            Err(e) => log.check(false, || format!("{l}: {e}")),
        }
    }
    log.note("18 normal forms classified");
}

fn conjugation(cfg: &SelfCheckConfig, log: &mut Log) {
    const PER_CLASS: usize = 100;
    let mut rng = cfg.rng(2);
    let cases: Vec<(ClassLabel, QuadraticMap)> = ClassLabel::ALL
        .iter()
        .flat_map(|&l| std::iter::repeat_n(l, PER_CLASS))
        .map(|l| {
            let (h, k) = (random_affine(&mut rng, 100.0), random_affine(&mut rng, 100.0));
            (l, compose(&k, &l.normal_form(), &h).expect("invertible"))
        })
        .collect();
    let settings = cfg.settings();
    let outcomes: Vec<_> = cases.par_iter().map(|(l, q)| (*l, q, classify_with(q, settings))).collect();
    let mut worst: f64 = 0.0;
    for (l, q, r) in outcomes {
        match r {
            Ok(r) => {
                let rel = r.residual / q.scale().max(1.0);
                worst = worst.max(rel);
                log.check(r.label == l && rel <= 1e-6, || {
                    format!("{l} conjugate {:?}: got {} residual {:e}", q.to_array(), r.label, r.residual)
                });
            }
            Err(e) => log.check(false, || format!("{l} conjugate {:?}: {e}", q.to_array())),
        }
    }
    log.note(format!("{} conjugates, worst residual/scale {worst:.2e}", cases.len()));
}

fn table(cfg: &SelfCheckConfig, log: &mut Log) {
    const TARGETS: usize = 240;
    const CONJUGATES: usize = 20;
    let rows: Vec<_> = ClassLabel::ALL
        .par_iter()
        .map(|&l| {
            let q = l.normal_form();
            let mut rng = cfg.rng(300 + l as u64);
            let j0 = critical_conic(&q, cfg.tol).kind;
            let j1 = analyze_critical_image(&q, 512, cfg.tol).description;
            let profile = preimage_profile(&q, TARGETS, &mut rng).values();
            let conjugate_profiles: Vec<_> = (0..CONJUGATES)
                .map(|_| {
                    let (h, k) = (random_affine(&mut rng, 20.0), random_affine(&mut rng, 20.0));
                    let c = compose(&k, &q, &h).expect("invertible");
                    (c.to_array(), preimage_profile(&c, TARGETS, &mut rng).values())
                })
                .collect();
            (l, j0, j1, profile, conjugate_profiles)
        })
        .collect();
    for (l, j0, j1, profile, conj) in rows {
        log.check(j0 == l.j0_kind(), || format!("{l}: J0 {j0} expected {}", l.j0_kind()));
        log.check(j1 == l.j1_description(), || format!("{l}: J1 {j1} expected {}", l.j1_description()));
        let want = l.table_profile();
        log.check(profile == want, || format!("{l}: profile {profile:?} expected {want:?}"));
        for (c, p) in conj {
            log.check(p == want, || format!("{l} conjugate {c:?}: profile {p:?} expected {want:?}"));
        }
    }
    log.note(format!("18 rows, {TARGETS} targets per map, {CONJUGATES} conjugates per class"));
}

fn long_case(cfg: &SelfCheckConfig, log: &mut Log) {
    let grid: Vec<f64> = (0..=400).map(|i| (i as f64 - 200.0) / 20.0).collect();
    let settings = cfg.settings();
    let mut worst_eq: f64 = 0.0;
    let mut worst_witness: f64 = 0.0;
    let mut solved = 0;
    for elliptic in [true, false] {
        let (label, sign) = if elliptic { (ClassLabel::E1, -1.0) } else { (ClassLabel::H1, 1.0) };
        for &b in &grid {
            if !elliptic && (b == 0.0 || b.abs() == 0.5) {
                continue;
            }
            let (c3, c1, c0) = if elliptic { elliptic_cubic(b) } else { hyperbolic_cubic(b) };
            log.check(c0 == -1.0, || format!("{label} b10={b}: f(0) = {c0}"));
            let root = find_positive_cubic_root(c3, c1, c0);
            log.check(root.as_ref().is_ok_and(|p| *p > 0.0), || format!("{label} b10={b}: no positive root"));
            if b == 0.0 {
                log.check(matches!(root, Ok(p) if p == 1.0), || format!("{label} b10=0: root {root:?}"));
            }
            let sol: Result<LongCaseSolution> =
                if elliptic { solve_elliptic_longcase(b) } else { solve_hyperbolic_longcase(b) };
            let q = QuadraticMap::new([1.0, 0.0, sign, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, b, 0.0, 0.0]);
            match sol {
                Ok(s) => {
                    solved += 1;
                    let eq = s.max_residual();
                    worst_eq = worst_eq.max(eq);
                    log.check(eq <= EQUATION_TOL, || format!("{label} b10={b}: equation residual {eq:e}"));
                    let dev = compose(&s.k(), &q, &s.h())
                        .map(|m| {
                            let (a, n) = (m.to_array(), label.coefficients());
                            a.iter().zip(n).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
                        })
                        .unwrap_or(f64::INFINITY);
                    worst_witness = worst_witness.max(dev);
                    log.check(dev <= 1e-7, || format!("{label} b10={b}: witness deviation {dev:e}"));
                }
                Err(e) => log.check(false, || format!("{label} b10={b}: {e}")),
            }
            match classify_with(&q, settings) {
                Ok(r) => log.check(r.label == label && r.residual <= 1e-7, || {
                    format!("{label} b10={b}: classified {} residual {:e}", r.label, r.residual)
                }),
                Err(e) => log.check(false, || format!("{label} b10={b}: {e}")),
            }
        }
    }
    log.note(format!(
        "{solved} cubics solved, worst equation residual {worst_eq:.2e}, worst witness deviation {worst_witness:.2e}"
    ));
}

/// The deltoid `z² + 2z̄`. On `|z| = 1` it traces `e^{2iθ} + 2e^{−iθ}`.
pub fn deltoid_map() -> QuadraticMap {
    QuadraticMap::new([1.0, 0.0, -1.0, 2.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, -2.0, 0.0])
}

fn deltoid(cfg: &SelfCheckConfig, log: &mut Log) {
    let q = deltoid_map();
    let (class, sample) = critical_set_with(&q, 2048, cfg.tol);
    log.check(class.kind == crate::critical::ConicKind::Ellipse, || format!("J0 is {}", class.kind));
    let radial = sample.all_points().map(|p| (p[0].hypot(p[1]) - 1.0).abs()).fold(0.0, f64::max);
    log.check(radial <= 1e-9, || format!("radial deviation {radial:e}"));
    let (mut corrected, mut literal): (f64, f64) = (0.0, 0.0);
    for (p, img) in sample.all_points().zip(sample.all_images()) {
        let t = p[1].atan2(p[0]);
        let e2 = [(2.0 * t).cos(), (2.0 * t).sin()];
        let em = [t.cos(), -t.sin()];
        let d = |w: f64| (img[0] - e2[0] - w * em[0]).hypot(img[1] - e2[1] - w * em[1]);
        corrected = corrected.max(d(2.0));
        literal = literal.max(d(1.0));
    }
    log.check(corrected <= 1e-9, || format!("J1 deviates from e^(2it) + 2e^(-it) by {corrected:e}"));
    match count_cusps(&q, &sample) {
        Ok((n, _)) => log.check(n == 3, || format!("{n} cusps")),
        Err(e) => log.check(false, || e.to_string()),
    }
    log.note(format!(
        "radial {radial:.1e}, J1 vs e^(2it)+2e^(-it) {corrected:.1e}, vs e^(2it)+e^(-it) {literal:.2}"
    ));
}

fn certificates(cfg: &SelfCheckConfig, log: &mut Log) {
    let first: Vec<LabelInvariants> =
        ClassLabel::ALL.par_iter().map(|l| LabelInvariants::of(&l.normal_form(), cfg.seed)).collect();
    let second: Vec<LabelInvariants> = ClassLabel::ALL
        .par_iter()
        .map(|l| LabelInvariants::of(&l.normal_form(), cfg.seed.wrapping_add(1)))
        .collect();
    let mut pairs = 0;
    let mut used = BTreeSet::new();
    for i in 0..18 {
        for j in i + 1..18 {
            let (a, b) = (ClassLabel::ALL[i], ClassLabel::ALL[j]);
            pairs += 1;
            match first[i].separate(&first[j]) {
                Some(inv) => {
                    used.insert(inv);
                    log.check(second[i].differs(&second[j], inv), || {
                        format!("{a}/{b}: {inv} not confirmed on recomputation")
                    });
                }
                None => log.check(false, || format!("{a}/{b}: no separator")),
            }
        }
    }
    use ClassLabel::*;
    use SeparatingInvariant::*;
    for (a, b, want) in [
        (DE1, DH1, RangeConvexity),
        (DE3, DP3, PreimageTopology),
        (DH2, DP5, PreimageTopology),
        (DE2, P3, LineMultiplicity),
    ] {
        match distinguishing_invariant(a, b) {
            Ok(r) => {
                log.check(r.invariant == want, || format!("{a}/{b}: {} expected {want}", r.invariant));
                log.note(r.to_string());
            }
            Err(e) => log.check(false, || format!("{a}/{b}: {e}")),
        }
    }
    log.note(format!("{pairs} pairs separated using {} invariants", used.len()));
}

fn collapses(cfg: &SelfCheckConfig, log: &mut Log) {
    let classes: BTreeSet<CriticalSetClass> =
        ClassLabel::ALL.iter().map(|l| critical_set_class_of(*l)).collect();
    log.check(classes == CriticalSetClass::ALL.into_iter().collect(), || {
        format!("critical-set classes {classes:?}")
    });
    let merged = |f: &dyn Fn(ClassLabel) -> String| -> BTreeSet<Vec<ClassLabel>> {
        let mut groups: std::collections::BTreeMap<String, Vec<ClassLabel>> = Default::default();
        for l in ClassLabel::ALL {
            groups.entry(f(l)).or_default().push(l);
        }
        groups.into_values().filter(|g| g.len() > 1).collect()
    };
    use ClassLabel::*;
    let j0j1 = merged(&|l| critical_set_class_of(l).name().to_string());
    let want: BTreeSet<_> = [vec![DE1, DH1], vec![DE3, DP3], vec![DH2, DP5]].into_iter().collect();
    log.check(j0j1 == want, || format!("critical-set merges {j0j1:?}"));
    let smooth = merged(&|l| smooth_class_of(l).name().to_string());
    let want: BTreeSet<_> = [vec![DE1, DH1, DP2], vec![DP3, DP4]].into_iter().collect();
    log.check(smooth == want, || format!("smooth merges {smooth:?}"));
    log.check(SmoothClass::ALL.len() == 15, || "smooth class count".into());

    let mut rng = cfg.rng(7);
    let points: Vec<Point> =
        (0..100).map(|_| [rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)]).collect();
    let mut worst: f64 = 0.0;
    for id in group_identities() {
        let e = id.max_error(&points);
        worst = worst.max(e);
        log.check(e <= 1e-10, || format!("{}: error {e:e}", id.statement));
    }

    // the two pipelines commute on conjugated normal forms
    let settings = cfg.settings();
    for l in ClassLabel::ALL {
        for _ in 0..5 {
            let (h, k) = (random_affine(&mut rng, 20.0), random_affine(&mut rng, 20.0));
            let q = compose(&k, &l.normal_form(), &h).expect("invertible");
            let direct = j0j1_class_with(&q, cfg.tol);
            match classify_with(&q, settings) {
                Ok(r) => log.check(critical_set_class_of(r.label) == direct, || {
                    format!("{l}: classify gives {} but J0/J1 gives {direct}", r.label)
                }),
                Err(e) => log.check(false, || format!("{l}: {e}")),
            }
        }
    }
    log.note(format!("15 + 15 classes, identity error {worst:.1e}"));
}

fn inverses(cfg: &SelfCheckConfig, log: &mut Log) {
    let mut rng = cfg.rng(8);
    let mut maps: Vec<QuadraticMap> = (0..100)
        .map(|_| {
            let (h, k) = (random_affine(&mut rng, 100.0), random_affine(&mut rng, 100.0));
            compose(&k, &ClassLabel::DP1.normal_form(), &h).expect("invertible")
        })
        .collect();
    for (a, b) in [(1.4, 0.3), (1.0, 0.5), (0.2, -1.0), (2.0, 0.1), (-0.5, 2.0)] {
        maps.push(QuadraticMap::new([-a, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, b, 0.0, 0.0]));
    }
    let points: Vec<Point> =
        (0..1000).map(|_| [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]).collect();
    let results: Vec<_> = maps
        .par_iter()
        .map(|q| {
            let inv = quadratic_inverse(q)?;
            // error relative to the size of the terms summed in the outer map
            let size = |m: &QuadraticMap, x: Point| 1.0 + m.scale() * (1.0 + x[0].abs() + x[1].abs()).powi(2);
            let mut worst: f64 = 0.0;
            for p in &points {
                let (a, b) = (inv.evaluate(p), q.evaluate(p));
                for (back, m) in [(q.evaluate(&a), size(q, a)), (inv.evaluate(&b), size(&inv, b))] {
                    worst = worst.max((back[0] - p[0]).abs().max((back[1] - p[1]).abs()) / m);
                }
            }
            Ok::<f64, Error>(worst)
        })
        .collect();
    let mut overall: f64 = 0.0;
    for (q, r) in maps.iter().zip(results) {
        match r {
            Ok(e) => {
                overall = overall.max(e);
                log.check(e <= 1e-8, || format!("{:?}: round trip error {e:e}", q.to_array()));
            }
            Err(e) => log.check(false, || format!("{:?}: {e}", q.to_array())),
        }
    }
    log.note(format!("{} maps, worst relative round trip {overall:.1e}", maps.len()));
}

/// Distinct real solutions of `Q(p) = target` in `[-radius, radius]²`,
/// found by damped Newton iteration from a `grid × grid` array of seeds.
pub fn newton_preimages(q: &QuadraticMap, target: Point, radius: f64, grid: usize) -> Vec<Point> {
    let scale = q.scale();
    let accept = |p: Point, f: Point| {
        let mag = 1.0 + target[0].abs().max(target[1].abs()) + scale * (1.0 + p[0] * p[0] + p[1] * p[1]);
        f[0].abs().max(f[1].abs()) <= 1e-11 * mag
    };
    let mut roots: Vec<Point> = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let mut p = [
                -radius + 2.0 * radius * (i as f64 + 0.5) / grid as f64,
                -radius + 2.0 * radius * (j as f64 + 0.5) / grid as f64,
            ];
            for _ in 0..80 {
                let v = q.evaluate(&p);
                let f = [v[0] - target[0], v[1] - target[1]];
                let m = q.jacobian(&p);
                // Levenberg step (JᵀJ + λI) δ = Jᵀf
                let g = [m[0][0] * f[0] + m[1][0] * f[1], m[0][1] * f[0] + m[1][1] * f[1]];
                let a = m[0][0] * m[0][0] + m[1][0] * m[1][0];
                let b = m[0][0] * m[0][1] + m[1][0] * m[1][1];
                let c = m[0][1] * m[0][1] + m[1][1] * m[1][1];
                let lambda = 1e-14 * (a + c) + 1e-300;
                let det = (a + lambda) * (c + lambda) - b * b;
                if det == 0.0 || !det.is_finite() {
                    break;
                }
                let step = [((c + lambda) * g[0] - b * g[1]) / det, ((a + lambda) * g[1] - b * g[0]) / det];
                p = [p[0] - step[0], p[1] - step[1]];
                if step[0].abs().max(step[1].abs()) <= 1e-15 * (1.0 + p[0].abs().max(p[1].abs())) {
                    break;
                }
            }
            let v = q.evaluate(&p);
            if !p[0].is_finite() || !p[1].is_finite() || !accept(p, [v[0] - target[0], v[1] - target[1]]) {
                continue;
            }
            if p[0].abs() > radius || p[1].abs() > radius {
                continue;
            }
            let close = |r: &Point| (r[0] - p[0]).hypot(r[1] - p[1]) <= 1e-6 * (1.0 + p[0].hypot(p[1]));
            if !roots.iter().any(close) {
                roots.push(p);
            }
        }
    }
    roots
}

/// `det DQ` expanded directly from the entries of the Jacobian.
pub fn brute_force_det(q: &QuadraticMap<Rational>) -> [Rational; 6] {
    let two = Rational::from_integer(2.into());
    let row = |c: [Rational; 6]| {
        let [c20, c11, c02, c10, c01, _] = c;
        (
            [two.clone() * c20, c11.clone(), c10],
            [c11, two.clone() * c02, c01],
        )
    };
    let (p11, p12) = row(q.first());
    let (p21, p22) = row(q.second());
    let mul = |l: &[Rational; 3], r: &[Rational; 3]| -> [Rational; 6] {
        [
            &l[0] * &r[0],
            &l[0] * &r[1] + &l[1] * &r[0],
            &l[1] * &r[1],
            &l[0] * &r[2] + &l[2] * &r[0],
            &l[1] * &r[2] + &l[2] * &r[1],
            &l[2] * &r[2],
        ]
    };
    let (d1, d2) = (mul(&p11, &p22), mul(&p12, &p21));
    std::array::from_fn(|i| &d1[i] - &d2[i])
}

fn oracles(cfg: &SelfCheckConfig, log: &mut Log) {
    const PAIRS: usize = 500;
    const BOX: f64 = 3.0;
    let mut rng = cfg.rng(9);
    let mut pairs: Vec<(QuadraticMap, Point, Vec<Point>)> = Vec::new();
    let mut infinite = 0;
    while pairs.len() < PAIRS {
        let q = if pairs.len() % 5 == 4 {
            let l = ClassLabel::ALL[rng.random_range(0..18)];
            let (h, k) = (random_affine(&mut rng, 10.0), random_affine(&mut rng, 10.0));
            compose(&k, &l.normal_form(), &h).expect("invertible")
        } else {
            random_quadratic(&mut rng, pairs.len() % 5 == 3)
        };
        let target = if rng.random_bool(0.5) {
            q.evaluate(&[rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
        } else {
            [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]
        };
        match preimage(&q, target, cfg.tol) {
            Preimage::Curve(_) => infinite += 1,
            Preimage::Points(pts) => {
                // keep pairs whose solutions sit well inside the oracle's box
                if pts.iter().all(|p| p[0].abs().max(p[1].abs()) <= 0.8 * BOX) {
                    pairs.push((q, target, pts));
                }
            }
        }
    }
    let mismatches: Vec<String> = pairs
        .par_iter()
        .filter_map(|(q, t, pts)| {
            let oracle = newton_preimages(q, *t, BOX, 64);
            (oracle.len() != pts.len()).then(|| {
                format!("{:?} target {t:?}: {} points, oracle {}", q.to_array(), pts.len(), oracle.len())
            })
        })
        .collect();
    for m in &mismatches {
        log.check(false, || m.clone());
    }
    log.note(format!("{PAIRS} finite preimage pairs against Newton ({infinite} infinite skipped)"));

    let mut det_failures = 0;
    for i in 0..1000 {
        let q = quadratic_to_rational(&random_quadratic(&mut rng, i % 2 == 1));
        let conic = det_jacobian_conic(&q);
        let got = [conic.a, conic.b, conic.c, conic.d, conic.e, conic.f];
        let want = brute_force_det(&q);
        if got != want {
            det_failures += 1;
        }
        log.check(got == want, || format!("det conic mismatch for {:?}", q.to_f64().to_array()));
    }
    log.note(format!("1000 rational determinant conics, {det_failures} mismatches"));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_finds_four_for_h3() {
        let q = ClassLabel::H3.normal_form();
        assert_eq!(newton_preimages(&q, [1.0, 0.0], 3.0, 32).len(), 4);
        assert!(newton_preimages(&q, [-1.0, 0.0], 3.0, 32).is_empty());
    }

    #[test]
    fn brute_force_det_matches_hand_expansion() {
        // (x² + y, xy): det = 2x·x − 1·y
        let q = quadratic_to_rational(&QuadraticMap::new([
            1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0,
        ]));
        let r = |n: i64| Rational::from_integer(n.into());
        assert_eq!(brute_force_det(&q), [r(2), r(0), r(0), r(0), r(-1), r(0)]);
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(10, &SelfCheckConfig::default()).is_err());
    }
}
