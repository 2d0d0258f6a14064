//! Brute-force search for one-step worst cases.
//!
//! The one-step performance estimation problem asks for a dataset
//! `{(x_i, g_i, f_i)}` over `i ∈ {0, 1, *}` that satisfies the smooth convex
//! interpolation conditions, together with an admissible inexact direction
//! `d0`, maximizing `‖g1‖²`. With `L = 1` and rotations removed we fix
//! `x0 = 0`, `g0 = (a, 0)` with `a > 0`, `g* = 0` and `f* = 0`.
//!
//! For fixed `(a, d0)` the remaining problem is solved exactly. Choosing `f1`
//! as small as allowed, the constraints on `g1` reduce to the intersection of
//! two disks, and `‖g1‖²` is maximized at a disk's farthest point or at a
//! circle intersection. The minimizer `x*` exists unless `g1` points along
//! `−g0`, where two extra scalar conditions apply, so candidates on that axis
//! are enumerated separately. Every candidate is completed to a full dataset
//! and re-validated from scratch before it is accepted.
//!
//! The outer variables, `a` and the error `d0 − g0` written in polar form,
//! are searched by random multi-start followed by compass search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interpolation::{interpolation_check, PepPoint};
use crate::linalg::{dot, norm, norm_sq};
use crate::rates::{self, Regime};

/// Feasibility tolerance on every constraint of a returned candidate.
pub const FEASIBILITY_TOL: f64 = 1e-9;

const COARSE_STEP: f64 = 1e-3;
const FINE_STEP: f64 = 1e-10;
const FINALISTS: usize = 16;
const MAX_EVALS: usize = 20_000;

/// Which one-step rate the search lower-bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `‖g1‖² / (f0 − f1)`; no minimizer is modelled.
    ToF1,
    /// `‖g1‖² / (f0 − f*)`
    ToFstar,
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::ToF1 => "to_f1",
            Criterion::ToFstar => "to_fstar",
        }
    }
}

/// A complete worst-case configuration found by the search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PepCandidate {
    pub criterion: Criterion,
    pub h: f64,
    pub delta: f64,
    /// Points `x0`, `x1` and, for [`Criterion::ToFstar`], `x*`.
    pub points: Vec<PepPoint>,
    pub d0: Vec<f64>,
    /// `‖g1‖²`, equal to the rate ratio thanks to the normalization.
    pub objective: f64,
    /// `(i, j, slack)` of each interpolation inequality.
    pub slacks: Vec<(usize, usize, f64)>,
    /// `δ‖g0‖ − ‖d0 − g0‖`
    pub inexactness_slack: f64,
}

impl PepCandidate {
    /// Rebuilds every constraint from the stored coordinates.
    pub fn validate(&self, tol: f64) -> Result<bool> {
        let expected = match self.criterion {
            Criterion::ToF1 => 2,
            Criterion::ToFstar => 3,
        };
        if self.points.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: self.points.len() });
        }
        let (p0, p1) = (&self.points[0], &self.points[1]);
        let x1_err = p0
            .x
            .iter()
            .zip(&self.d0)
            .zip(&p1.x)
            .map(|((x0, d), x1)| (x0 - self.h * d - x1).abs())
            .fold(0.0, f64::max);
        let normalized = match self.criterion {
            Criterion::ToF1 => (p0.f - p1.f - 1.0).abs() <= tol,
            Criterion::ToFstar => {
                let star = &self.points[2];
                star.f == 0.0 && star.g.iter().all(|v| *v == 0.0) && (p0.f - 1.0).abs() <= tol
            }
        };
        let e: Vec<f64> = self.d0.iter().zip(&p0.g).map(|(d, g)| d - g).collect();
        let inexact_ok = norm(&e) <= self.delta * norm(&p0.g) + tol;
        let report = interpolation_check(&self.points, 1.0, tol)?;
        let objective_ok = (norm_sq(&p1.g) - self.objective).abs() <= tol * (1.0 + self.objective);
        Ok(x1_err <= tol && normalized && inexact_ok && report.passed() && objective_ok)
    }
}

/// Outer search point: `[a, σ]` in one dimension, `[a, r, θ]` in two, with
/// error `σδa` or `δ a r (cos θ, sin θ)`.
pub type OuterPoint = Vec<f64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub criterion: Criterion,
    pub dimension: usize,
    /// Number of multi-start points, including the analytical seeds.
    pub budget: usize,
    pub seed: u64,
    /// Additional starting points evaluated before the random ones.
    pub extra_starts: Vec<OuterPoint>,
}

impl SearchConfig {
    pub fn new(criterion: Criterion, dimension: usize, budget: usize, seed: u64) -> Self {
        Self { criterion, dimension, budget, seed, extra_starts: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub value: f64,
    pub candidate: PepCandidate,
    /// Outer variables of the best candidate.
    pub outer: OuterPoint,
    /// `C̃(h, δ)` or `C(h, δ)` for the chosen criterion.
    pub bound: f64,
    pub starts: usize,
    pub dimension: usize,
}

struct Problem {
    h: f64,
    delta: f64,
    criterion: Criterion,
    dimension: usize,
    a_lo: f64,
    a_hi: f64,
}

impl Problem {
    fn new(h: f64, delta: f64, criterion: Criterion, dimension: usize) -> Result<Self> {
        rates::check_delta(delta)?;
        rates::check_stepsize(h, delta)?;
        if !(h > 0.0 && h < rates::h_max(delta)) {
            return Err(Error::StepsizeOutOfRange { h, reason: "the search needs 0 < h < h_max" });
        }
        if !(1..=2).contains(&dimension) {
            return Err(Error::InvalidArgument(format!("search dimension must be 1 or 2, not {dimension}")));
        }
        let (a_lo, a_hi) = match criterion {
            Criterion::ToFstar => (1e-6, 2f64.sqrt()),
            Criterion::ToF1 => {
                let big_h = h * (1.0 + delta);
                let huber = 1.0 / (h * (1.0 - delta)).sqrt();
                let quad = (2.0 / (big_h * (2.0 - big_h))).sqrt();
                (1.0 / big_h.sqrt(), 8.0 * huber.max(quad))
            }
        };
        Ok(Self { h, delta, criterion, dimension, a_lo, a_hi })
    }

    fn clamp(&self, p: &mut OuterPoint) {
        p[0] = p[0].clamp(self.a_lo, self.a_hi);
        if self.dimension == 1 {
            p[1] = p[1].clamp(-1.0, 1.0);
        } else {
            p[1] = p[1].clamp(0.0, 1.0);
            p[2] = p[2].rem_euclid(std::f64::consts::TAU);
        }
    }

    fn error_vector(&self, p: &OuterPoint) -> [f64; 2] {
        let a = p[0];
        if self.dimension == 1 {
            [p[1] * self.delta * a, 0.0]
        } else {
            let r = self.delta * a * p[1];
            [r * p[2].cos(), r * p[2].sin()]
        }
    }

    fn initial_steps(&self) -> Vec<f64> {
        let a_step = 0.1 * (self.a_hi - self.a_lo);
        if self.dimension == 1 {
            vec![a_step, 0.25]
        } else {
            vec![a_step, 0.25, 0.5]
        }
    }

    /// Analytical starting points: `(1−δ)`-scaled, `(1+δ)`-scaled and, in two
    /// dimensions, the orthogonal construction.
    fn seeds(&self) -> Vec<OuterPoint> {
        let (h, delta) = (self.h, self.delta);
        let big_h = h * (1.0 + delta);
        let (a_short, a_long) = match self.criterion {
            Criterion::ToFstar => (1.0 / (h * (1.0 - delta) + 0.5).sqrt(), 2f64.sqrt()),
            Criterion::ToF1 => (1.0 / (h * (1.0 - delta)).sqrt(), (2.0 / (big_h * (2.0 - big_h))).sqrt()),
        };
        let mut seeds = if self.dimension == 1 {
            vec![vec![a_short, -1.0], vec![a_long, 1.0]]
        } else {
            let ortho = (-delta).acos();
            vec![vec![a_short, 1.0, std::f64::consts::PI], vec![a_long, 1.0, 0.0], vec![a_long, 1.0, ortho]]
        };
        for s in seeds.iter_mut() {
            self.clamp(s);
        }
        seeds
    }

    fn random_start(&self, rng: &mut ChaCha8Rng) -> OuterPoint {
        let a = self.a_lo + (self.a_hi - self.a_lo) * rng.gen::<f64>();
        if self.dimension == 1 {
            vec![a, rng.gen_range(-1.0..=1.0)]
        } else {
            vec![a, rng.gen::<f64>(), rng.gen::<f64>() * std::f64::consts::TAU]
        }
    }

    fn evaluate(&self, p: &OuterPoint) -> Option<PepCandidate> {
        let a = p[0];
        let e = self.error_vector(p);
        match self.criterion {
            Criterion::ToFstar => inner_to_fstar(self.h, self.delta, a, e, self.dimension),
            Criterion::ToF1 => inner_to_f1(self.h, self.delta, a, e, self.dimension),
        }
    }

    fn score(&self, p: &OuterPoint) -> f64 {
        self.evaluate(p).map_or(-1.0, |c| c.objective)
    }

    /// Coordinate-wise compass search maximizing the inner value.
    fn refine(&self, mut x: OuterPoint, mut steps: Vec<f64>, min_step: f64) -> (OuterPoint, f64) {
        self.clamp(&mut x);
        let mut fx = self.score(&x);
        let mut evals = 1;
        while evals < MAX_EVALS {
            let mut improved = false;
            'coords: for i in 0..x.len() {
                for sign in [1.0, -1.0] {
                    let mut trial = x.clone();
                    trial[i] += sign * steps[i];
                    self.clamp(&mut trial);
                    let ft = self.score(&trial);
                    evals += 1;
                    if ft > fx {
                        x = trial;
                        fx = ft;
                        improved = true;
                        break 'coords;
                    }
                }
            }
            if !improved {
                for s in steps.iter_mut() {
                    *s *= 0.5;
                }
                if steps.iter().all(|s| *s < min_step) {
                    break;
                }
            }
        }
        (x, fx)
    }
}

/// Completes `g1` to a full dataset and keeps it if every constraint holds.
fn complete_to_fstar(h: f64, delta: f64, a: f64, d0: [f64; 2], g1: [f64; 2], dimension: usize) -> Option<PepCandidate> {
    let g0 = [a, 0.0];
    let x1 = [-h * d0[0], -h * d0[1]];
    let diff = norm_sq(&[g0[0] - g1[0], g0[1] - g1[1]]);
    let lower = 1.0 - h * dot(&g0, &d0) + 0.5 * diff;
    let f1 = lower.max(0.5 * norm_sq(&g1));
    let alpha = -1.0 - 0.5 * a * a;
    let beta = dot(&g1, &x1) - 0.5 * norm_sq(&g1) - f1;
    let y = star_position(g0, g1, alpha, beta, dimension)?;
    let points = vec![
        PepPoint::new(vec![0.0, 0.0], g0.to_vec(), 1.0),
        PepPoint::new(x1.to_vec(), g1.to_vec(), f1),
        PepPoint::new(y.to_vec(), vec![0.0, 0.0], 0.0),
    ];
    finalize(Criterion::ToFstar, h, delta, points, d0)
}

/// A point `y` with `⟨g0, y⟩ ≤ α` and `⟨g1, y⟩ ≤ β`, preferring small norm.
fn star_position(g0: [f64; 2], g1: [f64; 2], alpha: f64, beta: f64, dimension: usize) -> Option<[f64; 2]> {
    let fits = |y: [f64; 2]| dot(&g0, &y) <= alpha + 1e-12 * alpha.abs() && dot(&g1, &y) <= beta + 1e-12 * beta.abs().max(1.0);
    let n0 = norm_sq(&g0);
    let y0 = [alpha * g0[0] / n0, alpha * g0[1] / n0];
    if fits(y0) {
        return Some(y0);
    }
    let n1 = norm_sq(&g1);
    if beta < 0.0 && n1 > 0.0 {
        let y1 = [beta * g1[0] / n1, beta * g1[1] / n1];
        if fits(y1) {
            return Some(y1);
        }
    }
    if dimension == 2 {
        let det = g0[0] * g1[1] - g0[1] * g1[0];
        if det != 0.0 {
            let y = [(alpha * g1[1] - beta * g0[1]) / det, (g0[0] * beta - g1[0] * alpha) / det];
            if y.iter().all(|v| v.is_finite()) {
                return Some(y);
            }
        }
    }
    None
}

fn finalize(
    criterion: Criterion,
    h: f64,
    delta: f64,
    points: Vec<PepPoint>,
    d0: [f64; 2],
) -> Option<PepCandidate> {
    let report = interpolation_check(&points, 1.0, FEASIBILITY_TOL).ok()?;
    let g0 = &points[0].g;
    let e = [d0[0] - g0[0], d0[1] - g0[1]];
    let inexactness_slack = delta * norm(g0) - norm(&e);
    if !report.passed() || inexactness_slack < -FEASIBILITY_TOL {
        return None;
    }
    Some(PepCandidate {
        criterion,
        h,
        delta,
        objective: norm_sq(&points[1].g),
        points,
        d0: d0.to_vec(),
        slacks: report.slacks,
        inexactness_slack,
    })
}

/// Largest `|t|` among the given points, in descending order of `t²`.
fn sorted_by_norm(mut cands: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    cands.retain(|c| c.iter().all(|v| v.is_finite()));
    cands.sort_by(|p, q| norm_sq(q).total_cmp(&norm_sq(p)));
    cands
}

/// Candidates for the maximum of `‖g‖²` over the intersection of two disks.
fn disk_pair_candidates(c1: [f64; 2], r1: f64, c2: [f64; 2], r2: f64) -> Vec<[f64; 2]> {
    let inside = |p: [f64; 2], c: [f64; 2], r: f64| {
        norm(&[p[0] - c[0], p[1] - c[1]]) <= r * (1.0 + 1e-12) + 1e-14
    };
    let mut out = Vec::new();
    for (c, r, oc, or) in [(c1, r1, c2, r2), (c2, r2, c1, r1)] {
        let cn = norm(&c);
        let dirs: Vec<[f64; 2]> = if cn > 0.0 { vec![[c[0] / cn, c[1] / cn]] } else { vec![[1.0, 0.0], [-1.0, 0.0]] };
        for u in dirs {
            let p = [c[0] + r * u[0], c[1] + r * u[1]];
            if inside(p, oc, or) {
                out.push(p);
            }
        }
    }
    let dx = [c2[0] - c1[0], c2[1] - c1[1]];
    let dist = norm(&dx);
    if dist > 0.0 && dist <= r1 + r2 && dist >= (r1 - r2).abs() {
        let along = (r1 * r1 - r2 * r2 + dist * dist) / (2.0 * dist);
        let across = (r1 * r1 - along * along).max(0.0).sqrt();
        let u = [dx[0] / dist, dx[1] / dist];
        let base = [c1[0] + along * u[0], c1[1] + along * u[1]];
        out.push([base[0] - across * u[1], base[1] + across * u[0]]);
        out.push([base[0] + across * u[1], base[1] - across * u[0]]);
    }
    out
}

/// Endpoints of `{t : (t − c)² ≤ q}`.
fn interval(c: f64, q: f64) -> Option<(f64, f64)> {
    (q >= 0.0).then(|| (c - q.sqrt(), c + q.sqrt()))
}

fn roots_of_concave(b: f64, c: f64) -> Option<(f64, f64)> {
    // −t² + b t + c ≥ 0
    let disc = b * b + 4.0 * c;
    (disc >= 0.0).then(|| ((b - disc.sqrt()) / 2.0, (b + disc.sqrt()) / 2.0))
}

/// Candidate values of `t` for `g1 = (t, 0)` in the minimizer-aware problem.
fn axis_candidates_fstar(h: f64, a: f64, d0: [f64; 2]) -> Vec<[f64; 2]> {
    let hd = h * d0[0];
    let mut lo = a - hd.max(0.0);
    let mut hi = a - hd.min(0.0);
    let center = 0.5 * (a - hd);
    match interval(center, center * center - 0.5 * a * a + 1.0) {
        Some((l, u)) => {
            lo = lo.max(l);
            hi = hi.min(u);
        }
        None => return Vec::new(),
    }
    if lo > hi {
        return Vec::new();
    }
    let mut out = Vec::new();
    if hi > 0.0 {
        out.push([hi, 0.0]);
    }
    // g1 = t g0/a with t < 0: the minimizer exists only under two extra conditions
    let alpha = -1.0 - 0.5 * a * a;
    let mut neg_lo = lo.max(-hd - alpha / a);
    let mut neg_hi = hi.min(0.0);
    match roots_of_concave(a - hd - alpha / a, -1.0 + h * a * d0[0] - 0.5 * a * a) {
        Some((l, u)) => {
            neg_lo = neg_lo.max(l);
            neg_hi = neg_hi.min(u);
        }
        None => neg_hi = f64::NEG_INFINITY,
    }
    if neg_lo <= neg_hi && neg_lo < 0.0 {
        out.push([neg_lo, 0.0]);
        // the tightest conditions may be met only approximately at rounding level
        out.push([neg_lo * (1.0 - 1e-12), 0.0]);
    }
    out
}

fn inner_to_fstar(h: f64, delta: f64, a: f64, e: [f64; 2], dimension: usize) -> Option<PepCandidate> {
    let d0 = [a + e[0], e[1]];
    let mut cands = axis_candidates_fstar(h, a, d0);
    if dimension == 2 {
        let c1 = [a - 0.5 * h * d0[0], -0.5 * h * d0[1]];
        let r1 = 0.5 * h * norm(&d0);
        let w = [a - h * d0[0], -h * d0[1]];
        let c2 = [0.5 * w[0], 0.5 * w[1]];
        let r2_sq = 1.0 - 0.5 * a * a + 0.25 * norm_sq(&w);
        if r2_sq >= 0.0 {
            cands.extend(disk_pair_candidates(c1, r1, c2, r2_sq.sqrt()));
        }
    }
    sorted_by_norm(cands)
        .into_iter()
        .find_map(|g1| complete_to_fstar(h, delta, a, d0, g1, dimension))
}

fn inner_to_f1(h: f64, delta: f64, a: f64, e: [f64; 2], dimension: usize) -> Option<PepCandidate> {
    let g0 = [a, 0.0];
    let d0 = [a + e[0], e[1]];
    let c1 = [a - h * d0[0], -h * d0[1]];
    let r1_sq = 2.0 - a * a + norm_sq(&c1);
    let r2_sq = 2.0 * h * dot(&g0, &d0) - 2.0;
    if r1_sq < 0.0 || r2_sq < 0.0 {
        return None;
    }
    let mut cands = Vec::new();
    if let (Some((l1, u1)), Some((l2, u2))) = (interval(c1[0], r1_sq - c1[1] * c1[1]), interval(a, r2_sq)) {
        let (lo, hi) = (l1.max(l2), u1.min(u2));
        if lo <= hi {
            cands.push([lo, 0.0]);
            cands.push([hi, 0.0]);
        }
    }
    if dimension == 2 {
        cands.extend(disk_pair_candidates(c1, r1_sq.sqrt(), g0, r2_sq.sqrt()));
    }
    let x1 = [-h * d0[0], -h * d0[1]];
    sorted_by_norm(cands).into_iter().find_map(|g1| {
        let points = vec![
            PepPoint::new(vec![0.0, 0.0], g0.to_vec(), 1.0),
            PepPoint::new(x1.to_vec(), g1.to_vec(), 0.0),
        ];
        finalize(Criterion::ToF1, h, delta, points, d0)
    })
}

fn bound_for(h: f64, delta: f64, criterion: Criterion) -> Result<f64> {
    Ok(match criterion {
        Criterion::ToFstar => rates::rate_one_step_to_fstar(h, delta)?,
        Criterion::ToF1 => rates::rate_one_step_to_f1(h, delta)?.value_or_inf(),
    })
}

/// Multi-start search for a one-step worst case at `(h, δ)`.
///
/// The returned value is attained by the returned candidate, which satisfies
/// every constraint to [`FEASIBILITY_TOL`]; it is therefore a lower bound on
/// the true worst case. Results are a deterministic function of the inputs.
pub fn search_one_step(h: f64, delta: f64, config: &SearchConfig) -> Result<SearchResult> {
    let problem = Problem::new(h, delta, config.criterion, config.dimension)?;
    if config.budget == 0 {
        return Err(Error::InvalidArgument("search budget must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut starts: Vec<OuterPoint> = problem.seeds();
    for extra in &config.extra_starts {
        if extra.len() == problem.dimension + 1 {
            let mut p = extra.clone();
            problem.clamp(&mut p);
            starts.push(p);
        }
    }
    let fixed = starts.len();
    starts.truncate(config.budget.max(1));
    while starts.len() < config.budget {
        starts.push(problem.random_start(&mut rng));
    }

    let coarse: Vec<(OuterPoint, f64)> = starts
        .par_iter()
        .map(|s| problem.refine(s.clone(), problem.initial_steps(), COARSE_STEP))
        .collect();

    let mut order: Vec<usize> = (0..coarse.len()).collect();
    order.sort_by(|&i, &j| coarse[j].1.total_cmp(&coarse[i].1).then(i.cmp(&j)));
    let mut finalists: Vec<usize> = (0..fixed.min(coarse.len())).collect();
    for i in order {
        if finalists.len() >= fixed + FINALISTS {
            break;
        }
        if !finalists.contains(&i) && coarse[i].1 > 0.0 {
            finalists.push(i);
        }
    }
    finalists.sort_unstable();

    let fine_steps: Vec<f64> = problem.initial_steps().iter().map(|s| s * COARSE_STEP * 4.0).collect();
    let refined: Vec<(usize, OuterPoint, f64)> = finalists
        .par_iter()
        .map(|&i| {
            let (p, v) = problem.refine(coarse[i].0.clone(), fine_steps.clone(), FINE_STEP);
            (i, p, v)
        })
        .collect();

    let best = refined
        .into_iter()
        .filter(|(_, _, v)| *v >= 0.0)
        .max_by(|x, y| x.2.total_cmp(&y.2).then(y.0.cmp(&x.0)));
    let (_, outer, _) = best.ok_or(Error::NoFeasibleCandidate { budget: config.budget })?;
    let candidate = problem.evaluate(&outer).ok_or(Error::NoFeasibleCandidate { budget: config.budget })?;
    Ok(SearchResult {
        value: candidate.objective,
        candidate,
        outer,
        bound: bound_for(h, delta, config.criterion)?,
        starts: starts.len(),
        dimension: config.dimension,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionComparison {
    pub best_1d: SearchResult,
    pub best_2d: SearchResult,
}

/// One- and two-dimensional searches with the same seed and budget. The
/// best one-dimensional configuration is also used to start the
/// two-dimensional search, so `best_2d ≥ best_1d`.
pub fn compare_1d_2d(h: f64, delta: f64, budget: usize, seed: u64) -> Result<DimensionComparison> {
    if rates::classify_regime(h, delta)? != Regime::Intermediate {
        return Err(Error::StepsizeOutOfRange { h, reason: "compare_1d_2d needs h in the intermediate regime" });
    }
    let best_1d = search_one_step(h, delta, &SearchConfig::new(Criterion::ToFstar, 1, budget, seed))?;
    let (a, sigma) = (best_1d.outer[0], best_1d.outer[1]);
    let lifted = vec![a, sigma.abs(), if sigma < 0.0 { std::f64::consts::PI } else { 0.0 }];
    let mut config = SearchConfig::new(Criterion::ToFstar, 2, budget, seed);
    config.extra_starts.push(lifted);
    let best_2d = search_one_step(h, delta, &config)?;
    Ok(DimensionComparison { best_1d, best_2d })
}

/// Normalized inner products of the error `e = d0 − g0` with `g0` and with `d0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityDiagnostic {
    /// `⟨e, g0⟩ / (‖e‖‖g0‖)`; `None` when `e = 0`.
    pub cos_error_gradient: Option<f64>,
    /// `⟨e, d0⟩ / (‖e‖‖d0‖)`; `None` when `e = 0` or `d0 = 0`.
    pub cos_error_direction: Option<f64>,
}

pub fn orthogonality_diagnostic(candidate: &PepCandidate) -> Result<OrthogonalityDiagnostic> {
    let g0 = &candidate.points[0].g;
    let d0 = &candidate.d0;
    let gn = norm(g0);
    if gn == 0.0 {
        return Err(Error::InvalidArgument("orthogonality is undefined for a zero gradient".into()));
    }
    let e: Vec<f64> = d0.iter().zip(g0).map(|(d, g)| d - g).collect();
    let en = norm(&e);
    let dn = norm(d0);
    let cos = |v: &[f64], vn: f64| (en > 0.0 && vn > 0.0).then(|| (dot(&e, v) / (en * vn)).clamp(-1.0, 1.0));
    Ok(OrthogonalityDiagnostic { cos_error_gradient: cos(g0, gn), cos_error_direction: cos(d0, dn) })
}
