//! Gradient descent with relatively inexact gradients,
//! `x_{k+1} = x_k − (h/L) d_k` with `‖d_k − ∇f(x_k)‖ ≤ δ‖∇f(x_k)‖`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::{make_huber, make_quadratic, GradientOracle, Instance, Oracle};
use crate::linalg::{norm, norm_sq, sub};
use crate::rates::{self, check_delta};

/// Relative slack on the inexactness check, absorbing rounding in `d − g`.
const ORACLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub k: usize,
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    /// Oracle output; absent at the last iterate.
    pub d: Option<Vec<f64>>,
    pub f: f64,
}

impl Record {
    /// `‖d − g‖ / ‖g‖`, zero when `g = 0`.
    pub fn err_ratio(&self) -> Option<f64> {
        let d = self.d.as_ref()?;
        let gn = norm(&self.g);
        let en = norm(&sub(d, &self.g));
        Some(if gn == 0.0 { 0.0 } else { en / gn })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub h: f64,
    pub delta: f64,
    pub l: f64,
    pub n: usize,
    pub f_star: f64,
    /// Records for `k = 0, …, N`.
    pub records: Vec<Record>,
}

impl Trace {
    /// CSV with columns `k,x,g_norm,d_norm,f,err_ratio`; vector components of
    /// `x` are joined by `;` and missing values are left empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,x,g_norm,d_norm,f,err_ratio")?;
        for r in &self.records {
            let x = r.x.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(";");
            let d_norm = r.d.as_ref().map(|d| format!("{:e}", norm(d))).unwrap_or_default();
            let err = r.err_ratio().map(|e| format!("{e:e}")).unwrap_or_default();
            writeln!(w, "{},{},{:e},{},{:e},{}", r.k, x, norm(&r.g), d_norm, r.f, err)?;
        }
        Ok(())
    }
}

/// Runs `N` steps of the method from `instance.x_start`.
///
/// `h` may exceed `h_max` so that divergence can be observed. Every oracle
/// output is checked against the inexactness level `delta`.
pub fn run<O: GradientOracle + ?Sized>(
    instance: &Instance,
    oracle: &mut O,
    h: f64,
    delta: f64,
    n: usize,
) -> Result<Trace> {
    check_delta(delta)?;
    if !(h >= 0.0 && h.is_finite()) {
        return Err(Error::StepsizeOutOfRange { h, reason: "the simulator needs a finite h >= 0" });
    }
    if n == 0 {
        return Err(Error::InvalidIterationCount);
    }
    let step = h / instance.l;
    let mut records = Vec::with_capacity(n + 1);
    let mut x = instance.x_start.clone();
    for k in 0..=n {
        let g = instance.gradient(&x)?;
        let f = instance.value(&x)?;
        if k == n {
            records.push(Record { k, x, g, d: None, f });
            break;
        }
        let d = oracle.direction(k, &x, &g)?;
        if d.len() != g.len() {
            return Err(Error::DimensionMismatch { expected: g.len(), found: d.len() });
        }
        let gn = norm(&g);
        let en = norm(&sub(&d, &g));
        if !(en <= delta * gn * (1.0 + ORACLE_SLACK)) {
            let ratio = if gn == 0.0 { f64::INFINITY } else { en / gn };
            return Err(Error::OracleViolation { iteration: k, ratio, delta });
        }
        let next = x.iter().zip(&d).map(|(xi, di)| xi - step * di).collect();
        records.push(Record { k, x, g, d: Some(d), f });
        x = next;
    }
    Ok(Trace { h, delta, l: instance.l, n, f_star: instance.f_star(), records })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    /// `(1/L)‖g_N‖² / (f0 − f*)`
    pub ratio_last: f64,
    /// `(1/L) min_{1≤k≤N} ‖g_k‖² / (f0 − f*)`
    pub ratio_min: f64,
    /// `(1/L)‖g_1‖² / (f0 − f1)` for one-step traces with `f1 < f0`.
    pub ratio_to_f1: Option<f64>,
    /// Set when `f0 = f*`; all ratios are then reported as zero.
    pub degenerate: bool,
}

pub fn metrics(trace: &Trace) -> Metrics {
    let f0 = trace.records[0].f;
    let gap = f0 - trace.f_star;
    if !(gap > 0.0) {
        return Metrics { ratio_last: 0.0, ratio_min: 0.0, ratio_to_f1: None, degenerate: true };
    }
    let scaled = |r: &Record| norm_sq(&r.g) / trace.l;
    let last = trace.records.last().expect("trace has N + 1 records");
    let ratio_min = trace.records[1..].iter().map(scaled).fold(f64::INFINITY, f64::min) / gap;
    let ratio_to_f1 = (trace.n == 1)
        .then(|| {
            let r1 = &trace.records[1];
            let decrease = f0 - r1.f;
            (decrease > 0.0).then(|| scaled(r1) / decrease)
        })
        .flatten();
    Metrics { ratio_last: scaled(last) / gap, ratio_min, ratio_to_f1, degenerate: false }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub delta: f64,
    pub h: f64,
    /// `|1 − h(1+δ)|`
    pub factor: f64,
    /// `‖g_{k+1}‖ / ‖g_k‖` for `k = 0, …, N−1`.
    pub observed_factors: Vec<f64>,
    pub max_factor_error: f64,
    pub strictly_increasing: bool,
    /// `factor > 1`; at `h = h_max` the gradient norm stagnates instead.
    pub diverges: bool,
}

/// Runs the quadratic with the `(1+δ)`-scaled oracle at `h ≥ h_max`.
pub fn divergence_probe(delta: f64, h: f64, n: usize) -> Result<DivergenceReport> {
    check_delta(delta)?;
    let h_max = rates::h_max(delta);
    if !(h >= h_max && h.is_finite()) {
        return Err(Error::StepsizeOutOfRange { h, reason: "divergence probes need h >= h_max" });
    }
    let inst = make_quadratic(1.0)?;
    let mut oracle = Oracle::scaled(1.0 + delta, delta)?;
    let trace = run(&inst, &mut oracle, h, delta, n)?;
    let norms: Vec<f64> = trace.records.iter().map(|r| norm(&r.g)).collect();
    let factor = (1.0 - h * (1.0 + delta)).abs();
    let observed_factors: Vec<f64> = norms.windows(2).map(|w| w[1] / w[0]).collect();
    let max_factor_error = observed_factors.iter().map(|o| (o - factor).abs()).fold(0.0, f64::max);
    let strictly_increasing = norms.windows(2).all(|w| w[1] > w[0]);
    Ok(DivergenceReport { delta, h, factor, observed_factors, max_factor_error, strictly_increasing, diverges: factor > 1.0 })
}

/// Adversary drawing the error `d − g` with a uniform direction and a radius
/// uniform in `[0, δ‖g‖]`. Supports dimensions 1 and 2.
#[derive(Debug, Clone)]
pub struct RandomOracle {
    delta: f64,
    rng: ChaCha8Rng,
}

impl RandomOracle {
    pub fn new(delta: f64, seed: u64) -> Result<Self> {
        check_delta(delta)?;
        Ok(Self { delta, rng: ChaCha8Rng::seed_from_u64(seed) })
    }
}

impl GradientOracle for RandomOracle {
    fn direction(&mut self, _k: usize, _x: &[f64], g: &[f64]) -> Result<Vec<f64>> {
        let radius = self.rng.gen::<f64>() * self.delta * norm(g);
        let unit: Vec<f64> = match g.len() {
            1 => vec![if self.rng.gen::<bool>() { 1.0 } else { -1.0 }],
            2 => {
                let t = self.rng.gen::<f64>() * std::f64::consts::TAU;
                vec![t.cos(), t.sin()]
            }
            found => return Err(Error::DimensionMismatch { expected: 2, found }),
        };
        Ok(g.iter().zip(&unit).map(|(gi, ui)| gi + radius * ui).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FuzzSetting {
    pub h: f64,
    pub delta: f64,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzViolation {
    pub setting: FuzzSetting,
    pub instance: String,
    pub oracle_seed: u64,
    pub ratio_min: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub settings: Vec<FuzzSetting>,
    pub runs: usize,
    /// Largest `ratio_min − C̃_N` observed; negative when every run is strictly below the bound.
    pub max_excess: f64,
    pub violations: Vec<FuzzViolation>,
}

/// Runs random admissible oracles on the Huber and quadratic instances, in
/// one and two dimensions, and compares `ratio_min` with `C̃_N + tol`.
///
/// Settings `(h, δ, N)` are drawn with `δ ∈ [0.01, 0.95)`, `h ∈ (0, h_max]`
/// and `N ≤ max_n`. Results depend only on the arguments.
pub fn fuzz_soundness(seed: u64, settings: usize, runs_per_setting: usize, max_n: u32, tol: f64) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let settings: Vec<FuzzSetting> = (0..settings)
        .map(|_| {
            let delta = rng.gen_range(0.01..0.95);
            let h = rates::h_max(delta) * (1.0 - rng.gen::<f64>());
            let n = rng.gen_range(1..=max_n.max(1));
            FuzzSetting { h, delta, n }
        })
        .collect();
    let jobs: Vec<(usize, usize, u64)> = (0..settings.len())
        .flat_map(|s| (0..runs_per_setting).map(move |r| (s, r)))
        .map(|(s, r)| (s, r, rng.gen::<u64>()))
        .collect();

    let outcomes: Vec<Result<(f64, Option<FuzzViolation>)>> = jobs
        .par_iter()
        .map(|&(s, r, oracle_seed)| {
            let setting = settings[s];
            let (name, inst) = match r % 4 {
                0 => ("huber-1d", make_huber(setting.delta, setting.h, setting.n, 1.0)?),
                1 => ("huber-2d", make_huber(setting.delta, setting.h, setting.n, 1.0)?.with_dimension(2)?),
                2 => ("quadratic-1d", make_quadratic(1.0)?),
                _ => ("quadratic-2d", make_quadratic(1.0)?.with_dimension(2)?),
            };
            let mut oracle = RandomOracle::new(setting.delta, oracle_seed)?;
            let trace = run(&inst, &mut oracle, setting.h, setting.delta, setting.n as usize)?;
            let ratio_min = metrics(&trace).ratio_min;
            let bound = rates::rate_n_steps(setting.h, setting.delta, setting.n)?;
            let violation = (ratio_min > bound + tol).then(|| FuzzViolation {
                setting,
                instance: name.to_string(),
                oracle_seed,
                ratio_min,
                bound,
            });
            Ok((ratio_min - bound, violation))
        })
        .collect();

    let mut max_excess = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for outcome in outcomes {
        let (excess, violation) = outcome?;
        max_excess = max_excess.max(excess);
        violations.extend(violation);
    }
    Ok(FuzzReport { settings, runs: jobs.len(), max_excess, violations })
}
