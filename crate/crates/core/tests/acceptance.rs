//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status if any criterion fails.
//!
//! Expected values are recomputed here from their closed forms rather than
//! taken from the library.

use std::time::{Duration, Instant};

use rigd_core::certificate::{verify_certificate_exact, verify_certificate};
use rigd_core::instances::{make_huber, make_quadratic, Oracle};
use rigd_core::pep::{compare_1d_2d, orthogonality_diagnostic, search_one_step, Criterion, SearchConfig};
use rigd_core::rates::{
    self, branch_rate_n_steps, branch_rate_to_f1, branch_rate_to_fstar, regime_boundaries, Regime,
};
use rigd_core::simulator::{divergence_probe, fuzz_soundness, metrics, run};
use rigd_core::stepsize::optimal_stepsize;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn deltas(lo: u32, hi: u32, step: u32, scale: f64) -> Vec<f64> {
    (lo..=hi).step_by(step as usize).map(|k| f64::from(k) / scale).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let delta = 1e-10;
    let h_max = rates::h_max(delta);
    let mut worst = 0.0f64;
    for h in linspace(0.0, 2.0, 200) {
        let h = h.min(h_max);
        let got = rates::rate_one_step_to_fstar(h, delta).unwrap();
        let exact = (1.0 / (h + 0.5)).max(2.0 * (1.0 - h) * (1.0 - h));
        worst = worst.max((got - exact).abs());
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && elapsed < Duration::from_secs(1),
        format!("max |C~(h, 1e-10) - exact| = {worst:.2e} over 200 h; {elapsed:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for delta in deltas(5, 95, 5, 100.0) {
        let b = regime_boundaries(delta).unwrap();
        for (h, lo, hi) in [
            (b.left_intermediate, Regime::Left, Regime::Intermediate),
            (b.intermediate_right, Regime::Intermediate, Regime::Right),
        ] {
            let c = |r| branch_rate_to_f1(r, h, delta).unwrap().finite().unwrap();
            worst = worst.max(rel(c(lo), c(hi)));
            let ct = |r| branch_rate_to_fstar(r, h, delta).unwrap();
            worst = worst.max(rel(ct(lo), ct(hi)));
            for n in [1, 5, 20] {
                let cn = |r| branch_rate_n_steps(r, h, delta, n).unwrap();
                worst = worst.max(rel(cn(lo), cn(hi)));
            }
        }
    }
    outcome(worst <= 1e-10, format!("max relative branch gap at h_LI and h_IR = {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut min_eig = f64::INFINITY;
    let mut max_gap = 0.0f64;
    let mut max_rank = 0.0f64;
    let mut min_b = f64::INFINITY;
    let mut failures = 0;
    for delta in deltas(1, 9, 1, 10.0) {
        let h_max = rates::h_max(delta);
        for k in 1..=100 {
            let h = h_max * f64::from(k) / 101.0;
            let r = verify_certificate(h, delta).unwrap();
            min_eig = min_eig.min(r.min_eigenvalue);
            max_gap = max_gap.max(r.rate_gap);
            max_rank = max_rank.max(r.rank_one_ratio.unwrap());
            if r.regime == Some(Regime::Intermediate) {
                min_b = min_b.min(r.b);
            }
            failures += usize::from(!r.passed());
        }
    }
    let mut exact_failures = 0;
    for k in 1..=200 {
        let h = 2.0 * f64::from(k) / 201.0;
        exact_failures += usize::from(!verify_certificate_exact(h).unwrap().passed());
    }
    let elapsed = start.elapsed();
    let passed = failures == 0
        && exact_failures == 0
        && min_eig >= -1e-8
        && max_gap <= 1e-8
        && max_rank <= 1e-12
        && elapsed < Duration::from_secs(10);
    outcome(
        passed,
        format!(
            "900 certificates: min eig(A1) = {min_eig:.2e}, max |1/rho - C| = {max_gap:.2e}, \
             max rank-one ratio = {max_rank:.2e}, min intermediate b = {min_b:.4}, failures = {failures}; \
             200 exact certificates, failures = {exact_failures}; {elapsed:.2?}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    for delta in [0.1, 0.5, 0.8] {
        let h = 0.9 * 1.5 / (1.0 + delta);
        for n in [1u32, 5, 20] {
            let inst = make_huber(delta, h, n, 1.0).unwrap();
            let mut oracle = Oracle::scaled(1.0 - delta, delta).unwrap();
            let trace = run(&inst, &mut oracle, h, delta, n as usize).unwrap();
            let want = 1.0 / (f64::from(n) * h * (1.0 - delta) + 0.5);
            worst = worst.max(rel(metrics(&trace).ratio_min, want));
        }
    }
    outcome(worst <= 1e-9, format!("max relative error of Huber ratio_min vs 1/(Nh(1-d)+1/2) = {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    let mut max_excess = f64::NEG_INFINITY;
    for delta in [0.1, 0.5, 0.8] {
        let b = regime_boundaries(delta).unwrap();
        for h in [b.intermediate_right + 1e-6, b.h_max] {
            for n in [1u32, 5, 20] {
                let inst = make_quadratic(1.0).unwrap();
                let mut oracle = Oracle::scaled(1.0 + delta, delta).unwrap();
                let trace = run(&inst, &mut oracle, h, delta, n as usize).unwrap();
                let got = metrics(&trace).ratio_last;
                let want = 2.0 * (1.0 - h * (1.0 + delta)).powi(2 * n as i32);
                worst = worst.max(rel(got, want));
                max_excess = max_excess.max(got - rates::rate_n_steps(h, delta, n).unwrap());
            }
        }
    }
    outcome(
        worst <= 1e-9 && max_excess <= 1e-9,
        format!("max relative error vs 2(1-h(1+d))^(2N) = {worst:.2e}; max excess over C~_N = {max_excess:.2e}"),
    )
}

fn criterion_6() -> Outcome {
    const BUDGET: usize = 10_000;
    let mut passed = true;
    let mut parts = Vec::new();
    for delta in [0.1, 0.5, 0.8] {
        let b = regime_boundaries(delta).unwrap();
        for (label, h) in [("left", 0.5 * b.left_intermediate), ("right", 0.5 * (b.intermediate_right + b.h_max))] {
            let start = Instant::now();
            let bound = rates::rate_one_step_to_fstar(h, delta).unwrap();
            let r = search_one_step(h, delta, &SearchConfig::new(Criterion::ToFstar, 2, BUDGET, 0)).unwrap();
            let elapsed = start.elapsed();
            let ok = r.value >= 0.99 * bound && r.value <= bound + 1e-6 && elapsed < Duration::from_secs(60);
            passed &= ok;
            parts.push(format!("d={delta} {label}: {:.4}x C~ ({elapsed:.1?})", r.value / bound));
        }
        let start = Instant::now();
        let h = optimal_stepsize(delta, 1).unwrap().h;
        let bound = rates::rate_one_step_to_fstar(h, delta).unwrap();
        let cmp = compare_1d_2d(h, delta, BUDGET, 0).unwrap();
        let elapsed = start.elapsed();
        let (v1, v2) = (cmp.best_1d.value, cmp.best_2d.value);
        let cos = orthogonality_diagnostic(&cmp.best_2d.candidate).unwrap();
        let ok = v2 >= 0.99 * bound && v2 <= bound + 1e-6 && v1 < v2 && elapsed < Duration::from_secs(60);
        passed &= ok;
        parts.push(format!(
            "d={delta} h_opt: 1D {:.4}x, 2D {:.4}x C~, cos(e,g0) = {:.3} ({elapsed:.1?})",
            v1 / bound,
            v2 / bound,
            cos.cos_error_gradient.unwrap_or(f64::NAN)
        ));
    }
    outcome(passed, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let mut strict = true;
    for delta in deltas(1, 99, 1, 100.0) {
        let ours = 2.0 / (1.0 + delta);
        let prior = 2.0 * ((1.0 - delta) / (1.0 + delta)).powf(1.5);
        let c = rates::compare_h_max(delta).unwrap();
        strict &= c.ours > c.prior && rel(c.ours, ours) < 1e-15 && rel(c.prior, prior) < 1e-14;
    }
    let zero = rates::compare_h_max(0.0).unwrap();
    let ratio = rates::compare_h_max(0.8).unwrap().ratio;
    let want = (2.0 / 1.8) / (2.0 / 27.0);
    let passed = strict && zero.ours == zero.prior && (ratio - want).abs() <= 1e-10;
    outcome(passed, format!("ours > prior on 0.01:0.99:0.01, equal at 0; ratio at 0.8 = {ratio:.12}"))
}

fn criterion_8() -> Outcome {
    let mut passed = true;
    let mut worst = 0.0f64;
    for delta in [0.0, 0.1, 0.5, 0.8] {
        let h = 1.1 * rates::h_max(delta);
        let r = divergence_probe(delta, h, 50).unwrap();
        let factor = (1.0 - h * (1.0 + delta)).abs();
        passed &= r.strictly_increasing && factor > 1.0;
        worst = worst.max(r.observed_factors.iter().map(|o| (o - factor).abs()).fold(0.0, f64::max));
    }
    outcome(passed && worst <= 1e-12, format!("gradient norms strictly increasing; max factor error = {worst:.2e}"))
}

fn criterion_9() -> Outcome {
    let mut passed = true;
    let mut worst = 0.0f64;
    for delta in deltas(2, 9, 1, 10.0) {
        let b = regime_boundaries(delta).unwrap();
        for n in [1, 5, 20, 50] {
            let opt = optimal_stepsize(delta, n).unwrap();
            passed &= opt.h >= b.left_intermediate && opt.h <= b.intermediate_right;
            let ratio = rates::rate_n_steps(b.intermediate_right, delta, n).unwrap() / opt.rate;
            worst = worst.max(ratio);
        }
    }
    outcome(passed && worst <= 1.05, format!("h_opt in [h_LI, h_IR]; max C~_N(h_IR)/C~_N(h_opt) = {worst:.5}"))
}

fn criterion_10() -> Outcome {
    let r = fuzz_soundness(2024, 20, 500, 50, 1e-9).unwrap();
    outcome(
        r.runs >= 10_000 && r.violations.is_empty(),
        format!(
            "{} runs over {} settings: {} violations, max ratio_min - C~_N = {:.2e}",
            r.runs,
            r.settings.len(),
            r.violations.len(),
            r.max_excess
        ),
    )
}

type Check = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Check; 10] = [
        ("exact-case regression", criterion_1),
        ("regime continuity", criterion_2),
        ("certificate suite", criterion_3),
        ("left-regime tightness", criterion_4),
        ("right-regime attainment", criterion_5),
        ("one-step search certification", criterion_6),
        ("h_max dominance", criterion_7),
        ("divergence beyond h_max", criterion_8),
        ("optimal-stepsize approximation", criterion_9),
        ("fuzzed soundness", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("acceptance {:>2} [{tag}] {name}: {}", i + 1, o.detail);
        if !o.passed {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
