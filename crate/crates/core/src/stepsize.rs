//! Stepsize selection by minimizing the `N`-step bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rates::{self, Regime};

const SCAN_RESOLUTION: f64 = 1e-4;
const GOLDEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalStepsize {
    pub h: f64,
    pub rate: f64,
    pub regime: Regime,
}

/// Minimizer of `h ↦ C̃_N(h, δ)` over `[0, h_max]`.
///
/// Each regime is scanned at resolution `1e-4`; the best sample of each
/// regime is refined by golden-section search inside its bracket, clipped
/// to the regime, and the overall best refinement is returned.
pub fn optimal_stepsize(delta: f64, n: u32) -> Result<OptimalStepsize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidDelta(delta));
    }
    if n == 0 {
        return Err(Error::InvalidIterationCount);
    }
    let bounds = rates::regime_boundaries(delta)?;
    let f = |h: f64| rates::rate_n_steps(h, delta, n);

    let mut best: Option<OptimalStepsize> = None;
    for regime in [Regime::Left, Regime::Intermediate, Regime::Right] {
        let (lo, hi) = bounds.interval(regime);
        if hi <= lo {
            continue;
        }
        let steps = ((hi - lo) / SCAN_RESOLUTION).ceil().max(1.0) as usize;
        let grid = |i: usize| if i == steps { hi } else { lo + (hi - lo) * i as f64 / steps as f64 };
        let mut arg = 0;
        let mut val = f64::INFINITY;
        for i in 0..=steps {
            let v = rates::branch_rate_n_steps(regime, grid(i), delta, n)?;
            if v < val {
                val = v;
                arg = i;
            }
        }
        let a = grid(arg.saturating_sub(1));
        let b = grid((arg + 1).min(steps));
        let g = |h: f64| rates::branch_rate_n_steps(regime, h, delta, n);
        let h = golden_section(g, a, b)?;
        let candidate = [(h, g(h)?), (grid(arg), val)]
            .into_iter()
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("two candidates");
        if best.map_or(true, |b| candidate.1 < b.rate) {
            best = Some(OptimalStepsize { h: candidate.0, rate: candidate.1, regime });
        }
    }
    let best = best.expect("the left regime is never empty for delta < 1");
    // report the rate through the public entry point for consistency
    Ok(OptimalStepsize { rate: f(best.h)?, regime: rates::classify_regime(best.h, delta)?, ..best })
}

/// Right endpoint of the intermediate regime, a closed-form stand-in for the
/// optimal stepsize that does not depend on `N`.
pub fn approx_optimal_stepsize(delta: f64) -> Result<f64> {
    Ok(rates::regime_boundaries(delta)?.intermediate_right)
}

fn golden_section(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > GOLDEN_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let h = golden_section(|x| Ok((x - 0.3).powi(2)), 0.0, 1.0).unwrap();
        assert!((h - 0.3).abs() < 1e-9);
    }

    #[test]
    fn optimum_lies_in_intermediate_regime() {
        for delta in [0.1, 0.3, 0.5, 0.8, 0.9] {
            let b = rates::regime_boundaries(delta).unwrap();
            for n in [1, 7, 50] {
                let opt = optimal_stepsize(delta, n).unwrap();
                assert!(opt.h >= b.left_intermediate && opt.h <= b.intermediate_right, "{delta} {n} {opt:?}");
                assert_eq!(opt.regime, Regime::Intermediate);
                for k in 0..=200 {
                    let h = b.h_max * k as f64 / 200.0;
                    assert!(rates::rate_n_steps(h, delta, n).unwrap() >= opt.rate - 1e-12);
                }
            }
        }
    }

    #[test]
    fn optimum_tends_to_three_halves() {
        let opt = optimal_stepsize(1e-6, 3).unwrap();
        assert!((opt.h - 1.5).abs() < 1e-4, "{opt:?}");
    }

    #[test]
    fn approx_is_right_endpoint() {
        let b = rates::regime_boundaries(0.4).unwrap();
        assert_eq!(approx_optimal_stepsize(0.4).unwrap(), b.intermediate_right);
        assert!(optimal_stepsize(0.0, 1).is_err());
    }
}
