//! Closed-form worst-case rates of gradient descent with relatively inexact
//! gradients on `L`-smooth convex functions.
//!
//! Every rate bounds `(1/L)‖∇f(x)‖²` by a multiple of an optimality measure:
//!
//! * [`rate_one_step_to_f1`]: one step, measured against `f(x0) - f(x1)`;
//! * [`rate_one_step_to_fstar`]: one step, measured against `f(x0) - f*`;
//! * [`rate_n_steps`]: smallest gradient among `N` iterates, against `f(x0) - f*`.
//!
//! The normalized stepsize `h` splits into three regimes, see [`Regime`]. The
//! intermediate regime involves the multiplier [`lambda_tilde`], the largest
//! real root of a cubic in `λ`.

use serde::Serialize;

use crate::cubic::{CubicCoeffs, RealRoot};
use crate::error::{Error, Result};

/// Relative slack accepted on interval endpoints computed in floating point.
const ENDPOINT_SLACK: f64 = 8.0 * f64::EPSILON;

/// Parameters shared by every rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateQuery {
    /// Smoothness constant.
    pub l: f64,
    /// Normalized stepsize; the step actually taken is `h / L`.
    pub h: f64,
    /// Relative inexactness level.
    pub delta: f64,
    /// Number of iterations.
    pub n: u32,
}

impl RateQuery {
    pub fn new(l: f64, h: f64, delta: f64, n: u32) -> Result<Self> {
        check_smoothness(l)?;
        check_delta(delta)?;
        check_stepsize(h, delta)?;
        if n == 0 {
            return Err(Error::InvalidIterationCount);
        }
        Ok(Self { l, h, delta, n })
    }

    pub fn regime(&self) -> Result<Regime> {
        classify_regime(self.h, self.delta)
    }

    pub fn rate_to_f1(&self) -> Result<Bound> {
        rate_one_step_to_f1(self.h, self.delta)
    }

    pub fn rate_to_fstar(&self) -> Result<f64> {
        rate_one_step_to_fstar(self.h, self.delta)
    }

    pub fn rate_n_steps(&self) -> Result<f64> {
        rate_n_steps(self.h, self.delta, self.n)
    }

    pub fn lower_bound(&self) -> Result<f64> {
        lower_bound_n(self.h, self.delta, self.n)
    }
}

/// Stepsize regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// `h < h_LI`: short steps, worst case is a Huber function.
    Left,
    /// `h_LI <= h <= h_IR`: multiplier given by the cubic root.
    Intermediate,
    /// `h_IR < h <= h_max`: long steps, worst case is a quadratic.
    Right,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Left => "left",
            Regime::Intermediate => "intermediate",
            Regime::Right => "right",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Endpoints of the three stepsize regimes for a given inexactness level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeBoundaries {
    /// `3 / (2(1+δ))`
    pub left_intermediate: f64,
    /// `(3δ + 2 − √(4 − 3δ²)) / (2δ(δ+1))`, with limit `3/2` at `δ = 0`.
    pub intermediate_right: f64,
    /// `2 / (1+δ)`
    pub h_max: f64,
}

impl RegimeBoundaries {
    /// The closed interval covered by `regime`.
    pub fn interval(&self, regime: Regime) -> (f64, f64) {
        match regime {
            Regime::Left => (0.0, self.left_intermediate),
            Regime::Intermediate => (self.left_intermediate, self.intermediate_right),
            Regime::Right => (self.intermediate_right, self.h_max),
        }
    }
}

/// A rate that may be infinite, i.e. carry no guarantee at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Bound {
    Finite(f64),
    /// Zero guaranteed progress (`h = 0` or `h = h_max`).
    NoGuarantee,
}

impl Bound {
    fn from_inverse(inv: f64) -> Self {
        if inv > 0.0 && inv.is_finite() {
            Bound::Finite(1.0 / inv)
        } else {
            Bound::NoGuarantee
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Bound::Finite(v) => Some(v),
            Bound::NoGuarantee => None,
        }
    }

    /// Finite value, or `+∞` for [`Bound::NoGuarantee`].
    pub fn value_or_inf(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if (0.0..1.0).contains(&delta) {
        Ok(())
    } else {
        Err(Error::InvalidDelta(delta))
    }
}

pub(crate) fn check_smoothness(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSmoothness(l))
    }
}

pub(crate) fn check_stepsize(h: f64, delta: f64) -> Result<()> {
    let h_max = h_max(delta);
    if h >= 0.0 && h <= h_max * (1.0 + ENDPOINT_SLACK) {
        Ok(())
    } else {
        Err(Error::DivergenceRegion { h, h_max })
    }
}

/// Largest stepsize with a convergence guarantee, `2 / (1+δ)`.
pub fn h_max(delta: f64) -> f64 {
    2.0 / (1.0 + delta)
}

pub fn regime_boundaries(delta: f64) -> Result<RegimeBoundaries> {
    check_delta(delta)?;
    let left_intermediate = 1.5 / (1.0 + delta);
    // 3δ + 2 − √(4−3δ²) = 3δ + 3δ²/(2 + √(4−3δ²)), which removes the 0/0 at δ = 0
    let s = (4.0 - 3.0 * delta * delta).sqrt();
    let intermediate_right = 1.5 * (1.0 + delta / (2.0 + s)) / (1.0 + delta);
    Ok(RegimeBoundaries { left_intermediate, intermediate_right, h_max: h_max(delta) })
}

/// Regime containing `h`. Both endpoints of the intermediate interval belong
/// to [`Regime::Intermediate`].
pub fn classify_regime(h: f64, delta: f64) -> Result<Regime> {
    let b = regime_boundaries(delta)?;
    check_stepsize(h, delta)?;
    Ok(if h < b.left_intermediate {
        Regime::Left
    } else if h <= b.intermediate_right {
        Regime::Intermediate
    } else {
        Regime::Right
    })
}

/// Coefficients of the cubic whose largest real root is `λ̃`.
pub fn cubic_coeffs(h: f64, delta: f64) -> CubicCoeffs {
    let q = (delta * delta - 1.0) * h * h;
    CubicCoeffs::new(q + 2.0 * h, 2.0 * q + 5.0 * h - 4.0, q + 4.0 * h - 4.0, h - 1.0)
}

/// All real roots of the multiplier cubic, ascending, with multiplicities.
pub fn lambda_tilde_roots(h: f64, delta: f64) -> Vec<RealRoot> {
    cubic_coeffs(h, delta).real_roots()
}

/// Intermediate-regime multiplier: the largest real root of the cubic.
pub fn lambda_tilde(h: f64, delta: f64) -> Result<f64> {
    let b = regime_boundaries(delta)?;
    let lo = b.left_intermediate * (1.0 - ENDPOINT_SLACK);
    let hi = b.intermediate_right * (1.0 + ENDPOINT_SLACK);
    if !(lo..=hi).contains(&h) {
        return Err(Error::StepsizeOutOfRange { h, reason: "lambda_tilde needs h in the intermediate regime" });
    }
    match cubic_coeffs(h, delta).largest_real_root() {
        Some(root) if root.value > 0.0 && root.value.is_finite() => Ok(root.value),
        _ => Err(Error::NoRealRoot { h, delta }),
    }
}

/// Exact-gradient one-step rate against `f(x0) - f*`: `max(1/(h+½), 2(1−h)²)`.
pub fn rate_exact_one_step(h: f64) -> Result<f64> {
    rate_exact_n(h, 1)
}

/// Exact-gradient `N`-step rate of the last iterate: `max(1/(Nh+½), 2(1−h)^{2N})`.
pub fn rate_exact_n(h: f64, n: u32) -> Result<f64> {
    check_stepsize(h, 0.0)?;
    if n == 0 {
        return Err(Error::InvalidIterationCount);
    }
    let n_f = f64::from(n);
    Ok((1.0 / (n_f * h + 0.5)).max(2.0 * (1.0 - h).powi(2 * n as i32)))
}

/// Exact-gradient one-step rate against `f(x0) - f(x1)`: `max(1/h, 2/((1−h)⁻²−1))`.
pub fn rate_exact_one_step_to_f1(h: f64) -> Result<Bound> {
    check_stepsize(h, 0.0)?;
    // ρ = min(h, ((1−h)⁻² − 1)/2); the second term is +∞ at h = 1
    let long = if h == 1.0 { f64::INFINITY } else { 0.5 * ((1.0 - h).powi(-2) - 1.0) };
    Ok(Bound::from_inverse(h.min(long)))
}

/// Branch formula of `C(h, δ)` for a given regime, without checking that
/// `h` lies in that regime. Used to compare adjacent branches at a boundary.
pub fn branch_rate_to_f1(regime: Regime, h: f64, delta: f64) -> Result<Bound> {
    Ok(match regime {
        Regime::Left => Bound::from_inverse(h * (1.0 - delta)),
        Regime::Intermediate => {
            let lam = lambda_tilde(h, delta)?;
            Bound::from_inverse(
                (h * lam * lam + 2.0 * (h - 1.0) * lam + h - 1.0) / (2.0 * lam),
            )
        }
        Regime::Right => {
            let q = 1.0 - h * (1.0 + delta);
            Bound::from_inverse(0.5 * (q.powi(-2) - 1.0))
        }
    })
}

/// Branch formula of `C̃(h, δ)`; see [`branch_rate_to_f1`].
pub fn branch_rate_to_fstar(regime: Regime, h: f64, delta: f64) -> Result<f64> {
    Ok(match regime {
        Regime::Left => 1.0 / (h * (1.0 - delta) + 0.5),
        Regime::Intermediate => {
            let lam = lambda_tilde(h, delta)?;
            2.0 * lam / (h * lam * lam + (2.0 * h - 1.0) * lam + h - 1.0)
        }
        Regime::Right => 2.0 * (1.0 - h * (1.0 + delta)).powi(2),
    })
}

/// Branch formula of `C̃_N(h, δ)`; see [`branch_rate_to_f1`].
pub fn branch_rate_n_steps(regime: Regime, h: f64, delta: f64, n: u32) -> Result<f64> {
    let n_f = f64::from(n);
    Ok(match regime {
        Regime::Left => 1.0 / (n_f * h * (1.0 - delta) + 0.5),
        Regime::Intermediate => {
            let lam = lambda_tilde(h, delta)?;
            2.0 * lam / (n_f * (h * lam * lam + 2.0 * (h - 1.0) * lam + h - 1.0) + lam)
        }
        Regime::Right => {
            let q = 1.0 - h * (1.0 + delta);
            2.0 / (n_f * q.powi(-2) - (n_f - 1.0))
        }
    })
}

/// One-step worst-case rate `C(h, δ)` against `f(x0) - f(x1)`.
///
/// Returns [`Bound::NoGuarantee`] at `h = 0` and `h = h_max`.
pub fn rate_one_step_to_f1(h: f64, delta: f64) -> Result<Bound> {
    if delta == 0.0 {
        return rate_exact_one_step_to_f1(h);
    }
    let regime = classify_regime(h, delta)?;
    branch_rate_to_f1(regime, h, delta)
}

/// One-step worst-case rate `C̃(h, δ)` against `f(x0) - f*`.
pub fn rate_one_step_to_fstar(h: f64, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return rate_exact_one_step(h);
    }
    let regime = classify_regime(h, delta)?;
    branch_rate_to_fstar(regime, h, delta)
}

/// Upper bound `C̃_N(h, δ)` on `(1/L) min_{1≤k≤N} ‖∇f(x_k)‖² / (f(x0) − f*)`.
///
/// At `δ = 0` the intermediate regime is the single point `h = 3/2`, where
/// the left and right branches agree, so no cubic is solved.
pub fn rate_n_steps(h: f64, delta: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidIterationCount);
    }
    let regime = classify_regime(h, delta)?;
    let regime = match (delta == 0.0, regime) {
        (true, Regime::Intermediate) => Regime::Left,
        (_, r) => r,
    };
    branch_rate_n_steps(regime, h, delta, n)
}

/// Rate attained by the explicit Huber and quadratic constructions after `N`
/// steps: `max(1/(Nh(1−δ)+½), 2(1−h(1+δ))^{2N})`.
pub fn lower_bound_n(h: f64, delta: f64, n: u32) -> Result<f64> {
    check_delta(delta)?;
    check_stepsize(h, delta)?;
    if n == 0 {
        return Err(Error::InvalidIterationCount);
    }
    let n_f = f64::from(n);
    let huber = 1.0 / (n_f * h * (1.0 - delta) + 0.5);
    let quadratic = 2.0 * (1.0 - h * (1.0 + delta)).powi(2 * n as i32);
    Ok(huber.max(quadratic))
}

/// Largest stepsize for which convergence was previously established,
/// `2((1−δ)/(1+δ))^{3/2}`.
pub fn h_max_prior(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(2.0 * ((1.0 - delta) / (1.0 + delta)).powf(1.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HMaxComparison {
    pub delta: f64,
    pub ours: f64,
    pub prior: f64,
    /// `ours / prior`
    pub ratio: f64,
}

pub fn compare_h_max(delta: f64) -> Result<HMaxComparison> {
    let prior = h_max_prior(delta)?;
    let ours = h_max(delta);
    Ok(HMaxComparison { delta, ours, prior, ratio: ours / prior })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn boundaries_at_zero_delta() {
        let b = regime_boundaries(0.0).unwrap();
        assert_eq!(b.left_intermediate, 1.5);
        assert_eq!(b.intermediate_right, 1.5);
        assert_eq!(b.h_max, 2.0);
    }

    #[test]
    fn boundaries_at_half() {
        let b = regime_boundaries(0.5).unwrap();
        assert_eq!(b.left_intermediate, 1.0);
        let direct = (3.5 - 3.25f64.sqrt()) / 1.5;
        assert!(rel(b.intermediate_right, direct) < 1e-15);
        assert!((b.h_max - 4.0 / 3.0).abs() < 1e-15);
        assert!(b.left_intermediate <= b.intermediate_right && b.intermediate_right <= b.h_max);
    }

    #[test]
    fn h_max_tends_to_one() {
        let b = regime_boundaries(1.0 - 1e-12).unwrap();
        assert!((b.h_max - 1.0).abs() < 1e-11);
    }

    #[test]
    fn rejects_bad_delta() {
        assert!(matches!(regime_boundaries(1.0), Err(Error::InvalidDelta(_))));
        assert!(matches!(regime_boundaries(-0.1), Err(Error::InvalidDelta(_))));
        assert!(regime_boundaries(f64::NAN).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_regime(0.5, 0.3).unwrap(), Regime::Left);
        assert_eq!(classify_regime(1.0, 0.5).unwrap(), Regime::Intermediate);
        let b = regime_boundaries(0.5).unwrap();
        assert_eq!(classify_regime(b.intermediate_right, 0.5).unwrap(), Regime::Intermediate);
        let b = regime_boundaries(0.1).unwrap();
        let expected = if 1.35 < b.left_intermediate {
            Regime::Left
        } else if 1.35 <= b.intermediate_right {
            Regime::Intermediate
        } else {
            Regime::Right
        };
        assert_eq!(classify_regime(1.35, 0.1).unwrap(), expected);
        assert!(matches!(classify_regime(1.5, 0.5), Err(Error::DivergenceRegion { .. })));
        assert!(classify_regime(-0.1, 0.5).is_err());
    }

    #[test]
    fn classify_at_zero_delta() {
        assert_eq!(classify_regime(1.4, 0.0).unwrap(), Regime::Left);
        assert_eq!(classify_regime(1.5, 0.0).unwrap(), Regime::Intermediate);
        assert_eq!(classify_regime(1.6, 0.0).unwrap(), Regime::Right);
    }

    #[test]
    fn cubic_coeff_examples() {
        let c = cubic_coeffs(1.5, 0.0);
        assert_eq!((c.c3, c.c2, c.c1, c.c0), (0.75, -1.0, -0.25, 0.5));
        let c = cubic_coeffs(1.0, 0.5);
        assert_eq!((c.c3, c.c2, c.c1, c.c0), (1.25, -0.5, -0.75, 0.0));
        let c = cubic_coeffs(1e-9, 0.5);
        assert!(c.c3 > 0.0 && c.c3 < 1e-8);
    }

    #[test]
    fn exact_case_examples() {
        for n in [1, 2, 7, 40] {
            assert!(rel(rate_exact_n(1.0, n).unwrap(), 1.0 / (f64::from(n) + 0.5)) < 1e-15);
        }
        assert_eq!(rate_exact_n(2.0, 1).unwrap(), 2.0);
        assert_eq!(rate_exact_one_step(0.0).unwrap(), 2.0);
        assert!(rate_exact_one_step(2.1).is_err());
        assert_eq!(rate_exact_one_step_to_f1(1.0).unwrap(), Bound::Finite(1.0));
        assert_eq!(rate_exact_one_step_to_f1(0.0).unwrap(), Bound::NoGuarantee);
        assert_eq!(rate_exact_one_step_to_f1(2.0).unwrap(), Bound::NoGuarantee);
    }

    #[test]
    fn one_step_examples() {
        let c = rate_one_step_to_f1(0.75, 0.3).unwrap();
        assert!(rel(c.finite().unwrap(), 1.0 / 0.525) < 1e-15);
        assert_eq!(rate_one_step_to_f1(h_max(0.3), 0.3).unwrap(), Bound::NoGuarantee);
        assert_eq!(rate_one_step_to_f1(0.0, 0.3).unwrap(), Bound::NoGuarantee);
        assert!(rel(rate_one_step_to_fstar(1.0, 0.0).unwrap(), 2.0 / 3.0) < 1e-15);
        for delta in [0.1, 0.5, 0.9] {
            assert_eq!(rate_one_step_to_fstar(0.0, delta).unwrap(), 2.0);
            assert!(rel(rate_one_step_to_fstar(h_max(delta), delta).unwrap(), 2.0) < 1e-14);
        }
    }

    #[test]
    fn n_step_examples() {
        assert!(rel(rate_n_steps(0.75, 0.3, 20).unwrap(), 1.0 / 11.0) < 1e-14);
        for n in [1, 3, 50] {
            assert!(rel(rate_n_steps(h_max(0.4), 0.4, n).unwrap(), 2.0) < 1e-13);
        }
        assert!(matches!(rate_n_steps(0.5, 0.3, 0), Err(Error::InvalidIterationCount)));
    }

    #[test]
    fn lower_bound_examples() {
        let h = 1.0 / 1.3;
        let lb = lower_bound_n(h, 0.3, 4).unwrap();
        assert!(rel(lb, 1.0 / (4.0 * h * 0.7 + 0.5)) < 1e-15);
        let lb = lower_bound_n(1.2, 0.5, 5).unwrap();
        let quad = 2.0 * 0.8f64.powi(10);
        assert!(rel(lb, quad.max(1.0 / (5.0 * 1.2 * 0.5 + 0.5))) < 1e-15);
    }

    #[test]
    fn h_max_comparison() {
        let c = compare_h_max(0.0).unwrap();
        assert_eq!((c.ours, c.prior, c.ratio), (2.0, 2.0, 1.0));
        let c = compare_h_max(0.8).unwrap();
        assert!(rel(c.ours, 2.0 / 1.8) < 1e-15);
        assert!(rel(c.prior, 2.0 / 27.0) < 1e-14);
        assert!(rel(c.ratio, 15.0) < 1e-13);
        let c = compare_h_max(0.5).unwrap();
        assert!(rel(c.prior, 2.0 * (1.0f64 / 3.0).powf(1.5)) < 1e-15);
    }

    #[test]
    fn query_validates() {
        assert!(RateQuery::new(1.0, 0.5, 0.2, 1).is_ok());
        assert!(matches!(RateQuery::new(0.0, 0.5, 0.2, 1), Err(Error::InvalidSmoothness(_))));
        assert!(matches!(RateQuery::new(1.0, 0.5, 0.2, 0), Err(Error::InvalidIterationCount)));
        assert!(RateQuery::new(1.0, 1.9, 0.2, 1).is_err());
        let q = RateQuery::new(2.0, 0.75, 0.3, 20).unwrap();
        assert!(rel(q.rate_n_steps().unwrap(), 1.0 / 11.0) < 1e-14);
        assert_eq!(q.regime().unwrap(), Regime::Left);
    }
}
