//! Dual certificates for the one-step rates.
//!
//! Writing `Q01`, `Q10` for the two interpolation inequalities between `x0`
//! and `x1` and `Q_inexact` for `δ²‖g0‖² − ‖d0 − g0‖² ≥ 0`, the combination
//! `(λ+1) Q01 + λ Q10 + b Q_inexact` gives
//!
//! ```text
//! f0 − f1 ≥ ½ zᵀ (A + diag(0, 2ρ, 0)) z,    z = (g0, g1, D̃),  D̃ = (d0 − g0)/δ,
//! ```
//!
//! so `f0 − f1 ≥ ρ‖g1‖²` whenever `A ⪰ 0`. The matrix splits as `A = A1 + A2`
//! with `A2` a rank-one positive semidefinite Schur term, and the check
//! reduces to `A1 ⪰ 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, max_abs_diff3, outer3, sym2_eigenvalues, sym3_eigenvalues, sym3_singular_values, Mat2, Mat3};
use crate::rates::{self, Regime};

/// Multipliers of the one-step proof and the resulting rate coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub regime: Regime,
    /// Multiplier of `Q10`; `Q01` carries `λ + 1`.
    pub lambda: f64,
    /// Multiplier of the inexactness inequality.
    pub b: f64,
    /// Certified coefficient in `f0 − f1 ≥ ρ‖g1‖²`.
    pub rho: f64,
}

impl Certificate {
    /// Rate `1/ρ`, infinite when `ρ = 0`.
    pub fn rate(&self) -> f64 {
        1.0 / self.rho
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofMatrices {
    pub a: Mat3,
    pub a1: Mat3,
    pub a2: Mat3,
    /// Factor with `A2 = v vᵀ`.
    pub v: [f64; 3],
}

/// Tolerances of [`verify_certificate_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertTolerances {
    /// Lower bound accepted on the smallest eigenvalue.
    pub psd: f64,
    /// Accepted gap between `1/ρ` and the closed-form rate.
    pub rate_gap: f64,
    /// Accepted error of algebraic identities (splitting, saturation).
    pub identity: f64,
    /// Accepted ratio of the second to the first singular value of `A2`.
    pub rank_one: f64,
}

impl Default for CertTolerances {
    fn default() -> Self {
        Self { psd: 1e-8, rate_gap: 1e-8, identity: 1e-10, rank_one: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CertFailure {
    NegativeMultiplier { name: &'static str, value: f64 },
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    SplitMismatch { residual: f64 },
    NotRankOne { ratio: f64, factorization_residual: f64 },
    RateGap { implied: f64, expected: f64, gap: f64 },
    NotSaturated { a1_00: f64, a1_01: f64 },
}

impl std::fmt::Display for CertFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertFailure::NegativeMultiplier { name, value } => write!(f, "multiplier {name} = {value} is negative"),
            CertFailure::NotPositiveSemidefinite { min_eigenvalue } => {
                write!(f, "matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")
            }
            CertFailure::SplitMismatch { residual } => write!(f, "A != A1 + A2: residual {residual:e}"),
            CertFailure::NotRankOne { ratio, factorization_residual } => write!(
                f,
                "A2 is not rank one: singular value ratio {ratio:e}, factorization residual {factorization_residual:e}"
            ),
            CertFailure::RateGap { implied, expected, gap } => {
                write!(f, "implied rate {implied} differs from closed form {expected} by {gap:e}")
            }
            CertFailure::NotSaturated { a1_00, a1_01 } => {
                write!(f, "A1 not saturated: A1[0][0] = {a1_00:e}, A1[0][1] = {a1_01:e}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertReport {
    pub h: f64,
    pub delta: f64,
    /// `None` for the exact-gradient certificate.
    pub regime: Option<Regime>,
    pub lambda: f64,
    pub b: f64,
    pub rho: f64,
    /// Smallest eigenvalue of `A1` (or of the 2×2 exact-case matrix).
    pub min_eigenvalue: f64,
    /// `max |A − A1 − A2|`; absent for the exact case.
    pub split_residual: Option<f64>,
    /// `σ2(A2)/σ1(A2)`; absent for the exact case.
    pub rank_one_ratio: Option<f64>,
    /// `max |A2 − v vᵀ|`; absent for the exact case.
    pub factorization_residual: Option<f64>,
    pub implied_rate: f64,
    pub expected_rate: f64,
    pub rate_gap: f64,
    /// `(A1[0][0], A1[0][1])` in the intermediate regime.
    pub saturation: Option<(f64, f64)>,
    pub failures: Vec<CertFailure>,
}

impl CertReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_open_stepsize(h: f64, delta: f64) -> Result<()> {
    rates::check_stepsize(h, delta)?;
    if h > 0.0 && h < rates::h_max(delta) {
        Ok(())
    } else {
        Err(Error::StepsizeOutOfRange { h, reason: "certificates need 0 < h < h_max" })
    }
}

/// Multipliers for the regime containing `h`.
pub fn certificate_params(h: f64, delta: f64) -> Result<Certificate> {
    rates::check_delta(delta)?;
    check_open_stepsize(h, delta)?;
    certificate_for_regime(rates::classify_regime(h, delta)?, h, delta)
}

/// Multipliers of the given regime's proof case, evaluated at `h` even if
/// `h` lies outside that regime.
pub fn certificate_for_regime(regime: Regime, h: f64, delta: f64) -> Result<Certificate> {
    rates::check_delta(delta)?;
    let big_h = h * (1.0 + delta);
    let (lambda, b, rho) = match regime {
        Regime::Left => (1.0, 0.5 * h * delta, h * (1.0 - delta)),
        Regime::Right => {
            if big_h <= 1.0 {
                return Err(Error::StepsizeOutOfRange { h, reason: "the right-regime multipliers need h(1+delta) > 1" });
            }
            let m = big_h - 1.0;
            ((2.0 - big_h) / m, 0.5 * h * delta / m, big_h * (2.0 - big_h) / (2.0 * m * m))
        }
        Regime::Intermediate => {
            let lam = rates::lambda_tilde(h, delta)?;
            let b = 1.0 - 0.5 * h * lam - 0.5 / (1.0 + lam);
            let rho = h - 1.0 + 0.5 * h * lam + (h - 1.0) / (2.0 * lam);
            (lam, b, rho)
        }
    };
    Ok(Certificate { regime, lambda, b, rho })
}

/// The matrices `A`, `A1`, `A2` of the one-step proof with entries as printed.
pub fn build_proof_matrices(h: f64, delta: f64, cert: &Certificate) -> Result<ProofMatrices> {
    let Certificate { lambda: l, b, rho, .. } = *cert;
    if !(b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "the Schur split needs b > 0 (got {b}); use the exact-gradient certificate"
        )));
    }
    let hd = h * delta;
    let off = (h - 2.0) * l - 1.0 + h;
    let a = [
        [2.0 * (1.0 - h) * l - 2.0 * b + 1.0, off, -hd * l],
        [off, 2.0 * l + 1.0 - 2.0 * rho, hd * (l + 1.0)],
        [-hd * l, hd * (l + 1.0), 2.0 * b],
    ];
    let s00 = hd * hd * l * l / (2.0 * b);
    let s01 = hd * hd * l * (l + 1.0) / (2.0 * b);
    let s11 = hd * hd * (l + 1.0) * (l + 1.0) / (2.0 * b);
    let a1 = [
        [-2.0 * b - 2.0 * l * (h - 1.0) + 1.0 - s00, h + l * (h - 2.0) - 1.0 + s01, 0.0],
        [h + l * (h - 2.0) - 1.0 + s01, -2.0 * rho + 2.0 * l + 1.0 - s11, 0.0],
        [0.0, 0.0, 0.0],
    ];
    let a2 = [
        [s00, -s01, -hd * l],
        [-s01, s11, hd * (l + 1.0)],
        [-hd * l, hd * (l + 1.0), 2.0 * b],
    ];
    let root = (2.0 * b).sqrt();
    let v = [-hd * l / root, hd * (l + 1.0) / root, root];
    Ok(ProofMatrices { a, a1, a2, v })
}

/// `Σ_ij M_ij ⟨z_i, z_j⟩` for vector-valued `z`.
pub fn gram_quadratic_form(m: &Mat3, z: [&[f64]; 3]) -> f64 {
    let mut total = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            total += m[i][j] * dot(z[i], z[j]);
        }
    }
    total
}

/// Certificate for the regime of `h`, checked at default tolerances.
pub fn verify_certificate(h: f64, delta: f64) -> Result<CertReport> {
    let cert = certificate_params(h, delta)?;
    verify_certificate_with(h, delta, &cert, &CertTolerances::default())
}

/// Checks an arbitrary certificate against the closed-form rate at `(h, δ)`.
pub fn verify_certificate_with(h: f64, delta: f64, cert: &Certificate, tol: &CertTolerances) -> Result<CertReport> {
    rates::check_delta(delta)?;
    check_open_stepsize(h, delta)?;
    let mats = build_proof_matrices(h, delta, cert)?;
    let mut failures = Vec::new();
    for (name, value) in [("lambda", cert.lambda), ("b", cert.b)] {
        if value < 0.0 {
            failures.push(CertFailure::NegativeMultiplier { name, value });
        }
    }

    let min_eigenvalue = sym3_eigenvalues(&mats.a1)[0];
    if !(min_eigenvalue >= -tol.psd) {
        failures.push(CertFailure::NotPositiveSemidefinite { min_eigenvalue });
    }

    let mut sum = mats.a1;
    for (row, add) in sum.iter_mut().zip(&mats.a2) {
        for (x, y) in row.iter_mut().zip(add) {
            *x += y;
        }
    }
    let scale = mats.a.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
    let split_residual = max_abs_diff3(&mats.a, &sum);
    if split_residual > tol.identity * scale {
        failures.push(CertFailure::SplitMismatch { residual: split_residual });
    }

    let sv = sym3_singular_values(&mats.a2);
    let rank_one_ratio = sv[1] / sv[0];
    let factorization_residual = max_abs_diff3(&mats.a2, &outer3(&mats.v));
    let a2_scale = sv[0].max(f64::MIN_POSITIVE);
    if !(rank_one_ratio <= tol.rank_one) || factorization_residual > tol.identity * a2_scale {
        failures.push(CertFailure::NotRankOne { ratio: rank_one_ratio, factorization_residual });
    }

    let implied_rate = cert.rate();
    let expected_rate = rates::rate_one_step_to_f1(h, delta)?.value_or_inf();
    let rate_gap = (implied_rate - expected_rate).abs();
    if !(rate_gap <= tol.rate_gap) {
        failures.push(CertFailure::RateGap { implied: implied_rate, expected: expected_rate, gap: rate_gap });
    }

    let saturation = (cert.regime == Regime::Intermediate).then(|| (mats.a1[0][0], mats.a1[0][1]));
    if let Some((a1_00, a1_01)) = saturation {
        if a1_00.abs() > tol.identity * scale || a1_01.abs() > tol.identity * scale {
            failures.push(CertFailure::NotSaturated { a1_00, a1_01 });
        }
    }

    Ok(CertReport {
        h,
        delta,
        regime: Some(cert.regime),
        lambda: cert.lambda,
        b: cert.b,
        rho: cert.rho,
        min_eigenvalue,
        split_residual: Some(split_residual),
        rank_one_ratio: Some(rank_one_ratio),
        factorization_residual: Some(factorization_residual),
        implied_rate,
        expected_rate,
        rate_gap,
        saturation,
        failures,
    })
}

/// Exact-gradient multipliers `(λ*, ρ*)` at stepsize `h`.
pub fn exact_multipliers(h: f64) -> (f64, f64) {
    let lambda = if h <= 1.5 { 1.0 } else { (2.0 - h) / (h - 1.0) };
    let long = if h == 1.0 { f64::INFINITY } else { 0.5 * ((1.0 - h).powi(-2) - 1.0) };
    (lambda, h.min(long))
}

/// The 2×2 matrix of the exact-gradient one-step proof.
pub fn exact_proof_matrix(h: f64, lambda: f64, rho: f64) -> Mat2 {
    let off = (h - 2.0) * lambda - 1.0 + h;
    [[2.0 * (1.0 - h) * lambda + 1.0, off], [off, 2.0 * lambda + 1.0 - 2.0 * rho]]
}

pub fn verify_certificate_exact(h: f64) -> Result<CertReport> {
    verify_certificate_exact_with(h, &CertTolerances::default())
}

pub fn verify_certificate_exact_with(h: f64, tol: &CertTolerances) -> Result<CertReport> {
    check_open_stepsize(h, 0.0)?;
    let (lambda, rho) = exact_multipliers(h);
    let m = exact_proof_matrix(h, lambda, rho);
    let min_eigenvalue = sym2_eigenvalues(&m)[0];
    let mut failures = Vec::new();
    if !(min_eigenvalue >= -tol.psd) {
        failures.push(CertFailure::NotPositiveSemidefinite { min_eigenvalue });
    }
    let implied_rate = 1.0 / rho;
    let expected_rate = rates::rate_exact_one_step_to_f1(h)?.value_or_inf();
    let rate_gap = (implied_rate - expected_rate).abs();
    if !(rate_gap <= tol.rate_gap) {
        failures.push(CertFailure::RateGap { implied: implied_rate, expected: expected_rate, gap: rate_gap });
    }
    Ok(CertReport {
        h,
        delta: 0.0,
        regime: None,
        lambda,
        b: 0.0,
        rho,
        min_eigenvalue,
        split_residual: None,
        rank_one_ratio: None,
        factorization_residual: None,
        implied_rate,
        expected_rate,
        rate_gap,
        saturation: None,
        failures,
    })
}
