//! Interpolation conditions for `L`-smooth convex functions.
//!
//! A finite set `{(x_i, g_i, f_i)}` is the trace of some `L`-smooth convex
//! function if and only if, for every ordered pair,
//!
//! ```text
//! f_i ≥ f_j + ⟨g_j, x_i − x_j⟩ + (1/2L)‖g_i − g_j‖².
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq, sub};

/// A labelled sample `(x, ∇f(x), f(x))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PepPoint {
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    pub f: f64,
}

impl PepPoint {
    pub fn new(x: Vec<f64>, g: Vec<f64>, f: f64) -> Self {
        Self { x, g, f }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Slack of the interpolation inequality from `j` to `i`.
pub fn pair_slack(pi: &PepPoint, pj: &PepPoint, l: f64) -> f64 {
    let dx = sub(&pi.x, &pj.x);
    let dg = sub(&pi.g, &pj.g);
    pi.f - pj.f - dot(&pj.g, &dx) - norm_sq(&dg) / (2.0 * l)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationReport {
    /// `slacks[k] = (i, j, slack)` for every ordered pair `i ≠ j`.
    pub slacks: Vec<(usize, usize, f64)>,
    pub min_slack: f64,
    /// The pair achieving the minimum slack when it is below `-tol`.
    pub violation: Option<(usize, usize)>,
}

impl InterpolationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn interpolation_check(points: &[PepPoint], l: f64, tol: f64) -> Result<InterpolationReport> {
    crate::rates::check_smoothness(l)?;
    let dim = points.first().map_or(0, PepPoint::dim);
    for p in points {
        for len in [p.x.len(), p.g.len()] {
            if len != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: len });
            }
        }
    }
    let mut slacks = Vec::with_capacity(points.len() * points.len().saturating_sub(1));
    let mut min_slack = f64::INFINITY;
    let mut arg = None;
    for (i, pi) in points.iter().enumerate() {
        for (j, pj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let s = pair_slack(pi, pj, l);
            slacks.push((i, j, s));
            if s < min_slack {
                min_slack = s;
                arg = Some((i, j));
            }
        }
    }
    let violation = if min_slack < -tol { arg } else { None };
    Ok(InterpolationReport { slacks, min_slack, violation })
}
