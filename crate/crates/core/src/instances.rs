//! Worst-case functions and adversarial inexact-gradient oracles.
//!
//! Both instances are radial, minimized at the origin with `f* = 0`, and
//! scaled so that `f(x_start) = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interpolation::PepPoint;
use crate::linalg::norm;
use crate::rates::{check_delta, check_smoothness, check_stepsize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    Huber,
    Quadratic,
}

/// A closed-form `L`-smooth convex function with a prescribed start point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub kind: InstanceKind,
    pub l: f64,
    /// Slope of the linear branch (Huber only).
    pub slope: Option<f64>,
    /// Radius where the quadratic branch ends, `slope / L` (Huber only).
    pub threshold: Option<f64>,
    pub x_start: Vec<f64>,
    pub dimension: usize,
}

/// Huber function whose linear branch is walked down for exactly `N` steps by
/// the `(1−δ)`-scaled oracle, ending at the kink.
pub fn make_huber(delta: f64, h: f64, n: u32, l: f64) -> Result<Instance> {
    check_delta(delta)?;
    check_smoothness(l)?;
    check_stepsize(h, delta)?;
    if n == 0 {
        return Err(Error::InvalidIterationCount);
    }
    let walk = f64::from(n) * h * (1.0 - delta);
    let unit_slope = 1.0 / (walk + 0.5).sqrt();
    let slope = unit_slope * l.sqrt();
    let threshold = slope / l;
    let x0 = threshold + walk * slope / l;
    Ok(Instance {
        kind: InstanceKind::Huber,
        l,
        slope: Some(slope),
        threshold: Some(threshold),
        x_start: vec![x0],
        dimension: 1,
    })
}

/// `f(x) = L‖x‖²/2` started at `√(2/L)`.
pub fn make_quadratic(l: f64) -> Result<Instance> {
    check_smoothness(l)?;
    Ok(Instance {
        kind: InstanceKind::Quadratic,
        l,
        slope: None,
        threshold: None,
        x_start: vec![(2.0 / l).sqrt()],
        dimension: 1,
    })
}

impl Instance {
    /// The same radial function on `R^dimension`, started at `(x0, 0, …)`.
    pub fn with_dimension(mut self, dimension: usize) -> Result<Self> {
        if !(1..=2).contains(&dimension) {
            return Err(Error::InvalidArgument(format!("instances exist in dimension 1 or 2, not {dimension}")));
        }
        let x0 = norm(&self.x_start);
        self.x_start = std::iter::once(x0).chain(std::iter::repeat(0.0)).take(dimension).collect();
        self.dimension = dimension;
        Ok(self)
    }

    pub fn f_star(&self) -> f64 {
        0.0
    }

    pub fn minimizer(&self) -> Vec<f64> {
        vec![0.0; self.dimension]
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dimension {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dimension, found: x.len() })
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let r = norm(x);
        Ok(match (self.kind, self.slope, self.threshold) {
            (InstanceKind::Huber, Some(s), Some(t)) if r > t => s * r - 0.5 * s * t,
            _ => 0.5 * self.l * r * r,
        })
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let r = norm(x);
        Ok(match (self.kind, self.slope, self.threshold) {
            (InstanceKind::Huber, Some(s), Some(t)) if r > t => x.iter().map(|v| s * v / r).collect(),
            _ => x.iter().map(|v| self.l * v).collect(),
        })
    }

    pub fn point(&self, x: &[f64]) -> Result<PepPoint> {
        Ok(PepPoint::new(x.to_vec(), self.gradient(x)?, self.value(x)?))
    }
}

/// Rotation sense used to build `g⊥` in the orthogonal oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `g⊥ = (−g_y, g_x)`.
    #[default]
    Positive,
    /// `g⊥ = (g_y, −g_x)`.
    Negative,
}

/// Deterministic inexact-gradient oracles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Oracle {
    Exact,
    /// `d = factor · g`.
    Scaled { factor: f64 },
    /// `d = (1−δ²) g + δ√(1−δ²) g⊥`: the error `d − g` has norm `δ‖g‖`
    /// and is orthogonal to `d`.
    Orthogonal { delta: f64, orientation: Orientation },
}

/// Anything producing a direction `d_k` from `(x_k, ∇f(x_k))`.
pub trait GradientOracle {
    fn direction(&mut self, k: usize, x: &[f64], g: &[f64]) -> Result<Vec<f64>>;
}

impl Oracle {
    /// `d = factor · g`, admissible when `|factor − 1| ≤ δ`.
    pub fn scaled(factor: f64, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        // 1 ± δ must be accepted even though the subtraction may round up
        if factor.is_finite() && (factor - 1.0).abs() <= delta + 4.0 * f64::EPSILON {
            Ok(Oracle::Scaled { factor })
        } else {
            Err(Error::InadmissibleOracle { factor, delta })
        }
    }

    pub fn orthogonal(delta: f64, orientation: Orientation) -> Result<Self> {
        check_delta(delta)?;
        Ok(Oracle::Orthogonal { delta, orientation })
    }

    pub fn apply(&self, g: &[f64]) -> Result<Vec<f64>> {
        match *self {
            Oracle::Exact => Ok(g.to_vec()),
            Oracle::Scaled { factor } => Ok(g.iter().map(|v| factor * v).collect()),
            Oracle::Orthogonal { delta, orientation } => {
                if g.len() != 2 {
                    return Err(Error::DimensionMismatch { expected: 2, found: g.len() });
                }
                let perp = match orientation {
                    Orientation::Positive => [-g[1], g[0]],
                    Orientation::Negative => [g[1], -g[0]],
                };
                let along = 1.0 - delta * delta;
                let across = delta * along.sqrt();
                Ok(vec![along * g[0] + across * perp[0], along * g[1] + across * perp[1]])
            }
        }
    }
}

impl GradientOracle for Oracle {
    fn direction(&mut self, _k: usize, _x: &[f64], g: &[f64]) -> Result<Vec<f64>> {
        self.apply(g)
    }
}
