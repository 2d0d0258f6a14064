//! Real roots of cubic polynomials.
//!
//! Roots are classified through the discriminant of the depressed cubic,
//! computed in closed form (trigonometric form for three real roots, Cardano
//! otherwise) and then polished with Newton steps on the original polynomial.
//! A pair of roots whose discriminant is at rounding level is reported as
//! a real double root, which keeps the largest real root
//! continuous through tangencies.

use serde::Serialize;

/// Coefficients `c3 λ³ + c2 λ² + c1 λ + c0`, highest degree first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicCoeffs {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

/// A real root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: u8,
}

impl CubicCoeffs {
    pub fn new(c3: f64, c2: f64, c1: f64, c0: f64) -> Self {
        Self { c3, c2, c1, c0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0
    }

    fn derivative(&self, x: f64) -> f64 {
        (3.0 * self.c3 * x + 2.0 * self.c2) * x + self.c1
    }

    /// `|p(x)|` divided by the magnitude of the largest term of `p(x)`.
    pub fn relative_residual(&self, x: f64) -> f64 {
        let scale = [
            (self.c3 * x * x * x).abs(),
            (self.c2 * x * x).abs(),
            (self.c1 * x).abs(),
            self.c0.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            self.eval(x).abs() / scale
        }
    }

    /// All real roots, ascending, with multiplicities summing to at most 3.
    ///
    /// Returns an empty vector when `c3 == 0`; callers in this crate never
    /// build a degenerate cubic.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        if self.c3 == 0.0 || !self.c3.is_finite() {
            return Vec::new();
        }
        let b = self.c2 / self.c3;
        let c = self.c1 / self.c3;
        let d = self.c0 / self.c3;
        let shift = b / 3.0;
        // t³ + p t + q with λ = t − b/3
        let p = c - b * b / 3.0;
        let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

        let half_q = 0.5 * q;
        let third_p = p / 3.0;
        let disc = half_q * half_q + third_p * third_p * third_p;
        let scale = (half_q * half_q)
            .max((third_p * third_p * third_p).abs())
            .max(f64::MIN_POSITIVE);

        let mut roots: Vec<RealRoot> = if p.abs() <= f64::EPSILON * (1.0 + b * b)
            && q.abs() <= f64::EPSILON * (1.0 + b.abs().powi(3))
        {
            vec![RealRoot { value: -shift, multiplicity: 3 }]
        } else if disc > 64.0 * f64::EPSILON * scale {
            let sq = disc.sqrt();
            // avoid cancellation between the two cube roots
            let a = if half_q >= 0.0 { -(half_q + sq).cbrt() } else { (-half_q + sq).cbrt() };
            let t = if a == 0.0 { 0.0 } else { a - third_p / a };
            vec![RealRoot { value: t - shift, multiplicity: 1 }]
        } else if disc >= -64.0 * f64::EPSILON * scale {
            // discriminant at rounding level: a double root
            let u = (-half_q).cbrt();
            vec![
                RealRoot { value: 2.0 * u - shift, multiplicity: 1 },
                RealRoot { value: self.polish_double(-u - shift), multiplicity: 2 },
            ]
        } else {
            let r = (-third_p).sqrt();
            let cos_arg = (-half_q / (r * r * r)).clamp(-1.0, 1.0);
            let phi = cos_arg.acos() / 3.0;
            let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
            (0..3)
                .map(|k| RealRoot {
                    value: 2.0 * r * (phi - two_pi_3 * k as f64).cos() - shift,
                    multiplicity: 1,
                })
                .collect()
        };

        for root in roots.iter_mut() {
            if root.multiplicity == 1 {
                root.value = self.polish(root.value);
            }
        }
        roots.sort_by(|a, b| a.value.total_cmp(&b.value));
        roots
    }

    /// Largest real root, if any.
    pub fn largest_real_root(&self) -> Option<RealRoot> {
        self.real_roots().into_iter().last()
    }

    /// Newton on `p'`, whose root coincides with a double root of `p`.
    fn polish_double(&self, mut x: f64) -> f64 {
        for _ in 0..8 {
            let d1 = self.derivative(x);
            let d2 = 6.0 * self.c3 * x + 2.0 * self.c2;
            if d1 == 0.0 || d2 == 0.0 {
                break;
            }
            let next = x - d1 / d2;
            if !next.is_finite() || self.derivative(next).abs() >= d1.abs() {
                break;
            }
            x = next;
        }
        x
    }

    fn polish(&self, mut x: f64) -> f64 {
        for _ in 0..8 {
            let fx = self.eval(x);
            if fx == 0.0 {
                break;
            }
            let dfx = self.derivative(x);
            if dfx == 0.0 || !dfx.is_finite() {
                break;
            }
            let next = x - fx / dfx;
            if !next.is_finite() || self.eval(next).abs() >= fx.abs() {
                break;
            }
            x = next;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn values(c: &CubicCoeffs) -> Vec<f64> {
        c.real_roots().iter().map(|r| r.value).collect()
    }

    #[test]
    fn three_distinct_roots() {
        // (x - 1)(x + 2)(x - 3) = x³ - 2x² - 5x + 6
        let c = CubicCoeffs::new(1.0, -2.0, -5.0, 6.0);
        let r = values(&c);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn single_real_root() {
        // (x - 2)(x² + 1)
        let c = CubicCoeffs::new(1.0, -2.0, 1.0, -2.0);
        let r = values(&c);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn double_root_is_reported_once_with_multiplicity() {
        // 0.75 (x - 1)² (x + 2/3)
        let c = CubicCoeffs::new(0.75, -1.0, -0.25, 0.5);
        let r = c.real_roots();
        assert_eq!(r.len(), 2);
        assert!((r[0].value + 2.0 / 3.0).abs() < 1e-12);
        assert!((r[1].value - 1.0).abs() < 1e-7);
        assert_eq!(r[1].multiplicity, 2);
    }

    #[test]
    fn triple_root() {
        // (x - 0.5)³
        let c = CubicCoeffs::new(1.0, -1.5, 0.75, -0.125);
        let r = c.real_roots();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert!((r[0].value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_root() {
        let c = CubicCoeffs::new(1.25, -0.5, -0.75, 0.0);
        let r = values(&c);
        assert_eq!(r.len(), 3);
        assert!(r.iter().any(|x| x.abs() < 1e-15));
        assert!((r[2] - 1.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn roots_from_factored_form(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, k in 0.2f64..4.0) {
            prop_assume!((a - b).abs() > 1e-2 && (b - c).abs() > 1e-2 && (a - c).abs() > 1e-2);
            let coeffs = CubicCoeffs::new(k, -k * (a + b + c), k * (a * b + b * c + a * c), -k * a * b * c);
            let mut want = [a, b, c];
            want.sort_by(f64::total_cmp);
            let got = values(&coeffs);
            prop_assert_eq!(got.len(), 3);
            for (g, w) in got.iter().zip(want) {
                prop_assert!((g - w).abs() < 1e-9, "{:?} vs {:?}", got, want);
            }
        }
    }
}
