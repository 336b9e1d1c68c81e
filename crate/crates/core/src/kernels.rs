//! Even trigonometric kernels of `μt` shared by every closed form.
//!
//! All propagator blocks, noise moments and characteristic-function
//! coefficients can be written through
//!
//! * `cos(μt)`,
//! * `sin(μt)/μ`,
//! * `(sin(μt)cos(μt) − μt)/μ³` (the secular kernel),
//!
//! which are real, even functions of `μ` and stay finite at the exceptional
//! point. In the exponential regime `μ` is imaginary and the same expressions
//! continue to `cosh`/`sinh`.

use crate::model::{re, C64};

/// Below this value of `|μ²t²|` the kernels are summed as power series in
/// `μ²t²` instead of evaluated in closed form.
pub const SERIES_THRESHOLD: f64 = 0.25;

const MAX_TERMS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigKernels {
    /// `cos(μt)`
    pub cos: f64,
    /// `sin(μt)/μ`
    pub sinc: f64,
    /// `(sin(μt)cos(μt) − μt)/μ³`
    pub secular: f64,
}

impl TrigKernels {
    pub fn new(mu_sq: f64, t: f64) -> Self {
        let x = mu_sq * t * t;
        if x.abs() < SERIES_THRESHOLD {
            Self::series(mu_sq, t)
        } else {
            Self::closed(mu_sq, t)
        }
    }

    /// Closed form in complex arithmetic with the principal `√μ²`.
    pub fn closed(mu_sq: f64, t: f64) -> Self {
        let mu = re(mu_sq).sqrt();
        let y = mu * t;
        let (s, c) = (y.sin(), y.cos());
        let sinc: C64 = s / mu;
        let secular: C64 = (s * c - y) / (mu * mu * mu);
        Self { cos: c.re, sinc: sinc.re, secular: secular.re }
    }

    /// Power series in `x = μ²t²`, summed until terms drop below rounding.
    pub fn series(mu_sq: f64, t: f64) -> Self {
        let x = mu_sq * t * t;

        // cos: Σ (−x)ⁿ/(2n)!
        let mut cos = 0.0;
        let mut term = 1.0;
        for n in 0..MAX_TERMS {
            cos += term;
            term *= -x / (((2 * n + 1) * (2 * n + 2)) as f64);
            if term.abs() < 1e-18 * cos.abs() {
                break;
            }
        }

        // sin(μt)/μ: t Σ (−x)ⁿ/(2n+1)!
        let mut sinc = 0.0;
        let mut term = 1.0;
        for n in 0..MAX_TERMS {
            sinc += term;
            term *= -x / (((2 * n + 2) * (2 * n + 3)) as f64);
            if term.abs() < 1e-18 * sinc.abs() {
                break;
            }
        }
        sinc *= t;

        // secular: t³ Σ_{n≥1} (−1)ⁿ 4ⁿ x^{n−1}/(2n+1)!
        let mut secular = 0.0;
        let mut term = -4.0 / 6.0;
        for n in 1..MAX_TERMS {
            secular += term;
            term *= -4.0 * x / (((2 * n + 2) * (2 * n + 3)) as f64);
            if term.abs() < 1e-18 * secular.abs() {
                break;
            }
        }
        secular *= t * t * t;

        Self { cos, sinc, secular }
    }

    /// `sin²(μt)/μ²`
    pub fn sinc_sq(&self) -> f64 {
        self.sinc * self.sinc
    }

    /// `sin(μt)cos(μt)/μ`
    pub fn sin_cos(&self) -> f64 {
        self.cos * self.sinc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let k = TrigKernels::new(1.0, std::f64::consts::FRAC_PI_2);
        assert!(k.cos.abs() < 1e-15);
        assert!((k.sinc - 1.0).abs() < 1e-15);
        assert!((k.secular + std::f64::consts::FRAC_PI_2).abs() < 1e-15);

        let k = TrigKernels::new(0.0, 2.0);
        assert_eq!(k.cos, 1.0);
        assert_eq!(k.sinc, 2.0);
        assert!((k.secular + 2.0 / 3.0 * 8.0).abs() < 1e-14);
    }

    #[test]
    fn hyperbolic_continuation() {
        let t = 1.7;
        let k = TrigKernels::new(-0.64, t);
        let y = 0.8 * t;
        assert!((k.cos - y.cosh()).abs() < 1e-14);
        assert!((k.sinc - y.sinh() / 0.8).abs() < 1e-14);
        let sec = -(y.sinh() * y.cosh() - y) / 0.8f64.powi(3);
        assert!((k.secular - sec).abs() < 1e-13);
    }

    #[test]
    fn series_and_closed_agree_at_crossover() {
        for mu_sq in [0.3f64, -0.3, 1e-3, -1e-3] {
            let t = (SERIES_THRESHOLD / mu_sq.abs()).sqrt() * 0.999;
            let a = TrigKernels::series(mu_sq, t);
            let b = TrigKernels::closed(mu_sq, t);
            assert!((a.cos - b.cos).abs() < 1e-14);
            assert!((a.sinc - b.sinc).abs() < 1e-14 * t);
            assert!((a.secular - b.secular).abs() < 1e-11 * t.powi(3), "{mu_sq}: {a:?} {b:?}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn kernels_even_in_mu_and_bounded(mu_sq in -2.0f64..2.0, t in 0.0f64..20.0) {
                let k = TrigKernels::new(mu_sq, t);
                prop_assert!(k.cos.is_finite() && k.sinc.is_finite() && k.secular.is_finite());
                // sin² + cos² = 1 generalizes to cos² + μ² (sin/μ)² = 1.
                let id = k.cos * k.cos + mu_sq * k.sinc * k.sinc;
                prop_assert!((id - 1.0).abs() < 1e-9 * (1.0 + k.cos * k.cos));
            }
        }
    }
}
