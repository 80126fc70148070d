//! Mixing parameters and how they are drawn.

use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, MixError, Result};
use crate::rng::RngStream;

/// Default Beta shape for the common-pattern ratio (uniform λ).
pub const DEFAULT_BETA_SHAPE: f64 = 1.0;

/// Common-pattern weight used for the first track profile.
pub const ALPHA_TRACK1: f64 = 0.2;

/// Common-pattern weight used for the second track profile.
pub const ALPHA_TRACK2: f64 = 0.6;

/// Every free scalar of a decoupled mix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixParams {
    /// Ratio applied to the common pattern (and to the label).
    pub lambda_v: f64,
    /// Ratio applied to the noise-prone component.
    pub lambda_delta: f64,
    /// Common-pattern weight.
    pub alpha: f64,
    /// Shape of the symmetric Beta used to draw `lambda_v`.
    pub beta_shape: f64,
    /// Share of `lambda_v` given to the first operand's own style; `0 ≤ t ≤ lambda_v`.
    pub style_t: f64,
}

impl MixParams {
    pub fn new(lambda_v: f64, lambda_delta: f64, alpha: f64) -> Result<Self> {
        let params = Self {
            lambda_v,
            lambda_delta,
            alpha,
            beta_shape: DEFAULT_BETA_SHAPE,
            style_t: lambda_v,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_style_t(mut self, t: f64) -> Result<Self> {
        self.style_t = t;
        self.validate()?;
        Ok(self)
    }

    pub fn with_beta_shape(mut self, beta_shape: f64) -> Result<Self> {
        self.beta_shape = beta_shape;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("lambda_v", self.lambda_v)?;
        check_unit("lambda_delta", self.lambda_delta)?;
        check_unit("alpha", self.alpha)?;
        check_beta_shape(self.beta_shape)?;
        if !(0.0..=self.lambda_v).contains(&self.style_t) {
            return Err(MixError::Parameter(format!(
                "style_t must lie in [0, lambda_v = {}], got {}",
                self.lambda_v, self.style_t
            )));
        }
        Ok(())
    }

    /// Draws a full parameter set.
    ///
    /// Draw order is fixed: `lambda_v ~ Beta(β, β)`, then
    /// `lambda_delta ~ U(0, 1)`, then `t ~ U(0, lambda_v)`. A fixed value
    /// still consumes its draw so the remaining draws do not shift.
    pub fn sample(
        rng: &mut RngStream,
        beta_shape: f64,
        alpha: f64,
        fixed_lambda_v: Option<f64>,
        fixed_lambda_delta: Option<f64>,
    ) -> Result<Self> {
        let drawn_v = sample_lambda(rng, beta_shape)?;
        let drawn_delta = rng.uniform();
        let lambda_v = fixed_lambda_v.unwrap_or(drawn_v);
        let lambda_delta = fixed_lambda_delta.unwrap_or(drawn_delta);
        let style_t = rng.uniform() * lambda_v;
        let params = Self { lambda_v, lambda_delta, alpha, beta_shape, style_t };
        params.validate()?;
        Ok(params)
    }
}

fn check_beta_shape(beta_shape: f64) -> Result<()> {
    if beta_shape.is_finite() && beta_shape > 0.0 {
        Ok(())
    } else {
        Err(MixError::Parameter(format!("beta shape must be positive, got {beta_shape}")))
    }
}

/// Draws a mixing ratio from the symmetric `Beta(beta_shape, beta_shape)`.
pub fn sample_lambda(rng: &mut RngStream, beta_shape: f64) -> Result<f64> {
    check_beta_shape(beta_shape)?;
    let dist = Beta::new(beta_shape, beta_shape)
        .map_err(|e| MixError::Parameter(format!("beta distribution: {e}")))?;
    Ok(dist.sample(rng).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(beta: f64, n: usize) -> (f64, f64) {
        let mut rng = RngStream::new(2022, 0);
        let xs: Vec<f64> = (0..n).map(|_| sample_lambda(&mut rng, beta).unwrap()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        (mean, var)
    }

    #[test]
    fn uniform_when_shape_is_one() {
        let (mean, var) = moments(1.0, 10_000);
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
        // U(0,1) variance is 1/12
        assert!((var - 1.0 / 12.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn concentrated_when_shape_is_large() {
        let (_, var) = moments(100.0, 10_000);
        let expected = 1.0 / (4.0 * 201.0);
        assert!((var - expected).abs() / expected < 0.2, "var {var}");
    }

    #[test]
    fn deterministic_and_bounded() {
        let mut a = RngStream::new(9, 3);
        let mut b = RngStream::new(9, 3);
        for _ in 0..1000 {
            let x = sample_lambda(&mut a, 0.2).unwrap();
            assert_eq!(x, sample_lambda(&mut b, 0.2).unwrap());
            assert!((0.0..=1.0).contains(&x));
        }
    }

    #[test]
    fn rejects_nonpositive_shape() {
        let mut rng = RngStream::new(0, 0);
        assert!(matches!(sample_lambda(&mut rng, 0.0), Err(MixError::Parameter(_))));
        assert!(matches!(sample_lambda(&mut rng, -1.0), Err(MixError::Parameter(_))));
    }

    #[test]
    fn sampled_params_respect_ranges() {
        let mut rng = RngStream::new(5, 5);
        for _ in 0..1000 {
            let p = MixParams::sample(&mut rng, 1.0, 0.2, None, None).unwrap();
            assert!(p.style_t <= p.lambda_v);
        }
        let p = MixParams::sample(&mut rng, 1.0, 0.6, Some(1.0), Some(1.0)).unwrap();
        assert_eq!((p.lambda_v, p.lambda_delta), (1.0, 1.0));
    }

    #[test]
    fn validation() {
        assert!(MixParams::new(0.5, 0.5, 1.1).is_err());
        assert!(MixParams::new(0.5, 0.5, 0.5).unwrap().with_style_t(0.6).is_err());
        assert!(MixParams::new(0.5, 0.5, 0.5).unwrap().with_beta_shape(0.0).is_err());
    }
}
