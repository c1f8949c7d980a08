use rand::Rng;
use serde::{Deserialize, Serialize};

use super::quadrature::integrate;
use crate::error::{Error, Result};

/// Absolute tolerance for RMST quadrature.
pub const RMST_TOL: f64 = 1e-10;

/// Weibull law with `S(t) = exp(-(t / scale)^shape)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    pub shape: f64,
    pub scale: f64,
}

impl WeibullParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 0.0 && scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Weibull shape and scale must be positive (got {shape}, {scale})"
            )));
        }
        Ok(Self { shape, scale })
    }

    /// Exponential law with the given rate.
    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(1.0, 1.0 / rate)
    }

    pub fn survival(&self, t: f64) -> f64 {
        (-(t / self.scale).powf(self.shape)).exp()
    }

    pub fn cdf(&self, t: f64) -> f64 {
        -(-(t / self.scale).powf(self.shape)).exp_m1()
    }

    pub fn hazard(&self, t: f64) -> f64 {
        self.shape / self.scale * (t / self.scale).powf(self.shape - 1.0)
    }

    /// `int_0^tau S(u) du`.
    pub fn rmst(&self, tau: f64) -> f64 {
        integrate(|u| self.survival(u), 0.0, tau, RMST_TOL)
    }

    /// `F(tau) / R(tau)`.
    pub fn average_hazard(&self, tau: f64) -> f64 {
        self.cdf(tau) / self.rmst(tau)
    }

    /// Inverse-CDF draw `scale * (-log U)^(1/shape)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // 1 - gen() lies in (0, 1], so the log is finite
        let u: f64 = 1.0 - rng.gen::<f64>();
        self.scale * (-u.ln()).powf(1.0 / self.shape)
    }
}
