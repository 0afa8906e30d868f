use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Gaussian location model: `n` observations from `N(theta, 1)`, estimated
/// with tuning parameter `mu`.
///
/// Equivalently one coordinate of an orthogonal regression with `X'X = nI`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocationModel {
    n: u64,
    theta: f64,
    mu: f64,
}

impl LocationModel {
    pub fn new(n: u64, theta: f64, mu: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("sample size must be at least 1"));
        }
        if !theta.is_finite() {
            return Err(domain(format!("theta must be finite, got {theta}")));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(domain(format!("mu must be positive and finite, got {mu}")));
        }
        Ok(Self { n, theta, mu })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sqrt_n(&self) -> f64 {
        (self.n as f64).sqrt()
    }

    /// `n^{1/2} θ`
    pub fn scaled_theta(&self) -> f64 {
        self.sqrt_n() * self.theta
    }

    /// `n^{1/2} μ`
    pub fn scaled_mu(&self) -> f64 {
        self.sqrt_n() * self.mu
    }

    /// Same `n` and `mu`, different `theta`.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.n, theta, self.mu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates() {
        assert!(LocationModel::new(0, 0.0, 0.1).is_err());
        assert!(LocationModel::new(10, 0.0, 0.0).is_err());
        assert!(LocationModel::new(10, 0.0, f64::INFINITY).is_err());
        assert!(LocationModel::new(10, f64::NAN, 0.1).is_err());
        let m = LocationModel::new(100, 0.3, 0.1).unwrap();
        assert!((m.scaled_theta() - 3.0).abs() < 1e-14);
        assert!((m.scaled_mu() - 1.0).abs() < 1e-14);
    }
}
