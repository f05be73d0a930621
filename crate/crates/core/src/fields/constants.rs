use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five real parameters shared by every equation of the bridge.
///
/// * `alpha` scales the velocity potential: `v = -alpha grad Phi + gamma A`.
/// * `beta` is the inverse action scale (`hbar = 1/beta` in the physical preset).
/// * `gamma` couples the vortex part and the electromagnetic analogue.
/// * `eps_bar`, `mu_bar` relate `D = eps_bar E` and `B = mu_bar H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eps_bar: f64,
    pub mu_bar: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            alpha: -0.5,
            beta: 1.0,
            gamma: -1.0,
            eps_bar: 1.0,
            mu_bar: 1.0,
        }
    }
}

impl Constants {
    pub fn new(alpha: f64, beta: f64, gamma: f64, eps_bar: f64, mu_bar: f64) -> Result<Self> {
        let c = Self {
            alpha,
            beta,
            gamma,
            eps_bar,
            mu_bar,
        };
        c.validate()?;
        Ok(c)
    }

    /// Quantum-mechanical values for a particle of mass `mass` and charge
    /// `charge`: `alpha = -hbar/2m`, `beta = 1/hbar`, `gamma = -charge/m`.
    pub fn physical(hbar: f64, mass: f64, charge: f64) -> Result<Self> {
        if !(hbar > 0.0) || !(mass > 0.0) {
            return Err(Error::InvalidConstants(
                "hbar and mass must be positive".into(),
            ));
        }
        Self::new(-hbar / (2.0 * mass), 1.0 / hbar, -charge / mass, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.alpha, self.beta, self.gamma, self.eps_bar, self.mu_bar];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConstants("all constants must be finite".into()));
        }
        if self.alpha == 0.0 {
            return Err(Error::InvalidConstants("alpha must be non-zero".into()));
        }
        if self.beta == 0.0 {
            return Err(Error::InvalidConstants("beta must be non-zero".into()));
        }
        if !(self.eps_bar > 0.0) || !(self.mu_bar > 0.0) {
            return Err(Error::InvalidConstants(
                "eps_bar and mu_bar must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Fails when `gamma` is zero; required by vortex and field quantities.
    pub fn require_gamma(&self) -> Result<f64> {
        if self.gamma == 0.0 {
            return Err(Error::ZeroGamma);
        }
        Ok(self.gamma)
    }

    /// Effective Planck constant `1/beta`.
    pub fn hbar(&self) -> f64 {
        1.0 / self.beta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        Constants::default().validate().unwrap();
    }

    #[test]
    fn rejects_degenerate_values() {
        assert!(Constants::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(Constants::new(1.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(Constants::new(1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(Constants::new(1.0, 1.0, 1.0, 1.0, -1.0).is_err());
        let c = Constants::new(1.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        assert!(matches!(c.require_gamma(), Err(Error::ZeroGamma)));
    }

    #[test]
    fn physical_preset() {
        let c = Constants::physical(1.0, 1.0, 1.0).unwrap();
        assert_eq!(c, Constants::default());
        let c = Constants::physical(2.0, 4.0, 3.0).unwrap();
        assert_eq!(c.alpha, -0.25);
        assert_eq!(c.hbar(), 2.0);
        assert_eq!(c.gamma, -0.75);
    }
}
