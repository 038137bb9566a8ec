use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{blue_leftward, blue_line, red_ball, red_line, ModelSpec, Period, Species, Topology};

/// The two-species families studied by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Setting {
    /// Blue horizontal with range `tau`, red vertical with range `rho`.
    Lines { rho: u32, tau: u32 },
    /// Blue horizontal with range `tau`, red through the L1 ball of radius `rho`.
    BallVsLine { rho: u32, tau: u32 },
    /// Blue `{e1}` only, red through the L1 ball of radius `rho`.
    BallVsLeftward { rho: u32 },
}

impl Setting {
    pub fn rho(&self) -> u32 {
        match *self {
            Setting::Lines { rho, .. } | Setting::BallVsLine { rho, .. } | Setting::BallVsLeftward { rho } => rho,
        }
    }

    /// Blue range; `{e1}` counts as range 1.
    pub fn tau(&self) -> u32 {
        match *self {
            Setting::Lines { tau, .. } | Setting::BallVsLine { tau, .. } => tau,
            Setting::BallVsLeftward { .. } => 1,
        }
    }

    /// Exponent in `q = a p^gamma` at which blue and red balance.
    pub fn gamma(&self) -> f64 {
        let rho = self.rho() as f64;
        match self {
            Setting::Lines { .. } => 1.0 / self.tau() as f64 + rho / (rho + 1.0),
            _ => 1.0 + rho / (rho + 1.0),
        }
    }

    /// `1/rho + tau/(tau+1)`: the red-dominance exponent is `1/gamma'`.
    /// Only defined for [`Setting::Lines`].
    pub fn gamma_prime(&self) -> Option<f64> {
        match *self {
            Setting::Lines { rho, tau } => Some(1.0 / rho as f64 + tau as f64 / (tau as f64 + 1.0)),
            _ => None,
        }
    }

    pub fn species(&self, r: Period) -> Result<(Species, Species)> {
        if self.rho() == 0 || self.tau() == 0 {
            return Err(Error::invalid("ranges must be at least 1"));
        }
        Ok(match *self {
            Setting::Lines { rho, tau } => (blue_line(tau)?, red_line(rho, r)?),
            Setting::BallVsLine { rho, tau } => (blue_line(tau)?, red_ball(rho, r)?),
            Setting::BallVsLeftward { rho } => (blue_leftward(), red_ball(rho, r)?),
        })
    }

    /// Blue density `p` and red density `q` on an `l x l` torus.
    pub fn model(&self, l: usize, p: f64, q: f64, r: Period) -> Result<ModelSpec> {
        let (b, rd) = self.species(r)?;
        let m = ModelSpec::new(l, l, Topology::Torus).with_species(b, p).with_species(rd, q);
        m.validate()?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_neighbor_lines() {
        let s = Setting::Lines { rho: 1, tau: 1 };
        assert_eq!(s.gamma(), 1.5);
        assert_eq!(s.gamma_prime(), Some(1.5));
        // gamma gamma' = 1 + 1/(rho tau) + 1/((rho+1)(tau+1))
        assert!((s.gamma() * s.gamma_prime().unwrap() - 9.0 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn product_identity_and_gap() {
        for rho in 1..6u32 {
            for tau in 1..6u32 {
                let s = Setting::Lines { rho, tau };
                let (r, t) = (rho as f64, tau as f64);
                let prod = s.gamma() * s.gamma_prime().unwrap();
                let rhs = 1.0 + 1.0 / (r * t) + 1.0 / ((r + 1.0) * (t + 1.0));
                assert!((prod - rhs).abs() < 1e-12);
                assert!(prod > 1.0);
            }
        }
    }

    #[test]
    fn ball_settings() {
        assert!((Setting::BallVsLeftward { rho: 2 }.gamma() - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(Setting::BallVsLine { rho: 1, tau: 3 }.gamma(), 1.5);
        assert!(Setting::BallVsLine { rho: 1, tau: 3 }.gamma_prime().is_none());
    }

    #[test]
    fn models_carry_densities() {
        let m = Setting::Lines { rho: 2, tau: 1 }.model(16, 0.1, 0.2, Period::ONE).unwrap();
        assert_eq!(m.densities, vec![0.1, 0.2]);
        assert!(Setting::Lines { rho: 0, tau: 1 }.species(Period::ONE).is_err());
    }
}
