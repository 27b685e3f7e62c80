//! Closed-form geometric discord of the Werner, isotropic and pure Schmidt
//! families.

use serde::{Deserialize, Serialize};

use crate::error::{DiscordError, Result};
use crate::tolerances::EPS_EQ;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum AnalyticFamily {
    Werner { m: usize, x: f64 },
    Isotropic { m: usize, x: f64 },
    PureSchmidt { s: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticReference {
    pub d_g: f64,
    /// Common eigenvalue of `𝒯𝒯^t` (Werner and isotropic only).
    pub tau: Option<f64>,
    /// Squared generalized concurrence `2 (1 - Tr rho_A^2)` (pure states only).
    pub concurrence_squared: Option<f64>,
}

pub fn analytic_reference(family: &AnalyticFamily) -> Result<AnalyticReference> {
    match family {
        AnalyticFamily::Werner { m, x } => {
            check_m(*m)?;
            if !(-1.0..=1.0).contains(x) {
                return Err(DiscordError::Domain(format!("Werner parameter x must lie in [-1, 1], got {x}")));
            }
            let mf = *m as f64;
            Ok(scalar_family(mf, (mf * x - 1.0).powi(2)))
        }
        AnalyticFamily::Isotropic { m, x } => {
            check_m(*m)?;
            if !(0.0..=1.0).contains(x) {
                return Err(DiscordError::Domain(format!("isotropic parameter x must lie in [0, 1], got {x}")));
            }
            let mf = *m as f64;
            Ok(scalar_family(mf, (mf * mf * x - 1.0).powi(2)))
        }
        AnalyticFamily::PureSchmidt { s } => {
            check_m(s.len())?;
            if s.iter().any(|&v| !v.is_finite() || v < -EPS_EQ) || (s.iter().sum::<f64>() - 1.0).abs() > EPS_EQ {
                return Err(DiscordError::Domain("Schmidt coefficients must be a probability vector".into()));
            }
            let d_g = 1.0 - s.iter().map(|v| v * v).sum::<f64>();
            Ok(AnalyticReference { d_g, tau: None, concurrence_squared: Some(2.0 * d_g) })
        }
    }
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(DiscordError::InvalidDimension(format!("m must be at least 2, got {m}")));
    }
    Ok(())
}

// Both families share D_G = num / (m (m-1) (m+1)^2) and tau = num / (m^2 (m^2-1)^2).
fn scalar_family(m: f64, numerator: f64) -> AnalyticReference {
    AnalyticReference {
        d_g: numerator / (m * (m - 1.0) * (m + 1.0).powi(2)),
        tau: Some(numerator / (m * m * (m * m - 1.0).powi(2))),
        concurrence_squared: None,
    }
}
