//! Numerical thresholds shared across the crate.

/// Algebraic identities on exactly representable constructions.
pub const EPS_EQ: f64 = 1e-10;

/// Relative positivity threshold; scaled by the largest eigenvalue magnitude.
pub const EPS_PSD_REL: f64 = 1e-9;

/// Relative singular-value cutoff for numerical rank.
pub const EPS_RANK: f64 = 1e-8;

/// Absolute floor under which a singular value always counts as zero.
pub const EPS_RANK_FLOOR: f64 = 1e-12;

/// A measure below this value is reported as exactly zero.
pub const EPS_ZERO: f64 = 1e-10;

/// Agreement between optimizer output and exact values.
pub const EPS_OPT: f64 = 1e-6;

/// Absolute positivity threshold for a matrix with the given spectral scale.
pub fn psd_threshold(scale: f64) -> f64 {
    EPS_PSD_REL * scale.abs()
}
