//! Correlation measures.
//!
//! `D_P` is the sum of the `m(m-1)` smallest eigenvalues of `𝒯𝒯^t`, where
//! `𝒯` is the left-correlation matrix. It is the minimum of `‖𝒯 - P𝒯‖²` over
//! rank-`(m-1)` projections `P` on `R^(m^2-1)`, and a lower bound on the
//! geometric discord `D_G`, with equality for `m = 2`.

mod analytic;
mod objectives;
mod optimize;
mod report;

pub use analytic::{analytic_reference, AnalyticFamily, AnalyticReference};
pub use objectives::{
    gd_objective_cmatrix, gd_objective_measurement, gd_objective_simplex, MeasurementBasis,
    MeasurementObjective,
};
pub use optimize::{gd_numeric, nelder_mead, NelderMead, NumericDiscord, OptimizerConfig};
pub use report::{measure_report, DgMethod, MeasureReport, ReportConfig};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bloch::{decompose, g_matrix, left_correlation, BlochDecomposition, DensityMatrix};
use crate::error::{DiscordError, Result};
use crate::linalg::{self, numerical_rank, rank_threshold, real_singular_values, real_svd_left};
use crate::tolerances::{EPS_RANK, EPS_ZERO};

/// Sum of the entries of a nonincreasing spectrum from position `m - 1` on.
fn tail_sum(spectrum_desc: &[f64], m: usize) -> f64 {
    spectrum_desc.iter().skip(m - 1).sum()
}

fn snap_to_zero(v: f64) -> f64 {
    if v < EPS_ZERO {
        0.0
    } else {
        v
    }
}

/// Eigenvalues `tau_k` of `𝒯𝒯^t`, nonincreasing.
pub fn tau_spectrum(d: &BlochDecomposition) -> Vec<f64> {
    linalg::symmetric_eigenvalues_desc(&left_correlation(d).gram())
}

/// Eigenvalues `eta_k` of `G`, nonincreasing.
pub fn eta_spectrum(d: &BlochDecomposition) -> Vec<f64> {
    g_matrix(d).eigenvalues_desc()
}

pub fn d_p(rho: &DensityMatrix) -> f64 {
    d_p_from_decomposition(&decompose(rho))
}

pub fn d_p_from_decomposition(d: &BlochDecomposition) -> f64 {
    snap_to_zero(tail_sum(&tau_spectrum(d), d.m))
}

/// The same quantity through `G`: `(2/(m^2 n)) sum_{k>=m} eta_k`.
pub fn d_p_via_g(d: &BlochDecomposition) -> f64 {
    let scale = 2.0 / (d.m * d.m * d.n) as f64;
    snap_to_zero(scale * tail_sum(&eta_spectrum(d), d.m))
}

/// Total and classical correlation, `‖𝒯‖²` and the sum of the `m - 1`
/// largest `tau_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlations {
    pub total: f64,
    pub classical: f64,
}

impl Correlations {
    pub fn discord(&self) -> f64 {
        self.total - self.classical
    }
}

pub fn correlations(rho: &DensityMatrix) -> Correlations {
    correlations_from_decomposition(&decompose(rho))
}

pub fn correlations_from_decomposition(d: &BlochDecomposition) -> Correlations {
    let tau = tau_spectrum(d);
    Correlations {
        total: left_correlation(d).matrix.norm_squared(),
        classical: tau.iter().take(d.m - 1).sum(),
    }
}

/// `Lambda = (4/(mn))^2 (T T^t - |y|^2 x x^t)`.
pub fn criterion_tensor(d: &BlochDecomposition) -> DMatrix<f64> {
    let pre = (4.0 / (d.m * d.n) as f64).powi(2);
    (&d.t * d.t.transpose() - (&d.x * d.x.transpose()) * d.y.norm_squared()) * pre
}

/// `Q = (1/4) sum_{k>=m} |Lambda_k|` over the nonincreasing spectrum.
pub fn zhou_q(rho: &DensityMatrix) -> f64 {
    zhou_q_from_decomposition(&decompose(rho))
}

pub fn zhou_q_from_decomposition(d: &BlochDecomposition) -> f64 {
    let ev = linalg::symmetric_eigenvalues_desc(&criterion_tensor(d));
    snap_to_zero(0.25 * ev.iter().skip(d.m - 1).map(|v| v.abs()).sum::<f64>())
}

/// Rank evidence behind a zero-discord verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroDiscordVerdict {
    /// `rank(𝒯𝒯^t) <= m - 1`.
    pub zero_discord: bool,
    pub rank_left_gram: usize,
    pub rank_tt: usize,
    /// `‖(I - P_range) x‖` for the column space of `T T^t`.
    pub x_range_residual: f64,
    pub x_in_range: bool,
    /// `rank(TT^t) <= m-2`, or `rank(TT^t) <= m-1` with `x` in its range.
    pub split_test: bool,
    pub consistent: bool,
}

pub fn is_zero_discord(rho: &DensityMatrix) -> ZeroDiscordVerdict {
    zero_discord_from_decomposition(&decompose(rho))
}

pub fn zero_discord_from_decomposition(d: &BlochDecomposition) -> ZeroDiscordVerdict {
    let m = d.m;
    let lc = left_correlation(d);
    let sv = real_singular_values(&lc.matrix);
    let rank_left_gram = numerical_rank(&sv);

    let (t_sv, u) = real_svd_left(&d.t);
    let rank_tt = numerical_rank(&t_sv);
    let threshold = rank_threshold(&t_sv);
    let mut projected = nalgebra::DVector::zeros(d.x.len());
    for (k, &s) in t_sv.iter().enumerate() {
        if s > threshold {
            let col = u.column(k);
            projected += col * col.dot(&d.x);
        }
    }
    let x_range_residual = (&d.x - projected).norm();
    let x_in_range = x_range_residual < EPS_RANK * d.x.norm().max(1.0);

    let zero_discord = rank_left_gram < m;
    let split_test = rank_tt + 2 <= m || (rank_tt < m && x_in_range);
    ZeroDiscordVerdict {
        zero_discord,
        rank_left_gram,
        rank_tt,
        x_range_residual,
        x_in_range,
        split_test,
        consistent: zero_discord == split_test,
    }
}

/// Exact geometric discord of a `2 ⊗ n` state: `(eta_2 + eta_3) / (2n)`.
pub fn gd_exact_2xn(rho: &DensityMatrix) -> Result<f64> {
    if rho.m() != 2 {
        return Err(DiscordError::InvalidDimension(format!(
            "exact geometric discord requires m = 2, got m = {}",
            rho.m()
        )));
    }
    let d = decompose(rho);
    let eta = eta_spectrum(&d);
    Ok(snap_to_zero((eta[1] + eta[2]) / (2.0 * d.n as f64)))
}
