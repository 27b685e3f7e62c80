use serde::{Deserialize, Serialize};

use super::optimize::{gd_numeric, OptimizerConfig};
use super::{
    correlations_from_decomposition, criterion_tensor, d_p_from_decomposition, eta_spectrum, gd_exact_2xn,
    tau_spectrum, zero_discord_from_decomposition, zhou_q_from_decomposition, ZeroDiscordVerdict,
};
use crate::bloch::{decompose, DensityMatrix};
use crate::error::Result;
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportConfig {
    pub optimizer: OptimizerConfig,
    /// Leave `d_g` out (the numeric optimization dominates the runtime).
    pub skip_dg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DgMethod {
    Exact,
    NumericUpperBound,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub m: usize,
    pub n: usize,
    pub d_p: f64,
    pub i_p: f64,
    pub c_p: f64,
    pub q: f64,
    pub d_g: Option<f64>,
    pub d_g_method: DgMethod,
    pub d_g_restarts: usize,
    pub d_g_seed: Option<u64>,
    pub d_g_converged: bool,
    pub zero_discord: bool,
    pub zero_discord_evidence: ZeroDiscordVerdict,
    pub tau_spectrum: Vec<f64>,
    pub eta_spectrum: Vec<f64>,
    pub lambda_spectrum: Vec<f64>,
}

pub fn measure_report(rho: &DensityMatrix, cfg: &ReportConfig) -> Result<MeasureReport> {
    let d = decompose(rho);
    let corr = correlations_from_decomposition(&d);
    let verdict = zero_discord_from_decomposition(&d);

    let (d_g, d_g_method, d_g_restarts, d_g_seed, d_g_converged) = if cfg.skip_dg {
        (None, DgMethod::Skipped, 0, None, false)
    } else if rho.m() == 2 {
        (Some(gd_exact_2xn(rho)?), DgMethod::Exact, 0, None, true)
    } else {
        let num = gd_numeric(rho, &cfg.optimizer)?;
        (Some(num.value), DgMethod::NumericUpperBound, num.restarts, Some(cfg.optimizer.seed), num.converged)
    };

    Ok(MeasureReport {
        m: d.m,
        n: d.n,
        d_p: d_p_from_decomposition(&d),
        i_p: corr.total,
        c_p: corr.classical,
        q: zhou_q_from_decomposition(&d),
        d_g,
        d_g_method,
        d_g_restarts,
        d_g_seed,
        d_g_converged,
        zero_discord: verdict.zero_discord,
        zero_discord_evidence: verdict,
        tau_spectrum: tau_spectrum(&d),
        eta_spectrum: eta_spectrum(&d),
        lambda_spectrum: linalg::symmetric_eigenvalues_desc(&criterion_tensor(&d)),
    })
}
