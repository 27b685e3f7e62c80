//! Numerical minimization of the measurement disturbance over orthonormal
//! bases of party A.
//!
//! Each restart starts from a Haar-random unitary `U` and repeatedly runs a
//! Nelder–Mead search over Hermitian generators `H` in the update
//! `U <- U exp(iH)`. Only the off-diagonal part of `H` is searched: a
//! diagonal `H` rephases the basis vectors and leaves every projector fixed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::objectives::{gd_objective_measurement, MeasurementBasis, MeasurementObjective};
use crate::bloch::DensityMatrix;
use crate::error::{DiscordError, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::state_zoo::seeded_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Independent random starts.
    pub restarts: usize,
    /// Root seed; restart `r` draws its start from stream `r`.
    pub seed: u64,
    /// A refinement pass improving the objective by less than this ends the
    /// restart as converged.
    pub tolerance: f64,
    /// Refinement passes per restart.
    pub max_iterations: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 16, seed: 0, tolerance: 1e-13, max_iterations: 60 }
    }
}

/// Best objective value found; an upper bound on the geometric discord.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericDiscord {
    pub value: f64,
    pub basis: MeasurementBasis,
    pub converged: bool,
    pub restarts: usize,
    pub evaluations: usize,
}

/// Nelder–Mead settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub step: f64,
    pub ftol: f64,
    pub xtol: f64,
    pub max_evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Downhill simplex minimization from `x0` with an axis-aligned initial
/// simplex of edge `cfg.step`. Converges when the spread of function values
/// is at most `ftol` and every vertex lies within `xtol` of the best one.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], cfg: NelderMead) -> NelderMeadResult {
    let dim = x0.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    pts.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += cfg.step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut evals = dim + 1;
    let mut converged = false;

    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };

    while evals < cfg.max_evaluations {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[dim] - vals[0];
        let size = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= cfg.ftol && size <= cfg.xtol {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; dim];
        for p in &pts[..dim] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / dim as f64;
            }
        }
        let worst = pts[dim].clone();
        let reflected = combine(&centroid, &worst, -1.0);
        let fr = f(&reflected);
        evals += 1;
        if fr < vals[0] {
            let expanded = combine(&centroid, &worst, -2.0);
            let fe = f(&expanded);
            evals += 1;
            if fe < fr {
                pts[dim] = expanded;
                vals[dim] = fe;
            } else {
                pts[dim] = reflected;
                vals[dim] = fr;
            }
        } else if fr < vals[dim - 1] {
            pts[dim] = reflected;
            vals[dim] = fr;
        } else {
            let (contracted, fc) = if fr < vals[dim] {
                let c = combine(&centroid, &worst, -0.5);
                let fc = f(&c);
                (c, fc)
            } else {
                let c = combine(&centroid, &worst, 0.5);
                let fc = f(&c);
                (c, fc)
            };
            evals += 1;
            if fc < vals[dim].min(fr) {
                pts[dim] = contracted;
                vals[dim] = fc;
            } else {
                let best = pts[0].clone();
                for i in 1..=dim {
                    pts[i] = combine(&best, &pts[i], 0.5);
                    vals[i] = f(&pts[i]);
                }
                evals += dim;
            }
        }
    }
    let best = (0..=dim).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    NelderMeadResult { x: pts[best].clone(), f: vals[best], evaluations: evals, converged }
}

/// Hermitian matrix with zero diagonal from `m(m-1)` real parameters,
/// two per pair `j < k`: `H_jk = a - ib`.
fn off_diagonal_hermitian(m: usize, params: &[f64]) -> CMatrix {
    let mut h = CMatrix::zeros(m, m);
    let mut idx = 0;
    for j in 0..m {
        for k in (j + 1)..m {
            let z = C64::new(params[idx], -params[idx + 1]);
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
            idx += 2;
        }
    }
    h
}

struct RestartOutcome {
    value: f64,
    unitary: CMatrix,
    converged: bool,
    evaluations: usize,
}

fn refine(objective: &MeasurementObjective, start: CMatrix, cfg: &OptimizerConfig) -> RestartOutcome {
    let m = objective.dim();
    let dim = m * (m - 1);
    let mut u = start;
    let mut best = objective.value(&u);
    let mut evaluations = 1;
    let mut step = 0.5;
    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        let nm = NelderMead { step, ftol: 1e-15, xtol: 1e-9, max_evaluations: 600 * dim };
        let res = nelder_mead(|p| objective.value(&(&u * linalg::expm_i_hermitian(&off_diagonal_hermitian(m, p)))), &vec![0.0; dim], nm);
        evaluations += res.evaluations;
        let improvement = best - res.f;
        let moved = res.x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if res.f < best {
            u = &u * linalg::expm_i_hermitian(&off_diagonal_hermitian(m, &res.x));
            best = res.f;
        }
        if improvement <= cfg.tolerance && res.converged {
            converged = true;
            break;
        }
        step = (2.0 * moved).clamp(1e-4, 0.5);
    }
    RestartOutcome { value: best, unitary: u, converged, evaluations }
}

/// Re-orthonormalize the columns of a nearly unitary matrix.
fn polish(u: &CMatrix) -> CMatrix {
    let qr = u.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Multi-restart minimization of the measurement disturbance. The returned
/// value is the objective at the returned basis; it is an upper bound on the
/// geometric discord. The result depends only on `(rho, cfg)`.
pub fn gd_numeric(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<NumericDiscord> {
    if cfg.restarts == 0 {
        return Err(DiscordError::Domain("optimizer needs at least one restart".into()));
    }
    if !(cfg.tolerance.is_finite() && cfg.tolerance >= 0.0) {
        return Err(DiscordError::Domain(format!("invalid tolerance {}", cfg.tolerance)));
    }
    let m = rho.m();
    let objective = MeasurementObjective::new(rho);
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let start = linalg::haar_unitary(m, &mut seeded_rng(cfg.seed, r as u64));
            refine(&objective, start, cfg)
        })
        .collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let best = outcomes
        .into_iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.value.total_cmp(&b.value).then(ia.cmp(ib)))
        .map(|(_, o)| o)
        .expect("at least one restart");
    let basis = MeasurementBasis::new(polish(&best.unitary))
        .map_err(|e| DiscordError::Numerical(format!("optimizer lost unitarity: {e}")))?;
    let value = gd_objective_measurement(rho, &basis)?.max(0.0);
    Ok(NumericDiscord {
        value,
        basis,
        converged: best.converged,
        restarts: cfg.restarts,
        evaluations,
    })
}
