//! Acceptance criteria, runnable from the test suite and from the CLI
//! `selftest` command. Every tolerance and time limit is fixed here.

use std::fmt;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::bloch::{decompose, decompose_with, left_correlation, reconstruct, DensityMatrix};
use crate::linalg::haar_unitary;
use crate::measures::{
    analytic_reference, correlations, d_p, gd_exact_2xn, gd_numeric, gd_objective_cmatrix, gd_objective_measurement,
    gd_objective_simplex, is_zero_discord, zhou_q, AnalyticFamily, MeasurementBasis, OptimizerConfig,
};
use crate::operator_basis::{
    gell_mann_basis_with, projection_from_simplex, projector_simplex, weight_vectors, GeneratorOrdering,
};
use crate::state_zoo::{self, seeded_rng};
use crate::tolerances::EPS_EQ;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    /// Reduced corpus sizes; same criteria and tolerances.
    pub quick: bool,
    /// Generator convention used by the algebraic checks.
    pub ordering: GeneratorOrdering,
    pub optimizer: OptimizerConfig,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { quick: false, ordering: GeneratorOrdering::CartanFirst, optimizer: OptimizerConfig::default() }
    }
}

impl SuiteOptions {
    fn count(&self, full: usize) -> usize {
        if self.quick {
            (full / 10).max(5)
        } else {
            full
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    /// Worst observed value of the checked quantity.
    pub measured: f64,
    pub threshold: f64,
    pub samples: usize,
    pub detail: String,
    pub elapsed: Duration,
    pub time_limit: Duration,
    pub value_ok: bool,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.value_ok && self.elapsed <= self.time_limit
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] C{:<2} {}: measured {:.3e} vs threshold {:.1e} over {} samples; {:.2}s (limit {}s){}{}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.threshold,
            self.samples,
            self.elapsed.as_secs_f64(),
            self.time_limit.as_secs(),
            if self.detail.is_empty() { "" } else { "; " },
            self.detail,
        )
    }
}

struct Check {
    measured: f64,
    samples: usize,
    detail: String,
    ok: bool,
}

fn timed(id: u8, name: &'static str, threshold: f64, limit_secs: u64, body: impl FnOnce() -> Check) -> CriterionOutcome {
    let start = Instant::now();
    let check = body();
    CriterionOutcome {
        id,
        name,
        measured: check.measured,
        threshold,
        samples: check.samples,
        detail: check.detail,
        elapsed: start.elapsed(),
        time_limit: Duration::from_secs(limit_secs),
        value_ok: check.ok,
    }
}

fn below(measured: f64, samples: usize, threshold: f64) -> Check {
    Check { measured, samples, detail: String::new(), ok: measured < threshold }
}

fn grid(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64).collect()
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Werner closed form, plus the scalar `𝒯𝒯^t = tau I` structure computed
/// with the configured generator convention.
pub fn werner_closed_form(opts: &SuiteOptions) -> CriterionOutcome {
    timed(1, "Werner closed form", 1e-9, 5, || {
        let mut worst: f64 = 0.0;
        let mut samples = 0;
        for m in 2..=4 {
            let gen = gell_mann_basis_with(m, opts.ordering).expect("m >= 2");
            for x in grid(-1.0, 1.0, 21) {
                let rho = state_zoo::werner(m, x).expect("x in domain");
                let reference = analytic_reference(&AnalyticFamily::Werner { m, x }).expect("x in domain");
                worst = worst.max((d_p(&rho) - reference.d_g).abs());
                let d = decompose_with(&rho, &gen, &gen).expect("matching dims");
                let tau = reference.tau.expect("Werner has tau");
                let k = m * m - 1;
                let gram = left_correlation(&d).gram();
                worst = worst.max((gram - DMatrix::identity(k, k) * tau).amax());
                samples += 1;
            }
        }
        below(worst, samples, 1e-9)
    })
}

pub fn isotropic_closed_form(_opts: &SuiteOptions) -> CriterionOutcome {
    timed(2, "Isotropic closed form", 1e-9, 5, || {
        let mut worst: f64 = 0.0;
        let mut samples = 0;
        for m in 2..=4 {
            for x in grid(0.0, 1.0, 11) {
                let rho = state_zoo::isotropic(m, x).expect("x in domain");
                let reference = analytic_reference(&AnalyticFamily::Isotropic { m, x }).expect("x in domain");
                worst = worst.max((d_p(&rho) - reference.d_g).abs());
                samples += 1;
            }
        }
        below(worst, samples, 1e-9)
    })
}

pub fn maximal_discord_states(opts: &SuiteOptions) -> CriterionOutcome {
    timed(3, "Maximally entangled states", 1e-6, 30, || {
        let mut worst: f64 = 0.0;
        let mut detail = Vec::new();
        for m in 2..=4 {
            let rho = state_zoo::max_entangled(m).expect("m >= 2");
            let target = (m - 1) as f64 / m as f64;
            let dg = if m == 2 {
                gd_exact_2xn(&rho).expect("m = 2")
            } else {
                gd_numeric(&rho, &opts.optimizer).expect("valid config").value
            };
            let dp = d_p(&rho);
            worst = worst.max((dp - target).abs()).max((dg - target).abs());
            detail.push(format!("m={m}: d_p={dp:.12} d_g={dg:.12}"));
        }
        let mut c = below(worst, 3, 1e-6);
        c.detail = detail.join(", ");
        c
    })
}

pub fn pure_state_formula(opts: &SuiteOptions) -> CriterionOutcome {
    timed(4, "Pure-state formula", 1e-5, 120, || {
        let count = opts.count(100);
        let mut worst: f64 = 0.0;
        for &(m, base) in &[(2usize, 40_000u64), (3, 41_000)] {
            let errs: Vec<f64> = (0..count as u64)
                .into_par_iter()
                .map(|i| {
                    let s = state_zoo::random_schmidt_vector(m, base + i);
                    let rho = state_zoo::pure_schmidt(&s, m).expect("valid Schmidt vector");
                    let value = if m == 2 {
                        gd_exact_2xn(&rho).expect("m = 2")
                    } else {
                        gd_numeric(&rho, &opts.optimizer).expect("valid config").value
                    };
                    let exact = analytic_reference(&AnalyticFamily::PureSchmidt { s }).expect("valid").d_g;
                    (value - exact).abs()
                })
                .collect();
            worst = worst.max(max_of(errs));
        }
        below(worst, 2 * count, 1e-5)
    })
}

pub fn qubit_exactness(opts: &SuiteOptions) -> CriterionOutcome {
    timed(5, "2⊗n exactness", 1e-6, 180, || {
        let count = opts.count(200);
        let mut worst_exact: f64 = 0.0;
        let mut worst_numeric: f64 = 0.0;
        for n in 2..=4usize {
            let errs: Vec<(f64, f64)> = (0..count as u64)
                .into_par_iter()
                .map(|i| {
                    let seed = 50_000 + 1000 * n as u64 + i;
                    let rank = 1 + (i as usize % (2 * n));
                    let rho = state_zoo::random_mixed(2, n, rank, seed).expect("valid rank");
                    let dp = d_p(&rho);
                    let exact = gd_exact_2xn(&rho).expect("m = 2");
                    let numeric = gd_numeric(&rho, &opts.optimizer).expect("valid config").value;
                    ((dp - exact).abs(), (dp - numeric).abs())
                })
                .collect();
            worst_exact = worst_exact.max(max_of(errs.iter().map(|e| e.0)));
            worst_numeric = worst_numeric.max(max_of(errs.iter().map(|e| e.1)));
        }
        Check {
            measured: worst_numeric,
            samples: 3 * count,
            detail: format!("max |d_p - exact| = {worst_exact:.3e} (threshold 1e-12)"),
            ok: worst_exact < 1e-12 && worst_numeric < 1e-6,
        }
    })
}

pub fn lower_bound_ordering(opts: &SuiteOptions) -> CriterionOutcome {
    timed(6, "Lower-bound ordering", 1e-6, 600, || {
        let count = opts.count(200);
        let mut violations = 0;
        let mut worst_excess = f64::NEG_INFINITY;
        let mut max_gap: f64 = 0.0;
        for &(m, n) in &[(3usize, 2usize), (3, 3)] {
            let res: Vec<(f64, f64)> = (0..count as u64)
                .into_par_iter()
                .map(|i| {
                    let seed = 60_000 + 1000 * n as u64 + i;
                    let rank = 1 + (i as usize % (m * n));
                    let rho = state_zoo::random_mixed(m, n, rank, seed).expect("valid rank");
                    let dp = d_p(&rho);
                    let dg = gd_numeric(&rho, &opts.optimizer).expect("valid config").value;
                    (dp, dg)
                })
                .collect();
            for (dp, dg) in res {
                worst_excess = worst_excess.max(dp - dg);
                max_gap = max_gap.max(dg - dp);
                if dp > dg + 1e-6 {
                    violations += 1;
                }
            }
        }
        Check {
            measured: worst_excess,
            samples: 2 * count,
            detail: format!("{violations} violations; largest d_g - d_p = {max_gap:.3e}"),
            ok: violations == 0,
        }
    })
}

pub fn zero_discord_detection(opts: &SuiteOptions) -> CriterionOutcome {
    timed(7, "Zero-discord soundness/completeness", 1e-10, 60, || {
        let count = opts.count(100);
        let dims = [(2usize, 2usize), (3, 2), (3, 3), (2, 3), (4, 2)];
        let mut failures = Vec::new();
        let mut worst_cq: f64 = 0.0;
        let mut smallest_generic = f64::INFINITY;
        for i in 0..count as u64 {
            let (m, n) = dims[i as usize % dims.len()];
            let rho = state_zoo::random_classical_quantum(m, n, 70_000 + i).expect("valid dims");
            let dp = d_p(&rho);
            let v = is_zero_discord(&rho);
            worst_cq = worst_cq.max(dp);
            if !(v.zero_discord && v.consistent && dp < 1e-10) {
                failures.push(format!("cq#{i}"));
            }
        }
        for i in 0..count as u64 {
            let rho = state_zoo::random_mixed(3, 3, 9, 71_000 + i).expect("valid rank");
            let dp = d_p(&rho);
            let v = is_zero_discord(&rho);
            smallest_generic = smallest_generic.min(dp);
            if v.zero_discord || !v.consistent || dp <= 1e-6 {
                failures.push(format!("generic#{i}"));
            }
        }
        Check {
            measured: worst_cq,
            samples: 2 * count,
            detail: format!("smallest generic d_p = {smallest_generic:.3e} (must exceed 1e-6); failures: {failures:?}"),
            ok: failures.is_empty(),
        }
    })
}

pub fn objective_forms_agree(opts: &SuiteOptions) -> CriterionOutcome {
    timed(8, "Three-form objective equality", 1e-9, 60, || {
        let count = opts.count(100);
        let mut worst: f64 = 0.0;
        for &(m, n) in &[(2usize, 2usize), (3, 2)] {
            for i in 0..count as u64 {
                let seed = 80_000 + 1000 * m as u64 + i;
                let rank = 1 + (i as usize % (m * n));
                let rho = state_zoo::random_mixed(m, n, rank, seed).expect("valid rank");
                let b = MeasurementBasis::new(haar_unitary(m, &mut seeded_rng(seed, 1))).expect("unitary");
                let a = gd_objective_measurement(&rho, &b).expect("dims");
                let c = gd_objective_cmatrix(&rho, &b).expect("dims");
                let s = gd_objective_simplex(&rho, &b).expect("dims");
                worst = worst.max((a - c).abs()).max((a - s).abs()).max((c - s).abs());
            }
        }
        below(worst, 2 * count, 1e-9)
    })
}

pub fn local_unitary_invariance(opts: &SuiteOptions) -> CriterionOutcome {
    timed(9, "Local-unitary invariance", 1e-10, 30, || {
        let count = opts.count(100);
        let mut worst: f64 = 0.0;
        for i in 0..count as u64 {
            let seed = 90_000 + i;
            let rank = 1 + (i as usize % 9);
            let rho = state_zoo::random_mixed(3, 3, rank, seed).expect("valid rank");
            let u1 = haar_unitary(3, &mut seeded_rng(seed, 1));
            let u2 = haar_unitary(3, &mut seeded_rng(seed, 2));
            let moved = rho.local_transform(&u1, &u2).expect("unitaries preserve states");
            worst = worst.max((d_p(&rho) - d_p(&moved)).abs());
        }
        below(worst, count, 1e-10)
    })
}

pub fn q_matches_d_p_without_local_vector(_opts: &SuiteOptions) -> CriterionOutcome {
    timed(10, "Q = D_P when x = 0", 1e-10, 5, || {
        let mut states: Vec<DensityMatrix> = Vec::new();
        for m in 2..=4 {
            for x in grid(-1.0, 1.0, 21) {
                states.push(state_zoo::werner(m, x).expect("domain"));
            }
            for x in grid(0.0, 1.0, 11) {
                states.push(state_zoo::isotropic(m, x).expect("domain"));
            }
            states.push(state_zoo::max_entangled(m).expect("m >= 2"));
        }
        let worst = max_of(states.iter().map(|rho| (zhou_q(rho) - d_p(rho)).abs()));
        below(worst, states.len(), 1e-10)
    })
}

pub fn algebraic_substrate(opts: &SuiteOptions) -> CriterionOutcome {
    timed(11, "Algebraic substrate", EPS_EQ, 30, || {
        let mut worst: f64 = 0.0;
        let mut samples = 0;
        let mut parts = Vec::new();

        let mut gen_dev: f64 = 0.0;
        for m in 2..=6 {
            let g = gell_mann_basis_with(m, opts.ordering).expect("m >= 2");
            gen_dev = gen_dev.max(g.max_invariant_deviation());
            samples += 1;
        }
        parts.push(format!("generators {gen_dev:.1e}"));
        worst = worst.max(gen_dev);

        let mut simplex_dev: f64 = 0.0;
        let mut proj_dev: f64 = 0.0;
        let per_m = opts.count(100);
        for m in 2..=4 {
            let g = gell_mann_basis_with(m, opts.ordering).expect("m >= 2");
            for i in 0..per_m as u64 {
                let u = haar_unitary(m, &mut seeded_rng(110_000 + 1000 * m as u64 + i, 0));
                let Ok(s) = projector_simplex(&u, &g) else {
                    simplex_dev = f64::INFINITY;
                    continue;
                };
                simplex_dev = simplex_dev.max(s.max_invariant_deviation());
                match projection_from_simplex(&s) {
                    Ok(p) => {
                        let rank_dev = if p.rank() == m - 1 { 0.0 } else { 1.0 };
                        proj_dev = proj_dev
                            .max(p.idempotence_deviation())
                            .max(p.symmetry_deviation())
                            .max((p.trace() - (m - 1) as f64).abs())
                            .max(rank_dev);
                    }
                    Err(_) => proj_dev = f64::INFINITY,
                }
                samples += 1;
            }
        }
        parts.push(format!("simplex {simplex_dev:.1e}"));
        parts.push(format!("projection {proj_dev:.1e}"));
        worst = worst.max(simplex_dev).max(proj_dev);

        let mut weight_dev: f64 = 0.0;
        for m in 2..=6 {
            let nu = weight_vectors(m).expect("m >= 2");
            for k in 0..m - 1 {
                for l in 0..m - 1 {
                    let s: f64 = nu.iter().map(|v| v[k] * v[l]).sum();
                    weight_dev = weight_dev.max((s - if k == l { 1.0 } else { 0.0 }).abs());
                }
            }
            samples += 1;
        }
        parts.push(format!("weights {weight_dev:.1e}"));
        worst = worst.max(weight_dev);

        let mut bloch_dev: f64 = 0.0;
        let per_dims = opts.count(50);
        for &(m, n) in &[(2usize, 2usize), (2, 3), (3, 2), (3, 3), (2, 4)] {
            let ga = gell_mann_basis_with(m, opts.ordering).expect("m >= 2");
            let gb = gell_mann_basis_with(n, opts.ordering).expect("n >= 2");
            for i in 0..per_dims as u64 {
                let rho = state_zoo::random_mixed(m, n, m * n, 111_000 + 100 * (m * n) as u64 + i).expect("rank");
                let d = decompose_with(&rho, &ga, &gb).expect("dims");
                let back = crate::bloch::reconstruct_with(&d, &ga, &gb).expect("dims");
                let diff = (back.matrix - rho.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
                bloch_dev = bloch_dev.max(diff);
                samples += 1;
            }
        }
        parts.push(format!("bloch round trip {bloch_dev:.1e}"));
        worst = worst.max(bloch_dev);

        // The default-convention reconstruct path must agree with the above.
        let rho = state_zoo::random_mixed(3, 2, 6, 1).expect("rank");
        let back = reconstruct(&decompose(&rho)).expect("dims");
        worst = worst.max((back.matrix - rho.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max));

        Check { measured: worst, samples, detail: parts.join(", "), ok: worst < EPS_EQ }
    })
}

pub type CriterionFn = fn(&SuiteOptions) -> CriterionOutcome;

pub const CRITERIA: [CriterionFn; 11] = [
    werner_closed_form,
    isotropic_closed_form,
    maximal_discord_states,
    pure_state_formula,
    qubit_exactness,
    lower_bound_ordering,
    zero_discord_detection,
    objective_forms_agree,
    local_unitary_invariance,
    q_matches_d_p_without_local_vector,
    algebraic_substrate,
];

pub fn run_all(opts: &SuiteOptions) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| c(opts)).collect()
}

/// Sanity helper for callers: `I_P - C_P = D_P` on a state.
pub fn correlation_split_error(rho: &DensityMatrix) -> f64 {
    (correlations(rho).discord() - d_p(rho)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_ordering_fails_werner_and_substrate_checks() {
        let opts = SuiteOptions { quick: true, ordering: GeneratorOrdering::CorruptedForTesting, ..Default::default() };
        assert!(!werner_closed_form(&opts).passed());
        assert!(!algebraic_substrate(&opts).passed());
    }

    #[test]
    fn grid_endpoints() {
        let g = grid(-1.0, 1.0, 21);
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[20], 1.0);
        assert!((g[10]).abs() < 1e-15);
    }

    #[test]
    fn split_error_is_small() {
        assert!(correlation_split_error(&state_zoo::random_mixed(2, 2, 3, 1).unwrap()) < EPS_EQ);
    }
}
