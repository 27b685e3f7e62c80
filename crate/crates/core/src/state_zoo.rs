//! Analytic state families and seeded random corpora.
//!
//! Randomness is driven by `ChaCha8Rng`. A root seed is split into
//! independent streams with [`seeded_rng`]: stream `k` of root `s` is
//! `ChaCha8Rng::seed_from_u64(s)` with `set_stream(k)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::bloch::{validate_density_operator, DensityMatrix};
use crate::error::{DiscordError, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ONE, ZERO};
use crate::tolerances::EPS_EQ;

pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_local_dim(m: usize, what: &str) -> Result<()> {
    if m < 2 {
        return Err(DiscordError::InvalidDimension(format!("{what} must be at least 2, got {m}")));
    }
    Ok(())
}

fn check_probabilities(p: &[f64], what: &str) -> Result<()> {
    if p.is_empty() || p.iter().any(|&v| !v.is_finite() || v < -EPS_EQ) {
        return Err(DiscordError::Domain(format!("{what} entries must be nonnegative")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > EPS_EQ {
        return Err(DiscordError::Domain(format!("{what} must sum to 1, sums to {total}")));
    }
    Ok(())
}

/// Flip operator `F = sum_kl |kl><lk|` on `C^m ⊗ C^m`.
pub fn flip_operator(m: usize) -> CMatrix {
    let mut f = CMatrix::zeros(m * m, m * m);
    for k in 0..m {
        for l in 0..m {
            f[(k * m + l, l * m + k)] = ONE;
        }
    }
    f
}

/// `m ⊗ m` Werner state with `x = Tr(F rho)`, `x ∈ [-1, 1]`.
pub fn werner(m: usize, x: f64) -> Result<DensityMatrix> {
    check_local_dim(m, "m")?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(DiscordError::Domain(format!("Werner parameter x must lie in [-1, 1], got {x}")));
    }
    let mf = m as f64;
    let denom = mf * mf * mf - mf;
    let id = CMatrix::identity(m * m, m * m) * C64::new((mf - x) / denom, 0.0);
    let flip = flip_operator(m) * C64::new((mf * x - 1.0) / denom, 0.0);
    DensityMatrix::new(id + flip, m, m)
}

/// `(1/sqrt(m)) sum_k |kk>`.
pub fn max_entangled_vector(m: usize) -> CVector {
    let mut v = CVector::from_element(m * m, ZERO);
    let amp = C64::new(1.0 / (m as f64).sqrt(), 0.0);
    for k in 0..m {
        v[k * m + k] = amp;
    }
    v
}

/// `m ⊗ m` isotropic state with fidelity `x = <psi|rho|psi>`, `x ∈ [0, 1]`.
pub fn isotropic(m: usize, x: f64) -> Result<DensityMatrix> {
    check_local_dim(m, "m")?;
    if !(0.0..=1.0).contains(&x) {
        return Err(DiscordError::Domain(format!("isotropic parameter x must lie in [0, 1], got {x}")));
    }
    let mf = m as f64;
    let d = mf * mf - 1.0;
    let psi = max_entangled_vector(m);
    let id = CMatrix::identity(m * m, m * m) * C64::new((1.0 - x) / d, 0.0);
    let proj = (&psi * psi.adjoint()) * C64::new((mf * mf * x - 1.0) / d, 0.0);
    DensityMatrix::new(id + proj, m, m)
}

pub fn max_entangled(m: usize) -> Result<DensityMatrix> {
    check_local_dim(m, "m")?;
    let psi = max_entangled_vector(m);
    DensityMatrix::new(&psi * psi.adjoint(), m, m)
}

/// `|Psi> = sum_i sqrt(s_i) |i>|i>` in `m ⊗ n` with `m = s.len() <= n`.
pub fn pure_schmidt(s: &[f64], n: usize) -> Result<DensityMatrix> {
    let m = s.len();
    check_local_dim(m, "number of Schmidt coefficients")?;
    if n < m {
        return Err(DiscordError::Domain(format!("n = {n} must be at least the Schmidt length {m}")));
    }
    check_probabilities(s, "Schmidt coefficients")?;
    let mut psi = CVector::from_element(m * n, ZERO);
    for (i, &si) in s.iter().enumerate() {
        psi[i * n + i] = C64::new(si.max(0.0).sqrt(), 0.0);
    }
    DensityMatrix::new(&psi * psi.adjoint(), m, n)
}

pub fn product(rho_a: &CMatrix, rho_b: &CMatrix) -> Result<DensityMatrix> {
    validate_density_operator(rho_a)?;
    validate_density_operator(rho_b)?;
    DensityMatrix::new(linalg::kron(rho_a, rho_b), rho_a.nrows(), rho_b.nrows())
}

/// `sum_k p_k |k><k| ⊗ sigma_k`, with `|k>` the columns of `basis`.
pub fn classical_quantum(p: &[f64], basis: &CMatrix, sigmas: &[CMatrix]) -> Result<DensityMatrix> {
    let m = basis.nrows();
    check_local_dim(m, "m")?;
    if basis.ncols() != m || p.len() != m || sigmas.len() != m {
        return Err(DiscordError::DimensionMismatch {
            expected: format!("{m} probabilities, an {m}x{m} basis and {m} local states"),
            found: format!("{} probabilities, {}x{} basis, {} states", p.len(), basis.nrows(), basis.ncols(), sigmas.len()),
        });
    }
    check_probabilities(p, "probabilities")?;
    let deviation = linalg::unitarity_deviation(basis);
    if deviation > EPS_EQ {
        return Err(DiscordError::NotOrthonormal { deviation });
    }
    let n = sigmas[0].nrows();
    for s in sigmas {
        if s.nrows() != n {
            return Err(DiscordError::DimensionMismatch {
                expected: format!("local states of size {n}"),
                found: format!("size {}", s.nrows()),
            });
        }
        validate_density_operator(s)?;
    }
    let mut rho = CMatrix::zeros(m * n, m * n);
    for k in 0..m {
        let ket = basis.column(k).into_owned();
        let proj = &ket * ket.adjoint();
        rho += linalg::kron(&proj, &sigmas[k]) * C64::new(p[k], 0.0);
    }
    DensityMatrix::new(rho, m, n)
}

/// Ginibre density matrix `W W^dagger / Tr` with `W` of shape `dim x rank`.
pub fn ginibre_state<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> CMatrix {
    let w = linalg::complex_gaussian_matrix(dim, rank, rng);
    let g = &w * w.adjoint();
    let tr = linalg::trace(&g);
    g / tr
}

/// Point drawn uniformly from the probability simplex of dimension `len`.
pub fn uniform_simplex_point<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|v| v / total).collect()
}

pub fn random_mixed(m: usize, n: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    check_local_dim(m, "m")?;
    check_local_dim(n, "n")?;
    if rank == 0 || rank > m * n {
        return Err(DiscordError::Domain(format!("rank must lie in 1..={}, got {rank}", m * n)));
    }
    DensityMatrix::new(ginibre_state(m * n, rank, &mut seeded_rng(seed, 0)), m, n)
}

pub fn random_pure(m: usize, n: usize, seed: u64) -> Result<DensityMatrix> {
    random_mixed(m, n, 1, seed)
}

pub fn random_unitary(m: usize, seed: u64) -> Result<CMatrix> {
    if m == 0 {
        return Err(DiscordError::InvalidDimension("unitary dimension must be positive".into()));
    }
    Ok(linalg::haar_unitary(m, &mut seeded_rng(seed, 0)))
}

/// Uniformly random Schmidt vector of length `m`.
pub fn random_schmidt_vector(m: usize, seed: u64) -> Vec<f64> {
    uniform_simplex_point(m, &mut seeded_rng(seed, 0))
}

/// Random classical-quantum state. Streams of the root seed: 0 for the
/// probabilities, 1 for the basis, `2 + k` for the local state of block `k`.
pub fn random_classical_quantum(m: usize, n: usize, seed: u64) -> Result<DensityMatrix> {
    check_local_dim(m, "m")?;
    check_local_dim(n, "n")?;
    let p = uniform_simplex_point(m, &mut seeded_rng(seed, 0));
    let basis = linalg::haar_unitary(m, &mut seeded_rng(seed, 1));
    let sigmas: Vec<CMatrix> = (0..m)
        .map(|k| ginibre_state(n, n, &mut seeded_rng(seed, 2 + k as u64)))
        .collect();
    classical_quantum(&p, &basis, &sigmas)
}

/// Random product of two full-rank local states. Streams 0 and 1.
pub fn random_product(m: usize, n: usize, seed: u64) -> Result<DensityMatrix> {
    check_local_dim(m, "m")?;
    check_local_dim(n, "n")?;
    let a = ginibre_state(m, m, &mut seeded_rng(seed, 0));
    let b = ginibre_state(n, n, &mut seeded_rng(seed, 1));
    product(&a, &b)
}

/// Serializable description of a state to generate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Werner { m: usize, x: f64 },
    Isotropic { m: usize, x: f64 },
    PureSchmidt { s: Vec<f64>, n: usize },
    MaxEntangled { m: usize },
    ClassicalQuantum {
        m: usize,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<Vec<f64>>,
        #[serde(default)]
        seed: u64,
    },
    Product {
        m: usize,
        n: usize,
        #[serde(default)]
        seed: u64,
    },
    RandomMixed {
        m: usize,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rank: Option<usize>,
        #[serde(default)]
        seed: u64,
    },
    RandomPure {
        m: usize,
        n: usize,
        #[serde(default)]
        seed: u64,
    },
}

impl StateSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            StateSpec::Werner { .. } => "werner",
            StateSpec::Isotropic { .. } => "isotropic",
            StateSpec::PureSchmidt { .. } => "pure_schmidt",
            StateSpec::MaxEntangled { .. } => "max_entangled",
            StateSpec::ClassicalQuantum { .. } => "classical_quantum",
            StateSpec::Product { .. } => "product",
            StateSpec::RandomMixed { .. } => "random_mixed",
            StateSpec::RandomPure { .. } => "random_pure",
        }
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Werner { m, x } => werner(*m, *x),
            StateSpec::Isotropic { m, x } => isotropic(*m, *x),
            StateSpec::PureSchmidt { s, n } => pure_schmidt(s, *n),
            StateSpec::MaxEntangled { m } => max_entangled(*m),
            StateSpec::ClassicalQuantum { m, n, p, seed } => match p {
                None => random_classical_quantum(*m, *n, *seed),
                Some(p) => {
                    check_local_dim(*m, "m")?;
                    check_local_dim(*n, "n")?;
                    let basis = linalg::haar_unitary(*m, &mut seeded_rng(*seed, 1));
                    let sigmas: Vec<CMatrix> = (0..*m)
                        .map(|k| ginibre_state(*n, *n, &mut seeded_rng(*seed, 2 + k as u64)))
                        .collect();
                    classical_quantum(p, &basis, &sigmas)
                }
            },
            StateSpec::Product { m, n, seed } => random_product(*m, *n, *seed),
            StateSpec::RandomMixed { m, n, rank, seed } => random_mixed(*m, *n, rank.unwrap_or(m * n), *seed),
            StateSpec::RandomPure { m, n, seed } => random_pure(*m, *n, *seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{decompose, left_correlation};
    use crate::operator_basis::{gell_mann_basis, projector_coherence_vector, GeneratorBasis};
    use nalgebra::{DMatrix, DVector};

    fn max_abs(a: &CMatrix) -> f64 {
        a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn qubit_werner_endpoints() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = CVector::from_element(4, ZERO);
        psi[1] = C64::new(s, 0.0);
        psi[2] = C64::new(-s, 0.0);
        let singlet = &psi * psi.adjoint();
        assert!(max_abs(&(werner(2, -1.0).unwrap().into_matrix() - singlet)) < 1e-15);

        let d = decompose(&werner(2, 1.0).unwrap());
        assert!(d.x.amax() < 1e-15 && d.y.amax() < 1e-15);
        // x = 1 is the normalized symmetric projector: T = +I/3 ... scaled.
        assert!((&d.t - DMatrix::identity(3, 3) * (1.0 / 3.0)).amax() < 1e-14);
    }

    #[test]
    fn werner_domain() {
        assert!(matches!(werner(3, 1.5), Err(DiscordError::Domain(_))));
        assert!(matches!(werner(1, 0.0), Err(DiscordError::InvalidDimension(_))));
    }

    #[test]
    fn werner_and_isotropic_have_scalar_left_gram() {
        for m in 2..=4 {
            let mf = m as f64;
            for i in 0..=10 {
                let x = -1.0 + 0.2 * i as f64;
                let d = decompose(&werner(m, x).unwrap());
                assert!(d.x.amax() < EPS_EQ && d.y.amax() < EPS_EQ);
                let tau = (mf * x - 1.0).powi(2) / (mf * mf * (mf * mf - 1.0).powi(2));
                let g = left_correlation(&d).gram();
                assert!((g - DMatrix::identity(m * m - 1, m * m - 1) * tau).amax() < EPS_EQ);

                let xi = 0.1 * i as f64;
                let d = decompose(&isotropic(m, xi).unwrap());
                assert!(d.x.amax() < EPS_EQ && d.y.amax() < EPS_EQ);
                let tau = (mf * mf * xi - 1.0).powi(2) / (mf * mf * (mf * mf - 1.0).powi(2));
                let g = left_correlation(&d).gram();
                assert!((g - DMatrix::identity(m * m - 1, m * m - 1) * tau).amax() < EPS_EQ);
            }
        }
    }

    #[test]
    fn qubit_isotropic_top_is_bell_state() {
        let psi = max_entangled_vector(2);
        let bell = &psi * psi.adjoint();
        assert!(max_abs(&(isotropic(2, 1.0).unwrap().into_matrix() - bell)) < 1e-15);
        assert!(matches!(isotropic(2, -0.1), Err(DiscordError::Domain(_))));
    }

    #[test]
    fn pure_schmidt_domain_and_rank() {
        assert!(pure_schmidt(&[0.7, 0.4], 2).is_err());
        assert!(pure_schmidt(&[0.5, 0.5, 0.0], 2).is_err());
        let rho = pure_schmidt(&[0.7, 0.3], 3).unwrap();
        assert_eq!(rho.dims(), (2, 3));
        assert!((rho.purity() - 1.0).abs() < 1e-14);
    }

    // Coherence data of the Schmidt state in closed form, Cartan sector first.
    fn closed_form_schmidt(s: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let m = s.len();
        let mf = m as f64;
        let mut x = DVector::zeros(m * m - 1);
        let mut tc = DMatrix::zeros(m - 1, m - 1);
        for k in 1..m {
            let kf = k as f64;
            let head: f64 = s[..k].iter().sum();
            x[k - 1] = mf * (head - kf * s[k]) / (2.0 * kf * (kf + 1.0)).sqrt();
            tc[(k - 1, k - 1)] = (head + kf * kf * s[k]) / (kf * (kf + 1.0));
            for l in (k + 1)..m {
                let lf = l as f64;
                let v = (head - kf * s[k]) / (kf * (kf + 1.0) * lf * (lf + 1.0)).sqrt();
                tc[(k - 1, l - 1)] = v;
                tc[(l - 1, k - 1)] = v;
            }
        }
        let mut t = DMatrix::zeros(m * m - 1, m * m - 1);
        t.view_mut((0, 0), (m - 1, m - 1)).copy_from(&tc);
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|j| ((j + 1)..m).map(move |k| (j, k))).collect();
        let np = pairs.len();
        for (p, &(j, k)) in pairs.iter().enumerate() {
            let r = (s[j] * s[k]).sqrt();
            // Symmetric generators carry +, antisymmetric ones -.
            t[(m - 1 + p, m - 1 + p)] = r;
            t[(m - 1 + np + p, m - 1 + np + p)] = -r;
        }
        (x, t * (mf * mf / 2.0))
    }

    #[test]
    fn pure_schmidt_matches_closed_form_blocks() {
        for (m, seed) in [(2, 1u64), (3, 2), (4, 3)] {
            let s = random_schmidt_vector(m, seed);
            let d = decompose(&pure_schmidt(&s, m).unwrap());
            let (x, t) = closed_form_schmidt(&s);
            assert!((&d.x - &x).amax() < EPS_EQ);
            assert!((&d.y - &x).amax() < EPS_EQ);
            assert!((&d.t - &t).amax() < EPS_EQ, "m = {m}");
            let tt = &d.t * d.t.transpose();
            assert!((tt - &t * t.transpose()).amax() < EPS_EQ);
        }
    }

    #[test]
    fn maximally_entangled_has_isotropic_correlations() {
        for m in 2..=4 {
            let d = decompose(&max_entangled(m).unwrap());
            let mf = m as f64;
            assert!(d.x.amax() < EPS_EQ);
            let tt = &d.t * d.t.transpose();
            assert!((tt - DMatrix::identity(m * m - 1, m * m - 1) * (mf * mf / 4.0)).amax() < EPS_EQ);
        }
    }

    fn coherence_of_state(sigma: &CMatrix, gen: &GeneratorBasis) -> DVector<f64> {
        let n = gen.dim() as f64;
        DVector::from_iterator(
            gen.len(),
            gen.generators().iter().map(|g| linalg::trace_of_product(g, sigma).re * n / 2.0),
        )
    }

    #[test]
    fn classical_quantum_bloch_data_is_a_weighted_sum() {
        for seed in 0..20u64 {
            let (m, n) = (3, 2);
            let p = uniform_simplex_point(m, &mut seeded_rng(seed, 0));
            let basis = linalg::haar_unitary(m, &mut seeded_rng(seed, 1));
            let sigmas: Vec<CMatrix> = (0..m).map(|k| ginibre_state(n, n, &mut seeded_rng(seed, 2 + k as u64))).collect();
            let rho = classical_quantum(&p, &basis, &sigmas).unwrap();
            assert_eq!(rho, random_classical_quantum(m, n, seed).unwrap());

            let ga = gell_mann_basis(m).unwrap();
            let gb = gell_mann_basis(n).unwrap();
            let alphas: Vec<DVector<f64>> = (0..m)
                .map(|k| projector_coherence_vector(&basis.column(k).into_owned(), &ga).unwrap().entries)
                .collect();
            let xis: Vec<DVector<f64>> = sigmas.iter().map(|s| coherence_of_state(s, &gb)).collect();
            let mut x = DVector::zeros(m * m - 1);
            let mut y = DVector::zeros(n * n - 1);
            let mut t = DMatrix::zeros(m * m - 1, n * n - 1);
            for k in 0..m {
                x += &alphas[k] * p[k];
                y += &xis[k] * p[k];
                t += &alphas[k] * xis[k].transpose() * p[k];
            }
            let d = decompose(&rho);
            assert!((d.x - x).amax() < EPS_EQ);
            assert!((d.y - y).amax() < EPS_EQ);
            assert!((d.t - t).amax() < EPS_EQ);
        }
    }

    #[test]
    fn single_block_classical_quantum_is_product() {
        let sig = ginibre_state(2, 2, &mut seeded_rng(1, 0));
        let rho = classical_quantum(&[1.0, 0.0], &CMatrix::identity(2, 2), &[sig.clone(), sig.clone()]).unwrap();
        let d = decompose(&rho);
        assert!((&d.t - &d.x * d.y.transpose()).amax() < EPS_EQ);
    }

    #[test]
    fn random_generators_are_deterministic_and_valid() {
        let a = random_mixed(3, 2, 6, 42).unwrap();
        let b = random_mixed(3, 2, 6, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_mixed(3, 2, 6, 43).unwrap());
        let pure = random_pure(2, 3, 8).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-12);
        assert!(random_mixed(2, 2, 5, 0).is_err());
        assert!(random_mixed(2, 2, 0, 0).is_err());
        let u = random_unitary(4, 5).unwrap();
        assert!(linalg::unitarity_deviation(&u) < 1e-13);
        let full = random_mixed(3, 3, 9, 1).unwrap();
        let ev = linalg::hermitian_eigenvalues_desc(full.matrix());
        assert!(ev[8] > 1e-8);
    }

    #[test]
    fn state_spec_json_round_trip() {
        let spec: StateSpec = serde_json::from_str(r#"{"family":"werner","m":3,"x":0.5}"#).unwrap();
        assert_eq!(spec, StateSpec::Werner { m: 3, x: 0.5 });
        let spec: StateSpec = serde_json::from_str(r#"{"family":"pure_schmidt","s":[0.7,0.3],"n":3}"#).unwrap();
        assert_eq!(spec.build().unwrap().dims(), (2, 3));
        let spec = StateSpec::RandomMixed { m: 2, n: 2, rank: Some(3), seed: 9 };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<StateSpec>(&text).unwrap(), spec);
        assert!(serde_json::from_str::<StateSpec>(r#"{"family":"werner","m":3,"x":0.5,"bogus":1}"#).is_err());
    }
}
