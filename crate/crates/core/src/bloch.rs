//! Bipartite density matrices and their Bloch representation
//! `rho = (I⊗I + x·l⊗I + I⊗y·l + sum t_ij l_i⊗l_j) / (mn)`.
//!
//! Party A is always the left tensor factor. Row-major index of `|a>|b>` is
//! `a * n + b`.

use nalgebra::{DMatrix, DVector};

use crate::error::{DiscordError, Result};
use crate::linalg::{self, CMatrix, C64, ZERO};
use crate::operator_basis::{gell_mann_basis, GeneratorBasis};
use crate::tolerances::{psd_threshold, EPS_EQ};

/// Hermitian, unit-trace, positive semidefinite `(mn) x (mn)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    m: usize,
    n: usize,
}

/// Check the state invariants of a single square matrix.
pub fn validate_density_operator(matrix: &CMatrix) -> Result<()> {
    if matrix.nrows() != matrix.ncols() {
        return Err(DiscordError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
        });
    }
    let deviation = linalg::hermitian_deviation(matrix);
    if deviation > EPS_EQ {
        return Err(DiscordError::NotHermitian { deviation });
    }
    let tr = linalg::trace(matrix).re;
    if (tr - 1.0).abs() > EPS_EQ {
        return Err(DiscordError::TraceNotOne { trace: tr });
    }
    let ev = linalg::hermitian_eigenvalues_desc(matrix);
    let scale = ev.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let threshold = psd_threshold(scale);
    let min = ev.last().copied().unwrap_or(0.0);
    if min < -threshold {
        return Err(DiscordError::NotPositive { min_eigenvalue: min, threshold });
    }
    Ok(())
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(DiscordError::InvalidDimension(format!(
                "both local dimensions must be at least 2, got ({m}, {n})"
            )));
        }
        if matrix.nrows() != m * n || matrix.ncols() != m * n {
            return Err(DiscordError::DimensionMismatch {
                expected: format!("{0}x{0} matrix for dims ({m}, {n})", m * n),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        validate_density_operator(&matrix)?;
        Ok(Self { matrix, m, n })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        linalg::hs_norm_sq(&self.matrix)
    }

    /// The `n x n` block `(<a|⊗I) rho (|b>⊗I)`.
    pub fn block(&self, a: usize, b: usize) -> CMatrix {
        self.matrix.view((a * self.n, b * self.n), (self.n, self.n)).into_owned()
    }

    pub fn reduced_a(&self) -> CMatrix {
        let (m, n) = (self.m, self.n);
        CMatrix::from_fn(m, m, |a, b| (0..n).map(|c| self.matrix[(a * n + c, b * n + c)]).sum())
    }

    pub fn reduced_b(&self) -> CMatrix {
        let (m, n) = (self.m, self.n);
        CMatrix::from_fn(n, n, |c, d| (0..m).map(|a| self.matrix[(a * n + c, a * n + d)]).sum())
    }

    /// The same state with the tensor factors exchanged (an `n ⊗ m` state).
    pub fn swap_parties(&self) -> DensityMatrix {
        let (m, n) = (self.m, self.n);
        let perm = |i: usize| {
            let (a, b) = (i / n, i % n);
            b * m + a
        };
        let mut out = CMatrix::zeros(m * n, m * n);
        for i in 0..m * n {
            for j in 0..m * n {
                out[(perm(i), perm(j))] = self.matrix[(i, j)];
            }
        }
        DensityMatrix { matrix: out, m: n, n: m }
    }

    /// `(U1⊗U2) rho (U1⊗U2)^dagger`.
    pub fn local_transform(&self, u1: &CMatrix, u2: &CMatrix) -> Result<DensityMatrix> {
        if u1.nrows() != self.m || u2.nrows() != self.n {
            return Err(DiscordError::DimensionMismatch {
                expected: format!("local unitaries of size {} and {}", self.m, self.n),
                found: format!("{} and {}", u1.nrows(), u2.nrows()),
            });
        }
        let u = linalg::kron(u1, u2);
        DensityMatrix::new(&u * &self.matrix * u.adjoint(), self.m, self.n)
    }
}

/// Local coherence vectors `x`, `y` and correlation matrix `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochDecomposition {
    pub m: usize,
    pub n: usize,
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub t: DMatrix<f64>,
}

impl BlochDecomposition {
    pub fn new(m: usize, n: usize, x: DVector<f64>, y: DVector<f64>, t: DMatrix<f64>) -> Result<Self> {
        let (la, lb) = (m * m - 1, n * n - 1);
        if m < 2 || n < 2 {
            return Err(DiscordError::InvalidDimension(format!("dims ({m}, {n})")));
        }
        if x.len() != la || y.len() != lb || t.nrows() != la || t.ncols() != lb {
            return Err(DiscordError::DimensionMismatch {
                expected: format!("x: {la}, y: {lb}, T: {la}x{lb}"),
                found: format!("x: {}, y: {}, T: {}x{}", x.len(), y.len(), t.nrows(), t.ncols()),
            });
        }
        Ok(Self { m, n, x, y, t })
    }

    /// Exchange the roles of the two parties.
    pub fn swapped(&self) -> BlochDecomposition {
        BlochDecomposition {
            m: self.n,
            n: self.m,
            x: self.y.clone(),
            y: self.x.clone(),
            t: self.t.transpose(),
        }
    }
}

pub fn decompose(rho: &DensityMatrix) -> BlochDecomposition {
    let ga = gell_mann_basis(rho.m()).expect("validated dimension");
    let gb = gell_mann_basis(rho.n()).expect("validated dimension");
    decompose_with(rho, &ga, &gb).expect("bases built from the state's dimensions")
}

/// Decompose against explicitly supplied generator sets.
pub fn decompose_with(
    rho: &DensityMatrix,
    gen_a: &GeneratorBasis,
    gen_b: &GeneratorBasis,
) -> Result<BlochDecomposition> {
    let (m, n) = rho.dims();
    if gen_a.dim() != m || gen_b.dim() != n {
        return Err(DiscordError::DimensionMismatch {
            expected: format!("generators for ({m}, {n})"),
            found: format!("({}, {})", gen_a.dim(), gen_b.dim()),
        });
    }
    let rho_a = rho.reduced_a();
    let rho_b = rho.reduced_b();
    let x = DVector::from_iterator(
        gen_a.len(),
        gen_a.generators().iter().map(|g| linalg::trace_of_product(g, &rho_a).re * m as f64 / 2.0),
    );
    let y = DVector::from_iterator(
        gen_b.len(),
        gen_b.generators().iter().map(|g| linalg::trace_of_product(g, &rho_b).re * n as f64 / 2.0),
    );

    let sparse_a: Vec<_> = gen_a.generators().iter().map(linalg::nonzero_entries).collect();
    let sparse_b: Vec<_> = gen_b.generators().iter().map(linalg::nonzero_entries).collect();
    let r = rho.matrix();
    let scale = (m * n) as f64 / 4.0;
    let t = DMatrix::from_fn(gen_a.len(), gen_b.len(), |i, j| {
        // Tr[(A⊗B) rho] = sum A_ab B_cd rho_{(b,d),(a,c)}
        let mut acc = ZERO;
        for &(a, b, va) in &sparse_a[i] {
            for &(c, d, vb) in &sparse_b[j] {
                acc += va * vb * r[(b * n + d, a * n + c)];
            }
        }
        acc.re * scale
    });
    Ok(BlochDecomposition { m, n, x, y, t })
}

/// Operator rebuilt from a Bloch decomposition. Hermitian with unit trace by
/// construction; positivity is only reported.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedState {
    pub matrix: CMatrix,
    pub m: usize,
    pub n: usize,
    pub min_eigenvalue: f64,
    pub is_positive: bool,
}

impl ReconstructedState {
    pub fn into_density(self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix, self.m, self.n)
    }
}

pub fn reconstruct(d: &BlochDecomposition) -> Result<ReconstructedState> {
    let checked = BlochDecomposition::new(d.m, d.n, d.x.clone(), d.y.clone(), d.t.clone())?;
    let ga = gell_mann_basis(checked.m)?;
    let gb = gell_mann_basis(checked.n)?;
    reconstruct_with(&checked, &ga, &gb)
}

pub fn reconstruct_with(
    d: &BlochDecomposition,
    gen_a: &GeneratorBasis,
    gen_b: &GeneratorBasis,
) -> Result<ReconstructedState> {
    let (m, n) = (d.m, d.n);
    if gen_a.dim() != m || gen_b.dim() != n {
        return Err(DiscordError::DimensionMismatch {
            expected: format!("generators for ({m}, {n})"),
            found: format!("({}, {})", gen_a.dim(), gen_b.dim()),
        });
    }
    let id_a = CMatrix::identity(m, m);
    let id_b = CMatrix::identity(n, n);
    let mut acc = CMatrix::identity(m * n, m * n);
    acc += linalg::kron(&gen_a.combine(&d.x), &id_b);
    acc += linalg::kron(&id_a, &gen_b.combine(&d.y));
    for (i, la) in gen_a.generators().iter().enumerate() {
        let row = d.t.row(i).transpose();
        acc += linalg::kron(la, &gen_b.combine(&row));
    }
    let matrix = acc * C64::new(1.0 / (m * n) as f64, 0.0);
    let ev = linalg::hermitian_eigenvalues_desc(&matrix);
    let scale = ev.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let min_eigenvalue = ev.last().copied().unwrap_or(0.0);
    Ok(ReconstructedState {
        matrix,
        m,
        n,
        min_eigenvalue,
        is_positive: min_eigenvalue >= -psd_threshold(scale),
    })
}

/// Real `m^2 x n^2` coefficients of `rho` in the orthonormal operator bases
/// `X_i ⊗ Y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix(pub DMatrix<f64>);

impl CoefficientMatrix {
    pub fn from_decomposition(d: &BlochDecomposition) -> Self {
        let (m, n) = (d.m as f64, d.n as f64);
        let pre = 1.0 / (m * n).sqrt();
        let mut c = DMatrix::zeros(d.m * d.m, d.n * d.n);
        c[(0, 0)] = pre;
        for j in 0..d.y.len() {
            c[(0, j + 1)] = pre * (2.0 / n).sqrt() * d.y[j];
        }
        for i in 0..d.x.len() {
            c[(i + 1, 0)] = pre * (2.0 / m).sqrt() * d.x[i];
            for j in 0..d.y.len() {
                c[(i + 1, j + 1)] = pre * 2.0 / (m * n).sqrt() * d.t[(i, j)];
            }
        }
        CoefficientMatrix(c)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `Tr(C C^t)`, equal to the purity of the state.
    pub fn gram_trace(&self) -> f64 {
        self.0.norm_squared()
    }
}

pub fn coefficient_matrix(rho: &DensityMatrix) -> CoefficientMatrix {
    CoefficientMatrix::from_decomposition(&decompose(rho))
}

/// `sqrt(2/(m^2 n)) [x | sqrt(2/n) T]`, an `(m^2 - 1) x n^2` matrix: the
/// coefficient matrix with its first row removed.
#[derive(Debug, Clone, PartialEq)]
pub struct LeftCorrelation {
    pub m: usize,
    pub n: usize,
    pub matrix: DMatrix<f64>,
}

impl LeftCorrelation {
    /// `𝒯 𝒯^t`.
    pub fn gram(&self) -> DMatrix<f64> {
        &self.matrix * self.matrix.transpose()
    }
}

pub fn left_correlation(d: &BlochDecomposition) -> LeftCorrelation {
    let (m, n) = (d.m as f64, d.n as f64);
    let pre = (2.0 / (m * m * n)).sqrt();
    let t_scale = (2.0 / n).sqrt();
    let mut mat = DMatrix::zeros(d.x.len(), d.n * d.n);
    for i in 0..d.x.len() {
        mat[(i, 0)] = pre * d.x[i];
        for j in 0..d.y.len() {
            mat[(i, j + 1)] = pre * t_scale * d.t[(i, j)];
        }
    }
    LeftCorrelation { m: d.m, n: d.n, matrix: mat }
}

/// `G = x x^t + (2/n) T T^t`.
#[derive(Debug, Clone, PartialEq)]
pub struct GMatrix(pub DMatrix<f64>);

impl GMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Eigenvalues `eta_k` in nonincreasing order.
    pub fn eigenvalues_desc(&self) -> Vec<f64> {
        linalg::symmetric_eigenvalues_desc(&self.0)
    }
}

pub fn g_matrix(d: &BlochDecomposition) -> GMatrix {
    let g = &d.x * d.x.transpose() + (&d.t * d.t.transpose()) * (2.0 / d.n as f64);
    GMatrix(g)
}

/// Complex matrix from a real one, exposed for callers that assemble states.
pub fn real_to_complex(a: &DMatrix<f64>) -> CMatrix {
    linalg::complexify(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_basis::x_basis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn singlet() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = DVector::from_vec(vec![0.0, s, -s, 0.0]);
        DensityMatrix::new(real_to_complex(&(&psi * psi.transpose())), 2, 2).unwrap()
    }

    fn random_state(m: usize, n: usize, seed: u64) -> DensityMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = linalg::complex_gaussian_matrix(m * n, m * n, &mut rng);
        let w = &g * g.adjoint();
        let tr = linalg::trace(&w);
        DensityMatrix::new(w / tr, m, n).unwrap()
    }

    fn max_abs(a: &CMatrix) -> f64 {
        a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn validation_names_the_violated_invariant() {
        let half = CMatrix::identity(4, 4) * C64::new(0.225, 0.0);
        assert!(matches!(DensityMatrix::new(half, 2, 2), Err(DiscordError::TraceNotOne { .. })));

        let mut nh = CMatrix::identity(4, 4) * C64::new(0.25, 0.0);
        nh[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(nh, 2, 2), Err(DiscordError::NotHermitian { .. })));

        let neg = real_to_complex(&DMatrix::from_diagonal(&DVector::from_vec(vec![0.6, 0.6, 0.1, -0.3])));
        assert!(matches!(DensityMatrix::new(neg, 2, 2), Err(DiscordError::NotPositive { .. })));

        let wrong = CMatrix::identity(5, 5) * C64::new(0.2, 0.0);
        assert!(matches!(DensityMatrix::new(wrong, 2, 2), Err(DiscordError::DimensionMismatch { .. })));
    }

    #[test]
    fn maximally_mixed_has_zero_bloch_vectors() {
        let rho = DensityMatrix::new(CMatrix::identity(6, 6) / C64::new(6.0, 0.0), 2, 3).unwrap();
        let d = decompose(&rho);
        assert!(d.x.amax() < 1e-15 && d.y.amax() < 1e-15 && d.t.amax() < 1e-15);
        let c = coefficient_matrix(&rho);
        assert!((c.0[(0, 0)] - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.0.iter().filter(|v| v.abs() > 1e-15).count(), 1);
    }

    #[test]
    fn singlet_correlation_is_minus_identity() {
        let d = decompose(&singlet());
        assert!(d.x.amax() < 1e-15 && d.y.amax() < 1e-15);
        assert!((&d.t + DMatrix::identity(3, 3)).amax() < 1e-15);
        let g = g_matrix(&d);
        assert!((g.0 - DMatrix::identity(3, 3)).amax() < 1e-14);
        let tt = left_correlation(&d).gram();
        assert!((tt - DMatrix::identity(3, 3) * 0.25).amax() < 1e-15);
        let c = coefficient_matrix(&singlet());
        assert!((c.gram_trace() - 1.0).abs() < 1e-14);
        let lower = c.0.view((1, 1), (3, 3)).into_owned();
        assert!((lower + DMatrix::identity(3, 3) * 0.5).amax() < 1e-15);
    }

    #[test]
    fn singlet_reconstructs_from_minus_identity() {
        let d = BlochDecomposition::new(2, 2, DVector::zeros(3), DVector::zeros(3), -DMatrix::identity(3, 3)).unwrap();
        let r = reconstruct(&d).unwrap();
        assert!(r.is_positive);
        assert!(max_abs(&(r.matrix - singlet().into_matrix())) < 1e-15);
    }

    #[test]
    fn zero_decomposition_is_maximally_mixed() {
        let d = BlochDecomposition::new(3, 2, DVector::zeros(8), DVector::zeros(3), DMatrix::zeros(8, 3)).unwrap();
        let r = reconstruct(&d).unwrap();
        assert!(max_abs(&(r.matrix - CMatrix::identity(6, 6) / C64::new(6.0, 0.0))) < 1e-15);
    }

    #[test]
    fn reconstruct_flags_non_positive_operators() {
        let d = BlochDecomposition::new(2, 2, DVector::zeros(3), DVector::zeros(3), DMatrix::identity(3, 3) * -2.0).unwrap();
        let r = reconstruct(&d).unwrap();
        assert!(!r.is_positive);
        assert!((linalg::trace(&r.matrix).re - 1.0).abs() < 1e-15);
        assert!(matches!(r.into_density(), Err(DiscordError::NotPositive { .. })));
    }

    #[test]
    fn reconstruct_rejects_inconsistent_shapes() {
        let d = BlochDecomposition { m: 2, n: 2, x: DVector::zeros(3), y: DVector::zeros(8), t: DMatrix::zeros(3, 3) };
        assert!(matches!(reconstruct(&d), Err(DiscordError::DimensionMismatch { .. })));
    }

    #[test]
    fn product_state_correlation_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let ga = linalg::complex_gaussian_matrix(3, 3, &mut rng);
        let gb = linalg::complex_gaussian_matrix(2, 2, &mut rng);
        let ra = &ga * ga.adjoint();
        let rb = &gb * gb.adjoint();
        let prod = linalg::kron(&(&ra / linalg::trace(&ra)), &(&rb / linalg::trace(&rb)));
        let d = decompose(&DensityMatrix::new(prod, 3, 2).unwrap());
        assert!((&d.t - &d.x * d.y.transpose()).amax() < 1e-13);
    }

    #[test]
    fn round_trips_and_identities_on_random_states() {
        let mut seed = 0;
        for &(m, n) in &[(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)] {
            let xa = x_basis(m).unwrap();
            let xb = x_basis(n).unwrap();
            for _ in 0..50 {
                seed += 1;
                let rho = random_state(m, n, seed);
                let d = decompose(&rho);
                let back = reconstruct(&d).unwrap();
                assert!(back.is_positive);
                assert!(max_abs(&(back.matrix.clone() - rho.matrix())) < EPS_EQ);
                let again = decompose(&back.into_density().unwrap());
                assert!((again.t - &d.t).amax() < EPS_EQ);

                // Coefficients by direct traces against X_i ⊗ Y_j.
                let c = coefficient_matrix(&rho);
                for (i, xi) in xa.operators().iter().enumerate() {
                    for (j, yj) in xb.operators().iter().enumerate() {
                        let direct = linalg::trace_of_product(&linalg::kron(xi, yj), rho.matrix()).re;
                        assert!((direct - c.0[(i, j)]).abs() < EPS_EQ);
                    }
                }
                assert!((c.gram_trace() - rho.purity()).abs() < EPS_EQ);

                let lc = left_correlation(&d);
                assert!((&lc.matrix - c.0.rows(1, m * m - 1)).amax() < EPS_EQ);
                let g = g_matrix(&d);
                let scaled = g.0.clone() * (2.0 / (m * m * n) as f64);
                assert!((lc.gram() - scaled).amax() < EPS_EQ);
                assert!((g.0.clone() - g.0.transpose()).amax() < EPS_EQ);
                assert!(g.eigenvalues_desc().iter().all(|&e| e > -1e-12));
            }
        }
    }

    #[test]
    fn swapping_parties_matches_swapped_decomposition() {
        let rho = random_state(2, 3, 5);
        let swapped = rho.swap_parties();
        assert_eq!(swapped.dims(), (3, 2));
        let a = decompose(&swapped);
        let b = decompose(&rho).swapped();
        assert!((a.x - b.x).amax() < EPS_EQ);
        assert!((a.y - b.y).amax() < EPS_EQ);
        assert!((a.t - b.t).amax() < EPS_EQ);
        assert_eq!(swapped.swap_parties(), rho);
    }

    #[test]
    fn decompose_with_rejects_wrong_generator_dims() {
        let rho = random_state(2, 3, 6);
        let g2 = gell_mann_basis(2).unwrap();
        assert!(decompose_with(&rho, &g2, &g2).is_err());
    }
}
