//! Generalized Gell-Mann generators of SU(m) and the objects derived from
//! them: the orthonormal operator basis, projector coherence vectors,
//! simplexes, the associated projection operators and the weight vectors.
//!
//! Generator order (fixed, so that every serialized output is reproducible):
//!
//! 1. the `m - 1` diagonal (Cartan) generators,
//!    `h_k = sqrt(2 / (k (k + 1))) diag(1, .., 1, -k, 0, .., 0)` for `k = 1..m-1`;
//! 2. the symmetric generators `|j><k| + |k><j|` for pairs `j < k` in
//!    lexicographic order;
//! 3. the antisymmetric generators `-i|j><k| + i|k><j|` for the same pairs in
//!    the same order.
//!
//! For `m = 2` this yields `(sigma_z, sigma_x, sigma_y)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{DiscordError, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ONE, ZERO};
use crate::tolerances::EPS_EQ;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorOrdering {
    /// Cartan generators, then symmetric pairs, then antisymmetric pairs.
    CartanFirst,
    /// Negative control for the self-test: the pair enumeration repeats the
    /// first symmetric generator in the slot of the last antisymmetric one.
    #[doc(hidden)]
    CorruptedForTesting,
}

/// Ordered Hermitian traceless generators with `Tr(l_i l_j) = 2 delta_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<CMatrix>,
    ordering: GeneratorOrdering,
}

pub fn gell_mann_basis(m: usize) -> Result<GeneratorBasis> {
    gell_mann_basis_with(m, GeneratorOrdering::CartanFirst)
}

pub fn gell_mann_basis_with(m: usize, ordering: GeneratorOrdering) -> Result<GeneratorBasis> {
    check_dim(m)?;
    let mut generators = Vec::with_capacity(m * m - 1);
    for k in 1..m {
        let scale = (2.0 / (k * (k + 1)) as f64).sqrt();
        let mut h = CMatrix::zeros(m, m);
        for i in 0..k {
            h[(i, i)] = C64::new(scale, 0.0);
        }
        h[(k, k)] = C64::new(-(k as f64) * scale, 0.0);
        generators.push(h);
    }
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|j| ((j + 1)..m).map(move |k| (j, k)))
        .collect();
    for &(j, k) in &pairs {
        let mut s = CMatrix::zeros(m, m);
        s[(j, k)] = ONE;
        s[(k, j)] = ONE;
        generators.push(s);
    }
    for &(j, k) in &pairs {
        let mut a = CMatrix::zeros(m, m);
        a[(j, k)] = C64::new(0.0, -1.0);
        a[(k, j)] = C64::new(0.0, 1.0);
        generators.push(a);
    }
    if ordering == GeneratorOrdering::CorruptedForTesting {
        let first_symmetric = generators[m - 1].clone();
        let last = generators.len() - 1;
        generators[last] = first_symmetric;
    }
    Ok(GeneratorBasis { dim: m, generators, ordering })
}

fn check_dim(m: usize) -> Result<()> {
    if m < 2 {
        return Err(DiscordError::InvalidDimension(format!(
            "local dimension must be at least 2, got {m}"
        )));
    }
    Ok(())
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, `m^2 - 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn ordering(&self) -> GeneratorOrdering {
        self.ordering
    }

    /// Number of leading diagonal generators.
    pub fn cartan_len(&self) -> usize {
        self.dim - 1
    }

    /// `sum_i c_i l_i`.
    pub fn combine(&self, coeffs: &DVector<f64>) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            out += g * C64::new(*c, 0.0);
        }
        out
    }

    /// `(<v|l_i|v>)_i` for every generator.
    pub fn expectations(&self, v: &CVector) -> DVector<f64> {
        DVector::from_iterator(
            self.len(),
            self.generators.iter().map(|g| (v.adjoint() * g * v)[(0, 0)].re),
        )
    }

    /// Largest deviation from Hermiticity, tracelessness and
    /// `Tr(l_i l_j) = 2 delta_ij` across the set.
    pub fn max_invariant_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (i, gi) in self.generators.iter().enumerate() {
            dev = dev.max(linalg::hermitian_deviation(gi));
            dev = dev.max(linalg::trace(gi).norm());
            for (j, gj) in self.generators.iter().enumerate() {
                let target = if i == j { 2.0 } else { 0.0 };
                dev = dev.max((linalg::trace_of_product(gi, gj) - C64::new(target, 0.0)).norm());
            }
        }
        for g in &self.generators[..self.cartan_len()] {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    if i != j {
                        dev = dev.max(g[(i, j)].norm());
                    }
                }
                dev = dev.max(g[(i, i)].im.abs());
            }
        }
        dev
    }
}

/// `X_0 = I / sqrt(m)`, `X_i = l_i / sqrt(2)`: orthonormal under the
/// Hilbert–Schmidt inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalOperatorBasis {
    dim: usize,
    operators: Vec<CMatrix>,
}

pub fn x_basis(m: usize) -> Result<OrthonormalOperatorBasis> {
    Ok(OrthonormalOperatorBasis::from_generators(&gell_mann_basis(m)?))
}

impl OrthonormalOperatorBasis {
    pub fn from_generators(gen: &GeneratorBasis) -> Self {
        let m = gen.dim();
        let mut operators = Vec::with_capacity(m * m);
        operators.push(CMatrix::identity(m, m) * C64::new(1.0 / (m as f64).sqrt(), 0.0));
        let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        operators.extend(gen.generators().iter().map(|g| g * inv_sqrt2));
        Self { dim: m, operators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// Gram matrix `Tr(X_i X_j)` (real for Hermitian operators).
    pub fn gram(&self) -> DMatrix<f64> {
        let k = self.operators.len();
        DMatrix::from_fn(k, k, |i, j| {
            linalg::trace_of_product(&self.operators[i], &self.operators[j]).re
        })
    }
}

/// Real expansion vector of a single-party operator over the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceVector {
    pub dim: usize,
    pub entries: DVector<f64>,
}

impl CoherenceVector {
    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Rebuild the operator `(I + alpha . l) / m`.
    pub fn to_operator(&self, gen: &GeneratorBasis) -> CMatrix {
        let m = self.dim as f64;
        (CMatrix::identity(self.dim, self.dim) + gen.combine(&self.entries)) * C64::new(1.0 / m, 0.0)
    }
}

/// Coherence vector of `|ket><ket|`: `alpha_i = (m/2) <ket|l_i|ket>`.
pub fn projector_coherence_vector(ket: &CVector, basis: &GeneratorBasis) -> Result<CoherenceVector> {
    let m = basis.dim();
    if ket.len() != m {
        return Err(DiscordError::DimensionMismatch {
            expected: format!("ket of length {m}"),
            found: format!("length {}", ket.len()),
        });
    }
    let norm = ket.norm();
    if (norm - 1.0).abs() > EPS_EQ {
        return Err(DiscordError::NotNormalized { norm });
    }
    Ok(CoherenceVector {
        dim: m,
        entries: basis.expectations(ket) * (m as f64 / 2.0),
    })
}

/// The `m` projector coherence vectors of an orthonormal basis of `C^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub vectors: Vec<CoherenceVector>,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Largest deviation from `a_k . a_k' = -m/2 + (m^2/2) delta_kk'` and
    /// `sum_k a_k = 0`.
    pub fn max_invariant_deviation(&self) -> f64 {
        let m = self.vectors.len() as f64;
        let mut dev: f64 = 0.0;
        for (k, a) in self.vectors.iter().enumerate() {
            for (l, b) in self.vectors.iter().enumerate() {
                let target = -m / 2.0 + if k == l { m * m / 2.0 } else { 0.0 };
                dev = dev.max((a.entries.dot(&b.entries) - target).abs());
            }
        }
        if let Some(first) = self.vectors.first() {
            let mut sum = DVector::zeros(first.entries.len());
            for a in &self.vectors {
                sum += &a.entries;
            }
            dev = dev.max(sum.amax());
        }
        dev
    }

    /// Gram matrix `a_k . a_l`.
    pub fn gram(&self) -> DMatrix<f64> {
        let m = self.vectors.len();
        DMatrix::from_fn(m, m, |k, l| self.vectors[k].entries.dot(&self.vectors[l].entries))
    }
}

/// Coherence-vector simplex of the columns of `basis_vectors`.
pub fn projector_simplex(basis_vectors: &CMatrix, gen: &GeneratorBasis) -> Result<Simplex> {
    let m = gen.dim();
    if basis_vectors.nrows() != m || basis_vectors.ncols() != m {
        return Err(DiscordError::DimensionMismatch {
            expected: format!("{m}x{m} basis matrix"),
            found: format!("{}x{}", basis_vectors.nrows(), basis_vectors.ncols()),
        });
    }
    let deviation = linalg::unitarity_deviation(basis_vectors);
    if deviation > EPS_EQ {
        return Err(DiscordError::NotOrthonormal { deviation });
    }
    let vectors = (0..m)
        .map(|k| projector_coherence_vector(&basis_vectors.column(k).into_owned(), gen))
        .collect::<Result<Vec<_>>>()?;
    Ok(Simplex { vectors })
}

/// Real symmetric idempotent of rank `m - 1` on `R^(m^2 - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionOperator {
    pub matrix: DMatrix<f64>,
}

impl ProjectionOperator {
    pub fn idempotence_deviation(&self) -> f64 {
        (&self.matrix * &self.matrix - &self.matrix).amax()
    }

    pub fn symmetry_deviation(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn rank(&self) -> usize {
        linalg::numerical_rank(&linalg::real_singular_values(&self.matrix))
    }
}

/// `P = (2/m^2) sum_k a_k a_k^t`.
pub fn projection_from_simplex(s: &Simplex) -> Result<ProjectionOperator> {
    let deviation = s.max_invariant_deviation();
    if deviation > EPS_EQ {
        return Err(DiscordError::InvalidSimplex { deviation });
    }
    let m = s.dim();
    let len = m * m - 1;
    let mut p = DMatrix::zeros(len, len);
    for a in &s.vectors {
        p += &a.entries * a.entries.transpose();
    }
    Ok(ProjectionOperator { matrix: p * (2.0 / (m * m) as f64) })
}

/// Weight vectors of the defining representation:
/// `(nu_s)_k = <s|h_k|s> / sqrt(2)` over the Cartan generators.
pub fn weight_vectors(m: usize) -> Result<Vec<DVector<f64>>> {
    let gen = gell_mann_basis(m)?;
    let cartan = &gen.generators()[..gen.cartan_len()];
    Ok((0..m)
        .map(|s| {
            DVector::from_iterator(
                m - 1,
                cartan.iter().map(|h| h[(s, s)].re * std::f64::consts::FRAC_1_SQRT_2),
            )
        })
        .collect())
}

/// Standard basis vector `e_k` of `C^m`.
pub fn basis_ket(m: usize, k: usize) -> CVector {
    let mut v = CVector::from_element(m, ZERO);
    v[k] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rejects_dimension_below_two() {
        assert!(matches!(gell_mann_basis(1), Err(DiscordError::InvalidDimension(_))));
        assert!(matches!(gell_mann_basis(0), Err(DiscordError::InvalidDimension(_))));
    }

    #[test]
    fn qubit_basis_is_pauli_with_sigma_z_first() {
        let g = gell_mann_basis(2).unwrap();
        let z = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let x = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let y = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        assert_eq!(g.generators(), &[z, x, y]);
    }

    #[test]
    fn qutrit_cartan_generators() {
        let g = gell_mann_basis(3).unwrap();
        assert_eq!(g.len(), 8);
        let d0: Vec<f64> = (0..3).map(|i| g.generators()[0][(i, i)].re).collect();
        let d1: Vec<f64> = (0..3).map(|i| g.generators()[1][(i, i)].re).collect();
        assert_eq!(d0, vec![1.0, -1.0, 0.0]);
        let r3 = 3f64.sqrt();
        for (a, b) in d1.iter().zip([1.0 / r3, 1.0 / r3, -2.0 / r3]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    // Brute-force Hilbert–Schmidt scan with explicit matrix products.
    fn brute_force_gram(g: &GeneratorBasis) -> DMatrix<f64> {
        let k = g.len();
        DMatrix::from_fn(k, k, |i, j| {
            let p = &g.generators()[i] * &g.generators()[j];
            (0..g.dim()).map(|d| p[(d, d)].re).sum()
        })
    }

    #[test]
    fn generators_orthonormal_for_small_dims() {
        for m in 2..=6 {
            let g = gell_mann_basis(m).unwrap();
            assert_eq!(g.len(), m * m - 1);
            let gram = brute_force_gram(&g);
            let target = DMatrix::identity(g.len(), g.len()) * 2.0;
            assert!((gram - target).amax() < EPS_EQ, "m = {m}");
            assert!(g.max_invariant_deviation() < EPS_EQ, "m = {m}");
        }
    }

    #[test]
    fn corrupted_ordering_breaks_orthonormality() {
        let g = gell_mann_basis_with(3, GeneratorOrdering::CorruptedForTesting).unwrap();
        assert!(g.max_invariant_deviation() > 1.0);
    }

    #[test]
    fn x_basis_is_orthonormal() {
        for m in 2..=5 {
            let xb = x_basis(m).unwrap();
            let gram = xb.gram();
            assert!((gram - DMatrix::identity(m * m, m * m)).amax() < EPS_EQ);
        }
        let x3 = x_basis(3).unwrap();
        assert!((linalg::trace(&x3.operators()[0]).re - 3f64.sqrt()).abs() < 1e-15);
        let x2 = x_basis(2).unwrap();
        assert!((x2.operators()[0][(0, 0)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn projector_coherence_vector_norms() {
        let g2 = gell_mann_basis(2).unwrap();
        let a = projector_coherence_vector(&basis_ket(2, 0), &g2).unwrap();
        assert_eq!(a.entries.as_slice(), &[1.0, 0.0, 0.0]);
        let b = projector_coherence_vector(&basis_ket(2, 1), &g2).unwrap();
        let cos = a.entries.dot(&b.entries) / (a.norm() * b.norm());
        assert!((cos + 1.0).abs() < 1e-15);

        let g3 = gell_mann_basis(3).unwrap();
        let a3 = projector_coherence_vector(&basis_ket(3, 0), &g3).unwrap();
        assert!((a3.norm() - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn projector_coherence_vector_rejects_unnormalized() {
        let g = gell_mann_basis(2).unwrap();
        let v = CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            projector_coherence_vector(&v, &g),
            Err(DiscordError::NotNormalized { .. })
        ));
    }

    #[test]
    fn projector_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 2..=4 {
            let g = gell_mann_basis(m).unwrap();
            let u = haar_unitary(m, &mut rng);
            let ket = u.column(0).into_owned();
            let alpha = projector_coherence_vector(&ket, &g).unwrap();
            let proj = &ket * ket.adjoint();
            let diff = (alpha.to_operator(&g) - proj).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(diff < EPS_EQ);
        }
    }

    #[test]
    fn computational_simplexes() {
        let g2 = gell_mann_basis(2).unwrap();
        let s2 = projector_simplex(&CMatrix::identity(2, 2), &g2).unwrap();
        assert_eq!(s2.vectors[0].entries, -s2.vectors[1].entries.clone());
        assert!((s2.vectors[0].norm() - 1.0).abs() < 1e-15);

        let g3 = gell_mann_basis(3).unwrap();
        let s3 = projector_simplex(&CMatrix::identity(3, 3), &g3).unwrap();
        let gram = s3.gram();
        for k in 0..3 {
            for l in 0..3 {
                let expected = if k == l { 3.0 } else { -1.5 };
                assert!((gram[(k, l)] - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn simplex_rejects_non_orthonormal_input() {
        let g = gell_mann_basis(2).unwrap();
        let b = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(projector_simplex(&b, &g), Err(DiscordError::NotOrthonormal { .. })));
    }

    #[test]
    fn projection_rejects_bad_simplex() {
        let g = gell_mann_basis(2).unwrap();
        let mut s = projector_simplex(&CMatrix::identity(2, 2), &g).unwrap();
        s.vectors[0].entries[0] = 0.5;
        assert!(matches!(projection_from_simplex(&s), Err(DiscordError::InvalidSimplex { .. })));
    }

    #[test]
    fn qubit_projection_is_cartan_axis() {
        let g = gell_mann_basis(2).unwrap();
        let s = projector_simplex(&CMatrix::identity(2, 2), &g).unwrap();
        let p = projection_from_simplex(&s).unwrap();
        let mut expected = DMatrix::zeros(3, 3);
        expected[(0, 0)] = 1.0;
        assert!((p.matrix - expected).amax() < 1e-15);
    }

    #[test]
    fn qutrit_projection_spectrum() {
        let g = gell_mann_basis(3).unwrap();
        let s = projector_simplex(&CMatrix::identity(3, 3), &g).unwrap();
        let p = projection_from_simplex(&s).unwrap();
        let ev = linalg::symmetric_eigenvalues_desc(&p.matrix);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
        assert!(ev[2..].iter().all(|e| e.abs() < 1e-12));
        assert_eq!(p.rank(), 2);
        assert!(p.idempotence_deviation() < 1e-14);
    }

    #[test]
    fn random_bases_give_valid_simplexes_and_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for m in 2..=4 {
            let g = gell_mann_basis(m).unwrap();
            let reference = projector_simplex(&CMatrix::identity(m, m), &g).unwrap().gram();
            for _ in 0..100 {
                let u = haar_unitary(m, &mut rng);
                let s = projector_simplex(&u, &g).unwrap();
                assert!(s.max_invariant_deviation() < EPS_EQ);
                assert!((s.gram() - &reference).amax() < EPS_EQ);
                let p = projection_from_simplex(&s).unwrap();
                assert!(p.idempotence_deviation() < EPS_EQ);
                assert!(p.symmetry_deviation() < EPS_EQ);
                assert!((p.trace() - (m - 1) as f64).abs() < EPS_EQ);
                assert_eq!(p.rank(), m - 1);
            }
        }
    }

    #[test]
    fn weight_vectors_qubit() {
        let nu = weight_vectors(2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(nu[0].as_slice(), &[r]);
        assert_eq!(nu[1].as_slice(), &[-r]);
    }

    #[test]
    fn weight_vectors_orthonormality_and_zero_sum() {
        for m in 2..=6 {
            let nu = weight_vectors(m).unwrap();
            assert_eq!(nu.len(), m);
            for k in 0..m - 1 {
                for l in 0..m - 1 {
                    let s: f64 = nu.iter().map(|v| v[k] * v[l]).sum();
                    let target = if k == l { 1.0 } else { 0.0 };
                    assert!((s - target).abs() < EPS_EQ);
                }
                let total: f64 = nu.iter().map(|v| v[k]).sum();
                assert!(total.abs() < EPS_EQ);
            }
        }
    }
}
