//! Dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::tolerances::{EPS_RANK, EPS_RANK_FLOOR};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Largest entrywise deviation `|A_ij - conj(A_ji)|`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn trace(a: &CMatrix) -> C64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// `Tr(A B)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Squared Hilbert–Schmidt norm `Tr(A^dagger A)`.
pub fn hs_norm_sq(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Eigenvalues of a Hermitian matrix in nonincreasing order.
pub fn hermitian_eigenvalues_desc(a: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    sort_desc(&mut ev);
    ev
}

/// Eigenvalues of a real symmetric matrix in nonincreasing order.
pub fn symmetric_eigenvalues_desc(a: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    sort_desc(&mut ev);
    ev
}

pub fn sort_desc(v: &mut [f64]) {
    v.sort_by(|a, b| b.total_cmp(a));
}

/// Singular values (descending) and matching left singular vectors of a real
/// matrix, taken from the symmetric eigenproblem of `[[0, A], [A^t, 0]]`.
/// Gives the same absolute accuracy as a bidiagonal SVD and avoids the
/// occasional inaccurate result of the iterative SVD on rank-deficient input.
pub fn real_svd_left(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (r, c) = a.shape();
    let mut h = DMatrix::zeros(r + c, r + c);
    h.view_mut((0, r), (r, c)).copy_from(a);
    h.view_mut((r, 0), (c, r)).copy_from(&a.transpose());
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..r + c).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let k = r.min(c);
    let values = order[..k].iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    let mut u = DMatrix::zeros(r, k);
    for (col, &i) in order[..k].iter().enumerate() {
        let top = eig.eigenvectors.column(i).rows(0, r).into_owned();
        let norm = top.norm();
        if norm > 0.0 {
            u.set_column(col, &(top / norm));
        }
    }
    (values, u)
}

pub fn real_singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    real_svd_left(a).0
}

/// Number of singular values above `max(EPS_RANK * s_max, EPS_RANK_FLOOR)`.
pub fn numerical_rank(singular_values: &[f64]) -> usize {
    let threshold = rank_threshold(singular_values);
    singular_values.iter().filter(|&&s| s > threshold).count()
}

pub fn rank_threshold(singular_values: &[f64]) -> f64 {
    let s_max = singular_values.iter().copied().fold(0.0, f64::max);
    (EPS_RANK * s_max).max(EPS_RANK_FLOOR)
}

/// `exp(iH)` for Hermitian `H`, via its spectral decomposition.
pub fn expm_i_hermitian(h: &CMatrix) -> CMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let phases = CVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&t| C64::from_polar(1.0, t)),
    );
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * phases[j]);
    scaled * v.adjoint()
}

/// Largest entrywise deviation of `U^dagger U` from the identity.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let g = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { ONE } else { ZERO };
            dev = dev.max((g[(i, j)] - target).norm());
        }
    }
    dev
}

pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let z = complex_gaussian_matrix(dim, dim, rng);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Non-zero entries `(row, col, value)` of a matrix.
pub fn nonzero_entries(a: &CMatrix) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            if z != ZERO {
                out.push((i, j, z));
            }
        }
    }
    out
}

/// Convert a real matrix into a complex one.
pub fn complexify(a: &DMatrix<f64>) -> CMatrix {
    a.map(|v| C64::new(v, 0.0))
}
