//! Three equivalent evaluations of the geometric-discord objective for a
//! fixed von Neumann measurement on party A: the disturbance
//! `‖rho - Π(rho)‖²`, the coefficient-matrix form `Tr(CC^t) - Tr(ACC^tA^t)`,
//! and the simplex form `(2/(m^2 n)) [Tr G - sum_k mu_k^t G mu_k]`.

use nalgebra::{DMatrix, DVector};

use crate::bloch::{coefficient_matrix, decompose, g_matrix, DensityMatrix};
use crate::error::{DiscordError, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ZERO};
use crate::operator_basis::{gell_mann_basis, GeneratorBasis, OrthonormalOperatorBasis};
use crate::tolerances::EPS_EQ;

/// Orthonormal basis of `C^m`, stored as the columns of a unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    unitary: CMatrix,
}

impl MeasurementBasis {
    pub fn new(unitary: CMatrix) -> Result<Self> {
        if unitary.nrows() != unitary.ncols() || unitary.nrows() < 2 {
            return Err(DiscordError::DimensionMismatch {
                expected: "square unitary of size at least 2".into(),
                found: format!("{}x{}", unitary.nrows(), unitary.ncols()),
            });
        }
        let deviation = linalg::unitarity_deviation(&unitary);
        if deviation > EPS_EQ {
            return Err(DiscordError::NotOrthonormal { deviation });
        }
        Ok(Self { unitary })
    }

    pub fn computational(m: usize) -> Result<Self> {
        Self::new(CMatrix::identity(m, m))
    }

    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn ket(&self, k: usize) -> CVector {
        self.unitary.column(k).into_owned()
    }

    /// `Π_k = U|k><k|U^dagger`.
    pub fn projectors(&self) -> Vec<CMatrix> {
        (0..self.dim())
            .map(|k| {
                let v = self.ket(k);
                &v * v.adjoint()
            })
            .collect()
    }

    /// `mu_k = (sqrt(2)/m) alpha_k`, i.e. `(mu_k)_i = <k|X_i|k>` for `i >= 1`.
    pub fn mu_simplex(&self, gen: &GeneratorBasis) -> Vec<DVector<f64>> {
        (0..self.dim())
            .map(|k| gen.expectations(&self.ket(k)) * std::f64::consts::FRAC_1_SQRT_2)
            .collect()
    }

    /// `A = (a_ki)`, `a_ki = <k|X_i|k>`, an `m x m^2` matrix.
    pub fn a_matrix(&self, xb: &OrthonormalOperatorBasis) -> DMatrix<f64> {
        let m = self.dim();
        let kets: Vec<CVector> = (0..m).map(|k| self.ket(k)).collect();
        DMatrix::from_fn(m, xb.operators().len(), |k, i| {
            (kets[k].adjoint() * &xb.operators()[i] * &kets[k])[(0, 0)].re
        })
    }
}

fn check_dims(rho: &DensityMatrix, b: &MeasurementBasis) -> Result<()> {
    if b.dim() != rho.m() {
        return Err(DiscordError::DimensionMismatch {
            expected: format!("measurement basis of dimension {}", rho.m()),
            found: format!("dimension {}", b.dim()),
        });
    }
    Ok(())
}

/// `‖rho - Π(rho)‖²` with `Π(rho) = sum_k (Π_k⊗I) rho (Π_k⊗I)`.
pub fn gd_objective_measurement(rho: &DensityMatrix, b: &MeasurementBasis) -> Result<f64> {
    check_dims(rho, b)?;
    let id_b = CMatrix::identity(rho.n(), rho.n());
    let mut measured = CMatrix::zeros(rho.matrix().nrows(), rho.matrix().ncols());
    for p in b.projectors() {
        let big = linalg::kron(&p, &id_b);
        measured += &big * rho.matrix() * &big;
    }
    Ok(linalg::hs_norm_sq(&(rho.matrix() - measured)))
}

/// `Tr(CC^t) - Tr(A C C^t A^t)`.
pub fn gd_objective_cmatrix(rho: &DensityMatrix, b: &MeasurementBasis) -> Result<f64> {
    check_dims(rho, b)?;
    let xb = OrthonormalOperatorBasis::from_generators(&gell_mann_basis(rho.m())?);
    let c = coefficient_matrix(rho);
    let ac = b.a_matrix(&xb) * c.matrix();
    Ok(c.gram_trace() - ac.norm_squared())
}

/// `(2/(m^2 n)) [Tr G - sum_k mu_k^t G mu_k]`.
pub fn gd_objective_simplex(rho: &DensityMatrix, b: &MeasurementBasis) -> Result<f64> {
    check_dims(rho, b)?;
    let (m, n) = rho.dims();
    let d = decompose(rho);
    let g = g_matrix(&d);
    let gm = g.matrix();
    let captured: f64 = b
        .mu_simplex(&gell_mann_basis(m)?)
        .iter()
        .map(|mu| mu.dot(&(gm * mu)))
        .sum();
    Ok(2.0 / (m * m * n) as f64 * (gm.trace() - captured))
}

/// Fast evaluator of the disturbance used inside the optimizer:
/// `Tr(rho^2) - sum_k ‖<k|rho|k>_A‖²`, where `<k|rho|k>_A` is the
/// unnormalized conditional block of party B.
#[derive(Debug, Clone)]
pub struct MeasurementObjective {
    m: usize,
    n: usize,
    blocks: Vec<CMatrix>,
    purity: f64,
}

impl MeasurementObjective {
    pub fn new(rho: &DensityMatrix) -> Self {
        let (m, n) = rho.dims();
        let blocks = (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).map(|(a, b)| rho.block(a, b)).collect();
        Self { m, n, blocks, purity: rho.purity() }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Objective for the basis given by the columns of `u`.
    pub fn value(&self, u: &CMatrix) -> f64 {
        let (m, n) = (self.m, self.n);
        let mut captured = 0.0;
        let mut sigma = CMatrix::zeros(n, n);
        for k in 0..m {
            sigma.fill(ZERO);
            for a in 0..m {
                let ca = u[(a, k)].conj();
                for b in 0..m {
                    let w: C64 = ca * u[(b, k)];
                    sigma.zip_apply(&self.blocks[a * m + b], |s, blk| *s += w * blk);
                }
            }
            captured += linalg::hs_norm_sq(&sigma);
        }
        self.purity - captured
    }
}
