//! Matrix JSON: `{"m": .., "n": .., "data": [[re, im], ...]}` with `data` the
//! row-major entries of the `(mn) x (mn)` matrix.

use serde::{Deserialize, Serialize};

use crate::bloch::DensityMatrix;
use crate::error::{DiscordError, Result};
use crate::linalg::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub m: usize,
    pub n: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(matrix: &CMatrix, m: usize, n: usize) -> Self {
        let dim = matrix.nrows();
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..matrix.ncols() {
                let z = matrix[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self { m, n, data }
    }

    pub fn from_state(rho: &DensityMatrix) -> Self {
        Self::from_matrix(rho.matrix(), rho.m(), rho.n())
    }

    /// The raw matrix, checked only for shape.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let dim = self.m * self.n;
        if self.data.len() != dim * dim {
            return Err(DiscordError::DimensionMismatch {
                expected: format!("{} entries for dims ({}, {})", dim * dim, self.m, self.n),
                found: format!("{} entries", self.data.len()),
            });
        }
        if self.data.iter().flatten().any(|v| !v.is_finite()) {
            return Err(DiscordError::Parse("matrix entries must be finite".into()));
        }
        Ok(CMatrix::from_fn(dim, dim, |i, j| {
            let [re, im] = self.data[i * dim + j];
            C64::new(re, im)
        }))
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_matrix()?, self.m, self.n)
    }
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let parsed: MatrixJson = serde_json::from_str(text).map_err(|e| DiscordError::Parse(e.to_string()))?;
    parsed.to_state()
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_state(rho)).expect("matrix JSON serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_zoo;

    #[test]
    fn state_round_trips_exactly() {
        let rho = state_zoo::random_mixed(2, 3, 4, 17).unwrap();
        let back = parse_state(&state_to_json(&rho)).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn rejects_wrong_length_and_garbage() {
        let bad = r#"{"m":2,"n":2,"data":[[1,0]]}"#;
        assert!(matches!(parse_state(bad), Err(DiscordError::DimensionMismatch { .. })));
        assert!(matches!(parse_state("{"), Err(DiscordError::Parse(_))));
        assert!(matches!(parse_state(r#"{"m":2,"n":2}"#), Err(DiscordError::Parse(_))));
    }

    #[test]
    fn trace_violation_is_reported() {
        let mut j = MatrixJson::from_state(&state_zoo::werner(2, 0.0).unwrap());
        for (k, e) in j.data.iter_mut().enumerate() {
            if k % 5 == 0 {
                e[0] *= 0.9;
            }
        }
        assert!(matches!(j.to_state(), Err(DiscordError::TraceNotOne { .. })));
    }
}
