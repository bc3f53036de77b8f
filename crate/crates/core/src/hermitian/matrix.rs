use nalgebra::{DMatrix, SymmetricEigen};

use super::LinalgError;
use crate::C64;

/// Relative asymmetry (against the Frobenius norm) above which construction fails.
pub const ASYMMETRY_LIMIT: f64 = 1e-8;

/// Dense complex Hermitian matrix.
///
/// Construction averages the input with its adjoint so that
/// `entry(i, j) == entry(j, i).conj()` holds exactly. The asymmetry of the
/// input, `max |A_ij - conj(A_ji)| / 2`, is kept for diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<C64>,
    asymmetry: f64,
}

impl HermitianMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let n = m.nrows();
        let mut data = m;
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let a = data[(i, j)];
                let b = data[(j, i)].conj();
                asym = asym.max((a - b).norm() / 2.0);
                let avg = (a + b) * 0.5;
                data[(i, j)] = avg;
                data[(j, i)] = avg.conj();
            }
        }
        let norm = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if asym > ASYMMETRY_LIMIT * norm {
            return Err(LinalgError::Asymmetric {
                residual: asym,
                limit: ASYMMETRY_LIMIT * norm,
            });
        }
        Ok(Self {
            data,
            asymmetry: asym,
        })
    }

    /// Builds the matrix from a full entry function (both triangles are evaluated).
    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self, LinalgError> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let data = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(d[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self {
            data,
            asymmetry: 0.0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diagonal(&vec![1.0; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_real_diagonal(&vec![0.0; n])
    }

    /// `v v*` for a column vector `v`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let data = DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
        Self::new(data).expect("outer products are Hermitian")
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn asymmetry_residual(&self) -> f64 {
        self.asymmetry
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        norm_inf(&self.data)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        let n = self.dim();
        if n == 0 {
            return Ok(Vec::new());
        }
        let eig = SymmetricEigen::try_new(self.data.clone(), f64::EPSILON, 10_000 * n.max(1))
            .ok_or(LinalgError::NoConvergence {
                dim: n,
                residual: f64::NAN,
            })?;
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(LinalgError::NoConvergence {
                dim: n,
                residual: f64::INFINITY,
            });
        }
        vals.sort_by(|a, b| a.total_cmp(b));
        Ok(vals)
    }

    pub fn principal_submatrix(&self, idx: &[usize]) -> Result<Self, LinalgError> {
        let n = self.dim();
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(LinalgError::IndexOutOfRange { index: bad, dim: n });
        }
        let k = idx.len();
        let data = DMatrix::from_fn(k, k, |a, b| self.data[(idx[a], idx[b])]);
        Ok(Self {
            data,
            asymmetry: 0.0,
        })
    }

    /// `X M X*`.
    pub fn congruence(&self, x: &DMatrix<C64>) -> Result<Self, LinalgError> {
        if x.ncols() != self.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                got: x.ncols(),
            });
        }
        Self::new(x * &self.data * x.adjoint())
    }
}

pub(crate) fn norm_inf(m: &DMatrix<C64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn symmetrizes_and_records_residual() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 1e-10), c(2.0, 0.0), c(3.0, 0.0)]);
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.entry(0, 1), h.entry(1, 0).conj());
        assert!((h.asymmetry_residual() - 5e-11).abs() < 1e-20);
    }

    #[test]
    fn rejects_gross_asymmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(LinalgError::Asymmetric { .. })
        ));
    }

    #[test]
    fn rejects_non_square() {
        let m = DMatrix::from_element(2, 3, c(0.0, 0.0));
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(LinalgError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn golden_ratio_eigenvalues() {
        let h = HermitianMatrix::from_fn(2, |i, j| if i + j < 2 { c(1.0, 0.0) } else { c(0.0, 0.0) })
            .unwrap();
        let ev = h.eigenvalues().unwrap();
        let s5 = 5f64.sqrt();
        assert!((ev[0] - (1.0 - s5) / 2.0).abs() < 1e-14);
        assert!((ev[1] - (1.0 + s5) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn complex_entries_real_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let h = HermitianMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)],
        ))
        .unwrap();
        let ev = h.eigenvalues().unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }
}
