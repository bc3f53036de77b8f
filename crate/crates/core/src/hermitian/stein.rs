//! Stein equations `K - A K A* = R`.

use nalgebra::{DMatrix, DVector, Schur};

use super::matrix::norm_inf;
use super::{HermitianMatrix, LinalgError};
use crate::C64;

/// Required gap between the spectral radius of the state matrix and 1.
pub const SPECTRAL_MARGIN: f64 = 1e-12;
/// Residual contract: `‖K - AKA* - R‖_∞ ≤ factor · (1 + ‖R‖_∞)`.
pub const STEIN_RESIDUAL_FACTOR: f64 = 1e-11;

/// State matrix and Hermitian right-hand side of a Stein equation.
#[derive(Clone, Debug)]
pub struct SteinData {
    a: DMatrix<C64>,
    rhs: HermitianMatrix,
    radius: f64,
}

impl SteinData {
    pub fn new(a: DMatrix<C64>, rhs: HermitianMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare {
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        if a.nrows() != rhs.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: a.nrows(),
                got: rhs.dim(),
            });
        }
        let radius = spectral_radius(&a)?;
        if radius > 1.0 - SPECTRAL_MARGIN {
            return Err(LinalgError::SpectralRadius { radius });
        }
        Ok(Self { a, rhs, radius })
    }

    pub fn a(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn rhs(&self) -> &HermitianMatrix {
        &self.rhs
    }

    pub fn spectral_radius(&self) -> f64 {
        self.radius
    }
}

fn is_lower_bidiagonal(a: &DMatrix<C64>) -> bool {
    let n = a.nrows();
    (0..n).all(|i| (0..n).all(|j| (i == j || i == j + 1) || a[(i, j)] == C64::new(0.0, 0.0)))
}

fn is_lower_triangular(a: &DMatrix<C64>) -> bool {
    let n = a.nrows();
    (0..n).all(|i| (i + 1..n).all(|j| a[(i, j)] == C64::new(0.0, 0.0)))
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &DMatrix<C64>) -> Result<f64, LinalgError> {
    let n = a.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    if is_lower_triangular(a) || is_lower_triangular(&a.transpose()) {
        return Ok((0..n).map(|i| a[(i, i)].norm()).fold(0.0, f64::max));
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 10_000 * n).ok_or(
        LinalgError::NoConvergence {
            dim: n,
            residual: f64::NAN,
        },
    )?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)].norm()).fold(0.0, f64::max))
}

/// `‖K - A K A* - R‖_∞`.
pub fn stein_residual(a: &DMatrix<C64>, k: &DMatrix<C64>, rhs: &DMatrix<C64>) -> f64 {
    norm_inf(&(k - a * k * a.adjoint() - rhs))
}

/// Solves `Y - T Y T* = R` for lower-bidiagonal `T` with diagonal `diag` and
/// subdiagonal `sub` (`sub[i]` sits at `(i+1, i)`), in `O(n²)`.
pub fn solve_stein_bidiagonal(diag: &[C64], sub: &[C64], rhs: &DMatrix<C64>) -> DMatrix<C64> {
    let n = diag.len();
    assert_eq!(sub.len() + 1, n.max(1), "subdiagonal length");
    let e = |i: usize| if i == 0 { C64::new(0.0, 0.0) } else { sub[i - 1] };
    let mut y = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (ti, tj) = (diag[i], diag[j]);
            let mut acc = rhs[(i, j)];
            if j > 0 {
                acc += ti * e(j).conj() * y[(i, j - 1)];
            }
            if i > 0 {
                acc += e(i) * tj.conj() * y[(i - 1, j)];
                if j > 0 {
                    acc += e(i) * e(j).conj() * y[(i - 1, j - 1)];
                }
            }
            y[(i, j)] = acc / (C64::new(1.0, 0.0) - ti * tj.conj());
        }
    }
    y
}

/// Dense solve of `(I - conj(A) ⊗ A) vec K = vec R` (column-major vec).
fn solve_kronecker(a: &DMatrix<C64>, rhs: &DMatrix<C64>) -> Result<DMatrix<C64>, LinalgError> {
    let n = a.nrows();
    let nn = n * n;
    let ac = a.map(|z| z.conj());
    let sys = DMatrix::from_fn(nn, nn, |r, c| {
        let (i, j) = (r % n, r / n);
        let (k, l) = (c % n, c / n);
        let id = if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        id - ac[(j, l)] * a[(i, k)]
    });
    let b = DVector::from_iterator(nn, rhs.iter().copied());
    let x = sys.lu().solve(&b).ok_or(LinalgError::Singular)?;
    Ok(DMatrix::from_column_slice(n, n, x.as_slice()))
}

fn solve_raw(a: &DMatrix<C64>, rhs: &DMatrix<C64>) -> Result<DMatrix<C64>, LinalgError> {
    if is_lower_bidiagonal(a) {
        let n = a.nrows();
        let diag: Vec<C64> = (0..n).map(|i| a[(i, i)]).collect();
        let sub: Vec<C64> = (1..n).map(|i| a[(i, i - 1)]).collect();
        Ok(solve_stein_bidiagonal(&diag, &sub, rhs))
    } else {
        solve_kronecker(a, rhs)
    }
}

/// Unique Hermitian `K` with `K - A K A* = R`.
///
/// Lower-bidiagonal state matrices use a direct recursion, others a dense
/// Kronecker solve. One step of iterative refinement is applied when the
/// first residual misses the contract.
pub fn solve_stein(data: &SteinData) -> Result<HermitianMatrix, LinalgError> {
    let a = &data.a;
    let r = data.rhs.as_matrix();
    let bound = STEIN_RESIDUAL_FACTOR * (1.0 + norm_inf(r));
    let mut k = solve_raw(a, r)?;
    let mut res = stein_residual(a, &k, r);
    if res > bound {
        let defect = r - (&k - a * &k * a.adjoint());
        k += solve_raw(a, &defect)?;
        res = stein_residual(a, &k, r);
    }
    if !(res <= bound) {
        return Err(LinalgError::SteinResidual {
            residual: res,
            bound,
        });
    }
    HermitianMatrix::new(k)
}
