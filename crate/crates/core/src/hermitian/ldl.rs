//! Inertia via a symmetric-indefinite `L D L*` factorization with
//! Bunch–Kaufman pivoting (1×1 and 2×2 pivot blocks).

use super::{HermitianMatrix, Inertia, LinalgError, TolerancePolicy};
use crate::C64;

const ALPHA: f64 = 0.640_388_203_202_208_4; // (1 + sqrt(17)) / 8

fn swap_sym(a: &mut [Vec<C64>], p: usize, q: usize) {
    if p == q {
        return;
    }
    a.swap(p, q);
    for row in a.iter_mut() {
        row.swap(p, q);
    }
}

/// Eigenvalues of the 2×2 Hermitian block `[[a, conj(b)], [b, c]]`.
fn eig2(a: f64, b: C64, c: f64) -> (f64, f64) {
    let m = 0.5 * (a + c);
    let r = (0.25 * (a - c) * (a - c) + b.norm_sqr()).sqrt();
    (m - r, m + r)
}

/// Inertia from the pivot blocks of `L D L*`.
///
/// With a relative policy the threshold is scaled by the Frobenius norm of
/// `M`, an upper bound on its largest eigenvalue modulus. Agrees with
/// [`super::inertia`] whenever no eigenvalue is near the threshold.
pub fn inertia_ldl(m: &HermitianMatrix, policy: TolerancePolicy) -> Result<Inertia, LinalgError> {
    let n = m.dim();
    let tau = policy.threshold_for_scale(m.norm_frobenius());
    let mut a: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| m.entry(i, j)).collect())
        .collect();
    let mut pivots: Vec<f64> = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        let absakk = a[k][k].re.abs();
        let (imax, colmax) = (k + 1..n)
            .map(|i| (i, a[i][k].norm()))
            .fold((k, 0.0), |best, x| if x.1 > best.1 { x } else { best });
        if absakk.max(colmax) <= tau * 1e-3 {
            pivots.push(a[k][k].re);
            k += 1;
            continue;
        }
        let two_by_two;
        if absakk >= ALPHA * colmax {
            two_by_two = false;
        } else {
            let rowmax = (k..n)
                .filter(|&j| j != imax)
                .map(|j| a[imax][j].norm())
                .fold(0.0, f64::max);
            if absakk * rowmax >= ALPHA * colmax * colmax {
                two_by_two = false;
            } else if a[imax][imax].re.abs() >= ALPHA * rowmax {
                swap_sym(&mut a, k, imax);
                two_by_two = false;
            } else {
                swap_sym(&mut a, k + 1, imax);
                two_by_two = true;
            }
        }
        if !two_by_two {
            let d = a[k][k].re;
            pivots.push(d);
            for i in k + 1..n {
                let l = a[i][k] / d;
                for j in k + 1..n {
                    let upd = l * a[k][j];
                    a[i][j] -= upd;
                }
            }
            k += 1;
        } else {
            let (d11, d21, d22) = (a[k][k].re, a[k + 1][k], a[k + 1][k + 1].re);
            let (e1, e2) = eig2(d11, d21, d22);
            pivots.push(e1);
            pivots.push(e2);
            let det = C64::new(d11 * d22, 0.0) - d21.norm_sqr();
            if det.norm() == 0.0 {
                return Err(LinalgError::Singular);
            }
            // D^{-1} = [[d22, -conj(d21)], [-d21, d11]] / det
            let inv = [
                [C64::new(d22, 0.0) / det, -d21.conj() / det],
                [-d21 / det, C64::new(d11, 0.0) / det],
            ];
            for i in k + 2..n {
                let (x0, x1) = (a[i][k], a[i][k + 1]);
                let l0 = x0 * inv[0][0] + x1 * inv[1][0];
                let l1 = x0 * inv[0][1] + x1 * inv[1][1];
                for j in k + 2..n {
                    let upd = l0 * a[k][j] + l1 * a[k + 1][j];
                    a[i][j] -= upd;
                }
            }
            k += 2;
        }
    }
    Ok(super::inertia_of_eigenvalues(&pivots, tau))
}
