use std::ops::Range;

use nalgebra::DMatrix;

use super::{inertia, inertia_of_eigenvalues, HermitianMatrix, Inertia, LinalgError, TolerancePolicy};

/// `M / B = D - C B⁻¹ C*` together with the inertia decomposition.
#[derive(Clone, Debug)]
pub struct SchurComplement {
    pub complement: HermitianMatrix,
    pub block_inertia: Inertia,
    pub complement_inertia: Inertia,
    pub total_inertia: Inertia,
}

impl SchurComplement {
    /// `inertia(M) == inertia(B) + inertia(M / B)` in counts.
    pub fn is_additive(&self) -> bool {
        self.block_inertia.add(&self.complement_inertia).counts() == self.total_inertia.counts()
    }
}

/// Schur complement of the principal block indexed by `block`.
///
/// Rows and columns outside `block` keep their relative order in the complement.
pub fn schur_complement(
    m: &HermitianMatrix,
    block: Range<usize>,
    policy: TolerancePolicy,
) -> Result<SchurComplement, LinalgError> {
    let n = m.dim();
    if block.end > n || block.start > block.end {
        return Err(LinalgError::IndexOutOfRange {
            index: block.end,
            dim: n,
        });
    }
    let ev = m.eigenvalues()?;
    let tau = policy.threshold(&ev);
    let total_inertia = inertia_of_eigenvalues(&ev, tau);

    let bi: Vec<usize> = block.clone().collect();
    let ri: Vec<usize> = (0..n).filter(|i| !block.contains(i)).collect();
    let b = m.principal_submatrix(&bi)?;
    let bev = b.eigenvalues()?;
    let smallest = bev.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    if !bi.is_empty() && smallest <= tau {
        return Err(LinalgError::SingularBlock { smallest, tol: tau });
    }
    let block_inertia = inertia_of_eigenvalues(&bev, tau);

    let cm = DMatrix::from_fn(ri.len(), bi.len(), |r, c| m.entry(ri[r], bi[c]));
    let d = m.principal_submatrix(&ri)?;
    let complement = if bi.is_empty() {
        d
    } else {
        let x = b
            .as_matrix()
            .clone()
            .lu()
            .solve(&cm.adjoint())
            .ok_or(LinalgError::Singular)?;
        HermitianMatrix::new(d.as_matrix() - &cm * x)?
    };
    let cev = complement.eigenvalues()?;
    let complement_inertia = inertia_of_eigenvalues(&cev, tau);
    Ok(SchurComplement {
        complement,
        block_inertia,
        complement_inertia,
        total_inertia,
    })
}

fn min_abs_eig(m: &HermitianMatrix, idx: &[usize]) -> f64 {
    m.principal_submatrix(idx)
        .and_then(|s| s.eigenvalues())
        .map(|ev| ev.iter().fold(f64::INFINITY, |a, v| a.min(v.abs())))
        .unwrap_or(0.0)
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Indices of an invertible principal submatrix of size `rank(M)` carrying
/// the same number of negative eigenvalues as `M`, sorted ascending.
///
/// Greedy growth by single indices or pairs, each step maximizing the
/// smallest eigenvalue modulus; falls back to exhaustive search for `n ≤ 14`
/// when the greedy path stalls.
pub fn max_nonsingular_principal_submatrix(
    m: &HermitianMatrix,
    policy: TolerancePolicy,
) -> Result<Vec<usize>, LinalgError> {
    let n = m.dim();
    let ev = m.eigenvalues()?;
    let tau = policy.threshold(&ev);
    let full = inertia_of_eigenvalues(&ev, tau);
    let rank = full.rank();
    if rank == 0 {
        return Ok(Vec::new());
    }
    let accept = |idx: &[usize]| -> bool {
        let sub = match m.principal_submatrix(idx) {
            Ok(s) => s,
            Err(_) => return false,
        };
        match inertia(&sub, TolerancePolicy::Absolute(tau)) {
            Ok(i) => i.zero == 0 && i.negative == full.negative,
            Err(_) => false,
        }
    };

    let mut chosen: Vec<usize> = Vec::new();
    let mut stalled = false;
    while chosen.len() < rank {
        let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
        let mut best: Option<(f64, Vec<usize>)> = None;
        for &i in &free {
            let mut cand = chosen.clone();
            cand.push(i);
            let s = min_abs_eig(m, &cand);
            if s > tau && best.as_ref().is_none_or(|b| s > b.0) {
                best = Some((s, cand));
            }
        }
        if best.is_none() && chosen.len() + 2 <= rank {
            for (a, &i) in free.iter().enumerate() {
                for &j in &free[a + 1..] {
                    let mut cand = chosen.clone();
                    cand.extend([i, j]);
                    let s = min_abs_eig(m, &cand);
                    if s > tau && best.as_ref().is_none_or(|b| s > b.0) {
                        best = Some((s, cand));
                    }
                }
            }
        }
        match best {
            Some((_, c)) => chosen = c,
            None => {
                stalled = true;
                break;
            }
        }
    }
    chosen.sort_unstable();
    if !stalled && accept(&chosen) {
        return Ok(chosen);
    }
    if n <= 14 {
        let mut best: Option<(f64, Vec<usize>)> = None;
        combinations(n, rank, &mut |idx| {
            let s = min_abs_eig(m, idx);
            if s > tau && accept(idx) && best.as_ref().is_none_or(|b| s > b.0) {
                best = Some((s, idx.to_vec()));
            }
        });
        if let Some((_, idx)) = best {
            return Ok(idx);
        }
    }
    Ok(chosen)
}
