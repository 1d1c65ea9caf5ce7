//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Complex off-diagonal entries are handled by folding the phase of the
//! pivot into the rotation: for a 2×2 Hermitian block with off-diagonal
//! `β = |β|·e^{iφ}` the unitary
//!
//! ```text
//!   R = [ c        s·e^{iφ} ]
//!       [ −s·e^{−iφ}      c ]
//! ```
//!
//! reduces the block to the real symmetric case, where the usual stable
//! tangent parametrization applies. Each rotation is O(d), each sweep
//! O(d³); convergence is quadratic once the off-diagonal mass is small.

use crate::error::{ErgoError, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::spectrum::Spectrum;
use crate::tolerances::{DEGENERACY_CLUSTER_TOL, EIG_CONVERGENCE_REL, JACOBI_SWEEP_BUDGET};

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns the ascending eigenvalues and the unitary matrix whose columns
/// are the matching eigenvectors, so that `V diag(λ) V† = m`.
///
/// Inside a degenerate cluster (eigenvalues closer than
/// `DEGENERACY_CLUSTER_TOL`) the columns are ordered deterministically: by
/// the index of each eigenvector's largest-magnitude component, then by
/// lexicographic comparison of the real parts.
pub fn eig_hermitian(m: &ComplexMatrix, tol: f64) -> Result<(Spectrum, ComplexMatrix)> {
    if !m.is_hermitian(tol) {
        return Err(ErgoError::NotHermitian(format!(
            "matrix deviates from M = M† by more than {tol:e}"
        )));
    }
    let d = m.dim();
    if d == 0 {
        return Err(ErgoError::DimensionMismatch("empty matrix".into()));
    }

    let mut a = m.hermitized();
    let mut v = ComplexMatrix::identity(d);

    let scale = a.frobenius_norm();
    if scale == 0.0 || d == 1 {
        let values = Spectrum::from_unsorted((0..d).map(|i| a.get(i, i).re).collect());
        return Ok((values, v));
    }
    let threshold = EIG_CONVERGENCE_REL * scale;

    let mut converged = false;
    for _sweep in 0..JACOBI_SWEEP_BUDGET {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut a, &mut v, p, q, scale);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(ErgoError::NoConvergence(format!(
            "Jacobi sweeps exhausted ({JACOBI_SWEEP_BUDGET}) with off-diagonal mass {:e}",
            off_diagonal_norm(&a)
        )));
    }

    let raw: Vec<f64> = (0..d).map(|i| a.get(i, i).re).collect();
    let order = sorted_order_with_tie_break(&raw, &v);

    let values = Spectrum::from_unsorted(raw);
    let mut vectors = ComplexMatrix::zeros(d);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..d {
            vectors.set(row, col, v.get(row, src));
        }
    }
    Ok((values, vectors))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut acc = 0.0;
    for p in 0..d {
        for q in (p + 1)..d {
            acc += 2.0 * a.get(p, q).norm_sqr();
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation zeroing `a[p][q]`, applied in place to `a` (as
/// `R† a R`) and accumulated into `v` (as `v R`).
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let beta = a.get(p, q);
    let beta_abs = beta.norm();
    // Entries already at rounding level cannot be improved.
    if beta_abs <= scale * 1e-300 || beta_abs <= f64::EPSILON * scale * 1e-4 {
        return;
    }
    let phase = beta / beta_abs;
    let alpha = a.get(p, p).re;
    let gamma = a.get(q, q).re;

    let theta = (gamma - alpha) / (2.0 * beta_abs);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let d = a.dim();
    let s_ph = phase.scale(s); // s·e^{iφ}
    let s_ph_conj = phase.conj().scale(s); // s·e^{−iφ}

    // Columns p and q of A (rows follow by Hermiticity).
    for k in 0..d {
        if k == p || k == q {
            continue;
        }
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        let new_kp = akp * c - akq * s_ph_conj;
        let new_kq = akp * s_ph + akq * c;
        a.set(k, p, new_kp);
        a.set(p, k, new_kp.conj());
        a.set(k, q, new_kq);
        a.set(q, k, new_kq.conj());
    }
    a.set(p, p, C64::new(alpha - t * beta_abs, 0.0));
    a.set(q, q, C64::new(gamma + t * beta_abs, 0.0));
    a.set(p, q, C64::new(0.0, 0.0));
    a.set(q, p, C64::new(0.0, 0.0));

    for k in 0..d {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * s_ph_conj);
        v.set(k, q, vkp * s_ph + vkq * c);
    }
}

/// Sorts column indices by eigenvalue ascending; inside clusters of
/// near-equal eigenvalues the deterministic tie-break applies.
fn sorted_order_with_tie_break(values: &[f64], vectors: &ComplexMatrix) -> Vec<usize> {
    let d = values.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("non-finite eigenvalue"));

    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d
            && values[order[end]] - values[order[end - 1]] < DEGENERACY_CLUSTER_TOL
        {
            end += 1;
        }
        if end - start > 1 {
            order[start..end].sort_by(|&i, &j| {
                let ki = dominant_component(vectors, i);
                let kj = dominant_component(vectors, j);
                ki.cmp(&kj).then_with(|| lex_real_parts(vectors, i, j))
            });
        }
        start = end;
    }
    order
}

fn dominant_component(vectors: &ComplexMatrix, col: usize) -> usize {
    let mut best = 0;
    let mut best_mag = -1.0;
    for row in 0..vectors.dim() {
        let mag = vectors.get(row, col).norm_sqr();
        if mag > best_mag {
            best_mag = mag;
            best = row;
        }
    }
    best
}

fn lex_real_parts(vectors: &ComplexMatrix, i: usize, j: usize) -> std::cmp::Ordering {
    for row in 0..vectors.dim() {
        let (a, b) = (vectors.get(row, i).re, vectors.get(row, j).re);
        match a.partial_cmp(&b).expect("non-finite eigenvector entry") {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}
