//! One-sided (Hestenes) Jacobi SVD and kernel bases.

use super::{vector, ComplexMatrix, LinalgError, C64};

const MAX_SWEEPS: usize = 80;

/// Default relative rank threshold for kernel computations.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Svd {
    /// `m x m` unitary.
    pub u: ComplexMatrix,
    /// `min(m, n)` singular values, descending.
    pub s: Vec<f64>,
    /// `n x n` unitary.
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn sigma_min(&self) -> f64 {
        self.s.last().copied().unwrap_or(0.0)
    }

    pub fn sigma_max(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }
}

/// Orthogonalizes `w` columns in place; returns the rotations applied to `v`.
fn jacobi_columns(w: &mut [Vec<C64>], v: Option<&mut [Vec<C64>]>) -> Result<(), LinalgError> {
    let n = w.len();
    let mut v = v;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = vector::norm_sqr(&w[p]);
                let beta = vector::norm_sqr(&w[q]);
                let gamma = vector::dot(&w[p], &w[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let ep = phase.conj();
                let theta = (beta - alpha) / (2.0 * g);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate(w, p, q, c, s, ep);
                if let Some(v) = v.as_deref_mut() {
                    rotate(v, p, q, c, s, ep);
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(LinalgError::NoConvergence("one-sided Jacobi SVD"))
}

fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, ep: C64) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let x = *a;
        let y = *b;
        *a = x * c - ep * y * s;
        *b = x * s + ep * y * c;
    }
}

/// Extends orthonormal columns to an orthonormal basis of `C^m`.
fn complete_basis(mut cols: Vec<Vec<C64>>, m: usize) -> Vec<Vec<C64>> {
    let mut k = 0;
    while cols.len() < m && k < m {
        let mut e = vector::unit(m, k);
        for _ in 0..2 {
            for c in &cols {
                let proj = vector::dot(c, &e);
                e = vector::axpy(&e, -proj, c);
            }
        }
        let n = vector::norm(&e);
        if n > 0.5 {
            cols.push(vector::scale_real(&e, 1.0 / n));
        }
        k += 1;
    }
    cols
}

fn tall_svd(m: &ComplexMatrix) -> Result<Svd, LinalgError> {
    let (rows, cols) = (m.rows(), m.cols());
    debug_assert!(rows >= cols);
    let mut w: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..cols).map(|j| vector::unit(cols, j)).collect();
    jacobi_columns(&mut w, Some(&mut v))?;

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = w.iter().map(|c| vector::norm(c)).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let smax = s.first().copied().unwrap_or(0.0);

    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(rows);
    for &j in &order {
        if norms[j] > 0.0 && norms[j] > (rows as f64) * f64::EPSILON * smax {
            let mut u = vector::scale_real(&w[j], 1.0 / norms[j]);
            // Reorthogonalize against earlier columns to guard tiny singular values.
            for c in &ucols {
                let proj = vector::dot(c, &u);
                u = vector::axpy(&u, -proj, c);
            }
            let nu = vector::norm(&u);
            if nu > 0.5 {
                ucols.push(vector::scale_real(&u, 1.0 / nu));
                continue;
            }
        }
        break;
    }
    let ucols = complete_basis(ucols, rows);
    let vsorted: Vec<Vec<C64>> = order.iter().map(|&j| v[j].clone()).collect();
    Ok(Svd {
        u: ComplexMatrix::from_columns(rows, &ucols),
        s,
        v: ComplexMatrix::from_columns(cols, &vsorted),
    })
}

/// Full singular value decomposition `M = U Σ V*`.
pub fn svd(m: &ComplexMatrix) -> Result<Svd, LinalgError> {
    if m.rows() >= m.cols() {
        tall_svd(m)
    } else {
        let t = tall_svd(&m.adjoint())?;
        Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        })
    }
}

/// Singular values only, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    let owned;
    let tall = if m.rows() >= m.cols() {
        m
    } else {
        owned = m.adjoint();
        &owned
    };
    let mut w: Vec<Vec<C64>> = (0..tall.cols()).map(|j| tall.column(j)).collect();
    jacobi_columns(&mut w, None)?;
    let mut s: Vec<f64> = w.iter().map(|c| vector::norm(c)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

pub fn sigma_min(m: &ComplexMatrix) -> Result<f64, LinalgError> {
    let s = singular_values(m)?;
    if m.rows() < m.cols() {
        Ok(0.0)
    } else {
        Ok(s.last().copied().unwrap_or(0.0))
    }
}

/// Orthonormal basis (as columns) of the numerical kernel of `m`.
///
/// A right singular vector belongs to the kernel when its singular value is
/// at most `rank_tol * σ_max`; columns beyond `min(rows, cols)` always do.
/// The result has zero columns when the kernel is trivial.
pub fn null_space_basis(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix, LinalgError> {
    let n = m.cols();
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    let d = svd(m)?;
    let smax = d.sigma_max();
    let rank = if smax == 0.0 {
        0
    } else {
        d.s.iter().filter(|&&s| s > rank_tol * smax).count()
    };
    Ok(d.v.columns(rank, n))
}

/// Kernel of a single matrix with the default threshold.
pub fn kernel(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    null_space_basis(m, DEFAULT_RANK_TOL)
}

/// Orthonormal basis of `ker(m1) ∩ ker(m2) ∩ ...` via the stacked matrix.
pub fn kernel_intersection(
    ms: &[&ComplexMatrix],
    rank_tol: f64,
) -> Result<ComplexMatrix, LinalgError> {
    let stacked = ComplexMatrix::vstack(ms);
    null_space_basis(&stacked, rank_tol)
}
