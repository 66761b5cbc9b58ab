//! Cholesky factorization, triangular solves and LU inversion.

use super::{check_hermitian, ComplexMatrix, LinalgError, C64};

/// Lower-triangular `L` with `H = L L*`.
pub fn cholesky(h: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    check_hermitian(h)?;
    let n = h.rows();
    let scale = 1.0 + (0..n).map(|i| h[(i, i)].re.abs()).fold(0.0, f64::max);
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= 1e-13 * scale {
            return Err(LinalgError::NotPositiveDefinite { pivot: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Solves `L X = B` for lower-triangular `L`.
pub fn solve_lower(l: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = l.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    x
}

/// Solves `L* X = B` for lower-triangular `L`.
pub fn solve_lower_adjoint(l: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = l.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in i + 1..n {
                s -= l[(k, i)].conj() * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)].conj();
        }
    }
    x
}

/// `L^{-1} M L^{-*}` for lower-triangular `L`, so that with `H = L L*` the
/// pencil `M - λH` has the eigenvalues of the result.
pub fn congruence_inverse(l: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    // Y = L^{-1} M, then (L^{-1} Y*)* = Y L^{-*}.
    let y = solve_lower(l, m);
    let z = solve_lower(l, &y.adjoint());
    z.adjoint()
}

/// LU factorization with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

pub fn lu(m: &ComplexMatrix) -> Result<Lu, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = m.max_abs();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap_or(k);
        if a[(p, k)].norm() <= f64::EPSILON * scale * n as f64 || a[(p, k)].norm() == 0.0 {
            return Err(LinalgError::Singular);
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            perm.swap(k, p);
        }
        let piv = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            a[(i, k)] = f;
            for j in k + 1..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
    }
    Ok(Lu { lu: a, perm })
}

impl Lu {
    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.perm.len();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let t = self.lu[(i, k)] * x[k];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = self.lu[(i, k)] * x[k];
                x[i] -= t;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let f = lu(m)?;
    let n = m.rows();
    let cols: Vec<Vec<C64>> = (0..n)
        .map(|j| f.solve_vec(&super::vector::unit(n, j)))
        .collect();
    Ok(ComplexMatrix::from_columns(n, &cols))
}
