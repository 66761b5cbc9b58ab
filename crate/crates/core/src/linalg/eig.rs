//! Hermitian eigensolvers.
//!
//! `hermitian_eig` is a cyclic complex Jacobi method and returns the full
//! decomposition. `eigvalsh` reduces to a real tridiagonal matrix with
//! Householder reflections and runs implicit QL; it is the fast path used
//! inside the eigenvalue optimizers, where only the spectrum is needed.

use super::{ComplexMatrix, LinalgError, C64};

const MAX_SWEEPS: usize = 80;
const MAX_QL_ITERATIONS: usize = 90;

/// Default Hermitian-symmetry tolerance relative to `1 + ‖H‖`.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unit eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("empty spectrum")
    }

    /// Columns whose eigenvalues lie within `tol` of the smallest one.
    pub fn min_cluster(&self, tol: f64) -> ComplexMatrix {
        let lo = self.values[0];
        let k = self.values.iter().take_while(|&&v| v - lo <= tol).count();
        self.vectors.columns(0, k)
    }
}

pub fn check_hermitian(h: &ComplexMatrix) -> Result<(), LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let defect = h.hermitian_defect();
    let scale = 1.0 + h.norm_fro();
    if defect > HERMITIAN_TOL * scale {
        return Err(LinalgError::NotHermitian { defect });
    }
    Ok(())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition, LinalgError> {
    check_hermitian(h)?;
    let n = h.rows();
    let mut a = h.hermitian_part();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.norm_fro();

    if n > 1 && scale > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= f64::EPSILON * scale {
                converged = true;
                break;
            }
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let g = apq.norm();
                    if g <= 1e-18 * scale {
                        continue;
                    }
                    rotated = true;
                    let phase = apq / g;
                    let ep = phase.conj();
                    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * c - ep * akq * s;
                        a[(k, q)] = akp * s + ep * akq * c;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = apk * c - phase * aqk * s;
                        a[(q, k)] = apk * s + phase * aqk * c;
                    }
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    a[(p, p)].im = 0.0;
                    a[(q, q)].im = 0.0;
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - ep * vkq * s;
                        v[(k, q)] = vkp * s + ep * vkq * c;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged && off_diagonal_norm(&a) > 1e3 * f64::EPSILON * scale {
            return Err(LinalgError::NoConvergence("hermitian Jacobi"));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only, ascending, via Householder tridiagonalization and QL.
pub fn eigvalsh(h: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    check_hermitian(h)?;
    let n = h.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = h.hermitian_part();
    let (mut d, mut e) = tridiagonalize(&mut a);
    tql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

pub fn lambda_min(h: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(eigvalsh(h)?[0])
}

pub fn lambda_max(h: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(*eigvalsh(h)?.last().expect("nonempty"))
}

/// Reduces `a` in place; returns the diagonal and the moduli of the
/// subdiagonal (`e[i]` couples `d[i]` and `d[i+1]`, `e[n-1] = 0`).
fn tridiagonalize(a: &mut ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut p = vec![C64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let xnorm = (lo..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let tail = (lo + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail == 0.0 {
            continue;
        }
        let x0 = a[(lo, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        for i in lo..n {
            v[i] = a[(i, k)];
        }
        v[lo] -= alpha;
        let vn = (lo..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        for vi in v.iter_mut().take(n).skip(lo) {
            *vi /= vn;
        }
        // Reflect rows/cols k..n: A <- H A H with H = I - 2 v v*.
        for i in k..n {
            p[i] = (lo..n).map(|j| a[(i, j)] * v[j]).sum();
        }
        let kappa: C64 = (lo..n).map(|i| v[i].conj() * p[i]).sum();
        let mut q = vec![C64::new(0.0, 0.0); n];
        for i in k..n {
            let vi = if i >= lo { v[i] } else { C64::new(0.0, 0.0) };
            q[i] = p[i] - kappa * vi;
        }
        for i in k..n {
            let vi = if i >= lo { v[i] } else { C64::new(0.0, 0.0) };
            for j in k..n {
                let vj = if j >= lo { v[j] } else { C64::new(0.0, 0.0) };
                a[(i, j)] -= (vi * q[j].conj() + q[i] * vj.conj()) * 2.0;
            }
        }
        for i in lo + 1..n {
            a[(i, k)] = C64::new(0.0, 0.0);
            a[(k, i)] = C64::new(0.0, 0.0);
        }
    }
    let d = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        e[i] = a[(i + 1, i)].norm();
    }
    (d, e)
}

/// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal.
fn tql(d: &mut [f64], e: &mut [f64]) -> Result<(), LinalgError> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(LinalgError::NoConvergence("tridiagonal QL"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
