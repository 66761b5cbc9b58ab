//! Helpers for complex vectors stored as plain slices.

use super::{LinalgError, C64};

/// `x* y`.
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    assert_eq!(x.len(), y.len(), "dot length mismatch");
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// `x^T y` (no conjugation).
pub fn dot_t(x: &[C64], y: &[C64]) -> C64 {
    assert_eq!(x.len(), y.len(), "dot length mismatch");
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

pub fn scale(x: &[C64], s: C64) -> Vec<C64> {
    x.iter().map(|z| z * s).collect()
}

pub fn scale_real(x: &[C64], s: f64) -> Vec<C64> {
    x.iter().map(|z| z * s).collect()
}

pub fn add(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// `x + s y`.
pub fn axpy(x: &[C64], s: C64, y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a + s * b).collect()
}

pub fn conj(x: &[C64]) -> Vec<C64> {
    x.iter().map(|z| z.conj()).collect()
}

pub fn normalized(x: &[C64]) -> Result<Vec<C64>, LinalgError> {
    let n = norm(x);
    if n == 0.0 || !n.is_finite() {
        return Err(LinalgError::ZeroVector);
    }
    Ok(scale_real(x, 1.0 / n))
}

pub fn unit(n: usize, k: usize) -> Vec<C64> {
    let mut e = vec![C64::new(0.0, 0.0); n];
    e[k] = C64::new(1.0, 0.0);
    e
}

/// Moore-Penrose pseudoinverse of a nonzero column vector, returned as the
/// row covector `v* / ‖v‖²`.
pub fn pseudoinverse(v: &[C64]) -> Result<Vec<C64>, LinalgError> {
    let n2 = norm_sqr(v);
    if n2 == 0.0 || !n2.is_finite() {
        return Err(LinalgError::ZeroVector);
    }
    Ok(v.iter().map(|z| z.conj() / n2).collect())
}

/// Removes the global phase so the largest-magnitude entry is real positive.
pub fn fix_phase(x: &mut [C64]) {
    if let Some(big) = x
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
    {
        let r = big.norm();
        if r > 0.0 {
            let phase = big.conj() / r;
            for z in x.iter_mut() {
                *z *= phase;
            }
        }
    }
}
