//! Minimal-norm structured matrices mapping prescribed vectors.

use crate::error::{Error, Result};
use crate::linalg::{vector, ComplexMatrix, LinalgError, C64, I};
use crate::model::Star;

/// Feasibility tolerance, relative to `‖x‖ ‖y‖`.
pub const MAP_TOL: f64 = 1e-10;

fn nonzero(x: &[C64]) -> Result<f64> {
    let n = vector::norm(x);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::Linalg(LinalgError::ZeroVector));
    }
    Ok(n)
}

/// Hermitian `H` with `Hx = y` and `‖H‖ = ‖y‖/‖x‖`; needs `Im(x*y) = 0`.
///
/// Built as `c [x̂ z] [[a, b], [b, -a]] [x̂ z]*` where `ŷ = a x̂ + b z`, so the
/// middle factor is a reflection and the norm is exactly `c`.
pub fn hermitian_map(x: &[C64], y: &[C64]) -> Result<ComplexMatrix> {
    let nx = nonzero(x)?;
    let ny = vector::norm(y);
    let n = x.len();
    let xy = vector::dot(x, y);
    if xy.im.abs() > MAP_TOL * nx * ny {
        return Err(Error::InfeasibleMapping(format!(
            "Im(x*y) = {:.3e} is not zero",
            xy.im
        )));
    }
    if ny == 0.0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let xh = vector::scale_real(x, 1.0 / nx);
    let yh = vector::scale_real(y, 1.0 / ny);
    let c = ny / nx;
    let a = vector::dot(&xh, &yh).re;
    let r = vector::axpy(&yh, C64::new(-a, 0.0), &xh);
    let b = vector::norm(&r);
    let mut h = ComplexMatrix::outer(&xh, &xh).scale_real(c * a);
    if b > 1e-15 {
        let z = vector::scale_real(&r, 1.0 / b);
        let xz = ComplexMatrix::outer(&xh, &z);
        h = &h + &(&xz + &xz.adjoint()).scale_real(c * b);
        h = &h - &ComplexMatrix::outer(&z, &z).scale_real(c * a);
    }
    Ok(h.hermitian_part())
}

/// Skew-Hermitian `Δ` with `Δx = y` and `‖Δ‖ = ‖y‖/‖x‖`; needs `Re(x*y) = 0`.
pub fn skew_hermitian_map(x: &[C64], y: &[C64]) -> Result<ComplexMatrix> {
    let nx = nonzero(x)?;
    let ny = vector::norm(y);
    let xy = vector::dot(x, y);
    if xy.re.abs() > MAP_TOL * nx * ny {
        return Err(Error::InfeasibleMapping(format!(
            "Re(x*y) = {:.3e} is not zero",
            xy.re
        )));
    }
    let h = hermitian_map(x, &vector::scale(y, -I))?;
    Ok(h.scale(I))
}

/// Negative semidefinite rank-one `Δ = y y* / (x*y)` with `Δx = y`; needs
/// `x*y < 0` (or `y = 0`). Its norm is `‖y‖² / |x*y|`.
pub fn nsd_map(x: &[C64], y: &[C64]) -> Result<ComplexMatrix> {
    let nx = nonzero(x)?;
    let ny = vector::norm(y);
    let n = x.len();
    if ny == 0.0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let xy = vector::dot(x, y);
    if xy.im.abs() > MAP_TOL * nx * ny || xy.re >= 0.0 {
        return Err(Error::InfeasibleMapping(format!(
            "x*y = {xy:.3e} is not negative"
        )));
    }
    Ok(ComplexMatrix::outer(y, y)
        .scale_real(1.0 / xy.re)
        .hermitian_part())
}

/// `Δ` with `Δx = y`, `Δ^⋆x = z` and `‖Δ‖ = max(‖y‖, ‖z‖)/‖x‖`; needs
/// `x^⋆y = z^⋆x`.
pub fn two_sided_map(x: &[C64], y: &[C64], z: &[C64], star: Star) -> Result<ComplexMatrix> {
    let nx = nonzero(x)?;
    let n = x.len();
    let (lhs, rhs) = match star {
        Star::Adjoint => (vector::dot(x, y), vector::dot(z, x)),
        Star::Transpose => (vector::dot_t(x, y), vector::dot_t(z, x)),
    };
    let gap = (lhs - rhs).norm();
    if gap > MAP_TOL * nx * (vector::norm(y) + vector::norm(z)) {
        return Err(Error::InfeasibleMapping(format!("x^⋆y - z^⋆x = {gap:.3e}")));
    }
    // Reduce to Δu = p, Δ*w = q with unit u, w.
    let u = vector::scale_real(x, 1.0 / nx);
    let p = vector::scale_real(y, 1.0 / nx);
    let (w, q) = match star {
        Star::Adjoint => (u.clone(), vector::scale_real(z, 1.0 / nx)),
        Star::Transpose => (
            vector::conj(&u),
            vector::scale_real(&vector::conj(z), 1.0 / nx),
        ),
    };
    let mu = vector::norm(&p).max(vector::norm(&q));
    if mu == 0.0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let a = vector::dot(&w, &p);
    let pt = vector::axpy(&p, -a, &w);
    let qt = vector::axpy(&q, -vector::dot(&u, &q), &u);
    let mut d = &ComplexMatrix::outer(&w, &u).scale(a) + &ComplexMatrix::outer(&pt, &u);
    d = &d + &ComplexMatrix::outer(&w, &qt);
    let s2 = mu * mu - a.norm_sqr();
    if s2 > 1e-14 * mu * mu {
        d = &d - &ComplexMatrix::outer(&pt, &qt).scale(a.conj() / s2);
    }
    Ok(d)
}

/// Perturbation for a given symmetry: `Hermitian`, `Skew` or none.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Hermitian,
    Skew,
}

/// `Δ` of the given symmetry with `Δx = y` and minimal norm `‖y‖/‖x‖`.
pub fn symmetric_map(sym: Symmetry, x: &[C64], y: &[C64]) -> Result<ComplexMatrix> {
    match sym {
        Symmetry::General => {
            let p = vector::pseudoinverse(x)?;
            Ok(ComplexMatrix::outer(y, &vector::conj(&p)))
        }
        Symmetry::Hermitian => hermitian_map(x, y),
        Symmetry::Skew => skew_hermitian_map(x, y),
    }
}
