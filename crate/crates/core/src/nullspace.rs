//! Distances to a common null space for pencils `A + sE`.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, null_space_basis, svd, vector, ComplexMatrix, LinalgError, C64,
};
use crate::mapping::{symmetric_map, two_sided_map, Symmetry};
use crate::model::{DistanceReport, Perturbation, Sign, Star, StructureTag, StructuredPencil};
use crate::optimize::{AffineHermitianFamily, OptimizerTrace, TraceFlag};

fn check_pair(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    if a.rows() != e.rows() || a.cols() != e.cols() {
        return Err(LinalgError::DimensionMismatch {
            expected: (a.rows(), a.cols()),
            found: (e.rows(), e.cols()),
        }
        .into());
    }
    Ok(())
}

/// Rank-one `M v v†` for unit `v`.
pub(crate) fn rank_one(m: &ComplexMatrix, v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::outer(&m.mul_vec(v), v)
}

/// Smallest right singular pair of `m`: `(σ_min, v)`.
pub(crate) fn smallest_right_singular(m: &ComplexMatrix) -> Result<(f64, Vec<C64>)> {
    let d = svd(m)?;
    let k = m.cols();
    let sigma = if m.rows() < k { 0.0 } else { d.sigma_min() };
    let mut v = d.v.column(k - 1);
    vector::fix_phase(&mut v);
    Ok((sigma, v))
}

/// `δ₀(A, E) = σ_min([A; E])`, attained by `Δ_A = A v v†`, `Δ_E = E v v†`.
pub fn delta0_unstructured(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<DistanceReport> {
    check_pair(a, e)?;
    let stacked = ComplexMatrix::vstack(&[a, e]);
    let (value, v) = smallest_right_singular(&stacked)?;
    let da = rank_one(a, &v);
    let de = rank_one(e, &v);
    Ok(DistanceReport::new(
        value,
        vec![
            Perturbation::new("A", Sign::Subtract, da),
            Perturbation::new("E", Sign::Subtract, de),
        ],
        v,
    ))
}

/// Distance when only `A` is perturbed: `σ_min(A U)` with `U` a basis of `ker E`.
pub fn delta0_a_only(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<DistanceReport> {
    delta0_one_sided(a, e, "A", crate::linalg::DEFAULT_RANK_TOL)
}

/// Distance when only `E` is perturbed: `σ_min(E V)` with `V` a basis of `ker A`.
pub fn delta0_e_only(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<DistanceReport> {
    delta0_one_sided(e, a, "E", crate::linalg::DEFAULT_RANK_TOL)
}

/// `σ_min(M U)` over `U = ker(fixed)`; `+∞` when the kernel is trivial.
pub fn delta0_one_sided(
    m: &ComplexMatrix,
    fixed: &ComplexMatrix,
    target: &str,
    rank_tol: f64,
) -> Result<DistanceReport> {
    check_pair(m, fixed)?;
    let u = null_space_basis(fixed, rank_tol)?;
    if u.cols() == 0 {
        return Ok(DistanceReport::infinite());
    }
    let (value, c) = smallest_right_singular(&m.matmul(&u))?;
    let mut x = u.mul_vec(&c);
    vector::fix_phase(&mut x);
    let d = rank_one(m, &x);
    Ok(
        DistanceReport::new(value, vec![Perturbation::new(target, Sign::Subtract, d)], x)
            .with_detail("kernel_dimension", u.cols() as f64),
    )
}

/// Minimal map of the given symmetry sending `v` to `y`, after removing the
/// rounding-level component of `y` that makes the mapping infeasible.
pub(crate) fn structured_image(sym: Symmetry, v: &[C64], y: &[C64]) -> Result<ComplexMatrix> {
    let vy = vector::dot(v, y);
    let y = match sym {
        Symmetry::General => y.to_vec(),
        Symmetry::Hermitian => vector::axpy(y, C64::new(0.0, -vy.im), v),
        Symmetry::Skew => vector::axpy(y, C64::new(-vy.re, 0.0), v),
    };
    symmetric_map(sym, v, &y)
}

/// Symmetries of `(Δ_A, Δ_E)` that preserve each non-palindromic tag.
pub fn perturbation_symmetry(tag: StructureTag) -> Option<(Symmetry, Symmetry)> {
    match tag {
        StructureTag::Unstructured => Some((Symmetry::General, Symmetry::General)),
        StructureTag::Hermitian => Some((Symmetry::Hermitian, Symmetry::Hermitian)),
        StructureTag::SkewHermitian => Some((Symmetry::Skew, Symmetry::Skew)),
        StructureTag::StarEven => Some((Symmetry::Hermitian, Symmetry::Skew)),
        StructureTag::StarOdd => Some((Symmetry::Skew, Symmetry::Hermitian)),
        _ => None,
    }
}

/// Structured distance with structure-preserving perturbations.
pub fn delta0_structured(pencil: &StructuredPencil) -> Result<DistanceReport> {
    let violations = pencil.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidStructure(violations));
    }
    if let Some(star) = pencil.tag.star() {
        return delta0_palindromic(&pencil.a, star);
    }
    let (sa, se) = perturbation_symmetry(pencil.tag).ok_or(Error::UnsupportedTag(pencil.tag))?;
    let base = delta0_unstructured(&pencil.a, &pencil.e)?;
    if sa == Symmetry::General {
        return Ok(base);
    }
    let v = base.witness.clone().expect("finite report has a witness");
    let da = structured_image(sa, &v, &pencil.a.mul_vec(&v))?;
    let de = structured_image(se, &v, &pencil.e.mul_vec(&v))?;
    Ok(DistanceReport::new(
        base.value,
        vec![
            Perturbation::new("A", Sign::Subtract, da),
            Perturbation::new("E", Sign::Subtract, de),
        ],
        v,
    ))
}

/// Palindromic distance for `A + sA^⋆`:
/// `value² = 2 sup_{γ∈[0,1]} λ_min(G₂ + γ(G₁ - G₂))`, `G₁ = A*A`, `G₂ = (A^⋆)*A^⋆`.
///
/// The witness solves `v*(G₁ - G₂)v = 0` inside the bottom eigenspace at the
/// maximizer; the perturbation `Δ_A` maps `v ↦ Av` and `Δ_A^⋆ v ↦ A^⋆v`, with
/// `Δ_E = Δ_A^⋆`. The reported value is the combined norm of that pair.
pub fn delta0_palindromic(a: &ComplexMatrix, star: Star) -> Result<DistanceReport> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let astar = star.apply(a);
    let g1 = a.gram();
    let g2 = astar.gram();
    let d = &g1 - &g2;
    let family = AffineHermitianFamily::new(g2.clone(), vec![d.clone()])?;
    let (gamma, lambda_hat, evals) = family.maximize_lambda_min_unit();
    let scale = 1.0 + g1.norm2();

    let eig = hermitian_eig(&family.at(&[gamma]))?;
    let q = eig.min_cluster(1e-6 * scale);
    let (coords, gamma_sub, multiple) = stationary_in_subspace(
        &q.adjoint().matmul(&g2).matmul(&q),
        &q.adjoint().matmul(&d).matmul(&q),
        scale,
    )?;
    let mut v = vector::normalized(&q.mul_vec(&coords))?;
    vector::fix_phase(&mut v);

    let av = a.mul_vec(&v);
    let asv = astar.mul_vec(&v);
    let da = two_sided_map(&v, &av, &asv, star)?;
    let de = star.apply(&da);
    let value = std::f64::consts::SQRT_2 * vector::norm(&av).max(vector::norm(&asv));
    let stationarity = vector::dot(&v, &d.mul_vec(&v)).re;
    let mut trace = OptimizerTrace::new(evals, vec![gamma], lambda_hat);
    if multiple || q.cols() > 1 {
        trace.flag(TraceFlag::Multiplicity);
    }
    Ok(DistanceReport::new(
        value,
        vec![
            Perturbation::new("A", Sign::Subtract, da),
            Perturbation::new("E", Sign::Subtract, de),
        ],
        v,
    )
    .with_detail("gamma", gamma)
    .with_detail("gamma_subspace", gamma_sub)
    .with_detail("lambda_hat", lambda_hat)
    .with_detail("stationarity", stationarity)
    .with_trace(trace))
}

/// Inside a small subspace with Gram blocks `B₂` and `B_D = Q*(G₁ - G₂)Q`,
/// finds `c` maximizing over `γ` the bottom of `B₂ + γB_D` with `c*B_D c = 0`.
/// Returns `(c, γ, bottom eigenvalue multiple)`.
pub(crate) fn stationary_in_subspace(
    b2: &ComplexMatrix,
    bd: &ComplexMatrix,
    scale: f64,
) -> Result<(Vec<C64>, f64, bool)> {
    let k = b2.rows();
    if k == 1 {
        return Ok((vec![C64::new(1.0, 0.0)], f64::NAN, false));
    }
    let fam = AffineHermitianFamily::new(b2.hermitian_part(), vec![bd.hermitian_part()])?;
    let (g, _, _) = fam.maximize_lambda_min_unit();
    let e = hermitian_eig(&fam.at(&[g]))?;
    let w = e.min_cluster(1e-9 * scale);
    let multiple = w.cols() > 1;
    let dw = w.adjoint().matmul(bd).matmul(&w);
    let de = hermitian_eig(&dw.hermitian_part())?;
    let (dmin, dmax) = (de.min(), de.max());
    let pick = if dmin >= 0.0 {
        de.vector(0)
    } else if dmax <= 0.0 {
        de.vector(de.values.len() - 1)
    } else {
        // cos²θ d_min + sin²θ d_max = 0.
        let t = (-dmin / dmax).sqrt();
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        vector::add(
            &vector::scale_real(&de.vector(0), c),
            &vector::scale_real(&de.vector(de.values.len() - 1), s),
        )
    };
    Ok((w.mul_vec(&pick), g, multiple))
}
