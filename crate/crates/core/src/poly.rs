//! Common null space distances for matrix polynomials `P(s) = Σ s^j A_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, vector, ComplexMatrix, C64};
use crate::mapping::{two_sided_map, Symmetry};
use crate::model::{DistanceReport, MatrixPolynomial, Perturbation, Sign, Star, StructureTag};
use crate::nullspace::{
    delta0_palindromic, smallest_right_singular, stationary_in_subspace, structured_image,
};
use crate::optimize::{
    maximize_lambda_min_box, AffineHermitianFamily, BoxOptions, OptimizerTrace, TraceFlag,
};

/// Gap `λ₂ - λ_min` above which the bottom eigenvalue counts as simple.
pub const SIMPLICITY_GAP: f64 = 1e-8;

fn coeff_symmetry(tag: StructureTag, j: usize) -> Option<Symmetry> {
    let even = j.is_multiple_of(2);
    Some(match tag {
        StructureTag::Unstructured => Symmetry::General,
        StructureTag::Hermitian => Symmetry::Hermitian,
        StructureTag::SkewHermitian => Symmetry::Skew,
        StructureTag::StarEven if even => Symmetry::Hermitian,
        StructureTag::StarEven => Symmetry::Skew,
        StructureTag::StarOdd if even => Symmetry::Skew,
        StructureTag::StarOdd => Symmetry::Hermitian,
        _ => return None,
    })
}

/// `δ₀(P) = √λ_min(Σ A_j* A_j)` with structure-preserving minimal perturbations.
pub fn poly_delta0(p: &MatrixPolynomial) -> Result<DistanceReport> {
    if coeff_symmetry(p.tag, 0).is_none() {
        return Err(Error::UnsupportedTag(p.tag));
    }
    let violations = p.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidStructure(violations));
    }
    let blocks: Vec<&ComplexMatrix> = p.coeffs.iter().collect();
    let (value, mut v) = smallest_right_singular(&ComplexMatrix::vstack(&blocks))?;
    vector::fix_phase(&mut v);
    let mut perturbations = Vec::with_capacity(p.coeffs.len());
    for (j, a) in p.coeffs.iter().enumerate() {
        let sym = coeff_symmetry(p.tag, j).expect("checked above");
        let d = structured_image(sym, &v, &a.mul_vec(&v))?;
        perturbations.push(Perturbation::new(format!("A{j}"), Sign::Subtract, d));
    }
    Ok(DistanceReport::new(value, perturbations, v))
}

/// How the middle coefficient of an even-degree palindromic polynomial enters `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MiddleWeighting {
    /// `½ A*_{m/2} A_{m/2}` added once to the base, matching `Σ_j ‖Δ_j v‖²`.
    #[default]
    Half,
    /// `A*_{m/2} A_{m/2}` added to every `γ_j` direction.
    PerPair,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PalindromicPolyReport {
    /// `2 λ̂`, a lower bound on the squared distance.
    #[serde(with = "crate::model::real")]
    pub bound_value: f64,
    /// `√(2 λ̂)`.
    #[serde(with = "crate::model::real")]
    pub bound_distance: f64,
    pub lambda_hat: f64,
    pub gammas: Vec<f64>,
    pub equality_certified: bool,
    #[serde(with = "crate::model::real")]
    pub simplicity_gap: f64,
    /// `u* D_i u` per direction at the maximizer, `u` a bottom eigenvector.
    pub stationarity: Vec<f64>,
    /// Attained distance with its perturbation, available for degree ≤ 2.
    pub report: Option<DistanceReport>,
    pub trace: OptimizerTrace,
}

/// Per-pair affine family `f(γ) = base + Σ γ_j D_j` for a palindromic polynomial.
pub fn palindromic_poly_family(
    p: &MatrixPolynomial,
    star: Star,
    weighting: MiddleWeighting,
) -> Result<AffineHermitianFamily> {
    let m = p.degree();
    let n = p.n();
    let pairs = m.div_ceil(2);
    let mut base = ComplexMatrix::zeros(n, n);
    let mut dirs = Vec::with_capacity(pairs);
    let middle = m.is_multiple_of(2).then(|| p.coeffs[m / 2].gram());
    for a in &p.coeffs[..pairs] {
        let g = a.gram();
        let b = star.apply(a).gram();
        let mut d = &g - &b;
        if let (Some(mid), MiddleWeighting::PerPair) = (&middle, weighting) {
            d = &d + mid;
        }
        base = &base + &b;
        dirs.push(d);
    }
    if let (Some(mid), MiddleWeighting::Half) = (&middle, weighting) {
        base = &base + &mid.scale_real(0.5);
    }
    Ok(AffineHermitianFamily::new(base.hermitian_part(), dirs)?)
}

pub fn poly_delta0_palindromic(p: &MatrixPolynomial, star: Star) -> Result<PalindromicPolyReport> {
    poly_delta0_palindromic_with(p, star, &BoxOptions::default(), MiddleWeighting::Half)
}

pub fn poly_delta0_palindromic_with(
    p: &MatrixPolynomial,
    star: Star,
    opts: &BoxOptions,
    weighting: MiddleWeighting,
) -> Result<PalindromicPolyReport> {
    let check = MatrixPolynomial::new(p.coeffs.clone(), star.tag());
    let violations = check.validate();
    if !violations.is_empty() {
        let defect = violations
            .iter()
            .map(|v| v.defect)
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max);
        return Err(Error::NotPalindromic { defect });
    }
    let m = p.degree();
    let fam = palindromic_poly_family(p, star, weighting)?;
    let k = fam.dim();
    let opt = if k == 1 {
        let (g, v, evals) = fam.maximize_lambda_min_unit();
        crate::optimize::Optimum {
            point: vec![g],
            value: v,
            trace: OptimizerTrace::new(evals, vec![g], v),
        }
    } else {
        maximize_lambda_min_box(&fam, &vec![0.0; k], &vec![1.0; k], opts)
    };
    let lambda_hat = opt.value;
    let eig = hermitian_eig(&fam.at(&opt.point))?;
    let gap = if eig.values.len() > 1 {
        eig.values[1] - eig.values[0]
    } else {
        f64::INFINITY
    };
    let u = eig.vector(0);
    let stationarity = fam
        .directions()
        .iter()
        .map(|d| vector::dot(&u, &d.mul_vec(&u)).re)
        .collect();
    let mut trace = opt.trace;
    if gap <= SIMPLICITY_GAP {
        trace.flag(TraceFlag::Multiplicity);
    }
    let report = match m {
        1 => Some(relabel(delta0_palindromic(&p.coeffs[0], star)?)),
        0 | 2 if weighting == MiddleWeighting::Half => {
            Some(attained_low_degree(p, star, &fam, &opt.point)?)
        }
        _ => None,
    };
    let bound_value = 2.0 * lambda_hat.max(0.0);
    Ok(PalindromicPolyReport {
        bound_value,
        bound_distance: bound_value.sqrt(),
        lambda_hat,
        gammas: opt.point,
        equality_certified: m <= 2 || gap > SIMPLICITY_GAP,
        simplicity_gap: gap,
        stationarity,
        report,
        trace,
    })
}

fn relabel(mut r: DistanceReport) -> DistanceReport {
    for p in &mut r.perturbations {
        p.target = match p.target.as_str() {
            "A" => "A0".into(),
            "E" => "A1".into(),
            other => other.into(),
        };
    }
    r
}

/// Minimal `Δ = Δ^⋆` with `Δv = y`.
fn self_star_map(v: &[C64], y: &[C64], star: Star) -> Result<ComplexMatrix> {
    match star {
        Star::Adjoint => structured_image(Symmetry::Hermitian, v, y),
        Star::Transpose => {
            let d = two_sided_map(v, y, y, star)?;
            Ok((&d + &d.transpose()).scale_real(0.5))
        }
    }
}

/// Degree 0 or 2: stationary witness in the bottom eigenspace and its perturbations.
fn attained_low_degree(
    p: &MatrixPolynomial,
    star: Star,
    fam: &AffineHermitianFamily,
    gamma: &[f64],
) -> Result<DistanceReport> {
    let m = p.degree();
    let scale = 1.0 + fam.base().norm2() + fam.directions().iter().map(|d| d.norm2()).sum::<f64>();
    let eig = hermitian_eig(&fam.at(gamma))?;
    let q = eig.min_cluster(1e-6 * scale);
    let c = if let Some(d) = fam.directions().first() {
        let qb = q.adjoint().matmul(fam.base()).matmul(&q);
        let qd = q.adjoint().matmul(d).matmul(&q);
        stationary_in_subspace(&qb, &qd, scale)?.0
    } else {
        smallest_right_singular(&fam.base().matmul(&q))?.1
    };
    let mut v = vector::normalized(&q.mul_vec(&c))?;
    vector::fix_phase(&mut v);
    let mut perturbations = Vec::new();
    if m == 2 {
        let a0 = &p.coeffs[0];
        let d0 = two_sided_map(&v, &a0.mul_vec(&v), &star.apply(a0).mul_vec(&v), star)?;
        let d2 = star.apply(&d0);
        let d1 = self_star_map(&v, &p.coeffs[1].mul_vec(&v), star)?;
        perturbations.push(Perturbation::new("A0", Sign::Subtract, d0));
        perturbations.push(Perturbation::new("A1", Sign::Subtract, d1));
        perturbations.push(Perturbation::new("A2", Sign::Subtract, d2));
    } else {
        let d = self_star_map(&v, &p.coeffs[0].mul_vec(&v), star)?;
        perturbations.push(Perturbation::new("A0", Sign::Subtract, d));
    }
    let value = perturbations
        .iter()
        .map(|p| p.matrix.norm2().powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(DistanceReport::new(value, perturbations, v))
}
