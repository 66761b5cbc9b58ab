//! Structured eigenvalue backward errors and lower bounds on the distance to singularity.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, inverse, sigma_min, svd, ComplexMatrix, C64, I};
use crate::model::{Star, StructureTag, StructuredPencil};
use crate::optimize::{
    minimize_lambda2_coupled, minimize_lambda_max_affine, AffineHermitianFamily, Domain,
    Lambda2Options, MinMaxOptions, OptimizerTrace,
};
use crate::par;
use crate::random::seeded;

/// Relative `σ_min(L(λ))` margin for membership in the admissible set.
pub const K_MARGIN: f64 = 1e-10;
/// Smallest allowed distance between family points.
pub const MIN_GAP: f64 = 1e-8;

fn scale_at(a: &ComplexMatrix, e: &ComplexMatrix, lambda: C64) -> f64 {
    1.0 + a.norm2() + lambda.norm() * e.norm2()
}

fn pencil_at(a: &ComplexMatrix, e: &ComplexMatrix, lambda: C64) -> ComplexMatrix {
    a + &e.scale(lambda)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaFamily {
    pub points: Vec<C64>,
    /// `σ_min(L(λ_i)) / scale` per point.
    pub margins: Vec<f64>,
}

impl LambdaFamily {
    /// Wraps user-supplied points; admissibility is checked per point later.
    pub fn from_points(pencil: &StructuredPencil, points: Vec<C64>) -> Result<Self> {
        let margins = points
            .iter()
            .map(|&l| Ok(sigma_min(&pencil.at(l))? / scale_at(&pencil.a, &pencil.e, l)))
            .collect::<Result<_>>()?;
        Ok(LambdaFamily { points, margins })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Whether the structure's backward error needs `λ` away from an axis:
/// the real axis for Hermitian and skew, the imaginary axis for even and odd.
fn axis_clearance(tag: StructureTag, lambda: C64) -> f64 {
    match tag {
        StructureTag::Hermitian | StructureTag::SkewHermitian => lambda.im.abs(),
        StructureTag::StarEven | StructureTag::StarOdd => lambda.re.abs(),
        _ => f64::INFINITY,
    }
}

/// `count` admissible points on a jittered circle of radius `1 + ‖A‖/(1 + ‖E‖)`.
pub fn choose_lambda_family(
    pencil: &StructuredPencil,
    count: usize,
    seed: u64,
) -> Result<LambdaFamily> {
    let n = pencil.n();
    let count = count.max(n + 1);
    let radius = 1.0 + pencil.a.norm2() / (1.0 + pencil.e.norm2());
    let mut rng = seeded(seed);
    let mut points: Vec<C64> = Vec::with_capacity(count);
    let mut margins = Vec::with_capacity(count);
    let mut rejections = 0usize;
    let sector = std::f64::consts::TAU / count as f64;
    let mut k = 0usize;
    while points.len() < count {
        if rejections >= 100 * count {
            return Err(Error::FamilyConstructionFailed {
                attempts: rejections,
            });
        }
        let theta = sector * (k as f64 + 0.5) + sector * rng.random_range(-0.3..0.3);
        let r = radius * (1.0 + rng.random_range(-0.1..0.1));
        let lambda = C64::from_polar(r, theta);
        let margin = sigma_min(&pencil.at(lambda))? / scale_at(&pencil.a, &pencil.e, lambda);
        let distinct = points.iter().all(|p| (p - lambda).norm() > MIN_GAP);
        if margin > K_MARGIN && distinct && axis_clearance(pencil.tag, lambda) > 1e-3 * radius {
            points.push(lambda);
            margins.push(margin);
            k += 1;
        } else {
            rejections += 1;
        }
    }
    Ok(LambdaFamily { points, margins })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub delta_a: ComplexMatrix,
    pub delta_e: ComplexMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackwardErrorResult {
    pub lambda: C64,
    #[serde(with = "crate::model::real")]
    pub eta: f64,
    pub inner_minimizer: Vec<f64>,
    pub certificate: Option<Certificate>,
    /// Independent evaluation of the same quantity, when one exists.
    pub cross_check: Option<f64>,
    pub trace: Option<OptimizerTrace>,
}

impl BackwardErrorResult {
    fn plain(lambda: C64, eta: f64) -> Self {
        BackwardErrorResult {
            lambda,
            eta,
            inner_minimizer: Vec::new(),
            certificate: None,
            cross_check: None,
            trace: None,
        }
    }
}

fn not_admissible(lambda: C64, reason: impl Into<String>) -> Error {
    Error::LambdaNotAdmissible {
        lambda,
        reason: reason.into(),
    }
}

/// `L(λ)⁻¹` after the membership test.
fn resolvent(a: &ComplexMatrix, e: &ComplexMatrix, lambda: C64) -> Result<ComplexMatrix> {
    let l = pencil_at(a, e, lambda);
    let s = sigma_min(&l)?;
    if s <= K_MARGIN * scale_at(a, e, lambda) {
        return Err(not_admissible(
            lambda,
            format!("L(λ) is numerically singular (σ_min = {s:e})"),
        ));
    }
    Ok(inverse(&l)?)
}

/// `[I; λ̄I] X [I λI]`.
fn lift(x: &ComplexMatrix, lambda: C64) -> ComplexMatrix {
    ComplexMatrix::block2(
        x,
        &x.scale(lambda),
        &x.scale(lambda.conj()),
        &x.scale(lambda.norm_sqr().into()),
    )
}

fn inverse_of_minimum(
    opt: Result<crate::optimize::Optimum>,
    factor: f64,
    lambda: C64,
) -> Result<BackwardErrorResult> {
    match opt {
        Ok(o) => {
            let eta = if o.value > 0.0 {
                (factor / o.value).sqrt()
            } else {
                f64::INFINITY
            };
            Ok(BackwardErrorResult {
                lambda,
                eta,
                inner_minimizer: o.point,
                certificate: None,
                cross_check: None,
                trace: Some(o.trace),
            })
        }
        Err(Error::Unbounded) => Ok(BackwardErrorResult::plain(lambda, f64::INFINITY)),
        Err(e) => Err(e),
    }
}

/// `η(A, E, λ) = λ_max(H)^{-1/2}` with a rank-one certificate.
pub fn eta_unstructured(
    a: &ComplexMatrix,
    e: &ComplexMatrix,
    lambda: C64,
) -> Result<BackwardErrorResult> {
    let m = resolvent(a, e, lambda)?;
    let h = lift(&m.gram(), lambda);
    let eta = 1.0 / hermitian_eig(&h.hermitian_part())?.max().sqrt();

    let d = svd(&pencil_at(a, e, lambda))?;
    let k = d.s.len() - 1;
    let sigma = d.s[k];
    let denom = 1.0 + lambda.norm_sqr();
    let base = ComplexMatrix::outer(&d.u.column(k), &d.v.column(k)).scale_real(sigma / denom);
    let certificate = Certificate {
        delta_e: base.scale(lambda.conj()),
        delta_a: base,
    };
    Ok(BackwardErrorResult {
        lambda,
        eta,
        inner_minimizer: Vec::new(),
        certificate: Some(certificate),
        cross_check: Some(sigma / denom.sqrt()),
        trace: None,
    })
}

/// Hermitian backward error: `η² = 1 / min_{t₀,t₁} λ_max(G + t₀H₁ + t₁H₂)`.
pub fn eta_hermitian(
    a: &ComplexMatrix,
    e: &ComplexMatrix,
    lambda: C64,
) -> Result<BackwardErrorResult> {
    if lambda.im == 0.0 {
        return Err(not_admissible(lambda, "λ must be non-real"));
    }
    let (g, h1, h2) = hermitian_blocks(&resolvent(a, e, lambda)?, lambda);
    let fam = AffineHermitianFamily::new(g, vec![h1, h2])?;
    inverse_of_minimum(
        minimize_lambda_max_affine(
            &fam,
            &[Domain::Free, Domain::Free],
            &MinMaxOptions::default(),
        ),
        1.0,
        lambda,
    )
}

/// `(G, H₁, H₂)` for the Hermitian backward error at `λ` with `M = L(λ)⁻¹`.
pub fn hermitian_blocks(
    m: &ComplexMatrix,
    lambda: C64,
) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let n = m.rows();
    let ms = m.adjoint();
    let z = ComplexMatrix::zeros(n, n);
    let g = lift(&m.gram(), lambda);
    let h1 =
        ComplexMatrix::block2(&(m - &ms), &m.scale(lambda), &ms.scale(-lambda.conj()), &z).scale(I);
    let h2 = ComplexMatrix::block2(
        &z,
        &ms.scale_real(-1.0),
        m,
        &(&m.scale(lambda) - &ms.scale(lambda.conj())),
    )
    .scale(I);
    (g, h1, h2)
}

/// Reduction of skew-Hermitian, `*`-even and `*`-odd pencils to a Hermitian one.
pub fn related_to_hermitian(
    a: &ComplexMatrix,
    e: &ComplexMatrix,
    lambda: C64,
    tag: StructureTag,
) -> Result<(ComplexMatrix, ComplexMatrix, C64)> {
    let mi = C64::new(0.0, -1.0);
    Ok(match tag {
        StructureTag::SkewHermitian => (a.scale(I), e.scale(I), lambda),
        StructureTag::StarEven => (a.clone(), e.scale(I), lambda * mi),
        // i(A + λE) = iA + (-iλ)(-E).
        StructureTag::StarOdd => (a.scale(I), e.scale_real(-1.0), lambda * mi),
        other => return Err(Error::UnsupportedTag(other)),
    })
}

pub fn eta_related(
    a: &ComplexMatrix,
    e: &ComplexMatrix,
    lambda: C64,
    tag: StructureTag,
) -> Result<BackwardErrorResult> {
    let (ha, he, mu) = related_to_hermitian(a, e, lambda, tag)?;
    let mut r = eta_hermitian(&ha, &he, mu).map_err(|err| match err {
        Error::LambdaNotAdmissible { reason, .. } => not_admissible(lambda, reason),
        other => other,
    })?;
    r.lambda = lambda;
    Ok(r)
}

/// `(G, C, Γ⁻¹)` blocks for the palindromic backward error.
pub fn palindromic_blocks(
    m: &ComplexMatrix,
    lambda: C64,
    star: Star,
) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let n = m.rows();
    let r = lambda.norm();
    let ms = star.apply(m);
    let z = ComplexMatrix::zeros(n, n);
    let c = ComplexMatrix::block2(&ms, &z, &(&ms.scale(lambda.conj()) - m), &m.scale(-lambda));
    let g1 = (1.0 + r).sqrt();
    let g2 = ((1.0 + r) / r).sqrt();
    let mut diag = vec![C64::new(g1, 0.0); n];
    diag.extend(std::iter::repeat_n(C64::new(g2, 0.0), n));
    let gi = ComplexMatrix::from_diag(&diag);
    let g = gi.matmul(&lift(&m.gram(), lambda)).matmul(&gi);
    (g, c, gi)
}

pub fn eta_palindromic(a: &ComplexMatrix, lambda: C64, star: Star) -> Result<BackwardErrorResult> {
    if lambda.norm() == 0.0 {
        return Err(not_admissible(
            lambda,
            "λ = 0 is outside the scaling domain",
        ));
    }
    let e = star.apply(a);
    let m = resolvent(a, &e, lambda)?;
    let (g, c, gi) = palindromic_blocks(&m, lambda, star);
    let g = g.hermitian_part();
    match star {
        Star::Adjoint => {
            let ca = c.adjoint();
            let h1 = gi.matmul(&(&c + &ca)).matmul(&gi);
            let h2 = gi.matmul(&(&c - &ca)).matmul(&gi).scale(I);
            let fam = AffineHermitianFamily::new(g, vec![h1, h2])?;
            inverse_of_minimum(
                minimize_lambda_max_affine(
                    &fam,
                    &[Domain::Free, Domain::Free],
                    &MinMaxOptions::default(),
                ),
                2.0,
                lambda,
            )
        }
        Star::Transpose => {
            let s = gi.matmul(&(&c + &c.transpose())).matmul(&gi);
            let opt =
                minimize_lambda2_coupled(&g, &s, &Lambda2Options::default()).map_err(Error::from);
            inverse_of_minimum(opt, 2.0, lambda)
        }
    }
}

/// Backward error at one point for the pencil's own structure.
pub fn eta_for(pencil: &StructuredPencil, lambda: C64) -> Result<BackwardErrorResult> {
    match pencil.tag {
        StructureTag::Unstructured => eta_unstructured(&pencil.a, &pencil.e, lambda),
        StructureTag::Hermitian => eta_hermitian(&pencil.a, &pencil.e, lambda),
        StructureTag::SkewHermitian | StructureTag::StarEven | StructureTag::StarOdd => {
            eta_related(&pencil.a, &pencil.e, lambda, pencil.tag)
        }
        StructureTag::StarPalindromic | StructureTag::TPalindromic => {
            eta_palindromic(&pencil.a, lambda, pencil.tag.star().expect("palindromic"))
        }
        StructureTag::DissipativeHamiltonian => Err(Error::UnsupportedTag(pencil.tag)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointBound {
    pub lambda: C64,
    #[serde(with = "crate::model::real")]
    pub eta: f64,
    /// Why the point was skipped, if it was.
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    #[serde(with = "crate::model::real")]
    pub value: f64,
    pub points: Vec<PointBound>,
}

fn collect(lambdas: &[C64], evals: Vec<Result<f64>>) -> Result<LowerBound> {
    let mut value = 0.0_f64;
    let mut points = Vec::with_capacity(lambdas.len());
    for (&lambda, r) in lambdas.iter().zip(evals) {
        match r {
            Ok(eta) => {
                value = value.max(eta);
                points.push(PointBound {
                    lambda,
                    eta,
                    skipped: None,
                });
            }
            Err(e @ Error::LambdaNotAdmissible { .. }) => points.push(PointBound {
                lambda,
                eta: f64::NAN,
                skipped: Some(e.to_string()),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(LowerBound { value, points })
}

/// `max_i η^S(A, E, λ_i)` over the family, for the pencil's structure.
pub fn delta_lower_bound(pencil: &StructuredPencil, family: &LambdaFamily) -> Result<LowerBound> {
    let violations = pencil.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidStructure(violations));
    }
    if pencil.tag == StructureTag::DissipativeHamiltonian {
        return Err(Error::UnsupportedTag(pencil.tag));
    }
    let evals = par::map_range(family.len(), |i| {
        eta_for(pencil, family.points[i]).map(|r| r.eta)
    });
    collect(&family.points, evals)
}

/// Which coefficient of the pencil is perturbed in a one-sided bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    A,
    E,
}

fn one_sided(
    pencil: &StructuredPencil,
    family: &LambdaFamily,
    tag: StructureTag,
    side: Side,
) -> Result<LowerBound> {
    let (a, e) = (&pencil.a, &pencil.e);
    match tag {
        StructureTag::Unstructured => {}
        StructureTag::Hermitian => {
            let violations = StructuredPencil::new(a.clone(), e.clone(), tag).validate();
            if !violations.is_empty() {
                return Err(Error::InvalidStructure(violations));
            }
            if side == Side::E && sigma_min(a)? > K_MARGIN * (1.0 + a.norm2()) {
                let points = family
                    .points
                    .iter()
                    .map(|&lambda| PointBound {
                        lambda,
                        eta: f64::INFINITY,
                        skipped: None,
                    })
                    .collect();
                return Ok(LowerBound {
                    value: f64::INFINITY,
                    points,
                });
            }
        }
        other => return Err(Error::UnsupportedTag(other)),
    }
    let eval = |lambda: C64| -> Result<f64> {
        let m = resolvent(a, e, lambda)?;
        let weight = match side {
            Side::A => 1.0,
            Side::E => lambda.norm_sqr(),
        };
        if weight == 0.0 {
            return Err(not_admissible(lambda, "λ = 0 cannot move E"));
        }
        let g = m.gram().scale_real(weight);
        if tag == StructureTag::Unstructured {
            return Ok(1.0 / hermitian_eig(&g.hermitian_part())?.max().sqrt());
        }
        if lambda.im == 0.0 {
            return Err(not_admissible(lambda, "λ must be non-real"));
        }
        let ms = m.adjoint();
        let h = match side {
            Side::A => (&m - &ms).scale(I),
            Side::E => (&m.scale(lambda) - &ms.scale(lambda.conj())).scale(I),
        };
        let fam = AffineHermitianFamily::new(g.hermitian_part(), vec![h.hermitian_part()])?;
        Ok(inverse_of_minimum(
            minimize_lambda_max_affine(&fam, &[Domain::Free], &MinMaxOptions::default()),
            1.0,
            lambda,
        )?
        .eta)
    };
    let evals = par::map_range(family.len(), |i| eval(family.points[i]));
    collect(&family.points, evals)
}

/// Lower bound on the distance when only `A` is perturbed.
pub fn delta_a_lower(
    pencil: &StructuredPencil,
    family: &LambdaFamily,
    tag: StructureTag,
) -> Result<LowerBound> {
    one_sided(pencil, family, tag, Side::A)
}

/// Lower bound on the distance when only `E` is perturbed; `∞` for Hermitian
/// pencils with invertible `A`.
pub fn delta_e_lower(
    pencil: &StructuredPencil,
    family: &LambdaFamily,
    tag: StructureTag,
) -> Result<LowerBound> {
    one_sided(pencil, family, tag, Side::E)
}
