//! Structured distances to a common null space for DH pencils `sE + (J - R)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    cholesky, congruence_inverse, hermitian_eig, kernel_intersection, null_space_basis,
    solve_lower_adjoint, vector, ComplexMatrix, C64, DEFAULT_RANK_TOL,
};
use crate::mapping::{nsd_map, skew_hermitian_map};
use crate::model::{DhTriple, DistanceReport, Perturbation, Sign};
use crate::nullspace::{rank_one, smallest_right_singular};
use crate::optimize::{minimize_sphere_multistart, OptimizerTrace, SphereOptions, TraceFlag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DhKind {
    J,
    R,
    E,
    JR,
    JE,
    RE,
    JRE,
    Unstructured,
}

impl DhKind {
    pub const ALL: [DhKind; 8] = [
        DhKind::J,
        DhKind::R,
        DhKind::E,
        DhKind::JR,
        DhKind::JE,
        DhKind::RE,
        DhKind::JRE,
        DhKind::Unstructured,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DhKind::J => "j",
            DhKind::R => "r",
            DhKind::E => "e",
            DhKind::JR => "jr",
            DhKind::JE => "je",
            DhKind::RE => "re",
            DhKind::JRE => "jre",
            DhKind::Unstructured => "unstructured",
        }
    }

    /// Which of `(J, R, E)` are perturbed.
    pub fn perturbed(self) -> [bool; 3] {
        match self {
            DhKind::J => [true, false, false],
            DhKind::R => [false, true, false],
            DhKind::E => [false, false, true],
            DhKind::JR => [true, true, false],
            DhKind::JE => [true, false, true],
            DhKind::RE => [false, true, true],
            DhKind::JRE | DhKind::Unstructured => [true, true, true],
        }
    }
}

impl fmt::Display for DhKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DhKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        DhKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == lower)
            .ok_or_else(|| format!("unknown DH kind `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct DhOptions {
    pub rank_tol: f64,
    pub sphere: SphereOptions,
    /// `α*Xα ≤ guard · ‖α‖² ‖X‖` counts as `α ∈ ker X`.
    pub guard: f64,
    /// Relative margin below which an optimum is flagged as near a kernel.
    pub boundary_margin: f64,
}

impl Default for DhOptions {
    fn default() -> Self {
        DhOptions {
            rank_tol: DEFAULT_RANK_TOL,
            sphere: SphereOptions::default(),
            guard: 1e-12,
            boundary_margin: 1e-6,
        }
    }
}

pub fn dh_delta0(t: &DhTriple, kind: DhKind) -> Result<DistanceReport> {
    dh_delta0_with(t, kind, &DhOptions::default())
}

pub fn dh_delta0_with(t: &DhTriple, kind: DhKind, opts: &DhOptions) -> Result<DistanceReport> {
    let violations = t.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidStructure(violations));
    }
    let ctx = Ctx::new(t, opts);
    let cand = match kind {
        DhKind::Unstructured => return ctx.unstructured(),
        DhKind::J => ctx.only_j()?,
        DhKind::R => ctx.only_semidefinite(Which::R)?,
        DhKind::E => ctx.only_semidefinite(Which::E)?,
        DhKind::JR => ctx.j_and(Which::R)?,
        DhKind::JE => ctx.j_and(Which::E)?,
        DhKind::RE => ctx.r_and_e()?,
        DhKind::JRE => ctx.jre()?,
    };
    ctx.report(kind, cand)
}

/// `sqrt(‖Δ_J‖_F² + ‖Δ_R‖_F² + ‖Δ_E‖_F²)` of a finite report.
pub fn dh_frobenius_norm_of_optimum(report: &DistanceReport) -> Result<f64> {
    if !report.is_finite() || report.perturbations.is_empty() {
        return Err(Error::MissingPerturbations);
    }
    Ok(report.combined_frobenius())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    R,
    E,
}

/// A minimizing direction: squared value, unit witness, and provenance.
#[derive(Clone, Debug)]
struct Candidate {
    value_sq: f64,
    x: Vec<C64>,
    trace: Option<OptimizerTrace>,
    cross_check: Option<f64>,
}

impl Candidate {
    fn infinite() -> Self {
        Candidate {
            value_sq: f64::INFINITY,
            x: Vec::new(),
            trace: None,
            cross_check: None,
        }
    }

    fn pick(cands: Vec<Candidate>) -> Candidate {
        let mut best = Candidate::infinite();
        for c in cands {
            if c.value_sq < best.value_sq {
                best = c;
            }
        }
        best
    }
}

struct Ctx<'a> {
    t: &'a DhTriple,
    opts: &'a DhOptions,
    jj: ComplexMatrix,
    r2: ComplexMatrix,
    e2: ComplexMatrix,
    nr: f64,
    ne: f64,
}

fn quad(m: &ComplexMatrix, x: &[C64]) -> f64 {
    vector::dot(x, &m.mul_vec(x)).re
}

impl<'a> Ctx<'a> {
    fn new(t: &'a DhTriple, opts: &'a DhOptions) -> Self {
        Ctx {
            t,
            opts,
            jj: t.j.gram(),
            r2: t.r.gram(),
            e2: t.e.gram(),
            nr: t.r.norm2(),
            ne: t.e.norm2(),
        }
    }

    fn mat(&self, w: Which) -> (&ComplexMatrix, &ComplexMatrix, f64) {
        match w {
            Which::R => (&self.t.r, &self.r2, self.nr),
            Which::E => (&self.t.e, &self.e2, self.ne),
        }
    }

    fn kernel(&self, ms: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
        Ok(kernel_intersection(ms, self.opts.rank_tol)?)
    }

    /// `(α*X²α / α*Xα)²`, or `None` when `α` is (numerically) in `ker X`.
    fn gen_rayleigh_sq(&self, w: Which, a: &[C64]) -> Option<f64> {
        let (x, x2, nx) = self.mat(w);
        let aa = vector::norm_sqr(a);
        let num = quad(x2, a);
        let den = quad(x, a);
        if den <= self.opts.guard * aa * nx {
            return None;
        }
        Some((num / den).powi(2))
    }

    fn j_term(&self, a: &[C64]) -> f64 {
        quad(&self.jj, a) / vector::norm_sqr(a)
    }

    fn seeds(&self) -> Vec<Vec<C64>> {
        let mut out = Vec::new();
        for m in [&self.jj, &self.t.r, &self.t.e] {
            if let Ok(e) = hermitian_eig(m) {
                for k in 0..e.values.len() {
                    out.push(e.vector(k));
                }
            }
        }
        out
    }

    fn minimize<F>(&self, f: F, basis: &ComplexMatrix, guards: &[Which]) -> Result<Candidate>
    where
        F: Fn(&[C64]) -> Option<f64> + Sync,
    {
        match minimize_sphere_multistart(&f, basis, &self.seeds(), &self.opts.sphere) {
            Ok(o) => {
                let mut trace = o.trace;
                for &w in guards {
                    let (x, _, nx) = self.mat(w);
                    if quad(x, &o.vector) <= self.opts.boundary_margin * nx {
                        trace.flag(TraceFlag::BoundaryApproach);
                    }
                }
                Ok(Candidate {
                    value_sq: o.value,
                    x: o.vector,
                    trace: Some(trace),
                    cross_check: None,
                })
            }
            Err(Error::NoFeasibleStart) => Ok(Candidate::infinite()),
            Err(e) => Err(e),
        }
    }

    fn unstructured(&self) -> Result<DistanceReport> {
        let stacked = ComplexMatrix::vstack(&[&self.t.j, &self.t.r, &self.t.e]);
        let (value, v) = smallest_right_singular(&stacked)?;
        let neg = |m: &ComplexMatrix| rank_one(m, &v).scale_real(-1.0);
        Ok(DistanceReport::new(
            value,
            vec![
                Perturbation::new("J", Sign::Add, neg(&self.t.j)),
                Perturbation::new("R", Sign::Add, neg(&self.t.r)),
                Perturbation::new("E", Sign::Add, neg(&self.t.e)),
            ],
            v,
        ))
    }

    /// `δ₀(J)² = σ_min(J U)²` over `U = ker R ∩ ker E`.
    fn only_j(&self) -> Result<Candidate> {
        let u = self.kernel(&[&self.t.r, &self.t.e])?;
        if u.cols() == 0 {
            return Ok(Candidate::infinite());
        }
        let (s, c) = smallest_right_singular(&self.t.j.matmul(&u))?;
        Ok(Candidate {
            value_sq: s * s,
            x: u.mul_vec(&c),
            trace: None,
            cross_check: None,
        })
    }

    /// `δ₀(X)² = λ_min(L⁻* U*X²U L⁻¹)²` over `U = ker J ∩ ker Y`, `L L* = U*XU`.
    fn only_semidefinite(&self, w: Which) -> Result<Candidate> {
        let other = match w {
            Which::R => &self.t.e,
            Which::E => &self.t.r,
        };
        let u = self.kernel(&[&self.t.j, other])?;
        if u.cols() == 0 {
            return Ok(Candidate::infinite());
        }
        let (x, x2, _) = self.mat(w);
        let ux = u.adjoint().matmul(x).matmul(&u);
        let l = match cholesky(&ux.hermitian_part()) {
            Ok(l) => l,
            Err(_) => {
                // Some direction of Ω already lies in ker X.
                let k = null_space_basis(&x.matmul(&u), self.opts.rank_tol)?;
                let c = if k.cols() > 0 {
                    k.column(0)
                } else {
                    smallest_right_singular(&x.matmul(&u))?.1
                };
                return Ok(Candidate {
                    value_sq: 0.0,
                    x: u.mul_vec(&c),
                    trace: None,
                    cross_check: Some(0.0),
                });
            }
        };
        let m = congruence_inverse(&l, &u.adjoint().matmul(x2).matmul(&u));
        let e = hermitian_eig(&m.hermitian_part())?;
        let lam = e.min();
        // Generalized eigenvector α = U L⁻* w.
        let wv = ComplexMatrix::from_columns(e.values.len(), &[e.vector(0)]);
        let beta = solve_lower_adjoint(&l, &wv).column(0);
        let alpha = vector::normalized(&u.mul_vec(&beta))?;
        let direct = self.minimize(|a| self.gen_rayleigh_sq(w, a), &u, &[w])?;
        Ok(Candidate {
            value_sq: lam * lam,
            x: alpha,
            trace: direct.trace,
            cross_check: Some(direct.value_sq),
        })
    }

    /// `δ₀(J, X)² = min{δ₀(J)², inf_{α ∈ ker Y} ‖Jα‖² + (α*X²α/α*Xα)²}`.
    fn j_and(&self, w: Which) -> Result<Candidate> {
        let other = match w {
            Which::R => &self.t.e,
            Which::E => &self.t.r,
        };
        let u = self.kernel(&[other])?;
        if u.cols() == 0 {
            return Ok(Candidate::infinite());
        }
        let j_only = self.only_j()?;
        let inner = self.minimize(
            |a| self.gen_rayleigh_sq(w, a).map(|g| self.j_term(a) + g),
            &u,
            &[w],
        )?;
        Ok(Candidate::pick(vec![j_only, inner]))
    }

    /// `δ₀(R, E)² = min{δ₀(R)², δ₀(E)², inf_{α ∈ ker J} g_α}`.
    fn r_and_e(&self) -> Result<Candidate> {
        let u = self.kernel(&[&self.t.j])?;
        if u.cols() == 0 {
            return Ok(Candidate::infinite());
        }
        let r = self.only_semidefinite(Which::R)?;
        let e = self.only_semidefinite(Which::E)?;
        let inner = self.minimize(
            |a| Some(self.gen_rayleigh_sq(Which::R, a)? + self.gen_rayleigh_sq(Which::E, a)?),
            &u,
            &[Which::R, Which::E],
        )?;
        Ok(Candidate::pick(vec![r, e, inner]))
    }

    fn jre(&self) -> Result<Candidate> {
        let jr = self.j_and(Which::R)?;
        let je = self.j_and(Which::E)?;
        let n = self.t.n();
        let inner = self.minimize(
            |a| {
                Some(
                    self.j_term(a)
                        + self.gen_rayleigh_sq(Which::R, a)?
                        + self.gen_rayleigh_sq(Which::E, a)?,
                )
            },
            &ComplexMatrix::identity(n),
            &[Which::R, Which::E],
        )?;
        Ok(Candidate::pick(vec![jr, je, inner]))
    }

    fn report(&self, kind: DhKind, c: Candidate) -> Result<DistanceReport> {
        if !c.value_sq.is_finite() {
            return Ok(DistanceReport::infinite());
        }
        let mut x = vector::normalized(&c.x)?;
        vector::fix_phase(&mut x);
        let [pj, pr, pe] = kind.perturbed();
        let mut perturbations = Vec::new();
        if pj {
            let jx = self.t.j.mul_vec(&x);
            let y = vector::scale_real(&jx, -1.0);
            // Remove the rounding-level real part of x*Jx.
            let xy = vector::dot(&x, &y);
            let y = vector::axpy(&y, C64::new(-xy.re, 0.0), &x);
            perturbations.push(Perturbation::new(
                "J",
                Sign::Add,
                skew_hermitian_map(&x, &y)?,
            ));
        }
        for (flag, name, m) in [(pr, "R", &self.t.r), (pe, "E", &self.t.e)] {
            if !flag {
                continue;
            }
            let mx = m.mul_vec(&x);
            let xmx = vector::dot(&x, &mx).re;
            let d = if xmx <= self.opts.guard * m.norm2().max(f64::MIN_POSITIVE)
                || vector::norm(&mx) == 0.0
            {
                ComplexMatrix::zeros(x.len(), x.len())
            } else {
                nsd_map(&x, &vector::scale_real(&mx, -1.0))?
            };
            perturbations.push(Perturbation::new(name, Sign::Add, d));
        }
        let value = c.value_sq.max(0.0).sqrt();
        let mut r = DistanceReport::new(value, perturbations, x);
        if let Some(cc) = c.cross_check {
            r = r.with_detail("cross_check", cc.max(0.0).sqrt());
        }
        if let Some(tr) = c.trace {
            r = r.with_trace(tr);
        }
        Ok(r)
    }
}
