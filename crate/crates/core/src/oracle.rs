//! Brute-force verifiers: sampled upper bounds, residual checks, singularity probes.

use serde::{Deserialize, Serialize};

use crate::dh::DhKind;
use crate::error::Result;
use crate::linalg::{kernel_intersection, sigma_min, vector, ComplexMatrix, C64, DEFAULT_RANK_TOL};
use crate::model::{DhTriple, MatrixPolynomial, Star, StructuredPencil};
use crate::par;
use crate::random::{random_unit_vector, seeded};

/// Problem whose per-direction minimal perturbation cost is sampled.
#[derive(Clone, Copy, Debug)]
pub enum OracleProblem<'a> {
    Pencil(&'a StructuredPencil),
    Dh(&'a DhTriple, DhKind),
    Poly(&'a MatrixPolynomial),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    #[serde(with = "crate::model::real")]
    pub value: f64,
    pub witness: Option<Vec<C64>>,
    pub samples: usize,
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub trials: usize,
    pub seed: u64,
    /// Best samples refined by a (1+1) evolution strategy.
    pub polish: usize,
    pub polish_steps: usize,
    /// Extra directions evaluated alongside the random ones.
    pub inject: Vec<Vec<C64>>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            trials: 100_000,
            seed: 0,
            polish: 32,
            polish_steps: 4000,
            inject: Vec::new(),
        }
    }
}

const CHUNK: usize = 4096;

/// `(Rv)*(Rv) / v*Rv`, the smallest norm of `Δ ⪯ 0` with `Δv = -Rv`.
fn nsd_cost(m: &ComplexMatrix, v: &[C64]) -> f64 {
    let mv = m.mul_vec(v);
    let q = vector::dot(v, &mv).re;
    if q <= 0.0 {
        return 0.0;
    }
    vector::norm_sqr(&mv) / q
}

type Cost<'a> = Box<dyn Fn(&[C64]) -> f64 + Sync + 'a>;

/// Sampling subspaces (columns) with the unit-vector cost on each. The first
/// piece is the generic one; later pieces are kernels of semidefinite
/// coefficients, where their cost term drops to zero.
fn setup<'a>(problem: OracleProblem<'a>) -> Result<Vec<(ComplexMatrix, Cost<'a>)>> {
    Ok(match problem {
        OracleProblem::Pencil(p) => {
            let n = p.n();
            let cost: Cost<'a> = match p.tag.star() {
                Some(star) => {
                    let astar = star.apply(&p.a);
                    Box::new(move |v| {
                        let x = vector::norm(&p.a.mul_vec(v));
                        let y = vector::norm(&astar.mul_vec(v));
                        std::f64::consts::SQRT_2 * x.max(y)
                    })
                }
                None => Box::new(move |v| {
                    (vector::norm_sqr(&p.a.mul_vec(v)) + vector::norm_sqr(&p.e.mul_vec(v))).sqrt()
                }),
            };
            vec![(ComplexMatrix::identity(n), cost)]
        }
        OracleProblem::Dh(t, kind) => {
            let n = t.n();
            if kind == DhKind::Unstructured {
                let cost: Cost<'a> = Box::new(move |v| {
                    (vector::norm_sqr(&t.j.mul_vec(v))
                        + vector::norm_sqr(&t.r.mul_vec(v))
                        + vector::norm_sqr(&t.e.mul_vec(v)))
                    .sqrt()
                });
                return Ok(vec![(ComplexMatrix::identity(n), cost)]);
            }
            let [pj, pr, pe] = kind.perturbed();
            let mut pieces = Vec::new();
            // Bit 0 drops R into the kernel constraint, bit 1 drops E.
            for mask in 0..4u8 {
                let (kr, ke) = (mask & 1 != 0, mask & 2 != 0);
                if (kr && !pr) || (ke && !pe) {
                    continue;
                }
                let mut fixed = Vec::new();
                for (constrained, m) in [(!pj, &t.j), (!pr || kr, &t.r), (!pe || ke, &t.e)] {
                    if constrained {
                        fixed.push(m);
                    }
                }
                let basis = if fixed.is_empty() {
                    ComplexMatrix::identity(n)
                } else {
                    kernel_intersection(&fixed, DEFAULT_RANK_TOL)?
                };
                if mask > 0 && basis.cols() == 0 {
                    continue;
                }
                let (cr, ce) = (pr && !kr, pe && !ke);
                let cost: Cost<'a> = Box::new(move |v| {
                    let mut c = 0.0;
                    if pj {
                        c += vector::norm_sqr(&t.j.mul_vec(v));
                    }
                    if cr {
                        c += nsd_cost(&t.r, v).powi(2);
                    }
                    if ce {
                        c += nsd_cost(&t.e, v).powi(2);
                    }
                    c.sqrt()
                });
                pieces.push((basis, cost));
            }
            pieces
        }
        OracleProblem::Poly(p) => {
            let n = p.n();
            let cost: Cost<'a> = match p.tag.star() {
                Some(star) => Box::new(move |v| palindromic_poly_cost(p, star, v)),
                None => Box::new(move |v| {
                    p.coeffs
                        .iter()
                        .map(|a| vector::norm_sqr(&a.mul_vec(v)))
                        .sum::<f64>()
                        .sqrt()
                }),
            };
            vec![(ComplexMatrix::identity(n), cost)]
        }
    })
}

fn palindromic_poly_cost(p: &MatrixPolynomial, star: Star, v: &[C64]) -> f64 {
    let m = p.degree();
    let mut c = 0.0;
    for a in &p.coeffs[..m.div_ceil(2)] {
        let x = vector::norm_sqr(&a.mul_vec(v));
        let y = vector::norm_sqr(&star.apply(a).mul_vec(v));
        c += 2.0 * x.max(y);
    }
    if m.is_multiple_of(2) {
        c += vector::norm_sqr(&p.coeffs[m / 2].mul_vec(v));
    }
    c.sqrt()
}

/// Minimum over sampled unit directions of the exact per-direction cost.
/// Always an upper bound on the corresponding distance.
pub fn sample_null_space_upper_bound(
    problem: OracleProblem<'_>,
    opts: &OracleOptions,
) -> Result<OracleEstimate> {
    // The semidefinite cost jumps to zero on the common kernel, which sampling never hits.
    if let OracleProblem::Dh(t, _) = problem {
        let common = kernel_intersection(&[&t.j, &t.r, &t.e], DEFAULT_RANK_TOL)?;
        if common.cols() > 0 {
            return Ok(OracleEstimate {
                value: 0.0,
                witness: Some(common.column(0)),
                samples: 0,
            });
        }
    }
    let mut out = OracleEstimate {
        value: f64::INFINITY,
        witness: None,
        samples: 0,
    };
    for (i, (basis, cost)) in setup(problem)?.iter().enumerate() {
        let inject: &[Vec<C64>] = if i == 0 { &opts.inject } else { &[] };
        let (value, witness) = sample_piece(basis, cost, inject, opts);
        out.samples += opts.trials + inject.len();
        if value < out.value {
            out.value = value;
            out.witness = witness;
        }
    }
    Ok(out)
}

fn sample_piece(
    basis: &ComplexMatrix,
    cost: &Cost<'_>,
    inject: &[Vec<C64>],
    opts: &OracleOptions,
) -> (f64, Option<Vec<C64>>) {
    let k = basis.cols();
    if k == 0 {
        return (f64::INFINITY, None);
    }
    let lift = |c: &[C64]| vector::normalized(&basis.mul_vec(c)).ok();
    let chunks = opts.trials.max(1).div_ceil(CHUNK);
    let per_chunk: Vec<Vec<(f64, Vec<C64>)>> = par::map_range(chunks, |ci| {
        let mut rng = seeded(opts.seed ^ (ci as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let count = CHUNK.min(opts.trials.max(1) - ci * CHUNK);
        let mut best: Vec<(f64, Vec<C64>)> = Vec::new();
        for _ in 0..count {
            let c = random_unit_vector(&mut rng, k);
            let Some(v) = lift(&c) else { continue };
            keep_best(&mut best, (cost(&v), c), opts.polish.max(1));
        }
        best
    });
    let mut best: Vec<(f64, Vec<C64>)> = Vec::new();
    for chunk in per_chunk {
        for item in chunk {
            keep_best(&mut best, item, opts.polish.max(1));
        }
    }
    let bh = basis.adjoint();
    for v in inject {
        if let Ok(u) = vector::normalized(v) {
            let c = bh.mul_vec(&u);
            keep_best(&mut best, (cost(&u), c), opts.polish.max(1) + inject.len());
        }
    }
    let polished = par::map_range(best.len(), |i| {
        let (mut fx, mut x) = best[i].clone();
        let mut rng = seeded(opts.seed.wrapping_add(1 + i as u64));
        let mut step = 0.3;
        for _ in 0..opts.polish_steps {
            let y: Vec<C64> = x
                .iter()
                .map(|z| z + crate::random::complex_normal(&mut rng) * step)
                .collect();
            let Some(v) = lift(&y) else { continue };
            let fy = cost(&v);
            if fy < fx {
                fx = fy;
                x = bh.mul_vec(&v);
                step *= 1.5;
            } else {
                step *= 0.9;
            }
            // Stalled on a ridge of the max-type costs: kick the step back up.
            if step < 1e-7 {
                step = 0.05;
            }
        }
        (fx, x)
    });
    let mut best_pair = (f64::INFINITY, Vec::new());
    for (f, c) in polished.into_iter().chain(best) {
        if f < best_pair.0 {
            best_pair = (f, c);
        }
    }
    let witness = if best_pair.0.is_finite() {
        lift(&best_pair.1)
    } else {
        None
    };
    (best_pair.0, witness)
}

fn keep_best(best: &mut Vec<(f64, Vec<C64>)>, item: (f64, Vec<C64>), cap: usize) {
    if item.0.is_nan() {
        return;
    }
    let pos = best.partition_point(|b| b.0 <= item.0);
    if pos < cap {
        best.insert(pos, item);
        best.truncate(cap);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommonNullCheck {
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// `max_M ‖M w‖` against `1e-7 (1 + max ‖M‖)`.
pub fn verify_common_null(perturbed: &[ComplexMatrix], witness: &[C64]) -> CommonNullCheck {
    let residual = perturbed
        .iter()
        .map(|m| vector::norm(&m.mul_vec(witness)))
        .fold(0.0, f64::max);
    let threshold = 1e-7 * (1.0 + perturbed.iter().map(|m| m.norm2()).fold(0.0, f64::max));
    CommonNullCheck {
        residual,
        threshold,
        pass: residual <= threshold,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeVerdict {
    SingularConsistent,
    Regular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub max_sigma_min: f64,
    pub points: Vec<C64>,
    pub verdict: ProbeVerdict,
}

/// Evaluates `σ_min(A + λE)` on `count ≥ n + 1` distinct points.
pub fn singularity_probe(
    a: &ComplexMatrix,
    e: &ComplexMatrix,
    count: usize,
) -> Result<ProbeResult> {
    let n = a.rows();
    let count = count.max(n + 1);
    let radius = 1.0 + a.norm2() / (1.0 + e.norm2());
    let points: Vec<C64> = (0..count)
        .map(|k| {
            C64::from_polar(
                radius * (1.0 + 0.1 * k as f64 / count as f64),
                0.7 + std::f64::consts::TAU * k as f64 / count as f64,
            )
        })
        .collect();
    let sig: Vec<Result<f64>> =
        par::map_range(count, |k| Ok(sigma_min(&(a + &e.scale(points[k])))?));
    let mut max_sigma_min = 0.0_f64;
    let mut singular = true;
    for (k, s) in sig.into_iter().enumerate() {
        let s = s?;
        max_sigma_min = max_sigma_min.max(s);
        let scale = 1.0 + a.norm2() + points[k].norm() * e.norm2();
        if s > 1e-8 * scale {
            singular = false;
        }
    }
    Ok(ProbeResult {
        max_sigma_min,
        points,
        verdict: if singular {
            ProbeVerdict::SingularConsistent
        } else {
            ProbeVerdict::Regular
        },
    })
}
