//! Maximization of `λ_min` over an affine Hermitian family on a box.

use std::cell::Cell;

use rand::Rng;

use super::{
    golden_section_max, lex_less, nelder_mead, AffineHermitianFamily, NelderMeadOptions,
    OptimizerTrace, Optimum, TraceFlag,
};
use crate::par;
use crate::random::seeded;

#[derive(Clone, Debug)]
pub struct BoxOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Stop sweeping once a round improves by less than this.
    pub sweep_tol: f64,
    pub max_rounds: usize,
    /// Eigenvalue gap below which `λ_min` is reported as multiple.
    pub multiplicity_tol: f64,
}

impl Default for BoxOptions {
    fn default() -> Self {
        BoxOptions {
            restarts: 8,
            seed: 0,
            sweep_tol: 1e-10,
            max_rounds: 60,
            multiplicity_tol: 1e-8,
        }
    }
}

/// Global maximum of the concave map `t ↦ λ_min(H(t))` over `lo ≤ t ≤ hi`.
///
/// Coordinate ascent with golden-section slices, alternated with a projected
/// Nelder-Mead polish that can move along kinks. Restarts run in parallel and
/// the best result wins (ties go to the lexicographically smaller point).
pub fn maximize_lambda_min_box(
    family: &AffineHermitianFamily,
    lo: &[f64],
    hi: &[f64],
    opts: &BoxOptions,
) -> Optimum {
    let k = family.dim();
    assert_eq!(lo.len(), k, "box dimension");
    assert_eq!(hi.len(), k, "box dimension");
    if k == 0 {
        let v = family.lambda_min(&[]);
        let mut trace = OptimizerTrace::new(1, Vec::new(), v);
        flag_multiplicity(family, &[], opts, &mut trace);
        return Optimum {
            point: Vec::new(),
            value: v,
            trace,
        };
    }
    let mut rng = seeded(opts.seed);
    let starts: Vec<Vec<f64>> = (0..opts.restarts.max(1))
        .map(|s| {
            (0..k)
                .map(|i| {
                    if s == 0 {
                        0.5 * (lo[i] + hi[i])
                    } else {
                        lo[i] + (hi[i] - lo[i]) * rng.random::<f64>()
                    }
                })
                .collect()
        })
        .collect();

    let runs = par::map_range(starts.len(), |s| ascend(family, lo, hi, &starts[s], opts));
    let mut evaluations = 0;
    let mut best: Option<(Vec<f64>, f64)> = None;
    for (x, v, n) in runs {
        evaluations += n;
        let better = match &best {
            None => true,
            Some((bx, bv)) => v > *bv || (v == *bv && lex_less(&x, bx)),
        };
        if better {
            best = Some((x, v));
        }
    }
    let (point, value) = best.expect("at least one start");
    let mut trace = OptimizerTrace::new(evaluations, point.clone(), value);
    flag_multiplicity(family, &point, opts, &mut trace);
    Optimum {
        point,
        value,
        trace,
    }
}

fn flag_multiplicity(
    family: &AffineHermitianFamily,
    t: &[f64],
    opts: &BoxOptions,
    trace: &mut OptimizerTrace,
) {
    let ev = family.eigenvalues(t);
    if ev.len() > 1 && ev[1] - ev[0] <= opts.multiplicity_tol * (1.0 + ev[0].abs()) {
        trace.flag(TraceFlag::Multiplicity);
    }
}

fn ascend(
    family: &AffineHermitianFamily,
    lo: &[f64],
    hi: &[f64],
    x0: &[f64],
    opts: &BoxOptions,
) -> (Vec<f64>, f64, usize) {
    let count = Cell::new(0usize);
    let f = |t: &[f64]| {
        count.set(count.get() + 1);
        family.lambda_min(t)
    };
    let k = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let nm_opts = NelderMeadOptions {
        ftol: 1e-13,
        xtol: 1e-11,
        max_evals: 600 * (k + 1),
    };
    for _ in 0..opts.max_rounds {
        let start = fx;
        for i in 0..k {
            let (xi, v, _) = golden_section_max(
                |s| {
                    let mut y = x.clone();
                    y[i] = s;
                    f(&y)
                },
                lo[i],
                hi[i],
                super::GOLDEN_TOL,
                super::GOLDEN_MAX_ITER,
            );
            if v > fx {
                x[i] = xi;
                fx = v;
            }
        }
        if k > 1 {
            let step: Vec<f64> = (0..k).map(|i| 0.05 * (hi[i] - lo[i]).max(1e-12)).collect();
            let (y, v, _) = nelder_mead(
                |t| -f(t),
                &x,
                &step,
                &nm_opts,
                |t| {
                    for i in 0..k {
                        t[i] = t[i].clamp(lo[i], hi[i]);
                    }
                },
            );
            if -v > fx {
                x = y;
                fx = -v;
            }
        }
        if fx - start <= opts.sweep_tol * (1.0 + fx.abs()) {
            break;
        }
    }
    (x, fx, count.get())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;

    #[test]
    fn constant_family() {
        let f =
            AffineHermitianFamily::new(ComplexMatrix::from_real_diag(&[2.0, 3.0]), vec![]).unwrap();
        let o = maximize_lambda_min_box(&f, &[], &[], &BoxOptions::default());
        assert_eq!(o.value, 2.0);
    }

    #[test]
    fn piecewise_linear() {
        let f = AffineHermitianFamily::new(
            ComplexMatrix::from_real_diag(&[0.0, 2.0]),
            vec![ComplexMatrix::from_real_diag(&[1.0, -1.0])],
        )
        .unwrap();
        let o = maximize_lambda_min_box(&f, &[0.0], &[1.0], &BoxOptions::default());
        assert!((o.value - 1.0).abs() < 1e-9);
        assert!((o.point[0] - 1.0).abs() < 1e-6);
        assert!(o.trace.has(TraceFlag::Multiplicity));
    }

    #[test]
    fn deterministic() {
        let mut rng = crate::test_util::rng(8);
        let f = AffineHermitianFamily::new(
            crate::test_util::random_hermitian(&mut rng, 4),
            vec![
                crate::test_util::random_hermitian(&mut rng, 4),
                crate::test_util::random_hermitian(&mut rng, 4),
            ],
        )
        .unwrap();
        let a = maximize_lambda_min_box(&f, &[0.0, 0.0], &[1.0, 1.0], &BoxOptions::default());
        let b = maximize_lambda_min_box(&f, &[0.0, 0.0], &[1.0, 1.0], &BoxOptions::default());
        assert_eq!(a, b);
    }
}
