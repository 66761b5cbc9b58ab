//! Minimization of `λ_max` over an affine Hermitian family.

use std::cell::Cell;

use super::{
    golden_section_min, lex_less, nelder_mead, AffineHermitianFamily, NelderMeadOptions,
    OptimizerTrace, Optimum,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `t ∈ ℝ`.
    Free,
    /// `t ≥ 0`.
    NonNegative,
}

#[derive(Clone, Debug)]
pub struct MinMaxOptions {
    /// Initial half-width of the search range per coordinate.
    pub range: f64,
    /// Largest half-width tried before declaring the problem unbounded.
    pub max_range: f64,
    /// Log-spaced grid points per sign between `range/10⁴` and `range`.
    pub grid_points: usize,
    pub polish_rounds: usize,
}

impl Default for MinMaxOptions {
    fn default() -> Self {
        MinMaxOptions {
            range: 100.0,
            max_range: 1e8,
            grid_points: 9,
            polish_rounds: 8,
        }
    }
}

/// Global minimum of the convex map `t ↦ λ_max(H(t))`.
///
/// A logarithmic grid locates the basin; alternating golden-section
/// coordinate slices and Nelder-Mead refine it. The range is widened when the
/// minimizer sits near its edge.
pub fn minimize_lambda_max_affine(
    family: &AffineHermitianFamily,
    domains: &[Domain],
    opts: &MinMaxOptions,
) -> Result<Optimum> {
    let k = family.dim();
    assert_eq!(domains.len(), k, "domain dimension");
    assert!(k <= 3, "grid search supports at most three parameters");
    if k == 0 {
        let v = family.lambda_max(&[]);
        return Ok(Optimum {
            point: Vec::new(),
            value: v,
            trace: OptimizerTrace::new(1, Vec::new(), v),
        });
    }
    let count = Cell::new(0usize);
    let f = |t: &[f64]| {
        count.set(count.get() + 1);
        family.lambda_max(t)
    };
    let mut range = opts.range;
    loop {
        let (x, v) = solve_in_range(&f, domains, range, opts);
        let at_edge = x.iter().any(|t| t.abs() > 0.5 * range);
        if !at_edge {
            return Ok(finish(x, v, count.get()));
        }
        if range >= opts.max_range {
            let far: Vec<f64> = x.iter().map(|t| 2.0 * t).collect();
            let vf = f(&far);
            if vf < v - 1e-12 * (1.0 + v.abs()) {
                return Err(Error::Unbounded);
            }
            return Ok(finish(x, v, count.get()));
        }
        range *= 100.0;
    }
}

fn finish(point: Vec<f64>, value: f64, evaluations: usize) -> Optimum {
    Optimum {
        trace: OptimizerTrace::new(evaluations, point.clone(), value),
        point,
        value,
    }
}

fn grid_axis(domain: Domain, range: f64, points: usize) -> Vec<f64> {
    let mut axis = vec![0.0];
    let lo = (range * 1e-4).log10();
    let hi = range.log10();
    for i in 0..points {
        let t = 10f64.powf(lo + (hi - lo) * i as f64 / (points.max(2) - 1) as f64);
        axis.push(t);
        if domain == Domain::Free {
            axis.push(-t);
        }
    }
    axis.sort_by(f64::total_cmp);
    axis
}

fn solve_in_range(
    f: &impl Fn(&[f64]) -> f64,
    domains: &[Domain],
    range: f64,
    opts: &MinMaxOptions,
) -> (Vec<f64>, f64) {
    let k = domains.len();
    let axes: Vec<Vec<f64>> = domains
        .iter()
        .map(|&d| grid_axis(d, range, opts.grid_points))
        .collect();
    let mut idx = vec![0usize; k];
    let mut best: Option<(Vec<f64>, f64)> = None;
    loop {
        let t: Vec<f64> = (0..k).map(|i| axes[i][idx[i]]).collect();
        let v = f(&t);
        let better = match &best {
            None => true,
            Some((bt, bv)) => v < *bv || (v == *bv && lex_less(&t, bt)),
        };
        if better {
            best = Some((t, v));
        }
        let mut i = 0;
        loop {
            if i == k {
                break;
            }
            idx[i] += 1;
            if idx[i] < axes[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    let (mut x, mut fx) = best.expect("grid is nonempty");
    let clamp = |t: &mut [f64]| {
        for (ti, d) in t.iter_mut().zip(domains) {
            let lo = if *d == Domain::NonNegative {
                0.0
            } else {
                -range
            };
            *ti = ti.clamp(lo, range);
        }
    };
    let nm = NelderMeadOptions {
        ftol: 1e-14,
        xtol: 1e-12,
        max_evals: 800 * (k + 1),
    };
    for _ in 0..opts.polish_rounds {
        let start = fx;
        // Golden-section on each coordinate slice inside the neighbouring grid cell.
        for i in 0..k {
            let w = (x[i].abs()).max(range * 1e-4) * 3.2;
            let lo = if domains[i] == Domain::NonNegative {
                (x[i] - w).max(0.0)
            } else {
                (x[i] - w).max(-range)
            };
            let hi = (x[i] + w).min(range);
            let (xi, v, _) = golden_section_min(
                |s| {
                    let mut y = x.clone();
                    y[i] = s;
                    f(&y)
                },
                lo,
                hi,
                1e-13,
                super::GOLDEN_MAX_ITER,
            );
            if v < fx {
                x[i] = xi;
                fx = v;
            }
        }
        if k > 1 {
            let step: Vec<f64> = x.iter().map(|t| 0.1 * t.abs().max(1e-3)).collect();
            let (y, v, _) = nelder_mead(f, &x, &step, &nm, clamp);
            if v < fx {
                x = y;
                fx = v;
            }
        }
        if start - fx <= 1e-15 * (1.0 + fx.abs()) {
            break;
        }
    }
    (x, fx)
}
