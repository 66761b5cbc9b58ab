//! Multistart minimization over unit vectors in the span of a basis.

use std::cell::Cell;

use super::OptimizerTrace;
use crate::error::{Error, Result};
use crate::linalg::{vector, ComplexMatrix, C64};
use crate::random::{random_unit_vector, seeded};

#[derive(Clone, Debug)]
pub struct SphereOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Relative central-difference step.
    pub grad_step: f64,
}

impl Default for SphereOptions {
    fn default() -> Self {
        SphereOptions {
            starts: 32,
            seed: 0,
            max_iter: 400,
            grad_step: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereOptimum {
    /// Unit minimizer `α = U β` in the ambient space.
    pub vector: Vec<C64>,
    /// Unit coordinates `β` in the basis.
    pub coords: Vec<C64>,
    pub value: f64,
    pub trace: OptimizerTrace,
}

/// Minimizes a scale-invariant objective over unit `α ∈ span(U)`.
///
/// `objective` returns `None` where a feasibility guard fails. `seeds` are
/// ambient vectors projected onto the basis and tried first; the remaining
/// starts are uniform on the sphere. Each start runs a BFGS-scaled gradient
/// descent with central differences in the `2k` real coordinates, tangent to
/// the sphere because the objective is homogeneous of degree zero. The best
/// converged value wins; ties go to the lower start index.
pub fn minimize_sphere_multistart<F>(
    objective: &F,
    basis: &ComplexMatrix,
    seeds: &[Vec<C64>],
    opts: &SphereOptions,
) -> Result<SphereOptimum>
where
    F: Fn(&[C64]) -> Option<f64> + Sync,
{
    let k = basis.cols();
    if k == 0 {
        return Err(Error::NoFeasibleStart);
    }
    let mut starts: Vec<Vec<C64>> = Vec::new();
    for s in seeds {
        let beta = basis.adjoint().mul_vec(s);
        if let Ok(b) = vector::normalized(&beta) {
            starts.push(b);
        }
    }
    let mut rng = seeded(opts.seed);
    let wanted = opts.starts.max(1).max(starts.len());
    while starts.len() < wanted {
        starts.push(random_unit_vector(&mut rng, k));
    }
    if k == 1 {
        starts.truncate(1);
    }
    let runs = crate::par::map_range(starts.len(), |i| {
        descend(objective, basis, &starts[i], opts)
    });
    let mut evaluations = 0;
    let mut best: Option<(Vec<C64>, f64)> = None;
    for (beta, v, n) in runs {
        evaluations += n;
        let Some(v) = v else { continue };
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((beta, v));
        }
    }
    let (coords, value) = best.ok_or(Error::NoFeasibleStart)?;
    let vector = basis.mul_vec(&coords);
    let point = coords.iter().flat_map(|z| [z.re, z.im]).collect();
    Ok(SphereOptimum {
        vector,
        coords,
        value,
        trace: OptimizerTrace::new(evaluations, point, value),
    })
}

fn to_complex(x: &[f64]) -> Vec<C64> {
    x.chunks(2).map(|p| C64::new(p[0], p[1])).collect()
}

fn to_real(b: &[C64]) -> Vec<f64> {
    b.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn descend<F>(
    objective: &F,
    basis: &ComplexMatrix,
    start: &[C64],
    opts: &SphereOptions,
) -> (Vec<C64>, Option<f64>, usize)
where
    F: Fn(&[C64]) -> Option<f64> + Sync,
{
    let count = Cell::new(0usize);
    let f = |x: &[f64]| -> f64 {
        count.set(count.get() + 1);
        let b = to_complex(x);
        let nb = vector::norm(&b);
        if nb == 0.0 {
            return f64::INFINITY;
        }
        let alpha = basis.mul_vec(&vector::scale_real(&b, 1.0 / nb));
        match objective(&alpha) {
            Some(v) if v.is_finite() => v,
            _ => f64::INFINITY,
        }
    };
    let m = 2 * start.len();
    let mut x = to_real(start);
    let mut fx = f(&x);
    if !fx.is_finite() {
        return (start.to_vec(), None, count.get());
    }
    let grad = |x: &[f64], fx: f64| -> Vec<f64> {
        let h = opts.grad_step * norm(x).max(1e-300);
        let mut g = vec![0.0; m];
        let mut y = x.to_vec();
        for i in 0..m {
            let xi = y[i];
            y[i] = xi + h;
            let fp = f(&y);
            y[i] = xi - h;
            let fm = f(&y);
            y[i] = xi;
            g[i] = match (fp.is_finite(), fm.is_finite()) {
                (true, true) => (fp - fm) / (2.0 * h),
                (true, false) => (fp - fx) / h,
                (false, true) => (fx - fm) / h,
                (false, false) => 0.0,
            };
        }
        g
    };
    let identity = |m: usize| -> Vec<Vec<f64>> {
        (0..m)
            .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect()
    };
    let mut hinv = identity(m);
    let mut g = grad(&x, fx);
    let mut stalls = 0;
    for _ in 0..opts.max_iter {
        let gn = norm(&g);
        if gn * norm(&x) <= 1e-13 * (1.0 + fx.abs()) {
            break;
        }
        let mut d: Vec<f64> = hinv.iter().map(|row| -dot(row, &g)).collect();
        if dot(&d, &g) >= 0.0 {
            hinv = identity(m);
            d = g.iter().map(|v| -v).collect();
        }
        // Armijo backtracking.
        let slope = dot(&d, &g);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            let fy = f(&y);
            if fy.is_finite() && fy <= fx + 1e-4 * step * slope {
                accepted = Some((y, fy));
                break;
            }
            step *= 0.5;
        }
        let Some((mut y, fy)) = accepted else {
            if hinv != identity(m) {
                hinv = identity(m);
                continue;
            }
            break;
        };
        let improvement = fx - fy;
        let ny = norm(&y);
        let rescale = !(0.5..=2.0).contains(&ny);
        if rescale {
            for v in y.iter_mut() {
                *v /= ny;
            }
        }
        let gy = grad(&y, fy);
        if rescale {
            hinv = identity(m);
        } else {
            let s: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
            let yv: Vec<f64> = gy.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &yv);
            if sy > 1e-14 * norm(&s) * norm(&yv) && sy > 0.0 {
                bfgs_update(&mut hinv, &s, &yv, sy);
            }
        }
        x = y;
        fx = fy;
        g = gy;
        if improvement <= 1e-16 * (1.0 + fx.abs()) {
            stalls += 1;
            if stalls >= 3 {
                break;
            }
        } else {
            stalls = 0;
        }
    }
    let b = to_complex(&x);
    let b = vector::normalized(&b).unwrap_or(b);
    (b, Some(fx), count.get())
}

fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let m = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = h.iter().map(|row| dot(row, y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..m {
        for j in 0..m {
            h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, vector::dot as cdot};
    use crate::test_util::{random_hermitian, rng};

    #[test]
    fn rayleigh_quotient() {
        let mut r = rng(6);
        let m = random_hermitian(&mut r, 5);
        let obj = |a: &[C64]| Some(cdot(a, &m.mul_vec(a)).re / vector::norm_sqr(a));
        let o = minimize_sphere_multistart(
            &obj,
            &ComplexMatrix::identity(5),
            &[],
            &SphereOptions::default(),
        )
        .unwrap();
        let lmin = hermitian_eig(&m).unwrap().values[0];
        assert!((o.value - lmin).abs() < 1e-8, "{} vs {}", o.value, lmin);
        assert!((vector::norm(&o.vector) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_infeasible() {
        let obj = |_: &[C64]| None;
        assert!(matches!(
            minimize_sphere_multistart(
                &obj,
                &ComplexMatrix::identity(3),
                &[],
                &SphereOptions::default()
            ),
            Err(Error::NoFeasibleStart)
        ));
    }

    #[test]
    fn restricted_to_subspace() {
        let m = ComplexMatrix::from_real_diag(&[-5.0, 1.0, 2.0]);
        let basis = ComplexMatrix::identity(3).columns(1, 3);
        let obj = |a: &[C64]| Some(cdot(a, &m.mul_vec(a)).re / vector::norm_sqr(a));
        let o = minimize_sphere_multistart(&obj, &basis, &[], &SphereOptions::default()).unwrap();
        assert!((o.value - 1.0).abs() < 1e-9);
        assert!(o.vector[0].norm() < 1e-12);
    }

    #[test]
    fn deterministic() {
        let mut r = rng(7);
        let m = random_hermitian(&mut r, 4);
        let obj = |a: &[C64]| Some(cdot(a, &m.mul_vec(a)).re / vector::norm_sqr(a));
        let a = minimize_sphere_multistart(
            &obj,
            &ComplexMatrix::identity(4),
            &[],
            &SphereOptions::default(),
        )
        .unwrap();
        let b = minimize_sphere_multistart(
            &obj,
            &ComplexMatrix::identity(4),
            &[],
            &SphereOptions::default(),
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
