//! Minimization of the second-largest eigenvalue of `[[G, t S̄], [t S, G]]`.

use super::{golden_section_min, OptimizerTrace, Optimum, TraceFlag};
use crate::linalg::{check_hermitian, eigvalsh, ComplexMatrix, LinalgError};

#[derive(Clone, Debug)]
pub struct Lambda2Options {
    pub grid: usize,
    /// Upper end of the grid; defaults to `10 · max(‖G‖, ‖G‖/‖S‖, 1)`.
    pub t_max: Option<f64>,
    /// Number of best grid basins refined locally.
    pub refine: usize,
}

impl Default for Lambda2Options {
    fn default() -> Self {
        Lambda2Options {
            grid: 512,
            t_max: None,
            refine: 5,
        }
    }
}

/// `[[G, t S̄], [t S, G]]`; Hermitian when `G` is Hermitian and `S = S^T`.
pub fn coupled_matrix(g: &ComplexMatrix, s: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let ts = s.scale_real(t);
    ComplexMatrix::block2(g, &ts.conj(), &ts, g)
}

fn lambda2(g: &ComplexMatrix, s: &ComplexMatrix, t: f64) -> f64 {
    let ev = eigvalsh(&coupled_matrix(g, s, t)).expect("coupled matrix is Hermitian");
    ev[ev.len() - 2]
}

pub fn minimize_lambda2_coupled(
    g: &ComplexMatrix,
    s: &ComplexMatrix,
    opts: &Lambda2Options,
) -> Result<Optimum, LinalgError> {
    check_hermitian(g)?;
    let sym = (s - &s.transpose()).norm_fro();
    if sym > 1e-10 * (1.0 + s.norm_fro()) {
        return Err(LinalgError::NotHermitian { defect: sym });
    }
    let s = &(s + &s.transpose()).scale_real(0.5);
    let g = &g.hermitian_part();
    let ng = g.norm2();
    let ns = s.norm2();
    let t_max = opts
        .t_max
        .unwrap_or_else(|| 10.0 * ng.max(if ns > 0.0 { ng / ns } else { 0.0 }).max(1.0));
    let m = opts.grid.max(3);
    let ts: Vec<f64> = (0..m).map(|i| t_max * i as f64 / (m - 1) as f64).collect();
    let vs: Vec<f64> = crate::par::map_range(m, |i| lambda2(g, s, ts[i]));
    let mut evaluations = m;
    let scale = 1.0 + ng;

    let basins = local_minima(&vs, 1e-12 * scale);
    let mut best_i = crate::par::argmin(&vs).expect("grid is nonempty");
    let mut best = (ts[best_i], vs[best_i]);
    let mut ranked = basins.clone();
    ranked.sort_by(|&a, &b| vs[a].total_cmp(&vs[b]).then(a.cmp(&b)));
    for &i in ranked.iter().take(opts.refine) {
        let lo = ts[i.saturating_sub(1)];
        let hi = ts[(i + 1).min(m - 1)];
        let (t, v, n) =
            golden_section_min(|t| lambda2(g, s, t), lo, hi, 1e-12, super::GOLDEN_MAX_ITER);
        evaluations += n;
        if v < best.1 - 1e-15 * scale {
            best = (t, v);
            best_i = i;
        }
    }
    let _ = best_i;
    // Tail probes beyond the grid.
    for factor in [10.0, 100.0, 1000.0] {
        let t = t_max * factor;
        let v = lambda2(g, s, t);
        evaluations += 1;
        if v < best.1 - 1e-12 * scale {
            best = (t, v);
        }
    }
    let mut trace = OptimizerTrace::new(evaluations, vec![best.0], best.1);
    if basins.len() > 1 {
        trace.flag(TraceFlag::Multimodal);
    }
    Ok(Optimum {
        point: vec![best.0],
        value: best.1,
        trace,
    })
}

/// Indices of grid local minima, treating runs of near-equal values as one plateau.
fn local_minima(vs: &[f64], eps: f64) -> Vec<usize> {
    let mut runs: Vec<(usize, usize, f64)> = Vec::new();
    for (i, &v) in vs.iter().enumerate() {
        match runs.last_mut() {
            Some((_, end, rv)) if (v - *rv).abs() <= eps => *end = i,
            _ => runs.push((i, i, v)),
        }
    }
    let mut out = Vec::new();
    for r in 0..runs.len() {
        let left = r == 0 || runs[r - 1].2 > runs[r].2;
        let right = r + 1 == runs.len() || runs[r + 1].2 > runs[r].2;
        if left && right {
            out.push(runs[r].0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{random_hermitian, random_matrix, rng};

    #[test]
    fn zero_coupling() {
        let g = ComplexMatrix::from_real_diag(&[1.0, 3.0]);
        let o =
            minimize_lambda2_coupled(&g, &ComplexMatrix::zeros(2, 2), &Lambda2Options::default())
                .unwrap();
        assert_eq!(o.point, vec![0.0]);
        assert_eq!(o.value, 3.0);
        assert!(!o.trace.has(TraceFlag::Multimodal));
    }

    #[test]
    fn block_is_hermitian() {
        let mut r = rng(2);
        let g = random_hermitian(&mut r, 3);
        let b = random_matrix(&mut r, 3, 3);
        let s = &b + &b.transpose();
        for t in [0.0, 0.3, 7.0] {
            assert!(coupled_matrix(&g, &s, t).hermitian_defect() < 1e-12);
        }
    }

    #[test]
    fn rejects_unsymmetric_s() {
        let s = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(minimize_lambda2_coupled(
            &ComplexMatrix::identity(2),
            &s,
            &Lambda2Options::default()
        )
        .is_err());
    }

    #[test]
    fn plateau_runs() {
        assert_eq!(
            local_minima(&[3.0, 2.0, 2.0, 1.0, 4.0, 0.5, 0.5], 1e-12),
            vec![3, 5]
        );
        assert_eq!(local_minima(&[1.0, 1.0, 1.0], 1e-12), vec![0]);
    }
}
