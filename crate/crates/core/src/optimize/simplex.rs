//! Nelder-Mead simplex minimization with an optional projection.

#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    /// Stop when the simplex spread in `f` is below `ftol * (1 + |f_best|)`.
    pub ftol: f64,
    /// ... and every vertex is within `xtol * (1 + |x_best|)` of the best.
    pub xtol: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            ftol: 1e-10,
            xtol: 1e-12,
            max_evals: 4000,
        }
    }
}

/// Minimizes `f` from `x0` with initial edge lengths `step`. `project` maps
/// trial points back into the feasible set. Returns `(x, f(x), evaluations)`.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: &[f64],
    opts: &NelderMeadOptions,
    project: impl Fn(&mut [f64]),
) -> (Vec<f64>, f64, usize) {
    let k = x0.len();
    let eval = |x: &mut Vec<f64>| -> f64 {
        project(x);
        f(x)
    };
    let mut evals = 0;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(k + 1);
    let mut p = x0.to_vec();
    let f0 = eval(&mut p);
    evals += 1;
    simplex.push((p, f0));
    for i in 0..k {
        let mut v = simplex[0].0.clone();
        let h = if step[i] != 0.0 { step[i] } else { 1e-3 };
        v[i] += h;
        let mut fv = eval(&mut v);
        if v == simplex[0].0 {
            // Projection undid the move; step the other way.
            v[i] -= 2.0 * h;
            fv = eval(&mut v);
        }
        evals += 1;
        simplex.push((v, fv));
    }
    if k == 0 {
        let (x, v) = simplex.pop().expect("one vertex");
        return (x, v, evals);
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| lex_cmp(&a.0, &b.0)));
    };
    while evals < opts.max_evals {
        order(&mut simplex);
        let fbest = simplex[0].1;
        let fworst = simplex[k].1;
        let xscale = 1.0 + simplex[0].0.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let spread_x = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (fworst - fbest).abs() <= opts.ftol * (1.0 + fbest.abs())
            && spread_x <= opts.xtol * xscale
        {
            break;
        }
        if spread_x <= 1e-15 * xscale {
            break;
        }
        let mut centroid = vec![0.0; k];
        for (v, _) in &simplex[..k] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / k as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[k].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let mut xr = along(1.0);
        let fr = eval(&mut xr);
        evals += 1;
        if fr < simplex[0].1 {
            let mut xe = along(2.0);
            let fe = eval(&mut xe);
            evals += 1;
            simplex[k] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[k - 1].1 {
            simplex[k] = (xr, fr);
        } else {
            let (mut xc, t) = if fr < simplex[k].1 {
                (along(0.5), true)
            } else {
                (along(-0.5), false)
            };
            let fc = eval(&mut xc);
            evals += 1;
            let threshold = if t { fr } else { simplex[k].1 };
            if fc < threshold {
                simplex[k] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let mut v: Vec<f64> = best
                        .iter()
                        .zip(&item.0)
                        .map(|(b, x)| b + 0.5 * (x - b))
                        .collect();
                    let fv = eval(&mut v);
                    *item = (v, fv);
                }
                evals += k;
            }
        }
    }
    order(&mut simplex);
    let (x, v) = simplex.swap_remove(0);
    (x, v, evals)
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}
