//! Golden-section search.

pub const GOLDEN_TOL: f64 = 1e-10;
pub const GOLDEN_MAX_ITER: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal `f` on `[a, b]`, endpoints included.
/// Returns `(x, f(x), evaluations)`.
pub fn golden_section_max(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64, usize) {
    let (x, v, n) = golden_section_min(|x| -f(x), a, b, tol, max_iter);
    (x, -v, n)
}

/// Minimizes a unimodal `f` on `[a, b]`, endpoints included. Ties prefer the
/// smaller abscissa.
pub fn golden_section_min(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64, usize) {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let fa = f(lo);
    let fb = f(hi);
    let mut evals = 2;
    let mut best = if fb < fa { (hi, fb) } else { (lo, fa) };
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    evals += 2;
    for _ in 0..max_iter {
        if hi - lo <= tol * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
        evals += 1;
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.1 || (v == best.1 && x < best.0) {
            best = (x, v);
        }
    }
    (best.0, best.1, evals)
}
