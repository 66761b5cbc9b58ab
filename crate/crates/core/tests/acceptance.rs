//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::time::{Duration, Instant};

use pencildist::backward::{choose_lambda_family, delta_lower_bound, eta_unstructured};
use pencildist::dh::{dh_delta0, dh_frobenius_norm_of_optimum, DhKind};
use pencildist::linalg::{eigvalsh, hermitian_eig, sigma_min, singular_values, vector};
use pencildist::model::{
    random_dh, random_pencil, random_polynomial, Star, StructureTag, StructuredPencil,
};
use pencildist::nullspace::{
    delta0_a_only, delta0_e_only, delta0_palindromic, delta0_structured, delta0_unstructured,
};
use pencildist::optimize::{
    coupled_matrix, maximize_lambda_min_box, minimize_lambda2_coupled, minimize_lambda_max_affine,
    minimize_sphere_multistart, AffineHermitianFamily, BoxOptions, Domain, Lambda2Options,
    MinMaxOptions, SphereOptions,
};
use pencildist::oracle::{
    sample_null_space_upper_bound, verify_common_null, OracleOptions, OracleProblem,
};
use pencildist::poly::{poly_delta0, poly_delta0_palindromic};
use pencildist::random::{random_hermitian, random_matrix, random_psd};
use pencildist::{ComplexMatrix, DistanceReport, MatrixPolynomial, C64};
use rand::Rng;

// Pinned tolerances.
const TABLE5_TOL: f64 = 5e-4;
const TABLE5_TIME: Duration = Duration::from_secs(5);
const GRAM_TOL: f64 = 1e-3;
const EQUALITY_TOL: f64 = 1e-10;
const EQUALITY_TIME: Duration = Duration::from_secs(30);
const RANK_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-7;
const STATIONARITY_TOL: f64 = 1e-6;
const PAL_ORACLE_REL: f64 = 0.02;
const ORACLE_SLACK: f64 = 1e-9;
const ORACLE_TRIALS: usize = 100_000;
const PSD_TOL: f64 = 1e-9;
const LB_TOL: f64 = 1e-8;
const LB_ORDER_TOL: f64 = 1e-9;
const CLOSED_FORM_TOL: f64 = 1e-9;
const BOX_GRID_TOL: f64 = 1e-6;
const MINMAX_GRID_TOL: f64 = 1e-6;
const COUPLED_GRID_TOL: f64 = 1e-5;
const SPHERE_QUAD_TOL: f64 = 1e-8;
const SPHERE_SAMPLE_TOL: f64 = 1e-6;
const CONVEXITY_TOL: f64 = 1e-10;
const DEGREE_ONE_TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn dh_table_triple(e: [f64; 2]) -> pencildist::DhTriple {
    pencildist::DhTriple::new(
        ComplexMatrix::from_real_rows(&[&[0.0, -0.5], &[0.5, 0.0]]),
        ComplexMatrix::from_real_rows(&[&[0.18, 0.42], &[0.42, 1.03]]),
        ComplexMatrix::from_real_diag(&e),
    )
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let rows = [
        ([0.0, 1.0], [0.5819, 0.8229, 1.2248, 1.1181]),
        ([1.0, 0.0], [0.9822, 1.3890, 1.2248, 1.1181]),
        ([1.0, 1.0], [1.1181, 1.5812, 1.2248, 1.1181]),
    ];
    let mut worst = 0.0_f64;
    for (e, want) in rows {
        let t = dh_table_triple(e);
        let u = dh_delta0(&t, DhKind::Unstructured).unwrap().value;
        let s = dh_delta0(&t, DhKind::JRE).unwrap();
        let f = dh_frobenius_norm_of_optimum(&s).unwrap();
        let got = [u, std::f64::consts::SQRT_2 * u, f, s.value];
        for (g, w) in got.iter().zip(want) {
            worst = worst.max((g - w).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= TABLE5_TOL && elapsed < TABLE5_TIME,
        format!("max deviation {worst:.2e}, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    // J*J + R² + E² for E = diag(0, 1), entries written out by hand.
    let g11: f64 = 0.25 + 0.18 * 0.18 + 0.42 * 0.42;
    let g12 = 0.18 * 0.42 + 0.42 * 1.03;
    let g22 = 0.25 + 0.42 * 0.42 + 1.03 * 1.03 + 1.0;
    let tr = g11 + g22;
    let det = g11 * g22 - g12 * g12;
    let lam = 0.5 * (tr - (tr * tr - 4.0 * det).sqrt());
    let v = dh_delta0(&dh_table_triple([0.0, 1.0]), DhKind::Unstructured)
        .unwrap()
        .value;
    outcome(
        (v * v - lam).abs() <= GRAM_TOL && (lam - 0.3386).abs() <= GRAM_TOL,
        format!("λ_min = {lam:.6}, δ₀² = {:.6}", v * v),
    )
}

fn structure_defect(m: &ComplexMatrix, herm: bool) -> f64 {
    if herm {
        m.hermitian_defect()
    } else {
        m.skew_defect()
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut g = common::rng(3);
    let mut worst = 0.0_f64;
    let mut worst_reduction = 0.0_f64;
    let tags = [
        (StructureTag::Hermitian, true, true),
        (StructureTag::SkewHermitian, false, false),
        (StructureTag::StarEven, true, false),
        (StructureTag::StarOdd, false, true),
    ];
    for (tag, ha, he) in tags {
        for i in 0..50 {
            let n = g.random_range(2..=8);
            let p = random_pencil(tag, n, 1000 * i + tag as u64);
            let unstructured = delta0_unstructured(&p.a, &p.e).unwrap().value;
            let s = delta0_structured(&p).unwrap();
            let da = s.perturbation("A").unwrap();
            let de = s.perturbation("E").unwrap();
            let realized = s.combined_norm();
            let sym = structure_defect(da, ha).max(structure_defect(de, he));
            worst = worst
                .max((s.value - unstructured).abs())
                .max((realized - unstructured).abs())
                .max(sym);
            // Reduction to a Hermitian pencil.
            let (ra, re) = match tag {
                StructureTag::SkewHermitian => (
                    p.a.scale(pencildist::linalg::I),
                    p.e.scale(pencildist::linalg::I),
                ),
                StructureTag::StarEven => (p.a.clone(), p.e.scale(pencildist::linalg::I)),
                StructureTag::StarOdd => (p.a.scale(pencildist::linalg::I), p.e.clone()),
                _ => (p.a.clone(), p.e.clone()),
            };
            let h =
                delta0_structured(&StructuredPencil::new(ra, re, StructureTag::Hermitian)).unwrap();
            worst_reduction = worst_reduction.max((h.value - s.value).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= EQUALITY_TOL && worst_reduction <= EQUALITY_TOL && elapsed < EQUALITY_TIME,
        format!(
            "200 pencils, max |δ₀^S - δ₀| incl. realized norm and symmetry {worst:.1e}, reductions {worst_reduction:.1e}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn numerical_rank(m: &ComplexMatrix) -> usize {
    let s = singular_values(m).unwrap();
    if s[0] == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > RANK_TOL * s[0]).count()
}

/// Originals and the witness residual for a report over named matrices.
fn residual(report: &DistanceReport, named: &[(&str, &ComplexMatrix)]) -> f64 {
    let w = report.witness.as_ref().unwrap();
    let perturbed: Vec<ComplexMatrix> = named
        .iter()
        .map(
            |(name, m)| match report.perturbations.iter().find(|p| p.target == *name) {
                Some(p) => p.apply(m),
                None => (*m).clone(),
            },
        )
        .collect();
    verify_common_null(&perturbed, w).residual
}

struct RankAudit {
    checked: usize,
    rank_violations: usize,
    norm_worst: f64,
    residual_worst: f64,
    structured_ranks: std::collections::BTreeMap<String, usize>,
}

impl RankAudit {
    fn see(
        &mut self,
        label: &str,
        r: &DistanceReport,
        named: &[(&str, &ComplexMatrix)],
        rank_one: &[&str],
    ) {
        if !r.is_finite() {
            return;
        }
        self.checked += 1;
        let gap = (r.combined_norm() - r.value).abs() / (1.0 + r.value);
        self.norm_worst = self.norm_worst.max(gap);
        self.residual_worst = self.residual_worst.max(residual(r, named));
        for p in &r.perturbations {
            let rank = numerical_rank(&p.matrix);
            if rank_one.contains(&p.target.as_str()) {
                if rank > 1 {
                    self.rank_violations += 1;
                }
            } else {
                let e = self
                    .structured_ranks
                    .entry(format!("{label}:{}", p.target))
                    .or_insert(0);
                *e = (*e).max(rank);
            }
        }
    }
}

fn criterion_4() -> Outcome {
    let mut audit = RankAudit {
        checked: 0,
        rank_violations: 0,
        norm_worst: 0.0,
        residual_worst: 0.0,
        structured_ranks: Default::default(),
    };
    let mut g = common::rng(4);
    for i in 0..20 {
        let n = g.random_range(2..=6);
        let p = random_pencil(StructureTag::Unstructured, n, i);
        let named = [("A", &p.a), ("E", &p.e)];
        audit.see(
            "unstructured",
            &delta0_unstructured(&p.a, &p.e).unwrap(),
            &named,
            &["A", "E"],
        );
        // Rank-deficient partner so the one-sided distances are finite.
        let q = common::unitary(&mut g, n);
        let proj = common::projector_out(&q, 1);
        let es = proj.matmul(&p.e);
        let named_a = [("A", &p.a), ("E", &es)];
        audit.see(
            "a-only",
            &delta0_a_only(&p.a, &es).unwrap(),
            &named_a,
            &["A", "E"],
        );
        let as_ = proj.matmul(&p.a);
        let named_e = [("A", &as_), ("E", &p.e)];
        audit.see(
            "e-only",
            &delta0_e_only(&as_, &p.e).unwrap(),
            &named_e,
            &["A", "E"],
        );

        let poly = random_polynomial(StructureTag::Unstructured, n, 3, i);
        let names: Vec<String> = (0..4).map(|j| format!("A{j}")).collect();
        let named_p: Vec<(&str, &ComplexMatrix)> = names
            .iter()
            .map(|s| s.as_str())
            .zip(poly.coeffs.iter())
            .collect();
        let rank_one: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        audit.see("poly", &poly_delta0(&poly).unwrap(), &named_p, &rank_one);

        for tag in [
            StructureTag::Hermitian,
            StructureTag::SkewHermitian,
            StructureTag::StarEven,
            StructureTag::StarOdd,
            StructureTag::StarPalindromic,
            StructureTag::TPalindromic,
        ] {
            let s = random_pencil(tag, n, 77 + i);
            audit.see(
                tag.as_str(),
                &delta0_structured(&s).unwrap(),
                &[("A", &s.a), ("E", &s.e)],
                &[],
            );
        }
        for kind in DhKind::ALL {
            let t = common::dh_for_kind(kind, n, 500 + i);
            let r = dh_delta0(&t, kind).unwrap();
            let rank_one: &[&str] = if kind == DhKind::Unstructured {
                &["J", "R", "E"]
            } else {
                &["R", "E"]
            };
            audit.see(
                &format!("dh-{kind}"),
                &r,
                &[("J", &t.j), ("R", &t.r), ("E", &t.e)],
                rank_one,
            );
        }
    }
    let structured_max = audit.structured_ranks.values().copied().max().unwrap_or(0);
    let ranks: Vec<String> = audit
        .structured_ranks
        .iter()
        .filter(|(_, &r)| r > 1)
        .map(|(k, r)| format!("{k}={r}"))
        .collect();
    println!(
        "    symmetry-constrained perturbation ranks above one: {}",
        ranks.join(" ")
    );
    outcome(
        audit.rank_violations == 0
            && structured_max <= 2
            && audit.norm_worst <= NORM_TOL
            && audit.residual_worst <= RESIDUAL_TOL,
        format!(
            "{} reports; rank>1 among unconstrained/semidefinite maps: {}; max rank of symmetric maps {structured_max}; norm gap {:.1e}; residual {:.1e}",
            audit.checked, audit.rank_violations, audit.norm_worst, audit.residual_worst
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut g = common::rng(5);
    let mut worst_stat = 0.0_f64;
    let mut worst_rel = 0.0_f64;
    let mut below = 0usize;
    for star in [Star::Adjoint, Star::Transpose] {
        for i in 0..30 {
            let n = g.random_range(3..=6);
            let a = random_matrix(&mut g, n, n);
            let r = delta0_palindromic(&a, star).unwrap();
            let v = r.witness.as_ref().unwrap();
            let d = &a.gram() - &star.apply(&a).gram();
            let stat = vector::dot(v, &d.mul_vec(v)).norm() / a.norm2().powi(2);
            worst_stat = worst_stat.max(stat);
            let p = StructuredPencil::palindromic(a, star);
            let est = sample_null_space_upper_bound(
                OracleProblem::Pencil(&p),
                &OracleOptions {
                    trials: ORACLE_TRIALS,
                    seed: i,
                    ..Default::default()
                },
            )
            .unwrap();
            if est.value < r.value - ORACLE_SLACK {
                below += 1;
            }
            worst_rel = worst_rel.max((est.value - r.value).abs() / r.value);
        }
    }
    outcome(
        worst_stat <= STATIONARITY_TOL && worst_rel <= PAL_ORACLE_REL && below == 0,
        format!("60 pencils, max |v*Dv|/‖A‖² {worst_stat:.1e}, max oracle gap {:.3}%, oracle below value: {below}", 100.0 * worst_rel),
    )
}

fn criterion_6() -> Outcome {
    let mut g = common::rng(6);
    let mut above = 0usize;
    let mut psd_worst = 0.0_f64;
    let mut finite = 0usize;
    let mut worst_gap = 0.0_f64;
    for kind in DhKind::ALL {
        for i in 0..20 {
            let n = g.random_range(2..=6);
            let t = common::dh_for_kind(kind, n, 6000 + 100 * kind as u64 + i);
            let r = dh_delta0(&t, kind).unwrap();
            let est = sample_null_space_upper_bound(
                OracleProblem::Dh(&t, kind),
                &OracleOptions {
                    trials: ORACLE_TRIALS,
                    seed: i,
                    ..Default::default()
                },
            )
            .unwrap();
            if r.value > est.value + ORACLE_SLACK {
                above += 1;
            }
            if !r.is_finite() {
                continue;
            }
            finite += 1;
            if kind == DhKind::Unstructured {
                continue;
            }
            worst_gap = worst_gap.max((est.value - r.value) / r.value.max(1e-12));
            for (name, m) in [("R", &t.r), ("E", &t.e)] {
                if let Some(d) = r.perturbation(name) {
                    let scale = 1.0 + m.norm2();
                    let dmax = *eigvalsh(&d.hermitian_part()).unwrap().last().unwrap();
                    let pmin = eigvalsh(&(m + d).hermitian_part()).unwrap()[0];
                    psd_worst = psd_worst
                        .max(dmax / scale)
                        .max(-pmin / scale)
                        .max(d.hermitian_defect());
                }
            }
            if let Some(d) = r.perturbation("J") {
                psd_worst = psd_worst.max((&t.j + d).skew_defect());
            }
        }
    }
    outcome(
        above == 0 && psd_worst <= PSD_TOL && finite > 0,
        format!(
            "160 triples ({finite} finite), formula above sampled bound: {above}, semidefinite/skew defect {psd_worst:.1e}, max relative oracle gap {:.2e}",
            worst_gap
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut g = common::rng(7);
    let mut above = 0usize;
    let mut disorder = 0usize;
    let mut significant = 0usize;
    let mut total = 0usize;
    for tag in [
        StructureTag::Unstructured,
        StructureTag::Hermitian,
        StructureTag::SkewHermitian,
        StructureTag::StarEven,
        StructureTag::StarOdd,
        StructureTag::StarPalindromic,
        StructureTag::TPalindromic,
    ] {
        for i in 0..30 {
            let n = g.random_range(2..=5);
            let p = random_pencil(tag, n, 7000 + i);
            let fam = choose_lambda_family(&p, n + 1, i).unwrap();
            let lb = delta_lower_bound(&p, &fam).unwrap().value;
            let plain = StructuredPencil::new(p.a.clone(), p.e.clone(), StructureTag::Unstructured);
            let lbu = delta_lower_bound(&plain, &fam).unwrap().value;
            let d0 = delta0_structured(&p).unwrap().value;
            total += 1;
            if lb > d0 + LB_TOL {
                above += 1;
            }
            if lb < lbu - LB_ORDER_TOL {
                disorder += 1;
            }
            if lb > 1.5 * lbu {
                significant += 1;
            }
        }
    }
    println!(
        "    structured lower bound exceeds 1.5x unstructured on {significant}/{total} pencils"
    );
    outcome(
        above == 0 && disorder == 0,
        format!("{total} pencils, l.b. above δ₀^S: {above}, structured l.b. below unstructured: {disorder}"),
    )
}

fn criterion_8() -> Outcome {
    let mut g = common::rng(8);
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let n = g.random_range(2..=6);
        let p = random_pencil(StructureTag::Unstructured, n, 8000 + i);
        let lambda = C64::new(g.random_range(-3.0..3.0), g.random_range(-3.0..3.0));
        let r = eta_unstructured(&p.a, &p.e, lambda).unwrap();
        let closed = sigma_min(&p.at(lambda)).unwrap() / (1.0 + lambda.norm_sqr()).sqrt();
        worst = worst
            .max((r.eta - closed).abs())
            .max((r.eta - r.cross_check.unwrap()).abs());
    }
    outcome(
        worst <= CLOSED_FORM_TOL,
        format!("100 pairs, max deviation {worst:.1e}"),
    )
}

/// Grid search followed by zoomed grids around the incumbent.
fn zoom_grid<F: Fn(&[f64]) -> f64>(
    f: F,
    lo: [f64; 2],
    hi: [f64; 2],
    first: usize,
    maximize: bool,
) -> f64 {
    let sign = if maximize { -1.0 } else { 1.0 };
    let (mut lo, mut hi) = (lo, hi);
    let (box_lo, box_hi) = (lo, hi);
    let mut best = (f64::INFINITY, [0.0, 0.0]);
    let mut pts = first;
    for _ in 0..14 {
        let h = [
            (hi[0] - lo[0]) / (pts - 1) as f64,
            (hi[1] - lo[1]) / (pts - 1) as f64,
        ];
        for i in 0..pts {
            for j in 0..pts {
                let x = [lo[0] + h[0] * i as f64, lo[1] + h[1] * j as f64];
                let v = sign * f(&x);
                if v < best.0 {
                    best = (v, x);
                }
            }
        }
        for k in 0..2 {
            lo[k] = (best.1[k] - 3.0 * h[k]).max(box_lo[k]);
            hi[k] = (best.1[k] + 3.0 * h[k]).min(box_hi[k]);
        }
        pts = 21;
    }
    sign * best.0
}

fn criterion_9() -> Outcome {
    let mut g = common::rng(9);
    let mut notes = Vec::new();
    let mut pass = true;

    // Box maximization against a 201² grid refined by zooming.
    let mut worst_box = 0.0_f64;
    for s in 0..3 {
        let fam = AffineHermitianFamily::new(
            random_hermitian(&mut g, 4),
            vec![random_hermitian(&mut g, 4), random_hermitian(&mut g, 4)],
        )
        .unwrap();
        let opt = maximize_lambda_min_box(
            &fam,
            &[0.0, 0.0],
            &[1.0, 1.0],
            &BoxOptions {
                seed: s,
                ..Default::default()
            },
        );
        let grid = zoom_grid(|t| fam.lambda_min(t), [0.0, 0.0], [1.0, 1.0], 201, true);
        worst_box = worst_box.max((opt.value - grid).abs());
    }
    pass &= worst_box <= BOX_GRID_TOL;
    notes.push(format!("box {worst_box:.1e}"));

    // λ_max minimization against a 101² grid refined by zooming.
    let mut worst_mm = 0.0_f64;
    for _ in 0..3 {
        let fam = AffineHermitianFamily::new(
            &random_psd(&mut g, 4) + &ComplexMatrix::identity(4),
            vec![random_hermitian(&mut g, 4), random_hermitian(&mut g, 4)],
        )
        .unwrap();
        let opt = minimize_lambda_max_affine(
            &fam,
            &[Domain::Free, Domain::Free],
            &MinMaxOptions::default(),
        )
        .unwrap();
        let r = 2.0 * opt.point.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let grid = zoom_grid(|t| fam.lambda_max(t), [-r, -r], [r, r], 101, false);
        worst_mm = worst_mm.max((opt.value - grid).abs());
    }
    pass &= worst_mm <= MINMAX_GRID_TOL;
    notes.push(format!("λ_max {worst_mm:.1e}"));

    // Coupled λ₂ against a 2048-point grid with two zoom levels.
    let mut worst_c = 0.0_f64;
    for _ in 0..3 {
        let gm = &random_psd(&mut g, 3) + &ComplexMatrix::identity(3);
        let b = random_matrix(&mut g, 3, 3);
        let s = (&b + &b.transpose()).scale_real(0.5);
        let opts = Lambda2Options::default();
        let opt = minimize_lambda2_coupled(&gm, &s, &opts).unwrap();
        let t_max = 10.0 * gm.norm2().max(gm.norm2() / s.norm2()).max(1.0);
        let l2 = |t: f64| {
            let ev = eigvalsh(&coupled_matrix(&gm, &s, t)).unwrap();
            ev[ev.len() - 2]
        };
        let (mut lo, mut hi) = (0.0, t_max);
        let mut best = (f64::INFINITY, 0.0);
        for _ in 0..3 {
            let h = (hi - lo) / 2047.0;
            for i in 0..2048 {
                let t = lo + h * i as f64;
                let v = l2(t);
                if v < best.0 {
                    best = (v, t);
                }
            }
            lo = (best.1 - 2.0 * h).max(0.0);
            hi = best.1 + 2.0 * h;
        }
        worst_c = worst_c.max((opt.value - best.0).abs());
        let herm = (0..5)
            .map(|k| coupled_matrix(&gm, &s, k as f64 * 0.7).hermitian_defect())
            .fold(0.0, f64::max);
        pass &= herm <= 1e-12;
    }
    pass &= worst_c <= COUPLED_GRID_TOL;
    notes.push(format!("λ₂ {worst_c:.1e}"));

    // Sphere: Rayleigh quotient and a DH objective against raw sampling.
    let m = random_hermitian(&mut g, 5);
    let q = minimize_sphere_multistart(
        &|v: &[C64]| Some(vector::dot(v, &m.mul_vec(v)).re),
        &ComplexMatrix::identity(5),
        &[],
        &SphereOptions::default(),
    )
    .unwrap();
    let quad = (q.value - hermitian_eig(&m).unwrap().min()).abs();
    pass &= quad <= SPHERE_QUAD_TOL;
    let t = random_dh(3, 90, Some(2), Some(2));
    let r = dh_delta0(&t, DhKind::JRE).unwrap();
    let est = sample_null_space_upper_bound(
        OracleProblem::Dh(&t, DhKind::JRE),
        &OracleOptions {
            trials: 1_000_000,
            polish: 0,
            polish_steps: 0,
            ..Default::default()
        },
    )
    .unwrap();
    pass &= r.value <= est.value + SPHERE_SAMPLE_TOL;
    notes.push(format!(
        "sphere quad {quad:.1e}, JRE {:.6} vs 10⁶-sample {:.6}",
        r.value, est.value
    ));

    // Midpoint certificates.
    let fam = AffineHermitianFamily::new(
        random_hermitian(&mut g, 5),
        vec![random_hermitian(&mut g, 5), random_hermitian(&mut g, 5)],
    )
    .unwrap();
    let mut violations = 0usize;
    for _ in 0..1000 {
        let a = [g.random_range(-5.0..5.0), g.random_range(-5.0..5.0)];
        let b = [g.random_range(-5.0..5.0), g.random_range(-5.0..5.0)];
        let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        if fam.lambda_min(&mid) < 0.5 * (fam.lambda_min(&a) + fam.lambda_min(&b)) - CONVEXITY_TOL {
            violations += 1;
        }
        if fam.lambda_max(&mid) > 0.5 * (fam.lambda_max(&a) + fam.lambda_max(&b)) + CONVEXITY_TOL {
            violations += 1;
        }
    }
    pass &= violations == 0;
    notes.push(format!("midpoint violations {violations}"));
    outcome(pass, notes.join(", "))
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0_f64;
    for tag in [
        StructureTag::Unstructured,
        StructureTag::Hermitian,
        StructureTag::SkewHermitian,
        StructureTag::StarEven,
        StructureTag::StarOdd,
    ] {
        for i in 0..20 {
            let p = random_polynomial(tag, 2 + (i as usize % 5), 1, 10_000 + i);
            let r = poly_delta0(&p).unwrap();
            let pencil = delta0_structured(&StructuredPencil::new(
                p.coeffs[0].clone(),
                p.coeffs[1].clone(),
                tag,
            ))
            .unwrap();
            worst = worst.max((r.value - pencil.value).abs());
        }
    }
    for star in [Star::Adjoint, Star::Transpose] {
        for i in 0..20 {
            let p: MatrixPolynomial =
                random_polynomial(star.tag(), 2 + (i as usize % 5), 1, 11_000 + i);
            let r = poly_delta0_palindromic(&p, star).unwrap();
            let pencil = delta0_palindromic(&p.coeffs[0], star).unwrap();
            worst = worst
                .max((r.bound_distance - pencil.value).abs() / (1.0 + pencil.value))
                .max((r.report.as_ref().unwrap().value - pencil.value).abs());
        }
    }
    outcome(
        worst <= DEGREE_ONE_TOL,
        format!("140 instances, max deviation {worst:.1e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("DH reference regression", criterion_1),
        ("analytic 2x2 Gram cross-check", criterion_2),
        ("Hermitian equality suite", criterion_3),
        ("rank-one attainment suite", criterion_4),
        ("palindromic stationarity", criterion_5),
        ("DH oracle suite", criterion_6),
        ("bound-chain suite", criterion_7),
        ("backward-error closed form", criterion_8),
        ("optimizer oracles", criterion_9),
        ("polynomial degree-1 consistency", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}; {:.1}s)",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
