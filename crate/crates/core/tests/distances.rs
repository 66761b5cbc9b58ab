//! Null-space distances against sampled and gridded oracles.

mod common;

use pencildist::dh::{dh_delta0, dh_frobenius_norm_of_optimum, DhKind};
use pencildist::linalg::{null_space_basis, sigma_min, vector, DEFAULT_RANK_TOL};
use pencildist::model::{random_dh, random_polynomial, StructureTag, StructuredPencil};
use pencildist::nullspace::{
    delta0_a_only, delta0_e_only, delta0_palindromic, delta0_structured, delta0_unstructured,
};
use pencildist::oracle::{sample_null_space_upper_bound, OracleOptions, OracleProblem};
use pencildist::poly::{poly_delta0, poly_delta0_palindromic};
use pencildist::random::{random_hermitian, random_matrix, random_unit_vector};
use pencildist::{ComplexMatrix, MatrixPolynomial, Star, C64};

fn pencil_cost(a: &ComplexMatrix, e: &ComplexMatrix, v: &[C64]) -> f64 {
    (vector::norm_sqr(&a.mul_vec(v)) + vector::norm_sqr(&e.mul_vec(v))).sqrt()
}

#[test]
fn unstructured_against_random_directions() {
    let mut g = common::rng(21);
    let a = random_matrix(&mut g, 5, 5);
    let e = random_matrix(&mut g, 5, 5);
    let r = delta0_unstructured(&a, &e).unwrap();
    let sampled = (0..10_000)
        .map(|_| pencil_cost(&a, &e, &random_unit_vector(&mut g, 5)))
        .fold(f64::INFINITY, f64::min);
    assert!(r.value <= sampled);
    assert!((pencil_cost(&a, &e, r.witness.as_ref().unwrap()) - r.value).abs() < 1e-8);
}

#[test]
fn diagonal_examples() {
    let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
    let e = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
    assert!((delta0_unstructured(&a, &e).unwrap().value - 10f64.sqrt()).abs() < 1e-12);
    let h = delta0_structured(&StructuredPencil::new(a, e, StructureTag::Hermitian)).unwrap();
    assert!((h.value - 10f64.sqrt()).abs() < 1e-12);
    for p in &h.perturbations {
        assert!(p.matrix.hermitian_defect() < 1e-12);
    }
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
    let e = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
    assert!((delta0_a_only(&a, &e).unwrap().value - 20f64.sqrt()).abs() < 1e-12);
    let a = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
    let e = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
    assert!((delta0_e_only(&a, &e).unwrap().value - 10f64.sqrt()).abs() < 1e-12);
}

/// `min ‖A U c‖` over unit `c ∈ ℂ²` on a (θ, φ) grid with zoomed refinement.
fn kernel_grid_min(au: &ComplexMatrix) -> f64 {
    let f = |t: f64, p: f64| {
        let c = [C64::new(t.cos(), 0.0), C64::from_polar(t.sin(), p)];
        vector::norm(&au.mul_vec(&c))
    };
    let (mut lo, mut hi) = (
        [0.0, 0.0],
        [std::f64::consts::FRAC_PI_2, 2.0 * std::f64::consts::PI],
    );
    let mut best = (f64::INFINITY, [0.0, 0.0]);
    for _ in 0..12 {
        let h = [(hi[0] - lo[0]) / 40.0, (hi[1] - lo[1]) / 40.0];
        for i in 0..=40 {
            for j in 0..=40 {
                let x = [lo[0] + h[0] * i as f64, lo[1] + h[1] * j as f64];
                let v = f(x[0], x[1]);
                if v < best.0 {
                    best = (v, x);
                }
            }
        }
        for k in 0..2 {
            lo[k] = best.1[k] - 2.0 * h[k];
            hi[k] = best.1[k] + 2.0 * h[k];
        }
    }
    best.0
}

#[test]
fn a_only_matches_kernel_grid() {
    let mut g = common::rng(22);
    for _ in 0..3 {
        let a = random_matrix(&mut g, 5, 5);
        let e = random_matrix(&mut g, 5, 3).matmul(&random_matrix(&mut g, 3, 5));
        let u = null_space_basis(&e, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(u.cols(), 2);
        let r = delta0_a_only(&a, &e).unwrap();
        assert!((r.value - kernel_grid_min(&a.matmul(&u))).abs() < 1e-6);
        assert!((delta0_e_only(&e, &a).unwrap().value - r.value).abs() < 1e-12);
    }
}

#[test]
fn structured_equals_unstructured_for_hermitian_pairs() {
    let mut g = common::rng(23);
    let a = random_hermitian(&mut g, 6);
    let e = random_hermitian(&mut g, 6);
    let u = delta0_unstructured(&a, &e).unwrap().value;
    let s = delta0_structured(&StructuredPencil::new(
        a.clone(),
        e.clone(),
        StructureTag::Hermitian,
    ))
    .unwrap()
    .value;
    assert_eq!(u, s);
    // Even pencil: A Hermitian, E skew.
    let ie = e.scale(pencildist::linalg::I);
    let even = delta0_structured(&StructuredPencil::new(
        a.clone(),
        ie.clone(),
        StructureTag::StarEven,
    ))
    .unwrap()
    .value;
    assert!((even - delta0_unstructured(&a, &ie).unwrap().value).abs() < 1e-12);
}

#[test]
fn palindromic_examples() {
    let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
    let r = delta0_palindromic(&a, Star::Adjoint).unwrap();
    assert!((r.value - 2f64.sqrt()).abs() < 1e-10);

    let mut g = common::rng(24);
    for star in [Star::Adjoint, Star::Transpose] {
        let a = random_matrix(&mut g, 4, 4);
        let r = delta0_palindromic(&a, star).unwrap();
        assert!(r.value >= 2f64.sqrt() * sigma_min(&a).unwrap() - 1e-12);
        let ast = star.apply(&a);
        let sampled = (0..10_000)
            .map(|_| {
                let v = random_unit_vector(&mut g, 4);
                2.0 * vector::norm_sqr(&a.mul_vec(&v)).max(vector::norm_sqr(&ast.mul_vec(&v)))
            })
            .fold(f64::INFINITY, f64::min);
        assert!(r.value * r.value <= sampled);
    }
}

#[test]
fn dh_table_rows() {
    let j = ComplexMatrix::from_real_rows(&[&[0.0, -0.5], &[0.5, 0.0]]);
    let r = ComplexMatrix::from_real_rows(&[&[0.18, 0.42], &[0.42, 1.03]]);
    let t = |e: &[f64]| {
        pencildist::DhTriple::new(j.clone(), r.clone(), ComplexMatrix::from_real_diag(e))
    };
    assert!(
        (dh_delta0(&t(&[0.0, 1.0]), DhKind::Unstructured)
            .unwrap()
            .value
            - 0.5819)
            .abs()
            < 5e-5
    );
    assert!(
        (dh_delta0(&t(&[1.0, 0.0]), DhKind::Unstructured)
            .unwrap()
            .value
            - 0.9822)
            .abs()
            < 5e-5
    );
    let s = dh_delta0(&t(&[1.0, 1.0]), DhKind::JRE).unwrap();
    assert!((s.value - 1.1181).abs() < 5e-4);
    assert!((dh_frobenius_norm_of_optimum(&s).unwrap() - 1.2248).abs() < 5e-4);
}

#[test]
fn dh_structured_dominates_unstructured() {
    for seed in 0..10 {
        let t = random_dh(4, seed, Some(3), Some(2));
        let u = dh_delta0(&t, DhKind::Unstructured).unwrap().value;
        let s = dh_delta0(&t, DhKind::JRE).unwrap().value;
        assert!(s >= u - 1e-9, "seed {seed}: {s} < {u}");
    }
}

#[test]
fn dh_rank_one_frobenius_matches_spectral() {
    for seed in 0..10 {
        let t = common::dh_for_kind(DhKind::RE, 4, 300 + seed);
        let r = dh_delta0(&t, DhKind::RE).unwrap();
        if r.is_finite() {
            let f = dh_frobenius_norm_of_optimum(&r).unwrap();
            assert!((f - r.combined_norm()).abs() < 1e-10 * (1.0 + f));
        }
    }
}

#[test]
fn poly_examples() {
    let coeffs: Vec<ComplexMatrix> = (0..3)
        .map(|j| ComplexMatrix::from_real_diag(&[j as f64 + 1.0, 0.0]))
        .collect();
    let p = MatrixPolynomial::new(coeffs, StructureTag::Unstructured);
    assert!(poly_delta0(&p).unwrap().value.abs() < 1e-14);

    let p = random_polynomial(StructureTag::Hermitian, 4, 3, 25);
    let r = poly_delta0(&p).unwrap();
    let cost = |v: &[C64]| {
        p.coeffs
            .iter()
            .map(|a| vector::norm_sqr(&a.mul_vec(v)))
            .sum::<f64>()
            .sqrt()
    };
    let mut g = common::rng(25);
    let sampled = (0..10_000)
        .map(|_| cost(&random_unit_vector(&mut g, 4)))
        .fold(f64::INFINITY, f64::min);
    assert!(r.value <= sampled);
    assert!((cost(r.witness.as_ref().unwrap()) - r.value).abs() < 1e-8);

    let u = delta0_unstructured(&p.coeffs[0], &p.coeffs[1])
        .unwrap()
        .value;
    let p1 = MatrixPolynomial::new(p.coeffs[..2].to_vec(), StructureTag::Hermitian);
    assert!((poly_delta0(&p1).unwrap().value - u).abs() < 1e-12);
}

#[test]
fn palindromic_quadratic_with_identity_ends() {
    let mut g = common::rng(26);
    let a1 = random_hermitian(&mut g, 3);
    let i3 = ComplexMatrix::identity(3);
    let p = MatrixPolynomial::new(vec![i3.clone(), a1, i3], StructureTag::StarPalindromic);
    let r = poly_delta0_palindromic(&p, Star::Adjoint).unwrap();
    let est = sample_null_space_upper_bound(
        OracleProblem::Poly(&p),
        &OracleOptions {
            trials: 10_000,
            polish: 0,
            polish_steps: 0,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(r.bound_distance <= est.value + 1e-12);
}

#[test]
fn palindromic_poly_common_kernel_is_zero() {
    let a0 = ComplexMatrix::from_real_diag(&[1.0, 2.0, 0.0]);
    let a1 = ComplexMatrix::from_real_diag(&[3.0, -1.0, 0.0]);
    let p = MatrixPolynomial::new(vec![a0.clone(), a1, a0], StructureTag::StarPalindromic);
    let r = poly_delta0_palindromic(&p, Star::Adjoint).unwrap();
    assert!(r.bound_value.abs() < 1e-12);
}
