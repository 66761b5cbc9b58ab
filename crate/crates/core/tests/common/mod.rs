//! Instance builders shared by the integration tests.

#![allow(dead_code)]

use pencildist::linalg::svd;
use pencildist::random::{
    random_matrix, random_psd_rank, random_skew_hermitian, seeded, SeededRng,
};
use pencildist::{ComplexMatrix, DhKind, DhTriple};
use rand::Rng;

pub fn rng(seed: u64) -> SeededRng {
    seeded(seed)
}

/// Random unitary from the left singular vectors of a Gaussian matrix.
pub fn unitary(g: &mut SeededRng, n: usize) -> ComplexMatrix {
    svd(&random_matrix(g, n, n)).unwrap().u
}

/// `I - Q_k Q_k*` for the first `k` columns of `q`.
pub fn projector_out(q: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let n = q.rows();
    let qk = q.columns(0, k);
    &ComplexMatrix::identity(n) - &qk.matmul(&qk.adjoint())
}

fn squeeze(p: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    p.matmul(m).matmul(p)
}

fn skew_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m - &m.adjoint()).scale_real(0.5)
}

/// DH triple whose unperturbed matrices for `kind` share a common kernel, so
/// the distance is finite.
pub fn dh_for_kind(kind: DhKind, n: usize, seed: u64) -> DhTriple {
    let mut g = rng(seed);
    let k = g.random_range(1..=n.saturating_sub(1).clamp(1, 2));
    let q = unitary(&mut g, n);
    let p = projector_out(&q, k);
    let j = random_skew_hermitian(&mut g, n);
    let r_rank = g.random_range(1..=n);
    let e_rank = g.random_range(1..=n);
    let r = random_psd_rank(&mut g, n, r_rank);
    let e = random_psd_rank(&mut g, n, e_rank);
    let [pj, pr, pe] = kind.perturbed();
    let pick = |flag: bool, m: ComplexMatrix| {
        if flag || kind == DhKind::Unstructured {
            m
        } else {
            squeeze(&p, &m)
        }
    };
    DhTriple::new(
        skew_part(&pick(pj, j)),
        pick(pr, r).hermitian_part(),
        pick(pe, e).hermitian_part(),
    )
}
