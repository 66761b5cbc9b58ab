//! Seeded random structured inputs and the regularity probe.

use rand::Rng;

use super::{DhTriple, MatrixPolynomial, StructureTag, StructuredPencil};
use crate::linalg::{sigma_min, ComplexMatrix, C64};
use crate::random::{
    random_hermitian, random_matrix, random_psd_rank, random_skew_hermitian, seeded,
};

#[derive(Clone, Debug, PartialEq)]
pub enum Generated {
    Pencil(StructuredPencil),
    Dh(DhTriple),
}

/// A random pencil with the given structure. Panics on the DH tag.
pub fn random_pencil(tag: StructureTag, n: usize, seed: u64) -> StructuredPencil {
    let mut rng = seeded(seed);
    let (a, e) = match tag {
        StructureTag::Unstructured => {
            (random_matrix(&mut rng, n, n), random_matrix(&mut rng, n, n))
        }
        StructureTag::Hermitian => (random_hermitian(&mut rng, n), random_hermitian(&mut rng, n)),
        StructureTag::SkewHermitian => (
            random_skew_hermitian(&mut rng, n),
            random_skew_hermitian(&mut rng, n),
        ),
        StructureTag::StarEven => (
            random_hermitian(&mut rng, n),
            random_skew_hermitian(&mut rng, n),
        ),
        StructureTag::StarOdd => (
            random_skew_hermitian(&mut rng, n),
            random_hermitian(&mut rng, n),
        ),
        StructureTag::StarPalindromic | StructureTag::TPalindromic => {
            let a = random_matrix(&mut rng, n, n);
            return StructuredPencil::palindromic(a, tag.star().expect("palindromic"));
        }
        StructureTag::DissipativeHamiltonian => panic!("use random_dh for DH triples"),
    };
    StructuredPencil::new(a, e, tag)
}

/// A random DH triple; `rank_r` / `rank_e` below `n` make `R` / `E` singular.
pub fn random_dh(n: usize, seed: u64, rank_r: Option<usize>, rank_e: Option<usize>) -> DhTriple {
    let mut rng = seeded(seed);
    let j = random_skew_hermitian(&mut rng, n);
    let r = random_psd_rank(&mut rng, n, rank_r.unwrap_or(n));
    let e = random_psd_rank(&mut rng, n, rank_e.unwrap_or(n));
    DhTriple::new(j, r, e)
}

pub fn random_structured(tag: StructureTag, n: usize, seed: u64) -> Generated {
    match tag {
        StructureTag::DissipativeHamiltonian => Generated::Dh(random_dh(n, seed, None, None)),
        t => Generated::Pencil(random_pencil(t, n, seed)),
    }
}

/// A random degree-`m` polynomial whose coefficients satisfy `tag`.
pub fn random_polynomial(tag: StructureTag, n: usize, m: usize, seed: u64) -> MatrixPolynomial {
    let mut rng = seeded(seed);
    let mut coeffs: Vec<ComplexMatrix> = Vec::with_capacity(m + 1);
    if let Some(star) = tag.star() {
        let mut slots: Vec<Option<ComplexMatrix>> = vec![None; m + 1];
        for j in 0..=m / 2 {
            let b = random_matrix(&mut rng, n, n);
            if j == m - j {
                slots[j] = Some((&b + &star.apply(&b)).scale_real(0.5));
            } else {
                slots[m - j] = Some(star.apply(&b));
                slots[j] = Some(b);
            }
        }
        coeffs.extend(slots.into_iter().map(|c| c.expect("filled")));
        return MatrixPolynomial::new(coeffs, tag);
    }
    for j in 0..=m {
        let even = j % 2 == 0;
        let c = match tag {
            StructureTag::Unstructured => random_matrix(&mut rng, n, n),
            StructureTag::Hermitian => random_hermitian(&mut rng, n),
            StructureTag::SkewHermitian => random_skew_hermitian(&mut rng, n),
            StructureTag::StarEven if even => random_hermitian(&mut rng, n),
            StructureTag::StarEven => random_skew_hermitian(&mut rng, n),
            StructureTag::StarOdd if even => random_skew_hermitian(&mut rng, n),
            StructureTag::StarOdd => random_hermitian(&mut rng, n),
            _ => panic!("no polynomial generator for {tag}"),
        };
        coeffs.push(c);
    }
    MatrixPolynomial::new(coeffs, tag)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityVerdict {
    pub regular: bool,
    /// A point where `A + λE` was found invertible.
    pub lambda: Option<C64>,
    /// Largest `σ_min(A + λE)` seen over the probes.
    pub best_sigma_min: f64,
    pub probes: usize,
    /// A negative verdict only means every probe failed.
    pub probabilistic: bool,
}

pub fn is_regular(pencil: &StructuredPencil, probes: usize) -> RegularityVerdict {
    is_regular_with(pencil, probes, 0)
}

pub fn is_regular_with(pencil: &StructuredPencil, probes: usize, seed: u64) -> RegularityVerdict {
    let probes = probes.max(1);
    let mut rng = seeded(seed ^ 0x9e37_79b9_7f4a_7c15);
    let na = pencil.a.norm2();
    let ne = pencil.e.norm2();
    let smin_e = sigma_min(&pencil.e).unwrap_or(0.0);
    let radius = 1.0 + na / (1.0 + smin_e);
    let mut best = 0.0_f64;
    for k in 0..probes {
        let r = radius * rng.random::<f64>().sqrt();
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        let lambda = C64::from_polar(r, theta);
        let s = sigma_min(&pencil.at(lambda)).unwrap_or(0.0);
        best = best.max(s);
        if s > 1e-10 * (1.0 + na + lambda.norm() * ne) {
            return RegularityVerdict {
                regular: true,
                lambda: Some(lambda),
                best_sigma_min: best,
                probes: k + 1,
                probabilistic: false,
            };
        }
    }
    RegularityVerdict {
        regular: false,
        lambda: None,
        best_sigma_min: best,
        probes,
        probabilistic: true,
    }
}
