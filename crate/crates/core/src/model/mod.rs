//! Structured pencils, DH triples and matrix polynomials.

mod generate;
mod io;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::{lambda_min, ComplexMatrix};

pub use generate::{
    is_regular, is_regular_with, random_dh, random_pencil, random_polynomial, random_structured,
    Generated, RegularityVerdict,
};
pub use io::{read_json, InputFile, ReadError};
pub use report::{real, DistanceReport, Perturbation, Sign};

/// Relative tolerance used by every structure check.
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureTag {
    Unstructured,
    Hermitian,
    SkewHermitian,
    StarEven,
    StarOdd,
    StarPalindromic,
    TPalindromic,
    DissipativeHamiltonian,
}

impl StructureTag {
    pub const ALL: [StructureTag; 8] = [
        StructureTag::Unstructured,
        StructureTag::Hermitian,
        StructureTag::SkewHermitian,
        StructureTag::StarEven,
        StructureTag::StarOdd,
        StructureTag::StarPalindromic,
        StructureTag::TPalindromic,
        StructureTag::DissipativeHamiltonian,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StructureTag::Unstructured => "unstructured",
            StructureTag::Hermitian => "hermitian",
            StructureTag::SkewHermitian => "skew-hermitian",
            StructureTag::StarEven => "star-even",
            StructureTag::StarOdd => "star-odd",
            StructureTag::StarPalindromic => "star-palindromic",
            StructureTag::TPalindromic => "t-palindromic",
            StructureTag::DissipativeHamiltonian => "dissipative-hamiltonian",
        }
    }

    /// The involution for palindromic tags.
    pub fn star(self) -> Option<Star> {
        match self {
            StructureTag::StarPalindromic => Some(Star::Adjoint),
            StructureTag::TPalindromic => Some(Star::Transpose),
            _ => None,
        }
    }
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StructureTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StructureTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown structure tag `{s}`"))
    }
}

/// `⋆ ∈ {*, T}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Star {
    Adjoint,
    Transpose,
}

impl Star {
    pub fn apply(self, m: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Star::Adjoint => m.adjoint(),
            Star::Transpose => m.transpose(),
        }
    }

    pub fn tag(self) -> StructureTag {
        match self {
            Star::Adjoint => StructureTag::StarPalindromic,
            Star::Transpose => StructureTag::TPalindromic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: String,
    pub defect: f64,
}

impl Violation {
    fn new(invariant: impl Into<String>, defect: f64) -> Self {
        Violation {
            invariant: invariant.into(),
            defect,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (defect {:.3e})", self.invariant, self.defect)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructuredPencil {
    pub a: ComplexMatrix,
    pub e: ComplexMatrix,
    pub tag: StructureTag,
}

impl StructuredPencil {
    pub fn new(a: ComplexMatrix, e: ComplexMatrix, tag: StructureTag) -> Self {
        StructuredPencil { a, e, tag }
    }

    /// `E = A^⋆` for a palindromic tag.
    pub fn palindromic(a: ComplexMatrix, star: Star) -> Self {
        let e = star.apply(&a);
        StructuredPencil {
            a,
            e,
            tag: star.tag(),
        }
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// `A + λE`.
    pub fn at(&self, lambda: crate::C64) -> ComplexMatrix {
        &self.a + &self.e.scale(lambda)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !check_square_pair(&self.a, &self.e, "A", "E", &mut out) {
            return out;
        }
        let (a, e) = (&self.a, &self.e);
        match self.tag {
            StructureTag::Unstructured => {}
            StructureTag::Hermitian => {
                hermitian(a, "A = A*", &mut out);
                hermitian(e, "E = E*", &mut out);
            }
            StructureTag::SkewHermitian => {
                skew(a, "A = -A*", &mut out);
                skew(e, "E = -E*", &mut out);
            }
            StructureTag::StarEven => {
                hermitian(a, "A = A*", &mut out);
                skew(e, "E = -E*", &mut out);
            }
            StructureTag::StarOdd => {
                skew(a, "A = -A*", &mut out);
                hermitian(e, "E = E*", &mut out);
            }
            StructureTag::StarPalindromic | StructureTag::TPalindromic => {
                let star = self.tag.star().expect("palindromic");
                let d = (e - &star.apply(a)).norm_fro();
                let label = if star == Star::Adjoint {
                    "E = A*"
                } else {
                    "E = A^T"
                };
                if d > STRUCTURE_TOL * (1.0 + a.norm_fro()) {
                    out.push(Violation::new(label, d));
                }
            }
            StructureTag::DissipativeHamiltonian => {
                out.push(Violation::new(
                    "pencils carry no DH tag; use a (J, R, E) triple",
                    f64::NAN,
                ));
            }
        }
        out
    }
}

/// `sE + (J - R)` with `J` skew-Hermitian and `R, E ⪰ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DhTriple {
    pub j: ComplexMatrix,
    pub r: ComplexMatrix,
    pub e: ComplexMatrix,
}

impl DhTriple {
    pub fn new(j: ComplexMatrix, r: ComplexMatrix, e: ComplexMatrix) -> Self {
        DhTriple { j, r, e }
    }

    pub fn n(&self) -> usize {
        self.j.rows()
    }

    /// The pencil `A + sE` with `A = J - R`.
    pub fn pencil(&self) -> StructuredPencil {
        StructuredPencil::new(
            &self.j - &self.r,
            self.e.clone(),
            StructureTag::Unstructured,
        )
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !check_square_pair(&self.j, &self.r, "J", "R", &mut out)
            || !check_square_pair(&self.j, &self.e, "J", "E", &mut out)
        {
            return out;
        }
        skew(&self.j, "J = -J*", &mut out);
        psd(&self.r, "R", &mut out);
        psd(&self.e, "E", &mut out);
        out
    }
}

/// `P(s) = Σ s^j A_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    pub coeffs: Vec<ComplexMatrix>,
    pub tag: StructureTag,
}

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<ComplexMatrix>, tag: StructureTag) -> Self {
        MatrixPolynomial { coeffs, tag }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn n(&self) -> usize {
        self.coeffs.first().map_or(0, |c| c.rows())
    }

    pub fn at(&self, s: crate::C64) -> ComplexMatrix {
        let n = self.n();
        let mut acc = ComplexMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(s) + c;
        }
        acc
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.coeffs.is_empty() {
            out.push(Violation::new("at least one coefficient", f64::NAN));
            return out;
        }
        let n = self.coeffs[0].rows();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.rows() != n || c.cols() != n {
                out.push(Violation::new(format!("A{j} is {n}x{n}"), f64::NAN));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let m = self.degree();
        for (j, c) in self.coeffs.iter().enumerate() {
            let even = j % 2 == 0;
            match self.tag {
                StructureTag::Unstructured => {}
                StructureTag::Hermitian => hermitian(c, &format!("A{j} = A{j}*"), &mut out),
                StructureTag::SkewHermitian => skew(c, &format!("A{j} = -A{j}*"), &mut out),
                StructureTag::StarEven | StructureTag::StarOdd => {
                    let herm = even == (self.tag == StructureTag::StarEven);
                    if herm {
                        hermitian(c, &format!("A{j} = A{j}*"), &mut out);
                    } else {
                        skew(c, &format!("A{j} = -A{j}*"), &mut out);
                    }
                }
                StructureTag::StarPalindromic | StructureTag::TPalindromic => {
                    let star = self.tag.star().expect("palindromic");
                    let d = (c - &star.apply(&self.coeffs[m - j])).norm_fro();
                    if d > STRUCTURE_TOL * (1.0 + c.norm_fro()) {
                        out.push(Violation::new(
                            format!("A{j} = A{}^{}", m - j, star_symbol(star)),
                            d,
                        ));
                    }
                }
                StructureTag::DissipativeHamiltonian => {
                    out.push(Violation::new("DH polynomials are not supported", f64::NAN));
                    break;
                }
            }
        }
        out
    }
}

fn star_symbol(star: Star) -> &'static str {
    match star {
        Star::Adjoint => "*",
        Star::Transpose => "T",
    }
}

fn check_square_pair(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    nx: &str,
    ny: &str,
    out: &mut Vec<Violation>,
) -> bool {
    let mut ok = true;
    if !x.is_square() {
        out.push(Violation::new(format!("{nx} is square"), f64::NAN));
        ok = false;
    }
    if x.rows() != y.rows() || x.cols() != y.cols() {
        out.push(Violation::new(
            format!("{nx} and {ny} have the same shape"),
            f64::NAN,
        ));
        ok = false;
    }
    ok
}

fn hermitian(m: &ComplexMatrix, label: &str, out: &mut Vec<Violation>) {
    let d = m.hermitian_defect();
    if d > STRUCTURE_TOL * (1.0 + m.norm_fro()) {
        out.push(Violation::new(label, d));
    }
}

fn skew(m: &ComplexMatrix, label: &str, out: &mut Vec<Violation>) {
    let d = m.skew_defect();
    if d > STRUCTURE_TOL * (1.0 + m.norm_fro()) {
        out.push(Violation::new(label, d));
    }
}

fn psd(m: &ComplexMatrix, name: &str, out: &mut Vec<Violation>) {
    let before = out.len();
    hermitian(m, &format!("{name} = {name}*"), out);
    if out.len() > before {
        return;
    }
    match lambda_min(&m.hermitian_part()) {
        Ok(l) if l >= -STRUCTURE_TOL * (1.0 + m.norm_fro()) => {}
        Ok(l) => out.push(Violation::new(format!("{name} ⪰ 0"), -l)),
        Err(_) => out.push(Violation::new(format!("{name} ⪰ 0"), f64::NAN)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_ok() {
        let p = StructuredPencil::new(
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
            ComplexMatrix::identity(2),
            StructureTag::Hermitian,
        );
        assert!(p.validate().is_empty());
    }

    #[test]
    fn hermitian_violation() {
        let p = StructuredPencil::new(
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[2.0, 0.0]]),
            ComplexMatrix::identity(2),
            StructureTag::Hermitian,
        );
        let v = p.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].invariant, "A = A*");
    }

    #[test]
    fn dh_psd_violation() {
        let t = DhTriple::new(
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::from_real_diag(&[1.0, -0.1]),
            ComplexMatrix::identity(2),
        );
        let v = t.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].invariant.contains("R"));
        assert!((v[0].defect - 0.1).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch() {
        let p = StructuredPencil::new(
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(3),
            StructureTag::Unstructured,
        );
        assert!(!p.validate().is_empty());
    }

    #[test]
    fn tag_round_trip() {
        for t in StructureTag::ALL {
            assert_eq!(t.as_str().parse::<StructureTag>().unwrap(), t);
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.as_str()));
        }
    }

    #[test]
    fn star_even_polynomial() {
        let h = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        let s = h.scale(crate::linalg::I);
        let p = MatrixPolynomial::new(
            vec![h.clone(), s.clone(), h.clone()],
            StructureTag::StarEven,
        );
        assert!(p.validate().is_empty());
        let q = MatrixPolynomial::new(vec![h.clone(), h.clone()], StructureTag::StarEven);
        assert_eq!(q.validate().len(), 1);
    }

    #[test]
    fn polynomial_horner() {
        let p = MatrixPolynomial::new(
            vec![
                ComplexMatrix::identity(1),
                ComplexMatrix::identity(1).scale_real(2.0),
            ],
            StructureTag::Unstructured,
        );
        assert!((p.at(crate::C64::new(3.0, 0.0))[(0, 0)].re - 7.0).abs() < 1e-15);
    }
}
