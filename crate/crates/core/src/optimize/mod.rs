//! Eigenvalue optimization over affine Hermitian families and the unit sphere.

mod coupled;
mod line;
mod maxmin;
mod minmax;
mod simplex;
mod sphere;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::linalg::{check_hermitian, eigvalsh, hermitian_eig, ComplexMatrix, LinalgError};

pub use coupled::{coupled_matrix, minimize_lambda2_coupled, Lambda2Options};
pub use line::{golden_section_max, golden_section_min, GOLDEN_MAX_ITER, GOLDEN_TOL};
pub use maxmin::{maximize_lambda_min_box, BoxOptions};
pub use minmax::{minimize_lambda_max_affine, Domain, MinMaxOptions};
pub use simplex::{nelder_mead, NelderMeadOptions};
pub use sphere::{minimize_sphere_multistart, SphereOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceFlag {
    BoundaryApproach,
    Multimodal,
    Multiplicity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerTrace {
    pub evaluations: usize,
    pub best_point: Vec<f64>,
    pub best_value: f64,
    #[serde(default)]
    pub flags: BTreeSet<TraceFlag>,
}

impl OptimizerTrace {
    pub fn new(evaluations: usize, best_point: Vec<f64>, best_value: f64) -> Self {
        OptimizerTrace {
            evaluations: evaluations.max(1),
            best_point,
            best_value,
            flags: BTreeSet::new(),
        }
    }

    pub fn flag(&mut self, f: TraceFlag) {
        self.flags.insert(f);
    }

    pub fn has(&self, f: TraceFlag) -> bool {
        self.flags.contains(&f)
    }
}

/// Result of a finite-dimensional optimization.
#[derive(Clone, Debug, PartialEq)]
pub struct Optimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub trace: OptimizerTrace,
}

/// `H(t) = H₀ + Σ t_i H_i` with Hermitian `H_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineHermitianFamily {
    base: ComplexMatrix,
    directions: Vec<ComplexMatrix>,
}

impl AffineHermitianFamily {
    pub fn new(base: ComplexMatrix, directions: Vec<ComplexMatrix>) -> Result<Self, LinalgError> {
        check_hermitian(&base)?;
        for d in &directions {
            if d.rows() != base.rows() || d.cols() != base.cols() {
                return Err(LinalgError::DimensionMismatch {
                    expected: (base.rows(), base.cols()),
                    found: (d.rows(), d.cols()),
                });
            }
            check_hermitian(d)?;
        }
        Ok(AffineHermitianFamily {
            base: base.hermitian_part(),
            directions: directions.iter().map(|d| d.hermitian_part()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn size(&self) -> usize {
        self.base.rows()
    }

    pub fn base(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn directions(&self) -> &[ComplexMatrix] {
        &self.directions
    }

    pub fn at(&self, t: &[f64]) -> ComplexMatrix {
        assert_eq!(t.len(), self.dim(), "parameter dimension");
        let mut m = self.base.clone();
        for (ti, d) in t.iter().zip(&self.directions) {
            if *ti != 0.0 {
                m = &m + &d.scale_real(*ti);
            }
        }
        m
    }

    pub fn eigenvalues(&self, t: &[f64]) -> Vec<f64> {
        eigvalsh(&self.at(t)).expect("family members are Hermitian")
    }

    pub fn lambda_min(&self, t: &[f64]) -> f64 {
        self.eigenvalues(t)[0]
    }

    pub fn lambda_max(&self, t: &[f64]) -> f64 {
        *self.eigenvalues(t).last().expect("nonempty")
    }

    /// Maximizer of the concave `γ ↦ λ_min(H(γ))` on `[0, 1]` for a
    /// one-parameter family, by bisection on the sign of `u*H₁u`.
    ///
    /// Returns `(γ, λ_min, evaluations)`. Handles smooth maxima and kinks alike.
    pub fn maximize_lambda_min_unit(&self) -> (f64, f64, usize) {
        assert_eq!(self.dim(), 1, "one-parameter family");
        let d = &self.directions[0];
        let slope = |g: f64| -> (f64, f64) {
            let e = hermitian_eig(&self.at(&[g])).expect("family members are Hermitian");
            let u = e.vector(0);
            (crate::linalg::vector::dot(&u, &d.mul_vec(&u)).re, e.min())
        };
        let (s0, l0) = slope(0.0);
        if s0 <= 0.0 {
            return (0.0, l0, 1);
        }
        let (s1, l1) = slope(1.0);
        if s1 >= 0.0 {
            return (1.0, l1, 2);
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut evals = 2;
        while hi - lo > f64::EPSILON * 4.0 && evals < 200 {
            let mid = 0.5 * (lo + hi);
            evals += 1;
            if slope(mid).0 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let candidates = [lo, 0.5 * (lo + hi), hi];
        let mut best = (candidates[0], self.lambda_min(&[candidates[0]]));
        for &g in &candidates[1..] {
            let v = self.lambda_min(&[g]);
            if v > best.1 {
                best = (g, v);
            }
        }
        (best.0, best.1, evals + 3)
    }
}

/// Lexicographic comparison used for tie-breaking between equal optima.
pub(crate) fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}
