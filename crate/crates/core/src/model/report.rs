use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{ComplexMatrix, C64};
use crate::optimize::OptimizerTrace;

/// How a perturbation enters: `M - Δ` (null-space distances) or `M + Δ` (DH).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Subtract,
    Add,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub target: String,
    pub sign: Sign,
    pub matrix: ComplexMatrix,
}

impl Perturbation {
    pub fn new(target: impl Into<String>, sign: Sign, matrix: ComplexMatrix) -> Self {
        Perturbation {
            target: target.into(),
            sign,
            matrix,
        }
    }

    /// The perturbed matrix `original ∓ Δ`.
    pub fn apply(&self, original: &ComplexMatrix) -> ComplexMatrix {
        match self.sign {
            Sign::Subtract => original - &self.matrix,
            Sign::Add => original + &self.matrix,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    #[serde(with = "real")]
    pub value: f64,
    #[serde(default)]
    pub perturbations: Vec<Perturbation>,
    #[serde(default)]
    pub witness: Option<Vec<C64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<OptimizerTrace>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty", with = "real_map")]
    pub details: BTreeMap<String, f64>,
}

impl DistanceReport {
    pub fn new(value: f64, perturbations: Vec<Perturbation>, witness: Vec<C64>) -> Self {
        DistanceReport {
            value,
            perturbations,
            witness: Some(witness),
            trace: None,
            details: BTreeMap::new(),
        }
    }

    pub fn infinite() -> Self {
        DistanceReport {
            value: f64::INFINITY,
            perturbations: Vec::new(),
            witness: None,
            trace: None,
            details: BTreeMap::new(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn with_trace(mut self, trace: OptimizerTrace) -> Self {
        self.trace = Some(trace);
        self
    }

    pub fn perturbation(&self, target: &str) -> Option<&ComplexMatrix> {
        self.perturbations
            .iter()
            .find(|p| p.target == target)
            .map(|p| &p.matrix)
    }

    /// `sqrt(Σ ‖Δ‖₂²)` over all perturbations.
    pub fn combined_norm(&self) -> f64 {
        self.perturbations
            .iter()
            .map(|p| p.matrix.norm2().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `sqrt(Σ ‖Δ‖_F²)` over all perturbations.
    pub fn combined_frobenius(&self) -> f64 {
        self.perturbations
            .iter()
            .map(|p| p.matrix.norm_fro().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// `f64` with non-finite values written as the strings `"inf"`, `"-inf"`, `"nan"`.
pub mod real {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(D::Error::custom(format!(
                    "expected a number or \"inf\", got `{other}`"
                ))),
            },
        }
    }

    pub(crate) fn wrap(x: f64) -> Wrapped {
        Wrapped(x)
    }

    #[derive(serde::Serialize, serde::Deserialize)]
    pub(crate) struct Wrapped(#[serde(with = "self")] pub f64);
}

mod real_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::real;

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        let w: BTreeMap<&String, real::Wrapped> =
            m.iter().map(|(k, v)| (k, real::wrap(*v))).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
        let w = BTreeMap::<String, real::Wrapped>::deserialize(d)?;
        Ok(w.into_iter().map(|(k, v)| (k, v.0)).collect())
    }
}
