//! JSON encodings. Complex scalars are `[re, im]` pairs.

use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{DhTriple, MatrixPolynomial, Star, StructureTag, StructuredPencil};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            data: self.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        let data = r.data.iter().map(|p| C64::new(p[0], p[1])).collect();
        ComplexMatrix::new(r.rows, r.cols, data).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PencilRepr {
    tag: StructureTag,
    #[serde(rename = "A")]
    a: ComplexMatrix,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    e: Option<ComplexMatrix>,
}

impl Serialize for StructuredPencil {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PencilRepr {
            tag: self.tag,
            a: self.a.clone(),
            e: Some(self.e.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StructuredPencil {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PencilRepr::deserialize(d)?;
        let e = match (r.e, r.tag.star()) {
            (Some(e), _) => e,
            (None, Some(star)) => star.apply(&r.a),
            (None, None) => return Err(D::Error::missing_field("E")),
        };
        Ok(StructuredPencil::new(r.a, e, r.tag))
    }
}

#[derive(Serialize, Deserialize)]
struct DhRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tag: Option<StructureTag>,
    #[serde(rename = "J")]
    j: ComplexMatrix,
    #[serde(rename = "R")]
    r: ComplexMatrix,
    #[serde(rename = "E")]
    e: ComplexMatrix,
}

impl Serialize for DhTriple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DhRepr {
            tag: Some(StructureTag::DissipativeHamiltonian),
            j: self.j.clone(),
            r: self.r.clone(),
            e: self.e.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DhTriple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = DhRepr::deserialize(d)?;
        if let Some(t) = r.tag {
            if t != StructureTag::DissipativeHamiltonian {
                return Err(D::Error::custom(format!("DH file carries tag `{t}`")));
            }
        }
        Ok(DhTriple::new(r.j, r.r, r.e))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    tag: StructureTag,
    coeffs: Vec<ComplexMatrix>,
}

impl Serialize for MatrixPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            tag: self.tag,
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        Ok(MatrixPolynomial::new(r.coeffs, r.tag))
    }
}

impl Serialize for Star {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Star::Adjoint => "*",
            Star::Transpose => "T",
        })
    }
}

impl<'de> Deserialize<'de> for Star {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "*" | "adjoint" => Ok(Star::Adjoint),
            "T" | "transpose" => Ok(Star::Transpose),
            other => Err(D::Error::custom(format!("unknown star `{other}`"))),
        }
    }
}

/// Any of the three input file kinds, detected by their keys.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum InputFile {
    Dh(DhTriple),
    Polynomial(MatrixPolynomial),
    Pencil(StructuredPencil),
}

impl<'de> Deserialize<'de> for InputFile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let obj = v
            .as_object()
            .ok_or_else(|| D::Error::custom("expected a JSON object"))?;
        if obj.contains_key("J") {
            serde_json::from_value(v)
                .map(InputFile::Dh)
                .map_err(D::Error::custom)
        } else if obj.contains_key("coeffs") {
            serde_json::from_value(v)
                .map(InputFile::Polynomial)
                .map_err(D::Error::custom)
        } else if obj.contains_key("A") {
            serde_json::from_value(v)
                .map(InputFile::Pencil)
                .map_err(D::Error::custom)
        } else {
            Err(D::Error::custom(
                "expected keys `A`/`E`, `J`/`R`/`E` or `coeffs`",
            ))
        }
    }
}

impl InputFile {
    pub fn validate(&self) -> Vec<super::Violation> {
        match self {
            InputFile::Dh(t) => t.validate(),
            InputFile::Polynomial(p) => p.validate(),
            InputFile::Pencil(p) => p.validate(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ReadError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ReadError::Parse {
        path: path.display().to_string(),
        source,
    })
}
