//! The three-row DH example: `J`, `R` fixed, `E` diagonal.

use anyhow::bail;
use pencildist::{dh_delta0, dh_frobenius_norm_of_optimum, ComplexMatrix, DhKind, DhTriple};
use serde::Serialize;

use crate::Format;

const TOL: f64 = 5e-4;

/// `(E diagonal, δ₀, √2·δ₀, Frobenius, structured δ₀)`.
const REFERENCE: [([f64; 2], [f64; 4]); 3] = [
    ([0.0, 1.0], [0.5819, 0.8229, 1.2248, 1.1181]),
    ([1.0, 0.0], [0.9822, 1.3890, 1.2248, 1.1181]),
    ([1.0, 1.0], [1.1181, 1.5812, 1.2248, 1.1181]),
];

#[derive(Serialize)]
pub struct Row {
    pub e: [f64; 2],
    pub unstructured: f64,
    pub sqrt2_unstructured: f64,
    pub frobenius: f64,
    pub structured: f64,
    pub matches: bool,
}

pub fn triple(e: [f64; 2]) -> DhTriple {
    DhTriple::new(
        ComplexMatrix::from_real_rows(&[&[0.0, -0.5], &[0.5, 0.0]]),
        ComplexMatrix::from_real_rows(&[&[0.18, 0.42], &[0.42, 1.03]]),
        ComplexMatrix::from_real_diag(&e),
    )
}

pub fn rows() -> anyhow::Result<Vec<Row>> {
    REFERENCE
        .iter()
        .map(|(e, want)| {
            let t = triple(*e);
            let u = dh_delta0(&t, DhKind::Unstructured)?.value;
            let s = dh_delta0(&t, DhKind::JRE)?;
            let f = dh_frobenius_norm_of_optimum(&s)?;
            let got = [u, std::f64::consts::SQRT_2 * u, f, s.value];
            let matches = got.iter().zip(want).all(|(g, w)| (g - w).abs() <= TOL);
            Ok(Row {
                e: *e,
                unstructured: got[0],
                sqrt2_unstructured: got[1],
                frobenius: got[2],
                structured: got[3],
                matches,
            })
        })
        .collect()
}

pub fn run(format: Format) -> anyhow::Result<()> {
    let rows = rows()?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv => {
            let mut s = String::from("E,delta0,sqrt2_delta0,frobenius_ub,delta0_dh,match\n");
            for r in &rows {
                s += &format!(
                    "diag({};{}),{:.6},{:.6},{:.6},{:.6},{}\n",
                    r.e[0],
                    r.e[1],
                    r.unstructured,
                    r.sqrt2_unstructured,
                    r.frobenius,
                    r.structured,
                    r.matches
                );
            }
            s
        }
        Format::Pretty => {
            let mut s = format!(
                "{:<12} {:>9} {:>9} {:>9} {:>9}  match\n",
                "E", "δ₀", "√2·δ₀", "Frob.", "δ₀ (DH)"
            );
            for r in &rows {
                s += &format!(
                    "{:<12} {:>9.5} {:>9.5} {:>9.5} {:>9.5}  {}\n",
                    format!("diag({},{})", r.e[0], r.e[1]),
                    r.unstructured,
                    r.sqrt2_unstructured,
                    r.frobenius,
                    r.structured,
                    if r.matches { "yes" } else { "NO" }
                );
            }
            s
        }
    };
    print!("{text}");
    if rows.iter().any(|r| !r.matches) {
        bail!(crate::run::Failure(
            "table values differ from the reference beyond 5e-4".into()
        ));
    }
    Ok(())
}
