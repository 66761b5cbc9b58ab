//! Report files and the three output formats.

use std::fmt::Write as _;

use pencildist::backward::LowerBound;
use pencildist::model::InputFile;
use pencildist::poly::PalindromicPolyReport;
use pencildist::{DhKind, DistanceReport, StructureTag};
use serde::{Deserialize, Serialize};

use crate::Format;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: String,
    pub structure: StructureTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<DhKind>,
    pub input: InputFile,
    pub report: DistanceReport,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_real")]
    pub frobenius_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lb_unstructured: Option<LowerBound>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lb_structured: Option<LowerBound>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub palindromic: Option<PalindromicPolyReport>,
}

mod opt_real {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "pencildist::model::real")] f64);

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        x.map(W).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

pub const CSV_HEADER: &str = "structure,kind,value,frobenius_value,lb_unstructured,lb_structured";

pub fn num(x: Option<f64>) -> String {
    match x {
        None => String::new(),
        Some(v) if v.is_infinite() => {
            if v > 0.0 {
                "inf".into()
            } else {
                "-inf".into()
            }
        }
        Some(v) if v.is_nan() => "nan".into(),
        Some(v) => format!("{v:.12e}"),
    }
}

impl ReportFile {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.structure,
            self.kind.map(|k| k.to_string()).unwrap_or_default(),
            num(Some(self.report.value)),
            num(self.frobenius_value),
            num(self.lb_unstructured.as_ref().map(|l| l.value)),
            num(self.lb_structured.as_ref().map(|l| l.value)),
        )
    }

    pub fn pretty(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command     {}", self.command);
        let _ = writeln!(s, "structure   {}", self.structure);
        if let Some(k) = self.kind {
            let _ = writeln!(s, "kind        {k}");
        }
        let _ = writeln!(s, "value       {}", num(Some(self.report.value)));
        if let Some(f) = self.frobenius_value {
            let _ = writeln!(s, "frobenius   {}", num(Some(f)));
        }
        for (name, lb) in [
            ("lb (unstr.)", &self.lb_unstructured),
            ("lb (struct)", &self.lb_structured),
        ] {
            if let Some(lb) = lb {
                let _ = writeln!(s, "{name} {}", num(Some(lb.value)));
                for p in &lb.points {
                    let _ = write!(
                        s,
                        "    λ = {:+.6}{:+.6}i  η = {}",
                        p.lambda.re,
                        p.lambda.im,
                        num(Some(p.eta))
                    );
                    if let Some(why) = &p.skipped {
                        let _ = write!(s, "  (skipped: {why})");
                    }
                    s.push('\n');
                }
            }
        }
        if let Some(p) = &self.palindromic {
            let _ = writeln!(s, "2λ̂          {}", num(Some(p.bound_value)));
            let _ = writeln!(s, "certified   {}", p.equality_certified);
        }
        for (k, v) in &self.report.details {
            let _ = writeln!(s, "{k:<11} {}", num(Some(*v)));
        }
        if let Some(t) = &self.report.trace {
            if !t.flags.is_empty() {
                let flags: Vec<String> = t.flags.iter().map(|f| format!("{f:?}")).collect();
                let _ = writeln!(s, "flags       {}", flags.join(", "));
            }
        }
        s
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        Ok(match format {
            Format::Json => serde_json::to_string_pretty(self)? + "\n",
            Format::Csv => format!("{CSV_HEADER}\n{}\n", self.csv_row()),
            Format::Pretty => self.pretty(),
        })
    }
}
