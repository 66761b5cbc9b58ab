//! Subcommand bodies and exit-code classification.

use std::fmt;
use std::path::Path;

use anyhow::{bail, Context};
use pencildist::backward::{choose_lambda_family, delta_lower_bound, LambdaFamily};
use pencildist::dh::{dh_delta0_with, DhOptions};
use pencildist::model::{
    random_dh, random_pencil, random_polynomial, read_json, InputFile, ReadError,
};
use pencildist::optimize::BoxOptions;
use pencildist::poly::{poly_delta0, poly_delta0_palindromic_with, MiddleWeighting};
use pencildist::{
    delta0_structured, dh_frobenius_norm_of_optimum, verify_common_null, DhKind, DistanceReport,
    Error, MatrixPolynomial, StructureTag, StructuredPencil, C64,
};

use crate::output::ReportFile;
use crate::{CommonArgs, GenerateArgs};

/// Wrong kind of input for the command.
#[derive(Debug)]
pub struct Usage(pub String);

/// A check that ran and did not pass.
#[derive(Debug)]
pub struct Failure(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FAIL: {}", self.0)
    }
}

impl std::error::Error for Usage {}
impl std::error::Error for Failure {}

/// 1 for I/O and parsing, 2 for invalid input, 3 for numerical failures and failed checks.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<ReadError>()
            || cause.is::<std::io::Error>()
            || cause.is::<serde_json::Error>()
        {
            return 1;
        }
        if cause.is::<Usage>() {
            return 2;
        }
        if cause.is::<Failure>() {
            return 3;
        }
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::InvalidStructure(_)
                | Error::NotPalindromic { .. }
                | Error::UnsupportedTag(_)
                | Error::LambdaNotAdmissible { .. } => 2,
                _ => 3,
            };
        }
    }
    3
}

fn read_input(path: &Path) -> anyhow::Result<InputFile> {
    Ok(read_json::<InputFile>(path)?)
}

fn check(violations: Vec<pencildist::model::Violation>) -> anyhow::Result<()> {
    if violations.is_empty() {
        return Ok(());
    }
    let list: Vec<String> = violations
        .iter()
        .map(|v| format!("  {} (defect {:e})", v.invariant, v.defect))
        .collect();
    Err(anyhow::Error::new(Error::InvalidStructure(violations))
        .context(format!("validation failed:\n{}", list.join("\n"))))
}

fn pencil_input(c: &CommonArgs) -> anyhow::Result<StructuredPencil> {
    match read_input(&c.file)? {
        InputFile::Pencil(p) => {
            let tag = c.tag.unwrap_or(p.tag);
            let p = StructuredPencil::new(p.a, p.e, tag);
            check(p.validate())?;
            Ok(p)
        }
        InputFile::Dh(_) => bail!(Usage("DH input: use `distance dh`".into())),
        InputFile::Polynomial(_) => bail!(Usage("polynomial input: use `distance poly`".into())),
    }
}

fn emit(mut file: ReportFile, c: &CommonArgs) -> anyhow::Result<()> {
    if !c.emit_perturbations {
        file.report.perturbations.clear();
    }
    print!("{}", file.render(c.format)?);
    Ok(())
}

pub fn null_space(c: &CommonArgs) -> anyhow::Result<()> {
    let p = pencil_input(c)?;
    let report = delta0_structured(&p)?;
    emit(
        ReportFile {
            command: "null-space".into(),
            structure: p.tag,
            kind: None,
            input: InputFile::Pencil(p),
            report,
            frobenius_value: None,
            lb_unstructured: None,
            lb_structured: None,
            palindromic: None,
        },
        c,
    )
}

pub fn dh(c: &CommonArgs, kind: DhKind) -> anyhow::Result<()> {
    let t = match read_input(&c.file)? {
        InputFile::Dh(t) => t,
        _ => bail!(Usage(
            "`distance dh` expects a file with keys J, R, E".into()
        )),
    };
    check(t.validate())?;
    let mut opts = DhOptions::default();
    opts.sphere.seed = c.seed;
    if let Some(tol) = c.tol {
        opts.rank_tol = tol;
    }
    let report = dh_delta0_with(&t, kind, &opts)?;
    let frobenius_value = if report.is_finite() {
        Some(dh_frobenius_norm_of_optimum(&report)?)
    } else {
        None
    };
    emit(
        ReportFile {
            command: "dh".into(),
            structure: StructureTag::DissipativeHamiltonian,
            kind: Some(kind),
            input: InputFile::Dh(t),
            report,
            frobenius_value,
            lb_unstructured: None,
            lb_structured: None,
            palindromic: None,
        },
        c,
    )
}

pub fn poly(c: &CommonArgs) -> anyhow::Result<()> {
    let p = match read_input(&c.file)? {
        InputFile::Polynomial(p) => p,
        InputFile::Pencil(p) => MatrixPolynomial::new(vec![p.a, p.e], p.tag),
        InputFile::Dh(_) => bail!(Usage("DH input: use `distance dh`".into())),
    };
    let p = MatrixPolynomial::new(p.coeffs, c.tag.unwrap_or(p.tag));
    check(p.validate())?;
    let (report, palindromic) = match p.tag.star() {
        Some(star) => {
            let opts = BoxOptions {
                seed: c.seed,
                ..BoxOptions::default()
            };
            let mut pal = poly_delta0_palindromic_with(&p, star, &opts, MiddleWeighting::Half)?;
            let report = pal.report.take().unwrap_or_else(|| {
                let mut r = DistanceReport::infinite();
                r.value = pal.bound_distance;
                r.with_detail("bound_value", pal.bound_value)
            });
            (report, Some(pal))
        }
        None => (poly_delta0(&p)?, None),
    };
    emit(
        ReportFile {
            command: "poly".into(),
            structure: p.tag,
            kind: None,
            input: InputFile::Polynomial(p),
            report,
            frobenius_value: None,
            lb_unstructured: None,
            lb_structured: None,
            palindromic,
        },
        c,
    )
}

pub fn lower_bound(
    c: &CommonArgs,
    lambda_file: Option<&Path>,
    count: Option<usize>,
) -> anyhow::Result<()> {
    let p = pencil_input(c)?;
    let family = match lambda_file {
        Some(path) => {
            let pts: Vec<[f64; 2]> = read_json(path)?;
            LambdaFamily::from_points(&p, pts.iter().map(|z| C64::new(z[0], z[1])).collect())?
        }
        None => choose_lambda_family(&p, count.unwrap_or(p.n() + 1), c.seed)?,
    };
    let structured = delta_lower_bound(&p, &family)?;
    let plain = StructuredPencil::new(p.a.clone(), p.e.clone(), StructureTag::Unstructured);
    let unstructured = delta_lower_bound(&plain, &family)?;
    let mut report = DistanceReport::infinite();
    report.value = structured.value;
    emit(
        ReportFile {
            command: "lower-bound".into(),
            structure: p.tag,
            kind: None,
            input: InputFile::Pencil(p),
            report,
            frobenius_value: None,
            lb_unstructured: Some(unstructured),
            lb_structured: Some(structured),
            palindromic: None,
        },
        c,
    )
}

pub fn generate(g: &GenerateArgs) -> anyhow::Result<()> {
    if g.n == 0 {
        bail!(Usage("--n must be positive".into()));
    }
    let input = match (g.tag, g.degree) {
        (StructureTag::DissipativeHamiltonian, Some(_)) => {
            bail!(Usage("DH polynomials are not supported".into()))
        }
        (StructureTag::DissipativeHamiltonian, None) => {
            InputFile::Dh(random_dh(g.n, g.seed, g.rank_r, g.rank_e))
        }
        (tag, Some(m)) => InputFile::Polynomial(random_polynomial(tag, g.n, m, g.seed)),
        (tag, None) => InputFile::Pencil(random_pencil(tag, g.n, g.seed)),
    };
    let text = serde_json::to_string_pretty(&input)? + "\n";
    match &g.out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn verify(path: &Path) -> anyhow::Result<()> {
    let file: ReportFile = read_json(path)?;
    let r = &file.report;
    let Some(w) = r.witness.as_ref() else {
        bail!(Failure("report has no witness vector".into()));
    };
    if r.perturbations.is_empty() {
        bail!(Failure(
            "report carries no perturbations; rerun with --emit-perturbations".into()
        ));
    }
    let (names, originals): (Vec<String>, Vec<_>) = match &file.input {
        InputFile::Pencil(p) => (vec!["A".into(), "E".into()], vec![p.a.clone(), p.e.clone()]),
        InputFile::Dh(t) => (
            vec!["J".into(), "R".into(), "E".into()],
            vec![t.j.clone(), t.r.clone(), t.e.clone()],
        ),
        InputFile::Polynomial(p) => (
            (0..p.coeffs.len()).map(|j| format!("A{j}")).collect(),
            p.coeffs.clone(),
        ),
    };
    for pert in &r.perturbations {
        if !names.contains(&pert.target) {
            bail!(Failure(format!(
                "unknown perturbation target `{}`",
                pert.target
            )));
        }
    }
    let perturbed: Vec<_> = names
        .iter()
        .zip(&originals)
        .map(
            |(name, m)| match r.perturbations.iter().find(|p| &p.target == name) {
                Some(p) => p.apply(m),
                None => m.clone(),
            },
        )
        .collect();

    let mut failures = Vec::new();
    let wn = pencildist::linalg::vector::norm(w);
    if (wn - 1.0).abs() > 1e-10 {
        failures.push(format!("witness norm {wn} is not 1"));
    }
    let null = verify_common_null(&perturbed, w);
    println!(
        "common-null residual {:e} (threshold {:e})",
        null.residual, null.threshold
    );
    if !null.pass {
        failures.push("common-null residual above threshold".into());
    }
    let norm = r.combined_norm();
    println!("perturbation norm {norm:.12} vs value {:.12}", r.value);
    if (norm - r.value).abs() > 1e-8 * (1.0 + r.value.abs()) || !r.value.is_finite() {
        failures.push(format!(
            "norm-mismatch: perturbation norm {norm} but value {}",
            r.value
        ));
    }
    let rebuilt = match &file.input {
        InputFile::Pencil(p) => InputFile::Pencil(StructuredPencil::new(
            perturbed[0].clone(),
            perturbed[1].clone(),
            p.tag,
        )),
        InputFile::Dh(_) => InputFile::Dh(pencildist::DhTriple::new(
            perturbed[0].clone(),
            perturbed[1].clone(),
            perturbed[2].clone(),
        )),
        InputFile::Polynomial(p) => {
            InputFile::Polynomial(MatrixPolynomial::new(perturbed.clone(), p.tag))
        }
    };
    for v in rebuilt.validate() {
        failures.push(format!(
            "perturbed input breaks `{}` (defect {:e})",
            v.invariant, v.defect
        ));
    }
    if failures.is_empty() {
        println!("PASS");
        Ok(())
    } else {
        for f in &failures {
            println!("FAIL {f}");
        }
        bail!(Failure(failures.join("; ")))
    }
}
