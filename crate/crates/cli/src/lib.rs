//! Command-line front end for `pathring`.
//!
//! Every command produces an ordered list of rows. `--format rows` prints
//! them as `key<TAB>value` lines; `--format text` aligns them.
//!
//! Exit codes: 0 success, 1 a check failed, 2 unreadable or malformed
//! input, 3 invalid cdga, 4 basis cap exceeded, 5 path too close to a
//! puncture, 6 tolerance not met.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use twofloat::TwoFloat;

use pathring::bar::{self, bar_cohomology, build_bar_with, verify_concentration, verify_connectedness, BarError, BarOptions};
use pathring::cdga::document::{load_cdga, CdgaInput, DocumentError};
use pathring::cdga::{formal_model, Augmentation, Cdga};
use pathring::chen::document::{load_chen, ChenDocumentError, ChenInput};
use pathring::chen::{self, canonical_k_form, ChenError, KForm, Precision, Real, StepStats};
use pathring::hopf::{check_cocomposition, check_hopf_axioms, compare_with_bar, concentration_from_kunneth, verify_cotorsor, CotorsorData, HopfError, TensorWordAlgebra};
use pathring::report::Rows;
use pathring::sullivan::{self, bg_stages, stage_rows, SullivanError};
use pathring::{Rational, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID_CDGA: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_TOO_CLOSE: i32 = 5;
pub const EXIT_TOLERANCE: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "pathring", version, about = "Reduced bar complexes, shuffle Hopf algebras and iterated integrals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Rows,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BarArgs {
    /// CDGA document.
    pub input: PathBuf,
    /// Maximal word length.
    #[arg(long, default_value_t = 3)]
    pub truncation: usize,
    /// Augmentation on the right (`ξ`); defaults to the one named `xi`, else the first one.
    #[arg(long)]
    pub xi: Option<String>,
    /// Augmentation on the left (`η`); defaults to the one named `eta`, else `ξ`.
    #[arg(long)]
    pub eta: Option<String>,
    /// Largest admissible number of bar basis words.
    #[arg(long, default_value_t = bar::DEFAULT_BASIS_CAP)]
    pub basis_cap: usize,
}

#[derive(Debug, Args)]
pub struct HopfArgs {
    /// CDGA document; its formal model supplies the letters.
    pub input: Option<PathBuf>,
    /// Number of letters when no document is given.
    #[arg(long, default_value_t = 2)]
    pub letters: usize,
    #[arg(long, default_value_t = 3)]
    pub truncation: usize,
    /// Also print the shuffle, coproduct and antipode tables.
    #[arg(long)]
    pub tables: bool,
    #[arg(long, default_value_t = bar::DEFAULT_BASIS_CAP)]
    pub basis_cap: usize,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = sullivan::DEFAULT_STAGES)]
    pub stages: usize,
    #[arg(long, default_value_t = sullivan::DEFAULT_DEGREE_CAP)]
    pub degree_cap: usize,
    #[arg(long, default_value_t = sullivan::DEFAULT_BASIS_CAP)]
    pub basis_cap: usize,
}

#[derive(Debug, Args)]
pub struct ChenArgs {
    /// Path document.
    pub input: PathBuf,
    /// Absolute tolerance.
    #[arg(long, default_value_t = chen::DEFAULT_TOL)]
    pub tol: f64,
    /// Mantissa bits: up to 53 runs in double precision, up to 106 in double-double.
    #[arg(long, default_value_t = 53)]
    pub precision_bits: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cohomology of the truncated reduced bar complex.
    Bar(BarArgs),
    /// Connectedness, concentration, Hopf and cotorsor checks.
    Verify(BarArgs),
    /// Hopf algebra axioms and cocomposition on the word algebra.
    Hopf(HopfArgs),
    /// Cofibrant replacement stages.
    Model(ModelArgs),
    /// Iterated integrals and parallel transport along a path.
    Transport(ChenArgs),
    /// Pairing of word classes with a path.
    Pair(ChenArgs),
}

/// Result of a run: the rows produced so far and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub rows: Rows,
    pub error: Option<String>,
}

impl Outcome {
    fn finished(rows: Rows) -> Self {
        let failed = rows.iter().any(|(_, v)| v == "FAIL");
        Outcome { code: if failed { EXIT_FAIL } else { EXIT_OK }, rows, error: None }
    }

    fn error(code: i32, message: impl Into<String>) -> Self {
        Outcome { code, rows: Rows::new(), error: Some(message.into()) }
    }
}

fn read(path: &PathBuf) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome::error(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn document_error(e: DocumentError) -> Outcome {
    let code = match e {
        DocumentError::Cdga(_) => EXIT_INVALID_CDGA,
        _ => EXIT_PARSE,
    };
    Outcome::error(code, e.to_string())
}

fn bar_error(e: BarError) -> Outcome {
    let code = match e {
        BarError::BasisCapExceeded { .. } => EXIT_CAP,
        BarError::InvalidCdga(_) | BarError::InvalidAugmentation(_) | BarError::DifferentialSquareNonzero { .. } => EXIT_INVALID_CDGA,
        _ => EXIT_FAIL,
    };
    Outcome::error(code, e.to_string())
}

fn hopf_error(e: HopfError) -> Outcome {
    Outcome::error(EXIT_FAIL, e.to_string())
}

fn sullivan_error(e: SullivanError) -> Outcome {
    let code = match e {
        SullivanError::BasisCapExceeded { .. } => EXIT_CAP,
        _ => EXIT_INVALID_CDGA,
    };
    Outcome::error(code, e.to_string())
}

fn chen_error(e: ChenError) -> Outcome {
    let code = match e {
        ChenError::PathTooClose { .. } => EXIT_TOO_CLOSE,
        ChenError::ToleranceNotMet { .. } => EXIT_TOLERANCE,
        _ => EXIT_PARSE,
    };
    Outcome::error(code, e.to_string())
}

fn chen_document_error(e: ChenDocumentError) -> Outcome {
    match e {
        ChenDocumentError::Chen(inner) => chen_error(inner),
        other => Outcome::error(EXIT_PARSE, other.to_string()),
    }
}

fn augmentations(input: &CdgaInput, xi: Option<&str>, eta: Option<&str>) -> Result<(Augmentation, Augmentation), Outcome> {
    let pick = |name: Option<&str>| -> Result<Option<Augmentation>, Outcome> {
        match name {
            Some(n) => input.augmentation(n).cloned().map(Some).map_err(document_error),
            None => Ok(None),
        }
    };
    let default = match input.augmentations.get("xi").or_else(|| input.augmentations.values().next()) {
        Some(a) => a.clone(),
        None => Augmentation::unit_only(&input.cdga).map_err(|e| Outcome::error(EXIT_INVALID_CDGA, e.to_string()))?,
    };
    let right = pick(xi)?.unwrap_or(default);
    let left = match pick(eta)? {
        Some(a) => a,
        None => input.augmentations.get("eta").cloned().unwrap_or_else(|| right.clone()),
    };
    Ok((right, left))
}

fn load(path: &PathBuf) -> Result<CdgaInput, Outcome> {
    load_cdga(&read(path)?).map_err(document_error)
}

fn bar_rows(args: &BarArgs) -> Result<Rows, Outcome> {
    let input = load(&args.input)?;
    let (xi, eta) = augmentations(&input, args.xi.as_deref(), args.eta.as_deref())?;
    let b = build_bar_with(&input.cdga, &xi, &eta, args.truncation, BarOptions { basis_cap: args.basis_cap }).map_err(bar_error)?;
    let mut rows = Rows::new();
    rows.push("letters", b.letters().names().join(","));
    rows.push("truncation", b.truncation());
    rows.push("words", b.total_dim());
    let degrees: Vec<i64> = b.degrees().collect();
    for &d in &degrees {
        rows.push(format!("dim.{d}"), b.dim_in(d));
    }
    for &d in &degrees {
        rows.push(format!("H^{d}"), bar_cohomology(&b, d).dimension);
    }
    for (n, dim) in bar::h0_length_dimensions(&b).iter().enumerate() {
        rows.push(format!("H^0.length.{n}"), dim);
    }
    Ok(rows)
}

/// For distinct augmentations, compares the path ring with the loop ring at `ξ`.
fn kunneth_rows(input: &CdgaInput, xi: &Augmentation, eta: &Augmentation, path_dims: &BTreeMap<i64, usize>, args: &BarArgs) -> Result<Option<Rows>, Outcome> {
    if xi.values() == eta.values() {
        return Ok(None);
    }
    let l = build_bar_with(&input.cdga, xi, xi, args.truncation, BarOptions { basis_cap: args.basis_cap }).map_err(bar_error)?;
    let loop_dims = verify_concentration(&l).dimensions;
    let mut rows = Rows::new();
    for (d, dim) in &loop_dims {
        rows.push(format!("loop.H^{d}"), dim);
    }
    match concentration_from_kunneth(&loop_dims, path_dims) {
        Ok(k) => {
            rows.extend(k.to_rows());
            rows.push("kunneth.concentrated", if k.concentrated() { "yes" } else { "no" });
        }
        Err(e) => rows.push("kunneth.skipped", e),
    }
    Ok(Some(rows))
}

fn verify_rows(args: &BarArgs) -> Result<Rows, Outcome> {
    let input = load(&args.input)?;
    let (xi, eta) = augmentations(&input, args.xi.as_deref(), args.eta.as_deref())?;
    let b = build_bar_with(&input.cdga, &xi, &eta, args.truncation, BarOptions { basis_cap: args.basis_cap }).map_err(bar_error)?;
    let mut rows = Rows::new();
    let conc = verify_concentration(&b);
    rows.extend(conc.to_rows());
    rows.push("connectedness", verify_connectedness(&b).verdict);

    match formal_model(&input.cdga) {
        Ok(fm) => {
            rows.push("formal_model.letters", fm.letter_count());
            let h = TensorWordAlgebra::new(fm.h1_letters.clone(), args.truncation);
            rows.extend_prefixed("hopf", check_hopf_axioms(&h).to_rows(h.letters()));
            let unit = Augmentation::unit_only(&fm.model).map_err(|e| Outcome::error(EXIT_INVALID_CDGA, e.to_string()))?;
            let fb = build_bar_with(&fm.model, &unit, &unit, args.truncation, BarOptions { basis_cap: args.basis_cap }).map_err(bar_error)?;
            rows.extend_prefixed("hopf", compare_with_bar(&fb, &h).map_err(bar_error)?.to_rows());
            if fm.letter_count() > 0 {
                let c: Vec<Rational> = (1..=fm.letter_count() as i64).map(|k| Rational::from_integer(k.into())).collect();
                for p in [CotorsorData::trivial(&h), CotorsorData::translated(&h, &c)] {
                    let report = verify_cotorsor(&p, &h).map_err(hopf_error)?;
                    rows.extend_prefixed(&format!("cotorsor.{}", p.name), report.to_rows());
                }
            }
        }
        Err(e) => rows.push("formal_model", format!("none ({e})")),
    }
    if let Some(k) = kunneth_rows(&input, &xi, &eta, &conc.dimensions, args)? {
        rows.extend(k);
    }
    Ok(rows)
}

fn hopf_rows(args: &HopfArgs) -> Result<Rows, Outcome> {
    let letters: Vec<String> = match &args.input {
        Some(path) => {
            let input = load(path)?;
            formal_model(&input.cdga).map_err(|e| Outcome::error(EXIT_INVALID_CDGA, e.to_string()))?.h1_letters
        }
        None => (0..args.letters).map(|i| format!("w{i}")).collect(),
    };
    let estimated = pathring::word::word_count(letters.len(), args.truncation);
    if estimated > args.basis_cap {
        return Err(bar_error(BarError::BasisCapExceeded { estimated, cap: args.basis_cap }));
    }
    let h = TensorWordAlgebra::new(letters.clone(), args.truncation);
    let mut rows = Rows::new();
    rows.push("letters", letters.join(","));
    rows.push("truncation", args.truncation);
    rows.push("dim", h.dim());
    rows.extend(check_hopf_axioms(&h).to_rows(h.letters()));
    rows.extend(check_cocomposition(&h).map_err(hopf_error)?);
    let model: Cdga = pathring::cdga::formal_cdga("1", &letters);
    let unit = Augmentation::unit_only(&model).map_err(|e| Outcome::error(EXIT_INVALID_CDGA, e.to_string()))?;
    let b = build_bar_with(&model, &unit, &unit, args.truncation, BarOptions { basis_cap: args.basis_cap }).map_err(bar_error)?;
    rows.extend(compare_with_bar(&b, &h).map_err(bar_error)?.to_rows());
    if args.tables {
        rows.extend_prefixed("table", h.tables());
    }
    Ok(rows)
}

fn model_rows(args: &ModelArgs) -> Result<Rows, Outcome> {
    let input = load(&args.input)?;
    let stages = bg_stages(&input.cdga, args.stages, args.degree_cap, args.basis_cap).map_err(sullivan_error)?;
    let mut rows = Rows::new();
    rows.push("stages", stages.len());
    for s in &stages {
        rows.extend_prefixed(&format!("L{}", s.algebra.stage()), stage_rows(s, &input.cdga));
    }
    if let Some(last) = stages.last() {
        rows.push("augmentation_count", sullivan::augmentation_count(&last.algebra).count);
    }
    Ok(rows)
}

fn load_chen_input(args: &ChenArgs) -> Result<ChenInput, Outcome> {
    load_chen(&read(&args.input)?).map_err(chen_document_error)
}

fn word_key(w: &Word) -> String {
    let letters: Vec<String> = w.letters().iter().map(usize::to_string).collect();
    format!("[{}]", letters.join(","))
}

fn push_complex<T: Real>(rows: &mut Rows, key: &str, z: Complex<T>) {
    rows.push(format!("{key}.re"), z.re.render());
    rows.push(format!("{key}.im"), z.im.render());
}

fn push_stats(rows: &mut Rows, key: &str, s: &StepStats) {
    rows.push(format!("{key}.error_estimate"), format!("{:.3e}", s.error_estimate));
    rows.push(format!("{key}.steps"), s.steps);
}

fn transport_typed<T: Real>(input: &ChenInput, tol: f64) -> Result<Rows, ChenError> {
    let mut rows = Rows::new();
    if !input.words.is_empty() {
        let r = chen::iterated_integrals::<T>(&input.line, &input.path, &input.words, tol)?;
        rows.push("clearance", format!("{:.6e}", r.clearance));
        for (w, v) in r.words.iter().zip(&r.values) {
            push_complex(&mut rows, &format!("I{}", word_key(w)), *v);
        }
        push_stats(&mut rows, "integrals", &r.stats);
    }
    if let Some(c) = &input.connection {
        let t = chen::transport::<T>(&input.line, c, &input.path, tol)?;
        let o = chen::transport_ode::<T>(&input.line, c, &input.path, tol)?;
        let mut gap = 0.0f64;
        for i in 0..c.rank() {
            for j in 0..c.rank() {
                push_complex(&mut rows, &format!("T.{i}.{j}"), t.matrix[i][j]);
                gap = gap.max((t.matrix[i][j] - o.matrix[i][j]).norm().lossy_f64());
            }
        }
        push_stats(&mut rows, "transport", &t.stats);
        rows.push("transport.ode_gap", format!("{gap:.3e}"));
        rows.push("transport.ode_agreement", pathring::report::Verdict::from_bool(gap <= 10.0 * tol));
        if let Some(split) = &input.splitting {
            match canonical_k_form(c, split) {
                KForm::Canonical { .. } => rows.push("k_form", "canonical"),
                KForm::Obstructed { entries } => {
                    let list: Vec<String> = entries.iter().map(|(i, j, k)| format!("{i}.{j}:w{k}")).collect();
                    rows.push("k_form", format!("obstructed {}", list.join(",")));
                }
            }
        }
    }
    Ok(rows)
}

fn pair_typed<T: Real>(input: &ChenInput, tol: f64) -> Result<Rows, ChenError> {
    let mut rows = Rows::new();
    for (name, class) in &input.classes {
        let (v, stats) = chen::pair::<T>(&input.line, &input.path, class, tol)?;
        push_complex(&mut rows, &format!("pair.{name}"), v);
        push_stats(&mut rows, &format!("pair.{name}"), &stats);
    }
    Ok(rows)
}

fn chen_rows(args: &ChenArgs, pairing: bool) -> Result<Rows, Outcome> {
    let precision = Precision::from_bits(args.precision_bits).map_err(chen_error)?;
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(chen_error(ChenError::InvalidTolerance));
    }
    let input = load_chen_input(args)?;
    let mut rows = Rows::new();
    rows.push("precision_bits", precision.bits());
    rows.push("tol", format!("{:e}", args.tol));
    let body = match (precision, pairing) {
        (Precision::Double, false) => transport_typed::<f64>(&input, args.tol),
        (Precision::DoubleDouble, false) => transport_typed::<TwoFloat>(&input, args.tol),
        (Precision::Double, true) => pair_typed::<f64>(&input, args.tol),
        (Precision::DoubleDouble, true) => pair_typed::<TwoFloat>(&input, args.tol),
    };
    rows.extend(body.map_err(chen_error)?);
    Ok(rows)
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Bar(a) => bar_rows(a),
        Command::Verify(a) => verify_rows(a),
        Command::Hopf(a) => hopf_rows(a),
        Command::Model(a) => model_rows(a),
        Command::Transport(a) => chen_rows(a, false),
        Command::Pair(a) => chen_rows(a, true),
    };
    match result {
        Ok(rows) => Outcome::finished(rows),
        Err(outcome) => outcome,
    }
}

pub fn render(rows: &Rows, format: Format) -> String {
    match format {
        Format::Text => rows.to_text(),
        Format::Rows => rows.to_machine(),
    }
}
