//! The `curvlab` command line.
//!
//! Exit codes: 0 success, 1 I/O, parse or usage errors, 2 mathematical
//! rejection (not Kähler, not almost isotropic, structure violated, ...).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::distribution::fit_skew_from_samples;
use crate::error::{Error, Result};
use crate::io::{load_matrix, matrix_rows, parse_samples, parse_tensor, save_tensor, Report, Status};
use crate::isotropy::recover_decomposition;
use crate::kahler::{classify_kahler_detailed, KahlerClass};
use crate::instances::block_j;
use crate::linalg::{
    random_skew, standard_complex_structure, ComplexStructure, SkewEndomorphism, Subspace, DEFAULT_TOL,
};
use crate::suite::{render_table, run_suite, SuiteConfig};
use crate::tensor::{build_model, Tau};

pub const TOL_ENV: &str = "CURVLAB_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "curvlab", version, about = "Almost isotropic curvature tensors")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Numerical tolerance (overrides CURVLAB_TOL; default 1e-9).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the model tensor κR₁ + τR_A to a tensor file.
    Generate {
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long, allow_negative_numbers = true)]
        tau: i64,
        /// J | zero | random:SEED | blocks:μ1,μ2,... | path to a matrix file
        #[arg(long = "A", value_name = "SPEC")]
        a: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify a Kähler almost isotropic tensor.
    Classify {
        tensor: PathBuf,
        /// standard | path to a matrix file
        #[arg(long = "J", value_name = "SPEC", default_value = "standard")]
        j: String,
    },
    /// Recover (κ, τ, A) from an almost isotropic tensor.
    Decompose { tensor: PathBuf },
    /// Fit a skew map to distribution samples.
    FitDistribution { samples: PathBuf },
    /// Run the seeded property suite.
    LemmaSuite {
        #[arg(long, value_delimiter = ',', default_value = "4,6")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Generate { .. } => "generate",
            Command::Classify { .. } => "classify",
            Command::Decompose { .. } => "decompose",
            Command::FitDistribution { .. } => "fit-distribution",
            Command::LemmaSuite { .. } => "lemma-suite",
        }
    }
}

/// Variant name and exit code for an error.
pub fn classify_error(e: &Error) -> (&'static str, i32) {
    match e {
        Error::NotKahler(_) => ("NotKahler", 2),
        Error::NotAlmostIsotropic(_) => ("NotAlmostIsotropic", 2),
        Error::NoDominantEigenvalue { .. } => ("NotAlmostIsotropic", 2),
        Error::InconsistentKappa(..) => ("NotAlmostIsotropic", 2),
        Error::AmbiguousKappa(..) => ("NotAlmostIsotropic", 2),
        Error::InconsistentTau => ("InconsistentTau", 2),
        Error::SignResolutionFailure(_) => ("SignResolutionFailure", 2),
        Error::StructureViolation(_) => ("StructureViolation", 2),
        Error::SymmetryViolation { .. } => ("SymmetryViolation", 2),
        Error::ConventionViolation(_) => ("ConventionViolation", 2),
        Error::Io(_) => ("Io", 1),
        Error::ParseError(_) => ("ParseError", 1),
        Error::SchemaVersionUnsupported(_) => ("SchemaVersionUnsupported", 1),
        Error::EmptySamples => ("EmptySamples", 1),
        Error::NonPositiveTolerance(_) => ("NonPositiveTolerance", 1),
        _ => ("InvalidInput", 1),
    }
}

/// `--tol`, then `CURVLAB_TOL`, then the default.
fn resolve_tol(flag: Option<f64>) -> Result<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s.trim().parse().map_err(|_| Error::ParseError(format!("{TOL_ENV}={s:?} is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::NonPositiveTolerance(tol));
    }
    Ok(tol)
}

fn read(path: &Path) -> Result<(String, Vec<u8>)> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Error::ParseError(e.to_string()))?;
    Ok((text, bytes))
}

/// Resolves an `--A` specification in dimension `d`.
pub fn parse_a_spec(spec: &str, d: usize) -> Result<SkewEndomorphism> {
    let a = if spec == "J" {
        standard_complex_structure(d)?.as_skew()
    } else if spec == "zero" {
        SkewEndomorphism::zero(d)
    } else if let Some(seed) = spec.strip_prefix("random:") {
        let seed = seed.parse().map_err(|_| Error::ParseError(format!("bad seed in {spec:?}")))?;
        random_skew(d, seed)
    } else if let Some(list) = spec.strip_prefix("blocks:") {
        let mus = list
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::ParseError(format!("bad block list in {spec:?}")))?;
        block_j(&mus)?
    } else {
        SkewEndomorphism::new(load_matrix(spec)?)?
    };
    if a.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: a.dim() });
    }
    Ok(a)
}

pub fn parse_j_spec(spec: &str, d: usize) -> Result<ComplexStructure> {
    let j = if spec == "standard" { standard_complex_structure(d)? } else { ComplexStructure::new(load_matrix(spec)?)? };
    if j.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: j.dim() });
    }
    Ok(j)
}

fn basis_rows(w: &Subspace) -> Value {
    json!(w.basis().iter().map(|b| b.iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>())
}

fn generate(rep: &mut Report, dim: usize, kappa: f64, tau: i64, a_spec: &str, out: &Path) -> Result<()> {
    let tau = Tau::try_from(tau)?;
    let a = parse_a_spec(a_spec, dim)?;
    let r = build_model(kappa, tau, &a)?;
    save_tensor(&r, out)?;
    let sigma = a.spectral_norm();
    let other = kappa + 3.0 * tau.value() * sigma * sigma;
    rep.set("dim", dim)
        .set("kappa", kappa)
        .set("tau", tau.as_i8())
        .set("A", json!(matrix_rows(a.matrix())))
        .set("lambda_range", json!([kappa.min(other), kappa.max(other)]))
        .set("out", out.display().to_string());
    Ok(())
}

fn classify(rep: &mut Report, path: &Path, j_spec: &str, tol: f64) -> Result<()> {
    let (text, bytes) = read(path)?;
    rep.input_digest = Some(crate::io::digest(&bytes));
    let r = parse_tensor(&text, tol)?;
    rep.flag("symmetries", true);
    let j = parse_j_spec(j_spec, r.dim())?;
    let result = classify_kahler_detailed(&r, &j, tol);
    rep.flag("kahler", !matches!(result, Err(Error::NotKahler(_))));
    let cls = result?;
    rep.flag("almost_isotropic", true);
    rep.set("dim", r.dim())
        .set("case", cls.class.case_number())
        .set("tau", cls.decomposition.tau.as_i8())
        .set("decomposition_residual", cls.decomposition.residual);
    match &cls.class {
        KahlerClass::Case1 { kappa } | KahlerClass::Case3 { kappa } => {
            rep.set("kappa", *kappa);
        }
        KahlerClass::Case2 { kappa, mu1, mu2, w1, w2, .. } => {
            rep.set("kappa", *kappa)
                .set("mu1", *mu1)
                .set("mu2", *mu2)
                .set("W1", basis_rows(w1))
                .set("W2", basis_rows(w2));
        }
        KahlerClass::Case4 { c, w } => {
            rep.set("kappa", cls.decomposition.kappa).set("c", *c).set("W", basis_rows(w));
        }
    }
    Ok(())
}

fn decompose(rep: &mut Report, path: &Path, tol: f64) -> Result<()> {
    let (text, bytes) = read(path)?;
    rep.input_digest = Some(crate::io::digest(&bytes));
    let r = parse_tensor(&text, tol)?;
    let dec = recover_decomposition(&r, tol)?;
    rep.set("dim", r.dim())
        .set("kappa", dec.kappa)
        .set("tau", dec.tau.as_i8())
        .set("A", json!(matrix_rows(dec.a.matrix())))
        .set("residual", dec.residual)
        .flag("residual_within_tol", dec.residual <= 1e2 * tol);
    Ok(())
}

fn fit(rep: &mut Report, path: &Path) -> Result<()> {
    let (text, bytes) = read(path)?;
    rep.input_digest = Some(crate::io::digest(&bytes));
    let samples = parse_samples(&text)?;
    let res = fit_skew_from_samples(&samples)?;
    rep.set("dim", samples.dim())
        .set("samples", samples.entries().len())
        .set("tangents", samples.tangent_count())
        .set("A", json!(matrix_rows(res.a.matrix())))
        .set("residual", res.residual)
        .set("gap", res.gap)
        .flag("unique", !res.is_ambiguous());
    Ok(())
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                eprint!("{text}");
            }
            return code;
        }
    };

    let mut rep = Report::new(cli.command.name());
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    rep.set("argv", json!(echo));

    let mut table = None;
    let outcome = resolve_tol(cli.tol).and_then(|tol| {
        rep.set("tol", tol);
        match &cli.command {
            Command::Generate { dim, kappa, tau, a, out } => generate(&mut rep, *dim, *kappa, *tau, a, out),
            Command::Classify { tensor, j } => classify(&mut rep, tensor, j, tol),
            Command::Decompose { tensor } => decompose(&mut rep, tensor, tol),
            Command::FitDistribution { samples } => fit(&mut rep, samples),
            Command::LemmaSuite { dims, trials, seed } => {
                let cfg = SuiteConfig { dims: dims.clone(), trials: *trials, seed: *seed };
                let results = run_suite(&cfg);
                let failed = results.iter().filter(|r| !r.passed()).count();
                rep.set("checks", serde_json::to_value(&results).expect("check results serialize"))
                    .set("failed_checks", failed)
                    .flag("all_passed", failed == 0);
                table = Some(render_table(&results));
                if failed > 0 {
                    rep.fail(Status::Rejected, "LemmaFailure", format!("{failed} checks failed"));
                }
                Ok(())
            }
        }
    });

    let code = match &outcome {
        Ok(()) if rep.status == Status::Ok => 0,
        Ok(()) => 2,
        Err(e) => {
            let (reason, code) = classify_error(e);
            let status = if code == 2 { Status::Rejected } else { Status::Error };
            rep.fail(status, reason, e.to_string());
            code
        }
    };

    let text = match cli.format {
        Format::Json => rep.to_json() + "\n",
        Format::Text => {
            if let Some(t) = table {
                rep.results.remove("checks");
                format!("{}{t}", rep.to_text())
            } else {
                rep.to_text()
            }
        }
    };
    let _ = out.write_all(text.as_bytes());
    code
}
