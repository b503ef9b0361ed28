//! `dualcurve`: sample catalog families, tabulate invariants, run checks and
//! apply group actions.
//!
//! Exit codes: 0 success, 1 check failure, 2 bad input, 3 I/O error,
//! 4 geometry precondition violated at every sample.

mod params;
mod table;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dualcurve::document::{CurveDoc, DocKind, TransformDoc};
use dualcurve::verify::{check_ids, run_all, run_check, Geometry};
use dualcurve::Error;
use serde_json::Value;

use table::{sample, write_table, Format, Row};

#[derive(Parser)]
#[command(name = "dualcurve", version, about = "Curves in the dual affine and dual Lorentz-Minkowski planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Sample count; tables get `samples + 1` rows.
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a catalog family.
    Family {
        /// flat, pure-dual, elliptic, hyperbolic, lorentz-const,
        /// kappa-real-only, straight-line or lightlike.
        name: String,
        /// Family parameter as key=value; repeatable.
        #[arg(short = 'p', long = "param")]
        param: Vec<String>,
        /// Parameters as a JSON object, merged under the -p values.
        #[arg(long)]
        params: Option<String>,
        /// Parameter interval as LO,HI.
        #[arg(long, allow_hyphen_values = true)]
        domain: String,
        /// Write the curve document instead of a table.
        #[arg(long)]
        emit_spec: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate invariants of the curve in a document.
    Invariants {
        spec: PathBuf,
        /// Defaults to the geometry the document belongs to.
        #[arg(long)]
        geometry: Option<Geometry>,
        #[command(flatten)]
        output: Output,
    },
    /// Run named checks and print their reports as JSON.
    Verify {
        check: Option<String>,
        #[arg(long, conflicts_with = "check")]
        all: bool,
        /// Print the registered check ids.
        #[arg(long, conflicts_with_all = ["check", "all"])]
        list: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the check tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Apply an equiaffine map or Lorentz isometry to a curve document.
    Transform {
        spec: PathBuf,
        transform: PathBuf,
        /// Transformed document; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Invariant table of the original curve.
        #[arg(long)]
        before: Option<PathBuf>,
        /// Invariant table of the transformed curve.
        #[arg(long)]
        after: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

/// Failure carrying its exit code.
struct Fail {
    code: u8,
    message: String,
}

impl Fail {
    fn input(message: impl ToString) -> Self {
        Self { code: 2, message: message.to_string() }
    }

    fn io(path: Option<&Path>, e: io::Error) -> Self {
        let message = match path {
            Some(p) => format!("{}: {e}", p.display()),
            None => e.to_string(),
        };
        Self { code: 3, message }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::input(e)
    }
}

type Outcome = Result<u8, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::io(Some(path), e))
}

/// Writes to `path`, or stdout when absent.
fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Fail> {
    match path {
        Some(p) => {
            let mut file = io::BufWriter::new(fs::File::create(p).map_err(|e| Fail::io(Some(p), e))?);
            f(&mut file).and_then(|_| file.flush()).map_err(|e| Fail::io(Some(p), e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock).and_then(|_| lock.flush()).map_err(|e| Fail::io(None, e))
        }
    }
}

fn geometry_of(doc: &CurveDoc, flag: Option<Geometry>) -> Result<Geometry, Fail> {
    flag.or_else(|| doc.geometry())
        .ok_or_else(|| Fail::input("analytic curves need --geometry equiaffine|lorentz"))
}

fn family(name: &str, pairs: &[String], json: Option<&str>, domain: &str, emit_spec: bool, out: &Output) -> Outcome {
    let mut map = match json {
        Some(j) => match serde_json::from_str::<Value>(j) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return Err(Fail::input("--params must be a JSON object")),
            Err(e) => return Err(Fail::input(format!("--params: {e}"))),
        },
        None => Default::default(),
    };
    map.extend(params::parse_params(pairs).map_err(Fail::input)?);
    let domain = params::parse_domain(domain).map_err(Fail::input)?;
    let doc = if name == "lightlike" {
        CurveDoc { kind: DocKind::Lightlike, family: None, params: map, domain }
    } else {
        CurveDoc::catalog(name, map, domain)
    };
    let spec = doc.build()?;
    if emit_spec {
        emit(out.out.as_deref(), |w| writeln!(w, "{}", doc.to_json()))?;
        return Ok(0);
    }
    let geometry = doc.geometry().unwrap_or(Geometry::Lorentz);
    let rows = sample(&spec, geometry, out.samples);
    emit(out.out.as_deref(), |w| write_table(w, &rows, false, out.format))?;
    Ok(0)
}

fn violated_everywhere(rows: &[Row]) -> bool {
    let judged: Vec<&Row> = rows.iter().filter(|r| !r.kappa_exempt()).collect();
    !judged.is_empty() && judged.iter().all(|r| r.kappa.is_none())
}

fn invariants(path: &Path, geometry: Option<Geometry>, out: &Output) -> Outcome {
    let doc = CurveDoc::parse(&read(path)?)?;
    let geometry = geometry_of(&doc, geometry)?;
    let spec = doc.build()?;
    let rows = sample(&spec, geometry, out.samples);
    emit(out.out.as_deref(), |w| write_table(w, &rows, true, out.format))?;
    if violated_everywhere(&rows) {
        let why = rows.iter().find_map(|r| r.error.clone()).unwrap_or_default();
        eprintln!("error: {geometry} preconditions fail at every sample ({why})");
        return Ok(4);
    }
    Ok(0)
}

fn verify(check: Option<&str>, all: bool, list: bool, seed: u64, tol: Option<f64>) -> Outcome {
    if list {
        emit(None, |w| check_ids().iter().try_for_each(|id| writeln!(w, "{id}")))?;
        return Ok(0);
    }
    let (reports, text) = match (check, all) {
        (Some(id), false) => {
            let r = run_check(id, seed, tol)?;
            let text = serde_json::to_string_pretty(&r);
            (vec![r], text)
        }
        (None, true) => {
            let rs = match tol {
                None => run_all(seed),
                Some(_) => check_ids()
                    .iter()
                    .map(|id| run_check(id, seed, tol))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let text = serde_json::to_string_pretty(&rs);
            (rs, text)
        }
        _ => return Err(Fail::input("give a check id or --all")),
    };
    let text = text.expect("reports serialize");
    emit(None, |w| writeln!(w, "{text}"))?;
    Ok(if reports.iter().all(|r| r.passed) { 0 } else { 1 })
}

fn transform(
    spec: &Path,
    transform: &Path,
    out: Option<&Path>,
    before: Option<&Path>,
    after: Option<&Path>,
    format: Format,
    samples: usize,
) -> Outcome {
    let doc = CurveDoc::parse(&read(spec)?)?;
    let t = TransformDoc::parse(&read(transform)?)?;
    let base = doc.build()?;
    let image_doc = doc.transformed(&t);
    let image = t.apply(&base)?;
    emit(out, |w| writeln!(w, "{}", image_doc.to_json()))?;
    for (path, curve) in [(before, &base), (after, &image)] {
        if let Some(p) = path {
            let rows = sample(curve, t.kind, samples);
            emit(Some(p), |w| write_table(w, &rows, true, format))?;
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Family { name, param, params, domain, emit_spec, output } => {
            family(&name, &param, params.as_deref(), &domain, emit_spec, &output)
        }
        Command::Invariants { spec, geometry, output } => invariants(&spec, geometry, &output),
        Command::Verify { check, all, list, seed, tol } => verify(check.as_deref(), all, list, seed, tol),
        Command::Transform { spec, transform: tf, out, before, after, format, samples } => transform(
            &spec,
            &tf,
            out.as_deref(),
            before.as_deref(),
            after.as_deref(),
            format,
            samples,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
