//! Sample tables: one row per parameter value, written as CSV or JSON.

use std::io::Write;

use dualcurve::curve::{jet, CausalClass, CurveSpec};
use dualcurve::dual::{DualScalar, DualVec2, DEFAULT_TOL};
use dualcurve::equiaffine::{admissibility_residual, equiaffine_curvature_with_tol, nondegeneracy};
use dualcurve::lorentz::{frenet_at, lorentz_admissibility};
use dualcurve::verify::{Geometry, ORACLE_PRECONDITION_TOL};
use serde_json::{json, Value};

const BASE_COLUMNS: [&str; 7] = ["s", "alpha_x", "alpha_y", "beta_x", "beta_y", "kappa_re", "kappa_du"];
const EXTRA_COLUMNS: [&str; 3] = ["nondeg", "residual", "causal"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub s: f64,
    pub point: Option<DualVec2>,
    pub kappa: Option<DualScalar>,
    pub nondeg: Option<f64>,
    pub residual: Option<f64>,
    pub causal: Option<CausalClass>,
    /// Why `kappa` is missing.
    pub error: Option<String>,
}

impl Row {
    /// A missing curvature that is not a failed precondition: lightlike
    /// tangents have no Frenet frame by nature.
    pub fn kappa_exempt(&self) -> bool {
        self.causal == Some(CausalClass::Lightlike)
    }
}

/// Rows at `n + 1` evenly spaced parameters.
pub fn sample(spec: &CurveSpec, geometry: Geometry, n: usize) -> Vec<Row> {
    spec.domain().grid(n).into_iter().map(|s| sample_one(spec, geometry, s)).collect()
}

fn sample_one(spec: &CurveSpec, geometry: Geometry, s: f64) -> Row {
    let mut row = Row {
        s,
        point: spec.point(s).ok(),
        kappa: None,
        nondeg: None,
        residual: None,
        causal: None,
        error: None,
    };
    let j = match jet(spec, s) {
        Ok(j) => j,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let kappa = match geometry {
        Geometry::Equiaffine => {
            row.nondeg = Some(nondegeneracy(&j));
            row.residual = Some(admissibility_residual(&j));
            let tol = if spec.has_exact_jet() { DEFAULT_TOL } else { ORACLE_PRECONDITION_TOL };
            equiaffine_curvature_with_tol(&j, tol)
        }
        Geometry::Lorentz => {
            row.residual = Some(lorentz_admissibility(&j));
            row.causal = Some(CausalClass::of(&j.alpha(1)));
            frenet_at(spec, s).map(|f| f.kappa)
        }
    };
    match kappa {
        Ok(k) => row.kappa = Some(k),
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `[1e-5, 1e12)`.
pub fn fmt_g12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        trim(format!("{:.*}", (11 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa.to_string()), exp.abs())
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_g12).unwrap_or_default()
}

pub fn write_table<W: Write>(out: W, rows: &[Row], extras: bool, format: Format) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(out, rows, extras),
        Format::Json => write_json(out, rows, extras),
    }
}

fn write_csv<W: Write>(out: W, rows: &[Row], extras: bool) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header: Vec<&str> = BASE_COLUMNS.to_vec();
    if extras {
        header.extend(EXTRA_COLUMNS);
    }
    w.write_record(&header)?;
    for r in rows {
        let (a, b) = match r.point {
            Some(p) => (Some(p.real_part()), Some(p.dual_part())),
            None => (None, None),
        };
        let mut rec = vec![
            fmt_g12(r.s),
            opt(a.map(|v| v.x)),
            opt(a.map(|v| v.y)),
            opt(b.map(|v| v.x)),
            opt(b.map(|v| v.y)),
            opt(r.kappa.map(|k| k.re())),
            opt(r.kappa.map(|k| k.du())),
        ];
        if extras {
            rec.push(opt(r.nondeg));
            rec.push(opt(r.residual));
            rec.push(r.causal.map(|c| c.as_str().to_string()).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.flush()
}

fn write_json<W: Write>(mut out: W, rows: &[Row], extras: bool) -> std::io::Result<()> {
    let num = |v: Option<f64>| v.filter(|x| x.is_finite()).map_or(Value::Null, Value::from);
    let items: Vec<Value> = rows
        .iter()
        .map(|r| {
            let (a, b) = match r.point {
                Some(p) => (Some(p.real_part()), Some(p.dual_part())),
                None => (None, None),
            };
            let mut o = json!({
                "s": num(Some(r.s)),
                "alpha_x": num(a.map(|v| v.x)),
                "alpha_y": num(a.map(|v| v.y)),
                "beta_x": num(b.map(|v| v.x)),
                "beta_y": num(b.map(|v| v.y)),
                "kappa_re": num(r.kappa.map(|k| k.re())),
                "kappa_du": num(r.kappa.map(|k| k.du())),
            });
            let m = o.as_object_mut().expect("object");
            if extras {
                m.insert("nondeg".into(), num(r.nondeg));
                m.insert("residual".into(), num(r.residual));
                m.insert("causal".into(), r.causal.map_or(Value::Null, |c| c.as_str().into()));
            }
            if let Some(e) = &r.error {
                m.insert("error".into(), e.as_str().into());
            }
            o
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &items)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::fmt_g12;

    #[test]
    fn g12() {
        assert_eq!(fmt_g12(1.0), "1");
        assert_eq!(fmt_g12(-0.5), "-0.5");
        assert_eq!(fmt_g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g12(6.25), "6.25");
        assert_eq!(fmt_g12(1e-7), "1e-07");
        assert_eq!(fmt_g12(1.5e13), "1.5e+13");
        assert_eq!(fmt_g12(123456789012.0), "123456789012");
        assert_eq!(fmt_g12(0.00012345), "0.00012345");
        assert_eq!(fmt_g12(0.9999999999999), "1");
    }
}
