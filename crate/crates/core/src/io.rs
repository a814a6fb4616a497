//! CSV encodings for plot data. Floats are written with 17 significant digits
//! in `.`-decimal scientific notation, which round-trips exactly.

use serde::Deserialize;

use crate::algebra::VerificationReport;
use crate::continuum::{ConvergenceReport, MomentumExpansionReport};
use crate::error::{Error, Result};
use crate::spectra::{EigenSystem, Parity, Sample, WaveFunction};

/// 17 significant digits, locale independent.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

fn reader(s: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(s.as_bytes())
}

/// `m,parity,energy,degeneracy`, plus `v0..v{d-1}` when `with_vectors` is set.
pub fn spectrum_csv(spec: &EigenSystem, with_vectors: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let d = spec.config.d;
    let with_vectors = with_vectors && spec.has_vectors();
    let mut header: Vec<String> = ["m", "parity", "energy", "degeneracy"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if with_vectors {
        header.extend((0..d).map(|i| format!("v{i}")));
    }
    w.write_record(&header)?;
    for (e, deg) in spec.entries.iter().zip(spec.degeneracies()) {
        let mut rec = vec![
            e.m.to_string(),
            e.parity.to_string(),
            fmt_f64(e.energy),
            deg.to_string(),
        ];
        if with_vectors {
            rec.extend(e.vector.iter().map(|v| fmt_f64(*v)));
        }
        w.write_record(&rec)?;
    }
    finish(w)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SpectrumRow {
    pub m: usize,
    pub parity: Parity,
    pub energy: f64,
    pub degeneracy: usize,
}

pub fn parse_spectrum_csv(s: &str) -> Result<Vec<SpectrumRow>> {
    let mut r = reader(s);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or_default();
        out.push(SpectrumRow {
            m: parse(field(0))?,
            parity: field(1).parse()?,
            energy: parse(field(2))?,
            degeneracy: parse(field(3))?,
        });
    }
    Ok(out)
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Serialization(format!("cannot parse '{s}'")))
}

/// `n,x,psi`, ordered by site.
pub fn wavefunction_csv(w: &WaveFunction) -> Result<String> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["n", "x", "psi"])?;
    for s in &w.samples {
        out.write_record([s.n.to_string(), fmt_f64(s.x), fmt_f64(s.psi)])?;
    }
    finish(out)
}

pub fn parse_wavefunction_csv(s: &str) -> Result<Vec<Sample>> {
    let mut r = reader(s);
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// `d,a,E_discrete,E_limit,rel_error` with a closing `fit` record whose last
/// column holds the exponent, `exact` or `none`.
pub fn convergence_csv(r: &ConvergenceReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["d", "a", "E_discrete", "E_limit", "rel_error"])?;
    for row in &r.rows {
        w.write_record([
            row.d.to_string(),
            fmt_f64(row.a),
            fmt_f64(row.e_discrete),
            fmt_f64(row.e_limit),
            fmt_f64(row.rel_error),
        ])?;
    }
    let fit = match (r.fit.exact, r.fit.exponent) {
        (true, _) => "exact".to_string(),
        (false, Some(p)) => fmt_f64(p),
        (false, None) => "none".to_string(),
    };
    w.write_record(["fit", "", "", "", fit.as_str()])?;
    finish(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCsv {
    /// `(d, a, E_discrete, E_limit, rel_error)`.
    pub rows: Vec<(usize, f64, f64, f64, f64)>,
    pub fit: String,
}

pub fn parse_convergence_csv(s: &str) -> Result<ConvergenceCsv> {
    let mut r = reader(s);
    let mut rows = Vec::new();
    let mut fit = String::new();
    for rec in r.records() {
        let rec = rec?;
        let f = |i: usize| rec.get(i).unwrap_or_default();
        if f(0) == "fit" {
            fit = f(4).to_string();
            continue;
        }
        rows.push((parse(f(0))?, parse(f(1))?, parse(f(2))?, parse(f(3))?, parse(f(4))?));
    }
    Ok(ConvergenceCsv { rows, fit })
}

/// `d,a,p,p_deformed,deviation,scaled`.
pub fn momentum_csv(r: &MomentumExpansionReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["d", "a", "p", "p_deformed", "deviation", "scaled"])?;
    for row in &r.rows {
        w.write_record([
            row.d.to_string(),
            fmt_f64(row.a),
            fmt_f64(row.p),
            fmt_f64(row.p_deformed),
            fmt_f64(row.deviation),
            fmt_f64(row.scaled),
        ])?;
    }
    finish(w)
}

/// `suite,name,relation,max_dev,pass`.
pub fn verification_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["suite", "name", "relation", "max_dev", "pass"])?;
    for r in reports {
        for c in &r.checks {
            w.write_record([
                r.suite.as_str(),
                c.name.as_str(),
                c.relation.as_str(),
                &fmt_f64(c.max_dev),
                if c.pass { "true" } else { "false" },
            ])?;
        }
    }
    finish(w)
}

/// Fixed-width table of verification checks.
pub fn verification_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<20} {:<26} {:<44} {:>12} {:>5}\n",
        "suite", "check", "relation", "max_dev", "pass"
    ));
    for r in reports {
        for c in &r.checks {
            out.push_str(&format!(
                "{:<20} {:<26} {:<44} {:>12.3e} {:>5}\n",
                r.suite,
                c.name,
                c.relation,
                c.max_dev,
                if c.pass { "ok" } else { "FAIL" }
            ));
        }
    }
    out
}
