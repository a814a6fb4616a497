use std::fs;

use serde::Serialize;
use serde_json::{json, Value};

use finiteqm::algebra::{
    projection, verify_deformed_momentum, verify_minimal_axioms, verify_pauli,
    verify_projection_lattice, verify_translation_algebra, verify_weyl_pair, VerificationReport,
};
use finiteqm::continuum::{convergence_study, deformed_momentum_expansion_check, MIN_FIT_POINTS};
use finiteqm::io::{
    convergence_csv, fmt_f64, momentum_csv, spectrum_csv, verification_csv, verification_table,
    wavefunction_csv,
};
use finiteqm::lattice::{
    build_clock, build_deformed_momentum, build_hamiltonian, build_parity, build_position,
    build_shift_nonperiodic, build_shift_periodic, Direction,
};
use finiteqm::spectra::{analytic_spectrum, match_spectra, numeric_spectrum, Parity};
use finiteqm::{Boundary, Error, LatticeConfig, DEFAULT_TOLERANCE};

use crate::args::{
    BoundaryArg, Command, ConvergeArgs, Format, LatticeArgs, OperatorArgs, OperatorName, OutputArgs, ParityArg,
    SpectrumArgs, Suite, VerifyArgs, WavefunctionArgs,
};

pub const TOL_ENV: &str = "FINITEQM_TOL";

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or a request outside the model's domain (exit 2).
    Usage(String),
    /// Numerical or I/O failure (exit 1).
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_)
            | Error::WrongBoundary { .. }
            | Error::OutOfRange { .. }
            | Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Output was produced but a verification or comparison failed.
    CheckFailed,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Success
        } else {
            Outcome::CheckFailed
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(cmd: Command) -> CliResult<Outcome> {
    match cmd {
        Command::Spectrum(a) => spectrum(a),
        Command::Wavefunction(a) => wavefunction(a),
        Command::Verify(a) => verify(a),
        Command::Converge(a) => converge(a),
        Command::Operator(a) => operator(a),
    }
}

fn config(l: &LatticeArgs) -> CliResult<LatticeConfig> {
    let b: Boundary = l.boundary.into();
    let cfg = match l.a {
        Some(a) => LatticeConfig::new(l.d, a, l.mass, l.hbar, b)?,
        None => LatticeConfig::from_length(l.d, l.length.unwrap_or(1.0), l.mass, l.hbar, b)?,
    };
    Ok(cfg)
}

fn meta(command: &str, extra: Value) -> Value {
    let mut m = json!({
        "program": "finiteqm",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "units": "natural: lengths in the units of a, energies in the units of hbar^2/(M a^2)",
        "basis": finiteqm::BASIS_CONVENTION,
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut m, extra) {
        m.extend(e);
    }
    m
}

fn lattice_meta(cfg: &LatticeConfig) -> Value {
    json!({
        "boundary": cfg.boundary,
        "d": cfg.d,
        "a": cfg.a,
        "L": cfg.length(),
        "M": cfg.mass,
        "hbar": cfg.hbar,
    })
}

/// `# key: value` lines for table and CSV output.
fn comment_header(meta: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = meta {
        for (k, v) in m {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("# {k}: {v}\n"));
        }
    }
    out
}

fn emit_json<T: Serialize>(out: &OutputArgs, meta: Value, data: &T) -> CliResult<()> {
    let data = serde_json::to_value(data).map_err(|e| CliError::Failure(e.to_string()))?;
    let doc = if out.no_header {
        data
    } else {
        json!({ "meta": meta, "data": data })
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Failure(e.to_string()))?;
    s.push('\n');
    write(out, &s)
}

fn emit_text(out: &OutputArgs, meta: Value, body: &str) -> CliResult<()> {
    let mut s = String::new();
    if !out.no_header {
        s.push_str(&comment_header(&meta));
    }
    s.push_str(body);
    write(out, &s)
}

fn write(out: &OutputArgs, s: &str) -> CliResult<()> {
    write_to(out.output.as_deref(), s)
}

fn write_to(path: Option<&std::path::Path>, s: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, s)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn spectrum(args: SpectrumArgs) -> CliResult<Outcome> {
    let cfg = config(&args.lattice)?;
    let analytic = analytic_spectrum(&cfg)?;
    let numeric = if args.check {
        Some(numeric_spectrum(&cfg)?)
    } else {
        None
    };
    let comparison = if let Some(numeric) = &numeric {
        match match_spectra(&analytic, numeric) {
            Ok(m) => Some(m),
            Err(Error::MultiplicityMismatch { analytic, numeric }) => {
                return Err(CliError::Failure(format!(
                    "multiplicity mismatch: analytic {analytic:?}, numeric {numeric:?}"
                )))
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let spec = if args.vectors {
        analytic
    } else {
        analytic.without_vectors()
    };
    let meta = meta(
        "spectrum",
        json!({ "lattice": lattice_meta(&cfg), "multiplicities": spec.multiplicities() }),
    );
    match args.out.format {
        Format::Json => {
            let numeric = numeric.map(|n| if args.vectors { n } else { n.without_vectors() });
            let data = json!({ "spectrum": spec, "numeric": numeric, "check": comparison });
            emit_json(&args.out, meta, &data)?;
        }
        Format::Csv => emit_text(&args.out, meta, &spectrum_csv(&spec, args.vectors)?)?,
        Format::Table => {
            let mut body = format!("{:>6} {:>6} {:>24} {:>6}\n", "m", "parity", "energy", "deg");
            for (e, deg) in spec.entries.iter().zip(spec.degeneracies()) {
                body.push_str(&format!(
                    "{:>6} {:>6} {:>24} {:>6}\n",
                    e.m,
                    e.parity.to_string(),
                    fmt_f64(e.energy),
                    deg
                ));
                if args.vectors {
                    let v: Vec<String> = e.vector.iter().map(|x| format!("{x:+.6}")).collect();
                    body.push_str(&format!("{:>13} [{}]\n", "", v.join(", ")));
                }
            }
            if let Some(c) = &comparison {
                body.push_str(&format!(
                    "check: {} (max rel dev {:.3e}, max abs dev {:.3e}, max angle {:.3e})\n",
                    if c.pass { "ok" } else { "FAIL" },
                    c.max_rel_dev,
                    c.max_abs_dev,
                    c.max_angle
                ));
            }
            emit_text(&args.out, meta, &body)?;
        }
    }
    Ok(Outcome::from_pass(comparison.is_none_or(|c| c.pass)))
}

fn wavefunction(args: WavefunctionArgs) -> CliResult<Outcome> {
    let cfg = config(&args.lattice)?;
    let parity = match (cfg.boundary, args.parity) {
        (Boundary::Nonperiodic, None) => Parity::None,
        (Boundary::Nonperiodic, Some(_)) => {
            return Err(CliError::Usage(
                "--parity only applies to a periodic lattice".into(),
            ))
        }
        (Boundary::Periodic, Some(ParityArg::Even)) => Parity::Even,
        (Boundary::Periodic, Some(ParityArg::Odd)) => Parity::Odd,
        (Boundary::Periodic, None) if args.m == 0 => Parity::Even,
        (Boundary::Periodic, None) => {
            return Err(CliError::Usage(
                "a periodic state needs --parity even|odd".into(),
            ))
        }
    };
    let w = finiteqm::spectra::wavefunction(&cfg, args.m, parity)?;
    let mut extra = json!({
        "lattice": lattice_meta(&cfg),
        "m": w.m,
        "parity": w.parity,
        "norm": w.norm(),
    });
    if let Some(n) = &w.note {
        extra["note"] = json!(n);
    }
    let meta = meta("wavefunction", extra);
    match args.out.format {
        Format::Json => emit_json(&args.out, meta, &w)?,
        Format::Csv => emit_text(&args.out, meta, &wavefunction_csv(&w)?)?,
        Format::Table => {
            let mut body = format!("{:>8} {:>24} {:>24}\n", "n", "x", "psi");
            for s in &w.samples {
                body.push_str(&format!(
                    "{:>8} {:>24} {:>24}\n",
                    s.n,
                    fmt_f64(s.x),
                    fmt_f64(s.psi)
                ));
            }
            emit_text(&args.out, meta, &body)?;
        }
    }
    Ok(Outcome::Success)
}

fn tolerance() -> CliResult<f64> {
    match std::env::var(TOL_ENV) {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
            _ => Err(CliError::Usage(format!(
                "{TOL_ENV} must be a non-negative number, got {s:?}"
            ))),
        },
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

fn suite_reports(
    suite: Suite,
    cfg: &LatticeConfig,
    tol: f64,
) -> CliResult<Vec<VerificationReport>> {
    let b = cfg.boundary;
    let periodic_only = |name: &str| {
        CliError::Usage(format!("suite {name} needs --boundary periodic"))
    };
    let nonperiodic_only = |name: &str| {
        CliError::Usage(format!("suite {name} needs --boundary nonperiodic"))
    };
    let reports = match suite {
        Suite::Algebra => {
            if b != Boundary::Nonperiodic {
                return Err(nonperiodic_only("algebra"));
            }
            vec![
                verify_translation_algebra(cfg, tol)?,
                verify_minimal_axioms(cfg, tol)?,
            ]
        }
        Suite::Projections => {
            if b != Boundary::Nonperiodic {
                return Err(nonperiodic_only("projections"));
            }
            vec![verify_projection_lattice(cfg, tol)?]
        }
        Suite::Weyl => {
            if b != Boundary::Periodic {
                return Err(periodic_only("weyl"));
            }
            vec![verify_weyl_pair(cfg, tol)?]
        }
        Suite::Momentum => {
            if b != Boundary::Periodic {
                return Err(periodic_only("momentum"));
            }
            vec![verify_deformed_momentum(cfg, tol)?]
        }
        Suite::Pauli => {
            if b != Boundary::Nonperiodic || cfg.d != 2 {
                return Err(CliError::Usage(
                    "suite pauli needs --boundary nonperiodic --d 2".into(),
                ));
            }
            vec![verify_pauli(cfg, tol)?]
        }
        Suite::All => match b {
            Boundary::Nonperiodic => {
                let mut v = vec![
                    verify_translation_algebra(cfg, tol)?,
                    verify_minimal_axioms(cfg, tol)?,
                    verify_projection_lattice(cfg, tol)?,
                ];
                if cfg.d == 2 {
                    v.push(verify_pauli(cfg, tol)?);
                }
                v
            }
            Boundary::Periodic => vec![verify_weyl_pair(cfg, tol)?, verify_deformed_momentum(cfg, tol)?],
        },
    };
    Ok(reports)
}

fn verify(args: VerifyArgs) -> CliResult<Outcome> {
    let cfg = config(&args.lattice)?;
    let tol = tolerance()?;
    let reports = suite_reports(args.suite, &cfg, tol)?;
    let pass = reports.iter().all(|r| r.all_pass());
    let meta = meta(
        "verify",
        json!({ "lattice": lattice_meta(&cfg), "tolerance": tol, "pass": pass }),
    );
    match args.out.format {
        Format::Json => emit_json(&args.out, meta, &reports)?,
        Format::Csv => emit_text(&args.out, meta, &verification_csv(&reports)?)?,
        Format::Table => {
            let mut body = verification_table(&reports);
            let total: usize = reports.iter().map(|r| r.checks.len()).sum();
            let failed: usize = reports
                .iter()
                .map(|r| r.checks.iter().filter(|c| !c.pass).count())
                .sum();
            body.push_str(&format!("{} of {total} checks passed\n", total - failed));
            emit_text(&args.out, meta, &body)?;
        }
    }
    Ok(Outcome::from_pass(pass))
}

fn converge(args: ConvergeArgs) -> CliResult<Outcome> {
    if args.dsweep.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage("--dsweep must be strictly increasing".into()));
    }
    if !args.no_fit && args.dsweep.len() < MIN_FIT_POINTS {
        return Err(CliError::Usage(format!(
            "fitting the decay exponent needs at least {MIN_FIT_POINTS} values in --dsweep \
             (pass --no-fit to skip the fit)"
        )));
    }
    if args.expansion {
        if args.boundary == Some(BoundaryArg::Nonperiodic) {
            return Err(CliError::Usage(
                "--expansion works on a periodic lattice".into(),
            ));
        }
        let r = deformed_momentum_expansion_check(args.length, args.hbar, args.mode, &args.dsweep)?;
        let meta = meta(
            "converge",
            json!({ "quantity": "deformed momentum", "mode": args.mode, "L": args.length,
                    "hbar": args.hbar, "scaled_drift": r.scaled_drift() }),
        );
        match args.out.format {
            Format::Json => emit_json(&args.out, meta, &r)?,
            Format::Csv => emit_text(&args.out, meta, &momentum_csv(&r)?)?,
            Format::Table => {
                let mut body = format!(
                    "{:>8} {:>24} {:>24} {:>12} {:>12} {:>10}\n",
                    "d", "p", "p_deformed", "deviation", "scaled", "ratio"
                );
                for (i, row) in r.rows.iter().enumerate() {
                    let ratio = match i.checked_sub(1).and_then(|j| r.ratios.get(j)) {
                        Some(Some(x)) => format!("{x:.4}"),
                        Some(None) => "n/a".into(),
                        None => String::new(),
                    };
                    body.push_str(&format!(
                        "{:>8} {:>24} {:>24} {:>12.4e} {:>12.6} {:>10}\n",
                        row.d,
                        fmt_f64(row.p),
                        fmt_f64(row.p_deformed),
                        row.deviation,
                        row.scaled,
                        ratio
                    ));
                }
                emit_text(&args.out, meta, &body)?;
            }
        }
        return Ok(Outcome::Success);
    }
    let boundary: Boundary = args.boundary.unwrap_or(BoundaryArg::Nonperiodic).into();
    let mut r = convergence_study(args.m, boundary, args.length, args.mass, args.hbar, &args.dsweep)?;
    if args.no_fit {
        r.fit.exponent = None;
        r.fit.exact = false;
    }
    let fit = if args.no_fit {
        json!("skipped")
    } else {
        serde_json::to_value(r.fit).map_err(|e| CliError::Failure(e.to_string()))?
    };
    let meta = meta(
        "converge",
        json!({ "quantity": "energy", "boundary": boundary, "m": args.m, "L": args.length,
                "M": args.mass, "hbar": args.hbar, "fit": fit }),
    );
    match args.out.format {
        Format::Json => emit_json(&args.out, meta, &r)?,
        Format::Csv => emit_text(&args.out, meta, &convergence_csv(&r)?)?,
        Format::Table => {
            let mut body = format!(
                "{:>8} {:>24} {:>24} {:>12}\n",
                "d", "E_discrete", "E_limit", "rel_error"
            );
            for row in &r.rows {
                body.push_str(&format!(
                    "{:>8} {:>24} {:>24} {:>12.4e}\n",
                    row.d,
                    fmt_f64(row.e_discrete),
                    fmt_f64(row.e_limit),
                    row.rel_error
                ));
            }
            if !args.no_fit {
                let line = match (r.fit.exact, r.fit.exponent) {
                    (true, _) => "fit: exact at every d (no finite-d correction)".to_string(),
                    (false, Some(p)) => format!("fit: rel_error ~ d^-{p:.4}"),
                    (false, None) => "fit: not enough measurable points".to_string(),
                };
                body.push_str(&line);
                body.push('\n');
            }
            emit_text(&args.out, meta, &body)?;
        }
    }
    Ok(Outcome::Success)
}

fn operator(args: OperatorArgs) -> CliResult<Outcome> {
    let cfg = config(&args.lattice)?;
    let op = match args.name {
        OperatorName::Shift => match cfg.boundary {
            Boundary::Periodic => build_shift_periodic(&cfg)?,
            Boundary::Nonperiodic => build_shift_nonperiodic(&cfg, Direction::Right)?,
        },
        OperatorName::ShiftLeft => match cfg.boundary {
            Boundary::Periodic => build_shift_periodic(&cfg)?.adjoint().with_label("U^-1"),
            Boundary::Nonperiodic => build_shift_nonperiodic(&cfg, Direction::Left)?,
        },
        OperatorName::Clock => build_clock(&cfg)?,
        OperatorName::Position => build_position(&cfg, false)?,
        OperatorName::PositionCentered => build_position(&cfg, true)?,
        OperatorName::Hamiltonian => build_hamiltonian(&cfg)?,
        OperatorName::Momentum => build_deformed_momentum(&cfg)?.operator,
        OperatorName::Parity => build_parity(&cfg)?,
        OperatorName::Projection => projection(&cfg, args.n)?,
    };
    let mut s = op.to_json()?;
    s.push('\n');
    write_to(args.output.as_deref(), &s)?;
    Ok(Outcome::Success)
}
