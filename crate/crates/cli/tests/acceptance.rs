//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use finiteqm::algebra::{
    verify_deformed_momentum, verify_minimal_axioms, verify_pauli, verify_projection_lattice,
    verify_translation_algebra, verify_weyl_pair,
};
use finiteqm::continuum::{
    convergence_study, deformed_momentum_expansion_check, wavefunction_limit_compare,
    ConvergenceReport,
};
use finiteqm::io::{
    convergence_csv, parse_convergence_csv, parse_spectrum_csv, parse_wavefunction_csv,
    spectrum_csv, wavefunction_csv,
};
use finiteqm::lattice::build_hamiltonian;
use finiteqm::spectra::{
    analytic_spectrum, cluster, match_spectra, numeric_spectrum, periodic_labels, wavefunction,
    EigenSystem, Parity, WaveFunction,
};
use finiteqm::{Boundary, LatticeConfig, Operator};

const TOL: f64 = 1e-12;

type Criterion = Box<dyn FnOnce() -> Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let elapsed = t.elapsed();
    let in_time = elapsed <= limit;
    o.detail = format!(
        "{}; {:.2} s (limit {} s)",
        o.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    o.pass &= in_time;
    o
}

fn algebra_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let mut checks = 0;
    for d in 2..=64 {
        let seg = LatticeConfig::unit(d, Boundary::Nonperiodic).unwrap();
        let ring = LatticeConfig::unit(d, Boundary::Periodic).unwrap();
        let reports = [
            verify_translation_algebra(&seg, TOL).unwrap(),
            verify_minimal_axioms(&seg, TOL).unwrap(),
            verify_projection_lattice(&seg, TOL).unwrap(),
            verify_weyl_pair(&ring, TOL).unwrap(),
        ];
        for r in &reports {
            for c in &r.checks {
                checks += 1;
                // Integer identities are only accepted at zero deviation.
                worst = worst.max(c.max_dev);
                if !c.pass {
                    failures.push(format!("d={d} {}::{}", r.suite, c.name));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checks} checks over d=2..64, max deviation {worst:.2e}{}",
            if failures.is_empty() { String::new() } else { format!(", failed: {failures:?}") }
        ),
    )
}

fn spectral_equivalence() -> Outcome {
    let (mut rel, mut abs, mut angle) = (0.0f64, 0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for boundary in [Boundary::Nonperiodic, Boundary::Periodic] {
        for d in 2..=512 {
            let cfg = LatticeConfig::unit(d, boundary).unwrap();
            let an = analytic_spectrum(&cfg).unwrap();
            let nu = numeric_spectrum(&cfg).unwrap();
            match match_spectra(&an, &nu) {
                Ok(m) => {
                    rel = rel.max(m.max_rel_dev);
                    abs = abs.max(m.max_abs_dev);
                    angle = angle.max(m.max_angle);
                    // Fixed floor of 1e-12 here, independent of the library's scaled floor.
                    let strict = m.levels.iter().all(|l| {
                        (l.rel_dev <= 1e-10 || l.abs_dev <= 1e-12) && l.angle <= 1e-8
                    });
                    if !m.pass || !strict {
                        failures.push(format!("{boundary} d={d}"));
                    }
                }
                Err(e) => failures.push(format!("{boundary} d={d}: {e}")),
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "d=2..512 both boundaries; max rel dev {rel:.2e} (<= 1e-10), max abs dev {abs:.2e}, \
             max angle {angle:.2e} (<= 1e-8){}",
            if failures.is_empty() { String::new() } else { format!(", failed: {failures:?}") }
        ),
    )
}

fn degeneracy_structure() -> Outcome {
    let numeric = |d| numeric_spectrum(&LatticeConfig::unit(d, Boundary::Periodic).unwrap()).unwrap();
    let mult = |s: &EigenSystem| cluster(&s.energies()).iter().map(|l| l.multiplicity()).collect::<Vec<_>>();
    let five = numeric(5);
    let six = numeric(6);
    let (m5, m6) = (mult(&five), mult(&six));
    let top = six.entries.last().map(|e| e.parity);
    let pass = m5 == [1, 2, 2] && m6 == [1, 2, 2, 1] && top == Some(Parity::Odd);
    outcome(
        pass,
        format!("d=5 -> {m5:?}, d=6 -> {m6:?}, d=6 top level parity {top:?}"),
    )
}

fn continuum_energies() -> Outcome {
    let sweep: Vec<usize> = (6..=12).map(|k| 1usize << k).collect();
    let mut parts = Vec::new();
    let mut pass = true;
    for m in 1..=5 {
        let at = convergence_study(m, Boundary::Nonperiodic, 1.0, 1.0, 1.0, &[100, 1000]).unwrap();
        for row in &at.rows {
            pass &= row.rel_error <= 5.0 / row.d as f64;
        }
        let fit = convergence_study(m, Boundary::Nonperiodic, 1.0, 1.0, 1.0, &sweep).unwrap();
        pass &= fit.fit.at_least(0.9);
        parts.push(format!(
            "np m={m}: err(100)={:.4} err(1000)={:.5} p={}",
            at.rows[0].rel_error,
            at.rows[1].rel_error,
            describe(&fit)
        ));
    }
    for m in 1..=5 {
        let fit = convergence_study(m, Boundary::Periodic, 1.0, 1.0, 1.0, &sweep).unwrap();
        pass &= fit.fit.at_least(1.8);
        parts.push(format!("p m={m}: p={}", describe(&fit)));
    }
    outcome(pass, parts.join("; "))
}

fn describe(r: &ConvergenceReport) -> String {
    match (r.fit.exact, r.fit.exponent) {
        (true, _) => "exact".into(),
        (false, Some(p)) => format!("{p:.3}"),
        (false, None) => "none".into(),
    }
}

fn wavefunction_limits() -> Outcome {
    let ds = [250, 500, 1000, 2000];
    let mut pass = true;
    let mut parts = Vec::new();

    for m in 1..=2 {
        let devs: Vec<f64> = ds
            .iter()
            .map(|&d| wavefunction_limit_compare(m, Parity::None, Boundary::Nonperiodic, 1.0, d).unwrap().max_deviation)
            .collect();
        let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
        pass &= devs[2] <= 1e-2 && decreasing;
        parts.push(format!("np m={m}: dev(1000)={:.2e} decreasing={decreasing}", devs[2]));
    }
    for (m, parity) in [(0, Parity::Even), (1, Parity::Even), (1, Parity::Odd), (3, Parity::Even), (5, Parity::Odd)] {
        let devs: Vec<f64> = ds
            .iter()
            .map(|&d| wavefunction_limit_compare(m, parity, Boundary::Periodic, 1.0, d).unwrap().max_deviation)
            .collect();
        // The ring samples coincide with the continuum function, so the gap is rounding noise.
        let ok = devs.iter().all(|&x| x <= 1e-10);
        pass &= ok;
        parts.push(format!("ring m={m} {parity}: max dev {:.1e}", devs.iter().cloned().fold(0.0, f64::max)));
    }

    let mut worst_norm: f64 = 0.0;
    let mut states = 0;
    for &d in &ds {
        let seg = LatticeConfig::from_length(d, 1.0, 1.0, 1.0, Boundary::Nonperiodic).unwrap();
        for m in 1..=d {
            worst_norm = worst_norm.max((wavefunction(&seg, m, Parity::None).unwrap().norm() - 1.0).abs());
            states += 1;
        }
        for d in [d, d + 1] {
            let ring = LatticeConfig::from_length(d, 1.0, 1.0, 1.0, Boundary::Periodic).unwrap();
            for (m, parity) in periodic_labels(d) {
                worst_norm = worst_norm.max((wavefunction(&ring, m, parity).unwrap().norm() - 1.0).abs());
                states += 1;
            }
        }
    }
    pass &= worst_norm <= TOL;
    parts.push(format!("{states} states normalized, worst |norm-1| {worst_norm:.1e}"));
    outcome(pass, parts.join("; "))
}

fn deformed_momentum() -> Outcome {
    let r = deformed_momentum_expansion_check(1.0, 1.0, 3, &[99, 199, 399, 799, 1599]).unwrap();
    let ratios: Vec<f64> = r.ratios.iter().map(|x| x.unwrap_or(f64::NAN)).collect();
    let ratio_ok = ratios.iter().all(|x| (x - 4.0).abs() <= 0.8);
    let mut worst: f64 = 0.0;
    let mut square_ok = true;
    for d in (3..=65).step_by(2) {
        let cfg = LatticeConfig::unit(d, Boundary::Periodic).unwrap();
        let rep = verify_deformed_momentum(&cfg, TOL).unwrap();
        let c = rep.check("square_is_kinetic").unwrap();
        worst = worst.max(c.max_dev);
        square_ok &= c.pass;
    }
    outcome(
        ratio_ok && square_ok,
        format!(
            "k=3 doubling ratios {:?}; P~^2 = 2MH for odd d=3..65, max dev {worst:.1e}",
            ratios.iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    )
}

fn pauli_emergence() -> Outcome {
    let cfg = LatticeConfig::unit(2, Boundary::Nonperiodic).unwrap();
    let r = verify_pauli(&cfg, 0.0).unwrap();
    let table = r.check("product_table").unwrap();
    outcome(
        r.all_pass() && table.max_dev == 0.0,
        format!("{} checks at zero tolerance, product table deviation {}", r.checks.len(), table.max_dev),
    )
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_finiteqm"))
        .args(args)
        .env_remove("FINITEQM_TOL")
        .output()
        .expect("cli runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn bits(x: &[f64]) -> Vec<u64> {
    x.iter().map(|v| v.to_bits()).collect()
}

fn determinism_and_round_trip() -> Outcome {
    let invocations: [&[&str]; 6] = [
        &["spectrum", "--boundary", "periodic", "--d", "16", "--check", "--vectors", "--format", "json"],
        &["spectrum", "--d", "33", "--vectors", "--format", "csv"],
        &["wavefunction", "--boundary", "periodic", "--d", "10", "--m", "5", "--parity", "odd", "--format", "json"],
        &["verify", "--d", "12", "--format", "csv"],
        &["converge", "--m", "2", "--dsweep", "64,128,256,512", "--format", "csv"],
        &["converge", "--expansion", "--mode", "2", "--dsweep", "51,101,201,401", "--format", "json"],
    ];
    let mut identical = 0;
    for args in invocations {
        if run_cli(args) == run_cli(args) {
            identical += 1;
        }
    }

    let mut trips = Vec::new();
    for (d, b) in [(17, Boundary::Nonperiodic), (16, Boundary::Periodic)] {
        let cfg = LatticeConfig::unit(d, b).unwrap();
        let spec = numeric_spectrum(&cfg).unwrap();
        let back = EigenSystem::from_json(&spec.to_json().unwrap()).unwrap();
        trips.push(back == spec);
        let rows = parse_spectrum_csv(&spectrum_csv(&spec, true).unwrap()).unwrap();
        trips.push(bits(&rows.iter().map(|r| r.energy).collect::<Vec<_>>()) == bits(&spec.energies()));
        let h = build_hamiltonian(&cfg).unwrap();
        trips.push(Operator::from_json(&h.to_json().unwrap()).unwrap() == h);
    }
    let ring = LatticeConfig::unit(9, Boundary::Periodic).unwrap();
    let w = wavefunction(&ring, 3, Parity::Odd).unwrap();
    trips.push(WaveFunction::from_json(&w.to_json().unwrap()).unwrap() == w);
    let samples = parse_wavefunction_csv(&wavefunction_csv(&w).unwrap()).unwrap();
    trips.push(samples == w.samples);
    let conv = convergence_study(3, Boundary::Nonperiodic, 1.0, 1.0, 1.0, &[64, 128, 256, 512]).unwrap();
    trips.push(ConvergenceReport::from_json(&conv.to_json().unwrap()).unwrap() == conv);
    let parsed = parse_convergence_csv(&convergence_csv(&conv).unwrap()).unwrap();
    trips.push(
        parsed.rows.len() == conv.rows.len()
            && parsed.rows.iter().zip(&conv.rows).all(|(p, r)| {
                p.0 == r.d
                    && p.1.to_bits() == r.a.to_bits()
                    && p.2.to_bits() == r.e_discrete.to_bits()
                    && p.3.to_bits() == r.e_limit.to_bits()
                    && p.4.to_bits() == r.rel_error.to_bits()
            }),
    );
    let trips_ok = trips.iter().filter(|&&t| t).count();
    outcome(
        identical == invocations.len() && trips_ok == trips.len(),
        format!(
            "{identical}/{} CLI invocations byte-identical; {trips_ok}/{} JSON/CSV round trips bit-exact",
            invocations.len(),
            trips.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("algebra exactness", Box::new(|| timed(Duration::from_secs(10), algebra_exactness))),
        ("spectral equivalence", Box::new(|| timed(Duration::from_secs(60), spectral_equivalence))),
        ("degeneracy structure", Box::new(degeneracy_structure)),
        ("continuum energies", Box::new(|| timed(Duration::from_secs(5), continuum_energies))),
        ("wavefunction limits", Box::new(wavefunction_limits)),
        ("deformed momentum", Box::new(deformed_momentum)),
        ("pauli emergence", Box::new(pauli_emergence)),
        ("determinism and round trip", Box::new(determinism_and_round_trip)),
    ];
    let mut failed = 0;
    println!("\nrunning {} acceptance criteria", criteria.len());
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] {}. {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("\nacceptance: {} passed, {failed} failed\n", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
