//! wasm-bindgen bindings for the static page in `www/`.
//!
//! Each exported function takes plain numbers and strings and returns a JSON
//! string, or throws the error message as a JS string. The `*_json` functions
//! carry the logic and can be called (and tested) natively.

use serde_json::json;
use wasm_bindgen::prelude::*;

use finiteqm::continuum::{continuum_energy, convergence_study};
use finiteqm::spectra::{analytic_spectrum, wavefunction, Parity};
use finiteqm::{Boundary, LatticeConfig};

/// Largest lattice the page will build; the closed forms are cheap but the
/// payload grows with `d`.
pub const MAX_D: usize = 4096;

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    s.parse::<Boundary>().map_err(|e| e.to_string())
}

fn config(boundary: &str, d: usize, length: f64) -> Result<LatticeConfig, String> {
    if d > MAX_D {
        return Err(format!("d is limited to {MAX_D} in the browser demo"));
    }
    LatticeConfig::from_length(d, length, 1.0, 1.0, parse_boundary(boundary)?)
        .map_err(|e| e.to_string())
}

/// Closed-form levels with their continuum counterparts (ħ = M = 1).
pub fn spectrum_json(boundary: &str, d: usize, length: f64) -> Result<String, String> {
    let cfg = config(boundary, d, length)?;
    let spec = analytic_spectrum(&cfg).map_err(|e| e.to_string())?;
    let levels: Vec<_> = spec
        .entries
        .iter()
        .zip(spec.degeneracies())
        .map(|(e, deg)| {
            let limit = continuum_energy(e.m, cfg.boundary, length, 1.0, 1.0).ok();
            json!({
                "m": e.m,
                "parity": e.parity,
                "energy": e.energy,
                "continuum": limit,
                "degeneracy": deg,
            })
        })
        .collect();
    Ok(json!({
        "d": d,
        "a": cfg.a,
        "boundary": cfg.boundary,
        "multiplicities": spec.multiplicities(),
        "levels": levels,
    })
    .to_string())
}

/// Lattice eigenfunction samples plus the continuum curve on a fine grid.
pub fn wavefunction_json(
    boundary: &str,
    d: usize,
    m: usize,
    parity: &str,
    length: f64,
) -> Result<String, String> {
    let cfg = config(boundary, d, length)?;
    let parity = match (cfg.boundary, parity) {
        (Boundary::Nonperiodic, _) => Parity::None,
        (Boundary::Periodic, p) => p.parse::<Parity>().map_err(|e| e.to_string())?,
    };
    let w = wavefunction(&cfg, m, parity).map_err(|e| e.to_string())?;
    let (x0, x1) = match cfg.boundary {
        Boundary::Nonperiodic => (0.0, length),
        Boundary::Periodic => (-length / 2.0, length / 2.0),
    };
    let k = m as f64 * std::f64::consts::PI / length;
    let curve: Vec<[f64; 2]> = (0..=400)
        .map(|i| {
            let x = x0 + (x1 - x0) * i as f64 / 400.0;
            let y = match (cfg.boundary, parity) {
                (Boundary::Nonperiodic, _) => (2.0 / length).sqrt() * (k * x).sin(),
                (_, Parity::Odd) => (2.0 / length).sqrt() * (2.0 * k * x).sin(),
                _ if m == 0 => (1.0 / length).sqrt(),
                _ => (2.0 / length).sqrt() * (2.0 * k * x).cos(),
            };
            [x, y]
        })
        .collect();
    let samples: Vec<[f64; 2]> = w.samples.iter().map(|s| [s.x, s.psi]).collect();
    Ok(json!({
        "m": m,
        "parity": parity,
        "norm": w.norm(),
        "note": w.note,
        "samples": samples,
        "continuum": curve,
    })
    .to_string())
}

/// Relative energy error along `d = 8, 16, …, d_max`.
pub fn convergence_json(boundary: &str, m: usize, d_max: usize) -> Result<String, String> {
    let boundary = parse_boundary(boundary)?;
    if d_max > MAX_D {
        return Err(format!("d is limited to {MAX_D} in the browser demo"));
    }
    let sweep: Vec<usize> = std::iter::successors(Some(8usize), |d| Some(d * 2))
        .take_while(|&d| d <= d_max)
        .collect();
    let r = convergence_study(m, boundary, 1.0, 1.0, 1.0, &sweep).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn spectrum(boundary: &str, d: usize, length: f64) -> Result<String, JsValue> {
    spectrum_json(boundary, d, length).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn wave(boundary: &str, d: usize, m: usize, parity: &str, length: f64) -> Result<String, JsValue> {
    wavefunction_json(boundary, d, m, parity, length).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn convergence(boundary: &str, m: usize, d_max: usize) -> Result<String, JsValue> {
    convergence_json(boundary, m, d_max).map_err(|e| JsValue::from_str(&e))
}
