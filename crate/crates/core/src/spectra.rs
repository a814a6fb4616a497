//! Energy spectra of the free-particle lattice Hamiltonian.
//!
//! Two independent routes produce an [`EigenSystem`]: the closed forms
//! ([`analytic_spectrum_nonperiodic`], [`analytic_spectrum_periodic`]) and a
//! numerical diagonalization of the built matrix ([`numeric_spectrum`]).
//! [`match_spectra`] reconciles them level by level, comparing degenerate levels
//! as subspaces.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{Boundary, LatticeConfig};
use crate::eigen::{jacobi, symmetric_tridiagonal, SymmetricEigen};
use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, centered_index};
use crate::operator::{Operator, StructureHint};

/// Relative energy tolerance between the two spectrum routes.
pub const ENERGY_REL_TOL: f64 = 1e-10;
/// Absolute energy tolerance, used for levels at or near zero. It applies per
/// unit of the largest energy once that exceeds 1, since the error of a
/// backward-stable solver scales with the matrix norm.
pub const ENERGY_ABS_TOL: f64 = 1e-12;
/// Largest admissible principal angle between matched eigenspaces.
pub const ANGLE_TOL: f64 = 1e-8;
/// Eigenvalues closer than this fraction of the spectral range form one level.
pub const CLUSTER_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::None => "none",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" | "+" => Ok(Parity::Even),
            "odd" | "-" => Ok(Parity::Odd),
            "none" => Ok(Parity::None),
            other => Err(Error::InvalidArgument(format!("unknown parity '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Analytic,
    Numeric,
}

/// One eigenpair. `vector` holds unit-norm position-basis coefficients
/// (first nonzero component positive); it is empty when vectors were dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenEntry {
    pub m: usize,
    pub energy: f64,
    pub parity: Parity,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSystem {
    pub config: LatticeConfig,
    pub source: Source,
    pub entries: Vec<EigenEntry>,
}

/// A group of (numerically) equal energies.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub range: Range<usize>,
}

impl Level {
    pub fn multiplicity(&self) -> usize {
        self.range.len()
    }
}

/// Groups sorted energies whose neighbours differ by at most
/// `CLUSTER_REL_TOL × (max − min)`.
pub fn cluster(energies: &[f64]) -> Vec<Level> {
    if energies.is_empty() {
        return Vec::new();
    }
    let lo = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = CLUSTER_REL_TOL * (hi - lo);
    let mut levels = Vec::new();
    let mut start = 0;
    for i in 1..=energies.len() {
        if i == energies.len() || energies[i] - energies[i - 1] > tol {
            let e = energies[start..i].iter().sum::<f64>() / (i - start) as f64;
            levels.push(Level {
                energy: e,
                range: start..i,
            });
            start = i;
        }
    }
    levels
}

impl EigenSystem {
    pub fn energies(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.energy).collect()
    }

    pub fn levels(&self) -> Vec<Level> {
        cluster(&self.energies())
    }

    /// Multiplicity of each level, in ascending energy.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.levels().iter().map(Level::multiplicity).collect()
    }

    /// Degeneracy of each entry's level, aligned with `entries`.
    pub fn degeneracies(&self) -> Vec<usize> {
        let mut out = vec![0; self.entries.len()];
        for level in self.levels() {
            for i in level.range.clone() {
                out[i] = level.multiplicity();
            }
        }
        out
    }

    pub fn has_vectors(&self) -> bool {
        self.entries.iter().all(|e| e.vector.len() == self.config.d)
    }

    pub fn without_vectors(&self) -> Self {
        let mut out = self.clone();
        out.entries.iter_mut().for_each(|e| e.vector.clear());
        out
    }

    /// `max |⟨v_i, v_j⟩ − δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.entries.iter().enumerate() {
            for (j, b) in self.entries.iter().enumerate().skip(i) {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(&a.vector, &b.vector) - want).abs());
            }
        }
        worst
    }

    /// `max |Σ_m |v_m⟩⟨v_m| − 1|` entrywise.
    pub fn completeness_defect(&self) -> f64 {
        let d = self.config.d;
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                let s: f64 = self.entries.iter().map(|e| e.vector[r] * e.vector[c]).sum();
                let want = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((s - want).abs());
            }
        }
        worst
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

/// Flips `v` so that its first component of non-negligible size is positive.
fn fix_sign(v: &mut [f64]) {
    let scale = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8 * scale) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn energy_scale(config: &LatticeConfig) -> f64 {
    let ad = config.a * config.d as f64;
    let s = (PI / config.d as f64).sin();
    2.0 * PI * PI * config.hbar * config.hbar / (ad * ad * config.mass * s * s)
}

/// `E_m = (2π²ħ²/((ad)²M))·sin²(πm/(2(d+1)))/sin²(π/d)` on a lattice with end points.
pub fn energy_nonperiodic(config: &LatticeConfig, m: usize) -> f64 {
    let s = (PI * m as f64 / (2.0 * (config.d as f64 + 1.0))).sin();
    energy_scale(config) * s * s
}

/// `E_m = (2π²ħ²/((ad)²M))·sin²(πm/d)/sin²(π/d)` on a ring.
pub fn energy_periodic(config: &LatticeConfig, m: usize) -> f64 {
    let s = (PI * m as f64 / config.d as f64).sin();
    energy_scale(config) * s * s
}

pub fn analytic_energy(config: &LatticeConfig, m: usize) -> f64 {
    match config.boundary {
        Boundary::Nonperiodic => energy_nonperiodic(config, m),
        Boundary::Periodic => energy_periodic(config, m),
    }
}

/// Eigenvalue `2cos θ` of the hopping operator `S + S†` for quantum number `m`.
pub fn hopping_eigenvalue(config: &LatticeConfig, m: usize) -> f64 {
    let d = config.d as f64;
    match config.boundary {
        Boundary::Nonperiodic => 2.0 * (PI * m as f64 / (d + 1.0)).cos(),
        Boundary::Periodic => 2.0 * (2.0 * PI * m as f64 / d).cos(),
    }
}

/// Unit eigenvector components `√(2/(d+1))·sin(m(1+n)π/(d+1))`.
pub fn nonperiodic_mode(d: usize, m: usize) -> Vec<f64> {
    let norm = (2.0 / (d as f64 + 1.0)).sqrt();
    (0..d)
        .map(|n| norm * (m as f64 * (1 + n) as f64 * PI / (d as f64 + 1.0)).sin())
        .collect()
}

/// Ring mode on the centered index `n`: `C_m cos(2πmn/d)` (even) or
/// `C_m sin(2πmn/d)` (odd) with `C_0 = √(1/d)`, `C_m = √(2/d)`.
///
/// Any `m` is accepted so aliasing (`m ↔ d − m`) can be inspected; the result is
/// not renormalized.
pub fn periodic_mode(d: usize, m: usize, parity: Parity) -> Vec<f64> {
    let c = if m == 0 { (1.0 / d as f64).sqrt() } else { (2.0 / d as f64).sqrt() };
    (0..d)
        .map(|j| {
            let phase = 2.0 * PI * m as f64 * centered_index(d, j) / d as f64;
            match parity {
                Parity::Odd => c * phase.sin(),
                _ => c * phase.cos(),
            }
        })
        .collect()
}

/// Admissible `(m, parity)` labels for a ring of `d` sites: the ground state,
/// even states `1..=(d−1)/2` and odd states `1..=d/2`, ordered by energy with
/// even before odd inside a degenerate pair.
pub fn periodic_labels(d: usize) -> Vec<(usize, Parity)> {
    let mut out = vec![(0, Parity::Even)];
    for m in 1..=d / 2 {
        if m <= (d - 1) / 2 {
            out.push((m, Parity::Even));
        }
        out.push((m, Parity::Odd));
    }
    out
}

/// Closed-form spectrum of a lattice with end points, `m = 1, …, d`.
pub fn analytic_spectrum_nonperiodic(config: &LatticeConfig) -> Result<EigenSystem> {
    config.validate()?;
    config.require("analytic_spectrum_nonperiodic", Boundary::Nonperiodic)?;
    let d = config.d;
    let entries = (1..=d)
        .map(|m| {
            let mut vector = nonperiodic_mode(d, m);
            fix_sign(&mut vector);
            EigenEntry {
                m,
                energy: energy_nonperiodic(config, m),
                parity: Parity::None,
                vector,
            }
        })
        .collect();
    Ok(EigenSystem {
        config: *config,
        source: Source::Analytic,
        entries,
    })
}

/// Closed-form spectrum of a ring: ground state plus the cosine (even) and sine
/// (odd) families.
///
/// For even `d` the top odd state `m = d/2` has `|sin(πn)| = 1` on every
/// half-integer site, so its vector is normalized numerically rather than with
/// `√(2/d)`.
pub fn analytic_spectrum_periodic(config: &LatticeConfig) -> Result<EigenSystem> {
    config.validate()?;
    config.require("analytic_spectrum_periodic", Boundary::Periodic)?;
    let d = config.d;
    let entries = periodic_labels(d)
        .into_iter()
        .map(|(m, parity)| {
            let mut vector = periodic_mode(d, m, parity);
            if 2 * m == d {
                normalize(&mut vector);
            }
            fix_sign(&mut vector);
            EigenEntry {
                m,
                energy: energy_periodic(config, m),
                parity,
                vector,
            }
        })
        .collect();
    Ok(EigenSystem {
        config: *config,
        source: Source::Analytic,
        entries,
    })
}

pub fn analytic_spectrum(config: &LatticeConfig) -> Result<EigenSystem> {
    match config.boundary {
        Boundary::Nonperiodic => analytic_spectrum_nonperiodic(config),
        Boundary::Periodic => analytic_spectrum_periodic(config),
    }
}

/// Real symmetric part of `h` after checking it really is real symmetric.
fn real_symmetric(h: &Operator) -> Result<Vec<f64>> {
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    if h.max_imag() > 1e-14 * scale || h.hermiticity_defect() > 1e-14 * scale {
        return Err(Error::InvalidArgument(format!(
            "operator '{}' is not real symmetric",
            h.label
        )));
    }
    Ok(h.real_part())
}

fn tridiagonal_parts(a: &[f64], n: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let scale = a.iter().map(|x| x.abs()).fold(0.0, f64::max);
    for i in 0..n {
        for j in 0..n {
            if i.abs_diff(j) > 1 && a[i * n + j].abs() > 1e-14 * scale {
                return None;
            }
        }
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    let off = (0..n.saturating_sub(1)).map(|i| a[i * n + i + 1]).collect();
    Some((diag, off))
}

/// Diagonalizes a symmetric block, taking the tridiagonal fast path when the
/// block has that shape.
fn solve_block(a: &[f64], n: usize, dim: usize) -> Result<SymmetricEigen> {
    match tridiagonal_parts(a, n) {
        Some((diag, off)) => symmetric_tridiagonal(&diag, &off, dim),
        None => jacobi(a, n).map_err(|_| Error::NoConvergence { d: dim, index: 0 }),
    }
}

/// Parity-adapted basis vectors `(|j⟩ ± |d−1−j⟩)/√2` (and the fixed middle site
/// for odd `d` in the even sector), as `(j, partner, weight_j, weight_partner)`.
fn reflection_sector(d: usize, parity: Parity) -> Vec<(usize, usize, f64, f64)> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis: Vec<_> = (0..d / 2)
        .map(|j| {
            let sign = if parity == Parity::Odd { -1.0 } else { 1.0 };
            (j, d - 1 - j, r, sign * r)
        })
        .collect();
    if d % 2 == 1 && parity == Parity::Even {
        basis.push((d / 2, d / 2, 1.0, 0.0));
    }
    basis
}

/// Solves a reflection-symmetric matrix one parity sector at a time. On a ring
/// each sector is tridiagonal in the parity-adapted basis.
fn solve_by_reflection(a: &[f64], d: usize) -> Result<Vec<(f64, Parity, Vec<f64>)>> {
    let mut out = Vec::with_capacity(d);
    for parity in [Parity::Even, Parity::Odd] {
        let basis = reflection_sector(d, parity);
        let k = basis.len();
        if k == 0 {
            continue;
        }
        // columns of H·Q, each with at most two contributing columns of H
        let hq: Vec<Vec<f64>> = basis
            .iter()
            .map(|&(j, p, wj, wp)| (0..d).map(|r| wj * a[r * d + j] + wp * a[r * d + p]).collect())
            .collect();
        let mut block = vec![0.0; k * k];
        for (r, &(j, p, wj, wp)) in basis.iter().enumerate() {
            for (c, col) in hq.iter().enumerate() {
                block[r * k + c] = wj * col[j] + wp * col[p];
            }
        }
        // symmetrize away rounding so the solver sees an exactly symmetric block
        for r in 0..k {
            for c in r + 1..k {
                let s = 0.5 * (block[r * k + c] + block[c * k + r]);
                block[r * k + c] = s;
                block[c * k + r] = s;
            }
        }
        let eig = solve_block(&block, k, d)?;
        for (value, y) in eig.values.into_iter().zip(eig.vectors) {
            let mut v = vec![0.0; d];
            for (&(j, p, wj, wp), yc) in basis.iter().zip(&y) {
                v[j] += wj * yc;
                if p != j {
                    v[p] += wp * yc;
                }
            }
            out.push((value, parity, v));
        }
    }
    Ok(out)
}

fn is_reflection_symmetric(a: &[f64], d: usize) -> bool {
    (0..d).all(|i| (0..d).all(|j| a[i * d + j] == a[(d - 1 - i) * d + (d - 1 - j)]))
}

/// Eigendecomposition of the built Hamiltonian without using any closed form.
///
/// Nonperiodic `H` goes straight to the tridiagonal solver. Periodic `H` commutes
/// with the site reflection, so it is split into even and odd sectors, each of
/// which is tridiagonal; the sector also fixes the parity tag.
pub fn numeric_spectrum(config: &LatticeConfig) -> Result<EigenSystem> {
    config.validate()?;
    let h = build_hamiltonian(config)?;
    numeric_spectrum_of(config, &h)
}

/// Like [`numeric_spectrum`] but for a caller-supplied real symmetric operator.
pub fn numeric_spectrum_of(config: &LatticeConfig, h: &Operator) -> Result<EigenSystem> {
    let d = h.dim();
    if d != config.d {
        return Err(Error::InvalidArgument(format!(
            "operator dimension {d} does not match d = {}",
            config.d
        )));
    }
    let a = real_symmetric(h)?;
    let mut pairs: Vec<(f64, Parity, Vec<f64>)> = match config.boundary {
        Boundary::Nonperiodic => {
            let eig = if h.structure_hint == StructureHint::Tridiagonal && h.structure_consistent() {
                let diag: Vec<f64> = (0..d).map(|i| a[i * d + i]).collect();
                let off: Vec<f64> = (0..d - 1).map(|i| a[i * d + i + 1]).collect();
                symmetric_tridiagonal(&diag, &off, d)?
            } else {
                solve_block(&a, d, d)?
            };
            eig.values
                .into_iter()
                .zip(eig.vectors)
                .map(|(e, v)| (e, Parity::None, v))
                .collect()
        }
        Boundary::Periodic if is_reflection_symmetric(&a, d) => solve_by_reflection(&a, d)?,
        Boundary::Periodic => {
            let eig = jacobi(&a, d)?;
            eig.values
                .into_iter()
                .zip(eig.vectors)
                .map(|(e, v)| (e, Parity::None, v))
                .collect()
        }
    };
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let energies: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let levels = cluster(&energies);
    for level in &levels {
        pairs[level.range.clone()].sort_by(|x, y| x.1.cmp(&y.1).then(x.0.total_cmp(&y.0)));
    }
    let mut entries = Vec::with_capacity(d);
    for (li, level) in levels.iter().enumerate() {
        for (energy, parity, mut vector) in pairs[level.range.clone()].iter().cloned() {
            fix_sign(&mut vector);
            let m = match config.boundary {
                Boundary::Nonperiodic => entries.len() + 1,
                Boundary::Periodic => li,
            };
            entries.push(EigenEntry {
                m,
                energy,
                parity,
                vector,
            });
        }
    }
    Ok(EigenSystem {
        config: *config,
        source: Source::Numeric,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelMatch {
    pub level: usize,
    pub multiplicity: usize,
    pub energy_analytic: f64,
    pub energy_numeric: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    /// Largest principal angle between the two eigenspaces (radians).
    pub angle: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMatch {
    pub d: usize,
    pub boundary: Boundary,
    pub multiplicities: Vec<usize>,
    /// Absolute floor actually applied: `ENERGY_ABS_TOL · max(1, E_max)`.
    pub abs_tol: f64,
    pub max_rel_dev: f64,
    pub max_abs_dev: f64,
    pub max_angle: f64,
    pub pass: bool,
    pub levels: Vec<LevelMatch>,
}

/// `sin` of the largest principal angle between `span(a)` and `span(b)`;
/// `b` must be orthonormal.
fn subspace_sine(a: &[&[f64]], b: &[&[f64]]) -> f64 {
    let residuals: Vec<Vec<f64>> = a
        .iter()
        .map(|x| {
            let mut r = x.to_vec();
            for y in b {
                let p = dot(x, y);
                r.iter_mut().zip(y.iter()).for_each(|(ri, yi)| *ri -= p * yi);
            }
            r
        })
        .collect();
    let k = residuals.len();
    let gram: Vec<f64> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| dot(&residuals[i], &residuals[j]))
        .collect();
    let largest = match k {
        0 => 0.0,
        1 => gram[0],
        2 => {
            let (p, q, r) = (gram[0], gram[1], gram[3]);
            0.5 * (p + r) + (0.25 * (p - r) * (p - r) + q * q).sqrt()
        }
        _ => jacobi(&gram, k)
            .map(|e| e.values.last().copied().unwrap_or(0.0))
            .unwrap_or(f64::INFINITY),
    };
    largest.max(0.0).sqrt()
}

/// Pairs levels of the two spectra by ascending energy and compares energies and
/// eigenspaces. A different degeneracy pattern is an error.
pub fn match_spectra(analytic: &EigenSystem, numeric: &EigenSystem) -> Result<SpectrumMatch> {
    if analytic.config.d != numeric.config.d || analytic.config.boundary != numeric.config.boundary
    {
        return Err(Error::InvalidArgument(
            "spectra belong to different lattices".into(),
        ));
    }
    let la = analytic.levels();
    let ln = numeric.levels();
    let ma: Vec<usize> = la.iter().map(Level::multiplicity).collect();
    let mn: Vec<usize> = ln.iter().map(Level::multiplicity).collect();
    if ma != mn {
        return Err(Error::MultiplicityMismatch {
            analytic: ma,
            numeric: mn,
        });
    }
    let with_vectors = analytic.has_vectors() && numeric.has_vectors();
    let scale = analytic.entries.iter().map(|e| e.energy.abs()).fold(1.0, f64::max);
    let abs_tol = ENERGY_ABS_TOL * scale;
    let mut levels = Vec::with_capacity(la.len());
    for (i, (a, n)) in la.iter().zip(&ln).enumerate() {
        let mut abs_dev: f64 = 0.0;
        let mut rel_dev: f64 = 0.0;
        let mut ok = true;
        for (ea, en) in a.range.clone().zip(n.range.clone()) {
            let (ea, en) = (analytic.entries[ea].energy, numeric.entries[en].energy);
            let abs = (ea - en).abs();
            let rel = if ea != 0.0 { abs / ea.abs() } else { abs };
            abs_dev = abs_dev.max(abs);
            rel_dev = rel_dev.max(rel);
            ok &= abs <= abs_tol || rel <= ENERGY_REL_TOL;
        }
        let angle = if with_vectors {
            let va: Vec<&[f64]> = a.range.clone().map(|j| analytic.entries[j].vector.as_slice()).collect();
            let vn: Vec<&[f64]> = n.range.clone().map(|j| numeric.entries[j].vector.as_slice()).collect();
            subspace_sine(&va, &vn).min(1.0).asin()
        } else {
            0.0
        };
        ok &= angle <= ANGLE_TOL;
        levels.push(LevelMatch {
            level: i,
            multiplicity: a.multiplicity(),
            energy_analytic: a.energy,
            energy_numeric: n.energy,
            abs_dev,
            rel_dev,
            angle,
            pass: ok,
        });
    }
    Ok(SpectrumMatch {
        d: analytic.config.d,
        boundary: analytic.config.boundary,
        multiplicities: ma,
        abs_tol,
        max_rel_dev: levels.iter().map(|l| l.rel_dev).fold(0.0, f64::max),
        max_abs_dev: levels.iter().map(|l| l.abs_dev).fold(0.0, f64::max),
        max_angle: levels.iter().map(|l| l.angle).fold(0.0, f64::max),
        pass: levels.iter().all(|l| l.pass),
        levels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Site coordinate: `0..d` on a segment, centered (possibly half-integer) on a ring.
    pub n: f64,
    pub x: f64,
    pub psi: f64,
}

/// Position-space wave function with `Σ|ψ|²a = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFunction {
    pub config: LatticeConfig,
    pub m: usize,
    pub parity: Parity,
    pub samples: Vec<Sample>,
    /// Set when the closed-form amplitude was replaced by numerical normalization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl WaveFunction {
    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|s| s.psi * s.psi).sum::<f64>() * self.config.a
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.psi).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `ψ_m(n) = √(2/((d+1)a))·sin(m(1+n)π/(d+1))`, defined for any integer `n` so the
/// virtual sites `−1` and `d` can be inspected.
pub fn nonperiodic_amplitude(config: &LatticeConfig, m: usize, n: i64) -> f64 {
    let d = config.d as f64;
    (2.0 / ((d + 1.0) * config.a)).sqrt() * (m as f64 * (1 + n) as f64 * PI / (d + 1.0)).sin()
}

fn check_label(config: &LatticeConfig, m: usize, parity: Parity) -> Result<()> {
    let d = config.d;
    let (lo, hi) = match (config.boundary, parity) {
        (Boundary::Nonperiodic, Parity::None) => (1, d),
        (Boundary::Nonperiodic, _) => {
            return Err(Error::InvalidArgument(
                "parity is only defined on a periodic lattice".into(),
            ))
        }
        (Boundary::Periodic, Parity::Even) => (0, (d - 1) / 2),
        (Boundary::Periodic, Parity::Odd) => (1, d / 2),
        (Boundary::Periodic, Parity::None) => {
            return Err(Error::InvalidArgument(
                "a periodic state needs an even or odd parity".into(),
            ))
        }
    };
    if m < lo || m > hi {
        return Err(Error::OutOfRange {
            what: "quantum number m",
            index: m as i64,
            min: lo as i64,
            max: hi as i64,
        });
    }
    Ok(())
}

/// Sampled eigenfunction for quantum number `m` (and parity on a ring).
pub fn wavefunction(config: &LatticeConfig, m: usize, parity: Parity) -> Result<WaveFunction> {
    config.validate()?;
    check_label(config, m, parity)?;
    let d = config.d;
    let a = config.a;
    let mut note = None;
    let samples = match config.boundary {
        Boundary::Nonperiodic => (0..d)
            .map(|n| Sample {
                n: n as f64,
                x: n as f64 * a,
                psi: nonperiodic_amplitude(config, m, n as i64),
            })
            .collect(),
        Boundary::Periodic => {
            let mut psi: Vec<f64> = periodic_mode(d, m, parity)
                .into_iter()
                .map(|v| v / a.sqrt())
                .collect();
            if 2 * m == d {
                let norm = (psi.iter().map(|p| p * p).sum::<f64>() * a).sqrt();
                psi.iter_mut().for_each(|p| *p /= norm);
                note = Some(format!(
                    "top odd state m = d/2: amplitude renormalized numerically to 1/sqrt(d a) \
                     (the generic 2/(d a) coefficient would give norm {:.1})",
                    norm * norm
                ));
            }
            psi.into_iter()
                .enumerate()
                .map(|(j, psi)| {
                    let n = centered_index(d, j);
                    Sample { n, x: n * a, psi }
                })
                .collect()
        }
    };
    Ok(WaveFunction {
        config: *config,
        m,
        parity,
        samples,
        note,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub max_residual: f64,
    /// `(m, parity, residual)` per entry.
    pub residuals: Vec<(usize, Parity, f64)>,
}

/// Checks `λ_{n+1} + λ_{n−1} = λ λ_n` for every eigenvector, with zero virtual
/// end sites on a segment and cyclic wraparound on a ring.
pub fn verify_recurrence(eigen: &EigenSystem) -> Result<RecurrenceReport> {
    if !eigen.has_vectors() {
        return Err(Error::InvalidArgument("eigen system carries no vectors".into()));
    }
    let cfg = &eigen.config;
    let d = cfg.d;
    let residuals: Vec<(usize, Parity, f64)> = eigen
        .entries
        .iter()
        .map(|e| {
            let lambda = hopping_eigenvalue(cfg, e.m);
            let v = &e.vector;
            let at = |i: i64| -> f64 {
                match cfg.boundary {
                    Boundary::Nonperiodic if i < 0 || i >= d as i64 => 0.0,
                    Boundary::Nonperiodic => v[i as usize],
                    Boundary::Periodic => v[i.rem_euclid(d as i64) as usize],
                }
            };
            let res = (0..d as i64)
                .map(|n| (at(n + 1) + at(n - 1) - lambda * at(n)).abs())
                .fold(0.0, f64::max);
            (e.m, e.parity, res)
        })
        .collect();
    Ok(RecurrenceReport {
        max_residual: residuals.iter().map(|r| r.2).fold(0.0, f64::max),
        residuals,
    })
}
