//! Operator builders for periodic and nonperiodic lattices.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Boundary, LatticeConfig};
use crate::error::Result;
use crate::operator::{Operator, StructureHint};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Right,
    Left,
}

/// Centered coordinate `n − (d−1)/2` of storage index `j`. Half-integer for even `d`.
pub fn centered_index(d: usize, j: usize) -> f64 {
    j as f64 - (d as f64 - 1.0) / 2.0
}

/// Signed representative of momentum mode `k` in `(−d/2, d/2]`.
pub fn signed_mode(k: usize, d: usize) -> i64 {
    let (k, d) = (k as i64, d as i64);
    if 2 * k <= d {
        k
    } else {
        k - d
    }
}

/// Truncated translation on a lattice with end points.
///
/// `Right` gives `u₊` with `u₊|n⟩ = |n+1⟩` and `u₊|d−1⟩ = 0`; `Left` gives its
/// adjoint `u₋`.
pub fn build_shift_nonperiodic(config: &LatticeConfig, direction: Direction) -> Result<Operator> {
    config.validate()?;
    config.require("build_shift_nonperiodic", Boundary::Nonperiodic)?;
    let d = config.d;
    let (label, op) = match direction {
        Direction::Right => ("u+", Operator::from_fn("u+", d, StructureHint::Tridiagonal, |m, n| {
            if m == n + 1 { ONE } else { ZERO }
        })),
        Direction::Left => ("u-", Operator::from_fn("u-", d, StructureHint::Tridiagonal, |m, n| {
            if n == m + 1 { ONE } else { ZERO }
        })),
    };
    Ok(op.with_label(label))
}

/// Cyclic shift `U|n⟩ = |n+1 mod d⟩`.
pub fn build_shift_periodic(config: &LatticeConfig) -> Result<Operator> {
    config.validate()?;
    config.require("build_shift_periodic", Boundary::Periodic)?;
    let d = config.d;
    Ok(Operator::from_fn("U", d, StructureHint::Circulant, |m, n| {
        if m == (n + 1) % d {
            ONE
        } else {
            ZERO
        }
    }))
}

/// Clock operator `V = diag(1, q, …, q^{d−1})`.
pub fn build_clock(config: &LatticeConfig) -> Result<Operator> {
    config.validate()?;
    config.require("build_clock", Boundary::Periodic)?;
    let theta = config.q_angle();
    Ok(Operator::from_diagonal(
        "V",
        (0..config.d).map(|n| Complex64::from_polar(1.0, theta * n as f64)),
    ))
}

/// Position operator `X|n⟩ = na|n⟩`; with `centered` the site labels run over
/// `−(d−1)/2, …, (d−1)/2`.
pub fn build_position(config: &LatticeConfig, centered: bool) -> Result<Operator> {
    config.validate()?;
    let d = config.d;
    let label = if centered { "X_centered" } else { "X" };
    Ok(Operator::from_diagonal(
        label,
        (0..d).map(|j| {
            let n = if centered { centered_index(d, j) } else { j as f64 };
            Complex64::new(n * config.a, 0.0)
        }),
    ))
}

/// Free-particle Hamiltonian `c·[2 − (S + S†)]` with `S = U` (periodic) or
/// `S = u₊` (nonperiodic) and `c = π²ħ²/(2(ad)²M sin²(π/d))`.
pub fn build_hamiltonian(config: &LatticeConfig) -> Result<Operator> {
    config.validate()?;
    let shift = match config.boundary {
        Boundary::Nonperiodic => build_shift_nonperiodic(config, Direction::Right)?,
        Boundary::Periodic => build_shift_periodic(config)?,
    };
    let c = config.hopping();
    let d = config.d;
    let hint = match config.boundary {
        Boundary::Nonperiodic => StructureHint::Tridiagonal,
        Boundary::Periodic => StructureHint::Circulant,
    };
    Ok(Operator::from_fn("H", d, hint, |m, n| {
        let kinetic = if m == n { 2.0 } else { 0.0 };
        let hop = shift.get(m, n).re + shift.get(n, m).re;
        Complex64::new(c * (kinetic - hop), 0.0)
    }))
}

/// The `d` discrete Fourier vectors `v_k(n) = e^{2πikn/d}/√d`, `k = 0, …, d−1`.
///
/// `U v_k = e^{−2πik/d} v_k`.
pub fn momentum_basis(config: &LatticeConfig) -> Result<Vec<(usize, Vec<Complex64>)>> {
    config.validate()?;
    config.require("momentum_basis", Boundary::Periodic)?;
    let d = config.d;
    let norm = 1.0 / (d as f64).sqrt();
    Ok((0..d)
        .map(|k| {
            let v = (0..d)
                .map(|n| Complex64::from_polar(norm, fourier_phase(k * n, d)))
                .collect();
            (k, v)
        })
        .collect())
}

/// `2π·(r mod d)/d`, reduced before scaling so large products stay accurate.
fn fourier_phase(r: usize, d: usize) -> f64 {
    2.0 * PI * (r % d) as f64 / d as f64
}

/// How the square root of `U` was fixed on each momentum mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfPowerBranch {
    /// Human-readable rule, emitted alongside any output that depends on it.
    pub rule: String,
    /// For even `d`, the mode `k = d/2` whose square root is two-valued.
    pub ambiguous_mode: Option<usize>,
    /// `U^{1/2}` eigenvalue assigned to the ambiguous mode.
    pub ambiguous_eigenvalue: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformedMomentum {
    pub operator: Operator,
    pub branch: HalfPowerBranch,
}

/// Circulant operator that is diagonal in the Fourier basis with eigenvalue
/// `f(k̂)` on mode `k`.
fn circulant_from_modes(
    label: &str,
    d: usize,
    f: impl Fn(i64) -> Complex64,
) -> Operator {
    let eig: Vec<Complex64> = (0..d).map(|k| f(signed_mode(k, d))).collect();
    // entry (m, n) = (1/d) Σ_k f_k e^{2πik(m−n)/d}, depends on r = (m − n) mod d
    let col: Vec<Complex64> = (0..d)
        .map(|r| {
            eig.iter()
                .enumerate()
                .map(|(k, fk)| fk * Complex64::from_polar(1.0, fourier_phase(k * r, d)))
                .sum::<Complex64>()
                / d as f64
        })
        .collect();
    Operator::from_fn(label, d, StructureHint::Circulant, |m, n| col[(m + d - n) % d])
}

/// `U^{s/2}` for `s = ±1`, with eigenvalue `e^{−iπ s k̂/d}` on mode `k`.
pub fn build_half_shift(config: &LatticeConfig, sign: i8) -> Result<Operator> {
    config.validate()?;
    config.require("build_half_shift", Boundary::Periodic)?;
    let d = config.d;
    let s = if sign < 0 { -1.0 } else { 1.0 };
    let label = if sign < 0 { "U^-1/2" } else { "U^1/2" };
    Ok(circulant_from_modes(label, d, |kh| {
        Complex64::from_polar(1.0, -PI * s * kh as f64 / d as f64)
    }))
}

/// Deformed momentum `P̃ = (2πħ/(ad))·(U^{−1/2} − U^{1/2})/(q^{1/2} − q^{−1/2})`.
///
/// On mode `k̂` its eigenvalue is `(2πħ/(ad))·sin(πk̂/d)/sin(π/d)`.
pub fn build_deformed_momentum(config: &LatticeConfig) -> Result<DeformedMomentum> {
    config.validate()?;
    config.require("build_deformed_momentum", Boundary::Periodic)?;
    let d = config.d;
    let minus = build_half_shift(config, -1)?;
    let plus = build_half_shift(config, 1)?;
    let half_q = Complex64::from_polar(1.0, PI / d as f64);
    let denom = half_q - half_q.inv();
    let scale = 2.0 * PI * config.hbar / (config.a * d as f64);
    let operator = minus
        .sub(&plus)
        .scale(Complex64::new(scale, 0.0) / denom)
        .with_label("P~")
        .with_hint(StructureHint::Circulant);

    let (ambiguous_mode, ambiguous_eigenvalue) = if d % 2 == 0 {
        let z = Complex64::from_polar(1.0, -PI / 2.0);
        (Some(d / 2), Some([z.re, z.im]))
    } else {
        (None, None)
    };
    let rule = if d % 2 == 0 {
        "U eigenvalue exp(-2*pi*i*k/d) -> exp(-i*pi*kh/d) with kh the signed mode in (-d/2, d/2]; \
         the two-valued mode k = d/2 takes kh = +d/2, i.e. U^(1/2) eigenvalue -i"
    } else {
        "U eigenvalue exp(-2*pi*i*k/d) -> exp(-i*pi*kh/d) with kh the signed mode in (-d/2, d/2] (principal branch)"
    };
    Ok(DeformedMomentum {
        operator,
        branch: HalfPowerBranch {
            rule: rule.to_string(),
            ambiguous_mode,
            ambiguous_eigenvalue,
        },
    })
}

/// Closed-form eigenvalue of `P̃` on the signed mode `k̂`.
pub fn deformed_momentum_eigenvalue(config: &LatticeConfig, signed_k: i64) -> f64 {
    let d = config.d as f64;
    (2.0 * PI * config.hbar / (config.a * d)) * (PI * signed_k as f64 / d).sin() / (PI / d).sin()
}

/// Site reflection `n → −n` on the centered ring, i.e. `|j⟩ → |d−1−j⟩` in storage order.
pub fn build_parity(config: &LatticeConfig) -> Result<Operator> {
    config.validate()?;
    config.require("build_parity", Boundary::Periodic)?;
    let d = config.d;
    Ok(Operator::from_fn("Parity", d, StructureHint::Dense, |m, n| {
        if m + n == d - 1 {
            ONE
        } else {
            ZERO
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn open(d: usize) -> LatticeConfig {
        LatticeConfig::unit(d, Boundary::Nonperiodic).unwrap()
    }

    fn ring(d: usize) -> LatticeConfig {
        LatticeConfig::unit(d, Boundary::Periodic).unwrap()
    }

    fn real_rows(op: &Operator) -> Vec<Vec<f64>> {
        let d = op.dim();
        (0..d).map(|m| (0..d).map(|n| op.get(m, n).re).collect()).collect()
    }

    #[test]
    fn nonperiodic_shift_small_cases() {
        let r = build_shift_nonperiodic(&open(2), Direction::Right).unwrap();
        assert_eq!(real_rows(&r), vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
        let l = build_shift_nonperiodic(&open(3), Direction::Left).unwrap();
        assert_eq!(
            real_rows(&l),
            vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0]]
        );
        assert!(r.structure_consistent() && l.structure_consistent());
        assert_eq!(l, build_shift_nonperiodic(&open(3), Direction::Right).unwrap().adjoint().with_label("u-"));
    }

    #[test]
    fn right_shift_annihilates_last_site() {
        let u = build_shift_nonperiodic(&open(5), Direction::Right).unwrap();
        let mut e4 = vec![c(0.0); 5];
        e4[4] = c(1.0);
        assert!(u.apply(&e4).iter().all(|z| *z == c(0.0)));
    }

    #[test]
    fn builders_reject_wrong_boundary() {
        assert!(build_shift_nonperiodic(&ring(3), Direction::Right).is_err());
        assert!(build_shift_periodic(&open(3)).is_err());
        assert!(build_clock(&open(3)).is_err());
        assert!(build_deformed_momentum(&open(3)).is_err());
        assert!(build_parity(&open(3)).is_err());
        assert!(momentum_basis(&open(3)).is_err());
    }

    #[test]
    fn periodic_shift_small_cases() {
        let u2 = build_shift_periodic(&ring(2)).unwrap();
        assert_eq!(real_rows(&u2), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let u3 = build_shift_periodic(&ring(3)).unwrap();
        for n in 0..3 {
            for m in 0..3 {
                let want = if m == (n + 1) % 3 { 1.0 } else { 0.0 };
                assert_eq!(u3.get(m, n), c(want));
            }
        }
        for d in 2..12 {
            let u = build_shift_periodic(&ring(d)).unwrap();
            assert_eq!(u.pow(d).max_abs_diff(&Operator::identity("I", d)), 0.0);
            assert!(u.structure_consistent());
        }
    }

    #[test]
    fn clock_small_cases() {
        let v2 = build_clock(&ring(2)).unwrap();
        assert!((v2.get(1, 1) - c(-1.0)).norm() < 1e-15);
        let v4 = build_clock(&ring(4)).unwrap();
        let want = [c(1.0), Complex64::new(0.0, 1.0), c(-1.0), Complex64::new(0.0, -1.0)];
        for (n, w) in want.iter().enumerate() {
            assert!((v4.get(n, n) - w).norm() < 1e-15);
        }
        for d in 2..10 {
            let u = build_shift_periodic(&ring(d)).unwrap();
            let v = build_clock(&ring(d)).unwrap();
            let q = Complex64::from_polar(1.0, 2.0 * PI / d as f64);
            let dev = v.matmul(&u).max_abs_diff(&u.matmul(&v).scale(q));
            assert!(dev < 1e-14, "d={d} dev={dev}");
        }
    }

    #[test]
    fn position_operator() {
        let x = build_position(&open(3), false).unwrap();
        assert_eq!((0..3).map(|n| x.get(n, n).re).collect::<Vec<_>>(), vec![0.0, 1.0, 2.0]);
        let xc = build_position(&ring(3), true).unwrap();
        assert_eq!((0..3).map(|n| xc.get(n, n).re).collect::<Vec<_>>(), vec![-1.0, 0.0, 1.0]);
        let cfg = LatticeConfig::new(4, 2.0, 1.0, 1.0, Boundary::Periodic).unwrap();
        let x4 = build_position(&cfg, true).unwrap();
        assert_eq!(
            (0..4).map(|n| x4.get(n, n).re).collect::<Vec<_>>(),
            vec![-3.0, -1.0, 1.0, 3.0]
        );
    }

    #[test]
    fn hamiltonian_two_site_open() {
        let h = build_hamiltonian(&open(2)).unwrap();
        let s = PI * PI / 8.0;
        let want = [[2.0 * s, -s], [-s, 2.0 * s]];
        for m in 0..2 {
            for n in 0..2 {
                assert!((h.get(m, n).re - want[m][n]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn hamiltonian_four_site_ring() {
        // (π²/16)·(1/(2 sin²(π/4)))·(2I − C − Cᵀ) = (π²/16)(2I − C − Cᵀ)
        let h = build_hamiltonian(&ring(4)).unwrap();
        let s = PI * PI / 16.0;
        for m in 0..4 {
            assert!((h.get(m, m).re - 2.0 * s).abs() < 1e-14);
            assert!((h.get(m, (m + 1) % 4).re + s).abs() < 1e-14);
            assert!((h.get(m, (m + 2) % 4).re).abs() == 0.0);
        }
        assert!(h.structure_consistent());
        assert_eq!(h.hermiticity_defect(), 0.0);
    }

    #[test]
    fn hamiltonian_two_site_ring_doubles_the_bond() {
        let h = build_hamiltonian(&ring(2)).unwrap();
        let c = LatticeConfig::unit(2, Boundary::Periodic).unwrap().hopping();
        assert!((h.get(0, 1).re + 2.0 * c).abs() < 1e-15);
        assert!((h.get(0, 0).re - 2.0 * c).abs() < 1e-15);
    }

    #[test]
    fn momentum_basis_small_cases() {
        let b2 = momentum_basis(&ring(2)).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((b2[0].1[1] - c(r)).norm() < 1e-15);
        assert!((b2[1].1[1] - c(-r)).norm() < 1e-15);

        let cfg = ring(4);
        let u = build_shift_periodic(&cfg).unwrap();
        let b4 = momentum_basis(&cfg).unwrap();
        let (k, v) = &b4[1];
        assert_eq!(*k, 1);
        let want = [c(0.5), Complex64::new(0.0, 0.5), c(-0.5), Complex64::new(0.0, -0.5)];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
        let uv = u.apply(v);
        let lambda = Complex64::from_polar(1.0, -2.0 * PI / 4.0);
        for (a, b) in uv.iter().zip(v) {
            assert!((a - lambda * b).norm() < 1e-15);
        }
    }

    #[test]
    fn half_shift_squares_to_shift() {
        for d in 2..12 {
            let cfg = ring(d);
            let h = build_half_shift(&cfg, 1).unwrap();
            let hm = build_half_shift(&cfg, -1).unwrap();
            let u = build_shift_periodic(&cfg).unwrap();
            assert!(h.matmul(&h).max_abs_diff(&u) < 1e-13, "d={d}");
            assert!(h.matmul(&hm).max_abs_diff(&Operator::identity("I", d)) < 1e-13);
        }
    }

    #[test]
    fn deformed_momentum_three_sites() {
        let cfg = ring(3);
        let p = build_deformed_momentum(&cfg).unwrap();
        assert!(p.branch.ambiguous_mode.is_none());
        let basis = momentum_basis(&cfg).unwrap();
        let (_, v1) = &basis[1];
        let pv = p.operator.apply(v1);
        let want = 2.0 * PI / 3.0;
        for (a, b) in pv.iter().zip(v1) {
            assert!((a - b * want).norm() < 1e-14);
        }
        let (_, v0) = &basis[0];
        assert!(p.operator.apply(v0).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn deformed_momentum_even_d_reports_branch() {
        let p = build_deformed_momentum(&ring(4)).unwrap();
        assert_eq!(p.branch.ambiguous_mode, Some(2));
        assert!(p.operator.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn parity_small_cases() {
        let p3 = build_parity(&ring(3)).unwrap();
        assert_eq!(
            real_rows(&p3),
            vec![vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]
        );
        for d in 2..10 {
            let cfg = ring(d);
            let p = build_parity(&cfg).unwrap();
            assert_eq!(p.matmul(&p).max_abs_diff(&Operator::identity("I", d)), 0.0);
            let h = build_hamiltonian(&cfg).unwrap();
            assert_eq!(p.matmul(&h).matmul(&p).max_abs_diff(&h), 0.0);
        }
    }

    #[test]
    fn builders_are_deterministic() {
        let cfg = LatticeConfig::new(7, 0.3, 2.0, 1.5, Boundary::Periodic).unwrap();
        let a = build_deformed_momentum(&cfg).unwrap();
        let b = build_deformed_momentum(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(build_hamiltonian(&cfg).unwrap(), build_hamiltonian(&cfg).unwrap());
    }
}
