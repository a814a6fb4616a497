use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether the lattice closes on itself or has two end points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Nonperiodic,
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Nonperiodic => f.write_str("nonperiodic"),
            Boundary::Periodic => f.write_str("periodic"),
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nonperiodic" | "open" => Ok(Boundary::Nonperiodic),
            "periodic" | "ring" => Ok(Boundary::Periodic),
            other => Err(Error::InvalidArgument(format!("unknown boundary '{other}'"))),
        }
    }
}

/// Physical and structural parameters of a lattice.
///
/// `d` sites spaced by `a`, a particle of mass `mass`, in units where the reduced
/// Planck constant is `hbar`. The total length is `a(d-1)` for a nonperiodic
/// lattice (distance between the end points) and `ad` for a periodic one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub d: usize,
    pub a: f64,
    pub mass: f64,
    pub hbar: f64,
    pub boundary: Boundary,
}

impl LatticeConfig {
    /// Validated constructor.
    pub fn new(d: usize, a: f64, mass: f64, hbar: f64, boundary: Boundary) -> Result<Self> {
        let cfg = Self {
            d,
            a,
            mass,
            hbar,
            boundary,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `ħ = M = a = 1`.
    pub fn unit(d: usize, boundary: Boundary) -> Result<Self> {
        Self::new(d, 1.0, 1.0, 1.0, boundary)
    }

    /// Chooses `a` so that the lattice has total length `length` under the
    /// boundary-specific convention.
    pub fn from_length(
        d: usize,
        length: f64,
        mass: f64,
        hbar: f64,
        boundary: Boundary,
    ) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidConfig(format!("d must be at least 2, got {d}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidConfig(format!("L must be positive, got {length}")));
        }
        Self::new(d, spacing_for_length(d, length, boundary), mass, hbar, boundary)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidConfig(format!(
                "d must be at least 2, got {}",
                self.d
            )));
        }
        for (name, v) in [("a", self.a), ("M", self.mass), ("hbar", self.hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Total length `L`.
    pub fn length(&self) -> f64 {
        match self.boundary {
            Boundary::Nonperiodic => self.a * (self.d - 1) as f64,
            Boundary::Periodic => self.a * self.d as f64,
        }
    }

    /// Phase `2π/d` of `q = e^{2πi/d}`.
    pub fn q_angle(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.d as f64
    }

    /// Hopping scale `c = π²ħ² / (2 (ad)² M sin²(π/d))`: the Hamiltonian has `2c`
    /// on the diagonal and `-c` on each bond.
    pub fn hopping(&self) -> f64 {
        let pi = std::f64::consts::PI;
        let ad = self.a * self.d as f64;
        let s = (pi / self.d as f64).sin();
        pi * pi * self.hbar * self.hbar / (2.0 * ad * ad * self.mass * s * s)
    }

    pub(crate) fn require(&self, operation: &'static str, expected: Boundary) -> Result<()> {
        if self.boundary != expected {
            return Err(Error::WrongBoundary {
                operation,
                expected,
                found: self.boundary,
            });
        }
        Ok(())
    }
}

/// Lattice spacing for a total length `length` on `d` sites.
pub fn spacing_for_length(d: usize, length: f64, boundary: Boundary) -> f64 {
    match boundary {
        Boundary::Nonperiodic => length / (d - 1) as f64,
        Boundary::Periodic => length / d as f64,
    }
}
