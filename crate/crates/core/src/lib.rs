//! Quantum mechanics on a discrete position space with a finite number of points.
//!
//! The crate covers two lattice geometries:
//!
//! * **Periodic** lattices (a ring of `d` sites) carrying the clock/shift pair `U`, `V`
//!   with `VU = qUV`, `q = e^{2πi/d}`.
//! * **Nonperiodic** lattices (a segment with two end points) carrying the truncated
//!   translations `u₊`, `u₋`, which are nilpotent instead of unitary.
//!
//! On top of the operator builders in [`lattice`] sit exact algebra checks
//! ([`algebra`]), closed-form and numerical spectra ([`spectra`], backed by the
//! self-contained solvers in [`eigen`]) and continuum-limit studies ([`continuum`]).
//!
//! All matrices use the position basis `|0⟩, …, |d−1⟩` with
//! `entries[m][n] = ⟨m| Op |n⟩`; see [`BASIS_CONVENTION`].

pub mod algebra;
pub mod config;
pub mod continuum;
pub mod eigen;
pub mod error;
pub mod io;
pub mod lattice;
pub mod operator;
pub mod spectra;

pub use config::{Boundary, LatticeConfig};
pub use error::{Error, Result};
pub use operator::{Operator, StructureHint};

/// Matrix-element convention shared by every operator in the crate.
pub const BASIS_CONVENTION: &str =
    "position basis |0>,...,|d-1> in ascending order; entries[m][n] = <m| Op |n>";

/// Default absolute tolerance for floating-point identity checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
