use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use finiteqm::Boundary;

#[derive(Debug, Parser)]
#[command(
    name = "finiteqm",
    version,
    about = "Quantum mechanics on a finite lattice: spectra, wave functions, algebra checks and continuum limits",
    after_help = "Units: hbar = M = 1 and L = 1 unless given. Set FINITEQM_TOL to override the 1e-12 verification tolerance."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels from the closed forms, optionally checked against numerical diagonalization.
    Spectrum(SpectrumArgs),
    /// Sampled eigenfunction psi(n) for one state.
    Wavefunction(WavefunctionArgs),
    /// Exact matrix-level checks of the operator algebras.
    Verify(VerifyArgs),
    /// Convergence of energies (or the deformed momentum) to the continuum.
    Converge(ConvergeArgs),
    /// Export one lattice operator as JSON.
    Operator(OperatorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Nonperiodic,
    Periodic,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Nonperiodic => Boundary::Nonperiodic,
            BoundaryArg::Periodic => Boundary::Periodic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    Projections,
    Weyl,
    Pauli,
    Momentum,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorName {
    Shift,
    ShiftLeft,
    Clock,
    Position,
    PositionCentered,
    Hamiltonian,
    Momentum,
    Parity,
    Projection,
}

#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    #[arg(long, value_enum, default_value = "nonperiodic")]
    pub boundary: BoundaryArg,
    /// Number of lattice sites (at least 2).
    #[arg(long)]
    pub d: usize,
    /// Lattice spacing; the total length then follows from the boundary kind.
    #[arg(long, conflicts_with = "length")]
    pub a: Option<f64>,
    /// Total length (a(d-1) for nonperiodic, ad for periodic). Defaults to 1.
    #[arg(long = "L", visible_alias = "length", id = "length")]
    pub length: Option<f64>,
    /// Particle mass.
    #[arg(long = "M", visible_alias = "mass", default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Omit the metadata header (version and unit convention).
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Also diagonalize numerically and compare level by level.
    #[arg(long)]
    pub check: bool,
    /// Include eigenvectors.
    #[arg(long)]
    pub vectors: bool,
}

#[derive(Debug, Clone, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long)]
    pub m: usize,
    /// Required on a periodic lattice (m = 0 is even).
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    /// Defaults to nonperiodic; --expansion always uses a ring.
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long = "L", visible_alias = "length", default_value_t = 1.0)]
    pub length: f64,
    #[arg(long = "M", visible_alias = "mass", default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Comma-separated, strictly increasing list of d values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub dsweep: Vec<usize>,
    /// Check the deformed momentum against the continuum momentum instead.
    #[arg(long)]
    pub expansion: bool,
    /// Signed momentum mode for --expansion.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub mode: i64,
    /// Skip the decay-exponent fit (allows fewer than 4 sweep points).
    #[arg(long)]
    pub no_fit: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OperatorArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long, value_enum)]
    pub name: OperatorName,
    /// Index of the projection P_n.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Output file (JSON).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
