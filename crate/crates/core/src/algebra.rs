//! Matrix-level verification of the lattice operator algebras.
//!
//! Relations among the truncated translations and their projections involve only
//! 0/1 matrices, so they are checked in exact integer arithmetic ([`IntMatrix`]).
//! The clock/shift and Pauli relations carry phases and are checked in `f64`
//! complex arithmetic against a tolerance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Boundary, LatticeConfig};
use crate::error::{Error, Result};
use crate::lattice::{
    build_clock, build_deformed_momentum, build_hamiltonian, build_shift_periodic,
    deformed_momentum_eigenvalue, momentum_basis, signed_mode,
};
use crate::operator::{Operator, StructureHint};

/// Dense square integer matrix with exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1;
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// `u₊`: `|n⟩ → |n+1⟩`, `|d−1⟩ → 0`.
    pub fn raising(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| i64::from(i == j + 1))
    }

    /// `u₋`: `|n⟩ → |n−1⟩`, `|0⟩ → 0`.
    pub fn lowering(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| i64::from(j == i + 1))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.dim + j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    /// Product, skipping zero entries of `self`.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = IntMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.dim);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim);
        IntMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.data[i * d + j] * v[j]).sum())
            .collect()
    }

    /// Largest `|self − rhs|` entry.
    pub fn max_abs_diff(&self, rhs: &IntMatrix) -> i64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| (0..d).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn to_operator(&self, label: impl Into<String>, hint: StructureHint) -> Operator {
        Operator::from_fn(label, self.dim, hint, |i, j| {
            Complex64::new(self.get(i, j) as f64, 0.0)
        })
    }
}

/// One checked identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity in plain notation (`u` is the left shift, `u†` the right shift).
    pub relation: String,
    pub max_dev: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: LatticeConfig,
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    fn new(suite: &str, config: &LatticeConfig, tolerance: f64) -> Self {
        Self {
            suite: suite.to_string(),
            config: *config,
            tolerance,
            checks: Vec::new(),
        }
    }

    /// Exact check: passes only at zero deviation.
    fn exact(&mut self, name: &str, relation: &str, dev: i64) {
        self.checks.push(Check {
            name: name.to_string(),
            relation: relation.to_string(),
            max_dev: dev as f64,
            pass: dev == 0,
        });
    }

    fn approx(&mut self, name: &str, relation: &str, dev: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            relation: relation.to_string(),
            max_dev: dev,
            pass: dev <= self.tolerance,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_dev(&self) -> f64 {
        self.checks.iter().map(|c| c.max_dev).fold(0.0, f64::max)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// The projections `P₀ = 1`, `P_n = u†ⁿuⁿ` (`u = u₋`, `u† = u₊`), `n = 0, …, d`.
#[derive(Debug, Clone)]
pub struct ProjectionFamily {
    pub config: LatticeConfig,
    pub members: Vec<IntMatrix>,
}

impl ProjectionFamily {
    pub fn new(config: &LatticeConfig) -> Result<Self> {
        config.validate()?;
        config.require("ProjectionFamily", Boundary::Nonperiodic)?;
        let d = config.d;
        let u = IntMatrix::lowering(d);
        let udag = IntMatrix::raising(d);
        let mut members = Vec::with_capacity(d + 1);
        let mut un = IntMatrix::identity(d);
        let mut udn = IntMatrix::identity(d);
        for n in 0..=d {
            if n > 0 {
                un = un.mul(&u);
                udn = udn.mul(&udag);
            }
            members.push(udn.mul(&un));
        }
        Ok(Self {
            config: *config,
            members,
        })
    }

    pub fn get(&self, n: usize) -> &IntMatrix {
        &self.members[n]
    }
}

/// `P_n` as an operator.
pub fn projection(config: &LatticeConfig, n: usize) -> Result<Operator> {
    config.validate()?;
    config.require("projection", Boundary::Nonperiodic)?;
    if n > config.d {
        return Err(Error::OutOfRange {
            what: "projection index",
            index: n as i64,
            min: 0,
            max: config.d as i64,
        });
    }
    let d = config.d;
    let p = IntMatrix::raising(d).pow(n).mul(&IntMatrix::lowering(d).pow(n));
    Ok(p.to_operator(format!("P_{n}"), StructureHint::Diagonal))
}

fn unit_vector(d: usize, n: usize) -> Vec<i64> {
    let mut e = vec![0; d];
    e[n] = 1;
    e
}

fn vec_dev(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or(0)
}

/// Nilpotency, adjointness and the two unitarity-breaking relations of the
/// truncated translations, plus their action on end-point and interior states.
pub fn verify_translation_algebra(
    config: &LatticeConfig,
    tolerance: f64,
) -> Result<VerificationReport> {
    config.validate()?;
    config.require("verify_translation_algebra", Boundary::Nonperiodic)?;
    let d = config.d;
    let up = IntMatrix::raising(d);
    let down = IntMatrix::lowering(d);
    let id = IntMatrix::identity(d);
    let zero = IntMatrix::zeros(d);
    let up_top = up.pow(d - 1);
    let down_top = down.pow(d - 1);
    let down_up = down.mul(&up);
    let up_down = up.mul(&down);

    let mut r = VerificationReport::new("translation_algebra", config, tolerance);
    r.exact("right_shift_nilpotent", "u+^d = 0", up.pow(d).max_abs_diff(&zero));
    r.exact("left_shift_nilpotent", "u-^d = 0", down.pow(d).max_abs_diff(&zero));
    r.exact("adjoint_pair", "u+^dag = u-", up.transpose().max_abs_diff(&down));
    r.exact(
        "left_relation",
        "u- u+ = 1 - u+^(d-1) u-^(d-1)",
        down_up.max_abs_diff(&id.sub(&up_top.mul(&down_top))),
    );
    r.exact(
        "right_relation",
        "u+ u- = 1 - u-^(d-1) u+^(d-1)",
        up_down.max_abs_diff(&id.sub(&down_top.mul(&up_top))),
    );

    let zero_vec = vec![0; d];
    r.exact(
        "first_site_not_unitary",
        "u+ u- |0> = 0",
        vec_dev(&up_down.apply(&unit_vector(d, 0)), &zero_vec),
    );
    r.exact(
        "last_site_not_unitary",
        "u- u+ |d-1> = 0",
        vec_dev(&down_up.apply(&unit_vector(d, d - 1)), &zero_vec),
    );
    let interior_right = (1..d)
        .map(|n| {
            let e = unit_vector(d, n);
            vec_dev(&up_down.apply(&e), &e)
        })
        .max()
        .unwrap_or(0);
    r.exact("interior_right_unitary", "u+ u- |n> = |n>, n >= 1", interior_right);
    let interior_left = (0..d - 1)
        .map(|n| {
            let e = unit_vector(d, n);
            vec_dev(&down_up.apply(&e), &e)
        })
        .max()
        .unwrap_or(0);
    r.exact("interior_left_unitary", "u- u+ |n> = |n>, n <= d-2", interior_left);
    Ok(r)
}

/// The two relations that define the algebra generated by `u = u₋` and `u† = u₊`:
/// `u u† = 1 − u†^{d−1}u^{d−1}` and `u^d = 0`.
pub fn verify_minimal_axioms(
    config: &LatticeConfig,
    tolerance: f64,
) -> Result<VerificationReport> {
    config.validate()?;
    config.require("verify_minimal_axioms", Boundary::Nonperiodic)?;
    let d = config.d;
    let u = IntMatrix::lowering(d);
    let udag = IntMatrix::raising(d);
    let mut r = VerificationReport::new("minimal_axioms", config, tolerance);
    let rhs = IntMatrix::identity(d).sub(&udag.pow(d - 1).mul(&u.pow(d - 1)));
    r.exact(
        "defining_relation",
        "u u^dag = 1 - u^dag^(d-1) u^(d-1)",
        u.mul(&udag).max_abs_diff(&rhs),
    );
    r.exact("defining_nilpotency", "u^d = 0", u.pow(d).max_abs_diff(&IntMatrix::zeros(d)));
    Ok(r)
}

/// Projection lattice identities, exhaustively over every admissible index.
pub fn verify_projection_lattice(
    config: &LatticeConfig,
    tolerance: f64,
) -> Result<VerificationReport> {
    let fam = ProjectionFamily::new(config)?;
    let d = config.d;
    let u = IntMatrix::lowering(d);
    let udag = IntMatrix::raising(d);
    let id = IntMatrix::identity(d);
    let p = |n: usize| fam.get(n);

    let mut r = VerificationReport::new("projection_lattice", config, tolerance);

    let binary = fam
        .members
        .iter()
        .map(|m| {
            if !m.is_diagonal() {
                return 1;
            }
            (0..d)
                .map(|i| if matches!(m.get(i, i), 0 | 1) { 0 } else { 1 })
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    r.exact("diagonal_binary", "P_n diagonal with entries in {0,1}", binary);
    r.exact("identity_first", "P_0 = 1", p(0).max_abs_diff(&id));
    r.exact("top_vanishes", "P_d = 0", p(d).max_abs_diff(&IntMatrix::zeros(d)));

    let mut inclusion = 0;
    for n in 0..=d {
        for m in n..=d {
            inclusion = inclusion.max(p(n).mul(p(m)).max_abs_diff(p(m)));
        }
    }
    r.exact("inclusion", "P_n P_m = P_m, m >= n", inclusion);

    let idempotent = (0..=d)
        .map(|n| p(n).mul(p(n)).max_abs_diff(p(n)))
        .max()
        .unwrap_or(0);
    r.exact("idempotent", "P_n^2 = P_n", idempotent);

    let raise = (1..=d)
        .map(|m| p(m).mul(&udag).max_abs_diff(&udag.mul(p(m - 1))))
        .max()
        .unwrap_or(0);
    r.exact("raise_intertwine", "P_m u^dag = u^dag P_(m-1)", raise);

    let lower = (1..=d)
        .map(|m| u.mul(p(m)).max_abs_diff(&p(m - 1).mul(&u)))
        .max()
        .unwrap_or(0);
    r.exact("lower_intertwine", "u P_m = P_(m-1) u", lower);

    let shift = (0..d)
        .map(|m| p(m).mul(&u).max_abs_diff(&u.mul(p(m + 1))))
        .max()
        .unwrap_or(0);
    r.exact("lower_shift", "P_m u = u P_(m+1)", shift);

    r.exact(
        "raise_kills_top",
        "u^dag P_(d-1) = 0",
        udag.mul(p(d - 1)).max_abs_diff(&IntMatrix::zeros(d)),
    );

    let mut complement = 0;
    let mut un = IntMatrix::identity(d);
    let mut udn = IntMatrix::identity(d);
    for n in 1..d {
        un = un.mul(&u);
        udn = udn.mul(&udag);
        complement = complement.max(un.mul(&udn).max_abs_diff(&id.sub(p(d - n))));
    }
    r.exact("complement", "u^n u^dag^n = 1 - P_(d-n), 1 <= n <= d-1", complement);

    let top = u
        .pow(d - 1)
        .mul(&udag.pow(d - 1))
        .max_abs_diff(&id.sub(&udag.mul(&u)));
    r.exact("complement_top", "u^(d-1) u^dag^(d-1) = 1 - u^dag u", top);
    Ok(r)
}

/// Clock/shift relations on a periodic lattice.
pub fn verify_weyl_pair(config: &LatticeConfig, tolerance: f64) -> Result<VerificationReport> {
    config.validate()?;
    config.require("verify_weyl_pair", Boundary::Periodic)?;
    let d = config.d;
    let u = build_shift_periodic(config)?;
    let v = build_clock(config)?;
    let id = Operator::identity("I", d);
    let q = Complex64::from_polar(1.0, config.q_angle());

    let mut r = VerificationReport::new("weyl_pair", config, tolerance);
    r.approx("shift_order", "U^d = 1", u.pow(d).max_abs_diff(&id));
    r.approx("clock_order", "V^d = 1", v.pow(d).max_abs_diff(&id));
    r.approx(
        "weyl_commutation",
        "VU = qUV",
        v.matmul(&u).max_abs_diff(&u.matmul(&v).scale(q)),
    );
    r.approx("shift_unitary", "U^dag U = 1", u.adjoint().matmul(&u).max_abs_diff(&id));
    r.approx("clock_unitary", "V^dag V = 1", v.adjoint().matmul(&v).max_abs_diff(&id));
    Ok(r)
}

/// `σ₁ = u† + u`, `σ₂ = i(u† − u)`, `σ₃ = uu† − u†u` on two sites, with
/// `u = u₋`, `u† = u₊`. This convention gives `σ₃ = diag(1, −1)`.
pub fn pauli_matrices(config: &LatticeConfig) -> Result<[Operator; 3]> {
    config.validate()?;
    config.require("pauli_matrices", Boundary::Nonperiodic)?;
    if config.d != 2 {
        return Err(Error::InvalidArgument(format!(
            "the Pauli construction needs d = 2, got d = {}",
            config.d
        )));
    }
    let u = IntMatrix::lowering(2).to_operator("u", StructureHint::Dense);
    let udag = IntMatrix::raising(2).to_operator("u^dag", StructureHint::Dense);
    let i = Complex64::new(0.0, 1.0);
    let s1 = udag.add(&u).with_label("sigma1");
    let s2 = udag.sub(&u).scale(i).with_label("sigma2");
    let s3 = u.matmul(&udag).sub(&udag.matmul(&u)).with_label("sigma3");
    Ok([s1, s2, s3])
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub fn verify_pauli(config: &LatticeConfig, tolerance: f64) -> Result<VerificationReport> {
    let sigma = pauli_matrices(config)?;
    let id = Operator::identity("I", 2);
    let i = Complex64::new(0.0, 1.0);
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut r = VerificationReport::new("pauli", config, tolerance);

    let reference = [
        [c(0.0), c(1.0), c(1.0), c(0.0)],
        [c(0.0), -i, i, c(0.0)],
        [c(1.0), c(0.0), c(0.0), c(-1.0)],
    ];
    for (k, want) in reference.iter().enumerate() {
        let want = Operator::from_entries("ref", 2, want.to_vec(), StructureHint::Dense)?;
        r.approx(
            &format!("sigma{}_standard_form", k + 1),
            &format!("sigma{} equals the standard Pauli matrix", k + 1),
            sigma[k].max_abs_diff(&want),
        );
    }
    for (k, s) in sigma.iter().enumerate() {
        r.approx(
            &format!("sigma{}_squares_to_one", k + 1),
            &format!("sigma{}^2 = 1", k + 1),
            s.matmul(s).max_abs_diff(&id),
        );
    }
    for (a, b, c3) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        r.approx(
            &format!("sigma{}_sigma{}", a + 1, b + 1),
            &format!("sigma{} sigma{} = i sigma{}", a + 1, b + 1, c3 + 1),
            sigma[a].matmul(&sigma[b]).max_abs_diff(&sigma[c3].scale(i)),
        );
    }
    let mut anti: f64 = 0.0;
    let mut table: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let delta = if a == b { 1.0 } else { 0.0 };
            let ab = sigma[a].matmul(&sigma[b]);
            let ba = sigma[b].matmul(&sigma[a]);
            anti = anti.max(ab.add(&ba).max_abs_diff(&id.scale(c(2.0 * delta))));
            let mut want = id.scale(c(delta));
            for (k, s) in sigma.iter().enumerate() {
                want = want.add(&s.scale(i * levi_civita(a, b, k)));
            }
            table = table.max(ab.max_abs_diff(&want));
        }
    }
    r.approx("anticommutators", "{sigma_i, sigma_j} = 2 delta_ij", anti);
    r.approx(
        "product_table",
        "sigma_i sigma_j = delta_ij + i eps_ijk sigma_k",
        table,
    );
    let triple = sigma[0].matmul(&sigma[1]).matmul(&sigma[2]);
    r.approx("triple_product", "sigma1 sigma2 sigma3 = i", triple.max_abs_diff(&id.scale(i)));
    Ok(r)
}

/// Deformed momentum consistency on a ring: Hermitian, commutes with `U`, acts on
/// each Fourier mode with its closed-form eigenvalue, and squares to `2M·H`.
pub fn verify_deformed_momentum(
    config: &LatticeConfig,
    tolerance: f64,
) -> Result<VerificationReport> {
    config.validate()?;
    config.require("verify_deformed_momentum", Boundary::Periodic)?;
    let d = config.d;
    let p = build_deformed_momentum(config)?.operator;
    let u = build_shift_periodic(config)?;
    let h = build_hamiltonian(config)?;

    let mut r = VerificationReport::new("deformed_momentum", config, tolerance);
    r.approx("hermitian", "P~ = P~^dag", p.hermiticity_defect());
    r.approx(
        "commutes_with_shift",
        "P~ U = U P~",
        p.matmul(&u).max_abs_diff(&u.matmul(&p)),
    );
    let mode_dev = momentum_basis(config)?
        .into_iter()
        .map(|(k, v)| {
            let lambda = deformed_momentum_eigenvalue(config, signed_mode(k, d));
            p.apply(&v)
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * lambda).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    r.approx("mode_eigenvalues", "P~ v_k = p(k) v_k", mode_dev);
    r.approx(
        "square_is_kinetic",
        "P~^2 = 2 M H",
        p.matmul(&p)
            .max_abs_diff(&h.scale(Complex64::new(2.0 * config.mass, 0.0))),
    );
    Ok(r)
}
