use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparsity pattern an operator is known to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureHint {
    Dense,
    Tridiagonal,
    Circulant,
    Diagonal,
}

impl fmt::Display for StructureHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StructureHint::Dense => "dense",
            StructureHint::Tridiagonal => "tridiagonal",
            StructureHint::Circulant => "circulant",
            StructureHint::Diagonal => "diagonal",
        };
        f.write_str(s)
    }
}

/// A labelled `dim × dim` complex matrix in the position basis.
///
/// Entries are stored densely in row-major order, `entries[m * dim + n] = ⟨m|Op|n⟩`.
/// The structure hint only advertises a pattern; the dense entries are always
/// authoritative.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub label: String,
    dim: usize,
    entries: Vec<Complex64>,
    pub structure_hint: StructureHint,
}

impl Operator {
    pub fn zeros(label: impl Into<String>, dim: usize) -> Self {
        Self {
            label: label.into(),
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
            structure_hint: StructureHint::Dense,
        }
    }

    pub fn identity(label: impl Into<String>, dim: usize) -> Self {
        let mut op = Self::zeros(label, dim);
        for i in 0..dim {
            op.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        op.structure_hint = StructureHint::Diagonal;
        op
    }

    pub fn from_fn(
        label: impl Into<String>,
        dim: usize,
        hint: StructureHint,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for m in 0..dim {
            for n in 0..dim {
                entries.push(f(m, n));
            }
        }
        Self {
            label: label.into(),
            dim,
            entries,
            structure_hint: hint,
        }
    }

    pub fn from_diagonal(
        label: impl Into<String>,
        diag: impl IntoIterator<Item = Complex64>,
    ) -> Self {
        let diag: Vec<Complex64> = diag.into_iter().collect();
        let dim = diag.len();
        Self::from_fn(label, dim, StructureHint::Diagonal, |m, n| {
            if m == n {
                diag[m]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_entries(
        label: impl Into<String>,
        dim: usize,
        entries: Vec<Complex64>,
        hint: StructureHint,
    ) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {dim}x{dim} operator, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self {
            label: label.into(),
            dim,
            entries,
            structure_hint: hint,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[m * self.dim + n]
    }

    #[inline]
    pub fn set(&mut self, m: usize, n: usize, v: Complex64) {
        self.entries[m * self.dim + n] = v;
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_hint(mut self, hint: StructureHint) -> Self {
        self.structure_hint = hint;
        self
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        Self::from_fn(format!("{}^dag", self.label), d, self.structure_hint, |m, n| {
            self.get(n, m).conj()
        })
    }

    /// Matrix product `self · rhs`. Zero entries of `self` are skipped, so products
    /// of shift-like operators cost `O(nnz · d)`.
    pub fn matmul(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matmul");
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            let row = &mut out[i * d..(i + 1) * d];
            for k in 0..d {
                let aik = self.entries[i * d + k];
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                let rk = &rhs.entries[k * d..(k + 1) * d];
                for (o, b) in row.iter_mut().zip(rk) {
                    *o += aik * b;
                }
            }
        }
        Operator {
            label: format!("{}*{}", self.label, rhs.label),
            dim: d,
            entries: out,
            structure_hint: StructureHint::Dense,
        }
    }

    /// `self^k` by repeated multiplication (`k = 0` gives the identity).
    pub fn pow(&self, k: usize) -> Operator {
        let mut acc = Operator::identity(format!("{}^{k}", self.label), self.dim);
        for _ in 0..k {
            acc = acc.matmul(self);
        }
        acc.label = format!("{}^{k}", self.label);
        acc
    }

    pub fn add(&self, rhs: &Operator) -> Operator {
        self.zip_with(rhs, |a, b| a + b, "+")
    }

    pub fn sub(&self, rhs: &Operator) -> Operator {
        self.zip_with(rhs, |a, b| a - b, "-")
    }

    pub fn scale(&self, s: Complex64) -> Operator {
        Operator {
            label: format!("({s})*{}", self.label),
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * s).collect(),
            structure_hint: self.structure_hint,
        }
    }

    fn zip_with(
        &self,
        rhs: &Operator,
        f: impl Fn(Complex64, Complex64) -> Complex64,
        sym: &str,
    ) -> Operator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Operator {
            label: format!("{}{sym}{}", self.label, rhs.label),
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
            structure_hint: StructureHint::Dense,
        }
    }

    /// `Op |v⟩`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        (0..d)
            .map(|m| {
                self.entries[m * d..(m + 1) * d]
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect()
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Operator) -> f64 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Largest `|Im|` over all entries.
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|e| e.im.abs()).fold(0.0, f64::max)
    }

    /// Real parts, row-major.
    pub fn real_part(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.re).collect()
    }

    /// `max |Op - Op†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for m in 0..d {
            for n in m..d {
                worst = worst.max((self.get(m, n) - self.get(n, m).conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Whether the entries actually follow the advertised structure hint
    /// (exact comparison).
    pub fn structure_consistent(&self) -> bool {
        let d = self.dim;
        match self.structure_hint {
            StructureHint::Dense => true,
            StructureHint::Diagonal => {
                (0..d).all(|m| (0..d).all(|n| m == n || self.get(m, n) == Complex64::new(0.0, 0.0)))
            }
            StructureHint::Tridiagonal => (0..d).all(|m| {
                (0..d).all(|n| m.abs_diff(n) <= 1 || self.get(m, n) == Complex64::new(0.0, 0.0))
            }),
            StructureHint::Circulant => (0..d)
                .all(|m| (0..d).all(|n| self.get(m, n) == self.get((m + 1) % d, (n + 1) % d))),
        }
    }
}

/// Wire form: `{label, dim, structure_hint, entries: [[re, im], ...]}` row-major.
#[derive(Serialize, Deserialize)]
struct OperatorWire {
    label: String,
    dim: usize,
    structure_hint: StructureHint,
    entries: Vec<[f64; 2]>,
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorWire {
            label: self.label.clone(),
            dim: self.dim,
            structure_hint: self.structure_hint,
            entries: self.entries.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = OperatorWire::deserialize(d)?;
        let entries = wire
            .entries
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        Operator::from_entries(wire.label, wire.dim, entries, wire.structure_hint)
            .map_err(serde::de::Error::custom)
    }
}

impl Operator {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
