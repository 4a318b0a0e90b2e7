//! Pauli decomposition of tridiagonal matrices into commuting sets.
//!
//! A `2^n × 2^n` tridiagonal matrix `B` expands as
//! `B = 2^{-n} Σ β_{x,z} Ŵ(x,z)` where only `x ∈ {0, V_1, …, V_n}` can carry
//! non-zero weight. Labels sharing `x` and the parity of `x·z` commute, which
//! gives `2n + 1` commuting sets (`n + 1` when `B` is real symmetric).
//!
//! Set generation depends only on `n` and the matrix class; weights come
//! from closed-form sums over the matrix entries ([`diag_weights`],
//! [`offdiag_weights`]).

mod band;
mod embed;
mod input;
mod wave;
mod weights;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bitcore::{selector, BitString, WalshLabel};
use crate::error::{Error, Result};
use crate::scalar::{is_negligible, max_part, Scalar};

pub use embed::embed_hermitian;
pub use input::{parse_complex, parse_matrix_file, MatrixFile};
pub use wave::{wave_b_matrix, wave_hamiltonian, wave_weights_specialized, WaveHamiltonian};
pub use weights::{diag_weights, offdiag_weights};

/// Largest qubit count accepted by the decomposer (it enumerates `2^n` labels per set).
pub const MAX_QUBITS: usize = 24;

/// Declared symmetry of a tridiagonal input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryClass {
    General,
    Real,
    #[serde(rename = "symmetric")]
    RealSymmetric,
}

impl SymmetryClass {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::General => "general",
            SymmetryClass::Real => "real",
            SymmetryClass::RealSymmetric => "symmetric",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "general" | "general-complex" | "complex" => Ok(SymmetryClass::General),
            "real" => Ok(SymmetryClass::Real),
            "symmetric" | "real-symmetric" => Ok(SymmetryClass::RealSymmetric),
            other => Err(Error::Validation(format!(
                "unknown symmetry class `{other}`"
            ))),
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Class of the matrix a [`Decomposition`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixClass {
    General,
    Real,
    RealSymmetric,
    /// `[[0, B], [B†, 0]]` built from a real `B`.
    HermitianEmbedding,
}

impl From<SymmetryClass> for MatrixClass {
    fn from(c: SymmetryClass) -> Self {
        match c {
            SymmetryClass::General => MatrixClass::General,
            SymmetryClass::Real => MatrixClass::Real,
            SymmetryClass::RealSymmetric => MatrixClass::RealSymmetric,
        }
    }
}

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixClass::General => "general",
            MatrixClass::Real => "real",
            MatrixClass::RealSymmetric => "symmetric",
            MatrixClass::HermitianEmbedding => "hermitian-embedding",
        })
    }
}

/// Parity of the `Y` count shared by a set's labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetParity {
    Even,
    Odd,
    /// `S_0`: `x = 0`, so no `Y` factors at all.
    Mixed,
}

impl fmt::Display for SetParity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetParity::Even => "+",
            SetParity::Odd => "-",
            SetParity::Mixed => "0",
        })
    }
}

/// Diagonals of a `2^n × 2^n` tridiagonal matrix.
///
/// `c` is the main diagonal, `a[k] = B[k][k+1]`, `b[k] = B[k+1][k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalSpec<T: Scalar> {
    n: usize,
    c: Vec<Complex<T>>,
    a: Vec<Complex<T>>,
    b: Vec<Complex<T>>,
    class: SymmetryClass,
}

impl<T: Scalar> TridiagonalSpec<T> {
    pub fn new(
        n: usize,
        c: Vec<Complex<T>>,
        a: Vec<Complex<T>>,
        b: Vec<Complex<T>>,
        class: SymmetryClass,
    ) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if c.len() != dim {
            return Err(Error::LengthMismatch {
                what: "main diagonal",
                expected: dim,
                got: c.len(),
            });
        }
        for (what, v) in [("super-diagonal", &a), ("sub-diagonal", &b)] {
            if v.len() != dim - 1 {
                return Err(Error::LengthMismatch {
                    what,
                    expected: dim - 1,
                    got: v.len(),
                });
            }
        }
        let spec = Self { n, c, a, b, class };
        spec.check_class()?;
        Ok(spec)
    }

    /// Real entries; imaginary parts are zero.
    pub fn from_real(
        n: usize,
        c: Vec<T>,
        a: Vec<T>,
        b: Vec<T>,
        class: SymmetryClass,
    ) -> Result<Self> {
        let lift = |v: Vec<T>| {
            v.into_iter()
                .map(|re| Complex::new(re, T::zero()))
                .collect()
        };
        Self::new(n, lift(c), lift(a), lift(b), class)
    }

    fn check_class(&self) -> Result<()> {
        let mut problems = Vec::new();
        if matches!(
            self.class,
            SymmetryClass::Real | SymmetryClass::RealSymmetric
        ) {
            for (name, v) in [("c", &self.c), ("a", &self.a), ("b", &self.b)] {
                let bad: Vec<usize> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !e.im.is_zero())
                    .map(|(k, _)| k)
                    .collect();
                if !bad.is_empty() {
                    problems.push(format!("non-real entries in {name} at indices {bad:?}"));
                }
            }
        }
        if self.class == SymmetryClass::RealSymmetric {
            let bad: Vec<usize> = (0..self.a.len())
                .filter(|&k| self.a[k] != self.b[k])
                .collect();
            if !bad.is_empty() {
                problems.push(format!("a != b at indices {bad:?}"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "entries inconsistent with class `{}`: {}",
                self.class,
                problems.join("; ")
            )))
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn c(&self) -> &[Complex<T>] {
        &self.c
    }

    pub fn a(&self) -> &[Complex<T>] {
        &self.a
    }

    pub fn b(&self) -> &[Complex<T>] {
        &self.b
    }

    /// Entry `B[row][col]`.
    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        if row == col {
            self.c[row].clone()
        } else if col == row + 1 {
            self.a[row].clone()
        } else if row == col + 1 {
            self.b[col].clone()
        } else {
            Complex::zero()
        }
    }

    /// Largest `max(|re|, |im|)` over all entries.
    pub fn scale(&self) -> T {
        self.c
            .iter()
            .chain(&self.a)
            .chain(&self.b)
            .map(max_part)
            .fold(T::zero(), |acc, v| if v > acc { v } else { acc })
    }

    /// Most specific class the entries satisfy.
    pub fn inferred_class(&self) -> SymmetryClass {
        let real = self
            .c
            .iter()
            .chain(&self.a)
            .chain(&self.b)
            .all(|e| e.im.is_zero());
        if !real {
            SymmetryClass::General
        } else if self.a == self.b {
            SymmetryClass::RealSymmetric
        } else {
            SymmetryClass::Real
        }
    }

    /// `sqrt(‖B‖₁ ‖B‖_∞)`, an upper bound on the spectral norm of `B` and of
    /// its Hermitian embedding.
    pub fn norm_bound(&self) -> f64 {
        let dim = self.dim();
        let abs = |row: usize, col: usize| crate::scalar::to_c64(&self.entry(row, col)).norm();
        let band = |k: usize| k.saturating_sub(1)..(k + 2).min(dim);
        let row_max = (0..dim)
            .map(|r| band(r).map(|c| abs(r, c)).sum::<f64>())
            .fold(0.0, f64::max);
        let col_max = (0..dim)
            .map(|c| band(c).map(|r| abs(r, c)).sum::<f64>())
            .fold(0.0, f64::max);
        (row_max * col_max).sqrt()
    }

    /// Entries divided by `h`.
    pub fn scaled(&self, h: &T) -> Self {
        let div = |v: &[Complex<T>]| v.iter().map(|e| e.clone() / h.clone()).collect();
        Self {
            n: self.n,
            c: div(&self.c),
            a: div(&self.a),
            b: div(&self.b),
            class: self.class,
        }
    }
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::OutOfRange {
            what: "qubit count n",
            value: n as u64,
            limit: MAX_QUBITS as u64,
        });
    }
    Ok(())
}

/// One weighted Pauli string.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm<T: Scalar> {
    pub label: WalshLabel,
    pub weight: Complex<T>,
}

/// Label structure of one commuting set, before weights are known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetStructure {
    pub m: usize,
    pub parity: SetParity,
    pub x_selector: BitString,
    pub labels: Vec<WalshLabel>,
}

/// Pairwise-commuting group of weighted Pauli strings sharing one `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutingSet<T: Scalar> {
    pub m: usize,
    pub parity: SetParity,
    pub x_selector: BitString,
    pub terms: Vec<PauliTerm<T>>,
}

impl<T: Scalar> CommutingSet<T> {
    pub fn labels(&self) -> Vec<WalshLabel> {
        self.terms.iter().map(|t| t.label).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// `S_0`, `S_{m,+}`, `S_{m,-}` style name.
    pub fn name(&self) -> String {
        match self.parity {
            SetParity::Mixed => format!("S_{}", self.m),
            p => format!("S_{},{}", self.m, p),
        }
    }
}

/// `M = prefactor · Σ weight · Ŵ(label)` grouped into commuting sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<T: Scalar> {
    width: usize,
    class: MatrixClass,
    prefactor_exp: usize,
    sets: Vec<CommutingSet<T>>,
}

impl<T: Scalar> Decomposition<T> {
    pub fn new(
        width: usize,
        class: MatrixClass,
        prefactor_exp: usize,
        sets: Vec<CommutingSet<T>>,
    ) -> Self {
        Self {
            width,
            class,
            prefactor_exp,
            sets,
        }
    }

    /// Qubit count of the labels.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn class(&self) -> MatrixClass {
        self.class
    }

    /// The prefactor is `2^{-prefactor_exp}`.
    pub fn prefactor_exp(&self) -> usize {
        self.prefactor_exp
    }

    pub fn prefactor(&self) -> f64 {
        (-(self.prefactor_exp as f64)).exp2()
    }

    pub fn sets(&self) -> &[CommutingSet<T>] {
        &self.sets
    }

    pub fn terms(&self) -> impl Iterator<Item = &PauliTerm<T>> {
        self.sets.iter().flat_map(|s| s.terms.iter())
    }

    pub fn term_count(&self) -> usize {
        self.sets.iter().map(|s| s.terms.len()).sum()
    }

    pub fn nonempty_set_count(&self) -> usize {
        self.sets.iter().filter(|s| !s.terms.is_empty()).count()
    }

    pub fn weights(&self) -> BTreeMap<WalshLabel, Complex<T>> {
        self.terms().map(|t| (t.label, t.weight.clone())).collect()
    }

    pub fn to_f64(&self) -> Decomposition<f64> {
        let sets = self
            .sets
            .iter()
            .map(|s| CommutingSet {
                m: s.m,
                parity: s.parity,
                x_selector: s.x_selector,
                terms: s
                    .terms
                    .iter()
                    .map(|t| PauliTerm {
                        label: t.label,
                        weight: crate::scalar::to_c64(&t.weight),
                    })
                    .collect(),
            })
            .collect();
        Decomposition {
            width: self.width,
            class: self.class,
            prefactor_exp: self.prefactor_exp,
            sets,
        }
    }
}

/// Commuting-set structure for an `n`-qubit tridiagonal matrix of `class`.
///
/// Order: `S_0`, then `S_{m,+}` (and `S_{m,-}` unless real symmetric) for
/// `m = 1..=n`. Within a set, labels are listed by ascending `z`.
pub fn generate_sets(n: usize, class: SymmetryClass) -> Result<Vec<SetStructure>> {
    check_qubits(n)?;
    let dim = 1u64 << n;
    let mut sets = vec![SetStructure {
        m: 0,
        parity: SetParity::Mixed,
        x_selector: selector(0, n)?,
        labels: (0..dim)
            .map(|z| WalshLabel::from_bits(0, z, n))
            .collect::<Result<_>>()?,
    }];
    for m in 1..=n {
        let x = selector(m, n)?;
        let mut even = Vec::with_capacity(1 << (n - 1));
        let mut odd = Vec::with_capacity(1 << (n - 1));
        for z in 0..dim {
            let label = WalshLabel::from_bits(x.bits(), z, n)?;
            if label.y_count() % 2 == 0 {
                even.push(label);
            } else {
                odd.push(label);
            }
        }
        sets.push(SetStructure {
            m,
            parity: SetParity::Even,
            x_selector: x,
            labels: even,
        });
        if class != SymmetryClass::RealSymmetric {
            sets.push(SetStructure {
                m,
                parity: SetParity::Odd,
                x_selector: x,
                labels: odd,
            });
        }
    }
    Ok(sets)
}

/// Full decomposition of a tridiagonal matrix, zero weights pruned.
pub fn decompose<T: Scalar>(spec: &TridiagonalSpec<T>) -> Result<Decomposition<T>> {
    let n = spec.n();
    let threshold = T::zero_threshold(&spec.scale());
    let structure = generate_sets(n, spec.class())?;

    let diag = diag_weights(spec.c(), n)?;
    let mut offdiag: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    for m in 1..=n {
        offdiag.push(offdiag_weights(spec.a(), spec.b(), m, n)?);
    }

    let sets = structure
        .into_iter()
        .map(|s| {
            let table = if s.m == 0 { &diag } else { &offdiag[s.m - 1] };
            let terms = s
                .labels
                .iter()
                .filter_map(|label| {
                    let w = &table[label.z_bits() as usize];
                    (!is_negligible(w, &threshold)).then(|| PauliTerm {
                        label: *label,
                        weight: w.clone(),
                    })
                })
                .collect();
            CommutingSet {
                m: s.m,
                parity: s.parity,
                x_selector: s.x_selector,
                terms,
            }
        })
        .collect();

    Ok(Decomposition::new(n, spec.class().into(), n, sets))
}
