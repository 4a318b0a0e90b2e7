//! Simultaneous diagonalization of commuting Pauli sets by Clifford circuits.
//!
//! For a commuting set `S` we build a Clifford `D` such that `D P D†` is a
//! signed `Z`-only string for every `P ∈ S`. Then
//! `exp(-iθP) = D† exp(-iθ σ Λ) D` with `σ = ±1` and `Λ` diagonal.
//!
//! Synthesis is Gaussian elimination on a GF(2) basis of the set. Each
//! round takes the first generator with a non-zero `x` part, funnels its
//! `x` bits onto the lowest free qubit `q` with CX, clears its `Z` on `q`
//! with S and on the other free qubits with CZ, and turns the remaining
//! `X_q` into `Z_q` with H. At most `2n` gates per round and `n` rounds.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::bitcore::WalshLabel;
use crate::decomposer::CommutingSet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Gates emitted per qubit squared never exceed this.
pub const GATE_BUDGET_K: usize = 2;

/// Clifford gate, qubits 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    CX(usize, usize),
    CZ(usize, usize),
}

impl CliffordGate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::H(q) | CliffordGate::S(q) | CliffordGate::Sdg(q) | CliffordGate::X(q) => {
                vec![q]
            }
            CliffordGate::CX(a, b) | CliffordGate::CZ(a, b) => vec![a, b],
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            CliffordGate::S(q) => CliffordGate::Sdg(q),
            CliffordGate::Sdg(q) => CliffordGate::S(q),
            g => g,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliffordGate::H(_) => "H",
            CliffordGate::S(_) => "S",
            CliffordGate::Sdg(_) => "SDG",
            CliffordGate::X(_) => "X",
            CliffordGate::CX(..) => "CX",
            CliffordGate::CZ(..) => "CZ",
        }
    }

    fn check(&self, width: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= width {
                return Err(Error::OutOfRange {
                    what: "gate qubit index",
                    value: q as u64 + 1,
                    limit: width as u64,
                });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::Validation(format!(
                "two-qubit gate {self} acts twice on one qubit"
            )));
        }
        Ok(())
    }
}

/// Native text form, 1-based: `H 1`, `CX 1 4`.
impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CliffordGate::CX(a, b) | CliffordGate::CZ(a, b) => {
                write!(f, "{} {} {}", self.name(), a + 1, b + 1)
            }
            CliffordGate::H(q) | CliffordGate::S(q) | CliffordGate::Sdg(q) | CliffordGate::X(q) => {
                write!(f, "{} {}", self.name(), q + 1)
            }
        }
    }
}

impl FromStr for CliffordGate {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut it = s.split_whitespace();
        let name = it.next().ok_or("empty gate line")?.to_ascii_uppercase();
        let qs: Vec<usize> = it
            .map(|t| match t.parse::<usize>() {
                Ok(0) | Err(_) => Err(format!("bad qubit index `{t}` (1-based)")),
                Ok(v) => Ok(v - 1),
            })
            .collect::<std::result::Result<_, _>>()?;
        let arity = if matches!(name.as_str(), "CX" | "CNOT" | "CZ") {
            2
        } else {
            1
        };
        if qs.len() != arity {
            return Err(format!("{name} takes {arity} qubit(s), got {}", qs.len()));
        }
        Ok(match name.as_str() {
            "H" => CliffordGate::H(qs[0]),
            "S" => CliffordGate::S(qs[0]),
            "SDG" => CliffordGate::Sdg(qs[0]),
            "X" => CliffordGate::X(qs[0]),
            "CX" | "CNOT" => CliffordGate::CX(qs[0], qs[1]),
            "CZ" => CliffordGate::CZ(qs[0], qs[1]),
            other => return Err(format!("unknown gate `{other}`")),
        })
    }
}

/// Pauli string with a sign: `(-1)^negative · Ŵ(label)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedLabel {
    pub label: WalshLabel,
    pub negative: bool,
}

impl SignedLabel {
    pub fn positive(label: WalshLabel) -> Self {
        Self {
            label,
            negative: false,
        }
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for SignedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.negative { '-' } else { '+' }, self.label)
    }
}

// Raw (x, z, negative) form used in the inner loops.
fn conj_raw(gate: CliffordGate, x: &mut u64, z: &mut u64, neg: &mut bool) {
    let bit = |v: u64, q: usize| (v >> q) & 1 == 1;
    let flip = |v: &mut u64, q: usize| *v ^= 1 << q;
    match gate {
        CliffordGate::H(q) => {
            let (xq, zq) = (bit(*x, q), bit(*z, q));
            *neg ^= xq && zq;
            if xq != zq {
                flip(x, q);
                flip(z, q);
            }
        }
        CliffordGate::S(q) => {
            let (xq, zq) = (bit(*x, q), bit(*z, q));
            *neg ^= xq && zq;
            if xq {
                flip(z, q);
            }
        }
        CliffordGate::Sdg(q) => {
            let (xq, zq) = (bit(*x, q), bit(*z, q));
            *neg ^= xq && !zq;
            if xq {
                flip(z, q);
            }
        }
        CliffordGate::X(q) => *neg ^= bit(*z, q),
        CliffordGate::CX(c, t) => {
            let (xc, zc, xt, zt) = (bit(*x, c), bit(*z, c), bit(*x, t), bit(*z, t));
            *neg ^= xc && zt && !(xt ^ zc);
            if xc {
                flip(x, t);
            }
            if zt {
                flip(z, c);
            }
        }
        CliffordGate::CZ(a, b) => {
            conj_raw(CliffordGate::H(b), x, z, neg);
            conj_raw(CliffordGate::CX(a, b), x, z, neg);
            conj_raw(CliffordGate::H(b), x, z, neg);
        }
    }
}

/// Image `G P G†` of a signed Pauli string under one Clifford gate.
pub fn symplectic_conjugate(gate: CliffordGate, p: SignedLabel) -> Result<SignedLabel> {
    let width = p.label.width();
    gate.check(width)?;
    let (mut x, mut z, mut neg) = (p.label.x_bits(), p.label.z_bits(), p.negative);
    conj_raw(gate, &mut x, &mut z, &mut neg);
    Ok(SignedLabel {
        label: WalshLabel::from_bits(x, z, width)?,
        negative: neg,
    })
}

/// Ordered Clifford gate list; the first gate acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliffordCircuit {
    width: usize,
    gates: Vec<CliffordGate>,
}

impl CliffordCircuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(width: usize, gates: Vec<CliffordGate>) -> Result<Self> {
        let mut c = Self::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: CliffordGate) -> Result<()> {
        gate.check(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `D†`.
    pub fn inverse(&self) -> Self {
        Self {
            width: self.width,
            gates: self.gates.iter().rev().map(CliffordGate::inverse).collect(),
        }
    }

    /// `D P D†`.
    pub fn conjugate(&self, p: SignedLabel) -> Result<SignedLabel> {
        if p.label.width() != self.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: p.label.width(),
            });
        }
        let (mut x, mut z, mut neg) = (p.label.x_bits(), p.label.z_bits(), p.negative);
        for &g in &self.gates {
            conj_raw(g, &mut x, &mut z, &mut neg);
        }
        Ok(SignedLabel {
            label: WalshLabel::from_bits(x, z, self.width)?,
            negative: neg,
        })
    }

    /// One gate per line, 1-based qubits.
    pub fn to_text(&self) -> String {
        self.gates.iter().map(|g| format!("{g}\n")).collect()
    }

    /// Inverse of [`to_text`](Self::to_text). Blank lines and `#` comments are skipped.
    pub fn parse_text(width: usize, text: &str) -> Result<Self> {
        let mut c = Self::new(width);
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let gate: CliffordGate = line
                .parse()
                .map_err(|msg| Error::Parse { line: k + 1, msg })?;
            c.push(gate).map_err(|e| Error::Parse {
                line: k + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(c)
    }
}

/// One term after diagonalization.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalTerm<T: Scalar> {
    /// Label in the source set.
    pub source: WalshLabel,
    /// `Z`-only image under the diagonalizer.
    pub label: WalshLabel,
    /// Conjugation sign `σ` with `D P D† = σ Λ`.
    pub sign: i8,
    /// Weight copied from the source set.
    pub weight: Complex<T>,
}

/// Output of [`diagonalize_set`].
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalizedSet<T: Scalar> {
    pub clifford: CliffordCircuit,
    pub diagonal_terms: Vec<DiagonalTerm<T>>,
    /// `name()` of the source set.
    pub source_set: String,
    pub m: usize,
}

/// First non-commuting pair, in set order.
fn find_noncommuting(labels: &[WalshLabel]) -> Option<(WalshLabel, WalshLabel)> {
    for (i, p) in labels.iter().enumerate() {
        for q in &labels[i + 1..] {
            if !p.commutes_with(q).unwrap_or(false) {
                return Some((*p, *q));
            }
        }
    }
    None
}

/// GF(2) basis of the labels, keeping the earliest independent ones.
fn gf2_basis(labels: &[WalshLabel]) -> Vec<(u64, u64)> {
    let mut echelon: Vec<u128> = Vec::new();
    let mut basis = Vec::new();
    for l in labels {
        let mut v = (l.x_bits() as u128) | ((l.z_bits() as u128) << 64);
        for &row in &echelon {
            let lead = 127 - row.leading_zeros();
            if (v >> lead) & 1 == 1 {
                v ^= row;
            }
        }
        if v != 0 {
            echelon.push(v);
            echelon.sort_unstable_by(|a, b| b.cmp(a));
            basis.push((l.x_bits(), l.z_bits()));
        }
    }
    basis
}

/// Clifford circuit mapping every label of a commuting family to `Z`-only.
pub fn diagonalizing_circuit(width: usize, labels: &[WalshLabel]) -> Result<CliffordCircuit> {
    for l in labels {
        if l.width() != width {
            return Err(Error::WidthMismatch {
                left: width,
                right: l.width(),
            });
        }
    }
    let mut gens = gf2_basis(labels);
    // Commutation is bilinear, so checking the basis covers the whole span.
    let symp =
        |a: (u64, u64), b: (u64, u64)| ((a.0 & b.1).count_ones() + (a.1 & b.0).count_ones()) % 2;
    let basis_commutes = gens
        .iter()
        .enumerate()
        .all(|(i, &a)| gens[i + 1..].iter().all(|&b| symp(a, b) == 0));
    if !basis_commutes {
        let (p, q) =
            find_noncommuting(labels).expect("non-commuting basis implies a non-commuting pair");
        return Err(Error::NonCommuting {
            first: p.to_string(),
            second: q.to_string(),
        });
    }

    let mut circuit = CliffordCircuit::new(width);
    let mut free: u64 = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    let emit = |g: CliffordGate,
                circuit: &mut CliffordCircuit,
                gens: &mut Vec<(u64, u64)>|
     -> Result<()> {
        circuit.push(g)?;
        let mut sink = false;
        for (x, z) in gens.iter_mut() {
            conj_raw(g, x, z, &mut sink);
        }
        Ok(())
    };

    while let Some(idx) = gens.iter().position(|&(x, _)| x != 0) {
        let x = gens[idx].0;
        debug_assert_eq!(x & !free, 0);
        let q = x.trailing_zeros() as usize;
        for t in (q + 1)..width {
            if (gens[idx].0 >> t) & 1 == 1 {
                emit(CliffordGate::CX(q, t), &mut circuit, &mut gens)?;
            }
        }
        if (gens[idx].1 >> q) & 1 == 1 {
            emit(CliffordGate::S(q), &mut circuit, &mut gens)?;
        }
        for t in 0..width {
            if t != q && (free >> t) & 1 == 1 && (gens[idx].1 >> t) & 1 == 1 {
                emit(CliffordGate::CZ(q, t), &mut circuit, &mut gens)?;
            }
        }
        emit(CliffordGate::H(q), &mut circuit, &mut gens)?;
        free &= !(1u64 << q);
    }
    Ok(circuit)
}

/// Diagonalizes one commuting set. Weights are copied unchanged; the
/// conjugation sign of each term is kept in [`DiagonalTerm::sign`].
pub fn diagonalize_set<T: Scalar>(set: &CommutingSet<T>) -> Result<DiagonalizedSet<T>> {
    let width = set.x_selector.width();
    let labels = set.labels();
    let clifford = diagonalizing_circuit(width, &labels)?;
    let diagonal_terms = set
        .terms
        .iter()
        .map(|t| {
            let img = clifford.conjugate(SignedLabel::positive(t.label))?;
            if !img.label.is_diagonal() {
                return Err(Error::NotDiagonal(img.label.to_string()));
            }
            Ok(DiagonalTerm {
                source: t.label,
                label: img.label,
                sign: img.sign(),
                weight: t.weight.clone(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(DiagonalizedSet {
        clifford,
        diagonal_terms,
        source_set: set.name(),
        m: set.m,
    })
}
