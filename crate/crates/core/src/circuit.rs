//! Gate-level circuits for `exp(-iHt)` built from diagonalized commuting sets.
//!
//! Rotation convention: `RZ(φ) = diag(e^{-iφ/2}, e^{iφ/2})`, so
//! `exp(-iθZ) = RZ(2θ)`.

use std::fmt::{self, Write as _};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::bitcore::WalshLabel;
use crate::decomposer::Decomposition;
use crate::diagonalizer::{CliffordGate, DiagonalizedSet};
use crate::error::{Error, Result};

/// Gate alphabet, qubits 0-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    CX(usize, usize),
    CZ(usize, usize),
    RZ(usize, f64),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::RZ(q, _) => vec![q],
            Gate::CX(a, b) | Gate::CZ(a, b) => vec![a, b],
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::RZ(q, phi) => Gate::RZ(q, -phi),
            g => g,
        }
    }
}

impl From<CliffordGate> for Gate {
    fn from(g: CliffordGate) -> Self {
        match g {
            CliffordGate::H(q) => Gate::H(q),
            CliffordGate::S(q) => Gate::S(q),
            CliffordGate::Sdg(q) => Gate::Sdg(q),
            CliffordGate::X(q) => Gate::X(q),
            CliffordGate::CX(a, b) => Gate::CX(a, b),
            CliffordGate::CZ(a, b) => Gate::CZ(a, b),
        }
    }
}

/// Native text form, 1-based: `H 1`, `CX 1 4`, `RZ 2 0.25`.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {}", q + 1),
            Gate::S(q) => write!(f, "S {}", q + 1),
            Gate::Sdg(q) => write!(f, "SDG {}", q + 1),
            Gate::X(q) => write!(f, "X {}", q + 1),
            Gate::CX(a, b) => write!(f, "CX {} {}", a + 1, b + 1),
            Gate::CZ(a, b) => write!(f, "CZ {} {}", a + 1, b + 1),
            Gate::RZ(q, phi) => write!(f, "RZ {} {phi:?}", q + 1),
        }
    }
}

/// Where a run of gates came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTag {
    /// Index of the commuting set in the decomposition.
    pub set: usize,
    /// Position of the block within one Trotter step.
    pub stage: usize,
    pub gates: Range<usize>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    /// The circuit implements `e^{i·global_phase} · U`.
    pub global_phase: f64,
    blocks: Vec<BlockTag>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            ..Default::default()
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn blocks(&self) -> &[BlockTag] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        for &q in &qs {
            if q >= self.width {
                return Err(Error::OutOfRange {
                    what: "gate qubit index",
                    value: q as u64 + 1,
                    limit: self.width as u64,
                });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::Validation(format!(
                "gate `{gate}` acts twice on one qubit"
            )));
        }
        if let Gate::RZ(_, phi) = gate {
            if !phi.is_finite() {
                return Err(Error::Validation(format!(
                    "non-finite rotation angle in `{gate}`"
                )));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`, shifting its block tags.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.width != self.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        let offset = self.gates.len();
        self.gates.extend_from_slice(&other.gates);
        self.global_phase += other.global_phase;
        self.blocks.extend(other.blocks.iter().map(|b| BlockTag {
            set: b.set,
            stage: b.stage,
            gates: b.gates.start + offset..b.gates.end + offset,
        }));
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        Self {
            width: self.width,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            global_phase: -self.global_phase,
            blocks: Vec::new(),
        }
    }

    /// One gate per line, 1-based qubits.
    pub fn to_text(&self) -> String {
        self.gates.iter().fold(String::new(), |mut s, g| {
            let _ = writeln!(s, "{g}");
            s
        })
    }

    /// OpenQASM 2.0 text.
    pub fn to_qasm(&self) -> String {
        let mut s = format!(
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{}];\n",
            self.width
        );
        for g in &self.gates {
            let _ = match *g {
                Gate::H(q) => writeln!(s, "h q[{q}];"),
                Gate::S(q) => writeln!(s, "s q[{q}];"),
                Gate::Sdg(q) => writeln!(s, "sdg q[{q}];"),
                Gate::X(q) => writeln!(s, "x q[{q}];"),
                Gate::CX(a, b) => writeln!(s, "cx q[{a}],q[{b}];"),
                Gate::CZ(a, b) => writeln!(s, "cz q[{a}],q[{b}];"),
                Gate::RZ(q, phi) => writeln!(s, "rz({phi:?}) q[{q}];"),
            };
        }
        s
    }
}

/// Per-kind gate tallies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCount {
    pub h: u64,
    pub s: u64,
    pub sdg: u64,
    pub x: u64,
    pub cx: u64,
    pub cz: u64,
    pub rz: u64,
    pub total: u64,
}

impl GateCount {
    pub const KINDS: [&'static str; 7] = ["h", "s", "sdg", "x", "cx", "cz", "rz"];

    pub fn per_kind(&self) -> [u64; 7] {
        [self.h, self.s, self.sdg, self.x, self.cx, self.cz, self.rz]
    }

    pub fn times(&self, k: u64) -> Self {
        Self {
            h: self.h * k,
            s: self.s * k,
            sdg: self.sdg * k,
            x: self.x * k,
            cx: self.cx * k,
            cz: self.cz * k,
            rz: self.rz * k,
            total: self.total * k,
        }
    }

    pub fn two_qubit(&self) -> u64 {
        self.cx + self.cz
    }
}

pub fn count_gates(c: &Circuit) -> GateCount {
    let mut n = GateCount::default();
    for g in c.gates() {
        match g {
            Gate::H(_) => n.h += 1,
            Gate::S(_) => n.s += 1,
            Gate::Sdg(_) => n.sdg += 1,
            Gate::X(_) => n.x += 1,
            Gate::CX(..) => n.cx += 1,
            Gate::CZ(..) => n.cz += 1,
            Gate::RZ(..) => n.rz += 1,
        }
    }
    n.total = c.len() as u64;
    n
}

/// Position of `z` in the reflected Gray sequence.
fn gray_rank(z: u64) -> u64 {
    let mut r = z;
    let mut shift = 1;
    while shift < 64 {
        r ^= r >> shift;
        shift <<= 1;
    }
    r
}

/// Circuit for `exp(-i Σ θ_z Z^z)` up to the global phase it records.
///
/// Each term is a CX parity ladder onto its highest qubit, `RZ(2θ)`, and
/// the ladder undone. Terms are visited in Gray-code order of `z`; when
/// two consecutive terms share a target only the differing controls are
/// toggled. Identity terms go into `global_phase`; zero angles are dropped.
pub fn synthesize_diagonal_exponent(width: usize, terms: &[(WalshLabel, f64)]) -> Result<Circuit> {
    let mut c = Circuit::new(width);
    let mut active: Vec<(u64, f64)> = Vec::with_capacity(terms.len());
    for (label, theta) in terms {
        if label.width() != width {
            return Err(Error::WidthMismatch {
                left: width,
                right: label.width(),
            });
        }
        if !label.is_diagonal() {
            return Err(Error::NotDiagonal(label.to_string()));
        }
        if !theta.is_finite() {
            return Err(Error::Validation(format!("non-finite angle for {label}")));
        }
        if *theta == 0.0 {
            continue;
        }
        if label.z_bits() == 0 {
            c.global_phase -= theta;
        } else {
            active.push((label.z_bits(), *theta));
        }
    }
    active.sort_by_key(|&(z, _)| gray_rank(z));
    // Repeated labels add.
    let mut merged: Vec<(u64, f64)> = Vec::with_capacity(active.len());
    for (z, theta) in active {
        match merged.last_mut() {
            Some((lz, lt)) if *lz == z => *lt += theta,
            _ => merged.push((z, theta)),
        }
    }

    let ladder = |c: &mut Circuit, controls: u64, target: usize| -> Result<()> {
        for q in (0..width).filter(|q| (controls >> q) & 1 == 1) {
            c.push(Gate::CX(q, target))?;
        }
        Ok(())
    };
    let mut current: Option<(usize, u64)> = None;
    for (z, theta) in merged {
        if theta == 0.0 {
            continue;
        }
        let target = 63 - z.leading_zeros() as usize;
        let controls = z & !(1u64 << target);
        match current {
            Some((t, prev)) if t == target => ladder(&mut c, prev ^ controls, target)?,
            Some((t, prev)) => {
                ladder(&mut c, prev, t)?;
                ladder(&mut c, controls, target)?;
            }
            None => ladder(&mut c, controls, target)?,
        }
        current = Some((target, controls));
        c.push(Gate::RZ(target, 2.0 * theta))?;
    }
    if let Some((t, prev)) = current {
        ladder(&mut c, prev, t)?;
    }
    Ok(c)
}

/// Product-formula parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterPlan {
    /// 1, 2, 4 or 6.
    pub order: u32,
    pub repetitions: u64,
    pub time: f64,
    /// Permutation of set indices; the product visits sets in this order.
    pub ordering: Vec<usize>,
}

impl TrotterPlan {
    /// Default ordering: sets in decomposition order (`S_0` first, ascending `m`).
    pub fn new(order: u32, repetitions: u64, time: f64, set_count: usize) -> Self {
        Self {
            order,
            repetitions,
            time,
            ordering: (0..set_count).collect(),
        }
    }

    pub fn validate(&self, set_count: usize) -> Result<()> {
        if !matches!(self.order, 1 | 2 | 4 | 6) {
            return Err(Error::InvalidPlan(format!(
                "order {} not in {{1, 2, 4, 6}}",
                self.order
            )));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidPlan("repetitions must be at least 1".into()));
        }
        if !self.time.is_finite() {
            return Err(Error::InvalidPlan(format!(
                "time {} is not finite",
                self.time
            )));
        }
        let mut seen = vec![false; set_count];
        for &k in &self.ordering {
            if k >= set_count || std::mem::replace(&mut seen[k], true) {
                return Err(Error::InvalidPlan(format!(
                    "ordering {:?} is not a permutation of 0..{set_count}",
                    self.ordering
                )));
            }
        }
        if self.ordering.len() != set_count {
            return Err(Error::InvalidPlan(format!(
                "ordering lists {} sets, decomposition has {set_count}",
                self.ordering.len()
            )));
        }
        Ok(())
    }
}

/// Time fractions of each block in one step of the order-`p` formula.
pub fn product_formula(order: u32, blocks: &[usize]) -> Vec<(usize, f64)> {
    fn rec(order: u32, blocks: &[usize], scale: f64, out: &mut Vec<(usize, f64)>) {
        match order {
            1 => out.extend(blocks.iter().map(|&b| (b, scale))),
            2 => {
                out.extend(blocks.iter().map(|&b| (b, scale / 2.0)));
                out.extend(blocks.iter().rev().map(|&b| (b, scale / 2.0)));
            }
            p => {
                let k = f64::from(p / 2);
                let u = 1.0 / (4.0 - 4f64.powf(1.0 / (2.0 * k - 1.0)));
                for s in [u, u, 1.0 - 4.0 * u, u, u] {
                    rec(p - 2, blocks, scale * s, out);
                }
            }
        }
    }
    let mut raw = Vec::new();
    rec(order, blocks, 1.0, &mut raw);
    let mut merged: Vec<(usize, f64)> = Vec::with_capacity(raw.len());
    for (b, f) in raw {
        match merged.last_mut() {
            Some((lb, lf)) if *lb == b => *lf += f,
            _ => merged.push((b, f)),
        }
    }
    merged
}

/// `step` applied `repetitions` times.
#[derive(Clone, Debug, PartialEq)]
pub struct TrotterCircuit {
    pub step: Circuit,
    pub repetitions: u64,
}

impl TrotterCircuit {
    pub fn width(&self) -> usize {
        self.step.width()
    }

    pub fn count_gates(&self) -> GateCount {
        count_gates(&self.step).times(self.repetitions)
    }

    pub fn global_phase(&self) -> f64 {
        self.step.global_phase * self.repetitions as f64
    }

    /// All repetitions written out.
    pub fn expand(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.width());
        for _ in 0..self.repetitions {
            c.append(&self.step)?;
        }
        Ok(c)
    }
}

/// Assembles `[Π_k D_k† exp(-i τ_k Σ σ β Λ) D_k]^r` per the plan.
///
/// Weights must be real: `2^{-n} Σ β Ŵ` is Hermitian only then.
pub fn trotter_circuit(
    d: &Decomposition<f64>,
    diag: &[DiagonalizedSet<f64>],
    plan: &TrotterPlan,
) -> Result<TrotterCircuit> {
    plan.validate(d.sets().len())?;
    if diag.len() != d.sets().len() {
        return Err(Error::LengthMismatch {
            what: "diagonalized sets",
            expected: d.sets().len(),
            got: diag.len(),
        });
    }
    let width = d.width();
    let scale = d.terms().map(|t| t.weight.norm()).fold(0.0, f64::max);
    for t in d.terms() {
        if t.weight.im.abs() > 1e-12 * scale.max(1.0) {
            return Err(Error::NonHermitian {
                label: t.label.to_string(),
                imag: t.weight.im,
            });
        }
    }
    for (s, ds) in d.sets().iter().zip(diag) {
        if ds.diagonal_terms.len() != s.terms.len() || ds.clifford.width() != width {
            return Err(Error::Validation(format!(
                "diagonalized set {} does not match set {}",
                ds.source_set,
                s.name()
            )));
        }
    }

    let blocks: Vec<usize> = plan
        .ordering
        .iter()
        .copied()
        .filter(|&k| !d.sets()[k].is_empty())
        .collect();
    let tau = plan.time / plan.repetitions as f64 * d.prefactor();
    let mut step = Circuit::new(width);
    for (stage, (k, frac)) in product_formula(plan.order, &blocks).into_iter().enumerate() {
        let ds = &diag[k];
        let terms: Vec<(WalshLabel, f64)> = ds
            .diagonal_terms
            .iter()
            .map(|t| (t.label, frac * tau * f64::from(t.sign) * t.weight.re))
            .collect();
        let start = step.len();
        for &g in ds.clifford.gates() {
            step.push(g.into())?;
        }
        step.append(&synthesize_diagonal_exponent(width, &terms)?)?;
        for &g in ds.clifford.inverse().gates() {
            step.push(g.into())?;
        }
        step.blocks.push(BlockTag {
            set: k,
            stage,
            gates: start..step.len(),
        });
    }
    Ok(TrotterCircuit {
        step,
        repetitions: plan.repetitions,
    })
}

/// Inputs to the step-count estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterEstimate {
    /// Number of exponentiated groups `M`.
    pub sets: usize,
    /// Upper bound on `‖H‖`.
    pub norm: f64,
    pub time: f64,
    pub eps: f64,
    pub order: u32,
    /// Big-O constant `C` in `ε = C·(2M·5^{⌊p/2⌋-1}·‖H‖t)^{p+1} / r^p`.
    pub constant: f64,
}

impl TrotterEstimate {
    fn check(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::OutOfRange {
                what: "target accuracy eps (must be > 0)",
                value: 0,
                limit: 0,
            });
        }
        if !matches!(self.order, 1 | 2 | 4 | 6) {
            return Err(Error::InvalidPlan(format!(
                "order {} not in {{1, 2, 4, 6}}",
                self.order
            )));
        }
        if !(self.norm >= 0.0 && self.norm.is_finite()) {
            return Err(Error::Validation(format!(
                "norm must be non-negative, got {}",
                self.norm
            )));
        }
        for (what, v) in [("time", self.time), ("constant", self.constant)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Validation(format!(
                    "{what} must be positive, got {v}"
                )));
            }
        }
        if self.sets == 0 {
            return Err(Error::Validation("set count must be positive".into()));
        }
        Ok(())
    }

    /// Unrounded `r`.
    pub fn steps_real(&self) -> Result<f64> {
        self.check()?;
        let p = f64::from(self.order);
        let growth = 5f64.powi(self.order as i32 / 2 - 1);
        let a = 2.0 * self.sets as f64 * growth * self.norm * self.time;
        Ok((self.constant * a.powf(p + 1.0) / self.eps).powf(1.0 / p))
    }

    /// `r = ⌈(C·A^{p+1}/ε)^{1/p}⌉`, at least 1. A single group has no
    /// splitting error and always gets one step.
    pub fn steps(&self) -> Result<u64> {
        let r = self.steps_real()?.ceil();
        if self.sets == 1 {
            return Ok(1);
        }
        if r > u64::MAX as f64 {
            return Err(Error::Validation(format!("step estimate {r:e} overflows")));
        }
        Ok((r as u64).max(1))
    }
}

pub fn estimate_trotter_steps(
    sets: usize,
    norm: f64,
    time: f64,
    eps: f64,
    order: u32,
) -> Result<u64> {
    TrotterEstimate {
        sets,
        norm,
        time,
        eps,
        order,
        constant: 1.0,
    }
    .steps()
}
