//! Pauli decompositions of tridiagonal matrices and Trotter circuits for
//! the Hamiltonians built from them.
//!
//! ```
//! use tridiag_pauli::{decompose, SymmetryClass, TridiagonalSpec64};
//!
//! let spec = TridiagonalSpec64::from_real(1, vec![3.0, 1.0], vec![5.0], vec![5.0],
//!                                         SymmetryClass::RealSymmetric).unwrap();
//! let d = decompose(&spec).unwrap();
//! let labels: Vec<String> = d.terms().map(|t| t.label.to_string()).collect();
//! assert_eq!(labels, ["I", "Z", "X"]);
//! ```

pub mod bitcore;
pub mod circuit;
pub mod decomposer;
pub mod diagonalizer;
pub mod error;
pub mod scalar;
pub mod simulator;

pub use bitcore::{BitString, Pauli, WalshLabel};
pub use circuit::{
    count_gates, estimate_trotter_steps, synthesize_diagonal_exponent, trotter_circuit, Circuit,
    Gate, GateCount, TrotterCircuit, TrotterEstimate, TrotterPlan,
};
pub use decomposer::{
    decompose, embed_hermitian, generate_sets, wave_hamiltonian, CommutingSet, Decomposition,
    MatrixClass, PauliTerm, SetParity, SymmetryClass, TridiagonalSpec,
};
pub use diagonalizer::{
    diagonalize_set, CliffordCircuit, CliffordGate, DiagonalizedSet, SignedLabel,
};
pub use error::{Error, Result};
pub use scalar::Scalar;

use num_rational::Rational64;

pub type TridiagonalSpec64 = TridiagonalSpec<f64>;
pub type TridiagonalSpec32 = TridiagonalSpec<f32>;
pub type TridiagonalSpecQ = TridiagonalSpec<Rational64>;
pub type Decomposition64 = Decomposition<f64>;
pub type Decomposition32 = Decomposition<f32>;
pub type DecompositionQ = Decomposition<Rational64>;

/// Diagonalizes every set of a decomposition, in order.
pub fn diagonalize_all<T: Scalar>(d: &Decomposition<T>) -> Result<Vec<DiagonalizedSet<T>>> {
    d.sets().iter().map(diagonalize_set).collect()
}
