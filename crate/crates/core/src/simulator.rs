//! Dense reference simulator.
//!
//! Matrices are `2^w × 2^w` with `w ≤ MAX_SIM_QUBITS`. Basis index bit
//! `q` (0-based) is qubit `q`, i.e. label position `q + 1`, so a label's
//! last position is the most significant Kronecker factor.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::bitcore::{Pauli, WalshLabel};
use crate::circuit::{Circuit, Gate, TrotterCircuit};
use crate::decomposer::{Decomposition, TridiagonalSpec};
use crate::diagonalizer::CliffordCircuit;
use crate::error::{Error, Result};
use crate::scalar::{to_c64, Scalar};

pub type DenseMatrix = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

pub const MAX_SIM_QUBITS: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_cap(width: usize) -> Result<()> {
    if width > MAX_SIM_QUBITS {
        return Err(Error::CapExceeded {
            width,
            cap: MAX_SIM_QUBITS,
        });
    }
    Ok(())
}

/// Qubit count of a square power-of-two matrix.
pub fn width_of(m: &DenseMatrix) -> Result<usize> {
    let d = m.nrows();
    if d != m.ncols() || !d.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            left: m.nrows(),
            right: m.ncols(),
        });
    }
    let w = d.trailing_zeros() as usize;
    check_cap(w)?;
    Ok(w)
}

fn pauli_matrix(p: Pauli) -> DenseMatrix {
    let v = match p {
        Pauli::I => [ONE, ZERO, ZERO, ONE],
        Pauli::X => [ZERO, ONE, ONE, ZERO],
        Pauli::Y => [ZERO, -I, I, ZERO],
        Pauli::Z => [ONE, ZERO, ZERO, -ONE],
    };
    DenseMatrix::from_row_slice(2, 2, &v)
}

/// Kronecker product of the single-qubit Pauli matrices.
pub fn label_to_dense(label: &WalshLabel) -> Result<DenseMatrix> {
    let w = label.width();
    check_cap(w)?;
    let mut m = DenseMatrix::from_element(1, 1, ONE);
    for pos in (1..=w).rev() {
        m = m.kronecker(&pauli_matrix(label.pauli_at(pos)));
    }
    Ok(m)
}

/// Column `col` of the label's matrix: the single non-zero row and its value.
///
/// Built qubit by qubit from the Pauli matrices; agrees with
/// [`label_to_dense`] and is used where the Kronecker form is too slow.
pub fn label_column(label: &WalshLabel, col: usize) -> (usize, Complex64) {
    let mut row = col;
    let mut phase = ONE;
    for q in 0..label.width() {
        let bit = (col >> q) & 1 == 1;
        match label.pauli_at(q + 1) {
            Pauli::I => {}
            Pauli::X => row ^= 1 << q,
            Pauli::Y => {
                row ^= 1 << q;
                phase *= if bit { -I } else { I };
            }
            Pauli::Z => {
                if bit {
                    phase = -phase;
                }
            }
        }
    }
    (row, phase)
}

pub fn tridiagonal_dense<T: Scalar>(spec: &TridiagonalSpec<T>) -> Result<DenseMatrix> {
    check_cap(spec.n())?;
    let d = spec.dim();
    Ok(DenseMatrix::from_fn(d, d, |r, c| to_c64(&spec.entry(r, c))))
}

/// `2^{-k} Σ β Ŵ` as a dense matrix.
pub fn reconstruct<T: Scalar>(d: &Decomposition<T>) -> Result<DenseMatrix> {
    check_cap(d.width())?;
    let dim = 1usize << d.width();
    let mut m = DenseMatrix::zeros(dim, dim);
    for t in d.terms() {
        let w = to_c64(&t.weight);
        for col in 0..dim {
            let (row, phase) = label_column(&t.label, col);
            m[(row, col)] += phase * w;
        }
    }
    Ok(m * Complex64::new(d.prefactor(), 0.0))
}

/// `β = Tr(B Ŵ)` for every one of the `4^n` labels.
pub fn brute_force_decompose(b: &DenseMatrix) -> Result<BTreeMap<WalshLabel, Complex64>> {
    let n = width_of(b)?;
    let dim = 1u64 << n;
    let mut out = BTreeMap::new();
    for x in 0..dim {
        for z in 0..dim {
            let label = WalshLabel::from_bits(x, z, n)?;
            // Tr(BW) = Σ_p B[p][k] W[k][p], with k the one non-zero row of column p.
            let tr = (0..dim as usize)
                .map(|p| {
                    let (k, phase) = label_column(&label, p);
                    b[(p, k)] * phase
                })
                .sum();
            out.insert(label, tr);
        }
    }
    Ok(out)
}

pub fn max_abs(m: &DenseMatrix) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `max |M - M†|`.
pub fn hermitian_deviation(m: &DenseMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `max |U†U - I|`.
pub fn unitarity_deviation(u: &DenseMatrix) -> f64 {
    let d = u.nrows();
    max_abs(&(u.adjoint() * u - DenseMatrix::identity(d, d)))
}

/// Largest off-diagonal magnitude.
pub fn off_diagonal_max(m: &DenseMatrix) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if r != c {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}

pub fn commutator(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a * b - b * a
}

/// `exp(-iHt)` through the eigendecomposition of `H`.
pub fn exact_propagator(h: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    width_of(h)?;
    let dev = hermitian_deviation(h);
    if dev > 1e-12 * max_abs(h).max(1.0) {
        return Err(Error::NotHermitianMatrix(dev));
    }
    let herm = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let phases = eig.eigenvalues.map(|l| Complex64::new(0.0, -l * t).exp());
    let v = &eig.eigenvectors;
    Ok(v * DenseMatrix::from_diagonal(&phases) * v.adjoint())
}

/// Largest singular value of `U - V`.
pub fn spectral_error(u: &DenseMatrix, v: &DenseMatrix) -> Result<f64> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            left: u.nrows(),
            right: v.nrows(),
        });
    }
    let diff = u - v;
    Ok(diff.singular_values().iter().cloned().fold(0.0, f64::max))
}

fn apply_1q(m: &mut DenseMatrix, q: usize, g: [Complex64; 4]) {
    let bit = 1usize << q;
    let rows = m.nrows();
    for mut col in m.column_iter_mut() {
        for r in (0..rows).filter(|r| r & bit == 0) {
            let (a, b) = (col[r], col[r | bit]);
            col[r] = g[0] * a + g[1] * b;
            col[r | bit] = g[2] * a + g[3] * b;
        }
    }
}

fn apply_gate(m: &mut DenseMatrix, gate: &Gate) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let h = Complex64::new(h, 0.0);
    match *gate {
        Gate::H(q) => apply_1q(m, q, [h, h, h, -h]),
        Gate::S(q) => apply_1q(m, q, [ONE, ZERO, ZERO, I]),
        Gate::Sdg(q) => apply_1q(m, q, [ONE, ZERO, ZERO, -I]),
        Gate::X(q) => apply_1q(m, q, [ZERO, ONE, ONE, ZERO]),
        Gate::RZ(q, phi) => {
            let e = Complex64::new(0.0, -phi / 2.0).exp();
            apply_1q(m, q, [e, ZERO, ZERO, e.conj()])
        }
        Gate::CX(c, t) => {
            let (cb, tb) = (1usize << c, 1usize << t);
            let rows = m.nrows();
            for mut col in m.column_iter_mut() {
                for r in (0..rows).filter(|r| r & cb != 0 && r & tb == 0) {
                    col.swap_rows(r, r | tb);
                }
            }
        }
        Gate::CZ(a, b) => {
            let mask = (1usize << a) | (1usize << b);
            let rows = m.nrows();
            for mut col in m.column_iter_mut() {
                for r in (0..rows).filter(|r| r & mask == mask) {
                    col[r] = -col[r];
                }
            }
        }
    }
}

fn apply_circuit(m: &mut DenseMatrix, c: &Circuit) {
    for g in c.gates() {
        apply_gate(m, g);
    }
    if c.global_phase != 0.0 {
        *m *= Complex64::new(0.0, c.global_phase).exp();
    }
}

pub fn circuit_unitary(c: &Circuit) -> Result<DenseMatrix> {
    check_cap(c.width())?;
    let d = 1usize << c.width();
    let mut m = DenseMatrix::identity(d, d);
    apply_circuit(&mut m, c);
    Ok(m)
}

pub fn clifford_unitary(c: &CliffordCircuit) -> Result<DenseMatrix> {
    check_cap(c.width())?;
    let d = 1usize << c.width();
    let mut m = DenseMatrix::identity(d, d);
    for &g in c.gates() {
        apply_gate(&mut m, &g.into());
    }
    Ok(m)
}

/// `step^r` by repeated squaring.
pub fn trotter_unitary(tc: &TrotterCircuit) -> Result<DenseMatrix> {
    let step = circuit_unitary(&tc.step)?;
    let d = step.nrows();
    let mut result = DenseMatrix::identity(d, d);
    let mut base = step;
    let mut r = tc.repetitions;
    while r > 0 {
        if r & 1 == 1 {
            result = &base * &result;
        }
        r >>= 1;
        if r > 0 {
            base = &base * &base;
        }
    }
    Ok(result)
}

/// `U ψ` for a normalized `ψ`.
pub fn evolve_state(u: &DenseMatrix, psi: &StateVector) -> Result<StateVector> {
    if u.ncols() != psi.len() {
        return Err(Error::DimensionMismatch {
            left: u.ncols(),
            right: psi.len(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    Ok(u * psi)
}

/// Runs a circuit on a normalized state.
pub fn run_circuit(c: &Circuit, psi: &StateVector) -> Result<StateVector> {
    check_cap(c.width())?;
    if psi.len() != 1usize << c.width() {
        return Err(Error::DimensionMismatch {
            left: 1usize << c.width(),
            right: psi.len(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    let mut m = DenseMatrix::from_column_slice(psi.len(), 1, psi.as_slice());
    apply_circuit(&mut m, c);
    Ok(StateVector::from_column_slice(m.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::synthesize_diagonal_exponent;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn y_matrix() {
        let y = label_to_dense(&"Y".parse().unwrap()).unwrap();
        assert_eq!(y, DenseMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]));
    }

    #[test]
    fn identity_and_xx() {
        let id = label_to_dense(&WalshLabel::identity(3).unwrap()).unwrap();
        assert_eq!(id, DenseMatrix::identity(8, 8));
        let xx = label_to_dense(&"XX".parse().unwrap()).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                assert_eq!(xx[(r, col)], if r + col == 3 { ONE } else { ZERO });
            }
        }
    }

    #[test]
    fn position_one_is_least_significant() {
        // Z on position 1 flips the sign of odd basis indices.
        let zi = label_to_dense(&"ZI".parse().unwrap()).unwrap();
        let diag: Vec<f64> = (0..4).map(|k| zi[(k, k)].re).collect();
        assert_eq!(diag, [1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn column_action_matches_kronecker() {
        for n in 1..=3 {
            for x in 0..1u64 << n {
                for z in 0..1u64 << n {
                    let l = WalshLabel::from_bits(x, z, n).unwrap();
                    let dense = label_to_dense(&l).unwrap();
                    let mut fast = DenseMatrix::zeros(1 << n, 1 << n);
                    for col in 0..1usize << n {
                        let (row, v) = label_column(&l, col);
                        fast[(row, col)] = v;
                    }
                    assert_eq!(fast, dense, "{l}");
                }
            }
        }
    }

    #[test]
    fn cap_enforced() {
        let l = WalshLabel::identity(13).unwrap();
        assert!(matches!(label_to_dense(&l), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn brute_force_small_diagonal() {
        let b = DenseMatrix::from_row_slice(2, 2, &[c(3.0, 0.0), ZERO, ZERO, c(1.0, 0.0)]);
        let w = brute_force_decompose(&b).unwrap();
        let get = |s: &str| w[&s.parse::<WalshLabel>().unwrap()];
        assert_eq!(get("I"), c(4.0, 0.0));
        assert_eq!(get("Z"), c(2.0, 0.0));
        assert_eq!(get("X"), ZERO);
        assert_eq!(get("Y"), ZERO);
    }

    #[test]
    fn brute_force_of_a_label_is_a_delta() {
        let l: WalshLabel = "XYZ".parse().unwrap();
        let w = brute_force_decompose(&label_to_dense(&l).unwrap()).unwrap();
        for (k, v) in w {
            let want = if k == l { 8.0 } else { 0.0 };
            assert!((v - c(want, 0.0)).norm() < 1e-12, "{k}");
        }
    }

    #[test]
    fn propagator_of_z() {
        let z = label_to_dense(&"Z".parse().unwrap()).unwrap();
        let u = exact_propagator(&z, PI / 2.0).unwrap();
        assert!((u[(0, 0)] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((u[(1, 1)] - c(0.0, 1.0)).norm() < 1e-12);
        let u0 = exact_propagator(&z, 0.0).unwrap();
        assert!(max_abs(&(u0 - DenseMatrix::identity(2, 2))) < 1e-12);
        let bad = DenseMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(
            exact_propagator(&bad, 1.0),
            Err(Error::NotHermitianMatrix(_))
        ));
    }

    #[test]
    fn spectral_error_basics() {
        let id = DenseMatrix::identity(4, 4);
        assert_eq!(spectral_error(&id, &id).unwrap(), 0.0);
        assert!((spectral_error(&id, &(-&id)).unwrap() - 2.0).abs() < 1e-12);
        assert!(spectral_error(&id, &DenseMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn x_flips_zero_state() {
        let mut circ = Circuit::new(1);
        circ.push(Gate::X(0)).unwrap();
        let out = run_circuit(&circ, &StateVector::from_vec(vec![ONE, ZERO])).unwrap();
        assert_eq!(out, StateVector::from_vec(vec![ZERO, ONE]));
        let psi = StateVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        assert_eq!(run_circuit(&Circuit::new(1), &psi).unwrap(), psi);
        assert!(matches!(
            evolve_state(
                &DenseMatrix::identity(2, 2),
                &StateVector::from_vec(vec![ONE, ONE])
            ),
            Err(Error::NotNormalized(_))
        ));
    }

    /// Dense check of `exp(-iθ Z⊗Z) = CX · RZ(2θ) · CX`.
    #[test]
    fn zz_exponent_matches_matrix_exponential() {
        let theta = 0.37;
        let zz: WalshLabel = "ZZ".parse().unwrap();
        let circ = synthesize_diagonal_exponent(2, &[(zz, theta)]).unwrap();
        let u = circuit_unitary(&circ).unwrap();
        let exact = exact_propagator(&label_to_dense(&zz).unwrap(), theta).unwrap();
        assert!(spectral_error(&u, &exact).unwrap() < 1e-12);
    }
}
