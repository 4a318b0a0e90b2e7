//! Wave-equation Hamiltonian `H = (1/h) [[0, B], [B†, 0]]`.
//!
//! `B` is upper bidiagonal with Dirichlet rows: rows `1` and `N` are zero,
//! row `k` (1-based, `2 ≤ k ≤ N-1`) holds `-c_k` on the diagonal and
//! `c_{k+1}` to its right.

use super::{check_qubits, decompose, diag_weights, embed_hermitian, offdiag_weights};
use super::{Decomposition, SymmetryClass, TridiagonalSpec};
use crate::error::{Error, Result};
use crate::scalar::{max_part, mul_i_pow, Scalar};
use num_complex::Complex;

/// Output of [`wave_hamiltonian`].
#[derive(Clone, Debug)]
pub struct WaveHamiltonian<T: Scalar> {
    /// `B / h`.
    pub b: TridiagonalSpec<T>,
    /// Decomposition of `H` on `n + 1` qubits.
    pub hamiltonian: Decomposition<T>,
    /// Non-fatal input problems (non-positive speeds).
    pub warnings: Vec<String>,
}

fn check_profile<T: Scalar>(speeds: &[T], n: usize) -> Result<()> {
    check_qubits(n)?;
    if !speeds.len().is_power_of_two() {
        return Err(Error::OutOfRange {
            what: "speed sample count (must be a power of two)",
            value: speeds.len() as u64,
            limit: 1 << n,
        });
    }
    if speeds.len() != 1 << n {
        return Err(Error::LengthMismatch {
            what: "speed profile",
            expected: 1 << n,
            got: speeds.len(),
        });
    }
    Ok(())
}

/// Unscaled `B` for speed samples `c_1..c_N` (passed 0-based).
pub fn wave_b_matrix<T: Scalar>(speeds: &[T], n: usize) -> Result<TridiagonalSpec<T>> {
    check_profile(speeds, n)?;
    let dim = 1usize << n;
    let interior = |p: usize| p >= 1 && p + 2 <= dim;
    let c = (0..dim)
        .map(|p| {
            if interior(p) {
                -speeds[p].clone()
            } else {
                T::zero()
            }
        })
        .collect();
    let a = (0..dim - 1)
        .map(|p| {
            if interior(p) {
                speeds[p + 1].clone()
            } else {
                T::zero()
            }
        })
        .collect();
    TridiagonalSpec::from_real(n, c, a, vec![T::zero(); dim - 1], SymmetryClass::Real)
}

/// Weights of `B` evaluated from the speed samples directly:
/// `β_{0,z} = -Σ_{k=1}^{N-2} (-1)^{z·k} c_{k+1}` and
/// `β_{V_m,z} = Σ_{k=1}^{N-2} i^{x·z} (-1)^{z·k} δ(k+1, k⊕x) c_{k+2}`.
///
/// Returns the diagonal table and one table per `m = 1..=n`, indexed by `z`.
#[allow(clippy::type_complexity)]
pub fn wave_weights_specialized<T: Scalar>(
    speeds: &[T],
    n: usize,
) -> Result<(Vec<Complex<T>>, Vec<Vec<Complex<T>>>)> {
    check_profile(speeds, n)?;
    let dim = 1usize << n;
    let sign = |z: usize, k: usize, v: &T| {
        if (z & k).count_ones() % 2 == 1 {
            -v.clone()
        } else {
            v.clone()
        }
    };
    let diag = (0..dim)
        .map(|z| {
            let s = (1..dim - 1).fold(T::zero(), |acc, k| acc + sign(z, k, &speeds[k]));
            Complex::new(-s, T::zero())
        })
        .collect();
    let offdiag = (1..=n)
        .map(|m| {
            let x = (1usize << m) - 1;
            (0..dim)
                .map(|z| {
                    let s = (1..dim - 1)
                        .filter(|&k| k ^ (k + 1) == x)
                        .fold(T::zero(), |acc, k| acc + sign(z, k, &speeds[k + 1]));
                    mul_i_pow(Complex::new(s, T::zero()), (x & z).count_ones())
                })
                .collect()
        })
        .collect();
    Ok((diag, offdiag))
}

/// Builds `B / h`, decomposes it by the generic formulas, checks the result
/// against [`wave_weights_specialized`], and embeds it into `H`.
pub fn wave_hamiltonian<T: Scalar>(speeds: &[T], n: usize, h: T) -> Result<WaveHamiltonian<T>> {
    check_profile(speeds, n)?;
    if h <= T::zero() {
        return Err(Error::Validation(format!(
            "grid step h must be positive, got {h:?}"
        )));
    }
    let warnings: Vec<String> = speeds
        .iter()
        .enumerate()
        .filter(|(_, c)| **c <= T::zero())
        .map(|(k, c)| format!("non-positive speed c_{} = {c:?}", k + 1))
        .collect();

    let b = wave_b_matrix(speeds, n)?.scaled(&h);

    let (spec_diag, spec_off) = wave_weights_specialized(speeds, n)?;
    let inv_h = T::one() / h;
    let scale_c = |v: &Complex<T>| v.clone() * inv_h.clone();
    let dim = 1usize << n;
    // exact for integer/rational scalars; roundoff allowance for floats
    let tol = T::zero_threshold(&b.scale()).to_f64_lossy() * (16 * dim) as f64;
    let mut worst = T::zero();
    let mut compare = |generic: &[Complex<T>], special: &[Complex<T>]| {
        for (g, s) in generic.iter().zip(special) {
            let d = max_part(&(g.clone() - scale_c(s)));
            if d > worst {
                worst = d;
            }
        }
    };
    compare(&diag_weights(b.c(), n)?, &spec_diag);
    for (m, special) in (1..=n).zip(&spec_off) {
        compare(&offdiag_weights(b.a(), b.b(), m, n)?, special);
    }
    if worst.to_f64_lossy() > tol {
        return Err(Error::Inconsistent(worst.to_f64_lossy()));
    }

    let hamiltonian = embed_hermitian(&decompose(&b)?)?;
    Ok(WaveHamiltonian {
        b,
        hamiltonian,
        warnings,
    })
}
