use num_complex::Complex;
use num_traits::Zero;

use super::check_qubits;
use crate::error::{Error, Result};
use crate::scalar::{mul_i_pow, Scalar};

/// Weights `β_{0,z} = Σ_p (-1)^{z·p} c_p` of the diagonal set, indexed by `z`.
///
/// Evaluated with an in-place Walsh–Hadamard butterfly, which performs the
/// same signed sums in `O(n 2^n)` additions.
pub fn diag_weights<T: Scalar>(c: &[Complex<T>], n: usize) -> Result<Vec<Complex<T>>> {
    check_qubits(n)?;
    let dim = 1usize << n;
    if c.len() != dim {
        return Err(Error::LengthMismatch {
            what: "main diagonal",
            expected: dim,
            got: c.len(),
        });
    }
    let mut out = c.to_vec();
    let mut half = 1;
    while half < dim {
        for block in (0..dim).step_by(2 * half) {
            for k in block..block + half {
                let lo = out[k].clone();
                let hi = out[k + half].clone();
                out[k] = lo.clone() + hi.clone();
                out[k + half] = lo - hi;
            }
        }
        half <<= 1;
    }
    Ok(out)
}

/// Weights `β_{x,z}` for `x = V_m`, indexed by `z`.
///
/// Only rows `p` with `p + 1 = p ⊕ V_m` contribute; those are exactly the
/// `p` whose low `m - 1` bits are ones and whose bit `m - 1` is zero, so
/// they are enumerated directly (`2^{n-m}` of them). Each row contributes
/// `(-1)^{z·p} a_p + (-1)^{z·(p+1)} b_p`, with the pair summed before
/// accumulation so symmetric inputs cancel exactly.
pub fn offdiag_weights<T: Scalar>(
    a: &[Complex<T>],
    b: &[Complex<T>],
    m: usize,
    n: usize,
) -> Result<Vec<Complex<T>>> {
    check_qubits(n)?;
    if m == 0 || m > n {
        return Err(Error::OutOfRange {
            what: "set index m",
            value: m as u64,
            limit: n as u64,
        });
    }
    let dim = 1usize << n;
    for (what, v) in [("super-diagonal", a), ("sub-diagonal", b)] {
        if v.len() != dim - 1 {
            return Err(Error::LengthMismatch {
                what,
                expected: dim - 1,
                got: v.len(),
            });
        }
    }
    let x = (1usize << m) - 1;
    let low = (1usize << (m - 1)) - 1;
    let rows: Vec<usize> = (0..dim >> m).map(|q| (q << m) | low).collect();

    let out = (0..dim)
        .map(|z| {
            let mut acc = Complex::<T>::zero();
            for &p in &rows {
                let sa = (z & p).count_ones() % 2 == 1;
                let sb = (z & (p + 1)).count_ones() % 2 == 1;
                let pair = match (sa, sb) {
                    (false, false) => a[p].clone() + b[p].clone(),
                    (false, true) => a[p].clone() - b[p].clone(),
                    (true, false) => b[p].clone() - a[p].clone(),
                    (true, true) => -(a[p].clone() + b[p].clone()),
                };
                acc = acc + pair;
            }
            mul_i_pow(acc, (x & z).count_ones())
        })
        .collect();
    Ok(out)
}
