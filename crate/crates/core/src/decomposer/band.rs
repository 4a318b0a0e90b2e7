//! Upper `l`-diagonal matrices: `B = Σ_k a_k |k⟩⟨k+l|`.
//!
//! Only labels whose `x` solves `p + l = p ⊕ x` for some row `p` can carry
//! weight, and `β_{x,z} = Σ_p i^{x·z} (-1)^{z·p} δ(p+l, p⊕x) a_p`. The public
//! API only uses `l ∈ {0, 1}`; the general form backs the tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{mul_i_pow, Scalar};

/// All `x` admitting a row solution of `p + l = p ⊕ x`.
pub(crate) fn band_selectors(l: u64, n: usize) -> BTreeSet<u64> {
    let dim = 1u64 << n;
    (0..dim.saturating_sub(l)).map(|p| p ^ (p + l)).collect()
}

/// Every non-zero `β_{x,z}` of the upper `l`-diagonal matrix with entries `a`.
pub(crate) fn upper_band_weights<T: Scalar>(
    a: &[Complex<T>],
    l: u64,
    n: usize,
) -> BTreeMap<(u64, u64), Complex<T>> {
    let dim = 1u64 << n;
    assert_eq!(a.len() as u64, dim - l, "band length");
    let mut out: BTreeMap<(u64, u64), Complex<T>> = BTreeMap::new();
    for (p, value) in a.iter().enumerate() {
        let p = p as u64;
        let x = p ^ (p + l);
        for z in 0..dim {
            let sign_neg = (z & p).count_ones() % 2 == 1;
            let v = if sign_neg {
                -value.clone()
            } else {
                value.clone()
            };
            let entry = out.entry((x, z)).or_insert_with(Complex::zero);
            *entry = entry.clone() + mul_i_pow(v, (x & z).count_ones());
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}
