use num_complex::Complex;
use num_traits::Zero;

use super::{CommutingSet, Decomposition, MatrixClass, PauliTerm, SetParity};
use crate::bitcore::{BitString, WalshLabel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Decomposition of `H = [[0, B], [B†, 0]]` from that of a real `B`.
///
/// The block-selecting qubit is appended as position `n + 1`, the most
/// significant bit, so the dense matrix of `H` has `B` in its upper-right
/// block. A term `(β, Ŵ)` of `B` becomes `Re β · (Ŵ ⊗ X)` when `x·z` is even
/// and `-Im β · (Ŵ ⊗ Y)` when odd; every embedded label has an even `Y`
/// count and the prefactor stays `2^{-n}`.
///
/// `S_{m,+}` and `S_{m,-}` of `B` merge into one set `S_m` of `H`.
pub fn embed_hermitian<T: Scalar>(d: &Decomposition<T>) -> Result<Decomposition<T>> {
    match d.class() {
        MatrixClass::Real | MatrixClass::RealSymmetric => {}
        other => return Err(Error::UnsupportedClass(other.to_string())),
    }
    let n = d.width();
    let width = n + 1;
    let block = 1u64 << n;

    let mut sets: Vec<CommutingSet<T>> = (0..=n)
        .map(|m| {
            let x = if m == 0 { 0 } else { (1u64 << m) - 1 };
            Ok(CommutingSet {
                m,
                parity: SetParity::Even,
                x_selector: BitString::new(x | block, width)?,
                terms: Vec::new(),
            })
        })
        .collect::<Result<_>>()?;

    for set in d.sets() {
        for term in &set.terms {
            let label = term.label;
            let (z, weight) = if label.y_count() % 2 == 0 {
                (label.z_bits(), term.weight.re.clone())
            } else {
                (label.z_bits() | block, -term.weight.im.clone())
            };
            sets[set.m].terms.push(PauliTerm {
                label: WalshLabel::from_bits(label.x_bits() | block, z, width)?,
                weight: Complex::new(weight, T::zero()),
            });
        }
    }
    for s in &mut sets {
        s.terms.sort_by_key(|t| t.label.z_bits() & !block);
        s.terms.retain(|t| !t.weight.is_zero());
    }

    Ok(Decomposition::new(
        width,
        MatrixClass::HermitianEmbedding,
        d.prefactor_exp(),
        sets,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposer::{decompose, SymmetryClass, TridiagonalSpec};

    #[test]
    fn two_by_two_block() {
        let (a, b) = (3i64, 7i64);
        let spec = TridiagonalSpec::from_real(1, vec![0, 0], vec![a], vec![b], SymmetryClass::Real)
            .unwrap();
        let h = embed_hermitian(&decompose(&spec).unwrap()).unwrap();
        assert_eq!(h.width(), 2);
        assert_eq!(h.prefactor(), 0.5);
        let w: Vec<(String, i64)> = h
            .terms()
            .map(|t| (t.label.to_string(), t.weight.re))
            .collect();
        assert_eq!(w, [("XX".to_string(), a + b), ("YY".to_string(), -(a - b))]);
    }

    #[test]
    fn symmetric_input_yields_even_real_terms() {
        let spec = TridiagonalSpec::from_real(
            2,
            vec![1i64, -2, 3, 5],
            vec![4, 1, -1],
            vec![4, 1, -1],
            SymmetryClass::RealSymmetric,
        )
        .unwrap();
        let h = embed_hermitian(&decompose(&spec).unwrap()).unwrap();
        assert!(h
            .terms()
            .all(|t| t.label.y_count() % 2 == 0 && t.weight.im == 0));
        assert_eq!(h.sets().len(), 3);
    }

    #[test]
    fn complex_class_rejected() {
        let spec = TridiagonalSpec::from_real(
            1,
            vec![0.0, 0.0],
            vec![1.0],
            vec![1.0],
            SymmetryClass::General,
        )
        .unwrap();
        let d = decompose(&spec).unwrap();
        assert!(matches!(
            embed_hermitian(&d),
            Err(Error::UnsupportedClass(_))
        ));
    }
}
