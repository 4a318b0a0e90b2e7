mod common;

use common::{random_spec, CLASSES};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tridiag_pauli::bitcore::{apply_x_mask, bin_decode, bin_encode, commutes};
use tridiag_pauli::decomposer::wave_hamiltonian;
use tridiag_pauli::simulator::{commutator, label_to_dense, max_abs};
use tridiag_pauli::{decompose, embed_hermitian, generate_sets, SymmetryClass, WalshLabel};

fn class_strategy() -> impl Strategy<Value = SymmetryClass> {
    prop::sample::select(CLASSES.to_vec())
}

proptest! {
    #[test]
    fn symbolic_commutation_matches_dense(n in 1usize..=4, a in any::<u64>(), b in any::<u64>()) {
        let mask = (1u64 << n) - 1;
        let p = WalshLabel::from_bits(a & mask, (a >> 8) & mask, n).unwrap();
        let q = WalshLabel::from_bits(b & mask, (b >> 8) & mask, n).unwrap();
        let dp = label_to_dense(&p).unwrap();
        let dq = label_to_dense(&q).unwrap();
        let dense_commutes = max_abs(&commutator(&dp, &dq)) < 1e-12;
        prop_assert_eq!(commutes(&p, &q).unwrap(), dense_commutes);
    }

    #[test]
    fn x_mask_matches_dense_action(n in 1usize..=4, p in any::<u64>(), x in any::<u64>()) {
        let mask = (1u64 << n) - 1;
        let (p, x) = (p & mask, x & mask);
        let dx = label_to_dense(&WalshLabel::from_bits(x, 0, n).unwrap()).unwrap();
        let q = (0..1usize << n).find(|&r| dx[(r, p as usize)].norm() > 0.5).unwrap() as u64;
        let masked = apply_x_mask(&bin_encode(p, n).unwrap(), &bin_encode(x, n).unwrap()).unwrap();
        prop_assert_eq!(bin_decode(&masked), q);
    }

    #[test]
    fn labels_are_hermitian_involutions(n in 1usize..=4, x in any::<u64>(), z in any::<u64>()) {
        let mask = (1u64 << n) - 1;
        let w = label_to_dense(&WalshLabel::from_bits(x & mask, z & mask, n).unwrap()).unwrap();
        let dim = 1usize << n;
        prop_assert!(max_abs(&(&w * &w - tridiag_pauli::simulator::DenseMatrix::identity(dim, dim))) < 1e-15);
        prop_assert!(max_abs(&(&w - w.adjoint())) < 1e-15);
    }

    #[test]
    fn set_counts_and_sizes(n in 1usize..=8, class in class_strategy()) {
        let sets = generate_sets(n, class).unwrap();
        let want = if class == SymmetryClass::RealSymmetric { n + 1 } else { 2 * n + 1 };
        prop_assert_eq!(sets.len(), want);
        prop_assert_eq!(sets[0].labels.len(), 1 << n);
        for s in &sets[1..] {
            prop_assert_eq!(s.labels.len(), 1 << (n - 1));
        }
    }

    #[test]
    fn sets_commute_exhaustively(n in 1usize..=5, class in class_strategy()) {
        for s in generate_sets(n, class).unwrap() {
            for (i, p) in s.labels.iter().enumerate() {
                for q in &s.labels[i + 1..] {
                    prop_assert!(commutes(p, q).unwrap(), "{} {}", p, q);
                }
            }
        }
    }

    #[test]
    fn term_count_bounds(seed in any::<u64>(), n in 1usize..=6, class in class_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng, n, class);
        let d = decompose(&spec).unwrap();
        let general_bound = (n + 1) << n;
        let symmetric_bound = (n + 2) << (n - 1);
        prop_assert!(d.term_count() <= general_bound);
        if class == SymmetryClass::RealSymmetric {
            prop_assert!(d.term_count() <= symmetric_bound);
        }
        if class != SymmetryClass::General {
            let h = embed_hermitian(&d).unwrap();
            prop_assert_eq!(h.term_count(), d.term_count());
            prop_assert_eq!(h.sets().len(), n + 1);
            for s in h.sets() {
                prop_assert!(s.terms.len() <= 1 << n);
            }
        }
    }

    #[test]
    fn real_inputs_satisfy_reality_condition(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = decompose(&random_spec(&mut rng, n, SymmetryClass::Real)).unwrap();
        for t in d.terms() {
            let sign = if t.label.y_count() % 2 == 0 { 1.0 } else { -1.0 };
            let mirrored = t.weight.conj() * sign;
            prop_assert!((t.weight - mirrored).norm() <= 1e-12 * t.weight.norm().max(1.0));
        }
    }
}

#[test]
fn set_labels_live_on_antidiagonal_blocks() {
    for n in 1..=4 {
        for s in generate_sets(n, SymmetryClass::General).unwrap() {
            if s.m == 0 {
                continue;
            }
            let side = 1usize << s.m;
            for l in &s.labels {
                let w = label_to_dense(l).unwrap();
                for r in 0..1usize << n {
                    for c in 0..1usize << n {
                        let nonzero = w[(r, c)].norm() > 0.5;
                        let on_block = r / side == c / side && (r % side) + (c % side) == side - 1;
                        assert_eq!(nonzero, on_block, "n={n} {l} ({r},{c})");
                    }
                }
            }
        }
    }
}

#[test]
fn wave_norm_bound() {
    let w = wave_hamiltonian(&[1.0; 4], 2, 1.0).unwrap();
    assert!(w.b.norm_bound() <= 2.0 + 1e-12);
    let w = wave_hamiltonian(&[1.0; 8], 3, 0.5).unwrap();
    assert!(w.b.norm_bound() <= 4.0 + 1e-12);
}

#[test]
fn embedded_weights_are_real() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let d = decompose(&random_spec(&mut rng, 3, SymmetryClass::Real)).unwrap();
    let h = embed_hermitian(&d).unwrap();
    assert!(h.terms().all(|t| t.weight.im == 0.0));
}
