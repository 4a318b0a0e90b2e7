#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tridiag_pauli::{SymmetryClass, TridiagonalSpec64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_spec(rng: &mut ChaCha8Rng, n: usize, class: SymmetryClass) -> TridiagonalSpec64 {
    let dim = 1usize << n;
    let mut draw = |len: usize, complex: bool| -> Vec<Complex64> {
        (0..len)
            .map(|_| {
                let re = rng.gen_range(-1.0..1.0);
                let im = if complex {
                    rng.gen_range(-1.0..1.0)
                } else {
                    0.0
                };
                Complex64::new(re, im)
            })
            .collect()
    };
    let complex = class == SymmetryClass::General;
    let c = draw(dim, complex);
    let a = draw(dim - 1, complex);
    let b = if class == SymmetryClass::RealSymmetric {
        a.clone()
    } else {
        draw(dim - 1, complex)
    };
    TridiagonalSpec64::new(n, c, a, b, class).unwrap()
}

pub const CLASSES: [SymmetryClass; 3] = [
    SymmetryClass::General,
    SymmetryClass::Real,
    SymmetryClass::RealSymmetric,
];

/// Least-squares slope of log(y) against log(x).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}
