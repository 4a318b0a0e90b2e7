//! End-to-end acceptance checks. Runs without the libtest harness so every
//! check prints its own PASS/FAIL line; the process fails if any check does.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tridiag_pauli::diagonalizer::GATE_BUDGET_K;
use tridiag_pauli::simulator::{
    brute_force_decompose, clifford_unitary, commutator, exact_propagator, label_to_dense, max_abs,
    off_diagonal_max, reconstruct, spectral_error, tridiagonal_dense, trotter_unitary,
};
use tridiag_pauli::{
    decompose, diagonalize_all, embed_hermitian, generate_sets, trotter_circuit, Decomposition64,
    SymmetryClass, TridiagonalSpec64, TrotterPlan, WalshLabel,
};
use waveapp::{
    fit_slopes, run_decompose, run_evolve, run_wave_sweep, wave_instance, write_evolve_csv,
    write_fit_csv, write_sweep_csv, EvolveConfig, ExperimentConfig, GridStep, InitialCondition,
    SpeedProfile,
};

const CLASSES: [SymmetryClass; 3] = [
    SymmetryClass::General,
    SymmetryClass::Real,
    SymmetryClass::RealSymmetric,
];

type Check = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_spec(rng: &mut ChaCha8Rng, n: usize, class: SymmetryClass) -> TridiagonalSpec64 {
    let dim = 1usize << n;
    let complex = class == SymmetryClass::General;
    let mut draw = |len: usize| -> Vec<Complex64> {
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
    let c = draw(dim);
    let a = draw(dim - 1);
    let b = if class == SymmetryClass::RealSymmetric {
        a.clone()
    } else {
        draw(dim - 1)
    };
    TridiagonalSpec64::new(n, c, a, b, class).unwrap()
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    waveapp::loglog_fit(xs, ys)
        .expect("at least two distinct points")
        .0
}

fn reconstruction() -> Outcome {
    let start = Instant::now();
    let mut r = rng(101);
    let mut worst = 0.0f64;
    for n in 1..=6 {
        for _ in 0..100 {
            let spec = random_spec(&mut r, n, SymmetryClass::General);
            let d = decompose(&spec).unwrap();
            let err = max_abs(&(reconstruct(&d).unwrap() - tridiagonal_dense(&spec).unwrap()));
            worst = worst.max(err);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-10 && secs < 60.0,
        format!("600 matrices, n = 1..6, max error {worst:.2e}, {secs:.1} s"),
    )
}

fn cardinality() -> Outcome {
    let mut r = rng(102);
    let mut failures = Vec::new();
    let mut instances = 0;
    for n in 1..=8 {
        for class in CLASSES {
            for _ in 0..5 {
                instances += 1;
                let d = decompose(&random_spec(&mut r, n, class)).unwrap();
                let count = d.term_count();
                let bound = match class {
                    SymmetryClass::RealSymmetric => (n + 2) << (n - 1),
                    _ => (n + 1) << n,
                };
                if count > bound {
                    failures.push(format!("{class} n={n}: {count} > {bound}"));
                }
                if class != SymmetryClass::General {
                    let h = embed_hermitian(&d).unwrap();
                    if h.term_count() != count {
                        failures.push(format!(
                            "{class} n={n}: embedded {} != {count}",
                            h.term_count()
                        ));
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{instances} instances within bounds, embedded counts equal")
        } else {
            failures.join("; ")
        },
    )
}

fn oracle() -> Outcome {
    let mut r = rng(103);
    let mut worst = 0.0f64;
    let mut outside = Vec::new();
    for n in 1..=5 {
        for class in CLASSES {
            let spec = random_spec(&mut r, n, class);
            let d = decompose(&spec).unwrap();
            let ours = d.weights();
            let support: std::collections::BTreeSet<WalshLabel> = generate_sets(n, class)
                .unwrap()
                .into_iter()
                .flat_map(|s| s.labels)
                .collect();
            for (label, beta) in brute_force_decompose(&tridiagonal_dense(&spec).unwrap()).unwrap()
            {
                let got = ours.get(&label).copied().unwrap_or_default();
                worst = worst.max((got - beta).norm());
                if beta.norm() > 1e-12 && !support.contains(&label) {
                    outside.push(format!("{class} n={n} {label}"));
                }
            }
        }
    }
    outcome(
        worst <= 1e-12 && outside.is_empty(),
        format!(
            "n = 1..5, all classes, max weight error {worst:.2e}, {} labels outside the sets",
            outside.len()
        ),
    )
}

fn commutation() -> Outcome {
    let mut r = rng(104);
    let mut symbolic_failures = 0;
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for n in 1..=6 {
        for class in CLASSES {
            let d = decompose(&random_spec(&mut r, n, class)).unwrap();
            let mut decomps = vec![d.clone()];
            if class != SymmetryClass::General {
                decomps.push(embed_hermitian(&d).unwrap());
            }
            for d in &decomps {
                for set in d.sets() {
                    let labels = set.labels();
                    for (i, p) in labels.iter().enumerate() {
                        for q in &labels[i + 1..] {
                            checked += 1;
                            if !p.commutes_with(q).unwrap() {
                                symbolic_failures += 1;
                            }
                            if d.width() <= 4 {
                                let (a, b) =
                                    (label_to_dense(p).unwrap(), label_to_dense(q).unwrap());
                                worst = worst.max(max_abs(&commutator(&a, &b)));
                            }
                        }
                    }
                }
            }
        }
    }
    outcome(
        symbolic_failures == 0 && worst <= 1e-12,
        format!("{checked} pairs, {symbolic_failures} symbolic failures, max dense commutator {worst:.2e} at n <= 4"),
    )
}

fn diagonalization() -> Outcome {
    let mut r = rng(105);
    let mut decomps: Vec<(String, Decomposition64)> = Vec::new();
    for n in 1..=4 {
        for class in CLASSES {
            let d = decompose(&random_spec(&mut r, n, class)).unwrap();
            if class != SymmetryClass::General && n <= 3 {
                decomps.push((
                    format!("embedded {class} n={n}"),
                    embed_hermitian(&d).unwrap(),
                ));
            }
            decomps.push((format!("{class} n={n}"), d));
        }
    }
    let mut failures = Vec::new();
    let mut worst_ratio = 0.0f64;
    let mut sets = 0;
    for (name, d) in &decomps {
        let w = d.width();
        for (set, ds) in d.sets().iter().zip(diagonalize_all(d).unwrap()) {
            sets += 1;
            worst_ratio = worst_ratio.max(ds.clifford.len() as f64 / (w * w) as f64);
            if ds.clifford.len() > GATE_BUDGET_K * w * w {
                failures.push(format!(
                    "{name} {}: {} gates",
                    set.name(),
                    ds.clifford.len()
                ));
            }
            let u = clifford_unitary(&ds.clifford).unwrap();
            for (t, src) in ds.diagonal_terms.iter().zip(&set.terms) {
                if t.source != src.label || t.weight != src.weight {
                    failures.push(format!(
                        "{name} {}: weight of {} changed",
                        set.name(),
                        src.label
                    ));
                }
                let conj = &u * label_to_dense(&t.source).unwrap() * u.adjoint();
                let want =
                    label_to_dense(&t.label).unwrap() * Complex64::new(f64::from(t.sign), 0.0);
                if off_diagonal_max(&conj) > 1e-10 || max_abs(&(conj - want)) > 1e-10 {
                    failures.push(format!(
                        "{name} {}: {} not diagonalized",
                        set.name(),
                        t.source
                    ));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{sets} sets, K = {GATE_BUDGET_K}, largest gates/n^2 = {worst_ratio:.2}")
        } else {
            failures.join("; ")
        },
    )
}

fn trotter_error(d: &Decomposition64, order: u32, r: u64, t: f64) -> f64 {
    let diag = diagonalize_all(d).unwrap();
    let tc = trotter_circuit(d, &diag, &TrotterPlan::new(order, r, t, d.sets().len())).unwrap();
    let exact = exact_propagator(&reconstruct(d).unwrap(), t).unwrap();
    spectral_error(&trotter_unitary(&tc).unwrap(), &exact).unwrap()
}

fn trotter_order() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for n in 2..=4 {
        let (h, norm) = wave_instance(n, &SpeedProfile::Constant(1.0), GridStep::Unit).unwrap();
        // Start well inside the asymptotic regime.
        let r0 = (2.0 * norm).ceil() as u64;
        let rs: Vec<u64> = [1, 2, 4, 8].iter().map(|k| k * r0).collect();
        for p in [1u32, 2] {
            let errs: Vec<f64> = rs.iter().map(|&r| trotter_error(&h, p, r, 1.0)).collect();
            let xs: Vec<f64> = rs.iter().map(|&r| r as f64).collect();
            let slope = loglog_slope(&xs, &errs);
            let target = -f64::from(p);
            let ok = (slope - target).abs() <= 0.2 * target.abs();
            pass &= ok;
            notes.push(format!("{}q p={p} slope {slope:.3}", n + 1));
        }
    }
    let (h, _) = wave_instance(3, &SpeedProfile::Constant(1.0), GridStep::Unit).unwrap();
    let mut single = 0.0f64;
    for k in 0..h.sets().len() {
        let only = Decomposition64::new(
            h.width(),
            h.class(),
            h.prefactor_exp(),
            vec![h.sets()[k].clone()],
        );
        single = single.max(trotter_error(&only, 1, 1, 1.0));
    }
    pass &= single <= 1e-10;
    notes.push(format!("single set at r=1 error {single:.2e}"));
    outcome(pass, notes.join(", "))
}

fn accuracy() -> Outcome {
    let cfg = ExperimentConfig {
        n_min: 1,
        n_max: 5,
        orders: vec![1, 2, 4, 6],
        eps: 1e-3,
        verify_max_qubits: 6,
        ..ExperimentConfig::default()
    };
    let rows = run_wave_sweep(&cfg).unwrap();
    let verified: Vec<_> = rows.iter().filter(|r| r.measured_error.is_some()).collect();
    let violations: Vec<String> = verified
        .iter()
        .filter(|r| r.status() == "violation")
        .map(|r| {
            format!(
                "n={} p={} error {:.2e}",
                r.n,
                r.p,
                r.measured_error.unwrap()
            )
        })
        .collect();
    let worst = verified
        .iter()
        .filter_map(|r| r.measured_error)
        .fold(0.0, f64::max);
    outcome(
        violations.is_empty() && verified.len() == rows.len(),
        if violations.is_empty() {
            format!(
                "{} verified rows, largest error {worst:.2e} <= 1e-3",
                verified.len()
            )
        } else {
            violations.join("; ")
        },
    )
}

fn fig3_shape() -> Outcome {
    let cfg = ExperimentConfig {
        n_min: 2,
        n_max: 7,
        orders: vec![1, 2, 4],
        eps: 1e-3,
        verify_max_qubits: 0,
        ..ExperimentConfig::default()
    };
    let rows = run_wave_sweep(&cfg).unwrap();
    let mut pass = true;
    let mut notes = Vec::new();
    for f in fit_slopes(&rows, &cfg.orders) {
        let ok = (f.slope - f.reference_slope).abs() <= 0.3 && f.monotone;
        pass &= ok;
        notes.push(format!(
            "p={} slope {:.2} (want {:.2} +/- 0.3, n-compensated {:.2}), monotone {}, gamma fit {:.3e} vs reference {:.3e}",
            f.p, f.slope, f.reference_slope, f.n_compensated_slope, f.monotone, f.gamma_fit, f.gamma_reference
        ));
    }
    outcome(pass, notes.join("; "))
}

fn outputs() -> (Vec<u8>, Vec<u8>, Vec<u8>, Vec<u8>) {
    let json = {
        let r = run_decompose(
            "class: general\nc: 1, 2+1j, -3, 0.5\na: 1j, 2, -1\nb: 0, 1-1j, 4\n",
            SymmetryClass::General,
        )
        .unwrap();
        serde_json::to_vec_pretty(&r).unwrap()
    };
    let cfg = ExperimentConfig {
        n_min: 1,
        n_max: 4,
        orders: vec![1, 2, 4],
        ..ExperimentConfig::default()
    };
    let rows = run_wave_sweep(&cfg).unwrap();
    let mut sweep = Vec::new();
    write_sweep_csv(&rows, &mut sweep).unwrap();
    let mut fit = Vec::new();
    write_fit_csv(&fit_slopes(&rows, &cfg.orders), &mut fit).unwrap();
    let evolve_cfg = EvolveConfig {
        n: 3,
        t: 0.5,
        eps: 1e-3,
        order: 2,
        frames: 3,
        speed: SpeedProfile::Constant(1.0),
        grid: GridStep::Unit,
        trotter_constant: 1.0,
    };
    let mut evolve = Vec::new();
    write_evolve_csv(
        &run_evolve(&evolve_cfg, &InitialCondition::Sine).unwrap(),
        &mut evolve,
    )
    .unwrap();
    (json, sweep, fit, evolve)
}

fn determinism() -> Outcome {
    let first = outputs();
    let second = outputs();
    let same = [
        ("decompose JSON", first.0 == second.0),
        ("sweep CSV", first.1 == second.1),
        ("fit CSV", first.2 == second.2),
        ("evolve CSV", first.3 == second.3),
    ];
    let differing: Vec<&str> = same.iter().filter(|(_, eq)| !eq).map(|(n, _)| *n).collect();
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            "decompose JSON, sweep and fit CSV, evolve CSV identical across two runs".into()
        } else {
            format!("outputs differ: {}", differing.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let checks: [Check; 9] = [
        ("reconstruction identity", reconstruction),
        ("cardinality bounds", cardinality),
        ("oracle equivalence", oracle),
        ("commutation", commutation),
        ("diagonalization soundness", diagonalization),
        ("trotter order", trotter_order),
        ("accuracy delivery", accuracy),
        ("gate-count shape", fig3_shape),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in checks.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        checks.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
