//! Experiments on the wave-equation Hamiltonian: decomposition reports,
//! gate-count sweeps and state evolution.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use tridiag_pauli::decomposer::{parse_matrix_file, wave_hamiltonian};
use tridiag_pauli::simulator::{
    brute_force_decompose, exact_propagator, reconstruct, spectral_error, tridiagonal_dense,
    trotter_unitary, MAX_SIM_QUBITS,
};
use tridiag_pauli::{
    decompose, diagonalize_all, trotter_circuit, Decomposition64, GateCount, SymmetryClass,
    TrotterCircuit, TrotterEstimate, TrotterPlan,
};

pub const CSV_SCHEMA: &str = "# wave-sweep v1";
pub const FIT_SCHEMA: &str = "# wave-sweep-fit v1";
pub const EVOLVE_SCHEMA: &str = "# evolve v1";

/// Qubit count up to which `run_decompose` compares against the trace oracle.
pub const ORACLE_MAX_QUBITS: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] tridiag_pauli::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Config(String),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
}

impl AppError {
    /// 2 for invalid input, 3 for the simulation cap, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use tridiag_pauli::Error as E;
        match self {
            AppError::Core(E::CapExceeded { .. }) => 3,
            AppError::Core(E::Inconsistent(_)) => 1,
            AppError::Core(_) | AppError::Config(_) => 2,
            AppError::Io { .. } | AppError::Csv(_) | AppError::Json(_) => 1,
        }
    }
}

pub type AppResult<T> = std::result::Result<T, AppError>;

pub fn read_file(path: &Path) -> AppResult<String> {
    std::fs::read_to_string(path).map_err(|source| AppError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_file(path: &Path, bytes: &[u8]) -> AppResult<()> {
    std::fs::write(path, bytes).map_err(|source| AppError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Comma- or whitespace-separated reals; `#` starts a comment.
pub fn parse_samples(text: &str) -> AppResult<Vec<f64>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let v: f64 = tok.parse().map_err(|_| {
                AppError::Core(tridiag_pauli::Error::Parse {
                    line: k + 1,
                    msg: format!("cannot parse `{tok}` as a number"),
                })
            })?;
            out.push(v);
        }
    }
    Ok(out)
}

/// Speed profile `c(x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpeedProfile {
    Constant(f64),
    Samples(Vec<f64>),
}

impl SpeedProfile {
    /// `constant:VALUE` or `file:PATH`.
    pub fn parse(spec: &str) -> AppResult<Self> {
        match spec.split_once(':') {
            Some(("constant", v)) => v
                .trim()
                .parse()
                .map(SpeedProfile::Constant)
                .map_err(|_| AppError::Config(format!("bad constant speed `{v}`"))),
            Some(("file", path)) => Ok(SpeedProfile::Samples(parse_samples(&read_file(
                Path::new(path),
            )?)?)),
            _ => Err(AppError::Config(format!(
                "speed must be `constant:VALUE` or `file:PATH`, got `{spec}`"
            ))),
        }
    }

    pub fn samples(&self, n: usize) -> AppResult<Vec<f64>> {
        let dim = 1usize << n;
        match self {
            SpeedProfile::Constant(v) => Ok(vec![*v; dim]),
            SpeedProfile::Samples(s) if s.len() == dim => Ok(s.clone()),
            SpeedProfile::Samples(s) => Err(AppError::Core(tridiag_pauli::Error::LengthMismatch {
                what: "speed profile samples",
                expected: dim,
                got: s.len(),
            })),
        }
    }
}

/// Grid step `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridStep {
    /// `N` points spanning `[0, 1]`: `h = 1/(N-1)`.
    Unit,
    Fixed(f64),
}

impl GridStep {
    pub fn value(&self, n: usize) -> f64 {
        match *self {
            GridStep::Unit => 1.0 / ((1usize << n) - 1) as f64,
            GridStep::Fixed(h) => h,
        }
    }
}

impl FromStr for GridStep {
    type Err = AppError;

    fn from_str(s: &str) -> AppResult<Self> {
        if s == "unit" {
            return Ok(GridStep::Unit);
        }
        match s.parse::<f64>() {
            Ok(h) if h > 0.0 && h.is_finite() => Ok(GridStep::Fixed(h)),
            _ => Err(AppError::Config(format!(
                "grid step must be `unit` or a positive number, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for GridStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridStep::Unit => f.write_str("unit"),
            GridStep::Fixed(h) => write!(f, "{h}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub orders: Vec<u32>,
    pub eps: f64,
    pub t: f64,
    pub speed: SpeedProfile,
    pub grid: GridStep,
    pub trotter_constant: f64,
    /// Rows with at most this many total qubits get a measured error.
    pub verify_max_qubits: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_min: 2,
            n_max: 4,
            orders: vec![1, 2],
            eps: 1e-3,
            t: 1.0,
            speed: SpeedProfile::Constant(1.0),
            grid: GridStep::Unit,
            trotter_constant: 1.0,
            verify_max_qubits: 6,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> AppResult<()> {
        let bad = |m: String| Err(AppError::Config(m));
        if self.n_min == 0 || self.n_min > self.n_max {
            return bad(format!(
                "need 1 ≤ n-min ≤ n-max, got {}..{}",
                self.n_min, self.n_max
            ));
        }
        if self.n_max > tridiag_pauli::decomposer::MAX_QUBITS {
            return bad(format!(
                "n-max {} exceeds {}",
                self.n_max,
                tridiag_pauli::decomposer::MAX_QUBITS
            ));
        }
        if self.orders.is_empty() || self.orders.iter().any(|p| !matches!(p, 1 | 2 | 4 | 6)) {
            return bad(format!(
                "orders {:?} must be drawn from 1, 2, 4, 6",
                self.orders
            ));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("eps must be positive, got {}", self.eps));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return bad(format!("t must be positive, got {}", self.t));
        }
        if !(self.trotter_constant > 0.0 && self.trotter_constant.is_finite()) {
            return bad(format!(
                "trotter constant must be positive, got {}",
                self.trotter_constant
            ));
        }
        if self.verify_max_qubits > MAX_SIM_QUBITS {
            return bad(format!(
                "verification limit {} exceeds the simulator cap {MAX_SIM_QUBITS}",
                self.verify_max_qubits
            ));
        }
        Ok(())
    }
}

/// Embedded wave Hamiltonian for `n` qubits of grid, plus its norm bound.
pub fn wave_instance(
    n: usize,
    speed: &SpeedProfile,
    grid: GridStep,
) -> AppResult<(Decomposition64, f64)> {
    let w = wave_hamiltonian(&speed.samples(n)?, n, grid.value(n))?;
    for msg in &w.warnings {
        eprintln!("warning: {msg}");
    }
    Ok((w.hamiltonian, w.b.norm_bound()))
}

/// Trotter circuit whose step count comes from the estimator.
pub fn estimated_circuit(
    h: &Decomposition64,
    norm: f64,
    order: u32,
    t: f64,
    eps: f64,
    constant: f64,
) -> AppResult<TrotterCircuit> {
    let r = TrotterEstimate {
        sets: h.nonempty_set_count().max(1),
        norm,
        time: t,
        eps,
        order,
        constant,
    }
    .steps()?;
    let diag = diagonalize_all(h)?;
    Ok(trotter_circuit(
        h,
        &diag,
        &TrotterPlan::new(order, r, t, h.sets().len()),
    )?)
}

/// One `(n, p)` grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub n: usize,
    pub big_n: u64,
    pub p: u32,
    pub r: u64,
    pub eps: f64,
    pub counts: GateCount,
    /// Spectral error against the exact propagator, when verified.
    pub measured_error: Option<f64>,
}

impl RunRecord {
    pub fn g(&self) -> u64 {
        self.counts.total
    }

    /// `ok`, `violation` or `unverified`.
    pub fn status(&self) -> &'static str {
        match self.measured_error {
            None => "unverified",
            Some(e) if e <= self.eps => "ok",
            Some(_) => "violation",
        }
    }
}

pub fn run_point(cfg: &ExperimentConfig, n: usize, p: u32) -> AppResult<RunRecord> {
    let (h, norm) = wave_instance(n, &cfg.speed, cfg.grid)?;
    let tc = estimated_circuit(&h, norm, p, cfg.t, cfg.eps, cfg.trotter_constant)?;
    let measured_error = if h.width() <= cfg.verify_max_qubits {
        let exact = exact_propagator(&reconstruct(&h)?, cfg.t)?;
        Some(spectral_error(&trotter_unitary(&tc)?, &exact)?)
    } else {
        None
    };
    Ok(RunRecord {
        n,
        big_n: 1 << n,
        p,
        r: tc.repetitions,
        eps: cfg.eps,
        counts: tc.count_gates(),
        measured_error,
    })
}

/// All `(n, p)` points, ordered by `n` then by the order list.
pub fn run_wave_sweep(cfg: &ExperimentConfig) -> AppResult<Vec<RunRecord>> {
    cfg.validate()?;
    let grid: Vec<(usize, u32)> = (cfg.n_min..=cfg.n_max)
        .flat_map(|n| cfg.orders.iter().map(move |&p| (n, p)))
        .collect();
    grid.par_iter()
        .map(|&(n, p)| run_point(cfg, n, p))
        .collect()
}

pub fn write_sweep_csv<W: Write>(records: &[RunRecord], mut out: W) -> AppResult<()> {
    writeln!(out, "{CSV_SCHEMA}").map_err(csv::Error::from)?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["n", "N", "p", "r", "eps", "g"];
    header.extend(GateCount::KINDS);
    header.extend(["measured_error", "status"]);
    w.write_record(&header)?;
    for rec in records {
        let mut row = vec![
            rec.n.to_string(),
            rec.big_n.to_string(),
            rec.p.to_string(),
            rec.r.to_string(),
            format!("{:e}", rec.eps),
            rec.g().to_string(),
        ];
        row.extend(rec.counts.per_kind().iter().map(u64::to_string));
        row.push(
            rec.measured_error
                .map_or_else(|| "unverified".to_string(), |e| format!("{e:e}")),
        );
        row.push(rec.status().to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Least-squares fit of `ln y = slope · ln x + intercept`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if var == 0.0 {
        return None;
    }
    let slope = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / var;
    Some((slope, my - slope * mx))
}

/// Published `γ = 2·5^{p/2-1}·10^{5/p}` for ε = 1e-5, halved for `p = 6`.
pub fn reference_gamma(p: u32) -> f64 {
    let p = f64::from(p);
    let g = 2.0 * 5f64.powf(p / 2.0 - 1.0) * 10f64.powf(5.0 / p);
    if p == 6.0 {
        g / 2.0
    } else {
        g
    }
}

/// Slope of `g` against `N` for one order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub p: u32,
    pub points: usize,
    pub slope: f64,
    /// Slope of `g / n^{2+1/p}` against `N`.
    pub n_compensated_slope: f64,
    /// `1.5 + 1/p`.
    pub reference_slope: f64,
    /// Geometric mean of `g / (N^{1.5+1/p} n^{2+1/p})`.
    pub gamma_fit: f64,
    pub gamma_reference: f64,
    pub monotone: bool,
}

pub fn fit_slopes(records: &[RunRecord], orders: &[u32]) -> Vec<SlopeFit> {
    orders
        .iter()
        .filter_map(|&p| {
            let rows: Vec<&RunRecord> = records.iter().filter(|r| r.p == p).collect();
            let xs: Vec<f64> = rows.iter().map(|r| r.big_n as f64).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r.g() as f64).collect();
            let (slope, _) = loglog_fit(&xs, &ys)?;
            let pe = 1.0 / f64::from(p);
            let scaled: Vec<f64> = rows
                .iter()
                .map(|r| r.g() as f64 / (r.n as f64).powf(2.0 + pe))
                .collect();
            let (n_compensated_slope, _) = loglog_fit(&xs, &scaled)?;
            let log_gamma = rows
                .iter()
                .map(|r| {
                    (r.g() as f64).ln()
                        - (1.5 + pe) * (r.big_n as f64).ln()
                        - (2.0 + pe) * (r.n as f64).ln()
                })
                .sum::<f64>()
                / rows.len() as f64;
            Some(SlopeFit {
                p,
                points: rows.len(),
                slope,
                n_compensated_slope,
                reference_slope: 1.5 + pe,
                gamma_fit: log_gamma.exp(),
                gamma_reference: reference_gamma(p),
                monotone: rows.windows(2).all(|w| w[1].g() > w[0].g()),
            })
        })
        .collect()
}

pub fn write_fit_csv<W: Write>(fits: &[SlopeFit], mut out: W) -> AppResult<()> {
    writeln!(out, "{FIT_SCHEMA}").map_err(csv::Error::from)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "p",
        "points",
        "slope",
        "n_compensated_slope",
        "reference_slope",
        "gamma_fit",
        "gamma_reference",
        "monotone",
    ])?;
    for f in fits {
        w.write_record([
            f.p.to_string(),
            f.points.to_string(),
            format!("{:.6}", f.slope),
            format!("{:.6}", f.n_compensated_slope),
            format!("{:.6}", f.reference_slope),
            format!("{:e}", f.gamma_fit),
            format!("{:e}", f.gamma_reference),
            f.monotone.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermReport {
    pub pauli: String,
    pub weight: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetReport {
    pub name: String,
    pub m: usize,
    pub parity: String,
    pub x_selector: String,
    pub terms: Vec<TermReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleStatus {
    pub checked: bool,
    pub max_error: Option<f64>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub class: SymmetryClass,
    pub inferred_class: SymmetryClass,
    pub prefactor: f64,
    pub term_count: usize,
    pub set_count: usize,
    pub sets: Vec<SetReport>,
    pub oracle: OracleStatus,
}

/// Decomposes a matrix file; `class` must match the file header.
pub fn run_decompose(text: &str, class: SymmetryClass) -> AppResult<DecompositionReport> {
    let file = parse_matrix_file(text)?;
    if file.class != class {
        return Err(AppError::Core(tridiag_pauli::Error::Validation(format!(
            "file declares class `{}` but `{class}` was requested",
            file.class
        ))));
    }
    let spec = &file.spec;
    let d = decompose(spec)?;
    let oracle = if spec.n() <= ORACLE_MAX_QUBITS {
        let brute = brute_force_decompose(&tridiagonal_dense(spec)?)?;
        let ours = d.weights();
        let max_error = brute
            .iter()
            .map(|(l, b)| (ours.get(l).copied().unwrap_or_default() - b).norm())
            .fold(0.0, f64::max);
        OracleStatus {
            checked: true,
            max_error: Some(max_error),
            ok: max_error <= 1e-12 * spec.scale().max(1.0),
        }
    } else {
        OracleStatus {
            checked: false,
            max_error: None,
            ok: true,
        }
    };
    let sets = d
        .sets()
        .iter()
        .map(|s| SetReport {
            name: s.name(),
            m: s.m,
            parity: format!("{:?}", s.parity).to_lowercase(),
            x_selector: s.x_selector.to_string(),
            terms: s
                .terms
                .iter()
                .map(|t| TermReport {
                    pauli: t.label.to_string(),
                    weight: [t.weight.re, t.weight.im],
                })
                .collect(),
        })
        .collect();
    Ok(DecompositionReport {
        n: spec.n(),
        class,
        inferred_class: spec.inferred_class(),
        prefactor: d.prefactor(),
        term_count: d.term_count(),
        set_count: d.sets().len(),
        sets,
        oracle,
    })
}

/// Initial displacement `g(x)` on the grid.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    Zero,
    /// `sin(2π k/(N-1))`, one period vanishing at both ends.
    Sine,
    Samples(Vec<f64>),
}

impl InitialCondition {
    /// `zero`, `sine`, or a sample file path.
    pub fn parse(spec: &str) -> AppResult<Self> {
        match spec {
            "zero" => Ok(InitialCondition::Zero),
            "sine" => Ok(InitialCondition::Sine),
            path => Ok(InitialCondition::Samples(parse_samples(&read_file(
                Path::new(path),
            )?)?)),
        }
    }

    pub fn samples(&self, n: usize) -> AppResult<Vec<f64>> {
        let dim = 1usize << n;
        match self {
            InitialCondition::Zero => Ok(vec![0.0; dim]),
            InitialCondition::Sine => Ok((0..dim)
                .map(|k| (2.0 * std::f64::consts::PI * k as f64 / (dim - 1) as f64).sin())
                .collect()),
            InitialCondition::Samples(s) if s.len() == dim => Ok(s.clone()),
            InitialCondition::Samples(s) => {
                Err(AppError::Core(tridiag_pauli::Error::LengthMismatch {
                    what: "initial condition samples",
                    expected: dim,
                    got: s.len(),
                }))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveConfig {
    pub n: usize,
    pub t: f64,
    pub eps: f64,
    pub order: u32,
    pub frames: usize,
    pub speed: SpeedProfile,
    pub grid: GridStep,
    pub trotter_constant: f64,
}

/// One grid sample at one time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolveRow {
    pub frame: usize,
    pub time: f64,
    pub k: usize,
    pub r: u64,
    pub u_trotter: f64,
    pub u_exact: f64,
    pub deviation: f64,
}

/// Evolves `ψ(0) = (g, 0)/‖g‖` and reports `u = ‖g‖·Re φ_V` at
/// `frames + 1` evenly spaced times in `[0, t]`.
pub fn run_evolve(cfg: &EvolveConfig, init: &InitialCondition) -> AppResult<Vec<EvolveRow>> {
    if cfg.n == 0 {
        return Err(AppError::Config("n must be at least 1".into()));
    }
    if cfg.n + 1 > MAX_SIM_QUBITS {
        return Err(AppError::Core(tridiag_pauli::Error::CapExceeded {
            width: cfg.n + 1,
            cap: MAX_SIM_QUBITS,
        }));
    }
    if !(cfg.t >= 0.0 && cfg.t.is_finite()) || cfg.eps.is_nan() || cfg.eps <= 0.0 {
        return Err(AppError::Config(format!(
            "need t ≥ 0 and eps > 0, got t={} eps={}",
            cfg.t, cfg.eps
        )));
    }
    let g = init.samples(cfg.n)?;
    let dim = g.len();
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (h, hnorm) = wave_instance(cfg.n, &cfg.speed, cfg.grid)?;
    let dense_h = reconstruct(&h)?;
    let psi0 = DVector::from_iterator(
        2 * dim,
        g.iter()
            .map(|v| if norm > 0.0 { v / norm } else { 0.0 })
            .chain(std::iter::repeat_n(0.0, dim))
            .map(|v| Complex64::new(v, 0.0)),
    );

    let mut rows = Vec::with_capacity((cfg.frames + 1) * dim);
    for frame in 0..=cfg.frames {
        let time = if cfg.frames == 0 {
            cfg.t
        } else {
            cfg.t * frame as f64 / cfg.frames as f64
        };
        let (r, trot, exact) = if time == 0.0 || norm == 0.0 {
            (0, g.clone(), g.clone())
        } else {
            let tc = estimated_circuit(&h, hnorm, cfg.order, time, cfg.eps, cfg.trotter_constant)?;
            let a = trotter_unitary(&tc)? * &psi0;
            let b = exact_propagator(&dense_h, time)? * &psi0;
            let take =
                |v: &DVector<Complex64>| (0..dim).map(|k| v[k].re * norm).collect::<Vec<f64>>();
            (tc.repetitions, take(&a), take(&b))
        };
        for k in 0..dim {
            rows.push(EvolveRow {
                frame,
                time,
                k,
                r,
                u_trotter: trot[k],
                u_exact: exact[k],
                deviation: (trot[k] - exact[k]).abs(),
            });
        }
    }
    Ok(rows)
}

pub fn write_evolve_csv<W: Write>(rows: &[EvolveRow], mut out: W) -> AppResult<()> {
    writeln!(out, "{EVOLVE_SCHEMA}").map_err(csv::Error::from)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["frame", "t", "k", "r", "u_trotter", "u_exact", "deviation"])?;
    for r in rows {
        w.write_record([
            r.frame.to_string(),
            format!("{:e}", r.time),
            r.k.to_string(),
            r.r.to_string(),
            format!("{:e}", r.u_trotter),
            format!("{:e}", r.u_exact),
            format!("{:e}", r.deviation),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
