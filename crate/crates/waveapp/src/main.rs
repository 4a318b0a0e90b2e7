use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tridiag_pauli::SymmetryClass;
use waveapp::{
    fit_slopes, read_file, run_decompose, run_evolve, run_wave_sweep, write_evolve_csv, write_file,
    write_fit_csv, write_sweep_csv, AppResult, EvolveConfig, ExperimentConfig, GridStep,
    InitialCondition, SpeedProfile,
};

#[derive(Parser)]
#[command(
    name = "waveapp",
    version,
    about = "Pauli decompositions and Trotter circuits for tridiagonal Hamiltonians"
)]
struct Cli {
    /// Big-O constant of the Trotter step estimate.
    #[arg(long, global = true, default_value_t = 1.0)]
    trotter_constant: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a tridiagonal matrix file into commuting Pauli sets (JSON report).
    Decompose {
        #[arg(long)]
        input: PathBuf,
        /// general, real or symmetric; must match the file header.
        #[arg(long)]
        class: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gate counts of wave-equation Trotter circuits over (n, p).
    WaveSweep {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        orders: Vec<u32>,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// constant:VALUE or file:PATH
        #[arg(long, default_value = "constant:1")]
        speed: String,
        /// `unit` (h = 1/(N-1)) or a fixed positive step.
        #[arg(long, default_value = "unit")]
        grid_step: String,
        /// Measure the spectral error for rows with at most this many qubits.
        #[arg(long, default_value_t = 6)]
        verify_max_qubits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Slope fit output; defaults to OUT with a `.fit.csv` suffix.
        #[arg(long)]
        fit_out: Option<PathBuf>,
    },
    /// Evolve an initial displacement under the Trotterized wave Hamiltonian.
    Evolve {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long, default_value_t = 4)]
        frames: usize,
        /// Speed sample file (overrides --speed).
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, default_value = "constant:1")]
        speed: String,
        #[arg(long, default_value = "unit")]
        grid_step: String,
        /// `zero`, `sine`, or a sample file.
        #[arg(long)]
        init: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, bytes: Vec<u8>) -> AppResult<()> {
    match out {
        Some(p) => write_file(p, &bytes),
        None => {
            print!("{}", String::from_utf8_lossy(&bytes));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> AppResult<()> {
    match cli.command {
        Command::Decompose { input, class, out } => {
            let class = SymmetryClass::parse(&class)?;
            let report = run_decompose(&read_file(&input)?, class)?;
            let mut json = serde_json::to_vec_pretty(&report)?;
            json.push(b'\n');
            emit(out.as_deref(), json)
        }
        Command::WaveSweep {
            n_min,
            n_max,
            orders,
            eps,
            t,
            speed,
            grid_step,
            verify_max_qubits,
            out,
            fit_out,
        } => {
            let cfg = ExperimentConfig {
                n_min,
                n_max,
                orders,
                eps,
                t,
                speed: SpeedProfile::parse(&speed)?,
                grid: grid_step.parse::<GridStep>()?,
                trotter_constant: cli.trotter_constant,
                verify_max_qubits,
            };
            let records = run_wave_sweep(&cfg)?;
            let mut csv = Vec::new();
            write_sweep_csv(&records, &mut csv)?;
            emit(out.as_deref(), csv)?;
            let mut fit = Vec::new();
            write_fit_csv(&fit_slopes(&records, &cfg.orders), &mut fit)?;
            let fit_path = fit_out.or_else(|| out.map(|p| p.with_extension("fit.csv")));
            match fit_path {
                Some(p) => write_file(&p, &fit)?,
                None => eprint!("{}", String::from_utf8_lossy(&fit)),
            }
            for r in records.iter().filter(|r| r.status() == "violation") {
                eprintln!(
                    "warning: n={} p={} measured error {:e} exceeds eps {:e}",
                    r.n,
                    r.p,
                    r.measured_error.unwrap_or(f64::NAN),
                    r.eps
                );
            }
            Ok(())
        }
        Command::Evolve {
            n,
            t,
            eps,
            order,
            frames,
            profile,
            speed,
            grid_step,
            init,
            out,
        } => {
            let speed = match profile {
                Some(p) => SpeedProfile::Samples(waveapp::parse_samples(&read_file(&p)?)?),
                None => SpeedProfile::parse(&speed)?,
            };
            let cfg = EvolveConfig {
                n,
                t,
                eps,
                order,
                frames,
                speed,
                grid: grid_step.parse()?,
                trotter_constant: cli.trotter_constant,
            };
            let rows = run_evolve(&cfg, &InitialCondition::parse(&init)?).inspect_err(|e| {
                if e.exit_code() == 3 {
                    eprintln!("hint: dense evolution needs n + 1 qubits; lower --n");
                }
            })?;
            let mut csv = Vec::new();
            write_evolve_csv(&rows, &mut csv)?;
            emit(out.as_deref(), csv)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
