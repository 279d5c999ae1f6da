use std::f64::consts::{FRAC_PI_2, PI};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anticipative::curves::{curve_rows, format_number, write_curves, SimulationSettings};
use anticipative::sim::{plan_experiment, sample_plan, write_records, BasisMode, NoiseModel, DEFAULT_SHOTS};
use anticipative::solver::{
    anticipative_success, build_auxiliary, certify_optimal, lambda_argmax, reduce_to_povm, theorem_measurement, Order,
};
use anticipative::task::{grid, TaskParams};
use anticipative::verify::{run_verification, VerifyOptions};
use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_BAD_CONFIG: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "anticipate", version, about = "Anticipative quantum measurements with classical posterior information")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analytic success curves for all six scenarios (optionally simulated)
    Curves {
        /// Add Monte Carlo estimates to every row
        #[arg(long)]
        simulate: bool,
    },
    /// Solve, certify and reduce the optimal anticipative measurement
    Solve {
        #[arg(long)]
        theta: f64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        k: u8,
    },
    /// Shot-level simulation; writes the curves CSV with empirical columns
    Simulate {
        /// Also dump every shot as CSV to this path
        #[arg(long)]
        dump_records: Option<PathBuf>,
        /// Pick the basis by a fair coin per shot instead of an equal split
        #[arg(long)]
        random_basis: bool,
    },
    /// Run the self-check suite; exit status 1 on any failure
    Verify {
        #[arg(long, hide = true)]
        tamper_normalization: Option<f64>,
    },
}

#[derive(Debug, Args)]
struct RunConfig {
    #[arg(long, global = true, default_value_t = PI / 50.0)]
    theta_min: f64,
    #[arg(long, global = true, default_value_t = FRAC_PI_2)]
    theta_max: f64,
    #[arg(long, global = true, default_value_t = 25)]
    points: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SHOTS)]
    shots: usize,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 0.0)]
    noise_depol: f64,
    #[arg(long, global = true, default_value_t = NoiseModel::DEVICE_READOUT)]
    noise_readout: f64,
    /// Output file; standard output when absent
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
}

impl RunConfig {
    fn thetas(&self) -> anyhow::Result<Vec<f64>> {
        if self.points == 0 {
            bail!("--points must be at least 1");
        }
        if !(self.theta_min > 0.0 && self.theta_min <= self.theta_max && self.theta_max <= FRAC_PI_2 + 1e-12) {
            bail!("θ grid [{}, {}] must lie in (0, π/2]", self.theta_min, self.theta_max);
        }
        Ok(grid(self.theta_min, self.theta_max, self.points))
    }

    fn noise(&self) -> anyhow::Result<NoiseModel> {
        Ok(NoiseModel::new(self.noise_depol, self.noise_readout)?)
    }

    fn validate(&self) -> anyhow::Result<()> {
        self.thetas()?;
        self.noise()?;
        if self.tol.is_nan() || self.tol <= 0.0 {
            bail!("--tol must be positive");
        }
        if self.shots == 0 {
            bail!("--shots must be at least 1");
        }
        Ok(())
    }

    fn sink(&self) -> anyhow::Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn solve(cfg: &RunConfig, theta: f64, k: usize) -> anyhow::Result<()> {
    let p = TaskParams::new(theta)?;
    let aux = build_auxiliary(theta, k)?;
    let (lambda, maximizers) = lambda_argmax(&aux);
    let ab = theorem_measurement(&p, k, Order::AB)?;
    let ba = theorem_measurement(&p, k, Order::BA)?;
    let certified = certify_optimal(&aux, &ab.measurement, cfg.tol) && certify_optimal(&aux, &ba.measurement, cfg.tol);
    let (povm, _) = reduce_to_povm(&aux, &ab, &ba, cfg.tol)?;

    let mut out = cfg.sink()?;
    let f = format_number;
    writeln!(out, "theta = {}", f(p.theta()))?;
    writeln!(out, "k = {k}")?;
    writeln!(out, "C = {}", f(aux.normalization()))?;
    writeln!(out, "Lambda = {}", f(lambda))?;
    writeln!(out, "2*C*Lambda = {}", f(anticipative_success(&aux)))?;
    writeln!(out, "outcome functions = {}", aux.len())?;
    writeln!(out, "maximizers = {}", maximizers.len())?;
    writeln!(out, "certified = {certified}")?;
    for (label, effect) in povm.effects() {
        let d = effect.bloch.scale(1.0 / effect.scalar);
        writeln!(out, "direction {label} = ({}, {}, {})", f(d.x()), f(d.y()), f(d.z()))?;
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let cfg = &cli.config;
    cfg.validate()?;
    match cli.command {
        Command::Curves { simulate } => {
            let sim = simulate.then(|| SimulationSettings {
                shots: cfg.shots,
                seed: cfg.seed,
                noise: cfg.noise().expect("validated"),
                basis_mode: BasisMode::EqualSplit,
            });
            let rows = curve_rows(&cfg.thetas()?, sim.as_ref())?;
            write_curves(&rows, cfg.sink()?)?;
        }
        Command::Solve { theta, k } => solve(cfg, theta, k as usize)?,
        Command::Simulate {
            dump_records,
            random_basis,
        } => {
            let mode = if random_basis { BasisMode::RandomPerShot } else { BasisMode::EqualSplit };
            let sim = SimulationSettings {
                shots: cfg.shots,
                seed: cfg.seed,
                noise: cfg.noise()?,
                basis_mode: mode,
            };
            let thetas = cfg.thetas()?;
            let rows = curve_rows(&thetas, Some(&sim))?;
            write_curves(&rows, cfg.sink()?)?;
            if let Some(path) = dump_records {
                let plan = plan_experiment(&thetas, cfg.shots, cfg.seed)?.with_basis_mode(mode);
                let records = sample_plan(&plan, &sim.noise)?;
                let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
                write_records(&records, BufWriter::new(file))?;
            }
        }
        Command::Verify { tamper_normalization } => {
            let report = run_verification(&VerifyOptions {
                tol: cfg.tol,
                thetas: cfg.thetas()?,
                tamper_normalization,
            });
            let mut out = cfg.sink()?;
            write!(out, "{report}")?;
            if report.passed() {
                writeln!(out, "verification passed")?;
            } else {
                writeln!(out, "verification FAILED: {}", report.failures().join(", "))?;
                out.flush()?;
                return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
            }
            out.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_BAD_CONFIG)
        }
    }
}
