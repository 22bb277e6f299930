use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zfcov::experiments::{format_g9, run_sweep, verdict, write_csv, Status, SweepSpec};
use zfcov::montecarlo::GainModel;
use zfcov::registry::CoverageRegistry;
use zfcov::{energy_report, simulate_coverage, simulate_energy, Error, NetworkParams, SimConfig};

/// Environment variable holding the worker thread count.
const THREADS_VAR: &str = "ZFCOV_THREADS";

#[derive(Parser)]
#[command(name = "zfcov", version, about = "Coverage and energy efficiency of ZF multi-user cellular networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SimArgs {
    /// Monte Carlo trials
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// gamma | zf
    #[arg(long, default_value = "gamma")]
    gain_model: String,
    /// Simulation disk radius in km (chosen automatically if omitted)
    #[arg(long)]
    window_radius: Option<f64>,
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
}

impl SimArgs {
    fn config(&self) -> Result<SimConfig, Error> {
        let sim = SimConfig {
            trials: self.trials,
            window_radius: self.window_radius,
            seed: self.seed,
            gain_model: self.gain_model.parse::<GainModel>()?,
            confidence_level: self.confidence,
            tail_compensation: true,
        };
        sim.validate()?;
        Ok(sim)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Coverage probability at the configured threshold
    Coverage {
        #[arg(long)]
        config: PathBuf,
        /// Estimate by simulation instead of the analytic formula
        #[arg(long)]
        mc: bool,
        /// Evaluator by name (analytic, erlang-oracle, mc-gamma, mc-zf)
        #[arg(long, conflicts_with = "mc")]
        method: Option<String>,
        /// Drop the thermal-noise term
        #[arg(long)]
        no_noise: bool,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Rate, area spectral efficiency, consumption and energy efficiency
    Ee {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        mc: bool,
        #[arg(long)]
        no_noise: bool,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Run a parameter sweep and write it as CSV
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo coverage estimate with its confidence half-width
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Coverage and EE argmax over BS densities at fixed antenna density
    Verdict {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
        densities: Vec<f64>,
    },
    /// Run the built-in oracle suite
    Validate,
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn load(path: &PathBuf, no_noise: bool) -> Result<NetworkParams, Error> {
    let mut p = NetworkParams::from_file(path)?;
    if no_noise {
        p.interference_limited = true;
    }
    Ok(p)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Config(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Coverage {
            config,
            mc,
            method,
            no_noise,
            sim,
        } => {
            let params = load(&config, no_noise)?;
            let sim = sim.config()?;
            let registry = CoverageRegistry::with_defaults(sim);
            let name = match method {
                Some(m) => m,
                None if mc => format!("mc-{}", sim.gain_model),
                None => "analytic".to_string(),
            };
            let est = registry.get(&name)?.evaluate(&params)?;
            writeln!(out, "coverage {} ± {} ({name})", format_g9(est.value), format_g9(est.error))?;
        }
        Command::Ee {
            config,
            mc,
            no_noise,
            sim,
        } => {
            let params = load(&config, no_noise)?;
            let r = if mc {
                simulate_energy(&params, &sim.config()?)?
            } else {
                energy_report(&params)?
            };
            writeln!(out, "coverage {}", format_g9(r.coverage))?;
            writeln!(out, "avg_rate {}", format_g9(r.avg_rate))?;
            writeln!(out, "ase {}", format_g9(r.ase))?;
            writeln!(out, "aec {}", format_g9(r.aec))?;
            writeln!(out, "ee {}", format_g9(r.ee))?;
        }
        Command::Sweep { spec, out: path } => {
            let spec = SweepSpec::from_file(&spec)?;
            let table = run_sweep(&spec)?;
            let file = File::create(&path)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            write_csv(&table, BufWriter::new(file))?;
            let failed = table.rows.iter().filter(|r| r.status == Status::Failed).count();
            writeln!(out, "wrote {} rows to {}", table.rows.len(), path.display())?;
            if failed > 0 {
                return Err(Failure::Numerical(format!("{failed} sweep points failed")));
            }
        }
        Command::Simulate { config, sim } => {
            let params = load(&config, false)?;
            let sim = sim.config()?;
            let o = simulate_coverage(&params, &sim)?;
            writeln!(out, "estimate {}", format_g9(o.estimate))?;
            writeln!(out, "half_width {}", format_g9(o.half_width))?;
            writeln!(out, "trials_used {}", o.trials_used)?;
            writeln!(out, "empty_resamples {}", o.empty_resamples)?;
            writeln!(out, "window_radius_km {}", format_g9(o.window_radius))?;
            writeln!(out, "gain_model {}", sim.gain_model)?;
        }
        Command::Verdict { config, densities } => {
            let params = load(&config, false)?;
            let v = verdict(&params, &densities)?;
            writeln!(out, "density,coverage,ee")?;
            for ((d, c), e) in v.densities.iter().zip(&v.coverage).zip(&v.ee) {
                let show = |x: &Option<f64>| x.map_or("infeasible".to_string(), format_g9);
                writeln!(out, "{},{},{}", format_g9(*d), show(c), show(e))?;
            }
            writeln!(out, "coverage_argmax {}", format_g9(v.coverage_argmax))?;
            writeln!(out, "ee_argmax {}", format_g9(v.ee_argmax))?;
            writeln!(out, "densest_wins {}", v.densest_wins)?;
            writeln!(out, "saturated {}", v.saturated)?;
        }
        Command::Validate => {
            let checks = zfcov::validation::run_all();
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{tag} {}: {}", c.name, c.detail)?;
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(Failure::Numerical(format!("{failed} validation checks failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
