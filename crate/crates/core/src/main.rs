use clap::{Parser, Subcommand};
use ptgauss::coeffs::Model;
use ptgauss::dynamics::sink_diagnostics;
use ptgauss::error::{Error, Result};
use ptgauss::io::{finite, fmt_num, write_atomic};
use ptgauss::model::{ModelParams, DEFAULT_EP_TOL};
use ptgauss::oracle::{run_verification, OracleConfig, Tolerances, DEFAULT_SEED};
use ptgauss::sweep::{evolve, evolve_csv, evolve_json, run_sweep, Format, SweepConfig};
use ptgauss::witnesses::period;
use std::path::PathBuf;
use std::process::ExitCode;

/// Gaussian-state dynamics of two PT-symmetric coupled bosonic modes.
///
/// All rates are in units of ε: pass κ/ε and γ/ε, times as εt.
#[derive(Parser)]
#[command(name = "ptgauss", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time series of coefficients and witnesses at one parameter point.
    Evolve {
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value = "full")]
        model: String,
        #[arg(long = "t-max", default_value_t = 20.0)]
        t_max: f64,
        #[arg(long, default_value_t = 201)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Evaluate a quantity on a (κ/ε, γ/ε) grid.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        quantity: Option<String>,
        #[arg(long = "grid-n")]
        grid_n: Option<usize>,
        /// Evaluate at this fraction of the period instead of maximizing.
        #[arg(long = "time-frac", conflicts_with = "eps_t")]
        time_frac: Option<f64>,
        /// Evaluate at this fixed εt instead of maximizing.
        #[arg(long = "eps-t")]
        eps_t: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Eigenvalues and strength of the tailored sink reservoir.
    Sink {
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Compare the fast paths against brute-force oracles.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Override every check tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep_config(cmd: &Command) -> Result<SweepConfig> {
    let Command::Sweep { config, model, quantity, grid_n, time_frac, eps_t, out, format, seed, threads } = cmd else {
        unreachable!("called with the sweep command")
    };
    let mut cfg = SweepConfig::default();
    if let Some(path) = config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_kv(&text)?;
    }
    let overrides = [
        ("model", model.clone()),
        ("quantity", quantity.clone()),
        ("grid_n", grid_n.map(|n| n.to_string())),
        ("time_frac", time_frac.map(|f| f.to_string())),
        ("eps_t", eps_t.map(|t| t.to_string())),
        ("format", format.clone()),
        ("seed", seed.map(|s| s.to_string())),
        ("threads", threads.map(|n| n.to_string())),
    ];
    for (k, v) in overrides {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    if let Some(p) = out {
        cfg.output_path = Some(p.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Returns whether the command succeeded in the verification sense.
fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Evolve { kappa, gamma, model, t_max, steps, out, format } => {
            let params = ModelParams::dimensionless(*kappa, *gamma)?;
            let model: Model = model.parse()?;
            let format: Format = format.parse()?;
            let rows = evolve(&params, model, *t_max, *steps)?;
            let text = match format {
                Format::Csv => evolve_csv(&rows),
                Format::Json => evolve_json(&rows, &params, model),
            };
            emit(out.as_ref(), &text)?;
        }
        cmd @ Command::Sweep { .. } => {
            let cfg = sweep_config(cmd)?;
            let result = run_sweep(&cfg)?;
            emit(cfg.output_path.as_ref(), &result.render())?;
        }
        Command::Sink { kappa, gamma, out, format } => {
            let params = ModelParams::dimensionless(*kappa, *gamma)?;
            let format: Format = format.parse()?;
            let d = sink_diagnostics(&params, DEFAULT_EP_TOL)?;
            let tp = period(&params)?;
            let text = match format {
                Format::Csv => {
                    let nums = [*kappa, *gamma, params.mu_sq(), d.nu_plus, d.nu_minus, d.lambda, d.lambda_from_eigenvalues(), tp];
                    let fields: Vec<String> = nums.iter().map(|x| fmt_num(*x)).collect();
                    format!(
                        "kappa_over_eps,gamma_over_eps,mu_sq,nu_plus,nu_minus,lambda,lambda_from_eigenvalues,period\n{}\n",
                        fields.join(",")
                    )
                }
                Format::Json => {
                    let v = serde_json::json!({
                        "kappa_over_eps": kappa,
                        "gamma_over_eps": gamma,
                        "mu_sq": params.mu_sq(),
                        "nu_plus": d.nu_plus,
                        "nu_minus": d.nu_minus,
                        "lambda": finite(d.lambda),
                        "lambda_from_eigenvalues": finite(d.lambda_from_eigenvalues()),
                        "period": tp,
                    });
                    serde_json::to_string_pretty(&v).expect("plain data serializes") + "\n"
                }
            };
            emit(out.as_ref(), &text)?;
        }
        Command::Verify { seed, tolerance, out } => {
            let mut cfg = OracleConfig { seed: *seed, ..Default::default() };
            if let Some(t) = tolerance {
                cfg.tolerances = Tolerances::uniform(*t);
            }
            let report = run_verification(&cfg)?;
            emit(out.as_ref(), &format!("{report}\n"))?;
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_regime_error() { 3 } else { 2 })
        }
    }
}
