//! Command-line driver for the experiment suites.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fclab::experiments::{exit_code, run_experiment, write_outputs, EpsGrid, ExperimentConfig};
use fclab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "fclab",
    version,
    about = "Numerical experiments for functional-calculus norm bounds of sectorial operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exponential-integral envelope and log-comparison checks
    Ei(RunArgs),
    /// Alternating Schauder-multiplier sharpness sweep (two-sided weight)
    Sharpness(RunArgs),
    /// Invertible-model dominance and exponential-decay sweep
    Expstab(RunArgs),
    /// Square-function suite (pure weight, Besselian dual side)
    Sqf(RunArgs),
    /// Constant-comparison tables over an M-grid
    Vitse(RunArgs),
    /// Contour-quadrature oracle battery
    Quadcheck(RunArgs),
    /// Every suite in sequence
    All(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat key=value config file; command-line flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Lacunary ratio of the diagonal family
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    eps_count: Option<usize>,
    /// Basis truncation override (0 = automatic)
    #[arg(long)]
    n_basis: Option<usize>,
    /// Grid panel hint (0 = automatic)
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV files
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Also emit a gnuplot script next to each CSV
    #[arg(long)]
    emit_plot_script: bool,
}

fn parse_config_file(path: &PathBuf) -> Result<std::collections::BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = std::collections::BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "{}:{}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut eps_min: Option<f64> = None;
    let mut eps_max: Option<f64> = None;
    let mut eps_count: Option<usize> = None;

    if let Some(path) = &args.config {
        let map = parse_config_file(path)?;
        let get_f = |k: &str| -> Result<Option<f64>> {
            map.get(k)
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad float for {k}: '{v}'")))
                })
                .transpose()
        };
        let get_u = |k: &str| -> Result<Option<u64>> {
            map.get(k)
                .map(|v| {
                    v.parse::<u64>()
                        .map_err(|_| Error::Config(format!("bad integer for {k}: '{v}'")))
                })
                .transpose()
        };
        if let Some(v) = get_f("delta")? {
            cfg.delta = v;
        }
        if let Some(v) = get_f("beta")? {
            cfg.beta = Some(v);
        }
        if let Some(v) = get_f("c")? {
            cfg.c = v;
        }
        if let Some(v) = get_f("phi")? {
            cfg.phi = v;
        }
        if let Some(v) = get_f("kappa")? {
            cfg.kappa = v;
        }
        eps_min = get_f("eps_min")?;
        eps_max = get_f("eps_max")?;
        eps_count = get_u("eps_count")?.map(|v| v as usize);
        if let Some(v) = get_u("n_basis")? {
            cfg.n_basis = v as usize;
        }
        if let Some(v) = get_u("grid")? {
            cfg.grid = v as usize;
        }
        if let Some(v) = get_u("seed")? {
            cfg.seed = v;
        }
        if let Some(v) = map.get("out") {
            cfg.out_dir = PathBuf::from(v);
        }
        if let Some(v) = map.get("emit_plot_script") {
            cfg.emit_plot_script = v == "true" || v == "1";
        }
        for key in map.keys() {
            const KNOWN: &[&str] = &[
                "delta", "beta", "c", "phi", "kappa", "eps_min", "eps_max", "eps_count",
                "n_basis", "grid", "seed", "out", "emit_plot_script",
            ];
            if !KNOWN.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown config key '{key}'")));
            }
        }
    }

    if let Some(v) = args.delta {
        cfg.delta = v;
    }
    if let Some(v) = args.beta {
        cfg.beta = Some(v);
    }
    if let Some(v) = args.c {
        cfg.c = v;
    }
    if let Some(v) = args.phi {
        cfg.phi = v;
    }
    if let Some(v) = args.kappa {
        cfg.kappa = v;
    }
    if args.eps_min.is_some() {
        eps_min = args.eps_min;
    }
    if args.eps_max.is_some() {
        eps_max = args.eps_max;
    }
    if args.eps_count.is_some() {
        eps_count = args.eps_count;
    }
    if let Some(v) = args.n_basis {
        cfg.n_basis = v;
    }
    if let Some(v) = args.grid {
        cfg.grid = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = &args.out {
        cfg.out_dir = v.clone();
    }
    if args.emit_plot_script {
        cfg.emit_plot_script = true;
    }

    cfg.eps = match (eps_min, eps_max, eps_count) {
        (None, None, None) => None,
        (Some(lo), Some(hi), Some(n)) => Some(EpsGrid::new(lo, hi, n)?),
        _ => {
            return Err(Error::Config(
                "eps grid needs all of eps-min, eps-max, eps-count (or none)".into(),
            ))
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

fn run(names: &[&str], cfg: &ExperimentConfig) -> Result<i32> {
    let mut results = Vec::new();
    for name in names {
        let result = run_experiment(name, cfg)?;
        let csv = write_outputs(cfg, &result)?;
        for v in &result.verdicts {
            println!(
                "[{}] {}::{} — {}",
                if v.pass { "PASS" } else { "FAIL" },
                result.name,
                v.name,
                v.detail
            );
        }
        for f in &result.fits {
            println!(
                "  fit {}::{}: slope {:.6} (stderr {:.2e}, n = {})",
                result.name, f.name, f.fit.slope, f.fit.stderr, f.fit.n
            );
        }
        if result.unstable {
            println!("[UNSTABLE] {}: truncation/discretization drift ≥ 1%", result.name);
        }
        println!("  wrote {}", csv.display());
        results.push(result);
    }
    Ok(exit_code(&results))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (names, args): (Vec<&str>, &RunArgs) = match &cli.command {
        Command::Ei(a) => (vec!["ei"], a),
        Command::Sharpness(a) => (vec!["sharpness"], a),
        Command::Expstab(a) => (vec!["expstab"], a),
        Command::Sqf(a) => (vec!["sqf"], a),
        Command::Vitse(a) => (vec!["vitse"], a),
        Command::Quadcheck(a) => (vec!["quadcheck"], a),
        Command::All(a) => (
            vec!["ei", "quadcheck", "vitse", "expstab", "sharpness", "sqf"],
            a,
        ),
    };
    let cfg = match build_config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(3);
        }
    };
    match run(&names, &cfg) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Error::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
