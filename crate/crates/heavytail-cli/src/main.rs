//! Command-line front end: sample generation, pdf/cdf/cf evaluation tables,
//! identity-suite runs, and random-sum convergence experiments.
//!
//! Exit codes: 0 success / all tests passed, 1 statistical failure,
//! 2 usage or config error. Every command is a pure function of its
//! arguments and seed; re-runs produce byte-identical output files.

use clap::{Args, Parser, Subcommand};
use heavytail::linnik::LinnikMethod;
use heavytail::mittag_leffler::MlMethod;
use heavytail::randsum::{run_randsum_experiment, RandSumConfig};
use heavytail::spec::{DistributionSpec, EvalFunction, SampleBatch};
use heavytail::suite::{run_identity_suite, IdentityCase, IdentityId, SuiteConfig, DEFAULT_N};
use heavytail::stattest::DEFAULT_LEVEL;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "heavytail",
    about = "Samplers, evaluators and statistical tests for the Linnik, Mittag-Leffler, stable and Weibull families",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a reproducible sample and write it as CSV (header names the
    /// distribution; one value per line).
    Sample {
        #[command(flatten)]
        family: FamilyArgs,
        /// Number of draws.
        #[arg(long)]
        n: usize,
        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate pdf/cdf/cf/laplace on a grid and write (x, value) CSV rows.
    Eval {
        #[command(flatten)]
        family: FamilyArgs,
        /// One of: pdf, cdf, cf, laplace.
        #[arg(long)]
        function: String,
        /// Grid as start:stop:step.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run distributional identity tests; JSON-lines reports.
    Identity {
        /// Run the whole default suite.
        #[arg(long, conflicts_with = "id")]
        all: bool,
        /// Run a single identity by id (use --list to see ids).
        #[arg(long)]
        id: Option<String>,
        /// List known identity ids and exit.
        #[arg(long)]
        list: bool,
        /// Sample size per test.
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
        /// Per-test significance level.
        #[arg(long, default_value_t = DEFAULT_LEVEL)]
        level: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        params: IdentityParams,
        /// Report file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a random-sum convergence experiment from a config file; writes
    /// <out>.json and <out>.csv.
    Randsum {
        /// Path to a key=value config file.
        #[arg(long)]
        config: PathBuf,
        /// Output basename.
        #[arg(long, default_value = "randsum_report")]
        out: String,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// Distribution family: normal, exponential, weibull, laplace,
    /// stable_sym, stable_pos, mittag_leffler, linnik, k_rho, q,
    /// ratio_stable, rademacher.
    #[arg(long)]
    family: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    alpha_prime: Option<f64>,
    #[arg(long)]
    alpha0: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Sampler method for mittag_leffler (stable_weibull, k_exponential,
    /// stable_ratio) and linnik (normal_ml, stable_weibull, laplace_q,
    /// general_product).
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args)]
struct IdentityParams {
    #[arg(long = "alpha")]
    alpha: Option<f64>,
    #[arg(long = "alpha-prime")]
    alpha_prime: Option<f64>,
    #[arg(long = "alpha0")]
    alpha0: Option<f64>,
    #[arg(long = "gamma")]
    gamma: Option<f64>,
    #[arg(long = "gamma-prime")]
    gamma_prime: Option<f64>,
    #[arg(long = "delta")]
    delta: Option<f64>,
    #[arg(long = "delta-prime")]
    delta_prime: Option<f64>,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

impl FamilyArgs {
    fn build(&self) -> Result<DistributionSpec, String> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| format!("family '{}' needs --{name}", self.family))
        };
        let spec = match self.family.as_str() {
            "normal" => DistributionSpec::Normal,
            "exponential" => DistributionSpec::Exponential,
            "weibull" => DistributionSpec::Weibull { gamma: need(self.gamma, "gamma")? },
            "laplace" => DistributionSpec::Laplace,
            "stable_sym" => DistributionSpec::StableSym { alpha: need(self.alpha, "alpha")? },
            "stable_pos" => DistributionSpec::StablePos { alpha: need(self.alpha, "alpha")? },
            "mittag_leffler" => {
                let method = match self.method.as_deref() {
                    None => MlMethod::StableWeibull,
                    Some(m) => MlMethod::parse(m)
                        .ok_or_else(|| format!("unknown mittag_leffler method '{m}'"))?,
                };
                DistributionSpec::MittagLeffler { delta: need(self.delta, "delta")?, method }
            }
            "linnik" => {
                let method = match self.method.as_deref() {
                    None | Some("normal_ml") => LinnikMethod::NormalMl,
                    Some("stable_weibull") => LinnikMethod::StableWeibull,
                    Some("laplace_q") => LinnikMethod::LaplaceQ,
                    Some("general_product") => LinnikMethod::GeneralProduct {
                        alpha0: need(self.alpha0, "alpha0")?,
                        alpha_prime: need(self.alpha_prime, "alpha-prime")?,
                    },
                    Some(m) => return Err(format!("unknown linnik method '{m}'")),
                };
                DistributionSpec::Linnik { alpha: need(self.alpha, "alpha")?, method }
            }
            "k_rho" => DistributionSpec::KRho { rho: need(self.rho, "rho")? },
            "q" => DistributionSpec::Q {
                alpha: need(self.alpha, "alpha")?,
                alpha_prime: need(self.alpha_prime, "alpha-prime")?,
            },
            "ratio_stable" => DistributionSpec::RatioStable { alpha: need(self.alpha, "alpha")? },
            "rademacher" => DistributionSpec::Rademacher,
            other => return Err(format!("unknown family '{other}'")),
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

fn parse_grid(grid: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be start:stop:step, got '{grid}'"));
    }
    let start: f64 = parts[0].parse().map_err(|_| format!("bad grid start '{}'", parts[0]))?;
    let stop: f64 = parts[1].parse().map_err(|_| format!("bad grid stop '{}'", parts[1]))?;
    let step: f64 = parts[2].parse().map_err(|_| format!("bad grid step '{}'", parts[2]))?;
    if !(step > 0.0) || stop < start {
        return Err("grid needs stop >= start and step > 0".into());
    }
    let count = ((stop - start) / step).round() as usize;
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

fn write_output(path: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}

fn init_threads() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var("HEAVYTAIL_THREADS") {
            if let Ok(k) = v.parse::<usize>() {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
}

fn identity_param_vector(id: IdentityId, params: &IdentityParams) -> Result<Vec<f64>, String> {
    let lookup = |name: &str| -> Option<f64> {
        match name {
            "alpha" => params.alpha,
            "alpha_prime" => params.alpha_prime,
            "alpha0" => params.alpha0,
            "gamma" => params.gamma,
            "gamma_prime" => params.gamma_prime,
            "delta" => params.delta,
            "delta_prime" => params.delta_prime,
            _ => None,
        }
    };
    let names = id.param_names();
    let given: Vec<Option<f64>> = names.iter().map(|n| lookup(n)).collect();
    if given.iter().all(|v| v.is_none()) {
        return Ok(vec![]); // default grid
    }
    if given.iter().any(|v| v.is_none()) {
        return Err(format!(
            "identity '{}' needs all of: {}",
            id.key(),
            names
                .iter()
                .map(|n| format!("--{}", n.replace('_', "-")))
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    Ok(given.into_iter().map(|v| v.unwrap()).collect())
}

fn list_identities() -> String {
    let mut out = String::new();
    for &id in IdentityId::all() {
        let params = id.param_names().join(", ");
        let alias = id.alias().map(|a| format!(" (alias: {a})")).unwrap_or_default();
        out.push_str(&format!("{}{} [{}]\n", id.key(), alias, params));
    }
    out.push_str("negative-control []\n");
    out
}

fn run() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match cli.command {
        Command::Sample { family, n, seed, out } => {
            let spec = match family.build() {
                Ok(s) => s,
                Err(e) => return usage_error(&e),
            };
            let batch = match SampleBatch::generate(spec, n, seed) {
                Ok(b) => b,
                Err(e) => return usage_error(&e.to_string()),
            };
            let mut content = format!("{}\n", batch.spec);
            for v in &batch.values {
                content.push_str(&format!("{v}\n"));
            }
            if let Err(e) = write_output(&out, &content) {
                return usage_error(&e.to_string());
            }
            ExitCode::SUCCESS
        }
        Command::Eval { family, function, grid, out } => {
            let spec = match family.build() {
                Ok(s) => s,
                Err(e) => return usage_error(&e),
            };
            let function = match EvalFunction::parse(&function) {
                Some(f) => f,
                None => return usage_error(&format!("unknown function '{function}'")),
            };
            let xs = match parse_grid(&grid) {
                Ok(g) => g,
                Err(e) => return usage_error(&e),
            };
            let mut content = format!("x,{}.{}\n", spec, function.key());
            for x in xs {
                match spec.eval(function, x) {
                    Ok(v) => content.push_str(&format!("{x},{v}\n")),
                    Err(e) => return usage_error(&e.to_string()),
                }
            }
            if let Err(e) = write_output(&out, &content) {
                return usage_error(&e.to_string());
            }
            ExitCode::SUCCESS
        }
        Command::Identity { all, id, list, n, level, seed, params, out } => {
            if list {
                print!("{}", list_identities());
                return ExitCode::SUCCESS;
            }
            let cfg = if all {
                let mut cfg = SuiteConfig::all(seed);
                cfg.n = n;
                cfg.level = level;
                cfg
            } else if let Some(id_str) = id {
                let id = match IdentityId::parse(&id_str) {
                    Some(i) => i,
                    None => {
                        eprintln!("error: unknown identity '{id_str}'; valid ids:");
                        eprint!("{}", list_identities());
                        return ExitCode::from(2);
                    }
                };
                let param_vec = match identity_param_vector(id, &params) {
                    Ok(v) => v,
                    Err(e) => return usage_error(&e),
                };
                let mut cfg = if param_vec.is_empty() {
                    let cases = id
                        .default_grid()
                        .into_iter()
                        .map(|p| IdentityCase::new(id, p))
                        .collect();
                    SuiteConfig { n, level, seed, cases }
                } else {
                    SuiteConfig::single(id, param_vec, seed)
                };
                cfg.n = n;
                cfg.level = level;
                cfg
            } else {
                return usage_error("identity needs --all, --id or --list");
            };
            let outcome = match run_identity_suite(&cfg) {
                Ok(o) => o,
                Err(e) => return usage_error(&e.to_string()),
            };
            let mut content = Vec::new();
            if heavytail::suite::write_reports_jsonl(&outcome.reports, &mut content).is_err() {
                return usage_error("failed to serialize reports");
            }
            let text = String::from_utf8(content).expect("json is utf8");
            if let Err(e) = write_output(&out, &text) {
                return usage_error(&e.to_string());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Randsum { config, out } => {
            let cfg = match RandSumConfig::from_file(&config) {
                Ok(c) => c,
                Err(e) => return usage_error(&e.to_string()),
            };
            let report = match run_randsum_experiment(&cfg) {
                Ok(r) => r,
                Err(e) => return usage_error(&e.to_string()),
            };
            let json_path = format!("{out}.json");
            let csv_path = format!("{out}.csv");
            if let Err(e) = std::fs::write(&json_path, report.to_json()) {
                return usage_error(&e.to_string());
            }
            if let Err(e) = std::fs::write(&csv_path, report.to_csv()) {
                return usage_error(&e.to_string());
            }
            println!("wrote {json_path} and {csv_path}");
            if report.final_level_passes(DEFAULT_LEVEL) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn main() -> ExitCode {
    run()
}
