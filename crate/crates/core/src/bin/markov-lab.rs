//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or config error,
//! 3 numerical capacity or conditioning error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use markov_lab::analysis::{fit_extremal, fit_factors, sweep_extremal, sweep_factor, verify_all, ExtremalSweep, SweepConfig};
use markov_lab::config::LabConfig;
use markov_lab::domains::{quad_rule_capped, Domain};
use markov_lab::output::{extremal_csv, factor_csv, fmt_display12, RunManifest};
use markov_lab::{Axis, FamilyKind, FitResult, LabError, PNorm};

#[derive(Parser)]
#[command(name = "markov-lab", version, about = "Markov factors on Koornwinder's domain, the weighted simplex and Delta_l")]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized checks; ignored by deterministic commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON config file (defaults are embedded).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Omega,
    SimplexWeighted,
    DeltaL,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    X,
    Y,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Pk,
    Qk,
    Wn,
}

#[derive(Subcommand)]
enum Command {
    /// Print the measure of a domain from its quadrature rule.
    Area {
        #[arg(long, value_enum)]
        domain: DomainArg,
        #[arg(long, default_value_t = 3)]
        l: u32,
        #[arg(long, default_value_t = 0)]
        exactness: usize,
    },
    /// Lower-bound ratios along an extremal sequence, as CSV.
    Extremal {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Index range `a:b`, inclusive.
        #[arg(long)]
        range: String,
        /// Norm index: a number >= 1 or `inf`.
        #[arg(long, default_value = "inf")]
        p: String,
        #[arg(long, default_value_t = 14.0)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        l: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// L2 Markov factors for a range of degrees, as CSV.
    Factor {
        #[arg(long, value_enum)]
        domain: DomainArg,
        #[arg(long, value_enum)]
        axis: AxisArg,
        #[arg(long, default_value_t = 3)]
        l: u32,
        /// Degree range `a:b`, inclusive.
        #[arg(long)]
        n: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite; exit 0 iff every criterion passes.
    Verify {
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Configuration helpers.
    Config {
        /// Print the embedded default config.
        #[arg(long)]
        print_default: bool,
    },
}

enum Failure {
    Usage(String),
    Verification,
    Numerical(String),
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        if e.is_numerical_limit() {
            Failure::Numerical(e.to_string())
        } else {
            match e {
                LabError::Io(_) | LabError::Json(_) | LabError::Config(_) | LabError::Domain(_) => Failure::Usage(e.to_string()),
                other => Failure::Numerical(other.to_string()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn domain_of(d: DomainArg, l: u32) -> Result<Domain, Failure> {
    Ok(match d {
        DomainArg::Omega => Domain::Koornwinder,
        DomainArg::SimplexWeighted => Domain::SimplexWeighted,
        DomainArg::DeltaL => Domain::delta_l(l)?,
    })
}

fn parse_range(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("range '{s}' must look like a:b with a <= b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn warn_seed(cli_seed: Option<u64>, command: &str) {
    if cli_seed.is_some() {
        eprintln!("warning: '{command}' is deterministic; --seed is ignored");
    }
}

/// Fit for the footer; too few points is reported, not fatal.
fn footer_fit(fit: markov_lab::Result<FitResult>) -> Option<FitResult> {
    match fit {
        Ok(f) => Some(f),
        Err(e) => {
            eprintln!("note: no exponent fit: {e}");
            None
        }
    }
}

fn emit(out: Option<&Path>, text: &str, command: &str, params: BTreeMap<String, String>, cfg: &LabConfig) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let config = serde_json::to_value(cfg).map_err(LabError::from)?;
            let mut manifest = RunManifest::new(command, params, config);
            manifest.write_output(path, text.as_bytes())?;
            manifest.save(&RunManifest::path_for(path))?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    }
    let mut cfg = match &cli.config {
        Some(path) => LabConfig::load(path)?,
        None => LabConfig::default(),
    };
    match cli.command {
        Command::Config { print_default } => {
            if !print_default {
                return Err(Failure::Usage("config: nothing to do (try --print-default)".into()));
            }
            println!("{}", LabConfig::default().to_json_pretty());
        }
        Command::Area { domain, l, exactness } => {
            warn_seed(cli.seed, "area");
            let d = domain_of(domain, l)?;
            let rule = quad_rule_capped(d, exactness + cfg.quadrature.exactness_margin, cfg.quadrature.max_nodes)?;
            println!("{}", fmt_display12(rule.total_weight()));
        }
        Command::Extremal { family, range, p, alpha, l, out } => {
            warn_seed(cli.seed, "extremal");
            let kind = match family {
                FamilyArg::Pk => FamilyKind::Pk,
                FamilyArg::Qk => FamilyKind::Qk,
                FamilyArg::Wn => FamilyKind::Wn,
            };
            let p: PNorm = p.parse().map_err(|e: LabError| Failure::Usage(e.to_string()))?;
            let sweep = ExtremalSweep::new(kind, parse_range(&range)?, p).with_wn(alpha, l);
            let rows = sweep_extremal(&sweep, &cfg.norm_options())?;
            let fit = footer_fit(fit_extremal(&rows));
            let params = BTreeMap::from([
                ("family".to_string(), format!("{kind:?}").to_lowercase()),
                ("range".to_string(), range),
                ("p".to_string(), p.to_string()),
                ("alpha".to_string(), alpha.to_string()),
                ("l".to_string(), l.to_string()),
            ]);
            emit(out.as_deref(), &extremal_csv(&rows, fit.as_ref()), "extremal", params, &cfg)?;
        }
        Command::Factor { domain, axis, l, n, out } => {
            warn_seed(cli.seed, "factor");
            let d = domain_of(domain, l)?;
            let axis = match axis {
                AxisArg::X => Axis::X,
                AxisArg::Y => Axis::Y,
            };
            let sweep = SweepConfig::new(d, axis, parse_range(&n)?)?;
            let params = BTreeMap::from([
                ("domain".to_string(), d.to_string()),
                ("axis".to_string(), axis.to_string()),
                ("n".to_string(), n),
            ]);
            match sweep_factor(&sweep) {
                Ok(points) => {
                    let fit = footer_fit(fit_factors(&points));
                    emit(out.as_deref(), &factor_csv(&points, fit.as_ref()), "factor", params, &cfg)?;
                }
                Err(LabError::SweepAborted { completed, source }) => {
                    emit(out.as_deref(), &factor_csv(&completed, None), "factor", params, &cfg)?;
                    let last = completed.last().map_or("none".to_string(), |p| p.n.to_string());
                    let e: Failure = (*source).into();
                    let msg = match e {
                        Failure::Numerical(m) | Failure::Usage(m) => m,
                        Failure::Verification => String::new(),
                    };
                    return Err(Failure::Numerical(format!("sweep aborted; largest completed n = {last}: {msg}")));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Verify { json } => {
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let report = verify_all(&cfg);
            for c in &report.criteria {
                let status = if c.pass { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    println!("[{status}] {:>2} {}", c.id, c.name);
                } else {
                    println!("[{status}] {:>2} {}: {}", c.id, c.name, c.detail);
                }
            }
            if let Some(path) = json {
                let params = BTreeMap::from([("seed".to_string(), cfg.seed.to_string())]);
                emit(Some(&path), &report.to_json(), "verify", params, &cfg)?;
            }
            if !report.all_pass {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}
