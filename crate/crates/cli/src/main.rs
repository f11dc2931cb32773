//! `quintic-kdv`: runs experiments, post-processes run directories and
//! verifies them.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or configuration error,
//! 3 numerical abort or unreadable data.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use qkdv::asymptotics::{phase_strength, scattering_limit, self_similar_extract, ScatteringOptions, SelfSimilarOptions};
use qkdv::diagnostics::extract_profile;
use qkdv::linear::{dispersive_envelope_check, stationary_phase_error_fit, EnvelopeOptions, QuadratureOptions};
use qkdv::orchestrator::{self as orch, CheckRow, ExperimentConfig, ENV_PREFIX};
use qkdv::resonance::{
    coefficient_oracle, derive_resonance_coefficients, exact_catalog, find_stationary_points, ExactCatalogJson, Normalization,
    SaddleOptions, SearchOptions,
};
use qkdv::{Error, Profile, Rational};

#[derive(Parser)]
#[command(name = "quintic-kdv", version, about = "Long-time numerics for the defocusing quintic fifth-order KdV equation")]
struct Cli {
    /// Experiment configuration (JSON). Defaults to the reference run.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override a configuration field, e.g. `--set t_end=50`. Applied after
    /// `QKDV_*` environment variables.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    Bare,
    Equation,
}

impl From<Norm> for Normalization {
    fn from(n: Norm) -> Self {
        match n {
            Norm::Bare => Normalization::Bare,
            Norm::Equation => Normalization::Equation,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment and write snapshots, reports and a manifest.
    Simulate {
        /// Also compute the full acceptance table.
        #[arg(long)]
        acceptance: bool,
    },
    /// Linear decay study for Gaussian data, against the quadrature oracle.
    Propagate {
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 31.6, 100.0, 316.0, 1000.0, 3162.0, 10000.0])]
        times: Vec<f64>,
        /// Derivative order for the envelope.
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Stationary points of the interaction phase and the resonance coefficients.
    Resonance {
        /// Output frequency, an integer or a fraction like `3/2`.
        #[arg(long, default_value = "1")]
        xi: String,
        #[arg(long, value_enum, default_value_t = Norm::Equation)]
        normalization: Norm,
        /// Also evaluate the coefficient quadrature at this λ.
        #[arg(long)]
        oracle: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Scattering limit of a finished run's profiles.
    Scatter {
        #[arg(long, value_name = "DIR")]
        run: PathBuf,
        /// Frequency band, `lo,hi`. Defaults to the run's configured band, else everything.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        band: Option<Vec<f64>>,
        /// Use snapshots from this time on.
        #[arg(long)]
        from: Option<f64>,
    },
    /// Self-similar profile of a finished run.
    Selfsim {
        #[arg(long, value_name = "DIR")]
        run: PathBuf,
        #[arg(long)]
        from: Option<f64>,
    },
    /// Check a run directory's files and recompute its check table.
    Verify {
        #[arg(long, value_name = "DIR")]
        run: PathBuf,
    },
}

/// Maps library errors onto exit codes.
struct Failure(Error);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(e.into())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self.0 {
            Error::Config(_) | Error::InvalidInput(_) | Error::InvalidGrid(_) | Error::OutOfRegion(_) => 2,
            _ => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.0);
            ExitCode::from(f.code())
        }
    }
}

/// Configuration from the file (or the reference run), then the
/// environment, then command-line flags.
fn configuration(cli: &Cli) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::reference(),
    };
    cfg.apply_env(std::env::vars().filter(|(k, _)| k.starts_with(ENV_PREFIX)))?;
    for o in &cli.overrides {
        let (k, v) = o.split_once('=').ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got {o:?}")))?;
        cfg.set(k, v)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

fn print_rows(rows: &[CheckRow]) {
    for r in rows {
        println!("{}", r.line());
    }
}

fn execute(cli: Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Simulate { acceptance } => {
            let mut cfg = configuration(&cli)?;
            cfg.diagnostics.acceptance |= *acceptance;
            let dir = orch::output_dir(&cfg);
            let (manifest, _) = orch::run(&cfg, &dir)?;
            print_rows(&manifest.checks);
            println!("wrote {}", dir.join(orch::MANIFEST_FILE).display());
            Ok(manifest.all_passed())
        }
        Command::Propagate { times, beta, format } => propagate(times, *beta, *format),
        Command::Resonance { xi, normalization, oracle, format } => {
            let seed = configuration(&cli)?.seed;
            resonance(xi, (*normalization).into(), *oracle, *format, seed)
        }
        Command::Scatter { run, band, from } => scatter(run, band.as_deref(), *from, cli.out.as_deref()),
        Command::Selfsim { run, from } => selfsim(run, *from, cli.out.as_deref()),
        Command::Verify { run } => {
            let scratch = std::env::temp_dir().join(format!("quintic-kdv-verify-{}", std::process::id()));
            let v = orch::verify_run(run, &scratch);
            let _ = std::fs::remove_dir_all(&scratch);
            let v = v?;
            for p in &v.integrity {
                println!("INTEGRITY {p}");
            }
            print_rows(&v.rows);
            for d in &v.disagreements {
                println!("MISMATCH {d}");
            }
            println!("{}", if v.passed() { "verified" } else { "not verified" });
            Ok(v.passed())
        }
    }
}

fn propagate(times: &[f64], beta: f64, format: Format) -> Result<bool, Failure> {
    let g = |xi: f64| Complex64::new((-xi * xi / 2.0).exp(), 0.0);
    let fit = dispersive_envelope_check(&g, times, beta, &EnvelopeOptions::default())?;
    let (err, _) = stationary_phase_error_fit(&g, 100.0, 2.0, 50.0, 240, 12, &QuadratureOptions::default())?;
    let time = fit.time_fit.map(|f| f.slope);
    let pass = time.is_some_and(|s| (s - fit.predicted_exponent).abs() <= 0.02)
        && fit.spatial_fit.is_some_and(|f| f.slope <= -0.825)
        && err.is_some_and(|f| f.slope <= -0.40);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&json!({ "envelope": fit, "stationary_phase_error": err, "pass": pass }))?),
        Format::Text => {
            for (t, s) in fit.times.iter().zip(&fit.sups) {
                println!("t = {t:>10.1}  sup|u| = {s:.6e}");
            }
            println!("time exponent {:?} (predicted {:.3})", time, fit.predicted_exponent);
            println!("spatial exponent {:?}", fit.spatial_fit.map(|f| f.slope));
            println!("stationary-phase error exponent {:?}", err.map(|f| f.slope));
            println!("{}", if pass { "PASS" } else { "FAIL" });
        }
    }
    Ok(pass)
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    s.trim().parse::<Rational>().map_err(|e| Failure(Error::Config(format!("--xi {s:?}: {e}"))))
}

fn resonance(xi: &str, norm: Normalization, oracle: Option<f64>, format: Format, seed: u64) -> Result<bool, Failure> {
    let exact = parse_rational(xi)?;
    if *exact.numer() == 0 {
        return Err(Error::Config("--xi must be nonzero".into()).into());
    }
    let points = exact_catalog(exact);
    let xf = *exact.numer() as f64 / *exact.denom() as f64;
    let catalog = find_stationary_points(xf, &SearchOptions { seed, ..SearchOptions::default() })?;
    let coefficients = derive_resonance_coefficients(&catalog, norm)?;
    let quadrature = oracle.map(|l| coefficient_oracle(&catalog, l, &SaddleOptions::default())).transpose()?;
    match format {
        Format::Json => {
            let doc = json!({
                "exact": ExactCatalogJson::new(exact, &points),
                "coefficients": coefficients,
                "oracle": quadrature,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Format::Text => {
            println!("ξ = {exact}");
            for p in &points {
                let y: Vec<String> = p.point.iter().map(ToString::to_string).collect();
                println!("{:>2} {:?}  y = ({})  Ψ = {}  det = {}", p.index, p.group, y.join(", "), p.psi, p.determinant);
            }
            println!("c0 = {}", coefficients.c0);
            println!("c1 = {}", coefficients.c1);
            println!("c2 = {}", coefficients.c2);
            if let Some(o) = &quadrature {
                println!(
                    "quadrature at λ = {}: |c1| off {:.3}%, |c2| off {:.3}%",
                    o.lambda,
                    100.0 * o.c1_relative_error(),
                    100.0 * o.c2_relative_error()
                );
            }
        }
    }
    Ok(true)
}

fn late_profiles(run: &orch::LoadedRun, from: f64) -> Vec<Profile> {
    run.states.iter().filter(|s| s.time() >= from.max(1.0)).map(extract_profile).collect()
}

fn write_or_print(out: Option<&Path>, name: &str, text: &str) -> Result<(), Failure> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            orch::write_atomic(&dir.join(name), text.as_bytes())?;
            println!("wrote {}", dir.join(name).display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn scatter(dir: &Path, band: Option<&[f64]>, from: Option<f64>, out: Option<&Path>) -> Result<bool, Failure> {
    let run = orch::load_run(dir)?;
    let d = &run.config.diagnostics;
    let profiles = late_profiles(&run, from.unwrap_or(d.scattering_from));
    let kappa = phase_strength(d.normalization, run.config.solver.nonlinearity);
    let opts = match (band, d.scattering_band) {
        (Some(b), _) => ScatteringOptions::new(kappa, (b[0], b[1])),
        (None, Some([lo, hi])) => ScatteringOptions::new(kappa, (lo, hi)),
        (None, None) => ScatteringOptions { min_scaled_frequency: 0.0, ..ScatteringOptions::new(kappa, (f64::MIN, f64::MAX)) },
    };
    let lim = scattering_limit(&profiles, &opts)?;
    let pass = lim.rate_consistent() && lim.drift_ratio > 3.0 && lim.non_cauchy.is_empty();
    let mut csv = String::from("xi,re_f_inf,im_f_inf,abs_f_inf\n");
    for (x, f) in lim.xi.iter().zip(&lim.f_inf) {
        csv.push_str(&format!("{x:e},{:e},{:e},{:e}\n", f.re, f.im, f.norm()));
    }
    let summary = json!({
        "kappa": lim.kappa,
        "t_end": lim.t_end,
        "band_frequencies": lim.band_xi.len(),
        "fitted_exponent": lim.fitted_exponent,
        "predicted_exponent": lim.predicted_exponent,
        "drift_ratio": lim.drift_ratio,
        "non_cauchy": lim.non_cauchy,
        "warnings": lim.warnings,
        "pass": pass,
    });
    write_or_print(out, "scattering_summary.json", &serde_json::to_string_pretty(&summary)?)?;
    if out.is_some() {
        write_or_print(out, "f_inf.csv", &csv)?;
    }
    Ok(pass)
}

fn selfsim(dir: &Path, from: Option<f64>, out: Option<&Path>) -> Result<bool, Failure> {
    let run = orch::load_run(dir)?;
    let d = &run.config.diagnostics;
    let from = from.unwrap_or(d.self_similar_from).max(1.0);
    let states: Vec<_> = run.states.iter().filter(|s| s.time() >= from).cloned().collect();
    let opts = SelfSimilarOptions {
        gamma_constant: d.gamma_constant,
        nonlinearity: run.config.solver.nonlinearity,
        ..SelfSimilarOptions::new(run.config.initial.amplitude())
    };
    let frame = self_similar_extract(&states, &opts)?;
    let eps0 = opts.eps0;
    let pass = frame.cauchy_monotone()
        && frame.q_sup >= eps0 / 10.0
        && frame.q_sup <= 10.0 * eps0
        && frame.residual_exponent.is_none_or(|p| p <= -0.05);
    write_or_print(out, "self_similar.json", &serde_json::to_string_pretty(&frame)?)?;
    Ok(pass)
}
