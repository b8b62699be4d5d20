//! `arlog`: command line front end for the asymptotic constants of
//! log-magnitude autoregressions, the limiting residual distribution, and
//! the seeded simulation experiments that verify them.
//!
//! Output is a single JSON object (or a CSV key/value listing) on stdout;
//! errors are a one-line `{"code": N, "message": "..."}` object on stderr.
//! Exit codes: 0 success, 2 invalid parameters, 3 numerical
//! non-convergence, 4 failed experiment verdict.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use arlog_core::analysis::{
    ar2_region_experiment, clt_experiment, lyapunov_experiment, residual_experiment,
    ExperimentReport, SamplerRoute,
};
use arlog_core::asymptotics::{self, OuTheta, StationaryRho, MAX_DIGITS};
use arlog_core::residual::ResidualDist;
use arlog_core::sim::{sample_paths, ModelSpec, NoiseKind};
use arlog_core::{BigFloat, Error, Result};

use output::{emit, render_csv, render_json, Document, Table};

#[derive(Parser)]
#[command(name = "arlog", version, about = None, max_term_width = 100)]
/// Asymptotics of `ln |X_t|` for autoregressive recurrences: limiting
/// constants in high precision, the residual distribution, and seeded
/// Monte Carlo experiments checking them.
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Cap the worker threads used for replicate-level parallelism.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// High-precision asymptotic constants.
    #[command(subcommand)]
    Constants(ConstantsCmd),

    /// The limiting residual distribution of `ln |X_n|`.
    #[command(subcommand)]
    Dist(DistCmd),

    /// Simulate seeded paths of a model and summarize `ln |X_t|`.
    Simulate(SimulateArgs),

    /// Seeded experiments that test simulation against analytic targets.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand)]
enum ConstantsCmd {
    /// Standard deviation `xi(rho)` in the CLT for the time average of
    /// `ln |X_t|` under the stationary gaussian AR(1).
    Xi {
        /// Autocorrelation, |rho| < 1, as an exact decimal string.
        #[arg(long, allow_negative_numbers = true)]
        rho: String,
        /// Decimal places to render.
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },

    /// Occupation constant `eta(theta)` of the Ornstein-Uhlenbeck analogue.
    Eta {
        /// Mean-reversion rate theta > 0 as an exact decimal string.
        #[arg(long, allow_negative_numbers = true)]
        theta: String,
        /// Decimal places to render.
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },

    /// Mean and standard deviation of `ln |Z|` for standard gaussian `Z`.
    MuSigma {
        /// Decimal places to render.
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },

    /// Exact variance of the length-n time average of `ln |X_t|`, scaled
    /// by n.
    FiniteVar {
        /// Autocorrelation, |rho| < 1, as an exact decimal string.
        #[arg(long, allow_negative_numbers = true)]
        rho: String,
        /// Window length, n >= 1.
        #[arg(long)]
        n: u64,
        /// Decimal places to render.
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },
}

#[derive(Subcommand)]
enum DistCmd {
    /// Density of the standardized residual law.
    Pdf {
        /// Evaluation point as an exact decimal string.
        #[arg(long, allow_negative_numbers = true)]
        x: String,
        /// Decimal places to render.
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },

    /// Cumulative distribution function of the residual law.
    Cdf {
        /// Evaluation point as an exact decimal string.
        #[arg(long, allow_negative_numbers = true)]
        x: String,
        /// Decimal places to render.
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },

    /// Quantile at probability p.
    Quantile {
        /// Probability in (0, 1) as an exact decimal string.
        #[arg(long)]
        p: String,
        /// Decimal places to render.
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },

    /// Mean, variance, skewness, and excess kurtosis of the residual law.
    Moments {
        /// Decimal places to render.
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },

    /// Location of the density maximum.
    Mode {
        /// Decimal places to render.
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },
}

#[derive(Args)]
struct SimulateArgs {
    /// Model to simulate.
    #[arg(long, value_enum)]
    model: ModelName,

    /// Autocorrelation coefficient, for the AR(1)-family models.
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<String>,

    /// Comma-separated AR(m) coefficients a1,a2,...
    #[arg(long, value_name = "A1,A2,...", allow_hyphen_values = true)]
    coeffs: Option<String>,

    /// Noise family, for the stationary AR(1) and AR(m) models.
    #[arg(long, value_enum)]
    noise: Option<NoiseName>,

    /// Noise standard deviation, for the AR(m) model.
    #[arg(long, allow_negative_numbers = true)]
    noise_scale: Option<f64>,

    /// Path length.
    #[arg(long)]
    n: u64,

    /// Independent replicates.
    #[arg(long, default_value_t = 1)]
    reps: u64,

    /// Master seed; replicate i draws from stream i + 1.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Retain and emit the full path (requires --reps 1).
    #[arg(long)]
    series: bool,
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Central limit theorem for the stationary time average of `ln |X_t|`.
    Clt {
        /// Autocorrelation, |rho| < 1, as an exact decimal string.
        #[arg(long, allow_negative_numbers = true)]
        rho: String,
        /// Noise family (uniform is supported at rho = 0 only).
        #[arg(long, value_enum, default_value_t = NoiseName::Gaussian)]
        noise: NoiseName,
        /// Path length.
        #[arg(long)]
        n: u64,
        /// Independent replicates.
        #[arg(long, default_value_t = 2000)]
        reps: u64,
        /// Master seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Residual law of `ln |X_n|` for the explosive AR(1).
    Residuals {
        /// Autocorrelation, |rho| > 1, as an exact decimal string.
        #[arg(long, allow_negative_numbers = true)]
        rho: String,
        /// Path length.
        #[arg(long)]
        n: u64,
        /// Independent replicates.
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        /// Master seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Path sampler: the full recurrence or the closed-form shortcut.
        #[arg(long, value_enum, default_value_t = RouteName::Recurrence)]
        sampler: RouteName,
    },

    /// Growth-rate recovery against the known Lyapunov exponent.
    Lyapunov {
        /// Model to simulate.
        #[arg(long, value_enum)]
        model: ModelName,
        /// Autocorrelation coefficient, for the AR(1)-family models.
        #[arg(long, allow_negative_numbers = true)]
        rho: Option<String>,
        /// Comma-separated AR(m) coefficients a1,a2,...
        #[arg(long, value_name = "A1,A2,...", allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// Noise family, for the stationary AR(1) and AR(m) models.
        #[arg(long, value_enum)]
        noise: Option<NoiseName>,
        /// Noise standard deviation, for the AR(m) model.
        #[arg(long, allow_negative_numbers = true)]
        noise_scale: Option<f64>,
        /// Path length.
        #[arg(long)]
        n: u64,
        /// Independent replicates.
        #[arg(long, default_value_t = 8)]
        reps: u64,
        /// Master seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// AR(2) explosiveness region: closed form against the spectral radius.
    Ar2Region {
        /// Lattice points per axis over [-2, 2].
        #[arg(long, default_value_t = 41)]
        grid: u32,
        /// Seed, echoed into the report for provenance.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelName {
    StationaryAr1,
    NonstationaryAr1,
    ArM,
    RandomSign,
    Viswanath,
    WrightTrefethen,
}

impl ModelName {
    fn cli_name(self) -> &'static str {
        match self {
            ModelName::StationaryAr1 => "stationary-ar1",
            ModelName::NonstationaryAr1 => "nonstationary-ar1",
            ModelName::ArM => "ar-m",
            ModelName::RandomSign => "random-sign",
            ModelName::Viswanath => "viswanath",
            ModelName::WrightTrefethen => "wright-trefethen",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NoiseName {
    Gaussian,
    Uniform,
    Rademacher,
}

fn noise_kind(name: NoiseName) -> NoiseKind {
    match name {
        NoiseName::Gaussian => NoiseKind::Gaussian,
        NoiseName::Uniform => NoiseKind::UniformSym,
        NoiseName::Rademacher => NoiseKind::Rademacher,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteName {
    Recurrence,
    Exact,
}

const EXIT_INVALID: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_FAILED_VERDICT: u8 = 4;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            return fail(EXIT_INVALID, &clap_message(&err));
        }
    };

    if let Some(threads) = cli.threads {
        if threads == 0 {
            return fail(EXIT_INVALID, "thread count must be >= 1");
        }
        // Ignore the error from a pool that is already initialized; the cap
        // is best effort and the output does not depend on it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let doc = match run(cli.command) {
        Ok(doc) => doc,
        Err(err) => return fail(exit_code_for(&err), &err.to_string()),
    };

    let text = match cli.format {
        Format::Json => render_json(&doc),
        Format::Csv => render_csv(&doc),
    };
    if let Err(err) = emit(&text, cli.out.as_deref()) {
        return fail(EXIT_INVALID, &format!("cannot write output: {err}"));
    }

    match doc.failed {
        Some(message) => fail(EXIT_FAILED_VERDICT, &message),
        None => ExitCode::SUCCESS,
    }
}

/// First line of a clap error, without the "error: " prefix; the rest is
/// usage text that has no place in a one-line error object.
fn clap_message(err: &clap::Error) -> String {
    let text = err.to_string();
    let line = text.lines().next().unwrap_or("invalid arguments");
    line.strip_prefix("error: ").unwrap_or(line).to_string()
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Convergence(_) => EXIT_NO_CONVERGENCE,
        _ => EXIT_INVALID,
    }
}

fn fail(code: u8, message: &str) -> ExitCode {
    let mut obj = Map::new();
    obj.insert("code".into(), Value::from(code));
    obj.insert("message".into(), Value::from(message));
    eprintln!("{}", Value::Object(obj));
    ExitCode::from(code)
}

fn run(command: Command) -> Result<Document> {
    match command {
        Command::Constants(cmd) => run_constants(cmd),
        Command::Dist(cmd) => run_dist(cmd),
        Command::Simulate(args) => run_simulate(args),
        Command::Experiment(cmd) => run_experiment(cmd),
    }
}

fn run_constants(cmd: ConstantsCmd) -> Result<Document> {
    match cmd {
        ConstantsCmd::Xi { rho, digits } => {
            let value = asymptotics::xi(&StationaryRho::new(&rho)?, digits)?;
            Ok(fields_doc(
                "constants.xi",
                vec![("rho", Value::from(rho))],
                digits,
                vec![("value", &value)],
            ))
        }
        ConstantsCmd::Eta { theta, digits } => {
            let value = asymptotics::eta(&OuTheta::new(&theta)?, digits)?;
            Ok(fields_doc(
                "constants.eta",
                vec![("theta", Value::from(theta))],
                digits,
                vec![("value", &value)],
            ))
        }
        ConstantsCmd::MuSigma { digits } => {
            let (mu, sigma) = asymptotics::mu_sigma(digits)?;
            Ok(fields_doc(
                "constants.mu_sigma",
                vec![],
                digits,
                vec![("mu", &mu), ("sigma", &sigma)],
            ))
        }
        ConstantsCmd::FiniteVar { rho, n, digits } => {
            let value = asymptotics::finite_n_variance(&StationaryRho::new(&rho)?, n, digits)?;
            Ok(fields_doc(
                "constants.finite_var",
                vec![("rho", Value::from(rho)), ("n", Value::from(n))],
                digits,
                vec![("value", &value)],
            ))
        }
    }
}

fn run_dist(cmd: DistCmd) -> Result<Document> {
    match cmd {
        DistCmd::Pdf { x, digits } => {
            let value = ResidualDist.pdf_big(&parse_point(&x, digits)?)?;
            Ok(fields_doc(
                "dist.pdf",
                vec![("x", Value::from(x))],
                digits,
                vec![("value", &value)],
            ))
        }
        DistCmd::Cdf { x, digits } => {
            let value = ResidualDist.cdf_big(&parse_point(&x, digits)?)?;
            Ok(fields_doc(
                "dist.cdf",
                vec![("x", Value::from(x))],
                digits,
                vec![("value", &value)],
            ))
        }
        DistCmd::Quantile { p, digits } => {
            let value = ResidualDist.quantile(&p, digits)?;
            Ok(fields_doc(
                "dist.quantile",
                vec![("p", Value::from(p))],
                digits,
                vec![("value", &value)],
            ))
        }
        DistCmd::Moments { digits } => {
            let m = ResidualDist.moments(digits)?;
            Ok(fields_doc(
                "dist.moments",
                vec![],
                digits,
                vec![
                    ("mean", &m.mean),
                    ("variance", &m.variance),
                    ("skewness", &m.skewness),
                    ("excess_kurtosis", &m.excess_kurtosis),
                    ("fourth_standardized", &m.fourth_standardized),
                ],
            ))
        }
        DistCmd::Mode { digits } => {
            let value = ResidualDist.mode(digits)?;
            Ok(fields_doc("dist.mode", vec![], digits, vec![("value", &value)]))
        }
    }
}

/// Parses a density/CDF evaluation point at the working precision that the
/// requested decimal count needs.
fn parse_point(text: &str, digits: u32) -> Result<BigFloat> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Error::Precision(format!(
            "digits must be between 1 and {MAX_DIGITS}, got {digits}"
        )));
    }
    BigFloat::parse(text, digits + 12)
}

fn run_simulate(args: SimulateArgs) -> Result<Document> {
    if args.series && args.reps != 1 {
        return Err(Error::Domain(format!(
            "--series retains one full path and requires --reps 1, got {}",
            args.reps
        )));
    }
    let model = build_model(
        args.model,
        args.rho.as_deref(),
        args.coeffs.as_deref(),
        args.noise,
        args.noise_scale,
    )?;
    let paths = sample_paths(&model, args.n, args.reps, args.seed, args.series)?;

    let mut finals = Vec::new();
    let mut zero_paths = 0u64;
    for path in &paths {
        if path.zero_events > 0 {
            zero_paths += 1;
        }
        if let Some(v) = path.ln_abs_final {
            finals.push(v);
        }
    }

    let mut stats: Vec<(&str, f64)> = vec![
        ("reps_used", finals.len() as f64),
        ("zero_event_paths", zero_paths as f64),
    ];
    if !finals.is_empty() {
        let mean = finals.iter().sum::<f64>() / finals.len() as f64;
        stats.push(("ln_abs_final_mean", mean));
        stats.push(("rate_mean", mean / args.n as f64));
        if finals.len() >= 2 {
            let var = finals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                / (finals.len() - 1) as f64;
            stats.push(("ln_abs_final_sd", var.sqrt()));
        }
    }
    stats.sort_by(|a, b| a.0.cmp(b.0));

    let params: Vec<(String, String)> = model.params();

    let mut obj = Map::new();
    obj.insert("command".into(), Value::from("simulate"));
    obj.insert("model".into(), Value::from(model.name()));
    let mut params_obj = Map::new();
    for (k, v) in &params {
        params_obj.insert(k.clone(), Value::from(v.clone()));
    }
    obj.insert("params".into(), Value::Object(params_obj));
    obj.insert("n".into(), Value::from(args.n));
    obj.insert("reps".into(), Value::from(args.reps));
    obj.insert("seed".into(), Value::from(args.seed));
    let mut stats_obj = Map::new();
    for (k, v) in &stats {
        stats_obj.insert((*k).into(), Value::from(*v));
    }
    obj.insert("stats".into(), Value::Object(stats_obj));

    let mut rows = vec![
        ("command".to_string(), "simulate".to_string()),
        ("model".to_string(), model.name().to_string()),
    ];
    for (k, v) in &params {
        rows.push((format!("param.{k}"), v.clone()));
    }
    rows.push(("n".into(), args.n.to_string()));
    rows.push(("reps".into(), args.reps.to_string()));
    rows.push(("seed".into(), args.seed.to_string()));
    for (k, v) in &stats {
        rows.push((format!("stat.{k}"), format!("{v}")));
    }

    let mut table = None;
    if args.series {
        let series = paths[0]
            .series
            .as_ref()
            .expect("series retention was requested");
        let mut json_points = Vec::with_capacity(series.len());
        let mut table_rows = Vec::with_capacity(series.len());
        for point in series {
            let mut p = Map::new();
            p.insert("t".into(), Value::from(point.t));
            // Negative infinity (an exact zero) serializes as null.
            p.insert("ln_abs".into(), Value::from(point.ln_abs));
            p.insert("sign".into(), Value::from(point.sign));
            json_points.push(Value::Object(p));
            let ln_text = if point.ln_abs.is_finite() {
                format!("{}", point.ln_abs)
            } else {
                "-inf".to_string()
            };
            table_rows.push(vec![point.t.to_string(), ln_text, point.sign.to_string()]);
        }
        obj.insert("series".into(), Value::Array(json_points));
        table = Some(Table {
            header: &["t", "ln_abs_x", "sign"],
            rows: table_rows,
        });
    }

    Ok(Document {
        json: Value::Object(obj).to_string(),
        rows,
        table,
        failed: None,
    })
}

fn run_experiment(cmd: ExperimentCmd) -> Result<Document> {
    let report = match cmd {
        ExperimentCmd::Clt {
            rho,
            noise,
            n,
            reps,
            seed,
        } => clt_experiment(&rho, noise_kind(noise), n, reps, seed)?,
        ExperimentCmd::Residuals {
            rho,
            n,
            reps,
            seed,
            sampler,
        } => {
            let route = match sampler {
                RouteName::Recurrence => SamplerRoute::Recurrence,
                RouteName::Exact => SamplerRoute::Exact,
            };
            residual_experiment(&rho, n, reps, seed, route)?
        }
        ExperimentCmd::Lyapunov {
            model,
            rho,
            coeffs,
            noise,
            noise_scale,
            n,
            reps,
            seed,
        } => {
            let spec = build_model(model, rho.as_deref(), coeffs.as_deref(), noise, noise_scale)?;
            lyapunov_experiment(&spec, n, reps, seed)?
        }
        ExperimentCmd::Ar2Region { grid, seed } => ar2_region_experiment(grid, seed)?,
    };
    report_doc(report)
}

fn report_doc(report: ExperimentReport) -> Result<Document> {
    let failed = report.verdicts.iter().filter(|v| !v.pass).count();
    let failed_message = (failed > 0).then(|| {
        format!(
            "experiment {}: {failed} of {} verdicts failed",
            report.experiment,
            report.verdicts.len()
        )
    });
    let json = serde_json::to_string(&report)
        .map_err(|e| Error::Domain(format!("cannot serialize report: {e}")))?;
    Ok(Document {
        json,
        rows: report.csv_rows(),
        table: None,
        failed: failed_message,
    })
}

/// Assembles the JSON object and CSV rows shared by all scalar commands:
/// the command name, its echoed inputs, the digit count, and one or more
/// fixed-point rendered values.
fn fields_doc(
    command: &str,
    inputs: Vec<(&str, Value)>,
    digits: u32,
    values: Vec<(&str, &BigFloat)>,
) -> Document {
    let mut obj = Map::new();
    obj.insert("command".into(), Value::from(command));
    let mut rows = vec![("command".to_string(), command.to_string())];
    for (key, value) in &inputs {
        obj.insert((*key).into(), value.clone());
        let text = match value {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        rows.push(((*key).to_string(), text));
    }
    obj.insert("digits".into(), Value::from(digits));
    rows.push(("digits".into(), digits.to_string()));
    for (key, value) in &values {
        let rendered = value.to_fixed(digits);
        obj.insert((*key).into(), Value::from(rendered.clone()));
        rows.push(((*key).to_string(), rendered));
    }
    Document {
        json: Value::Object(obj).to_string(),
        rows,
        table: None,
        failed: None,
    }
}

/// Builds a model from the flag set, rejecting flags that do not apply to
/// the chosen model so mistakes fail loudly instead of being ignored.
fn build_model(
    name: ModelName,
    rho: Option<&str>,
    coeffs: Option<&str>,
    noise: Option<NoiseName>,
    noise_scale: Option<f64>,
) -> Result<ModelSpec> {
    let cli_name = name.cli_name();
    let reject = |given: bool, flag: &str| -> Result<()> {
        if given {
            Err(Error::Parse(format!(
                "{flag} does not apply to model {cli_name}"
            )))
        } else {
            Ok(())
        }
    };
    match name {
        ModelName::StationaryAr1 => {
            reject(coeffs.is_some(), "--coeffs")?;
            reject(noise_scale.is_some(), "--noise-scale")?;
            let rho = require_rho(rho, cli_name)?;
            ModelSpec::stationary_ar1(rho, noise_kind(noise.unwrap_or(NoiseName::Gaussian)))
        }
        ModelName::NonstationaryAr1 => {
            reject(coeffs.is_some(), "--coeffs")?;
            reject(noise.is_some(), "--noise")?;
            reject(noise_scale.is_some(), "--noise-scale")?;
            ModelSpec::nonstationary_ar1(require_rho(rho, cli_name)?)
        }
        ModelName::ArM => {
            reject(rho.is_some(), "--rho")?;
            let text = coeffs.ok_or_else(|| {
                Error::Parse(format!("--coeffs is required for model {cli_name}"))
            })?;
            ModelSpec::ar_m(
                parse_coeffs(text)?,
                noise_scale.unwrap_or(1.0),
                noise_kind(noise.unwrap_or(NoiseName::Gaussian)),
            )
        }
        ModelName::RandomSign => {
            reject(coeffs.is_some(), "--coeffs")?;
            reject(noise.is_some(), "--noise")?;
            reject(noise_scale.is_some(), "--noise-scale")?;
            ModelSpec::random_sign(require_rho(rho, cli_name)?)
        }
        ModelName::Viswanath | ModelName::WrightTrefethen => {
            reject(rho.is_some(), "--rho")?;
            reject(coeffs.is_some(), "--coeffs")?;
            reject(noise.is_some(), "--noise")?;
            reject(noise_scale.is_some(), "--noise-scale")?;
            if name == ModelName::Viswanath {
                Ok(ModelSpec::Viswanath)
            } else {
                Ok(ModelSpec::WrightTrefethen)
            }
        }
    }
}

fn require_rho(rho: Option<&str>, model: &str) -> Result<f64> {
    let text =
        rho.ok_or_else(|| Error::Parse(format!("--rho is required for model {model}")))?;
    parse_flag_f64("--rho", text)
}

fn parse_coeffs(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|piece| parse_flag_f64("--coeffs", piece.trim()))
        .collect()
}

fn parse_flag_f64(flag: &str, text: &str) -> Result<f64> {
    let value: f64 = text
        .parse()
        .map_err(|_| Error::Parse(format!("{flag} must be a decimal number, got '{text}'")))?;
    if !value.is_finite() {
        return Err(Error::Parse(format!("{flag} must be finite, got '{text}'")));
    }
    Ok(value)
}
