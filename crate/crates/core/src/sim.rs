//! Seeded simulation of autoregressive log-magnitude paths.
//!
//! Every path is driven by a ChaCha8 generator: replicate `i` of a run with
//! master seed `s` uses stream `i + 1` of `s` (stream 0 is the root), so
//! results are reproducible for any replicate count and independent of how
//! replicates are scheduled across threads.
//!
//! Explosive recurrences overflow f64 after a few thousand steps, so state
//! vectors are stored as `(components, log_scale)` where the true value is
//! `component * exp(log_scale)`. Rescaling always multiplies by an exact
//! power of two, which perturbs no mantissa bits; only the accumulated
//! `log_scale` carries rounding, at one `ln 2` multiple per rescale.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

const SQRT_3: f64 = 1.732_050_807_568_877_2;
/// Steps discarded before recording begins for non-gaussian stationary
/// starts, enough to damp the X_0 = 0 transient below f64 resolution for
/// any |rho| <= 1 - 1e-3 and far below sampling noise otherwise.
const STATIONARY_BURN_IN: u64 = 10_000;
/// Rescale when the largest component magnitude leaves this band.
const RENORM_HI: f64 = 1_073_741_824.0; // 2^30
const RENORM_LO: f64 = 9.313_225_746_154_785e-10; // 2^-30

/// Unit-variance noise families for the driving innovations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    /// Standard normal.
    Gaussian,
    /// Uniform on the open interval (-sqrt 3, sqrt 3).
    UniformSym,
    /// Plus or minus one with equal probability.
    Rademacher,
}

/// A seeded generator bound to one replicate stream.
pub struct RngState {
    rng: ChaCha8Rng,
}

impl RngState {
    /// The root stream for a master seed.
    pub fn root(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(0);
        RngState { rng }
    }

    /// The stream for replicate `index` under a master seed; distinct
    /// indices give statistically independent streams.
    pub fn replicate(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index.wrapping_add(1));
        RngState { rng }
    }

    /// One innovation from the given family.
    pub fn draw(&mut self, kind: NoiseKind) -> f64 {
        match kind {
            NoiseKind::Gaussian => self.rng.sample(StandardNormal),
            NoiseKind::UniformSym => loop {
                let u: f64 = self.rng.random();
                if u != 0.0 {
                    // u in (0, 1) maps onto the open interval (-sqrt3, sqrt3).
                    break (2.0 * u - 1.0) * SQRT_3;
                }
            },
            NoiseKind::Rademacher => {
                if self.rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Which recurrence to simulate. Construct through the checked builders;
/// every simulation entry point re-validates, so hand-built values cannot
/// bypass the parameter ranges.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    /// `X_t = rho X_(t-1) + sqrt(1-rho^2) eps_t`, `|rho| < 1`, stationary
    /// start (exact for gaussian noise, burned in otherwise).
    StationaryAr1 { rho: f64, noise: NoiseKind },
    /// `X_t = rho X_(t-1) + sqrt(rho^2-1) eps_t`, `|rho| > 1`, gaussian
    /// noise, `X_0 = 0`, so that `X_n ~ N(0, rho^(2n)-1)` exactly.
    NonstationaryAr1 { rho: f64 },
    /// `X_t = a_1 X_(t-1) + ... + a_m X_(t-m) + b eps_t`, zero start.
    ArM {
        coeffs: Vec<f64>,
        noise_scale: f64,
        noise: NoiseKind,
    },
    /// `X_t = rho X_(t-1) +- sqrt(rho^2-1)` with independent fair signs,
    /// `|rho| > 1`.
    RandomSign { rho: f64 },
    /// Random Fibonacci: `X_t = X_(t-1) +- X_(t-2)`, `X_0 = X_1 = 1`.
    Viswanath,
    /// `X_t = X_(t-1) + eps_t X_(t-2)`, gaussian, `X_0 = X_1 = 1`.
    WrightTrefethen,
}

/// Largest supported autoregression order.
pub const MAX_ORDER: usize = 32;

impl ModelSpec {
    pub fn stationary_ar1(rho: f64, noise: NoiseKind) -> Result<Self> {
        let m = ModelSpec::StationaryAr1 { rho, noise };
        m.validate()?;
        Ok(m)
    }

    pub fn nonstationary_ar1(rho: f64) -> Result<Self> {
        let m = ModelSpec::NonstationaryAr1 { rho };
        m.validate()?;
        Ok(m)
    }

    pub fn ar_m(coeffs: Vec<f64>, noise_scale: f64, noise: NoiseKind) -> Result<Self> {
        let m = ModelSpec::ArM {
            coeffs,
            noise_scale,
            noise,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn random_sign(rho: f64) -> Result<Self> {
        let m = ModelSpec::RandomSign { rho };
        m.validate()?;
        Ok(m)
    }

    /// Parameter-range validation; every simulation call applies it.
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::StationaryAr1 { rho, .. } => {
                if !rho.is_finite() || rho.abs() >= 1.0 {
                    return Err(Error::Domain(format!(
                        "rho out of range: stationary model needs |rho| < 1, got {rho}"
                    )));
                }
            }
            ModelSpec::NonstationaryAr1 { rho } | ModelSpec::RandomSign { rho } => {
                if !rho.is_finite() || rho.abs() <= 1.0 {
                    return Err(Error::Domain(format!(
                        "rho out of range: explosive model needs |rho| > 1, got {rho}"
                    )));
                }
            }
            ModelSpec::ArM {
                coeffs,
                noise_scale,
                ..
            } => {
                if coeffs.is_empty() || coeffs.len() > MAX_ORDER {
                    return Err(Error::Domain(format!(
                        "ar_m order must be between 1 and {MAX_ORDER}, got {}",
                        coeffs.len()
                    )));
                }
                if coeffs.iter().any(|a| !a.is_finite()) {
                    return Err(Error::Domain("ar_m coefficients must be finite".into()));
                }
                if !noise_scale.is_finite() || *noise_scale <= 0.0 {
                    return Err(Error::Domain(format!(
                        "ar_m noise scale must be positive, got {noise_scale}"
                    )));
                }
            }
            ModelSpec::Viswanath | ModelSpec::WrightTrefethen => {}
        }
        Ok(())
    }

    /// Stable identifier used in reports and output files.
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::StationaryAr1 { .. } => "stationary_ar1",
            ModelSpec::NonstationaryAr1 { .. } => "nonstationary_ar1",
            ModelSpec::ArM { .. } => "ar_m",
            ModelSpec::RandomSign { .. } => "random_sign",
            ModelSpec::Viswanath => "viswanath",
            ModelSpec::WrightTrefethen => "wright_trefethen",
        }
    }

    /// Key/value parameter listing for reports.
    pub fn params(&self) -> Vec<(String, String)> {
        match self {
            ModelSpec::StationaryAr1 { rho, noise } => vec![
                ("rho".into(), format!("{rho}")),
                ("noise".into(), noise_name(*noise).into()),
            ],
            ModelSpec::NonstationaryAr1 { rho } | ModelSpec::RandomSign { rho } => {
                vec![("rho".into(), format!("{rho}"))]
            }
            ModelSpec::ArM {
                coeffs,
                noise_scale,
                noise,
            } => vec![
                (
                    "coeffs".into(),
                    coeffs
                        .iter()
                        .map(|a| format!("{a}"))
                        .collect::<Vec<_>>()
                        .join(","),
                ),
                ("noise_scale".into(), format!("{noise_scale}")),
                ("noise".into(), noise_name(*noise).into()),
            ],
            ModelSpec::Viswanath | ModelSpec::WrightTrefethen => vec![],
        }
    }
}

pub fn noise_name(kind: NoiseKind) -> &'static str {
    match kind {
        NoiseKind::Gaussian => "gaussian",
        NoiseKind::UniformSym => "uniform",
        NoiseKind::Rademacher => "rademacher",
    }
}

/// One recorded step of a path.
#[derive(Debug, Clone, Copy)]
pub struct SeriesPoint {
    pub t: u64,
    /// `ln |X_t|`; negative infinity marks an exact zero.
    pub ln_abs: f64,
    /// Sign of `X_t`: -1, 0, or 1.
    pub sign: i8,
}

/// Result of simulating one path.
#[derive(Debug, Clone)]
pub struct SimPath {
    /// `ln |X_n|`, or `None` when `X_n` is exactly zero.
    pub ln_abs_final: Option<f64>,
    /// Sign of `X_n`.
    pub final_sign: i8,
    /// Sum of `ln |X_t|` over the recorded window (negative infinity if the
    /// path touched zero).
    pub ln_abs_sum: f64,
    /// Number of recorded steps where `X_t` was exactly zero.
    pub zero_events: u64,
    /// The full series when retention was requested.
    pub series: Option<Vec<SeriesPoint>>,
}

/// Log-scaled state vector: true values are `components[i] * 2^scale_exp2`.
/// The exponent is an integer, so rescaling is exact; rounding enters only
/// when a logarithm is read out.
struct LogScaledState {
    components: Vec<f64>,
    scale_exp2: i64,
}

/// Multiplies by 2^k exactly, splitting in half when |k| exceeds the f64
/// exponent range of a single factor.
fn scale_by_exp2(x: f64, k: i64) -> f64 {
    if k.abs() <= 1000 {
        x * (k as f64).exp2()
    } else {
        let h = k / 2;
        x * (h as f64).exp2() * ((k - h) as f64).exp2()
    }
}

impl LogScaledState {
    fn new(components: Vec<f64>) -> Self {
        LogScaledState {
            components,
            scale_exp2: 0,
        }
    }

    /// Rescales by an exact power of two whenever the leading magnitude
    /// leaves [2^-30, 2^30]. An all-zero vector resets the scale so later
    /// noise re-enters at its absolute size, and a state whose true
    /// magnitude has collapsed below the f64 floor is folded back to scale
    /// zero (letting genuinely unrepresentable components underflow).
    fn renormalize(&mut self) {
        let m = self
            .components
            .iter()
            .fold(0.0f64, |acc, c| acc.max(c.abs()));
        if m == 0.0 {
            self.scale_exp2 = 0;
            return;
        }
        if (RENORM_LO..=RENORM_HI).contains(&m) {
            if self.scale_exp2 < -1000 {
                self.fold_to_scale_zero();
            }
            return;
        }
        let k = m.log2().round() as i64;
        for c in &mut self.components {
            *c = scale_by_exp2(*c, -k);
        }
        self.scale_exp2 += k;
        if self.scale_exp2 < -1000 {
            self.fold_to_scale_zero();
        }
    }

    fn fold_to_scale_zero(&mut self) {
        for c in &mut self.components {
            *c = scale_by_exp2(*c, self.scale_exp2);
        }
        self.scale_exp2 = 0;
    }

    /// Multiplier that converts an absolute quantity onto the scaled axis.
    /// Underflows to zero once the path scale dwarfs the noise, which is
    /// the correctly rounded contribution.
    fn noise_gain(&self) -> f64 {
        (-(self.scale_exp2) as f64).exp2()
    }

    fn ln_abs(&self, i: usize) -> f64 {
        let c = self.components[i];
        if c == 0.0 {
            f64::NEG_INFINITY
        } else {
            c.abs().ln() + self.scale_exp2 as f64 * core::f64::consts::LN_2
        }
    }

    fn sign(&self, i: usize) -> i8 {
        let c = self.components[i];
        if c == 0.0 {
            0
        } else if c < 0.0 {
            -1
        } else {
            1
        }
    }
}

/// Collects recorded points and summary fields during a simulation.
struct Recorder {
    sum: f64,
    zero_events: u64,
    last_ln: f64,
    last_sign: i8,
    series: Option<Vec<SeriesPoint>>,
}

impl Recorder {
    fn new(n: u64, retain: bool) -> Self {
        Recorder {
            sum: 0.0,
            zero_events: 0,
            last_ln: f64::NEG_INFINITY,
            last_sign: 0,
            series: retain.then(|| Vec::with_capacity(n as usize)),
        }
    }

    fn record(&mut self, t: u64, ln_abs: f64, sign: i8) {
        if sign == 0 {
            self.zero_events += 1;
        }
        self.sum += ln_abs;
        self.last_ln = ln_abs;
        self.last_sign = sign;
        if let Some(series) = &mut self.series {
            series.push(SeriesPoint { t, ln_abs, sign });
        }
    }

    fn finish(self) -> SimPath {
        SimPath {
            ln_abs_final: (self.last_sign != 0).then_some(self.last_ln),
            final_sign: self.last_sign,
            ln_abs_sum: self.sum,
            zero_events: self.zero_events,
            series: self.series,
        }
    }
}

fn record_scalar(rec: &mut Recorder, t: u64, x: f64) {
    if x == 0.0 {
        rec.record(t, f64::NEG_INFINITY, 0);
    } else {
        rec.record(t, x.abs().ln(), if x < 0.0 { -1 } else { 1 });
    }
}

/// Simulates `ln |X_t|` for `t = 1..=n` along one path.
pub fn simulate_ln_abs(
    model: &ModelSpec,
    n: u64,
    rng: &mut RngState,
    retain_series: bool,
) -> Result<SimPath> {
    model.validate()?;
    if n == 0 {
        return Err(Error::Domain("path length n must be >= 1".into()));
    }
    let mut rec = Recorder::new(n, retain_series);
    match model {
        ModelSpec::StationaryAr1 { rho, noise } => {
            let c = (1.0 - rho * rho).sqrt();
            let mut x = if *noise == NoiseKind::Gaussian {
                rng.draw(NoiseKind::Gaussian)
            } else {
                let mut x = 0.0;
                for _ in 0..STATIONARY_BURN_IN {
                    x = rho * x + c * rng.draw(*noise);
                }
                rho * x + c * rng.draw(*noise)
            };
            record_scalar(&mut rec, 1, x);
            for t in 2..=n {
                x = rho * x + c * rng.draw(*noise);
                record_scalar(&mut rec, t, x);
            }
        }
        ModelSpec::NonstationaryAr1 { rho } => {
            let b = (rho * rho - 1.0).sqrt();
            let mut state = LogScaledState::new(vec![0.0]);
            for t in 1..=n {
                state.components[0] =
                    rho * state.components[0] + b * rng.draw(NoiseKind::Gaussian) * state.noise_gain();
                state.renormalize();
                rec.record(t, state.ln_abs(0), state.sign(0));
            }
        }
        ModelSpec::ArM {
            coeffs,
            noise_scale,
            noise,
        } => {
            let m = coeffs.len();
            let mut state = LogScaledState::new(vec![0.0; m]);
            for t in 1..=n {
                let mut new = *noise_scale * rng.draw(*noise) * state.noise_gain();
                for (a, c) in coeffs.iter().zip(&state.components) {
                    new += a * c;
                }
                state.components.rotate_right(1);
                state.components[0] = new;
                state.renormalize();
                rec.record(t, state.ln_abs(0), state.sign(0));
            }
        }
        ModelSpec::RandomSign { rho } => {
            let mut signs = || rng.draw(NoiseKind::Rademacher);
            return random_sign_path_with(*rho, n, retain_series, &mut signs);
        }
        ModelSpec::Viswanath => {
            let mut signs = || rng.draw(NoiseKind::Rademacher);
            return viswanath_path_with(n, retain_series, &mut signs);
        }
        ModelSpec::WrightTrefethen => {
            let mut state = LogScaledState::new(vec![1.0, 1.0]);
            rec.record(1, state.ln_abs(0), state.sign(0));
            for t in 2..=n {
                let eps = rng.draw(NoiseKind::Gaussian);
                let new = state.components[0] + eps * state.components[1];
                state.components[1] = state.components[0];
                state.components[0] = new;
                state.renormalize();
                rec.record(t, state.ln_abs(0), state.sign(0));
            }
        }
    }
    Ok(rec.finish())
}

/// The random-sign recurrence with an injectable sign source (each call
/// must return +1 or -1), used both by `simulate_ln_abs` and by tests that
/// force deterministic sign patterns.
pub fn random_sign_path_with(
    rho: f64,
    n: u64,
    retain_series: bool,
    signs: &mut dyn FnMut() -> f64,
) -> Result<SimPath> {
    if !rho.is_finite() || rho.abs() <= 1.0 {
        return Err(Error::Domain(format!(
            "rho out of range: explosive model needs |rho| > 1, got {rho}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("path length n must be >= 1".into()));
    }
    let b = (rho * rho - 1.0).sqrt();
    let mut rec = Recorder::new(n, retain_series);
    let mut state = LogScaledState::new(vec![0.0]);
    for t in 1..=n {
        state.components[0] = rho * state.components[0] + b * signs() * state.noise_gain();
        state.renormalize();
        rec.record(t, state.ln_abs(0), state.sign(0));
    }
    Ok(rec.finish())
}

/// The random Fibonacci recurrence with an injectable sign source.
pub fn viswanath_path_with(
    n: u64,
    retain_series: bool,
    signs: &mut dyn FnMut() -> f64,
) -> Result<SimPath> {
    if n == 0 {
        return Err(Error::Domain("path length n must be >= 1".into()));
    }
    let mut rec = Recorder::new(n, retain_series);
    let mut state = LogScaledState::new(vec![1.0, 1.0]);
    rec.record(1, state.ln_abs(0), state.sign(0));
    for t in 2..=n {
        let new = state.components[0] + signs() * state.components[1];
        state.components[1] = state.components[0];
        state.components[0] = new;
        state.renormalize();
        rec.record(t, state.ln_abs(0), state.sign(0));
    }
    Ok(rec.finish())
}

/// Simulates `reps` independent replicate paths in parallel. Replicate `i`
/// always uses stream `i + 1` of the master seed, so the output is
/// byte-identical regardless of thread count.
pub fn sample_paths(
    model: &ModelSpec,
    n: u64,
    reps: u64,
    seed: u64,
    retain_series: bool,
) -> Result<Vec<SimPath>> {
    model.validate()?;
    if reps == 0 {
        return Err(Error::Domain("replicate count must be >= 1".into()));
    }
    let reps_usize =
        usize::try_from(reps).map_err(|_| Error::Domain("replicate count too large".into()))?;
    (0..reps_usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngState::replicate(seed, i as u64);
            simulate_ln_abs(model, n, &mut rng, retain_series)
        })
        .collect()
}

/// Final log-magnitudes `ln |X_n|` of the explosive AR(1) recurrence across
/// replicates, excluding (never observed in practice) exact-zero finals.
pub fn sample_final_values(rho: f64, n: u64, reps: u64, seed: u64) -> Result<Vec<f64>> {
    let model = ModelSpec::nonstationary_ar1(rho)?;
    let paths = sample_paths(&model, n, reps, seed, false)?;
    Ok(paths.into_iter().filter_map(|p| p.ln_abs_final).collect())
}

/// Exact-distribution shortcut for the same quantity: since
/// `X_n ~ N(0, rho^(2n) - 1)`, draw `Z` once per replicate and return
/// `ln|X_n| = n ln|rho| + ln(1 - rho^(-2n))/2 + ln |Z|`. Same law as
/// `sample_final_values`, far cheaper; draws differ, so agreement is
/// distributional, not samplewise.
pub fn sample_final_values_exact(rho: f64, n: u64, reps: u64, seed: u64) -> Result<Vec<f64>> {
    let model = ModelSpec::nonstationary_ar1(rho)?;
    drop(model);
    if n == 0 {
        return Err(Error::Domain("path length n must be >= 1".into()));
    }
    if reps == 0 {
        return Err(Error::Domain("replicate count must be >= 1".into()));
    }
    let log_rho = rho.abs().ln();
    let offset = n as f64 * log_rho + 0.5 * (-(-2.0 * n as f64 * log_rho).exp()).ln_1p();
    let reps_usize =
        usize::try_from(reps).map_err(|_| Error::Domain("replicate count too large".into()))?;
    Ok((0..reps_usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngState::replicate(seed, i as u64);
            let z: f64 = rng.draw(NoiseKind::Gaussian);
            offset + z.abs().ln()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replicate_streams_are_deterministic_and_distinct() {
        let a: Vec<f64> = {
            let mut r = RngState::replicate(42, 0);
            (0..8).map(|_| r.draw(NoiseKind::Gaussian)).collect()
        };
        let b: Vec<f64> = {
            let mut r = RngState::replicate(42, 0);
            (0..8).map(|_| r.draw(NoiseKind::Gaussian)).collect()
        };
        assert_eq!(a, b);
        let c: Vec<f64> = {
            let mut r = RngState::replicate(42, 1);
            (0..8).map(|_| r.draw(NoiseKind::Gaussian)).collect()
        };
        assert_ne!(a, c);
        let d: Vec<f64> = {
            let mut r = RngState::replicate(43, 0);
            (0..8).map(|_| r.draw(NoiseKind::Gaussian)).collect()
        };
        assert_ne!(a, d);
    }

    #[test]
    fn noise_families_have_unit_variance_and_right_support() {
        let mut rng = RngState::root(7);
        for kind in [
            NoiseKind::Gaussian,
            NoiseKind::UniformSym,
            NoiseKind::Rademacher,
        ] {
            let n = 200_000;
            let (mut sum, mut sum2) = (0.0, 0.0);
            for _ in 0..n {
                let x = rng.draw(kind);
                sum += x;
                sum2 += x * x;
                match kind {
                    NoiseKind::UniformSym => assert!(x > -SQRT_3 && x < SQRT_3),
                    NoiseKind::Rademacher => assert!(x == 1.0 || x == -1.0),
                    NoiseKind::Gaussian => assert!(x.is_finite()),
                }
            }
            let mean = sum / n as f64;
            let var = sum2 / n as f64 - mean * mean;
            assert!(mean.abs() < 0.01, "{kind:?} mean {mean}");
            assert!((var - 1.0).abs() < 0.02, "{kind:?} var {var}");
        }
    }

    #[test]
    fn model_validation_rejects_bad_parameters() {
        assert!(ModelSpec::stationary_ar1(1.0, NoiseKind::Gaussian).is_err());
        assert!(ModelSpec::stationary_ar1(-1.2, NoiseKind::Gaussian).is_err());
        assert!(ModelSpec::stationary_ar1(0.5, NoiseKind::Gaussian).is_ok());
        assert!(ModelSpec::nonstationary_ar1(1.0).is_err());
        assert!(ModelSpec::nonstationary_ar1(0.5).is_err());
        assert!(ModelSpec::nonstationary_ar1(-1.5).is_ok());
        assert!(ModelSpec::ar_m(vec![], 1.0, NoiseKind::Gaussian).is_err());
        assert!(ModelSpec::ar_m(vec![1.0; 33], 1.0, NoiseKind::Gaussian).is_err());
        assert!(ModelSpec::ar_m(vec![1.0, 1.0], 0.0, NoiseKind::Gaussian).is_err());
        assert!(ModelSpec::ar_m(vec![1.0, 1.0], 1.0, NoiseKind::Gaussian).is_ok());
        assert!(ModelSpec::random_sign(1.0).is_err());
        assert!(ModelSpec::random_sign(2.0).is_ok());
        let mut rng = RngState::root(0);
        assert!(matches!(
            simulate_ln_abs(&ModelSpec::Viswanath, 0, &mut rng, false),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn stationary_path_reproduces_recurrence() {
        // Replay the generator by hand and compare the recorded series.
        let model = ModelSpec::stationary_ar1(0.5, NoiseKind::Gaussian).unwrap();
        let mut rng = RngState::replicate(123, 0);
        let path = simulate_ln_abs(&model, 50, &mut rng, true).unwrap();
        let series = path.series.as_ref().unwrap();
        assert_eq!(series.len(), 50);

        let mut replay = RngState::replicate(123, 0);
        let c = (1.0f64 - 0.25).sqrt();
        let mut x: f64 = replay.draw(NoiseKind::Gaussian);
        assert_eq!(series[0].ln_abs, x.abs().ln());
        for point in &series[1..] {
            x = 0.5 * x + c * replay.draw(NoiseKind::Gaussian);
            assert_eq!(point.ln_abs, x.abs().ln());
            assert_eq!(point.sign, if x < 0.0 { -1 } else { 1 });
        }
        assert_eq!(path.ln_abs_final, Some(x.abs().ln()));
        let sum: f64 = series.iter().map(|p| p.ln_abs).sum();
        assert_eq!(path.ln_abs_sum, sum);
    }

    #[test]
    fn forced_positive_signs_match_geometric_closed_form() {
        // With every sign +1 the random-sign path is deterministic:
        // X_n = sqrt(rho^2-1) (rho^n - 1)/(rho - 1).
        let rho: f64 = 1.25;
        let n = 400;
        let mut always_plus = || 1.0;
        let path = random_sign_path_with(rho, n, false, &mut always_plus).unwrap();
        let b = (rho * rho - 1.0).sqrt();
        let expect = b.ln() + (rho.powi(n as i32) - 1.0).ln() - (rho - 1.0).ln();
        let got = path.ln_abs_final.unwrap();
        assert!(
            (got - expect).abs() < 1e-9,
            "got {got}, want {expect}"
        );
        assert_eq!(path.final_sign, 1);
        assert_eq!(path.zero_events, 0);
    }

    #[test]
    fn rescaling_survives_growth_far_beyond_f64_range() {
        // 1.25^20000 overflows f64 by thousands of decades; the log-scaled
        // state must track it. Compare against the closed form evaluated
        // in logs: ln X_n = ln b + n ln rho + ln(1 - rho^-n) - ln(rho - 1).
        let rho: f64 = 1.25;
        let n: u64 = 20_000;
        let mut always_plus = || 1.0;
        let path = random_sign_path_with(rho, n, false, &mut always_plus).unwrap();
        let b = (rho * rho - 1.0f64).sqrt();
        let expect = b.ln() + n as f64 * rho.ln() + (-rho.powi(-(n as i32))).ln_1p()
            - (rho - 1.0f64).ln();
        let got = path.ln_abs_final.unwrap();
        assert!(
            (got - expect).abs() < 1e-7 * expect.abs(),
            "got {got}, want {expect}"
        );
    }

    #[test]
    fn viswanath_matches_exact_integer_recursion() {
        // For n <= 80 the path values are integers below 2^53, so the
        // f64 recurrence is exact; reconstruct with i128 arithmetic.
        let mut rng = RngState::replicate(9, 4);
        let mut drawn: Vec<f64> = Vec::new();
        let mut signs = || {
            let s = rng.draw(NoiseKind::Rademacher);
            drawn.push(s);
            s
        };
        let n = 80;
        let path = viswanath_path_with(n, true, &mut signs).unwrap();
        let (mut prev, mut cur): (i128, i128) = (1, 1);
        for (idx, point) in path.series.as_ref().unwrap().iter().enumerate() {
            if idx >= 1 {
                let s = drawn[idx - 1] as i128;
                let new = cur + s * prev;
                prev = cur;
                cur = new;
            }
            let expect_sign = match cur.signum() {
                1 => 1i8,
                -1 => -1,
                _ => 0,
            };
            assert_eq!(point.sign, expect_sign, "sign at t={}", idx + 1);
            if cur == 0 {
                assert_eq!(point.ln_abs, f64::NEG_INFINITY);
            } else {
                let expect = (cur.unsigned_abs() as f64).ln();
                assert!(
                    (point.ln_abs - expect).abs() <= 1e-12 * expect.abs().max(1.0),
                    "ln at t={}: got {}, want {expect}",
                    idx + 1,
                    point.ln_abs
                );
            }
        }
    }

    #[test]
    fn zero_events_are_recorded_and_paths_recover() {
        // Signs -1, +1, ...: X_2 = 1 - 1 = 0, then X_3 = X_2 + X_1 = 1.
        let pattern = [-1.0, 1.0, 1.0, 1.0];
        let mut i = 0;
        let mut signs = || {
            let s = pattern[i % pattern.len()];
            i += 1;
            s
        };
        let path = viswanath_path_with(5, true, &mut signs).unwrap();
        let series = path.series.as_ref().unwrap();
        assert_eq!(series[1].sign, 0);
        assert_eq!(series[1].ln_abs, f64::NEG_INFINITY);
        assert_eq!(path.zero_events, 1);
        assert!(path.ln_abs_final.is_some());
        assert_eq!(path.ln_abs_sum, f64::NEG_INFINITY);
    }

    #[test]
    fn all_zero_state_resets_scale() {
        let mut s = LogScaledState::new(vec![1e-12, 0.0]);
        s.renormalize();
        assert!(s.scale_exp2 != 0);
        s.components = vec![0.0, 0.0];
        s.renormalize();
        assert_eq!(s.scale_exp2, 0);
    }

    #[test]
    fn rescaling_is_exact_to_the_last_bit() {
        // A pure doubling path: X_t = 2 X_(t-1), X_1 = 3. After any number
        // of renormalizations the stored component times 2^scale must be
        // exactly 3 * 2^(t-1), so ln_abs differs from ln 3 + (t-1) ln 2
        // only by readout rounding.
        let mut s = LogScaledState::new(vec![3.0]);
        for t in 2..=600u32 {
            s.components[0] *= 2.0;
            s.renormalize();
            let expect = 3.0f64.ln() + (t - 1) as f64 * core::f64::consts::LN_2;
            let got = s.ln_abs(0);
            assert!(
                (got - expect).abs() <= 1e-12 * expect,
                "t={t}: got {got}, want {expect}"
            );
        }
        // The mantissa itself never picked up error: it is 3 * 2^j for
        // some j, so it is exactly representable and log2(c/3) is integral.
        let j = (s.components[0] / 3.0).log2();
        assert_eq!(j, j.round());
        assert_eq!(s.components[0], 3.0 * j.exp2());
    }

    #[test]
    fn sample_paths_is_order_stable_and_thread_independent() {
        let model = ModelSpec::nonstationary_ar1(1.5).unwrap();
        let a = sample_paths(&model, 100, 16, 5, false).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| sample_paths(&model, 100, 16, 5, false).unwrap());
        let fa: Vec<f64> = a.iter().map(|p| p.ln_abs_final.unwrap()).collect();
        let fb: Vec<f64> = b.iter().map(|p| p.ln_abs_final.unwrap()).collect();
        assert_eq!(fa, fb);
        // Each replicate equals its standalone simulation.
        let mut rng = RngState::replicate(5, 3);
        let solo = simulate_ln_abs(&model, 100, &mut rng, false).unwrap();
        assert_eq!(fa[3], solo.ln_abs_final.unwrap());
    }

    #[test]
    fn exact_shortcut_matches_recurrence_in_distribution() {
        // Both routes target E ln|X_n| = mu_n; compare sample means loosely
        // here (the full two-sample KS oracle lives in the integration
        // tests).
        let rho = 1.5;
        let n = 60;
        let reps = 4000;
        let a = sample_final_values(rho, n, reps, 11).unwrap();
        let b = sample_final_values_exact(rho, n, reps, 12).unwrap();
        assert_eq!(a.len(), reps as usize);
        let ma = a.iter().sum::<f64>() / a.len() as f64;
        let mb = b.iter().sum::<f64>() / b.len() as f64;
        // sigma/sqrt(reps) ~ 0.018; allow six of those.
        assert!((ma - mb).abs() < 0.11, "means {ma} vs {mb}");
    }

    #[test]
    fn wright_trefethen_and_viswanath_run() {
        let mut rng = RngState::replicate(3, 0);
        let p = simulate_ln_abs(&ModelSpec::WrightTrefethen, 5000, &mut rng, false).unwrap();
        assert!(p.ln_abs_final.unwrap().is_finite());
        let mut rng = RngState::replicate(3, 1);
        let v = simulate_ln_abs(&ModelSpec::Viswanath, 5000, &mut rng, false).unwrap();
        assert!(v.ln_abs_final.unwrap().is_finite());
        // Growth rates land in plausible neighborhoods even on one path.
        let rate = v.ln_abs_final.unwrap() / 5000.0;
        assert!((rate - 0.1239755990).abs() < 0.05, "viswanath rate {rate}");
    }
}
