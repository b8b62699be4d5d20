//! The residual distribution of explosive log-magnitudes.
//!
//! For the nonstationary AR(1) recurrence `X_t = rho X_(t-1) +
//! sqrt(rho^2 - 1) eps_t` with `|rho| > 1`, gaussian noise, and `X_0 = 0`,
//! the marginal is `X_n ~ N(0, rho^(2n) - 1)` exactly, so
//!
//! `ln |X_n| = (1/2) ln(rho^(2n) - 1) + ln |Z|`, `Z` standard normal.
//!
//! Centering by `mu_n = (ln(rho^(2n) - 1) - ln 2 - gamma)/2` and scaling by
//! `sigma = pi/(2 sqrt 2)` gives a pivot whose law is free of both `rho`
//! and `n`: with `z = pi x / sqrt 2 - gamma`,
//!
//! `pdf(x) = (1/2) sqrt(pi/2) exp(-e^z/4 + z/2)`, `cdf(x) = erf(e^(z/2)/2)`.
//!
//! The same pivot governs the explosive Ornstein-Uhlenbeck process
//! (`theta < 0`) through `rho = e^(-theta)`.

use crate::asymptotics::check_digits;
use crate::bigfloat::{BigFloat, NamedConstant};
use crate::error::{Error, Result};
use std::cmp::Ordering;

/// Standard deviation of `ln |Z|` for standard normal `Z`: pi/(2 sqrt 2).
pub const RESIDUAL_SIGMA: f64 = 1.110_720_734_539_591_6;
/// Euler-Mascheroni constant, f64.
pub const EULER_GAMMA_F64: f64 = 0.577_215_664_901_532_9;

/// An autoregression coefficient in the explosive range `|rho| > 1`,
/// kept as the exact decimal string it was given as.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplosiveRho {
    text: String,
    value: f64,
}

impl ExplosiveRho {
    pub fn new(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let probe = BigFloat::parse(trimmed, 40)?;
        if probe.abs().cmp_value(&BigFloat::one(40)?) != Ordering::Greater {
            return Err(Error::Domain(format!(
                "rho out of range: |rho| must be > 1, got {trimmed}"
            )));
        }
        let value = trimmed
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("rho `{trimmed}` is not a decimal number")))?;
        Ok(Self {
            text: trimmed.to_string(),
            value,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn as_f64(&self) -> f64 {
        self.value
    }

    pub(crate) fn to_bigfloat(&self, precision: u32) -> BigFloat {
        BigFloat::parse(&self.text, precision).expect("validated rho string")
    }
}

/// The standardized residual law (a reflected Gumbel-type density). All
/// methods are pure and safe for concurrent use.
#[derive(Debug, Clone, Copy, Default)]
pub struct ResidualDist;

impl ResidualDist {
    /// Density at `x`, f64 path.
    pub fn pdf(&self, x: f64) -> f64 {
        let z = core::f64::consts::PI * x / core::f64::consts::SQRT_2 - EULER_GAMMA_F64;
        // exp(z) overflows to +inf for z > ~709; the outer exp then
        // correctly underflows to zero.
        0.5 * (core::f64::consts::PI / 2.0).sqrt() * (-z.exp() / 4.0 + z / 2.0).exp()
    }

    /// Distribution function at `x`, f64 path.
    pub fn cdf(&self, x: f64) -> f64 {
        let z = core::f64::consts::PI * x / core::f64::consts::SQRT_2 - EULER_GAMMA_F64;
        libm::erf((z / 2.0).exp() / 2.0)
    }

    /// Distribution function in high precision.
    pub fn cdf_big(&self, x: &BigFloat) -> Result<BigFloat> {
        let w = x.precision();
        let pi = NamedConstant::Pi.value(w.min(55))?.to_precision_raw(w);
        let gamma = NamedConstant::EulerGamma.value(w.min(55))?.to_precision_raw(w);
        let two = BigFloat::int_raw(2, w);
        let sqrt2 = two.sqrt()?;
        let z = pi.mul(x)?.div(&sqrt2)?.sub(&gamma)?;
        let u = z.div(&two)?.exp()?.div(&two)?;
        u.erf()
    }

    /// Density in high precision.
    pub fn pdf_big(&self, x: &BigFloat) -> Result<BigFloat> {
        let w = x.precision();
        let pi = NamedConstant::Pi.value(w.min(55))?.to_precision_raw(w);
        let gamma = NamedConstant::EulerGamma.value(w.min(55))?.to_precision_raw(w);
        let two = BigFloat::int_raw(2, w);
        let four = BigFloat::int_raw(4, w);
        let z = pi.mul(x)?.div(&two.sqrt()?)?.sub(&gamma)?;
        let arg = z.div(&two)?.sub(&z.exp()?.div(&four)?)?;
        let front = pi.div(&two)?.sqrt()?.div(&two)?;
        front.mul(&arg.exp()?)
    }

    /// Quantile at probability `p` (an exact decimal string in (0, 1)),
    /// accurate to `digits` decimal places. Bracketing starts on [-20, 20],
    /// which covers p in [1e-10, 1 - 1e-40]; values outside that range are
    /// rejected.
    pub fn quantile(&self, p: &str, digits: u32) -> Result<BigFloat> {
        check_digits(digits)?;
        let w = digits + 15;
        let p_bf = BigFloat::parse(p, w)?;
        let one = BigFloat::int_raw(1, w);
        if p_bf.signum() <= 0 || p_bf.cmp_value(&one) != Ordering::Less {
            return Err(Error::Domain(format!(
                "quantile probability must lie strictly in (0, 1), got {p}"
            )));
        }
        let floor_p = BigFloat::parse("1e-10", w)?;
        let ceil_gap = BigFloat::parse("1e-40", w)?;
        if p_bf.cmp_value(&floor_p) == Ordering::Less
            || one.sub(&p_bf)?.cmp_value(&ceil_gap) == Ordering::Less
        {
            return Err(Error::Domain(format!(
                "quantile probability {p} outside the bracketed range [1e-10, 1 - 1e-40]"
            )));
        }
        // Coarse f64 bisection down to width 1e-3.
        let p_f = p_bf.to_f64();
        let (mut lo, mut hi) = (-20.0f64, 20.0f64);
        while hi - lo > 1e-3 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < p_f {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // Newton refinement in high precision; the density is smooth and
        // strictly positive on the bracket so convergence is quadratic.
        let mut x = BigFloat::parse(&format!("{:.17e}", 0.5 * (lo + hi)), w)?;
        let step_tol = BigFloat::parse(&format!("1e-{}", digits + 3), w)?;
        let mut converged = false;
        for _ in 0..80 {
            let f = self.cdf_big(&x)?.sub(&p_bf)?;
            let fp = self.pdf_big(&x)?;
            let delta = f.div(&fp)?;
            x = x.sub(&delta)?;
            if delta.abs().cmp_value(&step_tol) == Ordering::Less {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!(
                "quantile Newton iteration did not reach tolerance for p = {p}"
            )));
        }
        // Certify the root: |cdf(x) - p| < 10^-(digits+2).
        let resid = self.cdf_big(&x)?.sub(&p_bf)?.abs();
        let cert = BigFloat::parse(&format!("1e-{}", digits + 2), w)?;
        if resid.cmp_value(&cert) != Ordering::Less {
            return Err(Error::Convergence(format!(
                "quantile residual {resid} exceeds certification tolerance for p = {p}"
            )));
        }
        Ok(x)
    }

    /// Standardized moments: mean 0, variance 1, skewness
    /// `-28 sqrt(2) zeta(3) / pi^3`, excess kurtosis 4 (standardized fourth
    /// moment 7).
    pub fn moments(&self, digits: u32) -> Result<ResidualMoments> {
        check_digits(digits)?;
        let w = digits + 12;
        let pi = NamedConstant::Pi.value(w)?;
        let zeta3 = NamedConstant::Zeta3.value(w)?;
        let two = BigFloat::int_raw(2, w);
        let skew = BigFloat::int_raw(28, w)
            .mul(&two.sqrt()?)?
            .mul(&zeta3)?
            .div(&pi.powi(3)?)?
            .neg();
        Ok(ResidualMoments {
            mean: BigFloat::zero(w)?,
            variance: BigFloat::one(w)?,
            skewness: skew,
            excess_kurtosis: BigFloat::from_u64(4, w)?,
            fourth_standardized: BigFloat::from_u64(7, w)?,
        })
    }

    /// Location of the density maximum, `sqrt(2) (ln 2 + gamma) / pi`.
    pub fn mode(&self, digits: u32) -> Result<BigFloat> {
        check_digits(digits)?;
        let w = digits + 12;
        let ln2 = NamedConstant::Ln2.value(w)?;
        let gamma = NamedConstant::EulerGamma.value(w)?;
        let pi = NamedConstant::Pi.value(w)?;
        BigFloat::int_raw(2, w)
            .sqrt()?
            .mul(&ln2.add(&gamma)?)?
            .div(&pi)
    }
}

/// Moments of the standardized residual law.
#[derive(Debug, Clone)]
pub struct ResidualMoments {
    pub mean: BigFloat,
    pub variance: BigFloat,
    pub skewness: BigFloat,
    pub excess_kurtosis: BigFloat,
    pub fourth_standardized: BigFloat,
}

/// Shared tail of the centering computations:
/// `(ln(t - 1) - ln 2 - gamma)/2` for `t = rho^(2n)` or `t = e^(-2 theta T)`.
fn center_from_growth(t: &BigFloat, w: u32) -> Result<BigFloat> {
    let one = BigFloat::int_raw(1, w);
    let gap = t.sub(&one)?;
    if gap.signum() <= 0 {
        return Err(Error::Precision(
            "growth factor is indistinguishable from 1 at working precision".into(),
        ));
    }
    let ln2 = NamedConstant::Ln2.value(w.min(55))?.to_precision_raw(w);
    let gamma = NamedConstant::EulerGamma.value(w.min(55))?.to_precision_raw(w);
    gap.ln()?
        .sub(&ln2)?
        .sub(&gamma)?
        .div(&BigFloat::int_raw(2, w))
}

/// Working precision for a centering value: `digits` decimals plus guards
/// for the integer part and for cancellation in `rho^(2n) - 1` when the
/// growth is slow. Fails when the pinned 55-digit gamma literal cannot
/// cover the request.
fn centering_precision(log_growth: f64, digits: u32) -> Result<u32> {
    // log_growth = 2 n ln|rho| > 0.
    let gap = if log_growth < 700.0 {
        log_growth.exp_m1()
    } else {
        f64::INFINITY
    };
    if !(gap > 0.0) {
        return Err(Error::Precision(
            "rho is too close to 1: rho^(2n) - 1 underflows the supported precision".into(),
        ));
    }
    let cancel = if gap < 1.0 {
        (-gap.log10()).ceil() as u32 + 2
    } else {
        0
    };
    let ln_gap = if gap.is_finite() {
        gap.ln()
    } else {
        log_growth
    };
    let magnitude = ((ln_gap.abs() + 2.0) / 2.0).max(1.0);
    let int_digits = magnitude.log10().ceil().max(0.0) as u32 + 1;
    let w = digits + 10 + cancel + int_digits;
    if w > 55 {
        return Err(Error::Precision(format!(
            "centering needs {w} working digits but the gamma literal is pinned to 55; \
             reduce digits or move rho away from 1"
        )));
    }
    Ok(w)
}

/// Centering constant `mu_n = (ln(rho^(2n) - 1) - ln 2 - gamma)/2` of
/// `ln |X_n|`, accurate to `digits` decimal places.
pub fn mu_n(rho: &ExplosiveRho, n: u64, digits: u32) -> Result<BigFloat> {
    check_digits(digits)?;
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let two_n = i64::try_from(n)
        .ok()
        .and_then(|v| v.checked_mul(2))
        .ok_or_else(|| Error::Domain("n too large".into()))?;
    let log_growth = 2.0 * n as f64 * rho.as_f64().abs().ln();
    let w = centering_precision(log_growth, digits)?;
    let t = rho.to_bigfloat(w).abs().powi(two_n)?;
    center_from_growth(&t, w)
}

/// Ornstein-Uhlenbeck centering: for `dY = -theta Y dt + sqrt(2|theta|) dW`
/// with `theta < 0` and `Y_0 = 0`, `Y_T ~ N(0, e^(-2 theta T) - 1)` and
/// `E ln |Y_T| = (ln(e^(-2 theta T) - 1) - ln 2 - gamma)/2`, matching
/// `mu_n` under `rho = e^(-theta)`, `n = T`.
pub fn ou_mu(theta: &str, t_steps: u64, digits: u32) -> Result<BigFloat> {
    check_digits(digits)?;
    if t_steps == 0 {
        return Err(Error::Domain("T must be >= 1".into()));
    }
    let trimmed = theta.trim();
    let theta_probe = BigFloat::parse(trimmed, 40)?;
    if theta_probe.signum() >= 0 {
        return Err(Error::Domain(format!(
            "explosive OU requires theta < 0, got {trimmed}"
        )));
    }
    let theta_f = trimmed
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("theta `{trimmed}` is not a decimal number")))?;
    let log_growth = -2.0 * theta_f * t_steps as f64;
    let w = centering_precision(log_growth, digits)?;
    let t_i = i64::try_from(t_steps).map_err(|_| Error::Domain("T too large".into()))?;
    let exponent = BigFloat::parse(trimmed, w)?
        .mul(&BigFloat::int_raw(-2, w))?
        .mul(&BigFloat::int_raw(t_i, w))?;
    let t = exponent.exp()?;
    center_from_growth(&t, w)
}

/// Double-precision `mu_n`, arranged so nothing overflows at large `n`:
/// `mu_n = n ln|rho| + ln(1 - rho^(-2n))/2 - (ln 2 + gamma)/2`.
pub fn mu_n_f64(rho: &ExplosiveRho, n: u64) -> f64 {
    let log_rho = rho.as_f64().abs().ln();
    let n_f = n as f64;
    let tail = (-2.0 * n_f * log_rho).exp();
    n_f * log_rho + 0.5 * (-tail).ln_1p() - 0.5 * (core::f64::consts::LN_2 + EULER_GAMMA_F64)
}

/// Standardizes an observed final log-magnitude to the pivot scale,
/// f64 path: `(ln|X_n| - mu_n) / sigma`.
pub fn standardize(ln_abs_xn: f64, rho: &ExplosiveRho, n: u64) -> f64 {
    (ln_abs_xn - mu_n_f64(rho, n)) / RESIDUAL_SIGMA
}
