//! Asymptotic constants for time averages of `ln |X_t|`.
//!
//! For a stationary AR(1) process with unit variance and gaussian noise,
//! `ln |X_t|` has mean `mu = -(ln 2 + gamma)/2` and variance
//! `sigma^2 = pi^2/8`. Its lag-`l` autocovariance expands as
//! `sum_k c_k rho^(2kl)` with exact rational coefficients
//! `c_k = nu_(2k)^2 / (2k)! = 4^(k-1) / (k^2 binom(2k, k))`, which yields a
//! Lambert-type series for the variance constant of the normalized mean,
//!
//! `xi_rho^2 = pi^2/8 + 2 sum_k c_k q^k / (1 - q^k)`, `q = rho^2`.
//!
//! The Ornstein-Uhlenbeck analogue over a continuous time window has
//! `eta_theta^2 = (pi^2 ln 2 / 4 - 7 zeta(3) / 8) / theta`.
//!
//! Every series here has strictly positive terms with consecutive ratio
//! below `q`, so truncation tails are bounded by `term / (1 - q)`; sums stop
//! once the next term is below both `10^-(digits+5)` and
//! `10^-(digits+2) * (1 - q)`, keeping the total tail under
//! `10^-(digits+2)`.

use crate::bigfloat::{BigFloat, NamedConstant};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use std::cmp::Ordering;

/// Largest supported `digits` argument (decimal places after the point).
/// The pinned 60-digit constant literals bound how far working precision
/// can stretch.
pub const MAX_DIGITS: u32 = 40;

/// Hard cap on series terms; reaching it means `rho` is too close to 1
/// for the requested digits and the call reports a convergence error.
const MAX_SERIES_TERMS: u64 = 20_000;

pub(crate) fn check_digits(digits: u32) -> Result<()> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Error::Precision(format!(
            "digits must be between 1 and {MAX_DIGITS}, got {digits}"
        )));
    }
    Ok(())
}

/// Working precision in significant digits for a result with one integer
/// digit and `digits` decimal places.
fn working(digits: u32) -> u32 {
    digits + 12
}

/// An autoregression coefficient in the stationary range `|rho| < 1`,
/// kept as the exact decimal string it was given as.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryRho {
    text: String,
    value: f64,
}

impl StationaryRho {
    pub fn new(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let probe = BigFloat::parse(trimmed, 40)?;
        if probe.abs().cmp_value(&BigFloat::one(40)?) != Ordering::Less {
            return Err(Error::Domain(format!(
                "rho out of range: |rho| must be < 1, got {trimmed}"
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

/// A positive Ornstein-Uhlenbeck reversion rate, kept as the exact decimal
/// string it was given as.
#[derive(Debug, Clone, PartialEq)]
pub struct OuTheta {
    text: String,
    value: f64,
}

impl OuTheta {
    pub fn new(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let probe = BigFloat::parse(trimmed, 40)?;
        if probe.signum() <= 0 {
            return Err(Error::Domain(format!(
                "theta out of range: must be > 0, got {trimmed}"
            )));
        }
        let value = trimmed
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("theta `{trimmed}` is not a decimal number")))?;
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
        BigFloat::parse(&self.text, precision).expect("validated theta string")
    }
}

/// Absolute moment scale factor `nu_(2k) = 2^(k-1) (k-1)!` appearing in
/// `E[(ln|Z|)-centered]` cumulant expansions; `k >= 1`.
pub fn nu_2k(k: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::Domain("nu_2k index k must be >= 1".into()));
    }
    let mut v = BigUint::from(1u32) << (k - 1);
    for j in 2..k {
        v *= BigUint::from(j);
    }
    Ok(v)
}

/// Exact rational series coefficients `c_k = 4^(k-1) / (k^2 binom(2k, k))`,
/// produced incrementally so each numerator and denominator stays an exact
/// integer.
struct CoefficientIter {
    k: u64,
    pow4: BigUint,
    binom: BigUint,
}

impl CoefficientIter {
    fn new() -> Self {
        CoefficientIter {
            k: 1,
            pow4: BigUint::from(1u32),
            binom: BigUint::from(2u32),
        }
    }

    /// Returns `(k, c_k)` with the rational rounded once to `precision`.
    fn next_coeff(&mut self, precision: u32) -> (u64, BigFloat) {
        let k = self.k;
        let den = &self.binom * BigUint::from(k * k);
        let num = BigFloat::from_bigint_raw(BigInt::from(self.pow4.clone()), 0, precision);
        let den = BigFloat::from_bigint_raw(BigInt::from(den), 0, precision);
        let c = num.div(&den).expect("coefficient ratio");
        // Advance: 4^k and binom(2k+2, k+1) = binom(2k, k) * 2(2k+1)/(k+1).
        self.pow4 *= BigUint::from(4u32);
        self.binom = (&self.binom * BigUint::from(2 * (2 * k + 1))) / BigUint::from(k + 1);
        self.k += 1;
        (k, c)
    }
}

fn int_bf(v: u64, precision: u32) -> Result<BigFloat> {
    let v = i64::try_from(v).map_err(|_| Error::Domain(format!("{v} exceeds i64 range")))?;
    Ok(BigFloat::int_raw(v, precision))
}

/// Mean and standard deviation of `ln |Z|`, `Z` standard normal:
/// `mu = -(ln 2 + gamma)/2`, `sigma = pi / (2 sqrt 2)`.
pub fn mu_sigma(digits: u32) -> Result<(BigFloat, BigFloat)> {
    check_digits(digits)?;
    let w = working(digits);
    let ln2 = NamedConstant::Ln2.value(w)?;
    let gamma = NamedConstant::EulerGamma.value(w)?;
    let two = BigFloat::int_raw(2, w);
    let mu = ln2.add(&gamma)?.div(&two)?.neg();
    let pi = NamedConstant::Pi.value(w)?;
    let sigma = pi.div(&two.mul(&two.sqrt()?)?)?;
    Ok((mu, sigma))
}

/// Shared driver for the positive series with term ratio < `q`: applies the
/// truncation rule against `limit = min(10^-(digits+5), 10^-(digits+2)(1-q))`
/// and reports non-convergence past the term cap.
fn sum_series(
    mut term_for: impl FnMut(u64, &BigFloat) -> Result<BigFloat>,
    q_like: &BigFloat,
    digits: u32,
    w: u32,
    what: &str,
) -> Result<BigFloat> {
    let one = BigFloat::int_raw(1, w);
    let one_minus_q = one.sub(q_like)?;
    let tau5 = BigFloat::from_bigint_raw(BigInt::from(1), -i64::from(digits + 5), w);
    let tau2 = BigFloat::from_bigint_raw(BigInt::from(1), -i64::from(digits + 2), w);
    let limit = {
        let scaled = tau2.mul(&one_minus_q)?;
        if scaled.cmp_value(&tau5) == Ordering::Less {
            scaled
        } else {
            tau5
        }
    };
    let mut coeffs = CoefficientIter::new();
    let mut sum = BigFloat::zero(10)?.to_precision_raw(w);
    loop {
        let (k, c) = coeffs.next_coeff(w);
        let term = term_for(k, &c)?;
        if term.cmp_value(&limit) == Ordering::Less {
            // Ratio of consecutive terms is below q, so the dropped tail is
            // under term/(1-q) <= 10^-(digits+2).
            debug_assert!(
                term.div(&one_minus_q)
                    .map(|tail| tail.cmp_value(&tau2) != Ordering::Greater)
                    .unwrap_or(false),
                "tail bound violated in {what}"
            );
            return Ok(sum);
        }
        sum = sum.add(&term)?;
        if k >= MAX_SERIES_TERMS {
            return Err(Error::Convergence(format!(
                "{what} needs more than {MAX_SERIES_TERMS} terms; rho is too close to 1 \
                 for {digits} digits"
            )));
        }
    }
}

/// The asymptotic standard deviation `xi_rho` of the normalized time
/// average `sqrt(n) * mean(ln |X_t|)`, accurate to `digits` decimal places.
pub fn xi(rho: &StationaryRho, digits: u32) -> Result<BigFloat> {
    check_digits(digits)?;
    let w = working(digits);
    let pi = NamedConstant::Pi.value(w)?;
    let base = pi.mul(&pi)?.div(&BigFloat::int_raw(8, w))?;
    let rho_bf = rho.to_bigfloat(w);
    if rho_bf.is_zero() {
        return base.sqrt();
    }
    let q = rho_bf.mul(&rho_bf)?;
    let one = BigFloat::int_raw(1, w);
    let two = BigFloat::int_raw(2, w);
    let mut qk = one.clone();
    let sum = sum_series(
        |_k, c| {
            qk = qk.mul(&q)?;
            let denom = one.sub(&qk)?;
            two.mul(c)?.mul(&qk)?.div(&denom)
        },
        &q,
        digits,
        w,
        "xi series",
    )?;
    base.add(&sum)?.sqrt()
}

/// Lag-`l` autocovariance of `ln |X_t|` for the stationary gaussian AR(1):
/// `sum_k c_k q^(k l)` with `q = rho^2`. `l >= 1`.
pub fn log_abs_autocov(rho: &StationaryRho, lag: u64, digits: u32) -> Result<BigFloat> {
    check_digits(digits)?;
    if lag == 0 {
        return Err(Error::Domain("autocovariance lag must be >= 1".into()));
    }
    let w = working(digits);
    let rho_bf = rho.to_bigfloat(w);
    if rho_bf.is_zero() {
        return BigFloat::zero(w.min(crate::bigfloat::MAX_PRECISION));
    }
    let lag_i = i64::try_from(lag).map_err(|_| Error::Domain("lag exceeds i64".into()))?;
    let q = rho_bf.mul(&rho_bf)?;
    let r = q.powi(lag_i)?;
    let mut rk = BigFloat::int_raw(1, w);
    sum_series(
        |_k, c| {
            rk = rk.mul(&r)?;
            c.mul(&rk)
        },
        &r,
        digits,
        w,
        "autocovariance series",
    )
}

/// Variance of the normalized partial sum at finite `n`,
/// `Var(sum_t ln|X_t| / sqrt(n))`, which increases to `xi_rho^2` as
/// `n -> infinity`. At `n = 1` it reduces to `pi^2/8` exactly.
pub fn finite_n_variance(rho: &StationaryRho, n: u64, digits: u32) -> Result<BigFloat> {
    check_digits(digits)?;
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let w = working(digits);
    let pi = NamedConstant::Pi.value(w)?;
    let base = pi.mul(&pi)?.div(&BigFloat::int_raw(8, w))?;
    let rho_bf = rho.to_bigfloat(w);
    if rho_bf.is_zero() {
        return Ok(base);
    }
    let n_i = i64::try_from(n).map_err(|_| Error::Domain("n exceeds i64".into()))?;
    let q = rho_bf.mul(&rho_bf)?;
    let qn = q.powi(n_i)?;
    let n_bf = int_bf(n, w)?;
    let two_over_n = BigFloat::int_raw(2, w).div(&n_bf)?;
    let one = BigFloat::int_raw(1, w);
    let mut qk = one.clone();
    let mut qkn = one.clone();
    let sum = sum_series(
        |_k, c| {
            qk = qk.mul(&q)?;
            qkn = qkn.mul(&qn)?;
            let d = one.sub(&qk)?;
            // n/(1-q^k) - (1-q^(kn))/(1-q^k)^2, the covariance mass of the
            // lag window at this k.
            let inner = n_bf
                .div(&d)?
                .sub(&one.sub(&qkn)?.div(&d.mul(&d)?)?)?;
            two_over_n.mul(c)?.mul(&qk)?.mul(&inner)
        },
        &q,
        digits,
        w,
        "finite-n variance series",
    )?;
    base.add(&sum)
}

/// The OU analogue of `xi`: `eta_theta = sqrt((pi^2 ln2/4 - 7 zeta3/8)/theta)`.
pub fn eta(theta: &OuTheta, digits: u32) -> Result<BigFloat> {
    check_digits(digits)?;
    let w = working(digits);
    let pi = NamedConstant::Pi.value(w)?;
    let ln2 = NamedConstant::Ln2.value(w)?;
    let zeta3 = NamedConstant::Zeta3.value(w)?;
    let four = BigFloat::int_raw(4, w);
    let a = pi.mul(&pi)?.mul(&ln2)?.div(&four)?;
    let b = BigFloat::int_raw(7, w)
        .mul(&zeta3)?
        .div(&BigFloat::int_raw(8, w))?;
    a.sub(&b)?.div(&theta.to_bigfloat(w))?.sqrt()
}

/// Partial sum and tail bound for the central-binomial series representation
/// of `eta_1^2`:
///
/// `eta_1^2 = sum_(n>=0) 2^(2n-1) / (binom(2n,n) (n+1)^2 (2n+1))`.
///
/// Terms satisfy `t_n <= (sqrt(pi)/2) n^(-5/2)`, giving the integral tail
/// bound `(sqrt(pi)/3) N^(-3/2)` after summing through `n = N` (and the
/// `n = 0` term bound `(sqrt(pi)/2)(5/3)` when `N = 0`). Returned values
/// carry 25 significant digits.
pub struct EtaSeriesCheck {
    pub partial_sum: BigFloat,
    pub tail_bound: BigFloat,
}

/// Evaluates the check series through term `n_terms` inclusive.
pub fn eta_series_check(n_terms: u64) -> Result<EtaSeriesCheck> {
    const N_CAP: u64 = 1_000_000;
    if n_terms > N_CAP {
        return Err(Error::Domain(format!(
            "eta series check supports up to {N_CAP} terms, got {n_terms}"
        )));
    }
    let w: u32 = 30;
    // t_0 = 1/2; t_(n+1) = t_n * 2(n+1)^3 / ((n+2)^2 (2n+3)).
    let mut term = BigFloat::int_raw(1, w).div(&BigFloat::int_raw(2, w))?;
    let mut sum = term.clone();
    for n in 0..n_terms {
        let n1 = (n + 1) as i64;
        let num = 2 * n1 * n1 * n1;
        let den = (n1 + 1) * (n1 + 1) * (2 * n1 + 1);
        term = term
            .mul(&BigFloat::int_raw(num, w))?
            .div(&BigFloat::int_raw(den, w))?;
        sum = sum.add(&term)?;
    }
    let sqrt_pi = NamedConstant::Pi.value(w)?.sqrt()?;
    let tail_bound = if n_terms == 0 {
        // Integral bound from n = 1 plus nothing else: (sqrt(pi)/2)(5/3)
        // dominates the whole remainder after t_0.
        sqrt_pi
            .mul(&BigFloat::int_raw(5, w))?
            .div(&BigFloat::int_raw(6, w))?
    } else {
        let n_bf = int_bf(n_terms, w)?;
        let n_three_halves = n_bf.mul(&n_bf.sqrt()?)?;
        sqrt_pi
            .div(&BigFloat::int_raw(3, w))?
            .div(&n_three_halves)?
    };
    Ok(EtaSeriesCheck {
        partial_sum: sum.with_precision(25)?,
        tail_bound: tail_bound.with_precision(25)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_decimals(got: &BigFloat, want: &str, decimals: u32) {
        let want_bf = BigFloat::parse(want, 60).unwrap();
        let diff = got
            .to_precision_raw(60)
            .sub(&want_bf)
            .unwrap()
            .abs();
        let tol = BigFloat::parse(&format!("1e-{decimals}"), 60).unwrap();
        assert!(
            diff.cmp_value(&tol) == Ordering::Less,
            "got {got}, want {want} to {decimals} decimals (diff {diff})"
        );
    }

    #[test]
    fn rho_validation() {
        assert!(StationaryRho::new("0.5").is_ok());
        assert!(StationaryRho::new("-0.99").is_ok());
        assert!(StationaryRho::new("0").is_ok());
        assert!(matches!(
            StationaryRho::new("1"),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            StationaryRho::new("-1.0"),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            StationaryRho::new("1.2"),
            Err(Error::Domain(_))
        ));
        assert!(StationaryRho::new("abc").is_err());
    }

    #[test]
    fn theta_validation() {
        assert!(OuTheta::new("1").is_ok());
        assert!(OuTheta::new("0.25").is_ok());
        assert!(matches!(OuTheta::new("0"), Err(Error::Domain(_))));
        assert!(matches!(OuTheta::new("-1"), Err(Error::Domain(_))));
    }

    #[test]
    fn nu_values() {
        // 2^(k-1) (k-1)! for k = 1..5: 1, 2, 8, 48, 384.
        let want = [1u64, 2, 8, 48, 384];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(nu_2k(k as u64 + 1).unwrap(), BigUint::from(*w));
        }
        assert!(nu_2k(0).is_err());
    }

    #[test]
    fn coefficients_are_exact_rationals() {
        // c_1 = 1/2, c_2 = 2/12 = 1/6... check against 4^(k-1)/(k^2 C(2k,k))
        // evaluated separately: c_3 = 16/(9*20) = 4/45, c_4 = 64/(16*70) = 2/35.
        let mut it = CoefficientIter::new();
        let (_, c1) = it.next_coeff(30);
        assert_decimals(&c1, "0.5", 25);
        let (_, c2) = it.next_coeff(30);
        assert_decimals(&c2, "0.16666666666666666666666666667", 25);
        let (_, c3) = it.next_coeff(30);
        assert_decimals(&c3, "0.08888888888888888888888888889", 25);
        let (_, c4) = it.next_coeff(30);
        assert_decimals(&c4, "0.05714285714285714285714285714", 25);
    }

    #[test]
    fn mu_sigma_reference() {
        let (mu, sigma) = mu_sigma(25).unwrap();
        assert_decimals(&mu, "-0.6351814227307390850118721058", 25);
        assert_decimals(&sigma, "1.110720734539591561753970248", 25);
        // sigma^2 = pi^2/8.
        let s2 = sigma.mul(&sigma).unwrap();
        assert_decimals(&s2, "1.233700550136169827354311375", 24);
    }

    #[test]
    fn xi_reference_table() {
        let cases = [
            ("0.1", "1.1152735430526368023286147237"),
            ("0.3", "1.1556216535198683760241730583"),
            ("0.5", "1.2619922242312294797384047287"),
            ("0.7", "1.5278373582865173763622173935"),
            ("0.9", "2.5556407288713212575260346829"),
        ];
        for (rho, want) in cases {
            let r = StationaryRho::new(rho).unwrap();
            let got = xi(&r, 25).unwrap();
            assert_decimals(&got, want, 24);
        }
    }

    #[test]
    fn xi_at_zero_is_sigma() {
        let r = StationaryRho::new("0").unwrap();
        let got = xi(&r, 25).unwrap();
        assert_decimals(&got, "1.110720734539591561753970248", 25);
    }

    #[test]
    fn xi_is_even_and_increasing_in_magnitude() {
        let grid = ["0.05", "0.15", "0.35", "0.55", "0.75", "0.95"];
        let mut prev = xi(&StationaryRho::new("0").unwrap(), 20).unwrap();
        for rho in grid {
            let pos = xi(&StationaryRho::new(rho).unwrap(), 20).unwrap();
            let neg = xi(&StationaryRho::new(&format!("-{rho}")).unwrap(), 20).unwrap();
            assert!(pos.eq_value(&neg), "xi not even at rho = {rho}");
            assert!(
                pos.cmp_value(&prev) == Ordering::Greater,
                "xi not increasing at rho = {rho}"
            );
            prev = pos;
        }
    }

    #[test]
    fn xi_rejects_bad_digits() {
        let r = StationaryRho::new("0.5").unwrap();
        assert!(matches!(xi(&r, 0), Err(Error::Precision(_))));
        assert!(matches!(xi(&r, 41), Err(Error::Precision(_))));
    }

    #[test]
    fn autocov_reference_values() {
        let half = StationaryRho::new("0.5").unwrap();
        let got = log_abs_autocov(&half, 1, 25).unwrap();
        assert_decimals(&got, "0.1370778389040188697060346", 24);
        let got2 = log_abs_autocov(&half, 2, 25).unwrap();
        assert_decimals(&got2, "0.03192365566933298290290573", 24);
        let r3 = StationaryRho::new("0.3").unwrap();
        let got3 = log_abs_autocov(&r3, 1, 25).unwrap();
        assert_decimals(&got3, "0.04641880670547336556909428", 24);
        // Lag 0 is rejected; rho = 0 gives zero covariance at every lag.
        assert!(log_abs_autocov(&half, 0, 20).is_err());
        let zero = StationaryRho::new("0").unwrap();
        assert!(log_abs_autocov(&zero, 3, 20).unwrap().is_zero());
    }

    #[test]
    fn finite_n_variance_reference_values() {
        let cases = [
            ("0.3", 10, "1.324304945377525032442988"),
            ("0.3", 100, "1.334345760013309850012076"),
            ("0.7", 10, "2.128373088708218234808249"),
            ("0.7", 100, "2.313680570034859789746855"),
            ("0.5", 100, "1.587908743548677540274910"),
        ];
        for (rho, n, want) in cases {
            let r = StationaryRho::new(rho).unwrap();
            let got = finite_n_variance(&r, n, 24).unwrap();
            assert_decimals(&got, want, 23);
        }
    }

    #[test]
    fn finite_n_variance_degenerates_to_sigma_squared_at_n1() {
        let r = StationaryRho::new("0.5").unwrap();
        let got = finite_n_variance(&r, 1, 25).unwrap();
        assert_decimals(&got, "1.233700550136169827354311375", 24);
    }

    #[test]
    fn finite_n_variance_increases_to_xi_squared() {
        let r = StationaryRho::new("0.5").unwrap();
        let xi2 = {
            let x = xi(&r, 25).unwrap();
            x.mul(&x).unwrap()
        };
        let mut prev = finite_n_variance(&r, 1, 20).unwrap();
        for n in [3, 10, 100, 1000] {
            let v = finite_n_variance(&r, n, 20).unwrap();
            assert!(
                v.cmp_value(&prev) == Ordering::Greater,
                "variance not increasing at n = {n}"
            );
            assert!(
                v.to_precision_raw(32).cmp_value(&xi2.to_precision_raw(32)) == Ordering::Less,
                "variance exceeds limit at n = {n}"
            );
            prev = v;
        }
        // Convergence: within 1e-3 of the limit by n = 10^4.
        let v = finite_n_variance(&r, 10_000, 20).unwrap();
        let gap = xi2.to_precision_raw(32).sub(&v.to_precision_raw(32)).unwrap().abs();
        let tol = BigFloat::parse("1e-3", 32).unwrap();
        assert!(gap.cmp_value(&tol) == Ordering::Less, "gap {gap} too wide");
    }

    #[test]
    fn eta_reference_values() {
        let one = OuTheta::new("1").unwrap();
        let got = eta(&one, 25).unwrap();
        assert_decimals(&got, "0.8114630772251034075309057", 24);
        // Scaling: eta_4 = eta_1 / 2.
        let four = OuTheta::new("4").unwrap();
        let got4 = eta(&four, 25).unwrap();
        assert_decimals(&got4, "0.4057315386125517037654528", 24);
    }

    #[test]
    fn eta_series_check_brackets_the_constant() {
        // eta_1^2 = pi^2 ln2/4 - 7 zeta3/8.
        let target = BigFloat::parse("0.6584723256996341364870988972", 30).unwrap();
        let cases: [(u64, &str); 3] = [
            (10, "0.6508568952095571191327033"),
            (100, "0.6581832317791886539684220"),
            (1000, "0.6584630043304003312125021"),
        ];
        for (n, partial_want) in cases {
            let check = eta_series_check(n).unwrap();
            assert_decimals(&check.partial_sum, partial_want, 23);
            // partial <= target <= partial + bound.
            let upper = check
                .partial_sum
                .to_precision_raw(30)
                .add(&check.tail_bound.to_precision_raw(30))
                .unwrap();
            assert!(check.partial_sum.to_precision_raw(30).cmp_value(&target) == Ordering::Less);
            assert!(upper.cmp_value(&target) == Ordering::Greater);
        }
        // N = 0: the crude first-term bound still brackets.
        let c0 = eta_series_check(0).unwrap();
        let upper = c0
            .partial_sum
            .to_precision_raw(30)
            .add(&c0.tail_bound.to_precision_raw(30))
            .unwrap();
        assert!(c0.partial_sum.to_precision_raw(30).cmp_value(&target) == Ordering::Less);
        assert!(upper.cmp_value(&target) == Ordering::Greater);
    }

    #[test]
    fn xi_converges_slowly_near_one_but_errors_cleanly() {
        // A rho extremely close to 1 exhausts the term cap.
        let r = StationaryRho::new("0.99999").unwrap();
        assert!(matches!(xi(&r, 30), Err(Error::Convergence(_))));
    }
}
