//! Transcendental functions on [`BigFloat`] and the named constants.
//!
//! Every function works at an internal precision with guard digits sized to
//! the argument, then rounds once back to the caller's precision. Constants
//! up to 55 digits come from pinned literals; where a computation needs pi,
//! ln 2, or ln 10 beyond that, they are regenerated from their defining
//! series and cached per precision.

use super::{check_precision, BigFloat, INTERNAL_MAX_PRECISION};
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

/// pi, correctly rounded to 60 significant digits.
const PI_LITERAL: &str = "3.14159265358979323846264338327950288419716939937510582097494";
/// Euler-Mascheroni gamma, correctly rounded to 60 significant digits.
const EULER_GAMMA_LITERAL: &str =
    "0.577215664901532860606512090082402431042159335939923598805767";
/// ln 2, correctly rounded to 60 significant digits.
const LN2_LITERAL: &str = "0.693147180559945309417232121458176568075500134360255254120680";
/// zeta(3), correctly rounded to 60 significant digits.
const ZETA3_LITERAL: &str = "1.20205690315959428539973816151144999076498629234049888179227";

/// Largest precision served directly from the 60-digit literals; the five
/// digit margin keeps that final rounding safe from double-rounding.
const LITERAL_PRECISION_LIMIT: u32 = 55;

/// High-precision mathematical constants with pinned decimal expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedConstant {
    Pi,
    EulerGamma,
    Ln2,
    Zeta3,
}

impl NamedConstant {
    /// The constant at the requested precision. `Pi` and `Ln2` are available
    /// at any supported precision (regenerated from series past the literal
    /// range); `EulerGamma` and `Zeta3` are capped at 55 digits.
    pub fn value(self, precision: u32) -> Result<BigFloat> {
        check_precision(precision)?;
        if precision <= LITERAL_PRECISION_LIMIT {
            let literal = match self {
                NamedConstant::Pi => PI_LITERAL,
                NamedConstant::EulerGamma => EULER_GAMMA_LITERAL,
                NamedConstant::Ln2 => LN2_LITERAL,
                NamedConstant::Zeta3 => ZETA3_LITERAL,
            };
            return BigFloat::parse(literal, precision);
        }
        match self {
            NamedConstant::Pi => Ok(pi_at(precision)),
            NamedConstant::Ln2 => Ok(ln2_at(precision)),
            NamedConstant::EulerGamma | NamedConstant::Zeta3 => Err(Error::Precision(format!(
                "{self:?} is pinned to {LITERAL_PRECISION_LIMIT} digits; requested {precision}"
            ))),
        }
    }
}

static PI_CACHE: LazyLock<Mutex<HashMap<u32, BigFloat>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static LN2_CACHE: LazyLock<Mutex<HashMap<u32, BigFloat>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static LN10_CACHE: LazyLock<Mutex<HashMap<u32, BigFloat>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn cached(
    cache: &Mutex<HashMap<u32, BigFloat>>,
    precision: u32,
    compute: impl FnOnce() -> BigFloat,
) -> BigFloat {
    if let Some(v) = cache.lock().unwrap().get(&precision) {
        return v.clone();
    }
    let v = compute();
    cache.lock().unwrap().insert(precision, v.clone());
    v
}

fn guarded(precision: u32, guard: u32) -> u32 {
    (precision + guard).min(INTERNAL_MAX_PRECISION)
}

/// arctan(1/q) by its Maclaurin series, at the given working precision.
fn atan_inv(q: i64, work: u32) -> BigFloat {
    let x = BigFloat::int_raw(1, work)
        .div(&BigFloat::int_raw(q, work))
        .expect("atan_inv argument");
    odd_series(&x, work, true)
}

/// artanh(1/q) by its Maclaurin series, at the given working precision.
fn atanh_inv(q: i64, work: u32) -> BigFloat {
    let x = BigFloat::int_raw(1, work)
        .div(&BigFloat::int_raw(q, work))
        .expect("atanh_inv argument");
    odd_series(&x, work, false)
}

/// Sums x - x^3/3 + x^5/5 - ... (`alternating`) or x + x^3/3 + x^5/5 + ...,
/// stopping once the next term drops below 10^-(work+2) relative to x.
fn odd_series(x: &BigFloat, work: u32, alternating: bool) -> BigFloat {
    let x2 = x.mul(x).expect("series square");
    let mut power = x.clone();
    let mut sum = x.clone();
    let mut k: i64 = 1;
    let cutoff = x.sci_exponent() - i64::from(work) - 2;
    loop {
        power = power.mul(&x2).expect("series power");
        k += 2;
        let mut term = power
            .div(&BigFloat::int_raw(k, work))
            .expect("series term");
        if alternating && (k / 2) % 2 == 1 {
            term = term.neg();
        }
        if term.is_zero() || term.sci_exponent() < cutoff {
            break;
        }
        sum = sum.add(&term).expect("series sum");
    }
    sum
}

/// pi at any supported precision, from Machin's formula
/// pi = 16 arctan(1/5) - 4 arctan(1/239), cached per precision.
pub(crate) fn pi_at(precision: u32) -> BigFloat {
    cached(&PI_CACHE, precision, || {
        let work = guarded(precision, 8);
        let a5 = atan_inv(5, work);
        let a239 = atan_inv(239, work);
        let sixteen = BigFloat::int_raw(16, work);
        let four = BigFloat::int_raw(4, work);
        sixteen
            .mul(&a5)
            .unwrap()
            .sub(&four.mul(&a239).unwrap())
            .unwrap()
            .to_precision_raw(precision)
    })
}

/// ln 2 at any supported precision, from ln 2 = 2 artanh(1/3).
pub(crate) fn ln2_at(precision: u32) -> BigFloat {
    cached(&LN2_CACHE, precision, || {
        let work = guarded(precision, 8);
        BigFloat::int_raw(2, work)
            .mul(&atanh_inv(3, work))
            .unwrap()
            .to_precision_raw(precision)
    })
}

/// ln 10 at any supported precision, from ln 10 = 3 ln 2 + 2 artanh(1/9).
pub(crate) fn ln10_at(precision: u32) -> BigFloat {
    cached(&LN10_CACHE, precision, || {
        let work = guarded(precision, 8);
        BigFloat::int_raw(3, work)
            .mul(&ln2_at(work))
            .unwrap()
            .add(&BigFloat::int_raw(2, work).mul(&atanh_inv(9, work)).unwrap())
            .unwrap()
            .to_precision_raw(precision)
    })
}

impl BigFloat {
    /// Square root by Newton's iteration, correct to within one ulp.
    /// Negative arguments are a domain error.
    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Domain("sqrt of a negative value".into()));
        }
        if self.is_zero() {
            return Self::zero(self.precision);
        }
        let work = guarded(self.precision, 10);
        // Scale by an even power of ten so the reduced argument sits in
        // [1, 100) where the f64 seed is accurate.
        let half_exp = self.sci_exponent().div_euclid(2);
        let mut b = self.to_precision_raw(work);
        b.exp10 -= 2 * half_exp;
        let seed = b.to_f64().sqrt();
        let mut x = Self::parse(&format!("{seed:.17e}"), 25)?.to_precision_raw(work);
        let two = Self::int_raw(2, work);
        let cutoff = -i64::from(work) + 2;
        for _ in 0..64 {
            let next = x.add(&b.div(&x)?)?.div(&two)?;
            let delta = next.sub(&x)?;
            x = next;
            if delta.is_zero() || delta.sci_exponent() - x.sci_exponent() < cutoff {
                break;
            }
        }
        x.exp10 += half_exp;
        x.with_precision(self.precision)
    }

    /// Exponential, by argument halving and the Maclaurin series. Arguments
    /// with |x| >= 1e8 are a domain error (the result exponent is then
    /// outside any practical range).
    pub fn exp(&self) -> Result<Self> {
        if self.is_zero() {
            return Self::one(self.precision);
        }
        if self.sci_exponent() >= 8 {
            return Err(Error::Domain("exp argument magnitude exceeds 1e8".into()));
        }
        let magnitude = self.to_f64().abs();
        // Halve until the reduced argument is at most 1/16; each of the s
        // squarings that undo it can double the accumulated error, so add
        // 0.31*s guard digits on top of a fixed pad.
        let s = if magnitude > 1.0 / 16.0 {
            (magnitude * 16.0).log2().ceil() as u32 + 1
        } else {
            0
        };
        let work = guarded(self.precision, 14 + (s * 31).div_ceil(100));
        let mut r = self.to_precision_raw(work);
        let two = Self::int_raw(2, work);
        for _ in 0..s {
            r = r.div(&two)?;
        }
        let mut term = Self::int_raw(1, work);
        let mut sum = Self::int_raw(1, work);
        let cutoff = -i64::from(work) - 3;
        let mut k: i64 = 0;
        loop {
            k += 1;
            term = term.mul(&r)?.div(&Self::int_raw(k, work))?;
            if term.is_zero() || term.sci_exponent() < cutoff {
                break;
            }
            sum = sum.add(&term)?;
        }
        for _ in 0..s {
            sum = sum.mul(&sum)?;
        }
        sum.with_precision(self.precision)
    }

    /// Natural logarithm. Non-positive arguments are a domain error.
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() || self.is_negative() {
            return Err(Error::Domain("ln of a non-positive value".into()));
        }
        let work = guarded(self.precision, 10);
        // Write x = m * 2^j * 10^e with m in (2/3, 4/3], then
        // ln x = 2 artanh((m-1)/(m+1)) + j ln 2 + e ln 10.
        let e = self.sci_exponent();
        let mut m = self.to_precision_raw(work);
        m.exp10 -= e;
        let four_thirds = Self::int_raw(4, work).div(&Self::int_raw(3, work))?;
        let two = Self::int_raw(2, work);
        let mut j: i64 = 0;
        while m.cmp_value(&four_thirds) == Ordering::Greater {
            m = m.div(&two)?;
            j += 1;
        }
        let one = Self::int_raw(1, work);
        let t = m.sub(&one)?.div(&m.add(&one)?)?;
        let mut ln = two.mul(&odd_series(&t, work, false))?;
        if j != 0 {
            ln = ln.add(&Self::int_raw(j, work).mul(&ln2_at(work))?)?;
        }
        if e != 0 {
            ln = ln.add(&Self::int_raw(e, work).mul(&ln10_at(work))?)?;
        }
        ln.with_precision(self.precision)
    }

    /// Error function by its Maclaurin series for |x| <= 10, with guard
    /// digits proportional to x^2 to absorb the alternating cancellation.
    /// Beyond |x| = 10 the result saturates to +-1, which is exact to 45
    /// digits; callers needing more digits than that out there are out of
    /// this function's range.
    pub fn erf(&self) -> Result<Self> {
        if self.is_zero() {
            return Self::zero(self.precision);
        }
        let ten = Self::from_u64(10, self.precision)?;
        if self.abs().cmp_value(&ten) == Ordering::Greater {
            let one = Self::one(self.precision)?;
            return Ok(if self.is_negative() { one.neg() } else { one });
        }
        let af = self.to_f64().abs();
        let guard = (af * af * 0.4343).ceil() as u32 + 6;
        let work = guarded(self.precision, 10 + guard);
        let x = self.to_precision_raw(work);
        let x2 = x.mul(&x)?;
        // Sum of (-1)^k x^(2k+1) / (k! (2k+1)), tracked via u_k = x^(2k+1)/k!.
        let mut u = x.clone();
        let mut sum = x.clone();
        let cutoff = x.sci_exponent().min(0) - i64::from(self.precision) - 12;
        let mut k: i64 = 0;
        loop {
            k += 1;
            u = u.mul(&x2)?.div(&Self::int_raw(k, work))?;
            let mut term = u.div(&Self::int_raw(2 * k + 1, work))?;
            if k % 2 == 1 {
                term = term.neg();
            }
            if term.is_zero() || term.sci_exponent() < cutoff {
                break;
            }
            sum = sum.add(&term)?;
        }
        let factor = Self::int_raw(2, work).div(&pi_at(work).sqrt()?)?;
        factor.mul(&sum)?.with_precision(self.precision)
    }
}
