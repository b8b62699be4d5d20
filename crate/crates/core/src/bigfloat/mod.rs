//! Arbitrary-precision decimal floating point.
//!
//! A [`BigFloat`] stores a sign, a decimal mantissa, and a power-of-ten
//! exponent, normalized so the mantissa carries exactly `precision`
//! significant digits. Precision is fixed per value (10 to 200 digits) and
//! binary operations require both operands to share it; mixing precisions
//! is an error rather than a silent coercion. All rounding is round half
//! to even on the decimal digit being dropped.

mod functions;

pub use functions::NamedConstant;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Minimum supported precision in significant decimal digits.
pub const MIN_PRECISION: u32 = 10;
/// Maximum supported precision in significant decimal digits.
pub const MAX_PRECISION: u32 = 200;
/// Ceiling for crate-internal working precisions. Function kernels add
/// guard digits on top of a caller's precision, which can push transient
/// values past `MAX_PRECISION`; this bounds how far.
pub(crate) const INTERNAL_MAX_PRECISION: u32 = 512;

/// A decimal floating-point number with a fixed number of significant digits.
/// Derived equality is structural (same digits, exponent, and precision);
/// use [`BigFloat::eq_value`] to compare numeric values across precisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    /// Signed mantissa; zero, or exactly `precision` decimal digits.
    mantissa: BigInt,
    /// Power of ten multiplying the mantissa.
    exp10: i64,
    /// Significant decimal digits carried by this value.
    precision: u32,
}

fn check_precision(precision: u32) -> Result<()> {
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&precision) {
        return Err(Error::Precision(format!(
            "precision {precision} outside supported range {MIN_PRECISION}..={MAX_PRECISION}"
        )));
    }
    Ok(())
}

fn pow10(k: u64) -> BigInt {
    BigInt::from(10u32).pow(u32::try_from(k).expect("power-of-ten exponent fits u32"))
}

fn decimal_digits(m: &BigInt) -> u64 {
    m.magnitude().to_string().len() as u64
}

/// Divides `m` by 10^k, rounding half to even. `k` must be >= 1.
fn round_half_even(m: &BigInt, k: u64) -> BigInt {
    let divisor = pow10(k);
    let negative = m.is_negative();
    let mag = BigInt::from(m.magnitude().clone());
    let q = &mag / &divisor;
    let r = &mag % &divisor;
    let twice_r: BigInt = r * 2;
    let round_up = match twice_r.cmp(&divisor) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => &q % 2 == BigInt::from(1),
    };
    let q = if round_up { q + 1 } else { q };
    if negative {
        -q
    } else {
        q
    }
}

impl BigFloat {
    /// Zero at the given precision.
    pub fn zero(precision: u32) -> Result<Self> {
        check_precision(precision)?;
        Ok(BigFloat {
            mantissa: BigInt::zero(),
            exp10: 0,
            precision,
        })
    }

    /// One at the given precision.
    pub fn one(precision: u32) -> Result<Self> {
        Self::from_u64(1, precision)
    }

    pub fn from_u64(v: u64, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        Self::normalized(BigInt::from(v), 0, precision)
    }

    pub fn from_i64(v: i64, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        Self::normalized(BigInt::from(v), 0, precision)
    }

    /// Builds a normalized value from `m * 10^e`, rounding half-even if `m`
    /// has more than `precision` digits.
    fn normalized(mut m: BigInt, mut e: i64, precision: u32) -> Result<Self> {
        if m.is_zero() {
            return Ok(BigFloat {
                mantissa: m,
                exp10: 0,
                precision,
            });
        }
        let digits = decimal_digits(&m);
        let prec = u64::from(precision);
        if digits < prec {
            let pad = prec - digits;
            m *= pow10(pad);
            e = e
                .checked_sub(pad as i64)
                .ok_or_else(|| Error::Domain("exponent underflow".into()))?;
        } else if digits > prec {
            let drop = digits - prec;
            m = round_half_even(&m, drop);
            e = e
                .checked_add(drop as i64)
                .ok_or_else(|| Error::Domain("exponent overflow".into()))?;
            // A carry out of rounding (e.g. 999.. -> 1000..) adds a digit.
            if decimal_digits(&m) > prec {
                m /= 10;
                e = e
                    .checked_add(1)
                    .ok_or_else(|| Error::Domain("exponent overflow".into()))?;
            }
        }
        Ok(BigFloat {
            mantissa: m,
            exp10: e,
            precision,
        })
    }

    /// Parses a decimal string: optional sign, digits with an optional
    /// fractional part, and an optional `e`/`E` exponent. The value is
    /// rounded half-even to `precision` significant digits.
    pub fn parse(s: &str, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        let t = s.trim();
        let bytes = t.as_bytes();
        if bytes.is_empty() {
            return Err(Error::Parse("empty numeric string".into()));
        }
        let mut i = 0usize;
        let negative = match bytes[0] {
            b'+' => {
                i += 1;
                false
            }
            b'-' => {
                i += 1;
                true
            }
            _ => false,
        };
        let mut digits = String::new();
        let mut frac_len: i64 = 0;
        let mut seen_digit = false;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            digits.push(bytes[i] as char);
            seen_digit = true;
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                digits.push(bytes[i] as char);
                frac_len += 1;
                seen_digit = true;
                i += 1;
            }
        }
        if !seen_digit {
            return Err(Error::Parse(format!("no digits in numeric string `{t}`")));
        }
        let mut exp: i64 = 0;
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            i += 1;
            let exp_str = &t[i..];
            if exp_str.is_empty() {
                return Err(Error::Parse(format!("empty exponent in `{t}`")));
            }
            exp = exp_str
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("invalid exponent in `{t}`")))?;
            i = bytes.len();
        }
        if i != bytes.len() {
            return Err(Error::Parse(format!("trailing characters in `{t}`")));
        }
        let mut m = digits
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid mantissa in `{t}`")))?;
        if negative {
            m = -m;
        }
        let e = exp
            .checked_sub(frac_len)
            .ok_or_else(|| Error::Parse(format!("exponent out of range in `{t}`")))?;
        Self::normalized(m, e, precision)
    }

    /// Renders in normalized scientific form, `-d.dddde<exp>`. Zero renders
    /// as `0e0`. `parse(render(x), x.precision())` reproduces `x` exactly.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0e0".into();
        }
        let mag = self.mantissa.magnitude().to_string();
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        let sci_exp = self.exp10 + self.precision as i64 - 1;
        if mag.len() == 1 {
            format!("{sign}{mag}e{sci_exp}")
        } else {
            format!("{sign}{}.{}e{sci_exp}", &mag[..1], &mag[1..])
        }
    }

    /// Fixed-point rendering with exactly `decimals` digits after the point,
    /// correctly rounded (half to even).
    pub fn to_fixed(&self, decimals: u32) -> String {
        let d = i64::from(decimals);
        let shift = self.exp10 + d;
        let scaled = if self.is_zero() {
            BigInt::zero()
        } else if shift >= 0 {
            &self.mantissa * pow10(shift as u64)
        } else {
            round_half_even(&self.mantissa, (-shift) as u64)
        };
        let sign = if scaled.is_negative() { "-" } else { "" };
        let mut mag = scaled.magnitude().to_string();
        if scaled.is_zero() {
            mag = "0".into();
        }
        let d = decimals as usize;
        if d == 0 {
            return format!("{sign}{mag}");
        }
        if mag.len() <= d {
            let pad = "0".repeat(d - mag.len());
            format!("{sign}0.{pad}{mag}")
        } else {
            let split = mag.len() - d;
            format!("{sign}{}.{}", &mag[..split], &mag[split..])
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Sign as -1, 0, or 1.
    pub fn signum(&self) -> i32 {
        if self.mantissa.is_zero() {
            0
        } else if self.mantissa.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Decimal exponent of the leading digit (`x = d.ddd * 10^sci_exponent`).
    /// Returns 0 for zero.
    pub fn sci_exponent(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.exp10 + self.precision as i64 - 1
        }
    }

    /// Value of one unit in the last place (10^exp10) at this precision.
    pub fn ulp(&self) -> Self {
        let e = if self.is_zero() { 0 } else { self.exp10 };
        Self::normalized(BigInt::from(1), e, self.precision)
            .expect("ulp construction cannot fail")
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -self.mantissa.clone(),
            exp10: self.exp10,
            precision: self.precision,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exp10: self.exp10,
            precision: self.precision,
        }
    }

    /// Re-rounds (or zero-pads) to a new precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        Self::normalized(self.mantissa.clone(), self.exp10, precision)
    }

    /// Crate-internal integer constructor that admits elevated working
    /// precisions (guard digits) beyond the public range.
    pub(crate) fn int_raw(v: i64, precision: u32) -> Self {
        debug_assert!((MIN_PRECISION..=INTERNAL_MAX_PRECISION).contains(&precision));
        Self::normalized(BigInt::from(v), 0, precision).expect("integer construction")
    }

    /// Crate-internal precision change that admits elevated working
    /// precisions beyond the public range.
    pub(crate) fn to_precision_raw(&self, precision: u32) -> Self {
        debug_assert!((MIN_PRECISION..=INTERNAL_MAX_PRECISION).contains(&precision));
        Self::normalized(self.mantissa.clone(), self.exp10, precision)
            .expect("precision change")
    }

    /// Crate-internal constructor from `m * 10^exp10`, rounding to the
    /// given precision.
    pub(crate) fn from_bigint_raw(m: BigInt, exp10: i64, precision: u32) -> Self {
        debug_assert!((MIN_PRECISION..=INTERNAL_MAX_PRECISION).contains(&precision));
        Self::normalized(m, exp10, precision).expect("bigint construction")
    }

    fn check_same_precision(&self, rhs: &Self) -> Result<()> {
        if self.precision != rhs.precision {
            return Err(Error::Precision(format!(
                "mixed precisions {} and {}",
                self.precision, rhs.precision
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_precision(rhs)?;
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        let (hi, lo) = if self.exp10 >= rhs.exp10 {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shift = hi.exp10 - lo.exp10;
        // The low operand is below 10^-2 ulp of the high one; the rounded
        // sum is the high operand itself.
        if shift > self.precision as i64 + 2 {
            return Ok(hi.clone());
        }
        let wide = &hi.mantissa * pow10(shift as u64) + &lo.mantissa;
        Self::normalized(wide, lo.exp10, self.precision)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_precision(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.precision);
        }
        let e = self
            .exp10
            .checked_add(rhs.exp10)
            .ok_or_else(|| Error::Domain("exponent overflow in mul".into()))?;
        Self::normalized(&self.mantissa * &rhs.mantissa, e, self.precision)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.check_same_precision(rhs)?;
        if rhs.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        if self.is_zero() {
            return Self::zero(self.precision);
        }
        // Three extra quotient digits keep the truncation of integer
        // division below 10^-3 ulp before the final rounding.
        let extra = u64::from(self.precision) + 3;
        let num = &self.mantissa * pow10(extra);
        let q = num / &rhs.mantissa;
        let e = self
            .exp10
            .checked_sub(rhs.exp10)
            .and_then(|v| v.checked_sub(extra as i64))
            .ok_or_else(|| Error::Domain("exponent overflow in div".into()))?;
        Self::normalized(q, e, self.precision)
    }

    /// Integer power. `powi(x, 0)` is 1 for every `x`; negative exponents
    /// of zero are a domain error. Computed with eight guard digits so the
    /// result is accurate to within about one ulp.
    pub fn powi(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Self::one(self.precision);
        }
        if self.is_zero() {
            if k < 0 {
                return Err(Error::Domain("zero raised to a negative power".into()));
            }
            return Self::zero(self.precision);
        }
        let work = (self.precision + 8).min(INTERNAL_MAX_PRECISION);
        let mut base = self.to_precision_raw(work);
        let mut result = Self::int_raw(1, work);
        let mut n = k.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        if k < 0 {
            result = Self::int_raw(1, work).div(&result)?;
        }
        result.with_precision(self.precision)
    }

    /// Total order on values; precisions may differ.
    pub fn cmp_value(&self, rhs: &Self) -> Ordering {
        match (self.signum(), rhs.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            (s, _) => {
                let mag = self.cmp_magnitude(rhs);
                if s > 0 {
                    mag
                } else {
                    mag.reverse()
                }
            }
        }
    }

    fn cmp_magnitude(&self, rhs: &Self) -> Ordering {
        let ea = self.sci_exponent();
        let eb = rhs.sci_exponent();
        if ea != eb {
            return ea.cmp(&eb);
        }
        // Same leading exponent: align mantissas to a common digit count.
        let ma = self.mantissa.magnitude();
        let mb = rhs.mantissa.magnitude();
        match self.precision.cmp(&rhs.precision) {
            Ordering::Equal => ma.cmp(mb),
            Ordering::Less => {
                let scaled = BigInt::from(ma.clone())
                    * pow10(u64::from(rhs.precision - self.precision));
                scaled.magnitude().cmp(mb)
            }
            Ordering::Greater => {
                let scaled = BigInt::from(mb.clone())
                    * pow10(u64::from(self.precision - rhs.precision));
                ma.cmp(scaled.magnitude())
            }
        }
    }

    /// True if the values are numerically equal (precision ignored).
    pub fn eq_value(&self, rhs: &Self) -> bool {
        self.cmp_value(rhs) == Ordering::Equal
    }

    /// Nearest f64, via the correctly rounded standard library parser.
    pub fn to_f64(&self) -> f64 {
        self.render().parse::<f64>().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
