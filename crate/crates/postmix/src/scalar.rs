//! Numeric abstraction shared by the exact and floating-point engines.
//!
//! Every distribution-level computation in this crate is generic over a
//! [`Scalar`]. Two implementations are provided:
//!
//! * `f64` for fast sweeps, with a fixed tolerance band of `1e-12` wherever a
//!   sign or normalization decision has to be made, and
//! * [`Rational`] (arbitrary-precision `num/den`) for certification-grade
//!   runs, where every comparison is exact and the band is zero.
//!
//! Conversions from `f64` into `Rational` are lossless (the dyadic expansion
//! of the float), so a float-mode run can always be replayed exactly.

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arbitrary-precision rational scalar used by the exact engine.
pub type Rational = BigRational;

/// Tolerance band applied to float-mode sign and normalization decisions.
pub const F64_BAND: f64 = 1e-12;

/// Common interface for the two numeric modes.
///
/// The bounds cover ring arithmetic, signs and ordering; the trait adds the
/// handful of conversions and policy constants the engines need.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + Zero
    + One
    + Signed
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact and comparisons carry no tolerance.
    const EXACT: bool;

    /// Ratio of two small integers. `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Lossless conversion from a float (exact dyadic value, not a decimal
    /// re-reading). Must reject NaN/infinite inputs by panicking; callers
    /// validate first.
    fn from_f64_lossless(x: f64) -> Self;

    /// Nearest float, for reporting and CSV output.
    fn to_f64(&self) -> f64;

    /// Width of the band inside which a slightly negative value is treated
    /// as zero. Zero in exact mode, [`F64_BAND`] for floats.
    fn band() -> Self;

    /// Parse from the string form used in JSON files: `"num/den"` or an
    /// integer for rationals, any float literal for floats. Each mode also
    /// accepts the other form where it can do so exactly.
    fn parse_value(s: &str) -> Result<Self, String>;

    /// Render to the string form used in JSON files.
    fn render_value(&self) -> String;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn from_f64_lossless(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value");
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn band() -> Self {
        F64_BAND
    }

    fn parse_value(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|e| format!("bad numerator {num:?}: {e}"))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|e| format!("bad denominator {den:?}: {e}"))?;
            if den == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            return Ok(num / den);
        }
        let v: f64 = s.parse().map_err(|e| format!("bad number {s:?}: {e}"))?;
        if !v.is_finite() {
            return Err(format!("non-finite number {s:?}"));
        }
        Ok(v)
    }

    fn render_value(&self) -> String {
        // serde_json's float formatter emits the shortest string that parses
        // back to the same value, which keeps output byte-stable.
        serde_json::Number::from_f64(*self)
            .map(|n| n.to_string())
            .unwrap_or_else(|| "null".to_string())
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(num.into(), den.into())
    }

    fn from_f64_lossless(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value");
        Rational::from_f64(x).expect("finite float converts exactly")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn band() -> Self {
        Rational::zero()
    }

    fn parse_value(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num = num
                .trim()
                .parse()
                .map_err(|e| format!("bad numerator {num:?}: {e}"))?;
            let den: num_bigint::BigInt = den
                .trim()
                .parse()
                .map_err(|e| format!("bad denominator {den:?}: {e}"))?;
            if Zero::is_zero(&den) {
                return Err(format!("zero denominator in {s:?}"));
            }
            return Ok(Rational::new(num, den));
        }
        if let Ok(int) = s.parse::<num_bigint::BigInt>() {
            return Ok(Rational::from_integer(int));
        }
        // Decimal literals convert exactly: "0.25" becomes 25/100 reduced.
        if let Some((whole, frac)) = s.split_once('.') {
            if frac.chars().all(|c| c.is_ascii_digit()) && !frac.is_empty() {
                let negative = whole.trim_start().starts_with('-');
                let whole: num_bigint::BigInt = if whole.is_empty() || whole == "-" {
                    Zero::zero()
                } else {
                    whole
                        .parse()
                        .map_err(|e| format!("bad number {s:?}: {e}"))?
                };
                let digits: num_bigint::BigInt = frac
                    .parse()
                    .map_err(|e| format!("bad number {s:?}: {e}"))?;
                let scale = num_bigint::BigInt::from(10u8).pow(frac.len() as u32);
                let frac_part = Rational::new(digits, scale);
                let whole_part = Rational::from_integer(whole);
                return Ok(if negative {
                    whole_part - frac_part
                } else {
                    whole_part + frac_part
                });
            }
        }
        Err(format!("cannot parse {s:?} as a rational"))
    }

    fn render_value(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

/// Sum of a slice of scalars, folding left to keep exact-mode growth tame.
pub fn sum<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc + v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_construction() {
        assert_eq!(f64::from_ratio(1, 16), 0.0625);
        assert_eq!(Rational::from_ratio(1, 16), Rational::new(1.into(), 16.into()));
    }

    #[test]
    fn lossless_float_to_rational() {
        // 0.1 is not 1/10 as a float; the conversion must keep the dyadic value.
        let r = Rational::from_f64_lossless(0.1);
        assert_eq!(Scalar::to_f64(&r), 0.1);
        assert_ne!(r, Rational::from_ratio(1, 10));
        assert_eq!(Rational::from_f64_lossless(0.25), Rational::from_ratio(1, 4));
    }

    #[test]
    fn parse_and_render_rational() {
        let r = Rational::parse_value("3/100").unwrap();
        assert_eq!(r, Rational::from_ratio(3, 100));
        assert_eq!(r.render_value(), "3/100");
        assert_eq!(Rational::parse_value("2").unwrap(), Rational::from_ratio(2, 1));
        assert_eq!(
            Rational::parse_value("0.01").unwrap(),
            Rational::from_ratio(1, 100)
        );
        assert_eq!(
            Rational::parse_value("-1.5").unwrap(),
            Rational::from_ratio(-3, 2)
        );
        assert!(Rational::parse_value("1/0").is_err());
        assert!(Rational::parse_value("abc").is_err());
    }

    #[test]
    fn parse_and_render_float() {
        assert_eq!(f64::parse_value("0.01").unwrap(), 0.01);
        assert_eq!(f64::parse_value("3/4").unwrap(), 0.75);
        assert_eq!(0.0625f64.render_value(), "0.0625");
        assert!(f64::parse_value("nan").is_err());
        assert!(f64::parse_value("1/0").is_err());
    }

    #[test]
    fn band_policy() {
        assert_eq!(<f64 as Scalar>::band(), 1e-12);
        assert!(Rational::band().is_zero());
    }
}
