//! Extended-precision floats for leading-order asymptotic formulas.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Working precision in bits.
pub const PRECISION_BITS: usize = 128;

/// Significant decimal digits emitted in reports.
const REPORT_DIGITS: usize = 30;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// A 128-bit-mantissa float with an effectively unbounded exponent.
#[derive(Clone, Debug)]
pub struct HighFloat(BigFloat);

impl HighFloat {
    pub fn from_u64(v: u64) -> HighFloat {
        HighFloat(BigFloat::from_u64(v, PRECISION_BITS))
    }

    pub fn from_biguint(v: &BigUint) -> HighFloat {
        CONSTS.with(|cc| {
            HighFloat(BigFloat::parse(
                &v.to_string(),
                Radix::Dec,
                PRECISION_BITS,
                RM,
                &mut cc.borrow_mut(),
            ))
        })
    }

    pub fn pi() -> HighFloat {
        CONSTS.with(|cc| HighFloat(cc.borrow_mut().pi(PRECISION_BITS, RM)))
    }

    pub fn e() -> HighFloat {
        CONSTS.with(|cc| HighFloat(cc.borrow_mut().e(PRECISION_BITS, RM)))
    }

    pub fn mul(&self, other: &HighFloat) -> HighFloat {
        HighFloat(self.0.mul(&other.0, PRECISION_BITS, RM))
    }

    pub fn div(&self, other: &HighFloat) -> HighFloat {
        HighFloat(self.0.div(&other.0, PRECISION_BITS, RM))
    }

    pub fn powi(&self, n: usize) -> HighFloat {
        HighFloat(self.0.powi(n, PRECISION_BITS, RM))
    }

    pub fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }

    /// Error unless the value is finite.
    pub fn checked(self, what: &str) -> Result<HighFloat> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Overflow(what.to_string()))
        }
    }

    /// Scientific notation with `digits` significant digits, e.g. `1.25e3`.
    pub fn to_scientific(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".into();
        }
        let raw = CONSTS
            .with(|cc| self.0.format(Radix::Dec, RM, &mut cc.borrow_mut()))
            .unwrap_or_else(|_| "NaN".into());
        normalize_scientific(&raw, digits)
    }

    /// Nearest `f64`, or infinity when out of range.
    pub fn to_f64(&self) -> f64 {
        self.to_scientific(20).parse().unwrap_or(f64::NAN)
    }
}

/// Rewrites `d.ddddde±x` into `digits` significant digits (truncated) and a
/// plain exponent so the result is a valid JSON number.
fn normalize_scientific(raw: &str, digits: usize) -> String {
    let (neg, body) = match raw.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, raw),
    };
    let (mantissa, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.trim_start_matches('+').parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let all: String = int_part.chars().chain(frac_part.chars()).collect();
    let lead = all.find(|c: char| c != '0').unwrap_or(0);
    let sig = &all[lead..];
    let exp10 = exp + int_part.len() as i64 - 1 - lead as i64;
    let kept: String = sig.chars().take(digits.max(1)).collect();
    let trimmed = kept.trim_end_matches('0');
    let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
    let (head, tail) = trimmed.split_at(1);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    if exp10 != 0 {
        out.push_str(&format!("e{exp10}"));
    }
    out
}

impl fmt::Display for HighFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_scientific(REPORT_DIGITS))
    }
}

/// Serialized as a JSON number carrying 30 significant digits.
impl Serialize for HighFloat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text = self.to_scientific(REPORT_DIGITS);
        match text.parse::<serde_json::Number>() {
            Ok(n) => n.serialize(s),
            Err(_) => s.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_carry_extra_digits() {
        assert_eq!(HighFloat::pi().to_scientific(25), "3.141592653589793238462643");
        assert_eq!(HighFloat::e().to_scientific(20), "2.7182818284590452353");
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_scientific("1.2500e+3", 10), "1.25e3");
        assert_eq!(normalize_scientific("-0.00125e+0", 10), "-1.25e-3");
        assert_eq!(normalize_scientific("7", 10), "7");
    }

    #[test]
    fn integer_round_trip() {
        let big: BigUint = "123456789012345678901234567890".parse().unwrap();
        let h = HighFloat::from_biguint(&big);
        assert_eq!(h.to_scientific(30), "1.2345678901234567890123456789e29");
        assert!((h.to_f64() - 1.2345678901234568e29).abs() < 1e14);
    }
}
