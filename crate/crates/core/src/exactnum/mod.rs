//! Exact arithmetic: integer/rational polynomials, real algebraic numbers and
//! elements of real number fields ℚ(α).

mod algebraic;
mod field;
pub mod json;
mod poly;

pub use algebraic::AlgebraicReal;
pub use field::{NFElement, NumberField};
pub use poly::{IntPoly, RatPoly, Rational};

pub use poly::rat;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different number fields")]
    FieldMismatch,
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("interval does not isolate exactly one root")]
    InvalidInterval,
    #[error("cannot parse rational from {0:?}")]
    BadRational(String),
}

/// Parses `p`, `p/q`, or a decimal literal such as `-2.125` or `1e-3`,
/// exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::BadRational(s.to_string());
    let t = s.trim();
    if t.is_empty() || t.len() > 4096 {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    if exp.unsigned_abs() > 1000 {
        return Err(bad());
    }
    let (neg, digits) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = digits.split_once('.').unwrap_or((digits, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{ip}{fp}");
    let mut num: BigInt = if all.is_empty() { BigInt::from(0) } else { all.parse().map_err(|_| bad())? };
    if neg {
        num = -num;
    }
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(num * ten.pow(scale as u32))
    } else {
        Rational::new(num, ten.pow((-scale) as u32))
    })
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses() {
        assert_eq!(parse_rational("21/10").unwrap(), parse_rational("2.1").unwrap());
        assert_eq!(parse_rational("-3").unwrap(), rat(-3));
        assert_eq!(parse_rational("1e2").unwrap(), rat(100));
        assert_eq!(parse_rational(".5").unwrap(), Rational::new(1.into(), 2.into()));
        for b in ["", "1/0", "abc", "1..2", "-", "1e", "."] {
            assert!(parse_rational(b).is_err(), "{b}");
        }
    }
}
