//! Serialization helpers: big integers and rationals travel as decimal strings.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub mod biguint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let raw = String::deserialize(d)?;
        parse_biguint(&raw).map_err(serde::de::Error::custom)
    }
}

pub mod opt_biguint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_str_radix(10)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|r| parse_biguint(&r).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

pub mod opt_rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&rational_string(v)),
            None => s.serialize_none(),
        }
    }
}

pub fn parse_biguint(raw: &str) -> Result<BigUint, String> {
    let trimmed = raw.trim();
    if trimmed.is_empty() || !trimmed.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("expected a nonnegative decimal integer, got {raw:?}"));
    }
    BigUint::parse_bytes(trimmed.as_bytes(), 10).ok_or_else(|| format!("bad integer {raw:?}"))
}

/// Parse `p`, `-p` or `p/q` with decimal integers and q > 0.
pub fn parse_rational(raw: &str) -> Result<BigRational, String> {
    let trimmed = raw.trim();
    let (neg, body) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (parse_biguint(n)?, parse_biguint(d)?),
        None => (parse_biguint(body)?, BigUint::from(1u32)),
    };
    if den.is_zero() {
        return Err(format!("zero denominator in {raw:?}"));
    }
    let num = BigInt::from(num);
    Ok(BigRational::new(if neg { -num } else { num }, BigInt::from(den)))
}

/// `p/q` in lowest terms, or just `p` when the denominator is one.
pub fn rational_string(v: &BigRational) -> String {
    if v.denom() == &1.into() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Number of decimal digits of a nonnegative integer.
pub fn decimal_digits(v: &BigUint) -> usize {
    if v.is_zero() {
        1
    } else {
        v.to_str_radix(10).len()
    }
}

/// Short scientific rendering (`1.2345e6789`) of a rational, exact in the
/// exponent and correct to the printed mantissa digits.
pub fn rational_sci(v: &BigRational, digits: usize) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let neg = v.is_negative();
    let v = v.abs();
    let num = v.numer().magnitude().clone();
    let den = v.denom().magnitude().clone();
    // estimate the decimal exponent from bit lengths, then correct
    let mut exp: i64 = ((num.bits() as f64 - den.bits() as f64) * std::f64::consts::LOG10_2) as i64;
    let ten = BigUint::from(10u32);
    let scaled = |e: i64| -> (BigUint, BigUint) {
        if e >= 0 {
            (num.clone(), &den * ten.pow(e as u32))
        } else {
            (&num * ten.pow((-e) as u32), den.clone())
        }
    };
    loop {
        let (n, d) = scaled(exp);
        if n < d {
            exp -= 1;
        } else if n >= &d * &ten {
            exp += 1;
        } else {
            break;
        }
    }
    let (n, d) = scaled(exp);
    let mant = (n * ten.pow(digits.saturating_sub(1) as u32)) / d;
    let s = mant.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

pub fn rational_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sci_rendering() {
        assert_eq!(rational_sci(&q(1, 64), 4), "1.562e-2");
        assert_eq!(rational_sci(&q(-250, 1), 3), "-2.50e2");
        assert_eq!(rational_sci(&q(1, 1), 1), "1e0");
        assert_eq!(rational_sci(&q(0, 5), 3), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_biguint("12a").is_err());
        assert!(parse_biguint("").is_err());
        assert_eq!(parse_biguint(" 42 ").unwrap(), BigUint::from(42u32));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_string(&q(4, 2)), "2");
        assert_eq!(rational_string(&q(2, 128)), "1/64");
        assert_eq!(parse_rational("2/128").unwrap(), q(1, 64));
        assert_eq!(parse_rational("-3").unwrap(), q(-3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
    }
}
