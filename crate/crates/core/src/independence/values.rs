//! Real constants that can be recomputed at any working precision.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, parse_rational};
use crate::exact::Rational;
use crate::mp::Real;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealValue {
    /// A decimal literal; its precision is whatever digits it carries.
    Decimal(String),
    Rational(Rational),
    Exp(Rational),
    Log(Rational),
    Sqrt(Rational),
    Pi,
}

impl RealValue {
    /// Value at `bits` of working precision.
    pub fn eval(&self, bits: usize) -> Result<Real> {
        Ok(match self {
            RealValue::Decimal(s) => Real::parse(s, bits).ok_or_else(|| Error::BadRational(s.clone()))?,
            RealValue::Rational(q) => Real::from_rational(q, bits),
            RealValue::Exp(q) => Real::from_rational(q, bits).exp(),
            RealValue::Log(q) => {
                if q <= &Rational::from_integer(0.into()) {
                    return Err(Error::SymbolicDomain(format!("log of non-positive {q}")));
                }
                Real::from_rational(q, bits).ln()
            }
            RealValue::Sqrt(q) => {
                if q < &Rational::from_integer(0.into()) {
                    return Err(Error::SymbolicDomain(format!("sqrt of negative {q}")));
                }
                Real::from_rational(q, bits).sqrt()
            }
            RealValue::Pi => Real::pi(bits),
        })
    }

    /// Decimal digits available, `None` for values computable to any
    /// precision.
    pub fn intrinsic_digits(&self) -> Option<usize> {
        match self {
            RealValue::Decimal(s) => Some(s.chars().filter(|c| c.is_ascii_digit()).count()),
            _ => None,
        }
    }

    /// Accepts `pi`, `exp(q)`, `log(q)`, `sqrt(q)`, `e`, rationals `n/d`
    /// and decimal literals.
    pub fn parse(text: &str) -> Result<RealValue> {
        let s = text.trim();
        let call = |name: &str| -> Option<&str> {
            s.strip_prefix(name)
                .and_then(|r| r.trim_start().strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if s == "pi" {
            return Ok(RealValue::Pi);
        }
        if s == "e" {
            return Ok(RealValue::Exp(Rational::from_integer(1.into())));
        }
        if let Some(a) = call("exp") {
            return Ok(RealValue::Exp(parse_rational(a)?));
        }
        if let Some(a) = call("log") {
            return Ok(RealValue::Log(parse_rational(a)?));
        }
        if let Some(a) = call("sqrt") {
            return Ok(RealValue::Sqrt(parse_rational(a)?));
        }
        if s.contains('.') || s.contains('e') || s.contains('E') {
            if Real::parse(s, 64).is_none() {
                return Err(Error::BadRational(s.to_string()));
            }
            return Ok(RealValue::Decimal(s.to_string()));
        }
        Ok(RealValue::Rational(parse_rational(s)?))
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Decimal(s) => write!(f, "{s}"),
            RealValue::Rational(q) => write!(f, "{}", format_rational(q)),
            RealValue::Exp(q) => write!(f, "exp({})", format_rational(q)),
            RealValue::Log(q) => write!(f, "log({})", format_rational(q)),
            RealValue::Sqrt(q) => write!(f, "sqrt({})", format_rational(q)),
            RealValue::Pi => write!(f, "pi"),
        }
    }
}

impl Serialize for RealValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RealValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RealValue::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::bits_for_digits;

    #[test]
    fn parse_forms() {
        assert_eq!(RealValue::parse("pi").unwrap(), RealValue::Pi);
        assert_eq!(RealValue::parse("exp(2)").unwrap(), RealValue::Exp(Rational::from_integer(2.into())));
        assert_eq!(RealValue::parse("sqrt(1/2)").unwrap().to_string(), "sqrt(1/2)");
        assert!(matches!(RealValue::parse("1.4142").unwrap(), RealValue::Decimal(_)));
        assert!(RealValue::parse("foo(").is_err());
    }

    #[test]
    fn evaluation() {
        let b = bits_for_digits(40);
        let s = RealValue::Sqrt(Rational::from_integer(2.into())).eval(b).unwrap();
        assert!(((&s * &s).to_f64() - 2.0).abs() < 1e-15);
        assert!(RealValue::Log(Rational::from_integer(0.into())).eval(b).is_err());
    }
}
