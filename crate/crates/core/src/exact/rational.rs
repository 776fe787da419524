//! Rational numbers, p-adic valuations and logarithmic heights.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Accepts `n`, `n/d` and terminating decimals such as `-0.125`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::BadRational(text.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if negative { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

fn ensure_prime(p: u64) -> Result<()> {
    if num_prime::nt_funcs::is_prime64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn strip_factor(n: &BigUint, p: &BigUint) -> (u64, BigUint) {
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

/// Exponent of `p` in `n` (n non-zero).
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    strip_factor(n.magnitude(), &BigUint::from(p)).0
}

/// `v_p(q)`: the exponent of `p` in the factorisation of `q`.
pub fn padic_valuation(q: &Rational, p: u64) -> Result<i64> {
    ensure_prime(p)?;
    if q.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    let num = int_valuation(q.numer(), p) as i64;
    let den = int_valuation(q.denom(), p) as i64;
    Ok(num - den)
}

/// Legendre's formula `v_p(i!) = sum_k floor(i / p^k)`.
pub fn factorial_valuation(i: u64, p: u64) -> Result<u64> {
    ensure_prime(p)?;
    Ok(legendre(i, p))
}

pub(crate) fn legendre(i: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = i / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Natural logarithm of `|n|`, valid for integers of any size.
pub fn log_abs_int(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log|q|` for non-zero `q`, or `-inf` at zero.
pub fn log_abs(q: &Rational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    log_abs_int(q.numer()) - log_abs_int(q.denom())
}

pub fn to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * log_abs(q).exp()
}

/// Logarithmic height `log max(|num|, |den|)` of a reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Height(pub f64);

impl Height {
    pub fn of(q: &Rational) -> Height {
        if q.is_zero() {
            return Height(0.0);
        }
        let a = log_abs_int(q.numer());
        let b = log_abs_int(q.denom());
        Height(a.max(b).max(0.0))
    }

    /// Vector height: the maximum over the coordinates.
    pub fn of_all<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> Height {
        Height(qs.into_iter().map(|q| Height::of(q).0).fold(0.0, f64::max))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Primes dividing `n`, with multiplicity. Small factors are stripped by trial
/// division, the cofactor is handed to a general factoriser.
pub fn prime_factors(n: &BigUint, trial_bound: u64) -> Vec<(BigUint, u64)> {
    let mut out = Vec::new();
    let mut rest = n.clone();
    if rest.is_zero() {
        return out;
    }
    for p in num_prime::nt_funcs::primes(trial_bound.max(2)) {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        let (v, r) = strip_factor(&rest, &pb);
        if v > 0 {
            out.push((pb, v));
            rest = r;
        }
    }
    if !rest.is_one() {
        for (p, v) in num_prime::nt_funcs::factorize(rest) {
            out.push((p, v as u64));
        }
    }
    out.sort();
    out
}


/// Serde adapter: rationals as `"num/den"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(qs.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&rat(8, 3), 2).unwrap(), 3);
        assert_eq!(padic_valuation(&rat(1, 6), 3).unwrap(), -1);
        let ten_fact = Rational::from_integer(factorial(10));
        assert_eq!(padic_valuation(&ten_fact, 2).unwrap(), 8);
        assert_eq!(padic_valuation(&int(0), 2), Err(Error::UndefinedValuation));
        assert_eq!(padic_valuation(&int(4), 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(factorial_valuation(10, 2).unwrap(), 8);
        assert_eq!(factorial_valuation(0, 5).unwrap(), 0);
        assert_eq!(factorial_valuation(25, 5).unwrap(), 6);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-4, 6)), "-2/3");
    }

    #[test]
    fn heights() {
        assert!((Height::of(&int(10)).0 - 10f64.ln()).abs() < 1e-12);
        assert_eq!(Height::of(&rat(3, 7)), Height::of(&rat(7, 3)));
        assert_eq!(Height::of(&int(1)).0, 0.0);
        let big = factorial(300);
        let exact: f64 = (1..=300).map(|k| (k as f64).ln()).sum();
        assert!((log_abs_int(&big) - exact).abs() < 1e-9);
    }

    #[test]
    fn factorisation_mixes_trial_and_general() {
        let n = BigUint::from(2u64.pow(5) * 3 * 1_000_003u64);
        let f = prime_factors(&n, 100);
        assert_eq!(
            f,
            vec![
                (BigUint::from(2u32), 5),
                (BigUint::from(3u32), 1),
                (BigUint::from(1_000_003u32), 1)
            ]
        );
    }
}
