//! Dense univariate polynomials over the rationals, ascending coefficient order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{binomial, Rational};
use super::series::TruncatedSeries;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::new(vec![c])
    }

    /// The variable `z`.
    pub fn z() -> Poly {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, degree: usize) -> Poly {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    pub fn from_ints(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    /// `z - a`.
    pub fn linear_root(a: &Rational) -> Poly {
        Poly::new(vec![-a.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = 0`, used for bookkeeping bounds.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * at + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lead = self.leading();
        self.scale(&(Rational::one() / lead))
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = Rational::one() / d.leading();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Ok(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("non-zero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        (self * other).exact_div(&g).expect("gcd divides").monic()
    }

    /// Coefficients of `p(c + t)` as a polynomial in `t`.
    pub fn taylor_shift(&self, c: &Rational) -> Poly {
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        let mut powers = vec![Rational::one(); n];
        for i in 1..n {
            powers[i] = &powers[i - 1] * c;
        }
        for (d, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (l, slot) in out.iter_mut().enumerate().take(d + 1) {
                let b = Rational::from_integer(binomial(d as u64, l as u64));
                *slot += a * b * &powers[d - l];
            }
        }
        Poly::new(out)
    }

    /// Exact Taylor coefficients at `base`, truncated at order `order`.
    pub fn expand_at(&self, base: &Rational, order: usize) -> TruncatedSeries {
        let shifted = self.taylor_shift(base);
        TruncatedSeries::new(
            base.clone(),
            (0..=order).map(|i| shifted.coeff(i)).collect(),
        )
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: &Rational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let shifted = self.taylor_shift(a);
        shifted.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Least common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Rational roots, found with the rational-root test on the primitive
    /// integer form. Candidate divisors are enumerated by trial division, so
    /// this is meant for the small denominators met in practice.
    pub fn rational_roots(&self) -> Vec<(Rational, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let mut p = self.clone();
        let zero_mult = p.root_multiplicity(&Rational::zero());
        if zero_mult > 0 {
            out.push((Rational::zero(), zero_mult));
            p = p.exact_div(&Poly::monomial(Rational::one(), zero_mult)).unwrap();
        }
        if p.degree().unwrap_or(0) == 0 {
            return out;
        }
        let scale = Rational::from_integer(p.denominator_lcm());
        let ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * &scale).to_integer()).collect();
        let lead = ints.last().unwrap().abs();
        let konst = ints[0].abs();
        let nums = small_divisors(&konst);
        let dens = small_divisors(&lead);
        let mut seen = std::collections::BTreeSet::new();
        for n in &nums {
            for d in &dens {
                for sign in [1, -1] {
                    let cand = Rational::new(n * BigInt::from(sign), d.clone());
                    if !seen.insert(cand.clone()) {
                        continue;
                    }
                    let m = p.root_multiplicity(&cand);
                    if m > 0 {
                        out.push((cand, m));
                    }
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Clears denominators and divides by the content, keeping the sign of the
    /// leading coefficient.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let scale = Rational::from_integer(self.denominator_lcm());
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &scale).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        Poly::new(ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect())
    }
}

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    use num_traits::ToPrimitive;
    let Some(n) = n.to_u64() else {
        return vec![BigInt::one()];
    };
    let mut out = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
        if d > 2_000_000 {
            break;
        }
    }
    out.sort();
    out
}

/// Serialized as the ascending coefficient array of `"num/den"` strings.
impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        super::rational::serde_rational_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> serde::Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        super::rational::serde_rational_vec::deserialize(d).map(Poly::new)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]); // z^2 - 1
        let b = Poly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&Poly::from_ints(&[2, 2])), Poly::from_ints(&[1, 1]));
        assert!(a.div_rem(&Poly::zero()).is_err());
    }

    #[test]
    fn shift_matches_binomial_expansion() {
        let p = Poly::from_ints(&[0, 0, 1]);
        let s = p.taylor_shift(&int(1));
        assert_eq!(s, Poly::from_ints(&[1, 2, 1]));
        assert_eq!(p.expand_at(&int(1), 2).coeffs(), &[int(1), int(2), int(1)]);
    }

    #[test]
    fn roots_found() {
        // z^2 (z - 1) (2z + 1)
        let p = Poly::from_ints(&[0, 0, 1]) * Poly::from_ints(&[-1, 1]) * Poly::from_ints(&[1, 2]);
        let roots = p.rational_roots();
        assert_eq!(roots, vec![(rat(-1, 2), 1), (int(0), 2), (int(1), 1)]);
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[12, -6, 1]).to_string(), "12 - 6*z + z^2");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
