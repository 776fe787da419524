//! Rational functions in one variable, kept reduced with a monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;
use super::series::TruncatedSeries;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g)?;
        let den = den.exact_div(&g)?;
        let lead = den.leading();
        let scale = Rational::one() / lead;
        Ok(RationalFunction {
            num: num.scale(&scale),
            den: den.scale(&scale),
        })
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn zero() -> RationalFunction {
        RationalFunction::from_poly(Poly::zero())
    }

    pub fn one() -> RationalFunction {
        RationalFunction::from_poly(Poly::one())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// `deg num - deg den`; `None` for the zero function.
    pub fn degree_at_infinity(&self) -> Option<i64> {
        let n = self.num.degree()? as i64;
        Some(n - self.den.degree().unwrap_or(0) as i64)
    }

    pub fn eval(&self, at: &Rational) -> Result<Rational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::ExpansionAtPole(at.to_string()));
        }
        Ok(self.num.eval(at) / d)
    }

    pub fn eval_f64(&self, at: num_complex::Complex64) -> num_complex::Complex64 {
        horner_c(&self.num, at) / horner_c(&self.den, at)
    }

    pub fn derivative(&self) -> RationalFunction {
        let n = &self.num.derivative() * &self.den - &self.num * &self.den.derivative();
        let d = &self.den * &self.den;
        RationalFunction::new(n, d).expect("non-zero denominator")
    }

    pub fn recip(&self) -> Result<RationalFunction> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> Result<RationalFunction> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        Ok(RationalFunction {
            num: self.num.pow(e as u32),
            den: self.den.pow(e as u32),
        })
    }

    /// First `order + 1` Taylor coefficients at `base`.
    pub fn taylor_expand(&self, base: &Rational, order: usize) -> Result<TruncatedSeries> {
        if self.den.eval(base).is_zero() {
            return Err(Error::ExpansionAtPole(base.to_string()));
        }
        let n = self.num.expand_at(base, order);
        let d = self.den.expand_at(base, order);
        n.div(&d)
    }
}

fn horner_c(p: &Poly, at: num_complex::Complex64) -> num_complex::Complex64 {
    p.coeffs()
        .iter()
        .rev()
        .fold(num_complex::Complex64::zero(), |acc, c| {
            acc * at + super::rational::to_f64(c)
        })
}

/// Polynomial-algebra conversion used by the expression lowering.
impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let n = &self.num * &rhs.den + &rhs.num * &self.den;
        RationalFunction::new(n, &self.den * &rhs.den).unwrap()
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Div<&RationalFunction> for &RationalFunction {
    type Output = Result<RationalFunction>;
    fn div(self, rhs: &RationalFunction) -> Result<RationalFunction> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn taylor_examples() {
        let geo = rf(&[1], &[1, -1]);
        assert_eq!(geo.taylor_expand(&int(0), 3).unwrap().coeffs(), &vec![int(1); 4][..]);
        let sq = rf(&[0, 0, 1], &[1]);
        assert_eq!(
            sq.taylor_expand(&int(1), 2).unwrap().coeffs(),
            &[int(1), int(2), int(1)]
        );
        let shifted = rf(&[1], &[-2, 1]);
        assert_eq!(
            shifted.taylor_expand(&int(0), 2).unwrap().coeffs(),
            &[rat(-1, 2), rat(-1, 4), rat(-1, 8)]
        );
        assert!(matches!(
            shifted.taylor_expand(&int(2), 2),
            Err(Error::ExpansionAtPole(_))
        ));
    }

    #[test]
    fn reduction_is_canonical() {
        let a = rf(&[-1, 0, 1], &[2, 2]);
        assert_eq!(a, rf(&[-1, 1], &[2]));
        assert_eq!(a.denominator(), &Poly::one());
        let b = rf(&[1], &[0, 2]);
        assert_eq!(b.denominator(), &Poly::from_ints(&[0, 1]));
        assert_eq!(b.numerator(), &Poly::constant(rat(1, 2)));
    }

    #[test]
    fn field_operations() {
        let a = rf(&[1], &[0, 1]);
        let b = rf(&[1], &[-1, 1]);
        let s = &a + &b;
        assert_eq!(s, rf(&[-1, 2], &[0, -1, 1]));
        assert_eq!((&s - &b), a);
        assert_eq!((&(&a * &b) / &b).unwrap(), a);
        assert_eq!(a.derivative(), rf(&[-1], &[0, 0, 1]));
    }
}
