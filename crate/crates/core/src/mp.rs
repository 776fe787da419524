//! Thin arbitrary-precision real and complex types over `astro_float`,
//! with operator overloading and conversions to the exact types.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::exact::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Bits needed for `digits` decimal digits.
pub fn bits_for_digits(digits: usize) -> usize {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 8
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Real {
        Real { v, prec }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Real {
        let mut v = self.v.clone();
        let _ = v.set_precision(prec, RM);
        Real::wrap(v, prec)
    }

    pub fn zero(prec: usize) -> Real {
        Real::wrap(BigFloat::from_i32(0, prec), prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Real {
        Real::wrap(BigFloat::from_i64(n, prec), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Real {
        Real::wrap(BigFloat::from_f64(x, prec), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: usize) -> Real {
        let s = n.to_string();
        with_cc(|cc| Real::wrap(BigFloat::parse(&s, Radix::Dec, prec, RM, cc), prec))
    }

    pub fn from_rational(q: &Rational, prec: usize) -> Real {
        Real::from_bigint(q.numer(), prec) / Real::from_bigint(q.denom(), prec)
    }

    /// Parses a decimal literal such as `2.718281828` or `-1.5e-3`.
    pub fn parse(s: &str, prec: usize) -> Option<Real> {
        let v = with_cc(|cc| BigFloat::parse(s.trim(), Radix::Dec, prec, RM, cc));
        if v.is_nan() {
            None
        } else {
            Some(Real::wrap(v, prec))
        }
    }

    pub fn pi(prec: usize) -> Real {
        with_cc(|cc| Real::wrap(cc.pi(prec, RM), prec))
    }

    pub fn exp(&self) -> Real {
        with_cc(|cc| Real::wrap(self.v.exp(self.prec, RM, cc), self.prec))
    }

    pub fn ln(&self) -> Real {
        with_cc(|cc| Real::wrap(self.v.ln(self.prec, RM, cc), self.prec))
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn sin(&self) -> Real {
        with_cc(|cc| Real::wrap(self.v.sin(self.prec, RM, cc), self.prec))
    }

    pub fn cos(&self) -> Real {
        with_cc(|cc| Real::wrap(self.v.cos(self.prec, RM, cc), self.prec))
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.prec)
    }

    pub fn powi(&self, n: usize) -> Real {
        Real::wrap(self.v.powi(n, self.prec, RM), self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    /// Nearest integer (ties to even).
    pub fn round_to_bigint(&self) -> BigInt {
        let r = self.v.round(0, RM);
        if r.is_zero() {
            return BigInt::zero();
        }
        let (words, _, sign, e, _) = r.as_raw_parts().expect("finite value");
        let mag = BigUint::from_slice(
            &words
                .iter()
                .flat_map(|w| [(*w & 0xffff_ffff) as u32, (*w >> 32) as u32])
                .collect::<Vec<u32>>(),
        );
        let total_bits = 64 * words.len() as i64;
        let shift = total_bits - e as i64;
        let mag = if shift >= 0 { mag >> shift as usize } else { mag << (-shift) as usize };
        let n = BigInt::from(mag);
        if sign == Sign::Neg {
            -n
        } else {
            n
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let n = words.len();
        let mut m = words[n - 1] as f64;
        if n >= 2 {
            m += words[n - 2] as f64 / 18446744073709551616.0;
        }
        let x = m * 2f64.powi(e - 64);
        if sign == Sign::Neg {
            -x
        } else {
            x
        }
    }

    /// Base-10 exponent estimate: `log10 |x|`, `-inf` at zero.
    pub fn log10_abs(&self) -> f64 {
        if self.v.is_zero() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _, _, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let top = words[words.len() - 1] as f64 / 18446744073709551616.0;
        top.log10() + e as f64 * std::f64::consts::LOG10_2
    }

    /// Decimal string with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let p = bits_for_digits(digits).min(self.prec.max(64));
        let v = self.with_precision(p);
        with_cc(|cc| v.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(20))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_op {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.prec.max(rhs.prec);
                Real::wrap(self.v.$m(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}
real_op!(Add, add);
real_op!(Sub, sub);
real_op!(Mul, mul);
real_op!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

/// Complex number with `Real` parts.
#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: Real,
    pub im: Real,
}

impl MpComplex {
    pub fn new(re: Real, im: Real) -> MpComplex {
        MpComplex { re, im }
    }

    pub fn zero(prec: usize) -> MpComplex {
        MpComplex::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn from_real(re: Real) -> MpComplex {
        let p = re.precision();
        MpComplex::new(re, Real::zero(p))
    }

    pub fn from_c64(z: num_complex::Complex64, prec: usize) -> MpComplex {
        MpComplex::new(Real::from_f64(z.re, prec), Real::from_f64(z.im, prec))
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &Real) -> MpComplex {
        MpComplex::new(theta.cos(), theta.sin())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, r: &Real) -> MpComplex {
        MpComplex::new(&self.re * r, &self.im * r)
    }
}

impl Add<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn add(self, rhs: &MpComplex) -> MpComplex {
        MpComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn sub(self, rhs: &MpComplex) -> MpComplex {
        MpComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn mul(self, rhs: &MpComplex) -> MpComplex {
        MpComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn div(self, rhs: &MpComplex) -> MpComplex {
        let d = rhs.norm_sqr();
        MpComplex::new(
            (&self.re * &rhs.re + &self.im * &rhs.im) / &d,
            (&self.im * &rhs.re - &self.re * &rhs.im) / &d,
        )
    }
}

impl Neg for &MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex::new(-&self.re, -&self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_and_conversions() {
        let p = bits_for_digits(50);
        let e = Real::from_i64(1, p).exp();
        assert!(e.to_decimal(30).starts_with("2.71828182845904523536028747"));
        assert!((Real::pi(p).to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let scaled = &e * &Real::from_i64(1_000_000, p);
        assert_eq!(scaled.round_to_bigint(), BigInt::from(2_718_282));
        assert_eq!((-scaled).round_to_bigint(), BigInt::from(-2_718_282));
        let third = Real::from_rational(&crate::exact::rational::rat(1, 3), p);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        assert!((Real::from_i64(12345, p).log10_abs() - 12345f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn complex_field_ops() {
        let p = 128;
        let a = MpComplex::from_c64(num_complex::Complex64::new(1.0, 2.0), p);
        let b = MpComplex::from_c64(num_complex::Complex64::new(-3.0, 0.5), p);
        let q = &(&a * &b) / &b;
        assert!((q.to_c64() - a.to_c64()).norm() < 1e-30);
    }
}
