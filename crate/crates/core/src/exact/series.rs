//! Exact truncated power series `sum_{k<=T} c_k (z - b)^k`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::rational::{serde_rational, serde_rational_vec, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncatedSeries {
    #[serde(with = "serde_rational")]
    base_point: Rational,
    #[serde(with = "serde_rational_vec")]
    coefficients: Vec<Rational>,
}

/// Result of a vanishing-order query on finite data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Vanishing {
    Order(usize),
    /// Every stored coefficient vanished; the true order exceeds `T`.
    SaturatedAt(usize),
}

impl Vanishing {
    pub fn order(self) -> Option<usize> {
        match self {
            Vanishing::Order(k) => Some(k),
            Vanishing::SaturatedAt(_) => None,
        }
    }
}

impl TruncatedSeries {
    /// Panics on an empty coefficient list: a series always stores `T + 1`
    /// coefficients.
    pub fn new(base_point: Rational, coefficients: Vec<Rational>) -> TruncatedSeries {
        assert!(!coefficients.is_empty(), "a truncated series needs T + 1 >= 1 coefficients");
        TruncatedSeries {
            base_point,
            coefficients,
        }
    }

    pub fn zero(base_point: Rational, order: usize) -> TruncatedSeries {
        TruncatedSeries::new(base_point, vec![Rational::zero(); order + 1])
    }

    pub fn constant(base_point: Rational, c: Rational, order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(base_point, order);
        s.coefficients[0] = c;
        s
    }

    pub fn from_fn(base_point: Rational, order: usize, f: impl Fn(usize) -> Rational) -> TruncatedSeries {
        TruncatedSeries::new(base_point, (0..=order).map(f).collect())
    }

    pub fn base_point(&self) -> &Rational {
        &self.base_point
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coefficients[k]
    }

    /// Truncation order `T`.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        let n = (order + 1).min(self.coefficients.len());
        TruncatedSeries::new(self.base_point.clone(), self.coefficients[..n].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn vanishing_order(&self) -> Vanishing {
        match self.coefficients.iter().position(|c| !c.is_zero()) {
            Some(k) => Vanishing::Order(k),
            None => Vanishing::SaturatedAt(self.order()),
        }
    }

    fn check_compatible(&self, other: &TruncatedSeries) -> Result<()> {
        if self.base_point != other.base_point {
            return Err(Error::PairingMismatch(format!(
                "base points {} and {}",
                self.base_point, other.base_point
            )));
        }
        Ok(())
    }

    fn zip(&self, other: &TruncatedSeries, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<TruncatedSeries> {
        self.check_compatible(other)?;
        let n = self.coefficients.len().min(other.coefficients.len());
        Ok(TruncatedSeries::new(
            self.base_point.clone(),
            (0..n)
                .map(|k| f(&self.coefficients[k], &other.coefficients[k]))
                .collect(),
        ))
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.zip(other, |a, b| a - b)
    }

    /// Cauchy product, truncated at the smaller of the two orders.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(other)?;
        let n = self.coefficients.len().min(other.coefficients.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coefficients.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(TruncatedSeries::new(self.base_point.clone(), out))
    }

    /// Series quotient; the divisor must have a non-zero constant term.
    pub fn div(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(other)?;
        let d0 = other.coefficients[0].clone();
        if d0.is_zero() {
            return Err(Error::ExpansionAtPole(self.base_point.to_string()));
        }
        let inv = Rational::one() / d0;
        let n = self.coefficients.len().min(other.coefficients.len());
        let mut q: Vec<Rational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coefficients[k].clone();
            for j in 1..=k {
                if !other.coefficients[j].is_zero() {
                    acc -= &other.coefficients[j] * &q[k - j];
                }
            }
            q.push(acc * &inv);
        }
        Ok(TruncatedSeries::new(self.base_point.clone(), q))
    }

    pub fn scale(&self, c: &Rational) -> TruncatedSeries {
        TruncatedSeries::new(
            self.base_point.clone(),
            self.coefficients.iter().map(|a| a * c).collect(),
        )
    }

    /// `d/dz`; the result has truncation order `T - 1` (order 0 stays 0).
    pub fn derivative(&self) -> TruncatedSeries {
        if self.coefficients.len() == 1 {
            return TruncatedSeries::zero(self.base_point.clone(), 0);
        }
        TruncatedSeries::new(
            self.base_point.clone(),
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    /// Product with a polynomial given in the global variable `z`.
    pub fn mul_poly(&self, p: &Poly) -> TruncatedSeries {
        let local = p.expand_at(&self.base_point, self.order());
        self.mul(&local).expect("same base point")
    }

    /// Evaluates the truncated sum at a complex point (double precision).
    pub fn eval_f64(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let t = z - super::rational::to_f64(&self.base_point);
        self.coefficients
            .iter()
            .rev()
            .fold(num_complex::Complex64::zero(), |acc, c| {
                acc * t + super::rational::to_f64(c)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{factorial, int};

    fn exp_series(order: usize) -> TruncatedSeries {
        TruncatedSeries::from_fn(int(0), order, |k| {
            Rational::new(1.into(), factorial(k as u64))
        })
    }

    #[test]
    fn exp_squared_is_exp_two_z() {
        let e = exp_series(10);
        let e2 = e.mul(&e).unwrap();
        for k in 0..=10 {
            let expect = Rational::new(num_bigint::BigInt::from(2).pow(k as u32), factorial(k as u64));
            assert_eq!(e2.coeff(k), &expect);
        }
    }

    #[test]
    fn division_inverts_product() {
        let e = exp_series(8);
        let g = TruncatedSeries::new(int(0), vec![int(1), int(-1), int(3), int(0), int(2), int(0), int(0), int(1), int(5)]);
        assert_eq!(e.mul(&g).unwrap().div(&g).unwrap(), e);
    }

    #[test]
    fn vanishing() {
        let s = TruncatedSeries::new(int(0), vec![int(0), int(0), int(3)]);
        assert_eq!(s.vanishing_order(), Vanishing::Order(2));
        assert_eq!(TruncatedSeries::zero(int(0), 4).vanishing_order(), Vanishing::SaturatedAt(4));
        let one_plus_z = TruncatedSeries::new(int(0), vec![int(1), int(1)]);
        assert_eq!(one_plus_z.vanishing_order(), Vanishing::Order(0));
    }

    #[test]
    fn mismatched_base_points_rejected() {
        let a = TruncatedSeries::zero(int(0), 3);
        let b = TruncatedSeries::zero(int(1), 3);
        assert!(matches!(a.add(&b), Err(Error::PairingMismatch(_))));
    }
}
