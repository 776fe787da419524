//! Arithmetic growth certificates for power-series coefficients and the
//! growth-order balance test for sections of finite order.
//!
//! A germ `sum a_i z^i` has type `alpha` at a prime `p` with slope `c_p` when
//! `v_p(a_i) >= -alpha v_p(i!) - i c_p` for all `i`. On finite data every
//! slope is finite; what carries information is which primes need a positive
//! slope and whether `sum c_p log p` settles as the truncation grows.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{legendre, padic_valuation, prime_factors, serde_rational, to_f64};
use crate::exact::{Rational, TruncatedSeries};

const TRIAL_BOUND: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LgVerdict {
    CertifiedToOrder { order: usize },
    /// A coefficient fails the bound at index `index` for every slope; only
    /// index 0 can do so on finite data.
    ViolatedAtIndex { index: usize, prime: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSlope {
    pub prime: u64,
    #[serde(with = "serde_rational")]
    pub slope: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LgCertificate {
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    /// Primes with a strictly positive minimal slope.
    pub bad_primes: Vec<PrimeSlope>,
    pub truncation_order: usize,
    pub verdict: LgVerdict,
    /// `sum_p c_p log p`.
    pub slope_sum: f64,
}

impl LgCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self.verdict, LgVerdict::CertifiedToOrder { .. })
    }
}

fn candidate_primes(germs: &[TruncatedSeries]) -> Result<Vec<u64>> {
    let mut dens: BTreeSet<BigUint> = BTreeSet::new();
    for g in germs {
        for c in g.coeffs() {
            if !c.is_zero() && c.denom() != &1.into() {
                dens.insert(c.denom().magnitude().clone());
            }
        }
    }
    // Factor the lcm piecewise: distinct denominators share most primes.
    let mut primes: BTreeSet<u64> = BTreeSet::new();
    for d in dens {
        let mut rest = d;
        for &p in &primes {
            while (&rest % p).is_zero() {
                rest /= p;
            }
        }
        if rest == BigUint::from(1u32) {
            continue;
        }
        for (p, _) in prime_factors(&rest, TRIAL_BOUND) {
            let p = p
                .to_u64()
                .ok_or_else(|| Error::InsufficientData(format!("prime factor {p} exceeds 64 bits")))?;
            primes.insert(p);
        }
    }
    Ok(primes.into_iter().collect())
}

/// Minimal slope at `p`, or the first index whose coefficient cannot be
/// bounded by any slope.
fn slope_at(germs: &[TruncatedSeries], alpha: &Rational, p: u64) -> std::result::Result<Rational, usize> {
    let mut best = Rational::zero();
    for g in germs {
        for (i, a) in g.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let v = padic_valuation(a, p).expect("p is prime, a non-zero");
            let excess = Rational::from_integer((-v).into()) - alpha * Rational::from_integer(legendre(i as u64, p).into());
            if i == 0 {
                if excess > Rational::zero() {
                    return Err(0);
                }
                continue;
            }
            let s = excess / Rational::from_integer(i.into());
            if s > best {
                best = s;
            }
        }
    }
    Ok(best)
}

/// Computes per-prime minimal slopes for the germs at type `alpha`.
pub fn certify_lg(germs: &[TruncatedSeries], alpha: &Rational) -> Result<LgCertificate> {
    let first = germs.first().ok_or(Error::NoData)?;
    let t = first.order();
    if germs.iter().any(|g| g.order() != t) {
        return Err(Error::GermData("germs have different truncation orders".into()));
    }
    if t < 2 {
        return Err(Error::InsufficientData(format!("truncation order {t} < 2")));
    }
    if alpha < &Rational::zero() {
        return Err(Error::InsufficientData("alpha must be non-negative".into()));
    }
    let primes = candidate_primes(germs)?;
    let slopes: Vec<(u64, std::result::Result<Rational, usize>)> = primes
        .par_iter()
        .map(|&p| (p, slope_at(germs, alpha, p)))
        .collect();
    let mut bad = Vec::new();
    let mut verdict = LgVerdict::CertifiedToOrder { order: t };
    for (p, s) in slopes {
        match s {
            Ok(s) if s > Rational::zero() => bad.push(PrimeSlope { prime: p, slope: s }),
            Ok(_) => {}
            Err(index) => {
                if matches!(verdict, LgVerdict::CertifiedToOrder { .. }) {
                    verdict = LgVerdict::ViolatedAtIndex { index, prime: p };
                }
            }
        }
    }
    let slope_sum = bad.iter().map(|b| to_f64(&b.slope) * (b.prime as f64).ln()).sum();
    Ok(LgCertificate {
        alpha: alpha.clone(),
        bad_primes: bad,
        truncation_order: t,
        verdict,
        slope_sum,
    })
}

/// `sum c_p log p` at each truncation order; strictly increasing values are
/// the refutation signal.
pub fn slope_sum_profile(germs: &[TruncatedSeries], alpha: &Rational, orders: &[usize]) -> Result<Vec<(usize, f64)>> {
    orders
        .iter()
        .map(|&t| {
            let cut: Vec<TruncatedSeries> = germs.iter().map(|g| g.truncate(t)).collect();
            Ok((t, certify_lg(&cut, alpha)?.slope_sum))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthMethod {
    CoefficientOrder,
    Nevanlinna,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub rho: f64,
    pub fit_residual: f64,
    pub method: GrowthMethod,
}

/// Least squares for `y ~ X beta` via the normal equations.
pub(crate) fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let k = rows.first()?.len();
    let x = nalgebra::DMatrix::from_fn(rows.len(), k, |i, j| rows[i][j]);
    let yv = nalgebra::DVector::from_column_slice(y);
    let svd = x.clone().svd(true, true);
    let beta = svd.solve(&yv, 1e-12).ok()?;
    let resid = &x * &beta - &yv;
    let rms = (resid.norm_squared() / rows.len() as f64).sqrt();
    Some((beta.iter().copied().collect(), rms))
}

/// Order of an entire germ from its coefficients: fits
/// `-log|a_n| = b_1 n log n + b_2 n + b_3 log n + b_4` on the non-zero tail
/// `n >= T/2` and returns `rho = 1 / b_1`. A germ with no non-zero tail
/// coefficient is treated as a polynomial and has order 0.
pub fn coefficient_growth_order(germ: &TruncatedSeries) -> Result<GrowthEstimate> {
    let t = germ.order();
    if t < 50 {
        return Err(Error::InsufficientData(format!("truncation order {t} < 50")));
    }
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for n in (t / 2).max(2)..=t {
        let a = germ.coeff(n);
        if a.is_zero() {
            continue;
        }
        let nf = n as f64;
        rows.push(vec![nf * nf.ln(), nf, nf.ln(), 1.0]);
        y.push(-crate::exact::rational::log_abs(a));
    }
    if rows.is_empty() {
        return Ok(GrowthEstimate {
            rho: 0.0,
            fit_residual: 0.0,
            method: GrowthMethod::CoefficientOrder,
        });
    }
    if rows.len() < 8 {
        return Err(Error::InsufficientData("fewer than 8 non-zero tail coefficients".into()));
    }
    let (beta, rms) = least_squares(&rows, &y).ok_or(Error::InsufficientData("singular fit".into()))?;
    if beta[0] <= 1e-9 {
        return Err(Error::NotEntire);
    }
    Ok(GrowthEstimate {
        rho: 1.0 / beta[0],
        fit_residual: rms,
        method: GrowthMethod::CoefficientOrder,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ESectionReport {
    pub accepted: bool,
    pub measured_rho: f64,
    /// `s / alpha`.
    pub expected_rho: f64,
    pub tolerance: f64,
    pub certified: bool,
    pub summary: String,
}

pub const E_SECTION_TOLERANCE: f64 = 0.1;

/// Accepts when the germ data is certified and `|rho - s/alpha| <= tolerance`.
pub fn check_e_section(cert: &LgCertificate, growth: &GrowthEstimate, s: usize, tolerance: f64) -> ESectionReport {
    let alpha = to_f64(&cert.alpha);
    let expected = if alpha > 0.0 { s as f64 / alpha } else { f64::INFINITY };
    let certified = cert.is_certified();
    let balanced = (growth.rho - expected).abs() <= tolerance;
    let accepted = certified && balanced;
    let summary = format!(
        "measured order {:.4} vs s/alpha = {}/{} = {:.4} (tolerance {}); certificate {}",
        growth.rho,
        s,
        cert.alpha,
        expected,
        tolerance,
        if certified { "valid to order T" } else { "violated" }
    );
    ESectionReport {
        accepted,
        measured_rho: growth.rho,
        expected_rho: expected,
        tolerance,
        certified,
        summary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{factorial, int};

    fn inv_factorial_power(order: usize, k: u32) -> TruncatedSeries {
        TruncatedSeries::from_fn(int(0), order, |j| {
            Rational::new(1.into(), factorial(j as u64).pow(k))
        })
    }

    #[test]
    fn exp_is_type_one() {
        let c = certify_lg(&[inv_factorial_power(60, 1)], &int(1)).unwrap();
        assert!(c.is_certified());
        assert!(c.bad_primes.is_empty());
        assert_eq!(c.slope_sum, 0.0);
    }

    #[test]
    fn squared_factorials_need_type_two() {
        let g = inv_factorial_power(30, 2);
        let c1 = certify_lg(std::slice::from_ref(&g), &int(1)).unwrap();
        assert!(!c1.bad_primes.is_empty());
        assert!(c1.bad_primes.iter().all(|b| b.prime <= 30));
        let c2 = certify_lg(&[g], &int(2)).unwrap();
        assert!(c2.bad_primes.is_empty());
    }

    #[test]
    fn constant_term_violation() {
        let g = TruncatedSeries::new(int(0), vec![crate::exact::rational::rat(1, 3), int(1), int(1)]);
        let c = certify_lg(&[g], &int(1)).unwrap();
        assert_eq!(c.verdict, LgVerdict::ViolatedAtIndex { index: 0, prime: 3 });
    }

    #[test]
    fn empty_input() {
        assert_eq!(certify_lg(&[], &int(1)), Err(Error::NoData));
    }

    #[test]
    fn growth_orders() {
        let e = inv_factorial_power(400, 1);
        let g = coefficient_growth_order(&e).unwrap();
        assert!((g.rho - 1.0).abs() < 0.05, "{g:?}");
        let e2 = TruncatedSeries::from_fn(int(0), 400, |n| {
            if n % 2 == 0 {
                Rational::new(1.into(), factorial(n as u64 / 2))
            } else {
                Rational::zero()
            }
        });
        let g2 = coefficient_growth_order(&e2).unwrap();
        assert!((g2.rho - 2.0).abs() < 0.1, "{g2:?}");
        let poly = TruncatedSeries::from_fn(int(0), 60, |n| if n < 3 { int(1) } else { Rational::zero() });
        assert_eq!(coefficient_growth_order(&poly).unwrap().rho, 0.0);
        let geo = TruncatedSeries::from_fn(int(0), 60, |_| int(1));
        assert_eq!(coefficient_growth_order(&geo), Err(Error::NotEntire));
    }
}
