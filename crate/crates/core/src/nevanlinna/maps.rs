//! Analytic maps into the projective line with overflow-safe logarithmic
//! evaluation and, where closed forms exist, zero enumeration of `f - a`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::to_f64;
use crate::exact::TruncatedSeries;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticMap {
    Identity,
    Constant { value: Complex64 },
    /// Ascending coefficients.
    Polynomial { coeffs: Vec<Complex64> },
    /// `exp(c z^k)`.
    ExpMonomial { coefficient: f64, power: u32 },
    /// A truncated Taylor series about `center`, evaluated as a polynomial.
    Series { center: f64, coeffs: Vec<f64> },
}

/// `log(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

impl AnalyticMap {
    pub fn exp_z() -> Self {
        AnalyticMap::ExpMonomial { coefficient: 1.0, power: 1 }
    }

    pub fn exp_z2() -> Self {
        AnalyticMap::ExpMonomial { coefficient: 1.0, power: 2 }
    }

    pub fn from_series(s: &TruncatedSeries) -> Self {
        AnalyticMap::Series {
            center: to_f64(s.base_point()),
            coeffs: s.coeffs().iter().map(to_f64).collect(),
        }
    }

    /// Parses `z`, `exp(z)`, `exp(z^k)`, `exp(c*z^k)` or a number.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "z" {
            return Ok(AnalyticMap::Identity);
        }
        if let Some(inner) = s.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
            let (coef, mono) = match inner.split_once('*') {
                Some((c, m)) => (c.parse::<f64>().map_err(|_| Error::BadRational(c.into()))?, m),
                None => (1.0, inner),
            };
            let power = match mono {
                "z" => 1,
                m => m
                    .strip_prefix("z^")
                    .and_then(|k| k.parse::<u32>().ok())
                    .filter(|k| *k > 0)
                    .ok_or_else(|| Error::Parse { position: 0, message: format!("unsupported map {text}") })?,
            };
            return Ok(AnalyticMap::ExpMonomial { coefficient: coef, power });
        }
        s.parse::<f64>()
            .map(|v| AnalyticMap::Constant { value: Complex64::new(v, 0.0) })
            .map_err(|_| Error::Parse { position: 0, message: format!("unsupported map {text}") })
    }

    fn value(&self, z: Complex64) -> Complex64 {
        match self {
            AnalyticMap::Identity => z,
            AnalyticMap::Constant { value } => *value,
            AnalyticMap::Polynomial { coeffs } => horner(coeffs.iter().copied(), z),
            AnalyticMap::ExpMonomial { coefficient, power } => (*coefficient * z.powu(*power)).exp(),
            AnalyticMap::Series { center, coeffs } => {
                horner(coeffs.iter().map(|c| Complex64::new(*c, 0.0)), z - center)
            }
        }
    }

    fn exponent(&self, z: Complex64) -> Option<Complex64> {
        match self {
            AnalyticMap::ExpMonomial { coefficient, power } => Some(*coefficient * z.powu(*power)),
            _ => None,
        }
    }

    /// `log |f(z)|`.
    pub fn log_abs(&self, z: Complex64) -> f64 {
        match self.exponent(z) {
            Some(u) => u.re,
            None => self.value(z).norm().ln(),
        }
    }

    /// `log(1 + |f(z)|^2)`.
    pub fn log_one_plus_abs_sq(&self, z: Complex64) -> f64 {
        softplus(2.0 * self.log_abs(z))
    }

    /// `log |f(z) - a|`.
    pub fn log_abs_minus(&self, z: Complex64, a: Complex64) -> f64 {
        if a == Complex64::new(0.0, 0.0) {
            return self.log_abs(z);
        }
        match self.exponent(z) {
            Some(u) => {
                let la = a.norm().ln();
                if u.re > la {
                    u.re + (1.0 - a * (-u).exp()).norm().ln()
                } else {
                    la + ((u.exp() / a) - 1.0).norm().ln()
                }
            }
            None => (self.value(z) - a).norm().ln(),
        }
    }

    /// Zeros of `f - a` in `|z| <= radius` with multiplicities, for maps with
    /// a closed form.
    pub fn zeros_of_shift(&self, a: Complex64, radius: f64) -> Result<Vec<(Complex64, u32)>> {
        match self {
            AnalyticMap::Identity => Ok(if a.norm() <= radius { vec![(a, 1)] } else { vec![] }),
            AnalyticMap::Constant { value } => {
                if *value == a {
                    Err(Error::TrivialInput("constant map equal to the target".into()))
                } else {
                    Ok(vec![])
                }
            }
            AnalyticMap::Polynomial { coeffs } => {
                let mut c = coeffs.clone();
                if c.is_empty() {
                    c.push(Complex64::new(0.0, 0.0));
                }
                c[0] -= a;
                Ok(polynomial_roots(&c)?
                    .into_iter()
                    .filter(|z| z.norm() <= radius)
                    .map(|z| (z, 1))
                    .collect())
            }
            AnalyticMap::ExpMonomial { coefficient, power } => {
                if a.norm() == 0.0 {
                    return Ok(vec![]);
                }
                let k = *power as f64;
                let log_a = a.ln();
                let jmax = ((coefficient.abs() * radius.powf(k) + log_a.norm()) / (2.0 * PI)).ceil() as i64 + 1;
                let mut out = Vec::new();
                for j in -jmax..=jmax {
                    let w = (log_a + Complex64::new(0.0, 2.0 * PI * j as f64)) / *coefficient;
                    if w.norm() == 0.0 {
                        out.push((Complex64::new(0.0, 0.0), *power));
                        continue;
                    }
                    let base = w.powf(1.0 / k);
                    for l in 0..*power {
                        let z = base * Complex64::from_polar(1.0, 2.0 * PI * l as f64 / k);
                        if z.norm() <= radius {
                            out.push((z, 1));
                        }
                    }
                }
                Ok(out)
            }
            AnalyticMap::Series { .. } => Err(Error::InsufficientData(
                "zeros of a series map must be supplied by the caller".into(),
            )),
        }
    }
}

fn horner(coeffs: impl DoubleEndedIterator<Item = Complex64>, z: Complex64) -> Complex64 {
    coeffs.rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Roots of an ascending coefficient list via companion-matrix eigenvalues.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if c.is_empty() {
        return Err(Error::TrivialInput("zero polynomial".into()));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = c[n];
    let comp = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eig = comp
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Dimension("eigenvalue iteration failed".into()))?;
    Ok(eig.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_logs() {
        let f = AnalyticMap::exp_z2();
        let z = Complex64::new(1000.0, 0.0);
        assert_eq!(f.log_abs(z), 1e6);
        assert_eq!(f.log_one_plus_abs_sq(z), 2e6);
        assert!((f.log_abs_minus(z, Complex64::new(1.0, 0.0)) - 1e6).abs() < 1e-9);
        assert!(softplus(-800.0) >= 0.0);
    }

    #[test]
    fn exp_zeros() {
        let z = AnalyticMap::exp_z().zeros_of_shift(Complex64::new(1.0, 0.0), 20.0).unwrap();
        // 0, +-2 pi i, +-4 pi i, +-6 pi i
        assert_eq!(z.len(), 7);
        for (w, m) in z {
            assert_eq!(m, 1);
            assert!((w.exp() - 1.0).norm() < 1e-12);
        }
        let z2 = AnalyticMap::exp_z2().zeros_of_shift(Complex64::new(1.0, 0.0), 3.0).unwrap();
        assert!(z2.contains(&(Complex64::new(0.0, 0.0), 2)));
        for (w, _) in z2 {
            assert!(((w * w).exp() - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn companion_roots() {
        let c: Vec<Complex64> = [2.0, -3.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut r: Vec<f64> = polynomial_roots(&c).unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn parse_maps() {
        assert_eq!(AnalyticMap::parse("exp(z^2)").unwrap(), AnalyticMap::exp_z2());
        assert_eq!(AnalyticMap::parse("z").unwrap(), AnalyticMap::Identity);
        assert!(AnalyticMap::parse("sin(z)").is_err());
    }
}
