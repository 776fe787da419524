//! Integer-relation probing among monomials in evaluated constants, and the
//! rank lower bound implied by height and smallness constants.
//!
//! Nothing here ever claims algebraic independence: an empty search only
//! says that no relation of bounded height and degree was detected at the
//! stated precision.

pub mod values;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connection::monomial_exponents;
use crate::error::{Error, Result};
use crate::exact::lattice::lll_reduce;
use crate::exact::matrix::rank;
use crate::exact::rational::binomial;
use crate::exact::Rational;
use crate::lg::least_squares;
use crate::mp::{bits_for_digits, Real};

pub use values::RealValue;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationQuery {
    pub values: Vec<RealValue>,
    pub degree: usize,
    pub height_bound: u64,
    /// Decimal digits.
    pub precision: usize,
}

/// Exponent vectors of all monomials of total degree `<= n` in `k`
/// variables, graded by degree and lexicographically descending within a
/// degree. The count is `binom(k + n, n)`.
pub fn monomials_up_to(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for d in 0..=n {
        out.extend(monomial_exponents(k, d));
    }
    out
}

pub fn monomial_label(e: &[usize]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0)
        .map(|(i, &p)| if p == 1 { format!("y{}", i + 1) } else { format!("y{}^{}", i + 1, p) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Human-readable relation such as `y1^2 - y2`.
pub fn relation_text(coeffs: &[BigInt], monos: &[Vec<usize>]) -> String {
    let mut terms: Vec<(BigInt, String)> = coeffs
        .iter()
        .zip(monos)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, e)| (c.clone(), monomial_label(e)))
        .collect();
    // highest degree first reads naturally
    terms.reverse();
    let mut s = String::new();
    for (i, (c, m)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let one = mag == BigInt::from(1);
        match (one, m.as_str()) {
            (_, "1") => s.push_str(&mag.to_string()),
            (true, _) => s.push_str(m),
            (false, _) => s.push_str(&format!("{mag}*{m}")),
        }
    }
    s
}

mod serde_bigints {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
        let strs = Vec::<Vec<String>>::deserialize(d)?;
        strs.iter()
            .map(|r| r.iter().map(|c| c.parse().map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    RelationFound,
    /// No relation within the bounds; never evidence of independence on its
    /// own.
    NoneFound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub status: SearchStatus,
    pub monomials: Vec<String>,
    /// Least-height relation, coefficients aligned with `monomials`.
    pub found: Option<Vec<i64>>,
    pub relation_text: Option<String>,
    /// `log10 |sum c_a m_a|` at the search precision and at twice of it.
    pub residual_log10: Option<f64>,
    pub verified_residual_log10: Option<f64>,
    /// Every verified relation from the reduced basis (linearly independent).
    #[serde(with = "serde_bigints")]
    pub relations: Vec<Vec<BigInt>>,
    pub searched_height: u64,
    pub degree: usize,
    pub precision: usize,
    pub caveat: String,
}

fn monomial_values(values: &[Real], monos: &[Vec<usize>], bits: usize) -> Vec<Real> {
    monos
        .iter()
        .map(|e| {
            e.iter().zip(values).fold(Real::from_i64(1, bits), |acc, (&p, v)| {
                if p == 0 {
                    acc
                } else {
                    acc * v.powi(p)
                }
            })
        })
        .collect()
}

fn eval_values(vals: &[RealValue], bits: usize) -> Result<Vec<Real>> {
    vals.iter().map(|v| v.eval(bits)).collect()
}

fn residual_log10(coeffs: &[BigInt], mvals: &[Real], bits: usize) -> f64 {
    let s = coeffs
        .iter()
        .zip(mvals)
        .filter(|(c, _)| !c.is_zero())
        .fold(Real::zero(bits), |acc, (c, m)| acc + Real::from_bigint(c, bits) * m);
    s.log10_abs()
}

fn normalize_sign(mut c: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(last) = c.iter().rev().find(|x| !x.is_zero()) {
        if last.is_negative() {
            c.iter_mut().for_each(|x| *x = -x.clone());
        }
    }
    c
}

pub fn integer_relation_search(q: &RelationQuery) -> Result<RelationReport> {
    let k = q.values.len();
    if k == 0 {
        return Err(Error::NoData);
    }
    if q.degree == 0 || q.height_bound == 0 {
        return Err(Error::InsufficientData("degree and height bound must be positive".into()));
    }
    let monos = monomials_up_to(k, q.degree);
    let dim = monos.len();
    debug_assert_eq!(BigInt::from(dim), binomial((k + q.degree) as u64, q.degree as u64));
    let needed = 2.0 * (q.height_bound as f64).log10() * dim as f64;
    if (q.precision as f64) < needed {
        return Err(Error::InconclusiveSearch(format!(
            "precision {} digits is below 2 log10(H) * {} monomials = {:.1}",
            q.precision, dim, needed
        )));
    }
    for v in &q.values {
        if let Some(d) = v.intrinsic_digits() {
            if d < q.precision {
                return Err(Error::InconclusiveSearch(format!(
                    "value {v} carries {d} digits, search needs {}",
                    q.precision
                )));
            }
        }
    }
    let bits = bits_for_digits(q.precision + 20);
    let mvals = monomial_values(&eval_values(&q.values, bits)?, &monos, bits);
    let scale = Real::from_bigint(&num_traits::pow(BigInt::from(10), q.precision), bits);
    let basis: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut row = vec![BigInt::zero(); dim + 1];
            row[i] = BigInt::from(1);
            row[dim] = (&scale * &mvals[i]).round_to_bigint();
            row
        })
        .collect();
    let reduced = lll_reduce(&basis)?;
    let h = BigInt::from(q.height_bound);
    let accept = -(q.precision as f64) / 2.0;
    let mut cands: Vec<(Vec<BigInt>, f64)> = reduced
        .into_iter()
        .map(|r| r[..dim].to_vec())
        .filter(|c| c.iter().any(|x| !x.is_zero()) && c.iter().all(|x| x.abs() <= h))
        .map(|c| {
            let r = residual_log10(&c, &mvals, bits);
            (normalize_sign(c), r)
        })
        .filter(|(_, r)| *r <= accept)
        .collect();
    // Re-verify at doubled precision.
    let bits2 = bits_for_digits(2 * q.precision + 20);
    let mvals2 = monomial_values(&eval_values(&q.values, bits2).or_else(|_| eval_values(&q.values, bits))?, &monos, bits2);
    let mut verified = Vec::new();
    for (c, r) in cands.drain(..) {
        let r2 = residual_log10(&c, &mvals2, bits2);
        let limit = if q.values.iter().any(|v| v.intrinsic_digits().is_some()) { accept } else { -(q.precision as f64) };
        if r2 <= limit {
            verified.push((c, r, r2));
        }
    }
    verified.sort_by(|a, b| {
        let ha = a.0.iter().map(|x| x.abs()).max();
        let hb = b.0.iter().map(|x| x.abs()).max();
        ha.cmp(&hb).then_with(|| a.0.cmp(&b.0))
    });
    let labels: Vec<String> = monos.iter().map(|e| monomial_label(e)).collect();
    let caveat = format!(
        "search over degree <= {} monomials with coefficients |c| <= {} at {} digits; \
         absence of a relation is not a proof of independence",
        q.degree, q.height_bound, q.precision
    );
    let relations: Vec<Vec<BigInt>> = verified.iter().map(|v| v.0.clone()).collect();
    Ok(match verified.first() {
        Some((c, r, r2)) => RelationReport {
            status: SearchStatus::RelationFound,
            found: Some(c.iter().map(|x| i64::try_from(x).unwrap_or(i64::MAX)).collect()),
            relation_text: Some(relation_text(c, &monos)),
            residual_log10: Some(*r),
            verified_residual_log10: Some(*r2),
            monomials: labels,
            relations,
            searched_height: q.height_bound,
            degree: q.degree,
            precision: q.precision,
            caveat,
        },
        None => RelationReport {
            status: SearchStatus::NoneFound,
            found: None,
            relation_text: None,
            residual_log10: None,
            verified_residual_log10: None,
            monomials: labels,
            relations,
            searched_height: q.height_bound,
            degree: q.degree,
            precision: q.precision,
            caveat,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    /// `dim E_n`: number of monomials of degree `<= n`.
    pub ambient: usize,
    /// Independent relations detected.
    pub relations: usize,
    /// `ambient - relations`: the subspace has at most this dimension if the
    /// relations are genuine. No lower bound is implied.
    pub witness: usize,
    pub caveat: String,
}

pub fn subspace_dimension_estimate(values: &[RealValue], degree: usize, height_bound: u64, precision: usize) -> Result<DimensionEstimate> {
    let rep = integer_relation_search(&RelationQuery {
        values: values.to_vec(),
        degree,
        height_bound,
        precision,
    })?;
    let rows: Vec<Vec<Rational>> = rep
        .relations
        .iter()
        .map(|r| r.iter().cloned().map(Rational::from_integer).collect())
        .collect();
    let relations = if rows.is_empty() { 0 } else { rank(&rows) };
    let ambient = rep.monomials.len();
    Ok(DimensionEstimate {
        ambient,
        relations,
        witness: ambient - relations,
        caveat: rep.caveat,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub degree: usize,
    pub ambient: usize,
    pub witness: usize,
    pub ratio: f64,
}

/// Witness ratio `witness / ambient` for degrees `1..=max_degree`.
pub fn witness_ratio_profile(values: &[RealValue], max_degree: usize, height_bound: u64, precision: usize) -> Result<Vec<RatioRow>> {
    (1..=max_degree)
        .into_par_iter()
        .map(|n| {
            let d = subspace_dimension_estimate(values, n, height_bound, precision)?;
            Ok(RatioRow {
                degree: n,
                ambient: d.ambient,
                witness: d.witness,
                ratio: d.witness as f64 / d.ambient as f64,
            })
        })
        .collect()
}

/// Hypothesis constants: heights `<= c1 x log x + b1 x`, smallness
/// `log|F| <= (c1 - m c2 + c3) x log x + b2 x`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CramerInputs {
    pub m: Option<usize>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CramerBound {
    pub m: usize,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// `r_1 >= (m c2 - c3) / c1`.
    pub lower_bound: f64,
    pub vacuous: bool,
    /// The bound exceeds the rank: the hypotheses cannot all hold.
    pub exceeds_rank: bool,
    pub summary: String,
}

/// Evaluates `r_1 c_1 - m c_2 + c_3 >= 0` over the rationals.
pub fn cramer_bound_report(inputs: &CramerInputs) -> Result<CramerBound> {
    let m = inputs.m.ok_or(Error::IncompleteHypotheses("m".into()))?;
    let c1 = inputs.c1.ok_or(Error::IncompleteHypotheses("c1 (height growth)".into()))?;
    let c2 = inputs.c2.ok_or(Error::IncompleteHypotheses("c2 (smallness)".into()))?;
    let c3 = inputs.c3.ok_or(Error::IncompleteHypotheses("c3 (correction)".into()))?;
    if c1 <= 0.0 {
        return Err(Error::IncompleteHypotheses("c1 must be positive".into()));
    }
    let lower_bound = (m as f64 * c2 - c3) / c1;
    let vacuous = lower_bound <= 0.0;
    let exceeds_rank = lower_bound > m as f64 + 1e-9;
    let summary = if vacuous {
        format!("r1 >= {lower_bound:.4}: vacuous")
    } else {
        format!("r1 >= {lower_bound:.4} (m = {m})")
    };
    Ok(CramerBound {
        m,
        c1,
        c2,
        c3,
        lower_bound,
        vacuous,
        exceeds_rank,
        summary,
    })
}

/// Measures `c1` and `c2` (with `c3 = 0`) from a family of sections:
/// `log_height ~ c1 x log x + b1 x` and `log|F| ~ s x log x + b2 x`, giving
/// `c2 = (c1 - s)/m`.
pub fn cramer_constants_from_family(m: usize, xs: &[usize], log_heights: &[f64], log_abs_f: &[f64]) -> Result<CramerInputs> {
    if xs.len() < 3 || xs.len() != log_heights.len() || xs.len() != log_abs_f.len() {
        return Err(Error::InsufficientData("need at least 3 matched (x, height, |F|) samples".into()));
    }
    let design: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| {
            let xf = x as f64;
            vec![xf * xf.ln(), xf]
        })
        .collect();
    let (bh, _) = least_squares(&design, log_heights).ok_or(Error::InsufficientData("singular fit".into()))?;
    let (bf, _) = least_squares(&design, log_abs_f).ok_or(Error::InsufficientData("singular fit".into()))?;
    Ok(CramerInputs {
        m: Some(m),
        c1: Some(bh[0]),
        c2: Some((bh[0] - bf[0]) / m as f64),
        c3: Some(0.0),
    })
}
