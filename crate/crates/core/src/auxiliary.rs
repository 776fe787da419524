//! Small integer sections with prescribed vanishing: a Siegel-lemma style
//! construction by exact kernel computation and lattice reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connection::{pair, DifferentialSystem, PolySection};
use crate::error::{Error, Result};
use crate::exact::lattice::lll_reduce;
use crate::exact::matrix::{kernel_basis, rank};
use crate::exact::rational::binomial;
use crate::exact::{Height, Rational, TruncatedSeries};
use crate::lg::least_squares;

#[derive(Clone, Debug, PartialEq)]
pub struct VanishingProblem {
    pub points: Vec<Rational>,
    /// `germs[j][k]`: component `k` of the solution germ at `points[j]`.
    pub germs: Vec<Vec<TruncatedSeries>>,
    pub degree: usize,
    pub target_orders: Vec<usize>,
}

/// How the default target order is chosen from `m`, `x` and `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TargetRule {
    /// `floor((m(x+1) - 1)/s)`: as many conditions as leave a non-zero kernel.
    #[default]
    Maximal,
    /// One condition fewer per point than `Maximal`.
    OneSpare,
}

impl TargetRule {
    pub fn target(self, m: usize, x: usize, s: usize) -> usize {
        let base = (m * (x + 1) - 1) / s.max(1);
        match self {
            TargetRule::Maximal => base,
            TargetRule::OneSpare => base.saturating_sub(1),
        }
    }
}

impl VanishingProblem {
    pub fn rank(&self) -> usize {
        self.germs.first().map_or(0, Vec::len)
    }

    pub fn unknowns(&self) -> usize {
        self.rank() * (self.degree + 1)
    }

    pub fn constraints(&self) -> usize {
        self.target_orders.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.points.len();
        if s == 0 {
            return Err(Error::NoData);
        }
        if self.germs.len() != s || self.target_orders.len() != s {
            return Err(Error::GermData(format!(
                "{} points, {} germ vectors, {} target orders",
                s,
                self.germs.len(),
                self.target_orders.len()
            )));
        }
        let m = self.rank();
        if m == 0 || self.germs.iter().any(|g| g.len() != m) {
            return Err(Error::GermData("every point needs the same number of germs".into()));
        }
        for i in 0..s {
            for j in 0..i {
                if self.points[i] == self.points[j] {
                    return Err(Error::GermData(format!("repeated point {}", self.points[i])));
                }
            }
            for g in &self.germs[i] {
                if g.base_point() != &self.points[i] {
                    return Err(Error::GermData(format!(
                        "germ based at {} listed for point {}",
                        g.base_point(),
                        self.points[i]
                    )));
                }
                if g.order() < self.target_orders[i] + self.degree + 2 {
                    return Err(Error::GermData(format!(
                        "germ truncation {} below required {}",
                        g.order(),
                        self.target_orders[i] + self.degree + 2
                    )));
                }
            }
        }
        if self.constraints() >= self.unknowns() {
            return Err(Error::OverConstrained {
                constraints: self.constraints(),
                unknowns: self.unknowns(),
            });
        }
        Ok(())
    }

    /// Rows: Taylor coefficients `0..nu_j` of `<P, f_j>` at each point, in the
    /// unknowns `P_k = sum_d u_{k(x+1)+d} z^d`.
    pub fn constraint_matrix(&self) -> Vec<Vec<Rational>> {
        let x = self.degree;
        let m = self.rank();
        let mut rows = Vec::with_capacity(self.constraints());
        for ((p, germs), &nu) in self.points.iter().zip(&self.germs).zip(&self.target_orders) {
            // powers p^e and binomials for (p + t)^d
            let pw: Vec<Rational> = (0..=x)
                .scan(Rational::one(), |acc, _| {
                    let cur = acc.clone();
                    *acc *= p;
                    Some(cur)
                })
                .collect();
            for i in 0..nu {
                let mut row = vec![Rational::zero(); m * (x + 1)];
                for (k, f) in germs.iter().enumerate() {
                    for d in 0..=x {
                        let mut acc = Rational::zero();
                        for l in 0..=d.min(i) {
                            let c = f.coeff(i - l);
                            if c.is_zero() {
                                continue;
                            }
                            let b = Rational::from_integer(binomial(d as u64, l as u64));
                            acc += b * &pw[d - l] * c;
                        }
                        row[k * (x + 1) + d] = acc;
                    }
                }
                rows.push(row);
            }
        }
        rows
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructedSection {
    pub section: PolySection,
    /// Vanishing order of `<P, f_j>` at each point.
    pub achieved_orders: Vec<usize>,
    /// Whether the order at a point hit the germ truncation (true order may
    /// be larger).
    pub saturated: Vec<bool>,
    pub height: Height,
    pub kernel_dimension: usize,
    pub target_orders: Vec<usize>,
}

fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn int_height(v: &[BigInt]) -> f64 {
    v.iter()
        .map(|c| if c.is_zero() { 0.0 } else { crate::exact::rational::log_abs_int(c) })
        .fold(0.0, f64::max)
}

/// Smallest height first; equal heights are ordered lexicographically on
/// the coefficient vector.
fn pick_smallest(cands: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let mut all: Vec<(Vec<BigInt>, BigInt)> = cands
        .into_iter()
        .flat_map(|v| {
            let neg: Vec<BigInt> = v.iter().map(|c| -c).collect();
            [v, neg]
        })
        .map(|v| {
            let m = v.iter().map(|c| c.abs()).max().unwrap_or_default();
            (v, m)
        })
        .collect();
    all.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    all.into_iter().next().map(|(v, _)| v).unwrap_or_default()
}

pub fn construct_small_section(prob: &VanishingProblem) -> Result<ConstructedSection> {
    prob.validate()?;
    let m = prob.rank();
    let x = prob.degree;
    let n = prob.unknowns();
    let rows = prob.constraint_matrix();
    let r = rank(&rows);
    let kernel = kernel_basis(&rows, n);
    assert_eq!(kernel.len(), n - r, "rank-nullity");
    assert!(kernel.len() >= n - prob.constraints());
    if kernel.is_empty() {
        return Err(Error::OverConstrained {
            constraints: prob.constraints(),
            unknowns: n,
        });
    }
    let ints: Vec<Vec<BigInt>> = kernel.iter().map(|v| primitive_integer(v)).collect();
    let mut cands = ints.clone();
    if ints.len() > 1 {
        cands.extend(lll_reduce(&ints)?);
    }
    let best = pick_smallest(cands);
    let coeffs: Vec<Rational> = best.iter().cloned().map(Rational::from_integer).collect();
    let section = PolySection::from_coefficient_vector(&coeffs, m, x);
    let mut achieved = Vec::new();
    let mut saturated = Vec::new();
    for (germs, &nu) in prob.germs.iter().zip(&prob.target_orders) {
        let f = pair(&section, germs)?;
        let (ord, sat) = match f.vanishing_order().order() {
            Some(k) => (k, false),
            None => (f.order() + 1, true),
        };
        assert!(ord >= nu, "constructed section misses its vanishing target");
        achieved.push(ord);
        saturated.push(sat);
    }
    Ok(ConstructedSection {
        height: Height(int_height(&best)),
        section,
        achieved_orders: achieved,
        saturated,
        kernel_dimension: kernel.len(),
        target_orders: prob.target_orders.clone(),
    })
}

/// Source of germs for a family of problems indexed by the degree `x`.
#[derive(Clone, Debug)]
pub enum GermSource {
    /// Solve the system at each point from the given initial vectors.
    System {
        system: DifferentialSystem,
        initial: Vec<Vec<Rational>>,
    },
    /// Fixed germs; they must be long enough for every degree requested.
    Fixed(Vec<Vec<TruncatedSeries>>),
}

#[derive(Clone, Debug)]
pub struct ProblemTemplate {
    pub points: Vec<Rational>,
    pub source: GermSource,
    pub rule: TargetRule,
}

impl ProblemTemplate {
    pub fn rank(&self) -> usize {
        match &self.source {
            GermSource::System { system, .. } => system.rank(),
            GermSource::Fixed(g) => g.first().map_or(0, Vec::len),
        }
    }

    pub fn instantiate(&self, x: usize) -> Result<VanishingProblem> {
        let s = self.points.len();
        let m = self.rank();
        let nu = self.rule.target(m, x, s);
        let order = nu + x + 2;
        let germs = match &self.source {
            GermSource::System { system, initial } => {
                if initial.len() != s {
                    return Err(Error::GermData("one initial vector per point required".into()));
                }
                self.points
                    .iter()
                    .zip(initial)
                    .map(|(p, y0)| system.solve_series(p, y0, order))
                    .collect::<Result<Vec<_>>>()?
            }
            GermSource::Fixed(g) => g
                .iter()
                .map(|row| row.iter().map(|f| f.truncate(order)).collect())
                .collect(),
        };
        Ok(VanishingProblem {
            points: self.points.clone(),
            germs,
            degree: x,
            target_orders: vec![nu; s],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightRow {
    pub x: usize,
    pub log_height: f64,
    pub achieved_order: usize,
    pub target_order: usize,
    pub kernel_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightProfile {
    pub rows: Vec<HeightRow>,
    /// Fit `h/(x log x) ~ slope * x + intercept` over rows with `x >= 2`.
    pub ratio_slope: Option<f64>,
    pub ratio_intercept: Option<f64>,
    pub max_ratio: Option<f64>,
}

pub fn height_profile(template: &ProblemTemplate, xs: &[usize]) -> Result<HeightProfile> {
    let rows: Vec<HeightRow> = xs
        .par_iter()
        .map(|&x| {
            let prob = template.instantiate(x)?;
            let c = construct_small_section(&prob)?;
            Ok(HeightRow {
                x,
                log_height: c.height.value(),
                achieved_order: c.achieved_orders.iter().copied().min().unwrap_or(0),
                target_order: prob.target_orders[0],
                kernel_dimension: c.kernel_dimension,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.x >= 2)
        .map(|r| {
            let xf = r.x as f64;
            (xf, r.log_height / (xf * xf.ln()))
        })
        .collect();
    let max_ratio = pts.iter().map(|p| p.1).reduce(f64::max);
    let (slope, intercept) = if pts.len() >= 2 {
        let design: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.0, 1.0]).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
        match least_squares(&design, &y) {
            Some((b, _)) => (Some(b[0]), Some(b[1])),
            None => (None, None),
        }
    } else {
        (None, None)
    };
    Ok(HeightProfile {
        rows,
        ratio_slope: slope,
        ratio_intercept: intercept,
        max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use crate::exact::Poly;

    fn efn() -> DifferentialSystem {
        DifferentialSystem::diagonal(&[int(0), int(1)]).unwrap()
    }

    fn exp_problem(x: usize, nu: usize) -> VanishingProblem {
        let germs = efn().solve_series(&int(0), &[int(1), int(1)], nu + x + 2).unwrap();
        VanishingProblem {
            points: vec![int(0)],
            germs: vec![germs],
            degree: x,
            target_orders: vec![nu],
        }
    }

    #[test]
    fn pade_two_two() {
        let c = construct_small_section(&exp_problem(2, 5)).unwrap();
        assert_eq!(
            c.section.components(),
            &[Poly::from_ints(&[-12, -6, -1]), Poly::from_ints(&[12, -6, 1])]
        );
        assert_eq!(c.achieved_orders, vec![5]);
        let f = pair(&c.section, &exp_problem(2, 5).germs[0]).unwrap();
        assert_eq!(f.coeff(5), &rat(1, 60));
    }

    #[test]
    fn pade_one_one() {
        let prob = exp_problem(1, 3);
        let c = construct_small_section(&prob).unwrap();
        assert_eq!(c.section.components(), &[Poly::from_ints(&[-2, -1]), Poly::from_ints(&[2, -1])]);
        let f = pair(&c.section, &prob.germs[0]).unwrap();
        assert_eq!(f.coeff(3), &rat(-1, 6));
    }

    #[test]
    fn over_constrained() {
        assert_eq!(
            construct_small_section(&exp_problem(1, 4)),
            Err(Error::OverConstrained { constraints: 4, unknowns: 4 })
        );
    }

    #[test]
    fn one_spare_leaves_two_dimensional_kernel() {
        let c = construct_small_section(&exp_problem(3, 6)).unwrap();
        assert_eq!(c.kernel_dimension, 2);
        assert!(c.achieved_orders[0] >= 6);
    }

    #[test]
    fn polynomial_germs_have_exact_annihilator() {
        // f = (1, z): P = (z, -1) pairs to zero
        let f = vec![
            TruncatedSeries::constant(int(0), int(1), 12),
            TruncatedSeries::new(int(0), (0..=12).map(|k| if k == 1 { int(1) } else { int(0) }).collect()),
        ];
        let template = ProblemTemplate {
            points: vec![int(0)],
            source: GermSource::Fixed(vec![f]),
            rule: TargetRule::Maximal,
        };
        let prof = height_profile(&template, &[1, 2, 3]).unwrap();
        for r in &prof.rows {
            assert_eq!(r.log_height, 0.0);
        }
        assert!(height_profile(&template, &[]).unwrap().rows.is_empty());
    }
}
