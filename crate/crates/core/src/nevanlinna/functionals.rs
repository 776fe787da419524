//! Characteristic, proximity and counting functions on sampled level
//! curves, First Main Theorem residuals, order-of-growth fits and the
//! two-point estimate for auxiliary functions.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exhaustion::{ExhaustionFunction, LevelConvention, LevelCurve};
use super::maps::AnalyticMap;
use crate::connection::{pair, PolySection};
use crate::error::{Error, Result};
use crate::exact::rational::to_f64;
use crate::exact::{Rational, TruncatedSeries};
use crate::lg::{least_squares, GrowthEstimate, GrowthMethod};

/// `T(r) = 1/2 sum w_k log(1 + |f(z_k)|^2)`.
pub fn characteristic(f: &AnalyticMap, curve: &LevelCurve) -> f64 {
    0.5 * curve
        .samples
        .iter()
        .map(|s| s.weight * f.log_one_plus_abs_sq(s.z))
        .sum::<f64>()
}

/// Chordal proximity `m(r, a) = sum w_k log(1 / [f(z_k), a])`.
pub fn proximity(f: &AnalyticMap, a: Complex64, curve: &LevelCurve) -> f64 {
    let la = (1.0 + a.norm_sqr()).ln();
    curve
        .samples
        .iter()
        .map(|s| s.weight * (0.5 * (f.log_one_plus_abs_sq(s.z) + la) - f.log_abs_minus(s.z, a)))
        .sum()
}

/// `N(r) = 1/2 sum n_z (level - g_p(z))` over zeros inside `B(r)`; a zero
/// at the centre contributes `n level / 2`.
pub fn counting(zeros: &[(Complex64, u32)], exh: &ExhaustionFunction, level: f64) -> f64 {
    zeros
        .iter()
        .map(|(z, n)| {
            let g = if *z == exh.center { f64::NEG_INFINITY } else { exh.value(*z).unwrap_or(f64::INFINITY) };
            let depth = if g == f64::NEG_INFINITY { level } else { level - g };
            if g < level {
                0.5 * *n as f64 * depth
            } else {
                0.0
            }
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NevanlinnaRow {
    pub r: f64,
    pub characteristic: f64,
    pub counting: f64,
    pub proximity: f64,
    /// `N + m - T`.
    pub fmt_residual: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NevanlinnaReport {
    pub convention: LevelConvention,
    pub target: Complex64,
    pub samples_per_curve: usize,
    pub rows: Vec<NevanlinnaRow>,
    pub rho: Option<GrowthEstimate>,
}

impl NevanlinnaReport {
    /// `max - min` of the residual over the grid.
    pub fn residual_spread(&self) -> f64 {
        let it = self.rows.iter().map(|r| r.fmt_residual);
        it.clone().fold(f64::NEG_INFINITY, f64::max) - it.fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,T,N,m,residual\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.r, r.characteristic, r.counting, r.proximity, r.fmt_residual
            ));
        }
        s
    }
}

/// Zeros of `f - a` that can lie in `B(r)`: `B(r)` must be bounded, i.e.
/// the divisor must contain the point at infinity.
fn zeros_in_curve(f: &AnalyticMap, a: Complex64, exh: &ExhaustionFunction, curve: &LevelCurve) -> Result<Vec<(Complex64, u32)>> {
    if exh.divisor.iter().all(|(q, _)| q.as_finite().is_some()) {
        return Err(Error::InsufficientData("B(r) is unbounded when the divisor omits infinity".into()));
    }
    let radius = curve.samples.iter().map(|s| s.z.norm()).fold(0.0, f64::max) * 1.01 + 1.0;
    f.zeros_of_shift(a, radius)
}

/// `T`, `N`, `m` and the FMT residual on each radius of `r_grid`, plus a
/// growth-order fit of `T`. Zeros of `f - a` come from `zeros` when given,
/// otherwise from the closed form of `f`.
pub fn nevanlinna_suite(
    f: &AnalyticMap,
    a: Complex64,
    exh: &ExhaustionFunction,
    r_grid: &[f64],
    n_samples: usize,
    convention: LevelConvention,
    zeros: Option<&[(Complex64, u32)]>,
) -> Result<NevanlinnaReport> {
    let rows: Vec<NevanlinnaRow> = r_grid
        .par_iter()
        .map(|&r| {
            let curve = exh.level_curve(r, n_samples, convention)?;
            let zs = match zeros {
                Some(z) => z.to_vec(),
                None => zeros_in_curve(f, a, exh, &curve)?,
            };
            let t = characteristic(f, &curve);
            let n = counting(&zs, exh, curve.level);
            let m = proximity(f, a, &curve);
            Ok(NevanlinnaRow {
                r,
                characteristic: t,
                counting: n,
                proximity: m,
                fmt_residual: n + m - t,
                mass: curve.total_mass(),
            })
        })
        .collect::<Result<_>>()?;
    let rs: Vec<f64> = rows.iter().map(|r| r.r).collect();
    let ts: Vec<f64> = rows.iter().map(|r| r.characteristic).collect();
    Ok(NevanlinnaReport {
        convention,
        target: a,
        samples_per_curve: n_samples,
        rho: growth_order_fit(&rs, &ts).ok(),
        rows,
    })
}

/// Characteristic on a grid of radii.
pub fn characteristic_profile(
    f: &AnalyticMap,
    exh: &ExhaustionFunction,
    r_grid: &[f64],
    n_samples: usize,
    convention: LevelConvention,
) -> Result<Vec<f64>> {
    r_grid
        .par_iter()
        .map(|&r| Ok(characteristic(f, &exh.level_curve(r, n_samples, convention)?)))
        .collect()
}

/// Slope of `log T` against `log r` over the largest-`r` half of the grid.
/// Requires at least 8 positive samples spanning two decades.
pub fn growth_order_fit(r: &[f64], t: &[f64]) -> Result<GrowthEstimate> {
    let mut pts: Vec<(f64, f64)> = r
        .iter()
        .zip(t)
        .filter(|(r, t)| **r > 0.0 && **t > 0.0 && t.is_finite())
        .map(|(r, t)| (*r, *t))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.len() < 8 {
        return Err(Error::InsufficientData(format!("{} positive samples, need 8", pts.len())));
    }
    let span = (pts[pts.len() - 1].0 / pts[0].0).log10();
    if span < 2.0 - 1e-9 {
        return Err(Error::InsufficientData(format!("r spans {span:.2} decades, need 2")));
    }
    let tail = &pts[pts.len() / 2..];
    let rows: Vec<Vec<f64>> = tail.iter().map(|(r, _)| vec![r.ln(), 1.0]).collect();
    let y: Vec<f64> = tail.iter().map(|(_, t)| t.ln()).collect();
    let (beta, rms) = least_squares(&rows, &y).ok_or_else(|| Error::InsufficientData("singular fit".into()))?;
    Ok(GrowthEstimate {
        rho: beta[0].max(0.0),
        fit_residual: rms,
        method: GrowthMethod::Nevanlinna,
    })
}

/// Log-spaced radii from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Inputs of `log|F(p2)| <= B - (A x / rho) log x + c2 x + (c1 / rho) x log x`
/// for an auxiliary function with `ord_{p1} F >= A x - b` and sup-norm
/// bound `log|P| <= B`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TwoPointInputs {
    pub x: usize,
    pub log_sup_norm: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub rho: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub order_at_p1: usize,
    pub log_abs_at_p2: f64,
    /// Smallest `x` regarded as inside the asymptotic regime.
    pub min_x: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPointReport {
    pub x: usize,
    /// Radius `x^{1/rho}` at which both sides are compared.
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub order_hypothesis_holds: bool,
    pub asymptotic_regime: bool,
    pub summary: String,
}

pub fn two_point_estimate_check(inp: &TwoPointInputs) -> Result<TwoPointReport> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::IncompleteHypotheses(name.into()));
    let big_b = need(inp.log_sup_norm, "B (sup-norm bound)")?;
    let a = need(inp.a, "A (vanishing slope)")?;
    let b = need(inp.b, "b (vanishing offset)")?;
    let rho = need(inp.rho, "rho (order of growth)")?;
    let c1 = need(inp.c1, "c1")?;
    let c2 = need(inp.c2, "c2")?;
    if rho <= 0.0 {
        return Err(Error::IncompleteHypotheses("rho must be positive".into()));
    }
    let x = inp.x as f64;
    let xl = if inp.x > 0 { x * x.ln() } else { 0.0 };
    let rhs = big_b - a * xl / rho + c2 * x + c1 * xl / rho;
    let margin = rhs - inp.log_abs_at_p2;
    let order_ok = inp.order_at_p1 as f64 >= a * x - b;
    let regime = inp.x >= inp.min_x;
    let mut summary = format!("x = {}: log|F(p2)| = {:.4} <= {:.4} (margin {:.4})", inp.x, inp.log_abs_at_p2, rhs, margin);
    if !regime {
        summary.push_str("; x >> 0 required");
    }
    if !order_ok {
        summary.push_str("; vanishing hypothesis fails");
    }
    Ok(TwoPointReport {
        x: inp.x,
        r: x.powf(1.0 / rho),
        lhs: inp.log_abs_at_p2,
        rhs,
        margin,
        order_hypothesis_holds: order_ok,
        asymptotic_regime: regime,
        summary,
    })
}

/// `log|F(p2)|` for `F = <P, f>` from the exact series of `F` at the germ
/// base point; `p2` must lie inside the disk where the germs converge and
/// the truncation must capture the tail.
pub fn pairing_log_abs_at(p: &PolySection, germs: &[TruncatedSeries], p2: &Rational) -> Result<f64> {
    let f = pair(p, germs)?;
    let h = to_f64(&(p2 - f.base_point()));
    let mut sum = 0.0f64;
    let mut pw = 1.0f64;
    // Summing high order first keeps the tiny tail from being absorbed.
    let terms: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| {
            let t = to_f64(c) * pw;
            pw *= h;
            t
        })
        .collect();
    for t in terms.iter().rev() {
        sum += t;
    }
    Ok(sum.abs().ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin() -> ExhaustionFunction {
        ExhaustionFunction::at_infinity(Complex64::new(0.0, 0.0))
    }

    #[test]
    fn characteristic_of_exp_over_r() {
        let c = origin().level_curve(200.0, 4096, LevelConvention::Calibrated).unwrap();
        let t = characteristic(&AnalyticMap::exp_z(), &c);
        assert!((t / 200.0 * std::f64::consts::PI - 1.0).abs() < 0.05);
        let k = characteristic(&AnalyticMap::Constant { value: Complex64::new(3.0, 0.0) }, &c);
        assert!((k - 0.5 * 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn identity_residual_is_constant() {
        let grid = log_grid(2.0, 200.0, 8);
        let rep = nevanlinna_suite(&AnalyticMap::Identity, Complex64::new(0.0, 0.0), &origin(), &grid, 256, LevelConvention::Calibrated, None).unwrap();
        assert!(rep.residual_spread() < 0.01);
    }

    #[test]
    fn growth_orders() {
        let e = origin();
        let grid = log_grid(10.0, 1000.0, 16);
        for (f, want, tol) in [(AnalyticMap::exp_z(), 1.0, 0.05), (AnalyticMap::exp_z2(), 2.0, 0.1)] {
            let t = characteristic_profile(&f, &e, &grid, 4096, LevelConvention::Calibrated).unwrap();
            assert!(t.windows(2).all(|w| w[1] >= w[0] - 1e-9));
            let g = growth_order_fit(&grid, &t).unwrap();
            assert!((g.rho - want).abs() < tol, "{} vs {want}", g.rho);
        }
        let grid = log_grid(1e2, 1e16, 16);
        let t = characteristic_profile(&AnalyticMap::Identity, &e, &grid, 64, LevelConvention::Calibrated).unwrap();
        assert!(growth_order_fit(&grid, &t).unwrap().rho < 0.05);
    }

    #[test]
    fn fit_preconditions() {
        let r = log_grid(1.0, 10.0, 10);
        assert!(growth_order_fit(&r, &r).is_err());
        let r = log_grid(1.0, 1000.0, 5);
        assert!(growth_order_fit(&r, &r).is_err());
    }

    #[test]
    fn two_point_linearity_and_gates() {
        let mut inp = TwoPointInputs {
            x: 6,
            log_sup_norm: Some(10.0),
            a: Some(2.0),
            b: Some(-1.0),
            rho: Some(1.0),
            c1: Some(1.0),
            c2: Some(1.0),
            order_at_p1: 13,
            log_abs_at_p2: -20.0,
            min_x: 4,
        };
        let base = two_point_estimate_check(&inp).unwrap();
        inp.log_sup_norm = Some(20.0);
        let up = two_point_estimate_check(&inp).unwrap();
        assert!((up.margin - base.margin - 10.0).abs() < 1e-12);
        inp.x = 2;
        assert!(!two_point_estimate_check(&inp).unwrap().asymptotic_regime);
        inp.c1 = None;
        assert!(matches!(two_point_estimate_check(&inp), Err(Error::IncompleteHypotheses(_))));
    }
}
