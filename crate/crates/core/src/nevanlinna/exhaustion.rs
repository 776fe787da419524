//! Closed-form exhaustion functions on the projective line and sampled level
//! curves with their harmonic measures.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the divisor at infinity: finite or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorPoint {
    Finite { re: f64, im: f64 },
    Infinity,
}

impl DivisorPoint {
    pub fn finite(z: Complex64) -> Self {
        DivisorPoint::Finite { re: z.re, im: z.im }
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            DivisorPoint::Finite { re, im } => Some(Complex64::new(*re, *im)),
            DivisorPoint::Infinity => None,
        }
    }
}

/// How the level parameter `r` maps onto values of `g_p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelConvention {
    /// `S(r) = {g_p = 2 log r}`: model disks have radius `r`.
    #[default]
    Calibrated,
    /// `S(r) = {g_p = log r}`: model disks have radius `sqrt(r)`.
    Raw,
}

impl LevelConvention {
    pub fn level(&self, r: f64) -> f64 {
        match self {
            LevelConvention::Calibrated => 2.0 * r.ln(),
            LevelConvention::Raw => r.ln(),
        }
    }
}

/// `g_p(z) = log|z - p|^2 - (1/d) sum n_i log|z - q_i|^2` over the finite
/// points of `D`, with `d` the total multiplicity of `D`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionFunction {
    pub center: Complex64,
    pub divisor: Vec<(DivisorPoint, u32)>,
}

impl ExhaustionFunction {
    pub fn new(center: Complex64, divisor: Vec<(DivisorPoint, u32)>) -> Result<Self> {
        if divisor.is_empty() || divisor.iter().all(|(_, n)| *n == 0) {
            return Err(Error::Dimension("divisor must have positive degree".into()));
        }
        if divisor.iter().any(|(q, _)| q.as_finite() == Some(center)) {
            return Err(Error::ExhaustionSingularity);
        }
        Ok(ExhaustionFunction { center, divisor })
    }

    /// `D = {inf}`, so `g_p = log|z - p|^2`.
    pub fn at_infinity(center: Complex64) -> Self {
        ExhaustionFunction {
            center,
            divisor: vec![(DivisorPoint::Infinity, 1)],
        }
    }

    pub fn degree(&self) -> u32 {
        self.divisor.iter().map(|(_, n)| n).sum()
    }

    fn finite_points(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let d = self.degree() as f64;
        self.divisor
            .iter()
            .filter_map(move |(q, n)| q.as_finite().map(|z| (z, *n as f64 / d)))
    }

    pub fn value(&self, z: Complex64) -> Result<f64> {
        let dp = (z - self.center).norm_sqr();
        if dp == 0.0 {
            return Err(Error::ExhaustionSingularity);
        }
        let mut g = dp.ln();
        for (q, w) in self.finite_points() {
            let dq = (z - q).norm_sqr();
            if dq == 0.0 {
                return Err(Error::ExhaustionSingularity);
            }
            g -= w * dq.ln();
        }
        Ok(g)
    }

    /// `g_x + i g_y`.
    pub fn gradient(&self, z: Complex64) -> Complex64 {
        let term = |c: Complex64| {
            let w = z - c;
            2.0 * w / w.norm_sqr()
        };
        self.finite_points()
            .fold(term(self.center), |acc, (q, w)| acc - w * term(q))
    }

    /// Average of `g` over a circle minus its value at the centre; zero up to
    /// quadrature error for circles avoiding `p` and `D`.
    pub fn mean_value_defect(&self, c: Complex64, radius: f64, n: usize) -> Result<f64> {
        let mut s = 0.0;
        for k in 0..n {
            let th = 2.0 * PI * k as f64 / n as f64;
            s += self.value(c + Complex64::from_polar(radius, th))?;
        }
        Ok(s / n as f64 - self.value(c)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSample {
    pub z: Complex64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCurve {
    pub r: f64,
    pub level: f64,
    pub samples: Vec<LevelSample>,
}

pub const MASS_TOLERANCE: f64 = 1e-6;
pub const LEVEL_TOLERANCE: f64 = 1e-9;

impl LevelCurve {
    pub fn total_mass(&self) -> f64 {
        self.samples.iter().map(|s| s.weight).sum()
    }
}

/// Solves `g(c + t e^{i theta}) = level` for `t` in `[lo, hi]` where the sign
/// of `g - level` differs at the ends.
fn bisect(g: &dyn Fn(f64) -> f64, level: f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = g(lo) - level;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = g(mid) - level;
        if fm == 0.0 || (hi - lo) <= 1e-15 * mid.abs().max(1e-300) {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

struct Ray {
    t: f64,
    z: Complex64,
}

impl ExhaustionFunction {
    fn g_on_ray(&self, c: Complex64, dir: Complex64) -> impl Fn(f64) -> f64 + '_ {
        move |t| self.value(c + dir * t).unwrap_or(f64::NAN)
    }

    /// Crossing on a ray leaving the finite divisor point `q`, where `g`
    /// starts at `+inf`; `None` if the level is not crossed before `cap`.
    fn ray_from_pole(&self, q: Complex64, dir: Complex64, level: f64, cap: f64) -> Option<Ray> {
        let g = self.g_on_ray(q, dir);
        let mut t = cap * 1e-14;
        let mut prev = t;
        while t < cap {
            let v = g(t);
            if v.is_nan() {
                return None;
            }
            if v < level {
                let root = if prev == t { t } else { bisect(&g, level, prev, t) };
                return Some(Ray { t: root, z: q + dir * root });
            }
            prev = t;
            t *= 1.05;
        }
        None
    }

    /// Outermost crossing on a ray leaving `p`, for the component around the
    /// point at infinity.
    fn ray_to_infinity(&self, dir: Complex64, level: f64, inner: f64) -> Option<Ray> {
        let p = self.center;
        let g = self.g_on_ray(p, dir);
        let mut hi = inner.max(1.0);
        let mut guard = 0;
        while !(g(hi) > level) {
            hi *= 2.0;
            guard += 1;
            if guard > 2000 || !hi.is_finite() {
                return None;
            }
        }
        let mut lo = hi;
        loop {
            let next = lo / 1.05;
            if next < 1e-300 {
                return None;
            }
            if g(next) < level {
                let root = bisect(&g, level, next, lo);
                return Some(Ray { t: root, z: p + dir * root });
            }
            lo = next;
        }
    }

    /// Samples `{g_p = level(r)}` by radial root-finding: from `p` outwards
    /// for the component around infinity and from each finite point of `D`
    /// for the loop around it. Weights `t |grad g|^2 / (2 n |dg/dt|)` are the
    /// harmonic measure; their total is checked, not assumed.
    pub fn level_curve(&self, r: f64, n: usize, convention: LevelConvention) -> Result<LevelCurve> {
        if !(r > 0.0) || n == 0 {
            return Err(Error::RTooSmall(r));
        }
        let level = convention.level(r);
        let finite: Vec<Complex64> = self.finite_points().map(|(q, _)| q).collect();
        let has_infinity = self.divisor.iter().any(|(q, m)| q.as_finite().is_none() && *m > 0);
        let spread = finite
            .iter()
            .map(|q| (q - self.center).norm())
            .fold(0.0, f64::max);
        let mut centers: Vec<(Option<Complex64>, f64)> = Vec::new();
        if has_infinity {
            centers.push((None, 2.0 * spread));
        }
        for &q in &finite {
            let cap = std::iter::once(self.center)
                .chain(finite.iter().copied().filter(|o| *o != q))
                .map(|o| (o - q).norm())
                .fold(f64::INFINITY, f64::min);
            centers.push((Some(q), cap));
        }
        let mut samples = Vec::with_capacity(n * centers.len());
        for (c, cap) in centers {
            let part: Option<Vec<LevelSample>> = (0..n)
                .into_par_iter()
                .map(|k| {
                    let dir = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
                    let ray = match c {
                        None => self.ray_to_infinity(dir, level, cap)?,
                        Some(q) => self.ray_from_pole(q, dir, level, cap)?,
                    };
                    let grad = self.gradient(ray.z);
                    let gt = (grad * dir.conj()).re;
                    let w = ray.t * grad.norm_sqr() / (2.0 * n as f64 * gt.abs());
                    w.is_finite().then_some(LevelSample { z: ray.z, weight: w })
                })
                .collect();
            samples.extend(part.ok_or(Error::RTooSmall(r))?);
        }
        let curve = LevelCurve { r, level, samples };
        if (curve.total_mass() - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::RTooSmall(r));
        }
        Ok(curve)
    }
}
