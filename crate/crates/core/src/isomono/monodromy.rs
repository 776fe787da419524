//! Monodromy of `dY/dz = M(z) Y` along circular loops by Taylor-series
//! stepping in multiprecision complex arithmetic, with an Abel–Liouville
//! determinant check and a step-doubling precision estimate.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Poly, Rational, RationalFunction};
use crate::mp::{bits_for_digits, MpComplex, Real};

/// Circle `center + radius e^{i theta}` traversed from `start_angle`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Loop {
    pub center: Complex64,
    pub radius: f64,
    pub start_angle: f64,
    pub counterclockwise: bool,
}

impl Loop {
    pub fn circle(center: Complex64, radius: f64, start_angle: f64) -> Self {
        Loop {
            center,
            radius,
            start_angle,
            counterclockwise: true,
        }
    }

    pub fn start(&self) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, self.start_angle)
    }

    fn encloses(&self, p: Complex64) -> bool {
        (p - self.center).norm() < self.radius
    }
}

/// Minimum clearance between a loop and any singular point.
pub const LOOP_MARGIN: f64 = 0.1;

/// `q(z) Y' = P(z) Y` with polynomial data, built from a rational matrix.
#[derive(Clone, Debug)]
pub struct PolynomialSystem {
    pub q: Poly,
    pub p: Vec<Vec<Poly>>,
    /// Singular points: rational roots of `q`.
    pub singular: Vec<Rational>,
    /// Exact trace of the coefficient matrix, for residue checks.
    pub trace: RationalFunction,
}

impl PolynomialSystem {
    pub fn new(m: &[Vec<RationalFunction>]) -> Result<Self> {
        let n = m.len();
        if n == 0 || m.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("square coefficient matrix required".into()));
        }
        let q = m.iter().flatten().fold(Poly::one(), |acc, e| acc.lcm(e.denominator()));
        let p = m
            .iter()
            .map(|r| r.iter().map(|e| (&q * e.numerator()).exact_div(e.denominator())).collect())
            .collect::<Result<Vec<Vec<Poly>>>>()?;
        let roots = q.rational_roots();
        if roots.iter().map(|(_, k)| *k).sum::<usize>() != q.degree_or_zero() {
            return Err(Error::PoleDivisor("singular points must be rational".into()));
        }
        let singular: Vec<Rational> = roots.into_iter().map(|(r, _)| r).collect();
        let trace = (0..n).fold(RationalFunction::zero(), |acc, i| &acc + &m[i][i]);
        Ok(PolynomialSystem { q, p, singular, trace })
    }

    pub fn size(&self) -> usize {
        self.p.len()
    }

    /// Residue of `tr M` at a finite point.
    pub fn trace_residue(&self, s: &Rational) -> Result<Rational> {
        let den = self.trace.denominator();
        let k = den.root_multiplicity(s);
        if k == 0 {
            return Ok(Rational::from_integer(0.into()));
        }
        let rest = den.exact_div(&Poly::linear_root(s).pow(k as u32))?;
        let g = RationalFunction::new(self.trace.numerator().clone(), rest)?;
        Ok(g.taylor_expand(s, k)?.coeff(k - 1).clone())
    }
}

type MpMatrix = Vec<Vec<MpComplex>>;

fn mp_identity(n: usize, bits: usize) -> MpMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| MpComplex::from_real(Real::from_i64((i == j) as i64, bits)))
                .collect()
        })
        .collect()
}

fn mp_mul(a: &MpMatrix, b: &MpMatrix) -> MpMatrix {
    let n = a.len();
    let bits = a[0][0].re.precision();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(MpComplex::zero(bits), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

fn mp_add_assign(a: &mut MpMatrix, b: &MpMatrix) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x = &*x + y;
        }
    }
}

fn mp_scale(a: &MpMatrix, s: &MpComplex) -> MpMatrix {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

fn mp_max_abs(a: &MpMatrix) -> f64 {
    a.iter()
        .flatten()
        .map(|x| x.to_c64().norm())
        .fold(0.0, f64::max)
}

/// Coefficients of `f(z0 + h)` in powers of `h`.
fn shift(coeffs: &[MpComplex], z0: &MpComplex, bits: usize) -> Vec<MpComplex> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = &c[j + 1] * z0;
            c[j] = &c[j] + &t;
        }
    }
    if c.is_empty() {
        c.push(MpComplex::zero(bits));
    }
    c
}

fn poly_mp(p: &Poly, bits: usize) -> Vec<MpComplex> {
    p.coeffs()
        .iter()
        .map(|c| MpComplex::from_real(Real::from_rational(c, bits)))
        .collect()
}

struct Stepper {
    q: Vec<MpComplex>,
    p: Vec<Vec<Vec<MpComplex>>>,
    bits: usize,
    tol_log10: f64,
}

impl Stepper {
    /// Propagates `Y` from `z0` to `z0 + h` by the Taylor series of the
    /// solution; terms are generated until they fall below the tolerance.
    fn step(&self, y: &MpMatrix, z0: &MpComplex, h: &MpComplex) -> Result<MpMatrix> {
        let n = y.len();
        let bits = self.bits;
        let qs = shift(&self.q, z0, bits);
        let ps: Vec<Vec<Vec<MpComplex>>> = self
            .p
            .iter()
            .map(|r| r.iter().map(|e| shift(e, z0, bits)).collect())
            .collect();
        let dp = ps.iter().flatten().map(Vec::len).max().unwrap_or(1);
        let pmat = |i: usize| -> MpMatrix {
            (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| ps[r][c].get(i).cloned().unwrap_or_else(|| MpComplex::zero(bits)))
                        .collect()
                })
                .collect()
        };
        let pm: Vec<MpMatrix> = (0..dp).map(pmat).collect();
        if qs[0].is_zero() {
            return Err(Error::PathError("step starts at a singular point".into()));
        }
        // Work with u_k = Y_k h^k to keep magnitudes moderate.
        let hq: Vec<MpComplex> = {
            let mut pw = MpComplex::from_real(Real::from_i64(1, bits));
            qs.iter()
                .map(|c| {
                    let v = c * &pw;
                    pw = &pw * h;
                    v
                })
                .collect()
        };
        let hp: Vec<MpMatrix> = {
            let mut pw = h.clone();
            pm.iter()
                .map(|m| {
                    let v = mp_scale(m, &pw);
                    pw = &pw * h;
                    v
                })
                .collect()
        };
        let mut u: Vec<MpMatrix> = vec![y.clone()];
        let mut acc = y.clone();
        let scale = mp_max_abs(y).max(1e-300);
        let mut small = 0;
        for k in 0..4000usize {
            // (k+1) q0 u_{k+1} = sum_i hP_i u_{k-i} - sum_{i>=1} hq_i (k-i+1) u_{k-i+1}
            let mut rhs: MpMatrix = vec![vec![MpComplex::zero(bits); n]; n];
            for (i, m) in hp.iter().enumerate() {
                if i > k {
                    break;
                }
                mp_add_assign(&mut rhs, &mp_mul(m, &u[k - i]));
            }
            for (i, c) in hq.iter().enumerate().skip(1) {
                if i > k {
                    break;
                }
                let f = Real::from_i64(-((k - i + 1) as i64), bits);
                mp_add_assign(&mut rhs, &mp_scale(&u[k - i + 1], &c.scale(&f)));
            }
            let denom = hq[0].scale(&Real::from_i64((k + 1) as i64, bits));
            let inv = &MpComplex::from_real(Real::from_i64(1, bits)) / &denom;
            let next = mp_scale(&rhs, &inv);
            let size = mp_max_abs(&next);
            mp_add_assign(&mut acc, &next);
            u.push(next);
            if size == 0.0 || (size / scale).log10() < self.tol_log10 {
                small += 1;
                if small >= 3 {
                    return Ok(acc);
                }
            } else {
                small = 0;
            }
        }
        Err(Error::Stiffness("Taylor series did not converge within 4000 terms".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyMatrix {
    pub loop_spec: Loop,
    /// Row-major `[re, im]` pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
    /// Digits on which two step counts agree.
    pub agreed_digits: f64,
    /// `|det M - exp(2 pi i sum Res tr M)|`.
    pub liouville_defect: f64,
}

impl MonodromyMatrix {
    pub fn to_c64(&self) -> Vec<Vec<Complex64>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .collect()
    }
}

fn to_complex(r: &Rational) -> Complex64 {
    Complex64::new(crate::exact::rational::to_f64(r), 0.0)
}

/// `Y(end) Y(start)^{-1}` for the fundamental matrix with `Y(start) = I`,
/// integrated with `steps` Taylor steps at `digits` working precision.
fn transport(sys: &PolynomialSystem, lp: &Loop, digits: usize, steps: usize) -> Result<MpMatrix> {
    let bits = bits_for_digits(digits + 10);
    let st = Stepper {
        q: poly_mp(&sys.q, bits),
        p: sys.p.iter().map(|r| r.iter().map(|e| poly_mp(e, bits)).collect()).collect(),
        bits,
        tol_log10: -(digits as f64) - 5.0,
    };
    let two_pi = Real::pi(bits) * Real::from_i64(2, bits);
    let dir = if lp.counterclockwise { 1 } else { -1 };
    let center = MpComplex::new(Real::from_f64(lp.center.re, bits), Real::from_f64(lp.center.im, bits));
    let radius = Real::from_f64(lp.radius, bits);
    let start = Real::from_f64(lp.start_angle, bits);
    let point = |k: usize| -> MpComplex {
        let th = &start + &(&two_pi * &Real::from_i64(dir * k as i64, bits) / Real::from_i64(steps as i64, bits));
        &center + &MpComplex::cis(&th).scale(&radius)
    };
    let mut y = mp_identity(sys.size(), bits);
    let mut z = point(0);
    for k in 1..=steps {
        // The last node is recomputed from the angle, closing the loop exactly.
        let next = point(k);
        let h = &next - &z;
        y = st.step(&y, &z, &h)?;
        z = next;
    }
    Ok(y)
}

/// Monodromy along `lp`, at `digits` working digits. Step count is doubled
/// until two runs agree to `digits - 5` digits.
pub fn numerical_monodromy(sys: &PolynomialSystem, lp: &Loop, digits: usize) -> Result<MonodromyMatrix> {
    for s in &sys.singular {
        let d = (to_complex(s) - lp.center).norm();
        if (d - lp.radius).abs() < LOOP_MARGIN {
            return Err(Error::PathError(format!(
                "loop passes within {LOOP_MARGIN} of the singular point {s}"
            )));
        }
    }
    let nearest = sys
        .singular
        .iter()
        .map(|s| ((to_complex(s) - lp.center).norm() - lp.radius).abs())
        .fold(f64::INFINITY, f64::min);
    // Steps of at most a third of the distance to the nearest singularity.
    let chord = (nearest / 3.0).min(lp.radius);
    let mut steps = ((2.0 * std::f64::consts::PI * lp.radius / chord).ceil() as usize).max(8);
    let mut prev = transport(sys, lp, digits, steps)?;
    let target = digits as f64 - 5.0;
    for _ in 0..6 {
        steps *= 2;
        let cur = transport(sys, lp, digits, steps)?;
        let diff = cur
            .iter()
            .flatten()
            .zip(prev.iter().flatten())
            .map(|(a, b)| (a - b).to_c64().norm())
            .fold(0.0, f64::max);
        let scale = mp_max_abs(&cur).max(1e-300);
        let agreed = if diff == 0.0 { digits as f64 } else { -(diff / scale).log10() };
        if agreed >= target {
            return finish(sys, lp, &cur, agreed.min(digits as f64));
        }
        prev = cur;
    }
    Err(Error::Stiffness(format!("step doubling did not reach {target} digits")))
}

fn finish(sys: &PolynomialSystem, lp: &Loop, y: &MpMatrix, agreed: f64) -> Result<MonodromyMatrix> {
    let m: Vec<Vec<Complex64>> = y.iter().map(|r| r.iter().map(MpComplex::to_c64).collect()).collect();
    let mut res = Rational::from_integer(0.into());
    for s in &sys.singular {
        if lp.encloses(to_complex(s)) {
            res += sys.trace_residue(s)?;
        }
    }
    let sign = if lp.counterclockwise { 1.0 } else { -1.0 };
    let expected = Complex64::new(0.0, sign * 2.0 * std::f64::consts::PI * crate::exact::rational::to_f64(&res)).exp();
    let det = c64_det(&m);
    Ok(MonodromyMatrix {
        loop_spec: lp.clone(),
        matrix: m.iter().map(|r| r.iter().map(|c| [c.re, c.im]).collect()).collect(),
        agreed_digits: agreed,
        liouville_defect: (det - expected).norm(),
    })
}

pub(crate) fn c64_det(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]).determinant()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyData {
    pub base_point: Complex64,
    pub digits: usize,
    pub matrices: Vec<MonodromyMatrix>,
}

/// Monodromy along several loops sharing a base point.
pub fn monodromy_data(sys: &PolynomialSystem, loops: &[Loop], digits: usize) -> Result<MonodromyData> {
    let base = loops.first().map(Loop::start).ok_or(Error::NoData)?;
    if loops.iter().any(|l| (l.start() - base).norm() > 1e-12) {
        return Err(Error::PathError("loops must share a base point".into()));
    }
    let matrices = loops
        .par_iter()
        .map(|l| numerical_monodromy(sys, l, digits))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonodromyData {
        base_point: base,
        digits,
        matrices,
    })
}

/// Circles of radius 1/2 around `0` and `1`, both based at `1/2`.
pub fn standard_loops() -> Vec<Loop> {
    vec![
        Loop::circle(Complex64::new(0.0, 0.0), 0.5, 0.0),
        Loop::circle(Complex64::new(1.0, 0.0), 0.5, std::f64::consts::PI),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn diag_over_z(a: Rational, b: Rational) -> PolynomialSystem {
        let z = RationalFunction::from_poly(Poly::z());
        let e = |c: Rational| (&RationalFunction::constant(c) / &z).unwrap();
        PolynomialSystem::new(&[vec![e(a), RationalFunction::zero()], vec![RationalFunction::zero(), e(b)]]).unwrap()
    }

    #[test]
    fn fuchsian_diagonal() {
        let sys = diag_over_z(rat(1, 2), rat(1, 3));
        let m = numerical_monodromy(&sys, &Loop::circle(Complex64::new(0.0, 0.0), 1.0, 0.0), 20).unwrap();
        let c = m.to_c64();
        let tau = 2.0 * std::f64::consts::PI;
        assert!((c[0][0] - Complex64::new(0.0, tau / 2.0).exp()).norm() < 1e-8);
        assert!((c[1][1] - Complex64::new(0.0, tau / 3.0).exp()).norm() < 1e-8);
        assert!(c[0][1].norm() < 1e-8);
        assert!(m.liouville_defect < 1e-6);
    }

    #[test]
    fn loop_without_singularity() {
        let sys = diag_over_z(rat(1, 2), int(3));
        let m = numerical_monodromy(&sys, &Loop::circle(Complex64::new(3.0, 0.0), 1.0, 0.0), 20).unwrap();
        let c = m.to_c64();
        assert!((c[0][0] - 1.0).norm() < 1e-8 && (c[1][1] - 1.0).norm() < 1e-8);
    }

    #[test]
    fn path_through_singularity() {
        let sys = diag_over_z(int(1), int(1));
        assert!(matches!(
            numerical_monodromy(&sys, &Loop::circle(Complex64::new(1.0, 0.0), 1.05, 0.0), 20),
            Err(Error::PathError(_))
        ));
    }
}
