//! Exact symbolic calculus on sums of monomials
//! `c * z^i (z-1)^j x^k log(x)^l * prod params^e` with rational `c`: the
//! closure needed for matrix one-forms with poles at `z = 0`, `z = 1` and
//! `x = 0`, and their log-polynomial deformations.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{binomial, format_rational};
use crate::exact::{Poly, Rational, RationalFunction};
use crate::expr::{parse_expression, Expr};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub z: i32,
    pub z1: i32,
    pub x: i32,
    pub log: u32,
    pub params: BTreeMap<String, u32>,
}

impl Monomial {
    fn mul(&self, o: &Monomial) -> Monomial {
        let mut params = self.params.clone();
        for (k, e) in &o.params {
            *params.entry(k.clone()).or_insert(0) += e;
        }
        Monomial {
            z: self.z + o.z,
            z1: self.z1 + o.z1,
            x: self.x + o.x,
            log: self.log + o.log,
            params,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymExpr {
    terms: BTreeMap<Monomial, Rational>,
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl SymExpr {
    pub fn zero() -> Self {
        SymExpr::default()
    }

    pub fn constant(c: Rational) -> Self {
        SymExpr::term(c, Monomial::default())
    }

    pub fn int(n: i64) -> Self {
        SymExpr::constant(q(n))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SymExpr { terms }
    }

    pub fn z() -> Self {
        SymExpr::term(q(1), Monomial { z: 1, ..Default::default() })
    }

    /// `(z - 1)^k` as a single monomial, any integer `k`.
    pub fn z_minus_one_pow(k: i32) -> Self {
        SymExpr::term(q(1), Monomial { z1: k, ..Default::default() })
    }

    pub fn z_pow(k: i32) -> Self {
        SymExpr::term(q(1), Monomial { z: k, ..Default::default() })
    }

    pub fn x() -> Self {
        SymExpr::x_pow(1)
    }

    pub fn x_pow(k: i32) -> Self {
        SymExpr::term(q(1), Monomial { x: k, ..Default::default() })
    }

    pub fn log_x() -> Self {
        SymExpr::term(q(1), Monomial { log: 1, ..Default::default() })
    }

    pub fn param(name: &str) -> Self {
        let mut params = BTreeMap::new();
        params.insert(name.to_string(), 1);
        SymExpr::term(q(1), Monomial { params, ..Default::default() })
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    fn push(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.push(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> SymExpr {
        SymExpr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &SymExpr) -> SymExpr {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> SymExpr {
        let mut out = SymExpr::zero();
        for (m, d) in &self.terms {
            out.push(m.clone(), d * c);
        }
        out
    }

    pub fn mul(&self, o: &SymExpr) -> SymExpr {
        let mut out = SymExpr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.push(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> SymExpr {
        (0..n).fold(SymExpr::int(1), |acc, _| acc.mul(self))
    }

    pub fn d_dz(&self) -> SymExpr {
        let mut out = SymExpr::zero();
        for (m, c) in &self.terms {
            if m.z != 0 {
                out.push(Monomial { z: m.z - 1, ..m.clone() }, c * q(m.z as i64));
            }
            if m.z1 != 0 {
                out.push(Monomial { z1: m.z1 - 1, ..m.clone() }, c * q(m.z1 as i64));
            }
        }
        out
    }

    pub fn d_dx(&self) -> SymExpr {
        let mut out = SymExpr::zero();
        for (m, c) in &self.terms {
            if m.x != 0 {
                out.push(Monomial { x: m.x - 1, ..m.clone() }, c * q(m.x as i64));
            }
            if m.log != 0 {
                out.push(Monomial { x: m.x - 1, log: m.log - 1, ..m.clone() }, c * q(m.log as i64));
            }
        }
        out
    }

    pub fn depends_on_z(&self) -> bool {
        self.terms.keys().any(|m| m.z != 0 || m.z1 != 0)
    }

    /// Unique representative: every term over the common denominator
    /// `(z - 1)^K` with `(z - 1)` expanded in the numerator, so that the
    /// remaining monomials are linearly independent.
    pub fn canonical(&self) -> SymExpr {
        let k = self.terms.keys().map(|m| m.z1).min().unwrap_or(0).min(0);
        let mut out = SymExpr::zero();
        for (m, c) in &self.terms {
            let e = (m.z1 - k) as u64;
            for i in 0..=e {
                // (z - 1)^e = sum binom(e, i) z^i (-1)^{e-i}
                let sign = if (e - i).is_multiple_of(2) { q(1) } else { q(-1) };
                let coeff = c * Rational::from_integer(binomial(e, i)) * sign;
                out.push(Monomial { z: m.z + i as i32, z1: k, ..m.clone() }, coeff);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().terms.is_empty()
    }

    /// Substitutes values for `x`, `log x` and the parameters, leaving a
    /// rational function of `z`.
    pub fn specialize(&self, x: Option<&Rational>, log_x: Option<&Rational>, params: &BTreeMap<String, Rational>) -> Result<RationalFunction> {
        let mut acc = RationalFunction::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            if m.x != 0 {
                let xv = x.ok_or_else(|| Error::SymbolicDomain("no value for x".into()))?;
                if xv.is_zero() {
                    return Err(Error::SingularPoint("x = 0".into()));
                }
                v *= pow_q(xv, m.x);
            }
            if m.log != 0 {
                let lv = log_x.ok_or_else(|| Error::SymbolicDomain("no value for log(x)".into()))?;
                v *= pow_q(lv, m.log as i32);
            }
            for (name, e) in &m.params {
                let pv = params
                    .get(name)
                    .ok_or_else(|| Error::SymbolicDomain(format!("no value for parameter {name}")))?;
                v *= pow_q(pv, *e as i32);
            }
            let zpart = RationalFunction::from_poly(Poly::z()).pow(m.z)?;
            let z1part = RationalFunction::from_poly(Poly::linear_root(&q(1))).pow(m.z1)?;
            acc = &acc + &(&(&zpart * &z1part) * &RationalFunction::constant(v));
        }
        Ok(acc)
    }

    /// Lowers a parsed expression; division is allowed only by single
    /// monomials and by `z - 1`.
    pub fn from_expr(e: &Expr) -> Result<SymExpr> {
        Ok(match e {
            Expr::Num(c) => SymExpr::constant(c.clone()),
            Expr::Var(v) if v == "z" => SymExpr::z(),
            Expr::Var(v) if v == "x" => SymExpr::x(),
            Expr::Var(v) => SymExpr::param(v),
            Expr::Add(a, b) => SymExpr::from_expr(a)?.add(&SymExpr::from_expr(b)?),
            Expr::Sub(a, b) => SymExpr::from_expr(a)?.sub(&SymExpr::from_expr(b)?),
            Expr::Mul(a, b) => SymExpr::from_expr(a)?.mul(&SymExpr::from_expr(b)?),
            Expr::Div(a, b) => SymExpr::from_expr(a)?.mul(&SymExpr::inverse_of(b)?),
            Expr::Pow(a, n) if *n < 0 => SymExpr::inverse_of(a)?.pow(n.unsigned_abs()),
            Expr::Pow(a, n) => SymExpr::from_expr(a)?.pow(*n as u32),
            Expr::Neg(a) => SymExpr::from_expr(a)?.neg(),
            Expr::Log(a) => {
                if **a == Expr::Var("x".into()) {
                    SymExpr::log_x()
                } else {
                    return Err(Error::SymbolicDomain(format!("only log(x) is supported, got log({a})")));
                }
            }
        })
    }

    pub fn parse(text: &str, params: &[&str]) -> Result<SymExpr> {
        SymExpr::from_expr(&parse_expression(text, params)?)
    }

    /// Inverts factor by factor so that `1/(z-1)^3` stays a monomial.
    fn inverse_of(e: &Expr) -> Result<SymExpr> {
        match e {
            Expr::Pow(b, n) if *n >= 0 => Ok(SymExpr::inverse_of(b)?.pow(*n as u32)),
            Expr::Pow(b, n) => Ok(SymExpr::from_expr(b)?.pow(n.unsigned_abs())),
            Expr::Mul(a, b) => Ok(SymExpr::inverse_of(a)?.mul(&SymExpr::inverse_of(b)?)),
            Expr::Div(a, b) => Ok(SymExpr::inverse_of(a)?.mul(&SymExpr::from_expr(b)?)),
            Expr::Neg(a) => Ok(SymExpr::inverse_of(a)?.neg()),
            _ => SymExpr::from_expr(e)?.inverse(),
        }
    }

    fn inverse(&self) -> Result<SymExpr> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.log == 0 && m.params.is_empty() {
                let inv = Monomial {
                    z: -m.z,
                    z1: -m.z1,
                    x: -m.x,
                    log: 0,
                    params: BTreeMap::new(),
                };
                return Ok(SymExpr::term(c.recip(), inv));
            }
        }
        let diff = self.sub(&SymExpr::z().sub(&SymExpr::int(1)));
        if diff.is_zero() {
            return Ok(SymExpr::z_minus_one_pow(-1));
        }
        let canon = self.canonical();
        if canon.terms.len() == 1 {
            return canon.inverse();
        }
        Err(Error::SymbolicDomain(format!("cannot divide by {self}")))
    }
}

fn pow_q(v: &Rational, e: i32) -> Rational {
    let p = num_traits::pow(v.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mut factors: Vec<String> = Vec::new();
            let mut pw = |name: &str, e: i64| match e {
                0 => {}
                1 => factors.push(name.to_string()),
                e if e < 0 => factors.push(format!("{name}^({e})")),
                e => factors.push(format!("{name}^{e}")),
            };
            for (p, e) in &m.params {
                pw(p, *e as i64);
            }
            pw("z", m.z as i64);
            pw("(z-1)", m.z1 as i64);
            pw("x", m.x as i64);
            pw("log(x)", m.log as i64);
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let cs = format_rational(&mag);
            if factors.is_empty() {
                write!(f, "{cs}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{cs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Square matrix of symbolic entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix(pub Vec<Vec<SymExpr>>);

impl SymMatrix {
    pub fn zero(n: usize) -> Self {
        SymMatrix(vec![vec![SymExpr::zero(); n]; n])
    }

    pub fn from_rationals(m: &[Vec<Rational>]) -> Self {
        SymMatrix(m.iter().map(|r| r.iter().map(|c| SymExpr::constant(c.clone())).collect()).collect())
    }

    pub fn from_ints(m: &[&[i64]]) -> Self {
        SymMatrix(m.iter().map(|r| r.iter().map(|&c| SymExpr::int(c)).collect()).collect())
    }

    pub fn parse(rows: &[Vec<String>], params: &[&str]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        Ok(SymMatrix(
            rows.iter()
                .map(|r| r.iter().map(|s| SymExpr::parse(s, params)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        ))
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    fn map(&self, f: impl Fn(&SymExpr) -> SymExpr) -> SymMatrix {
        SymMatrix(self.0.iter().map(|r| r.iter().map(&f).collect()).collect())
    }

    fn zip(&self, o: &SymMatrix, f: impl Fn(&SymExpr, &SymExpr) -> SymExpr) -> SymMatrix {
        SymMatrix(
            self.0
                .iter()
                .zip(&o.0)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
                .collect(),
        )
    }

    pub fn add(&self, o: &SymMatrix) -> SymMatrix {
        self.zip(o, SymExpr::add)
    }

    pub fn sub(&self, o: &SymMatrix) -> SymMatrix {
        self.zip(o, SymExpr::sub)
    }

    pub fn scale_by(&self, e: &SymExpr) -> SymMatrix {
        self.map(|x| x.mul(e))
    }

    pub fn mul(&self, o: &SymMatrix) -> SymMatrix {
        let n = self.size();
        SymMatrix(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).fold(SymExpr::zero(), |acc, k| acc.add(&self.0[i][k].mul(&o.0[k][j]))))
                        .collect()
                })
                .collect(),
        )
    }

    /// `[self, o] = self o - o self`.
    pub fn commutator(&self, o: &SymMatrix) -> SymMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn d_dz(&self) -> SymMatrix {
        self.map(SymExpr::d_dz)
    }

    pub fn d_dx(&self) -> SymMatrix {
        self.map(SymExpr::d_dx)
    }

    pub fn canonical(&self) -> SymMatrix {
        self.map(SymExpr::canonical)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(SymExpr::is_zero)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.0.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
    }

    pub fn specialize(&self, x: Option<&Rational>, log_x: Option<&Rational>, params: &BTreeMap<String, Rational>) -> Result<Vec<Vec<RationalFunction>>> {
        self.0
            .iter()
            .map(|r| r.iter().map(|e| e.specialize(x, log_x, params)).collect())
            .collect()
    }
}
