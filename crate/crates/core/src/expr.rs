//! Expression language for matrix entries: rational functions in `z` and `x`
//! with declared symbolic parameters and `log(...)`.
//!
//! Precedence, tightest first: `^` (integer literal exponent), unary minus,
//! `*` `/`, `+` `-`. Binary operators associate to the left.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Poly, Rational, RationalFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Neg(Box<Expr>),
    Log(Box<Expr>),
}

pub const BUILTIN_VARS: [&str; 2] = ["z", "x"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational, String),
    Ident(String),
    Op(char),
}

struct Lexer;

impl Lexer {
    fn run(text: &str) -> Result<Vec<(usize, Tok)>> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() || c == '.' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let q = crate::exact::rational::parse_rational(&lit).map_err(|_| Error::Parse {
                    position: start,
                    message: format!("malformed number {lit:?}"),
                })?;
                out.push((start, Tok::Num(q, lit)));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
            } else if "+-*/^()".contains(c) {
                out.push((i, Tok::Op(c)));
                i += 1;
            } else {
                return Err(Error::Parse {
                    position: i,
                    message: format!("unexpected character {c:?}"),
                });
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    params: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.here(),
            message: message.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let wrapped = self.eat('(');
        let negative = self.eat('-');
        let Some(Tok::Num(q, lit)) = self.peek().cloned() else {
            return self.err("exponent must be an integer literal");
        };
        if !q.is_integer() || lit.contains('.') {
            return self.err("exponent must be an integer literal");
        }
        let Ok(mut e) = i32::try_from(q.to_integer()) else {
            return self.err("exponent out of range");
        };
        self.pos += 1;
        if negative {
            e = -e;
        }
        if wrapped && !self.eat(')') {
            return self.err("expected ')'");
        }
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(q, _)) => {
                self.pos += 1;
                Ok(Expr::Num(q))
            }
            Some(Tok::Ident(name)) => {
                if name == "log" {
                    self.pos += 1;
                    if !self.eat('(') {
                        return self.err("expected '(' after log");
                    }
                    let arg = self.sum()?;
                    if !self.eat(')') {
                        return self.err("expected ')'");
                    }
                    return Ok(Expr::Log(Box::new(arg)));
                }
                if !BUILTIN_VARS.contains(&name.as_str()) && !self.params.contains(&name.as_str()) {
                    return self.err(format!("undeclared symbol {name:?}"));
                }
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected {c:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text`; identifiers other than `z`, `x` and `log` must appear in
/// `params`.
pub fn parse_expression(text: &str, params: &[&str]) -> Result<Expr> {
    let toks = Lexer::run(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
        params,
    };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

fn fmt_num(q: &Rational) -> String {
    if q.is_integer() {
        return q.to_string();
    }
    // Terminating decimals round-trip through the lexer.
    let mut den = q.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&den % 2u32).is_zero() {
        den /= 2u32;
        twos += 1;
    }
    while (&den % 5u32).is_zero() {
        den /= 5u32;
        fives += 1;
    }
    if den.is_one() && !q.numer().sign().eq(&num_bigint::Sign::Minus) {
        let k = twos.max(fives);
        let scaled = (q * Rational::from_integer(num_traits::pow(BigInt::from(10), k as usize))).to_integer();
        let s = format!("{:0>width$}", scaled, width = k as usize + 1);
        let (a, b) = s.split_at(s.len() - k as usize);
        return format!("{a}.{b}");
    }
    format!("({}/{})", q.numer(), q.denom())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => write!(f, "{}", fmt_num(q)),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, e) => {
                // `^` does not chain, so a power base is parenthesized.
                let base = if matches!(**a, Expr::Pow(..)) { format!("({a})") } else { a.to_string() };
                if *e < 0 {
                    write!(f, "{base}^({e})")
                } else {
                    write!(f, "{base}^{e}")
                }
            }
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Log(a) => write!(f, "log({a})"),
        }
    }
}

impl Expr {
    pub fn unparse(&self) -> String {
        self.to_string()
    }

    /// Names of all variables appearing in the expression.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn walk_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => out.push(v.clone()),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.walk_vars(out);
                b.walk_vars(out);
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Log(a) => a.walk_vars(out),
        }
    }

    /// Lowers to a rational function in `z`, substituting `values` for every
    /// other symbol (including `x`).
    pub fn to_rational_function(&self, values: &BTreeMap<String, Rational>) -> Result<RationalFunction> {
        Ok(match self {
            Expr::Num(q) => RationalFunction::constant(q.clone()),
            Expr::Var(v) if v == "z" => RationalFunction::from_poly(Poly::z()),
            Expr::Var(v) => match values.get(v) {
                Some(q) => RationalFunction::constant(q.clone()),
                None => return Err(Error::SymbolicDomain(format!("no value for symbol {v}"))),
            },
            Expr::Add(a, b) => &a.to_rational_function(values)? + &b.to_rational_function(values)?,
            Expr::Sub(a, b) => &a.to_rational_function(values)? - &b.to_rational_function(values)?,
            Expr::Mul(a, b) => &a.to_rational_function(values)? * &b.to_rational_function(values)?,
            Expr::Div(a, b) => (&a.to_rational_function(values)? / &b.to_rational_function(values)?)?,
            Expr::Pow(a, e) => a.to_rational_function(values)?.pow(*e)?,
            Expr::Neg(a) => -&a.to_rational_function(values)?,
            Expr::Log(_) => {
                return Err(Error::SymbolicDomain(
                    "log is not a rational function of z".into(),
                ))
            }
        })
    }
}

/// Parses a rational-function entry in `z` (no parameters).
pub fn parse_rational_function(text: &str) -> Result<RationalFunction> {
    parse_expression(text, &[])?.to_rational_function(&BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn spec_shapes() {
        let e = parse_expression("1/z^2", &[]).unwrap();
        assert_eq!(e, Expr::Div(b(Expr::Num(int(1))), b(Expr::Pow(b(Expr::Var("z".into())), 2))));
        let e = parse_expression("1/(z-1)", &[]).unwrap();
        assert_eq!(
            e,
            Expr::Div(
                b(Expr::Num(int(1))),
                b(Expr::Sub(b(Expr::Var("z".into())), b(Expr::Num(int(1)))))
            )
        );
    }

    #[test]
    fn parameters_must_be_declared() {
        let err = parse_expression("(a-b)*x/z^2", &[]).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                position: 1,
                message: "undeclared symbol \"a\"".into()
            }
        );
        assert!(parse_expression("(a-b)*x/z^2", &["a", "b"]).is_ok());
    }

    #[test]
    fn precedence() {
        // -z^2 is -(z^2); 2*-z is allowed
        let e = parse_expression("-z^2", &[]).unwrap();
        assert_eq!(e, Expr::Neg(b(Expr::Pow(b(Expr::Var("z".into())), 2))));
        let e = parse_expression("1-2-3", &[]).unwrap();
        assert!(matches!(e, Expr::Sub(ref l, _) if matches!(**l, Expr::Sub(..))));
        let f = parse_rational_function("2*-z + z^-1").unwrap();
        let g = RationalFunction::new(Poly::from_ints(&[1, 0, -2]), Poly::z()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_expression("z^x", &[]), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_expression("(z", &[]), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_expression("z # 1", &[]), Err(Error::Parse { position: 2, .. })));
        assert!(parse_rational_function("1/(z-z)").is_err());
    }

    #[test]
    fn decimals_round_trip() {
        let e = parse_expression("0.125*z + 2.5", &[]).unwrap();
        assert_eq!(parse_expression(&e.unparse(), &[]).unwrap(), e);
        assert_eq!(
            e.to_rational_function(&BTreeMap::new()).unwrap(),
            RationalFunction::from_poly(Poly::new(vec![rat(5, 2), rat(1, 8)]))
        );
    }
}
