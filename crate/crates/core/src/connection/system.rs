//! Linear systems `Y' = A Y` with rational-function coefficients.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, parse_rational};
use crate::exact::{Poly, Rational, RationalFunction, TruncatedSeries};
use crate::expr::parse_rational_function;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolePoint {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for PolePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolePoint::Finite(q) => write!(f, "{}", format_rational(q)),
            PolePoint::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for PolePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PolePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.trim() == "inf" || s.trim() == "infinity" {
            return Ok(PolePoint::Infinity);
        }
        parse_rational(&s)
            .map(PolePoint::Finite)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleEntry {
    pub point: PolePoint,
    pub multiplicity: u32,
}

/// Pole orders of the form `A dz`: finite poles of the entries, plus the
/// point at infinity where an entry of degree `k` contributes `k + 2`.
pub fn required_divisor(matrix: &[Vec<RationalFunction>]) -> Result<Vec<PoleEntry>> {
    let mut den = Poly::one();
    let mut top: Option<i64> = None;
    for entry in matrix.iter().flatten() {
        if entry.is_zero() {
            continue;
        }
        den = den.lcm(entry.denominator());
        let k = entry.degree_at_infinity().unwrap();
        top = Some(top.map_or(k, |t| t.max(k)));
    }
    let mut out = Vec::new();
    let roots = den.rational_roots();
    let mut covered = Poly::one();
    for (q, mult) in roots {
        covered = &covered * &Poly::linear_root(&q).pow(mult as u32);
        out.push(PoleEntry {
            point: PolePoint::Finite(q),
            multiplicity: mult as u32,
        });
    }
    if covered.degree() != den.degree() {
        return Err(Error::PoleDivisor(format!(
            "denominator {den} has non-rational roots"
        )));
    }
    if let Some(k) = top {
        if k + 2 > 0 {
            out.push(PoleEntry {
                point: PolePoint::Infinity,
                multiplicity: (k + 2) as u32,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialSystem {
    matrix: Vec<Vec<RationalFunction>>,
    poles: Vec<PoleEntry>,
}

impl DifferentialSystem {
    /// Builds a system and checks that `poles` covers every pole of `matrix`.
    pub fn new(matrix: Vec<Vec<RationalFunction>>, poles: Vec<PoleEntry>) -> Result<DifferentialSystem> {
        let m = matrix.len();
        if m == 0 || matrix.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension(format!("matrix must be square and non-empty, got {m} rows")));
        }
        for need in required_divisor(&matrix)? {
            let have = poles
                .iter()
                .filter(|p| p.point == need.point)
                .map(|p| p.multiplicity)
                .max()
                .unwrap_or(0);
            if have < need.multiplicity {
                return Err(Error::PoleDivisor(format!(
                    "point {} needs multiplicity {}, divisor gives {}",
                    need.point, need.multiplicity, have
                )));
            }
        }
        Ok(DifferentialSystem { matrix, poles })
    }

    /// Builds a system with the smallest admissible pole divisor.
    pub fn from_matrix(matrix: Vec<Vec<RationalFunction>>) -> Result<DifferentialSystem> {
        let poles = required_divisor(&matrix)?;
        DifferentialSystem::new(matrix, poles)
    }

    pub fn from_polys(rows: Vec<Vec<Poly>>) -> Result<DifferentialSystem> {
        DifferentialSystem::from_matrix(
            rows.into_iter()
                .map(|r| r.into_iter().map(RationalFunction::from_poly).collect())
                .collect(),
        )
    }

    /// Constant coefficient matrix.
    pub fn constant(rows: &[Vec<Rational>]) -> Result<DifferentialSystem> {
        DifferentialSystem::from_matrix(
            rows.iter()
                .map(|r| r.iter().cloned().map(RationalFunction::constant).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[Rational]) -> Result<DifferentialSystem> {
        let m = entries.len();
        let rows: Vec<Vec<Rational>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { entries[i].clone() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        DifferentialSystem::constant(&rows)
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<RationalFunction>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction {
        &self.matrix[i][j]
    }

    pub fn poles(&self) -> &[PoleEntry] {
        &self.poles
    }

    pub fn is_singular(&self, q: &Rational) -> bool {
        self.poles
            .iter()
            .any(|p| p.point == PolePoint::Finite(q.clone()))
            || self.matrix.iter().flatten().any(|e| e.denominator().eval(q).is_zero())
    }

    /// Monic lcm of all entry denominators: the smallest pole-clearing
    /// multiplier.
    pub fn common_denominator(&self) -> Poly {
        self.matrix
            .iter()
            .flatten()
            .fold(Poly::one(), |acc, e| acc.lcm(e.denominator()))
    }

    /// Taylor coefficients `A_0, ..., A_T` of the matrix at an ordinary point.
    pub fn expand_matrix(&self, base: &Rational, order: usize) -> Result<Vec<Vec<Vec<Rational>>>> {
        if self.is_singular(base) {
            return Err(Error::SingularPoint(format_rational(base)));
        }
        let m = self.rank();
        let mut series = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                series[i][j] = self.matrix[i][j].taylor_expand(base, order)?.coeffs().to_vec();
            }
        }
        Ok((0..=order)
            .map(|k| (0..m).map(|i| (0..m).map(|j| series[i][j][k].clone()).collect()).collect())
            .collect())
    }

    /// Series solution with initial value `initial` at the ordinary point
    /// `base`, using `c_{k+1} = (sum_j A_j c_{k-j}) / (k+1)`.
    pub fn solve_series(&self, base: &Rational, initial: &[Rational], order: usize) -> Result<Vec<TruncatedSeries>> {
        let m = self.rank();
        if initial.len() != m {
            return Err(Error::Dimension(format!("initial vector has length {}, rank is {m}", initial.len())));
        }
        let a = self.expand_matrix(base, order)?;
        let mut c: Vec<Vec<Rational>> = vec![initial.to_vec()];
        for k in 0..order {
            let mut next = vec![Rational::zero(); m];
            for (j, aj) in a.iter().enumerate().take(k + 1) {
                let prev = &c[k - j];
                for (i, slot) in next.iter_mut().enumerate() {
                    for (l, pl) in prev.iter().enumerate() {
                        if !aj[i][l].is_zero() && !pl.is_zero() {
                            *slot += &aj[i][l] * pl;
                        }
                    }
                }
            }
            let inv = Rational::new(1.into(), (k + 1).into());
            c.push(next.into_iter().map(|v| v * &inv).collect());
        }
        Ok((0..m)
            .map(|i| TruncatedSeries::new(base.clone(), c.iter().map(|ck| ck[i].clone()).collect()))
            .collect())
    }

    /// Parses the JSON document `{"rank": m, "matrix": [[expr]], "poles": [...]}`.
    pub fn from_json_str(text: &str) -> Result<DifferentialSystem> {
        let doc: SystemDocument = serde_json::from_str(text)
            .map_err(|e| Error::Parse { position: e.column(), message: e.to_string() })?;
        doc.build()
    }

    pub fn to_document(&self) -> SystemDocument {
        SystemDocument {
            rank: self.rank(),
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|e| e.to_string()).collect())
                .collect(),
            poles: Some(self.poles.clone()),
        }
    }
}

/// Serialized form of a [`DifferentialSystem`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub rank: usize,
    pub matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Vec<PoleEntry>>,
}

impl SystemDocument {
    pub fn build(&self) -> Result<DifferentialSystem> {
        if self.matrix.len() != self.rank {
            return Err(Error::Dimension(format!(
                "rank {} but {} matrix rows",
                self.rank,
                self.matrix.len()
            )));
        }
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|s| parse_rational_function(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        match &self.poles {
            Some(p) => DifferentialSystem::new(matrix, p.clone()),
            None => DifferentialSystem::from_matrix(matrix),
        }
    }
}

/// The derivation `N(z) d/dz`, with `N` clearing the poles of a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationField {
    multiplier: Poly,
}

impl DerivationField {
    pub fn new(multiplier: Poly) -> Result<DerivationField> {
        if multiplier.is_zero() {
            return Err(Error::NonIntegralDerivation);
        }
        Ok(DerivationField { multiplier })
    }

    /// Plain `d/dz`.
    pub fn unit() -> DerivationField {
        DerivationField { multiplier: Poly::one() }
    }

    /// `N` = common denominator of the system.
    pub fn for_system(sys: &DifferentialSystem) -> DerivationField {
        DerivationField {
            multiplier: sys.common_denominator(),
        }
    }

    pub fn multiplier(&self) -> &Poly {
        &self.multiplier
    }

    /// `N A` as a polynomial matrix, or an error if `N` leaves a pole.
    pub fn cleared_matrix(&self, sys: &DifferentialSystem) -> Result<Vec<Vec<Poly>>> {
        let n = RationalFunction::from_poly(self.multiplier.clone());
        sys.matrix()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| {
                        let p = &n * e;
                        if p.is_polynomial() {
                            Ok(p.numerator().clone())
                        } else {
                            Err(Error::NonIntegralDerivation)
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn diagonal_solution_basis() {
        let sys = DifferentialSystem::diagonal(&[int(1), int(2)]).unwrap();
        let f = sys.solve_series(&int(0), &[int(1), int(0)], 2).unwrap();
        assert_eq!(f[0].coeffs(), &[int(1), int(1), rat(1, 2)]);
        assert!(f[1].is_zero());
        let g = sys.solve_series(&int(0), &[int(0), int(1)], 2).unwrap();
        assert_eq!(g[1].coeffs(), &[int(1), int(2), int(2)]);
    }

    #[test]
    fn divisor_validation() {
        let m = vec![vec![parse_rational_function("1/(z-1)^2").unwrap()]];
        let need = required_divisor(&m).unwrap();
        assert_eq!(need[0], PoleEntry { point: PolePoint::Finite(int(1)), multiplicity: 2 });
        assert!(DifferentialSystem::new(
            m.clone(),
            vec![PoleEntry { point: PolePoint::Finite(int(1)), multiplicity: 1 }]
        )
        .is_err());
        let sys = DifferentialSystem::from_matrix(m).unwrap();
        assert!(matches!(
            sys.solve_series(&int(1), &[int(1)], 3),
            Err(Error::SingularPoint(_))
        ));
        let irr = vec![vec![parse_rational_function("1/(z^2+1)").unwrap()]];
        assert!(DifferentialSystem::from_matrix(irr).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"rank":2,"matrix":[["0","0"],["0","1"]],"poles":[{"point":"inf","multiplicity":2}]}"#;
        let sys = DifferentialSystem::from_json_str(text).unwrap();
        assert_eq!(sys.rank(), 2);
        let doc = serde_json::to_string(&sys.to_document()).unwrap();
        assert_eq!(DifferentialSystem::from_json_str(&doc).unwrap(), sys);
    }

    #[test]
    fn multiplier_must_clear_poles() {
        let m = vec![vec![parse_rational_function("1/z").unwrap()]];
        let sys = DifferentialSystem::from_matrix(m).unwrap();
        assert_eq!(DerivationField::unit().cleared_matrix(&sys), Err(Error::NonIntegralDerivation));
        let der = DerivationField::for_system(&sys);
        assert_eq!(der.cleared_matrix(&sys).unwrap(), vec![vec![Poly::one()]]);
    }
}
