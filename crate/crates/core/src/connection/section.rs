//! Polynomial sections of the dual bundle, the dual derivative and pairing
//! with solution germs.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::system::{DerivationField, DifferentialSystem};
use crate::error::{Error, Result};
use crate::exact::rational::serde_rational_vec;
use crate::exact::{Poly, Rational, TruncatedSeries};

/// Row vector `(P_1, ..., P_m)` of polynomials with a recorded degree bound.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolySection {
    components: Vec<Poly>,
    degree_bound: usize,
}

impl PolySection {
    /// The degree bound is raised to the actual maximal degree if needed.
    pub fn new(components: Vec<Poly>, degree_bound: usize) -> PolySection {
        let actual = components.iter().filter_map(Poly::degree).max().unwrap_or(0);
        PolySection {
            components,
            degree_bound: degree_bound.max(actual),
        }
    }

    pub fn from_polys(components: Vec<Poly>) -> PolySection {
        PolySection::new(components, 0)
    }

    pub fn zero(m: usize, degree_bound: usize) -> PolySection {
        PolySection::new(vec![Poly::zero(); m], degree_bound)
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.components.iter().filter_map(Poly::degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> PolySection {
        PolySection::new(self.components.iter().map(|p| p.scale(c)).collect(), self.degree_bound)
    }

    /// Coefficient vector in the unknown order `k (x+1) + d` used by the
    /// section constructor.
    pub fn coefficient_vector(&self) -> Vec<Rational> {
        let w = self.degree_bound + 1;
        let mut v = vec![Rational::zero(); self.rank() * w];
        for (k, p) in self.components.iter().enumerate() {
            for (d, c) in p.coeffs().iter().enumerate() {
                v[k * w + d] = c.clone();
            }
        }
        v
    }

    pub fn from_coefficient_vector(v: &[Rational], m: usize, degree_bound: usize) -> PolySection {
        let w = degree_bound + 1;
        PolySection::new(
            (0..m).map(|k| Poly::new(v[k * w..(k + 1) * w].to_vec())).collect(),
            degree_bound,
        )
    }

    pub fn eval(&self, at: &Rational) -> Vec<Rational> {
        self.components.iter().map(|p| p.eval(at)).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct SectionDoc {
    degree_bound: usize,
    components: Vec<SectionComponent>,
}

#[derive(Serialize, Deserialize)]
struct SectionComponent(#[serde(with = "serde_rational_vec")] Vec<Rational>);

impl Serialize for PolySection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SectionDoc {
            degree_bound: self.degree_bound,
            components: self
                .components
                .iter()
                .map(|p| SectionComponent(p.coeffs().to_vec()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolySection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SectionDoc::deserialize(d)?;
        Ok(PolySection::new(
            doc.components.into_iter().map(|c| Poly::new(c.0)).collect(),
            doc.degree_bound,
        ))
    }
}

/// `m` series solutions at an ordinary point, the `i`-th starting from the
/// `i`-th unit vector. Entry `[i][k]` is component `k` of solution `i`.
pub fn local_solution_basis(sys: &DifferentialSystem, base: &Rational, order: usize) -> Result<Vec<Vec<TruncatedSeries>>> {
    let m = sys.rank();
    (0..m)
        .map(|i| {
            let e: Vec<Rational> = (0..m)
                .map(|k| if k == i { Rational::from_integer(1.into()) } else { Rational::zero() })
                .collect();
            sys.solve_series(base, &e, order)
        })
        .collect()
}

/// `N P' + P (N A)` with the output degree bound
/// `x + deg N + max deg(N A)`.
pub fn dual_derivative(p: &PolySection, sys: &DifferentialSystem, der: &DerivationField) -> Result<PolySection> {
    let m = sys.rank();
    if p.rank() != m {
        return Err(Error::Dimension(format!("section of rank {} for system of rank {m}", p.rank())));
    }
    let na = der.cleared_matrix(sys)?;
    Ok(apply_dual(p, der.multiplier(), &na))
}

fn apply_dual(p: &PolySection, n: &Poly, na: &[Vec<Poly>]) -> PolySection {
    let m = na.len();
    let growth = n.degree_or_zero() + na.iter().flatten().map(Poly::degree_or_zero).max().unwrap_or(0);
    let comps = (0..m)
        .map(|k| {
            let mut acc = n * &p.components[k].derivative();
            for i in 0..m {
                if !p.components[i].is_zero() && !na[i][k].is_zero() {
                    acc = acc + &p.components[i] * &na[i][k];
                }
            }
            acc
        })
        .collect();
    PolySection::new(comps, p.degree_bound + growth)
}

/// `[P_0 = P, P_1, ..., P_len]` with `P_{i+1} = dual_derivative(P_i)`.
pub fn derivative_tower(p: &PolySection, sys: &DifferentialSystem, der: &DerivationField, len: usize) -> Result<Vec<PolySection>> {
    if p.rank() != sys.rank() {
        return Err(Error::Dimension(format!("section of rank {} for system of rank {}", p.rank(), sys.rank())));
    }
    let na = der.cleared_matrix(sys)?;
    let mut out = vec![p.clone()];
    for _ in 0..len {
        let next = apply_dual(out.last().unwrap(), der.multiplier(), &na);
        out.push(next);
    }
    Ok(out)
}

/// `sum_k P_k f_k` expanded at the common base point of the germs.
pub fn pair(p: &PolySection, germs: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    if p.rank() != germs.len() {
        return Err(Error::PairingMismatch(format!(
            "{} components against {} germs",
            p.rank(),
            germs.len()
        )));
    }
    let first = germs.first().ok_or(Error::NoData)?;
    for g in germs {
        if g.base_point() != first.base_point() || g.order() != first.order() {
            return Err(Error::PairingMismatch(format!(
                "germ at {} to order {} does not match germ at {} to order {}",
                g.base_point(),
                g.order(),
                first.base_point(),
                first.order()
            )));
        }
    }
    let mut acc = TruncatedSeries::zero(first.base_point().clone(), first.order());
    for (pk, fk) in p.components.iter().zip(germs) {
        if pk.is_zero() {
            continue;
        }
        acc = acc.add(&fk.mul_poly(pk))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{factorial, int, rat};

    fn exp_germs(order: usize) -> Vec<TruncatedSeries> {
        vec![
            TruncatedSeries::from_fn(int(0), order, |k| Rational::new(1.into(), factorial(k as u64))),
            TruncatedSeries::constant(int(0), int(1), order),
        ]
    }

    #[test]
    fn basis_examples() {
        let nil = DifferentialSystem::constant(&[vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap();
        let b = local_solution_basis(&nil, &int(0), 3).unwrap();
        assert_eq!(b[0][0].coeffs(), &[int(1), int(0), int(0), int(0)]);
        assert!(b[0][1].is_zero());
        assert_eq!(b[1][0].coeffs(), &[int(0), int(1), int(0), int(0)]);
        assert_eq!(b[1][1].coeffs(), &[int(1), int(0), int(0), int(0)]);
        let zero = DifferentialSystem::constant(&[vec![int(0), int(0)], vec![int(0), int(0)]]).unwrap();
        let b = local_solution_basis(&zero, &int(0), 5).unwrap();
        assert_eq!(b[1][1], TruncatedSeries::constant(int(0), int(1), 5));
    }

    #[test]
    fn derivative_examples() {
        let sys = DifferentialSystem::diagonal(&[int(1), int(2)]).unwrap();
        let der = DerivationField::unit();
        let p = PolySection::from_polys(vec![Poly::one(), Poly::one()]);
        let t = derivative_tower(&p, &sys, &der, 2).unwrap();
        let consts: Vec<Vec<Rational>> = t.iter().map(|s| s.eval(&int(0))).collect();
        assert_eq!(consts, vec![vec![int(1), int(1)], vec![int(1), int(2)], vec![int(1), int(4)]]);
        let zero = PolySection::zero(2, 0);
        assert!(dual_derivative(&zero, &sys, &der).unwrap().is_zero());
        let flat = DifferentialSystem::diagonal(&[int(0), int(0)]).unwrap();
        let pz = PolySection::from_polys(vec![Poly::z(), Poly::zero()]);
        assert_eq!(
            dual_derivative(&pz, &flat, &der).unwrap().components(),
            &[Poly::one(), Poly::zero()]
        );
    }

    #[test]
    fn pade_pairing() {
        let p = PolySection::from_polys(vec![Poly::from_ints(&[12, -6, 1]), Poly::from_ints(&[-12, -6, -1])]);
        let f = pair(&p, &exp_germs(8)).unwrap();
        let first = f.coeffs().iter().position(|c| !c.is_zero()).unwrap();
        assert_eq!(first, 5);
        assert_eq!(f.coeff(5), &rat(1, 60));
        let cancel = PolySection::from_polys(vec![Poly::one(), Poly::from_ints(&[-1])]);
        let e = exp_germs(6)[0].clone();
        assert!(pair(&cancel, &[e.clone(), e.clone()]).unwrap().is_zero());
        let proj = PolySection::from_polys(vec![Poly::one(), Poly::zero()]);
        assert_eq!(pair(&proj, &exp_germs(6)).unwrap(), e);
    }

    #[test]
    fn pairing_rejects_mismatch() {
        let p = PolySection::from_polys(vec![Poly::one(), Poly::one()]);
        let a = TruncatedSeries::zero(int(0), 3);
        let b = TruncatedSeries::zero(int(1), 3);
        assert!(matches!(pair(&p, &[a.clone(), b]), Err(Error::PairingMismatch(_))));
        let c = TruncatedSeries::zero(int(0), 4);
        assert!(matches!(pair(&p, &[a, c]), Err(Error::PairingMismatch(_))));
    }
}
