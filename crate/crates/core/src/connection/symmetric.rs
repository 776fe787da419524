//! Symmetric powers of a system: the induced action on degree-`n` monomials
//! in the solution coordinates.

use num_traits::Zero;

use super::system::DifferentialSystem;
use crate::error::{Error, Result};
use crate::exact::rational::binomial;
use crate::exact::{Rational, RationalFunction, TruncatedSeries};

/// Exponent vectors of the degree-`n` monomials in `m` variables, in
/// lexicographically descending order (`y1^2, y1 y2, y2^2` for `m = n = 2`).
pub fn monomial_exponents(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == m {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(m, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    rec(m, n, &mut Vec::new(), &mut out);
    out
}

pub fn symmetric_power_system(sys: &DifferentialSystem, n: usize) -> Result<DifferentialSystem> {
    if n == 0 {
        return Err(Error::Dimension("symmetric power degree must be at least 1".into()));
    }
    let m = sys.rank();
    let monos = monomial_exponents(m, n);
    debug_assert_eq!(
        monos.len() as u64,
        u64::try_from(binomial((m + n - 1) as u64, n as u64)).unwrap()
    );
    let index = |e: &[usize]| monos.iter().position(|x| x == e).expect("monomial present");
    let size = monos.len();
    let mut out = vec![vec![RationalFunction::zero(); size]; size];
    // d/dz y^a = sum_{i,j} a_i A_ij y^{a - e_i + e_j}
    for (row, a) in monos.iter().enumerate() {
        for i in 0..m {
            if a[i] == 0 {
                continue;
            }
            let ai = RationalFunction::constant(Rational::from_integer(a[i].into()));
            for j in 0..m {
                let aij = sys.entry(i, j);
                if aij.is_zero() {
                    continue;
                }
                let mut b = a.clone();
                b[i] -= 1;
                b[j] += 1;
                let col = index(&b);
                out[row][col] = &out[row][col] + &(&ai * aij);
            }
        }
    }
    DifferentialSystem::new(out, sys.poles().to_vec())
}

/// Monomial vector `(f^a)_a` of a solution, in the order of
/// [`monomial_exponents`].
pub fn monomial_lift(f: &[TruncatedSeries], n: usize) -> Result<Vec<TruncatedSeries>> {
    let first = f.first().ok_or(Error::NoData)?;
    monomial_exponents(f.len(), n)
        .iter()
        .map(|a| {
            let mut acc = TruncatedSeries::constant(
                first.base_point().clone(),
                Rational::from_integer(1.into()),
                first.order(),
            );
            for (fi, &e) in f.iter().zip(a) {
                for _ in 0..e {
                    acc = acc.mul(fi)?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Checks `F' = S F` on truncated data up to order `T - 1`, where `S` is
/// expanded at the germs' base point.
pub fn solves_system(sys: &DifferentialSystem, f: &[TruncatedSeries]) -> Result<bool> {
    let first = f.first().ok_or(Error::NoData)?;
    let base = first.base_point().clone();
    let t = first.order();
    if t == 0 {
        return Ok(true);
    }
    for (i, fi) in f.iter().enumerate() {
        let lhs = fi.derivative();
        let mut rhs = TruncatedSeries::zero(base.clone(), t - 1);
        for (j, fj) in f.iter().enumerate() {
            let a = sys.entry(i, j);
            if a.is_zero() {
                continue;
            }
            let aj = a.taylor_expand(&base, t - 1)?;
            rhs = rhs.add(&aj.mul(&fj.truncate(t - 1))?)?;
        }
        if lhs.sub(&rhs)?.coeffs().iter().any(|c| !c.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn constant_rows(sys: &DifferentialSystem) -> Vec<Vec<Rational>> {
        sys.matrix()
            .iter()
            .map(|r| r.iter().map(|e| e.eval(&int(0)).unwrap()).collect())
            .collect()
    }

    #[test]
    fn ordering_and_count() {
        assert_eq!(monomial_exponents(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_exponents(3, 3).len(), 10);
    }

    #[test]
    fn spec_examples() {
        let d = DifferentialSystem::diagonal(&[int(1), int(2)]).unwrap();
        let s = symmetric_power_system(&d, 2).unwrap();
        assert_eq!(
            constant_rows(&s),
            vec![
                vec![int(2), int(0), int(0)],
                vec![int(0), int(3), int(0)],
                vec![int(0), int(0), int(4)]
            ]
        );
        assert_eq!(symmetric_power_system(&d, 1).unwrap().matrix(), d.matrix());
        let nil = DifferentialSystem::constant(&[vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap();
        assert_eq!(
            constant_rows(&symmetric_power_system(&nil, 2).unwrap()),
            vec![
                vec![int(0), int(2), int(0)],
                vec![int(0), int(0), int(1)],
                vec![int(0), int(0), int(0)]
            ]
        );
    }
}
