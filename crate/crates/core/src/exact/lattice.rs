//! Integral LLL reduction (delta = 3/4) on exact integer bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn round_div(a: &BigInt, d: &BigInt) -> BigInt {
    // d > 0
    (BigInt::from(2) * a + d).div_floor(&(BigInt::from(2) * d))
}

/// LLL-reduces the rows of `basis`, which must be linearly independent.
/// All arithmetic stays in the integers (Gram determinants `d_i` and scaled
/// Gram-Schmidt coefficients), so the output is exact and deterministic.
pub fn lll_reduce(basis: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let n = basis.len();
    if n <= 1 {
        return Ok(basis.to_vec());
    }
    // 1-based indexing below; index 0 is a sentinel.
    let mut b: Vec<Vec<BigInt>> = std::iter::once(Vec::new()).chain(basis.iter().cloned()).collect();
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::from(1);
    d[1] = dot(&b[1], &b[1]);
    if d[1].is_zero() {
        return Err(Error::Dimension("LLL input basis is dependent".into()));
    }
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::Dimension("LLL input basis is dependent".into()));
                    }
                    d[k] = u;
                }
            }
        }
        reduce(&mut b, &mut lam, &d, k, k - 1);
        let lhs = BigInt::from(4) * &d[k] * &d[k - 2] + BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
        let rhs = BigInt::from(3) * &d[k - 1] * &d[k - 1];
        if lhs < rhs {
            b.swap(k, k - 1);
            for j in 1..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let bb = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
            }
            d[k - 1] = bb;
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                reduce(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(b.into_iter().skip(1).collect())
}

fn reduce(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    if BigInt::from(2) * lam[k][l].abs() <= d[l] {
        return;
    }
    let q = round_div(&lam[k][l], &d[l]);
    let bl = b[l].clone();
    for (x, y) in b[k].iter_mut().zip(&bl) {
        *x -= &q * y;
    }
    lam[k][l] -= &q * &d[l];
    for i in 1..l {
        let t = &q * &lam[l][i];
        lam[k][i] -= t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn classic_example() {
        // Cohen's textbook example reduces to short vectors of norm^2 <= 3.
        let basis = vec![v(&[1, 1, 1]), v(&[-1, 0, 2]), v(&[3, 5, 6])];
        let red = lll_reduce(&basis).unwrap();
        let norms: Vec<BigInt> = red.iter().map(|r| dot(r, r)).collect();
        assert!(norms[0] <= BigInt::from(3));
        // determinant (volume) preserved up to sign
        let det = |m: &[Vec<BigInt>]| {
            &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
        };
        assert_eq!(det(&basis).abs(), det(&red).abs());
    }

    #[test]
    fn finds_integer_relation() {
        // columns: identity | 10^6 * (1, sqrt2 approx, 2) -> relation 2*1 - 1*2 = 0
        let s = 1_000_000i64;
        let basis = vec![v(&[1, 0, 0, s]), v(&[0, 1, 0, 1_414_214]), v(&[0, 0, 1, 2 * s])];
        let red = lll_reduce(&basis).unwrap();
        assert_eq!(red[0][3], BigInt::zero());
        assert_eq!(red[0][1], BigInt::zero());
    }

    #[test]
    fn dependent_input_rejected() {
        assert!(lll_reduce(&[v(&[1, 2]), v(&[2, 4])]).is_err());
    }
}
