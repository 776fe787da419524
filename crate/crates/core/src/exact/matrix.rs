//! Exact linear algebra: rational row reduction and fraction-free elimination
//! over `Q[z]`.

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for v in rows[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
pub fn kernel_basis(rows: &[Vec<Rational>], n_cols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n_cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n_cols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn det(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        let inv = Rational::one() / &m[c][c];
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    d
}

/// Scales a row of polynomials by the common denominator of all its
/// coefficients; rank and vanishing are unchanged.
fn clear_row_denominators(row: &[Poly]) -> Vec<Poly> {
    use num_integer::Integer;
    let l = row
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()));
    let l = Rational::from_integer(l);
    row.iter().map(|p| p.scale(&l)).collect()
}

/// Fraction-free (Bareiss) echelon elimination over `Q[z]`. Returns the rank.
pub fn poly_rank(rows: &[Vec<Poly>]) -> usize {
    let mut m: Vec<Vec<Poly>> = rows.iter().map(|r| clear_row_denominators(r)).collect();
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut prev = Poly::one();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..n_rows {
            for j in c + 1..n_cols {
                let t = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][c] = Poly::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Determinant over `Q[z]` by Bareiss elimination.
pub fn poly_det(rows: &[Vec<Poly>]) -> Poly {
    let n = rows.len();
    if n == 0 {
        return Poly::one();
    }
    let mut m = rows.to_vec();
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Poly::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn kernel_and_rank() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&m), 1);
        let k = kernel_basis(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Rational = m[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn determinants_agree() {
        let m = q(&[&[2, -1, 0], &[1, 3, 5], &[0, 4, 1]]);
        assert_eq!(det(&m), int(2 * (3 - 20) + 1));
        let pm: Vec<Vec<Poly>> = m
            .iter()
            .map(|r| r.iter().map(|c| Poly::constant(c.clone())).collect())
            .collect();
        assert_eq!(poly_det(&pm), Poly::constant(det(&m)));
    }

    #[test]
    fn polynomial_rank() {
        let z = Poly::z();
        let one = Poly::one();
        // rows (1, z), (z, z^2) are dependent over Q(z)
        let rows = vec![vec![one.clone(), z.clone()], vec![z.clone(), &z * &z]];
        assert_eq!(poly_rank(&rows), 1);
        assert!(poly_det(&rows).is_zero());
        let rows = vec![vec![one.clone(), z.clone()], vec![z.clone(), one.clone()]];
        assert_eq!(poly_rank(&rows), 2);
        assert_eq!(poly_det(&rows), Poly::from_ints(&[1, 0, -1]));
    }
}
