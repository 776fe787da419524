//! Simultaneous conjugacy of matched lists of matrices: a single invertible
//! `T` with `T A_i = B_i T` for all `i`, from the null space of the stacked
//! linear constraints.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = Vec<Vec<Complex64>>;

/// Relative singular-value threshold for the null space.
pub const NULL_TOLERANCE: f64 = 1e-8;
pub const CONJUGACY_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyReport {
    pub conjugate: bool,
    /// `max_i |T A_i - B_i T| / (|T| max(|A_i|, |B_i|))` in Frobenius norm.
    pub residual: f64,
    pub null_dimension: usize,
    /// `T` is unique up to scale when the null space is a line.
    pub unique: bool,
    /// Smallest over largest singular value of the constraint map.
    pub relative_gap: f64,
    /// `sigma_min / sigma_max` of `T`.
    pub t_conditioning: f64,
    /// Row-major `[re, im]`.
    pub t: Vec<Vec<[f64; 2]>>,
}

fn to_dm(m: &CMatrix) -> DMatrix<Complex64> {
    let n = m.len();
    DMatrix::from_fn(n, n, |i, j| m[i][j])
}

pub fn conjugacy_check(first: &[CMatrix], second: &[CMatrix]) -> Result<ConjugacyReport> {
    if first.is_empty() || first.len() != second.len() {
        return Err(Error::Dimension("lists must be non-empty and of equal length".into()));
    }
    let n = first[0].len();
    if first.iter().chain(second).any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
        return Err(Error::Dimension("all matrices must be n x n".into()));
    }
    let id = DMatrix::<Complex64>::identity(n, n);
    let blocks: Vec<DMatrix<Complex64>> = first
        .iter()
        .zip(second)
        .map(|(a, b)| to_dm(a).transpose().kronecker(&id) - id.kronecker(&to_dm(b)))
        .collect();
    let mut k = DMatrix::<Complex64>::zeros(blocks.len() * n * n, n * n);
    for (i, b) in blocks.iter().enumerate() {
        k.view_mut((i * n * n, 0), (n * n, n * n)).copy_from(b);
    }
    let svd = k.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    let null: Vec<usize> = order.iter().copied().filter(|&i| sv[i] <= NULL_TOLERANCE * smax).collect();
    let relative_gap = sv[order[0]] / smax;
    let picks = if null.is_empty() { vec![order[0]] } else { null.clone() };
    // A seeded generic combination of null vectors is invertible whenever
    // some null vector is.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut vec_t = nalgebra::DVector::<Complex64>::zeros(n * n);
    for &i in &picks {
        let w = if picks.len() == 1 { Complex64::new(1.0, 0.0) } else { Complex64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5)) };
        vec_t += v_t.row(i).adjoint() * w;
    }
    // Column-major vec(T).
    let t = DMatrix::from_fn(n, n, |i, j| vec_t[j * n + i]);
    let tn = t.norm();
    let residual = first
        .iter()
        .zip(second)
        .map(|(a, b)| {
            let (a, b) = (to_dm(a), to_dm(b));
            (&t * &a - &b * &t).norm() / (tn * a.norm().max(b.norm()))
        })
        .fold(0.0, f64::max);
    let tsv = t.clone().svd(false, false).singular_values;
    let t_conditioning = tsv.min() / tsv.max().max(f64::MIN_POSITIVE);
    let conjugate = !null.is_empty() && residual <= CONJUGACY_TOLERANCE && t_conditioning > 1e-10;
    Ok(ConjugacyReport {
        conjugate,
        residual,
        null_dimension: null.len(),
        unique: null.len() == 1,
        relative_gap,
        t_conditioning,
        t: (0..n).map(|i| (0..n).map(|j| [t[(i, j)].re, t[(i, j)].im]).collect()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    }

    fn sample() -> Vec<CMatrix> {
        vec![
            vec![vec![c(2.0), c(1.0)], vec![c(0.0), c(3.0)]],
            vec![vec![c(1.0), c(0.0)], vec![c(4.0), c(-1.0)]],
        ]
    }

    #[test]
    fn identical_lists() {
        let r = conjugacy_check(&sample(), &sample()).unwrap();
        assert!(r.conjugate && r.unique);
        assert!(r.residual < 1e-12);
        // T is a multiple of the identity.
        assert!((r.t[0][1][0].powi(2) + r.t[0][1][1].powi(2)).sqrt() < 1e-12);
    }

    #[test]
    fn recovers_integer_conjugator() {
        let p = vec![vec![c(2.0), c(1.0)], vec![c(1.0), c(1.0)]];
        let pinv = vec![vec![c(1.0), c(-1.0)], vec![c(-1.0), c(2.0)]];
        let b: Vec<CMatrix> = sample().iter().map(|a| mul(&mul(&p, a), &pinv)).collect();
        let r = conjugacy_check(&sample(), &b).unwrap();
        assert!(r.conjugate && r.residual <= 1e-8);
        let back = conjugacy_check(&b, &sample()).unwrap();
        assert_eq!(back.conjugate, r.conjugate);
    }

    #[test]
    fn different_traces_are_not_conjugate() {
        let mut b = sample();
        b[0][1][1] = c(5.0);
        let r = conjugacy_check(&sample(), &b).unwrap();
        assert!(!r.conjugate);
        assert_eq!(r.null_dimension, 0);
    }
}
