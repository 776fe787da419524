//! Derivative towers of polynomial sections: rank of the generated
//! differential submodule, vanishing orders of the paired series, the
//! measured constant in `ord_Q(F_0) <= x r + C`, and a search for wedge
//! indices whose minor does not vanish at a point.

use serde::{Deserialize, Serialize};

use crate::connection::{derivative_tower, pair, DerivationField, DifferentialSystem, PolySection};
use crate::error::{Error, Result};
use crate::exact::matrix::{det, poly_det, poly_rank};
use crate::exact::rational::serde_rational;
use crate::exact::series::Vanishing;
use crate::exact::{Poly, Rational, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerAnalysis {
    /// `P_0, ..., P_m` (one step beyond the maximal possible rank).
    pub tower: Vec<PolySection>,
    pub rank: usize,
    /// Rank over `Q(z)` of the first `k + 1` tower elements, for each `k`.
    pub rank_profile: Vec<usize>,
    /// A non-zero `rank x rank` minor of the first `rank` rows.
    pub wronskian: Poly,
    pub wronskian_columns: Vec<usize>,
    pub minimal_submodule_basis: Vec<PolySection>,
    /// Vanishing orders at `Q` of `F_i = <P_i, f>`.
    pub pairing_orders: Vec<Vanishing>,
}

impl TowerAnalysis {
    /// `ord(F_{i+1}) >= ord(F_i) - 1` along the tower; saturated orders are
    /// treated as at least the truncation order.
    pub fn ord_drop_holds(&self) -> bool {
        let lower = |v: &Vanishing| match v {
            Vanishing::Order(k) => *k as i64,
            Vanishing::SaturatedAt(t) => *t as i64 + 1,
        };
        self.pairing_orders.windows(2).all(|w| match w[1] {
            Vanishing::SaturatedAt(_) => true,
            Vanishing::Order(k) => k as i64 >= lower(&w[0]) - 1,
        })
    }

    /// Rank never grows again after the first step where it stalls.
    pub fn rank_stabilizes(&self) -> bool {
        let mut stalled = false;
        for w in self.rank_profile.windows(2) {
            if w[1] == w[0] {
                stalled = true;
            } else if stalled {
                return false;
            }
        }
        true
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn rows_of(tower: &[PolySection]) -> Vec<Vec<Poly>> {
    tower.iter().map(|s| s.components().to_vec()).collect()
}

pub fn analyze_tower(
    p: &PolySection,
    sys: &DifferentialSystem,
    der: &DerivationField,
    q: &Rational,
    germs: &[TruncatedSeries],
) -> Result<TowerAnalysis> {
    if p.is_zero() {
        return Err(Error::TrivialInput("zero section".into()));
    }
    let m = sys.rank();
    if germs.len() != m {
        return Err(Error::GermData(format!("{} germs for a rank-{m} system", germs.len())));
    }
    if germs.iter().any(|g| g.base_point() != q) {
        return Err(Error::GermData(format!("germs must be based at {q}")));
    }
    // One extra step verifies that the rank has stabilized.
    let tower = derivative_tower(p, sys, der, m)?;
    let rows = rows_of(&tower);
    let rank_profile: Vec<usize> = (1..=rows.len()).map(|k| poly_rank(&rows[..k])).collect();
    let rank = *rank_profile.last().unwrap();
    let (wronskian, cols) = subsets(m, rank)
        .into_iter()
        .map(|cols| {
            let minor: Vec<Vec<Poly>> = rows[..rank]
                .iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                .collect();
            (poly_det(&minor), cols)
        })
        .find(|(d, _)| !d.is_zero())
        .ok_or_else(|| Error::TrivialInput("leading tower rows are dependent".into()))?;
    let pairing_orders = tower
        .iter()
        .map(|s| pair(s, germs).map(|f| f.vanishing_order()))
        .collect::<Result<Vec<_>>>()?;
    Ok(TowerAnalysis {
        minimal_submodule_basis: tower[..rank].to_vec(),
        tower,
        rank,
        rank_profile,
        wronskian,
        wronskian_columns: cols,
        pairing_orders,
    })
}

/// Vanishing order of a series; `SaturatedAt(T)` when every stored
/// coefficient is zero.
pub fn vanishing_order(f: &TruncatedSeries) -> Vanishing {
    f.vanishing_order()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroLemmaReport {
    pub x: usize,
    pub rank: usize,
    pub ord_q: usize,
    /// `ord_q - x * rank`.
    pub measured_c: i64,
    pub ord_drop_holds: bool,
    pub rank_stabilizes: bool,
    /// Degree of the wronskian minor and its excess over `rank * x`.
    pub wedge_degree: usize,
    pub wedge_slack: i64,
}

pub fn zero_lemma_check(
    p: &PolySection,
    sys: &DifferentialSystem,
    der: &DerivationField,
    q: &Rational,
    germs: &[TruncatedSeries],
    x: usize,
) -> Result<ZeroLemmaReport> {
    let a = analyze_tower(p, sys, der, q, germs)?;
    let ord_q = match a.pairing_orders[0] {
        Vanishing::Order(k) => k,
        Vanishing::SaturatedAt(t) => return Err(Error::InsufficientTruncation(t)),
    };
    let wedge_degree = a.wronskian.degree_or_zero();
    Ok(ZeroLemmaReport {
        x,
        rank: a.rank,
        ord_q,
        measured_c: ord_q as i64 - (x * a.rank) as i64,
        ord_drop_holds: a.ord_drop_holds(),
        rank_stabilizes: a.rank_stabilizes(),
        wedge_degree,
        wedge_slack: wedge_degree as i64 - (a.rank * x) as i64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeIndices {
    pub indices: Vec<usize>,
    #[serde(with = "serde_rational")]
    pub minor_value: Rational,
}

/// Lexicographically least `l_1 < ... < l_m <= bound` whose tower minor is
/// non-zero at `q`.
pub fn nonvanishing_wedge_indices(
    p: &PolySection,
    sys: &DifferentialSystem,
    der: &DerivationField,
    q: &Rational,
    bound: usize,
) -> Result<WedgeIndices> {
    if sys.is_singular(q) {
        return Err(Error::SingularPoint(q.to_string()));
    }
    let m = sys.rank();
    let tower = derivative_tower(p, sys, der, bound)?;
    let values: Vec<Vec<Rational>> = tower.iter().map(|s| s.eval(q)).collect();
    for idx in subsets(bound + 1, m) {
        let minor: Vec<Vec<Rational>> = idx.iter().map(|&i| values[i].clone()).collect();
        let d = det(&minor);
        if d != Rational::from_integer(0.into()) {
            return Ok(WedgeIndices {
                indices: idx,
                minor_value: d,
            });
        }
    }
    Err(Error::BoundTooSmall(bound))
}

/// Checks `det(M) f_k = sum_i (-1)^{i+k} minor_{ik}(M) F_i` for the square
/// matrix `M` of the first `m` tower rows, exactly on truncated series.
pub fn cramer_identity_holds(tower: &[PolySection], germs: &[TruncatedSeries]) -> Result<bool> {
    let m = germs.len();
    if tower.len() < m {
        return Err(Error::Dimension("tower shorter than the rank".into()));
    }
    let rows = rows_of(&tower[..m]);
    let f: Vec<TruncatedSeries> = tower[..m]
        .iter()
        .map(|s| pair(s, germs))
        .collect::<Result<_>>()?;
    let d = poly_det(&rows);
    for k in 0..m {
        let lhs = germs[k].mul_poly(&d);
        let mut rhs = TruncatedSeries::zero(germs[k].base_point().clone(), germs[k].order());
        for (i, fi) in f.iter().enumerate() {
            let minor: Vec<Vec<Poly>> = rows
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != k).map(|(_, e)| e.clone()).collect())
                .collect();
            let mut c = poly_det(&minor);
            if (i + k) % 2 == 1 {
                c = -c;
            }
            rhs = rhs.add(&fi.mul_poly(&c))?;
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
