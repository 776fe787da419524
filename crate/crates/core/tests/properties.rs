//! Property tests: algebraic invariants checked against independent oracles
//! on random instances.

use horolab::auxiliary::{construct_small_section, VanishingProblem};
use horolab::connection::{
    derivative_tower, dual_derivative, monomial_lift, pair, solves_system, symmetric_power_system, DerivationField,
    DifferentialSystem, PolySection,
};
use horolab::exact::rational::{factorial, int, int_valuation, padic_valuation, rat};
use horolab::exact::{factorial_valuation, Poly, Rational, RationalFunction, TruncatedSeries};
use horolab::expr::{parse_expression, Expr};
use horolab::isomono::conjugacy_check;
use horolab::nevanlinna::growth_order_fit;
use horolab::zero_lemma::{analyze_tower, cramer_identity_holds};
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rational> {
    (1i64..=400, 1i64..=400, any::<bool>()).prop_map(|(n, d, s)| rat(if s { n } else { -n }, d))
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

/// Entries are polynomials plus an optional pole at `z = 2`.
fn entry() -> impl Strategy<Value = RationalFunction> {
    (small_poly(1), -2i64..=2, 0u32..=2).prop_map(|(p, c, k)| {
        let pole = Poly::linear_root(&int(2)).pow(k);
        let extra = RationalFunction::new(Poly::constant(int(c)), pole).unwrap();
        &RationalFunction::from_poly(p) + &extra
    })
}

fn system(m: usize) -> impl Strategy<Value = DifferentialSystem> {
    prop::collection::vec(entry(), m * m).prop_map(move |e| {
        let rows = e.chunks(m).map(|r| r.to_vec()).collect();
        DifferentialSystem::from_matrix(rows).unwrap()
    })
}

fn cauchy(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let t = a.len().min(b.len());
    (0..t)
        .map(|k| (0..=k).fold(Rational::zero(), |acc, i| acc + &a[i] * &b[k - i]))
        .collect()
}

#[test]
fn factorial_valuation_matches_factorization() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        for i in 0..=20u64 {
            assert_eq!(factorial_valuation(i, p).unwrap(), int_valuation(&factorial(i), p), "i={i} p={p}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_is_additive(a in nonzero_rat(), b in nonzero_rat(), pi in 0usize..5) {
        let p = [2u64, 3, 5, 7, 11][pi];
        let lhs = padic_valuation(&(&a * &b), p).unwrap();
        prop_assert_eq!(lhs, padic_valuation(&a, p).unwrap() + padic_valuation(&b, p).unwrap());
    }

    #[test]
    fn series_product_is_cauchy(a in prop::collection::vec(small_rat(), 1..12), b in prop::collection::vec(small_rat(), 1..12)) {
        let t = a.len().min(b.len());
        let sa = TruncatedSeries::new(int(0), a[..t].to_vec());
        let sb = TruncatedSeries::new(int(0), b[..t].to_vec());
        let prod = sa.mul(&sb).unwrap();
        prop_assert_eq!(prod.coeffs().to_vec(), cauchy(&a[..t], &b[..t]));
    }

    #[test]
    fn parser_round_trip(e in expr_strategy()) {
        let text = e.unparse();
        let once = parse_expression(&text, &["a", "b"]).unwrap();
        let twice = parse_expression(&once.unparse(), &["a", "b"]).unwrap();
        prop_assert_eq!(&once, &e);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn scaling_germs_keeps_vanishing_orders(c in nonzero_rat(), x in 1usize..4) {
        let germs = DifferentialSystem::diagonal(&[int(0), int(1)]).unwrap().solve_series(&int(0), &[int(1), int(1)], 3 * x + 3).unwrap();
        let scaled: Vec<TruncatedSeries> = germs.iter().map(|g| g.scale(&c)).collect();
        let mk = |g: Vec<TruncatedSeries>| VanishingProblem { points: vec![int(0)], germs: vec![g], degree: x, target_orders: vec![2 * x + 1] };
        let a = construct_small_section(&mk(germs)).unwrap();
        let b = construct_small_section(&mk(scaled)).unwrap();
        prop_assert_eq!(a.achieved_orders, b.achieved_orders);
        prop_assert_eq!(a.section, b.section);
    }

    #[test]
    fn growth_fit_ignores_constant_factors(k in 0.1f64..10.0, rho in 0.5f64..3.0) {
        let r: Vec<f64> = (0..12).map(|i| 10f64.powf(1.0 + i as f64 * 0.25)).collect();
        let t: Vec<f64> = r.iter().map(|r| r.powf(rho)).collect();
        let ts: Vec<f64> = t.iter().map(|v| v * k).collect();
        let a = growth_order_fit(&r, &t).unwrap();
        let b = growth_order_fit(&r, &ts).unwrap();
        prop_assert!((a.rho - b.rho).abs() < 1e-9);
        prop_assert!((a.rho - rho).abs() < 1e-9);
    }
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..50).prop_map(|n| Expr::Num(int(n))),
        (1i64..40).prop_map(|n| Expr::Num(rat(n, 4))),
        prop_oneof![Just("z"), Just("x"), Just("a"), Just("b")].prop_map(|v| Expr::Var(v.to_string())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), -3i32..=3).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            inner.prop_map(|a| Expr::Log(Box::new(a))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// `N d/dz <P, f> = <grad P, f>` for horizontal `f`, on 50 random systems.
    #[test]
    fn pairing_commutes_with_dual_derivative(
        sys in (2usize..=3).prop_flat_map(system),
        comps in prop::collection::vec(small_poly(3), 3),
        init in prop::collection::vec(small_rat(), 3),
    ) {
        let m = sys.rank();
        let p = PolySection::from_polys(comps[..m].to_vec());
        let der = DerivationField::for_system(&sys);
        let f = sys.solve_series(&int(0), &init[..m], 14).unwrap();
        let lhs = pair(&p, &f).unwrap().derivative().mul_poly(der.multiplier());
        let rhs = pair(&dual_derivative(&p, &sys, &der).unwrap(), &f).unwrap().truncate(13);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetric_power_lifts_solutions(
        m in 1usize..=3,
        n in 1usize..=3,
        seed in prop::collection::vec(-3i64..=3, 18),
    ) {
        let rows: Vec<Vec<Poly>> = (0..m)
            .map(|i| (0..m).map(|j| Poly::from_ints(&[seed[2 * (i * m + j)], seed[2 * (i * m + j) + 1]])).collect())
            .collect();
        let sys = DifferentialSystem::from_polys(rows).unwrap();
        let init: Vec<Rational> = (0..m).map(|i| int(seed[i] + 4)).collect();
        let f = sys.solve_series(&int(0), &init, 12).unwrap();
        let lifted = monomial_lift(&f, n).unwrap();
        let sym = symmetric_power_system(&sys, n).unwrap();
        prop_assert!(solves_system(&sym, &lifted).unwrap());
    }

    #[test]
    fn tower_invariants(
        sys in (2usize..=3).prop_flat_map(system),
        comps in prop::collection::vec(small_poly(2), 3),
        init in prop::collection::vec(small_rat(), 3),
    ) {
        let m = sys.rank();
        let p = PolySection::from_polys(comps[..m].to_vec());
        prop_assume!(!p.is_zero());
        let der = DerivationField::for_system(&sys);
        let f = sys.solve_series(&int(0), &init[..m], 24).unwrap();
        let a = analyze_tower(&p, &sys, &der, &int(0), &f).unwrap();
        prop_assert!(a.rank_stabilizes());
        prop_assert!(a.ord_drop_holds());
        let tower = derivative_tower(&p, &sys, &der, m).unwrap();
        prop_assert!(cramer_identity_holds(&tower, &f).unwrap());
    }

    #[test]
    fn conjugacy_verdict_is_symmetric(
        a in prop::collection::vec(-5i32..=5, 8),
        t in prop::collection::vec(-3i32..=3, 4),
        perturb in any::<bool>(),
    ) {
        let c = |v: i32| Complex64::new(v as f64, 0.0);
        let tm = [[c(t[0]), c(t[1])], [c(t[2]), c(t[3])]];
        let det = tm[0][0] * tm[1][1] - tm[0][1] * tm[1][0];
        prop_assume!(det.norm() > 0.5);
        let inv = [[tm[1][1] / det, -tm[0][1] / det], [-tm[1][0] / det, tm[0][0] / det]];
        let mul = |x: &[[Complex64; 2]; 2], y: &[[Complex64; 2]; 2]| {
            let mut o = [[c(0); 2]; 2];
            for i in 0..2 { for j in 0..2 { for k in 0..2 { o[i][j] += x[i][k] * y[k][j]; } } }
            o
        };
        let first: Vec<[[Complex64; 2]; 2]> = vec![[[c(a[0]), c(a[1])], [c(a[2]), c(a[3])]], [[c(a[4]), c(a[5])], [c(a[6]), c(a[7])]]];
        let mut second: Vec<[[Complex64; 2]; 2]> = first.iter().map(|m| mul(&mul(&tm, m), &inv)).collect();
        if perturb {
            second[0][0][0] += c(1);
        }
        let v = |l: &[[[Complex64; 2]; 2]]| l.iter().map(|m| m.iter().map(|r| r.to_vec()).collect()).collect::<Vec<Vec<Vec<Complex64>>>>();
        let fwd = conjugacy_check(&v(&first), &v(&second)).unwrap();
        let back = conjugacy_check(&v(&second), &v(&first)).unwrap();
        prop_assert_eq!(fwd.conjugate, back.conjugate);
        if !perturb {
            prop_assert!(fwd.conjugate);
        }
    }
}
