use std::sync::Arc;

use l2euler::intmat::IntMatrix;
use l2euler::oracles::{fox_derivative_recursive, fundamental_identity, hull_agrees, naive_reduce, smith_agrees};
use l2euler::presentation::{fox_gradient, reduce_word, smith_normal_form, QuotientMap};
use l2euler::ring::{int, poly_gcd, Group, Poly, Rational, RationalFunction};
use l2euler::skew::{SkewLaurentPoly, Twist};
use proptest::prelude::*;

fn letters(gens: usize, max: usize) -> impl Strategy<Value = Vec<(usize, i8)>> {
    prop::collection::vec((0..gens, prop_oneof![Just(1i8), Just(-1i8)]), 0..max)
}

fn poly2() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..4, 0u32..4), -5i64..=5), 1..5).prop_map(|ts| {
        Poly::from_terms(2, ts.into_iter().map(|((a, b), c)| (vec![a, b], Rational::from_integer(c.into()))))
    })
}

fn nonzero_poly2() -> impl Strategy<Value = Poly> {
    poly2().prop_filter("nonzero", |p| !p.is_zero())
}

fn rf1() -> impl Strategy<Value = RationalFunction> {
    let p1 = || {
        prop::collection::vec((0u32..3, -4i64..=4), 1..4).prop_map(|ts| {
            Poly::from_terms(1, ts.into_iter().map(|(e, c)| (vec![e], Rational::from_integer(c.into()))))
        })
    };
    (p1(), p1().prop_filter("nonzero", |p| !p.is_zero()))
        .prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn twist() -> impl Strategy<Value = Arc<Twist>> {
    prop_oneof![
        Just(Twist::identity(1)),
        Just(Twist::new(IntMatrix::from_rows(vec![vec![-1]]).unwrap()).unwrap()),
    ]
}

fn skew(tw: Arc<Twist>) -> impl Strategy<Value = SkewLaurentPoly> {
    (prop::collection::vec(rf1(), 1..4), -2i64..=2).prop_map(move |(cs, lo)| {
        SkewLaurentPoly::from_coeffs(&tw, cs.into_iter().enumerate().map(|(i, c)| (lo + i as i64, c))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_reduction_matches_the_naive_rewrite(raw in letters(3, 24)) {
        let w = reduce_word(&raw, 3).unwrap();
        let ours: Vec<(usize, i8)> = w.letters().iter().map(|l| (l.generator, l.sign())).collect();
        prop_assert_eq!(ours, naive_reduce(&raw));
    }

    #[test]
    fn fox_calculus_identities(raw in letters(3, 16), imgs in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 3)) {
        let w = reduce_word(&raw, 3).unwrap();
        let mu = QuotientMap::new(Group::abelian(2), imgs).unwrap();
        let grad = fox_gradient(&w, &mu).unwrap();
        prop_assert!(fundamental_identity(&w, &grad, &mu).unwrap());
        for (g, d) in grad.iter().enumerate() {
            prop_assert_eq!(d, &fox_derivative_recursive(&w, g, &mu).unwrap());
        }
    }

    #[test]
    fn fox_identity_over_a_polyz_group(raw in letters(2, 12), a in prop::collection::vec(-2i64..=2, 3), b in prop::collection::vec(-2i64..=2, 3)) {
        let group = Group::poly_z(IntMatrix::from_rows(vec![vec![0, -1], vec![1, 0]]).unwrap()).unwrap();
        let w = reduce_word(&raw, 2).unwrap();
        let mu = QuotientMap::new(group, vec![a, b]).unwrap();
        let grad = fox_gradient(&w, &mu).unwrap();
        prop_assert!(fundamental_identity(&w, &grad, &mu).unwrap());
    }

    #[test]
    fn gcd_divides_and_contains_common_factors(a in nonzero_poly2(), b in nonzero_poly2(), h in nonzero_poly2()) {
        let (ha, hb) = (&h * &a, &h * &b);
        let g = poly_gcd(&ha, &hb).unwrap();
        prop_assert!(ha.div_exact(&g).is_some());
        prop_assert!(hb.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&h).is_some());
        prop_assert!(g.leading_coeff() == int(1));
    }

    #[test]
    fn rational_function_field_laws(a in rf1(), b in rf1(), c in rf1()) {
        prop_assert_eq!(a.try_add(&b).unwrap().try_sub(&b).unwrap(), a.clone());
        prop_assert_eq!(a.try_add(&b).unwrap(), b.try_add(&a).unwrap());
        let left = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let right = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        if !b.is_zero() {
            prop_assert_eq!(a.try_mul(&b).unwrap().try_div(&b).unwrap(), a);
        }
    }

    #[test]
    fn skew_degree_is_additive_and_division_reconstructs(
        (x, y) in twist().prop_flat_map(|tw| (skew(tw.clone()), skew(tw)))
    ) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let xy = x.try_mul(&y).unwrap();
        prop_assert_eq!(xy.degree().unwrap(), x.degree().unwrap() + y.degree().unwrap());
        let (q, r) = SkewLaurentPoly::left_div_rem(&xy.try_add(&x).unwrap(), &y).unwrap();
        prop_assert_eq!(q.try_mul(&y).unwrap().try_add(&r).unwrap(), xy.try_add(&x).unwrap());
        prop_assert!(r.is_zero() || r.degree().unwrap() < y.degree().unwrap());
        let (q, r) = SkewLaurentPoly::right_div_rem(&xy, &x).unwrap();
        prop_assert_eq!(x.try_mul(&q).unwrap().try_add(&r).unwrap(), xy);
    }

    #[test]
    fn smith_form_matches_minors(m in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..4)) {
        let s = smith_normal_form(&m);
        prop_assert!(smith_agrees(&m, &s.divisors).unwrap());
    }

    #[test]
    fn planar_hull_matches_the_monotone_chain(pts in prop::collection::vec(prop::collection::vec(-5i64..=5, 2), 1..12)) {
        prop_assert!(hull_agrees(&pts).unwrap());
    }
}
