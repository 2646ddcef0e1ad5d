use std::sync::Arc;

use lieconf::axioms::Suite;
use lieconf::classify::ConstraintSet;
use lieconf::construct;
use lieconf::expr::parse_poly;
use lieconf::lambda::{coeff_extract, divided_expansion, point, product_at, Family, ProductTable};
use lieconf::ring::{minus_family_minus_t, Poly, Subst};
use lieconf::{freemod, Generator, Monomial, Rational, Signature, Var, VarClass};
use num_rational::Ratio;
use proptest::prelude::*;

type P = Poly<Rational>;
type Small = Ratio<i64>;

fn vars() -> Vec<Var> {
    vec![Var::T(1), Var::T(2), Var::Lam(1), Var::Lam(2), Var::param("a")]
}

fn coeff() -> impl Strategy<Value = (i64, i64)> {
    (-6i64..=6, 1i64..=4)
}

fn monomial(vars: Vec<Var>) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u32..=2, vars.len()).prop_map(move |exps| {
        Monomial::from_pairs(vars.iter().cloned().zip(exps).filter(|(_, e)| *e > 0))
    })
}

fn poly_in(vars: Vec<Var>) -> impl Strategy<Value = P> {
    proptest::collection::vec((monomial(vars), coeff()), 0..5).prop_map(|terms| {
        let mut p = P::zero();
        for (m, (n, d)) in terms {
            p.add_term(m, Rational::new(n.into(), d.into()));
        }
        p
    })
}

fn poly() -> impl Strategy<Value = P> {
    poly_in(vars())
}

fn small(p: &P) -> Poly<Small> {
    p.map_coeffs(|c| {
        Small::new(
            c.numer().try_into().expect("small numerator"),
            c.denom().try_into().expect("small denominator"),
        )
    })
}

fn sig2() -> Arc<Signature> {
    Signature::new(2, vec![Generator::even("x"), Generator::even("y")], vec!["a".into()]).unwrap()
}

/// A random rank-2 table on two even generators, entries in `T`, `λ`, `a`.
fn table() -> impl Strategy<Value = ProductTable<Rational>> {
    proptest::collection::vec((poly(), poly()), 4).prop_map(|entries| {
        let sig = sig2();
        let mut tab = ProductTable::new(&sig);
        for (k, (p, q)) in entries.into_iter().enumerate() {
            tab.set(k / 2, k % 2, freemod::ModValue::from_components(&sig, [(0, p), (1, q)]));
        }
        tab
    })
}

fn module_value() -> impl Strategy<Value = freemod::ModValue<Rational>> {
    let formal = vec![Var::T(1), Var::T(2), Var::param("a")];
    (poly_in(formal.clone()), poly_in(formal))
        .prop_map(|(p, q)| freemod::ModValue::from_components(&sig2(), [(0, p), (1, q)]))
}

fn substitution() -> impl Strategy<Value = Subst<Rational>> {
    (poly(), poly()).prop_map(|(p, q)| [(Var::Lam(1), p), (Var::param("a"), q)].into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &P::one(), p.clone());
        prop_assert!((&p * &P::zero()).is_zero());
    }

    #[test]
    fn small_rationals_agree(p in poly(), q in poly()) {
        let (sp, sq) = (small(&p), small(&q));
        prop_assert_eq!(small(&(&p * &q)), &sp * &sq);
        prop_assert_eq!(small(&(&p - &q)), &sp - &sq);
        prop_assert_eq!(small(&p).to_string(), p.to_string());
    }

    #[test]
    fn subst_is_a_homomorphism(p in poly(), q in poly(), s in substitution()) {
        prop_assert_eq!((&p * &q).subst(&s), &p.subst(&s) * &q.subst(&s));
        prop_assert_eq!((&p + &q).subst(&s), &p.subst(&s) + &q.subst(&s));
    }

    #[test]
    fn minus_lambda_minus_t_is_an_involution(p in poly()) {
        let s = minus_family_minus_t::<Rational>(VarClass::Lam, 2);
        prop_assert_eq!(p.subst(&s).subst(&s), p);
    }

    #[test]
    fn print_parse_roundtrip(p in poly()) {
        prop_assert_eq!(parse_poly::<Rational>(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn sesquilinearity(tab in table(), x in module_value(), y in module_value()) {
        let lam = point::lam::<Rational>(2);
        let base = product_at(&tab, &x, &lam, &y);
        for i in 1..=2 {
            let t = P::t(i);
            let left = product_at(&tab, &x.scale(&t), &lam, &y);
            prop_assert_eq!(left, base.scale(&-P::lam(i)));
            let right = product_at(&tab, &x, &lam, &y.scale(&t));
            prop_assert_eq!(right, base.scale(&(P::lam(i) + t)));
        }
    }

    #[test]
    fn divided_expansion_reconstructs(tab in table()) {
        let sig = tab.signature().clone();
        for ((a, b), v) in tab.entries() {
            let mut back = freemod::ModValue::zero(&sig);
            for (m, coeff) in divided_expansion(v, Family::Lam) {
                prop_assert_eq!(&coeff_extract(v, Family::Lam, &m), &coeff);
                let mut mono = P::one();
                let mut fact = 1i64;
                for (i, &e) in m.iter().enumerate() {
                    mono = &mono * &P::lam(i as u32 + 1).pow(e);
                    fact *= (1..=e as i64).product::<i64>();
                }
                back += &coeff.scale(&mono).scale_coeff(&Rational::new(1.into(), fact.into()));
            }
            prop_assert_eq!(&back, v, "entry ({}, {})", a, b);
        }
    }

    #[test]
    fn normalization_is_idempotent_and_order_free(ps in proptest::collection::vec(poly(), 0..6), k in 1i64..5) {
        let set = ConstraintSet::new(ps.clone());
        prop_assert_eq!(ConstraintSet::new(set.polys().to_vec()), set.clone());
        let scaled = ps.iter().rev().map(|p| p.scale(&Rational::from_integer((-k).into())));
        prop_assert_eq!(ConstraintSet::new(scaled), set.clone());
        for p in set.polys() {
            let lead = p.leading().unwrap().1.clone();
            prop_assert!(lead > Rational::from_integer(0.into()));
            prop_assert!(p.terms().all(|(_, c)| c.is_integer()));
        }
    }
}

#[test]
fn small_rational_catalog_checks() {
    for r in 1..=2 {
        let vir = construct::virasoro::<Small>(r).unwrap();
        assert!(Suite::LieConformal.run(&vir).unwrap().passed());
    }
    let ham = construct::hamiltonian::<Small>(2).unwrap();
    assert!(Suite::LieConformal.run(&ham).unwrap().passed());
    let np = construct::truncated_poly_np::<Small>(3).unwrap();
    assert!(Suite::NovikovPoisson.run(&np).unwrap().passed());
}
