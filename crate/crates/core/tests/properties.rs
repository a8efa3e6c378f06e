use proptest::prelude::*;
use spectra_core::ab_words::{apply_subst, theta, theta_inverse, ABWord, Letter, Subst, UVWord};
use spectra_core::exact_cf::cf::inverse_cylinder_length;
use spectra_core::exact_cf::{cylinder, eval_cf, lambda_at, markov_value};
use spectra_core::lang::{membership, Budget, Cut, Threshold, Verdict};
use spectra_core::{BiSeq, Rational, Word};

fn digits(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1u8..=2, 1..=max).prop_map(|d| Word::new(d).unwrap())
}

fn letters(max: usize) -> impl Strategy<Value = ABWord> {
    prop::collection::vec(prop_oneof![Just(Letter::A), Just(Letter::B)], 0..=max)
        .prop_map(ABWord::new)
}

fn substs(max: usize) -> impl Strategy<Value = UVWord> {
    prop::collection::vec(prop_oneof![Just(Subst::U), Just(Subst::V)], 0..=max)
        .prop_map(UVWord::new)
}

fn biseq() -> impl Strategy<Value = BiSeq> {
    let lt = prop::collection::vec(1u8..=2, 0..=5).prop_map(|d| Word::new(d).unwrap());
    (digits(4), lt, digits(5), digits(4))
        .prop_map(|(lp, lt, rt, rp)| BiSeq::new(lp, lt, rt, rp).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cylinder_contains_its_value(w in digits(30)) {
        let c = cylinder(&w).unwrap();
        let x = eval_cf(&w).unwrap();
        prop_assert!(c.lo < c.hi);
        prop_assert!(c.lo <= x && x <= c.hi);
        let inv = inverse_cylinder_length(w.digits());
        prop_assert_eq!(c.length, Rational::new(1.into(), inv));
    }

    #[test]
    fn lambda_is_reflection_invariant(s in biseq(), k in -12i64..12) {
        let t = s.shift(k);
        prop_assert_eq!(lambda_at(&t, 0), lambda_at(&t.transpose(), 0));
        prop_assert_eq!(lambda_at(&s, k), lambda_at(&t, 0));
    }

    #[test]
    fn markov_value_ignores_origin_and_direction(s in biseq(), k in -9i64..9) {
        let m = markov_value(&s).value;
        prop_assert_eq!(&markov_value(&s.shift(k)).value, &m);
        prop_assert_eq!(&markov_value(&s.transpose()).value, &m);
        prop_assert_eq!(&markov_value(&s.normalize()).value, &m);
    }

    #[test]
    fn markov_value_dominates_window(s in biseq()) {
        let m = markov_value(&s).value;
        for i in -15..15 {
            prop_assert!(lambda_at(&s, i) <= m);
        }
    }

    #[test]
    fn substitutions_are_morphisms(sub in substs(6), x in letters(12), y in letters(12)) {
        let lhs = apply_subst(&sub, &x.concat(&y));
        prop_assert_eq!(lhs, apply_subst(&sub, &x).concat(&apply_subst(&sub, &y)));
    }

    #[test]
    fn theta_round_trip(p in 0i64..300, q in 1i64..300) {
        prop_assume!(p <= q);
        let x = Rational::new(p.into(), q.into());
        let k = theta_inverse(&x).unwrap();
        prop_assert_eq!(theta(&k).unwrap(), x.clone());
        prop_assert_eq!(num_bigint::BigInt::from(k.len()), x.denom().clone());
    }

    #[test]
    fn literals_round_trip(s in biseq(), l in digits(8), r in digits(8), w in letters(10)) {
        let back: BiSeq = s.to_string().parse().unwrap();
        for i in -20..20 {
            prop_assert_eq!(back.digit(i), s.digit(i));
        }
        let c = Cut::new(l, r).unwrap();
        prop_assert_eq!(c.to_string().parse::<Cut>().unwrap(), c);
        prop_assert_eq!(w.to_string().parse::<ABWord>().unwrap(), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn membership_certificates_verify(w in digits(14)) {
        let budget = Budget::default();
        let t = Threshold::integer(3);
        let c = membership(&w, &t, &budget);
        prop_assert_ne!(c.verdict, Verdict::Unresolved);
        prop_assert!(c.verify(&budget));
        let r = membership(&w.transpose(), &t, &budget);
        prop_assert_eq!(r.verdict, c.verdict);
    }
}
