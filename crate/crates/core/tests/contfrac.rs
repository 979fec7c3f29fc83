mod oracles;

use dioph::contfrac::{
    construct_divergent, default_prefix, expand_prefix, expand_source, sondow_estimate, CFExpansion, DEFAULT_DIGIT_BUDGET,
};
use dioph::numkernel::{PrecisionPolicy, RealConst};
use dioph::rational::int;
use dioph::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

/// Euclid on the oracle's fixed-point value. Quotients near the end of the
/// 320-bit mantissa are unreliable, so callers take a short prefix.
fn euclid_terms(x: &BigInt, n: usize) -> Vec<BigInt> {
    let (mut a, mut b) = (x.clone(), oracles::one());
    let mut out = vec![];
    while out.len() < n && !b.is_zero() {
        let (q, r) = a.div_mod_floor(&b);
        out.push(q);
        a = b;
        b = r;
    }
    out
}

#[test]
fn pi_expansion_matches_euclid_on_agm() {
    let cf = expand_source(&RealConst::Pi, 40, &PrecisionPolicy::default()).unwrap();
    assert_eq!(cf.terms(), euclid_terms(&oracles::pi(), 40).as_slice());
}

#[test]
fn exhausted_expansion_reports_what_it_certified() {
    let tight = PrecisionPolicy::fixed(64);
    match expand_source(&RealConst::Pi, 200, &tight) {
        Err(Error::ExpansionExhausted { certified }) => assert!(certified > 5 && certified < 200),
        other => panic!("{other:?}"),
    }
}

fn check_construction(u: i64, v: i64, terms: usize) {
    let (u_r, v_r) = (int(u), int(v));
    let cf = construct_divergent(&u_r, &v_r, &int(1), terms, &default_prefix(), DEFAULT_DIGIT_BUDGET).unwrap();
    cf.validate().unwrap();
    assert_eq!(cf.len(), terms);
    let x = cf.value_enclosure(256);
    let alpha = 1.0 / x.to_f64();
    let e = u as f64 / v as f64 - 1.0;
    for n in 1..terms - 1 {
        let q = cf.q(n).unwrap().to_f64().unwrap();
        let a = cf.term(n + 1).unwrap().to_f64().unwrap();
        // Rounded up from the worst case over continuations, so never below the nominal size.
        assert!(a >= alpha * q.powf(e) * (1.0 - 1e-9), "n = {n}: {a} < {}", alpha * q.powf(e));
    }
}

#[test]
fn constructions_meet_their_growth_rule() {
    check_construction(3, 2, 8);
    check_construction(1, 1, 12);
    check_construction(5, 2, 6);
}

#[test]
fn digit_budget_is_enforced() {
    let r = construct_divergent(&int(3), &int(2), &int(1), 40, &default_prefix(), 50);
    assert!(r.is_err());
}

#[test]
fn running_estimate_is_two_plus_log_ratio() {
    let cf = CFExpansion::from_terms([3u32, 7, 15, 1, 292, 1, 1]).unwrap();
    for e in sondow_estimate(&cf, 128).unwrap() {
        let q = cf.q(e.n).unwrap().to_f64().unwrap();
        let a = cf.term(e.n + 1).unwrap().to_f64().unwrap();
        let want = 2.0 + a.ln() / q.ln();
        assert!((e.approx - want).abs() < 1e-12, "{}: {} vs {want}", e.n, e.approx);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn convergent_determinant_is_unit(terms in prop::collection::vec(1u32..1000, 1..30), a0 in 0u32..10) {
        let mut all = vec![a0];
        all.extend(terms);
        let cf = CFExpansion::from_terms(all).unwrap();
        for n in 1..cf.len() {
            let d = cf.p(n).unwrap() * cf.q(n - 1).unwrap() - cf.p(n - 1).unwrap() * cf.q(n).unwrap();
            let want = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(d, want);
        }
    }

    #[test]
    fn convergents_bracket_the_value(terms in prop::collection::vec(1u32..50, 3..20)) {
        let cf = CFExpansion::from_terms(terms).unwrap();
        let v = cf.value_exact().unwrap();
        for n in 0..cf.len() - 1 {
            let c = cf.convergent(n).unwrap();
            if n % 2 == 0 {
                prop_assert!(c <= v);
            } else {
                prop_assert!(c >= v);
            }
        }
    }

    #[test]
    fn enclosure_of_a_rational_certifies_all_but_its_last_term(terms in prop::collection::vec(1u32..100, 2..15)) {
        let mut terms = terms;
        // A final quotient of 1 has a second, shorter form; keep the canonical one.
        if *terms.last().unwrap() == 1 {
            *terms.last_mut().unwrap() = 2;
        }
        let cf = CFExpansion::from_terms(terms.clone()).unwrap();
        // A nonpoint enclosure cannot tell the last quotient from its neighbours.
        let x = dioph::numkernel::CertReal::from_rational(&cf.value_exact().unwrap(), 512);
        let back = expand_prefix(&x, terms.len());
        let n = back.len();
        prop_assert!(n + 1 >= terms.len());
        prop_assert_eq!(back.terms(), &cf.terms()[..n]);
    }
}
