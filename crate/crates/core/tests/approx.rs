mod oracles;

use dioph::approx::{
    are_close, combine, exponent, is_good, parse_records_csv, scan_all, scan_good, scan_good_exhaustive, Goodness,
    GoodScanResult,
};
use dioph::contfrac::MuSpec;
use dioph::numkernel::{PrecisionPolicy, RealConst};
use dioph::rational::rat;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn policy() -> PrecisionPolicy {
    PrecisionPolicy::default()
}

/// Good denominators by the direct search, with a margin so that
/// borderline exponents are left out of the comparison.
fn brute_force_good(x: &BigInt, mu: f64, eps1: f64, q_max: u64) -> (Vec<u64>, Vec<u64>) {
    let (mut good, mut borderline) = (vec![], vec![]);
    for q in 2..=q_max {
        let e = oracles::to_f64(&oracles::best_approx(q, x).exponent);
        let t = mu - eps1;
        if (e - t).abs() < 1e-9 {
            borderline.push(q);
        } else if e >= t {
            good.push(q);
        }
    }
    (good, borderline)
}

fn u64s(v: Vec<BigInt>) -> Vec<u64> {
    v.into_iter().map(|q| q.try_into().unwrap()).collect()
}

#[test]
fn scan_matches_direct_search() {
    let cases = [
        (RealConst::Pi, oracles::inv_pi(), rat(5, 2), 2.5, rat(1, 5), 0.2),
        (RealConst::Pi, oracles::inv_pi(), rat(2, 1), 2.0, rat(1, 10), 0.1),
        (RealConst::Sqrt(2), oracles::inv_sqrt2(), rat(2, 1), 2.0, rat(1, 10), 0.1),
        (RealConst::Golden, oracles::inv_golden(), rat(2, 1), 2.0, rat(1, 5), 0.2),
    ];
    for (alpha, x, mu, mu_f, eps, eps_f) in cases {
        let mu = MuSpec::assumed(mu).unwrap();
        let s = scan_good(&alpha, &mu, &eps, 3000, &policy()).unwrap();
        let (want, borderline) = brute_force_good(&x, mu_f, eps_f, 3000);
        assert!(borderline.is_empty(), "{borderline:?}");
        assert!(s.unknown.is_empty());
        assert_eq!(u64s(s.good_denominators()), want, "{alpha:?}");
        let full = scan_good_exhaustive(&alpha, &mu, &eps, 3000, &policy()).unwrap();
        assert_eq!(full.records, s.records);
    }
}

#[test]
fn scan_all_matches_oracle_records() {
    let x = oracles::inv_sqrt2();
    let (recs, bad) = scan_all(&RealConst::Sqrt(2), 500, &policy());
    assert!(bad.is_empty());
    assert_eq!(recs.len(), 499);
    for r in &recs {
        let o = oracles::best_approx(r.q.clone().try_into().unwrap(), &x);
        assert_eq!(r.p, o.p);
        assert!(r.error.overlaps(&oracles::to_cert(&o.error)));
    }
}

#[test]
fn scan_round_trips_through_json_and_csv() {
    let mu = MuSpec::assumed(rat(5, 2)).unwrap();
    let s = scan_good(&RealConst::Pi, &mu, &rat(1, 5), 2000, &policy()).unwrap();
    let back = GoodScanResult::from_json(&s.to_json().unwrap()).unwrap();
    assert_eq!(back, s);
    let rows = parse_records_csv(&s.to_csv().unwrap()).unwrap();
    assert_eq!(rows.len(), s.records.len() + s.unknown.len());
}

#[test]
fn combined_record_matches_direct_error() {
    // 333/106 and 355/113 approximate π, so 106 and 113 are records of 1/π.
    let p = policy();
    let r1 = exponent(&BigInt::from(106), &RealConst::Pi, &p).unwrap();
    let r2 = exponent(&BigInt::from(113), &RealConst::Pi, &p).unwrap();
    let c = combine(&r1, &r2).unwrap();
    assert_eq!(c.q, BigInt::from(7));
    assert_eq!(c.p, &r2.p - &r1.p);
    // |x − p/q| for the combined fraction, straight from the oracle.
    let x = oracles::inv_pi();
    let qx = BigInt::from(7) * &x;
    let err = (qx - (c.p.clone() << oracles::W)).magnitude().clone() / 7u32;
    assert!(c.error.overlaps(&oracles::to_cert(&err.into())));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn record_matches_direct_search(q in 2u64..200_000) {
        let r = exponent(&BigInt::from(q), &RealConst::Golden, &policy()).unwrap();
        let o = oracles::best_approx(q, &oracles::inv_golden());
        prop_assert_eq!(&r.p, &o.p);
        prop_assert!(r.exponent.overlaps(&oracles::to_cert(&o.exponent)));
    }

    #[test]
    fn closeness_is_exact(q1 in 2u64..10_000, gap in 1u64..10_000, dn in 1i64..20) {
        let delta = rat(dn, 20);
        let got = are_close(&BigInt::from(q1), &BigInt::from(q1 + gap), &delta).unwrap();
        let want = (gap as f64) < (q1 as f64).powf(dn as f64 / 20.0);
        // The float comparison is only trusted away from equality.
        if ((gap as f64).ln() - (dn as f64 / 20.0) * (q1 as f64).ln()).abs() > 1e-9 {
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn goodness_is_monotone_in_epsilon(q in 2u64..5000, e in 1i64..50) {
        let r = exponent(&BigInt::from(q), &RealConst::Pi, &policy()).unwrap();
        let mu = MuSpec::exactly_two();
        let small: BigRational = rat(e, 100);
        let big = &small + rat(1, 100);
        if is_good(&r, &mu, &small) == Goodness::Good {
            prop_assert_eq!(is_good(&r, &mu, &big), Goodness::Good);
        }
    }
}
