//! Terms `n^(−u)·P(n)^(−v)` and the exponent-based bounds around them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::sinelike::SineLikeSpec;
use crate::approx::ApproxRecord;
use crate::error::{Error, Result};
use crate::numkernel::{CertReal, Enclose, PrecisionPolicy, Refined};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesParams {
    #[serde(with = "crate::serde_util::rational_str")]
    pub u: BigRational,
    #[serde(with = "crate::serde_util::rational_str")]
    pub v: BigRational,
}

impl SeriesParams {
    pub fn new(u: BigRational, v: BigRational) -> Result<Self> {
        if !u.is_positive() || !v.is_positive() {
            return Err(Error::Domain("u and v must be positive".into()));
        }
        Ok(SeriesParams { u, v })
    }

    pub fn describe(&self) -> String {
        format!(
            "u={}, v={}",
            crate::rational::format_rational(&self.u),
            crate::rational::format_rational(&self.v)
        )
    }
}

/// `n^(−u)·P(n)^(−v)`. Integer powers take the exact fast path; other
/// exponents go through certified `exp`/`ln`.
pub fn term(n: u64, spec: &SineLikeSpec, params: &SeriesParams, policy: &PrecisionPolicy) -> Result<Refined<CertReal>> {
    term_at(&BigInt::from(n), spec, params, policy)
}

/// [`term`] for an arbitrary-size index.
pub fn term_at(n: &BigInt, spec: &SineLikeSpec, params: &SeriesParams, policy: &PrecisionPolicy) -> Result<Refined<CertReal>> {
    if !n.is_positive() {
        return Err(Error::Domain("terms start at n = 1".into()));
    }
    let pv = spec.value(n, policy)?;
    if !pv.value.is_positive() {
        return Err(Error::PrecisionExhausted {
            bits: pv.bits,
            what: format!("P({n}) is not separated from 0"),
        });
    }
    let bits = pv.value.precision_bits();
    let nu = CertReal::from_int(n.clone(), bits).pow_rational(&params.u)?;
    let pv_pow = pv.value.pow_rational(&params.v)?;
    let t = nu.mul(&pv_pow).recip()?;
    Ok(Refined {
        value: t,
        bits: pv.bits,
        status: pv.status,
    })
}

fn check_record(n: u64, record: &ApproxRecord) -> Result<()> {
    if record.q != BigInt::from(n) {
        return Err(Error::Invalid(format!("record is for q = {}, not n = {n}", record.q)));
    }
    Ok(())
}

/// `n^(v·r(n) − u − v) / (α·B)^v`.
fn exponent_bound(n: u64, record: &ApproxRecord, spec: &SineLikeSpec, params: &SeriesParams, b: &BigRational) -> Result<CertReal> {
    check_record(n, record)?;
    let bits = record.exponent.precision_bits();
    let alpha = spec.alpha.enclose(bits)?;
    let e = record
        .exponent
        .mul_rational(&params.v)
        .sub(&CertReal::from_rational(&(&params.u + &params.v), bits));
    let num = CertReal::from_int(n, bits).pow(&e)?;
    let den = alpha.mul_rational(b).pow_rational(&params.v)?;
    num.div(&den)
}

/// Upper bound on `term(n)` from the exponent of `n`, using `P >= B₁·dist`.
pub fn term_upper_bound(n: u64, record: &ApproxRecord, spec: &SineLikeSpec, params: &SeriesParams) -> Result<CertReal> {
    exponent_bound(n, record, spec, params, &spec.b1)
}

/// Lower bound on `term(n)` from the exponent of `n`, using `P <= B₂·dist`.
pub fn term_lower_bound(n: u64, record: &ApproxRecord, spec: &SineLikeSpec, params: &SeriesParams) -> Result<CertReal> {
    exponent_bound(n, record, spec, params, &spec.b2)
}

/// `lower <= term <= upper`, allowing the enclosures to touch.
pub fn bound_chain_holds(lower: &CertReal, term: &CertReal, upper: &CertReal) -> bool {
    lower.lo() <= term.hi() && term.lo() <= upper.hi()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::exponent;
    use crate::numkernel::RealConst;
    use crate::rational::rat;
    use crate::series::SineKind;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn flint_hills_first_terms() {
        let (fh, p) = SineLikeSpec::preset("flint-hills").unwrap();
        let t1 = term(1, &fh, &p, &policy()).unwrap();
        assert!((t1.value.to_f64() - 1.41228292743739191).abs() < 1e-14);
        let t2 = term(2, &fh, &p, &policy()).unwrap();
        let want = 1.0 / (8.0 * 2f64.sin().powi(2));
        assert!((t2.value.to_f64() - want).abs() < 1e-14);
        assert!(term(0, &fh, &p, &policy()).is_err());
    }

    #[test]
    fn lattice_term_closed_form() {
        let (s, _) = SineLikeSpec::preset("sqrt2-lattice").unwrap();
        let p = SeriesParams::new(rat(1, 1), rat(1, 1)).unwrap();
        let t = term(1, &s, &p, &policy()).unwrap().value;
        assert!((t.to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-14);
        assert!(t.width().to_f64() < 1e-30);
    }

    #[test]
    fn non_integer_powers() {
        let (fh, _) = SineLikeSpec::preset("flint-hills").unwrap();
        let p = SeriesParams::new(rat(5, 2), rat(3, 2)).unwrap();
        let t = term(3, &fh, &p, &policy()).unwrap().value;
        let want = 3f64.powf(-2.5) * 3f64.sin().abs().powf(-1.5);
        assert!((t.to_f64() / want - 1.0).abs() < 1e-13);
    }

    #[test]
    fn chain_around_355() {
        let (fh, p) = SineLikeSpec::preset("flint-hills").unwrap();
        let rec = exponent(&BigInt::from(355), &RealConst::Pi, &policy()).unwrap();
        let t = term(355, &fh, &p, &policy()).unwrap().value;
        let up = term_upper_bound(355, &rec, &fh, &p).unwrap();
        let lo = term_lower_bound(355, &rec, &fh, &p).unwrap();
        assert!(bound_chain_holds(&lo, &t, &up));
        assert!(up.hi() > t.hi());
        assert!(term_upper_bound(354, &rec, &fh, &p).is_err());
    }

    #[test]
    fn tight_lattice_chain() {
        // B₁ = B₂ and P = dist: both bounds equal the term.
        let s = SineLikeSpec::new(RealConst::Sqrt(2), rat(1, 1), rat(1, 1), SineKind::LatticeDistance).unwrap();
        let p = SeriesParams::new(rat(3, 1), rat(2, 1)).unwrap();
        let alpha = &s.alpha;
        for n in [2u64, 5, 12, 29, 70] {
            let rec = exponent(&BigInt::from(n), alpha, &policy()).unwrap();
            let t = term(n, &s, &p, &policy()).unwrap().value;
            let up = term_upper_bound(n, &rec, &s, &p).unwrap();
            assert!(bound_chain_holds(&term_lower_bound(n, &rec, &s, &p).unwrap(), &t, &up));
            assert!((up.to_f64() / t.to_f64() - 1.0).abs() < 1e-12, "n = {n}");
        }
    }
}
