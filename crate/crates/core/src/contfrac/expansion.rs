//! Simple continued fractions with exact convergents.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numkernel::{CertReal, Enclose, PrecisionPolicy};
use crate::rational::floor_rat;

/// Partial quotients `a0; a1, a2, …` with convergents `p_n/q_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CFExpansion {
    terms: Vec<BigInt>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl CFExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I, T>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut cf = Self::new();
        for t in terms {
            cf.push(t.into())?;
        }
        Ok(cf)
    }

    /// Append a partial quotient, extending the convergents.
    pub fn push(&mut self, a: BigInt) -> Result<()> {
        let n = self.terms.len();
        if n == 0 && a.is_negative() {
            return Err(Error::Invalid(format!("a0 must be nonnegative, got {a}")));
        }
        if n > 0 && !a.is_positive() {
            return Err(Error::Invalid(format!("a{n} must be >= 1, got {a}")));
        }
        let (p1, q1) = self.prev(1);
        let (p2, q2) = self.prev(2);
        self.p.push(&a * &p1 + p2);
        self.q.push(&a * &q1 + q2);
        self.terms.push(a);
        Ok(())
    }

    /// `(p_{n-k}, q_{n-k})` relative to the next index, with the standard seeds.
    fn prev(&self, k: usize) -> (BigInt, BigInt) {
        let n = self.terms.len();
        if n >= k {
            (self.p[n - k].clone(), self.q[n - k].clone())
        } else if n + 1 == k {
            (BigInt::one(), BigInt::zero())
        } else {
            (BigInt::zero(), BigInt::one())
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    pub fn term(&self, n: usize) -> Result<&BigInt> {
        self.terms.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            len: self.len(),
        })
    }

    pub fn p(&self, n: usize) -> Result<&BigInt> {
        self.p.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            len: self.len(),
        })
    }

    pub fn q(&self, n: usize) -> Result<&BigInt> {
        self.q.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            len: self.len(),
        })
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.p
    }

    pub fn denominators(&self) -> &[BigInt] {
        &self.q
    }

    pub fn convergent(&self, n: usize) -> Result<BigRational> {
        Ok(BigRational::new(self.p(n)?.clone(), self.q(n)?.clone()))
    }

    /// First `n` terms.
    pub fn truncated(&self, n: usize) -> Self {
        Self::from_terms(self.terms.iter().take(n).cloned()).expect("prefix of a valid expansion")
    }

    /// The last convergent, i.e. the value of the finite expansion itself.
    pub fn value_exact(&self) -> Result<BigRational> {
        if self.is_empty() {
            return Err(Error::Invalid("empty continued fraction".into()));
        }
        self.convergent(self.len() - 1)
    }

    /// Bounds on any real whose expansion starts with these terms: the last
    /// convergent and its mediant with the previous one (unordered).
    pub fn tail_bounds(&self) -> (BigRational, BigRational) {
        if self.is_empty() {
            return (BigRational::zero(), BigRational::zero());
        }
        let n = self.len() - 1;
        let a = BigRational::new(self.p[n].clone(), self.q[n].clone());
        let (pp, qp) = if n == 0 {
            (BigInt::one(), BigInt::zero())
        } else {
            (self.p[n - 1].clone(), self.q[n - 1].clone())
        };
        let b = BigRational::new(&self.p[n] + pp, &self.q[n] + qp);
        (a, b)
    }

    /// Enclosure of every continuation of this prefix.
    pub fn value_enclosure(&self, bits: u32) -> CertReal {
        let (a, b) = self.tail_bounds();
        CertReal::from_rational_bounds(&a, &b, bits)
    }

    /// Check the recurrence, coprimality and increase of denominators.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = Self::from_terms(self.terms.iter().cloned())?;
        if rebuilt.p != self.p || rebuilt.q != self.q {
            return Err(Error::Invalid("convergents do not follow the recurrence".into()));
        }
        for (n, (p, q)) in self.p.iter().zip(&self.q).enumerate() {
            if !p.gcd(q).is_one() {
                return Err(Error::Invalid(format!("convergent {n} is not in lowest terms")));
            }
            if n >= 2 && q <= &self.q[n - 1] {
                return Err(Error::Invalid(format!("q{n} does not increase")));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CfDoc {
    terms: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    convergents: Option<Vec<(serde_json::Value, serde_json::Value)>>,
}

fn int_from_json(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    match v {
        serde_json::Value::String(s) => s.trim().parse().map_err(|_| format!("not an integer: {s:?}")),
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().unwrap()),
        other => Err(format!("not an integer: {other}")),
    }
}

impl Serialize for CFExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let str_of = |x: &BigInt| serde_json::Value::String(x.to_string());
        CfDoc {
            terms: self.terms.iter().map(str_of).collect(),
            convergents: Some(self.p.iter().zip(&self.q).map(|(p, q)| (str_of(p), str_of(q))).collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CFExpansion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = CfDoc::deserialize(d)?;
        let terms = doc
            .terms
            .iter()
            .map(int_from_json)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let cf = CFExpansion::from_terms(terms).map_err(D::Error::custom)?;
        if let Some(conv) = doc.convergents {
            if conv.len() != cf.len() {
                return Err(D::Error::custom("convergent count does not match term count"));
            }
            for (n, (p, q)) in conv.iter().enumerate() {
                let p = int_from_json(p).map_err(D::Error::custom)?;
                let q = int_from_json(q).map_err(D::Error::custom)?;
                if p != cf.p[n] || q != cf.q[n] {
                    return Err(D::Error::custom(format!("convergent {n} disagrees with the terms")));
                }
            }
        }
        Ok(cf)
    }
}

/// Certified partial quotients of an enclosure, as many as its width allows
/// (up to `n_terms`). A term is emitted only when the whole remainder
/// interval shares its floor.
pub fn expand_prefix(alpha: &CertReal, n_terms: usize) -> CFExpansion {
    let mut lo = alpha.lo().to_rational();
    let mut hi = alpha.hi().to_rational();
    let mut cf = CFExpansion::new();
    while cf.len() < n_terms {
        let a = floor_rat(&lo);
        if floor_rat(&hi) != a || cf.push(a.clone()).is_err() {
            break;
        }
        let a = BigRational::from_integer(a);
        let (rl, rh) = (&lo - &a, &hi - &a);
        if rl.is_zero() {
            // Either the value is this exact rational, or the next quotient is unbounded.
            break;
        }
        lo = rh.recip();
        hi = rl.recip();
    }
    cf
}

/// Exactly `n_terms` certified partial quotients of the enclosure.
pub fn expand(alpha: &CertReal, n_terms: usize) -> Result<CFExpansion> {
    let cf = expand_prefix(alpha, n_terms);
    if cf.len() < n_terms {
        return Err(Error::ExpansionExhausted { certified: cf.len() });
    }
    Ok(cf)
}

/// Expand a refinable real, raising precision until `n_terms` are certified.
pub fn expand_source<A: Enclose + ?Sized>(
    alpha: &A,
    n_terms: usize,
    policy: &PrecisionPolicy,
) -> Result<CFExpansion> {
    let mut best = CFExpansion::new();
    for bits in policy.schedule() {
        let cf = expand_prefix(&alpha.enclose(bits)?, n_terms);
        if cf.len() >= n_terms {
            return Ok(cf);
        }
        if cf.len() > best.len() {
            best = cf;
        }
    }
    Err(Error::ExpansionExhausted { certified: best.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::RealConst;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn convergents_follow_recurrence() {
        let cf = CFExpansion::from_terms(ints(&[3, 7, 15, 1, 292])).unwrap();
        assert_eq!(cf.numerators(), ints(&[3, 22, 333, 355, 103993]).as_slice());
        assert_eq!(cf.denominators(), ints(&[1, 7, 106, 113, 33102]).as_slice());
        cf.validate().unwrap();
        assert!(CFExpansion::from_terms(ints(&[1, 0])).is_err());
    }

    #[test]
    fn expands_known_constants() {
        let p = PrecisionPolicy::default();
        let pi = expand_source(&RealConst::Pi, 5, &p).unwrap();
        assert_eq!(pi.terms(), ints(&[3, 7, 15, 1, 292]).as_slice());
        let g = expand_source(&RealConst::Golden, 5, &p).unwrap();
        assert_eq!(g.terms(), ints(&[1, 1, 1, 1, 1]).as_slice());
        let s2 = expand_source(&RealConst::Sqrt(2), 4, &p).unwrap();
        assert_eq!(s2.terms(), ints(&[1, 2, 2, 2]).as_slice());
    }

    #[test]
    fn wide_enclosure_reports_certified_count() {
        let x = CertReal::from_rational_bounds(
            &BigRational::new(314.into(), 100.into()),
            &BigRational::new(315.into(), 100.into()),
            64,
        );
        match expand(&x, 10) {
            Err(Error::ExpansionExhausted { certified }) => assert!((1..10).contains(&certified)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_value_round_trips() {
        let cf = CFExpansion::from_terms(ints(&[0, 1, 3, 9, 40])).unwrap();
        let v = CertReal::from_rational(&cf.value_exact().unwrap(), 256);
        // The last quotient sits on a floor boundary, so rounding hides it.
        assert_eq!(expand_prefix(&v, 5).terms(), &cf.terms()[..4]);
        let half = CertReal::from_rational(&BigRational::new(1.into(), 2.into()), 64);
        assert_eq!(expand_prefix(&half, 5).terms(), ints(&[0, 2]).as_slice());
        let tail = cf.value_enclosure(256);
        assert_eq!(expand_prefix(&tail, 5).terms(), &cf.terms()[..4]);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let cf = CFExpansion::from_terms(ints(&[3, 7, 15])).unwrap();
        let s = serde_json::to_string(&cf).unwrap();
        assert_eq!(s, r#"{"terms":["3","7","15"],"convergents":[["3","1"],["22","7"],["333","106"]]}"#);
        let back: CFExpansion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cf);
        let loose: CFExpansion = serde_json::from_str(r#"{"terms":[3,7,"15"]}"#).unwrap();
        assert_eq!(loose, cf);
        let bad = r#"{"terms":["3","7"],"convergents":[["3","1"],["23","7"]]}"#;
        assert!(serde_json::from_str::<CFExpansion>(bad).is_err());
    }
}
