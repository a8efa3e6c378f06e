use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_cf::{QuadSurd, Rational, SurdSum};

/// An exact threshold t in Q(√3), together with the text it was built from.
///
/// Every rational is allowed, and so is √12 = 2√3, the largest λ-value over {1,2}.
#[derive(Clone)]
pub struct Threshold {
    value: QuadSurd,
    label: String,
}

impl Threshold {
    pub fn new(value: QuadSurd, label: impl Into<String>) -> Result<Self> {
        let d = value.radicand();
        if !(d.is_zero() || *d == BigInt::from(3)) {
            return Err(Error::Domain(format!(
                "threshold {} is outside Q(√3)",
                value.pretty()
            )));
        }
        Ok(Threshold {
            value,
            label: label.into(),
        })
    }

    pub fn rational(r: Rational) -> Self {
        let label = r.to_string();
        Threshold {
            value: QuadSurd::from_rational(&r),
            label,
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational::from_integer(n.into()))
    }

    /// 3 + 6^(-k) when `above`, else 3 − 6^(-k).
    pub fn near_three(k: u32, above: bool) -> Self {
        let eps = Rational::new(BigInt::one(), BigInt::from(6).pow(k));
        let three = Rational::from_integer(3.into());
        let (v, sign) = if above {
            (three + eps, '+')
        } else {
            (three - eps, '-')
        };
        Threshold {
            value: QuadSurd::from_rational(&v),
            label: format!("3{sign}6^-{k}"),
        }
    }

    pub fn sqrt12() -> Self {
        Threshold {
            value: QuadSurd::sqrt_int(12),
            label: "sqrt(12)".into(),
        }
    }

    pub fn value(&self) -> &QuadSurd {
        &self.value
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn to_surd_sum(&self) -> SurdSum {
        self.value.to_surd_sum()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// The threshold as (p, q, r) with t = (p + q√3)/r and r > 0.
    pub(crate) fn q3_parts(&self) -> (BigInt, BigInt, BigInt) {
        let v = &self.value;
        let q = if v.is_rational() {
            BigInt::zero()
        } else {
            v.q().clone()
        };
        (v.p().clone(), q, v.r().clone())
    }

    pub fn is_at_least_sqrt12(&self) -> bool {
        self.value >= QuadSurd::sqrt_int(12)
    }
}

impl PartialEq for Threshold {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl fmt::Debug for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Threshold({})", self.label)
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label)
    }
}

impl FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = parse_exact(s)?;
        let surd = v
            .to_surd()
            .ok_or_else(|| Error::Domain(format!("threshold {s:?} has several radicals")))?;
        Threshold::new(surd, s.trim())
    }
}

/// Parses an exact real of the form `term (("+"|"-") term)*` where a term is an integer,
/// a decimal, a fraction `p/q`, a power `b^e` or `b^-e` (with `e` a product of integers such
/// as `3*68`), or `sqrt(n)`.
///
/// Examples: `3+6^-204`, `3.06`, `1/3`, `sqrt(12)`, `6^-18`.
pub fn parse_exact(s: &str) -> Result<SurdSum> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    let mut total = SurdSum::zero();
    let mut start = 0;
    let bytes: Vec<char> = src.chars().collect();
    let mut sign = 1i32;
    if bytes[0] == '+' || bytes[0] == '-' {
        sign = if bytes[0] == '-' { -1 } else { 1 };
        start = 1;
    }
    let mut i = start;
    while i <= bytes.len() {
        let at_split = i == bytes.len()
            || ((bytes[i] == '+' || bytes[i] == '-') && i > start && bytes[i - 1] != '^');
        if at_split {
            let term: String = bytes[start..i].iter().collect();
            let v = parse_term(&term)?;
            total = if sign < 0 {
                total.sub(&v)
            } else {
                total.add(&v)
            };
            if i < bytes.len() {
                sign = if bytes[i] == '-' { -1 } else { 1 };
            }
            start = i + 1;
        }
        i += 1;
    }
    Ok(total)
}

fn parse_term(t: &str) -> Result<SurdSum> {
    let bad = || Error::Parse(format!("bad numeric term {t:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some(inner) = t
        .strip_prefix("sqrt(")
        .or_else(|| t.strip_prefix("√("))
        .and_then(|r| r.strip_suffix(')'))
    {
        let n: BigInt = inner.parse().map_err(|_| bad())?;
        if n.is_negative() {
            return Err(Error::Domain(format!("sqrt of negative {n}")));
        }
        return Ok(SurdSum::radical(Rational::one(), n));
    }
    if let Some((b, e)) = t.split_once('^') {
        let base = parse_rational(b).ok_or_else(bad)?;
        let (neg, e) = match e.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, e),
        };
        let mut exp: u64 = 1;
        for f in e.split('*') {
            exp = exp
                .checked_mul(f.parse::<u64>().map_err(|_| bad())?)
                .ok_or_else(bad)?;
        }
        let exp = u32::try_from(exp).map_err(|_| bad())?;
        let p = Rational::new(base.numer().pow(exp), base.denom().pow(exp));
        if neg {
            if p.is_zero() {
                return Err(Error::Domain("zero to a negative power".into()));
            }
            return Ok(SurdSum::from_rational(p.recip()));
        }
        return Ok(SurdSum::from_rational(p));
    }
    parse_rational(t)
        .map(SurdSum::from_rational)
        .ok_or_else(bad)
}

fn parse_rational(t: &str) -> Option<Rational> {
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let ip: BigInt = if ip.is_empty() {
            BigInt::zero()
        } else {
            ip.parse().ok()?
        };
        let scale = BigInt::from(10).pow(fp.len() as u32);
        let f: BigInt = if fp.is_empty() {
            BigInt::zero()
        } else {
            fp.parse().ok()?
        };
        return Some(Rational::new(ip * &scale + f, scale));
    }
    t.parse::<BigInt>().ok().map(Rational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        let t: Threshold = "3+6^-6".parse().unwrap();
        assert_eq!(t, Threshold::near_three(6, true));
        let t: Threshold = "3+6^-3*2".parse().unwrap();
        assert_eq!(t, Threshold::near_three(6, true));
        let t: Threshold = "3.06".parse().unwrap();
        assert_eq!(
            t.value().to_rational().unwrap(),
            Rational::new(153.into(), 50.into())
        );
        let t: Threshold = "sqrt(12)".parse().unwrap();
        assert_eq!(t, Threshold::sqrt12());
        assert!("sqrt(2)".parse::<Threshold>().is_err());
        let x = parse_exact("6^-2").unwrap();
        assert_eq!(*x.constant(), Rational::new(1.into(), 36.into()));
        let x = parse_exact("-1/2+sqrt(5)/1").unwrap_err();
        assert!(matches!(x, Error::Parse(_)));
    }
}
