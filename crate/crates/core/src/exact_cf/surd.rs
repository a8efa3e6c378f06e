use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_cf::cf::Rational;
use crate::exact_cf::surd_sum::SurdSum;

/// Trial-division bound used when extracting square factors from a radicand.
const SQUARE_FACTOR_BOUND: u32 = 10_000;

/// The exact quadratic surd (p + q√D)/r.
///
/// Canonical form: r > 0, gcd(p, q, r) = 1, q = 0 ⇔ D = 0, and D carries no square
/// factor below the trial-division bound (nor is D itself a perfect square).
/// Equality and ordering are decided by exact sign computation.
#[derive(Clone)]
pub struct QuadSurd {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: BigInt,
}

/// Splits n ≥ 0 as s²·k with k free of small square factors; returns (s, k).
pub fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_negative());
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let mut k = n.clone();
    let mut s = BigInt::one();
    let root = k.sqrt();
    if &root * &root == k {
        return (root, BigInt::one());
    }
    let mut f = 2u32;
    while f <= SQUARE_FACTOR_BOUND {
        let ff = BigInt::from(f) * f;
        if ff > k {
            break;
        }
        while (&k % &ff).is_zero() {
            k /= &ff;
            s *= f;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    let root = k.sqrt();
    if &root * &root == k {
        s *= &root;
        k = BigInt::one();
    }
    (s, k)
}

impl QuadSurd {
    /// (p + q√D)/r, normalized. Panics if r = 0 or D < 0.
    pub fn new(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Self {
        assert!(!r.is_zero(), "zero denominator");
        assert!(!d.is_negative(), "negative radicand");
        let (s, k) = square_split(&d);
        let q = q * s;
        if k.is_one() || k.is_zero() {
            return Self::normalized(p + q * &k, BigInt::zero(), r, BigInt::zero());
        }
        Self::normalized(p, q, r, k)
    }

    fn normalized(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Self {
        let (mut p, mut q, mut r, mut d) = (p, q, r, d);
        if q.is_zero() {
            d = BigInt::zero();
        }
        if d.is_zero() {
            q = BigInt::zero();
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        QuadSurd { p, q, r, d }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        QuadSurd {
            p: n.into(),
            q: BigInt::zero(),
            r: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn from_rational(x: &Rational) -> Self {
        Self::normalized(
            x.numer().clone(),
            BigInt::zero(),
            x.denom().clone(),
            BigInt::zero(),
        )
    }

    /// √n for an integer n ≥ 0.
    pub fn sqrt_int<T: Into<BigInt>>(n: T) -> Self {
        QuadSurd::new(BigInt::zero(), BigInt::one(), BigInt::one(), n.into())
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| Rational::new(self.p.clone(), self.r.clone()))
    }

    /// Rational part p/r.
    pub fn rational_part(&self) -> Rational {
        Rational::new(self.p.clone(), self.r.clone())
    }

    /// Coefficient q/r of √D.
    pub fn radical_coefficient(&self) -> Rational {
        Rational::new(self.q.clone(), self.r.clone())
    }

    fn common_radicand(&self, other: &QuadSurd) -> BigInt {
        match (self.d.is_zero(), other.d.is_zero()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "surds over different radicands");
                self.d.clone()
            }
        }
    }

    pub fn add(&self, o: &QuadSurd) -> QuadSurd {
        let d = self.common_radicand(o);
        Self::normalized(
            &self.p * &o.r + &o.p * &self.r,
            &self.q * &o.r + &o.q * &self.r,
            &self.r * &o.r,
            d,
        )
    }

    pub fn sub(&self, o: &QuadSurd) -> QuadSurd {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> QuadSurd {
        QuadSurd {
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    pub fn mul(&self, o: &QuadSurd) -> QuadSurd {
        let d = self.common_radicand(o);
        Self::normalized(
            &self.p * &o.p + &self.q * &o.q * &d,
            &self.p * &o.q + &self.q * &o.p,
            &self.r * &o.r,
            d,
        )
    }

    pub fn recip(&self) -> QuadSurd {
        // r/(p + q√D) = r(p − q√D)/(p² − q²D)
        let norm = &self.p * &self.p - &self.q * &self.q * &self.d;
        assert!(!norm.is_zero(), "division by zero surd");
        Self::normalized(
            &self.r * &self.p,
            -(&self.r * &self.q),
            norm,
            self.d.clone(),
        )
    }

    pub fn div(&self, o: &QuadSurd) -> QuadSurd {
        self.mul(&o.recip())
    }

    pub fn add_int(&self, n: &BigInt) -> QuadSurd {
        Self::normalized(
            &self.p + n * &self.r,
            self.q.clone(),
            self.r.clone(),
            self.d.clone(),
        )
    }

    pub fn mul_int(&self, n: &BigInt) -> QuadSurd {
        Self::normalized(&self.p * n, &self.q * n, self.r.clone(), self.d.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        sign_linear(&self.p, &self.q, &self.d)
    }

    /// Galois conjugate (p − q√D)/r.
    pub fn conjugate(&self) -> QuadSurd {
        QuadSurd {
            p: self.p.clone(),
            q: -&self.q,
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    pub fn to_surd_sum(&self) -> SurdSum {
        SurdSum::from_surd(self)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_surd_sum().to_f64()
    }

    /// Human-oriented rendering such as `√221/5` or `(-1+√5)/2`.
    pub fn pretty(&self) -> String {
        if self.q.is_zero() {
            return if self.r.is_one() {
                self.p.to_string()
            } else {
                format!("{}/{}", self.p, self.r)
            };
        }
        let rad = if self.q.abs().is_one() {
            format!("√{}", self.d)
        } else {
            format!("{}√{}", self.q.abs(), self.d)
        };
        let num = if self.p.is_zero() {
            if self.q.is_negative() {
                format!("-{rad}")
            } else {
                rad
            }
        } else {
            let op = if self.q.is_negative() { '-' } else { '+' };
            format!("{}{}{}", self.p, op, rad)
        };
        match (self.r.is_one(), self.p.is_zero()) {
            (true, _) => num,
            (false, true) => format!("{}/{}", num, self.r),
            (false, false) => format!("({})/{}", num, self.r),
        }
    }
}

/// Sign of p + q√d with d ≥ 0.
pub(crate) fn sign_linear(p: &BigInt, q: &BigInt, d: &BigInt) -> Ordering {
    let sp = p.sign();
    let sq = if d.is_zero() { Sign::NoSign } else { q.sign() };
    match (sp, sq) {
        (Sign::NoSign, Sign::NoSign) => Ordering::Equal,
        (s, Sign::NoSign) | (Sign::NoSign, s) => sign_to_ord(s),
        (a, b) if a == b => sign_to_ord(a),
        (a, _) => {
            let lhs = p * p;
            let rhs = q * q * d;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sign_to_ord(a),
                Ordering::Less => sign_to_ord(a).reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

fn sign_to_ord(s: Sign) -> Ordering {
    match s {
        Sign::Plus => Ordering::Greater,
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
    }
}

impl PartialEq for QuadSurd {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QuadSurd {}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.d == other.d || self.d.is_zero() || other.d.is_zero() {
            self.sub(other).signum()
        } else {
            self.to_surd_sum().cmp(&other.to_surd_sum())
        }
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.q.is_negative() { '-' } else { '+' };
        write!(
            f,
            "({}{}{}√{})/{}",
            self.p,
            op,
            self.q.abs(),
            self.d,
            self.r
        )
    }
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for QuadSurd {
    type Err = Error;

    /// Parses the canonical form `(p+q√D)/r` (also accepting `sqrt` for `√`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a surd literal: {s:?}"));
        let s = s.trim().replace("sqrt", "√");
        let (num, den) = s.rsplit_once(")/").ok_or_else(bad)?;
        let num = num.strip_prefix('(').ok_or_else(bad)?;
        let r: BigInt = den.trim().parse().map_err(|_| bad())?;
        let (head, d) = num.split_once('√').ok_or_else(bad)?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(bad)?;
        let p: BigInt = head[..split].trim().parse().map_err(|_| bad())?;
        let q_str = head[split..].trim().trim_start_matches('+');
        let q: BigInt = q_str.parse().map_err(|_| bad())?;
        if r.is_zero() || d.is_negative() {
            return Err(bad());
        }
        Ok(QuadSurd::new(p, q, r, d))
    }
}
