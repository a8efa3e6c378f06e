use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_cf::surd::QuadSurd;
use crate::word::Word;

pub type Rational = BigRational;

/// Integer Möbius map z ↦ (a z + b)/(c z + d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mobius {
    pub fn identity() -> Self {
        Mobius {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// z ↦ 1/(digit + z), the map of one partial quotient.
    pub fn digit(digit: u8) -> Self {
        Mobius {
            a: BigInt::zero(),
            b: BigInt::one(),
            c: BigInt::one(),
            d: BigInt::from(digit),
        }
    }

    /// The map z ↦ [0; w_1, …, w_k + z].
    pub fn of_word(w: &[u8]) -> Self {
        let mut m = Mobius::identity();
        for &x in w {
            m.push_digit(x);
        }
        m
    }

    /// Right-multiplies by the map of `digit`, i.e. appends it to the word.
    pub fn push_digit(&mut self, digit: u8) {
        let dg = BigInt::from(digit);
        let a = self.b.clone();
        let c = self.d.clone();
        let b = &self.a + &self.b * &dg;
        let d = &self.c + &self.d * &dg;
        *self = Mobius { a, b, c, d };
    }

    /// Left-multiplies by the map of `digit`, i.e. prepends it to the word.
    pub fn prepend_digit(&mut self, digit: u8) {
        let dg = BigInt::from(digit);
        let a = self.c.clone();
        let b = self.d.clone();
        let c = &self.a + &self.c * &dg;
        let d = &self.b + &self.d * &dg;
        *self = Mobius { a, b, c, d };
    }

    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply_rational(&self, z: &Rational) -> Rational {
        let num = &self.a * z.numer() + &self.b * z.denom();
        let den = &self.c * z.numer() + &self.d * z.denom();
        Rational::new(num, den)
    }

    pub fn apply_surd(&self, z: &QuadSurd) -> QuadSurd {
        let num = z.mul_int(&self.a).add_int(&self.b);
        let den = z.mul_int(&self.c).add_int(&self.d);
        num.div(&den)
    }

    /// Whether the map is increasing on [0, ∞).
    pub fn is_increasing(&self) -> bool {
        self.det().is_positive()
    }
}

/// [0; a_1, …, a_k] as an exact rational.
pub fn eval_cf(w: &Word) -> Result<Rational> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let m = Mobius::of_word(w.digits());
    Ok(Rational::new(m.b, m.d))
}

/// Continuants (q_k, q_{k-1}) of a word, by the three-term recurrence.
pub fn continuants(w: &[u8]) -> (BigInt, BigInt) {
    let mut q_prev = BigInt::zero();
    let mut q = BigInt::one();
    for &d in w {
        let next = &q * d + &q_prev;
        q_prev = std::mem::replace(&mut q, next);
    }
    (q, q_prev)
}

/// The closed interval of numbers in [0, 1] whose continued fraction starts with `word`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    pub word: Word,
    #[serde(with = "rational_str")]
    pub lo: Rational,
    #[serde(with = "rational_str")]
    pub hi: Rational,
    #[serde(with = "rational_str")]
    pub length: Rational,
}

/// Serde adapter writing rationals as "p/q" strings.
pub mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn cylinder(w: &Word) -> Result<Cylinder> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let m = Mobius::of_word(w.digits());
    let x0 = Rational::new(m.b.clone(), m.d.clone());
    let x1 = Rational::new(&m.a + &m.b, &m.c + &m.d);
    let (lo, hi) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
    let length = &hi - &lo;
    Ok(Cylinder {
        word: w.clone(),
        lo,
        hi,
        length,
    })
}

/// 1/|I(w)| = q_k (q_k + q_{k-1}) as an integer.
pub fn inverse_cylinder_length(w: &[u8]) -> BigInt {
    let (q, q1) = continuants(w);
    &q * (&q + &q1)
}

/// r(w) = ⌊ln(1/|I(w)|)⌋, decided exactly against rational brackets of e.
pub fn r_exponent(w: &Word) -> Result<u64> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(floor_ln(&inverse_cylinder_length(w.digits())))
}

/// ⌊ln n⌋ for an integer n ≥ 1.
pub fn floor_ln(n: &BigInt) -> u64 {
    assert!(n.is_positive());
    let est = ln_bigint(n).floor().max(0.0) as u64;
    let mut r = est.saturating_sub(1);
    // Smallest r with e^{r+1} > n, starting just below the estimate.
    while exp_cmp(r + 1, n) != std::cmp::Ordering::Greater {
        r += 1;
    }
    while r > 0 && exp_cmp(r, n) == std::cmp::Ordering::Greater {
        r -= 1;
    }
    r
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        let shift = bits.saturating_sub(60);
        let top: BigInt = n >> shift;
        let top: f64 = top.to_string().parse().unwrap_or(1.0);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    } else {
        bits as f64 * std::f64::consts::LN_2
    }
}

/// Compares e^k with the integer n, exactly.
pub fn exp_cmp(k: u64, n: &BigInt) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if k == 0 {
        return BigInt::one().cmp(n);
    }
    let n = Rational::from_integer(n.clone());
    let mut terms = 24usize;
    loop {
        let (lo, hi) = e_bracket(terms);
        let lo_k = num_traits::pow(lo, k as usize);
        if lo_k > n {
            return Ordering::Greater;
        }
        let hi_k = num_traits::pow(hi, k as usize);
        if hi_k < n {
            return Ordering::Less;
        }
        terms *= 2;
    }
}

/// Rational bracket [lo, hi] of e from the partial sum of Σ 1/j! with `terms` terms.
pub fn e_bracket(terms: usize) -> (Rational, Rational) {
    let mut sum = Rational::zero();
    let mut fact = BigInt::one();
    for j in 0..terms {
        if j > 0 {
            fact *= j;
        }
        sum += Rational::new(BigInt::one(), fact.clone());
    }
    // The tail Σ_{j ≥ terms} 1/j! is below 2/terms!.
    let tail = Rational::new(BigInt::from(2), fact * terms);
    let hi = &sum + tail;
    (sum, hi)
}

pub(crate) fn rational_to_f64(x: &Rational) -> f64 {
    let (n, d) = (x.numer(), x.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(900) as usize;
    let n: BigInt = n >> shift;
    let d: BigInt = d >> shift;
    let nf: f64 = n.to_string().parse().unwrap_or(0.0);
    let df: f64 = d.to_string().parse().unwrap_or(1.0);
    nf / df
}

/// Fixed-point decimal rendering of a rational to `digits` places, truncated toward zero.
pub fn rational_to_decimal(x: &Rational, digits: usize) -> String {
    let neg = x.is_negative();
    let x = x.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (x.numer() * &scale).div_floor(x.denom());
    let (int, frac) = scaled.div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        let f = frac.to_string();
        s.push('.');
        s.push_str(&"0".repeat(digits - f.len()));
        s.push_str(&f);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn eval_small_words() {
        assert_eq!(eval_cf(&w("2")).unwrap(), q(1, 2));
        assert_eq!(eval_cf(&w("11")).unwrap(), q(1, 2));
        assert_eq!(eval_cf(&w("22")).unwrap(), q(2, 5));
        assert!(eval_cf(&Word::empty()).is_err());
    }

    #[test]
    fn cylinder_endpoints() {
        let c = cylinder(&w("1")).unwrap();
        assert_eq!((c.lo, c.hi, c.length), (q(1, 2), q(1, 1), q(1, 2)));
        let c = cylinder(&w("11")).unwrap();
        assert_eq!((c.lo, c.hi, c.length), (q(1, 2), q(2, 3), q(1, 6)));
        let c = cylinder(&w("22")).unwrap();
        assert_eq!((c.lo, c.hi, c.length), (q(2, 5), q(3, 7), q(1, 35)));
    }

    #[test]
    fn r_exponent_small() {
        assert_eq!(r_exponent(&w("11")).unwrap(), 1);
        assert_eq!(r_exponent(&w("1")).unwrap(), 0);
        // 1/|I(22)| = 35 and e^3 < 35 < e^4.
        assert_eq!(r_exponent(&w("22")).unwrap(), 3);
    }

    #[test]
    fn floor_ln_near_powers_of_e() {
        // e^10 ≈ 22026.47 and e^20 ≈ 485165195.4
        assert_eq!(floor_ln(&BigInt::from(22026)), 9);
        assert_eq!(floor_ln(&BigInt::from(22027)), 10);
        assert_eq!(floor_ln(&BigInt::from(485165195)), 19);
        assert_eq!(floor_ln(&BigInt::from(485165196)), 20);
        assert_eq!(floor_ln(&BigInt::one()), 0);
    }

    #[test]
    fn mobius_prepend_matches_push() {
        let digits = [2u8, 1, 1, 2, 2, 1];
        let mut m = Mobius::identity();
        for &d in digits.iter().rev() {
            m.prepend_digit(d);
        }
        assert_eq!(m, Mobius::of_word(&digits));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_to_decimal(&q(1, 3), 4), "0.3333");
        assert_eq!(rational_to_decimal(&q(-7, 2), 2), "-3.50");
    }
}
