use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact_cf::cf::{rational_to_decimal, rational_to_f64, Rational};
use crate::exact_cf::surd::QuadSurd;

/// A rational combination c0 + Σ c_i √D_i of square roots.
///
/// Terms are kept merged: no two radicands have a perfect-square product, no radicand is a
/// perfect square and no coefficient is zero. Under that invariant the value is zero exactly
/// when every coefficient is zero, and the sign is decided exactly.
#[derive(Clone)]
pub struct SurdSum {
    c0: Rational,
    terms: Vec<(Rational, BigInt)>,
}

fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum {
            c0: Rational::zero(),
            terms: Vec::new(),
        }
    }

    pub fn from_rational(c0: Rational) -> Self {
        SurdSum {
            c0,
            terms: Vec::new(),
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_surd(x: &QuadSurd) -> Self {
        let mut s = Self::from_rational(x.rational_part());
        if !x.is_rational() {
            s.add_term(x.radical_coefficient(), x.radicand().clone());
        }
        s
    }

    /// c·√d, with d ≥ 0.
    pub fn radical(c: Rational, d: BigInt) -> Self {
        let mut s = Self::zero();
        s.add_term(c, d);
        s
    }

    pub fn constant(&self) -> &Rational {
        &self.c0
    }

    pub fn terms(&self) -> &[(Rational, BigInt)] {
        &self.terms
    }

    fn add_term(&mut self, c: Rational, d: BigInt) {
        if c.is_zero() || d.is_zero() {
            return;
        }
        if let Some(root) = is_square(&d) {
            self.c0 += c * Rational::from_integer(root);
            return;
        }
        for i in 0..self.terms.len() {
            let (ci, di) = &self.terms[i];
            if let Some(s) = is_square(&(di * &d)) {
                // √d = (s/d_i)·√d_i
                let merged = ci + c * Rational::new(s, di.clone());
                if merged.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].0 = merged;
                }
                return;
            }
        }
        self.terms.push((c, d));
    }

    pub fn add(&self, o: &SurdSum) -> SurdSum {
        let mut s = self.clone();
        s.c0 += &o.c0;
        for (c, d) in &o.terms {
            s.add_term(c.clone(), d.clone());
        }
        s
    }

    pub fn neg(&self) -> SurdSum {
        SurdSum {
            c0: -&self.c0,
            terms: self.terms.iter().map(|(c, d)| (-c, d.clone())).collect(),
        }
    }

    pub fn sub(&self, o: &SurdSum) -> SurdSum {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rational) -> SurdSum {
        if k.is_zero() {
            return SurdSum::zero();
        }
        SurdSum {
            c0: &self.c0 * k,
            terms: self.terms.iter().map(|(c, d)| (c * k, d.clone())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a single surd, when at most one radical is present.
    pub fn to_surd(&self) -> Option<QuadSurd> {
        match self.terms.as_slice() {
            [] => Some(QuadSurd::from_rational(&self.c0)),
            [(c, d)] => {
                let r = self.c0.denom() * c.denom();
                let p = self.c0.numer() * c.denom();
                let q = c.numer() * self.c0.denom();
                Some(QuadSurd::new(p, q, r, d.clone()))
            }
            _ => None,
        }
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> Ordering {
        match self.terms.len() {
            0 => self.c0.cmp(&Rational::zero()),
            1 => {
                let (c, d) = &self.terms[0];
                sign_one(&self.c0, c, d)
            }
            2 => {
                let (c1, d1) = &self.terms[0];
                let (c2, d2) = &self.terms[1];
                sign_two(&self.c0, c1, d1, c2, d2)
            }
            _ => self.sign_by_refinement(),
        }
    }

    /// Rational bounds lo ≤ value ≤ hi with radicals bracketed to 2^-bits.
    pub fn bounds(&self, bits: u64) -> (Rational, Rational) {
        let scale = BigInt::one() << bits;
        let mut lo = self.c0.clone();
        let mut hi = self.c0.clone();
        for (c, d) in &self.terms {
            let s = (d * &scale * &scale).sqrt();
            let r_lo = Rational::new(s.clone(), scale.clone());
            let r_hi = Rational::new(s + 1, scale.clone());
            if c.is_positive() {
                lo += c * &r_lo;
                hi += c * &r_hi;
            } else {
                lo += c * &r_hi;
                hi += c * &r_lo;
            }
        }
        (lo, hi)
    }

    fn sign_by_refinement(&self) -> Ordering {
        // Nonzero by linear independence of the merged radicals, so refinement terminates.
        let mut bits = 64;
        loop {
            let (lo, hi) = self.bounds(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, _) = self.bounds(80);
        rational_to_f64(&lo)
    }

    /// Decimal rendering truncated to `digits` places, with an error below 10^-digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let bits = (digits as f64 * 3.33) as u64 + 16;
        let (lo, _) = self.bounds(bits);
        rational_to_decimal(&lo, digits)
    }

    /// Human-oriented rendering: a single surd uses the compact surd form.
    pub fn pretty(&self) -> String {
        match self.to_surd() {
            Some(s) => s.pretty(),
            None => self.to_string(),
        }
    }
}

/// Sign of c0 + c1√d1 for rationals c0, c1.
fn sign_one(c0: &Rational, c1: &Rational, d1: &BigInt) -> Ordering {
    let sa = c0.cmp(&Rational::zero());
    let sb = c1.cmp(&Rational::zero());
    if sa == Ordering::Equal {
        return sb;
    }
    if sb == Ordering::Equal || sa == sb {
        return sa;
    }
    let lhs = c0 * c0;
    let rhs = c1 * c1 * Rational::from_integer(d1.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Sign of (c0 + c1√d1) + c2√d2, resolved by isolating the second radical and squaring.
fn sign_two(c0: &Rational, c1: &Rational, d1: &BigInt, c2: &Rational, d2: &BigInt) -> Ordering {
    let sp = sign_one(c0, c1, d1);
    let sq = c2.cmp(&Rational::zero());
    if sp == Ordering::Equal {
        return sq;
    }
    if sq == Ordering::Equal || sp == sq {
        return sp;
    }
    // Compare P² = c0² + c1²d1 + 2c0c1√d1 against Q² = c2²d2.
    let d1r = Rational::from_integer(d1.clone());
    let d2r = Rational::from_integer(d2.clone());
    let a = c0 * c0 + c1 * c1 * &d1r - c2 * c2 * &d2r;
    let b = Rational::from_integer(BigInt::from(2)) * c0 * c1;
    match sign_one(&a, &b, d1) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => Ordering::Equal,
    }
}

impl PartialEq for SurdSum {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for SurdSum {}

impl PartialOrd for SurdSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SurdSum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).signum()
    }
}

impl From<QuadSurd> for SurdSum {
    fn from(x: QuadSurd) -> Self {
        SurdSum::from_surd(&x)
    }
}

impl From<&QuadSurd> for SurdSum {
    fn from(x: &QuadSurd) -> Self {
        SurdSum::from_surd(x)
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.c0)?;
        let mut terms: Vec<&(Rational, BigInt)> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        for (c, d) in terms {
            let sign = if c.is_negative() { '-' } else { '+' };
            let num = c.numer().abs();
            let coef = if num.is_one() {
                String::new()
            } else {
                num.to_string()
            };
            write!(f, " {sign} {coef}√{d}")?;
            if !c.denom().is_one() {
                write!(f, "/{}", c.denom())?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn rad(n: i64, d: i64, r: i64) -> SurdSum {
        SurdSum::radical(q(n, d), r.into())
    }

    #[test]
    fn merges_dependent_radicals() {
        // √8 − 2√2 = 0
        let x = rad(1, 1, 8).sub(&rad(2, 1, 2));
        assert!(x.is_zero());
        let y = rad(1, 1, 12).add(&rad(1, 1, 3));
        assert_eq!(y.terms().len(), 1);
    }

    #[test]
    fn two_radical_signs() {
        // √2 + √3 vs √10: 5 + 2√6 < 10 since √6 < 2.5
        let x = rad(1, 1, 2).add(&rad(1, 1, 3)).sub(&rad(1, 1, 10));
        assert_eq!(x.signum(), Ordering::Less);
        // (√5−1)/2 + 1 + √2 > 3
        let lam = SurdSum::from_rational(q(1, 2))
            .add(&rad(1, 2, 5))
            .add(&rad(1, 1, 2));
        assert_eq!(lam.cmp(&SurdSum::from_int(3)), Ordering::Greater);
        assert_eq!(lam.to_decimal(4), "3.0322");
    }

    #[test]
    fn three_radicals_by_refinement() {
        let x = rad(1, 1, 2)
            .add(&rad(1, 1, 3))
            .add(&rad(1, 1, 5))
            .sub(&SurdSum::from_rational(q(53, 10)));
        // √2 + √3 + √5 ≈ 5.3823
        assert_eq!(x.signum(), Ordering::Greater);
    }

    #[test]
    fn round_trips_through_surd() {
        let s = QuadSurd::new(0.into(), 1.into(), 5.into(), 221.into());
        let ss = SurdSum::from_surd(&s);
        assert_eq!(ss.to_surd().unwrap(), s);
        assert_eq!(ss.pretty(), "√221/5");
        assert_eq!(ss.to_string(), "0 + √221/5");
    }
}
