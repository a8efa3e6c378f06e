use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::exact_cf::biseq::BiSeq;
use crate::exact_cf::cf::Mobius;
use crate::exact_cf::surd::QuadSurd;
use crate::exact_cf::surd_sum::SurdSum;
use crate::word::Word;

/// [0; preperiod, overline(period)], or [a0; preperiod, overline(period)] when `int_part` is given.
pub fn periodic_cf_value(preperiod: &Word, period: &Word, int_part: Option<u32>) -> QuadSurd {
    assert!(!period.is_empty(), "empty period");
    let y = purely_periodic(period.digits());
    let x = Mobius::of_word(preperiod.digits()).apply_surd(&y);
    match int_part {
        Some(a0) => x.add_int(&BigInt::from(a0)),
        None => x,
    }
}

/// The fixed point y = [0; overline(p)] in (0, 1).
fn purely_periodic(p: &[u8]) -> QuadSurd {
    let m = Mobius::of_word(p);
    // c y² + (d − a) y − b = 0, positive root.
    let disc = (&m.a - &m.d) * (&m.a - &m.d) + BigInt::from(4) * &m.b * &m.c;
    QuadSurd::new(&m.a - &m.d, BigInt::one(), BigInt::from(2) * &m.c, disc)
}

/// Forward value [a_i; a_{i+1}, …].
pub fn forward_value(s: &BiSeq, i: i64) -> QuadSurd {
    let rs = s.right_start();
    let (pre, period) = if i >= rs {
        let n = s.right_period.len() as i64;
        (Vec::new(), s.window(i, i + n))
    } else {
        (s.window(i, rs), s.right_period.digits().to_vec())
    };
    let mut digits = pre;
    let a0 = if digits.is_empty() {
        let a0 = period[0];
        let mut rot = period[1..].to_vec();
        rot.push(period[0]);
        return periodic_cf_value(&Word::empty(), &Word::from_raw(rot), Some(a0 as u32));
    } else {
        digits.remove(0)
    };
    periodic_cf_value(
        &Word::from_raw(digits),
        &Word::from_raw(period),
        Some(a0 as u32),
    )
}

/// Backward value [0; a_{i-1}, a_{i-2}, …].
pub fn backward_value(s: &BiSeq, i: i64) -> QuadSurd {
    let le = s.left_end();
    let n = s.left_period.len() as i64;
    let (pre, period): (Vec<u8>, Vec<u8>) = if i <= le {
        (Vec::new(), (i - n..i).rev().map(|j| s.digit(j)).collect())
    } else {
        (
            (le..i).rev().map(|j| s.digit(j)).collect(),
            (le - n..le).rev().map(|j| s.digit(j)).collect(),
        )
    };
    periodic_cf_value(&Word::from_raw(pre), &Word::from_raw(period), None)
}

/// λ at position i: [a_i; a_{i+1}, …] + [0; a_{i-1}, a_{i-2}, …].
pub fn lambda_at(s: &BiSeq, i: i64) -> SurdSum {
    forward_value(s, i)
        .to_surd_sum()
        .add(&backward_value(s, i).to_surd_sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkovValue {
    #[serde(serialize_with = "surd_sum_string")]
    pub value: SurdSum,
    pub attained: bool,
    /// A position where the supremum is attained.
    pub witness: Option<i64>,
}

pub(crate) fn surd_sum_string<S: serde::Serializer>(x: &SurdSum, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// All λ-values on positions lo..hi, where lo ≤ left_end and hi ≥ right_start.
pub fn lambda_window(s: &BiSeq, lo: i64, hi: i64) -> Vec<SurdSum> {
    assert!(lo <= s.left_end() && hi >= s.right_start() && lo < hi);
    let len = (hi - lo) as usize;
    let mut fwd: Vec<QuadSurd> = Vec::with_capacity(len);
    // x_{hi-1} from the periodic part, then x_i = a_i + 1/x_{i+1}.
    let mut x = forward_value(s, hi - 1);
    fwd.push(x.clone());
    for i in (lo..hi - 1).rev() {
        x = x.recip().add_int(&BigInt::from(s.digit(i)));
        fwd.push(x.clone());
    }
    fwd.reverse();
    let mut out = Vec::with_capacity(len);
    let mut y = backward_value(s, lo);
    for (k, i) in (lo..hi).enumerate() {
        if k > 0 {
            y = y.add_int(&BigInt::from(s.digit(i - 1))).recip();
        }
        out.push(fwd[k].to_surd_sum().add(&y.to_surd_sum()));
    }
    out
}

/// Maximum of λ over one period of overline(p), with the phase attaining it.
pub fn periodic_max(p: &Word) -> (SurdSum, usize) {
    let s = BiSeq::periodic(p).expect("nonempty period");
    let vals = lambda_window(&s, 0, p.len() as i64);
    argmax(&vals)
        .map(|(k, v)| (v.clone(), k))
        .expect("nonempty")
}

fn argmax(vals: &[SurdSum]) -> Option<(usize, &SurdSum)> {
    let mut best: Option<(usize, &SurdSum)> = None;
    for (k, v) in vals.iter().enumerate() {
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((k, v)),
        }
    }
    best
}

/// The Markov value sup_i λ_i of an eventually periodic sequence.
///
/// Beyond two periods into either periodic region, λ at a fixed phase differs from its
/// periodic limit by a quantity of constant sign (even period) or alternating sign (odd
/// period) whose size strictly decreases, because the backward (resp. forward) tails agree
/// on an ever longer block and the block maps are contractions. So every far position is
/// bounded by a window position of the same phase and parity or by the periodic limit, and
/// the supremum is the larger of the window maximum and the two periodic maxima.
pub fn markov_value(s: &BiSeq) -> MarkovValue {
    let lo = s.left_end() - 2 * s.left_period.len() as i64;
    let hi = s.right_start() + 2 * s.right_period.len() as i64;
    let vals = lambda_window(s, lo, hi);
    let (k, wmax) = argmax(&vals).expect("nonempty window");
    let (ml, _) = periodic_max(&s.left_period);
    let (mr, _) = periodic_max(&s.right_period);
    let limit = if ml >= mr { ml } else { mr };
    if *wmax >= limit {
        MarkovValue {
            value: wmax.clone(),
            attained: true,
            witness: Some(lo + k as i64),
        }
    } else {
        MarkovValue {
            value: limit,
            attained: false,
            witness: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalTail {
    /// The periodic tail appended after the prefix.
    pub tail_period: Word,
    pub value: QuadSurd,
}

/// Extremal period following a prefix of the given length: digit positions alternate
/// between decreasing (odd) and increasing (even) influence on [0; …].
pub fn extremal_period(prefix_len: usize, dir: Direction) -> Word {
    let starts_odd = prefix_len.is_multiple_of(2);
    let small_first = match dir {
        Direction::Max => starts_odd,
        Direction::Min => !starts_odd,
    };
    if small_first {
        Word::from_raw(vec![1, 2])
    } else {
        Word::from_raw(vec![2, 1])
    }
}

/// sup (Max) or inf (Min) of [0; prefix, t_1, t_2, …] over all tails t ∈ {1,2}^ℕ.
pub fn extremal_tail(prefix: &Word, dir: Direction) -> ExtremalTail {
    let tail_period = extremal_period(prefix.len(), dir);
    let value = periodic_cf_value(prefix, &tail_period, None);
    ExtremalTail { tail_period, value }
}

/// √3 − 1 = [0; overline(1,2)], the largest tail value.
pub fn tail_max() -> QuadSurd {
    QuadSurd::new(
        -BigInt::one(),
        BigInt::one(),
        BigInt::one(),
        BigInt::from(3),
    )
}

/// (√3 − 1)/2 = [0; overline(2,1)], the smallest tail value.
pub fn tail_min() -> QuadSurd {
    QuadSurd::new(
        -BigInt::one(),
        BigInt::one(),
        BigInt::from(2),
        BigInt::from(3),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_cf::cf::Rational;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn sq(n: i64) -> SurdSum {
        SurdSum::from_surd(&QuadSurd::sqrt_int(n))
    }

    #[test]
    fn periodic_values() {
        let golden = periodic_cf_value(&Word::empty(), &w("1"), None);
        assert_eq!(golden.to_string(), "(-1+1√5)/2");
        let silver = periodic_cf_value(&Word::empty(), &w("2"), None);
        assert_eq!(silver.to_string(), "(-1+1√2)/1");
        let pell = periodic_cf_value(&Word::empty(), &w("2"), Some(2));
        assert_eq!(pell.to_string(), "(1+1√2)/1");
    }

    #[test]
    fn lambda_on_constant_sequences() {
        let s2 = BiSeq::periodic(&w("2")).unwrap();
        let s1 = BiSeq::periodic(&w("1")).unwrap();
        for i in -3..3 {
            assert_eq!(lambda_at(&s2, i), sq(8));
            assert_eq!(lambda_at(&s1, i), sq(5));
        }
    }

    #[test]
    fn lambda_across_a_junction() {
        let s = BiSeq::with_middle(&w("1"), &Word::empty(), &w("2")).unwrap();
        let expect = SurdSum::from_rational(Rational::new(1.into(), 2.into()))
            .add(&SurdSum::radical(
                Rational::new(1.into(), 2.into()),
                5.into(),
            ))
            .add(&sq(2));
        assert_eq!(lambda_at(&s, 0), expect);
    }

    #[test]
    fn markov_values_of_periodic_words() {
        let m = markov_value(&BiSeq::periodic(&w("2211")).unwrap());
        assert!(m.attained);
        assert_eq!(m.value.pretty(), "√221/5");
        let m = markov_value(&BiSeq::periodic(&w("1")).unwrap());
        assert_eq!(m.value, sq(5));
        let m = markov_value(&BiSeq::periodic(&w("22")).unwrap());
        assert_eq!(m.value, sq(8));
    }

    #[test]
    fn markov_value_across_a_junction() {
        let s = BiSeq::with_middle(&w("1"), &Word::empty(), &w("2")).unwrap();
        let m = markov_value(&s);
        assert!(m.attained);
        assert_eq!(m.witness, Some(0));
        assert_eq!(m.value, lambda_at(&s, 0));
    }

    #[test]
    fn window_matches_pointwise() {
        let s = BiSeq::new(w("12"), w("221"), w("1"), w("211")).unwrap();
        let vals = lambda_window(&s, -7, 8);
        for (k, v) in vals.iter().enumerate() {
            assert_eq!(*v, lambda_at(&s, -7 + k as i64));
        }
    }

    #[test]
    fn unattained_supremum() {
        // …1111 2 2222…: λ approaches √8 from below on the right, is near √5 on the left.
        // Position of the single 1 before the 2s is below √8; the sup √8 is a limit.
        let s = BiSeq::with_middle(&w("1"), &w("1"), &w("2")).unwrap();
        let m = markov_value(&s);
        let direct = lambda_window(&s, -10, 30);
        let wmax = direct.iter().max().unwrap();
        if *wmax < sq(8) {
            assert!(!m.attained);
            assert_eq!(m.value, sq(8));
        } else {
            assert!(m.attained);
        }
    }

    #[test]
    fn extremal_tails() {
        let t = extremal_tail(&Word::empty(), Direction::Max);
        assert_eq!(t.tail_period, w("12"));
        assert_eq!(t.value, tail_max());
        let t = extremal_tail(&Word::empty(), Direction::Min);
        assert_eq!(t.tail_period, w("21"));
        assert_eq!(t.value, tail_min());
        let t = extremal_tail(&w("2"), Direction::Max);
        let expect = tail_min().add_int(&BigInt::from(2)).recip();
        assert_eq!(t.value, expect);
    }
}
