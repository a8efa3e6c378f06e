//! Extremal λ-bounds for finite words.
//!
//! For a finite word u and a position j, λ_j over all bi-infinite {1,2}-extensions of u
//! ranges over u_j + M(T) + N(T′), where M and N are the Möbius maps of the digits right
//! of j and of the reversed digits left of j, and T, T′ range over the tails
//! [(√3−1)/2, √3−1]. Both ends are attained, so the bounds are exact values in Q(√3).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::exact_cf::cf::Mobius;
use crate::exact_cf::surd::sign_linear;
use crate::exact_cf::QuadSurd;
use crate::lang::threshold::Threshold;

const TAIL_MIN: f64 = 0.366_025_403_784_438_6;
const TAIL_MAX: f64 = 0.732_050_807_568_877_2;

/// Margin used by the floating screen; far larger than its rounding error.
pub(crate) const SCREEN_MARGIN: f64 = 1e-9;

/// (p + q√3)/r with r > 0, not reduced.
#[derive(Clone, Debug)]
pub(crate) struct Q3 {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
}

impl Q3 {
    fn int(n: u8) -> Q3 {
        Q3 {
            p: BigInt::from(n),
            q: BigInt::from(0),
            r: BigInt::from(1),
        }
    }

    fn add(&self, o: &Q3) -> Q3 {
        Q3 {
            p: &self.p * &o.r + &o.p * &self.r,
            q: &self.q * &o.r + &o.q * &self.r,
            r: &self.r * &o.r,
        }
    }

    pub fn to_surd(&self) -> QuadSurd {
        QuadSurd::new(
            self.p.clone(),
            self.q.clone(),
            self.r.clone(),
            BigInt::from(3),
        )
    }

    /// Exact comparison with a threshold.
    pub fn cmp_threshold(&self, t: &Threshold) -> Ordering {
        let (tp, tq, tr) = t.q3_parts();
        let x = &self.p * &tr - &tp * &self.r;
        let y = &self.q * &tr - &tq * &self.r;
        sign_linear(&x, &y, &BigInt::from(3))
    }
}

/// M((√3−1)/k) for k ∈ {1, 2}: k = 1 is the largest tail, k = 2 the smallest.
fn at_tail(m: &Mobius, k: i64) -> Q3 {
    let k = BigInt::from(k);
    let aa = &m.b * &k - &m.a;
    let cc = &m.d * &k - &m.c;
    let three = BigInt::from(3);
    let mut p = &aa * &cc - &three * &m.a * &m.c;
    let mut q = k * m.det();
    let mut r = &cc * &cc - three * &m.c * &m.c;
    if r.is_negative() {
        p = -p;
        q = -q;
        r = -r;
    }
    Q3 { p, q, r }
}

fn side_range(m: &Mobius) -> (Q3, Q3) {
    let lo_k = if m.is_increasing() { 2 } else { 1 };
    (at_tail(m, lo_k), at_tail(m, 3 - lo_k))
}

/// The maps of the digits right of j and of the reversed digits left of j.
pub(crate) fn side_maps(u: &[u8], j: usize) -> (Mobius, Mobius) {
    let fwd = Mobius::of_word(&u[j + 1..]);
    let mut back = Mobius::identity();
    for &d in u[..j].iter().rev() {
        back.push_digit(d);
    }
    (fwd, back)
}

/// Exact (inf, sup) of λ_j over all extensions of u.
pub(crate) fn lambda_range(u: &[u8], j: usize) -> (Q3, Q3) {
    let (fwd, back) = side_maps(u, j);
    let (f_lo, f_hi) = side_range(&fwd);
    let (b_lo, b_hi) = side_range(&back);
    let a = Q3::int(u[j]);
    (a.add(&f_lo).add(&b_lo), a.add(&f_hi).add(&b_hi))
}

pub(crate) fn lambda_inf(u: &[u8], j: usize) -> Q3 {
    let (fwd, back) = side_maps(u, j);
    let lo = |m: &Mobius| at_tail(m, if m.is_increasing() { 2 } else { 1 });
    Q3::int(u[j]).add(&lo(&fwd)).add(&lo(&back))
}

pub(crate) fn lambda_sup(u: &[u8], j: usize) -> Q3 {
    let (fwd, back) = side_maps(u, j);
    let hi = |m: &Mobius| at_tail(m, if m.is_increasing() { 1 } else { 2 });
    Q3::int(u[j]).add(&hi(&fwd)).add(&hi(&back))
}

/// Floating approximations of the forward and backward ranges at every position.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Approx {
    pub f_lo: f64,
    pub f_hi: f64,
    pub b_lo: f64,
    pub b_hi: f64,
}

impl Approx {
    pub fn lo(&self) -> f64 {
        self.f_lo + self.b_lo
    }

    pub fn hi(&self) -> f64 {
        self.f_hi + self.b_hi
    }
}

pub(crate) fn approx_ranges(u: &[u8]) -> Vec<Approx> {
    let k = u.len();
    let mut out = vec![
        Approx {
            f_lo: 0.0,
            f_hi: 0.0,
            b_lo: 0.0,
            b_hi: 0.0,
        };
        k
    ];
    let (mut lo, mut hi) = (TAIL_MIN, TAIL_MAX);
    for j in (0..k).rev() {
        let d = u[j] as f64;
        if j == k - 1 {
            lo = d + TAIL_MIN;
            hi = d + TAIL_MAX;
        } else {
            let (l, h) = (d + 1.0 / hi, d + 1.0 / lo);
            lo = l;
            hi = h;
        }
        out[j].f_lo = lo;
        out[j].f_hi = hi;
    }
    let (mut lo, mut hi) = (TAIL_MIN, TAIL_MAX);
    for j in 0..k {
        if j > 0 {
            let d = u[j - 1] as f64;
            let (l, h) = (1.0 / (d + hi), 1.0 / (d + lo));
            lo = l;
            hi = h;
        }
        out[j].b_lo = lo;
        out[j].b_hi = hi;
    }
    out
}

/// A position whose λ exceeds t under every extension of u, if one exists.
///
/// Floating ranges only choose which positions get the exact test.
pub(crate) fn find_dead(u: &[u8], t: &Threshold, t_f: f64) -> Option<usize> {
    if u.is_empty() {
        return None;
    }
    let approx = approx_ranges(u);
    let mut cands: Vec<(f64, usize)> = approx
        .iter()
        .enumerate()
        .filter(|(_, a)| a.lo() > t_f - SCREEN_MARGIN)
        .map(|(j, a)| (a.lo(), j))
        .collect();
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    cands
        .into_iter()
        .map(|(_, j)| j)
        .find(|&j| lambda_inf(u, j).cmp_threshold(t) == Ordering::Greater)
}

/// Whether every position of u stays at most t under every extension.
pub(crate) fn all_settled(u: &[u8], t: &Threshold) -> bool {
    (0..u.len()).all(|j| lambda_sup(u, j).cmp_threshold(t) != Ordering::Greater)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_cf::markov::{tail_max, tail_min};
    use crate::exact_cf::{lambda_at, BiSeq, SurdSum};
    use crate::word::Word;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn tail_values() {
        let id = Mobius::identity();
        assert_eq!(at_tail(&id, 1).to_surd(), tail_max());
        assert_eq!(at_tail(&id, 2).to_surd(), tail_min());
    }

    #[test]
    fn ranges_are_attained_by_extremal_extensions() {
        // The extremal extensions of u at position j are periodic sequences, so λ_j on them
        // must equal the range ends.
        let u = w("2211212");
        for j in 0..u.len() {
            let (lo, hi) = lambda_range(u.digits(), j);
            let right_after = u.len() - j - 1;
            for (val, dir_max) in [(lo, false), (hi, true)] {
                // Right tail: maximize F ⇔ tail_max if even digits after j.
                let r_big = right_after.is_multiple_of(2) == dir_max;
                let l_big = (j % 2 == 0) == dir_max;
                let rp = if r_big { w("12") } else { w("21") };
                let lp = if l_big { w("21") } else { w("12") };
                let s = BiSeq::new(lp, u.slice(0, j), u.slice(j, u.len()), rp).unwrap();
                let exact = lambda_at(&s, 0);
                assert_eq!(SurdSum::from(val.to_surd()), exact, "j={j} max={dir_max}");
            }
        }
    }

    #[test]
    fn floating_ranges_agree() {
        let u = w("221121221");
        let a = approx_ranges(u.digits());
        for (j, r) in a.iter().enumerate() {
            let (lo, hi) = lambda_range(u.digits(), j);
            assert!((lo.to_surd().to_f64() - r.lo()).abs() < 1e-12);
            assert!((hi.to_surd().to_f64() - r.hi()).abs() < 1e-12);
        }
    }

    #[test]
    fn dead_positions() {
        let t = Threshold::integer(3);
        assert!(find_dead(w("121").digits(), &t, 3.0).is_some());
        assert!(find_dead(w("2211").digits(), &t, 3.0).is_none());
        assert!(find_dead(w("22221111").digits(), &t, 3.0).is_some());
    }
}
