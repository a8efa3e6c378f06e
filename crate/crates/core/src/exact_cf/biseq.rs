use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Word;

/// An eventually periodic two-sided sequence
/// …(left_period)^∞ left_transient | right_transient (right_period)^∞….
///
/// Position 0 is the first digit right of the bar.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BiSeq {
    pub left_period: Word,
    pub left_transient: Word,
    pub right_transient: Word,
    pub right_period: Word,
}

impl BiSeq {
    pub fn new(
        left_period: Word,
        left_transient: Word,
        right_transient: Word,
        right_period: Word,
    ) -> Result<Self> {
        if left_period.is_empty() || right_period.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(BiSeq {
            left_period,
            left_transient,
            right_transient,
            right_period,
        })
    }

    /// The purely periodic sequence overline(p), with position 0 at the start of a period.
    pub fn periodic(p: &Word) -> Result<Self> {
        Self::new(p.clone(), Word::empty(), Word::empty(), p.clone())
    }

    /// …(left)^∞ middle (right)^∞… with position 0 at the start of `middle`
    /// (or of the right period if `middle` is empty).
    pub fn with_middle(left: &Word, middle: &Word, right: &Word) -> Result<Self> {
        Self::new(left.clone(), Word::empty(), middle.clone(), right.clone())
    }

    /// Digit at position i.
    pub fn digit(&self, i: i64) -> u8 {
        if i >= 0 {
            let i = i as usize;
            let rt = self.right_transient.len();
            if i < rt {
                self.right_transient[i]
            } else {
                let p = &self.right_period;
                p[(i - rt) % p.len()]
            }
        } else {
            let j = (-i - 1) as usize;
            let lt = self.left_transient.len();
            if j < lt {
                self.left_transient[lt - 1 - j]
            } else {
                let p = &self.left_period;
                let k = (j - lt) % p.len();
                p[p.len() - 1 - k]
            }
        }
    }

    /// Digits at positions lo..hi.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<u8> {
        (lo..hi).map(|i| self.digit(i)).collect()
    }

    /// First index at or beyond which the sequence is purely right-periodic.
    pub fn right_start(&self) -> i64 {
        self.right_transient.len() as i64
    }

    /// Last index + 1 below which the sequence is purely left-periodic.
    pub fn left_end(&self) -> i64 {
        -(self.left_transient.len() as i64)
    }

    /// Moves the origin to position k of the current sequence.
    pub fn shift(&self, k: i64) -> BiSeq {
        let lo = self.left_end().min(k);
        let hi = self.right_start().max(k);
        // Left periodic region ends at `lo`: its phase is determined by `lo`.
        let lp = self.left_period_ending_at(lo);
        let rp = self.right_period_starting_at(hi);
        BiSeq {
            left_period: lp,
            left_transient: Word::from_raw(self.window(lo, k)),
            right_transient: Word::from_raw(self.window(k, hi)),
            right_period: rp,
        }
    }

    /// The left period rotated so that it ends just before position `e` (for e ≤ left_end).
    fn left_period_ending_at(&self, e: i64) -> Word {
        let n = self.left_period.len() as i64;
        Word::from_raw(self.window(e - n, e))
    }

    /// The right period rotated so that it starts at position `s` (for s ≥ right_start).
    fn right_period_starting_at(&self, s: i64) -> Word {
        let n = self.right_period.len() as i64;
        Word::from_raw(self.window(s, s + n))
    }

    /// Reflection b_i = a_{-i} about position 0.
    pub fn transpose(&self) -> BiSeq {
        let lo = self.left_end().min(0);
        let hi = self.right_start().max(1);
        // New right part: a_0, a_{-1}, …, a_{lo}; then the reversed left period.
        let right: Vec<u8> = (lo..=0).rev().map(|i| self.digit(i)).collect();
        let left_n = self.left_period.len() as i64;
        let new_rp: Vec<u8> = (lo - left_n..lo).rev().map(|i| self.digit(i)).collect();
        // New left part ends at b_{-1} = a_1 and extends to b_{-(hi-1)} = a_{hi-1}.
        let mut left: Vec<u8> = (1..hi).map(|i| self.digit(i)).collect();
        left.reverse();
        let right_n = self.right_period.len() as i64;
        let new_lp: Vec<u8> = (hi..hi + right_n).rev().map(|i| self.digit(i)).collect();
        BiSeq {
            left_period: Word::from_raw(new_lp),
            left_transient: Word::from_raw(left),
            right_transient: Word::from_raw(right),
            right_period: Word::from_raw(new_rp),
        }
    }

    /// Shortens transients and periods without changing the sequence or its origin.
    pub fn normalize(&self) -> BiSeq {
        let mut s = self.clone();
        s.left_period = primitive_root(&s.left_period);
        s.right_period = primitive_root(&s.right_period);
        loop {
            let lt = s.left_transient.digits();
            let lp = s.left_period.digits();
            if !lt.is_empty() && lt[0] == lp[0] {
                let mut p = lp[1..].to_vec();
                p.push(lp[0]);
                s.left_period = Word::from_raw(p);
                s.left_transient = Word::from_raw(lt[1..].to_vec());
            } else {
                break;
            }
        }
        loop {
            let rt = s.right_transient.digits();
            let rp = s.right_period.digits();
            if let (Some(&last), Some(&plast)) = (rt.last(), rp.last()) {
                if last == plast {
                    let mut p = vec![plast];
                    p.extend_from_slice(&rp[..rp.len() - 1]);
                    s.right_period = Word::from_raw(p);
                    s.right_transient = Word::from_raw(rt[..rt.len() - 1].to_vec());
                    continue;
                }
            }
            break;
        }
        s
    }
}

/// The shortest word u with w = u^k.
pub fn primitive_root(w: &Word) -> Word {
    let n = w.len();
    let d = w.digits();
    for k in 1..=n {
        if n.is_multiple_of(k) && (k..n).all(|i| d[i] == d[i - k]) {
            return Word::from_raw(d[..k].to_vec());
        }
    }
    w.clone()
}

impl fmt::Display for BiSeq {
    /// Renders in the literal grammar `l:per(P) mid(L|R) r:per(Q)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.left_transient.is_empty()
            && self.right_transient.is_empty()
            && self.left_period == self.right_period
        {
            return write!(f, "per({})", self.right_period);
        }
        write!(
            f,
            "l:per({}) mid({}|{}) r:per({})",
            self.left_period, self.left_transient, self.right_transient, self.right_period
        )
    }
}

impl fmt::Debug for BiSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BiSeq {
    type Err = Error;

    /// Grammar:
    ///
    /// ```text
    /// seq   := "per(" word ")" | "l:per(" word ")" [ "mid(" mid ")" ] "r:per(" word ")"
    /// mid   := word | word "|" word
    /// word  := { "1" | "2" }
    /// ```
    ///
    /// Without a bar, position 0 is the first digit of `mid`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a sequence literal: {s:?}"));
        let inner = |t: &str, pre: &str| -> Option<String> {
            let t = t.trim().strip_prefix(pre)?;
            let end = t.find(')')?;
            Some(t[..end].to_string())
        };
        if s.starts_with("per(") {
            let p: Word = inner(s, "per(").ok_or_else(bad)?.parse()?;
            return BiSeq::periodic(&p);
        }
        let l_idx = s.find("l:per(").ok_or_else(bad)?;
        let r_idx = s.find("r:per(").ok_or_else(bad)?;
        let left: Word = inner(&s[l_idx..], "l:per(").ok_or_else(bad)?.parse()?;
        let right: Word = inner(&s[r_idx..], "r:per(").ok_or_else(bad)?.parse()?;
        let (lt, rt) = match s.find("mid(") {
            Some(m) => {
                let body = inner(&s[m..], "mid(").ok_or_else(bad)?;
                match body.split_once('|') {
                    Some((a, b)) => (a.parse()?, b.parse()?),
                    None => (Word::empty(), body.parse()?),
                }
            }
            None => (Word::empty(), Word::empty()),
        };
        BiSeq::new(left, lt, rt, right)
    }
}
