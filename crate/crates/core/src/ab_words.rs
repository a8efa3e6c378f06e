//! Words over the blocks a = 22 and b = 11: Nielsen substitutions, the tree of ordered
//! alphabets, the proportion map θ and Farey sequences.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_cf::Rational;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn digit(self) -> u8 {
        match self {
            Letter::A => 2,
            Letter::B => 1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ABWord(Vec<Letter>);

impl ABWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        ABWord(letters)
    }

    pub fn empty() -> Self {
        ABWord(Vec::new())
    }

    pub fn a() -> Self {
        ABWord(vec![Letter::A])
    }

    pub fn b() -> Self {
        ABWord(vec![Letter::B])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count_b(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::B).count()
    }

    pub fn concat(&self, o: &ABWord) -> ABWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        ABWord(v)
    }

    pub fn pow(&self, k: usize) -> ABWord {
        ABWord(self.0.repeat(k))
    }

    pub fn transpose(&self) -> ABWord {
        let mut v = self.0.clone();
        v.reverse();
        ABWord(v)
    }

    /// w⁺: drops the first letter (empty stays empty).
    pub fn plus(&self) -> ABWord {
        ABWord(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    /// w⁻: drops the last letter (empty stays empty).
    pub fn minus(&self) -> ABWord {
        let n = self.0.len().saturating_sub(1);
        ABWord(self.0[..n].to_vec())
    }

    pub fn slice(&self, start: usize, end: usize) -> ABWord {
        ABWord(self.0[start..end].to_vec())
    }

    pub fn starts_with(&self, p: &ABWord) -> bool {
        self.0.starts_with(&p.0)
    }

    pub fn ends_with(&self, s: &ABWord) -> bool {
        self.0.ends_with(&s.0)
    }

    pub fn contains(&self, needle: &ABWord) -> bool {
        needle.is_empty()
            || self
                .0
                .windows(needle.len())
                .any(|w| w == needle.0.as_slice())
    }

    /// Digit image under a ↦ 22, b ↦ 11.
    pub fn to_word(&self) -> Word {
        let mut v = Vec::with_capacity(2 * self.0.len());
        for l in &self.0 {
            v.push(l.digit());
            v.push(l.digit());
        }
        Word::from_raw(v)
    }

    /// Inverse of the digit image; every maximal run must have even length.
    pub fn from_word(w: &Word) -> Result<ABWord> {
        let d = w.digits();
        let mut out = Vec::with_capacity(d.len() / 2);
        let mut i = 0;
        while i < d.len() {
            let mut j = i;
            while j < d.len() && d[j] == d[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                return Err(Error::OddRun(i));
            }
            let l = if d[i] == 2 { Letter::A } else { Letter::B };
            out.extend(std::iter::repeat_n(l, (j - i) / 2));
            i = j;
        }
        Ok(ABWord(out))
    }
}

impl fmt::Display for ABWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::A => "a",
                Letter::B => "b",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for ABWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ABWord({self})")
    }
}

impl FromStr for ABWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                'a' => Ok(Letter::A),
                'b' => Ok(Letter::B),
                other => Err(Error::Parse(format!("not an a/b letter: {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ABWord)
    }
}

impl TryFrom<String> for ABWord {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ABWord> for String {
    fn from(w: ABWord) -> String {
        w.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subst {
    U,
    V,
}

/// A word over the Nielsen substitutions U (a ↦ ab, b ↦ b) and V (a ↦ a, b ↦ ab).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct UVWord(Vec<Subst>);

impl UVWord {
    pub fn new(s: Vec<Subst>) -> Self {
        UVWord(s)
    }

    pub fn empty() -> Self {
        UVWord(Vec::new())
    }

    pub fn letters(&self) -> &[Subst] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn then(&self, s: Subst) -> UVWord {
        let mut v = self.0.clone();
        v.push(s);
        UVWord(v)
    }
}

impl fmt::Display for UVWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Subst::U => "U",
                Subst::V => "V",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for UVWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UVWord({self})")
    }
}

impl FromStr for UVWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                'U' => Ok(Subst::U),
                'V' => Ok(Subst::V),
                other => Err(Error::Parse(format!("not a U/V letter: {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(UVWord)
    }
}

impl TryFrom<String> for UVWord {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<UVWord> for String {
    fn from(w: UVWord) -> String {
        w.to_string()
    }
}

fn apply_one(s: Subst, w: &ABWord) -> ABWord {
    let mut out = Vec::with_capacity(w.len() * 2);
    for &l in w.letters() {
        match (s, l) {
            (Subst::U, Letter::A) => out.extend([Letter::A, Letter::B]),
            (Subst::V, Letter::B) => out.extend([Letter::A, Letter::B]),
            (_, l) => out.push(l),
        }
    }
    ABWord(out)
}

/// W(w), where W = XY means X(Y(w)).
pub fn apply_subst(w_subst: &UVWord, w: &ABWord) -> ABWord {
    w_subst
        .letters()
        .iter()
        .rev()
        .fold(w.clone(), |acc, &s| apply_one(s, &acc))
}

/// An element (α, β) of the tree of ordered alphabets with a witness W, α = W(a), β = W(b).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderedAlphabet {
    pub alpha: ABWord,
    pub beta: ABWord,
    pub witness: UVWord,
}

impl OrderedAlphabet {
    pub fn root() -> Self {
        OrderedAlphabet {
            alpha: ABWord::a(),
            beta: ABWord::b(),
            witness: UVWord::empty(),
        }
    }

    pub fn from_witness(w: &UVWord) -> Self {
        OrderedAlphabet {
            alpha: apply_subst(w, &ABWord::a()),
            beta: apply_subst(w, &ABWord::b()),
            witness: w.clone(),
        }
    }

    /// Recovers the witness of (α, β) by unwinding the pair operations, if it is in the tree.
    pub fn from_pair(alpha: &ABWord, beta: &ABWord) -> Option<Self> {
        let (mut u, mut v) = (alpha.clone(), beta.clone());
        let mut ops = Vec::new();
        loop {
            if u == ABWord::a() && v == ABWord::b() {
                ops.reverse();
                return Some(OrderedAlphabet {
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                    witness: UVWord(ops),
                });
            }
            if u.len() > v.len() && u.ends_with(&v) {
                u = u.slice(0, u.len() - v.len());
                ops.push(Subst::U);
            } else if v.len() > u.len() && v.starts_with(&u) {
                v = v.slice(u.len(), v.len());
                ops.push(Subst::V);
            } else {
                return None;
            }
        }
    }

    pub fn depth(&self) -> usize {
        self.witness.len()
    }

    /// Ū(α, β) = (αβ, β).
    pub fn child_u(&self) -> Self {
        OrderedAlphabet {
            alpha: self.alpha.concat(&self.beta),
            beta: self.beta.clone(),
            witness: self.witness.then(Subst::U),
        }
    }

    /// V̄(α, β) = (α, αβ).
    pub fn child_v(&self) -> Self {
        OrderedAlphabet {
            alpha: self.alpha.clone(),
            beta: self.alpha.concat(&self.beta),
            witness: self.witness.then(Subst::V),
        }
    }

    /// The period 𝗰(α, β) = αβ.
    pub fn period(&self) -> ABWord {
        self.alpha.concat(&self.beta)
    }

    pub fn max_len(&self) -> usize {
        self.alpha.len().max(self.beta.len())
    }
}

/// All alphabets of depth at most n, in breadth-first order (U child before V child).
pub fn enumerate_alphabets(n: usize) -> Vec<OrderedAlphabet> {
    let mut out = vec![OrderedAlphabet::root()];
    let mut level = out.clone();
    for _ in 0..n {
        let next: Vec<OrderedAlphabet> = level
            .iter()
            .flat_map(|x| [x.child_u(), x.child_v()])
            .collect();
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// θ(k) = |k|_b / |k|.
pub fn theta(k: &ABWord) -> Result<Rational> {
    if k.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(Rational::new(
        BigInt::from(k.count_b()),
        BigInt::from(k.len()),
    ))
}

/// (p + r)/(q + s) for reduced p/q and r/s.
pub fn mediant(x: &Rational, y: &Rational) -> Rational {
    Rational::new(x.numer() + y.numer(), x.denom() + y.denom())
}

/// The word of 𝗰(𝒜) ∪ {a, b} with θ = x, by Stern–Brocot descent.
pub fn theta_inverse(x: &Rational) -> Result<ABWord> {
    let zero = Rational::zero();
    let one = Rational::one();
    if *x < zero || *x > one {
        return Err(Error::Domain(format!("θ⁻¹ needs x in [0,1], got {x}")));
    }
    if *x == zero {
        return Ok(ABWord::a());
    }
    if *x == one {
        return Ok(ABWord::b());
    }
    let (mut lq, mut lw) = (zero, ABWord::a());
    let (mut rq, mut rw) = (one, ABWord::b());
    loop {
        let m = mediant(&lq, &rq);
        let mw = lw.concat(&rw);
        match x.cmp(&m) {
            std::cmp::Ordering::Equal => return Ok(mw),
            std::cmp::Ordering::Less => {
                rq = m;
                rw = mw;
            }
            std::cmp::Ordering::Greater => {
                lq = m;
                lw = mw;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareyWord {
    pub word: ABWord,
    #[serde(with = "crate::exact_cf::cf::rational_str")]
    pub theta: Rational,
    /// True for the endpoints a and b, which are not periods in 𝗰(𝒜).
    pub endpoint: bool,
}

/// κ_1, …, κ_|F_n|: the words whose θ-values make up the Farey sequence F_n, in order.
pub fn farey_words(n: usize) -> Result<Vec<FareyWord>> {
    if n == 0 {
        return Err(Error::Domain("Farey order must be at least 1".into()));
    }
    let lo = (Rational::zero(), ABWord::a());
    let hi = (Rational::one(), ABWord::b());
    let mut out = vec![FareyWord {
        word: lo.1.clone(),
        theta: lo.0.clone(),
        endpoint: true,
    }];
    // Explicit stack instead of recursion: (left, right) intervals still to split.
    let mut stack = vec![(lo, hi.clone(), false)];
    while let Some((l, r, emitted_left)) = stack.pop() {
        if emitted_left {
            // Left half done: emit the mediant, then process the right half.
            let m = mediant(&l.0, &r.0);
            let mw = l.1.concat(&r.1);
            out.push(FareyWord {
                word: mw.clone(),
                theta: m.clone(),
                endpoint: false,
            });
            stack.push(((m, mw), r, false));
            continue;
        }
        let q = l.0.denom() + r.0.denom();
        if q > BigInt::from(n) {
            continue;
        }
        let m = mediant(&l.0, &r.0);
        let mw = l.1.concat(&r.1);
        stack.push((l.clone(), r, true));
        stack.push((l, (m, mw), false));
    }
    out.push(FareyWord {
        word: hi.1,
        theta: hi.0,
        endpoint: true,
    });
    Ok(out)
}

/// Euler's totient, for the Farey-size identity |F_n| = 1 + Σ φ(k).
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(s: &str) -> ABWord {
        s.parse().unwrap()
    }

    fn uv(s: &str) -> UVWord {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn substitutions() {
        assert_eq!(apply_subst(&uv("U"), &ab("ab")), ab("abb"));
        assert_eq!(apply_subst(&uv("V"), &ab("ab")), ab("aab"));
        assert_eq!(apply_subst(&uv("UV"), &ab("a")), ab("ab"));
        assert_eq!(apply_subst(&uv("UV"), &ab("b")), ab("abb"));
        let x = OrderedAlphabet::root().child_u().child_v();
        assert_eq!((x.alpha.clone(), x.beta.clone()), (ab("ab"), ab("abb")));
        assert_eq!(x, OrderedAlphabet::from_witness(&uv("UV")));
    }

    #[test]
    fn alphabet_tree() {
        let t = enumerate_alphabets(0);
        assert_eq!(t, vec![OrderedAlphabet::root()]);
        let t = enumerate_alphabets(1);
        let pairs: Vec<String> = t[1..]
            .iter()
            .map(|x| format!("({},{})", x.alpha, x.beta))
            .collect();
        assert_eq!(pairs, vec!["(ab,b)", "(a,ab)"]);
        let t = enumerate_alphabets(2);
        assert_eq!(t.len(), 7);
        assert!(t.iter().any(|x| x.alpha == ab("ab") && x.beta == ab("abb")));
        for x in &t {
            assert_eq!(OrderedAlphabet::from_pair(&x.alpha, &x.beta).unwrap(), *x);
        }
    }

    #[test]
    fn digit_conversion() {
        let w = ab("abb");
        assert_eq!(w.to_word().to_string(), "221111");
        assert_eq!(ABWord::from_word(&w.to_word()).unwrap(), w);
        assert!(ABWord::from_word(&"2211122".parse().unwrap()).is_err());
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(&ab("a")).unwrap(), q(0, 1));
        assert_eq!(theta(&ab("b")).unwrap(), q(1, 1));
        assert_eq!(theta(&ab("ab")).unwrap(), q(1, 2));
        assert_eq!(theta(&ab("aab")).unwrap(), q(1, 3));
        assert_eq!(theta_inverse(&q(0, 1)).unwrap(), ab("a"));
        assert_eq!(theta_inverse(&q(1, 1)).unwrap(), ab("b"));
        assert_eq!(theta_inverse(&q(1, 2)).unwrap(), ab("ab"));
        assert_eq!(theta_inverse(&q(2, 5)).unwrap(), ab("aabab"));
        assert!(theta_inverse(&q(3, 2)).is_err());
    }

    #[test]
    fn farey_small() {
        let words = |n| -> Vec<String> {
            farey_words(n)
                .unwrap()
                .into_iter()
                .map(|f| f.word.to_string())
                .collect()
        };
        assert_eq!(words(1), vec!["a", "b"]);
        assert_eq!(words(2), vec!["a", "ab", "b"]);
        assert_eq!(words(3), vec!["a", "aab", "ab", "abb", "b"]);
        assert_eq!(mediant(&q(1, 3), &q(1, 2)), q(2, 5));
        assert_eq!(mediant(&q(0, 1), &q(1, 1)), q(1, 2));
    }

    #[test]
    fn farey_neighbours_unimodular() {
        for n in 1..=40 {
            let fw = farey_words(n).unwrap();
            for p in fw.windows(2) {
                let (x, y) = (&p[0].theta, &p[1].theta);
                let det = x.denom() * y.numer() - x.numer() * y.denom();
                assert_eq!(det, BigInt::one(), "{x} {y}");
            }
        }
    }

    #[test]
    fn farey_size() {
        for n in 1..=30u64 {
            let size = farey_words(n as usize).unwrap().len() as u64;
            assert_eq!(size, 1 + (1..=n).map(totient).sum::<u64>());
        }
    }
}
