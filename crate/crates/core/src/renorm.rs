//! Weak and semi renormalization of {a,b}-words and the alphabet-finding chain.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ab_words::{ABWord, Letter, OrderedAlphabet, Subst};
use crate::error::{Error, Result};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlphaLetter {
    Alpha,
    Beta,
}

/// A kernel written over {α, β}.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Factorization(pub Vec<AlphaLetter>);

impl Factorization {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<AlphaLetter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<AlphaLetter> {
        self.0.last().copied()
    }

    /// Whether the letter appears twice in a row.
    pub fn has_square(&self, l: AlphaLetter) -> bool {
        self.0.windows(2).any(|p| p[0] == l && p[1] == l)
    }

    pub fn expand(&self, alphabet: &OrderedAlphabet) -> ABWord {
        let mut out = ABWord::empty();
        for l in &self.0 {
            out = out.concat(match l {
                AlphaLetter::Alpha => &alphabet.alpha,
                AlphaLetter::Beta => &alphabet.beta,
            });
        }
        out
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                AlphaLetter::Alpha => "α",
                AlphaLetter::Beta => "β",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Factorization({self})")
    }
}

impl TryFrom<String> for Factorization {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'α' | 'A' => Ok(AlphaLetter::Alpha),
                'β' | 'B' => Ok(AlphaLetter::Beta),
                other => Err(Error::Parse(format!("not an α/β letter: {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Factorization)
    }
}

impl From<Factorization> for String {
    fn from(f: Factorization) -> String {
        f.to_string()
    }
}

/// w = w1 · kernel · w2 with the kernel written over an ordered alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakRenormalization {
    pub w1: ABWord,
    pub kernel: ABWord,
    pub kernel_factorization: Factorization,
    pub alphabet: OrderedAlphabet,
    pub w2: ABWord,
}

impl WeakRenormalization {
    /// The trivial (a, b)-decomposition with the whole word as kernel.
    pub fn trivial(w: &ABWord) -> Self {
        let f = w
            .letters()
            .iter()
            .map(|l| match l {
                Letter::A => AlphaLetter::Alpha,
                Letter::B => AlphaLetter::Beta,
            })
            .collect();
        WeakRenormalization {
            w1: ABWord::empty(),
            kernel: w.clone(),
            kernel_factorization: Factorization(f),
            alphabet: OrderedAlphabet::root(),
            w2: ABWord::empty(),
        }
    }

    pub fn word(&self) -> ABWord {
        self.w1.concat(&self.kernel).concat(&self.w2)
    }

    /// Checks every clause of the definition of a weak renormalization.
    pub fn is_valid(&self) -> bool {
        valid_split(
            &self.alphabet,
            &self.w1,
            &self.kernel_factorization,
            &self.w2,
        ) && self.kernel_factorization.expand(&self.alphabet) == self.kernel
    }
}

fn valid_split(al: &OrderedAlphabet, w1: &ABWord, f: &Factorization, w2: &ABWord) -> bool {
    let m = al.max_len();
    let ab = al.period();
    if w1.len() >= m || w2.len() >= m || !ab.ends_with(w1) || !ab.starts_with(w2) {
        return false;
    }
    match al.witness.letters().last() {
        // (α, β) = (u, uv) with v = α⁻¹β.
        Some(Subst::V) if f.last() == Some(AlphaLetter::Alpha) => {
            al.beta.len() - al.alpha.len() <= w2.len()
        }
        // (α, β) = (uv, v) with u = αβ⁻¹.
        Some(Subst::U) if f.first() == Some(AlphaLetter::Beta) => {
            al.alpha.len() - al.beta.len() <= w1.len()
        }
        _ => true,
    }
}

/// The unique factorization of `w` over {α, β}, if any.
pub fn parse_over(w: &[Letter], al: &OrderedAlphabet) -> Option<Factorization> {
    let n = w.len();
    let (a, b) = (al.alpha.letters(), al.beta.letters());
    // back[i] = letter ending a parse of w[..i]
    let mut back: Vec<Option<AlphaLetter>> = vec![None; n + 1];
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 0..n {
        if !reach[i] {
            continue;
        }
        for (piece, l) in [(a, AlphaLetter::Alpha), (b, AlphaLetter::Beta)] {
            let j = i + piece.len();
            if j <= n && !reach[j] && &w[i..j] == piece {
                reach[j] = true;
                back[j] = Some(l);
            }
        }
    }
    if !reach[n] {
        return None;
    }
    let mut out = Vec::new();
    let mut i = n;
    while i > 0 {
        let l = back[i].expect("reachable");
        out.push(l);
        i -= match l {
            AlphaLetter::Alpha => a.len(),
            AlphaLetter::Beta => b.len(),
        };
    }
    out.reverse();
    Some(Factorization(out))
}

/// Searches decompositions of `w` over `al`; candidates are ranked by `rank`
/// (lower first) and ties broken by shorter w1, then shorter w2.
fn decompose_ranked<F>(w: &ABWord, al: &OrderedAlphabet, rank: F) -> Option<WeakRenormalization>
where
    F: Fn(&ABWord, &ABWord, &Factorization) -> u32,
{
    let m = al.max_len();
    let letters = w.letters();
    let n = letters.len();
    let mut best: Option<(u32, usize, usize, WeakRenormalization)> = None;
    for i in 0..m.min(n + 1) {
        for j in 0..m.min(n - i + 1) {
            let w1 = w.slice(0, i);
            let w2 = w.slice(n - j, n);
            let Some(f) = parse_over(&letters[i..n - j], al) else {
                continue;
            };
            if !valid_split(al, &w1, &f, &w2) {
                continue;
            }
            let r = rank(&w1, &w2, &f);
            let better = match &best {
                None => true,
                Some((br, bi, bj, _)) => (r, i, j) < (*br, *bi, *bj),
            };
            if better {
                let d = WeakRenormalization {
                    w1,
                    kernel: w.slice(i, n - j),
                    kernel_factorization: f,
                    alphabet: al.clone(),
                    w2,
                };
                best = Some((r, i, j, d));
            }
        }
    }
    best.map(|b| b.3)
}

/// Decomposition of `w` over `al` preferring a nonempty kernel and short trailing words.
pub fn decompose(w: &ABWord, al: &OrderedAlphabet) -> Option<WeakRenormalization> {
    decompose_ranked(w, al, |_, _, f| u32::from(f.is_empty()))
}

/// One step of the renormalization algorithm: moves from (u, v) to (uv, v) or (u, uv).
pub fn renorm_step(r: &WeakRenormalization) -> Result<WeakRenormalization> {
    let f = &r.kernel_factorization;
    if f.is_empty() {
        return Err(Error::NotRenormalizable("empty kernel".into()));
    }
    let uu = f.has_square(AlphaLetter::Alpha);
    let vv = f.has_square(AlphaLetter::Beta);
    let target = match (uu, vv) {
        (true, true) => {
            return Err(Error::NotRenormalizable(format!(
                "kernel {f} over ({}, {}) contains both uu and vv",
                r.alphabet.alpha, r.alphabet.beta
            )))
        }
        (_, false) if uu => r.alphabet.child_v(),
        _ => r.alphabet.child_u(),
    };
    let keep_w1 = f.first() == Some(AlphaLetter::Alpha);
    let keep_w2 = f.last() == Some(AlphaLetter::Beta);
    let w = r.word();
    let rank = |w1: &ABWord, w2: &ABWord, f: &Factorization| {
        let unstable = (keep_w1 && *w1 != r.w1) as u32 + (keep_w2 && *w2 != r.w2) as u32;
        2 * unstable + u32::from(f.is_empty())
    };
    decompose_ranked(&w, &target, rank).ok_or_else(|| {
        Error::NotRenormalizable(format!(
            "{w} has no decomposition over ({}, {})",
            target.alpha, target.beta
        ))
    })
}

/// Extensions of a digit word by at most one digit on each side that are {a,b}-words,
/// in the order: none, right, left, both. Each entry records the added digits.
pub fn ab_extensions(w: &Word) -> Vec<(ABWord, bool, bool)> {
    let d = w.digits();
    let mut out = Vec::new();
    if d.is_empty() {
        return out;
    }
    let first = d[0];
    let last = d[d.len() - 1];
    let candidates = [(false, false), (false, true), (true, false), (true, true)];
    for (left, right) in candidates {
        let mut v = Vec::with_capacity(d.len() + 2);
        if left {
            v.push(first);
        }
        v.extend_from_slice(d);
        if right {
            v.push(last);
        }
        if let Ok(ab) = ABWord::from_word(&Word::from_raw(v)) {
            out.push((ab, left, right));
        }
    }
    out
}

/// Result of the alphabet search for a word of length 3n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetFit {
    pub alphabet: OrderedAlphabet,
    pub decomposition: WeakRenormalization,
    pub extended_left: bool,
    pub extended_right: bool,
    /// Every alphabet visited by the chain, root first.
    pub chain: Vec<OrderedAlphabet>,
}

/// Runs the renormalization chain from the trivial decomposition of the first valid
/// extension until |αβ| ≥ n (digit lengths), returning the final alphabet.
pub fn find_alphabet(w: &Word, n: usize) -> Result<AlphabetFit> {
    let exts = ab_extensions(w);
    let Some((ab, left, right)) = exts.into_iter().next() else {
        return Err(Error::NoValidExtension);
    };
    let mut r = WeakRenormalization::trivial(&ab);
    let mut chain = vec![r.alphabet.clone()];
    while 2 * r.alphabet.period().len() < n {
        r = renorm_step(&r)?;
        chain.push(r.alphabet.clone());
    }
    if 2 * r.alphabet.max_len() >= n {
        return Err(Error::NotRenormalizable(format!(
            "alphabet ({}, {}) has a letter of at least {n} digits",
            r.alphabet.alpha, r.alphabet.beta
        )));
    }
    Ok(AlphabetFit {
        alphabet: r.alphabet.clone(),
        decomposition: r,
        extended_left: left,
        extended_right: right,
        chain,
    })
}

/// Decomposes an extension of `w` (at most one digit per side) over the given alphabet.
pub fn semi_renormalize(w: &Word, alphabet: &OrderedAlphabet) -> Result<WeakRenormalization> {
    for (ab, _, _) in ab_extensions(w) {
        if let Some(d) = decompose(&ab, alphabet) {
            return Ok(d);
        }
    }
    if ab_extensions(w).is_empty() {
        return Err(Error::NoValidExtension);
    }
    Err(Error::NotRenormalizable(format!(
        "{w} has no decomposition over ({}, {})",
        alphabet.alpha, alphabet.beta
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ab_words::UVWord;

    fn ab(s: &str) -> ABWord {
        s.parse().unwrap()
    }

    #[test]
    fn step_from_trivial() {
        let r = renorm_step(&WeakRenormalization::trivial(&ab("ababb"))).unwrap();
        assert_eq!(
            (r.alphabet.alpha.to_string(), r.alphabet.beta.to_string()),
            ("ab".into(), "b".into())
        );
        assert_eq!(r.kernel_factorization.to_string(), "ααβ");
        assert_eq!(r.word(), ab("ababb"));
        assert!(r.w1.is_empty() && r.w2.is_empty());

        let r = renorm_step(&WeakRenormalization::trivial(&ab("babab"))).unwrap();
        assert_eq!(r.w1, ab("b"));
        assert_eq!(r.kernel_factorization.to_string(), "αα");
        assert!(r.w2.is_empty());
        assert!(r.is_valid());
    }

    #[test]
    fn pure_power_of_a() {
        // The restriction for (u, uv) kernels ending in α forces |w2| ≥ |v|.
        let r = renorm_step(&WeakRenormalization::trivial(&ab("aaaa"))).unwrap();
        assert_eq!(r.alphabet.beta, ab("ab"));
        assert_eq!(r.kernel, ab("aaa"));
        assert_eq!(r.w2, ab("a"));
        assert!(r.w1.is_empty());
    }

    #[test]
    fn mixed_squares_are_rejected() {
        let r = WeakRenormalization::trivial(&ab("aabb"));
        assert!(matches!(renorm_step(&r), Err(Error::NotRenormalizable(_))));
    }

    #[test]
    fn uniform_word_chain() {
        let w = Word::repeat_digit(1, 24);
        let fit = find_alphabet(&w, 8).unwrap();
        assert_eq!(fit.alphabet.beta, ab("b"));
        assert!(fit.alphabet.alpha.starts_with(&ab("a")));
        assert!(fit
            .decomposition
            .kernel
            .letters()
            .iter()
            .all(|&l| l == Letter::B));
    }

    #[test]
    fn periodic_word_follows_its_slope() {
        let w = ab("ab").pow(6).to_word().slice(0, 21);
        let fit = find_alphabet(&w, 7).unwrap();
        assert!(2 * fit.alphabet.period().len() >= 7);
        assert!(fit.decomposition.is_valid());
    }

    #[test]
    fn semi_renormalization_needs_both_sides() {
        let w: Word = "21111111".parse().unwrap();
        let exts = ab_extensions(&w);
        assert_eq!(exts.len(), 1);
        assert!(exts[0].1 && exts[0].2);
        let d = semi_renormalize(&w, &OrderedAlphabet::root()).unwrap();
        assert_eq!(d.word(), ab("abbbb"));
    }

    #[test]
    fn kernel_equal_to_period() {
        let al = OrderedAlphabet::from_witness(&"UV".parse::<UVWord>().unwrap());
        let d = semi_renormalize(&al.period().to_word(), &al).unwrap();
        assert!(d.w1.is_empty() && d.w2.is_empty());
        assert_eq!(d.kernel, al.period());
    }
}
