use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ab_words::{apply_subst, ABWord, UVWord};
use crate::error::{Error, Result};
use crate::exact_cf::markov::surd_sum_string;
use crate::exact_cf::{lambda_at, BiSeq, SurdSum};
use crate::lang::bounds::{approx_ranges, lambda_range, lambda_sup, Q3};
use crate::lang::membership::{membership, Budget, Verdict};
use crate::lang::threshold::Threshold;
use crate::word::Word;

/// A bar inside a finite word: context_left | context_right.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    pub context_left: Word,
    pub context_right: Word,
}

impl Cut {
    pub fn new(context_left: Word, context_right: Word) -> Result<Self> {
        if context_left.is_empty() || context_right.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Cut {
            context_left,
            context_right,
        })
    }

    pub fn from_ab(left: &ABWord, right: &ABWord) -> Result<Self> {
        Self::new(left.to_word(), right.to_word())
    }

    pub fn word(&self) -> Word {
        self.context_left.concat(&self.context_right)
    }

    /// Digit positions of the two digits adjacent to the bar.
    pub fn positions(&self) -> (usize, usize) {
        let p = self.context_left.len();
        (p - 1, p)
    }

    fn ab_sides(&self, kind: CutTemplate) -> Result<(ABWord, ABWord)> {
        let mismatch = |_| Error::TemplateMismatch(kind.name());
        Ok((
            ABWord::from_word(&self.context_left).map_err(mismatch)?,
            ABWord::from_word(&self.context_right).map_err(mismatch)?,
        ))
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.context_left, self.context_right)
    }
}

impl fmt::Debug for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Cut {
    type Err = Error;

    /// `2211|2211` in digits, or `ab|ab` in letters.
    fn from_str(s: &str) -> Result<Self> {
        let (l, r) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("cut {s:?} has no bar")))?;
        let side = |x: &str| -> Result<Word> {
            if x.chars().all(|c| c == 'a' || c == 'b') {
                Ok(x.parse::<ABWord>()?.to_word())
            } else {
                x.parse()
            }
        };
        Cut::new(side(l.trim())?, side(r.trim())?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Class {
    Good,
    Bad,
    Mixed,
    Unresolved(usize),
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Good => f.write_str("good"),
            Class::Bad => f.write_str("bad"),
            Class::Mixed => f.write_str("mixed"),
            Class::Unresolved(d) => write!(f, "unresolved({d})"),
        }
    }
}

/// A classification with the exact extremal λ-values at the two bar-adjacent positions over
/// all extensions of the context word.
#[derive(Clone, Debug, Serialize)]
pub struct CutClass {
    pub class: Class,
    #[serde(serialize_with = "surd_sum_string")]
    pub inf_left: SurdSum,
    #[serde(serialize_with = "surd_sum_string")]
    pub sup_left: SurdSum,
    #[serde(serialize_with = "surd_sum_string")]
    pub inf_right: SurdSum,
    #[serde(serialize_with = "surd_sum_string")]
    pub sup_right: SurdSum,
}

/// Extension depth used when separating bad from mixed cuts.
pub const CUT_SEARCH_DEPTH: usize = 48;

pub fn classify_cut(c: &Cut) -> CutClass {
    classify_cut_with_depth(c, CUT_SEARCH_DEPTH)
}

pub fn classify_cut_with_depth(c: &Cut, max_depth: usize) -> CutClass {
    let u = c.word();
    let (p, q) = c.positions();
    let three = Threshold::integer(3);
    let (lp, hp) = lambda_range(u.digits(), p);
    let (lq, hq) = lambda_range(u.digits(), q);
    let to_sum = |x: &Q3| SurdSum::from(x.to_surd());
    let class = if hp.cmp_threshold(&three) == Ordering::Less
        && hq.cmp_threshold(&three) == Ordering::Less
    {
        Class::Good
    } else {
        let mut s = BadSearch {
            three: &three,
            max_depth,
            reached: 0,
        };
        match s.run(&mut u.digits().to_vec(), p, 0) {
            Search::Proven => Class::Bad,
            Search::Mixed => Class::Mixed,
            Search::Open => Class::Unresolved(s.reached),
        }
    };
    CutClass {
        class,
        inf_left: to_sum(&lp),
        sup_left: to_sum(&hp),
        inf_right: to_sum(&lq),
        sup_right: to_sum(&hq),
    }
}

enum Search {
    Proven,
    Mixed,
    Open,
}

/// Proves inf over extensions of max(λ_p, λ_{p+1}) > 3, or finds extensions keeping both
/// positions at most 3.
struct BadSearch<'a> {
    three: &'a Threshold,
    max_depth: usize,
    reached: usize,
}

impl BadSearch<'_> {
    fn run(&mut self, u: &mut Vec<u8>, p: usize, ext: usize) -> Search {
        self.reached = self.reached.max(ext);
        let (lp, hp) = lambda_range(u, p);
        let (lq, hq) = lambda_range(u, p + 1);
        if lp.cmp_threshold(self.three) == Ordering::Greater
            || lq.cmp_threshold(self.three) == Ordering::Greater
        {
            return Search::Proven;
        }
        if hp.cmp_threshold(self.three) != Ordering::Greater
            && hq.cmp_threshold(self.three) != Ordering::Greater
        {
            return Search::Mixed;
        }
        if ext >= self.max_depth {
            return Search::Open;
        }
        let approx = approx_ranges(u);
        let (a, b) = (approx[p], approx[p + 1]);
        let (fw, bw) = (
            (a.f_hi - a.f_lo).max(b.f_hi - b.f_lo),
            (a.b_hi - a.b_lo).max(b.b_hi - b.b_lo),
        );
        let right = fw >= bw;
        let mut open = false;
        for d in [1u8, 2] {
            let r = if right {
                u.push(d);
                let r = self.run(u, p, ext + 1);
                u.pop();
                r
            } else {
                u.insert(0, d);
                let r = self.run(u, p + 1, ext + 1);
                u.remove(0);
                r
            };
            match r {
                Search::Mixed => return Search::Mixed,
                Search::Open => open = true,
                Search::Proven => {}
            }
        }
        if open {
            Search::Open
        } else {
            Search::Proven
        }
    }
}

/// The four cut templates of the push-forward corollaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutTemplate {
    /// Xbw*a|bwaY
    GoodAsymmetric,
    /// aw*b|awb
    GoodSymmetric,
    /// Xbw*b|awaY
    BadAsymmetric,
    /// aw*a|bwb
    BadSymmetric,
}

impl CutTemplate {
    pub fn name(self) -> &'static str {
        match self {
            CutTemplate::GoodAsymmetric => "good-asymmetric",
            CutTemplate::GoodSymmetric => "good-symmetric",
            CutTemplate::BadAsymmetric => "bad-asymmetric",
            CutTemplate::BadSymmetric => "bad-symmetric",
        }
    }

    pub fn all() -> [CutTemplate; 4] {
        [
            CutTemplate::GoodAsymmetric,
            CutTemplate::GoodSymmetric,
            CutTemplate::BadAsymmetric,
            CutTemplate::BadSymmetric,
        ]
    }

    /// Letters (left end, left last, right first, right end) of the template.
    fn shape(self) -> (ABWord, ABWord, ABWord, ABWord) {
        let (a, b) = (ABWord::a(), ABWord::b());
        match self {
            CutTemplate::GoodAsymmetric => (b.clone(), a.clone(), b, a),
            CutTemplate::GoodSymmetric => (a.clone(), b.clone(), a, b),
            CutTemplate::BadAsymmetric => (b.clone(), b, a.clone(), a),
            CutTemplate::BadSymmetric => (a.clone(), a, b.clone(), b),
        }
    }

    fn symmetric(self) -> bool {
        matches!(self, CutTemplate::GoodSymmetric | CutTemplate::BadSymmetric)
    }
}

impl FromStr for CutTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CutTemplate::all()
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown cut template {s:?}")))
    }
}

/// A decomposition left = X·e1·w*·l1, right = r1·w·e2·Y of a cut along a template.
struct Split {
    x: ABWord,
    w: ABWord,
    y: ABWord,
}

fn split(left: &ABWord, right: &ABWord, kind: CutTemplate) -> Vec<Split> {
    let (e1, l1, r1, e2) = kind.shape();
    let mut out = Vec::new();
    let (ln, rn) = (left.len(), right.len());
    if ln < 2 || rn < 2 {
        return out;
    }
    for k in (0..=(ln - 2).min(rn - 2)).rev() {
        let w = right.slice(1, 1 + k);
        let ok_right = right.slice(0, 1) == r1 && right.slice(1 + k, 2 + k) == e2;
        let ls = ln - k - 2;
        let ok_left = left.slice(ls, ls + 1) == e1
            && left.slice(ln - 1, ln) == l1
            && left.slice(ls + 1, ln - 1) == w.transpose();
        if !(ok_right && ok_left) {
            continue;
        }
        let x = left.slice(0, ls);
        let y = right.slice(2 + k, rn);
        if kind.symmetric() && !(x.is_empty() && y.is_empty()) {
            continue;
        }
        out.push(Split { x, w, y });
    }
    out
}

/// The cut produced by a substitution W from a cut of the given template.
///
/// With u = W(a), v = W(b) the image is e1·u⁺W(w*)v⁻·l1 | r1·u⁺W(w)v⁻·e2. For the
/// asymmetric templates the longest w whose outer words satisfy |W(X)| ≥ |u| and
/// |W(Y)| ≥ |v| is used. The empty W returns the cut unchanged.
pub fn push_cut(subst: &UVWord, c: &Cut, kind: CutTemplate) -> Result<Cut> {
    let (left, right) = c.ab_sides(kind)?;
    let splits = split(&left, &right, kind);
    if splits.is_empty() {
        return Err(Error::TemplateMismatch(kind.name()));
    }
    if subst.is_empty() {
        return Ok(c.clone());
    }
    let u = apply_subst(subst, &ABWord::a());
    let v = apply_subst(subst, &ABWord::b());
    let sp = splits
        .into_iter()
        .find(|s| {
            kind.symmetric()
                || (apply_subst(subst, &s.x).len() >= u.len()
                    && apply_subst(subst, &s.y).len() >= v.len())
        })
        .ok_or(Error::TemplateMismatch(kind.name()))?;
    let (e1, l1, r1, e2) = kind.shape();
    let core = |w: &ABWord| u.plus().concat(&apply_subst(subst, w)).concat(&v.minus());
    let new_left = e1.concat(&core(&sp.w.transpose())).concat(&l1);
    let new_right = r1.concat(&core(&sp.w)).concat(&e2);
    Cut::from_ab(&new_left, &new_right)
}

/// Outcome of comparing a bad cut x ω* b|a ω y with its extension x ω̃* b|a ω̃ y.
#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub base: Cut,
    pub extended: Cut,
    /// A sequence with Markov value at most t containing the base cut at positions 0..
    #[serde(serialize_with = "crate::lang::cuts::display_string")]
    pub witness: BiSeq,
    /// λ at the first 2 after the bar in the witness.
    #[serde(serialize_with = "surd_sum_string")]
    pub base_lambda: SurdSum,
    /// Supremum of λ at the first 2 after the bar over all extensions of the extended cut.
    #[serde(serialize_with = "surd_sum_string")]
    pub extended_sup: SurdSum,
    /// extended_sup < t.
    pub verdict: bool,
}

pub(crate) fn display_string<S: serde::Serializer, T: fmt::Display>(
    x: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn bad_cut_word(omega: &Word, x: u8, y: u8) -> Cut {
    let mut l = vec![x];
    l.extend(omega.transpose().digits());
    l.extend([1, 1]);
    let mut r = vec![2, 2];
    r.extend(omega.digits());
    r.push(y);
    Cut::new(Word::from_raw(l), Word::from_raw(r)).expect("nonempty sides")
}

/// Certifies λ(X) < t at the cut of every X = …x ω̃* b|a ω̃ y… once the base cut
/// x ω* b|a ω y is certified to occur in Σ(t).
pub fn compare_bad_cuts(
    omega: &Word,
    omega_tilde: &Word,
    x: u8,
    y: u8,
    t: &Threshold,
    budget: &Budget,
) -> Result<CompareReport> {
    if x == y || !matches!(x, 1 | 2) || !matches!(y, 1 | 2) {
        return Err(Error::Domain("x and y must be distinct digits".into()));
    }
    if !omega_tilde.starts_with(omega) {
        return Err(Error::Domain(
            "the extension must begin with the base word".into(),
        ));
    }
    if t.value() <= &crate::exact_cf::QuadSurd::from_int(3) {
        return Err(Error::Domain("threshold must exceed 3".into()));
    }
    let base = bad_cut_word(omega, x, y);
    let extended = bad_cut_word(omega_tilde, x, y);
    let cert = membership(&base.word(), t, budget);
    let witness = match (cert.verdict, cert.witness) {
        (Verdict::In, Some(s)) => s,
        _ => {
            return Err(Error::PreconditionUnverified(format!(
                "{base} not certified in Σ({t})"
            )))
        }
    };
    let pos = base.context_left.len() as i64;
    let base_lambda = lambda_at(&witness, pos);
    let sup = lambda_sup(extended.word().digits(), extended.context_left.len());
    let verdict = sup.cmp_threshold(t) == Ordering::Less;
    Ok(CompareReport {
        base,
        extended,
        witness,
        base_lambda,
        extended_sup: SurdSum::from(sup.to_surd()),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cut(s: &str) -> Cut {
        s.parse().unwrap()
    }

    #[test]
    fn basic_classes() {
        assert_eq!(classify_cut(&cut("2211|2211")).class, Class::Good);
        assert_eq!(classify_cut(&cut("2222|1111")).class, Class::Bad);
        assert_eq!(classify_cut(&cut("222|222")).class, Class::Good);
    }

    #[test]
    fn template_matching() {
        let c = cut("ab|ab");
        assert_eq!(
            push_cut(&UVWord::empty(), &c, CutTemplate::GoodSymmetric).unwrap(),
            c
        );
        assert!(push_cut(&UVWord::empty(), &c, CutTemplate::BadSymmetric).is_err());
        let img = push_cut(&"U".parse().unwrap(), &c, CutTemplate::GoodSymmetric).unwrap();
        // u = ab, v = b: a·b·b | a·b·b
        assert_eq!(img, cut("abb|abb"));
        let img = push_cut(
            &"V".parse().unwrap(),
            &cut("aa|bb"),
            CutTemplate::BadSymmetric,
        )
        .unwrap();
        // u = a, v = ab: a·a·a | b·a·b
        assert_eq!(img, cut("aaa|bab"));
    }
}
