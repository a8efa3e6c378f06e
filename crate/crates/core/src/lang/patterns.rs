use serde::{Deserialize, Serialize};

use crate::ab_words::{farey_words, ABWord, OrderedAlphabet};
use crate::error::{Error, Result};
use crate::exact_cf::BiSeq;
use crate::lang::membership::{membership, Budget, MembershipCertificate};
use crate::lang::threshold::Threshold;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternRule {
    /// A factor over {α, β} that begins with α² and ends with β².
    SquarePair,
    /// α^r1 β α^r2 β or α β^r1 α β^r2 α β with r2 < r1 − 1.
    Force,
    /// One of the four words w0 … w3 built from (u, v).
    BWord(u8),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternHit {
    pub rule: PatternRule,
    /// Digit positions start..end of the factor.
    pub start: usize,
    pub end: usize,
    /// Whether the length side condition for this rule holds at the given n.
    pub applicable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternReport {
    pub word: Word,
    pub alphabet: OrderedAlphabet,
    pub n: usize,
    pub hits: Vec<PatternHit>,
}

impl PatternReport {
    pub fn is_clean(&self) -> bool {
        self.hits.is_empty()
    }

    pub fn factor(&self, hit: &PatternHit) -> Word {
        self.word.slice(hit.start, hit.end)
    }
}

fn at(w: &[u8], pos: usize, tok: &[u8]) -> bool {
    w.len() >= pos + tok.len() && &w[pos..pos + tok.len()] == tok
}

/// Positions reachable from `from` by reading tokens of {α, β}.
fn reachable(w: &[u8], from: usize, al: &[u8], be: &[u8]) -> Vec<bool> {
    let mut r = vec![false; w.len() + 1];
    r[from] = true;
    for i in from..w.len() {
        if !r[i] {
            continue;
        }
        if at(w, i, al) {
            r[i + al.len()] = true;
        }
        if at(w, i, be) {
            r[i + be.len()] = true;
        }
    }
    r
}

fn run_len(w: &[u8], mut pos: usize, tok: &[u8]) -> Vec<usize> {
    // Ends of t, t², t³, … starting at pos.
    let mut ends = Vec::new();
    while at(w, pos, tok) {
        pos += tok.len();
        ends.push(pos);
    }
    ends
}

fn square_pairs(w: &[u8], al: &[u8], be: &[u8]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for s in 0..w.len() {
        if !(at(w, s, al) && at(w, s + al.len(), al)) {
            continue;
        }
        let from = s + 2 * al.len();
        let r = reachable(w, from, al, be);
        if let Some(e) = (from..=w.len()).find(|&e| r[e] && at(w, e, be) && at(w, e + be.len(), be))
        {
            out.push((s, e + 2 * be.len()));
        }
    }
    out
}

fn force_hits(w: &[u8], al: &[u8], be: &[u8]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for s in 0..w.len() {
        // α^r1 β α^r2 β
        for (i1, &e1) in run_len(w, s, al).iter().enumerate() {
            let r1 = i1 + 1;
            if !at(w, e1, be) {
                continue;
            }
            let s2 = e1 + be.len();
            for (i2, &e2) in run_len(w, s2, al).iter().enumerate() {
                let r2 = i2 + 1;
                if r2 + 1 < r1 && at(w, e2, be) {
                    out.push((s, e2 + be.len()));
                }
            }
        }
        // α β^r1 α β^r2 α β
        if at(w, s, al) {
            for (i1, &e1) in run_len(w, s + al.len(), be).iter().enumerate() {
                let r1 = i1 + 1;
                if !at(w, e1, al) {
                    continue;
                }
                for (i2, &e2) in run_len(w, e1 + al.len(), be).iter().enumerate() {
                    let r2 = i2 + 1;
                    if r2 + 1 < r1 && at(w, e2, al) && at(w, e2 + al.len(), be) {
                        out.push((s, e2 + al.len() + be.len()));
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The words w0 … w3 of (u, v), as ab-words.
pub fn bwords(al: &OrderedAlphabet) -> [ABWord; 4] {
    let (u, v) = (&al.alpha, &al.beta);
    let (a, b) = (ABWord::a(), ABWord::b());
    let cat = |parts: &[&ABWord]| parts.iter().fold(ABWord::empty(), |acc, p| acc.concat(p));
    let (up, vm) = (u.plus(), v.minus());
    let u2 = u.pow(2);
    let u3 = u.pow(3);
    [
        cat(&[&b, &up, &u2, v, &u3, &vm, &a]),
        cat(&[&b, &up, u, v, &u2, &vm, &a]),
        cat(&[&b, &up, u, v, &u2, v, &u2, &vm, &a]),
        cat(&[&b, &up, u, v, u, v, &u2, v, u, &vm, &a]),
    ]
}

/// Scans w for the forbidden factors attached to an ordered alphabet (α, β) = (u, v).
pub fn forbidden_pattern_check(w: &Word, alphabet: &OrderedAlphabet, n: usize) -> PatternReport {
    let al = alphabet.alpha.to_word();
    let be = alphabet.beta.to_word();
    let d = w.digits();
    let mut hits = Vec::new();
    // Both rules hold in Σ(3+6^-3n, 3n+2) for every alphabet.
    let long_enough = d.len() <= 3 * n + 2;
    for (start, end) in square_pairs(d, al.digits(), be.digits()) {
        hits.push(PatternHit {
            rule: PatternRule::SquarePair,
            start,
            end,
            applicable: long_enough,
        });
    }
    for (start, end) in force_hits(d, al.digits(), be.digits()) {
        hits.push(PatternHit {
            rule: PatternRule::Force,
            start,
            end,
            applicable: long_enough,
        });
    }
    let u2v = 2 * al.len() + be.len();
    let uv = al.len() + be.len();
    for (k, bw) in bwords(alphabet).iter().enumerate() {
        let needle = bw.to_word();
        let applicable = if k < 3 { u2v <= n } else { 2 * uv <= n };
        let nd = needle.digits();
        if nd.len() > d.len() {
            continue;
        }
        for s in 0..=d.len() - nd.len() {
            if &d[s..s + nd.len()] == nd {
                hits.push(PatternHit {
                    rule: PatternRule::BWord(k as u8),
                    start: s,
                    end: s + nd.len(),
                    applicable,
                });
            }
        }
    }
    PatternReport {
        word: w.clone(),
        alphabet: alphabet.clone(),
        n,
        hits,
    }
}

/// Membership of a flagged factor at 3 + 6^(−3n); the rules predict `Out`.
pub fn confirm_forbidden(factor: &Word, n: usize, budget: &Budget) -> MembershipCertificate {
    membership(factor, &Threshold::near_three(3 * n as u32, true), budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConnectKind {
    #[serde(rename = "ab")]
    AB,
    #[serde(rename = "ba")]
    BA,
    /// From overline(a) to overline(αβ).
    #[serde(rename = "a-to-αβ")]
    AToAlphaBeta,
    /// From overline(αβ) to overline(b).
    #[serde(rename = "αβ-to-b")]
    AlphaBetaToB,
}

impl std::str::FromStr for ConnectKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ab" => Ok(ConnectKind::AB),
            "ba" => Ok(ConnectKind::BA),
            "a-to-αβ" | "a-to-ab-alphabet" | "a-to-alphabet" => Ok(ConnectKind::AToAlphaBeta),
            "αβ-to-b" | "ab-alphabet-to-b" | "alphabet-to-b" => Ok(ConnectKind::AlphaBetaToB),
            _ => Err(Error::Parse(format!("unknown connecting kind {s:?}"))),
        }
    }
}

fn concat_digits(ws: &[ABWord]) -> Word {
    Word::from_raw(ws.iter().flat_map(|w| w.to_word().into_vec()).collect())
}

/// The eventually periodic sequence that runs through the Farey words between two
/// periodic ends.
///
/// For the alphabet kinds the Farey order is the letter length of the target word,
/// α(αβ)^n for `AToAlphaBeta` and (αβ)^n β for `AlphaBetaToB`, and the word list is
/// truncated at that target.
pub fn connecting_sequence(
    kind: ConnectKind,
    n: usize,
    alphabet: Option<&OrderedAlphabet>,
) -> Result<BiSeq> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let a = ABWord::a().to_word();
    let b = ABWord::b().to_word();
    match kind {
        ConnectKind::AB | ConnectKind::BA => {
            let ws: Vec<ABWord> = farey_words(n)?.into_iter().map(|f| f.word).collect();
            let s = BiSeq::with_middle(&a, &concat_digits(&ws), &b)?;
            Ok(if kind == ConnectKind::BA {
                s.transpose()
            } else {
                s
            })
        }
        ConnectKind::AToAlphaBeta | ConnectKind::AlphaBetaToB => {
            let al = alphabet.ok_or_else(|| Error::Domain("this kind needs an alphabet".into()))?;
            let ab = al.period();
            let target = if kind == ConnectKind::AToAlphaBeta {
                al.alpha.concat(&ab.pow(n))
            } else {
                ab.pow(n).concat(&al.beta)
            };
            let ws: Vec<ABWord> = farey_words(target.len())?
                .into_iter()
                .map(|f| f.word)
                .collect();
            let i = ws
                .iter()
                .position(|w| *w == target)
                .ok_or_else(|| Error::Domain(format!("{target} is not a Farey word")))?;
            if kind == ConnectKind::AToAlphaBeta {
                Ok(BiSeq::with_middle(
                    &a,
                    &concat_digits(&ws[..=i]),
                    &ab.to_word(),
                )?)
            } else {
                Ok(BiSeq::with_middle(
                    &ab.to_word(),
                    &concat_digits(&ws[i..]),
                    &b,
                )?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connecting_ab_three() {
        let s = connecting_sequence(ConnectKind::AB, 3, None).unwrap();
        // a · aab · ab · abb · b
        let expect: Word = "22222211221122111111".parse().unwrap();
        assert_eq!(s.right_transient, expect);
        assert_eq!(s.left_period.to_string(), "22");
        assert_eq!(s.right_period.to_string(), "11");
    }

    #[test]
    fn ab_powers_are_clean() {
        let al = OrderedAlphabet::root();
        let w = ABWord::a().concat(&ABWord::b()).pow(5).to_word();
        assert!(forbidden_pattern_check(&w, &al, 20).is_clean());
        let bad: Word = "2222221111".parse().unwrap();
        let r = forbidden_pattern_check(&bad, &al, 20);
        assert!(r.hits.iter().any(|h| h.rule == PatternRule::SquarePair));
    }

    #[test]
    fn force_rule() {
        let al = OrderedAlphabet::root();
        // a^3 b a b: r1 = 3, r2 = 1
        let w = "aaabab".parse::<ABWord>().unwrap().to_word();
        let r = forbidden_pattern_check(&w, &al, 20);
        assert!(r.hits.iter().any(|h| h.rule == PatternRule::Force));
        let w = "aabab".parse::<ABWord>().unwrap().to_word();
        let r = forbidden_pattern_check(&w, &al, 20);
        assert!(!r.hits.iter().any(|h| h.rule == PatternRule::Force));
    }
}
