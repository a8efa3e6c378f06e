use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::exact_cf::BiSeq;
use crate::lang::bounds::find_dead;
use crate::lang::membership::{
    certify, markov_periods, Budget, MembershipCertificate, Verdict, WitnessIndex,
};
use crate::lang::threshold::Threshold;
use crate::word::Word;

/// A set of length-n words, each with its membership certificate.
#[derive(Clone, Debug, Serialize)]
pub struct LanguageSet {
    pub n: usize,
    pub threshold: Threshold,
    pub entries: Vec<MembershipCertificate>,
}

impl LanguageSet {
    /// Words not certified `Out`, i.e. those certified `In` plus the unresolved ones.
    pub fn words(&self) -> BTreeSet<Word> {
        self.entries
            .iter()
            .filter(|c| c.verdict != Verdict::Out)
            .map(|c| c.word.clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn unresolved(&self) -> Vec<&Word> {
        self.entries
            .iter()
            .filter(|c| c.verdict == Verdict::Unresolved)
            .map(|c| &c.word)
            .collect()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.entries
            .binary_search_by(|c| c.word.cmp(w))
            .map(|i| self.entries[i].verdict != Verdict::Out)
            .unwrap_or(false)
    }

    pub fn is_transpose_closed(&self) -> bool {
        let words = self.words();
        words.iter().all(|w| words.contains(&w.transpose()))
    }
}

/// Σ(t, n) by level-wise branch-and-bound over {1,2}^n.
///
/// A candidate of length k survives when both of its length-(k−1) factors survived and no
/// position is forced above t by extremal tails. Survivors at length n are certified `In`
/// through periodic closings or other witnesses, `Out` by two-sided refutation, or left
/// `Unresolved`; certified `Out` words are dropped from the set.
pub fn sigma_enumerate(t: &Threshold, n: usize, budget: &Budget) -> LanguageSet {
    let t_f = t.to_f64();
    let mut level: Vec<Vec<u8>> = vec![vec![1], vec![2]];
    level.retain(|u| find_dead(u, t, t_f).is_none());
    for _ in 1..n {
        let prev: HashSet<&[u8]> = level.iter().map(|u| u.as_slice()).collect();
        let mut next: Vec<Vec<u8>> = level
            .par_iter()
            .flat_map_iter(|u| {
                [1u8, 2].into_iter().filter_map(|d| {
                    let mut c = u.clone();
                    c.push(d);
                    (prev.contains(&c[1..]) && find_dead(&c, t, t_f).is_none()).then_some(c)
                })
            })
            .collect();
        next.sort();
        level = next;
    }
    let index = WitnessIndex::build(n, budget.witness_len_for(n), t);
    let mut entries: Vec<MembershipCertificate> = level
        .into_par_iter()
        .map(|u| certify(&Word::from_raw(u), t, budget, Some(&index)))
        .filter(|c| c.verdict != Verdict::Out)
        .collect();
    entries.sort_by(|a, b| a.word.cmp(&b.word));
    LanguageSet {
        n,
        threshold: t.clone(),
        entries,
    }
}

/// Length-n factors of overline(p) for p ∈ 𝗰(𝒜) ∪ {a, b}, a combinatorial description of
/// Σ(3, n).
///
/// Periods are added by increasing length; the search stops once the set has stayed the
/// same for ⌈n/2⌉ + 1 consecutive lengths, and never before period length n + 4.
pub fn sigma3_factors(n: usize) -> LanguageSet {
    let mut found: BTreeMap<Vec<u8>, (Word, usize)> = BTreeMap::new();
    let mut stable = 0;
    let need = n.div_ceil(2) + 1;
    let mut len = 2;
    loop {
        let before = found.len();
        for p in markov_periods(len).into_iter().filter(|p| p.len() == len) {
            let d = p.digits();
            for o in 0..d.len() {
                let f: Vec<u8> = (0..n).map(|i| d[(o + i) % d.len()]).collect();
                found.entry(f).or_insert_with(|| (p.clone(), o));
            }
        }
        if found.len() == before {
            stable += 1;
        } else {
            stable = 0;
        }
        if stable >= need && len >= n + 4 {
            break;
        }
        len += 2;
    }
    let t = Threshold::integer(3);
    let entries = found
        .into_iter()
        .map(|(f, (p, o))| MembershipCertificate {
            word: Word::from_raw(f),
            threshold: t.clone(),
            verdict: Verdict::In,
            witness: Some(BiSeq::periodic(&p).expect("nonempty").shift(o as i64)),
            refutation_depth: None,
        })
        .collect();
    LanguageSet {
        n,
        threshold: t,
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(l: &LanguageSet) -> Vec<String> {
        l.words().iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn small_levels() {
        let b = Budget::default();
        let t = Threshold::integer(3);
        assert_eq!(strs(&sigma_enumerate(&t, 1, &b)), ["1", "2"]);
        let l3 = sigma_enumerate(&t, 3, &b);
        assert_eq!(strs(&l3), ["111", "112", "122", "211", "221", "222"]);
        assert_eq!(strs(&sigma3_factors(3)), strs(&l3));
        assert!(l3.unresolved().is_empty());
    }

    #[test]
    fn factors_of_ab() {
        let l = sigma3_factors(4);
        assert!(l.contains(&"2211".parse().unwrap()));
        assert!(l.contains(&"1122".parse().unwrap()));
        assert!(!l.contains(&"2121".parse().unwrap()));
    }
}
