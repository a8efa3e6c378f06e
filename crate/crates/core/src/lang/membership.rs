use std::cmp::Ordering;
use std::collections::HashMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::ab_words::{theta_inverse, ABWord};
use crate::exact_cf::{lambda_at, markov_value, BiSeq, Rational};
use crate::lang::bounds::{
    self, approx_ranges, find_dead, lambda_inf, lambda_range, SCREEN_MARGIN,
};
use crate::lang::threshold::Threshold;
use crate::word::Word;

/// Search limits for membership certificates.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Largest number of digits added around a word while refuting it.
    pub max_depth: usize,
    /// Largest number of search nodes per refutation.
    pub max_nodes: usize,
    /// Longest period (in digits) tried as a periodic closing; `None` means 2n + 8.
    pub witness_len: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_depth: 256,
            max_nodes: 200_000,
            witness_len: None,
        }
    }
}

impl Budget {
    pub(crate) fn witness_len_for(&self, n: usize) -> usize {
        self.witness_len.unwrap_or(2 * n + 8)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    In,
    Out,
    Unresolved,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::In => "in",
            Verdict::Out => "out",
            Verdict::Unresolved => "unresolved",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipCertificate {
    pub word: Word,
    pub threshold: Threshold,
    pub verdict: Verdict,
    /// For `In`: a sequence with Markov value at most t carrying the word at positions 0..n.
    #[serde(serialize_with = "opt_display")]
    pub witness: Option<BiSeq>,
    /// For `Out`: the largest number of digits added on any branch of the refutation.
    pub refutation_depth: Option<usize>,
}

fn opt_display<S: Serializer, T: std::fmt::Display>(
    x: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

impl MembershipCertificate {
    fn new(word: &Word, t: &Threshold, verdict: Verdict) -> Self {
        MembershipCertificate {
            word: word.clone(),
            threshold: t.clone(),
            verdict,
            witness: None,
            refutation_depth: None,
        }
    }

    fn inside(word: &Word, t: &Threshold, witness: BiSeq) -> Self {
        let mut c = Self::new(word, t, Verdict::In);
        c.witness = Some(witness);
        c
    }

    fn outside(word: &Word, t: &Threshold, depth: usize) -> Self {
        let mut c = Self::new(word, t, Verdict::Out);
        c.refutation_depth = Some(depth);
        c
    }

    /// The right period of the witness, when the witness is purely periodic.
    pub fn witness_period(&self) -> Option<Word> {
        let w = self.witness.as_ref()?;
        let s = w.normalize();
        if s.left_transient.is_empty() && s.right_transient.is_empty() {
            Some(s.right_period.clone())
        } else {
            Some(w.right_period.clone())
        }
    }

    /// Re-checks the certificate by independent means: an `In` witness through the exact
    /// Markov value, an `Out` refutation by a search that tests every position exactly.
    pub fn verify(&self, budget: &Budget) -> bool {
        match self.verdict {
            Verdict::In => {
                let Some(s) = &self.witness else { return false };
                let n = self.word.len() as i64;
                if s.window(0, n) != self.word.digits() {
                    return false;
                }
                markov_value(s).value <= self.threshold.to_surd_sum()
            }
            Verdict::Out => {
                let mut r = Refuter::new(&self.threshold, budget, true);
                let depth = self.refutation_depth.unwrap_or(budget.max_depth);
                r.max_depth = depth.max(budget.max_depth);
                r.run(&mut self.word.digits().to_vec(), 0).is_some()
            }
            Verdict::Unresolved => true,
        }
    }
}

/// The words 𝗰(𝒜) ∪ {a, b} as digit words of length at most `max_digits`, shortest first
/// and by increasing θ within a length.
pub fn markov_periods(max_digits: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if max_digits >= 2 {
        out.push(ABWord::a().to_word());
        out.push(ABWord::b().to_word());
    }
    for q in 2..=(max_digits / 2) as u64 {
        for p in 1..q {
            if p.gcd(&q) == 1 {
                let th = Rational::new(p.into(), q.into());
                let w = theta_inverse(&th).expect("θ in (0,1)");
                out.push(w.to_word());
            }
        }
    }
    out
}

/// Knuth–Morris–Pratt failure table.
fn failure(w: &[u8]) -> Vec<usize> {
    let mut f = vec![0; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = f[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        f[i] = k;
    }
    f
}

/// An offset o < |p| with w occurring at position o of the periodic word p^∞.
pub(crate) fn find_cyclic(p: &[u8], w: &[u8], fail: &[usize]) -> Option<usize> {
    if w.is_empty() {
        return Some(0);
    }
    let len = w.len() + p.len() - 1;
    let mut k = 0;
    for i in 0..len {
        let c = p[i % p.len()];
        while k > 0 && c != w[k] {
            k = fail[k - 1];
        }
        if c == w[k] {
            k += 1;
        }
        if k == w.len() {
            return Some(i + 1 - w.len());
        }
    }
    None
}

const LOCAL_RADII: [i64; 2] = [24, 96];

/// Exact test λ_i(s) ≤ t, trying cheap extremal bounds before the exact λ.
fn lambda_at_most(s: &BiSeq, i: i64, t: &Threshold) -> bool {
    for r in LOCAL_RADII {
        let u = s.window(i - r, i + r + 1);
        let (lo, hi) = lambda_range(&u, r as usize);
        if hi.cmp_threshold(t) != Ordering::Greater {
            return true;
        }
        if lo.cmp_threshold(t) == Ordering::Greater {
            return false;
        }
    }
    lambda_at(s, i) <= t.to_surd_sum()
}

/// Exact test m(s) ≤ t for an eventually periodic sequence.
///
/// Uses the same window as the exact Markov value: the positions up to two periods into
/// each periodic region together with every phase of the two periodic limits.
pub fn markov_at_most(s: &BiSeq, t: &Threshold) -> bool {
    let periodic_ok = |p: &Word| {
        let ps = BiSeq::periodic(p).expect("nonempty period");
        (0..p.len() as i64).all(|i| lambda_at_most(&ps, i, t))
    };
    if !periodic_ok(&s.right_period) {
        return false;
    }
    if s.left_period != s.right_period && !periodic_ok(&s.left_period) {
        return false;
    }
    if s.left_transient.is_empty()
        && s.right_transient.is_empty()
        && s.left_period == s.right_period
    {
        return true;
    }
    let lo = s.left_end() - 2 * s.left_period.len() as i64;
    let hi = s.right_start() + 2 * s.right_period.len() as i64;
    (lo..hi).all(|i| lambda_at_most(s, i, t))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Two-sided branch-and-bound: every extension of the word must reach a node with a
/// position whose λ exceeds t for all further extensions.
pub(crate) struct Refuter<'a> {
    t: &'a Threshold,
    t_f: f64,
    pub max_depth: usize,
    max_nodes: usize,
    nodes: usize,
    exact_screen: bool,
}

impl<'a> Refuter<'a> {
    pub fn new(t: &'a Threshold, budget: &Budget, exact_screen: bool) -> Self {
        Refuter {
            t,
            t_f: t.to_f64(),
            max_depth: budget.max_depth,
            max_nodes: budget.max_nodes,
            nodes: 0,
            exact_screen,
        }
    }

    fn dead(&self, u: &[u8]) -> bool {
        if self.exact_screen {
            (0..u.len()).any(|j| lambda_inf(u, j).cmp_threshold(self.t) == Ordering::Greater)
        } else {
            find_dead(u, self.t, self.t_f).is_some()
        }
    }

    /// The side to extend and the digit order, extremal-tail child first.
    fn choose(&self, u: &[u8], ext: usize) -> (Side, [u8; 2]) {
        let approx = approx_ranges(u);
        let best = approx
            .iter()
            .enumerate()
            .filter(|(_, a)| a.hi() > self.t_f - SCREEN_MARGIN)
            .max_by(|x, y| x.1.lo().total_cmp(&y.1.lo()).then(y.0.cmp(&x.0)));
        let Some((j, a)) = best else {
            let side = if ext.is_multiple_of(2) {
                Side::Right
            } else {
                Side::Left
            };
            return (side, [1, 2]);
        };
        let (side, known) = if a.f_hi - a.f_lo >= a.b_hi - a.b_lo {
            (Side::Right, u.len() - 1 - j)
        } else {
            (Side::Left, j)
        };
        // The tail minimizing λ_j starts with 2 after an even number of known digits.
        let order = if known % 2 == 0 { [2, 1] } else { [1, 2] };
        (side, order)
    }

    /// Maximum extension depth of a complete refutation, or None within budget.
    pub fn run(&mut self, u: &mut Vec<u8>, ext: usize) -> Option<usize> {
        self.nodes += 1;
        if self.dead(u) {
            return Some(ext);
        }
        if ext >= self.max_depth || self.nodes >= self.max_nodes {
            return None;
        }
        let (side, order) = self.choose(u, ext);
        let mut worst = ext;
        for d in order {
            let depth = match side {
                Side::Right => {
                    u.push(d);
                    let r = self.run(u, ext + 1);
                    u.pop();
                    r
                }
                Side::Left => {
                    u.insert(0, d);
                    let r = self.run(u, ext + 1);
                    u.remove(0);
                    r
                }
            }?;
            worst = worst.max(depth);
        }
        Some(worst)
    }
}

/// Periodic closings overline(p), p ∈ 𝗰(𝒜) ∪ {a, b}, indexed by their length-n factors.
pub struct WitnessIndex {
    n: usize,
    periods: Vec<Word>,
    map: HashMap<Vec<u8>, (u32, u32)>,
}

impl WitnessIndex {
    /// Keeps only the periods whose Markov value is certified to be at most t.
    pub fn build(n: usize, max_digits: usize, t: &Threshold) -> Self {
        let periods: Vec<Word> = markov_periods(max_digits)
            .into_par_iter()
            .filter(|p| {
                let s = BiSeq::periodic(p).expect("nonempty");
                markov_at_most(&s, t)
            })
            .collect();
        let mut map = HashMap::new();
        for (k, p) in periods.iter().enumerate() {
            let d = p.digits();
            for o in 0..d.len() {
                let f: Vec<u8> = (0..n).map(|i| d[(o + i) % d.len()]).collect();
                map.entry(f).or_insert((k as u32, o as u32));
            }
        }
        WitnessIndex { n, periods, map }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lookup(&self, w: &[u8]) -> Option<BiSeq> {
        let &(k, o) = self.map.get(w)?;
        let s = BiSeq::periodic(&self.periods[k as usize]).expect("nonempty");
        Some(s.shift(o as i64))
    }
}

fn periodic_closing(w: &Word, t: &Threshold, max_digits: usize) -> Option<BiSeq> {
    let fail = failure(w.digits());
    for p in markov_periods(max_digits) {
        if let Some(o) = find_cyclic(p.digits(), w.digits(), &fail) {
            let s = BiSeq::periodic(&p).expect("nonempty").shift(o as i64);
            if markov_at_most(&s, t) {
                return Some(s);
            }
        }
    }
    None
}

const CLOSING_PERIODS: [&str; 8] = ["1", "2", "12", "21", "11", "22", "1122", "2211"];

/// Closings …x^∞ w y^∞… for short periods x, y.
fn general_closing(w: &Word, t: &Threshold) -> Option<BiSeq> {
    for x in CLOSING_PERIODS {
        for y in CLOSING_PERIODS {
            let s = BiSeq::with_middle(&x.parse().unwrap(), w, &y.parse().unwrap()).ok()?;
            if markov_at_most(&s, t) {
                return Some(s);
            }
        }
    }
    None
}

/// Periodic closings of u by each of its periods, read from the border chain.
fn border_closings(u: &[u8], offset: usize, t: &Threshold) -> Option<BiSeq> {
    let fail = failure(u);
    let mut k = u.len();
    let mut seen = Vec::new();
    while k > 0 {
        let border = fail[k - 1];
        k = border;
        let period = u.len() - border;
        if seen.contains(&period) {
            continue;
        }
        seen.push(period);
        let s = BiSeq::periodic(&Word::from_raw(u[..period].to_vec()))
            .expect("nonempty")
            .shift(offset as i64);
        if markov_at_most(&s, t) {
            return Some(s);
        }
    }
    None
}

/// Extensions x w y with |x| + |y| ≤ max_ext that survive the exact bounds, each closed
/// periodically by its own periods.
fn extension_closing(w: &Word, t: &Threshold, max_ext: usize) -> Option<BiSeq> {
    let t_f = t.to_f64();
    let mut level: Vec<(Vec<u8>, usize)> = vec![(w.digits().to_vec(), 0)];
    for _ in 0..=max_ext {
        let found = level
            .par_iter()
            .find_map_first(|(u, off)| border_closings(u, *off, t));
        if found.is_some() {
            return found;
        }
        let mut next: Vec<(Vec<u8>, usize)> = level
            .par_iter()
            .flat_map_iter(|(u, off)| {
                let mut out = Vec::with_capacity(4);
                for d in [1u8, 2] {
                    let mut r = u.clone();
                    r.push(d);
                    out.push((r, *off));
                    let mut l = Vec::with_capacity(u.len() + 1);
                    l.push(d);
                    l.extend_from_slice(u);
                    out.push((l, off + 1));
                }
                out.into_iter()
                    .filter(|(c, _)| find_dead(c, t, t_f).is_none())
            })
            .collect();
        next.sort();
        next.dedup();
        if next.is_empty() || next.len() > EXTENSION_WIDTH {
            return None;
        }
        level = next;
    }
    None
}

/// Widest extension level searched for a closing.
const EXTENSION_WIDTH: usize = 1 << 16;
const MAX_EXTENSION: usize = 16;

fn self_closing(w: &Word, t: &Threshold) -> Option<BiSeq> {
    if w.is_empty() {
        return None;
    }
    let s = BiSeq::periodic(w).ok()?;
    markov_at_most(&s, t).then_some(s)
}

pub(crate) fn certify(
    w: &Word,
    t: &Threshold,
    budget: &Budget,
    index: Option<&WitnessIndex>,
) -> MembershipCertificate {
    let t_f = t.to_f64();
    if find_dead(w.digits(), t, t_f).is_some() {
        return MembershipCertificate::outside(w, t, 0);
    }
    if let Some(s) = index.and_then(|ix| ix.lookup(w.digits())) {
        return MembershipCertificate::inside(w, t, s);
    }
    if t.is_at_least_sqrt12() || bounds::all_settled(w.digits(), t) {
        if let Some(s) = self_closing(w, t) {
            return MembershipCertificate::inside(w, t, s);
        }
    }
    if index.is_none() {
        if let Some(s) = periodic_closing(w, t, budget.witness_len_for(w.len())) {
            return MembershipCertificate::inside(w, t, s);
        }
    }
    let mut r = Refuter::new(t, budget, false);
    if let Some(depth) = r.run(&mut w.digits().to_vec(), 0) {
        return MembershipCertificate::outside(w, t, depth);
    }
    if let Some(s) = self_closing(w, t)
        .or_else(|| general_closing(w, t))
        .or_else(|| extension_closing(w, t, MAX_EXTENSION))
    {
        return MembershipCertificate::inside(w, t, s);
    }
    MembershipCertificate::new(w, t, Verdict::Unresolved)
}

/// Certified membership of w in Σ(t, |w|).
pub fn membership(w: &Word, t: &Threshold, budget: &Budget) -> MembershipCertificate {
    certify(w, t, budget, None)
}
