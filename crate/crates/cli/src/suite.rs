use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use spectra_core::ab_words::{farey_words, theta, theta_inverse, OrderedAlphabet, UVWord};
use spectra_core::dimension::lambert_inv;
use spectra_core::exact_cf::markov_value;
use spectra_core::lang::{
    classify_cut, connecting_sequence, membership, push_cut, sigma3_factors, sigma_enumerate,
    Budget, Class, ConnectKind, Cut, CutTemplate, Threshold, Verdict,
};
use spectra_core::{BiSeq, SurdSum, Word};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn result(name: &'static str, failures: Vec<String>, checked: usize) -> SuiteResult {
    SuiteResult {
        name,
        passed: failures.is_empty() && checked > 0,
        detail: match failures.first() {
            Some(f) => format!("{} of {checked} failed; first: {f}", failures.len()),
            None => format!("{checked} checked"),
        },
    }
}

pub fn run_all(quick: bool, seed: u64, budget: &Budget) -> Vec<SuiteResult> {
    vec![
        exact_values(),
        sigma_oracle(if quick { 8 } else { 14 }, budget),
        farey_structure(if quick { 12 } else { 40 }),
        farey_triples(if quick { 4 } else { 6 }, budget),
        cut_push(if quick { 2 } else { 3 }),
        lambert(seed),
        connecting(if quick { 6 } else { 9 }),
    ]
}

fn exact_values() -> SuiteResult {
    let cases = [("11", 5), ("22", 8)];
    let mut fails = Vec::new();
    for (p, d) in cases {
        let s = BiSeq::periodic(&p.parse().unwrap()).unwrap();
        let want = SurdSum::radical(spectra_core::Rational::from_integer(1.into()), d.into());
        if markov_value(&s).value != want {
            fails.push(format!("m(per({p})) ≠ √{d}"));
        }
    }
    let s = BiSeq::periodic(&"2211".parse().unwrap()).unwrap();
    let want = SurdSum::radical(spectra_core::Rational::new(1.into(), 5.into()), 221.into());
    if markov_value(&s).value != want {
        fails.push("m(per(2211)) ≠ √221/5".into());
    }
    result("exact-values", fails, 3)
}

fn sigma_oracle(max_n: usize, budget: &Budget) -> SuiteResult {
    let t = Threshold::integer(3);
    let mut fails = Vec::new();
    let forbidden: [Word; 2] = ["121".parse().unwrap(), "212".parse().unwrap()];
    for n in 1..=max_n {
        let e = sigma_enumerate(&t, n, budget);
        let f = sigma3_factors(n);
        if e.words() != f.words() {
            fails.push(format!("n = {n}: enumeration and factors differ"));
        }
        if !e.unresolved().is_empty() {
            fails.push(format!("n = {n}: unresolved words"));
        }
        if !e.is_transpose_closed() {
            fails.push(format!("n = {n}: not closed under reversal"));
        }
        if e.words()
            .iter()
            .any(|w| forbidden.iter().any(|x| w.contains(x)))
        {
            fails.push(format!("n = {n}: contains 121 or 212"));
        }
    }
    result("sigma-oracle", fails, max_n)
}

fn farey_structure(max_n: usize) -> SuiteResult {
    let mut fails = Vec::new();
    let mut checked = 0;
    for n in 1..=max_n {
        let Ok(fw) = farey_words(n) else {
            fails.push(format!("F_{n} failed"));
            continue;
        };
        for pair in fw.windows(2) {
            checked += 1;
            if OrderedAlphabet::from_pair(&pair[0].word, &pair[1].word).is_none() {
                fails.push(format!(
                    "({}, {}) is not an alphabet",
                    pair[0].word, pair[1].word
                ));
            }
        }
        for f in &fw {
            match (theta(&f.word), theta_inverse(&f.theta)) {
                (Ok(x), Ok(w)) if x == f.theta && w == f.word => {}
                _ => fails.push(format!("θ round trip at {}", f.word)),
            }
        }
    }
    result("farey-structure", fails, checked)
}

fn farey_triples(max_n: usize, budget: &Budget) -> SuiteResult {
    let t = Threshold::integer(3);
    let mut fails = Vec::new();
    let mut checked = 0;
    for n in 2..=max_n {
        let fw = farey_words(n).unwrap_or_default();
        for tr in fw.windows(3) {
            checked += 1;
            let w = tr[0].word.concat(&tr[1].word).concat(&tr[2].word);
            if membership(&w.to_word(), &t, budget).verdict != Verdict::Out {
                fails.push(format!("{w} is not Out"));
            }
            for trimmed in [w.plus(), w.minus()] {
                if membership(&trimmed.to_word(), &t, budget).verdict != Verdict::In {
                    fails.push(format!("{trimmed} is not In"));
                }
            }
        }
    }
    result("farey-triples", fails, checked)
}

fn uv_words(max_len: usize) -> Vec<UVWord> {
    let mut all = vec![UVWord::empty()];
    let mut frontier = vec![UVWord::empty()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| ["U", "V"].map(|s| format!("{w}{s}").parse::<UVWord>().unwrap()))
            .collect();
        all.extend(frontier.iter().cloned());
    }
    all
}

fn cut_push(max_len: usize) -> SuiteResult {
    let cuts = [
        "ab|ab",
        "aab|aab",
        "abb|abb",
        "aa|bb",
        "aab|bab",
        "baba|baba",
        "bab|aba",
        "abab|abab",
        "baa|bab",
        "aba|baa",
        "bba|bba",
        "abba|bbab",
    ];
    let mut fails = Vec::new();
    let mut checked = 0;
    for c in cuts {
        let c: Cut = c.parse().unwrap();
        let before = classify_cut(&c).class;
        if !matches!(before, Class::Good | Class::Bad) {
            continue;
        }
        for w in uv_words(max_len) {
            for k in CutTemplate::all() {
                let Ok(image) = push_cut(&w, &c, k) else {
                    continue;
                };
                checked += 1;
                let after = classify_cut(&image).class;
                if after != before {
                    fails.push(format!("{c} under {w} ({}) gives {after}", k.name()));
                }
            }
        }
    }
    result("cut-push", fails, checked)
}

fn lambert(seed: u64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = Vec::new();
    for _ in 0..100 {
        let y: f64 = rng.gen_range(0.0..1e6);
        let w = lambert_inv(y).unwrap_or(f64::NAN);
        if (w * w.exp() - y).abs() > 1e-12 * y.max(1e-300) {
            fails.push(format!("y = {y}"));
        }
    }
    result("lambert", fails, 100)
}

fn connecting(max_n: usize) -> SuiteResult {
    let three = SurdSum::from_int(3);
    let mut fails = Vec::new();
    let mut prev: Option<SurdSum> = None;
    for n in 3..=max_n {
        let s = connecting_sequence(ConnectKind::AB, n, None).unwrap();
        let v = markov_value(&s).value;
        if v <= three {
            fails.push(format!("n = {n}: value ≤ 3"));
        }
        if prev.as_ref().is_some_and(|p| v > *p) {
            fails.push(format!("n = {n}: value increased"));
        }
        prev = Some(v);
    }
    result("connecting", fails, max_n - 2)
}
