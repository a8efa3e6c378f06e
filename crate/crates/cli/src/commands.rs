use std::time::Instant;

use serde_json::{json, Value};
use spectra_core::ab_words::{enumerate_alphabets, farey_words, theta, OrderedAlphabet, UVWord};
use spectra_core::dimension::{
    blocks_sup, d_asymptotic_log, free_blocks, lambert_inv, moran_bracket, thm2_bound_log,
    DimBracket, Distortion,
};
use spectra_core::exact_cf::{cylinder, eval_cf, lambda_at, markov_value, r_exponent};
use spectra_core::lang::{
    classify_cut, classify_cut_with_depth, connecting_sequence, membership, parse_exact, push_cut,
    sigma3_factors, sigma_enumerate, Budget, Class, ConnectKind, Cut, CutTemplate, LanguageSet,
    MembershipCertificate, Threshold, Verdict,
};
use spectra_core::renorm::{find_alphabet, semi_renormalize};
use spectra_core::{BiSeq, Rational, SurdSum, Word};

use crate::args::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::render::{exact, float, surd_json, Report, Status};
use crate::suite;

pub fn budget(cfg: &RunConfig) -> Budget {
    Budget {
        max_depth: cfg.max_depth as usize,
        max_nodes: cfg.max_nodes as usize,
        ..Budget::default()
    }
}

/// Digits, or a/b letters mapped to 22/11.
pub fn parse_word(s: &str) -> CliResult<Word> {
    let s = s.trim();
    if !s.is_empty() && s.chars().all(|c| c == 'a' || c == 'b') {
        Ok(s.parse::<spectra_core::ab_words::ABWord>()?.to_word())
    } else {
        Ok(s.parse()?)
    }
}

/// |ln ρ| for inputs like `6^-18`, `e^-100`, `3*10^-5` or `0.001`.
pub fn abs_log(s: &str) -> CliResult<f64> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("cannot read ρ from {s:?}"));
    let ln = if let Some(e) = s.strip_prefix("e^") {
        exponent(e).ok_or_else(bad)?
    } else if let Some((b, e)) = s.split_once('^') {
        let base: f64 = b.parse().map_err(|_| bad())?;
        exponent(e).ok_or_else(bad)? * base.ln()
    } else {
        s.parse::<f64>().map_err(|_| bad())?.ln()
    };
    if !(ln < 0.0 && ln.is_finite()) {
        return Err(CliError::Core(spectra_core::Error::Domain(format!(
            "ρ must lie in (0, 1), got {s}"
        ))));
    }
    Ok(-ln)
}

fn exponent(e: &str) -> Option<f64> {
    let (neg, e) = match e.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, e),
    };
    let v = e
        .split('*')
        .map(|f| f.parse::<f64>().ok())
        .try_fold(1.0, |acc, f| f.map(|f| acc * f))?;
    Some(if neg { -v } else { v })
}

fn verify_fail(what: impl Into<String>) -> CliError {
    CliError::Verify(what.into())
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> CliResult<Report> {
    let digits = cfg.digits as usize;
    match cmd {
        Command::Eval { seq, at, word } => match (seq, word) {
            (Some(seq), _) => eval_seq(&seq.parse()?, *at, cfg),
            (None, Some(w)) => {
                let w = parse_word(w)?;
                let v = eval_cf(&w)?;
                if cfg.verify {
                    let f = w
                        .digits()
                        .iter()
                        .rev()
                        .fold(0.0, |acc, &d| 1.0 / (d as f64 + acc));
                    if (f - ratio_f64(&v)).abs() > 1e-12 {
                        return Err(verify_fail(
                            "finite continued fraction disagrees with float",
                        ));
                    }
                }
                Ok(Report::record(
                    json!({"word": w.to_string(), "value": v.to_string()}),
                    vec![("word", w.to_string()), ("value", v.to_string())],
                ))
            }
            (None, None) => Err(CliError::Usage("eval needs --seq or --word".into())),
        },
        Command::Interval { word } => {
            let w = parse_word(word)?;
            let c = cylinder(&w)?;
            let r = r_exponent(&w)?;
            if cfg.verify {
                let v = eval_cf(&w)?;
                if c.length != &c.hi - &c.lo || (v != c.lo && v != c.hi) {
                    return Err(verify_fail("cylinder endpoints"));
                }
                let l = -ratio_f64(&c.length).ln();
                if (l - l.round()).abs() > 1e-9 && r != l.floor() as u64 {
                    return Err(verify_fail("r(w) disagrees with the float logarithm"));
                }
            }
            Ok(Report::record(
                json!({"word": w.to_string(), "lo": c.lo.to_string(), "hi": c.hi.to_string(),
                       "length": c.length.to_string(), "r": r}),
                vec![
                    ("word", w.to_string()),
                    ("lo", c.lo.to_string()),
                    ("hi", c.hi.to_string()),
                    ("length", c.length.to_string()),
                    ("r", r.to_string()),
                ],
            ))
        }
        Command::Alphabets { n } => {
            let al = enumerate_alphabets(*n);
            if cfg.verify {
                for a in &al {
                    if OrderedAlphabet::from_pair(&a.alpha, &a.beta).as_ref() != Some(a) {
                        return Err(verify_fail(format!("witness of ({}, {})", a.alpha, a.beta)));
                    }
                }
            }
            let rows = al
                .iter()
                .map(|a| {
                    vec![
                        a.depth().to_string(),
                        a.witness.to_string(),
                        a.alpha.to_string(),
                        a.beta.to_string(),
                    ]
                })
                .collect();
            Ok(Report::table(
                serde_json::to_value(&al)?,
                vec!["depth", "witness", "alpha", "beta"],
                rows,
            ))
        }
        Command::Farey { n } => {
            let fw = farey_words(*n)?;
            if cfg.verify {
                for (i, f) in fw.iter().enumerate() {
                    if theta(&f.word)? != f.theta {
                        return Err(verify_fail(format!("θ({}) ≠ {}", f.word, f.theta)));
                    }
                    if i > 0 && fw[i - 1].theta >= f.theta {
                        return Err(verify_fail("Farey order"));
                    }
                }
            }
            let rows = fw
                .iter()
                .map(|f| {
                    vec![
                        f.word.to_string(),
                        f.theta.to_string(),
                        f.endpoint.to_string(),
                    ]
                })
                .collect();
            Ok(Report::table(
                serde_json::to_value(&fw)?,
                vec!["word", "theta", "endpoint"],
                rows,
            ))
        }
        Command::Renorm { word, n, alphabet } => {
            let w = parse_word(word)?;
            let (al, decomposition, json) = match alphabet {
                Some(wit) => {
                    let al = OrderedAlphabet::from_witness(&wit.parse::<UVWord>()?);
                    let d = semi_renormalize(&w, &al)?;
                    let j = serde_json::to_value(&d)?;
                    (al, d, j)
                }
                None => {
                    let n = n.unwrap_or(w.len().div_ceil(3));
                    let fit = find_alphabet(&w, n)?;
                    let j = serde_json::to_value(&fit)?;
                    (fit.alphabet, fit.decomposition, j)
                }
            };
            if cfg.verify && !decomposition.is_valid() {
                return Err(verify_fail("decomposition does not reassemble the word"));
            }
            Ok(Report::record(
                json,
                vec![
                    ("word", w.to_string()),
                    ("witness", al.witness.to_string()),
                    ("alpha", al.alpha.to_string()),
                    ("beta", al.beta.to_string()),
                    ("kernel", decomposition.kernel_factorization.to_string()),
                    ("ab-word", decomposition.word().to_string()),
                ],
            ))
        }
        Command::Sigma { t, n, word, oracle } => {
            let t: Threshold = t.parse()?;
            let b = budget(cfg);
            if let Some(w) = word {
                let c = membership(&parse_word(w)?, &t, &b);
                if cfg.verify && !c.verify(&b) {
                    return Err(verify_fail(format!("certificate of {}", c.word)));
                }
                return Ok(certificates_report(&[c], &t, None));
            }
            let n = n.ok_or_else(|| CliError::Usage("sigma needs --n or --word".into()))?;
            if n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let set = if *oracle {
                if t != Threshold::integer(3) {
                    return Err(CliError::Usage("--oracle lists Σ(3, n) only".into()));
                }
                sigma3_factors(n)
            } else {
                sigma_enumerate(&t, n, &b)
            };
            if cfg.verify {
                if let Some(c) = set.entries.iter().find(|c| !c.verify(&b)) {
                    return Err(verify_fail(format!("certificate of {}", c.word)));
                }
            }
            Ok(certificates_report(&set.entries, &t, Some(&set)))
        }
        Command::Cuts { cut, depth } => {
            let c: Cut = cut.parse()?;
            let cc = classify_cut_with_depth(&c, *depth);
            if cfg.verify {
                let again = classify_cut_with_depth(&c, depth + 16);
                let settled = |k: Class| matches!(k, Class::Good | Class::Bad);
                if settled(cc.class) && again.class != cc.class {
                    return Err(verify_fail("classification changed at a larger depth"));
                }
            }
            let status = if matches!(cc.class, Class::Unresolved(_)) {
                Status::Unresolved
            } else {
                Status::Done
            };
            Ok(Report::record(
                json!({"cut": c.to_string(), "classification": cc}),
                vec![
                    ("cut", c.to_string()),
                    ("class", cc.class.to_string()),
                    ("inf-left", exact(&cc.inf_left, digits)),
                    ("sup-left", exact(&cc.sup_left, digits)),
                    ("inf-right", exact(&cc.inf_right, digits)),
                    ("sup-right", exact(&cc.sup_right, digits)),
                ],
            )
            .with_status(status))
        }
        Command::Pushcut { subst, cut, kind } => {
            let w: UVWord = subst.parse()?;
            let c: Cut = cut.parse()?;
            let k: CutTemplate = kind.parse()?;
            let image = push_cut(&w, &c, k)?;
            let (before, after) = (classify_cut(&c).class, classify_cut(&image).class);
            if cfg.verify && before != after {
                return Err(verify_fail(format!(
                    "{c} is {before} but its image is {after}"
                )));
            }
            Ok(Report::record(
                json!({"subst": w.to_string(), "kind": k.name(), "cut": c.to_string(),
                       "image": image.to_string(), "class_before": before.to_string(),
                       "class_after": after.to_string()}),
                vec![
                    ("subst", w.to_string()),
                    ("kind", k.name().to_string()),
                    ("cut", c.to_string()),
                    ("image", image.to_string()),
                    ("class-before", before.to_string()),
                    ("class-after", after.to_string()),
                ],
            ))
        }
        Command::Connect { kind, n, alphabet } => {
            let k: ConnectKind = kind.parse()?;
            let al = alphabet
                .as_ref()
                .map(|w| {
                    w.parse::<UVWord>()
                        .map(|w| OrderedAlphabet::from_witness(&w))
                })
                .transpose()?;
            let s = connecting_sequence(k, *n, al.as_ref())?;
            let mv = markov_value(&s);
            if cfg.verify && markov_value(&s.transpose()).value != mv.value {
                return Err(verify_fail("Markov value of the transpose differs"));
            }
            Ok(Report::record(
                json!({"kind": kind, "n": n, "sequence": s.to_string(),
                       "markov_value": surd_json(&mv.value, digits), "attained": mv.attained}),
                vec![
                    ("kind", kind.clone()),
                    ("n", n.to_string()),
                    ("sequence", s.to_string()),
                    ("markov-value", exact(&mv.value, digits)),
                    ("attained", mv.attained.to_string()),
                ],
            ))
        }
        Command::Dim {
            t,
            m,
            blocks,
            level,
            certify,
            sweep,
            distortion,
            timing,
        } => {
            let mode: Distortion = distortion.parse()?;
            let start = Instant::now();
            if let Some(bs) = blocks {
                return dim_blocks(bs, *level, certify.as_deref(), mode, cfg);
            }
            let ts: Vec<Threshold> = match (t, sweep) {
                (Some(t), _) => vec![t.parse()?],
                (None, Some(r)) => {
                    let (a, b) = r
                        .split_once("..")
                        .and_then(|(a, b)| Some((a.parse::<u32>().ok()?, b.parse::<u32>().ok()?)))
                        .ok_or_else(|| CliError::Usage(format!("bad range {r:?}")))?;
                    (a..=b)
                        .map(|n| Threshold::near_three(3 * n, true))
                        .collect()
                }
                (None, None) => {
                    return Err(CliError::Usage("dim needs --t, --blocks or --sweep".into()))
                }
            };
            let b = budget(cfg);
            let mut rows = Vec::new();
            let mut out = Vec::new();
            let mut status = Status::Done;
            for t in &ts {
                let d = dim_sigma(t, *m, &b, mode, cfg.verify)?;
                if d.unresolved > 0 {
                    status = Status::Unresolved;
                }
                rows.push(vec![
                    t.to_string(),
                    float(d.bracket.lower),
                    float(d.bracket.upper),
                    d.bracket.level.to_string(),
                    d.bracket.word_count.to_string(),
                    float(d.d_upper),
                ]);
                out.push(json!({"t": t.to_string(), "lower": d.bracket.lower,
                    "upper": d.bracket.upper, "level": d.bracket.level,
                    "count": d.bracket.word_count, "d_upper": d.d_upper,
                    "unresolved": d.unresolved}));
            }
            let mut j = if out.len() == 1 {
                out.pop().unwrap()
            } else {
                Value::Array(out)
            };
            let mut headers = vec!["t", "lower", "upper", "level", "count", "d_upper"];
            if *timing {
                let ms = start.elapsed().as_millis().to_string();
                if let Value::Object(o) = &mut j {
                    o.insert("elapsed_ms".into(), json!(ms));
                }
                headers.push("elapsed_ms");
                for r in &mut rows {
                    r.push(ms.clone());
                }
            }
            Ok(Report::table(j, headers, rows).with_status(status))
        }
        Command::Asym { rho } => {
            let mut rows = Vec::new();
            let mut out = Vec::new();
            for r in rho {
                let l = abs_log(r)?;
                let d = d_asymptotic_log(l)?;
                if cfg.verify {
                    let y = spectra_core::dimension::c0().exp() * l;
                    let w = lambert_inv(y)?;
                    if ((w * w.exp() - y) / y).abs() > 1e-12 || (d * l / 2.0 - w).abs() > 1e-12 * w
                    {
                        return Err(verify_fail(format!("Lambert round trip at ρ = {r}")));
                    }
                }
                rows.push(vec![r.clone(), float(l), float(d)]);
                out.push(json!({"rho": r, "abs_log_rho": l, "d_asymptotic": d}));
            }
            Ok(Report::table(
                Value::Array(out),
                vec!["rho", "abs_log_rho", "d_asymptotic"],
                rows,
            ))
        }
        Command::Bound { rho, c } => {
            let mut rows = Vec::new();
            let mut out = Vec::new();
            for r in rho {
                let l = abs_log(r)?;
                let v = thm2_bound_log(l, *c)?;
                if cfg.verify {
                    let v0 = thm2_bound_log(l, 0.0)?;
                    if ((v - v0) - c / l).abs() > 1e-12 * (1.0 + v.abs()) {
                        return Err(verify_fail("bound is not linear in C"));
                    }
                }
                rows.push(vec![r.clone(), float(*c), float(v)]);
                out.push(json!({"rho": r, "c": c, "bound": v}));
            }
            Ok(Report::table(
                Value::Array(out),
                vec!["rho", "c", "bound"],
                rows,
            ))
        }
        Command::VerifySuite { quick } => {
            let results = suite::run_all(*quick, cfg.seed, &budget(cfg));
            let failed = results.iter().any(|r| !r.passed);
            let rows = results
                .iter()
                .map(|r| vec![r.name.to_string(), pass(r.passed).into(), r.detail.clone()])
                .collect();
            let report = Report::table(
                serde_json::to_value(&results)?,
                vec!["suite", "result", "detail"],
                rows,
            );
            if failed {
                Err(CliError::SuiteFailed(Box::new(report)))
            } else {
                Ok(report)
            }
        }
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn ratio_f64(r: &Rational) -> f64 {
    SurdSum::from_rational(r.clone()).to_f64()
}

/// Floating λ from a long window, independent of the exact code.
fn float_lambda(s: &BiSeq, i: i64) -> f64 {
    const SPAN: i64 = 80;
    let fwd = (i + 1..=i + SPAN)
        .rev()
        .fold(0.0, |acc, k| 1.0 / (s.digit(k) as f64 + acc));
    let back = (i - SPAN..i).fold(0.0, |acc, k| 1.0 / (s.digit(k) as f64 + acc));
    s.digit(i) as f64 + fwd + back
}

fn eval_seq(s: &BiSeq, at: Option<i64>, cfg: &RunConfig) -> CliResult<Report> {
    let digits = cfg.digits as usize;
    match at {
        Some(i) => {
            let v = lambda_at(s, i);
            if cfg.verify && (v.to_f64() - float_lambda(s, i)).abs() > 1e-9 {
                return Err(verify_fail("λ disagrees with the floating evaluation"));
            }
            Ok(Report::record(
                json!({"sequence": s.to_string(), "position": i, "lambda": surd_json(&v, digits)}),
                vec![
                    ("sequence", s.to_string()),
                    ("position", i.to_string()),
                    ("lambda", exact(&v, digits)),
                ],
            ))
        }
        None => {
            let mv = markov_value(s);
            if cfg.verify {
                let lo = s.left_end() - 2 * s.left_period.len() as i64;
                let hi = s.right_start() + 2 * s.right_period.len() as i64;
                let f = (lo..hi)
                    .map(|i| float_lambda(s, i))
                    .fold(f64::MIN, f64::max);
                if (f - mv.value.to_f64()).abs() > 1e-9 {
                    return Err(verify_fail(
                        "Markov value disagrees with the floating maximum",
                    ));
                }
            }
            Ok(Report::record(
                json!({"sequence": s.to_string(), "markov_value": surd_json(&mv.value, digits),
                       "attained": mv.attained, "position": mv.witness}),
                vec![
                    ("sequence", s.to_string()),
                    ("markov-value", exact(&mv.value, digits)),
                    ("attained", mv.attained.to_string()),
                    (
                        "position",
                        mv.witness.map(|p| p.to_string()).unwrap_or_default(),
                    ),
                ],
            ))
        }
    }
}

fn certificates_report(
    certs: &[MembershipCertificate],
    t: &Threshold,
    set: Option<&LanguageSet>,
) -> Report {
    let rows = certs
        .iter()
        .map(|c| {
            vec![
                c.word.to_string(),
                c.verdict.to_string(),
                c.witness_period()
                    .map(|p| p.to_string())
                    .unwrap_or_default(),
                c.refutation_depth
                    .map(|d| d.to_string())
                    .unwrap_or_default(),
            ]
        })
        .collect();
    let json = match set {
        Some(s) => serde_json::to_value(s).unwrap_or(Value::Null),
        None => json!({"threshold": t.to_string(), "entries": certs}),
    };
    let unresolved = certs.iter().any(|c| c.verdict == Verdict::Unresolved);
    Report::table(
        json,
        vec!["word", "verdict", "witness-period", "refutation-depth"],
        rows,
    )
    .with_status(if unresolved {
        Status::Unresolved
    } else {
        Status::Done
    })
}

struct DimSigma {
    bracket: DimBracket,
    d_upper: f64,
    unresolved: usize,
}

fn dim_sigma(
    t: &Threshold,
    m: usize,
    b: &Budget,
    mode: Distortion,
    verify: bool,
) -> CliResult<DimSigma> {
    let three = SurdSum::from_int(3);
    let ts = t.to_surd_sum();
    if ts <= three || ts > Threshold::sqrt12().to_surd_sum() {
        return Err(spectra_core::Error::Domain(format!("dim needs 3 < t ≤ √12, got {t}")).into());
    }
    let set = sigma_enumerate(t, m, b);
    let words: Vec<Word> = set.words().into_iter().collect();
    let bracket = moran_bracket(&words, mode)?;
    if verify {
        let other = moran_bracket(&words, Distortion::Uniform)?;
        if other.upper < bracket.lower || bracket.upper < other.lower {
            return Err(verify_fail("distortion modes give disjoint brackets"));
        }
    }
    Ok(DimSigma {
        d_upper: (2.0 * bracket.upper).min(1.0),
        bracket,
        unresolved: set.unresolved().len(),
    })
}

fn dim_blocks(
    blocks: &str,
    level: usize,
    certify: Option<&str>,
    mode: Distortion,
    cfg: &RunConfig,
) -> CliResult<Report> {
    let words: Vec<Word> = blocks
        .split(',')
        .map(parse_word)
        .collect::<CliResult<_>>()?;
    let b = moran_bracket(&free_blocks(&words, level.max(1)), mode)?;
    let mut j = json!({"lower": b.lower, "upper": b.upper, "level": b.level,
                       "count": b.word_count});
    let mut fields = vec![
        ("lower", float(b.lower)),
        ("upper", float(b.upper)),
        ("level", b.level.to_string()),
        ("count", b.word_count.to_string()),
    ];
    if let Some(t) = certify {
        let t = parse_exact(t)?;
        let (sup, witness) = blocks_sup(&words)?;
        if cfg.verify && markov_value(&witness).value != sup {
            return Err(verify_fail(
                "block supremum is not the Markov value of its witness",
            ));
        }
        let ok = sup <= t;
        j["certified"] = json!(ok);
        j["sup"] = surd_json(&sup, cfg.digits as usize);
        j["witness"] = json!(witness.to_string());
        fields.push(("certified", ok.to_string()));
        fields.push(("sup", exact(&sup, cfg.digits as usize)));
        fields.push(("witness", witness.to_string()));
    }
    Ok(Report::record(j, fields))
}
