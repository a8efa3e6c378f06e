//! Hausdorff-dimension brackets for continued-fraction Cantor sets built from word blocks,
//! and the closed-form asymptotics near 3.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_cf::cf::Mobius;
use crate::exact_cf::{lambda_at, BiSeq, SurdSum};
use crate::lang::{sigma_enumerate, Budget, Threshold};
use crate::word::Word;

/// Two-sided bracket for the dimension of the free-concatenation limit set of a block set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DimBracket {
    pub lower: f64,
    pub upper: f64,
    pub level: usize,
    pub word_count: usize,
}

impl DimBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// How the cylinder of a concatenation is compared with the product of its block cylinders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distortion {
    /// ½|I(u)||I(v)| < |I(uv)| < 2|I(u)||I(v)|.
    Uniform,
    /// |I(uv)|/|I(u)| bounded per block v over every admissible prefix u.
    #[default]
    PerBlock,
}

impl std::str::FromStr for Distortion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Distortion::Uniform),
            "per-block" => Ok(Distortion::PerBlock),
            _ => Err(Error::Parse(format!("unknown distortion mode {s:?}"))),
        }
    }
}

/// Relative slack applied outward to every floating factor.
const SLACK: f64 = 1e-12;
const ROOT_TOL: f64 = 1e-10;
/// Outward widening of the bisection brackets.
const ROOT_PAD: f64 = 1e-9;
const X_STEPS: usize = 256;

struct CylinderF {
    ln_len: f64,
    z_lo: f64,
    z_hi: f64,
}

fn big_f64(x: &num_bigint::BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

fn cylinder_f(w: &[u8]) -> CylinderF {
    let m = Mobius::of_word(w);
    let (b, d) = (big_f64(&m.b), big_f64(&m.d));
    let (ab, cd) = (big_f64(&(&m.a + &m.b)), big_f64(&(&m.c + &m.d)));
    let (e0, e1) = (b / d, ab / cd);
    CylinderF {
        ln_len: -(d.ln() + cd.ln()),
        z_lo: e0.min(e1),
        z_hi: e0.max(e1),
    }
}

/// Bounds of (1 + x)/((1 + x z1)(1 + x z2)) for x in [x_lo, x_hi].
fn ratio_bounds(x_lo: f64, x_hi: f64, z1: f64, z2: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..X_STEPS {
        let a = x_lo + (x_hi - x_lo) * i as f64 / X_STEPS as f64;
        let b = if i + 1 == X_STEPS {
            x_hi
        } else {
            x_lo + (x_hi - x_lo) * (i + 1) as f64 / X_STEPS as f64
        };
        lo = lo.min((1.0 + a) / ((1.0 + b * z1) * (1.0 + b * z2)));
        hi = hi.max((1.0 + b) / ((1.0 + a * z1) * (1.0 + a * z2)));
    }
    (lo * (1.0 - SLACK), hi * (1.0 + SLACK))
}

/// Root of Σ exp(s · l) = 1 on [0, 1], widened outward; 0 or 1 exactly when it falls
/// outside.
fn pressure_root(logs: &[f64]) -> (f64, f64) {
    let g = |s: f64| logs.par_iter().map(|l| (s * l).exp()).sum::<f64>() - 1.0;
    if g(0.0) <= 0.0 {
        return (0.0, 0.0);
    }
    if g(1.0) >= 0.0 {
        return (1.0, 1.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ((lo - ROOT_PAD).max(0.0), (hi + ROOT_PAD).min(1.0))
}

fn check_blocks(words: &[Word]) -> Result<usize> {
    let m = words.first().ok_or(Error::EmptyLanguage)?.len();
    if m == 0 {
        return Err(Error::EmptyWord);
    }
    if words.iter().any(|w| w.len() != m) {
        return Err(Error::Domain("blocks must all have the same length".into()));
    }
    Ok(m)
}

/// Dimension bracket for the set of continued fractions [0; b1, b2, …] with every b_i in
/// `words`.
pub fn moran_bracket(words: &[Word], mode: Distortion) -> Result<DimBracket> {
    let m = check_blocks(words)?;
    let cyl: Vec<CylinderF> = words.par_iter().map(|w| cylinder_f(w.digits())).collect();
    let (lower_logs, upper_logs): (Vec<f64>, Vec<f64>) = match mode {
        Distortion::Uniform => cyl
            .iter()
            .map(|c| (c.ln_len - 2f64.ln(), c.ln_len + 2f64.ln()))
            .unzip(),
        Distortion::PerBlock => {
            // x = q_{k-1}/q_k of the prefix lies in the cylinder of the reversed last block.
            let (x_lo, x_hi) = words
                .par_iter()
                .map(|w| {
                    let mut r = w.digits().to_vec();
                    r.reverse();
                    let c = cylinder_f(&r);
                    (c.z_lo, c.z_hi)
                })
                .reduce(
                    || (f64::INFINITY, f64::NEG_INFINITY),
                    |a, b| (a.0.min(b.0), a.1.max(b.1)),
                );
            let (x_lo, x_hi) = (
                (x_lo * (1.0 - SLACK)).max(0.0),
                (x_hi * (1.0 + SLACK)).min(1.0),
            );
            cyl.par_iter()
                .map(|c| {
                    let (lo, hi) = ratio_bounds(x_lo, x_hi, c.z_lo, c.z_hi);
                    (c.ln_len + lo.ln(), c.ln_len + hi.ln())
                })
                .unzip()
        }
    };
    let lower = pressure_root(&lower_logs).0;
    let upper = pressure_root(&upper_logs).1;
    Ok(DimBracket {
        lower,
        upper,
        level: m,
        word_count: words.len(),
    })
}

/// All k-fold concatenations of the blocks.
pub fn free_blocks(words: &[Word], k: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|p| words.iter().map(move |w| p.concat(w)))
            .collect();
    }
    out
}

/// Upper estimate of d(t) = min(1, 2D(t)) from the cover by Σ(t, m) cylinders.
///
/// Unresolved words stay in the cover, so the value remains an upper bound.
pub fn d_upper(t: &Threshold, m: usize, budget: &Budget, mode: Distortion) -> Result<f64> {
    let three = SurdSum::from_int(3);
    let ts = t.to_surd_sum();
    if ts <= three || ts > Threshold::sqrt12().to_surd_sum() {
        return Err(Error::Domain(format!("d_upper needs 3 < t ≤ √12, got {t}")));
    }
    let words: Vec<Word> = sigma_enumerate(t, m, budget).words().into_iter().collect();
    let b = moran_bracket(&words, mode)?;
    Ok((2.0 * b.upper).min(1.0))
}

/// The block that makes [0; b, …] largest (or smallest) whatever follows it.
fn extremal_block(blocks: &[Vec<u8>], maximize: bool) -> &[u8] {
    let better = |x: &[u8], y: &[u8]| -> bool {
        match x.iter().zip(y).position(|(a, b)| a != b) {
            // An even index is a denominator digit: a smaller digit gives a larger value.
            Some(i) => ((x[i] < y[i]) == (i % 2 == 0)) == maximize,
            None => false,
        }
    };
    let mut best = blocks[0].as_slice();
    for b in &blocks[1..] {
        if better(b, best) {
            best = b;
        }
    }
    best
}

/// The extremal infinite tail over the blocks, as a period of whole blocks.
fn extremal_period(blocks: &[Vec<u8>], maximize: bool) -> Vec<u8> {
    let first = extremal_block(blocks, maximize).to_vec();
    if blocks[0].len().is_multiple_of(2) {
        first
    } else {
        let mut p = first;
        p.extend_from_slice(extremal_block(blocks, !maximize));
        p
    }
}

/// Exact supremum of λ over every position of every bi-infinite concatenation of the blocks,
/// with a sequence attaining it.
pub fn blocks_sup(blocks: &[Word]) -> Result<(SurdSum, BiSeq)> {
    let m = check_blocks(blocks)?;
    let fwd: Vec<Vec<u8>> = blocks.iter().map(|w| w.digits().to_vec()).collect();
    let rev: Vec<Vec<u8>> = fwd
        .iter()
        .map(|w| w.iter().rev().copied().collect())
        .collect();
    let candidates: Vec<(usize, usize)> = (0..blocks.len())
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .collect();
    candidates
        .par_iter()
        .map(|&(i, j)| {
            let v = &fwd[i];
            // The value after r digits increases with the tail iff r is even.
            let right = extremal_period(&fwd, (m - j - 1) % 2 == 0);
            let mut left: Vec<u8> = extremal_period(&rev, j % 2 == 0);
            left.reverse();
            let s = BiSeq::new(
                Word::from_raw(left),
                Word::from_raw(v[..j].to_vec()),
                Word::from_raw(v[j..].to_vec()),
                Word::from_raw(right),
            )
            .expect("nonempty periods");
            (lambda_at(&s, 0), s)
        })
        .max_by(|a, b| a.0.cmp(&b.0))
        .ok_or(Error::EmptyLanguage)
}

/// Whether every bi-infinite concatenation of the blocks has Markov value at most t.
pub fn certify_blocks(blocks: &[Word], t: &SurdSum) -> Result<bool> {
    Ok(blocks_sup(blocks)?.0 <= *t)
}

/// c0 = −ln ln((3 + √5)/2).
pub fn c0() -> f64 {
    -((3.0 + 5f64.sqrt()) / 2.0).ln().ln()
}

/// The principal branch of the inverse of H(x) = x e^x.
pub fn lambert_inv(y: f64) -> Result<f64> {
    let branch = -(-1f64).exp();
    if y.is_nan() || y < branch - 1e-15 {
        return Err(Error::Domain(format!(
            "lambert_inv needs y ≥ −1/e, got {y}"
        )));
    }
    if y <= branch {
        return Ok(-1.0);
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if y < -0.25 {
        let p = (2.0 * (std::f64::consts::E * y + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0
    } else if y < 3.0 {
        (1.0 + y).ln() * 0.75
    } else {
        let l = y.ln();
        l - l.ln()
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - y;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        // Halley step.
        let dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - dw;
        if !next.is_finite() {
            break;
        }
        let done = (next - w).abs() <= 1e-16 * (1.0 + next.abs());
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}

fn check_rho(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Domain(format!("ρ must lie in (0, 1), got {rho}")));
    }
    Ok(-rho.ln())
}

/// Main term 2·H⁻¹(e^{c0}|log ρ|)/|log ρ| of d(3 + ρ).
pub fn d_asymptotic(rho: f64) -> Result<f64> {
    d_asymptotic_log(check_rho(rho)?)
}

/// [`d_asymptotic`] in terms of L = |log ρ|, for ρ below the floating range.
pub fn d_asymptotic_log(l: f64) -> Result<f64> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Domain(format!("|log ρ| must be positive, got {l}")));
    }
    Ok(2.0 * lambert_inv(c0().exp() * l)? / l)
}

/// (log|log ρ| − log log|log ρ| + C)/|log ρ|.
pub fn thm2_bound(rho: f64, c: f64) -> Result<f64> {
    thm2_bound_log(check_rho(rho)?, c)
}

/// [`thm2_bound`] in terms of L = |log ρ|.
pub fn thm2_bound_log(l: f64, c: f64) -> Result<f64> {
    if !(l > std::f64::consts::E && l.is_finite()) {
        return Err(Error::Domain(format!("|log ρ| must exceed e, got {l}")));
    }
    Ok((l.ln() - l.ln().ln() + c) / l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_cf::Rational;

    fn ws(v: &[&str]) -> Vec<Word> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn single_block_is_a_point() {
        for mode in [Distortion::Uniform, Distortion::PerBlock] {
            let b = moran_bracket(&ws(&["2"]), mode).unwrap();
            assert_eq!((b.lower, b.upper), (0.0, 0.0));
        }
    }

    #[test]
    fn two_digit_set() {
        let b = moran_bracket(&free_blocks(&ws(&["1", "2"]), 8), Distortion::PerBlock).unwrap();
        assert!(b.contains(0.5313), "{b:?}");
        assert!(b.width() < 0.01);
    }

    #[test]
    fn block_suprema() {
        let (v, _) = blocks_sup(&ws(&["2"])).unwrap();
        assert_eq!(
            v,
            SurdSum::radical(Rational::from_integer(1.into()), 8.into())
        );
        assert!(certify_blocks(&ws(&["2211"]), &SurdSum::from_int(3)).unwrap());
        assert!(!certify_blocks(&ws(&["1122", "2211"]), &SurdSum::from_int(3)).unwrap());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(lambert_inv(0.0).unwrap(), 0.0);
        assert!((lambert_inv(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-14);
        assert!(lambert_inv(-1.0).is_err());
        let v = thm2_bound((-100f64).exp(), 0.0).unwrap();
        assert!((v - (100f64.ln() - 100f64.ln().ln()) / 100.0).abs() < 1e-15);
    }
}
