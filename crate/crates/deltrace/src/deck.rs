//! Exact k-deck computation for strings and periodic mixtures, Vandermonde
//! moment solving, and the deck-equality / polynomial-structure verifiers.
//!
//! Everything here is exact: counts are big integers, weights and moments are
//! arbitrary-precision rationals. No floating point enters this module.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::bigint::{BigInt, Sign};
use num::{BigRational, BigUint, One, Signed, Zero};

use crate::bits::{make_periodic, BitString, PeriodicSpec};
use crate::error::{Error, Result};

/// Largest supported deck order (table size 2^k).
pub const DECK_K_LIMIT: usize = 12;

/// The k-deck: for every word w in {0,1}^k, the number of times w occurs as a
/// length-k subsequence. For a single string the counts are non-negative
/// integers summing to C(n,k); for a weighted mixture they are rationals with
/// the same total when the weights sum to 1.
///
/// Words are indexed by their value read most-significant-bit first, so index
/// order equals lexicographic order of the binary words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deck {
    pub k: usize,
    pub n: usize,
    counts: Vec<BigRational>,
}

impl Deck {
    pub fn counts(&self) -> &[BigRational] {
        &self.counts
    }

    pub fn count(&self, word: usize) -> &BigRational {
        &self.counts[word]
    }

    pub fn total(&self) -> BigRational {
        self.counts.iter().sum()
    }

    /// The word at `index`, written as a k-character binary string.
    pub fn word_string(&self, index: usize) -> String {
        (0..self.k)
            .rev()
            .map(|b| if index >> b & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// JSON form {"k":…, "n":…, "entries":{"<word>":"<p>/<q>"}} with words in
    /// lexicographic order and every rational reduced, denominator explicit.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: BTreeMap<String, String> = (0..self.counts.len())
            .map(|w| {
                let c = &self.counts[w];
                (self.word_string(w), format!("{}/{}", c.numer(), c.denom()))
            })
            .collect();
        serde_json::json!({ "k": self.k, "n": self.n, "entries": entries })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Deck> {
        let bad = |m: &str| Error::Parse(format!("deck JSON: {m}"));
        let k = v["k"].as_u64().ok_or_else(|| bad("missing k"))? as usize;
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let entries = v["entries"].as_object().ok_or_else(|| bad("missing entries"))?;
        let mut counts = vec![BigRational::zero(); 1usize << k];
        for (word, val) in entries {
            if word.len() != k || word.chars().any(|c| c != '0' && c != '1') {
                return Err(bad(&format!("bad word key {word:?}")));
            }
            let idx = word
                .chars()
                .fold(0usize, |acc, c| (acc << 1) | (c == '1') as usize);
            let s = val.as_str().ok_or_else(|| bad("entry not a string"))?;
            counts[idx] = parse_rational(s)?;
        }
        Ok(Deck { k, n, counts })
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let mk = |m: String| Error::Parse(m);
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p).map_err(|e| mk(format!("bad numerator {p:?}: {e}")))?;
            let q = BigInt::from_str(q).map_err(|e| mk(format!("bad denominator {q:?}: {e}")))?;
            if q.is_zero() {
                return Err(mk("zero denominator".into()));
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p = BigInt::from_str(s).map_err(|e| mk(format!("bad rational {s:?}: {e}")))?;
            Ok(BigRational::from(p))
        }
    }
}

/// Exact subsequence-count deck of `z` at order `k`, by DP over positions and
/// word prefixes: appending bit c extends every (L−1)-prefix count into the
/// L-prefix ending in c. O(|z|·2^k) big-integer additions.
pub fn deck(z: &BitString, k: usize) -> Result<Deck> {
    if k > DECK_K_LIMIT {
        return Err(Error::SizeLimit(format!(
            "deck order {k} exceeds limit {DECK_K_LIMIT}"
        )));
    }
    if k > z.len() {
        return Err(Error::InvalidArg(format!(
            "deck order {k} exceeds string length {}",
            z.len()
        )));
    }
    let mut cnt: Vec<Vec<BigUint>> = (0..=k).map(|l| vec![BigUint::zero(); 1 << l]).collect();
    cnt[0][0] = BigUint::one();
    for bit in z.iter() {
        let c = bit as usize;
        for l in (1..=k).rev() {
            // split_at_mut borrows levels l-1 and l disjointly
            let (lo, hi) = cnt.split_at_mut(l);
            let (prev, cur) = (&lo[l - 1], &mut hi[0]);
            for (w, count) in prev.iter().enumerate() {
                if !count.is_zero() {
                    cur[(w << 1) | c] += count;
                }
            }
        }
    }
    let counts = cnt
        .pop()
        .unwrap()
        .into_iter()
        .map(|c| BigRational::from(BigInt::from_biguint(Sign::Plus, c)))
        .collect();
    Ok(Deck {
        k,
        n: z.len(),
        counts,
    })
}

/// Mixture of periodic strings: weights `p` over half-periods `periods`, all
/// strings of length `ell`. Specified by its exact moment vector b (b_i =
/// Σ_j p_j r_j^i, b_0 = 1) and solved weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixtureSpec {
    pub ell: usize,
    pub k: usize,
    pub periods: Vec<usize>,
    pub b: Vec<BigRational>,
    pub p: Vec<BigRational>,
}

impl MixtureSpec {
    /// True when the solved weights form a probability distribution.
    pub fn is_distribution(&self) -> bool {
        self.p.iter().all(|w| !w.is_negative())
    }

    pub fn p0(&self) -> &BigRational {
        &self.p[0]
    }
}

fn validate_periods(ell: usize, periods: &[usize]) -> Result<()> {
    if periods.is_empty() {
        return Err(Error::InvalidArg("need at least one period".into()));
    }
    for w in periods.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidArg(format!(
                "periods must be strictly increasing, got {:?} before {:?}",
                w[0], w[1]
            )));
        }
    }
    for &r in periods {
        if r == 0 || ell % (2 * r) != 0 {
            return Err(Error::Divisibility(format!(
                "period 2r = {} must divide the string length {ell}",
                2 * r
            )));
        }
    }
    Ok(())
}

/// Exact inverse of the k×k Vandermonde matrix V_{i,j} = r_j^i via elementary
/// symmetric polynomials: V^{-1}_{i,j} = (−1)^j e^{(i)}_{k−1−j} / Π_{s≠i}(r_s − r_i),
/// where e^{(i)} are the elementary symmetric polynomials of the periods
/// omitting r_i.
pub fn vandermonde_inverse(periods: &[usize]) -> Result<Vec<Vec<BigRational>>> {
    let k = periods.len();
    for i in 0..k {
        for j in i + 1..k {
            if periods[i] == periods[j] {
                return Err(Error::InvalidArg(format!(
                    "repeated period {} makes the system singular",
                    periods[i]
                )));
            }
        }
    }
    let r: Vec<BigInt> = periods.iter().map(|&x| BigInt::from(x)).collect();
    let mut inv = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        // e[t] = elementary symmetric polynomial of degree t over {r_s : s ≠ i}
        let mut e = vec![BigInt::zero(); k];
        e[0] = BigInt::one();
        let mut used = 0usize;
        for s in 0..k {
            if s == i {
                continue;
            }
            used += 1;
            for t in (1..=used).rev() {
                let add = &e[t - 1] * &r[s];
                e[t] += add;
            }
        }
        let mut denom = BigInt::one();
        for s in 0..k {
            if s != i {
                denom *= &r[s] - &r[i];
            }
        }
        for j in 0..k {
            let mut num = e[k - 1 - j].clone();
            if j % 2 == 1 {
                num = -num;
            }
            inv[i][j] = BigRational::new(num, denom.clone());
        }
    }
    Ok(inv)
}

fn mat_vec(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Solve V p = b exactly for the mixture weights, where V_{i,j} = r_j^i.
/// Requires b_0 = 1 (weights sum to one) and a valid period set for `ell`.
pub fn solve_mixture(
    ell: usize,
    k: usize,
    periods: Vec<usize>,
    b: Vec<BigRational>,
) -> Result<MixtureSpec> {
    if periods.len() != k || b.len() != k {
        return Err(Error::InvalidArg(format!(
            "need exactly k = {k} periods and k moments, got {} and {}",
            periods.len(),
            b.len()
        )));
    }
    if b[0] != BigRational::one() {
        return Err(Error::InvalidArg(format!("moment b_0 must equal 1, got {}", b[0])));
    }
    validate_periods(ell, &periods)?;
    let inv = vandermonde_inverse(&periods)?;
    let p = mat_vec(&inv, &b);
    // forward check: V p must reproduce b exactly
    debug_assert!((0..k).all(|i| {
        let row: Vec<BigRational> = periods
            .iter()
            .map(|&r| BigRational::from(BigInt::from(r).pow(i as u32)))
            .collect();
        row.iter().zip(&p).map(|(a, w)| a * w).sum::<BigRational>() == b[i]
    }));
    Ok(MixtureSpec {
        ell,
        k,
        periods,
        b,
        p,
    })
}

/// Weighted deck of the mixture: Σ_j p_j · deck((0^{r_j} 1^{r_j})^{ℓ/2r_j}, k).
/// The order may be lowered below spec.k to inspect coarser decks.
pub fn mixture_deck_at(spec: &MixtureSpec, k: usize) -> Result<Deck> {
    let mut counts = vec![BigRational::zero(); 1 << k];
    for (j, &r) in spec.periods.iter().enumerate() {
        let z = make_periodic(PeriodicSpec::new(r, spec.ell)?);
        let d = deck(&z, k)?;
        for (w, c) in d.counts.iter().enumerate() {
            counts[w] += &spec.p[j] * c;
        }
    }
    Ok(Deck {
        k,
        n: spec.ell,
        counts,
    })
}

pub fn mixture_deck(spec: &MixtureSpec) -> Result<Deck> {
    mixture_deck_at(spec, spec.k)
}

/// Outcome of an exact verification: `ok` plus a human-readable description of
/// the first discrepancy when not ok.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub mismatch: Option<String>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            ok: true,
            mismatch: None,
        }
    }

    fn fail(msg: String) -> Self {
        Verdict {
            ok: false,
            mismatch: Some(msg),
        }
    }
}

/// Exact Lagrange evaluation at `x` of the interpolating polynomial through
/// `points` (distinct abscissas).
fn lagrange_eval(points: &[(BigRational, BigRational)], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut term = yi.clone();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                term *= (x - xj) / (xi - xj);
            }
        }
        acc += term;
    }
    acc
}

/// Check that given (period, count) samples lie on a single polynomial of
/// degree < k in the period: interpolate through the first k samples and
/// demand exact agreement at every remaining one.
pub fn verify_poly_counts(samples: &[(usize, BigRational)], k: usize) -> Result<Verdict> {
    if samples.len() < k + 1 {
        return Err(Error::InvalidArg(format!(
            "need at least k+1 = {} samples to cross-validate, got {}",
            k + 1,
            samples.len()
        )));
    }
    let anchor: Vec<(BigRational, BigRational)> = samples[..k]
        .iter()
        .map(|(t, c)| (BigRational::from(BigInt::from(*t)), c.clone()))
        .collect();
    for (t, c) in &samples[k..] {
        let predicted = lagrange_eval(&anchor, &BigRational::from(BigInt::from(*t)));
        if predicted != *c {
            return Ok(Verdict::fail(format!(
                "period {t}: interpolated {predicted}, actual {c}"
            )));
        }
    }
    Ok(Verdict::pass())
}

/// Verify that the count of word `y` in the deck of (0^t 1^t)^{ℓ/2t} is a
/// polynomial of degree < k in the half-period t, across all supplied periods.
pub fn verify_poly_structure(
    ell: usize,
    k: usize,
    y: usize,
    periods: &[usize],
) -> Result<Verdict> {
    validate_periods(ell, periods)?;
    let samples: Vec<(usize, BigRational)> = periods
        .iter()
        .map(|&t| {
            let z = make_periodic(PeriodicSpec::new(t, ell)?);
            Ok((t, deck(&z, k)?.count(y).clone()))
        })
        .collect::<Result<_>>()?;
    verify_poly_counts(&samples, k)
}

/// Entry-wise exact equality of the mixture decks of all specs, at the shared
/// order k and at every lower order k' < k. Specs must share (ell, k); they
/// normally share b too, which is what forces equality.
pub fn verify_deck_equality(specs: &[MixtureSpec]) -> Result<Verdict> {
    if specs.len() < 2 {
        return Ok(Verdict::pass());
    }
    let (ell, k) = (specs[0].ell, specs[0].k);
    if specs.iter().any(|s| s.ell != ell || s.k != k) {
        return Err(Error::InvalidArg(
            "deck comparison requires shared string length and order".into(),
        ));
    }
    for kp in (1..=k).rev() {
        let reference = mixture_deck_at(&specs[0], kp)?;
        for (i, spec) in specs.iter().enumerate().skip(1) {
            let d = mixture_deck_at(spec, kp)?;
            for w in 0..1usize << kp {
                if d.count(w) != reference.count(w) {
                    return Ok(Verdict::fail(format!(
                        "order {kp}, word {}: spec 0 has {}, spec {i} has {}",
                        reference.word_string(w),
                        reference.count(w),
                        d.count(w)
                    )));
                }
            }
        }
    }
    Ok(Verdict::pass())
}

/// Divisor-constrained instantiation of the asymptotic schedule: the largest
/// valid half-period, then each lower one the largest valid divisor at least a
/// ⌈log₂ ℓ⌉-factor smaller, with r_0 caller-chosen; moments b_j =
/// LL^{−j}·Π_{s=1}^{j} r_s with LL = ⌈log₂⌈log₂ ℓ⌉⌉.
pub fn geometric_schedule(
    ell: usize,
    k: usize,
    r0: usize,
) -> Result<(Vec<usize>, Vec<BigRational>)> {
    if ell < 4 || k < 1 {
        return Err(Error::InvalidArg(format!(
            "schedule needs ell ≥ 4 and k ≥ 1, got ell={ell} k={k}"
        )));
    }
    let bits = ell.next_power_of_two().trailing_zeros() as usize;
    let ll = bits.next_power_of_two().trailing_zeros() as usize;
    let valid = |r: usize| r >= 1 && ell % (2 * r) == 0;
    if !valid(r0) {
        return Err(Error::Divisibility(format!(
            "r0 = {r0} is not a valid half-period for length {ell}"
        )));
    }
    let mut periods = vec![0usize; k];
    periods[0] = r0;
    if k >= 2 {
        periods[k - 1] = ell / 2;
        for j in (1..k - 1).rev() {
            let cap = periods[j + 1] / bits;
            periods[j] = (1..=cap).rev().find(|&r| valid(r)).ok_or_else(|| {
                Error::Divisibility(format!(
                    "no valid half-period ≤ {cap} for length {ell} at slot {j}"
                ))
            })?;
        }
        if periods[0] >= periods[1] {
            return Err(Error::InvalidArg(format!(
                "r0 = {r0} collides with the scheduled period {}",
                periods[1]
            )));
        }
    }
    let ll_big = BigRational::from(BigInt::from(ll));
    let mut b = Vec::with_capacity(k);
    let mut acc = BigRational::one();
    b.push(BigRational::one());
    for &r in periods.iter().take(k).skip(1) {
        acc = acc * BigRational::from(BigInt::from(r)) / &ll_big;
        b.push(acc.clone());
    }
    Ok((periods, b))
}
