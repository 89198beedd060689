//! Combinatorial test bed for multi-trace alignment arguments: candidate
//! matchings between two source strings that share a common subsequence,
//! exact validity probabilities, deletion-pattern spacing checks, and
//! coverage statistics against periodic codes.
//!
//! Setup: a hidden string y of length m is planted into two length-n strings
//! x and x' at retained index sets `s` and `s_prime`; the remaining positions
//! are independent fair bits. A candidate matching pairs coordinates of x
//! with coordinates of x', strictly increasing on both sides.

use num::{BigInt, BigRational};
use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::lcs::{lcs_length, Matching};

/// Enumeration guard for [`validity_probability_exact`]: the sum over shared
/// and left-free bits is 2^n with the right-free bits resolved analytically.
pub const VALIDITY_EXACT_LIMIT: usize = 24;

/// A candidate matching together with the two planted index sets.
#[derive(Debug, Clone)]
pub struct ScoreContext {
    matching: Matching,
    s: Vec<usize>,
    s_prime: Vec<usize>,
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl ScoreContext {
    pub fn new(matching: Matching, s: Vec<usize>, s_prime: Vec<usize>) -> Result<Self> {
        if s.len() != s_prime.len() {
            return Err(Error::InvalidArg(format!(
                "planted index sets must have equal size, got {} and {}",
                s.len(),
                s_prime.len()
            )));
        }
        if !strictly_increasing(&s) || !strictly_increasing(&s_prime) {
            return Err(Error::InvalidArg(
                "planted index sets must be strictly increasing".into(),
            ));
        }
        if !matching
            .pairs
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1)
        {
            return Err(Error::InvalidArg(
                "matching must be strictly increasing in both coordinates".into(),
            ));
        }
        Ok(Self { matching, s, s_prime })
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    pub fn planted_len(&self) -> usize {
        self.s.len()
    }

    pub fn edge_count(&self) -> usize {
        self.matching.len()
    }

    /// Number of edges (v, v') that hit the planted sets at the same rank:
    /// v = s[j] and v' = s_prime[j]. Such edges compare a planted bit with
    /// itself and are satisfied for free.
    pub fn score(&self) -> usize {
        self.matching
            .pairs
            .iter()
            .filter(|&&(v, vp)| match self.s.binary_search(&v) {
                Ok(j) => self.s_prime[j] == vp,
                Err(_) => false,
            })
            .count()
    }

    fn check_span(&self, n: usize) -> Result<()> {
        let fits = self.s.len() <= n
            && self.s.iter().chain(&self.s_prime).all(|&p| p < n)
            && self.matching.pairs.iter().all(|&(v, vp)| v < n && vp < n);
        if !fits {
            return Err(Error::InvalidArg(format!(
                "context does not fit in strings of length {n}"
            )));
        }
        Ok(())
    }
}

/// Where a coordinate of one string draws its bit from: the planted word or
/// that string's own free randomness.
#[derive(Clone, Copy)]
enum BitSource {
    Planted(usize),
    Free(usize),
}

fn bit_sources(n: usize, planted: &[usize]) -> Vec<BitSource> {
    let mut out = Vec::with_capacity(n);
    let (mut j, mut f) = (0, 0);
    for p in 0..n {
        if j < planted.len() && planted[j] == p {
            out.push(BitSource::Planted(j));
            j += 1;
        } else {
            out.push(BitSource::Free(f));
            f += 1;
        }
    }
    out
}

/// Exact probability, over the planted word and both free paddings, that
/// every matched pair of coordinates carries equal bits.
pub fn validity_probability_exact(ctx: &ScoreContext, n: usize) -> Result<BigRational> {
    ctx.check_span(n)?;
    if n > VALIDITY_EXACT_LIMIT {
        return Err(Error::SizeLimit(format!(
            "exact validity enumeration supports n ≤ {VALIDITY_EXACT_LIMIT}, got {n}"
        )));
    }
    let m = ctx.s.len();
    let free = n - m;
    let src_x = bit_sources(n, &ctx.s);
    let src_xp = bit_sources(n, &ctx.s_prime);

    // split edges by which randomness they touch
    let mut planted_planted = Vec::new();
    let mut left_planted = Vec::new();
    let mut right_pins = Vec::new();
    for &(v, vp) in &ctx.matching.pairs {
        match (src_x[v], src_xp[vp]) {
            (BitSource::Planted(a), BitSource::Planted(b)) => planted_planted.push((a, b)),
            (BitSource::Free(a), BitSource::Planted(b)) => left_planted.push((a, b)),
            (BitSource::Planted(a), BitSource::Free(b)) => right_pins.push((true, a, b)),
            (BitSource::Free(a), BitSource::Free(b)) => right_pins.push((false, a, b)),
        }
    }

    // enumerate the planted word and left padding; each consistent pinning of
    // the right padding leaves its remaining bits free
    let mut count: u64 = 0;
    for y in 0..1u64 << m {
        if !planted_planted
            .iter()
            .all(|&(a, b)| (y >> a) & 1 == (y >> b) & 1)
        {
            continue;
        }
        for r in 0..1u64 << free {
            if !left_planted
                .iter()
                .all(|&(a, b)| (r >> a) & 1 == (y >> b) & 1)
            {
                continue;
            }
            let (mut pin_mask, mut pin_val) = (0u64, 0u64);
            let mut ok = true;
            for &(from_planted, a, b) in &right_pins {
                let bit = if from_planted { (y >> a) & 1 } else { (r >> a) & 1 };
                let mask = 1u64 << b;
                if pin_mask & mask != 0 {
                    if (pin_val >> b) & 1 != bit {
                        ok = false;
                        break;
                    }
                } else {
                    pin_mask |= mask;
                    pin_val |= bit << b;
                }
            }
            if ok {
                count += 1u64 << (free as u32 - pin_mask.count_ones());
            }
        }
    }
    Ok(BigRational::new(
        BigInt::from(count),
        BigInt::from(1u64) << (2 * n - m),
    ))
}

/// Monte Carlo companion of [`validity_probability_exact`].
pub fn validity_probability_mc<R: Rng>(
    ctx: &ScoreContext,
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    ctx.check_span(n)?;
    if trials == 0 {
        return Err(Error::InvalidArg("need at least one trial".into()));
    }
    let mut hits = 0usize;
    for _ in 0..trials {
        let x = BitString::from_fn(n, |_| rng.gen_bool(0.5));
        let mut xp = BitString::from_fn(n, |_| rng.gen_bool(0.5));
        for (j, &p) in ctx.s.iter().enumerate() {
            xp.set(ctx.s_prime[j], x.get(p));
        }
        if ctx
            .matching
            .pairs
            .iter()
            .all(|&(v, vp)| x.get(v) == xp.get(vp))
        {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// Checks whether a deletion pattern spreads its deletions evenly with
/// respect to a matching. `retained` is the indicator of kept coordinates
/// (ones kept, zeros deleted) and `delta_prime` the nominal deletion rate.
///
/// With β = ⌊δ'^{-3/4}⌋ (at least 1), the pattern qualifies if at least
/// ⌈δ'·n/2⌉ disjoint windows of length 2β+1 each satisfy: every coordinate in
/// the window is a left endpoint of the matching, the right endpoints of
/// those edges also form a contiguous window, and the retained indicator
/// reads 1^β 0 1^β across it. Windows are packed greedily left to right,
/// which is optimal for equal-length windows.
///
/// Returns the verdict plus the left edges of the packed windows.
pub fn is_well_spaced(
    retained: &BitString,
    matching: &Matching,
    delta_prime: f64,
) -> Result<(bool, Vec<usize>)> {
    if !(delta_prime > 0.0 && delta_prime < 1.0) {
        return Err(Error::InvalidArg(format!(
            "nominal deletion rate must lie in (0,1), got {delta_prime}"
        )));
    }
    let n = retained.len();
    if !matching
        .pairs
        .windows(2)
        .all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1)
    {
        return Err(Error::InvalidArg(
            "matching must be strictly increasing in both coordinates".into(),
        ));
    }
    if matching.pairs.iter().any(|&(v, vp)| v >= n || vp >= n) {
        return Err(Error::InvalidArg(
            "matching endpoints exceed the string length".into(),
        ));
    }
    let beta = (delta_prime.powf(-0.75).floor() as usize).max(1);
    let len = 2 * beta + 1;
    let needed = (delta_prime * n as f64 / 2.0).ceil() as usize;

    let mut vpos = vec![usize::MAX; n];
    for (i, &(v, _)) in matching.pairs.iter().enumerate() {
        vpos[v] = i;
    }
    let pairs = &matching.pairs;
    let valid_at = |p: usize| -> bool {
        // all coordinates in the window matched; consecutive coordinates
        // force consecutive edge indices
        if (p..p + len).any(|q| vpos[q] == usize::MAX) {
            return false;
        }
        if pairs[vpos[p + len - 1]].1 != pairs[vpos[p]].1 + (len - 1) {
            return false;
        }
        (0..len).all(|k| retained.get(p + k) == (k != beta))
    };

    let mut starts = Vec::new();
    let mut p = 0;
    while p + len <= n {
        if valid_at(p) {
            starts.push(p);
            p += len;
        } else {
            p += 1;
        }
    }
    Ok((starts.len() >= needed, starts))
}

/// Number of codewords whose LCS with x reaches the (2/3 + ε/6)·n threshold.
pub fn ghs_covered_count(x: &BitString, code: &[BitString], eps: f64) -> usize {
    assert!(eps >= 0.0, "threshold slack must be nonnegative");
    let thr = (2.0 / 3.0 + eps / 6.0) * x.len() as f64;
    code.iter()
        .filter(|a| lcs_length(x, a) as f64 >= thr)
        .count()
}

/// Mean LCS of x against a code.
pub fn avg_lcs_vs_code(x: &BitString, code: &[BitString]) -> Result<f64> {
    if code.is_empty() {
        return Err(Error::InvalidArg("code must be non-empty".into()));
    }
    let total: usize = code.iter().map(|a| lcs_length(x, a)).sum();
    Ok(total as f64 / code.len() as f64)
}
