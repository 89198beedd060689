//! Ground-truth computations: the expected-LCS table for short uniform
//! strings, truncated series bounds, exact zero-trace and one-trace optima at
//! tiny n, entropy machinery, and Monte Carlo estimation of the random-pair
//! LCS constant.
//!
//! Exact oracles accumulate in big rationals; Monte Carlo paths use f64.

use num::{BigInt, BigRational, One, Zero};
use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::lcs::{lcs_length, lcs_u64};

/// Guard for the 2^{j+k} enumeration behind [`cs_value`].
pub const CS_SUM_LIMIT: usize = 26;
pub const L0_EXACT_LIMIT: usize = 14;
pub const L1_EXACT_LIMIT: usize = 10;

/// Expected LCS length between independent uniform strings of lengths j and k,
/// as an exact rational: (Σ over all pairs |LCS|) / 2^{j+k}.
pub fn cs_value(j: usize, k: usize) -> Result<BigRational> {
    if j == 0 || k == 0 {
        return Err(Error::InvalidArg("lengths must be at least 1".into()));
    }
    if j + k > CS_SUM_LIMIT {
        return Err(Error::SizeLimit(format!(
            "j + k = {} exceeds enumeration limit {CS_SUM_LIMIT}",
            j + k
        )));
    }
    let mut total: u64 = 0;
    for a in 0..1u64 << j {
        for b in 0..1u64 << k {
            total += lcs_u64(a, j, b, k) as u64;
        }
    }
    Ok(BigRational::new(
        BigInt::from(total),
        BigInt::from(1u64 << (j + k)),
    ))
}

/// Truncated per-bit coefficient of the average-case one-trace series:
/// (1−δ)·(1 + (1−δ)²·Σ_{j,k ≥ 1, j+k ≤ max_sum} CS(j,k)·δ^{j+k}).
/// All omitted terms are positive, so the truncation is a lower bound.
pub fn series_bound(delta: f64, max_sum: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidArg(format!(
            "deletion rate must lie in [0,1), got {delta}"
        )));
    }
    let rho = 1.0 - delta;
    let mut sum = 0.0;
    for j in 1..max_sum {
        for k in 1..=max_sum.saturating_sub(j) {
            let cs = rational_to_f64(&cs_value(j, k)?);
            sum += cs * delta.powi((j + k) as i32);
        }
    }
    Ok(rho * (1.0 + rho * rho * sum))
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().expect("rational within f64 range")
}

/// Best average LCS any fixed hypothesis of length n achieves against a
/// uniform random string, exactly, together with every maximizing hypothesis.
pub fn l0_avg_exact(n: usize) -> Result<(BigRational, Vec<BitString>)> {
    if n == 0 || n > L0_EXACT_LIMIT {
        return Err(Error::SizeLimit(format!(
            "exact zero-trace optimum supports 1 ≤ n ≤ {L0_EXACT_LIMIT}, got {n}"
        )));
    }
    let sz = 1u64 << n;
    let mut best_sum = 0u64;
    let mut argmax = Vec::new();
    for z in 0..sz {
        let total: u64 = (0..sz).map(|x| lcs_u64(z, n, x, n) as u64).sum();
        if total > best_sum {
            best_sum = total;
            argmax.clear();
        }
        if total == best_sum {
            argmax.push(BitString::from_word(z, n));
        }
    }
    let value = BigRational::new(BigInt::from(best_sum), BigInt::from(sz));
    Ok((value, argmax))
}

/// Embedding counts of every word of length ≤ n in the length-n string `x`
/// (bits LSB-first). Entry layout: count of word w (length l, read MSB-first)
/// lives at offset (2^l − 1) + w.
fn subseq_counts(x: u64, n: usize) -> Vec<u64> {
    let mut cnt = vec![0u64; (1usize << (n + 1)) - 1];
    cnt[0] = 1;
    for i in 0..n {
        let c = (x >> i & 1) as usize;
        for l in (1..=n).rev() {
            let off_prev = (1usize << (l - 1)) - 1;
            let off = (1usize << l) - 1;
            for w in 0..1usize << (l - 1) {
                let v = cnt[off_prev + w];
                if v != 0 {
                    cnt[off + ((w << 1) | c)] += v;
                }
            }
        }
    }
    cnt
}

/// Exact information-theoretic optimum of one-trace reconstruction at length n
/// and exact-rational deletion rate δ: the Bayes-optimal hypothesis is scored
/// for every trace, weighted by the exact trace marginal.
///
/// Uses the fact that the posterior over sources given a trace y is
/// proportional to the embedding count of y (independent of δ), so the trace
/// sum collapses to per-length integer weights.
pub fn optimal_one_trace_exact(n: usize, delta: &BigRational) -> Result<BigRational> {
    if n == 0 || n > L1_EXACT_LIMIT {
        return Err(Error::SizeLimit(format!(
            "exact one-trace optimum supports 1 ≤ n ≤ {L1_EXACT_LIMIT}, got {n}"
        )));
    }
    if delta < &BigRational::zero() || delta > &BigRational::one() {
        return Err(Error::InvalidArg(format!(
            "deletion rate must lie in [0,1], got {delta}"
        )));
    }
    let sz = 1usize << n;
    // lcs_tab[z*sz + x] = |LCS(z,x)|, symmetric
    let mut lcs_tab = vec![0u8; sz * sz];
    for z in 0..sz {
        for x in z..sz {
            let l = lcs_u64(z as u64, n, x as u64, n) as u8;
            lcs_tab[z * sz + x] = l;
            lcs_tab[x * sz + z] = l;
        }
    }
    let counts: Vec<Vec<u64>> = (0..sz).map(|x| subseq_counts(x as u64, n)).collect();

    // a[m] = Σ over traces y of length m of max_z Σ_x N(x,y)·|LCS(z,x)|
    let mut a = vec![0u64; n + 1];
    let mut weights = vec![0u64; sz];
    for m in 0..=n {
        let off = (1usize << m) - 1;
        for y in 0..1usize << m {
            for (x, c) in counts.iter().enumerate() {
                weights[x] = c[off + y];
            }
            let mut best = 0u64;
            for z in 0..sz {
                let row = &lcs_tab[z * sz..(z + 1) * sz];
                let s: u64 = weights
                    .iter()
                    .zip(row)
                    .map(|(&w, &l)| w * l as u64)
                    .sum();
                best = best.max(s);
            }
            a[m] += best;
        }
    }

    // L1 = 2^{-n} Σ_m a[m] ρ^m δ^{n−m}
    let rho = BigRational::one() - delta;
    let mut total = BigRational::zero();
    for (m, &am) in a.iter().enumerate() {
        if am == 0 {
            continue;
        }
        let term = BigRational::from(BigInt::from(am))
            * pow_rational(&rho, m)
            * pow_rational(delta, n - m);
        total += term;
    }
    Ok(total / BigRational::from(BigInt::from(1u64 << n)))
}

fn pow_rational(r: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// Binary entropy H(x) = −x·log₂x − (1−x)·log₂(1−x), with H(0) = H(1) = 0.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArg(format!(
            "entropy argument must lie in [0,1], got {x}"
        )));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Inverse of H on [0, 1/2] by bisection to 1e-12.
fn entropy_inverse(target: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&target));
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if entropy(mid).unwrap() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Entropy-counting upper bound on the optimal zero-trace constant: 1 − τ*
/// where H(τ*) = 1/2. A hypothesis matching more than (1−τ*)n bits of a
/// uniform string on average would violate a counting bound.
pub fn c2_upper_bound() -> f64 {
    1.0 - entropy_inverse(0.5)
}

/// Monte Carlo estimate of E[|LCS(x,x′)|]/n over independent uniform pairs,
/// with a normal-approximation 95% confidence interval.
pub fn gamma2_estimate<R: Rng>(
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<(f64, (f64, f64))> {
    if n == 0 || trials == 0 {
        return Err(Error::InvalidArg(
            "need n ≥ 1 and at least one trial".into(),
        ));
    }
    let mut vals = Vec::with_capacity(trials);
    for _ in 0..trials {
        let x = BitString::from_fn(n, |_| rng.gen_bool(0.5));
        let y = BitString::from_fn(n, |_| rng.gen_bool(0.5));
        vals.push(lcs_length(&x, &y) as f64 / n as f64);
    }
    let mean = vals.iter().sum::<f64>() / trials as f64;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
        / (trials.max(2) - 1) as f64;
    let se = (var / trials as f64).sqrt();
    Ok((mean, (mean - 1.96 * se, mean + 1.96 * se)))
}

/// Exact value of E[|LCS(x,x′)|]/n for uniform pairs at tiny n.
pub fn gamma2_exact(n: usize) -> Result<BigRational> {
    Ok(cs_value(n, n)? / BigRational::from(BigInt::from(n)))
}

/// Exponent-balance point of the union-bound argument for the weak one-trace
/// upper bound: the largest τ with 2H(τ) ≤ δ′/2 under the δ′ = δ/2 convention,
/// i.e. τ = H^{-1}(δ/8). Exposed to plot the Θ(δ/log(1/δ)) shape.
pub fn weak_upper_bound_coefficient(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidArg(format!(
            "deletion rate must lie in (0, 1/2), got {delta}"
        )));
    }
    Ok(entropy_inverse(delta / 8.0))
}
