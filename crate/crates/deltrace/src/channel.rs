//! Deletion-channel samplers: direct per-bit deletion, the equivalent
//! geometric-gap process, posterior reconstruction sampling, and multi-trace
//! collision bookkeeping.
//!
//! Every sampler takes an explicit RNG; callers that need reproducible
//! parallelism must hand each trial its own stream.

use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// A channel output: the surviving bits in order, plus (optionally) the
/// 0-based source positions they came from, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub y: BitString,
    pub retained: Option<Vec<usize>>,
}

/// For t traces of a common source, `sets[j]` lists the 0-based trace ids that
/// retain the j-th smallest retained source position. Every entry is non-empty
/// by construction and there are m = |R_1 ∪ … ∪ R_t| entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionInfo {
    pub sets: Vec<Vec<usize>>,
}

/// Delete each bit of `x` independently with probability `delta`; survivors
/// keep their order. The trace records the retained positions.
pub fn delete_direct<R: Rng>(x: &BitString, delta: f64, rng: &mut R) -> Trace {
    assert!((0.0..=1.0).contains(&delta), "deletion rate must lie in [0,1]");
    let keep = 1.0 - delta;
    let mut y = BitString::new();
    let mut retained = Vec::new();
    for i in 0..x.len() {
        if rng.gen_bool(keep) {
            y.push(x.get(i));
            retained.push(i);
        }
    }
    Trace {
        y,
        retained: Some(retained),
    }
}

/// One Geometric(1−δ) draw on {1,2,…}: the number of source positions consumed
/// until (and including) the next retained one. Inversion: 1 + ⌊ln U / ln δ⌋.
fn geometric_steps<R: Rng>(delta: f64, rng: &mut R) -> usize {
    loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            return 1 + (u.ln() / delta.ln()).floor() as usize;
        }
    }
}

/// Sample the channel as a prefix process: repeatedly draw a geometric gap,
/// emit the bit at the end of the gap, and stop once the next emission would
/// land beyond position n. Distributionally identical to [`delete_direct`];
/// also returns the consumed gap lengths (the prefix boundaries).
pub fn delete_geometric_process<R: Rng>(
    x: &BitString,
    delta: f64,
    rng: &mut R,
) -> (Trace, Vec<usize>) {
    assert!(
        delta > 0.0 && delta < 1.0,
        "geometric process requires 0 < delta < 1"
    );
    let n = x.len();
    let mut y = BitString::new();
    let mut retained = Vec::new();
    let mut gaps = Vec::new();
    let mut pos = 0usize;
    loop {
        let g = geometric_steps(delta, rng);
        if pos.saturating_add(g) > n {
            break; // remaining bits all deleted: P(G > n − pos) = δ^{n−pos}
        }
        pos += g;
        y.push(x.get(pos - 1));
        retained.push(pos - 1);
        gaps.push(g);
    }
    (
        Trace {
            y,
            retained: Some(retained),
        },
        gaps,
    )
}

/// Sample from the posterior of a uniform length-n source given trace `y`:
/// place the bits of y on a uniformly random |y|-subset of positions, in
/// order, and fill the rest with independent fair bits.
pub fn posterior_sample<R: Rng>(y: &BitString, n: usize, rng: &mut R) -> Result<BitString> {
    let m = y.len();
    if m > n {
        return Err(Error::InvalidArg(format!(
            "trace length {m} exceeds target length {n}"
        )));
    }
    // partial Fisher-Yates: first m entries become a uniform m-subset
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    let mut subset = idx[..m].to_vec();
    subset.sort_unstable();

    let mut x = BitString::zeros(n);
    let mut next = 0usize;
    for i in 0..n {
        if next < m && subset[next] == i {
            x.set(i, y.get(next));
            next += 1;
        } else {
            x.set(i, rng.gen_bool(0.5));
        }
    }
    Ok(x)
}

/// Collision information and merged subsequence for given retained sets.
/// Each set must be strictly increasing (as produced by the samplers).
pub fn collision_info(x: &BitString, retained_sets: &[Vec<usize>]) -> (CollisionInfo, BitString) {
    debug_assert!(retained_sets
        .iter()
        .all(|r| r.windows(2).all(|w| w[0] < w[1]) && r.last().is_none_or(|&i| i < x.len())));
    let mut union: Vec<usize> = retained_sets.iter().flatten().copied().collect();
    union.sort_unstable();
    union.dedup();
    let sets = union
        .iter()
        .map(|&i| {
            retained_sets
                .iter()
                .enumerate()
                .filter(|(_, r)| r.binary_search(&i).is_ok())
                .map(|(s, _)| s)
                .collect()
        })
        .collect();
    let y = BitString::from_bits(union.iter().map(|&i| x.get(i)));
    (CollisionInfo { sets }, y)
}

/// Draw `t` independent traces of `x` and derive their collision information
/// together with the merged union-subsequence.
pub fn multi_trace_with_collisions<R: Rng>(
    x: &BitString,
    delta: f64,
    t: usize,
    rng: &mut R,
) -> (Vec<Trace>, CollisionInfo, BitString) {
    assert!(t >= 1, "need at least one trace");
    let traces: Vec<Trace> = (0..t).map(|_| delete_direct(x, delta, rng)).collect();
    let sets: Vec<Vec<usize>> = traces
        .iter()
        .map(|tr| tr.retained.clone().expect("delete_direct records positions"))
        .collect();
    let (c, y) = collision_info(x, &sets);
    (traces, c, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::collections::HashMap;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    /// Exact trace distribution of the deletion channel on x: enumerate all
    /// 2^n retained subsets.
    fn exact_trace_dist(x: &BitString, delta: f64) -> HashMap<String, f64> {
        let n = x.len();
        let rho = 1.0 - delta;
        let mut dist: HashMap<String, f64> = HashMap::new();
        for mask in 0u64..1 << n {
            let mut y = BitString::new();
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    y.push(x.get(i));
                }
            }
            let m = mask.count_ones() as i32;
            let p = rho.powi(m) * delta.powi(n as i32 - m);
            *dist.entry(y.to_string()).or_default() += p;
        }
        dist
    }

    fn tv<K: std::hash::Hash + Eq + Clone>(a: &HashMap<K, f64>, b: &HashMap<K, f64>) -> f64 {
        let keys: std::collections::HashSet<K> =
            a.keys().chain(b.keys()).cloned().collect();
        keys.iter()
            .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
            .sum::<f64>()
            / 2.0
    }

    #[test]
    fn direct_extremes() {
        let x: BitString = "110100".parse().unwrap();
        let t = delete_direct(&x, 0.0, &mut rng(1));
        assert_eq!(t.y, x);
        assert_eq!(t.retained.unwrap(), (0..6).collect::<Vec<_>>());
        let t = delete_direct(&x, 1.0, &mut rng(1));
        assert!(t.y.is_empty());
        assert!(t.retained.unwrap().is_empty());
    }

    #[test]
    fn direct_length_concentrates() {
        let x = BitString::zeros(1_000_000);
        let t = delete_direct(&x, 0.5, &mut rng(2));
        let frac = t.y.len() as f64 / 1e6;
        assert!((frac - 0.5).abs() < 0.01, "retained fraction {frac}");
    }

    #[test]
    fn geometric_low_deletion_keeps_everything() {
        let x = BitString::from_fn(100, |i| i % 7 < 3);
        let (t, gaps) = delete_geometric_process(&x, 1e-9, &mut rng(3));
        assert_eq!(t.y, x);
        assert_eq!(gaps, vec![1; 100]);
    }

    #[test]
    fn geometric_gap_bookkeeping() {
        let x = BitString::from_fn(200, |i| i % 2 == 0);
        for seed in 0..50 {
            let (t, gaps) = delete_geometric_process(&x, 0.4, &mut rng(seed));
            assert_eq!(gaps.len(), t.y.len());
            assert!(gaps.iter().all(|&g| g >= 1));
            assert!(gaps.iter().sum::<usize>() <= x.len());
            // gap partial sums are exactly the retained positions (shifted by 1)
            let retained = t.retained.unwrap();
            let mut pos = 0;
            for (j, (g, &r)) in gaps.iter().zip(&retained).enumerate() {
                pos += g;
                assert_eq!(pos - 1, r);
                assert_eq!(x.get(r), t.y.get(j));
            }
        }
    }

    #[test]
    fn samplers_match_exact_distribution() {
        let samples = 1_000_000;
        for n in 1..=6usize {
            let x = BitString::from_fn(n, |i| 0b110100u64 >> i & 1 == 1);
            for delta in [0.2, 0.5] {
                let exact = exact_trace_dist(&x, delta);
                let mut emp: HashMap<String, f64> = HashMap::new();
                let mut r = rng(1000 + n as u64);
                let w = 1.0 / samples as f64;
                for _ in 0..samples {
                    let (t, _) = delete_geometric_process(&x, delta, &mut r);
                    *emp.entry(t.y.to_string()).or_default() += w;
                }
                let d = tv(&exact, &emp);
                assert!(d <= 0.02, "geometric TV {d} at n={n} delta={delta}");
            }
        }
        // direct sampler against the same exact law at one config
        let x = BitString::from_fn(6, |i| 0b110100u64 >> i & 1 == 1);
        let exact = exact_trace_dist(&x, 0.3);
        let mut emp: HashMap<String, f64> = HashMap::new();
        let mut r = rng(77);
        for _ in 0..samples {
            let t = delete_direct(&x, 0.3, &mut r);
            *emp.entry(t.y.to_string()).or_default() += 1.0 / samples as f64;
        }
        assert!(tv(&exact, &emp) <= 0.02);
    }

    #[test]
    fn posterior_fixed_cases() {
        let y: BitString = "0110".parse().unwrap();
        let x = posterior_sample(&y, 4, &mut rng(5)).unwrap();
        assert_eq!(x, y);
        assert!(posterior_sample(&y, 3, &mut rng(5)).is_err());

        // empty trace: uniform source
        let mut counts = [0u32; 8];
        let empty = BitString::new();
        let mut r = rng(6);
        for _ in 0..100_000 {
            let x = posterior_sample(&empty, 3, &mut r).unwrap();
            let v = (0..3).fold(0usize, |acc, i| acc | (x.get(i) as usize) << i);
            counts[v] += 1;
        }
        for c in counts {
            let f = c as f64 / 1e5;
            assert!((f - 0.125).abs() < 0.02, "uniform fill freq {f}");
        }

        // y = "1", n = 2: P(11) = 1/2, P(10) = P(01) = 1/4, P(00) = 0
        let y: BitString = "1".parse().unwrap();
        let mut counts = HashMap::new();
        let mut r = rng(7);
        for _ in 0..100_000 {
            let x = posterior_sample(&y, 2, &mut r).unwrap();
            *counts.entry(x.to_string()).or_insert(0u32) += 1;
        }
        let f = |s: &str| *counts.get(s).unwrap_or(&0) as f64 / 1e5;
        assert!((f("11") - 0.5).abs() < 0.01);
        assert!((f("10") - 0.25).abs() < 0.01);
        assert!((f("01") - 0.25).abs() < 0.01);
        assert_eq!(f("00"), 0.0);
    }

    #[test]
    fn posterior_is_bayes_consistent() {
        // joint (x, y) from channel on uniform x vs. marginal y resampled
        // through the posterior
        let samples = 400_000;
        let delta = 0.5;
        for n in 1..=4usize {
            let mut fwd: HashMap<(u64, String), f64> = HashMap::new();
            let mut bwd: HashMap<(u64, String), f64> = HashMap::new();
            let mut r = rng(90 + n as u64);
            let w = 1.0 / samples as f64;
            for _ in 0..samples {
                let xv: u64 = r.gen_range(0..1u64 << n);
                let x = BitString::from_word(xv, n);
                let t = delete_direct(&x, delta, &mut r);
                *fwd.entry((xv, t.y.to_string())).or_default() += w;

                let xv2: u64 = r.gen_range(0..1u64 << n);
                let t2 = delete_direct(&BitString::from_word(xv2, n), delta, &mut r);
                let xr = posterior_sample(&t2.y, n, &mut r).unwrap();
                let xrv = (0..n).fold(0u64, |acc, i| acc | (xr.get(i) as u64) << i);
                *bwd.entry((xrv, t2.y.to_string())).or_default() += w;
            }
            let d = tv(&fwd, &bwd);
            assert!(d <= 0.02, "joint TV {d} at n={n}");
        }
    }

    #[test]
    fn gap_sum_vs_binomial_coupling() {
        // Shared-coin construction: from one iid coin sequence, the position of
        // the m-th head equals the sum of the first m geometric gaps, and the
        // head count among the first n coins is the binomial draw. The channel
        // identity: sum of m gaps exceeds n iff fewer than m heads land in [n].
        let mut r = rng(11);
        for _ in 0..2000 {
            let n = r.gen_range(1..=40usize);
            let m = r.gen_range(1..=12usize);
            let rho: f64 = r.gen_range(0.05..0.95);
            let mut coins = Vec::new();
            let mut heads = 0;
            while heads < m || coins.len() < n {
                let h = r.gen_bool(rho);
                heads += h as usize;
                coins.push(h);
            }
            let bin: usize = coins[..n].iter().filter(|&&h| h).count();
            let mut gap_sum = 0usize;
            let mut seen = 0usize;
            for (i, &h) in coins.iter().enumerate() {
                if h {
                    seen += 1;
                    if seen == m {
                        gap_sum = i + 1;
                        break;
                    }
                }
            }
            assert_eq!(gap_sum > n, bin < m, "n={n} m={m} rho={rho}");
        }
    }

    #[test]
    fn collision_worked_example() {
        let x: BitString = "11010011".parse().unwrap();
        let sets = vec![vec![0, 1, 4, 5], vec![1, 3, 4], vec![1, 4, 5, 6]];
        let (c, y) = collision_info(&x, &sets);
        assert_eq!(y.to_string(), "111001");
        assert_eq!(
            c.sets,
            vec![
                vec![0],
                vec![0, 1, 2],
                vec![1],
                vec![0, 1, 2],
                vec![0, 2],
                vec![2]
            ]
        );
    }

    #[test]
    fn multi_trace_degenerate_cases() {
        let x: BitString = "1101001110".parse().unwrap();
        let (traces, c, y) = multi_trace_with_collisions(&x, 0.4, 1, &mut rng(13));
        assert_eq!(y, traces[0].y);
        assert!(c.sets.iter().all(|s| s == &vec![0]));

        let (_, c, y) = multi_trace_with_collisions(&x, 0.0, 3, &mut rng(14));
        assert_eq!(y, x);
        assert_eq!(c.sets.len(), x.len());
        assert!(c.sets.iter().all(|s| s == &vec![0, 1, 2]));
    }
}
