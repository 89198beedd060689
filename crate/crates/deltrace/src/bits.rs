//! Packed bit strings and the structured generators used across the toolkit.
//!
//! Convention: the library indexes bits from 0. Write-ups of these algorithms
//! usually write a string as x = (x₁,…,xₙ); that x_i is `get(i-1)` here.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Immutable-after-construction binary string, packed 64 bits per word.
///
/// Storage is LSB-first within each word; the layout is never exposed, only
/// logical bits. Empty strings are legal everywhere.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// All-zero string of length `n`.
    pub fn zeros(n: usize) -> Self {
        BitString {
            words: vec![0; n.div_ceil(64)],
            len: n,
        }
    }

    /// All-one string of length `n`.
    pub fn ones(n: usize) -> Self {
        let mut s = Self::zeros(n);
        for w in &mut s.words {
            *w = !0;
        }
        s.mask_top();
        s
    }

    /// 0101… of length `n` (starts with 0).
    pub fn alternating(n: usize) -> Self {
        Self::from_fn(n, |i| i % 2 == 1)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::zeros(n);
        for i in 0..n {
            if f(i) {
                s.words[i / 64] |= 1u64 << (i % 64);
            }
        }
        s
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut s = Self::new();
        for b in bits {
            s.push(b);
        }
        s
    }

    /// Low `n` bits of `word`, bit i of the string = bit i of `word`.
    pub fn from_word(word: u64, n: usize) -> Self {
        assert!(n <= 64);
        Self::from_fn(n, |i| word >> i & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at 0-based index `i`. Panics if out of range.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        let (w, o) = (i / 64, i % 64);
        if bit {
            self.words[w] |= 1u64 << o;
        } else {
            self.words[w] &= !(1u64 << o);
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1u64 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn extend(&mut self, other: &BitString) {
        for b in other.iter() {
            self.push(b);
        }
    }

    /// Append `count` copies of `bit`.
    pub fn push_run(&mut self, bit: bool, count: usize) {
        for _ in 0..count {
            self.push(bit);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Bits `range.start..range.end` as a new string.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        assert!(start <= end && end <= self.len);
        Self::from_fn(end - start, |i| self.get(start + i))
    }

    /// Truncate to the first `n` bits (no-op if already shorter).
    pub fn truncate(&mut self, n: usize) {
        if n >= self.len {
            return;
        }
        self.len = n;
        self.words.truncate(n.div_ceil(64));
        self.mask_top();
    }

    /// Right-pad with `bit` or truncate so the length is exactly `n`.
    pub fn resize(&mut self, n: usize, bit: bool) {
        if n <= self.len {
            self.truncate(n);
        } else {
            self.push_run(bit, n - self.len);
        }
    }

    fn mask_top(&mut self) {
        let o = self.len % 64;
        if o != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << o) - 1;
            }
        }
        if self.len == 0 {
            self.words.clear();
        }
    }

    /// Packed words, LSB-first. For the LCS kernels; top word is zero-masked.
    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = BitString::new();
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                other => {
                    return Err(Error::Parse(format!(
                        "bit strings may only contain '0'/'1', found {other:?}"
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// Half-period `r` and total length `n` of a periodic string (0^r 1^r)^{n/2r}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodicSpec {
    pub r: usize,
    pub n: usize,
}

impl PeriodicSpec {
    pub fn new(r: usize, n: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArg("half-period r must be positive".into()));
        }
        if n % (2 * r) != 0 {
            return Err(Error::Divisibility(format!(
                "period 2r = {} must divide n = {n}",
                2 * r
            )));
        }
        Ok(PeriodicSpec { r, n })
    }
}

/// (0^r 1^r)^{n/(2r)}.
pub fn make_periodic(spec: PeriodicSpec) -> BitString {
    let mut s = BitString::zeros(0);
    for _ in 0..spec.n / (2 * spec.r) {
        s.push_run(false, spec.r);
        s.push_run(true, spec.r);
    }
    s
}

/// Periodic code A_u = (0^r 1^r)^{n/2r} with r = (1/ε⁴)^u, u = 1..⌊½·log_{1/ε⁴} ℓ⌋.
///
/// ε is supplied as the integer `inv_eps4` = 1/ε⁴ ≥ 2 so every period is exactly
/// integral. Requires ℓ | n and 2r | ℓ for every scheduled u.
pub fn bukh_ma_code(n: usize, inv_eps4: u64, ell: usize) -> Result<Vec<BitString>> {
    if inv_eps4 < 2 {
        return Err(Error::InvalidArg(format!(
            "1/ε⁴ must be an integer ≥ 2, got {inv_eps4}"
        )));
    }
    if ell == 0 || n % ell != 0 {
        return Err(Error::Divisibility(format!(
            "segment length ℓ = {ell} must divide n = {n}"
        )));
    }
    // u_max = ⌊½ log_{inv_eps4} ℓ⌋, i.e. the largest u with (inv_eps4)^{2u} ≤ ℓ.
    let mut out = Vec::new();
    let mut r: u128 = 1;
    for _ in 1.. {
        r *= inv_eps4 as u128;
        let r2 = r * r;
        if r2 > ell as u128 {
            break;
        }
        let period = 2 * r as usize;
        if ell % period != 0 {
            return Err(Error::Divisibility(format!(
                "period 2r = {period} does not divide segment length ℓ = {ell}"
            )));
        }
        out.push(make_periodic(PeriodicSpec::new(r as usize, n)?));
    }
    Ok(out)
}

/// Number of disjoint `01` occurrences at adjacent positions, i.e. the count of
/// indices i with x_i = 0 and x_{i+1} = 1 (occurrences at adjacent positions can
/// never overlap, so the greedy left-to-right pairing is the maximum).
///
/// This is exactly the quantity t for which x embeds into (01)^m iff m ≥ |x| − t.
pub fn count_disjoint_01(x: &BitString) -> usize {
    let mut count = 0;
    let mut prev = true; // sentinel: a leading 1 cannot open a pair
    for b in x.iter() {
        if b && !prev {
            count += 1;
            prev = true; // consume both positions of the pair
        } else {
            prev = b;
        }
    }
    count
}

/// Maximal-run decomposition; concatenating the runs reproduces `x`.
pub fn runs(x: &BitString) -> Vec<(bool, usize)> {
    let mut out: Vec<(bool, usize)> = Vec::new();
    for b in x.iter() {
        match out.last_mut() {
            Some((bit, n)) if *bit == b => *n += 1,
            _ => out.push((b, 1)),
        }
    }
    out
}

/// Read newline-terminated '0'/'1' lines. Any other character is rejected.
pub fn read_strings<R: BufRead>(reader: R) -> Result<Vec<BitString>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::Io {
            path: "<input>".into(),
            source: e,
        })?;
        out.push(line.parse()?);
    }
    Ok(out)
}

/// Write one string per line, newline-terminated.
pub fn write_strings<W: Write>(mut writer: W, strings: &[BitString]) -> Result<()> {
    for s in strings {
        writeln!(writer, "{s}").map_err(|e| Error::Io {
            path: "<output>".into(),
            source: e,
        })?;
    }
    Ok(())
}
