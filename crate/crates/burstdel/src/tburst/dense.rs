//! Pattern-dense strings: the marker `w = 0^t 1^t`, the gap vector `α_w`, the
//! compression map for marker-free windows and the encoder/decoder that makes
//! every window of length δ contain the marker.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::{ceil_log2, check_binary, insert_at};

/// Largest burst length accepted by the dense-string machinery; keeps
/// `t·2^{2t+2}·⌈log n⌉` comfortably inside a `usize`.
pub const MAX_DENSE_T: usize = 12;

/// Marker length, density bound and payload length for `(w, δ)`-dense strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityParams {
    /// Length of the words being constrained (the codeword length).
    pub n: usize,
    pub t: usize,
    pub delta: usize,
}

impl DensityParams {
    /// `δ = t·2^{2t+1}·⌈log n⌉`, the bound used for q-ary words.
    pub fn new(n: usize, t: usize) -> Result<Self> {
        Self::check_t(t)?;
        Self::with_delta(n, t, (t << (2 * t + 1)) * ceil_log2(n as u64).max(1))
    }

    /// `δ = t·2^{2t+2}·⌈log n⌉`, the larger bound used for permutations.
    pub fn for_permutations(n: usize, t: usize) -> Result<Self> {
        Self::check_t(t)?;
        Self::with_delta(n, t, (t << (2 * t + 2)) * ceil_log2(n as u64).max(1))
    }

    /// Explicit δ, for desk-scale experiments where the formula value exceeds
    /// the word length.
    pub fn with_delta(n: usize, t: usize, delta: usize) -> Result<Self> {
        Self::check_t(t)?;
        if delta < 2 * t {
            return Err(Error::param(format!(
                "δ = {delta} is shorter than the marker 0^{t}1^{t}"
            )));
        }
        Ok(DensityParams { n, t, delta })
    }

    fn check_t(t: usize) -> Result<()> {
        if t == 0 || t > MAX_DENSE_T {
            return Err(Error::param(format!(
                "burst length t must lie in [1, {MAX_DENSE_T}], got {t}"
            )));
        }
        Ok(())
    }

    /// The marker `0^t 1^t`.
    pub fn pattern(&self) -> Vec<u16> {
        marker(self.t)
    }

    /// Bits of a position record, `⌈log n⌉`.
    pub fn index_bits(&self) -> usize {
        ceil_log2(self.n as u64)
    }

    /// Output length of [`compress_g`], `δ − ⌈log n⌉ − 4t − 2`, if positive.
    pub fn compressed_len(&self) -> Option<usize> {
        self.delta
            .checked_sub(self.index_bits() + 4 * self.t + 2)
            .filter(|&l| l > 0)
    }

    /// Error unless marker-free windows of length δ fit in
    /// [`compressed_len`](Self::compressed_len) bits.
    pub fn check_compressible(&self) -> Result<()> {
        let two_t = 2 * self.t;
        if self.delta % two_t != 0 {
            return Err(Error::param(format!(
                "δ = {} is not a multiple of 2t = {two_t}",
                self.delta
            )));
        }
        let Some(out) = self.compressed_len() else {
            return Err(Error::param(format!(
                "δ = {} leaves no room for the compressed window (needs more than ⌈log n⌉ + 4t + 2 = {})",
                self.delta,
                self.index_bits() + 4 * self.t + 2
            )));
        };
        let needed = digit_capacity(self.t, self.delta / two_t).bits() as usize;
        if needed > out {
            return Err(Error::param(format!(
                "marker-free windows of length {} need {needed} bits but only {out} are available \
                 (t = {}, ⌈log n⌉ = {})",
                self.delta,
                self.t,
                self.index_bits()
            )));
        }
        Ok(())
    }
}

fn marker(t: usize) -> Vec<u16> {
    let mut w = vec![0u16; t];
    w.resize(2 * t, 1);
    w
}

/// `(2^{2t} − 1)^m − 1`, the largest value of `m` base-`(2^{2t}−1)` digits.
fn digit_capacity(t: usize, m: usize) -> BigUint {
    let base = BigUint::from((1u64 << (2 * t)) - 1);
    base.pow(m as u32) - 1u32
}

/// Gaps between consecutive ones of `(1, 1_w(x), 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaVector {
    pub gaps: Vec<usize>,
}

impl AlphaVector {
    /// Number of marker occurrences `n_w`.
    pub fn pattern_count(&self) -> usize {
        self.gaps.len() - 1
    }

    pub fn max_gap(&self) -> usize {
        self.gaps.iter().copied().max().unwrap_or(0)
    }

    /// `Σ i·α_i`.
    pub fn vt(&self) -> u64 {
        self.gaps
            .iter()
            .enumerate()
            .map(|(i, &g)| (i as u64 + 1) * g as u64)
            .sum()
    }
}

/// Start positions (0-based) of the marker `0^t 1^t` in `x`. Occurrences can
/// never overlap, so this is also the support of the indicator vector.
pub(crate) fn marker_starts(x: &[u16], t: usize) -> Vec<usize> {
    let k = 2 * t;
    if x.len() < k {
        return Vec::new();
    }
    (0..=x.len() - k)
        .filter(|&i| x[i..i + t].iter().all(|&b| b == 0) && x[i + t..i + k].iter().all(|&b| b == 1))
        .collect()
}

fn alpha_from_starts(starts: &[usize], len: usize, t: usize) -> AlphaVector {
    // Ones of (1, 1_w, 1) sit at 1, s + 2 (for 0-based start s) and len − 2t + 3.
    let mut prev = 1usize;
    let mut gaps = Vec::with_capacity(starts.len() + 1);
    for &s in starts {
        gaps.push(s + 2 - prev);
        prev = s + 2;
    }
    gaps.push(len - 2 * t + 3 - prev);
    AlphaVector { gaps }
}

/// Indicator vector of the marker and the gap vector `α_w(x)`.
pub fn indicator_alpha(x: &[u16], dp: &DensityParams) -> Result<(Vec<u16>, AlphaVector)> {
    check_binary(x)?;
    let t = dp.t;
    if x.len() < 2 * t {
        return Err(Error::length(format!("at least 2t = {}", 2 * t), x.len()));
    }
    let starts = marker_starts(x, t);
    let mut ind = vec![0u16; x.len() - 2 * t + 1];
    for &s in &starts {
        ind[s] = 1;
    }
    Ok((ind, alpha_from_starts(&starts, x.len(), t)))
}

/// Gap vector only, without validation (the caller guarantees a binary word of
/// length at least 2t).
pub(crate) fn alpha_raw(x: &[u16], t: usize) -> AlphaVector {
    alpha_from_starts(&marker_starts(x, t), x.len(), t)
}

/// True when every gap of `α_w(x)` is at most δ.
pub fn is_dense(x: &[u16], dp: &DensityParams) -> bool {
    x.len() >= 2 * dp.t && x.iter().all(|&b| b <= 1) && alpha_raw(x, dp.t).max_gap() <= dp.delta
}

/// Every `(w, δ)`-dense word of length `dp.n`, in lexicographic order, or a
/// budget error once more than `budget` words have been produced.
///
/// The search extends prefixes bit by bit and abandons a prefix as soon as a
/// gap of `α_w` is certain to exceed δ, so its cost tracks the number of dense
/// words rather than `2^n`.
pub fn enumerate_dense(dp: &DensityParams, budget: u64) -> Result<Vec<Vec<u16>>> {
    let (n, t, delta) = (dp.n, dp.t, dp.delta);
    if n < 2 * t {
        return Err(Error::length(format!("at least 2t = {}", 2 * t), n));
    }
    let mut out = Vec::new();
    let mut word = vec![0u16; n];
    // `last` is the position of the latest one of (1, 1_w, 1): 1 initially,
    // s + 2 for a marker at 0-based start s.
    fn rec(
        word: &mut Vec<u16>,
        m: usize,
        last: usize,
        dp: (usize, usize, usize),
        out: &mut Vec<Vec<u16>>,
        budget: u64,
    ) -> Result<()> {
        let (n, t, delta) = dp;
        let mut last = last;
        if m >= 2 * t {
            let s = m - 2 * t;
            if word[s..s + t].iter().all(|&b| b == 0) && word[s + t..m].iter().all(|&b| b == 1) {
                last = s + 2;
            } else if s + 2 >= last + delta {
                // The marker that closes the current gap had to start by now.
                return Ok(());
            }
        }
        if m == n {
            if n - 2 * t + 3 - last <= delta {
                if out.len() as u64 >= budget {
                    return Err(Error::BudgetExceeded {
                        what: "dense words".into(),
                        required: u128::from(budget) + 1,
                        budget: u128::from(budget),
                    });
                }
                out.push(word.clone());
            }
            return Ok(());
        }
        for b in 0..2u16 {
            word[m] = b;
            rec(word, m + 1, last, dp, out, budget)?;
        }
        Ok(())
    }
    rec(&mut word, 0, 1, (n, t, delta), &mut out, budget)?;
    Ok(out)
}

/// Value of the base-`(2^{2t} − 1)` digit string read off the 2t-bit chunks
/// of `s` (first chunk most significant). The marker is the one chunk value
/// that cannot occur, so chunk values above it shift down by one.
pub fn chunk_value(s: &[u16], t: usize) -> Result<BigUint> {
    check_binary(s)?;
    let two_t = 2 * t;
    if t == 0 || s.len() % two_t != 0 {
        return Err(Error::length(
            format!("a multiple of 2t = {two_t}"),
            s.len(),
        ));
    }
    let marker_value = (1u64 << t) - 1;
    let base = (1u64 << two_t) - 1;
    let mut acc = BigUint::zero();
    for chunk in s.chunks(two_t) {
        let v = chunk.iter().fold(0u64, |a, &b| (a << 1) | u64::from(b));
        if v == marker_value {
            return Err(Error::param(
                "window to compress has a chunk equal to the marker 0^t1^t",
            ));
        }
        let digit = if v < marker_value { v } else { v - 1 };
        acc = acc * base + digit;
    }
    Ok(acc)
}

/// Map a marker-free window of length δ to `δ − ⌈log n⌉ − 4t − 2` bits: the
/// [`chunk_value`] of the window written in fixed-width binary. Only chunks
/// aligned to multiples of 2t need to avoid the marker for the map to be
/// invertible.
pub fn compress_g(s: &[u16], dp: &DensityParams) -> Result<Vec<u16>> {
    check_binary(s)?;
    dp.check_compressible()?;
    if s.len() != dp.delta {
        return Err(Error::length(format!("δ = {}", dp.delta), s.len()));
    }
    let acc = chunk_value(s, dp.t)?;
    Ok(to_fixed_bits(&acc, dp.compressed_len().unwrap_or(0)))
}

/// Inverse of [`compress_g`].
pub fn decompress_g(bits: &[u16], dp: &DensityParams) -> Result<Vec<u16>> {
    check_binary(bits)?;
    dp.check_compressible()?;
    let out_len = dp.compressed_len().unwrap_or(0);
    if bits.len() != out_len {
        return Err(Error::length(
            format!("{out_len} compressed bits"),
            bits.len(),
        ));
    }
    let two_t = 2 * dp.t;
    let chunks = dp.delta / two_t;
    let mut acc = bits
        .iter()
        .fold(BigUint::zero(), |a, &b| (a << 1u32) + u32::from(b));
    if acc > digit_capacity(dp.t, chunks) {
        return Err(Error::Malformed(
            "compressed value exceeds the digit range".into(),
        ));
    }
    let marker_value = (1u64 << dp.t) - 1;
    let base = BigUint::from((1u64 << two_t) - 1);
    let mut digits = vec![0u64; chunks];
    for d in digits.iter_mut().rev() {
        let r = &acc % &base;
        *d = r.to_u64().unwrap_or(0);
        acc /= &base;
    }
    let mut s = Vec::with_capacity(dp.delta);
    for d in digits {
        let v = if d < marker_value { d } else { d + 1 };
        for k in (0..two_t).rev() {
            s.push(((v >> k) & 1) as u16);
        }
    }
    Ok(s)
}

fn to_fixed_bits(v: &BigUint, width: usize) -> Vec<u16> {
    (0..width)
        .rev()
        .map(|k| u16::from(v.bit(k as u64)))
        .collect()
}

fn push_bits(out: &mut Vec<u16>, value: usize, width: usize) {
    for k in (0..width).rev() {
        out.push(((value >> k) & 1) as u16);
    }
}

/// Closing marker of a record whose window was padded with `pad` zeros:
/// `0^t 1^t 0^a 1^b 0` with `a = ⌈(2t − pad)/2⌉`, `b = ⌊(2t − pad)/2⌋`.
fn closing(t: usize, pad: usize) -> Vec<u16> {
    let rest = 2 * t - pad;
    let (a, b) = (rest.div_ceil(2), rest / 2);
    let mut c = marker(t);
    c.extend(std::iter::repeat(0).take(a));
    c.extend(std::iter::repeat(1).take(b));
    c.push(0);
    c
}

/// Smallest 1-based `i ≤ live` such that no marker starts in `[i, i + δ − 2t]`.
fn free_window_start(e: &[u16], live: usize, dp: &DensityParams) -> Option<usize> {
    let t = dp.t;
    let mut is_start = vec![false; e.len() + 1];
    for s in marker_starts(e, t) {
        is_start[s + 1] = true;
    }
    // next[j]: smallest marker start ≥ j (1-based), or usize::MAX.
    let mut next = vec![usize::MAX; e.len() + 2];
    for j in (1..=e.len()).rev() {
        next[j] = if is_start[j] { j } else { next[j + 1] };
    }
    (1..=live).find(|&i| next[i] > i + dp.delta - 2 * t)
}

/// Encode `x` (length `n = dp.n`) into a `(w, δ)`-dense word of length
/// `n + 4t`.
///
/// The word starts as `x · 0^t1^t0^t1^t`. While some window of the live
/// prefix of length δ is marker free, it is cut out and replaced at the end by
/// the record `index(i) · g(window) · 1 · closing`, where `index(i)` is `i − 1`
/// on `⌈log n⌉` bits. A window that runs past the live prefix is padded with
/// zeros before compression; the pad length is recorded in the closing marker
/// so the record has exactly the length of what it replaced.
pub fn dense_encode(x: &[u16], dp: &DensityParams) -> Result<Vec<u16>> {
    check_binary(x)?;
    if x.len() != dp.n {
        return Err(Error::length(format!("n = {}", dp.n), x.len()));
    }
    dp.check_compressible()?;
    let (t, delta, idx_bits) = (dp.t, dp.delta, dp.index_bits());
    let mut e = x.to_vec();
    e.extend(marker(t));
    e.extend(marker(t));
    let mut live = x.len();
    while let Some(i) = free_window_start(&e, live, dp) {
        let mut record = Vec::with_capacity(delta);
        push_bits(&mut record, i - 1, idx_bits);
        if i + delta <= live + 1 {
            let window: Vec<u16> = e.drain(i - 1..i - 1 + delta).collect();
            record.extend(compress_g(&window, dp)?);
            record.push(1);
            record.extend(closing(t, 0));
            live -= delta;
        } else {
            let pad = i + delta - live - 1;
            let mut window: Vec<u16> = e.drain(i - 1..live).collect();
            window.resize(delta, 0);
            record.extend(compress_g(&window, dp)?);
            record.push(1);
            record.extend(closing(t, pad));
            live = i - 1;
        }
        e.extend(record);
    }
    debug_assert_eq!(e.len(), x.len() + 4 * t);
    Ok(e)
}

fn run_before(y: &[u16], end: usize, bit: u16) -> usize {
    y[..end].iter().rev().take_while(|&&b| b == bit).count()
}

/// Invert [`dense_encode`]: while the word ends in 0, pop the trailing record
/// and re-insert its window; a trailing 1 means only the initial markers are
/// left.
pub fn dense_decode(y: &[u16], dp: &DensityParams) -> Result<Vec<u16>> {
    check_binary(y)?;
    let (n, t, delta, idx_bits) = (dp.n, dp.t, dp.delta, dp.index_bits());
    let total = n + 4 * t;
    if y.len() != total {
        return Err(Error::length(format!("n + 4t = {total}"), y.len()));
    }
    dp.check_compressible()?;
    let g_len = dp.compressed_len().unwrap_or(0);
    let mut y = y.to_vec();
    for _ in 0..=total {
        if y[total - 1] == 1 {
            let mut tail = marker(t);
            tail.extend(marker(t));
            if y[n..] != tail[..] {
                return Err(Error::Malformed(
                    "dense word does not end in 0^t1^t0^t1^t".into(),
                ));
            }
            y.truncate(n);
            return Ok(y);
        }
        // Parse `0^t 1^t 0^a 1^b 0` from the right.
        let trailing_zeros = run_before(&y, total, 0);
        let (a, b, mut pos) = if trailing_zeros >= 2 {
            (trailing_zeros - 1, 0, total - trailing_zeros)
        } else {
            let b = run_before(&y, total - 1, 1);
            let a = run_before(&y, total - 1 - b, 0);
            (a, b, total - 1 - b - a)
        };
        let ones = run_before(&y, pos, 1);
        pos -= ones;
        let zeros = run_before(&y, pos, 0);
        if ones != t || zeros != t || a < 1 || a < b || a - b > 1 || a + b > 2 * t {
            return Err(Error::Malformed(
                "dense word has a malformed record trailer".into(),
            ));
        }
        pos -= zeros;
        let pad = 2 * t - a - b;
        let rec_len = delta - pad;
        if rec_len > total {
            return Err(Error::Malformed("dense record longer than the word".into()));
        }
        let start = total - rec_len;
        if start + idx_bits + g_len + 1 != pos || y[pos - 1] != 1 {
            return Err(Error::Malformed("dense record is misaligned".into()));
        }
        let rec = y.split_off(start);
        let i = rec[..idx_bits]
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b))
            + 1;
        let window = decompress_g(&rec[idx_bits..idx_bits + g_len], dp)?;
        if window[rec_len..].iter().any(|&b| b != 0) {
            return Err(Error::Malformed(
                "padding of a dense record is not zero".into(),
            ));
        }
        if i > y.len() + 1 {
            return Err(Error::Malformed(format!(
                "dense record points at position {i}"
            )));
        }
        y = insert_at(&y, i - 1, &window[..rec_len]);
    }
    Err(Error::Malformed("dense word has too many records".into()))
}
