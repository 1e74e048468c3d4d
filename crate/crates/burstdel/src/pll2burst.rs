//! Bursts of at most two deletions over even alphabets.
//!
//! The least significant row of the binary matrix `A(u)` is a Levenshtein
//! codeword whose period-2 substrings are short (the PLL constraint), so once
//! that row is corrected the burst is known to lie in a short window. Every
//! other row only needs the much cheaper window-aided ("P-bounded") code.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::classic::levenshtein_decode;
use crate::error::{Error, Result};
use crate::seqcore::{
    bits_per_symbol, ceil_log2, check_alphabet, check_binary, consistent_burst_starts, insert_at,
    longest_period2, matrix_rows, psi_inv_raw, psi_raw, rows_to_word, vt_syndrome, weight,
    Interval,
};

/// Smallest payload length accepted by [`pll_encode`]: the least `n` with
/// `⌈log n⌉ + 5 < n`, so that a collapsed period-2 run is strictly longer than
/// the record replacing it.
pub const PLL_MIN_N: usize = 10;

/// Parameters of the PLL encoder for payload length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PllParams {
    pub n: usize,
}

impl PllParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < PLL_MIN_N {
            return Err(Error::param(format!(
                "PLL encoding needs n ≥ {PLL_MIN_N} (so that ⌈log n⌉ + 5 < n), got {n}"
            )));
        }
        Ok(PllParams { n })
    }

    /// Bits used for a position record, `⌈log n⌉`.
    pub fn index_bits(&self) -> usize {
        ceil_log2(self.n as u64)
    }

    /// Longest period-2 substring allowed in an encoded word, `⌈log n⌉ + 5`.
    pub fn cap(&self) -> usize {
        pll_cap(self.n)
    }

    pub fn encoded_len(&self) -> usize {
        self.n + 2
    }
}

/// `⌈log n⌉ + 5`.
pub fn pll_cap(n: usize) -> usize {
    ceil_log2(n as u64) + 5
}

/// True when no substring of `x` with period 2 is longer than `cap`.
pub fn is_pll(x: &[u16], cap: usize) -> bool {
    longest_period2(x) <= cap
}

fn push_index_bits(out: &mut Vec<u16>, value: usize, width: usize) {
    for k in (0..width).rev() {
        out.push(((value >> k) & 1) as u16);
    }
}

/// Encode `x` into a word of length `n + 2` whose period-2 substrings have
/// length at most `⌈log n⌉ + 5`.
///
/// Starting from `x·10`, the scan looks for a window of `⌈log n⌉ + 6` bits
/// with period 2 at position `i`. Such a window is cut to its first two bits:
/// the `⌈log n⌉ + 5` bits at `[i, i + ⌈log n⌉ + 4]` are removed and the record
/// `0 · y_i y_{i+1} · b(i) · 11` (with `b(i)` the `⌈log n⌉`-bit binary form of
/// `i`) is appended, after which the scan restarts at `i = 1`.
pub fn pll_encode(x: &[u16]) -> Result<Vec<u16>> {
    check_binary(x)?;
    let p = PllParams::new(x.len())?;
    let (k, cap) = (p.index_bits(), p.cap());
    let mut y = x.to_vec();
    y.extend_from_slice(&[1, 0]);
    let mut n_live = x.len();
    let mut i = 1usize;
    while i + k + 3 <= n_live {
        let window = &y[i - 1..i + cap];
        if longest_period2(window) == cap + 1 {
            let (a, b) = (y[i - 1], y[i]);
            y.drain(i - 1..i - 1 + cap);
            y.extend_from_slice(&[0, a, b]);
            push_index_bits(&mut y, i, k);
            y.extend_from_slice(&[1, 1]);
            n_live -= cap;
            i = 1;
        } else {
            i += 1;
        }
    }
    debug_assert_eq!(y.len(), x.len() + 2);
    Ok(y)
}

/// Invert [`pll_encode`]: pop records `0·ab·h·11` from the end, re-inserting
/// the alternating run `abab…` of length `⌈log n⌉ + 5` at position `h`, until
/// the word ends in the `10` marker.
pub fn pll_decode(y: &[u16]) -> Result<Vec<u16>> {
    check_binary(y)?;
    if y.len() < 2 {
        return Err(Error::Malformed("PLL word shorter than its marker".into()));
    }
    let p = PllParams::new(y.len() - 2)?;
    let (k, cap) = (p.index_bits(), p.cap());
    let mut y = y.to_vec();
    loop {
        let m = y.len();
        match (y[m - 2], y[m - 1]) {
            (1, 0) => {
                y.truncate(m - 2);
                return Ok(y);
            }
            (1, 1) => {
                if m < cap + 2 {
                    return Err(Error::Malformed("PLL record overruns the word".into()));
                }
                let rec = y.split_off(m - cap);
                if rec[0] != 0 {
                    return Err(Error::Malformed("PLL record does not start with 0".into()));
                }
                let (a, b) = (rec[1], rec[2]);
                let h = rec[3..3 + k]
                    .iter()
                    .fold(0usize, |acc, &v| (acc << 1) | usize::from(v));
                if h == 0 || h > y.len() + 1 {
                    return Err(Error::Malformed(format!(
                        "PLL record points at position {h}"
                    )));
                }
                let run: Vec<u16> = (0..cap).map(|j| if j % 2 == 0 { a } else { b }).collect();
                y = insert_at(&y, h - 1, &run);
            }
            _ => {
                return Err(Error::Malformed(
                    "PLL word ends in neither 10 nor 11".into(),
                ))
            }
        }
    }
}

/// Window containing every burst position consistent with a corrected row
/// and its received version: the hull `[min i, max i + t′ − 1]` over all burst
/// starts `i` that explain the received row. For a PLL row its length is at
/// most `⌈log n⌉ + 5`, because all consistent positions lie in one period-2
/// stretch.
pub fn locate_from_row1(decoded: &[u16], received: &[u16]) -> Result<Interval> {
    let starts = consistent_burst_starts(decoded, received);
    let (Some(&lo), Some(&hi)) = (starts.first(), starts.last()) else {
        return Err(Error::param(
            "received row is not a burst descendant of the decoded row",
        ));
    };
    Interval::new(lo, hi + decoded.len() - received.len() - 1)
}

/// The window-aided Levenshtein code
/// `{x : VT(ψ(x)) ≡ c mod 2P, wt(ψ(x)) ≡ d mod 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PBoundedParams {
    pub n: usize,
    pub p: usize,
    pub c: u64,
    pub d: u64,
}

impl PBoundedParams {
    pub fn new(n: usize, p: usize, c: u64, d: u64) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::param("P-bounded code needs n ≥ 1 and P ≥ 1"));
        }
        if c >= 2 * p as u64 || d >= 3 {
            return Err(Error::param(format!(
                "residues (c={c}, d={d}) out of range for P={p}"
            )));
        }
        Ok(PBoundedParams { n, p, c, d })
    }

    pub fn residues_of(p: usize, x: &[u16]) -> (u64, u64) {
        let y = psi_raw(x);
        (vt_syndrome(&y) % (2 * p as u64), weight(&y) as u64 % 3)
    }

    pub fn member(&self, x: &[u16]) -> Result<bool> {
        check_binary(x)?;
        if x.len() != self.n {
            return Err(Error::length(format!("{}", self.n), x.len()));
        }
        Ok(Self::residues_of(self.p, x) == (self.c, self.d))
    }

    /// The window `[max(1, m), min(n, m + P − 1)]`.
    pub fn window(&self, m: usize) -> Result<Interval> {
        let lo = m.max(1);
        let hi = (m + self.p - 1).min(self.n);
        Interval::new(lo, hi)
    }
}

/// Decode a P-bounded codeword given that the deleted positions lie in
/// `[m, m + P − 1]` (clamped to `[1, n]`).
pub fn pbounded_decode(received: &[u16], params: &PBoundedParams, m: usize) -> Result<Vec<u16>> {
    pbounded_decode_in(received, params, params.window(m)?)
}

/// Decode a P-bounded codeword given a window of length at most `P` that
/// contains every deleted position.
///
/// In the derivative `y = ψ(x)` a burst rewrites a few bits next to the
/// burst: the weight change `Δ_w` (known mod 3) and the parity of the VT
/// change `Δ` (known mod 2P) select the rewrite, and the window bounds the
/// position `p` of the first altered bit. Each candidate position in that
/// range is tried against the VT residue; within a window of length `P` the
/// residue separates all of them except positions that yield the same word.
pub fn pbounded_decode_in(
    received: &[u16],
    params: &PBoundedParams,
    window: Interval,
) -> Result<Vec<u16>> {
    check_binary(received)?;
    let n = params.n;
    let m = received.len();
    if m > n || n - m > 2 {
        return Err(Error::length(format!("{} to {n}", n.saturating_sub(2)), m));
    }
    if window.hi > n || window.len() > params.p {
        return Err(Error::param(format!(
            "window {window} must lie in [1, {n}] and have length ≤ P = {}",
            params.p
        )));
    }
    let t = n - m;
    let yr = psi_raw(received);
    let modulus = 2 * params.p as u64;
    let dw = (params.d + 3 - weight(&yr) as u64 % 3) % 3;
    let odd = ((params.c + modulus - vt_syndrome(&yr) % modulus) % modulus) % 2 == 1;
    let (lo, hi) = (window.lo, window.hi);
    // Range of the 1-based position `p` of the first altered derivative bit.
    let span = |last: usize| -> std::ops::RangeInclusive<usize> {
        let first = lo.saturating_sub(1).max(1);
        if last < first {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        first..=last
    };
    let mut cands: Vec<Vec<u16>> = Vec::new();
    let replace_at = |p: usize, with: &[u16]| -> Vec<u16> {
        let mut y = yr[..p - 1].to_vec();
        y.extend_from_slice(with);
        y.extend_from_slice(&yr[p..]);
        y
    };
    match (t, dw) {
        (0, _) => cands.push(yr.clone()),
        // A 0 vanished: 00, 01 or 10 collapsed, or a leading 0 was cut.
        (1, 0) => cands.extend(span(hi).map(|p| insert_at(&yr, p - 1, &[0]))),
        // Only a leading 1 can disappear outright.
        (1, 1) => {
            if lo == 1 {
                cands.push(insert_at(&yr, 0, &[1]));
            }
        }
        // 11 collapsed to the 0 at p.
        (1, _) => cands.extend(
            span(hi.saturating_sub(1))
                .filter(|&p| p <= yr.len() && yr[p - 1] == 0)
                .map(|p| replace_at(p, &[1, 1])),
        ),
        // 010 collapsed to the 1 at p.
        (_, 0) if odd => cands.extend(
            span(hi.saturating_sub(2))
                .filter(|&p| p <= yr.len() && yr[p - 1] == 1)
                .map(|p| replace_at(p, &[0, 1, 0])),
        ),
        // 00 vanished.
        (_, 0) => cands.extend(span(hi.saturating_sub(1)).map(|p| insert_at(&yr, p - 1, &[0, 0]))),
        // A leading 10 or 01 was cut.
        (_, 1) => {
            if lo == 1 {
                cands.push(insert_at(&yr, 0, if odd { &[1, 0] } else { &[0, 1] }));
            }
        }
        // 11 vanished.
        (_, _) if odd => {
            cands.extend(span(hi.saturating_sub(1)).map(|p| insert_at(&yr, p - 1, &[1, 1])))
        }
        // 101 collapsed to the 0 at p.
        (_, _) => cands.extend(
            span(hi.saturating_sub(2))
                .filter(|&p| p <= yr.len() && yr[p - 1] == 0)
                .map(|p| replace_at(p, &[1, 0, 1])),
        ),
    }
    let found: BTreeSet<Vec<u16>> = cands
        .into_iter()
        .filter(|y| y.len() == n)
        .map(|y| psi_inv_raw(&y))
        .filter(|x| PBoundedParams::residues_of(params.p, x) == (params.c, params.d))
        .filter(|x| {
            t == 0
                || consistent_burst_starts(x, received)
                    .iter()
                    .any(|&s| s >= lo && s + t - 1 <= hi)
        })
        .collect();
    let mut found = found.into_iter();
    match (found.next(), found.next()) {
        (Some(x), None) => Ok(x),
        (None, _) => Err(Error::undecodable(
            "no P-bounded codeword explains the received word in the window",
        )),
        (Some(_), Some(_)) => Err(Error::undecodable(
            "several P-bounded codewords explain the received word",
        )),
    }
}

/// Residues of the q-ary code correcting a burst of at most two deletions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct C2BParams {
    pub n: usize,
    pub q: u32,
    /// Levenshtein residue of row 1, in `[0, 2n)`.
    pub a: u64,
    /// `(c_i, d_i)` for rows `2..=⌈log q⌉`, with `c_i ∈ [0, 2P)`, `d_i ∈ [0, 3)`.
    pub rows: Vec<(u64, u64)>,
}

impl C2BParams {
    pub fn new(n: usize, q: u32, a: u64, rows: Vec<(u64, u64)>) -> Result<Self> {
        let p = C2BParams { n, q, a, rows };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        crate::seqcore::check_q(self.q)?;
        if self.q % 2 != 0 {
            return Err(Error::param("the two-burst code needs an even alphabet"));
        }
        PllParams::new(self.n)?;
        if self.a >= 2 * self.n as u64 {
            return Err(Error::param("row-1 residue must lie in [0, 2n)"));
        }
        if self.rows.len() + 1 != bits_per_symbol(self.q) {
            return Err(Error::param(format!(
                "expected residues for {} further rows, got {}",
                bits_per_symbol(self.q) - 1,
                self.rows.len()
            )));
        }
        for &(c, d) in &self.rows {
            PBoundedParams::new(self.n, self.window_len(), c, d)?;
        }
        Ok(())
    }

    /// `P = ⌈log n⌉ + 5`.
    pub fn window_len(&self) -> usize {
        pll_cap(self.n)
    }

    pub fn row_params(&self, i: usize) -> PBoundedParams {
        let (c, d) = self.rows[i];
        PBoundedParams {
            n: self.n,
            p: self.window_len(),
            c,
            d,
        }
    }

    /// Row-1 constraint: Levenshtein residue and the PLL cap.
    pub fn row1_member(n: usize, a: u64, row: &[u16]) -> bool {
        is_pll(row, pll_cap(n)) && vt_syndrome(&psi_raw(row)) % (2 * n as u64) == a
    }

    pub fn member(&self, u: &[u16]) -> Result<bool> {
        check_alphabet(u, self.q)?;
        if u.len() != self.n {
            return Err(Error::length(format!("{}", self.n), u.len()));
        }
        let rows = matrix_rows(u, self.q);
        Ok(Self::row1_member(self.n, self.a, &rows[0])
            && rows[1..]
                .iter()
                .enumerate()
                .all(|(i, r)| PBoundedParams::residues_of(self.window_len(), r) == self.rows[i]))
    }
}

/// Decode the q-ary two-burst code: correct row 1, localize the burst from
/// it, then correct every other row inside that window.
pub fn c2b_decode(received: &[u16], params: &C2BParams) -> Result<Vec<u16>> {
    params.validate()?;
    check_alphabet(received, params.q)?;
    let n = params.n;
    if received.len() > n || received.len() + 2 < n {
        return Err(Error::length(
            format!("{} to {n}", n.saturating_sub(2)),
            received.len(),
        ));
    }
    if received.len() == n {
        return if params.member(received)? {
            Ok(received.to_vec())
        } else {
            Err(Error::undecodable("full-length word is not a codeword"))
        };
    }
    let rows = matrix_rows(received, params.q);
    let row1 = levenshtein_decode(&rows[0], params.a, n)?;
    let window = locate_from_row1(&row1, &rows[0])?;
    let mut out = vec![row1];
    for (i, r) in rows[1..].iter().enumerate() {
        out.push(pbounded_decode(r, &params.row_params(i), window.lo)?);
    }
    let u = rows_to_word(&out, params.q)?;
    if params.member(&u)? {
        Ok(u)
    } else {
        Err(Error::undecodable(
            "reassembled word violates the row constraints",
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::{apply_burst, bit_string, bits, Burst};

    #[test]
    fn worked_pll_trace() {
        let x = bits("1101010101010101");
        assert_eq!(longest_period2(&x), 15);
        let y = pll_encode(&x).unwrap();
        assert_eq!(bit_string(&y), "101010110010001011");
        assert!(longest_period2(&y) <= 9);
        assert_eq!(pll_decode(&y).unwrap(), x);
    }

    #[test]
    fn pll_untouched_when_short_runs() {
        let x = bits("0011001100110011");
        let y = pll_encode(&x).unwrap();
        assert_eq!(y, [x.clone(), vec![1, 0]].concat());
        assert_eq!(pll_decode(&y).unwrap(), x);
    }

    #[test]
    fn pll_rejects_short_and_malformed() {
        assert!(pll_encode(&bits("010101010")).is_err());
        assert!(pll_decode(&bits("000000000000")).is_err());
    }

    #[test]
    fn locate_examples() {
        let x = bits("1101001");
        let r = apply_burst(&x, Burst::new(4, 2).unwrap()).unwrap();
        let w = locate_from_row1(&x, &r).unwrap();
        for s in consistent_burst_starts(&x, &r) {
            assert!(w.covers(Burst::new(s, 2).unwrap()));
        }
        let x = bits("0101100");
        let r = apply_burst(&x, Burst::new(3, 1).unwrap()).unwrap();
        assert_eq!(locate_from_row1(&x, &r).unwrap().len(), 1);
        assert!(locate_from_row1(&x, &bits("111")).is_err());
    }

    #[test]
    fn pbounded_identity() {
        let x = bits("011010011010");
        let (c, d) = PBoundedParams::residues_of(4, &x);
        let p = PBoundedParams::new(12, 4, c, d).unwrap();
        assert_eq!(pbounded_decode(&x, &p, 5).unwrap(), x);
    }
}
