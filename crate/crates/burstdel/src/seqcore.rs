//! Sequences over `{0, …, q−1}`, burst channels, deletion balls, syndromes and
//! the auxiliary maps (ψ, φ, run indices, binary matrix) shared by every code.
//!
//! Algorithms operate on plain `&[u16]` slices; [`Sequence`] adds the alphabet
//! and validation for the public text and JSON surfaces. Positions in every
//! public type are 1-based.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported alphabet.
pub const MAX_Q: u32 = 1 << 16;

/// Largest length accepted by [`deletion_ball`].
pub const MAX_BALL_LEN: usize = 32;

/// A word over the alphabet `{0, …, q−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sequence {
    symbols: Vec<u16>,
    q: u32,
}

impl Sequence {
    pub fn new(symbols: Vec<u16>, q: u32) -> Result<Self> {
        check_q(q)?;
        check_alphabet(&symbols, q)?;
        Ok(Sequence { symbols, q })
    }

    pub fn binary(bits: Vec<u16>) -> Result<Self> {
        Self::new(bits, 2)
    }

    /// Parse comma-separated decimal symbols, or a bare 0/1 string when `q = 2`.
    pub fn parse(text: &str, q: u32) -> Result<Self> {
        check_q(q)?;
        let text = text.trim();
        if text.is_empty() {
            return Ok(Sequence {
                symbols: Vec::new(),
                q,
            });
        }
        let symbols = if q == 2 && !text.contains(',') {
            text.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(Error::Parse(format!(
                        "unexpected character {other:?} in binary string"
                    ))),
                })
                .collect::<Result<Vec<u16>>>()?
        } else {
            text.split(',')
                .map(|tok| {
                    let tok = tok.trim();
                    let v: u64 = tok
                        .parse()
                        .map_err(|_| Error::Parse(format!("not a symbol: {tok:?}")))?;
                    if v >= u64::from(q) {
                        return Err(Error::InvalidSymbol { symbol: v, q });
                    }
                    Ok(v as u16)
                })
                .collect::<Result<Vec<u16>>>()?
        };
        Ok(Sequence { symbols, q })
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u16> {
        self.symbols
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `0/1` string form of a binary sequence.
    pub fn to_bit_string(&self) -> Option<String> {
        (self.q == 2).then(|| bit_string(&self.symbols))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_symbols(&self.symbols))
    }
}

/// Comma-separated decimal rendering.
pub fn join_symbols(w: &[u16]) -> String {
    w.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// `0/1` rendering of a binary word.
pub fn bit_string(w: &[u16]) -> String {
    w.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// Parse a `0/1` string; panics-free helper used throughout the tests.
pub fn bits(text: &str) -> Vec<u16> {
    text.bytes()
        .filter(|b| *b == b'0' || *b == b'1')
        .map(|b| u16::from(b - b'0'))
        .collect()
}

/// A burst of `len` consecutive deletions starting at the 1-based `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Burst {
    pub start: usize,
    pub len: usize,
}

impl Burst {
    pub fn new(start: usize, len: usize) -> Result<Self> {
        if start == 0 || len == 0 {
            return Err(Error::param(
                "bursts have a 1-based start and a positive length",
            ));
        }
        Ok(Burst { start, len })
    }

    /// Last deleted position.
    pub fn end(&self) -> usize {
        self.start + self.len - 1
    }
}

/// A 1-based inclusive interval of positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::param(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.lo <= pos && pos <= self.hi
    }

    /// True when every deleted position of `b` lies inside the interval.
    pub fn covers(&self, b: Burst) -> bool {
        self.lo <= b.start && b.end() <= self.hi
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

pub(crate) fn check_q(q: u32) -> Result<()> {
    if !(2..=MAX_Q).contains(&q) {
        return Err(Error::param(format!(
            "alphabet size must lie in [2, {MAX_Q}], got {q}"
        )));
    }
    Ok(())
}

/// Error unless every symbol is below `q`.
pub fn check_alphabet(w: &[u16], q: u32) -> Result<()> {
    match w.iter().find(|&&s| u32::from(s) >= q) {
        Some(&s) => Err(Error::InvalidSymbol {
            symbol: u64::from(s),
            q,
        }),
        None => Ok(()),
    }
}

pub(crate) fn check_binary(w: &[u16]) -> Result<()> {
    check_alphabet(w, 2)
}

/// `⌈log₂ n⌉` with `ceil_log2(1) = 0` (and `ceil_log2(0) = 0`).
pub fn ceil_log2(n: u64) -> usize {
    if n <= 1 {
        0
    } else {
        (64 - (n - 1).leading_zeros()) as usize
    }
}

/// Number of binary rows used to represent a symbol of `Σ_q`.
pub fn bits_per_symbol(q: u32) -> usize {
    ceil_log2(u64::from(q))
}

/// Hamming weight (sum of symbols for binary words).
pub fn weight(w: &[u16]) -> usize {
    w.iter().filter(|&&s| s != 0).count()
}

/// Sum of symbols.
pub fn symbol_sum(w: &[u16]) -> u64 {
    w.iter().map(|&s| u64::from(s)).sum()
}

/// The `index`-th word of `Σ_q^n` in lexicographic order (first symbol most
/// significant).
pub fn word_from_index(mut index: u64, n: usize, q: u32) -> Vec<u16> {
    let mut w = vec![0u16; n];
    for slot in w.iter_mut().rev() {
        *slot = (index % u64::from(q)) as u16;
        index /= u64::from(q);
    }
    w
}

/// Inverse of [`word_from_index`].
pub fn index_of_word(w: &[u16], q: u32) -> u64 {
    w.iter()
        .fold(0u64, |acc, &s| acc * u64::from(q) + u64::from(s))
}

/// `q^n` if it fits in a `u64`.
pub fn ambient_size(n: usize, q: u32) -> Option<u64> {
    u64::from(q).checked_pow(u32::try_from(n).ok()?)
}

/// Delete the burst `b` from `u`.
pub fn apply_burst(u: &[u16], b: Burst) -> Result<Vec<u16>> {
    if b.start == 0 || b.len == 0 || b.end() > u.len() {
        return Err(Error::BurstOutOfRange {
            start: b.start,
            len: b.len,
            n: u.len(),
        });
    }
    let mut out = Vec::with_capacity(u.len() - b.len);
    out.extend_from_slice(&u[..b.start - 1]);
    out.extend_from_slice(&u[b.end()..]);
    Ok(out)
}

/// Unchecked burst deletion for hot loops (0-based start).
pub(crate) fn delete_range(u: &[u16], start0: usize, len: usize) -> Vec<u16> {
    let mut out = Vec::with_capacity(u.len() - len);
    out.extend_from_slice(&u[..start0]);
    out.extend_from_slice(&u[start0 + len..]);
    out
}

/// Insert `ins` before 0-based position `at`.
pub(crate) fn insert_at(u: &[u16], at: usize, ins: &[u16]) -> Vec<u16> {
    let mut out = Vec::with_capacity(u.len() + ins.len());
    out.extend_from_slice(&u[..at]);
    out.extend_from_slice(ins);
    out.extend_from_slice(&u[at..]);
    out
}

/// True when `v` arises from `u` by deleting one burst of exactly
/// `|u| − |v|` symbols (`u == v` counts as the empty burst).
pub fn is_burst_descendant(u: &[u16], v: &[u16]) -> bool {
    if v.len() > u.len() {
        return false;
    }
    let prefix = u.iter().zip(v).take_while(|(a, b)| a == b).count();
    let suffix = u
        .iter()
        .rev()
        .zip(v.iter().rev())
        .take_while(|(a, b)| a == b)
        .count();
    prefix + suffix >= v.len()
}

/// Every 1-based burst start `i` such that deleting `|u| − |v|` symbols from
/// `u` at `i` gives `v`. Empty when `v` is not such a descendant or the
/// lengths are equal.
pub fn consistent_burst_starts(u: &[u16], v: &[u16]) -> Vec<usize> {
    if v.len() >= u.len() {
        return Vec::new();
    }
    let prefix = u.iter().zip(v).take_while(|(a, b)| a == b).count();
    let suffix = u
        .iter()
        .rev()
        .zip(v.iter().rev())
        .take_while(|(a, b)| a == b)
        .count();
    // Deleting u[s..s+len) (0-based) reproduces v iff u[..s] == v[..s] and
    // u[s+len..] == v[s..], i.e. s ≤ prefix and v.len() − s ≤ suffix.
    let lo = v.len().saturating_sub(suffix);
    let hi = prefix.min(v.len());
    if lo > hi {
        return Vec::new();
    }
    (lo..=hi).map(|s| s + 1).collect()
}

/// `D_t(u)` (bursts of exactly `t`) or `D_{≤t}(u)` when `upto` is set.
pub fn deletion_ball(u: &[u16], t: usize, upto: bool) -> Result<BTreeSet<Vec<u16>>> {
    if t == 0 || t > u.len() {
        return Err(Error::param(format!(
            "burst length {t} must lie in [1, {}]",
            u.len()
        )));
    }
    if u.len() > MAX_BALL_LEN {
        return Err(Error::param(format!(
            "deletion balls are materialized only for length ≤ {MAX_BALL_LEN}, got {}",
            u.len()
        )));
    }
    let lengths = if upto { 1..=t } else { t..=t };
    let mut ball = BTreeSet::new();
    for len in lengths {
        for s in 0..=u.len() - len {
            ball.insert(delete_range(u, s, len));
        }
    }
    Ok(ball)
}

/// Descendants under one burst of exactly `len` deletions, without dedup.
pub(crate) fn burst_descendants(u: &[u16], len: usize) -> impl Iterator<Item = Vec<u16>> + '_ {
    (0..=u.len().saturating_sub(len))
        .filter(move |_| len <= u.len())
        .map(move |s| delete_range(u, s, len))
}

/// Number of runs of a word.
pub fn run_count(w: &[u16]) -> usize {
    if w.is_empty() {
        0
    } else {
        1 + w.windows(2).filter(|p| p[0] != p[1]).count()
    }
}

/// `|D_t(u)|` via the run count of the `t × (n/t)` array whose `j`-th row is
/// `u_j, u_{j+t}, u_{j+2t}, …`.
pub fn burst_ball_size(u: &[u16], t: usize) -> Result<usize> {
    if t == 0 || u.is_empty() || u.len() % t != 0 {
        return Err(Error::param(format!(
            "the run formula needs t | n (t = {t}, n = {})",
            u.len()
        )));
    }
    let runs: usize = (0..t)
        .map(|j| {
            let row: Vec<u16> = u.iter().skip(j).step_by(t).copied().collect();
            run_count(&row)
        })
        .sum();
    Ok(runs + 1 - t)
}

/// `Σ i·w_i` with 1-based `i`, no modulus.
pub fn vt_syndrome(w: &[u16]) -> u64 {
    w.iter()
        .enumerate()
        .map(|(i, &s)| (i as u64 + 1) * u64::from(s))
        .sum()
}

/// Run indices `r(x)` (0-based run number of each position) and their sum.
pub fn run_syndrome(x: &[u16]) -> Result<(Vec<u16>, u64)> {
    check_binary(x)?;
    let mut r = Vec::with_capacity(x.len());
    let mut run = 0u16;
    for (i, &b) in x.iter().enumerate() {
        if i > 0 && b != x[i - 1] {
            run += 1;
        }
        r.push(run);
    }
    let total = r.iter().map(|&v| u64::from(v)).sum();
    Ok((r, total))
}

/// Derivative `ψ(x)_i = x_i ⊕ x_{i+1}` for `i < n`, `ψ(x)_n = x_n`.
pub fn psi(x: &[u16]) -> Result<Vec<u16>> {
    check_binary(x)?;
    Ok(psi_raw(x))
}

pub(crate) fn psi_raw(x: &[u16]) -> Vec<u16> {
    let n = x.len();
    (0..n)
        .map(|i| if i + 1 < n { x[i] ^ x[i + 1] } else { x[i] })
        .collect()
}

/// Inverse of [`psi`]: `x_n = y_n`, `x_i = y_i ⊕ x_{i+1}`.
pub fn psi_inv(y: &[u16]) -> Result<Vec<u16>> {
    check_binary(y)?;
    Ok(psi_inv_raw(y))
}

pub(crate) fn psi_inv_raw(y: &[u16]) -> Vec<u16> {
    let mut x = vec![0u16; y.len()];
    let mut acc = 0u16;
    for i in (0..y.len()).rev() {
        acc ^= y[i];
        x[i] = acc;
    }
    x
}

/// Ascent indicator: `φ(u)_1 = 1`, `φ(u)_i = [u_i > u_{i−1}]`.
pub fn phi(u: &[u16]) -> Result<Vec<u16>> {
    if u.is_empty() {
        return Err(Error::param("φ is undefined on the empty word"));
    }
    Ok(phi_raw(u))
}

/// φ extended to the empty word (empty image).
pub(crate) fn phi_raw(u: &[u16]) -> Vec<u16> {
    (0..u.len())
        .map(|i| if i == 0 || u[i] > u[i - 1] { 1 } else { 0 })
        .collect()
}

/// Length of the longest substring with period 2 (`s_i = s_{i+2}`); words of
/// length ≤ 2 count as periodic, so the value is at least `min(|x|, 2)`.
pub fn longest_period2(x: &[u16]) -> usize {
    let n = x.len();
    if n <= 2 {
        return n;
    }
    let mut best = 2;
    let mut run = 0;
    for i in 0..n - 2 {
        if x[i] == x[i + 2] {
            run += 1;
            best = best.max(run + 2);
        } else {
            run = 0;
        }
    }
    best
}

/// The `⌈log q⌉ × n` binary representation matrix; row 1 holds the least
/// significant bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryMatrix {
    rows: Vec<Vec<u16>>,
    q: u32,
}

impl BinaryMatrix {
    pub fn from_rows(rows: Vec<Vec<u16>>, q: u32) -> Result<Self> {
        check_q(q)?;
        if rows.len() != bits_per_symbol(q) {
            return Err(Error::length(
                format!("{} rows for q = {q}", bits_per_symbol(q)),
                rows.len(),
            ));
        }
        let n = rows.first().map_or(0, Vec::len);
        for row in &rows {
            if row.len() != n {
                return Err(Error::Malformed("matrix rows differ in length".into()));
            }
            check_binary(row)?;
        }
        Ok(BinaryMatrix { rows, q })
    }

    pub fn rows(&self) -> &[Vec<u16>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[u16] {
        &self.rows[i]
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

/// `A(u)`.
pub fn to_matrix(u: &[u16], q: u32) -> Result<BinaryMatrix> {
    check_q(q)?;
    check_alphabet(u, q)?;
    Ok(BinaryMatrix {
        rows: matrix_rows(u, q),
        q,
    })
}

pub(crate) fn matrix_rows(u: &[u16], q: u32) -> Vec<Vec<u16>> {
    (0..bits_per_symbol(q))
        .map(|r| u.iter().map(|&s| (s >> r) & 1).collect())
        .collect()
}

/// Inverse of [`to_matrix`].
pub fn from_matrix(a: &BinaryMatrix) -> Result<Vec<u16>> {
    rows_to_word(&a.rows, a.q)
}

pub(crate) fn rows_to_word(rows: &[Vec<u16>], q: u32) -> Result<Vec<u16>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut u = vec![0u16; n];
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed("matrix rows differ in length".into()));
        }
        for (j, &b) in row.iter().enumerate() {
            u[j] |= (b & 1) << r;
        }
    }
    check_alphabet(&u, q)?;
    Ok(u)
}

/// Odd-indexed (1-based) and even-indexed subsequences.
pub fn split_odd_even(u: &[u16]) -> (Vec<u16>, Vec<u16>) {
    let odd = u.iter().step_by(2).copied().collect();
    let even = u.iter().skip(1).step_by(2).copied().collect();
    (odd, even)
}

/// Interleave `v₁ w₁ v₂ w₂ …`; `v` may be one symbol longer than `w`.
pub fn interleave(v: &[u16], w: &[u16]) -> Vec<u16> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    for i in 0..v.len().max(w.len()) {
        if let Some(&a) = v.get(i) {
            out.push(a);
        }
        if let Some(&b) = w.get(i) {
            out.push(b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_burst_examples() {
        let u = [1, 0, 6, 7, 6, 2, 3, 5];
        assert_eq!(
            apply_burst(&u, Burst::new(4, 2).unwrap()).unwrap(),
            vec![1, 0, 6, 2, 3, 5]
        );
        assert_eq!(
            apply_burst(&[0, 1], Burst::new(1, 2).unwrap()).unwrap(),
            Vec::<u16>::new()
        );
        assert_eq!(
            apply_burst(&bits("01110100"), Burst::new(4, 2).unwrap()).unwrap(),
            bits("011100")
        );
        assert!(matches!(
            apply_burst(&[0, 1], Burst::new(2, 2).unwrap()),
            Err(Error::BurstOutOfRange { .. })
        ));
    }

    #[test]
    fn deletion_ball_examples() {
        let ball = deletion_ball(&bits("0101"), 2, false).unwrap();
        assert_eq!(ball.into_iter().collect::<Vec<_>>(), vec![bits("01")]);
        let ball = deletion_ball(&bits("0110"), 2, false).unwrap();
        assert_eq!(ball.len(), 3);
        assert!(
            ball.contains(&bits("10")) && ball.contains(&bits("00")) && ball.contains(&bits("01"))
        );
        assert_eq!(deletion_ball(&[0; 7], 1, false).unwrap().len(), 1);
        assert!(deletion_ball(&bits("01"), 3, false).is_err());
        assert!(deletion_ball(&[0; 33], 1, false).is_err());
        assert_eq!(deletion_ball(&bits("0110"), 2, true).unwrap().len(), 3 + 3);
    }

    #[test]
    fn ball_size_formula_examples() {
        assert_eq!(burst_ball_size(&bits("0101"), 2).unwrap(), 1);
        assert_eq!(burst_ball_size(&bits("0110"), 2).unwrap(), 3);
        assert_eq!(burst_ball_size(&[1; 5], 1).unwrap(), 1);
        assert!(burst_ball_size(&bits("011"), 2).is_err());
    }

    #[test]
    fn syndromes() {
        assert_eq!(vt_syndrome(&[1, 0, 0, 1, 1, 1, 0, 0]), 16);
        assert_eq!(vt_syndrome(&[0; 9]), 0);
        assert_eq!(vt_syndrome(&[0, 1, 1, 0, 1]), 10);
        let (r, s) = run_syndrome(&bits("01110100")).unwrap();
        assert_eq!(r, vec![0, 1, 1, 1, 2, 3, 4, 4]);
        assert_eq!(s, 16);
        assert_eq!(run_syndrome(&[0; 6]).unwrap().1, 0);
        assert_eq!(run_syndrome(&bits("1010")).unwrap(), (vec![0, 1, 2, 3], 6));
        assert!(run_syndrome(&[0, 2]).is_err());
    }

    #[test]
    fn psi_and_phi() {
        assert_eq!(
            psi(&bits("01110100")).unwrap(),
            vec![1, 0, 0, 1, 1, 1, 0, 0]
        );
        assert_eq!(psi(&[0; 5]).unwrap(), vec![0; 5]);
        let (uo, ue) = split_odd_even(&[1, 0, 6, 7, 6, 2, 3, 5]);
        assert_eq!(phi(&uo).unwrap(), vec![1, 1, 0, 0]);
        assert_eq!(phi(&ue).unwrap(), vec![1, 1, 0, 1]);
        let x = interleave(&phi(&uo).unwrap(), &phi(&ue).unwrap());
        assert_eq!(psi(&x).unwrap(), vec![0, 0, 0, 1, 0, 0, 1, 1]);
        assert_eq!(phi(&[5, 5, 3, 1]).unwrap(), vec![1, 0, 0, 0]);
        assert!(phi(&[]).is_err());
        for idx in 0..1u64 << 10 {
            let x = word_from_index(idx, 10, 2);
            assert_eq!(psi_inv(&psi(&x).unwrap()).unwrap(), x);
            assert_eq!(psi(&psi_inv(&x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn period_two() {
        assert_eq!(longest_period2(&bits("1101010101010101")), 15);
        assert_eq!(longest_period2(&[0; 9]), 9);
        assert_eq!(longest_period2(&bits("10")), 2);
        assert_eq!(longest_period2(&bits("1")), 1);
        assert_eq!(longest_period2(&bits("0011")), 2);
        let x = bits("1010101101000101101");
        let brute = (0..x.len())
            .flat_map(|a| (a + 1..=x.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| (a..b.saturating_sub(2)).all(|i| x[i] == x[i + 2]))
            .map(|(a, b)| b - a)
            .max()
            .unwrap();
        assert_eq!(longest_period2(&x), brute);
        assert!(brute <= 9);
    }

    #[test]
    fn matrix_examples() {
        let a = to_matrix(&[0, 1, 2, 3], 4).unwrap();
        assert_eq!(a.rows(), &[vec![0, 1, 0, 1], vec![0, 0, 1, 1]]);
        assert_eq!(from_matrix(&a).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(
            to_matrix(&[0; 4], 8).unwrap().rows(),
            &[vec![0; 4], vec![0; 4], vec![0; 4]]
        );
        let bad = BinaryMatrix::from_rows(vec![vec![1], vec![1]], 3).unwrap();
        assert!(from_matrix(&bad).is_err());
    }

    #[test]
    fn parse_and_display() {
        let s = Sequence::parse("1,0,6,7", 8).unwrap();
        assert_eq!(s.symbols(), &[1, 0, 6, 7]);
        assert_eq!(s.to_string(), "1,0,6,7");
        let b = Sequence::parse("0110", 2).unwrap();
        assert_eq!(b.to_bit_string().unwrap(), "0110");
        assert!(Sequence::parse("1,8", 8).is_err());
        assert!(Sequence::parse("012", 2).is_err());
        assert!(Sequence::new(vec![0], 1).is_err());
    }

    #[test]
    fn descendants_and_starts() {
        let u = bits("0110");
        assert_eq!(consistent_burst_starts(&u, &bits("00")), vec![2]);
        assert_eq!(
            consistent_burst_starts(&bits("0101"), &bits("01")),
            vec![1, 2, 3]
        );
        assert!(consistent_burst_starts(&u, &bits("11")).is_empty());
        assert!(is_burst_descendant(&u, &bits("01")));
        assert!(!is_burst_descendant(&u, &bits("11")));
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(16), 4);
        assert_eq!(ceil_log2(17), 5);
    }
}
