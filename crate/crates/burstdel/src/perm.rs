//! Permutation codes correcting one burst of at most t deletions.
//!
//! A permutation is localized through its balanced binary image (a dense
//! localization codeword), and then repaired through its overlapping ranking
//! sequence: the ranks of the relative orders of all consecutive (t+1)-windows.
//! A burst in the permutation becomes one short substring edit in the ranking
//! sequence, which the block code corrects; the ranking sequence then pins
//! down where and in which order the missing symbols go back.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::seqcore::{word_from_index, Interval};
use crate::tburst::{
    is_dense, loc_residues, locate_burst, BlockCode, BlockSums, DensityParams, ErrorModel,
    SyndromeOracle,
};

/// Largest window length whose rank fits the 16-bit symbols used throughout
/// (`8! = 40320`).
pub const MAX_RANK_WINDOW: usize = 8;

/// Largest permutation length handled by [`lex_rank`] (`20!` fits in a `u64`).
pub const MAX_LEX_LEN: usize = 20;

/// Error unless `pi` is an arrangement of `1..=n`.
pub fn check_permutation(pi: &[u16]) -> Result<()> {
    let n = pi.len();
    let mut seen = vec![false; n + 1];
    for &v in pi {
        let v = usize::from(v);
        if v == 0 || v > n || seen[v] {
            return Err(Error::param(format!(
                "not a permutation of 1..={n}: entry {v}"
            )));
        }
        seen[v] = true;
    }
    Ok(())
}

fn check_distinct(u: &[u16]) -> Result<()> {
    let set: BTreeSet<u16> = u.iter().copied().collect();
    if set.len() != u.len() {
        return Err(Error::param("entries must be pairwise distinct"));
    }
    Ok(())
}

/// Balanced binary image: bit i is 1 iff `π_i > n/2`.
pub fn bp_map(pi: &[u16]) -> Vec<u16> {
    bp_map_with(pi, pi.len())
}

/// [`bp_map`] for entries of a permutation of length `n` (used on damaged
/// permutations, where `n` is no longer the length).
pub fn bp_map_with(values: &[u16], n: usize) -> Vec<u16> {
    values
        .iter()
        .map(|&v| u16::from(2 * usize::from(v) > n))
        .collect()
}

/// True when `b` has as many ones as zeros (one more one for odd length).
pub fn is_balanced(b: &[u16]) -> bool {
    let ones = b.iter().filter(|&&x| x == 1).count();
    ones == b.len().div_ceil(2)
}

/// Relative order of distinct entries: the i-th output is the rank (from 1)
/// of `u_i` among the entries of `u`.
pub fn prj(u: &[u16]) -> Result<Vec<u16>> {
    check_distinct(u)?;
    Ok(prj_raw(u))
}

fn prj_raw(u: &[u16]) -> Vec<u16> {
    u.iter()
        .map(|&x| (u.iter().filter(|&&y| y < x).count() + 1) as u16)
        .collect()
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// 1-based lexicographic rank of a permutation of `1..=k` (Lehmer code).
pub fn lex_rank(pi: &[u16]) -> Result<u64> {
    check_permutation(pi)?;
    if pi.len() > MAX_LEX_LEN {
        return Err(Error::param(format!(
            "ranks are computed for length ≤ {MAX_LEX_LEN}"
        )));
    }
    Ok(lex_rank_raw(pi))
}

fn lex_rank_raw(pi: &[u16]) -> u64 {
    let k = pi.len();
    let mut r = 0u64;
    for i in 0..k {
        let smaller_after = pi[i + 1..].iter().filter(|&&y| y < pi[i]).count() as u64;
        r += smaller_after * factorial(k - 1 - i);
    }
    r + 1
}

/// Inverse of [`lex_rank`].
pub fn lex_unrank(rank: u64, k: usize) -> Result<Vec<u16>> {
    if k > MAX_LEX_LEN || rank == 0 || rank > factorial(k) {
        return Err(Error::param(format!("rank {rank} outside [1, {k}!]")));
    }
    let mut rest: Vec<u16> = (1..=k as u16).collect();
    let mut r = rank - 1;
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let f = factorial(k - 1 - i);
        let idx = (r / f) as usize;
        r %= f;
        out.push(rest.remove(idx));
    }
    Ok(out)
}

/// Overlapping ranking sequence `p_{t+1}`: `p_i = μ(Prj(π_i, …, π_{i+t}))`
/// for `i = 1, …, len − t`. Works for any sequence of distinct entries.
pub fn overlap_ranks(pi: &[u16], t: usize) -> Result<Vec<u16>> {
    check_distinct(pi)?;
    if t + 1 > MAX_RANK_WINDOW {
        return Err(Error::param(format!(
            "windows of length t + 1 ≤ {MAX_RANK_WINDOW} only"
        )));
    }
    if pi.len() <= t {
        return Err(Error::length(format!("more than t = {t}"), pi.len()));
    }
    Ok(overlap_ranks_raw(pi, t))
}

fn overlap_ranks_raw(pi: &[u16], t: usize) -> Vec<u16> {
    pi.windows(t + 1)
        .map(|w| lex_rank_raw(&prj_raw(w)) as u16)
        .collect()
}

/// Symbols of `1..=n` missing from `damaged`, ascending.
pub fn missing_symbols(damaged: &[u16], n: usize) -> Result<Vec<u16>> {
    check_distinct(damaged)?;
    if damaged.iter().any(|&v| v == 0 || usize::from(v) > n) {
        return Err(Error::param(format!("entries must lie in 1..={n}")));
    }
    let present: BTreeSet<u16> = damaged.iter().copied().collect();
    Ok((1..=n as u16).filter(|v| !present.contains(v)).collect())
}

/// All orderings of `items` in lexicographic order.
fn orderings(items: &[u16]) -> Vec<Vec<u16>> {
    let k = items.len();
    (1..=factorial(k))
        .filter_map(|r| lex_unrank(r, k).ok())
        .map(|perm| perm.iter().map(|&j| items[usize::from(j) - 1]).collect())
        .collect()
}

/// The unique permutation obtained by inserting `missing` consecutively (in
/// some order, at some position) into `damaged` whose overlapping ranking
/// sequence is `ranks`. Candidates are tried by insertion position, then by
/// ordering; a second distinct match is reported rather than ignored.
pub fn reconstruct(damaged: &[u16], missing: &[u16], ranks: &[u16], t: usize) -> Result<Vec<u16>> {
    let n = damaged.len() + missing.len();
    if missing.len() > t {
        return Err(Error::param(format!(
            "{} missing symbols exceed t = {t}",
            missing.len()
        )));
    }
    let mut whole = damaged.to_vec();
    whole.extend_from_slice(missing);
    check_permutation(&whole)?;
    if missing.is_empty() {
        return if overlap_ranks(damaged, t)? == ranks {
            Ok(damaged.to_vec())
        } else {
            Err(Error::undecodable(
                "ranking sequence does not match the received permutation",
            ))
        };
    }
    let mut found: Option<Vec<u16>> = None;
    for at in 0..=damaged.len() {
        for order in orderings(missing) {
            let mut cand = Vec::with_capacity(n);
            cand.extend_from_slice(&damaged[..at]);
            cand.extend_from_slice(&order);
            cand.extend_from_slice(&damaged[at..]);
            if overlap_ranks_raw(&cand, t) == ranks {
                if found.as_ref().is_some_and(|f| *f != cand) {
                    return Err(Error::undecodable(
                        "two re-insertions share the ranking sequence",
                    ));
                }
                found = Some(cand);
            }
        }
    }
    found.ok_or_else(|| Error::undecodable("no re-insertion reproduces the ranking sequence"))
}

/// Localize a burst in a permutation of length `dp.n` from its damaged binary
/// image (see [`locate_burst`]); `None` when nothing was deleted.
pub fn perm_locate(
    damaged_image: &[u16],
    c0: u64,
    c1: u64,
    dp: &DensityParams,
) -> Result<Option<Interval>> {
    locate_burst(damaged_image, c0, c1, dp)
}

/// Window of the ranking sequence (length `n − t`) that contains every rank
/// changed by a burst inside `window` of the permutation.
pub fn rank_window(window: Interval, n: usize, t: usize) -> Result<Interval> {
    let lo = window.lo.saturating_sub(t).max(1);
    let hi = window.hi.min(n - t);
    Interval::new(lo, hi)
}

/// Recover a ranking sequence of length `len` from `received` (shorter by the
/// burst length), given that one length-reducing substring edit of at most 2t
/// symbols happened inside `window`. Ranks are `1..=(t+1)!`.
pub fn c2t_decode(
    received: &[u16],
    len: usize,
    window: Interval,
    sums: &BlockSums,
    code: &BlockCode,
    t: usize,
) -> Result<Vec<u16>> {
    let q = code.q();
    let shifted: Vec<u16> = received
        .iter()
        .map(|&r| {
            r.checked_sub(1)
                .ok_or_else(|| Error::param("ranks start at 1"))
        })
        .collect::<Result<_>>()?;
    let max_len = 2 * t;
    let out = code.decode_with(&shifted, len, window, sums, |damaged, deleted, local| {
        let mut cands = Vec::new();
        for a in local.lo..=local.hi {
            for l1 in deleted.max(1)..=max_len.min(local.hi + 1 - a) {
                let l2 = l1 - deleted;
                if a - 1 + l2 > damaged.len() {
                    continue;
                }
                let fills = u64::from(q).pow(l1 as u32);
                for f in 0..fills {
                    let mut c = damaged[..a - 1].to_vec();
                    c.extend(word_from_index(f, l1, q));
                    c.extend_from_slice(&damaged[a - 1 + l2..]);
                    cands.push(c);
                }
            }
        }
        cands
    })?;
    Ok(out.into_iter().map(|r| r + 1).collect())
}

/// `(t+1)!`, the number of distinct ranks.
pub fn rank_alphabet(t: usize) -> u32 {
    factorial(t + 1) as u32
}

/// Block code over ranks (shifted to start at 0) with block length `p`,
/// correcting one length-reducing substring edit of at most 2t symbols.
pub fn rank_block_code(p: usize, t: usize, exec: Exec) -> Result<BlockCode> {
    if t + 1 > MAX_RANK_WINDOW {
        return Err(Error::param(format!(
            "windows of length t + 1 ≤ {MAX_RANK_WINDOW} only"
        )));
    }
    let model = ErrorModel::SubstringEdit { max_len: 2 * t };
    BlockCode::new(
        p,
        rank_alphabet(t),
        SyndromeOracle::build(2 * p, model, exec)?,
        SyndromeOracle::build(p, model, exec)?,
    )
}

/// Parameters of the permutation code: localization residues of the binary
/// image, the density bound, the block length of the ranking-sequence code and
/// its stored sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermCodeParams {
    pub n: usize,
    pub t: usize,
    pub delta: usize,
    pub p: usize,
    pub c0: u64,
    pub c1: u64,
    pub sums: BlockSums,
}

impl PermCodeParams {
    pub fn density(&self) -> Result<DensityParams> {
        DensityParams::with_delta(self.n, self.t, self.delta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n <= 2 * self.t {
            return Err(Error::param(format!(
                "permutation code needs n > 2t, got n = {}",
                self.n
            )));
        }
        if self.c0 >= 4 || self.c1 >= 2 * self.n as u64 {
            return Err(Error::param("localization residues out of range"));
        }
        self.density().map(|_| ())
    }

    /// Alphabet of the ranking sequence, `(t+1)!`.
    pub fn rank_alphabet(&self) -> u32 {
        rank_alphabet(self.t)
    }

    /// The block code for ranking sequences of this code.
    pub fn block_code(&self, exec: Exec) -> Result<BlockCode> {
        rank_block_code(self.p, self.t, exec)
    }

    /// Residues of `pi`: `(c0, c1)` of its binary image and the block sums
    /// of its ranking sequence (ranks shifted to start at 0).
    pub fn residues_of(
        pi: &[u16],
        t: usize,
        dp: &DensityParams,
        code: &BlockCode,
    ) -> Result<(u64, u64, BlockSums)> {
        check_permutation(pi)?;
        let (c0, c1) = loc_residues(&bp_map(pi), dp)?;
        let ranks: Vec<u16> = overlap_ranks(pi, t)?.into_iter().map(|r| r - 1).collect();
        Ok((c0, c1, code.sums(&ranks)?))
    }

    pub fn member(&self, pi: &[u16], code: &BlockCode) -> bool {
        let Ok(dp) = self.density() else { return false };
        pi.len() == self.n
            && check_permutation(pi).is_ok()
            && is_dense(&bp_map(pi), &dp)
            && Self::residues_of(pi, self.t, &dp, code).ok() == Some((self.c0, self.c1, self.sums))
    }
}

/// Decode a codeword of the permutation code after one burst of at most t
/// deletions: identify the missing symbols, localize on the binary image,
/// repair the ranking sequence in the induced window and re-insert.
pub fn pleqt_decode(
    damaged: &[u16],
    params: &PermCodeParams,
    code: &BlockCode,
) -> Result<Vec<u16>> {
    params.validate()?;
    if code.p() != params.p || code.q() != params.rank_alphabet() {
        return Err(Error::param(
            "block code does not match the code parameters (rank alphabet, same P)",
        ));
    }
    let (n, t) = (params.n, params.t);
    if damaged.len() > n || damaged.len() + t < n {
        return Err(Error::length(
            format!("between n − t = {} and n = {n}", n - t),
            damaged.len(),
        ));
    }
    let missing = missing_symbols(damaged, n)?;
    if missing.is_empty() {
        return Ok(damaged.to_vec());
    }
    let dp = params.density()?;
    let image = bp_map_with(damaged, n);
    let window = perm_locate(&image, params.c0, params.c1, &dp)?
        .ok_or_else(|| Error::undecodable("localization found no deletion"))?;
    let rwin = rank_window(window, n, t)?;
    if rwin.len() > params.p {
        return Err(Error::undecodable(format!(
            "ranking-sequence window {rwin} is longer than P = {}",
            params.p
        )));
    }
    let received_ranks = overlap_ranks(damaged, t)?;
    let ranks = c2t_decode(&received_ranks, n - t, rwin, &params.sums, code, t)?;
    reconstruct(damaged, &missing, &ranks, t)
}
