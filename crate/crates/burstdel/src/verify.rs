//! Ground truth for the codes: sieving codebooks out of the ambient space,
//! exhaustive confusability checks, exact maximum codes, and sweeps that push
//! every admissible burst of every codeword through a decoder.
//!
//! Every routine here is deterministic: parallel enumeration only changes how
//! the work is split, never which parameters, witnesses or counts come out.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classic::{induced_deletion, induced_sites, ClassicFamily, ClassicParams};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::perm::{
    bp_map, check_permutation, lex_unrank, overlap_ranks, pleqt_decode, rank_block_code,
    PermCodeParams, MAX_LEX_LEN,
};
use crate::pll2burst::{c2b_decode, is_pll, pll_cap, C2BParams, PBoundedParams, PllParams};
use crate::seqcore::{
    bits_per_symbol, burst_descendants, check_alphabet, matrix_rows, psi_raw, rows_to_word,
    vt_syndrome, word_from_index, Interval,
};
use crate::tburst::{
    cpb_decode, ctb_block_code, ctb_decode, enumerate_dense, is_dense, loc_residues, BlockCode,
    BlockSums, CtbParams, DensityParams,
};

/// Version of the codebook JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Default cap on the number of ambient elements a sieve or exact search may
/// enumerate.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Largest confusability graph handed to the exact independent-set search.
pub const MAX_EXACT_VERTICES: u64 = 1 << 12;

/// Largest number of branch-and-bound nodes the exact searches visit.
pub const MAX_SEARCH_NODES: u64 = 1 << 22;

/// The code families that can be sieved, stored and decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Vt,
    Tenengolts,
    Levenshtein,
    Induced,
    C2b,
    Ctb,
    Perm,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Vt,
        Family::Tenengolts,
        Family::Levenshtein,
        Family::Induced,
        Family::C2b,
        Family::Ctb,
        Family::Perm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Vt => "vt",
            Family::Tenengolts => "tenengolts",
            Family::Levenshtein => "levenshtein",
            Family::Induced => "induced",
            Family::C2b => "c2b",
            Family::Ctb => "ctb",
            Family::Perm => "perm",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown code family {s:?}")))
    }
}

/// A fully specified code: its family and every residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
pub enum CodeSpec {
    Vt(ClassicParams),
    Tenengolts(ClassicParams),
    Levenshtein(ClassicParams),
    Induced(ClassicParams),
    C2b(C2BParams),
    Ctb(CtbParams),
    Perm(PermCodeParams),
}

/// The errors a code is designed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// One burst of between 1 and `max` consecutive deletions.
    Bursts { max: usize },
    /// One induced deletion (`aba → a` in an alternating stretch).
    Induced,
}

impl Channel {
    /// Every word the channel can output from `u` when an error occurs, in
    /// a fixed order (duplicates included).
    pub fn outputs(&self, u: &[u16]) -> Vec<Vec<u16>> {
        match *self {
            Channel::Bursts { max } => (1..=max.min(u.len()))
                .flat_map(|len| burst_descendants(u, len).collect::<Vec<_>>())
                .collect(),
            Channel::Induced => induced_sites(u)
                .into_iter()
                .filter_map(|i| induced_deletion(u, i).ok())
                .collect(),
        }
    }
}

impl CodeSpec {
    pub fn family(&self) -> Family {
        match self {
            CodeSpec::Vt(_) => Family::Vt,
            CodeSpec::Tenengolts(_) => Family::Tenengolts,
            CodeSpec::Levenshtein(_) => Family::Levenshtein,
            CodeSpec::Induced(_) => Family::Induced,
            CodeSpec::C2b(_) => Family::C2b,
            CodeSpec::Ctb(_) => Family::Ctb,
            CodeSpec::Perm(_) => Family::Perm,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            CodeSpec::Vt(p)
            | CodeSpec::Tenengolts(p)
            | CodeSpec::Levenshtein(p)
            | CodeSpec::Induced(p) => p.n,
            CodeSpec::C2b(p) => p.n,
            CodeSpec::Ctb(p) => p.n,
            CodeSpec::Perm(p) => p.n,
        }
    }

    /// Alphabet size; a permutation code of length n uses the symbols `1..=n`.
    pub fn q(&self) -> u32 {
        match self {
            CodeSpec::Vt(p)
            | CodeSpec::Tenengolts(p)
            | CodeSpec::Levenshtein(p)
            | CodeSpec::Induced(p) => p.q,
            CodeSpec::C2b(p) => p.q,
            CodeSpec::Ctb(p) => p.q,
            CodeSpec::Perm(p) => p.n as u32,
        }
    }

    /// Largest number of symbols one error removes.
    pub fn t(&self) -> usize {
        match self {
            CodeSpec::Vt(_) | CodeSpec::Tenengolts(_) => 1,
            CodeSpec::Levenshtein(_) | CodeSpec::Induced(_) | CodeSpec::C2b(_) => 2,
            CodeSpec::Ctb(p) => p.t,
            CodeSpec::Perm(p) => p.t,
        }
    }

    pub fn channel(&self) -> Channel {
        match self {
            CodeSpec::Induced(_) => Channel::Induced,
            _ => Channel::Bursts { max: self.t() },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let classic = |p: &ClassicParams, f: ClassicFamily| {
            if p.family != f {
                return Err(Error::param(format!(
                    "{:?} parameters under the {} family",
                    p.family,
                    self.family()
                )));
            }
            p.validate()
        };
        match self {
            CodeSpec::Vt(p) => classic(p, ClassicFamily::Vt),
            CodeSpec::Tenengolts(p) => classic(p, ClassicFamily::Tenengolts),
            CodeSpec::Levenshtein(p) => classic(p, ClassicFamily::Levenshtein),
            CodeSpec::Induced(p) => classic(p, ClassicFamily::Induced),
            CodeSpec::C2b(p) => p.validate(),
            CodeSpec::Ctb(p) => p.validate(),
            CodeSpec::Perm(p) => p.validate(),
        }
    }

    /// `log₂` of the ambient space: `n·log₂ q`, or `log₂ n!` for permutations.
    pub fn ambient_log2(&self) -> f64 {
        match self {
            CodeSpec::Perm(p) => (2..=p.n).map(|k| (k as f64).log2()).sum(),
            _ => self.n() as f64 * f64::from(self.q()).log2(),
        }
    }
}

/// A code specification together with the block code its decoder needs
/// (the ≤t-burst and permutation codes; built from the deterministic oracles).
#[derive(Debug, Clone)]
pub struct Decoder {
    spec: CodeSpec,
    code: Option<BlockCode>,
}

impl Decoder {
    /// Validate `spec` and build any oracles it needs.
    pub fn new(spec: CodeSpec, exec: Exec) -> Result<Self> {
        spec.validate()?;
        let code = match &spec {
            CodeSpec::Ctb(p) => Some(ctb_block_code(p.p, p.t, exec)?),
            CodeSpec::Perm(p) => Some(rank_block_code(p.p, p.t, exec)?),
            _ => None,
        };
        Ok(Decoder { spec, code })
    }

    /// Reuse an already built block code (it must match the specification).
    pub fn with_block_code(spec: CodeSpec, code: BlockCode) -> Result<Self> {
        spec.validate()?;
        Ok(Decoder {
            spec,
            code: Some(code),
        })
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn block_code(&self) -> Option<&BlockCode> {
        self.code.as_ref()
    }

    fn need_code(&self) -> Result<&BlockCode> {
        self.code.as_ref().ok_or_else(|| {
            Error::param(format!(
                "the {} decoder needs a block code",
                self.spec.family()
            ))
        })
    }

    pub fn member(&self, u: &[u16]) -> bool {
        match &self.spec {
            CodeSpec::Vt(p)
            | CodeSpec::Tenengolts(p)
            | CodeSpec::Levenshtein(p)
            | CodeSpec::Induced(p) => p.member(u).unwrap_or(false),
            CodeSpec::C2b(p) => p.member(u).unwrap_or(false),
            CodeSpec::Ctb(p) => self.code.as_ref().is_some_and(|c| p.member(u, c)),
            CodeSpec::Perm(p) => self.code.as_ref().is_some_and(|c| p.member(u, c)),
        }
    }

    /// Correct one error of the family's channel.
    pub fn decode(&self, received: &[u16]) -> Result<Vec<u16>> {
        match &self.spec {
            CodeSpec::Vt(p)
            | CodeSpec::Tenengolts(p)
            | CodeSpec::Levenshtein(p)
            | CodeSpec::Induced(p) => {
                if received.len() == p.n {
                    return self.unchanged(received);
                }
                p.decode(received)
            }
            CodeSpec::C2b(p) => c2b_decode(received, p),
            CodeSpec::Ctb(p) => ctb_decode(received, p, self.need_code()?),
            CodeSpec::Perm(p) => pleqt_decode(received, p, self.need_code()?),
        }
    }

    /// Decode with a caller-supplied window that contains the burst, skipping
    /// localization (≤t-burst code only).
    pub fn decode_in(&self, received: &[u16], window: Interval) -> Result<Vec<u16>> {
        let CodeSpec::Ctb(p) = &self.spec else {
            return Err(Error::param(format!(
                "a decoding window is only meaningful for the ctb family, not {}",
                self.spec.family()
            )));
        };
        check_alphabet(received, p.q)?;
        if received.len() > p.n || received.len() + p.t < p.n {
            return Err(Error::length(
                format!(
                    "between n − t = {} and n = {}",
                    p.n.saturating_sub(p.t),
                    p.n
                ),
                received.len(),
            ));
        }
        let code = self.need_code()?;
        let rows = matrix_rows(received, p.q);
        let repaired = rows
            .iter()
            .zip(&p.rows)
            .map(|(row, sums)| cpb_decode(row, p.n, window, sums, code))
            .collect::<Result<Vec<_>>>()?;
        rows_to_word(&repaired, p.q)
    }

    fn unchanged(&self, received: &[u16]) -> Result<Vec<u16>> {
        if self.member(received) {
            Ok(received.to_vec())
        } else {
            Err(Error::undecodable("full-length word is not a codeword"))
        }
    }
}

/// A materialized code: its specification and every codeword.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    pub schema_version: u32,
    pub spec: CodeSpec,
    pub n: usize,
    pub q: u32,
    pub t: usize,
    pub words: Vec<Vec<u16>>,
    /// `log₂(|ambient| / |code|)`; absent for an empty code.
    pub redundancy_bits: Option<f64>,
}

impl Codebook {
    pub fn new(spec: CodeSpec, words: Vec<Vec<u16>>) -> Self {
        let redundancy_bits = redundancy_bits(&spec, words.len() as u64);
        Codebook {
            schema_version: SCHEMA_VERSION,
            n: spec.n(),
            q: spec.q(),
            t: spec.t(),
            spec,
            words,
            redundancy_bits,
        }
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        match value
            .get("schema_version")
            .and_then(serde_json::Value::as_u64)
        {
            Some(v) if v == u64::from(SCHEMA_VERSION) => {}
            Some(v) => {
                return Err(Error::Malformed(format!(
                    "unsupported codebook schema version {v}"
                )))
            }
            None => return Err(Error::Malformed("codebook has no schema_version".into())),
        }
        let book: Codebook =
            serde_json::from_value(value).map_err(|e| Error::Malformed(e.to_string()))?;
        book.spec.validate()?;
        if book.n != book.spec.n() || book.q != book.spec.q() || book.t != book.spec.t() {
            return Err(Error::Malformed(
                "codebook header disagrees with its specification".into(),
            ));
        }
        for w in &book.words {
            if w.len() != book.n {
                return Err(Error::length(format!("{}", book.n), w.len()));
            }
        }
        Ok(book)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")
            .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// First listed word that is not a member of the code, if any.
    pub fn first_non_member(&self, decoder: &Decoder) -> Option<&[u16]> {
        self.words
            .iter()
            .find(|w| !decoder.member(w))
            .map(Vec::as_slice)
    }
}

/// `log₂(|ambient| / size)`, `None` for an empty code.
pub fn redundancy_bits(spec: &CodeSpec, size: u64) -> Option<f64> {
    (size > 0).then(|| spec.ambient_log2() - (size as f64).log2())
}

/// What to sieve: a family, its length, alphabet and burst length, optional
/// desk-scale overrides of δ and P, and the enumeration budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveRequest {
    pub family: Family,
    pub n: usize,
    pub q: u32,
    pub t: usize,
    pub delta: Option<usize>,
    pub p: Option<usize>,
    pub budget: u64,
}

impl SieveRequest {
    pub fn new(family: Family, n: usize, q: u32, t: usize) -> Self {
        SieveRequest {
            family,
            n,
            q,
            t,
            delta: None,
            p: None,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_delta(mut self, delta: usize) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn with_p(mut self, p: usize) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn check_budget(&self, what: &str, required: u128) -> Result<()> {
        if required > u128::from(self.budget) {
            return Err(Error::BudgetExceeded {
                what: what.into(),
                required,
                budget: self.budget.into(),
            });
        }
        Ok(())
    }

    fn ambient(&self, what: &str, n: usize, q: u32) -> Result<u64> {
        let size = u128::from(q).checked_pow(n as u32).unwrap_or(u128::MAX);
        self.check_budget(what, size)?;
        Ok(size as u64)
    }

    /// δ and P for the ≤t-burst code: defaults are the formula δ and
    /// `P = min(δ + t − 1, n)`.
    pub fn ctb_delta_p(&self) -> Result<(usize, usize)> {
        let delta = match self.delta {
            Some(d) => d,
            None => DensityParams::new(self.n, self.t)?.delta,
        };
        Ok((delta, self.p.unwrap_or((delta + self.t - 1).min(self.n))))
    }

    /// δ and P for the permutation code: defaults are the permutation δ and
    /// `P = min(δ + 2t − 1, n − t)` (the ranking sequence has length n − t).
    pub fn perm_delta_p(&self) -> Result<(usize, usize)> {
        let delta = match self.delta {
            Some(d) => d,
            None => DensityParams::for_permutations(self.n, self.t)?.delta,
        };
        let len = self.n.saturating_sub(self.t).max(1);
        Ok((delta, self.p.unwrap_or((delta + 2 * self.t - 1).min(len))))
    }
}

/// Count how many indices in `0..total` map to each key.
fn count_keys<K, F>(total: u64, key: F, exec: Exec) -> HashMap<K, u64>
where
    K: Eq + Hash + Send,
    F: Fn(u64) -> Option<K> + Sync + Send,
{
    exec.fold_range(
        total,
        HashMap::new,
        |mut acc, i| {
            if let Some(k) = key(i) {
                *acc.entry(k).or_insert(0) += 1;
            }
            acc
        },
        |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        },
    )
}

/// The most frequent key; ties go to the smallest key.
fn best_key<K: Ord + Clone>(counts: &HashMap<K, u64>) -> Option<(K, u64)> {
    counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(k, &c)| (k.clone(), c))
}

/// Enumerate the ambient space, pick the residues retaining the most words
/// (ties: lexicographically smallest residue tuple) and return that codebook.
///
/// For the multi-row codes the constraints act on each row of `A(u)`
/// independently, so each row is sieved on its own and the codebook is the
/// product of the row classes; this is exactly the best residue tuple over the
/// full q-ary space.
pub fn sieve(req: &SieveRequest, exec: Exec) -> Result<Codebook> {
    match req.family {
        Family::Vt | Family::Tenengolts | Family::Levenshtein | Family::Induced => {
            sieve_classic(req, exec)
        }
        Family::C2b => sieve_c2b(req, exec),
        Family::Ctb => sieve_ctb(req, exec),
        Family::Perm => sieve_perm(req, exec),
    }
}

fn sieve_classic(req: &SieveRequest, exec: Exec) -> Result<Codebook> {
    let (family, q) = match req.family {
        Family::Vt => (ClassicFamily::Vt, 2),
        Family::Levenshtein => (ClassicFamily::Levenshtein, 2),
        Family::Tenengolts => (ClassicFamily::Tenengolts, req.q),
        _ => (ClassicFamily::Induced, req.q),
    };
    if q != req.q {
        return Err(Error::param(format!("the {} family is binary", req.family)));
    }
    // Validate the length/alphabet combination up front.
    ClassicParams {
        family,
        n: req.n,
        q,
        a: 0,
        b: 0,
        c: 0,
    }
    .validate()?;
    let n = req.n;
    let total = req.ambient("ambient space", n, q)?;
    let counts = count_keys(
        total,
        |i| {
            Some(ClassicParams::residues_of(
                family,
                q,
                &word_from_index(i, n, q),
            ))
        },
        exec,
    );
    let ((a, b, c), _) = best_key(&counts).ok_or_else(|| Error::param("empty ambient space"))?;
    let params = ClassicParams {
        family,
        n,
        q,
        a,
        b,
        c,
    };
    params.validate()?;
    let words = exec.filter_map_range(total, |i| {
        let w = word_from_index(i, n, q);
        (ClassicParams::residues_of(family, q, &w) == (a, b, c)).then_some(w)
    });
    let spec = match req.family {
        Family::Vt => CodeSpec::Vt(params),
        Family::Tenengolts => CodeSpec::Tenengolts(params),
        Family::Levenshtein => CodeSpec::Levenshtein(params),
        _ => CodeSpec::Induced(params),
    };
    Ok(Codebook::new(spec, words))
}

/// Words of the product of row classes: row 1 from `first`, every further row
/// from `rest`, in lexicographic order of the row indices.
fn row_product(
    first: &[Vec<u16>],
    rest: &[Vec<u16>],
    rows: usize,
    q: u32,
    req: &SieveRequest,
) -> Result<Vec<Vec<u16>>> {
    let mut size = first.len() as u128;
    for _ in 1..rows {
        size = size.saturating_mul(rest.len() as u128);
    }
    req.check_budget("codebook materialization", size)?;
    let mut out = Vec::with_capacity(size as usize);
    let mut idx = vec![0usize; rows];
    if size == 0 {
        return Ok(out);
    }
    loop {
        let chosen: Vec<Vec<u16>> = idx
            .iter()
            .enumerate()
            .map(|(r, &i)| {
                if r == 0 {
                    first[i].clone()
                } else {
                    rest[i].clone()
                }
            })
            .collect();
        out.push(rows_to_word(&chosen, q)?);
        let mut r = rows;
        loop {
            if r == 0 {
                out.sort();
                return Ok(out);
            }
            r -= 1;
            let limit = if r == 0 { first.len() } else { rest.len() };
            idx[r] += 1;
            if idx[r] < limit {
                break;
            }
            idx[r] = 0;
        }
    }
}

fn check_even_q(q: u32) -> Result<()> {
    crate::seqcore::check_q(q)?;
    if q % 2 != 0 {
        return Err(Error::param(format!(
            "this family needs an even alphabet, got q = {q}"
        )));
    }
    Ok(())
}

fn sieve_c2b(req: &SieveRequest, exec: Exec) -> Result<Codebook> {
    check_even_q(req.q)?;
    let n = req.n;
    PllParams::new(n)?;
    let rows = bits_per_symbol(req.q);
    let total = req.ambient("binary rows", n, 2)?;
    let cap = pll_cap(n);
    let modulus = 2 * n as u64;
    let first_counts = count_keys(
        total,
        |i| {
            let w = word_from_index(i, n, 2);
            is_pll(&w, cap).then(|| vt_syndrome(&psi_raw(&w)) % modulus)
        },
        exec,
    );
    let (a, _) =
        best_key(&first_counts).ok_or_else(|| Error::param("no PLL word of this length"))?;
    let first = exec.filter_map_range(total, |i| {
        let w = word_from_index(i, n, 2);
        (is_pll(&w, cap) && vt_syndrome(&psi_raw(&w)) % modulus == a).then_some(w)
    });
    let rest_counts = count_keys(
        total,
        |i| Some(PBoundedParams::residues_of(cap, &word_from_index(i, n, 2))),
        exec,
    );
    let (cd, _) = best_key(&rest_counts).ok_or_else(|| Error::param("empty ambient space"))?;
    let rest = exec.filter_map_range(total, |i| {
        let w = word_from_index(i, n, 2);
        (PBoundedParams::residues_of(cap, &w) == cd).then_some(w)
    });
    let params = C2BParams::new(n, req.q, a, vec![cd; rows - 1])?;
    let words = row_product(&first, &rest, rows, req.q, req)?;
    Ok(Codebook::new(CodeSpec::C2b(params), words))
}

/// Residues `(c0, c1, sums)` of a row-1 class together with its words.
pub type Row1Class = ((u64, u64, BlockSums), Vec<Vec<u16>>);

/// Row-1 class of the ≤t-burst code: the dense words of length n with the
/// most common `(c0, c1, sums)`; returns the residues and the class.
pub fn ctb_row1_class(
    dp: &DensityParams,
    code: &BlockCode,
    budget: u64,
    exec: Exec,
) -> Result<Row1Class> {
    let dense = enumerate_dense(dp, budget)?;
    let keys: Vec<Option<(u64, u64, BlockSums)>> = exec.map_slice(&dense, |w| {
        let (c0, c1) = loc_residues(w, dp).ok()?;
        Some((c0, c1, code.sums(w).ok()?))
    });
    let mut counts: HashMap<(u64, u64, BlockSums), u64> = HashMap::new();
    for k in keys.iter().flatten() {
        *counts.entry(*k).or_insert(0) += 1;
    }
    let (best, _) =
        best_key(&counts).ok_or_else(|| Error::param("no dense word of this length"))?;
    let class = dense
        .into_iter()
        .zip(keys)
        .filter_map(|(w, k)| (k == Some(best)).then_some(w))
        .collect();
    Ok((best, class))
}

fn sieve_ctb(req: &SieveRequest, exec: Exec) -> Result<Codebook> {
    check_even_q(req.q)?;
    let n = req.n;
    let (delta, p) = req.ctb_delta_p()?;
    let dp = DensityParams::with_delta(n, req.t, delta)?;
    let rows = bits_per_symbol(req.q);
    let total = req.ambient("binary rows", n, 2)?;
    let code = ctb_block_code(p, req.t, exec)?;
    let ((c0, c1, s1), first) = ctb_row1_class(&dp, &code, req.budget, exec)?;
    let rest_counts = count_keys(total, |i| code.sums(&word_from_index(i, n, 2)).ok(), exec);
    let (s2, _) = best_key(&rest_counts).ok_or_else(|| Error::param("empty ambient space"))?;
    let rest = exec.filter_map_range(total, |i| {
        let w = word_from_index(i, n, 2);
        (code.sums(&w).ok() == Some(s2)).then_some(w)
    });
    let mut sums = vec![s1];
    sums.extend(std::iter::repeat(s2).take(rows - 1));
    let params = CtbParams {
        n,
        q: req.q,
        t: req.t,
        delta,
        p,
        c0,
        c1,
        rows: sums,
    };
    params.validate()?;
    let words = row_product(&first, &rest, rows, req.q, req)?;
    Ok(Codebook::new(CodeSpec::Ctb(params), words))
}

fn sieve_perm(req: &SieveRequest, exec: Exec) -> Result<Codebook> {
    let (n, t) = (req.n, req.t);
    if n > MAX_LEX_LEN {
        return Err(Error::param(format!(
            "permutation sieving needs n ≤ {MAX_LEX_LEN}"
        )));
    }
    let total: u64 = (1..=n as u64).product();
    req.check_budget("permutations", total.into())?;
    let (delta, p) = req.perm_delta_p()?;
    let dp = DensityParams::with_delta(n, t, delta)?;
    let code = rank_block_code(p, t, exec)?;
    let key = |i: u64| -> Option<(Vec<u16>, (u64, u64, BlockSums))> {
        let pi = lex_unrank(i + 1, n).ok()?;
        let image = bp_map(&pi);
        if !is_dense(&image, &dp) {
            return None;
        }
        let (c0, c1) = loc_residues(&image, &dp).ok()?;
        let ranks: Vec<u16> = overlap_ranks(&pi, t)
            .ok()?
            .into_iter()
            .map(|r| r - 1)
            .collect();
        Some((pi, (c0, c1, code.sums(&ranks).ok()?)))
    };
    let counts = count_keys(total, |i| key(i).map(|(_, k)| k), exec);
    let (best, _) =
        best_key(&counts).ok_or_else(|| Error::param("no permutation has a dense binary image"))?;
    let words = exec.filter_map_range(total, |i| {
        key(i).and_then(|(pi, k)| (k == best).then_some(pi))
    });
    let params = PermCodeParams {
        n,
        t,
        delta,
        p,
        c0: best.0,
        c1: best.1,
        sums: best.2,
    };
    params.validate()?;
    Ok(Codebook::new(CodeSpec::Perm(params), words))
}

/// Outcome of a confusability check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum Confusability {
    Pass,
    /// Two listed words (possibly the same word listed twice) with a common
    /// descendant under at most t deletions in one burst.
    Witness {
        first: Vec<u16>,
        second: Vec<u16>,
        descendant: Vec<u16>,
    },
}

impl Confusability {
    pub fn passed(&self) -> bool {
        matches!(self, Confusability::Pass)
    }
}

/// Check that the `D_{≤t}` balls of all listed words are pairwise disjoint.
/// A word listed twice is reported with itself as the common descendant.
pub fn confusability_check(words: &[Vec<u16>], t: usize) -> Confusability {
    let mut owner: HashMap<Vec<u16>, usize> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        let mut ball: Vec<Vec<u16>> = vec![w.clone()];
        for len in 1..=t.min(w.len()) {
            ball.extend(burst_descendants(w, len));
        }
        for d in ball {
            match owner.get(&d) {
                Some(&j) if j != i => {
                    return Confusability::Witness {
                        first: words[j].clone(),
                        second: w.clone(),
                        descendant: d,
                    };
                }
                Some(_) => {}
                None => {
                    owner.insert(d, i);
                }
            }
        }
    }
    Confusability::Pass
}

/// [`confusability_check`] over a codebook's words, with the book's own t.
pub fn check_codebook(book: &Codebook) -> Confusability {
    confusability_check(&book.words, book.t)
}

/// A failed decoding in a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub codeword: Vec<u16>,
    pub received: Vec<u16>,
    /// What the decoder returned: the wrong word or the error message.
    pub outcome: String,
}

/// Result of pushing every channel output of every codeword through a decoder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub codewords: usize,
    pub trials: u64,
    /// Failure at the first codeword (in listed order) that had one.
    pub failure: Option<SweepFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Decode every channel output of every codeword and compare.
pub fn roundtrip_sweep(words: &[Vec<u16>], decoder: &Decoder, exec: Exec) -> SweepReport {
    let channel = decoder.spec().channel();
    let trials = words.iter().map(|w| channel.outputs(w).len() as u64).sum();
    let failure = exec.find_first(words, |w| {
        channel
            .outputs(w)
            .into_iter()
            .find_map(|r| match decoder.decode(&r) {
                Ok(x) if x == *w => None,
                Ok(x) => Some(SweepFailure {
                    codeword: w.clone(),
                    received: r,
                    outcome: format!("decoded to {}", crate::seqcore::join_symbols(&x)),
                }),
                Err(e) => Some(SweepFailure {
                    codeword: w.clone(),
                    received: r,
                    outcome: e.to_string(),
                }),
            })
    });
    SweepReport {
        codewords: words.len(),
        trials,
        failure,
    }
}

/// Sweep a codebook with a decoder for its own specification.
pub fn sweep_codebook(book: &Codebook, decoder: &Decoder, exec: Exec) -> Result<SweepReport> {
    if decoder.spec() != &book.spec {
        return Err(Error::param(
            "decoder and codebook have different specifications",
        ));
    }
    Ok(roundtrip_sweep(&book.words, decoder, exec))
}

/// Confusability graph of `words` under one burst of at most t deletions, as
/// adjacency bitsets.
fn confusability_graph(words: &[Vec<u16>], t: usize) -> Vec<Vec<u64>> {
    let nv = words.len();
    let blocks = nv.div_ceil(64);
    let mut adj = vec![vec![0u64; blocks]; nv];
    let mut by_desc: HashMap<Vec<u16>, Vec<usize>> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        let mut ball: Vec<Vec<u16>> = Vec::new();
        for len in 1..=t.min(w.len()) {
            ball.extend(burst_descendants(w, len));
        }
        ball.sort();
        ball.dedup();
        for d in ball {
            by_desc.entry(d).or_default().push(i);
        }
    }
    for owners in by_desc.values() {
        for &a in owners {
            for &b in owners {
                if a != b {
                    adj[a][b / 64] |= 1 << (b % 64);
                }
            }
        }
    }
    adj
}

fn bit_iter(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(bi, &word)| {
        let mut w = word;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                bi * 64 + tz
            })
        })
    })
}

struct MisSearch<'a> {
    adj: &'a [Vec<u64>],
    current: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    node_limit: u64,
}

impl MisSearch<'_> {
    /// Order the candidates by a greedy clique cover (every class is a clique
    /// of the confusability graph, so an independent set takes at most one
    /// vertex per class) and return `(vertex, number of classes so far)`.
    fn cover(&self, cand: &[u64]) -> Vec<(usize, usize)> {
        let mut left = cand.to_vec();
        let mut order = Vec::new();
        let mut class = 0;
        while left.iter().any(|&w| w != 0) {
            class += 1;
            let mut q = left.clone();
            loop {
                let Some(v) = bit_iter(&q).next() else { break };
                order.push((v, class));
                left[v / 64] &= !(1 << (v % 64));
                q[v / 64] &= !(1 << (v % 64));
                for (qb, ab) in q.iter_mut().zip(&self.adj[v]) {
                    *qb &= ab;
                }
            }
        }
        order
    }

    /// Returns `false` once the node budget is spent.
    fn expand(&mut self, mut cand: Vec<u64>) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return false;
        }
        let order = self.cover(&cand);
        for &(v, bound) in order.iter().rev() {
            if self.current.len() + bound <= self.best.len() {
                return true;
            }
            cand[v / 64] &= !(1 << (v % 64));
            let next: Vec<u64> = cand.iter().zip(&self.adj[v]).map(|(c, a)| c & !a).collect();
            self.current.push(v);
            if next.iter().all(|&w| w == 0) {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else if !self.expand(next) {
                return false;
            }
            self.current.pop();
        }
        true
    }
}

/// A maximum independent set of the graph given by adjacency bitsets
/// (branch and bound with greedy clique-cover bounds). With `forced`, the
/// search is restricted to sets containing that vertex, which loses nothing
/// when the graph is vertex-transitive. Fails when the search needs more than
/// `node_limit` nodes.
fn max_independent_set(
    adj: &[Vec<u64>],
    forced: Option<usize>,
    node_limit: u64,
) -> Result<Vec<usize>> {
    let nv = adj.len();
    let mut all = vec![0u64; nv.div_ceil(64)];
    for v in 0..nv {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut search = MisSearch {
        adj,
        current: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        node_limit,
    };
    if let Some(v) = forced.filter(|&v| v < nv) {
        all[v / 64] &= !(1 << (v % 64));
        for (c, a) in all.iter_mut().zip(&adj[v]) {
            *c &= !a;
        }
        search.current.push(v);
        search.best.push(v);
    }
    if all.iter().any(|&w| w != 0) && !search.expand(all) {
        return Err(Error::BudgetExceeded {
            what: format!(
                "exact search on {nv} vertices (best found {})",
                search.best.len()
            ),
            required: u128::from(node_limit) + 1,
            budget: node_limit.into(),
        });
    }
    let mut best = search.best;
    best.sort_unstable();
    Ok(best)
}

fn check_exact_size(what: &str, vertices: usize) -> Result<()> {
    if vertices as u64 > MAX_EXACT_VERTICES {
        return Err(Error::BudgetExceeded {
            what: what.into(),
            required: vertices as u128,
            budget: MAX_EXACT_VERTICES.into(),
        });
    }
    Ok(())
}

/// A largest set of `words` with pairwise disjoint `D_{≤t}` balls.
pub fn max_code_among(words: &[Vec<u16>], t: usize, budget: u64) -> Result<Vec<Vec<u16>>> {
    check_exact_size("exact maximum code", words.len())?;
    let adj = confusability_graph(words, t);
    let found = max_independent_set(&adj, None, budget.min(MAX_SEARCH_NODES))?;
    Ok(found.into_iter().map(|i| words[i].clone()).collect())
}

/// A maximum t-burst-correcting code in `Σ_q^n` (exact search), as a witness.
pub fn max_code_witness(n: usize, q: u32, t: usize, budget: u64) -> Result<Vec<Vec<u16>>> {
    crate::seqcore::check_q(q)?;
    let size = u128::from(q).checked_pow(n as u32).unwrap_or(u128::MAX);
    let limit = budget.min(MAX_EXACT_VERTICES);
    if size > u128::from(limit) {
        return Err(Error::BudgetExceeded {
            what: "exact maximum code".into(),
            required: size,
            budget: limit.into(),
        });
    }
    let words: Vec<Vec<u16>> = (0..size as u64).map(|i| word_from_index(i, n, q)).collect();
    max_code_among(&words, t, budget)
}

/// Size of a maximum t-burst-correcting code in `Σ_q^n`.
pub fn max_code_exact(n: usize, q: u32, t: usize, budget: u64) -> Result<usize> {
    max_code_witness(n, q, t, budget).map(|c| c.len())
}

/// A maximum t-burst-correcting permutation code in `S_n`, as a witness.
pub fn max_perm_code_witness(n: usize, t: usize, budget: u64) -> Result<Vec<Vec<u16>>> {
    if n > MAX_LEX_LEN {
        return Err(Error::param(format!(
            "permutation length must be ≤ {MAX_LEX_LEN}"
        )));
    }
    let size: u64 = (1..=n as u64).product();
    let limit = budget.min(MAX_EXACT_VERTICES);
    if size > limit {
        return Err(Error::BudgetExceeded {
            what: "exact maximum permutation code".into(),
            required: size.into(),
            budget: limit.into(),
        });
    }
    let words = (1..=size)
        .map(|r| lex_unrank(r, n))
        .collect::<Result<Vec<_>>>()?;
    check_exact_size("exact maximum permutation code", words.len())?;
    // Relabelling symbols (π ↦ σ∘π) commutes with burst deletion, so the
    // confusability graph is vertex-transitive and some maximum code contains
    // the identity (index 0).
    let adj = confusability_graph(&words, t);
    let found = max_independent_set(&adj, Some(0), budget.min(MAX_SEARCH_NODES))?;
    Ok(found.into_iter().map(|i| words[i].clone()).collect())
}

/// Size of a maximum t-burst-correcting permutation code in `S_n`.
pub fn max_perm_code_exact(n: usize, t: usize, budget: u64) -> Result<usize> {
    max_perm_code_witness(n, t, budget).map(|c| c.len())
}

/// `counts[i]` = number of words of `Σ_q^n` with `|D_t(u)| = i` (bursts of
/// exactly t), by exhaustive enumeration.
pub fn classify_ball_sizes(
    n: usize,
    t: usize,
    q: u32,
    budget: u64,
    exec: Exec,
) -> Result<Vec<u64>> {
    crate::seqcore::check_q(q)?;
    if t == 0 || t > n {
        return Err(Error::param(format!(
            "burst length {t} must lie in [1, {n}]"
        )));
    }
    let size = u128::from(q).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > u128::from(budget) {
        return Err(Error::BudgetExceeded {
            what: "ball classification".into(),
            required: size,
            budget: budget.into(),
        });
    }
    let max = n - t + 1;
    Ok(exec.fold_range(
        size as u64,
        || vec![0u64; max + 1],
        |mut acc, i| {
            let mut ball: Vec<Vec<u16>> = burst_descendants(&word_from_index(i, n, q), t).collect();
            ball.sort();
            ball.dedup();
            acc[ball.len()] += 1;
            acc
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    ))
}

/// Error unless every listed word is a permutation of `1..=n` (for
/// permutation codebooks read from disk).
pub fn check_permutations(words: &[Vec<u16>]) -> Result<()> {
    words.iter().try_for_each(|w| check_permutation(w))
}
