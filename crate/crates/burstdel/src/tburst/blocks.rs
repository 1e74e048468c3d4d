//! Window-aided correction with block syndromes.
//!
//! A word is cut two ways: into "even" blocks of length 2P and into "odd"
//! blocks shifted by P (length P at both ends). Any window of at most P
//! positions lies inside a block of one of the two families. For each family
//! the labels of its blocks are summed modulo a fixed modulus (split into a
//! high and a low part), so once the damaged block is known, its label follows
//! from the stored sums and the labels of the intact blocks; the oracle
//! guarantees that only one candidate block carries that label.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::{check_alphabet, insert_at, Interval};

use super::oracle::SyndromeOracle;

/// Which of the two block families a block belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockFamily {
    Even,
    Odd,
}

/// The two block covers of `[1, N]`, where `N` is `n` rounded up to a
/// multiple of `2P` (the padding is zeros and is never transmitted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSplit {
    pub n: usize,
    pub p: usize,
    pub padded_len: usize,
    pub even: Vec<Interval>,
    pub odd: Vec<Interval>,
}

impl BlockSplit {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if p == 0 || n == 0 {
            return Err(Error::param("block split needs n ≥ 1 and P ≥ 1"));
        }
        let s = n.div_ceil(2 * p);
        let padded_len = 2 * p * s;
        let even = (1..=s)
            .map(|i| Interval {
                lo: (2 * i - 2) * p + 1,
                hi: 2 * i * p,
            })
            .collect();
        let mut odd = vec![Interval { lo: 1, hi: p }];
        odd.extend((2..=s).map(|i| Interval {
            lo: (2 * i - 3) * p + 1,
            hi: (2 * i - 1) * p,
        }));
        odd.push(Interval {
            lo: padded_len - p + 1,
            hi: padded_len,
        });
        Ok(BlockSplit {
            n,
            p,
            padded_len,
            even,
            odd,
        })
    }

    /// Number of even blocks, `s = N / 2P`.
    pub fn s(&self) -> usize {
        self.even.len()
    }

    pub fn family(&self, f: BlockFamily) -> &[Interval] {
        match f {
            BlockFamily::Even => &self.even,
            BlockFamily::Odd => &self.odd,
        }
    }

    /// A block containing `window`, preferring the even family.
    pub fn containing(&self, window: Interval) -> Option<(BlockFamily, usize)> {
        [BlockFamily::Even, BlockFamily::Odd]
            .into_iter()
            .find_map(|f| {
                self.family(f)
                    .iter()
                    .position(|b| b.lo <= window.lo && window.hi <= b.hi)
                    .map(|i| (f, i))
            })
    }
}

/// The four stored sums: `(d₁, e₁)` over the even blocks and `(d₂, e₂)` over
/// the odd blocks, each pair holding the high and low parts of the summed
/// labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockSums {
    pub d1: u64,
    pub e1: u64,
    pub d2: u64,
    pub e2: u64,
}

/// Block length `P`, alphabet and the two oracles (block lengths `2P` and `P`).
#[derive(Debug, Clone)]
pub struct BlockCode {
    p: usize,
    q: u32,
    full: SyndromeOracle,
    half: SyndromeOracle,
    hi_mod: u64,
    lo_mod: u64,
}

impl BlockCode {
    pub fn new(p: usize, q: u32, full: SyndromeOracle, half: SyndromeOracle) -> Result<Self> {
        if full.k() != 2 * p || half.k() != p {
            return Err(Error::param(format!(
                "block oracles must have lengths 2P = {} and P = {p}, got {} and {}",
                2 * p,
                full.k(),
                half.k()
            )));
        }
        let space = full
            .space(q)
            .zip(half.space(q))
            .map(|(a, b)| a.max(b))
            .filter(|&s| s <= 1 << 62)
            .ok_or_else(|| Error::param("block label space does not fit in 62 bits"))?;
        let lo_mod = (space as f64).sqrt().ceil() as u64;
        let lo_mod = lo_mod.max(1);
        let hi_mod = space.div_ceil(lo_mod).max(1);
        Ok(BlockCode {
            p,
            q,
            full,
            half,
            hi_mod,
            lo_mod,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn full_oracle(&self) -> &SyndromeOracle {
        &self.full
    }

    pub fn half_oracle(&self) -> &SyndromeOracle {
        &self.half
    }

    /// Moduli of the high (`d`) and low (`e`) sums.
    pub fn moduli(&self) -> (u64, u64) {
        (self.hi_mod, self.lo_mod)
    }

    /// Number of residue tuples `(d₁, e₁, d₂, e₂)`.
    pub fn class_count(&self) -> u128 {
        (u128::from(self.hi_mod) * u128::from(self.lo_mod)).pow(2)
    }

    pub fn split(&self, n: usize) -> Result<BlockSplit> {
        BlockSplit::new(n, self.p)
    }

    fn label(&self, block: &[u16]) -> Result<u64> {
        if block.len() == 2 * self.p {
            self.full.label_qary(block, self.q)
        } else {
            self.half.label_qary(block, self.q)
        }
    }

    fn family_sums(&self, padded: &[u16], blocks: &[Interval]) -> Result<(u64, u64)> {
        let (mut d, mut e) = (0u64, 0u64);
        for b in blocks {
            let l = self.label(&padded[b.lo - 1..b.hi])?;
            d = (d + l / self.lo_mod) % self.hi_mod;
            e = (e + l % self.lo_mod) % self.lo_mod;
        }
        Ok((d, e))
    }

    /// The stored sums of `x`.
    pub fn sums(&self, x: &[u16]) -> Result<BlockSums> {
        check_alphabet(x, self.q)?;
        let split = self.split(x.len())?;
        let mut padded = x.to_vec();
        padded.resize(split.padded_len, 0);
        let (d1, e1) = self.family_sums(&padded, &split.even)?;
        let (d2, e2) = self.family_sums(&padded, &split.odd)?;
        Ok(BlockSums { d1, e1, d2, e2 })
    }

    /// Recover the length-`n` word from `received` (shorter by `n − |received|`)
    /// given a window of at most P positions that contains the whole error.
    ///
    /// `candidates(damaged, deleted, local_window)` lists every block that
    /// could have produced the damaged received block, with the error inside
    /// the window (1-based block coordinates). The decoder keeps the
    /// candidates carrying the label implied by the stored sums and requires
    /// them to agree.
    pub fn decode_with<F>(
        &self,
        received: &[u16],
        n: usize,
        window: Interval,
        sums: &BlockSums,
        candidates: F,
    ) -> Result<Vec<u16>>
    where
        F: Fn(&[u16], usize, Interval) -> Vec<Vec<u16>>,
    {
        check_alphabet(received, self.q)?;
        if received.len() > n {
            return Err(Error::length(format!("at most n = {n}"), received.len()));
        }
        if window.lo == 0 || window.hi > n || window.lo > window.hi {
            return Err(Error::param(format!(
                "window {window} lies outside [1, {n}]"
            )));
        }
        if window.len() > self.p {
            return Err(Error::param(format!(
                "window {window} is longer than P = {}",
                self.p
            )));
        }
        let deleted = n - received.len();
        let split = self.split(n)?;
        let (family, idx) = split
            .containing(window)
            .ok_or_else(|| Error::param(format!("window {window} lies in no block")))?;
        let blocks = split.family(family);
        let target = blocks[idx];
        let mut padded = received.to_vec();
        padded.resize(split.padded_len - deleted, 0);

        // Labels of the intact blocks; blocks after the damaged one are
        // shifted left by the number of deleted symbols.
        let (mut d, mut e) = (0u64, 0u64);
        for (j, b) in blocks.iter().enumerate() {
            if j == idx {
                continue;
            }
            let shift = if j > idx { deleted } else { 0 };
            let l = self.label(&padded[b.lo - 1 - shift..b.hi - shift])?;
            d = (d + l / self.lo_mod) % self.hi_mod;
            e = (e + l % self.lo_mod) % self.lo_mod;
        }
        let (sd, se) = match family {
            BlockFamily::Even => (sums.d1, sums.e1),
            BlockFamily::Odd => (sums.d2, sums.e2),
        };
        let hi = (sd % self.hi_mod + self.hi_mod - d) % self.hi_mod;
        let lo = (se % self.lo_mod + self.lo_mod - e) % self.lo_mod;
        let want = hi * self.lo_mod + lo;

        let damaged = &padded[target.lo - 1..target.hi - deleted];
        let local = Interval {
            lo: window.lo - target.lo + 1,
            hi: window.hi - target.lo + 1,
        };
        let found: BTreeSet<Vec<u16>> = if deleted == 0 {
            std::iter::once(damaged.to_vec()).collect()
        } else {
            candidates(damaged, deleted, local)
                .into_iter()
                .filter(|c| c.len() == target.len() && self.label(c).ok() == Some(want))
                .collect()
        };
        let block = match found.len() {
            1 => found.into_iter().next().unwrap_or_default(),
            0 => {
                return Err(Error::undecodable(
                    "no block candidate carries the label implied by the sums",
                ))
            }
            k => {
                return Err(Error::undecodable(format!(
                    "{k} block candidates carry the implied label"
                )))
            }
        };
        let mut out = padded[..target.lo - 1].to_vec();
        out.extend_from_slice(&block);
        out.extend_from_slice(&padded[target.hi - deleted..]);
        if out[n..].iter().any(|&s| s != 0) {
            return Err(Error::undecodable("repaired word spills into the padding"));
        }
        out.truncate(n);
        if self.sums(&out)? != *sums {
            return Err(Error::undecodable(
                "repaired word does not satisfy the stored sums",
            ));
        }
        Ok(out)
    }
}

/// Stored sums of `x` under `code` (alias of [`BlockCode::sums`]).
pub fn block_syndromes(x: &[u16], code: &BlockCode) -> Result<BlockSums> {
    code.sums(x)
}

/// Correct a burst of deletions known to lie inside `window` (at most P
/// positions, 1-based coordinates of the original word of length `n`).
pub fn cpb_decode(
    received: &[u16],
    n: usize,
    window: Interval,
    sums: &BlockSums,
    code: &BlockCode,
) -> Result<Vec<u16>> {
    let q = code.q();
    code.decode_with(received, n, window, sums, |damaged, deleted, local| {
        let mut out = Vec::new();
        if local.len() < deleted {
            return out;
        }
        let fills = u64::from(q).pow(deleted as u32);
        for start in local.lo..=local.hi + 1 - deleted {
            for f in 0..fills {
                let fill = crate::seqcore::word_from_index(f, deleted, q);
                out.push(insert_at(damaged, start - 1, &fill));
            }
        }
        out
    })
}
