//! The q-ary code for one burst of at most t deletions: row 1 of `A(u)` is a
//! dense localization codeword, and every row satisfies the block sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::seqcore::{bits_per_symbol, check_alphabet, matrix_rows, rows_to_word};

use super::blocks::{cpb_decode, BlockCode, BlockSums};
use super::dense::{is_dense, DensityParams};
use super::locate::{loc_residues, locate_burst};
use super::oracle::{ErrorModel, SyndromeOracle};

/// Parameters of the q-ary ≤t-burst code: length, alphabet, density bound,
/// block length P, localization residues and one set of block sums per row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtbParams {
    pub n: usize,
    pub q: u32,
    pub t: usize,
    pub delta: usize,
    pub p: usize,
    pub c0: u64,
    pub c1: u64,
    pub rows: Vec<BlockSums>,
}

impl CtbParams {
    pub fn density(&self) -> Result<DensityParams> {
        DensityParams::with_delta(self.n, self.t, self.delta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 || self.q % 2 != 0 {
            return Err(Error::param(format!(
                "the ≤t-burst code needs an even alphabet, got q = {}",
                self.q
            )));
        }
        if self.rows.len() != bits_per_symbol(self.q) {
            return Err(Error::length(
                format!("{} rows of block sums", bits_per_symbol(self.q)),
                self.rows.len(),
            ));
        }
        // Localization returns the hull of every consistent deleted range,
        // which can reach δ + t − 1 positions.
        if self.delta + self.t - 1 > self.p {
            return Err(Error::param(format!(
                "localization windows (δ + t − 1 = {}) must fit in a block half (P = {})",
                self.delta + self.t - 1,
                self.p
            )));
        }
        if self.c0 >= 4 || self.c1 >= 2 * self.n as u64 {
            return Err(Error::param("localization residues out of range"));
        }
        self.density().map(|_| ())
    }

    /// The binary block code for rows of this code: oracles for bursts of at
    /// most t deletions on blocks of length 2P and P.
    pub fn block_code(&self, exec: Exec) -> Result<BlockCode> {
        ctb_block_code(self.p, self.t, exec)
    }

    /// Residues of `u`: `(c0, c1)` of row 1 and the block sums of every row.
    pub fn residues_of(
        u: &[u16],
        q: u32,
        dp: &DensityParams,
        code: &BlockCode,
    ) -> Result<(u64, u64, Vec<BlockSums>)> {
        check_alphabet(u, q)?;
        let rows = matrix_rows(u, q);
        let (c0, c1) = loc_residues(&rows[0], dp)?;
        let sums = rows
            .iter()
            .map(|r| code.sums(r))
            .collect::<Result<Vec<_>>>()?;
        Ok((c0, c1, sums))
    }

    pub fn member(&self, u: &[u16], code: &BlockCode) -> bool {
        let Ok(dp) = self.density() else { return false };
        if u.len() != self.n || check_alphabet(u, self.q).is_err() {
            return false;
        }
        let rows = matrix_rows(u, self.q);
        is_dense(&rows[0], &dp)
            && Self::residues_of(u, self.q, &dp, code).ok()
                == Some((self.c0, self.c1, self.rows.clone()))
    }
}

/// Binary block code with block length `p` for bursts of at most `t` deletions.
pub fn ctb_block_code(p: usize, t: usize, exec: Exec) -> Result<BlockCode> {
    let model = ErrorModel::Burst { t };
    BlockCode::new(
        p,
        2,
        SyndromeOracle::build(2 * p, model, exec)?,
        SyndromeOracle::build(p, model, exec)?,
    )
}

/// Decode a word of the ≤t-burst code after one burst of at most t deletions:
/// localize the burst on row 1, then repair every row with the block code
/// using that window.
pub fn ctb_decode(received: &[u16], params: &CtbParams, code: &BlockCode) -> Result<Vec<u16>> {
    params.validate()?;
    check_alphabet(received, params.q)?;
    if code.p() != params.p || code.q() != 2 {
        return Err(Error::param(
            "block code does not match the code parameters (binary rows, same P)",
        ));
    }
    let n = params.n;
    if received.len() > n || received.len() + params.t < n {
        return Err(Error::length(
            format!("between n − t = {} and n = {n}", n.saturating_sub(params.t)),
            received.len(),
        ));
    }
    let dp = params.density()?;
    let rows = matrix_rows(received, params.q);
    let Some(window) = locate_burst(&rows[0], params.c0, params.c1, &dp)? else {
        return Ok(received.to_vec());
    };
    if window.len() > params.p {
        return Err(Error::undecodable(format!(
            "localization window {window} is longer than P = {}",
            params.p
        )));
    }
    let repaired = rows
        .iter()
        .zip(&params.rows)
        .map(|(row, sums)| cpb_decode(row, n, window, sums, code))
        .collect::<Result<Vec<_>>>()?;
    rows_to_word(&repaired, params.q)
}
