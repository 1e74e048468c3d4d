//! Localizing a burst of at most t deletions in a dense word from the marker
//! count (mod 4) and the VT syndrome of the gap vector (mod 2n).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::{check_binary, Interval};

use super::dense::{alpha_raw, is_dense, DensityParams};

/// Residues of the localization code: `(n_w mod 4, VT(α_w) mod 2n)`.
pub fn loc_residues(x: &[u16], dp: &DensityParams) -> Result<(u64, u64)> {
    check_binary(x)?;
    if x.len() != dp.n || dp.n < 2 * dp.t {
        return Err(Error::length(
            format!("n = {} (at least 2t)", dp.n),
            x.len(),
        ));
    }
    let alpha = alpha_raw(x, dp.t);
    Ok((
        alpha.pattern_count() as u64 % 4,
        alpha.vt() % (2 * dp.n as u64),
    ))
}

/// Parameters of the localization code `C_loc(c0, c1, n)`: dense words whose
/// marker count is `c0` mod 4 and whose gap vector has VT syndrome `c1` mod 2n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocParams {
    pub density: DensityParams,
    pub c0: u64,
    pub c1: u64,
}

impl LocParams {
    pub fn new(density: DensityParams, c0: u64, c1: u64) -> Result<Self> {
        if c0 >= 4 || c1 >= 2 * density.n as u64 {
            return Err(Error::param(format!(
                "localization residues must satisfy c0 < 4 and c1 < 2n = {}, got ({c0}, {c1})",
                2 * density.n
            )));
        }
        Ok(LocParams { density, c0, c1 })
    }

    pub fn member(&self, x: &[u16]) -> bool {
        x.len() == self.density.n
            && is_dense(x, &self.density)
            && loc_residues(x, &self.density).ok() == Some((self.c0, self.c1))
    }

    /// See [`locate_burst`].
    pub fn locate(&self, received: &[u16]) -> Result<Option<Interval>> {
        locate_burst(received, self.c0, self.c1, &self.density)
    }
}

/// Smallest interval containing every burst that could have turned some word
/// of `C_loc(c0, c1, n)` into `received`. `None` when nothing was deleted.
///
/// Every re-insertion of `n − |received|` bits is tried; the ones giving a
/// dense word with the stored residues are the consistent explanations, and
/// the returned interval is the hull of their deleted positions. A received
/// word with no consistent explanation is reported as not decodable.
pub fn locate_burst(
    received: &[u16],
    c0: u64,
    c1: u64,
    dp: &DensityParams,
) -> Result<Option<Interval>> {
    check_binary(received)?;
    let n = dp.n;
    if received.len() > n || received.len() + dp.t < n {
        return Err(Error::length(
            format!("between n − t = {} and n = {n}", n.saturating_sub(dp.t)),
            received.len(),
        ));
    }
    let del = n - received.len();
    if del == 0 {
        return Ok(None);
    }
    let modulus = 2 * n as u64;
    let mut hull: Option<Interval> = None;
    let mut cand = vec![0u16; n];
    for at in 0..=received.len() {
        cand[..at].copy_from_slice(&received[..at]);
        cand[at + del..].copy_from_slice(&received[at..]);
        for fill in 0..1u32 << del {
            for k in 0..del {
                cand[at + k] = ((fill >> (del - 1 - k)) & 1) as u16;
            }
            let alpha = alpha_raw(&cand, dp.t);
            if alpha.pattern_count() as u64 % 4 != c0
                || alpha.vt() % modulus != c1
                || alpha.max_gap() > dp.delta
            {
                continue;
            }
            let span = Interval {
                lo: at + 1,
                hi: at + del,
            };
            hull = Some(hull.map_or(span, |h| h.hull(span)));
        }
    }
    hull.map(Some).ok_or_else(|| {
        Error::undecodable("no dense re-insertion matches the localization residues")
    })
}
