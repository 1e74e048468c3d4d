//! Bursts of at most t deletions over even alphabets.
//!
//! The least significant row of `A(u)` is a `(0^t1^t, δ)`-dense word from a
//! localization code, which pins the burst to a window of at most δ columns.
//! Every row is then repaired by a block code that only has to correct a burst
//! known to lie inside that window.

mod blocks;
mod ctb;
mod dense;
mod locate;
mod oracle;

pub use blocks::{block_syndromes, cpb_decode, BlockCode, BlockFamily, BlockSplit, BlockSums};
pub use ctb::{ctb_block_code, ctb_decode, CtbParams};
pub use dense::{
    chunk_value, compress_g, decompress_g, dense_decode, dense_encode, enumerate_dense,
    indicator_alpha, is_dense, AlphaVector, DensityParams, MAX_DENSE_T,
};
pub use locate::{loc_residues, locate_burst, LocParams};
pub use oracle::{oracle_build_brute, ErrorModel, SyndromeOracle, MAX_ORACLE_K};
