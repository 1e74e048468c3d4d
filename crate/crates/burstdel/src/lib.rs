//! Burst-deletion-correcting codes for binary, q-ary and permutation
//! alphabets, together with counting formulas, size bounds and the exhaustive
//! verification machinery used to check them at desk scale.

pub mod bounds;
pub mod classic;
pub mod error;
pub mod exec;
pub mod perm;
pub mod pll2burst;
pub mod seqcore;
pub mod tburst;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use seqcore::{Burst, Interval, Sequence};
