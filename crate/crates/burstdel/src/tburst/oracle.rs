//! Brute-force block labels: a greedy colouring of the confusability graph of
//! all binary words of length k, so that any two words that can produce the
//! same received word under the error model carry different labels.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::seqcore::{bits_per_symbol, check_alphabet, check_binary, matrix_rows};

/// Largest block length for which labels are tabulated exhaustively.
pub const MAX_ORACLE_K: usize = 20;

const MAGIC: &[u8; 8] = b"BDSYNORC";
const FORMAT_VERSION: u16 = 1;

/// Which pairs of blocks must be told apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorModel {
    /// One burst of at most `t` consecutive deletions.
    Burst { t: usize },
    /// One substring of length at most `max_len` replaced by a strictly
    /// shorter one (possibly empty): the shape a deletion burst takes in an
    /// overlapping ranking sequence.
    SubstringEdit { max_len: usize },
}

impl ErrorModel {
    fn tag(&self) -> (u8, usize) {
        match *self {
            ErrorModel::Burst { t } => (0, t),
            ErrorModel::SubstringEdit { max_len } => (1, max_len),
        }
    }

    fn from_tag(tag: u8, param: usize) -> Result<Self> {
        match tag {
            0 => Ok(ErrorModel::Burst { t: param }),
            1 => Ok(ErrorModel::SubstringEdit { max_len: param }),
            _ => Err(Error::Malformed(format!("unknown error-model tag {tag}"))),
        }
    }

    fn check(&self) -> Result<()> {
        let (_, p) = self.tag();
        if p == 0 || p > u8::MAX as usize {
            return Err(Error::param(format!(
                "error-model parameter must lie in [1, 255], got {p}"
            )));
        }
        Ok(())
    }

    /// Descendants of the k-bit word `u` (first bit most significant), each
    /// encoded as a dense key `2^len − 1 + value` so that all words shorter
    /// than k get distinct keys below `2^k`.
    fn descendant_keys(&self, u: u32, k: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let key = |len: usize, v: u32| ((1u32 << len) - 1) + v;
        let mask = |w: usize| if w == 0 { 0 } else { (1u32 << w) - 1 };
        match *self {
            ErrorModel::Burst { t } => {
                for len in 1..=t.min(k) {
                    for s in 0..=k - len {
                        let rest = k - s - len;
                        let hi = if s == 0 { 0 } else { u >> (k - s) };
                        let v = (hi << rest) | (u & mask(rest));
                        out.push(key(k - len, v));
                    }
                }
            }
            ErrorModel::SubstringEdit { max_len } => {
                for l1 in 1..=max_len.min(k) {
                    for s in 0..=k - l1 {
                        let rest = k - s - l1;
                        let hi = if s == 0 { 0 } else { u >> (k - s) };
                        let lo = u & mask(rest);
                        for l2 in 0..l1 {
                            for z in 0..1u32 << l2 {
                                let v = (((hi << l2) | z) << rest) | lo;
                                out.push(key(k - l1 + l2, v));
                            }
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Label table for all binary words of length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeOracle {
    k: usize,
    model: ErrorModel,
    labels: Vec<u32>,
    label_count: u32,
}

/// Build the label table by greedy colouring in lexicographic vertex order
/// and check the labelling on every shared descendant before returning it.
pub fn oracle_build_brute(k: usize, model: ErrorModel) -> Result<SyndromeOracle> {
    SyndromeOracle::build(k, model, Exec::default())
}

impl SyndromeOracle {
    /// See [`oracle_build_brute`].
    pub fn build(k: usize, model: ErrorModel, exec: Exec) -> Result<Self> {
        model.check()?;
        if k == 0 || k > MAX_ORACLE_K {
            return Err(Error::param(format!(
                "oracle block length must lie in [1, {MAX_ORACLE_K}], got {k}"
            )));
        }
        let size = 1u64 << k;
        let desc: Vec<Vec<u32>> = exec.map_range(size, |u| model.descendant_keys(u as u32, k));
        // Parents of every descendant, in increasing vertex order (CSR).
        let mut start = vec![0u32; size as usize + 1];
        for d in &desc {
            for &key in d {
                start[key as usize + 1] += 1;
            }
        }
        for i in 0..size as usize {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut parents = vec![0u32; start[size as usize] as usize];
        for (u, d) in desc.iter().enumerate() {
            for &key in d {
                parents[fill[key as usize] as usize] = u as u32;
                fill[key as usize] += 1;
            }
        }
        let parents_of =
            |key: u32| &parents[start[key as usize] as usize..start[key as usize + 1] as usize];

        let mut labels = vec![0u32; size as usize];
        let mut stamp = vec![u32::MAX; 1];
        let mut label_count = 0u32;
        for (u, d) in desc.iter().enumerate() {
            for &key in d {
                for &p in parents_of(key) {
                    if (p as usize) >= u {
                        break;
                    }
                    stamp[labels[p as usize] as usize] = u as u32;
                }
            }
            let c = (0..)
                .find(|&c| stamp.get(c as usize).map_or(true, |&s| s != u as u32))
                .unwrap_or(0);
            if c as usize >= stamp.len() {
                stamp.resize(c as usize + 1, u32::MAX);
            }
            labels[u] = c;
            label_count = label_count.max(c + 1);
        }
        let oracle = SyndromeOracle {
            k,
            model,
            labels,
            label_count,
        };
        // Invariant: parents of any descendant carry pairwise distinct labels.
        let mut seen: Vec<u32> = Vec::new();
        for key in 0..size as u32 {
            seen.clear();
            seen.extend(parents_of(key).iter().map(|&p| oracle.labels[p as usize]));
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Malformed(
                    "greedy labelling left a confusable pair unseparated".into(),
                ));
            }
        }
        Ok(oracle)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn model(&self) -> ErrorModel {
        self.model
    }

    /// Number of distinct labels.
    pub fn label_count(&self) -> u32 {
        self.label_count
    }

    /// Label of the word with index `index` (first bit most significant).
    pub fn label_of_index(&self, index: u32) -> u32 {
        self.labels[index as usize]
    }

    /// Label of a binary block of length k.
    pub fn label(&self, block: &[u16]) -> Result<u32> {
        check_binary(block)?;
        if block.len() != self.k {
            return Err(Error::length(
                format!("oracle block length {}", self.k),
                block.len(),
            ));
        }
        Ok(self.labels[bits_index(block) as usize])
    }

    /// Label of a q-ary block: the row labels of `A(block)` combined as digits
    /// in base [`label_count`](Self::label_count), least significant row first.
    pub fn label_qary(&self, block: &[u16], q: u32) -> Result<u64> {
        check_alphabet(block, q)?;
        if block.len() != self.k {
            return Err(Error::length(
                format!("oracle block length {}", self.k),
                block.len(),
            ));
        }
        let base = u64::from(self.label_count);
        let mut label = 0u64;
        for row in matrix_rows(block, q).iter().rev() {
            label = label * base + u64::from(self.labels[bits_index(row) as usize]);
        }
        Ok(label)
    }

    /// Number of distinct q-ary labels, `label_count^{⌈log q⌉}`, if it fits.
    pub fn space(&self, q: u32) -> Option<u64> {
        u64::from(self.label_count).checked_pow(bits_per_symbol(q) as u32)
    }

    /// Serialize as `magic · version · k · model tag · model parameter ·
    /// label width · label count · table` (little endian).
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let width = label_width(self.label_count);
        let (tag, param) = self.model.tag();
        let mut header = Vec::with_capacity(20);
        header.extend_from_slice(MAGIC);
        header.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        header.extend_from_slice(&[self.k as u8, tag, param as u8, width]);
        header.extend_from_slice(&self.label_count.to_le_bytes());
        w.write_all(&header).map_err(io_err)?;
        let mut body = Vec::with_capacity(self.labels.len() * usize::from(width));
        for &l in &self.labels {
            body.extend_from_slice(&l.to_le_bytes()[..usize::from(width)]);
        }
        w.write_all(&body).map_err(io_err)
    }

    /// Inverse of [`write_to`](Self::write_to); rejects unknown versions,
    /// truncated tables and labels outside the declared range.
    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; 18];
        r.read_exact(&mut header).map_err(io_err)?;
        if &header[..8] != MAGIC {
            return Err(Error::Malformed("not a syndrome-oracle table".into()));
        }
        let version = u16::from_le_bytes([header[8], header[9]]);
        if version != FORMAT_VERSION {
            return Err(Error::Malformed(format!(
                "unsupported oracle table version {version}"
            )));
        }
        let (k, tag, param, width) = (
            usize::from(header[10]),
            header[11],
            usize::from(header[12]),
            header[13],
        );
        let label_count = u32::from_le_bytes([header[14], header[15], header[16], header[17]]);
        let model = ErrorModel::from_tag(tag, param)?;
        model.check()?;
        if k == 0
            || k > MAX_ORACLE_K
            || !matches!(width, 1 | 2 | 4)
            || width != label_width(label_count)
        {
            return Err(Error::Malformed("inconsistent oracle table header".into()));
        }
        let width = usize::from(width);
        let mut body = vec![0u8; (1usize << k) * width];
        r.read_exact(&mut body).map_err(io_err)?;
        let labels: Vec<u32> = body
            .chunks(width)
            .map(|c| {
                let mut b = [0u8; 4];
                b[..width].copy_from_slice(c);
                u32::from_le_bytes(b)
            })
            .collect();
        if labels.iter().any(|&l| l >= label_count) {
            return Err(Error::Malformed(
                "oracle label outside the declared range".into(),
            ));
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra).map_err(io_err)? != 0 {
            return Err(Error::Malformed("trailing bytes after oracle table".into()));
        }
        Ok(SyndromeOracle {
            k,
            model,
            labels,
            label_count,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(io_err)?;
        let mut w = BufWriter::new(f);
        self.write_to(&mut w)?;
        w.flush().map_err(io_err)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(io_err)?;
        Self::read_from(BufReader::new(f))
    }
}

fn label_width(count: u32) -> u8 {
    if count <= 1 << 8 {
        1
    } else if count <= 1 << 16 {
        2
    } else {
        4
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Malformed(format!("oracle table I/O: {e}"))
}

fn bits_index(bits: &[u16]) -> u32 {
    bits.iter().fold(0u32, |a, &b| (a << 1) | u32::from(b))
}
