//! Single-burst codes defined by one or two residues: the VT code, the
//! Tenengol'ts q-ary code, the Levenshtein code for bursts of length at most
//! two (decoded through the derivative ψ), and the induced-deletion code.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::{
    check_alphabet, check_binary, insert_at, interleave, is_burst_descendant, phi_raw, psi_inv_raw,
    psi_raw, split_odd_even, symbol_sum, vt_syndrome, weight,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassicFamily {
    Vt,
    Tenengolts,
    Levenshtein,
    Induced,
}

/// Residues of one of the classical codes. Unused residues are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicParams {
    pub family: ClassicFamily,
    pub n: usize,
    pub q: u32,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl ClassicParams {
    /// `VT_a(n) = {x : VT(x) ≡ a mod n+1}`.
    pub fn vt(n: usize, a: u64) -> Result<Self> {
        Self::checked(ClassicFamily::Vt, n, 2, a, 0, 0)
    }

    /// `{u : Σ (i−1)·φ(u)_i ≡ a mod n, Σ u_i ≡ b mod q}`.
    ///
    /// The ascent syndrome is weighted by `i − 1`: since `φ(u)_1 = 1` always,
    /// this is a VT syndrome of the `n − 1` free ascent bits, which is what
    /// makes the modulus `n` sufficient. Weighting by `i` instead makes
    /// distinct codewords share single-deletion descendants.
    pub fn tenengolts(n: usize, q: u32, a: u64, b: u64) -> Result<Self> {
        Self::checked(ClassicFamily::Tenengolts, n, q, a, b, 0)
    }

    /// `{x : VT(ψ(x)) ≡ a mod 2n}`.
    pub fn levenshtein(n: usize, a: u64) -> Result<Self> {
        Self::checked(ClassicFamily::Levenshtein, n, 2, a, 0, 0)
    }

    /// `{u : VT(ψ(φ(uᵒ)∘φ(uᵉ))) ≡ a mod 2n, Σ uᵒ ≡ b, Σ uᵉ ≡ c mod q}`.
    pub fn induced(n: usize, q: u32, a: u64, b: u64, c: u64) -> Result<Self> {
        Self::checked(ClassicFamily::Induced, n, q, a, b, c)
    }

    fn checked(family: ClassicFamily, n: usize, q: u32, a: u64, b: u64, c: u64) -> Result<Self> {
        let p = ClassicParams {
            family,
            n,
            q,
            a,
            b,
            c,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (n, q) = (self.n as u64, u64::from(self.q));
        if self.n == 0 {
            return Err(Error::param("code length must be positive"));
        }
        crate::seqcore::check_q(self.q)?;
        let ok = match self.family {
            ClassicFamily::Vt => self.q == 2 && self.a <= n,
            ClassicFamily::Tenengolts => self.a < n && self.b < q,
            ClassicFamily::Levenshtein => self.q == 2 && self.a < 2 * n,
            ClassicFamily::Induced => self.n >= 4 && self.a < 2 * n && self.b < q && self.c < q,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param(format!("residues out of range for {self:?}")))
        }
    }

    /// The residues `(a, b, c)` of `u` under this family's syndromes.
    pub fn residues_of(family: ClassicFamily, q: u32, u: &[u16]) -> (u64, u64, u64) {
        let n = u.len() as u64;
        match family {
            ClassicFamily::Vt => (vt_syndrome(u) % (n + 1), 0, 0),
            ClassicFamily::Tenengolts => (
                ascent_syndrome(u) % n.max(1),
                symbol_sum(u) % u64::from(q),
                0,
            ),
            ClassicFamily::Levenshtein => (vt_syndrome(&psi_raw(u)) % (2 * n).max(1), 0, 0),
            ClassicFamily::Induced => {
                let (uo, ue) = split_odd_even(u);
                let x = interleave(&phi_raw(&uo), &phi_raw(&ue));
                (
                    vt_syndrome(&psi_raw(&x)) % (2 * n).max(1),
                    symbol_sum(&uo) % u64::from(q),
                    symbol_sum(&ue) % u64::from(q),
                )
            }
        }
    }

    /// Membership test.
    pub fn member(&self, u: &[u16]) -> Result<bool> {
        check_alphabet(u, self.q)?;
        if u.len() != self.n {
            return Err(Error::length(format!("{}", self.n), u.len()));
        }
        Ok(Self::residues_of(self.family, self.q, u) == (self.a, self.b, self.c))
    }

    /// Correct one burst of the channel this family is designed for.
    pub fn decode(&self, received: &[u16]) -> Result<Vec<u16>> {
        match self.family {
            ClassicFamily::Vt => vt_decode(received, self.a, self.n),
            ClassicFamily::Tenengolts => {
                tenengolts_decode(received, self.a, self.b, self.n, self.q)
            }
            ClassicFamily::Levenshtein => levenshtein_decode(received, self.a, self.n),
            ClassicFamily::Induced => {
                induced_decode(received, self.a, self.b, self.c, self.n, self.q)
            }
        }
    }
}

/// `Σ (i−1)·φ(u)_i`, the position syndrome of the Tenengol'ts code.
pub fn ascent_syndrome(u: &[u16]) -> u64 {
    let phi = phi_raw(u);
    vt_syndrome(&phi) - crate::seqcore::weight(&phi) as u64
}

/// Free-function form of [`ClassicParams::member`].
pub fn member(params: &ClassicParams, u: &[u16]) -> Result<bool> {
    params.member(u)
}

/// Single-deletion decoder for `VT_a(n)`.
pub fn vt_decode(received: &[u16], a: u64, n: usize) -> Result<Vec<u16>> {
    check_binary(received)?;
    ClassicParams::vt(n, a)?;
    if received.len() + 1 != n {
        return Err(Error::length(format!("{}", n - 1), received.len()));
    }
    let modulus = n as u64 + 1;
    let w = weight(received) as u64;
    let s = (a + modulus - vt_syndrome(received) % modulus) % modulus;
    let x = if s <= w {
        // A 0 was deleted with `s` ones to its right.
        insert_at(received, after_kth(received, 1, (w - s) as usize), &[0])
    } else {
        // A 1 was deleted with `s − w − 1` zeros to its left.
        insert_at(received, after_kth(received, 0, (s - w - 1) as usize), &[1])
    };
    if x.len() == n && vt_syndrome(&x) % modulus == a && is_burst_descendant(&x, received) {
        Ok(x)
    } else {
        Err(Error::undecodable(
            "no VT codeword is consistent with the received word",
        ))
    }
}

/// Index just after the `k`-th occurrence of `sym` (0 when `k = 0`); the
/// length of the word if there are fewer occurrences.
fn after_kth(w: &[u16], sym: u16, k: usize) -> usize {
    if k == 0 {
        return 0;
    }
    let mut seen = 0;
    for (i, &s) in w.iter().enumerate() {
        if s == sym {
            seen += 1;
            if seen == k {
                return i + 1;
            }
        }
    }
    w.len()
}

/// 0-based index of the `k`-th (1-based) occurrence of `sym`.
fn index_of_kth(w: &[u16], sym: u16, k: usize) -> Option<usize> {
    w.iter()
        .enumerate()
        .filter(|(_, &s)| s == sym)
        .nth(k.checked_sub(1)?)
        .map(|(i, _)| i)
}

/// Single-deletion decoder for the Tenengol'ts code: the checksum yields the
/// deleted value, the ascent syndrome the insertion point.
pub fn tenengolts_decode(received: &[u16], a: u64, b: u64, n: usize, q: u32) -> Result<Vec<u16>> {
    let params = ClassicParams::tenengolts(n, q, a, b)?;
    check_alphabet(received, q)?;
    if received.len() + 1 != n {
        return Err(Error::length(format!("{}", n - 1), received.len()));
    }
    let qq = u64::from(q);
    let value = ((b + qq - symbol_sum(received) % qq) % qq) as u16;
    let candidates: BTreeSet<Vec<u16>> = (0..=received.len())
        .map(|at| insert_at(received, at, &[value]))
        .filter(|u| ascent_syndrome(u) % n as u64 == a)
        .collect();
    unique(candidates, "Tenengol'ts").and_then(|u| {
        if params.member(&u)? {
            Ok(u)
        } else {
            Err(Error::undecodable("Tenengol'ts residues do not match"))
        }
    })
}

fn unique(mut candidates: BTreeSet<Vec<u16>>, what: &str) -> Result<Vec<u16>> {
    match candidates.len() {
        1 => Ok(candidates.pop_first().expect("one candidate")),
        0 => Err(Error::undecodable(format!(
            "no {what} codeword is consistent"
        ))),
        k => Err(Error::undecodable(format!(
            "{k} {what} codewords are consistent"
        ))),
    }
}

/// Correct the derivative-domain image of a burst of at most two deletions.
///
/// `received` is `ψ(x′)` for `x′` obtained from a length-`n` word `x` by
/// deleting `n − |x′| ∈ {0, 1, 2}` consecutive bits, and `a ≡ VT(ψ(x))`
/// (mod 2n). Deleting bits from `x` rewrites a window of `ψ(x)` locally (for
/// example `11 → 0` or `010 → 1`); each local rewrite shifts the VT syndrome
/// by an amount that pins down where it happened relative to the weight `w`
/// of the received derivative. The returned word is `ψ(x)`.
pub fn correct_derivative(received: &[u16], a: u64, n: usize) -> Result<Vec<u16>> {
    let m = received.len();
    if m > n || n - m > 2 {
        return Err(Error::length(format!("{} to {n}", n.saturating_sub(2)), m));
    }
    let modulus = 2 * n as u64;
    let w = weight(received);
    let delta = ((a % modulus) + modulus - vt_syndrome(received) % modulus) % modulus;
    let d = delta as usize;
    let zeros = m - w;
    let y = match n - m {
        0 => (d == 0).then(|| received.to_vec()),
        1 => {
            if d <= w {
                // Deleted x-bit turned 00/01/10 into one symbol: a 0 is
                // missing with exactly Δ ones to its right.
                Some(insert_at(received, after_kth(received, 1, w - d), &[0]))
            } else if d == w + 1 {
                Some(insert_at(received, 0, &[1]))
            } else if d >= w + 3 {
                // 11 collapsed to 0 at 1-based position p with R₁ ones to its
                // right: Δ = 2p + 1 + R₁.
                let mut found = None;
                let mut ones_right = w;
                for (j, &s) in received.iter().enumerate() {
                    if s == 1 {
                        ones_right -= 1;
                        continue;
                    }
                    if 2 * (j + 1) + 1 + ones_right == d {
                        let mut y = received[..j].to_vec();
                        y.extend_from_slice(&[1, 1]);
                        y.extend_from_slice(&received[j + 1..]);
                        found = Some(y);
                        break;
                    }
                }
                found
            } else {
                None
            }
        }
        _ => {
            if d % 2 == 0 && d <= 2 * w {
                // 00 missing with Δ/2 ones to its right.
                Some(insert_at(
                    received,
                    after_kth(received, 1, w - d / 2),
                    &[0, 0],
                ))
            } else if d % 2 == 1 && d < 2 * w {
                // 010 → 1: the 1 with (Δ−1)/2 ones to its right regains its
                // flanking zeros.
                let r1 = (d - 1) / 2;
                index_of_kth(received, 1, w - r1).map(|j| {
                    let mut y = received[..j].to_vec();
                    y.extend_from_slice(&[0, 1, 0]);
                    y.extend_from_slice(&received[j + 1..]);
                    y
                })
            } else if d == 2 * w + 1 {
                Some(insert_at(received, 0, &[1, 0]))
            } else if d == 2 * w + 2 {
                Some(insert_at(received, 0, &[0, 1]))
            } else if d % 2 == 1 {
                // 11 missing after L₀ zeros: Δ = 2w + 3 + 2L₀.
                let l0 = (d - 2 * w - 3) / 2;
                (l0 <= zeros).then(|| insert_at(received, after_kth(received, 0, l0), &[1, 1]))
            } else {
                // 101 → 0 at the (L₀+1)-th zero: Δ = 2w + 4 + 2L₀.
                let l0 = d / 2 - w - 2;
                index_of_kth(received, 0, l0 + 1).map(|j| {
                    let mut y = received[..j].to_vec();
                    y.extend_from_slice(&[1, 0, 1]);
                    y.extend_from_slice(&received[j + 1..]);
                    y
                })
            }
        }
    };
    match y {
        Some(y) if y.len() == n && vt_syndrome(&y) % modulus == a % modulus => Ok(y),
        _ => Err(Error::undecodable(
            "derivative syndrome is inconsistent with a burst of at most two deletions",
        )),
    }
}

/// Decoder for the Levenshtein code: corrects a burst of at most two
/// deletions (lengths `n`, `n − 1`, `n − 2` are accepted).
pub fn levenshtein_decode(received: &[u16], a: u64, n: usize) -> Result<Vec<u16>> {
    check_binary(received)?;
    ClassicParams::levenshtein(n, a)?;
    if received.len() > n || received.len() + 2 < n {
        return Err(Error::length(
            format!("{} to {n}", n.saturating_sub(2)),
            received.len(),
        ));
    }
    let y = correct_derivative(&psi_raw(received), a, n)?;
    let x = psi_inv_raw(&y);
    if is_burst_descendant(&x, received) {
        Ok(x)
    } else {
        Err(Error::undecodable(
            "corrected word does not explain the received word",
        ))
    }
}

/// Replace `u_i u_{i+1} u_{i+2} = aba` (`a ≠ b`) by `a`, i.e. delete
/// positions `i+1` and `i+2` (1-based `i ∈ [1, n−2]`).
pub fn induced_deletion(u: &[u16], i: usize) -> Result<Vec<u16>> {
    if i == 0 || i + 2 > u.len() {
        return Err(Error::BurstOutOfRange {
            start: i + 1,
            len: 2,
            n: u.len(),
        });
    }
    let (x, y, z) = (u[i - 1], u[i], u[i + 1]);
    if x != z || x == y {
        return Err(Error::param(format!(
            "positions {i}..{} do not form a pattern aba",
            i + 2
        )));
    }
    Ok(crate::seqcore::delete_range(u, i, 2))
}

/// Every 1-based `i` at which an induced deletion can act.
pub fn induced_sites(u: &[u16]) -> Vec<usize> {
    (1..=u.len().saturating_sub(2))
        .filter(|&i| u[i - 1] == u[i + 1] && u[i - 1] != u[i])
        .collect()
}

/// Decoder for the induced-deletion code.
///
/// An induced deletion removes one symbol from each of `uᵒ` and `uᵉ`, so the
/// interleaved ascent word `φ(uᵒ)∘φ(uᵉ)` loses two adjacent bits. The
/// derivative corrector restores it (boundary deletions at the first or last
/// symbols are the prefix/suffix cases of that corrector, so no separate
/// padding is needed), the checksums give the two deleted values, and each
/// half is completed by the unique reinsertion matching its ascent word.
pub fn induced_decode(
    received: &[u16],
    a: u64,
    b: u64,
    c: u64,
    n: usize,
    q: u32,
) -> Result<Vec<u16>> {
    let params = ClassicParams::induced(n, q, a, b, c)?;
    check_alphabet(received, q)?;
    if received.len() + 2 != n {
        return Err(Error::length(format!("{}", n - 2), received.len()));
    }
    let (ro, re) = split_odd_even(received);
    let xr = interleave(&phi_raw(&ro), &phi_raw(&re));
    let x = psi_inv_raw(&correct_derivative(&psi_raw(&xr), a, n)?);
    let (xo, xe) = split_odd_even(&x);
    let qq = u64::from(q);
    let vo = ((b + qq - symbol_sum(&ro) % qq) % qq) as u16;
    let ve = ((c + qq - symbol_sum(&re) % qq) % qq) as u16;
    let uo = reinsert(&ro, vo, &xo)?;
    let ue = reinsert(&re, ve, &xe)?;
    let u = interleave(&uo, &ue);
    if params.member(&u)? && is_burst_descendant(&u, received) {
        Ok(u)
    } else {
        Err(Error::undecodable(
            "reassembled word fails the induced-deletion residues",
        ))
    }
}

/// The values deleted from `uᵒ` and `uᵉ`, recovered from the checksums.
pub fn induced_deleted_values(received: &[u16], b: u64, c: u64, q: u32) -> (u16, u16) {
    let (ro, re) = split_odd_even(received);
    let qq = u64::from(q);
    (
        ((b + qq - symbol_sum(&ro) % qq) % qq) as u16,
        ((c + qq - symbol_sum(&re) % qq) % qq) as u16,
    )
}

/// Insert `value` into `short` so that the ascent word becomes `target`.
fn reinsert(short: &[u16], value: u16, target: &[u16]) -> Result<Vec<u16>> {
    if target.len() != short.len() + 1 {
        return Err(Error::undecodable("ascent word has the wrong length"));
    }
    let candidates: BTreeSet<Vec<u16>> = (0..=short.len())
        .map(|at| insert_at(short, at, &[value]))
        .filter(|u| phi_raw(u) == target)
        .collect();
    unique(candidates, "reinsertion")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::{apply_burst, bits, word_from_index, Burst};

    #[test]
    fn induced_worked_example() {
        let u = [1, 0, 6, 7, 6, 2, 3, 5];
        let p = ClassicParams::induced(8, 8, 3, 0, 6).unwrap();
        assert!(p.member(&u).unwrap());
        assert_eq!(
            ClassicParams::residues_of(ClassicFamily::Induced, 8, &u),
            (3, 0, 6)
        );
        let received = induced_deletion(&u, 3).unwrap();
        assert_eq!(received, vec![1, 0, 6, 2, 3, 5]);
        assert_eq!(induced_deleted_values(&received, 0, 6, 8), (6, 7));
        assert_eq!(
            induced_decode(&received, 3, 0, 6, 8, 8).unwrap(),
            u.to_vec()
        );
    }

    #[test]
    fn vt_examples() {
        let x = bits("0010");
        assert_eq!(vt_syndrome(&x) % 5, 3);
        let xr = apply_burst(&x, Burst::new(3, 1).unwrap()).unwrap();
        assert_eq!(xr, bits("000"));
        assert_eq!(vt_decode(&xr, 3, 4).unwrap(), x);
        assert_eq!(vt_decode(&[0; 5], 0, 6).unwrap(), vec![0; 6]);
        assert!(vt_decode(&x, 3, 4).is_err());
        assert!(ClassicParams::vt(4, 0).unwrap().member(&[0; 4]).unwrap());
        assert!(!ClassicParams::vt(4, 1).unwrap().member(&[0; 4]).unwrap());
    }

    #[test]
    fn vt_exhaustive_small() {
        for n in 1..=10usize {
            for idx in 0..1u64 << n {
                let x = word_from_index(idx, n, 2);
                let a = vt_syndrome(&x) % (n as u64 + 1);
                for s in 1..=n {
                    let xr = apply_burst(&x, Burst::new(s, 1).unwrap()).unwrap();
                    assert_eq!(vt_decode(&xr, a, n).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn levenshtein_example() {
        let x = bits("01110100");
        let p = ClassicParams::levenshtein(8, 0).unwrap();
        assert!(p.member(&x).unwrap());
        let xr = apply_burst(&x, Burst::new(4, 2).unwrap()).unwrap();
        assert_eq!(levenshtein_decode(&xr, 0, 8).unwrap(), x);
        assert_eq!(levenshtein_decode(&x, 0, 8).unwrap(), x);
        assert!(levenshtein_decode(&x, 1, 8).is_err());
    }

    #[test]
    fn tenengolts_reinsertion() {
        // The odd half of the worked example and its deleted value.
        let u = [1, 6, 6, 3];
        let (a, b, _) = ClassicParams::residues_of(ClassicFamily::Tenengolts, 8, &u);
        for s in 1..=4 {
            let r = apply_burst(&u, Burst::new(s, 1).unwrap()).unwrap();
            assert_eq!(tenengolts_decode(&r, a, b, 4, 8).unwrap(), u.to_vec());
        }
        assert!(tenengolts_decode(&u, a, b, 4, 8).is_err());
    }

    #[test]
    fn induced_sites_and_errors() {
        assert_eq!(induced_sites(&[1, 0, 1, 0]), vec![1, 2]);
        assert!(induced_deletion(&[1, 1, 1], 1).is_err());
        assert!(induced_deletion(&[1, 0], 1).is_err());
    }
}
