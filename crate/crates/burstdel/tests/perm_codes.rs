//! Permutation codes: binary images, projections, ranking sequences,
//! reconstruction and the full decoding pipeline.

use std::collections::HashMap;

use burstdel::exec::Exec;
use burstdel::perm::*;
use burstdel::seqcore::{apply_burst, Burst, Interval};
use burstdel::tburst::DensityParams;
use burstdel::verify::{
    check_codebook, roundtrip_sweep, sieve, CodeSpec, Decoder, Family, SieveRequest,
};

/// All permutations of `1..=k` in lexicographic order, generated by the
/// next-permutation step.
fn all_perms(k: usize) -> Vec<Vec<u16>> {
    let mut p: Vec<u16> = (1..=k as u16).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..k).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
        out.push(p.clone());
    }
}

fn bursts(n: usize, t: usize) -> Vec<Burst> {
    (1..=t)
        .flat_map(|len| (1..=n + 1 - len).map(move |s| Burst::new(s, len).unwrap()))
        .collect()
}

#[test]
fn binary_image_is_balanced() {
    for n in [5, 6] {
        for pi in all_perms(n) {
            let b = bp_map(&pi);
            assert_eq!(b.iter().filter(|&&x| x == 1).count(), n.div_ceil(2));
            assert!(is_balanced(&b));
        }
    }
}

#[test]
fn ranks_follow_lexicographic_order() {
    for k in 1..=6 {
        for (i, pi) in all_perms(k).iter().enumerate() {
            assert_eq!(lex_rank(pi).unwrap(), i as u64 + 1);
            assert_eq!(&lex_unrank(i as u64 + 1, k).unwrap(), pi);
        }
    }
    for r in [1u64, 777, 40320] {
        assert_eq!(lex_rank(&lex_unrank(r, 8).unwrap()).unwrap(), r);
    }
    assert!(lex_unrank(0, 3).is_err());
    assert!(lex_rank(&[1, 1, 2]).is_err());
}

#[test]
fn ranking_sequence_composes_projection_and_rank() {
    let table: HashMap<Vec<u16>, u16> = all_perms(3).into_iter().zip(1..).collect();
    for pi in all_perms(6) {
        let p = overlap_ranks(&pi, 2).unwrap();
        assert_eq!(p.len(), 4);
        for (i, w) in pi.windows(3).enumerate() {
            let mut sorted = w.to_vec();
            sorted.sort_unstable();
            let pattern: Vec<u16> = w
                .iter()
                .map(|x| sorted.iter().position(|y| y == x).unwrap() as u16 + 1)
                .collect();
            assert_eq!(prj(w).unwrap(), pattern);
            assert_eq!(p[i], table[&pattern]);
        }
    }
    assert!(overlap_ranks(&[2, 1], 2).is_err());
    assert_eq!(overlap_ranks(&[1, 2, 3, 4, 5, 6], 2).unwrap(), vec![1; 4]);
}

/// The ranking sequence of π after a burst at `i` of length `t′` agrees with
/// the original before `i − t` and, shifted by `t′`, from `i` on.
#[test]
fn a_burst_is_one_short_edit_of_the_ranking_sequence() {
    let t = 2;
    for pi in all_perms(7) {
        let p = overlap_ranks(&pi, t).unwrap();
        for b in bursts(7, t) {
            let damaged = apply_burst(&pi, b).unwrap();
            let q = overlap_ranks(&damaged, t).unwrap();
            assert_eq!(q.len() + b.len, p.len());
            let i = b.start;
            for j in 1..=q.len() {
                if j + t < i {
                    assert_eq!(q[j - 1], p[j - 1]);
                } else if j >= i {
                    assert_eq!(q[j - 1], p[j - 1 + b.len]);
                }
            }
        }
    }
}

#[test]
fn reconstruction_recovers_every_burst() {
    let t = 2;
    for pi in all_perms(6) {
        let p = overlap_ranks(&pi, t).unwrap();
        for b in bursts(6, t) {
            let damaged = apply_burst(&pi, b).unwrap();
            let missing = missing_symbols(&damaged, 6).unwrap();
            assert_eq!(reconstruct(&damaged, &missing, &p, t).unwrap(), pi);
        }
        assert_eq!(reconstruct(&pi, &[], &p, t).unwrap(), pi);
    }
}

#[test]
fn reconstruction_reports_corrupted_rankings() {
    let pi = [6u16, 4, 2, 1, 5, 3];
    let damaged = [6u16, 4, 5, 3];
    let err = reconstruct(&damaged, &[1, 2], &[1, 1, 1, 1], 2).unwrap_err();
    assert!(matches!(err, burstdel::Error::NotDecodable(_)));
    assert!(reconstruct(&pi, &[1], &[6, 6, 3, 2], 2).is_err());
}

#[test]
fn ranking_sequence_decoder_is_exhaustive_for_single_bursts() {
    // t = 1: ranks are binary, edits replace at most 2 symbols, blocks 2P = 8.
    let (t, p, len) = (1, 4, 8);
    let code = rank_block_code(p, t, Exec::default()).unwrap();
    assert_eq!(code.q(), 2);
    for i in 0..1u64 << len {
        let ranks: Vec<u16> = (0..len)
            .map(|b| ((i >> (len - 1 - b)) & 1) as u16 + 1)
            .collect();
        let zero_based: Vec<u16> = ranks.iter().map(|r| r - 1).collect();
        let sums = code.sums(&zero_based).unwrap();
        for a in 1..=len {
            for l1 in 1..=2.min(len + 1 - a) {
                for l2 in 0..l1 {
                    for f in 0..1u16 << l2 {
                        let mut received = ranks[..a - 1].to_vec();
                        received.extend((0..l2).map(|b| ((f >> b) & 1) + 1));
                        received.extend_from_slice(&ranks[a - 1 + l1..]);
                        for lo in a.saturating_sub(p).max(1)..=a {
                            let hi = (lo + p - 1).min(len);
                            if hi < a + l1 - 1 {
                                continue;
                            }
                            let w = Interval::new(lo, hi).unwrap();
                            assert_eq!(
                                c2t_decode(&received, len, w, &sums, &code, t).unwrap(),
                                ranks,
                                "edit at {a}, {l1} → {l2}, window {w}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn sieved_permutation_code_round_trips() {
    let book = sieve(&SieveRequest::new(Family::Perm, 6, 6, 2), Exec::default()).unwrap();
    assert!(!book.words.is_empty());
    let CodeSpec::Perm(params) = &book.spec else {
        panic!("not a permutation code")
    };
    assert_eq!(params.p, 4);
    let dec = Decoder::new(book.spec.clone(), Exec::default()).unwrap();
    assert!(book.words.iter().all(|w| dec.member(w)));
    let report = roundtrip_sweep(&book.words, &dec, Exec::default());
    assert!(report.passed(), "{:?}", report.failure);
    assert!(check_codebook(&book).passed());
    for w in &book.words {
        assert_eq!(&dec.decode(w).unwrap(), w);
    }
}

#[test]
fn boundary_bursts_round_trip() {
    let book = sieve(
        &SieveRequest::new(Family::Perm, 8, 8, 2).with_delta(4),
        Exec::default(),
    )
    .unwrap();
    let dec = Decoder::new(book.spec.clone(), Exec::default()).unwrap();
    for w in book.words.iter().take(20) {
        for b in [
            Burst::new(1, 2).unwrap(),
            Burst::new(7, 2).unwrap(),
            Burst::new(1, 1).unwrap(),
            Burst::new(8, 1).unwrap(),
        ] {
            let y = apply_burst(w, b).unwrap();
            assert_eq!(&dec.decode(&y).unwrap(), w);
        }
    }
}

#[test]
fn localization_survives_destroying_a_marker() {
    let book = sieve(
        &SieveRequest::new(Family::Perm, 8, 8, 2).with_delta(4),
        Exec::default(),
    )
    .unwrap();
    let CodeSpec::Perm(params) = &book.spec else {
        panic!("not a permutation code")
    };
    let dp = DensityParams::with_delta(8, 2, params.delta).unwrap();
    let marker = [0u16, 0, 1, 1];
    let count = |b: &[u16]| b.windows(4).filter(|w| *w == marker).count();
    let mut seen = 0;
    for w in &book.words {
        for b in bursts(8, 2) {
            let damaged = apply_burst(w, b).unwrap();
            let image = bp_map_with(&damaged, 8);
            if count(&image) < count(&bp_map(w)) {
                let win = perm_locate(&image, params.c0, params.c1, &dp)
                    .unwrap()
                    .unwrap();
                assert!(win.covers(b));
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn parameter_checks() {
    assert!(check_permutation(&[1, 3, 2]).is_ok());
    assert!(check_permutation(&[0, 1, 2]).is_err());
    assert!(check_permutation(&[1, 1, 2]).is_err());
    assert!(missing_symbols(&[1, 9], 4).is_err());
    assert_eq!(missing_symbols(&[4, 1], 4).unwrap(), vec![2, 3]);
    assert!(rank_window(Interval::new(5, 7).unwrap(), 8, 2).is_ok());
}
