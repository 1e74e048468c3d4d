//! Dense strings, burst localization, block syndromes and the q-ary ≤t-burst
//! code, checked against brute-force oracles written independently here.

use std::collections::{BTreeSet, HashMap};

use burstdel::exec::Exec;
use burstdel::seqcore::{apply_burst, word_from_index, Burst, Interval};
use burstdel::tburst::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_b0a7)
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize, p_one: f64) -> Vec<u16> {
    (0..n).map(|_| u16::from(rng.gen_bool(p_one))).collect()
}

/// Occurrences of `0^t1^t` by plain substring search.
fn marker_positions(x: &[u16], t: usize) -> Vec<usize> {
    let w: Vec<u16> = std::iter::repeat(0)
        .take(t)
        .chain(std::iter::repeat(1).take(t))
        .collect();
    (0..x.len().saturating_sub(2 * t - 1))
        .filter(|&s| x[s..s + 2 * t] == w[..])
        .collect()
}

/// Dense means: the gaps between 0, every marker start (shifted by one) and
/// the last admissible start are at most δ.
fn naive_dense(x: &[u16], t: usize, delta: usize) -> bool {
    let mut ones = vec![1usize];
    ones.extend(marker_positions(x, t).into_iter().map(|s| s + 2));
    ones.push(x.len() - 2 * t + 3);
    ones.windows(2).all(|p| p[1] - p[0] <= delta)
}

fn periodic(pattern: &[u16], n: usize) -> Vec<u16> {
    pattern.iter().copied().cycle().take(n).collect()
}

fn dense_roundtrip(dp: &DensityParams, inputs: &[Vec<u16>]) {
    for x in inputs {
        let y = dense_encode(x, dp).unwrap();
        assert_eq!(y.len(), x.len() + 4 * dp.t);
        assert!(is_dense(&y, dp), "encoder output not dense");
        assert!(naive_dense(&y, dp.t, dp.delta));
        assert_eq!(&dense_decode(&y, dp).unwrap(), x);
    }
}

#[test]
fn dense_encoding_round_trips_for_single_bursts() {
    let dp = DensityParams::new(600, 1).unwrap();
    assert_eq!(dp.delta, 80);
    let mut r = rng();
    let mut inputs = vec![
        vec![0; 600],
        vec![1; 600],
        periodic(&[1, 0], 600),
        periodic(&[1, 1, 0], 600),
    ];
    inputs.extend((0..20).map(|_| random_bits(&mut r, 600, 0.5)));
    inputs.extend((0..20).map(|_| random_bits(&mut r, 600, 0.03)));
    inputs.extend((0..20).map(|_| random_bits(&mut r, 600, 0.97)));
    dense_roundtrip(&dp, &inputs);
}

#[test]
fn dense_encoding_round_trips_for_two_bursts() {
    // Compression of marker-free windows needs δ ≈ 43(⌈log n⌉ + 10) at t = 2.
    let dp = DensityParams::with_delta(2048, 2, 904).unwrap();
    dp.check_compressible().unwrap();
    let mut r = rng();
    let mut inputs = vec![
        vec![0; 2048],
        vec![1; 2048],
        periodic(&[0, 1], 2048),
        periodic(&[1, 0, 0, 0], 2048),
    ];
    inputs.extend((0..5).map(|_| random_bits(&mut r, 2048, 0.02)));
    inputs.extend((0..5).map(|_| random_bits(&mut r, 2048, 0.5)));
    dense_roundtrip(&dp, &inputs);
}

#[test]
fn formula_delta_is_not_compressible_for_two_bursts_at_small_n() {
    let dp = DensityParams::new(256, 2).unwrap();
    assert!(dp.check_compressible().is_err());
    assert!(dense_encode(&vec![0; 256], &dp).is_err());
}

#[test]
fn compression_round_trips_on_random_windows() {
    let dp = DensityParams::new(1024, 1).unwrap();
    let mut r = rng();
    for _ in 0..10_000 {
        let mut s = random_bits(&mut r, dp.delta, 0.5);
        // Aligned chunks equal to the marker 01 are the only forbidden input.
        for c in s.chunks_mut(2) {
            if c == [0, 1] {
                c[0] = 1;
            }
        }
        let g = compress_g(&s, &dp).unwrap();
        assert_eq!(g.len(), dp.compressed_len().unwrap());
        assert_eq!(decompress_g(&g, &dp).unwrap(), s);
    }
}

#[test]
fn compression_rejects_an_aligned_marker_only() {
    let dp = DensityParams::new(1024, 1).unwrap();
    let mut s = vec![1u16; dp.delta];
    s[0] = 0; // chunk (0,1) at offset 0
    assert!(compress_g(&s, &dp).is_err());
    let mut s = vec![1u16; dp.delta];
    s[1] = 0; // 0 then 1 straddling two chunks
    assert!(compress_g(&s, &dp).is_ok());
}

#[test]
fn alpha_matches_substring_search() {
    let mut r = rng();
    for t in 1..=3 {
        for _ in 0..500 {
            let x = random_bits(&mut r, 40, 0.5);
            let dp = DensityParams::with_delta(40, t, 12).unwrap();
            let (ind, alpha) = indicator_alpha(&x, &dp).unwrap();
            let starts = marker_positions(&x, t);
            assert_eq!(alpha.pattern_count(), starts.len());
            assert_eq!(ind.iter().filter(|&&b| b == 1).count(), starts.len());
            assert_eq!(alpha.gaps.iter().sum::<usize>(), x.len() - 2 * t + 2);
            assert_eq!(is_dense(&x, &dp), naive_dense(&x, t, 12));
        }
    }
}

#[test]
fn enumeration_matches_filtering() {
    let dp = DensityParams::with_delta(14, 2, 6).unwrap();
    let listed = enumerate_dense(&dp, 1 << 20).unwrap();
    let filtered: Vec<Vec<u16>> = (0..1u64 << 14)
        .map(|i| word_from_index(i, 14, 2))
        .filter(|w| naive_dense(w, 2, 6))
        .collect();
    assert_eq!(listed, filtered);
    assert!(enumerate_dense(&dp, 10).is_err());
}

/// The largest `(c0, c1)` class of dense words.
fn largest_class(dp: &DensityParams) -> ((u64, u64), Vec<Vec<u16>>) {
    let mut classes: HashMap<(u64, u64), Vec<Vec<u16>>> = HashMap::new();
    for w in enumerate_dense(dp, 1 << 22).unwrap() {
        classes
            .entry(loc_residues(&w, dp).unwrap())
            .or_default()
            .push(w);
    }
    classes
        .into_iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))
        .unwrap()
}

#[test]
fn localization_covers_every_burst() {
    let dp = DensityParams::with_delta(16, 2, 8).unwrap();
    let ((c0, c1), class) = largest_class(&dp);
    let loc = LocParams::new(dp, c0, c1).unwrap();
    let mut erased_marker = 0;
    for x in &class {
        assert!(loc.member(x));
        assert_eq!(loc.locate(x).unwrap(), None);
        for len in 1..=2 {
            for s in 1..=16 + 1 - len {
                let b = Burst::new(s, len).unwrap();
                let y = apply_burst(x, b).unwrap();
                let w = loc.locate(&y).unwrap().unwrap();
                assert!(
                    w.covers(b),
                    "window {w} misses burst at {s} of length {len}"
                );
                assert!(
                    w.len() < dp.delta + dp.t,
                    "window {w} longer than δ + t − 1"
                );
                if marker_positions(&y, 2).len() < marker_positions(x, 2).len() {
                    erased_marker += 1;
                }
            }
        }
    }
    assert!(erased_marker > 0, "no burst destroyed a marker occurrence");
}

/// Descendants of `x` under one length-reducing replacement of a substring of
/// length at most `max_len`, or under one burst of at most `t` deletions.
fn edit_descendants(x: &[u16], max_len: usize) -> BTreeSet<Vec<u16>> {
    let mut out = BTreeSet::new();
    for a in 0..x.len() {
        for l1 in 1..=max_len.min(x.len() - a) {
            for l2 in 0..l1 {
                for f in 0..1u64 << l2 {
                    let mut y = x[..a].to_vec();
                    y.extend(word_from_index(f, l2, 2));
                    y.extend_from_slice(&x[a + l1..]);
                    out.insert(y);
                }
            }
        }
    }
    out
}

fn burst_descendants_upto(x: &[u16], t: usize) -> BTreeSet<Vec<u16>> {
    let mut out = BTreeSet::new();
    for len in 1..=t.min(x.len()) {
        for s in 1..=x.len() + 1 - len {
            out.insert(apply_burst(x, Burst::new(s, len).unwrap()).unwrap());
        }
    }
    out
}

fn assert_oracle_separates(o: &SyndromeOracle, balls: &[BTreeSet<Vec<u16>>]) {
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            if !balls[i].is_disjoint(&balls[j]) {
                assert_ne!(
                    o.label_of_index(i as u32),
                    o.label_of_index(j as u32),
                    "confusable {i}, {j} share a label"
                );
            }
        }
    }
}

#[test]
fn burst_oracle_separates_confusable_blocks() {
    for (k, t) in [(6, 1), (6, 2), (7, 3)] {
        let o = SyndromeOracle::build(k, ErrorModel::Burst { t }, Exec::default()).unwrap();
        let balls: Vec<_> = (0..1u64 << k)
            .map(|i| burst_descendants_upto(&word_from_index(i, k, 2), t))
            .collect();
        assert_oracle_separates(&o, &balls);
    }
}

#[test]
fn edit_oracle_separates_confusable_blocks() {
    let o = SyndromeOracle::build(8, ErrorModel::SubstringEdit { max_len: 4 }, Exec::default())
        .unwrap();
    let balls: Vec<_> = (0..1u64 << 8)
        .map(|i| edit_descendants(&word_from_index(i, 8, 2), 4))
        .collect();
    assert_oracle_separates(&o, &balls);
}

#[test]
fn oracle_build_is_strategy_independent() {
    let model = ErrorModel::Burst { t: 2 };
    let a = SyndromeOracle::build(10, model, Exec::Sequential).unwrap();
    let b = SyndromeOracle::build(10, model, Exec::Parallel).unwrap();
    let c = oracle_build_brute(10, model).unwrap();
    assert_eq!(a.label_count(), b.label_count());
    assert!(
        (0..1u32 << 10).all(|i| a.label_of_index(i) == b.label_of_index(i)
            && a.label_of_index(i) == c.label_of_index(i))
    );
}

#[test]
fn oracle_file_round_trip() {
    let o = SyndromeOracle::build(8, ErrorModel::SubstringEdit { max_len: 3 }, Exec::default())
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("edit8.bin");
    o.save(&path).unwrap();
    let back = SyndromeOracle::load(&path).unwrap();
    assert_eq!(back.k(), 8);
    assert_eq!(back.model(), o.model());
    assert!((0..256).all(|i| back.label_of_index(i) == o.label_of_index(i)));
    let mut bytes = std::fs::read(&path).unwrap();
    bytes[0] ^= 0xff;
    assert!(SyndromeOracle::read_from(&bytes[..]).is_err());
}

#[test]
fn every_short_window_lies_in_a_block() {
    for p in 1..=6 {
        for n in 1..=40 {
            let split = BlockSplit::new(n, p).unwrap();
            for lo in 1..=n {
                for hi in lo..=(lo + p - 1).min(n) {
                    assert!(
                        split.containing(Interval::new(lo, hi).unwrap()).is_some(),
                        "n={n} P={p} [{lo},{hi}]"
                    );
                }
            }
        }
    }
}

fn block_code(p: usize, t: usize) -> BlockCode {
    ctb_block_code(p, t, Exec::default()).unwrap()
}

/// All windows of length at most `p` inside `[1, n]` that cover `b`.
fn covering_windows(b: Burst, n: usize, p: usize) -> Vec<Interval> {
    let mut out = Vec::new();
    for lo in b.start.saturating_sub(p).max(1)..=b.start {
        for hi in b.end()..=(lo + p - 1).min(n) {
            out.push(Interval::new(lo, hi).unwrap());
        }
    }
    out
}

#[test]
fn window_aided_decoding_is_exhaustive_at_small_length() {
    let (n, p, t) = (12, 4, 2);
    let code = block_code(p, t);
    for i in 0..1u64 << n {
        let x = word_from_index(i, n, 2);
        let sums = code.sums(&x).unwrap();
        for len in 1..=t {
            for s in 1..=n + 1 - len {
                let b = Burst::new(s, len).unwrap();
                let y = apply_burst(&x, b).unwrap();
                for w in covering_windows(b, n, p) {
                    assert_eq!(
                        cpb_decode(&y, n, w, &sums, &code).unwrap(),
                        x,
                        "x={x:?} burst {b:?} window {w}"
                    );
                }
            }
        }
    }
}

#[test]
fn window_aided_decoding_on_sampled_long_words() {
    let (n, p, t) = (32, 8, 2);
    let code = block_code(p, t);
    let mut r = rng();
    for _ in 0..100 {
        let x = random_bits(&mut r, n, 0.5);
        let sums = block_syndromes(&x, &code).unwrap();
        for len in 1..=t {
            for s in 1..=n + 1 - len {
                let b = Burst::new(s, len).unwrap();
                let y = apply_burst(&x, b).unwrap();
                for w in covering_windows(b, n, p) {
                    assert_eq!(cpb_decode(&y, n, w, &sums, &code).unwrap(), x);
                }
            }
        }
    }
}

#[test]
fn burst_straddling_even_blocks_uses_the_odd_family() {
    let (n, p) = (32, 8);
    let code = block_code(p, 2);
    let split = code.split(n).unwrap();
    let w = Interval::new(13, 20).unwrap();
    assert_eq!(split.containing(w), Some((BlockFamily::Odd, 1)));
    let x = periodic(&[1, 1, 0, 1, 0, 0, 0, 1, 1], n);
    let sums = code.sums(&x).unwrap();
    let y = apply_burst(&x, Burst::new(16, 2).unwrap()).unwrap();
    assert_eq!(cpb_decode(&y, n, w, &sums, &code).unwrap(), x);
}

#[test]
fn wrong_sums_are_reported_not_miscorrected() {
    let (n, p) = (16, 4);
    let code = block_code(p, 2);
    let x = periodic(&[0, 1, 1, 0, 1], n);
    let mut sums = code.sums(&x).unwrap();
    sums.e1 = (sums.e1 + 1) % code.moduli().1;
    let y = apply_burst(&x, Burst::new(5, 2).unwrap()).unwrap();
    let w = Interval::new(3, 6).unwrap();
    match cpb_decode(&y, n, w, &sums, &code) {
        Ok(z) => assert_ne!(z, x),
        Err(e) => assert!(matches!(e, burstdel::Error::NotDecodable(_))),
    }
}

#[test]
fn qary_code_round_trips_on_a_small_codebook() {
    // Binary rows of 4-ary words: row 1 dense and localizing, both rows
    // carrying block sums. Codewords are assembled from row classes.
    let (n, q, t, delta, p) = (12, 4, 2, 6, 7);
    let dp = DensityParams::with_delta(n, t, delta).unwrap();
    let code = block_code(p, t);
    let mut classes: HashMap<(u64, u64, BlockSums), Vec<Vec<u16>>> = HashMap::new();
    for w in enumerate_dense(&dp, 1 << 20).unwrap() {
        let (c0, c1) = loc_residues(&w, &dp).unwrap();
        classes
            .entry((c0, c1, code.sums(&w).unwrap()))
            .or_default()
            .push(w);
    }
    let ((c0, c1, s1), row1) = classes
        .into_iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))
        .unwrap();
    let mut r = rng();
    for x1 in &row1 {
        let x2 = random_bits(&mut r, n, 0.5);
        let params = CtbParams {
            n,
            q,
            t,
            delta,
            p,
            c0,
            c1,
            rows: vec![s1, code.sums(&x2).unwrap()],
        };
        params.validate().unwrap();
        let u: Vec<u16> = x1.iter().zip(&x2).map(|(a, b)| a + 2 * b).collect();
        assert!(params.member(&u, &code));
        assert_eq!(ctb_decode(&u, &params, &code).unwrap(), u);
        for len in 1..=t {
            for s in 1..=n + 1 - len {
                let y = apply_burst(&u, Burst::new(s, len).unwrap()).unwrap();
                assert_eq!(ctb_decode(&y, &params, &code).unwrap(), u);
            }
        }
    }
}

#[test]
fn qary_parameters_are_validated() {
    let sums = BlockSums {
        d1: 0,
        e1: 0,
        d2: 0,
        e2: 0,
    };
    let ok = CtbParams {
        n: 12,
        q: 4,
        t: 2,
        delta: 6,
        p: 7,
        c0: 0,
        c1: 0,
        rows: vec![sums; 2],
    };
    assert!(ok.validate().is_ok());
    assert!(CtbParams { q: 3, ..ok.clone() }.validate().is_err());
    assert!(CtbParams { p: 6, ..ok.clone() }.validate().is_err());
    assert!(CtbParams {
        rows: vec![sums],
        ..ok.clone()
    }
    .validate()
    .is_err());
    assert!(CtbParams { c0: 4, ..ok }.validate().is_err());
}
