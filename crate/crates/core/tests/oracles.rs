//! Independent recomputations of library results: pair loops instead of
//! bucketing, explicit orbit sets instead of canonical forms, textbook DFTs.

use std::collections::{HashMap, HashSet};

use homometry_lab::classify::{classify_pair, verify_partition_homometry, PairClass, VerifyMode};
use homometry_lab::diffsets::cyclic_distance;
use homometry_lab::dihedral::{apply_partition, apply_subset, elements};
use homometry_lab::experiments::{all_partitions, enumerate_partitions, profile_for_n, run_table1};
use homometry_lab::spectral::{
    autocorr_form, autocorrelation, dft, forms_equal, numeric_collision_check, power_spectrum,
    random_alphabet,
};
use homometry_lab::{Alphabet, OrderedPartition, RingSize, Signal, SubsetMask};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ring(n: usize) -> RingSize {
    RingSize::new(n).unwrap()
}

/// Multiplicities of `A_i - A_j`, `i ≤ j`, from the distance definition.
fn brute_homometry_key(p: &OrderedPartition) -> Vec<u32> {
    let n = p.ring().get();
    let blocks: Vec<Vec<usize>> = p.to_index_lists();
    let mut key = Vec::new();
    for i in 0..blocks.len() {
        for j in i..blocks.len() {
            let mut mult = vec![0u32; n / 2 + 1];
            for (x, &a) in blocks[i].iter().enumerate() {
                let others: &[usize] = if i == j { &blocks[i][x..] } else { &blocks[j] };
                for &b in others {
                    mult[cyclic_distance(p.ring(), a, b).unwrap()] += 1;
                }
            }
            key.extend(mult);
        }
    }
    key
}

/// Number of positions `t` with `t ∈ A_i`, `t + lag ∈ A_j`, for all lags and
/// ordered block pairs.
fn brute_directed_counts(p: &OrderedPartition) -> Vec<u32> {
    let n = p.ring().get();
    let k = p.k();
    let label: Vec<usize> = (0..n).map(|t| p.block_of(t).unwrap()).collect();
    let mut out = vec![0u32; n * k * k];
    for lag in 0..n {
        for t in 0..n {
            out[(lag * k + label[t]) * k + label[(t + lag) % n]] += 1;
        }
    }
    out
}

fn orbit(p: &OrderedPartition) -> HashSet<OrderedPartition> {
    elements(p.ring()).map(|g| apply_partition(g, p)).collect()
}

fn block_orbit(a: &SubsetMask) -> HashSet<SubsetMask> {
    elements(a.ring()).map(|g| apply_subset(g, a)).collect()
}

/// Σ over dihedral orbits of C(|orbit|, 2), orbits found as explicit image sets.
fn orbit_count_equivalent_pairs(parts: &[OrderedPartition]) -> u64 {
    let mut seen: HashSet<OrderedPartition> = HashSet::new();
    let mut total = 0u64;
    for p in parts {
        if seen.contains(p) {
            continue;
        }
        let o = orbit(p);
        let m = o.len() as u64;
        total += m * (m - 1) / 2;
        seen.extend(o);
    }
    total
}

#[derive(Debug, Default, PartialEq, Eq)]
struct Counts {
    equivalent: u64,
    pseudo_only: u64,
    homometric_only: u64,
}

/// Plain pair loop with explicit orbits and distance-definition keys.
fn brute_table(parts: &[OrderedPartition]) -> Counts {
    let keys: Vec<Vec<u32>> = parts.iter().map(brute_homometry_key).collect();
    let orbits: Vec<HashSet<OrderedPartition>> = parts.iter().map(orbit).collect();
    let block_orbits: Vec<Vec<HashSet<SubsetMask>>> = parts
        .iter()
        .map(|p| p.blocks().iter().map(block_orbit).collect())
        .collect();
    let mut c = Counts::default();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if keys[i] != keys[j] {
                continue;
            }
            if orbits[i].contains(&parts[j]) {
                c.equivalent += 1;
            } else if parts[j]
                .blocks()
                .iter()
                .zip(&block_orbits[i])
                .all(|(b, o)| o.contains(b))
            {
                c.pseudo_only += 1;
            } else {
                c.homometric_only += 1;
            }
        }
    }
    c
}

#[test]
fn orbit_counting_reproduces_small_rows() {
    for (n, expected) in [(6, 369), (7, 1218)] {
        let r = ring(n);
        let parts: Vec<_> = enumerate_partitions(r, &profile_for_n(r))
            .unwrap()
            .collect();
        assert_eq!(orbit_count_equivalent_pairs(&parts), expected, "n={n}");
        let report = run_table1(r, &profile_for_n(r), VerifyMode::Exhaustive, None).unwrap();
        assert_eq!(report.equivalent_pairs, expected);
        assert_eq!(report.pseudo_only_pairs, 0);
        assert_eq!(report.total_homometric, expected);
    }
}

#[test]
fn exhaustive_rows_match_the_pair_loop() {
    for n in 6..=9 {
        let r = ring(n);
        let profile = profile_for_n(r);
        let parts: Vec<_> = enumerate_partitions(r, &profile).unwrap().collect();
        let oracle = brute_table(&parts);
        assert_eq!(
            oracle.equivalent,
            orbit_count_equivalent_pairs(&parts),
            "n={n}"
        );
        let report = run_table1(r, &profile, VerifyMode::Exhaustive, Some(2)).unwrap();
        assert_eq!(
            (
                report.equivalent_pairs,
                report.pseudo_only_pairs,
                report.homometric_only_pairs
            ),
            (
                oracle.equivalent,
                oracle.pseudo_only,
                oracle.homometric_only
            ),
            "n={n}"
        );
    }
}

#[test]
fn pinned_exhaustive_rows() {
    let expected = [(8, [4008, 256, 0, 4264]), (9, [14244, 2916, 0, 17160])];
    for (n, row) in expected {
        let r = ring(n);
        let rep = run_table1(r, &profile_for_n(r), VerifyMode::Exhaustive, None).unwrap();
        assert_eq!(
            [
                rep.equivalent_pairs,
                rep.pseudo_only_pairs,
                rep.homometric_only_pairs,
                rep.total_homometric
            ],
            row,
            "n={n}"
        );
    }
}

#[test]
fn two_blocks_never_give_pseudo_only() {
    // σ(A) = B forces σ(A^c) = B^c, so blockwise equivalence is equivalence.
    let mut homometric_only = 0;
    for n in 2..=10 {
        let parts = all_partitions(ring(n), 2).unwrap();
        let keys: Vec<Vec<u32>> = parts.iter().map(brute_homometry_key).collect();
        let mut by_key: HashMap<&[u32], Vec<usize>> = HashMap::new();
        for (i, k) in keys.iter().enumerate() {
            by_key.entry(k).or_default().push(i);
        }
        for members in by_key.values() {
            for (x, &i) in members.iter().enumerate() {
                for &j in &members[x + 1..] {
                    let class = classify_pair(&parts[i], &parts[j]).unwrap().class;
                    assert_ne!(class, PairClass::PseudoOnly, "{} vs {}", parts[i], parts[j]);
                    assert_ne!(class, PairClass::NotHomometric);
                    homometric_only += (class == PairClass::HomometricOnly) as u32;
                }
            }
        }
    }
    // ({0,1,4,7}, rest) vs ({0,1,3,4}, rest) and friends exist from N = 8 on
    assert!(homometric_only > 0);
}

/// Equal forms ⟺ homometric partitions over all ordered partitions into
/// `k ≤ 3` nonempty blocks, `N ≤ 8`, via directed lag counts counted
/// position by position.
#[test]
fn forms_decide_homometry_exhaustively() {
    for n in 2..=8 {
        for k in 1..=3.min(n) {
            let parts = all_partitions(ring(n), k).unwrap();
            let mut class_of_form: HashMap<Vec<u32>, usize> = HashMap::new();
            let mut class_of_key: HashMap<Vec<u32>, usize> = HashMap::new();
            let mut pairing: HashMap<usize, usize> = HashMap::new();
            let mut reverse: HashMap<usize, usize> = HashMap::new();
            for p in &parts {
                let directed = brute_directed_counts(p);
                // the form only sees c^{ij} + c^{ji}
                let mut symmetric = Vec::new();
                for lag in 0..n {
                    for i in 0..k {
                        for j in i..k {
                            let c = |a: usize, b: usize| directed[(lag * k + a) * k + b];
                            symmetric.push(if i == j { c(i, i) } else { c(i, j) + c(j, i) });
                        }
                    }
                }
                let next = class_of_form.len();
                let f = *class_of_form.entry(symmetric).or_insert(next);
                let next = class_of_key.len();
                let h = *class_of_key.entry(brute_homometry_key(p)).or_insert(next);
                assert_eq!(*pairing.entry(f).or_insert(h), h, "n={n} k={k} {p}");
                assert_eq!(*reverse.entry(h).or_insert(f), f, "n={n} k={k} {p}");
            }
            assert!(verify_partition_homometry(ring(n), k).unwrap().passed());
        }
    }
}

#[test]
fn library_forms_match_directed_counts() {
    for n in [5, 6, 8] {
        for p in all_partitions(ring(n), 3).unwrap() {
            let f = autocorr_form(&p);
            let directed = brute_directed_counts(&p);
            for lag in 0..n {
                for i in 0..3 {
                    for j in i..3 {
                        let c = |a: usize, b: usize| directed[(lag * 3 + a) * 3 + b];
                        let expected = if i == j { c(i, i) } else { c(i, j) + c(j, i) };
                        assert_eq!(
                            f.coefficient(lag, i, j),
                            expected,
                            "{p} lag {lag} ({i},{j})"
                        );
                    }
                }
            }
        }
    }
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize, k: usize) -> OrderedPartition {
    let mut blocks = vec![Vec::new(); k];
    for t in 0..n {
        blocks[rng.gen_range(0..k)].push(t);
    }
    OrderedPartition::new_allow_empty(ring(n), &blocks).unwrap()
}

#[test]
fn generic_alphabets_never_collide() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut trials = 0;
    while trials < 1000 {
        let n = rng.gen_range(3..=12);
        let k = rng.gen_range(2..=4);
        let p = random_partition(&mut rng, n, k);
        let q = random_partition(&mut rng, n, k);
        if forms_equal(&autocorr_form(&p), &autocorr_form(&q)).unwrap() {
            continue;
        }
        let alphabet = random_alphabet(k, &mut rng);
        assert!(
            !numeric_collision_check(&p, &q, &alphabet, 1e-9).unwrap(),
            "{p} vs {q} at {alphabet:?}"
        );
        trials += 1;
    }
}

/// Real roots of `a + b t + c t^2`; `None` when every coefficient vanishes.
fn roots(a: f64, b: f64, c: f64) -> Option<Vec<f64>> {
    if c == 0.0 {
        if b == 0.0 {
            return if a == 0.0 { None } else { Some(vec![]) };
        }
        return Some(vec![-a / b]);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Some(vec![]);
    }
    let s = disc.sqrt();
    Some(vec![(-b + s) / (2.0 * c), (-b - s) / (2.0 * c)])
}

/// Two-letter partitions with different forms, and a ratio `t = β/α ≠ 1`
/// at which `Δm α² + Δp αβ + Δn β²` vanishes at every lag.
fn find_non_generic_collision() -> Option<(OrderedPartition, OrderedPartition, f64)> {
    for n in 3..=8 {
        let parts = all_partitions(ring(n), 2).unwrap();
        for p in &parts {
            for q in &parts {
                let (f, g) = (autocorr_form(p), autocorr_form(q));
                if forms_equal(&f, &g).unwrap() {
                    continue;
                }
                let mut candidates: Option<Vec<f64>> = None;
                for lag in 0..n {
                    let d =
                        |i, j| f.coefficient(lag, i, j) as f64 - g.coefficient(lag, i, j) as f64;
                    let Some(rs) = roots(d(0, 0), d(0, 1), d(1, 1)) else {
                        continue;
                    };
                    candidates = Some(match candidates {
                        None => rs,
                        Some(prev) => prev
                            .into_iter()
                            .filter(|t| rs.iter().any(|r| (r - t).abs() < 1e-12))
                            .collect(),
                    });
                }
                if let Some(t) = candidates
                    .unwrap_or_default()
                    .into_iter()
                    .find(|t| (t - 1.0).abs() > 1e-9)
                {
                    return Some((p.clone(), q.clone(), t));
                }
            }
        }
    }
    None
}

#[test]
fn crafted_alphabet_collides() {
    let (p, q, t) = find_non_generic_collision().expect("some pair collides on a special alphabet");
    assert!(!forms_equal(&autocorr_form(&p), &autocorr_form(&q)).unwrap());
    let alphabet = Alphabet::new(vec![1.0, t]).unwrap();
    assert!(
        numeric_collision_check(&p, &q, &alphabet, 1e-9).unwrap(),
        "{p} vs {q}, t = {t}"
    );
    // a generic alphabet separates the same pair
    let generic = Alphabet::new(vec![0.3141, 0.7718]).unwrap();
    assert!(!numeric_collision_check(&p, &q, &generic, 1e-9).unwrap());
}

#[test]
fn sign_flip_is_a_collision() {
    // x and -x share an autocorrelation, so swapping the blocks of a
    // ±1 signal collides whenever the blocks are not homometric
    let n = ring(7);
    let p = OrderedPartition::parse(n, "0,2|1,3,4,5,6").unwrap();
    let q = OrderedPartition::parse(n, "1,3,4,5,6|0,2").unwrap();
    assert_eq!(
        classify_pair(&p, &q).unwrap().class,
        PairClass::NotHomometric
    );
    let pm = Alphabet::new(vec![1.0, -1.0]).unwrap();
    assert!(numeric_collision_check(&p, &q, &pm, 1e-9).unwrap());
}

fn textbook_power_spectrum(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, &v) in x.iter().enumerate() {
                let phase = -2.0 * std::f64::consts::PI * ((k * t) % n) as f64 / n as f64;
                re += v * phase.cos();
                im += v * phase.sin();
            }
            re * re + im * im
        })
        .collect()
}

#[test]
fn autocorrelation_transform_is_the_power_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let n = rng.gen_range(4..=32);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let expected = textbook_power_spectrum(&values);
        let x = Signal::new(values).unwrap();
        let transformed = dft(&autocorrelation(&x));
        for ((z, p), e) in transformed.iter().zip(power_spectrum(&x)).zip(&expected) {
            assert!(
                (z.re - e).abs() <= 1e-9 && z.im.abs() <= 1e-9,
                "n={n}: {z} vs {e}"
            );
            assert!((p - e).abs() <= 1e-9);
        }
    }
}
