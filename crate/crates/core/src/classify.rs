//! Homometry of subsets and ordered partitions, the equivalent /
//! pseudo-equivalent / homometric taxonomy of partition pairs, and exhaustive
//! verifiers for the structural theorems about them.
//!
//! The verifiers never loop over pairs. Each checks that two relations agree
//! on a population, and both relations are key equality (difference
//! multisets, coefficient forms, canonical orbit representatives), so the
//! comparison is done by grouping; see [`crate::relation`].

use std::collections::BTreeMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffsets::{complement, cross_difference_into, self_difference_into};
use crate::dihedral::{
    self, are_equivalent_partitions, are_pseudo_equivalent, canonical_partition,
};
use crate::domain::{same_ring, OrderedPartition, RingSize, SubsetMask};
use crate::error::{Error, Result};
use crate::experiments::enumerate::{all_partitions, check_budget, expand};
use crate::relation::{classes, compare_relations, RelationComparison};
use crate::spectral::{autocorr_form, numeric_collision_check, random_alphabet};

/// Tag carried by every JSON document this crate emits.
pub const SCHEMA: &str = "homometry-lab/v1";

/// Largest ring the exhaustive Patterson sweep accepts.
pub const PATTERSON_EXHAUSTIVE_MAX_N: usize = 14;

/// Largest ring the exhaustive two-letter sweep accepts.
pub const TWO_ALPHABET_MAX_N: usize = 12;

/// Disagreeing pairs listed per report; the count is always complete.
const MAX_LISTED_VIOLATIONS: usize = 32;

/// Numeric tolerance for autocorrelation comparisons in the verifiers.
pub const NUMERIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PairClass {
    /// One dihedral element maps every block onto its counterpart.
    Equivalent,
    /// Homometric, blockwise equivalent with separate elements, not equivalent.
    PseudoOnly,
    /// Homometric but neither equivalent nor pseudo-equivalent.
    HomometricOnly,
    NotHomometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairTaxonomy {
    pub homometric: bool,
    pub class: PairClass,
}

/// Concatenated multiplicity vectors of `A_1 - A_1, …, A_K - A_K`.
pub(crate) fn self_difference_key(p: &OrderedPartition) -> Vec<u32> {
    let ring = p.ring();
    let width = ring.max_distance() + 1;
    let mut key = vec![0u32; width * p.k()];
    for (block, out) in p.blocks().iter().zip(key.chunks_mut(width)) {
        self_difference_into(ring, block.bits(), out);
    }
    key
}

/// Concatenated multiplicity vectors of `A_i - A_j` for all `i ≤ j`. Two
/// partitions with the same `K` are homometric exactly when these agree.
pub(crate) fn homometry_key(p: &OrderedPartition) -> Vec<u32> {
    let ring = p.ring();
    let k = p.k();
    let width = ring.max_distance() + 1;
    let mut key = vec![0u32; width * k * (k + 1) / 2];
    let mut chunks = key.chunks_mut(width);
    for i in 0..k {
        let a = p.block(i).bits();
        self_difference_into(ring, a, chunks.next().unwrap());
        for j in i + 1..k {
            cross_difference_into(ring, a, p.block(j).bits(), chunks.next().unwrap());
        }
    }
    key
}

fn subset_key(ring: RingSize, bits: u64) -> Vec<u32> {
    let mut key = vec![0u32; ring.max_distance() + 1];
    self_difference_into(ring, bits, &mut key);
    key
}

/// `A - A = B - B`. Empty sets are homometric only to each other.
pub fn homometric_subsets(a: &SubsetMask, b: &SubsetMask) -> Result<bool> {
    same_ring(a.ring(), b.ring())?;
    Ok(subset_key(a.ring(), a.bits()) == subset_key(b.ring(), b.bits()))
}

fn check_arity(p: &OrderedPartition, q: &OrderedPartition) -> Result<()> {
    same_ring(p.ring(), q.ring())?;
    if p.k() != q.k() {
        return Err(Error::ArityMismatch {
            left: p.k(),
            right: q.k(),
        });
    }
    Ok(())
}

/// `A_i - A_j = B_i - B_j` for every `i ≤ j`.
pub fn homometric_partitions(p: &OrderedPartition, q: &OrderedPartition) -> Result<bool> {
    check_arity(p, q)?;
    Ok(homometry_key(p) == homometry_key(q))
}

/// Homometric? then equivalent? then pseudo-equivalent?
pub fn classify_pair(p: &OrderedPartition, q: &OrderedPartition) -> Result<PairTaxonomy> {
    if !homometric_partitions(p, q)? {
        return Ok(PairTaxonomy {
            homometric: false,
            class: PairClass::NotHomometric,
        });
    }
    let class = if are_equivalent_partitions(p, q)?.is_some() {
        PairClass::Equivalent
    } else if are_pseudo_equivalent(p, q)?.is_some() {
        PairClass::PseudoOnly
    } else {
        PairClass::HomometricOnly
    };
    Ok(PairTaxonomy {
        homometric: true,
        class,
    })
}

/// How a verifier covers its population.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

/// One pair on which the two sides of a claimed equivalence disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub left: String,
    pub right: String,
}

/// Result of a verifier sweep. `violation_count` is exact; `violations`
/// lists at most a few representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub theorem: String,
    pub n: usize,
    pub k: Option<usize>,
    pub mode: String,
    pub seed: Option<u64>,
    pub checked: u64,
    pub counts: BTreeMap<String, u64>,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    fn new(theorem: &str, ring: RingSize, k: Option<usize>, mode: VerifyMode) -> Self {
        VerifyReport {
            schema: SCHEMA.to_string(),
            theorem: theorem.to_string(),
            n: ring.get(),
            k,
            mode: match mode {
                VerifyMode::Exhaustive => "exhaustive".to_string(),
                VerifyMode::Sampled { .. } => "sampled".to_string(),
            },
            seed: match mode {
                VerifyMode::Exhaustive => None,
                VerifyMode::Sampled { seed, .. } => Some(seed),
            },
            checked: 0,
            counts: BTreeMap::new(),
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    fn push(&mut self, kind: &str, left: String, right: String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_LISTED_VIOLATIONS {
            self.violations.push(Violation {
                kind: kind.to_string(),
                left,
                right,
            });
        }
    }

    /// Fold a relation comparison in under `kind`; `render` names item `i`.
    fn absorb(&mut self, kind: &str, cmp: &RelationComparison, render: impl Fn(usize) -> String) {
        self.counts
            .insert(format!("{kind}: left related"), cmp.left_related);
        self.counts
            .insert(format!("{kind}: right related"), cmp.right_related);
        self.violation_count += cmp.disagreements;
        for &(i, j) in &cmp.examples {
            if self.violations.len() >= MAX_LISTED_VIOLATIONS {
                break;
            }
            self.violations.push(Violation {
                kind: kind.to_string(),
                left: render(i),
                right: render(j),
            });
        }
    }
}

/// Two subsets are homometric iff their complements are. Exhaustive mode
/// covers every pair of subsets of `[0, N-1]` (`N ≤ 14`); sampled mode draws
/// pairs `(A, B)` of equal size, every other one with `B` a random dihedral
/// image of `A`.
pub fn verify_patterson(ring: RingSize, mode: VerifyMode) -> Result<VerifyReport> {
    ring.check_mask_width()?;
    let mut report = VerifyReport::new("patterson", ring, None, mode);
    let full = ring.full_bits();
    match mode {
        VerifyMode::Exhaustive => {
            if ring.get() > PATTERSON_EXHAUSTIVE_MAX_N {
                return Err(Error::BudgetExceeded {
                    what: "exhaustive Patterson sweep ring size",
                    required: ring.get() as u128,
                    limit: PATTERSON_EXHAUSTIVE_MAX_N as u128,
                });
            }
            let subsets: Vec<u64> = (0..=full).collect();
            let own: Vec<Vec<u32>> = subsets.par_iter().map(|&a| subset_key(ring, a)).collect();
            let comp: Vec<Vec<u32>> = subsets
                .par_iter()
                .map(|&a| subset_key(ring, !a & full))
                .collect();
            let cmp = compare_relations(&own, &comp, MAX_LISTED_VIOLATIONS);
            report.checked = cmp.pairs;
            report.counts.insert("subsets".into(), subsets.len() as u64);
            report.absorb("homometric<=>complements homometric", &cmp, |i| {
                SubsetMask::from_bits_unchecked(ring, subsets[i]).to_string()
            });
        }
        VerifyMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = ring.get();
            let mut homometric = 0;
            for t in 0..count {
                let a: u64 = rng.gen::<u64>() & full;
                let b = if t % 2 == 0 {
                    let g = crate::domain::DihedralElement {
                        reflect: rng.gen(),
                        shift: rng.gen_range(0..n),
                    };
                    dihedral::apply_bits(g, a, ring)
                } else {
                    index::sample(&mut rng, n, a.count_ones() as usize)
                        .into_iter()
                        .fold(0u64, |m, i| m | 1 << i)
                };
                let direct = subset_key(ring, a) == subset_key(ring, b);
                let complements = subset_key(ring, !a & full) == subset_key(ring, !b & full);
                homometric += direct as u64;
                if direct != complements {
                    report.push(
                        "homometric<=>complements homometric",
                        SubsetMask::from_bits_unchecked(ring, a).to_string(),
                        SubsetMask::from_bits_unchecked(ring, b).to_string(),
                    );
                }
            }
            report.checked = count as u64;
            report.counts.insert("homometric pairs".into(), homometric);
        }
    }
    Ok(report)
}

/// Two-letter signals: for every pair of ordered 2-block partitions (both
/// blocks nonempty), check that (i) equal coefficient forms, (ii) homometric
/// first blocks, (iii) homometric second blocks and (iv) homometric
/// partitions all coincide. On top, `trials` seeded numeric draws compare the
/// realized autocorrelations at random letters in `(0, 1)` against (i).
pub fn verify_two_alphabet_theorem(
    ring: RingSize,
    trials: usize,
    seed: u64,
) -> Result<VerifyReport> {
    ring.check_mask_width()?;
    let mode = VerifyMode::Exhaustive;
    let mut report = VerifyReport::new("two-alphabet", ring, Some(2), mode);
    if ring.get() > TWO_ALPHABET_MAX_N {
        return Err(Error::BudgetExceeded {
            what: "two-letter sweep ring size",
            required: ring.get() as u128,
            limit: TWO_ALPHABET_MAX_N as u128,
        });
    }
    let full = ring.full_bits();
    let parts: Vec<OrderedPartition> = (1..full)
        .map(|a| {
            let first = SubsetMask::from_bits_unchecked(ring, a);
            OrderedPartition::from_masks_unchecked(ring, vec![first, complement(&first)])
        })
        .collect();

    let forms: Vec<Vec<u32>> = parts
        .par_iter()
        .map(|p| autocorr_form(p).coefficients().to_vec())
        .collect();
    let first: Vec<Vec<u32>> = parts
        .par_iter()
        .map(|p| subset_key(ring, p.block(0).bits()))
        .collect();
    let second: Vec<Vec<u32>> = parts
        .par_iter()
        .map(|p| subset_key(ring, p.block(1).bits()))
        .collect();
    let whole: Vec<Vec<u32>> = parts.par_iter().map(homometry_key).collect();

    let render = |i: usize| parts[i].to_string();
    let cmp = compare_relations(&forms, &whole, MAX_LISTED_VIOLATIONS);
    report.checked = cmp.pairs;
    report.absorb("(i)<=>(iv)", &cmp, render);
    report.absorb(
        "(ii)<=>(iv)",
        &compare_relations(&first, &whole, MAX_LISTED_VIOLATIONS),
        render,
    );
    report.absorb(
        "(iii)<=>(iv)",
        &compare_relations(&second, &whole, MAX_LISTED_VIOLATIONS),
        render,
    );
    report
        .counts
        .insert("partitions".into(), parts.len() as u64);

    if !parts.is_empty() && trials > 0 {
        let homometric_classes = classes(&whole);
        let mut class_of = vec![0usize; parts.len()];
        for (c, members) in homometric_classes.iter().enumerate() {
            for &i in members {
                class_of[i] = c;
            }
        }
        report.seed = Some(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut collisions = 0;
        for t in 0..trials {
            let i = rng.gen_range(0..parts.len());
            let j = if t % 2 == 0 {
                let members = &homometric_classes[class_of[i]];
                members[rng.gen_range(0..members.len())]
            } else {
                rng.gen_range(0..parts.len())
            };
            let alphabet = random_alphabet(2, &mut rng);
            let numeric = numeric_collision_check(&parts[i], &parts[j], &alphabet, NUMERIC_TOL)?;
            collisions += numeric as u64;
            if numeric != (forms[i] == forms[j]) {
                report.push("numeric<=>(i)", render(i), render(j));
            }
        }
        report.counts.insert("numeric trials".into(), trials as u64);
        report
            .counts
            .insert("numeric collisions".into(), collisions);
    }
    Ok(report)
}

/// Equal coefficient forms ⟺ homometric partitions, over every ordered
/// partition of the ring into `k` nonempty blocks.
pub fn verify_partition_homometry(ring: RingSize, k: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("forms", ring, Some(k), VerifyMode::Exhaustive);
    let parts = all_partitions(ring, k)?;
    let forms: Vec<Vec<u32>> = parts
        .par_iter()
        .map(|p| autocorr_form(p).coefficients().to_vec())
        .collect();
    let whole: Vec<Vec<u32>> = parts.par_iter().map(homometry_key).collect();
    let cmp = compare_relations(&forms, &whole, MAX_LISTED_VIOLATIONS);
    report.checked = cmp.pairs;
    report
        .counts
        .insert("partitions".into(), parts.len() as u64);
    report.absorb("forms equal<=>homometric", &cmp, |i| parts[i].to_string());
    Ok(report)
}

/// With the first letter fixed at zero the autocorrelation still pins down
/// the whole form: over every ordered partition into `k ≥ 2` nonempty blocks,
/// equal restricted forms ⟺ equal full forms.
pub fn verify_sparse_theorem(ring: RingSize, k: usize) -> Result<VerifyReport> {
    if k < 2 {
        return Err(Error::ArityMismatch { left: k, right: 2 });
    }
    let mut report = VerifyReport::new("sparse", ring, Some(k), VerifyMode::Exhaustive);
    let parts = all_partitions(ring, k)?;
    let (full, sparse): (Vec<Vec<u32>>, Vec<Vec<u32>>) = parts
        .par_iter()
        .map(|p| {
            let f = autocorr_form(p);
            (f.coefficients().to_vec(), f.sparse_coefficients())
        })
        .unzip();
    let cmp = compare_relations(&sparse, &full, MAX_LISTED_VIOLATIONS);
    report.checked = cmp.pairs;
    report
        .counts
        .insert("partitions".into(), parts.len() as u64);
    report
        .counts
        .insert("homometric pairs".into(), cmp.right_related);
    report.absorb("sparse forms equal<=>forms equal", &cmp, |i| {
        parts[i].to_string()
    });
    Ok(report)
}

/// Partitions `(rest, {a_1}, …, {a_k})` of `N - k, 1, …, 1` shape:
/// homometric ⟺ equivalent, over every ordered `k`-tuple of distinct indices.
pub fn verify_singletons_proposition(ring: RingSize, k: usize) -> Result<VerifyReport> {
    ring.check_mask_width()?;
    let n = ring.get();
    if k == 0 || k >= n {
        return Err(Error::ArityMismatch { left: k, right: n });
    }
    check_budget(
        "singleton tuples N^K",
        (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX),
    )?;
    let mut report = VerifyReport::new("singletons", ring, Some(k), VerifyMode::Exhaustive);

    let mut parts = Vec::new();
    let mut tuple = Vec::with_capacity(k);
    singleton_tuples(ring, k, &mut tuple, &mut parts);

    let whole: Vec<Vec<u32>> = parts.par_iter().map(homometry_key).collect();
    let orbit: Vec<Vec<u64>> = parts.par_iter().map(canonical_partition).collect();
    let cmp = compare_relations(&whole, &orbit, MAX_LISTED_VIOLATIONS);
    report.checked = cmp.pairs;
    report
        .counts
        .insert("partitions".into(), parts.len() as u64);
    report
        .counts
        .insert("equivalent pairs".into(), cmp.right_related);
    report.absorb("homometric<=>equivalent", &cmp, |i| parts[i].to_string());
    Ok(report)
}

fn singleton_tuples(
    ring: RingSize,
    k: usize,
    tuple: &mut Vec<usize>,
    out: &mut Vec<OrderedPartition>,
) {
    if tuple.len() == k {
        let used = tuple.iter().fold(0u64, |m, &i| m | 1 << i);
        let mut blocks = vec![SubsetMask::from_bits_unchecked(
            ring,
            ring.full_bits() & !used,
        )];
        blocks.extend(
            tuple
                .iter()
                .map(|&i| SubsetMask::from_bits_unchecked(ring, 1 << i)),
        );
        out.push(OrderedPartition::from_masks_unchecked(ring, blocks));
        return;
    }
    for i in 0..ring.get() {
        if !tuple.contains(&i) {
            tuple.push(i);
            singleton_tuples(ring, k, tuple, out);
            tuple.pop();
        }
    }
}

/// A homometric pair found by [`homometric_refinements`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefinedPair {
    pub left: OrderedPartition,
    pub right: OrderedPartition,
    pub class: PairClass,
}

/// Fix a first block on each side, split the remaining indices into `parts`
/// nonempty ordered blocks in every possible way, and report each
/// homometric pair `(head, B_1, …)` vs `(head_alt, B'_1, …)`.
pub fn homometric_refinements(
    head: &SubsetMask,
    head_alt: &SubsetMask,
    parts: usize,
) -> Result<Vec<RefinedPair>> {
    same_ring(head.ring(), head_alt.ring())?;
    let left = refinements(head, parts)?;
    let right = refinements(head_alt, parts)?;
    let mut out = Vec::new();
    for p in &left {
        for q in &right {
            let t = classify_pair(p, q)?;
            if t.homometric {
                out.push(RefinedPair {
                    left: p.clone(),
                    right: q.clone(),
                    class: t.class,
                });
            }
        }
    }
    Ok(out)
}

/// Every ordered partition `(head, B_1, …, B_parts)` with nonempty `B_i`.
pub fn refinements(head: &SubsetMask, parts: usize) -> Result<Vec<OrderedPartition>> {
    let ring = head.ring();
    let rest = complement(head);
    if rest.is_empty() {
        return Ok(Vec::new());
    }
    let local = RingSize::new(rest.len())?;
    Ok(all_partitions(local, parts)?
        .into_iter()
        .map(|split| {
            let mut blocks = vec![*head];
            blocks.extend(
                split
                    .blocks()
                    .iter()
                    .map(|b| SubsetMask::from_bits_unchecked(ring, expand(b.bits(), rest.bits()))),
            );
            OrderedPartition::from_masks_unchecked(ring, blocks)
        })
        .collect())
}
