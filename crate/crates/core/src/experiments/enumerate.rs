//! Enumeration, ranking and seeded sampling of ordered partitions.
//!
//! Partitions with a fixed size profile are ordered lexicographically by
//! their tuple of block masks (as integers). Rank `r` is unranked block by
//! block: the first block is the `r / rest`-th subset of its size among the
//! free positions in increasing mask order, and so on.

use std::fmt;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{OrderedPartition, RingSize, SubsetMask};
use crate::error::{Error, Result};

/// Largest population the enumeration and exhaustive sweeps accept.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// Block sizes of an ordered partition, in block order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SizeProfile {
    sizes: Vec<usize>,
}

impl SizeProfile {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            let n = sizes.iter().sum();
            return Err(Error::InvalidProfile { sizes, n });
        }
        Ok(SizeProfile { sizes })
    }

    #[inline]
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Fails unless the sizes sum to `N` and `N` fits a bitmask.
    pub fn check_ring(&self, ring: RingSize) -> Result<()> {
        ring.check_mask_width()?;
        if self.total() != ring.get() {
            return Err(Error::InvalidProfile {
                sizes: self.sizes.clone(),
                n: ring.get(),
            });
        }
        Ok(())
    }
}

/// Dash-joined, e.g. `4-3-3`.
impl fmt::Display for SizeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sizes.iter().enumerate() {
            if i > 0 {
                write!(f, "-")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SizeProfile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(['-', ','])
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidProfile {
                sizes: Vec::new(),
                n: 0,
            })?;
        SizeProfile::new(sizes)
    }
}

impl TryFrom<Vec<usize>> for SizeProfile {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        SizeProfile::new(v)
    }
}

impl From<SizeProfile> for Vec<usize> {
    fn from(p: SizeProfile) -> Self {
        p.sizes
    }
}

/// The near-equal three-part profile for `N`, larger parts first. For
/// `N = 6..=13` this is exactly the printed table column
/// (`2,2,2`, `3,2,2`, `3,3,2`, `3,3,3`, `4,3,3`, `4,4,3`, `4,4,4`, `5,4,4`).
pub fn profile_for_n(ring: RingSize) -> SizeProfile {
    let n = ring.get();
    let (q, r) = (n / 3, n % 3);
    let sizes: Vec<usize> = (0..3)
        .map(|i| q + usize::from(i < r))
        .filter(|&s| s > 0)
        .collect();
    SizeProfile { sizes }
}

/// `C(n, k)` in `u128`, saturating at `u128::MAX` on overflow.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `N! / (s_1! ⋯ s_K!)`, saturating at `u128::MAX`.
pub fn multinomial(sizes: &[usize]) -> u128 {
    let mut remaining: usize = sizes.iter().sum();
    let mut acc: u128 = 1;
    for &s in sizes {
        acc = match acc.checked_mul(binomial(remaining, s)) {
            Some(v) => v,
            None => return u128::MAX,
        };
        remaining -= s;
    }
    acc
}

/// Number of ordered partitions with the given profile.
pub fn population(profile: &SizeProfile) -> u128 {
    multinomial(profile.sizes())
}

/// The `rank`-th `k`-subset of `[0, m)` in increasing mask order (colex).
fn unrank_subset(mut rank: u128, m: usize, k: usize) -> u64 {
    let mut bits = 0u64;
    let mut hi = m;
    for i in (1..=k).rev() {
        // largest c < hi with C(c, i) ≤ rank
        let mut c = hi - 1;
        while binomial(c, i) > rank {
            c -= 1;
        }
        bits |= 1 << c;
        rank -= binomial(c, i);
        hi = c;
    }
    bits
}

/// Rank of a `k`-subset mask of `[0, m)` in colex order.
fn rank_subset(bits: u64) -> u128 {
    let mut rank = 0;
    let mut b = bits;
    let mut i = 1;
    while b != 0 {
        let c = b.trailing_zeros() as usize;
        rank += binomial(c, i);
        b &= b - 1;
        i += 1;
    }
    rank
}

/// Spread the low bits of `compressed` over the set bits of `free`, in order.
pub(crate) fn expand(compressed: u64, free: u64) -> u64 {
    let mut out = 0u64;
    let mut f = free;
    let mut c = compressed;
    while f != 0 && c != 0 {
        let low = f & f.wrapping_neg();
        if c & 1 == 1 {
            out |= low;
        }
        c >>= 1;
        f &= f - 1;
    }
    out
}

/// Inverse of [`expand`]: keep the bits of `mask` at the positions of `free`.
fn compress(mask: u64, free: u64) -> u64 {
    let mut out = 0u64;
    let mut f = free;
    let mut k = 0;
    while f != 0 {
        let low = f & f.wrapping_neg();
        if mask & low != 0 {
            out |= 1 << k;
        }
        k += 1;
        f &= f - 1;
    }
    out
}

/// The partition of rank `rank` in the enumeration order. Caller checks the range.
pub fn unrank_partition(ring: RingSize, profile: &SizeProfile, mut rank: u128) -> OrderedPartition {
    let sizes = profile.sizes();
    let mut free = ring.full_bits();
    let mut remaining = ring.get();
    let mut blocks = Vec::with_capacity(sizes.len());
    for (b, &s) in sizes.iter().enumerate() {
        let rest = multinomial(&sizes[b + 1..]);
        let local = rank / rest;
        rank %= rest;
        let bits = expand(unrank_subset(local, remaining, s), free);
        blocks.push(SubsetMask::from_bits_unchecked(ring, bits));
        free &= !bits;
        remaining -= s;
    }
    OrderedPartition::from_masks_unchecked(ring, blocks)
}

/// Position of `p` in the enumeration order of its own size profile.
pub fn rank_partition(p: &OrderedPartition) -> u128 {
    let sizes = p.sizes();
    let mut free = p.ring().full_bits();
    let mut rank = 0u128;
    for (b, block) in p.blocks().iter().enumerate() {
        let rest = multinomial(&sizes[b + 1..]);
        rank += rank_subset(compress(block.bits(), free)) * rest;
        free &= !block.bits();
    }
    rank
}

pub(crate) fn check_budget(what: &'static str, required: u128) -> Result<()> {
    if required > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            what,
            required,
            limit: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}

/// Every ordered partition with the given profile, each once, in increasing
/// `(mask_1, mask_2, …)` order.
pub fn enumerate_partitions(
    ring: RingSize,
    profile: &SizeProfile,
) -> Result<impl ExactSizeIterator<Item = OrderedPartition> + Clone> {
    profile.check_ring(ring)?;
    let total = population(profile);
    check_budget("partition enumeration", total)?;
    let profile = profile.clone();
    Ok((0..total as usize).map(move |r| unrank_partition(ring, &profile, r as u128)))
}

/// `count` distinct partitions drawn uniformly without replacement, in draw
/// order. The same seed always gives the same list.
pub fn sample_partitions(
    ring: RingSize,
    profile: &SizeProfile,
    count: usize,
    seed: u64,
) -> Result<Vec<OrderedPartition>> {
    profile.check_ring(ring)?;
    let total = population(profile);
    if count as u128 > total {
        return Err(Error::CountExceedsPopulation {
            count: count as u128,
            population: total,
        });
    }
    let length = usize::try_from(total).map_err(|_| Error::BudgetExceeded {
        what: "sampling population",
        required: total,
        limit: usize::MAX as u128,
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(index::sample(&mut rng, length, count)
        .into_iter()
        .map(|r| unrank_partition(ring, profile, r as u128))
        .collect())
}

/// Every ordered partition of the ring into `k` nonempty blocks, in
/// increasing order of the base-`k` label word `(label_0, …, label_{N-1})`
/// read with index 0 least significant.
pub fn all_partitions(ring: RingSize, k: usize) -> Result<Vec<OrderedPartition>> {
    ring.check_mask_width()?;
    let n = ring.get();
    if k == 0 {
        return Err(Error::ArityMismatch { left: 0, right: 1 });
    }
    let words = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    check_budget("labelings", words)?;
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    let mut masks = vec![0u64; k];
    loop {
        masks.iter_mut().for_each(|m| *m = 0);
        for (i, &l) in labels.iter().enumerate() {
            masks[l] |= 1 << i;
        }
        if masks.iter().all(|&m| m != 0) {
            let blocks = masks
                .iter()
                .map(|&m| SubsetMask::from_bits_unchecked(ring, m))
                .collect();
            out.push(OrderedPartition::from_masks_unchecked(ring, blocks));
        }
        // base-k increment
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(out);
            }
            labels[pos] += 1;
            if labels[pos] < k {
                break;
            }
            labels[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ring(n: usize) -> RingSize {
        RingSize::new(n).unwrap()
    }

    fn profile(s: &[usize]) -> SizeProfile {
        SizeProfile::new(s.to_vec()).unwrap()
    }

    #[test]
    fn population_sizes() {
        let count = |n, s: &[usize]| enumerate_partitions(ring(n), &profile(s)).unwrap().count();
        assert_eq!(count(6, &[2, 2, 2]), 90);
        assert_eq!(count(7, &[3, 2, 2]), 210);
        assert_eq!(count(8, &[3, 3, 2]), 560);
        assert_eq!(population(&profile(&[3, 3, 3])), 1680);
        assert_eq!(population(&profile(&[5, 4, 4])), 90090);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn enumeration_is_exhaustive_sorted_and_distinct() {
        let r = ring(7);
        let p = profile(&[3, 2, 2]);
        let all: Vec<_> = enumerate_partitions(r, &p).unwrap().collect();
        let keys: Vec<Vec<u64>> = all
            .iter()
            .map(|q| q.blocks().iter().map(|b| b.bits()).collect())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        for (i, q) in all.iter().enumerate() {
            assert_eq!(q.sizes(), vec![3, 2, 2]);
            assert_eq!(rank_partition(q), i as u128);
        }
        // brute-force count over labelings with the right block sizes
        let brute = all_partitions(r, 3)
            .unwrap()
            .into_iter()
            .filter(|q| q.sizes() == vec![3, 2, 2])
            .count();
        assert_eq!(brute, all.len());
    }

    #[test]
    fn budget_is_enforced() {
        let p = profile(&[5, 5, 5, 5]);
        assert!(matches!(
            enumerate_partitions(ring(20), &p),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            enumerate_partitions(ring(9), &profile(&[3, 3, 2])),
            Err(Error::InvalidProfile { .. })
        ));
    }

    #[test]
    fn sampling_is_seeded_and_distinct() {
        let r = ring(9);
        let p = profile(&[3, 3, 3]);
        let a = sample_partitions(r, &p, 300, 7).unwrap();
        let b = sample_partitions(r, &p, 300, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().collect::<HashSet<_>>().len(), 300);
        assert_ne!(a, sample_partitions(r, &p, 300, 8).unwrap());

        let small = profile(&[2, 2, 2]);
        let full = sample_partitions(ring(6), &small, 90, 1).unwrap();
        let set: HashSet<_> = full.into_iter().collect();
        let expected: HashSet<_> = enumerate_partitions(ring(6), &small).unwrap().collect();
        assert_eq!(set, expected);

        assert_eq!(
            sample_partitions(ring(6), &small, 300, 1).unwrap_err(),
            Error::CountExceedsPopulation {
                count: 300,
                population: 90
            }
        );
    }

    #[test]
    fn table_profiles() {
        let got: Vec<String> = (6..=13)
            .map(|n| profile_for_n(ring(n)).to_string())
            .collect();
        assert_eq!(
            got,
            ["2-2-2", "3-2-2", "3-3-2", "3-3-3", "4-3-3", "4-4-3", "4-4-4", "5-4-4"]
        );
        assert_eq!(profile_for_n(ring(2)).sizes(), &[1, 1]);
        assert_eq!("4-3-3".parse::<SizeProfile>().unwrap(), profile(&[4, 3, 3]));
        assert!("4-0-3".parse::<SizeProfile>().is_err());
    }

    #[test]
    fn all_partitions_counts() {
        // surjections onto k labels: k! S(n, k)
        assert_eq!(all_partitions(ring(9), 3).unwrap().len(), 18150);
        assert_eq!(all_partitions(ring(8), 4).unwrap().len(), 40824);
        assert_eq!(all_partitions(ring(4), 1).unwrap().len(), 1);
        assert_eq!(all_partitions(ring(2), 3).unwrap().len(), 0);
    }
}
