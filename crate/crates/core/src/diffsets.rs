//! Cyclic distances and difference multisets.
//!
//! Multisets are over folded distances `d(i, j) = min(N - |i-j|, |i-j|)`.
//! The counting is done on bitmasks: for a shift `d`, `popcount(rot(A, d) & B)`
//! is the number of ordered pairs `(u, v) ∈ A × B` with `v - u ≡ d (mod N)`.

use crate::domain::{same_ring, DistanceMultiset, RingSize, SubsetMask};
use crate::error::{Error, Result};

/// `d(i, j) = min{N - |i-j|, |i-j|}`.
pub fn cyclic_distance(ring: RingSize, i: usize, j: usize) -> Result<usize> {
    ring.check_index(i)?;
    ring.check_index(j)?;
    let diff = i.abs_diff(j);
    Ok(diff.min(ring.get() - diff))
}

/// Number of ordered pairs `(u, v) ∈ A × B` with `v - u ≡ shift (mod N)`.
#[inline]
pub(crate) fn directed_count(ring: RingSize, a: u64, b: u64, shift: usize) -> u32 {
    (ring.rotate_bits(a, shift) & b).count_ones()
}

/// Writes the multiplicities of `A - A` into `out` (length `floor(N/2) + 1`).
/// An empty `A` gives all zeros.
pub(crate) fn self_difference_into(ring: RingSize, a: u64, out: &mut [u32]) {
    let n = ring.get();
    out[0] = a.count_ones();
    for (d, slot) in out.iter_mut().enumerate().take(n / 2 + 1).skip(1) {
        let c = directed_count(ring, a, a, d);
        // at the antipode both orientations of each pair land on the same shift
        *slot = if 2 * d == n { c / 2 } else { c };
    }
}

/// Writes the multiplicities of `A - B` into `out`.
pub(crate) fn cross_difference_into(ring: RingSize, a: u64, b: u64, out: &mut [u32]) {
    let n = ring.get();
    out[0] = (a & b).count_ones();
    for (d, slot) in out.iter_mut().enumerate().take(n / 2 + 1).skip(1) {
        let forward = directed_count(ring, a, b, d);
        *slot = if 2 * d == n {
            forward
        } else {
            forward + directed_count(ring, a, b, n - d)
        };
    }
}

/// `A - A = { d(i, j) | i ≤ j ∈ A }`.
pub fn self_difference(a: &SubsetMask) -> Result<DistanceMultiset> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut m = DistanceMultiset::zero(a.ring());
    self_difference_into(a.ring(), a.bits(), m.multiplicities_mut());
    Ok(m)
}

/// `A - B = { d(i, j) | i ∈ A, j ∈ B }` over all ordered pairs.
pub fn cross_difference(a: &SubsetMask, b: &SubsetMask) -> Result<DistanceMultiset> {
    same_ring(a.ring(), b.ring())?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut m = DistanceMultiset::zero(a.ring());
    cross_difference_into(a.ring(), a.bits(), b.bits(), m.multiplicities_mut());
    Ok(m)
}

/// Pointwise sum of multiplicities. The empty sum is the zero multiset on `ring`.
pub fn multiset_sum(ring: RingSize, parts: &[DistanceMultiset]) -> Result<DistanceMultiset> {
    let mut total = DistanceMultiset::zero(ring);
    for m in parts {
        same_ring(ring, m.ring())?;
        for (t, &x) in total
            .multiplicities_mut()
            .iter_mut()
            .zip(m.multiplicities())
        {
            *t += x;
        }
    }
    Ok(total)
}

/// `[0, N-1] \ A`.
pub fn complement(a: &SubsetMask) -> SubsetMask {
    SubsetMask::from_bits_unchecked(a.ring(), !a.bits() & a.ring().full_bits())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> RingSize {
        RingSize::new(n).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(ring(n), xs.iter().copied()).unwrap()
    }

    fn ms(n: usize, mult: &[u32]) -> DistanceMultiset {
        DistanceMultiset::from_multiplicities(ring(n), mult.to_vec()).unwrap()
    }

    /// Pair enumeration straight from the definition.
    fn brute_self(n: usize, xs: &[usize]) -> Vec<u32> {
        let mut out = vec![0; n / 2 + 1];
        for (k, &i) in xs.iter().enumerate() {
            for &j in &xs[k..] {
                out[cyclic_distance(ring(n), i, j).unwrap()] += 1;
            }
        }
        out
    }

    #[test]
    fn distances_on_the_octagon() {
        assert_eq!(cyclic_distance(ring(8), 0, 5).unwrap(), 3);
        assert_eq!(cyclic_distance(ring(8), 1, 5).unwrap(), 4);
        for i in 0..8 {
            assert_eq!(cyclic_distance(ring(8), i, i).unwrap(), 0);
        }
        assert_eq!(
            cyclic_distance(ring(8), 0, 8).unwrap_err(),
            Error::IndexOutOfRange { index: 8, n: 8 }
        );
    }

    #[test]
    fn self_difference_examples() {
        // distances 1,3,4,2,3,1
        assert_eq!(
            self_difference(&set(8, &[2, 3, 5, 6])).unwrap(),
            ms(8, &[4, 2, 1, 2, 1])
        );
        assert_eq!(
            self_difference(&set(8, &[2, 5, 6, 7])).unwrap(),
            ms(8, &[4, 2, 1, 2, 1])
        );
        assert_eq!(brute_self(8, &[0, 1, 4, 7]), vec![4, 2, 1, 2, 1]);
        assert_eq!(
            self_difference(&set(8, &[0, 1, 4, 7])).unwrap(),
            ms(8, &[4, 2, 1, 2, 1])
        );
        assert_eq!(self_difference(&set(5, &[2])).unwrap(), ms(5, &[1, 0, 0]));
        assert_eq!(self_difference(&set(5, &[])).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn self_difference_matches_pair_enumeration() {
        for n in 1..=10usize {
            for bits in 1u64..(1 << n) {
                let a = SubsetMask::from_bits(ring(n), bits).unwrap();
                assert_eq!(
                    self_difference(&a).unwrap().multiplicities(),
                    &brute_self(n, &a.to_vec())[..],
                    "n={n} a={a}"
                );
            }
        }
    }

    #[test]
    fn cross_difference_examples() {
        assert_eq!(
            cross_difference(&set(8, &[2, 3]), &set(8, &[5, 6])).unwrap(),
            ms(8, &[0, 0, 1, 2, 1])
        );
        assert_eq!(
            cross_difference(&set(8, &[2, 5]), &set(8, &[6, 7])).unwrap(),
            ms(8, &[0, 1, 1, 1, 1])
        );
        assert_eq!(
            cross_difference(&set(6, &[0]), &set(6, &[3])).unwrap(),
            ms(6, &[0, 0, 0, 1])
        );
        assert_eq!(
            cross_difference(&set(6, &[0]), &set(7, &[3])).unwrap_err(),
            Error::RingMismatch { left: 6, right: 7 }
        );
    }

    #[test]
    fn cross_difference_matches_pair_enumeration() {
        let n = 9;
        for a in (1u64..(1 << n)).step_by(7) {
            for b in (1u64..(1 << n)).step_by(11) {
                let sa = SubsetMask::from_bits(ring(n), a).unwrap();
                let sb = SubsetMask::from_bits(ring(n), b).unwrap();
                let mut brute = vec![0u32; n / 2 + 1];
                for i in sa.iter() {
                    for j in sb.iter() {
                        brute[cyclic_distance(ring(n), i, j).unwrap()] += 1;
                    }
                }
                let got = cross_difference(&sa, &sb).unwrap();
                assert_eq!(got.multiplicities(), &brute[..]);
                assert_eq!(got.mass(), (sa.len() * sb.len()) as u64);
            }
        }
    }

    #[test]
    fn sums() {
        let r = ring(8);
        let total = multiset_sum(r, &[ms(8, &[2, 1, 0, 0, 0]), ms(8, &[2, 0, 0, 1, 0])]).unwrap();
        assert_eq!(total, ms(8, &[4, 1, 0, 1, 0]));
        assert_eq!(multiset_sum(r, &[]).unwrap(), DistanceMultiset::zero(r));
        assert!(multiset_sum(r, &[DistanceMultiset::zero(ring(9))]).is_err());
    }

    #[test]
    fn blockwise_differences_partition_the_full_ring() {
        let blocks = [set(8, &[0, 1, 4, 7]), set(8, &[2, 6]), set(8, &[3, 5])];
        let mut parts = Vec::new();
        for i in 0..blocks.len() {
            parts.push(self_difference(&blocks[i]).unwrap());
            for j in i + 1..blocks.len() {
                parts.push(cross_difference(&blocks[i], &blocks[j]).unwrap());
            }
        }
        let total = multiset_sum(ring(8), &parts).unwrap();
        assert_eq!(total.mass(), 8 + 28);
        assert_eq!(
            total,
            self_difference(&SubsetMask::full(ring(8)).unwrap()).unwrap()
        );
    }

    #[test]
    fn complements() {
        assert_eq!(complement(&set(8, &[0, 1, 4, 7])), set(8, &[2, 3, 5, 6]));
        assert_eq!(complement(&set(8, &[0, 1, 3, 4])), set(8, &[2, 5, 6, 7]));
        let a = set(11, &[1, 5, 9]);
        assert_eq!(complement(&complement(&a)), a);
        assert_eq!(complement(&SubsetMask::full(ring(64)).unwrap()).bits(), 0);
    }
}
