//! The action of the dihedral group `D_2N` on indices, subsets and ordered
//! partitions.
//!
//! Convention: an element `(reflect, shift)` maps `i` to `(N - i) + shift`
//! when `reflect` is set and to `i + shift` otherwise, everything mod `N`.
//! Group elements are enumerated in `(reflect, shift)` order, identity first;
//! witnesses are always the first element in that order that works.

use crate::domain::{same_ring, DihedralElement, OrderedPartition, RingSize, SubsetMask};
use crate::error::Result;

/// Image of a single index.
pub fn apply(g: DihedralElement, i: usize, ring: RingSize) -> Result<usize> {
    ring.check_index(i)?;
    let n = ring.get();
    let base = if g.reflect { (n - i) % n } else { i };
    Ok((base + g.shift) % n)
}

/// Image of a bitmask under `g`.
#[inline]
pub(crate) fn apply_bits(g: DihedralElement, bits: u64, ring: RingSize) -> u64 {
    if g.reflect {
        ring.rotate_bits(reflect_bits(bits, ring), g.shift + 1)
    } else {
        ring.rotate_bits(bits, g.shift)
    }
}

/// Bit `i` moves to `N - 1 - i`; one further rotation turns this into `s`.
#[inline]
fn reflect_bits(bits: u64, ring: RingSize) -> u64 {
    bits.reverse_bits() >> (64 - ring.get())
}

pub fn apply_subset(g: DihedralElement, a: &SubsetMask) -> SubsetMask {
    SubsetMask::from_bits_unchecked(a.ring(), apply_bits(g, a.bits(), a.ring()))
}

/// Apply the same element to every block.
pub fn apply_partition(g: DihedralElement, p: &OrderedPartition) -> OrderedPartition {
    let blocks = p.blocks().iter().map(|b| apply_subset(g, b)).collect();
    OrderedPartition::from_masks_unchecked(p.ring(), blocks)
}

/// The product `g·h`, acting as `i -> g(h(i))`.
pub fn compose(g: DihedralElement, h: DihedralElement, ring: RingSize) -> DihedralElement {
    let n = ring.get();
    let h_shift = h.shift % n;
    let carried = if g.reflect {
        (n - h_shift) % n
    } else {
        h_shift
    };
    DihedralElement {
        reflect: g.reflect ^ h.reflect,
        shift: (g.shift + carried) % n,
    }
}

pub fn inverse(g: DihedralElement, ring: RingSize) -> DihedralElement {
    let n = ring.get();
    if g.reflect {
        // reflections are involutions
        DihedralElement::reflection(g.shift % n)
    } else {
        DihedralElement::rotation((n - g.shift % n) % n)
    }
}

/// All `2N` elements, rotations first, each half by increasing shift.
pub fn elements(ring: RingSize) -> impl Iterator<Item = DihedralElement> {
    let n = ring.get();
    [false, true]
        .into_iter()
        .flat_map(move |reflect| (0..n).map(move |shift| DihedralElement { reflect, shift }))
}

/// Smallest mask value over the orbit of `bits`.
pub(crate) fn canonical_bits(bits: u64, ring: RingSize) -> u64 {
    let n = ring.get();
    let reflected = reflect_bits(bits, ring);
    let mut best = bits;
    for k in 0..n {
        best = best
            .min(ring.rotate_bits(bits, k))
            .min(ring.rotate_bits(reflected, k));
    }
    best
}

/// Orbit representative: the image with the smallest mask value. Two subsets
/// are equivalent exactly when their canonical forms agree.
pub fn canonical_subset(a: &SubsetMask) -> SubsetMask {
    SubsetMask::from_bits_unchecked(a.ring(), canonical_bits(a.bits(), a.ring()))
}

/// Orbit representative of an ordered partition under the diagonal action:
/// the lexicographically smallest tuple of block masks. The last block is
/// implied by the others and omitted.
pub fn canonical_partition(p: &OrderedPartition) -> Vec<u64> {
    let ring = p.ring();
    let head = &p.blocks()[..p.k() - 1];
    let mut best: Option<Vec<u64>> = None;
    let mut image = Vec::with_capacity(head.len());
    for g in elements(ring) {
        image.clear();
        image.extend(head.iter().map(|b| apply_bits(g, b.bits(), ring)));
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image.clone());
        }
    }
    best.unwrap_or_default()
}

/// First `g` with `g·A = B`, if any.
pub fn subset_witness(a: &SubsetMask, b: &SubsetMask) -> Option<DihedralElement> {
    if a.ring() != b.ring() || a.len() != b.len() {
        return None;
    }
    elements(a.ring()).find(|&g| apply_bits(g, a.bits(), a.ring()) == b.bits())
}

/// Whether one element maps every block of `p` onto the same-indexed block of
/// `q`. Returns that element, minimal in `(reflect, shift)` order.
pub fn are_equivalent_partitions(
    p: &OrderedPartition,
    q: &OrderedPartition,
) -> Result<Option<DihedralElement>> {
    same_ring(p.ring(), q.ring())?;
    if p.k() != q.k() || p.sizes() != q.sizes() {
        return Ok(None);
    }
    let ring = p.ring();
    Ok(elements(ring).find(|&g| {
        p.blocks()
            .iter()
            .zip(q.blocks())
            .all(|(a, b)| apply_bits(g, a.bits(), ring) == b.bits())
    }))
}

/// Whether every block of `p` lies in the orbit of its counterpart in `q`,
/// each with its own element. Returns the per-block witnesses.
pub fn are_pseudo_equivalent(
    p: &OrderedPartition,
    q: &OrderedPartition,
) -> Result<Option<Vec<DihedralElement>>> {
    same_ring(p.ring(), q.ring())?;
    if p.k() != q.k() {
        return Ok(None);
    }
    let ring = p.ring();
    let same_orbits = p.blocks().iter().zip(q.blocks()).all(|(a, b)| {
        a.len() == b.len() && canonical_bits(a.bits(), ring) == canonical_bits(b.bits(), ring)
    });
    if !same_orbits {
        return Ok(None);
    }
    Ok(p.blocks()
        .iter()
        .zip(q.blocks())
        .map(|(a, b)| subset_witness(a, b))
        .collect())
}
