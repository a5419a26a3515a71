//! Shared domain types: ring sizes, subset bitmasks, distance multisets,
//! ordered partitions, dihedral elements, alphabets and signals.
//!
//! Everything here is immutable after construction. Validation happens in
//! the constructors so that the algorithm modules can assume well-formed
//! input.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Widest ring a [`SubsetMask`] can address.
pub const MAX_MASK_RING: usize = 64;

/// The signal length `N`; indices live on the cycle `[0, N-1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct RingSize(usize);

impl RingSize {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRing);
        }
        Ok(RingSize(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Largest cyclic distance, `floor(N/2)`.
    #[inline]
    pub fn max_distance(self) -> usize {
        self.0 / 2
    }

    /// Reduce an arbitrary integer onto the ring.
    #[inline]
    pub fn reduce(self, i: i64) -> usize {
        i.rem_euclid(self.0 as i64) as usize
    }

    pub fn check_index(self, index: usize) -> Result<()> {
        if index < self.0 {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, n: self.0 })
        }
    }

    /// Fails unless the ring fits in a single 64-bit word.
    pub fn check_mask_width(self) -> Result<()> {
        if self.0 > MAX_MASK_RING {
            Err(Error::RingTooLarge { n: self.0 })
        } else {
            Ok(())
        }
    }

    /// All `N` low bits set.
    #[inline]
    pub fn full_bits(self) -> u64 {
        if self.0 >= 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }

    /// Rotate the low `N` bits of a word left by `k`: bit `i` moves to `(i + k) mod N`.
    #[inline]
    pub(crate) fn rotate_bits(self, bits: u64, k: usize) -> u64 {
        let n = self.0;
        let k = k % n;
        if k == 0 {
            return bits;
        }
        ((bits << k) | (bits >> (n - k))) & self.full_bits()
    }

    fn check_same(self, other: RingSize) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.0,
                right: other.0,
            })
        }
    }
}

impl TryFrom<usize> for RingSize {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        RingSize::new(n)
    }
}

impl From<RingSize> for usize {
    fn from(r: RingSize) -> usize {
        r.0
    }
}

impl fmt::Display for RingSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Check that two values live on the same ring.
pub fn same_ring(a: RingSize, b: RingSize) -> Result<()> {
    a.check_same(b)
}

/// A subset of `[0, N-1]` stored as a bit-vector; bit `i` set iff `i` is a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SubsetRepr", into = "SubsetRepr")]
pub struct SubsetMask {
    ring: RingSize,
    bits: u64,
}

impl SubsetMask {
    pub fn empty(ring: RingSize) -> Result<Self> {
        ring.check_mask_width()?;
        Ok(SubsetMask { ring, bits: 0 })
    }

    pub fn full(ring: RingSize) -> Result<Self> {
        ring.check_mask_width()?;
        Ok(SubsetMask {
            ring,
            bits: ring.full_bits(),
        })
    }

    /// Build from member indices. Duplicates collapse; out-of-range indices are rejected.
    pub fn from_indices<I>(ring: RingSize, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        ring.check_mask_width()?;
        let mut bits = 0u64;
        for i in indices {
            ring.check_index(i)?;
            bits |= 1 << i;
        }
        Ok(SubsetMask { ring, bits })
    }

    pub fn from_bits(ring: RingSize, bits: u64) -> Result<Self> {
        ring.check_mask_width()?;
        let stray = bits & !ring.full_bits();
        if stray != 0 {
            return Err(Error::IndexOutOfRange {
                index: stray.trailing_zeros() as usize,
                n: ring.get(),
            });
        }
        Ok(SubsetMask { ring, bits })
    }

    /// Caller guarantees `bits` fits inside the ring.
    #[inline]
    pub(crate) fn from_bits_unchecked(ring: RingSize, bits: u64) -> Self {
        debug_assert_eq!(bits & !ring.full_bits(), 0);
        SubsetMask { ring, bits }
    }

    #[inline]
    pub fn ring(&self) -> RingSize {
        self.ring
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.ring.get() && self.bits >> i & 1 == 1
    }

    /// Members in increasing order.
    pub fn iter(&self) -> BitIter {
        BitIter(self.bits)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_disjoint(&self, other: &SubsetMask) -> bool {
        self.bits & other.bits == 0
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Iterator over the set bits of a word, lowest first.
#[derive(Debug, Clone)]
pub struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for BitIter {}

#[derive(Serialize, Deserialize)]
struct SubsetRepr {
    n: usize,
    members: Vec<usize>,
}

impl From<SubsetMask> for SubsetRepr {
    fn from(s: SubsetMask) -> Self {
        SubsetRepr {
            n: s.ring.get(),
            members: s.to_vec(),
        }
    }
}

impl TryFrom<SubsetRepr> for SubsetMask {
    type Error = Error;
    fn try_from(r: SubsetRepr) -> Result<Self> {
        SubsetMask::from_indices(RingSize::new(r.n)?, r.members)
    }
}

/// Multiplicities of the cyclic distances `0..=floor(N/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MultisetRepr", into = "MultisetRepr")]
pub struct DistanceMultiset {
    ring: RingSize,
    mult: Vec<u32>,
}

impl DistanceMultiset {
    pub fn zero(ring: RingSize) -> Self {
        DistanceMultiset {
            ring,
            mult: vec![0; ring.max_distance() + 1],
        }
    }

    pub fn from_multiplicities(ring: RingSize, mult: Vec<u32>) -> Result<Self> {
        let expected = ring.max_distance() + 1;
        if mult.len() != expected {
            return Err(Error::ArityMismatch {
                left: mult.len(),
                right: expected,
            });
        }
        Ok(DistanceMultiset { ring, mult })
    }

    #[inline]
    pub fn ring(&self) -> RingSize {
        self.ring
    }

    /// Multiplicity of distance `d`; zero beyond `floor(N/2)`.
    #[inline]
    pub fn multiplicity(&self, d: usize) -> u32 {
        self.mult.get(d).copied().unwrap_or(0)
    }

    #[inline]
    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    /// Total number of elements counted with multiplicity.
    pub fn mass(&self) -> u64 {
        self.mult.iter().map(|&m| m as u64).sum()
    }

    pub(crate) fn multiplicities_mut(&mut self) -> &mut [u32] {
        &mut self.mult
    }
}

/// Renders as `{0^4,1^2,2^2,3,4}`: absent distances are skipped and
/// multiplicity one carries no exponent.
impl fmt::Display for DistanceMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (d, &m) in self.mult.iter().enumerate() {
            if m == 0 {
                continue;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{d}")?;
            } else {
                write!(f, "{d}^{m}")?;
            }
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct MultisetRepr {
    n: usize,
    mult: Vec<u32>,
}

impl From<DistanceMultiset> for MultisetRepr {
    fn from(m: DistanceMultiset) -> Self {
        MultisetRepr {
            n: m.ring.get(),
            mult: m.mult,
        }
    }
}

impl TryFrom<MultisetRepr> for DistanceMultiset {
    type Error = Error;
    fn try_from(r: MultisetRepr) -> Result<Self> {
        DistanceMultiset::from_multiplicities(RingSize::new(r.n)?, r.mult)
    }
}

/// `K` pairwise disjoint blocks covering `[0, N-1]`. Block order is significant.
///
/// Serialized as an array of sorted index arrays; the ring size is the total
/// number of indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct OrderedPartition {
    ring: RingSize,
    blocks: Vec<SubsetMask>,
}

impl OrderedPartition {
    /// Validate index lists into a partition. Empty blocks are rejected.
    pub fn new(ring: RingSize, blocks: &[Vec<usize>]) -> Result<Self> {
        Self::build(ring, blocks, false)
    }

    /// As [`OrderedPartition::new`], but letters that do not occur (empty
    /// blocks) are accepted.
    pub fn new_allow_empty(ring: RingSize, blocks: &[Vec<usize>]) -> Result<Self> {
        Self::build(ring, blocks, true)
    }

    fn build(ring: RingSize, blocks: &[Vec<usize>], allow_empty: bool) -> Result<Self> {
        ring.check_mask_width()?;
        let mut seen = 0u64;
        let mut masks = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut bits = 0u64;
            for &i in block {
                ring.check_index(i)?;
                let bit = 1u64 << i;
                if seen & bit != 0 {
                    return Err(Error::Overlap { index: i });
                }
                seen |= bit;
                bits |= bit;
            }
            masks.push(SubsetMask::from_bits_unchecked(ring, bits));
        }
        Self::from_masks_inner(ring, masks, allow_empty)
    }

    pub fn from_masks(ring: RingSize, masks: Vec<SubsetMask>) -> Result<Self> {
        Self::from_masks_inner(ring, masks, false)
    }

    pub fn from_masks_allow_empty(ring: RingSize, masks: Vec<SubsetMask>) -> Result<Self> {
        Self::from_masks_inner(ring, masks, true)
    }

    fn from_masks_inner(ring: RingSize, masks: Vec<SubsetMask>, allow_empty: bool) -> Result<Self> {
        ring.check_mask_width()?;
        if masks.is_empty() {
            return Err(Error::Coverage { missing: 0 });
        }
        let mut seen = 0u64;
        for (k, m) in masks.iter().enumerate() {
            ring.check_same(m.ring)?;
            if seen & m.bits != 0 {
                return Err(Error::Overlap {
                    index: (seen & m.bits).trailing_zeros() as usize,
                });
            }
            if m.is_empty() && !allow_empty {
                return Err(Error::EmptyBlock { block: k });
            }
            seen |= m.bits;
        }
        let gap = ring.full_bits() & !seen;
        if gap != 0 {
            return Err(Error::Coverage {
                missing: gap.trailing_zeros() as usize,
            });
        }
        Ok(OrderedPartition {
            ring,
            blocks: masks,
        })
    }

    /// Caller guarantees the masks form a partition of the ring.
    pub(crate) fn from_masks_unchecked(ring: RingSize, blocks: Vec<SubsetMask>) -> Self {
        debug_assert!(Self::from_masks_allow_empty(ring, blocks.clone()).is_ok());
        OrderedPartition { ring, blocks }
    }

    /// Parse `a,b,c|d,e|f`. Whitespace around indices is ignored.
    pub fn parse(ring: RingSize, text: &str) -> std::result::Result<Self, ParseError> {
        let blocks = text
            .split('|')
            .map(parse_index_list)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(OrderedPartition::new(ring, &blocks)?)
    }

    #[inline]
    pub fn ring(&self) -> RingSize {
        self.ring
    }

    /// Number of blocks `K`.
    #[inline]
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    #[inline]
    pub fn blocks(&self) -> &[SubsetMask] {
        &self.blocks
    }

    #[inline]
    pub fn block(&self, i: usize) -> &SubsetMask {
        &self.blocks[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(SubsetMask::len).collect()
    }

    /// Index of the block holding `i`.
    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(i))
    }

    pub fn to_index_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(SubsetMask::to_vec).collect()
    }
}

/// Renders in the `a,b|c,d` literal syntax accepted by [`OrderedPartition::parse`].
impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            for (j, i) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
        }
        Ok(())
    }
}

impl From<OrderedPartition> for Vec<Vec<usize>> {
    fn from(p: OrderedPartition) -> Self {
        p.to_index_lists()
    }
}

impl TryFrom<Vec<Vec<usize>>> for OrderedPartition {
    type Error = Error;
    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = blocks.iter().map(Vec::len).sum();
        OrderedPartition::new_allow_empty(RingSize::new(n)?, &blocks)
    }
}

/// Validate an index list into a partition; the `make_partition` entry point.
pub fn make_partition(ring: RingSize, blocks: &[Vec<usize>]) -> Result<OrderedPartition> {
    OrderedPartition::new(ring, blocks)
}

/// Failure to read a set or partition literal.
#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("invalid index {0:?}")]
    Index(String),
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// Parse a comma-separated index list. The empty string is the empty list.
pub fn parse_index_list(text: &str) -> std::result::Result<Vec<usize>, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<usize>()
                .map_err(|_| ParseError::Index(t.to_string()))
        })
        .collect()
}

/// One of the `2N` symmetries of the `N`-gon: `r^shift` or `s·r^shift`.
///
/// Acting on an index, the reflection `s: i -> N - i` is applied first and
/// the rotation `r^shift` second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DihedralElement {
    pub reflect: bool,
    pub shift: usize,
}

impl DihedralElement {
    pub const IDENTITY: DihedralElement = DihedralElement {
        reflect: false,
        shift: 0,
    };

    pub fn rotation(shift: usize) -> Self {
        DihedralElement {
            reflect: false,
            shift,
        }
    }

    pub fn reflection(shift: usize) -> Self {
        DihedralElement {
            reflect: true,
            shift,
        }
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reflect {
            write!(f, "s·r^{}", self.shift)
        } else {
            write!(f, "r^{}", self.shift)
        }
    }
}

/// An ordered list of distinct real letters `α₁, …, α_K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Alphabet {
    letters: Vec<f64>,
}

impl Alphabet {
    pub fn new(letters: Vec<f64>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::ArityMismatch { left: 0, right: 1 });
        }
        for (i, a) in letters.iter().enumerate() {
            if letters[..i].iter().any(|b| b == a) {
                return Err(Error::DuplicateLetter(*a));
            }
        }
        Ok(Alphabet { letters })
    }

    #[inline]
    pub fn letters(&self) -> &[f64] {
        &self.letters
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.letters.len()
    }

    /// First letter is exactly zero.
    pub fn is_sparse(&self) -> bool {
        self.letters[0] == 0.0
    }

    pub fn position(&self, value: f64) -> Option<usize> {
        self.letters.iter().position(|&a| a == value)
    }
}

impl TryFrom<Vec<f64>> for Alphabet {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for Vec<f64> {
    fn from(a: Alphabet) -> Self {
        a.letters
    }
}

/// A real signal of length `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Signal {
    ring: RingSize,
    values: Vec<f64>,
}

impl Signal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let ring = RingSize::new(values.len())?;
        Ok(Signal { ring, values })
    }

    /// `x[n] = α_k` exactly when `n` lies in block `k`.
    pub fn from_partition(partition: &OrderedPartition, alphabet: &Alphabet) -> Result<Self> {
        if partition.k() != alphabet.k() {
            return Err(Error::ArityMismatch {
                left: partition.k(),
                right: alphabet.k(),
            });
        }
        let mut values = vec![0.0; partition.ring().get()];
        for (block, &letter) in partition.blocks().iter().zip(alphabet.letters()) {
            for i in block.iter() {
                values[i] = letter;
            }
        }
        Ok(Signal {
            ring: partition.ring(),
            values,
        })
    }

    /// Recover the level-set partition `A_k = {n : x[n] = α_k}`. Letters
    /// that do not occur yield empty blocks.
    pub fn partition_of(&self, alphabet: &Alphabet) -> Result<OrderedPartition> {
        self.ring.check_mask_width()?;
        let mut bits = vec![0u64; alphabet.k()];
        for (i, &v) in self.values.iter().enumerate() {
            let k = alphabet
                .position(v)
                .ok_or(Error::NotInAlphabet { index: i, value: v })?;
            bits[k] |= 1 << i;
        }
        let masks = bits
            .into_iter()
            .map(|b| SubsetMask::from_bits_unchecked(self.ring, b))
            .collect();
        Ok(OrderedPartition::from_masks_unchecked(self.ring, masks))
    }

    #[inline]
    pub fn ring(&self) -> RingSize {
        self.ring
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl TryFrom<Vec<f64>> for Signal {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Signal::new(v)
    }
}

impl From<Signal> for Vec<f64> {
    fn from(s: Signal) -> Self {
        s.values
    }
}
