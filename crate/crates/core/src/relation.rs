//! Pairwise comparison of two equivalence relations given by keys.
//!
//! Checking "x ~ y under A ⟺ x ~ y under B" for all pairs of a population
//! does not need a pair loop when both relations are key equality: group by
//! each key and by the key pair, count equal pairs per grouping, and the
//! number of disagreeing pairs is `|A-pairs| + |B-pairs| - 2 |AB-pairs|`.

use std::collections::HashMap;
use std::hash::Hash;

/// Outcome of comparing two keyed relations over one population.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationComparison {
    /// `C(m, 2)` for a population of `m` items.
    pub pairs: u64,
    /// Pairs related under the first key.
    pub left_related: u64,
    /// Pairs related under the second key.
    pub right_related: u64,
    /// Pairs related under exactly one of the two keys.
    pub disagreements: u64,
    /// Up to `max_examples` disagreeing pairs, as item indices `(i, j)`, `i < j`.
    pub examples: Vec<(usize, usize)>,
}

impl RelationComparison {
    pub fn agree(&self) -> bool {
        self.disagreements == 0
    }
}

/// Classes of equal keys, each listing item indices in increasing order,
/// classes in order of first appearance.
pub fn classes<K: Hash + Eq>(keys: &[K]) -> Vec<Vec<usize>> {
    let mut index: HashMap<&K, usize> = HashMap::with_capacity(keys.len());
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        let c = *index.entry(k).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[c].push(i);
    }
    out
}

fn related_pairs(classes: &[Vec<usize>]) -> u64 {
    classes.iter().map(|c| choose2(c.len() as u64)).sum()
}

#[inline]
pub(crate) fn choose2(m: u64) -> u64 {
    m * m.saturating_sub(1) / 2
}

/// First pair inside a `within` class whose `other` keys differ.
fn split_example<K: Eq>(
    within: &[Vec<usize>],
    other: &[K],
    out: &mut Vec<(usize, usize)>,
    max: usize,
) {
    for class in within {
        if out.len() >= max {
            return;
        }
        let first = class[0];
        if let Some(&j) = class.iter().find(|&&j| other[j] != other[first]) {
            out.push((first, j));
        }
    }
}

/// Compare "equal left key" with "equal right key" over all item pairs.
pub fn compare_relations<A, B>(left: &[A], right: &[B], max_examples: usize) -> RelationComparison
where
    A: Hash + Eq,
    B: Hash + Eq,
{
    assert_eq!(
        left.len(),
        right.len(),
        "keys must describe the same population"
    );
    let left_classes = classes(left);
    let right_classes = classes(right);
    let joint: Vec<(&A, &B)> = left.iter().zip(right).collect();
    let joint_classes = classes(&joint);

    let left_related = related_pairs(&left_classes);
    let right_related = related_pairs(&right_classes);
    let both = related_pairs(&joint_classes);
    let disagreements = left_related + right_related - 2 * both;

    let mut examples = Vec::new();
    if disagreements > 0 {
        split_example(&left_classes, right, &mut examples, max_examples);
        split_example(&right_classes, left, &mut examples, max_examples);
    }
    RelationComparison {
        pairs: choose2(left.len() as u64),
        left_related,
        right_related,
        disagreements,
        examples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The pair loop the grouping replaces.
    fn brute<A: Eq, B: Eq>(left: &[A], right: &[B]) -> (u64, u64, u64) {
        let (mut l, mut r, mut d) = (0, 0, 0);
        for i in 0..left.len() {
            for j in i + 1..left.len() {
                let a = left[i] == left[j];
                let b = right[i] == right[j];
                l += a as u64;
                r += b as u64;
                d += (a != b) as u64;
            }
        }
        (l, r, d)
    }

    #[test]
    fn agrees_with_pair_loop() {
        let left = [1, 2, 1, 3, 2, 1, 4, 4];
        let right = ['a', 'b', 'a', 'c', 'b', 'x', 'd', 'e'];
        let cmp = compare_relations(&left, &right, 10);
        assert_eq!(
            (cmp.left_related, cmp.right_related, cmp.disagreements),
            brute(&left, &right)
        );
        assert_eq!(cmp.pairs, 28);
        assert!(!cmp.agree());
        for &(i, j) in &cmp.examples {
            assert!(i < j);
            assert_ne!(left[i] == left[j], right[i] == right[j]);
        }
    }

    #[test]
    fn identical_relations_agree() {
        let left = [5, 6, 5, 7];
        let right = ["p", "q", "p", "r"];
        let cmp = compare_relations(&left, &right, 4);
        assert!(cmp.agree());
        assert!(cmp.examples.is_empty());
        assert_eq!(cmp.left_related, 1);
    }

    #[test]
    fn class_order_is_first_appearance() {
        assert_eq!(
            classes(&[3, 1, 3, 2, 1]),
            vec![vec![0, 2], vec![1, 4], vec![3]]
        );
        assert!(classes::<u8>(&[]).is_empty());
    }
}
