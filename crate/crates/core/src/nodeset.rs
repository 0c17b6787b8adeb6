//! Fixed-width bitsets over the dense node ids of a network.

use std::cmp::Ordering;
use std::fmt;

use crate::network::NodeId;

const WORD: usize = 64;

/// A set of nodes drawn from `0..universe`.
///
/// Equality and hashing are structural. The ordering compares the sorted
/// member lists lexicographically, which gives families a stable print order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    universe: usize,
    words: Vec<u64>,
}

impl NodeSet {
    pub fn empty(universe: usize) -> Self {
        NodeSet {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for node in 0..universe {
            set.insert(node);
        }
        set
    }

    pub fn from_nodes<I: IntoIterator<Item = NodeId>>(universe: usize, nodes: I) -> Self {
        let mut set = Self::empty(universe);
        for node in nodes {
            set.insert(node);
        }
        set
    }

    /// Builds a set from a 0/1 indicator (any value above one half counts as a member).
    pub fn from_indicator(values: &[f64]) -> Self {
        Self::from_nodes(
            values.len(),
            values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0.5)
                .map(|(j, _)| j),
        )
    }

    /// Decodes the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "mask decoding is limited to 64 nodes");
        let mut set = Self::empty(universe);
        if universe > 0 {
            let keep = if universe == WORD {
                u64::MAX
            } else {
                (1u64 << universe) - 1
            };
            set.words[0] = mask & keep;
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, node: NodeId) {
        assert!(node < self.universe, "node {node} outside universe {}", self.universe);
        self.words[node / WORD] |= 1u64 << (node % WORD);
    }

    pub fn remove(&mut self, node: NodeId) {
        if node < self.universe {
            self.words[node / WORD] &= !(1u64 << (node % WORD));
        }
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node < self.universe && self.words[node / WORD] & (1u64 << (node % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter().chain(std::iter::repeat(&0)))
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_strict_subset(&self, other: &NodeSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersects(&self, other: &NodeSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        debug_assert_eq!(self.universe, other.universe);
        NodeSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn complement(&self) -> NodeSet {
        let mut out = NodeSet::full(self.universe);
        for (w, mine) in out.words.iter_mut().zip(self.words.iter()) {
            *w &= !mine;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD + bit)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }

    /// 0/1 indicator vector of length `universe`.
    pub fn indicator(&self) -> Vec<f64> {
        (0..self.universe)
            .map(|j| if self.contains(j) { 1.0 } else { 0.0 })
            .collect()
    }

    /// Sum of `weights[j]` over the members.
    pub fn weight(&self, weights: &[f64]) -> f64 {
        self.iter().map(|j| weights[j]).sum()
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership_across_words() {
        let mut s = NodeSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert_eq!(s.len(), 3);
        s.remove(64);
        assert!(!s.contains(64));
        assert_eq!(s.complement().len(), 128);
    }

    #[test]
    fn subset_relations() {
        let a = NodeSet::from_nodes(8, [1, 2]);
        let b = NodeSet::from_nodes(8, [1, 2, 5]);
        assert!(a.is_strict_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(a.is_subset(&a) && !a.is_strict_subset(&a));
        assert!(a.intersects(&b));
        assert_eq!(a.union(&NodeSet::from_nodes(8, [7])).to_vec(), vec![1, 2, 7]);
    }

    #[test]
    fn ordering_is_lexicographic_on_members() {
        let mut v = vec![
            NodeSet::from_nodes(6, [3, 4]),
            NodeSet::from_nodes(6, [0, 5]),
            NodeSet::from_nodes(6, [0, 1, 2]),
            NodeSet::from_nodes(6, [0, 1]),
        ];
        v.sort();
        let lists: Vec<_> = v.iter().map(|s| s.to_vec()).collect();
        assert_eq!(lists, vec![vec![0, 1], vec![0, 1, 2], vec![0, 5], vec![3, 4]]);
    }

    #[test]
    fn mask_round_trip() {
        let s = NodeSet::from_mask(5, 0b10110);
        assert_eq!(s.to_vec(), vec![1, 2, 4]);
        assert_eq!(NodeSet::from_indicator(&s.indicator()), s);
    }
}
