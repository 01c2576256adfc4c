//! Index sets over the variables of a multilinear program.
//!
//! An [`IndexSet`] is a non-empty, strictly increasing sequence of 0-based
//! variable indices. All the machinery in this crate (triples, linear models,
//! cover graphs) is keyed on index sets, so they carry the one total order
//! used everywhere ties must break: shorter sets first, equal lengths
//! compared lexicographically.

use std::fmt;

use crate::error::{Error, Result};

/// Non-empty set of variable indices, stored strictly sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    /// Builds a set from arbitrary indices, sorting and rejecting duplicates.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidPartition {
                msg: "index set must be non-empty".into(),
            });
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition {
                msg: format!("repeated index in {:?}", indices),
            });
        }
        Ok(Self { indices })
    }

    /// Single-element set.
    pub fn singleton(j: usize) -> Self {
        Self { indices: vec![j] }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    pub fn max_index(&self) -> usize {
        *self.indices.last().expect("non-empty")
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        let mut a = self.indices.iter().peekable();
        let mut b = other.indices.iter().peekable();
        while let (Some(&&x), Some(&&y)) = (a.peek(), b.peek()) {
            match x.cmp(&y) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.indices.iter().all(|&j| other.contains(j))
    }

    /// Union of two disjoint sets.
    pub fn union_disjoint(&self, other: &Self) -> Result<Self> {
        if !self.is_disjoint(other) {
            return Err(Error::InvalidPartition {
                msg: format!("{} and {} overlap", self, other),
            });
        }
        let mut merged = Vec::with_capacity(self.len() + other.len());
        merged.extend_from_slice(&self.indices);
        merged.extend_from_slice(&other.indices);
        merged.sort_unstable();
        Ok(Self { indices: merged })
    }

    /// Elements of `self` not in `other`.
    pub fn difference(&self, other: &Self) -> Vec<usize> {
        self.indices
            .iter()
            .copied()
            .filter(|&j| !other.contains(j))
            .collect()
    }

    /// All subsets of the given size, in lexicographic order.
    pub fn subsets_of_size(&self, size: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        let n = self.len();
        if size == 0 || size > n {
            return out;
        }
        let mut pick = (0..size).collect::<Vec<_>>();
        loop {
            out.push(IndexSet {
                indices: pick.iter().map(|&p| self.indices[p]).collect(),
            });
            // advance the combination
            let mut i = size;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if pick[i] != i + n - size {
                    break;
                }
            }
            if pick[i] == i + n - size {
                return out;
            }
            pick[i] += 1;
            for j in i + 1..size {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }

    /// Renders 1-based, comma-separated, as used by the text formats.
    pub fn to_text(&self) -> String {
        self.indices
            .iter()
            .map(|j| (j + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Canonical total order: length first, then lexicographic on the indices.
impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices.cmp(&other.indices))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_text())
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn order_is_length_then_lex() {
        assert!(set(&[3]) < set(&[0, 2]));
        assert!(set(&[0, 2]) < set(&[1, 2]));
        assert!(set(&[0, 1]) < set(&[0, 2]));
        assert_eq!(set(&[2, 0]), set(&[0, 2]));
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(IndexSet::new(vec![]).is_err());
        assert!(IndexSet::new(vec![1, 1]).is_err());
    }

    #[test]
    fn subset_enumeration() {
        let s = set(&[0, 1, 2, 3]);
        assert_eq!(s.subsets_of_size(2).len(), 6);
        assert_eq!(s.subsets_of_size(4).len(), 1);
        assert_eq!(s.subsets_of_size(5).len(), 0);
        let pairs = s.subsets_of_size(2);
        assert_eq!(pairs[0], set(&[0, 1]));
        assert_eq!(pairs[5], set(&[2, 3]));
    }

    #[test]
    fn disjoint_union() {
        let a = set(&[0, 2]);
        let b = set(&[1]);
        assert_eq!(a.union_disjoint(&b).unwrap(), set(&[0, 1, 2]));
        assert!(a.union_disjoint(&set(&[2])).is_err());
    }
}
