use std::fmt;

use crate::{Error, Result};

/// Dimension of `T¹M` for a 3-dimensional base.
pub const DIM: usize = 5;

/// A strictly increasing set of coframe indices drawn from `{0,…,4}`,
/// stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(u8);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);
    pub const FULL: MultiIndex = MultiIndex(0b11111);

    pub fn new(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u8;
        let mut last: Option<usize> = None;
        for &i in indices {
            if i >= DIM || last.is_some_and(|l| i <= l) {
                return Err(Error::InvalidIndex(indices.to_vec()));
            }
            mask |= 1 << i;
            last = Some(i);
        }
        Ok(MultiIndex(mask))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..DIM).filter(move |i| self.0 & (1 << i) != 0)
    }

    pub fn contains(self, i: usize) -> bool {
        i < DIM && self.0 & (1 << i) != 0
    }

    pub fn complement(self) -> Self {
        MultiIndex(!self.0 & Self::FULL.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        MultiIndex(self.0 | other.0)
    }

    pub fn without(self, i: usize) -> Self {
        MultiIndex(self.0 & !(1 << i))
    }

    /// Sign of the permutation that sorts the concatenation `self ‖ other`.
    /// Both must be disjoint.
    pub fn merge_sign(self, other: Self) -> i32 {
        let mut inversions = 0;
        for i in self.indices() {
            inversions += other.indices().filter(|&j| j < i).count();
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All multi-indices of the given degree in lexicographic order.
    pub fn all_of_degree(degree: usize) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = (0u8..32)
            .map(MultiIndex)
            .filter(|m| m.degree() == degree)
            .collect();
        out.sort_by_key(|m| m.indices().collect::<Vec<_>>());
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "e")?;
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}
