//! Small element sets as 32-bit masks.

use serde::{Deserialize, Serialize};

/// A subset of a carrier of size at most 32, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElemSet(pub u32);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn singleton(i: usize) -> ElemSet {
        ElemSet(1 << i)
    }

    pub fn full(n: usize) -> ElemSet {
        debug_assert!(n <= 32);
        if n == 32 {
            ElemSet(u32::MAX)
        } else {
            ElemSet((1u32 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    #[must_use]
    pub fn insert(self, i: usize) -> ElemSet {
        ElemSet(self.0 | (1 << i))
    }

    #[must_use]
    pub fn remove(self, i: usize) -> ElemSet {
        ElemSet(self.0 & !(1 << i))
    }

    #[must_use]
    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    #[must_use]
    pub fn inter(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.contains(*i))
    }

    pub fn from_elems<I: IntoIterator<Item = usize>>(elems: I) -> ElemSet {
        elems.into_iter().fold(ElemSet::EMPTY, ElemSet::insert)
    }

    /// Elements in ascending index order.
    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}
