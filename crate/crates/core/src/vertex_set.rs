//! Small index sets over `0..64`, stored as a bitmask.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest dimension representable by a single `u64` row.
pub const MAX_DIM: usize = 64;

/// A set of vertex (row/column) indices, bit `i` set iff `i` is a member.
///
/// Ordering is by the underlying bitmask, which is the enumeration order used
/// for transfers.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_DIM);
        VertexSet(1u64 << i)
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_DIM);
        if n == MAX_DIM {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_DIM && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn with(self, i: usize) -> Self {
        VertexSet(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> Self {
        VertexSet(self.0 & !(1u64 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest member plus one, or 0 for the empty set.
    pub fn bound(self) -> usize {
        MAX_DIM - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

#[derive(Clone, Debug)]
pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// Comma-separated indices, `""` for the empty set.
impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid index list {input:?}: {reason}")]
pub struct ParseVertexSetError {
    pub input: String,
    pub reason: String,
}

impl FromStr for VertexSet {
    type Err = ParseVertexSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| ParseVertexSetError {
            input: s.to_string(),
            reason,
        };
        let mut set = VertexSet::EMPTY;
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "{}" {
            return Ok(set);
        }
        for part in trimmed.split(',') {
            let i: usize = part
                .trim()
                .parse()
                .map_err(|e| err(format!("{:?}: {e}", part.trim())))?;
            if i >= MAX_DIM {
                return Err(err(format!("index {i} exceeds {}", MAX_DIM - 1)));
            }
            if set.contains(i) {
                return Err(err(format!("index {i} repeated")));
            }
            set.insert(i);
        }
        Ok(set)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(deserializer)?;
        let mut set = VertexSet::EMPTY;
        for i in items {
            if i >= MAX_DIM || set.contains(i) {
                return Err(serde::de::Error::custom(format!("bad index {i}")));
            }
            set.insert(i);
        }
        Ok(set)
    }
}
