//! Finite 0-1 square matrices, digraphs, permutation conjugation and
//! canonical forms.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_DIM};

/// Largest dimension accepted by [`canonical_form`] (8! = 40320 permutations).
pub const CANONICAL_LIMIT: usize = 8;

/// A square 0-1 matrix; row `i` holds the columns `j` with entry `(i, j) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZeroOneMatrix {
    n: usize,
    rows: Vec<VertexSet>,
}

impl ZeroOneMatrix {
    pub fn new(n: usize, rows: Vec<VertexSet>) -> Result<Self> {
        check_dim(n)?;
        if rows.len() != n {
            return Err(Error::RowCount {
                expected: n,
                found: rows.len(),
            });
        }
        let full = VertexSet::full(n);
        if let Some(row) = rows.iter().position(|r| !r.is_subset(full)) {
            return Err(Error::RowOutOfRange { row, n });
        }
        Ok(ZeroOneMatrix { n, rows })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(ZeroOneMatrix {
            n,
            rows: vec![VertexSet::EMPTY; n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(ZeroOneMatrix {
            n,
            rows: (0..n).map(VertexSet::singleton).collect(),
        })
    }

    pub fn ones(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(ZeroOneMatrix {
            n,
            rows: vec![VertexSet::full(n); n],
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        check_dim(n)?;
        let rows = (0..n)
            .map(|i| (0..n).filter(|&j| f(i, j)).collect())
            .collect();
        Ok(ZeroOneMatrix { n, rows })
    }

    /// Builds a matrix from rows written as `'0'`/`'1'` strings, leftmost
    /// character = column 0.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        let mut out = Vec::with_capacity(n);
        for (i, r) in rows.iter().enumerate() {
            let bytes = r.as_bytes();
            if bytes.len() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    column: bytes.len().min(n) + 1,
                    message: format!("row has {} entries, expected {n}", bytes.len()),
                });
            }
            let mut row = VertexSet::EMPTY;
            for (j, b) in bytes.iter().enumerate() {
                match b {
                    b'0' => {}
                    b'1' => row.insert(j),
                    _ => {
                        return Err(Error::Parse {
                            line: i + 1,
                            column: j + 1,
                            message: format!("unexpected {:?}", *b as char),
                        })
                    }
                }
            }
            out.push(row);
        }
        Ok(ZeroOneMatrix { n, rows: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[VertexSet] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> VertexSet {
        self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    /// Copy of `self` with row `i` replaced.
    pub fn with_row(&self, i: usize, row: VertexSet) -> Self {
        debug_assert!(row.is_subset(VertexSet::full(self.n)));
        let mut rows = self.rows.clone();
        rows[i] = row;
        ZeroOneMatrix { n: self.n, rows }
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Row-major packing with entry `(0,0)` in the most significant of the
    /// `n²` low bits, so that comparing keys compares matrices in the
    /// lexicographic order used by [`canonical_form`]. `None` when `n² > 64`.
    pub fn key(&self) -> Option<u64> {
        if self.n > CANONICAL_LIMIT {
            return None;
        }
        let n = self.n;
        let mut key = 0u64;
        for row in &self.rows {
            key = key << n | reverse_low_bits(row.bits(), n);
        }
        Some(key)
    }

    pub fn from_key(n: usize, key: u64) -> Result<Self> {
        if n > CANONICAL_LIMIT {
            return Err(Error::DimensionTooLarge {
                n,
                limit: CANONICAL_LIMIT,
            });
        }
        check_dim(n)?;
        if n < CANONICAL_LIMIT && key >> (n * n) != 0 {
            return Err(Error::RowOutOfRange { row: 0, n });
        }
        let mask = (1u64 << n) - 1;
        let rows = (0..n)
            .map(|i| {
                let shift = (n - 1 - i) * n;
                VertexSet::from_bits(reverse_low_bits(key >> shift & mask, n))
            })
            .collect();
        Ok(ZeroOneMatrix { n, rows })
    }

    /// Rows concatenated top to bottom, leftmost column most significant.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n.cmp(&other.n).then_with(|| {
            self.rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| {
                    reverse_low_bits(a.bits(), self.n).cmp(&reverse_low_bits(b.bits(), self.n))
                })
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptyDimension)
    } else if n > MAX_DIM {
        Err(Error::DimensionTooLarge { n, limit: MAX_DIM })
    } else {
        Ok(())
    }
}

fn reverse_low_bits(bits: u64, n: usize) -> u64 {
    bits.reverse_bits() >> (64 - n)
}

/// One line per row, `0`/`1` characters, no separators.
impl fmt::Display for ZeroOneMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            for j in 0..self.n {
                f.write_str(if row.contains(j) { "1" } else { "0" })?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ZeroOneMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZeroOneMatrix[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            for j in 0..self.n {
                f.write_str(if row.contains(j) { "1" } else { "0" })?;
            }
        }
        f.write_str("]")
    }
}

/// A finite digraph on vertices `0..n`; loops allowed, no multi-edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_dim(n)?;
        let edges: BTreeSet<_> = edges.into_iter().collect();
        for &(v, w) in &edges {
            let bad = if v >= n { v } else { w };
            if v >= n || w >= n {
                return Err(Error::IndexOutOfRange { index: bad, n });
            }
        }
        Ok(Digraph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.edges.contains(&(v, w))
    }
}

/// The vertex matrix: entry `(v, w)` is 1 iff `(v, w)` is an edge.
pub fn matrix_from_digraph(g: &Digraph) -> ZeroOneMatrix {
    let mut rows = vec![VertexSet::EMPTY; g.n];
    for &(v, w) in &g.edges {
        rows[v].insert(w);
    }
    ZeroOneMatrix { n: g.n, rows }
}

pub fn digraph_from_matrix(a: &ZeroOneMatrix) -> Digraph {
    let edges = a
        .rows
        .iter()
        .enumerate()
        .flat_map(|(v, row)| row.iter().map(move |w| (v, w)))
        .collect();
    Digraph { n: a.n, edges }
}

impl From<&Digraph> for ZeroOneMatrix {
    fn from(g: &Digraph) -> Self {
        matrix_from_digraph(g)
    }
}

impl From<&ZeroOneMatrix> for Digraph {
    fn from(a: &ZeroOneMatrix) -> Self {
        digraph_from_matrix(a)
    }
}

/// `E_j`: the row with a single 1 in column `j`.
pub fn unit_row(n: usize, j: usize) -> Result<VertexSet> {
    check_dim(n)?;
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    Ok(VertexSet::singleton(j))
}

/// A bijection on `0..n`. Acting on a digraph, vertex `v` is relabelled
/// `self.apply(v)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAPermutation { n });
            }
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        for k in [i, j] {
            if k >= n {
                return Err(Error::IndexOutOfRange { index: k, n });
            }
        }
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(i, j);
        Ok(Permutation { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Permutation) -> Permutation {
        assert_eq!(
            self.len(),
            inner.len(),
            "composing permutations of different sizes"
        );
        Permutation {
            map: inner.map.iter().map(|&i| self.map[i]).collect(),
        }
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let map = Vec::<usize>::deserialize(deserializer)?;
        Permutation::new(map).map_err(serde::de::Error::custom)
    }
}

/// `P A P⁻¹`: result `(p(i), p(j))` equals `a(i, j)`.
pub fn conjugate(a: &ZeroOneMatrix, p: &Permutation) -> Result<ZeroOneMatrix> {
    if a.n != p.len() {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: p.len(),
        });
    }
    let mut rows = vec![VertexSet::EMPTY; a.n];
    for (i, row) in a.rows.iter().enumerate() {
        rows[p.apply(i)] = row.iter().map(|j| p.apply(j)).collect();
    }
    Ok(ZeroOneMatrix { n: a.n, rows })
}

/// The lexicographically least conjugate of `a` over all `n!` permutations,
/// with a witness `p` such that `conjugate(a, p)` is that least conjugate.
///
/// Ties among witnesses go to the first one in lexicographic order of
/// `p⁻¹`.
pub fn canonical_form(a: &ZeroOneMatrix) -> Result<(ZeroOneMatrix, Permutation)> {
    let (key, order) = canonical_search(a)?;
    let canon = ZeroOneMatrix::from_key(a.n, key)?;
    // order[i] is the original vertex placed at position i
    let witness = Permutation { map: order }.inverse();
    debug_assert_eq!(conjugate(a, &witness).as_ref(), Ok(&canon));
    Ok((canon, witness))
}

/// Key of the canonical form only; skips materializing the witness.
pub fn canonical_key(a: &ZeroOneMatrix) -> Result<u64> {
    canonical_search(a).map(|(k, _)| k)
}

fn canonical_search(a: &ZeroOneMatrix) -> Result<(u64, Vec<usize>)> {
    let n = a.n;
    if n > CANONICAL_LIMIT {
        return Err(Error::DimensionTooLarge {
            n,
            limit: CANONICAL_LIMIT,
        });
    }
    let mut search = CanonSearch {
        n,
        rows: a.rows.iter().map(|r| r.bits()).collect(),
        order: vec![0; n],
        best_key: u64::MAX,
        best_order: Vec::new(),
        total_bits: n * n,
    };
    search.descend(0, 0, 0);
    Ok((search.best_key, search.best_order))
}

struct CanonSearch {
    n: usize,
    rows: Vec<u64>,
    order: Vec<usize>,
    best_key: u64,
    best_order: Vec<usize>,
    total_bits: usize,
}

impl CanonSearch {
    fn bit(&self, i: usize, j: usize) -> u64 {
        1u64 << (self.total_bits - 1 - (i * self.n + j))
    }

    /// Places a vertex at position `depth`. `key` holds the bits of the
    /// `depth × depth` top-left block; its leading `depth` bits are final.
    fn descend(&mut self, depth: usize, used: u64, key: u64) {
        let n = self.n;
        if depth == n {
            if key < self.best_key || self.best_order.is_empty() {
                self.best_key = key;
                self.best_order = self.order.clone();
            }
            return;
        }
        for v in 0..n {
            if used >> v & 1 == 1 {
                continue;
            }
            let mut k = key;
            for i in 0..depth {
                let u = self.order[i];
                if self.rows[u] >> v & 1 == 1 {
                    k |= self.bit(i, depth);
                }
                if self.rows[v] >> u & 1 == 1 {
                    k |= self.bit(depth, i);
                }
            }
            if self.rows[v] >> v & 1 == 1 {
                k |= self.bit(depth, depth);
            }
            // Leading depth+1 bits (row 0, columns 0..=depth) are now fixed.
            if !self.best_order.is_empty() {
                let shift = self.total_bits - (depth + 1);
                if k >> shift > self.best_key >> shift {
                    continue;
                }
            }
            self.order[depth] = v;
            self.descend(depth + 1, used | 1 << v, k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> ZeroOneMatrix {
        ZeroOneMatrix::from_strs(rows).unwrap()
    }

    #[test]
    fn matrix_from_digraph_examples() {
        let g = Digraph::new(2, []).unwrap();
        assert_eq!(matrix_from_digraph(&g), m(&["00", "00"]));
        let g = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(matrix_from_digraph(&g), m(&["010", "001", "000"]));
    }

    #[test]
    fn digraph_from_matrix_examples() {
        assert!(digraph_from_matrix(&m(&["00", "00"])).edges().is_empty());
        let loop_graph = digraph_from_matrix(&m(&["1"]));
        assert_eq!(
            loop_graph.edges().iter().copied().collect::<Vec<_>>(),
            vec![(0, 0)]
        );
    }

    #[test]
    fn digraph_rejects_out_of_range_edges() {
        assert_eq!(
            Digraph::new(2, [(0, 2)]),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn unit_rows() {
        assert_eq!(unit_row(3, 0).unwrap(), VertexSet::from_bits(0b001));
        assert_eq!(unit_row(3, 2).unwrap(), VertexSet::from_bits(0b100));
        assert_eq!(
            unit_row(3, 3),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        );
    }

    #[test]
    fn conjugate_by_swap_moves_the_edge() {
        let a = m(&["01", "00"]);
        let p = Permutation::transposition(2, 0, 1).unwrap();
        assert_eq!(conjugate(&a, &p).unwrap(), m(&["00", "10"]));
        assert_eq!(conjugate(&a, &Permutation::identity(2)).unwrap(), a);
        assert!(matches!(
            conjugate(&a, &Permutation::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn canonical_form_small() {
        // 0010 < 0100 in row-concatenated order
        let (c, w) = canonical_form(&m(&["01", "00"])).unwrap();
        assert_eq!(c, m(&["00", "10"]));
        assert_eq!(conjugate(&m(&["01", "00"]), &w).unwrap(), c);
        assert_eq!(canonical_form(&m(&["00", "10"])).unwrap().0, c);
        let z = ZeroOneMatrix::zero(4).unwrap();
        assert_eq!(canonical_form(&z).unwrap().0, z);
    }

    #[test]
    fn canonical_form_rejects_large() {
        let a = ZeroOneMatrix::zero(9).unwrap();
        assert_eq!(
            canonical_form(&a).unwrap_err(),
            Error::DimensionTooLarge {
                n: 9,
                limit: CANONICAL_LIMIT
            }
        );
    }

    #[test]
    fn key_round_trip_and_order() {
        let a = m(&["011", "100", "001"]);
        let k = a.key().unwrap();
        assert_eq!(k, 0b011_100_001);
        assert_eq!(ZeroOneMatrix::from_key(3, k).unwrap(), a);
        let b = m(&["100", "000", "000"]);
        assert_eq!(a.lex_cmp(&b), a.key().cmp(&b.key()));
        let full = ZeroOneMatrix::ones(8).unwrap();
        assert_eq!(full.key(), Some(u64::MAX));
        assert_eq!(ZeroOneMatrix::from_key(8, u64::MAX).unwrap(), full);
    }

    #[test]
    fn new_checks_shape() {
        assert_eq!(ZeroOneMatrix::zero(0), Err(Error::EmptyDimension));
        assert!(ZeroOneMatrix::new(2, vec![VertexSet::EMPTY]).is_err());
        assert!(
            ZeroOneMatrix::new(2, vec![VertexSet::EMPTY, VertexSet::from_bits(0b100)]).is_err()
        );
        assert!(ZeroOneMatrix::from_strs(&["01", "2 "]).is_err());
    }
}
