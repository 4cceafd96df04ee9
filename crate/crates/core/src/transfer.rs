//! Primitive transfers: validation, application, inversion, enumeration and
//! the transfer graph.
//!
//! A transfer `(p, M, K)` is valid on `A` when, over the integers,
//!
//! ```text
//! A_p = sum_{m in M} A_m + sum_{k in K} E_k,   p ∉ M,   M ∩ K = ∅.
//! ```
//!
//! For 0-1 rows this means the rows `A_m` are pairwise support-disjoint,
//! their union misses `K`, and together with `K` they cover exactly the
//! support of `A_p`. Applying the transfer replaces row `p` by the indicator
//! of `M ∪ K`, equivalently `B_p = A_p - sum A_m + sum E_m`.
//!
//! The worked 8×8 example from the literature writes the new row as
//! `B_1 = A_1 - ... + E_1 + E_3 + ...`; the `E_1` there is a misprint (the
//! displayed `B` has a 0 at (1,1)) and is not reproduced.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ZeroOneMatrix;
use crate::par;
use crate::union_find::UnionFind;
use crate::vertex_set::VertexSet;

/// One instance of the row identity `A_p = Σ_{m∈M} A_m + Σ_{k∈K} E_k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimitiveTransfer {
    #[serde(rename = "p")]
    pub pivot: usize,
    #[serde(rename = "M")]
    pub summed: VertexSet,
    #[serde(rename = "K")]
    pub units: VertexSet,
}

impl PrimitiveTransfer {
    pub fn new(pivot: usize, summed: VertexSet, units: VertexSet) -> Self {
        PrimitiveTransfer {
            pivot,
            summed,
            units,
        }
    }

    /// `|M|`.
    pub fn size(&self) -> usize {
        self.summed.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.summed.is_empty()
    }

    /// The support of row `p` after the transfer.
    pub fn image_row(&self) -> VertexSet {
        self.summed.union(self.units)
    }

    fn check_range(&self, n: usize) -> Result<()> {
        if self.pivot >= n {
            return Err(Error::IndexOutOfRange {
                index: self.pivot,
                n,
            });
        }
        let all = self.summed.union(self.units);
        if all.bound() > n {
            return Err(Error::IndexOutOfRange {
                index: all.bound() - 1,
                n,
            });
        }
        Ok(())
    }

    fn structurally_sound(&self) -> bool {
        !self.summed.contains(self.pivot) && self.summed.is_disjoint(self.units)
    }
}

/// `p=0;M=2,3,5,6,7;K=`
impl fmt::Display for PrimitiveTransfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={};M={};K={}", self.pivot, self.summed, self.units)
    }
}

impl fmt::Debug for PrimitiveTransfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimitiveTransfer({self})")
    }
}

/// Union of the rows over `set`, or `None` if two of them overlap.
fn disjoint_union(a: &ZeroOneMatrix, set: VertexSet) -> Option<VertexSet> {
    let mut acc = VertexSet::EMPTY;
    for m in set {
        let row = a.row(m);
        if !acc.is_disjoint(row) {
            return None;
        }
        acc = acc.union(row);
    }
    Some(acc)
}

/// Whether `t` satisfies the defining row equation on `a`.
pub fn validate(a: &ZeroOneMatrix, t: &PrimitiveTransfer) -> Result<bool> {
    t.check_range(a.n())?;
    Ok(valid_in_range(a, t))
}

fn valid_in_range(a: &ZeroOneMatrix, t: &PrimitiveTransfer) -> bool {
    if !t.structurally_sound() {
        return false;
    }
    match disjoint_union(a, t.summed) {
        Some(u) => u.is_disjoint(t.units) && u.union(t.units) == a.row(t.pivot),
        None => false,
    }
}

/// The matrix `B` obtained by replacing row `p` of `a` with the indicator of
/// `M ∪ K`.
pub fn apply(a: &ZeroOneMatrix, t: &PrimitiveTransfer) -> Result<ZeroOneMatrix> {
    if !validate(a, t)? {
        return Err(Error::InvalidTransfer { transfer: *t });
    }
    let b = a.with_row(t.pivot, t.image_row());
    debug_assert_eq!(subtraction_formula_row(a, t), indicator(&b, t.pivot));
    Ok(b)
}

/// `A_p - Σ A_m + Σ E_m` evaluated over the integers.
fn subtraction_formula_row(a: &ZeroOneMatrix, t: &PrimitiveTransfer) -> Vec<i32> {
    let n = a.n();
    let mut row: Vec<i32> = (0..n).map(|j| a.entry(t.pivot, j) as i32).collect();
    for m in t.summed {
        for (j, x) in row.iter_mut().enumerate() {
            *x -= a.entry(m, j) as i32;
        }
        row[m] += 1;
    }
    row
}

fn indicator(b: &ZeroOneMatrix, i: usize) -> Vec<i32> {
    (0..b.n()).map(|j| b.entry(i, j) as i32).collect()
}

/// Reconstructs the unique `a` with `apply(a, t) = b`.
pub fn invert(b: &ZeroOneMatrix, t: &PrimitiveTransfer) -> Result<ZeroOneMatrix> {
    t.check_range(b.n())?;
    if !t.structurally_sound() {
        return Err(Error::InvalidTransfer { transfer: *t });
    }
    if b.row(t.pivot) != t.image_row() {
        return Err(Error::NotATransferImage {
            p: t.pivot,
            transfer: *t,
        });
    }
    let union = disjoint_union(b, t.summed)
        .filter(|u| u.is_disjoint(t.units))
        .ok_or(Error::PreimageNotZeroOne { transfer: *t })?;
    let a = b.with_row(t.pivot, union.union(t.units));
    debug_assert!(valid_in_range(&a, t));
    Ok(a)
}

/// All valid transfers of `a`, sorted by pivot and then by `M` as a bitmask.
/// Size-0 transfers are included only when `include_trivial` is set.
pub fn enumerate(a: &ZeroOneMatrix, include_trivial: bool) -> Vec<PrimitiveTransfer> {
    par::map_range(a.n(), |p| enumerate_at(a, p, include_trivial))
        .into_iter()
        .flatten()
        .collect()
}

/// Valid transfers at a single pivot, sorted by `M`.
pub fn enumerate_at(a: &ZeroOneMatrix, p: usize, include_trivial: bool) -> Vec<PrimitiveTransfer> {
    let target = a.row(p);
    let candidates: Vec<usize> = (0..a.n())
        .filter(|&m| m != p && a.row(m).is_subset(target))
        .collect();
    let mut out = Vec::new();
    collect_disjoint(
        a,
        p,
        target,
        &candidates,
        0,
        VertexSet::EMPTY,
        VertexSet::EMPTY,
        &mut out,
    );
    out.retain(|t| include_trivial || !t.is_trivial());
    out.sort_unstable_by_key(|t| t.summed);
    out
}

#[allow(clippy::too_many_arguments)]
fn collect_disjoint(
    a: &ZeroOneMatrix,
    p: usize,
    target: VertexSet,
    candidates: &[usize],
    from: usize,
    chosen: VertexSet,
    covered: VertexSet,
    out: &mut Vec<PrimitiveTransfer>,
) {
    let units = target.difference(covered);
    if chosen.is_disjoint(units) {
        out.push(PrimitiveTransfer::new(p, chosen, units));
    }
    for (idx, &m) in candidates.iter().enumerate().skip(from) {
        let row = a.row(m);
        if row.is_disjoint(covered) {
            collect_disjoint(
                a,
                p,
                target,
                candidates,
                idx + 1,
                chosen.with(m),
                covered.union(row),
                out,
            );
        }
    }
}

/// All nontrivial transfers `t` with some preimage, i.e. every `t` for which
/// `invert(a, t)` succeeds and `M ≠ ∅`. Sorted by pivot, then `M`.
pub fn enumerate_reverse(a: &ZeroOneMatrix) -> Vec<PrimitiveTransfer> {
    par::map_range(a.n(), |p| reverse_at(a, p))
        .into_iter()
        .flatten()
        .collect()
}

fn reverse_at(a: &ZeroOneMatrix, p: usize) -> Vec<PrimitiveTransfer> {
    let image = a.row(p);
    let candidates: Vec<usize> = image.without(p).iter().collect();
    let mut out = Vec::new();
    collect_preimages(
        a,
        p,
        image,
        &candidates,
        0,
        VertexSet::EMPTY,
        VertexSet::EMPTY,
        &mut out,
    );
    out.sort_unstable_by_key(|t| t.summed);
    out
}

#[allow(clippy::too_many_arguments)]
fn collect_preimages(
    a: &ZeroOneMatrix,
    p: usize,
    image: VertexSet,
    candidates: &[usize],
    from: usize,
    chosen: VertexSet,
    covered: VertexSet,
    out: &mut Vec<PrimitiveTransfer>,
) {
    let units = image.difference(chosen);
    if !chosen.is_empty() && covered.is_disjoint(units) {
        out.push(PrimitiveTransfer::new(p, chosen, units));
    }
    for (idx, &m) in candidates.iter().enumerate().skip(from) {
        let row = a.row(m);
        if row.is_disjoint(covered) {
            collect_preimages(
                a,
                p,
                image,
                candidates,
                idx + 1,
                chosen.with(m),
                covered.union(row),
                out,
            );
        }
    }
}

/// The subgraph induced by `M`, with its weak components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferGraph {
    pub vertices: VertexSet,
    /// Sorted `(source, target)` pairs.
    pub edges: Vec<(usize, usize)>,
    /// Weak components, ordered by smallest member.
    pub components: Vec<VertexSet>,
}

impl TransferGraph {
    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.edges.binary_search(&(source, target)).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() <= 1
    }

    pub fn non_loop_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied().filter(|(u, v)| u != v)
    }

    pub fn max_in_degree(&self) -> usize {
        self.vertices
            .iter()
            .map(|v| self.edges.iter().filter(|e| e.1 == v).count())
            .max()
            .unwrap_or(0)
    }

    pub fn component_of(&self, v: usize) -> Option<VertexSet> {
        self.components.iter().copied().find(|c| c.contains(v))
    }
}

/// The subgraph of `a`'s digraph induced by `vertices`.
pub fn induced_graph(a: &ZeroOneMatrix, vertices: VertexSet) -> TransferGraph {
    let edges: Vec<(usize, usize)> = vertices
        .iter()
        .flat_map(|u| a.row(u).intersection(vertices).iter().map(move |v| (u, v)))
        .collect();
    let mut uf = UnionFind::new(vertices.bound());
    for &(u, v) in &edges {
        uf.union(u, v);
    }
    let mut components: Vec<VertexSet> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for v in vertices {
        let r = uf.find(v);
        match roots.iter().position(|&x| x == r) {
            Some(i) => components[i].insert(v),
            None => {
                roots.push(r);
                components.push(VertexSet::singleton(v));
            }
        }
    }
    TransferGraph {
        vertices,
        edges,
        components,
    }
}

/// The graph of a valid transfer: the subgraph induced by `M`.
pub fn transfer_graph(a: &ZeroOneMatrix, t: &PrimitiveTransfer) -> Result<TransferGraph> {
    if !validate(a, t)? {
        return Err(Error::InvalidTransfer { transfer: *t });
    }
    let g = induced_graph(a, t.summed);
    debug_assert!(g.max_in_degree() <= 1);
    Ok(g)
}
