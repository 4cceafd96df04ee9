//! Reduction of a primitive transfer to a chain of size-1 transfers.
//!
//! Two rewriting steps drive the reduction:
//!
//! * [`split_component`] factors a transfer whose graph has several weak
//!   components into a transfer on one component followed by a transfer on
//!   the rest;
//! * [`peel_edge`] takes a non-loop edge `(l, n)` of a transfer graph and
//!   builds `C` with row `l` replaced by `A_l + A_n - E_n`. Writing
//!   `back = (l, {n}, A_l \ {n})` and `rest = (p, M \ {n}, K ∪ {n})`:
//!
//!   ```text
//!   A <-back-- C --rest--> D --back--> B
//!   ```
//!
//!   `rest` has size `s - 1` and its graph stays connected when the original
//!   one is. `D` differs from `B` only in row `l`, so the same size-1
//!   transfer `back` that recovers `A` from `C` also recovers `B` from `D`.
//!   A transfer at `p` never touches row `l`, hence `B` itself is not a
//!   transfer of `C` and the restoring move cannot be skipped.
//!
//! [`decompose`] applies both until every step has size 1 and returns a
//! [`MoveSequence`] that [`verify`] replays from scratch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{conjugate, Permutation, ZeroOneMatrix};
use crate::par;
use crate::transfer::{apply, induced_graph, invert, transfer_graph, validate, PrimitiveTransfer};
use crate::vertex_set::VertexSet;

/// One link `C_i → C_{i+1}` of an equivalence chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    /// `C_{i+1} = apply(C_i, t)`.
    ForwardTransfer(PrimitiveTransfer),
    /// `C_i = apply(C_{i+1}, t)`; `t` is stated relative to `C_{i+1}`.
    ReverseTransfer(PrimitiveTransfer),
    /// `C_{i+1} = conjugate(C_i, perm)`.
    Permute { perm: Permutation },
}

impl Move {
    pub fn transfer(&self) -> Option<&PrimitiveTransfer> {
        match self {
            Move::ForwardTransfer(t) | Move::ReverseTransfer(t) => Some(t),
            Move::Permute { .. } => None,
        }
    }

    /// The move that undoes `self`, taking the successor back to `from`.
    pub fn reversed(&self) -> Move {
        match self {
            Move::ForwardTransfer(t) => Move::ReverseTransfer(*t),
            Move::ReverseTransfer(t) => Move::ForwardTransfer(*t),
            Move::Permute { perm } => Move::Permute {
                perm: perm.inverse(),
            },
        }
    }

    /// Successor of `current` under this move.
    pub fn step(&self, current: &ZeroOneMatrix) -> Result<ZeroOneMatrix> {
        match self {
            Move::ForwardTransfer(t) => apply(current, t),
            Move::ReverseTransfer(t) => {
                let prev = invert(current, t)?;
                if !validate(&prev, t)? || apply(&prev, t)? != *current {
                    return Err(Error::InvalidTransfer { transfer: *t });
                }
                Ok(prev)
            }
            Move::Permute { perm } => conjugate(current, perm),
        }
    }
}

/// A chain `initial = C_1, ..., C_n = final` given by its moves.
///
/// `intermediates`, when present, lists `C_2 .. C_{n-1}` for readers; replay
/// ignores it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveSequence {
    pub initial: ZeroOneMatrix,
    pub moves: Vec<Move>,
    pub final_matrix: ZeroOneMatrix,
    pub intermediates: Option<Vec<ZeroOneMatrix>>,
}

impl MoveSequence {
    pub fn new(initial: ZeroOneMatrix, moves: Vec<Move>, final_matrix: ZeroOneMatrix) -> Self {
        MoveSequence {
            initial,
            moves,
            final_matrix,
            intermediates: None,
        }
    }

    /// Replays the chain and records every matrix strictly between the ends.
    pub fn embed_intermediates(&mut self) -> Result<()> {
        let mut cur = self.initial.clone();
        let mut mids = Vec::with_capacity(self.moves.len().saturating_sub(1));
        for (i, mv) in self.moves.iter().enumerate() {
            cur = mv.step(&cur)?;
            if i + 1 < self.moves.len() {
                mids.push(cur.clone());
            }
        }
        self.intermediates = Some(mids);
        Ok(())
    }

    pub fn forward_count(&self) -> usize {
        self.moves
            .iter()
            .filter(|m| matches!(m, Move::ForwardTransfer(_)))
            .count()
    }

    pub fn reverse_count(&self) -> usize {
        self.moves
            .iter()
            .filter(|m| matches!(m, Move::ReverseTransfer(_)))
            .count()
    }
}

/// Why a [`MoveSequence`] failed to replay.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyFailure {
    #[error("move {index}: {reason}")]
    Move { index: usize, reason: String },
    #[error("replay ends at a matrix different from final")]
    FinalMismatch,
    #[error("initial is {initial}×{initial}, final is {last}×{last}")]
    DimensionMismatch { initial: usize, last: usize },
}

/// Replays `seq` from `initial`, checking each move against the definition.
pub fn check(seq: &MoveSequence) -> std::result::Result<(), VerifyFailure> {
    if seq.initial.n() != seq.final_matrix.n() {
        return Err(VerifyFailure::DimensionMismatch {
            initial: seq.initial.n(),
            last: seq.final_matrix.n(),
        });
    }
    let mut cur = seq.initial.clone();
    for (index, mv) in seq.moves.iter().enumerate() {
        cur = mv.step(&cur).map_err(|e| VerifyFailure::Move {
            index,
            reason: e.to_string(),
        })?;
    }
    if cur != seq.final_matrix {
        return Err(VerifyFailure::FinalMismatch);
    }
    Ok(())
}

pub fn verify(seq: &MoveSequence) -> bool {
    check(seq).is_ok()
}

/// A non-loop edge `(source, target)` of a transfer graph together with the
/// remaining columns `{j : A(source, j) = 1, j ≠ target}` of its source row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeelStep {
    pub source: usize,
    pub target: usize,
    pub columns: VertexSet,
}

impl PeelStep {
    pub fn new(a: &ZeroOneMatrix, source: usize, target: usize) -> Result<Self> {
        for i in [source, target] {
            if i >= a.n() {
                return Err(Error::IndexOutOfRange { index: i, n: a.n() });
            }
        }
        Ok(PeelStep {
            source,
            target,
            columns: a.row(source).without(target),
        })
    }
}

/// Result of [`peel_edge`]: `apply(matrix, back) = A`, and applying `rest`
/// and then `back` to `matrix` yields `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peeled {
    pub matrix: ZeroOneMatrix,
    pub back: PrimitiveTransfer,
    pub rest: PrimitiveTransfer,
}

pub fn peel_edge(a: &ZeroOneMatrix, t: &PrimitiveTransfer, step: &PeelStep) -> Result<Peeled> {
    let graph = transfer_graph(a, t)?;
    if t.size() < 2 {
        return Err(Error::TransferTooSmall {
            size: t.size(),
            needed: 2,
        });
    }
    let (l, n) = (step.source, step.target);
    if l == n {
        return Err(Error::LoopEdge {
            source_vertex: l,
            target: n,
        });
    }
    if !graph.has_edge(l, n) {
        return Err(Error::EdgeNotInGraph {
            source_vertex: l,
            target: n,
        });
    }
    if step.columns != a.row(l).without(n) {
        return Err(Error::PeelColumnsMismatch { source_vertex: l });
    }
    // A_l and A_n are disjoint (both in M) and A_l has a 1 at n.
    let row = a.row(l).union(a.row(n)).without(n);
    let matrix = a.with_row(l, row);
    let back = PrimitiveTransfer::new(l, VertexSet::singleton(n), step.columns);
    let rest = PrimitiveTransfer::new(t.pivot, t.summed.without(n), t.units.with(n));
    debug_assert_eq!(apply(&matrix, &back).as_ref(), Ok(a));
    debug_assert!(apply(&matrix, &rest)
        .and_then(|d| apply(&d, &back))
        .is_ok_and(|b| apply(a, t).is_ok_and(|expected| b == expected)));
    Ok(Peeled { matrix, back, rest })
}

/// Result of [`split_component`]: `matrix = apply(A, first)` and
/// `apply(matrix, second) = B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub matrix: ZeroOneMatrix,
    pub first: PrimitiveTransfer,
    pub second: PrimitiveTransfer,
}

pub fn split_component(
    a: &ZeroOneMatrix,
    t: &PrimitiveTransfer,
    component: VertexSet,
) -> Result<Split> {
    let graph = transfer_graph(a, t)?;
    if !graph.components.contains(&component) {
        return Err(Error::NotAComponent {
            set: component.to_string(),
        });
    }
    if graph.components.len() == 1 {
        return Err(Error::WholeGraph {
            set: component.to_string(),
        });
    }
    let rest = t.summed.difference(component);
    let covered = rest
        .iter()
        .fold(VertexSet::EMPTY, |acc, h| acc.union(a.row(h)));
    let first = PrimitiveTransfer::new(t.pivot, component, t.units.union(covered));
    let matrix = apply(a, &first)?;
    let second = PrimitiveTransfer::new(t.pivot, rest, t.units.union(component));
    Ok(Split {
        matrix,
        first,
        second,
    })
}

/// A chain of size-1 moves from `a` to `apply(a, t)`.
///
/// Components are split off in order of their smallest vertex. Within a
/// connected factor of size `s` the lexicographically smallest non-loop edge
/// is peeled `s - 1` times; each peel contributes a reverse move before and a
/// restoring forward move after the remainder, and the innermost size-1
/// transfer is a forward move. The chain therefore has `2·size(t) - c` moves
/// for `c` components, `size(t)` of them forward. A size-0 transfer yields
/// the empty chain.
pub fn decompose(a: &ZeroOneMatrix, t: &PrimitiveTransfer) -> Result<MoveSequence> {
    if !validate(a, t)? {
        return Err(Error::InvalidTransfer { transfer: *t });
    }
    let b = apply(a, t)?;
    if t.is_trivial() {
        return Ok(MoveSequence::new(a.clone(), Vec::new(), b));
    }

    let mut factors = Vec::new();
    let mut cur = a.clone();
    let mut cur_t = *t;
    loop {
        let graph = induced_graph(&cur, cur_t.summed);
        if graph.components.len() <= 1 {
            factors.push((cur, cur_t));
            break;
        }
        let split = split_component(&cur, &cur_t, graph.components[0])?;
        factors.push((cur, split.first));
        cur = split.matrix;
        cur_t = split.second;
    }

    let chunks = par::map_collect(&factors, |(m, ft)| decompose_connected(m, ft));
    let mut moves = Vec::with_capacity(t.size());
    for chunk in chunks {
        moves.extend(chunk?);
    }
    Ok(MoveSequence::new(a.clone(), moves, b))
}

fn decompose_connected(a: &ZeroOneMatrix, t: &PrimitiveTransfer) -> Result<Vec<Move>> {
    let mut head = Vec::with_capacity(t.size());
    let mut cur = a.clone();
    let mut cur_t = *t;
    while cur_t.size() >= 2 {
        let graph = induced_graph(&cur, cur_t.summed);
        debug_assert!(graph.is_connected());
        let (l, n) = graph
            .non_loop_edges()
            .next()
            .expect("connected transfer graph on two or more vertices has a non-loop edge");
        let step = PeelStep::new(&cur, l, n)?;
        let peeled = peel_edge(&cur, &cur_t, &step)?;
        head.push(peeled.back);
        cur = peeled.matrix;
        cur_t = peeled.rest;
    }
    let mut moves: Vec<Move> = head.iter().map(|&t| Move::ReverseTransfer(t)).collect();
    moves.push(Move::ForwardTransfer(cur_t));
    moves.extend(head.iter().rev().map(|&t| Move::ForwardTransfer(t)));
    Ok(moves)
}
