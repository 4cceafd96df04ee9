//! Primitive transfers of 0-1 square matrices.
//!
//! A 0-1 square matrix is the vertex matrix of a finite digraph (loops
//! allowed, no multi-edges). A *primitive transfer* at pivot `p` rewrites row
//! `p` using an identity
//!
//! ```text
//! A_p = sum_{m in M} A_m + sum_{k in K} E_k
//! ```
//!
//! replacing it by the indicator row of `M ∪ K`. This crate provides:
//!
//! * [`matrix`]: matrices, digraphs, permutations and brute-force canonical forms,
//! * [`transfer`]: validation, application, inversion and enumeration of transfers,
//!   plus the induced transfer graph and its weak components,
//! * [`decompose`]: the reduction of any transfer to a chain of size-1 transfers,
//!   emitted as a replayable [`decompose::MoveSequence`] certificate,
//! * [`search`]: breadth-first search over canonical forms deciding primitive
//!   equivalence and classifying all small matrices,
//! * [`format`]: the matrix text format, certificate documents and atlas output.
//!
//! All indices are 0-based. Worked examples in the literature are usually
//! 1-based, so row 1 there is row 0 here.
//!
//! With the default `parallel` feature, enumeration, decomposition and search
//! fan out over a rayon pool. Results never depend on the thread count.

pub mod decompose;
pub mod error;
pub mod format;
pub mod matrix;
mod par;
pub mod search;
pub mod transfer;
mod union_find;
pub mod vertex_set;

pub use decompose::{decompose, peel_edge, split_component, verify, Move, MoveSequence, PeelStep};
pub use error::{Error, Result};
pub use matrix::{canonical_form, conjugate, unit_row, Digraph, Permutation, ZeroOneMatrix};

pub use search::{
    are_equivalent, classify, equivalence_class, is_irreducible, neighbors, Filter, Limits, Verdict,
};
pub use transfer::{
    apply, enumerate, invert, transfer_graph, validate, PrimitiveTransfer, TransferGraph,
};
pub use vertex_set::VertexSet;
