use thiserror::Error;

use crate::transfer::PrimitiveTransfer;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("dimension {n} not supported (limit {limit})")]
    DimensionTooLarge { n: usize, limit: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("row {row} has bits outside 0..{n}")]
    RowOutOfRange { row: usize, n: usize },

    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },

    #[error("not a permutation of 0..{n}")]
    NotAPermutation { n: usize },

    #[error("{transfer} is not a valid primitive transfer of this matrix")]
    InvalidTransfer { transfer: PrimitiveTransfer },

    #[error("row {p} is not the indicator of M ∪ K for {transfer}")]
    NotATransferImage {
        p: usize,
        transfer: PrimitiveTransfer,
    },

    #[error("rows of M overlap or meet K, so the preimage of {transfer} is not a 0-1 matrix")]
    PreimageNotZeroOne { transfer: PrimitiveTransfer },

    #[error("edge ({source_vertex}, {target}) is a loop")]
    LoopEdge { source_vertex: usize, target: usize },

    #[error("edge ({source_vertex}, {target}) is not in the transfer graph")]
    EdgeNotInGraph { source_vertex: usize, target: usize },

    #[error("peel step columns do not match row {source_vertex}")]
    PeelColumnsMismatch { source_vertex: usize },

    #[error("transfer has size {size}, need at least {needed}")]
    TransferTooSmall { size: usize, needed: usize },

    #[error("vertex set {set} is not a weak component of the transfer graph")]
    NotAComponent { set: String },

    #[error("component {set} is the whole transfer graph")]
    WholeGraph { set: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("search exceeded the cap of {cap} states")]
    StateCapExceeded { cap: usize },

    #[error("certificate: {0}")]
    Certificate(String),
}
