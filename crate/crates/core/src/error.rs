use thiserror::Error;

use crate::graph::{Edge, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("loop ({0},{0}) is not allowed")]
    Loop(VertexId),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge {0} is not in the graph")]
    MissingEdge(Edge),
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexId),

    #[error("invalid embedding: {0}")]
    Embedding(String),
    #[error("edge {0} crosses twice")]
    EdgeCrossesTwice(Edge),
    #[error("not 2-cell for declared surface: expected Euler characteristic {expected}, found {found}")]
    NotTwoCell { expected: i64, found: i64 },
    #[error("unknown segment (dart {0})")]
    UnknownSegment(usize),

    #[error("rule table: {0}")]
    RuleTable(String),
    #[error("rule-table conflict: rules {first} and {second} both match {sender} -> {receiver}")]
    RuleConflict {
        first: String,
        second: String,
        sender: VertexId,
        receiver: VertexId,
    },
    #[error("vertex {vertex} has G*-degree {degree}, below the semi-fan threshold {threshold}")]
    CenterDegreeTooSmall {
        vertex: VertexId,
        degree: usize,
        threshold: i64,
    },

    #[error("coloring is partial: {0} uncolored element(s)")]
    PartialColoring(usize),
    #[error("color {color} is outside the palette 1..={kappa}")]
    ColorOutOfRange { color: usize, kappa: usize },
    #[error("exact solver budget exceeded: {elements} elements > budget {budget}; use the heuristic solver")]
    BudgetExceeded { elements: usize, budget: usize },
    #[error("P1 precondition violated: {0}")]
    P1Precondition(String),
    #[error("P3 precondition violated: {0}")]
    P3Precondition(String),
    #[error("kappa {kappa} is below Delta + 2 = {needed}")]
    KappaTooSmall { kappa: usize, needed: usize },

    #[error("generator: {0}")]
    Generator(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
