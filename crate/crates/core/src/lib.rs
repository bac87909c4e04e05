//! Toolkit for total colorings of 1-toroidal graphs: 1-embeddings as rotation
//! systems, the augmented graph G*, exact-rational discharging, total-coloring
//! solvers and extension procedures, minimality audits and generators.

pub mod augment;
pub mod cli;
pub mod coloring;
pub mod discharging;
pub mod embedding;
pub mod error;
pub mod gen;
pub mod graph;
pub mod reducibility;
pub mod scalar;

pub use augment::{AugmentedGraph, VertexClass};
pub use discharging::ChargeLedger;
pub use embedding::{EmbeddedGraph, Surface};
pub use error::{Error, Result};
pub use graph::{Edge, SimpleGraph, VertexId};
pub use scalar::{Charge, Frac};

/// Exact charge scalar used by every pipeline.
pub type Rational = num_rational::BigRational;
/// Fixed-width exact charges; enough for any single configuration.
pub type SmallRational = num_rational::Ratio<i64>;
/// Ledger over exact rationals.
pub type ExactLedger = ChargeLedger<Rational>;
/// Ledger over `f64`, for quick experiments; conservation is checked with a
/// tolerance.
pub type FloatLedger = ChargeLedger<f64>;
