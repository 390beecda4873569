//! Algebraic structures on the compact matrix model: gadgets, equation
//! suites, constructions between structures, and built-in examples.

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::exponential::ExpError;
use crate::matrix::MatrixError;
use crate::model::ModelError;

pub mod builtins;
pub mod gadget;
pub mod lemmas;
pub mod ops;
pub mod pipeline;
pub mod suites;
pub mod template;

pub use gadget::Gadget;
pub use suites::{check_suite, Suite, SuiteReport, Window};

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("gadget is missing role `{0}`")]
    MissingRole(String),
    #[error("unknown role `{0}`")]
    UnknownRole(String),
    #[error("unknown suite `{0}`; known suites: {names}", names = suite_names())]
    UnknownSuite(String),
    #[error("invalid gadget: {0}")]
    Schema(String),
    #[error("`{0}` is not invertible")]
    NotInvertible(String),
    #[error("`{0}` is not idempotent (residual {1:e})")]
    NotIdempotent(String, f64),
    #[error("equation `{label}` compares a {lhs:?} matrix with a {rhs:?} matrix")]
    ShapeMismatch {
        label: String,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("gadget fails suite `{suite}` (worst residual {worst:e})")]
    SuiteFailure { suite: String, worst: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Exp(#[from] ExpError),
}

fn suite_names() -> String {
    Suite::ALL.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
}
