//! Grothendieck-group symbols, Jacquet modules, derivatives and vanishing tests.

mod derivative;
mod gl;
mod groth;
mod tadic;
mod vanishing;

use thiserror::Error;

pub use derivative::{d_chain, d_rho, d_rho_k, d_s, Derived, Target};
pub use gl::gl_jacquet;
pub use groth::{ClassicalLabel, ClassicalSym, GLSymbol, Groth, GrothElem, TensorSymbol};
pub use tadic::{tadic_jacquet, JacTable};
pub use vanishing::{line_view, vanishing_test, vanishing_test_sharp, LineView, Vanishing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacError {
    #[error("split sizes {split:?} do not add up to the rank {size}")]
    SizeMismatch { split: Vec<u64>, size: u64 },
    #[error("rows do not form a ladder: {0}")]
    NotLadder(String),
    #[error("no Jacquet table declared for {0}")]
    UndeclaredTable(String),
    #[error("inconsistent Grothendieck computation: {0}")]
    Internal(String),
}
