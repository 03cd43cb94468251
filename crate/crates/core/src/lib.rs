//! Good-parity representations of split `Sp(2n)` and `SO(2n+1)` over a p-adic field:
//! Langlands data, extended multi-segments, Jacquet-module calculus and unitarity decisions.

pub mod amseg;
pub mod cli;
pub mod decide;
pub mod halfint;
pub mod jacquet;
pub mod reason;
pub mod repdata;
pub mod unitary;

pub use halfint::HalfInt;
