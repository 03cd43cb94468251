//! Segments, parameters, Langlands data and component groups.

mod cusp;
mod params;
mod segment;

use thiserror::Error;

pub use cusp::{CuspSymbol, GroupType, OrthType, Rho};
pub use params::{
    component_group, good_parity_split, phi_of_psi, validate_datum, AParameter, BadTempered, ComponentGroup,
    DatumViolation, GeneralDatum, LanglandsDatum, ParamSummand, TempEntry, TemperedParam,
};
pub use segment::{speh_grid, Multisegment, RatSegment, Segment, SpehShape};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("invalid cuspidal symbol: {0}")]
    Cusp(String),
    #[error("invalid segment {0}")]
    Segment(String),
    #[error("invalid Speh shape a={a}, b={b}, k={k}")]
    Shape { a: u32, b: u32, k: u32 },
    #[error("invalid tempered parameter: {0}")]
    Tempered(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}
