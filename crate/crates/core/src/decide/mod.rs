//! Exponent bookkeeping, the initial-shape construction, SZ-decomposition and the Arthur-type search.

mod arthur;
mod aubert;
mod initial;
mod sz;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::amseg::AmsegError;
use crate::halfint::HalfInt;
use crate::repdata::{DatumViolation, LanglandsDatum, Rho};

pub use arthur::{candidate_lines, is_arthur, witnesses, ArthurVerdict, SearchLimits};
pub use aubert::{aubert_dual, dual_ext, AubertOutcome};
pub use initial::{
    check_initial_hypotheses, construct_initial, initial_window_candidates, initial_witness, InitialFailure, InitialOutcome, InitialWindows, LineWindows,
};
pub use sz::{sz_decompose, Block, ChainStep, SzOutcome, SZDecomposition, TauBad};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("datum dimension {dim} exceeds the bound {bound}")]
    DimensionBound { dim: u64, bound: u64 },
    #[error("invalid datum: {0:?}")]
    Invalid(Vec<DatumViolation>),
    #[error("no windows given for {0}")]
    Windows(String),
    #[error(transparent)]
    Amseg(#[from] AmsegError),
}

/// Which list an exponent slot belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    L,
    R,
    T,
}

/// `L_x`, `R_x` and `T_x` on one line. Segments and tempered copies are numbered from 1 in
/// canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bookkeeping {
    pub l: BTreeMap<HalfInt, Vec<usize>>,
    pub r: BTreeMap<HalfInt, Vec<usize>>,
    pub t: BTreeMap<HalfInt, Vec<usize>>,
}

impl Bookkeeping {
    fn get(m: &BTreeMap<HalfInt, Vec<usize>>, x: HalfInt) -> &[usize] {
        m.get(&x).map_or(&[], Vec::as_slice)
    }

    pub fn l_x(&self, x: HalfInt) -> &[usize] {
        Self::get(&self.l, x)
    }

    pub fn r_x(&self, x: HalfInt) -> &[usize] {
        Self::get(&self.r, x)
    }

    pub fn t_x(&self, x: HalfInt) -> &[usize] {
        Self::get(&self.t, x)
    }

    /// `|A_x|`.
    pub fn size(&self, x: HalfInt) -> usize {
        self.l_x(x).len() + self.r_x(x).len() + self.t_x(x).len()
    }

    /// The `x` with `A_x` nonempty.
    pub fn support(&self) -> BTreeSet<HalfInt> {
        self.l.keys().chain(self.r.keys()).chain(self.t.keys()).copied().collect()
    }

    /// The unique slot when `|A_x| = 1`.
    pub fn single(&self, x: HalfInt) -> Option<Slot> {
        match (self.l_x(x).len(), self.r_x(x).len(), self.t_x(x).len()) {
            (1, 0, 0) => Some(Slot::L),
            (0, 1, 0) => Some(Slot::R),
            (0, 0, 1) => Some(Slot::T),
            _ => None,
        }
    }

    pub fn total(&self) -> usize {
        self.support().into_iter().map(|x| self.size(x)).sum()
    }
}

/// Index sets read off `L(Δ[x_1,-y_1], …; π(⊕ ρ ⊠ S_{2z_j+1}, ε))` on the line of ρ.
pub fn bookkeeping(d: &LanglandsDatum, rho: &Rho) -> Bookkeeping {
    let mut bk = Bookkeeping::default();
    for (i, s) in d.m.on_line(rho).enumerate() {
        bk.l.entry(s.x).or_default().push(i + 1);
        bk.r.entry(-s.y).or_default().push(i + 1);
    }
    let mut j = 0;
    for (z, e) in d.tempered.on_line(rho) {
        for _ in 0..e.mult {
            j += 1;
            bk.t.entry(z).or_default().push(j);
        }
    }
    bk
}
