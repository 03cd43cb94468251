use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::RepError;
use crate::halfint::HalfInt;

/// Self-duality type of a self-dual representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OrthType {
    #[serde(rename = "orth")]
    Orthogonal,
    #[serde(rename = "symp")]
    Symplectic,
}

impl OrthType {
    pub fn flip(self) -> Self {
        match self {
            OrthType::Orthogonal => OrthType::Symplectic,
            OrthType::Symplectic => OrthType::Orthogonal,
        }
    }

    /// Type of `ρ ⊠ S_n` for `ρ` of type `self`.
    pub fn twist_by_sl2(self, n: u64) -> Self {
        if n % 2 == 1 {
            self
        } else {
            self.flip()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupType {
    Sp,
    SOodd,
}

impl GroupType {
    /// Type of the dual group's standard representation.
    pub fn dual_type(self) -> OrthType {
        match self {
            GroupType::Sp => OrthType::Orthogonal,
            GroupType::SOodd => OrthType::Symplectic,
        }
    }

    /// Whether a full parameter for this group has odd dimension.
    pub fn param_dim_is_odd(self) -> bool {
        matches!(self, GroupType::Sp)
    }

    pub fn dim_ok(self, dim: u64) -> bool {
        (dim % 2 == 1) == self.param_dim_is_odd()
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::Sp => f.write_str("Sp"),
            GroupType::SOodd => f.write_str("SOodd"),
        }
    }
}

/// An abstract supercuspidal representation of some GL_d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspSymbol {
    pub id: String,
    pub selfdual: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_id: Option<String>,
    #[serde(rename = "type", default = "default_orth")]
    pub orth_type: OrthType,
    #[serde(default = "default_dim")]
    pub dim: u32,
}

fn default_orth() -> OrthType {
    OrthType::Orthogonal
}

fn default_dim() -> u32 {
    1
}

/// Shared handle to a [`CuspSymbol`]; equality and order go by label.
#[derive(Clone)]
pub struct Rho(Arc<CuspSymbol>);

impl Rho {
    pub fn new(sym: CuspSymbol) -> Result<Self, RepError> {
        if sym.dim == 0 {
            return Err(RepError::Cusp(format!("{}: dimension must be positive", sym.id)));
        }
        if sym.selfdual {
            if sym.dual_id.as_deref().is_some_and(|d| d != sym.id) {
                return Err(RepError::Cusp(format!("{}: self-dual symbol with a foreign dual label", sym.id)));
            }
        } else {
            match &sym.dual_id {
                None => return Err(RepError::Cusp(format!("{}: missing dual label", sym.id))),
                Some(d) if *d == sym.id => {
                    return Err(RepError::Cusp(format!("{}: non-self-dual symbol is its own dual", sym.id)))
                }
                _ => {}
            }
        }
        Ok(Rho(Arc::new(sym)))
    }

    /// The trivial character of GL_1 (orthogonal, dimension 1), labelled "1".
    pub fn trivial() -> Self {
        Rho::selfdual("1", OrthType::Orthogonal, 1)
    }

    pub fn selfdual(id: &str, t: OrthType, dim: u32) -> Self {
        Rho::new(CuspSymbol { id: id.into(), selfdual: true, dual_id: None, orth_type: t, dim })
            .expect("valid self-dual symbol")
    }

    /// A non-self-dual symbol and its dual.
    pub fn pair(id: &str, dual: &str, dim: u32) -> (Self, Self) {
        let r = Rho::new(CuspSymbol {
            id: id.into(),
            selfdual: false,
            dual_id: Some(dual.into()),
            orth_type: OrthType::Orthogonal,
            dim,
        })
        .expect("valid pair");
        let d = r.dual();
        (r, d)
    }

    pub fn id(&self) -> &str {
        &self.0.id
    }

    pub fn dim(&self) -> u32 {
        self.0.dim
    }

    pub fn is_selfdual(&self) -> bool {
        self.0.selfdual
    }

    pub fn orth_type(&self) -> OrthType {
        self.0.orth_type
    }

    pub fn symbol(&self) -> &CuspSymbol {
        &self.0
    }

    pub fn dual(&self) -> Rho {
        if self.0.selfdual {
            return self.clone();
        }
        let s = &self.0;
        Rho(Arc::new(CuspSymbol {
            id: s.dual_id.clone().expect("checked at construction"),
            selfdual: false,
            dual_id: Some(s.id.clone()),
            orth_type: s.orth_type,
            dim: s.dim,
        }))
    }

    /// 0 when ρ already has the dual group's type, ½ otherwise.
    pub fn b_rho(&self, g: GroupType) -> HalfInt {
        if self.orth_type() == g.dual_type() {
            HalfInt::ZERO
        } else {
            HalfInt::HALF
        }
    }

    /// Whether `ρ ⊠ S_a ⊠ S_b` is self-dual of the type of the dual group.
    pub fn good_triple(&self, g: GroupType, a: u64, b: u64) -> bool {
        self.is_selfdual()
            && self.orth_type().twist_by_sl2(a).twist_by_sl2(b) == g.dual_type()
    }
}

impl PartialEq for Rho {
    fn eq(&self, o: &Rho) -> bool {
        self.0.id == o.0.id
    }
}

impl Eq for Rho {}

impl PartialOrd for Rho {
    fn partial_cmp(&self, o: &Rho) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Rho {
    fn cmp(&self, o: &Rho) -> Ordering {
        self.0.id.cmp(&o.0.id)
    }
}

impl Hash for Rho {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl fmt::Debug for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.id)
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.id)
    }
}
