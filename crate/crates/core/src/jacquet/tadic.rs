use std::collections::BTreeMap;

use super::{ClassicalLabel, ClassicalSym, GLSymbol, GrothElem, JacError, TensorSymbol};

/// Declared Jacquet modules of classical base representations: for each base, the
/// terms `c · τ ⊗ π0` with `τ` of positive rank.  Supercuspidal bases need no entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JacTable(BTreeMap<ClassicalLabel, Vec<(i64, GLSymbol, ClassicalLabel)>>);

impl JacTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, base: ClassicalLabel, terms: Vec<(i64, GLSymbol, ClassicalLabel)>) {
        self.0.insert(base, terms);
    }

    fn terms(&self, base: &ClassicalLabel) -> Result<Vec<(i64, GLSymbol, ClassicalLabel)>, JacError> {
        let mut out = vec![(1, GLSymbol::one(), base.clone())];
        match (base, self.0.get(base)) {
            (_, Some(t)) => out.extend(t.iter().cloned()),
            (ClassicalLabel::Cusp(_), None) => {}
            (ClassicalLabel::Datum(d), None) => return Err(JacError::UndeclaredTable(format!("{d:?}"))),
        }
        Ok(out)
    }
}

/// Jacquet module of `τ ⋊ π` along the maximal parabolic with Levi `GL_m × G'`:
/// the sum of `(τ1 × τ4 × τ3^∨) ⊗ (τ2 ⋊ π0)` over `τ1 ⊗ τ2 ⊗ τ3 ≤ Jac(τ)` and
/// `τ4 ⊗ π0 ≤ Jac(π)` with ranks `n1 + n3 + n4 = m`.
pub fn tadic_jacquet(tau: &GLSymbol, pi: &ClassicalSym, table: &JacTable, m: u64) -> Result<GrothElem, JacError> {
    let t = GLSymbol::product(vec![tau.clone(), pi.ind.clone()]);
    let base_terms = if m == 0 { vec![(1, GLSymbol::one(), pi.base.clone())] } else { table.terms(&pi.base)? };
    let mut out = GrothElem::zero();
    for (t1, rest, c1) in t.cuts() {
        let n1 = t1.size();
        if n1 > m {
            continue;
        }
        for (t2, t3, c2) in rest.cuts() {
            let n3 = t3.size();
            if n1 + n3 > m {
                continue;
            }
            for (c4, t4, pi0) in &base_terms {
                if n1 + n3 + t4.size() != m {
                    continue;
                }
                let gl = GLSymbol::product(vec![t1.clone(), t4.clone(), t3.dual()]);
                let cl = ClassicalSym::induced(t2.clone(), pi0.clone());
                out.add_term(TensorSymbol { gl, cl }, c1 * c2 * c4);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::h;
    use crate::repdata::Rho;

    #[test]
    fn rank_one_two_terms() {
        let r = Rho::trivial();
        let pi = ClassicalSym::cusp("sigma");
        let t = GLSymbol::cusp(&r, h(1, 1));
        let j = tadic_jacquet(&t, &pi, &JacTable::new(), 1).unwrap();
        assert_eq!(j.len(), 2);
        let base = ClassicalSym::cusp("sigma");
        assert_eq!(j.coeff(&TensorSymbol { gl: t.clone(), cl: base.clone() }), 1);
        assert_eq!(j.coeff(&TensorSymbol { gl: GLSymbol::cusp(&r, h(-1, 1)), cl: base.clone() }), 1);
        let t0 = GLSymbol::cusp(&r, h(0, 1));
        let j0 = tadic_jacquet(&t0, &pi, &JacTable::new(), 1).unwrap();
        assert_eq!(j0.len(), 1);
        assert_eq!(j0.coeff(&TensorSymbol { gl: t0, cl: base }), 2);
    }

    #[test]
    fn trivial_block() {
        let pi = ClassicalSym::cusp("sigma");
        let j = tadic_jacquet(&GLSymbol::one(), &pi, &JacTable::new(), 0).unwrap();
        assert_eq!(j.len(), 1);
        assert_eq!(j.coeff(&TensorSymbol { gl: GLSymbol::one(), cl: pi }), 1);
    }

    #[test]
    fn undeclared_datum_table() {
        use crate::repdata::{GroupType, LanglandsDatum};
        let pi = ClassicalSym { ind: GLSymbol::one(), base: ClassicalLabel::Datum(Box::new(LanglandsDatum::empty(GroupType::SOodd))) };
        let r = Rho::trivial();
        assert!(tadic_jacquet(&GLSymbol::cusp(&r, h(1, 1)), &pi, &JacTable::new(), 1).is_err());
    }
}
