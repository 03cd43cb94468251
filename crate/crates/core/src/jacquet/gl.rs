use super::{GLSymbol, Groth, JacError};

/// Semisimplified Jacquet module along `(n1, n2, n3)`, as triple tensors.
pub fn gl_jacquet(sym: &GLSymbol, split: (u64, u64, u64)) -> Result<Groth<Vec<GLSymbol>>, JacError> {
    let (n1, n2, n3) = split;
    let size = sym.size();
    if n1 + n2 + n3 != size {
        return Err(JacError::SizeMismatch { split: vec![n1, n2, n3], size });
    }
    let mut out = Groth::zero();
    for (a, rest, c) in sym.cuts() {
        if a.size() != n1 {
            continue;
        }
        for (b, d, e) in rest.cuts() {
            if b.size() == n2 {
                out.add_term(vec![a.clone(), b, d], c * e);
            }
        }
    }
    Ok(out)
}
