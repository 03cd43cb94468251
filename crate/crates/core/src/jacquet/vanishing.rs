use serde::Serialize;

use crate::halfint::HalfInt;
use crate::repdata::{LanglandsDatum, Rho, Segment, TempEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Vanishing {
    Zero,
    NonZero,
    Unknown,
}

/// The part of a datum that can contribute `ρ|·|^x` to a Jacquet module.
#[derive(Clone, Debug)]
pub struct LineView {
    pub rho: Rho,
    /// Segments on ρ, top row first.
    pub segs: Vec<Segment>,
    /// Segments on ρ^∨ (equal to `segs` when ρ is self-dual).
    pub dual_segs: Vec<Segment>,
    pub temp: Vec<(HalfInt, TempEntry)>,
}

pub fn line_view(d: &LanglandsDatum, rho: &Rho) -> LineView {
    let mut segs: Vec<Segment> = d.m.on_line(rho).cloned().collect();
    segs.sort_by(|a, b| b.x.cmp(&a.x).then(b.y.cmp(&a.y)));
    let dr = rho.dual();
    let mut dual_segs: Vec<Segment> = d.m.on_line(&dr).cloned().collect();
    dual_segs.sort_by(|a, b| b.x.cmp(&a.x).then(b.y.cmp(&a.y)));
    let temp = if rho.is_selfdual() { d.tempered.on_line(rho).collect() } else { vec![] };
    LineView { rho: rho.clone(), segs, dual_segs, temp }
}

impl LineView {
    pub fn mult(&self, z: HalfInt) -> u32 {
        self.temp.iter().find(|(w, _)| *w == z).map_or(0, |(_, e)| e.mult)
    }

    pub fn eps(&self, z: HalfInt) -> Option<i8> {
        self.temp.iter().find(|(w, _)| *w == z).map(|(_, e)| e.eps)
    }

    /// Left ends of the symmetrized line: `x_i`, `-y_j` from the dual line, and tempered `z`.
    pub fn left_ends(&self) -> Vec<HalfInt> {
        let mut out: Vec<HalfInt> = self.segs.iter().map(|s| s.x).collect();
        out.extend(self.dual_segs.iter().map(|s| -s.y));
        for (z, e) in &self.temp {
            out.extend(std::iter::repeat(*z).take(e.mult as usize));
        }
        out
    }

    pub fn count_left(&self, x: HalfInt) -> usize {
        self.left_ends().iter().filter(|e| **e == x).count()
    }
}

fn is_ladder(rows: &[Segment]) -> bool {
    rows.windows(2).all(|w| w[0].x > w[1].x && w[0].y > w[1].y)
}

/// Exponents that can lead a Jacquet module of `L(rows)`.
fn leading(rows: &[Segment], sharp: bool) -> Vec<HalfInt> {
    if sharp && is_ladder(rows) {
        let k = rows.len();
        (0..k).filter(|&i| i + 1 == k || rows[i].x - 1 > rows[i + 1].x).map(|i| rows[i].x).collect()
    } else {
        rows.iter().map(|s| s.x).collect()
    }
}

/// Exponents that can end a Jacquet module of `L(rows)`.
fn trailing(rows: &[Segment], sharp: bool) -> Vec<HalfInt> {
    if sharp && is_ladder(rows) {
        (0..rows.len()).filter(|&i| i == 0 || rows[i - 1].y > rows[i].y + 1).map(|i| rows[i].y).collect()
    } else {
        rows.iter().map(|s| s.y).collect()
    }
}

fn linked(a: &Segment, b: &Segment) -> bool {
    let (hi, lo) = if a.x >= b.x { (a, b) } else { (b, a) };
    hi.x > lo.x && hi.y > lo.y && lo.x + 1 >= hi.y
}

/// Segments split into ladders, each contiguous in some reordering of the standard module
/// that only swaps unlinked neighbours.
fn ladder_groups(rows: &[Segment]) -> Option<Vec<Vec<Segment>>> {
    let mut groups: Vec<Vec<Segment>> = vec![];
    for s in rows {
        match groups.iter_mut().find(|g| g.last().is_some_and(|t| t.x > s.x && t.y > s.y)) {
            Some(g) => g.push(s.clone()),
            None => groups.push(vec![s.clone()]),
        }
    }
    // group a must precede group b if a linked pair forces it
    let n = groups.len();
    let mut before = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a != b
                && groups[a].iter().any(|s| groups[b].iter().any(|t| linked(s, t) && s.center2() < t.center2()))
            {
                before[a][b] = true;
            }
        }
    }
    // acyclic iff repeatedly removing sources empties the graph
    let mut alive = vec![true; n];
    for _ in 0..n {
        let src = (0..n).find(|&b| alive[b] && (0..n).all(|a| !alive[a] || !before[a][b]))?;
        alive[src] = false;
    }
    Some(groups)
}

fn grouped_leading(rows: &[Segment]) -> Option<Vec<HalfInt>> {
    ladder_groups(rows).map(|gs| gs.iter().flat_map(|g| leading(g, true)).collect())
}

fn grouped_trailing(rows: &[Segment]) -> Option<Vec<HalfInt>> {
    ladder_groups(rows).map(|gs| gs.iter().flat_map(|g| trailing(g, true)).collect())
}

fn tempered_possible(v: &LineView, x: HalfInt, sharp: bool) -> bool {
    if v.temp.is_empty() || x < HalfInt::ZERO {
        return false;
    }
    if x == HalfInt::ZERO {
        return v.mult(HalfInt::ZERO) >= 2;
    }
    if v.mult(x) == 0 {
        return false;
    }
    if sharp && x >= HalfInt::ONE && v.mult(x) == 1 && v.mult(x - 1) == 1 && v.eps(x) != v.eps(x - 1) {
        return false;
    }
    true
}

fn test(d: &LanglandsDatum, rho: &Rho, x: HalfInt, sharp: bool) -> Vanishing {
    let v = line_view(d, rho);
    // nonvanishing: a left end of a segment with minimal center can be moved to the front
    if let Some(min_c) = v.segs.iter().map(|s| s.center2()).min() {
        if v.segs.iter().any(|s| s.x == x && s.center2() == min_c) {
            return Vanishing::NonZero;
        }
    }
    let temp = tempered_possible(&v, x, sharp);
    let lead = leading(&v.segs, sharp).contains(&x);
    let trail = trailing(&v.dual_segs, sharp).iter().any(|y| -*y == x);
    if !lead && !trail && !temp {
        return Vanishing::Zero;
    }
    if sharp {
        let lead = grouped_leading(&v.segs).is_none_or(|l| l.contains(&x));
        let trail = grouped_trailing(&v.dual_segs).is_none_or(|t| t.iter().any(|y| -*y == x));
        if !lead && !trail && !temp {
            return Vanishing::Zero;
        }
    }
    if sharp && v.segs.is_empty() && v.dual_segs.is_empty() && x >= HalfInt::ONE {
        let (m, m1) = (v.mult(x), v.mult(x - 1));
        if m >= 2 || (m == 1 && (m1 == 0 || (m1 == 1 && v.eps(x) == v.eps(x - 1)))) {
            return Vanishing::NonZero;
        }
    }
    Vanishing::Unknown
}

/// Sound test for `D_{ρ|·|^x}(π) = 0` built on the standard module and tempered support.
pub fn vanishing_test(d: &LanglandsDatum, rho: &Rho, x: HalfInt) -> Vanishing {
    test(d, rho, x, false)
}

/// As [`vanishing_test`], refined by ladder Jacquet modules and sign patterns of tempered summands.
pub fn vanishing_test_sharp(d: &LanglandsDatum, rho: &Rho, x: HalfInt) -> Vanishing {
    test(d, rho, x, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::h;
    use crate::repdata::{GroupType, Multisegment, TemperedParam};

    fn one() -> Rho {
        Rho::trivial()
    }

    fn temp(zs: &[(i64, i8)]) -> TemperedParam {
        let mut t = TemperedParam::new();
        for &(z, e) in zs {
            t.insert(one(), h(z, 1), 1, e).unwrap();
        }
        t
    }

    #[test]
    fn off_lattice_is_zero() {
        let d = LanglandsDatum::tempered_only(temp(&[(0, 1), (1, 1)]), GroupType::SOodd);
        assert_eq!(vanishing_test(&d, &one(), h(1, 2)), Vanishing::Zero);
        assert_eq!(vanishing_test(&d, &one(), h(5, 1)), Vanishing::Zero);
    }

    #[test]
    fn leading_segment_nonzero() {
        let seg = Segment::new(one(), h(1, 1), h(-3, 1)).unwrap();
        let d = LanglandsDatum::new(Multisegment::new(vec![seg]), TemperedParam::new(), GroupType::Sp);
        assert_eq!(vanishing_test(&d, &one(), h(1, 1)), Vanishing::NonZero);
        // the dual contributes 3
        assert_eq!(vanishing_test(&d, &one(), h(3, 1)), Vanishing::Unknown);
        assert_eq!(vanishing_test(&d, &one(), h(2, 1)), Vanishing::Zero);
    }

    #[test]
    fn tempered_sign_dependence() {
        let d = LanglandsDatum::tempered_only(temp(&[(0, 1), (1, 1)]), GroupType::SOodd);
        assert_eq!(vanishing_test(&d, &one(), h(1, 1)), Vanishing::Unknown);
        assert_eq!(vanishing_test_sharp(&d, &one(), h(1, 1)), Vanishing::NonZero);
        let d = LanglandsDatum::tempered_only(temp(&[(0, 1), (1, -1)]), GroupType::SOodd);
        assert_eq!(vanishing_test(&d, &one(), h(1, 1)), Vanishing::Unknown);
        assert_eq!(vanishing_test_sharp(&d, &one(), h(1, 1)), Vanishing::Zero);
    }

    #[test]
    fn ladder_refinement() {
        // L([0,-2],[1,-1]) is a ladder: 1 does not lead
        let s = |x, y| Segment::new(one(), h(x, 1), h(y, 1)).unwrap();
        let m = Multisegment::new(vec![s(0, -2), s(-1, -3)]);
        let d = LanglandsDatum::new(m, TemperedParam::new(), GroupType::Sp);
        assert_eq!(vanishing_test(&d, &one(), h(0, 1)), Vanishing::Unknown);
        assert_eq!(vanishing_test_sharp(&d, &one(), h(0, 1)), Vanishing::Zero);
        assert_eq!(vanishing_test(&d, &one(), h(-1, 1)), Vanishing::NonZero);
    }
}
