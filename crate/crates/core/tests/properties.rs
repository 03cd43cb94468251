use std::collections::BTreeSet;

use arthurtype::amseg::{enumerate_packet, equivalent, eval, eval_ddr, psi_of, ExtMultiSegment, ExtSegment, PacketLimits};
use arthurtype::decide::{dual_ext, is_arthur, sz_decompose, ArthurVerdict, SearchLimits, SzOutcome};
use arthurtype::halfint::h;
use arthurtype::repdata::{GeneralDatum, GroupType, OrthType, Rho};
use arthurtype::unitary::{is_unitary_good_parity, weak_check, Answer, BeyondDatum, Factor, IrreducibleInput, Pi0, StubOracle, UnitaryVerdict};
use arthurtype::HalfInt;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn line(g: GroupType) -> (Rho, HalfInt) {
    match g {
        GroupType::Sp => (Rho::trivial(), h(0, 1)),
        GroupType::SOodd => (Rho::selfdual("1", OrthType::Orthogonal, 1), h(1, 2)),
    }
}

/// A valid DDR extended multi-segment on one or two lines, or `None` when the draw fails the
/// sign condition or the dimension bound.
fn ddr(seed: u64, max_dim: u64) -> Option<ExtMultiSegment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = if rng.gen_bool(0.5) { GroupType::Sp } else { GroupType::SOodd };
    let (r, b0) = line(g);
    let rhos = [r, Rho::selfdual("chi", OrthType::Orthogonal, 1)];
    let mut blocks = vec![];
    for rho in rhos.iter().take(rng.gen_range(1..=2)) {
        let mut lo = b0 + rng.gen_range(0..2);
        for _ in 0..rng.gen_range(1..=3) {
            let big_a = lo + rng.gen_range(0..3);
            let b = big_a.int_diff(lo) as u32 + 1;
            let eta = if rng.gen_bool(0.5) { 1 } else { -1 };
            blocks.push(ExtSegment::new(rho.clone(), big_a, lo, rng.gen_range(0..=b / 2), eta).ok()?);
            lo = big_a + rng.gen_range(1..3);
        }
    }
    let e = ExtMultiSegment::new(blocks, g);
    (e.is_valid() && e.dim() <= max_dim).then_some(e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution(seed in any::<u64>()) {
        let Some(e) = ddr(seed, 60) else { return Ok(()) };
        // only integral lines are certified; half-integral duals go through aubert_dual's checks
        if e.group != GroupType::Sp {
            return Ok(());
        }
        let f = dual_ext(&e).expect("DDR blocks have non-decreasing B");
        prop_assert!(f.is_valid(), "{:?}", f);
        prop_assert_eq!(f.dim(), e.dim());
        let back = dual_ext(&f).expect("dual of a dual");
        prop_assert!(equivalent(&back, &e), "{:?} -> {:?} -> {:?}", e, f, back);
    }

    #[test]
    fn ddr_evaluation_is_a_valid_datum(seed in any::<u64>()) {
        let Some(e) = ddr(seed, 60) else { return Ok(()) };
        let d = eval_ddr(&e).unwrap();
        prop_assert!(d.m.items().iter().all(|s| s.center2() < HalfInt::ZERO));
        prop_assert!(d.is_valid(), "{:?}", d.violations());
        prop_assert_eq!(d.dim(), e.dim());
        let direct = eval(&e);
        prop_assert_eq!(direct.datum(), Some(&d));
    }

    #[test]
    fn evaluations_are_arthur_and_unitary(seed in any::<u64>()) {
        let Some(e) = ddr(seed, 20) else { return Ok(()) };
        let d = eval_ddr(&e).unwrap();
        let limits = SearchLimits::with_dim(20);
        prop_assert!(matches!(is_arthur(&d, &limits).unwrap(), ArthurVerdict::Yes(_)));
        prop_assert!(matches!(is_unitary_good_parity(&d, &limits).unwrap(), UnitaryVerdict::Unitary(_)));
    }

    #[test]
    fn sz_chain_ends_at_the_input(seed in any::<u64>()) {
        let Some(e) = ddr(seed, 24) else { return Ok(()) };
        let d = eval_ddr(&e).unwrap();
        if let SzOutcome::Done(sz) = sz_decompose(&GeneralDatum::from_good(d.clone()), &SearchLimits::with_dim(24)).unwrap() {
            match sz.chain.last() {
                None => prop_assert_eq!(&sz.pi0, &d),
                Some(step) => prop_assert_eq!(step.datum.as_ref(), Some(&d)),
            }
            let mut segs: Vec<_> = sz.pi_prime.m.items().to_vec();
            for (s, k) in &sz.tau_minus {
                segs.extend(std::iter::repeat(s.clone()).take(*k as usize));
            }
            segs.sort();
            let mut want = d.m.items().to_vec();
            want.sort();
            prop_assert_eq!(segs, want);
            prop_assert_eq!(&sz.pi_prime.tempered, &d.tempered);
        }
    }

    #[test]
    fn packets_are_duplicate_free(seed in any::<u64>()) {
        let Some(e) = ddr(seed, 24) else { return Ok(()) };
        let psi = psi_of(&e).unwrap();
        let p = enumerate_packet(&psi, &PacketLimits::default()).unwrap();
        for (i, x) in p.entries.iter().enumerate() {
            for y in &p.entries[i + 1..] {
                prop_assert!(!equivalent(&x.ext, &y.ext));
            }
        }
        let data: BTreeSet<_> = p.members.iter().map(|(_, d)| d).collect();
        prop_assert_eq!(data.len(), p.members.len());
        prop_assert!(p.members.iter().any(|(_, d)| Some(d) == eval(&e).datum()));
    }

    #[test]
    fn untwisted_irreducible_inductions_are_unitary(seed in any::<u64>(), cd in proptest::collection::vec((1u32..4, 1u32..4), 0..3)) {
        let Some(e) = ddr(seed, 20) else { return Ok(()) };
        let (rv, r) = Rho::pair("r", "r_v", 1);
        let factors: Vec<Factor> = cd
            .iter()
            .enumerate()
            .map(|(i, &(c, d))| Factor { rho: if i % 2 == 0 { r.clone() } else { rv.clone() }, c, d, x: Rational64::from_integer(0) })
            .collect();
        let b = BeyondDatum { pi0: Pi0::Ext(e), factors, irreducible_input: IrreducibleInput::Asserted };
        let rep = weak_check(&b, &StubOracle(Answer::Irreducible), &SearchLimits::with_dim(20)).unwrap();
        prop_assert!(matches!(rep.verdict, UnitaryVerdict::Unitary(_)), "{:?}", rep.verdict);
    }

    #[test]
    fn weak_check_is_symmetric_in_the_dual(x in 1i64..5, y in 1i64..5, q in 11i64..20) {
        let (r, rv) = Rho::pair("r", "r_v", 1);
        let e = ExtMultiSegment::new(vec![], GroupType::SOodd);
        let fs = |a: &Rho, b: &Rho| vec![
            Factor { rho: a.clone(), c: 1, d: 1, x: Rational64::new(x, q) },
            Factor { rho: b.clone(), c: 1, d: 1, x: Rational64::new(y, q) },
        ];
        let oracle = StubOracle(Answer::Irreducible);
        let limits = SearchLimits::with_dim(10);
        let one = BeyondDatum { pi0: Pi0::Ext(e.clone()), factors: fs(&r, &rv), irreducible_input: IrreducibleInput::Asserted };
        let two = BeyondDatum { pi0: Pi0::Ext(e), factors: fs(&rv, &r), irreducible_input: IrreducibleInput::Asserted };
        let a = weak_check(&one, &oracle, &limits).unwrap().verdict;
        let b = weak_check(&two, &oracle, &limits).unwrap().verdict;
        prop_assert_eq!(a.status(), b.status());
        prop_assert_eq!(a.status() == "Unitary", x == y);
    }
}
