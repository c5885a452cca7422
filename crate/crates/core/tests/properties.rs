use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncfourier_core::dsl::{parse_group, parse_poly, parse_presentation, print_group};
use ncfourier_core::fmkernel::{inverse_transform, transform_kernel, FiniteAbGroup, Kernel};
use ncfourier_core::ncalg::{NcPoly, TruncatedAlgebra, Word};
use ncfourier_core::rational::{int, Q};

/// Polynomials in two letters with words of length at most `max_len`.
fn poly_strategy(max_len: usize) -> impl Strategy<Value = NcPoly> {
    let term = (prop::collection::vec(0usize..2, 0..=max_len), -5i64..=5, 1i64..=3);
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        NcPoly::from_terms(terms.into_iter().map(|(w, n, d)| (Word(w), Q::new(n.into(), d.into()))))
    })
}

fn names() -> Vec<String> {
    vec!["x".into(), "d".into()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomials_round_trip_through_text(p in poly_strategy(4)) {
        let names = names();
        prop_assert_eq!(parse_poly(&p.fmt_with(&names), &names).unwrap(), p);
    }

    #[test]
    fn groups_round_trip_through_text(moduli in prop::collection::vec(1u64..13, 1..4)) {
        let g = FiniteAbGroup::new(moduli).unwrap();
        prop_assert_eq!(parse_group(&print_group(&g)).unwrap(), g);
    }

    #[test]
    // products stay within the bound, where the truncation is exact
    fn weyl_products_are_associative(a in poly_strategy(2), b in poly_strategy(2), c in poly_strategy(2)) {
        let p = parse_presentation("gens x:0, d:1; rel d*x - x*d - 1; bound 6;").unwrap();
        let alg = TruncatedAlgebra::from_presentation(&p).unwrap();
        let (a, b, c) = (alg.eval_own(&a), alg.eval_own(&b), alg.eval_own(&c));
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
    }

    #[test]
    fn weyl_evaluation_is_multiplicative(a in poly_strategy(3), b in poly_strategy(3)) {
        let p = parse_presentation("gens x:0, d:1; rel d*x - x*d - 1; bound 6;").unwrap();
        let alg = TruncatedAlgebra::from_presentation(&p).unwrap();
        prop_assert_eq!(alg.eval_own(&(&a * &b)), alg.mul(&alg.eval_own(&a), &alg.eval_own(&b)));
    }

    #[test]
    fn transform_is_multiplicative_and_invertible(seed in any::<u64>(), spec in prop::sample::select(vec!["Z5", "Z2xZ3", "Z2xZ2"])) {
        let g = parse_group(spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Kernel::random(&g, &g, &mut rng).unwrap();
        let l = Kernel::random(&g, &g, &mut rng).unwrap();
        let (pk, pl) = (transform_kernel(&k).unwrap(), transform_kernel(&l).unwrap());
        prop_assert_eq!(transform_kernel(&k.circle(&l).unwrap()).unwrap(), pk.circle(&pl).unwrap());
        prop_assert_eq!(inverse_transform(&pk).unwrap(), k);
    }
}

#[test]
fn constants_parse_exactly() {
    let names = names();
    assert_eq!(parse_poly("-3/6", &names).unwrap(), NcPoly::constant(Q::new((-1).into(), 2.into())));
    assert_eq!(parse_poly("0", &names).unwrap(), NcPoly::constant(int(0)));
}
