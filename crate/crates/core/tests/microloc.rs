use ncfourier_core::microloc::{
    associated_graded, compare_lifts, filtration_ideals, gr_n, localize_deg0, projection_check, quotient_by_t,
    rank_one_criterion, twisting_check, FilteredAlgebra, TAdicModule,
};
use ncfourier_core::{Error, NcPoly, Presentation, TruncatedAlgebra};

fn weyl(bound: usize) -> FilteredAlgebra {
    let x = NcPoly::gen(0);
    let d = NcPoly::gen(1);
    let rel = &(&(&d * &x) - &(&x * &d)) - &NcPoly::one();
    FilteredAlgebra::new(&Presentation::new(&[("x", 0), ("d", 1)], vec![rel], bound).unwrap()).unwrap()
}

/// Functions in `x` with vector fields `d`, `e`: `[d, x] = 1`, `[e, x] = x`, `[e, d] = -d`.
fn two_fields(bound: usize) -> FilteredAlgebra {
    let (x, d, e) = (NcPoly::gen(0), NcPoly::gen(1), NcPoly::gen(2));
    let rels = vec![
        &(&(&d * &x) - &(&x * &d)) - &NcPoly::one(),
        &(&(&e * &x) - &(&x * &e)) - &x,
        &(&(&e * &d) - &(&d * &e)) + &d,
    ];
    FilteredAlgebra::new(&Presentation::new(&[("x", 0), ("d", 1), ("e", 1)], rels, bound).unwrap()).unwrap()
}

#[test]
fn associated_graded_is_commutative_and_generated_in_low_degree() {
    for fa in [weyl(4), two_fields(3)] {
        let gr = associated_graded(&fa).unwrap();
        assert!(gr.algebra().is_commutative());
        assert!(gr.algebra().associativity_failure().is_none());
        let gens: Vec<_> = gr.algebra().generators().iter().map(|(_, g)| g.clone()).collect();
        assert_eq!(gr.algebra().generated_span(&gens).dim(), gr.dim());
    }
}

#[test]
fn graded_quotients_have_nilpotent_central_t() {
    let fa = weyl(4);
    for n in 1..=3 {
        let g = gr_n(&fa, n).unwrap();
        assert!(g.t_is_central(), "n={n}");
        assert!(g.t_nilpotency_holds(), "n={n}");
        assert!(g.algebra().associativity_failure().is_none(), "n={n}");
    }
}

#[test]
fn quotient_by_t_recovers_the_associated_graded() {
    for fa in [weyl(4), two_fields(3)] {
        for n in 1..=2 {
            let r = quotient_by_t(&gr_n(&fa, n).unwrap()).unwrap();
            assert!(r.is_isomorphism(), "n={n}: {r:?}");
            assert!(r.checked_pairs > 0);
        }
    }
}

#[test]
fn projections_between_levels() {
    let fa = weyl(4);
    for n in 0..=2 {
        let upper = gr_n(&fa, n + 1).unwrap();
        let lower = gr_n(&fa, n).unwrap();
        let r = projection_check(&upper, &lower).unwrap();
        assert!(r.holds(), "n={n}: {r:?}");
    }
    let g = gr_n(&fa, 2).unwrap();
    assert!(projection_check(&g, &g).is_err());
}

#[test]
fn t_adic_ideals_have_graded_layers() {
    for n in 1..=3 {
        let g = gr_n(&weyl(4), n).unwrap();
        let (ideals, r) = filtration_ideals(&g).unwrap();
        assert_eq!(ideals.len(), n + 2);
        assert!(r.holds(), "n={n}: {r:?}");
    }
}

#[test]
fn localizations_at_distinct_lifts_agree() {
    let fa = weyl(4);
    let g = gr_n(&fa, 1).unwrap();
    let a = g.algebra();
    let f = g.class_of_poly(1, &NcPoly::gen(1)).unwrap();
    let base = localize_deg0(&g, &f, 3).unwrap();
    let x = NcPoly::gen(0);
    let two_x = x.scale(&ncfourier_core::rational::int(2));
    let shifts = [NcPoly::zero(), NcPoly::one(), x.clone(), &x + &NcPoly::one(), &two_x - &NcPoly::one()];
    for s in &shifts {
        let ts = a.mul(g.t(), &g.class_of_poly(0, s).unwrap());
        let other = localize_deg0(&g, &a.add(&f, &ts), 3).unwrap();
        let r = compare_lifts(&other, &base).unwrap();
        assert!(r.is_isomorphism(), "{}: {r:?}", s.fmt_with(&["x".into(), "d".into()]));
    }
}

#[test]
fn zero_symbol_and_inhomogeneous_lifts_are_rejected() {
    let g = gr_n(&weyl(4), 1).unwrap();
    assert_eq!(localize_deg0(&g, g.t(), 3).unwrap_err(), Error::ZeroSymbol);
    let x0 = g.class_of_poly(0, &NcPoly::gen(0)).unwrap();
    assert!(matches!(localize_deg0(&g, &x0, 3).unwrap_err(), Error::NotFiltered(_)));
}

#[test]
fn twisting_bimodules_on_the_weyl_chart() {
    let g = gr_n(&weyl(4), 1).unwrap();
    let f = g.class_of_poly(1, &NcPoly::gen(1)).unwrap();
    let loc = localize_deg0(&g, &f, 3).unwrap();
    let r = twisting_check(&loc, 2).unwrap();
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.chart_dims, vec![10, 9, 7]);
}

fn truncated_series(order: usize) -> (TruncatedAlgebra, Vec<ncfourier_core::Q>) {
    let t = NcPoly::gen(0);
    let a = TruncatedAlgebra::from_presentation(&Presentation::new(&[("t", 1)], vec![t.pow(order)], order).unwrap())
        .unwrap();
    let te = a.generator("t").unwrap().clone();
    (a, te)
}

#[test]
fn rank_one_criterion_on_small_modules() {
    let (a, t) = truncated_series(4);
    let free = TAdicModule::regular(&a, &t, 4).unwrap();
    let r = rank_one_criterion(&free).unwrap();
    assert!(r.holds && r.generator_bijective);
    let sum = rank_one_criterion(&free.direct_sum(&free).unwrap()).unwrap();
    assert!(!sum.holds && !sum.generator_bijective);
    let ideal = rank_one_criterion(&TAdicModule::left_ideal(&a, &t, 4, std::slice::from_ref(&t)).unwrap()).unwrap();
    assert!(!ideal.holds && !ideal.generator_bijective && !ideal.t_regular);
}
