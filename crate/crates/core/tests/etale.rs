use ncfourier_core::etale::family::{free_rd, DoublePoint};
use ncfourier_core::etale::{
    check_formally_etale, derivation_transfer_check, lift_standard, nd_closure_check, solve_lifts,
    topological_invariance_harness, ActionModule, CentralExtension, PresentationMap, StandardEtale,
};
use ncfourier_core::ncalg::{abelianization, nc_filtration, NcPoly, Presentation, TruncatedAlgebra};
use ncfourier_core::rational::int;
use ncfourier_core::Q;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assert_lifts_over(base: &Presentation, seed: u64) {
    let dp = DoublePoint::over(base).unwrap();
    let fam = dp.family(20, seed, 2).unwrap();
    assert_eq!(fam.len(), 20);
    let verdict = check_formally_etale(&dp.alpha, &fam);
    assert!(verdict.verified_over_family);
    assert!(verdict.cases.iter().all(|c| c.unique));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xff);
    for d in &fam {
        assert!(d.commutes());
        let tot = d.gamma.total();
        let mut x = d.gamma.section(&d.beta.images[dp.etale.z()]);
        let mut y = d.gamma.section(&d.beta.images[dp.etale.u()]);
        for b in d.gamma.kernel_basis() {
            x = tot.add(&x, &tot.scale(b, &int(rng.random_range(-2..=2))));
            y = tot.add(&y, &tot.scale(b, &int(rng.random_range(-2..=2))));
        }
        let l = lift_standard(d, &dp.etale, &x, &y).unwrap();
        assert!(l.relations_hold && l.corrections_in_kernel && l.matches_solver);
        assert_eq!(l.lift_dimension, 0);
    }
}

#[test]
fn double_point_lifts_over_rationals() {
    assert_lifts_over(&Presentation::free(&[], 1), 11);
}

#[test]
fn double_point_lifts_over_r1() {
    assert_lifts_over(&free_rd(&["x", "y"], 1, 3).unwrap(), 12);
}

#[test]
fn nd_closure_over_rd() {
    for d in 0..=2usize {
        let base = free_rd(&["x", "y"], d, 3).unwrap();
        let dp = DoublePoint::over(&base).unwrap();
        let fam = dp.family(4, 100 + d as u64, 2).unwrap();
        assert!(!fam.is_empty());
        for diag in &fam {
            let r = nd_closure_check(diag, d);
            assert!(r.beta_surjective && r.base_in_nd && r.total_in_nd, "d={d}: {r:?}");
            assert_eq!(r.filtration_dims.len(), d + 2);
        }
    }
}

/// `A' = ⟨x, y | x², y²⟩` modulo length 3 is a central extension of its
/// abelianization but is not commutative; the commutative base has no
/// lift into it, so no diagram leaves `N_0`.
#[test]
fn noncommutative_extension_admits_no_lift() {
    let x = NcPoly::gen(0);
    let y = NcPoly::gen(1);
    let pres = Presentation::new(&[("x", 0), ("y", 0)], vec![&x * &x, &y * &y], 2).unwrap().nilpotent_truncation();
    let total = TruncatedAlgebra::from_presentation(&pres).unwrap();
    assert!(!nc_filtration(&total, 1).is_zero());
    let ab = abelianization(&total).unwrap();
    let gamma = CentralExtension::from_generator_images(total, ab.clone(), &ab.generator_images()).unwrap();
    assert_eq!(gamma.kernel_dim(), 1);
    let base = free_rd(&["x", "y"], 0, 2).unwrap();
    let images: Vec<_> = ab.generator_images().iter().map(|g| gamma.section(g)).collect();
    assert!(!solve_lifts(&base, &images, &gamma, &[]).exists());
}

fn dual_number_etale() -> StandardEtale {
    let t = NcPoly::gen(0);
    let r = Presentation::new(&[("t", 0)], vec![&t * &t], 2).unwrap();
    StandardEtale::new(&r, vec![NcPoly::constant(int(-1)), &NcPoly::one() + &t]).unwrap()
}

fn matrix(rows: &[[i64; 2]]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

#[test]
fn derivations_transfer_along_standard_etale() {
    let s = dual_number_etale();
    let alpha = PresentationMap::inclusion(&s.base, &s.presentation);
    let j = matrix(&[[0, 1], [0, 0]]);
    let ij = matrix(&[[1, -1], [0, 1]]);
    let m = ActionModule { dim: 2, actions: vec![j, ij.clone(), ij] };
    let r = derivation_transfer_check(&alpha, &m).unwrap();
    assert_eq!((r.source_dim, r.target_dim, r.restriction_rank), (1, 1, 1));
    assert!(r.bijective);

    let r = derivation_transfer_check(&alpha, &ActionModule::zero(3)).unwrap();
    assert_eq!((r.source_dim, r.target_dim), (0, 0));
    assert!(r.bijective);
}

#[test]
fn derivations_transfer_along_identity() {
    let s = dual_number_etale();
    let id = PresentationMap::identity(&s.base);
    let zero = vec![vec![Q::zero(); 2]; 2];
    let m = ActionModule { dim: 2, actions: vec![zero] };
    let r = derivation_transfer_check(&id, &m).unwrap();
    assert_eq!((r.source_dim, r.target_dim), (2, 2));
    assert!(r.bijective);
}

#[test]
fn module_must_satisfy_relations() {
    let s = dual_number_etale();
    let alpha = PresentationMap::inclusion(&s.base, &s.presentation);
    let i = matrix(&[[1, 0], [0, 1]]);
    let m = ActionModule { dim: 2, actions: vec![i.clone(), i.clone(), i] };
    assert!(derivation_transfer_check(&alpha, &m).is_err());
}

#[test]
fn lift_to_thickening_matches_tensor_product() {
    let a: Vec<NcPoly> = [-1, 0, 1].iter().map(|&c| NcPoly::constant(int(c))).collect();
    let xc = Presentation::free(&["x"], 2).commutative().nilpotent_truncation();
    let r = topological_invariance_harness(&xc, 0, &a).unwrap();
    assert_eq!((r.completed_dim, r.commutative_dim), (6, 6));
    assert!(r.completed_in_nd && r.abelianization_matches && r.completed_is_tensor);
    for d in 0..=2 {
        let x = free_rd(&["x", "y"], d, 2).unwrap();
        let r = topological_invariance_harness(&x, d, &a).unwrap();
        assert!(r.completed_in_nd && r.abelianization_matches && r.completed_is_tensor, "{r:?}");
        assert_eq!(r.completed_dim, r.tensor_dim);
    }
}

#[test]
fn harness_rejects_non_scalar_coefficients() {
    let x = free_rd(&["x"], 0, 2).unwrap();
    let a = vec![NcPoly::gen(0), NcPoly::one()];
    assert!(topological_invariance_harness(&x, 0, &a).is_err());
}
