//! Shared fixtures for the benchmarks.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncfourier_core::dsl::{parse_group, parse_presentation};
use ncfourier_core::fmkernel::{FiniteAbGroup, Kernel};
use ncfourier_core::ncalg::{Presentation, TruncatedAlgebra};

pub fn group(spec: &str) -> FiniteAbGroup {
    parse_group(spec).expect("valid group")
}

/// `count` seeded dense kernels on `g × g`.
pub fn random_kernels(g: &FiniteAbGroup, count: usize, seed: u64) -> Vec<Kernel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| Kernel::random(g, g, &mut rng).expect("random kernel")).collect()
}

pub fn free_algebra(gens: &[&str], bound: usize) -> TruncatedAlgebra {
    TruncatedAlgebra::from_presentation(&Presentation::free(gens, bound)).expect("free algebra")
}

pub fn weyl_algebra(bound: usize) -> TruncatedAlgebra {
    let p = parse_presentation(&format!("gens x:0, d:1; rel d*x - x*d - 1; bound {bound};")).expect("weyl");
    TruncatedAlgebra::from_presentation(&p).expect("weyl algebra")
}
