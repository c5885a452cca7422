use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ncfourier_bench::{free_algebra, weyl_algebra};
use ncfourier_core::ncalg::NcFiltration;
use ncfourier_core::oracle::filtration_by_compositions;

fn filtration(c: &mut Criterion) {
    let free = free_algebra(&["x", "y"], 4);
    c.bench_function("filtration free(x,y) D=4", |b| b.iter(|| black_box(NcFiltration::new(&free, 4))));
    c.bench_function("oracle free(x,y) D=4", |b| b.iter(|| black_box(filtration_by_compositions(&free, 4))));
    let weyl = weyl_algebra(6);
    c.bench_function("filtration weyl D=6", |b| b.iter(|| black_box(NcFiltration::new(&weyl, 6))));
}

criterion_group!(benches, filtration);
criterion_main!(benches);
