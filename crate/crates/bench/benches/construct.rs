use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pda_forge::design::catalog_design;
use pda_forge::hpda::{hpda_from_scheme2, verify_hpda};
use pda_forge::pda::verify_pda;
use pda_forge::schemes::{scheme1_construct, scheme2_construct};
use pda_forge::sim::{
    run_flat, run_hierarchical, Demand, FileLibrary, SimOptions, DEFAULT_PACKET_BYTES,
};

fn construction(c: &mut Criterion) {
    let d = catalog_design("des_3_8_4_1").unwrap();
    c.bench_function("scheme I 3-(8,4,1) i=2", |b| {
        b.iter(|| scheme1_construct(black_box(&d), 2).unwrap())
    });
    c.bench_function("scheme II 3-(8,4,1) i=2", |b| {
        b.iter(|| scheme2_construct(black_box(&d), 2).unwrap())
    });
}

fn verification(c: &mut Criterion) {
    let d = catalog_design("des_3_8_4_1").unwrap();
    let p = scheme2_construct(&d, 2).unwrap().pda;
    c.bench_function("verify (56,28,25,8)", |b| {
        b.iter(|| verify_pda(black_box(&p)).unwrap())
    });
    let q = hpda_from_scheme2(&d, 2).unwrap();
    c.bench_function("verify HPDA scheme II i=2", |b| {
        b.iter(|| verify_hpda(black_box(&q)).unwrap())
    });
}

fn simulation(c: &mut Criterion) {
    let d = catalog_design("des_3_8_4_1").unwrap();
    let p = scheme1_construct(&d, 2).unwrap().pda;
    let lib = FileLibrary::random(p.k(), p.f(), DEFAULT_PACKET_BYTES, 1);
    let demand = Demand::random_flat(p.k(), p.k(), 1);
    c.bench_function("flat sim (84,8,6,24)", |b| {
        b.iter(|| run_flat(black_box(&p), &lib, &demand, SimOptions::default()).unwrap())
    });
    let q = hpda_from_scheme2(&d, 2).unwrap();
    let n = q.k1() * q.k2();
    let lib = FileLibrary::random(n, q.f(), DEFAULT_PACKET_BYTES, 1);
    let demand = Demand::random_hierarchical(q.k1(), q.k2(), n, 1);
    c.bench_function("hierarchical sim scheme II i=2", |b| {
        b.iter(|| run_hierarchical(black_box(&q), &lib, &demand, SimOptions::default()).unwrap())
    });
}

criterion_group!(benches, construction, verification, simulation);
criterion_main!(benches);
