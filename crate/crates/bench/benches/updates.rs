use std::hint::black_box;

use cftp_coloring::phase::collapse_phase;
use cftp_coloring::random::{substream, LazyReal};
use cftp_coloring::sampler::apply_block_in_place;
use cftp_coloring::update::contract_gen;
use cftp_coloring::{generate_block, Coloring, MasterSeed, Rational};
use cftp_coloring_bench::fixture;
use criterion::{criterion_group, criterion_main, Criterion};

fn contract(c: &mut Criterion) {
    let g = fixture(400, 8);
    let (_, state) = collapse_phase(&g, 25, MasterSeed(1), 0).unwrap();
    c.bench_function("contract_gen Δ=8 k=25", |b| {
        let mut state = state.clone();
        let mut step = 0u64;
        b.iter(|| {
            step += 1;
            let v = (step % 400) as usize;
            contract_gen(&mut state, &g, v, &mut substream(MasterSeed(2), 0, step)).unwrap()
        })
    });
}

fn decode(c: &mut Criterion) {
    let g = fixture(400, 8);
    let block = generate_block(&g, 25, MasterSeed(3), 0).unwrap();
    let start = block
        .unique_coloring
        .clone()
        .unwrap_or_else(|| Coloring::new(vec![1; 400]));
    c.bench_function("apply_block n=400 Δ=8 k=25", |b| {
        b.iter(|| {
            let mut chi = start.clone();
            apply_block_in_place(&block, &g, &mut chi).unwrap();
            chi
        })
    });
}

fn lazy_compare(c: &mut Criterion) {
    let q = Rational::new(7, 17);
    c.bench_function("LazyReal draw + compare", |b| {
        let mut step = 0u64;
        b.iter(|| {
            step += 1;
            let tau = LazyReal::draw(&mut substream(MasterSeed(4), 0, step));
            black_box(tau.compare(q).unwrap())
        })
    });
}

criterion_group!(benches, contract, decode, lazy_compare);
criterion_main!(benches);
