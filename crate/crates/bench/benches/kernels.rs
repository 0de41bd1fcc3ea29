use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use rankconn_core::gf2::rank_of_rows;
use rankconn_core::{canonical_form, enumerate_graphs, parse_graph6, rank_width, CutRankTable, Graph, VertexSet};

fn petersen() -> Graph {
    parse_graph6("IheA@GUAo").unwrap()
}

fn kernels(c: &mut Criterion) {
    let rows: Vec<u64> = (0..64u64)
        .map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(i as u32))
        .collect();
    c.bench_function("rank 64x64", |b| b.iter(|| rank_of_rows(black_box(&rows))));

    let g = petersen();
    let half = VertexSet::from_bits(0b11111);
    c.bench_function("cut_rank petersen", |b| {
        b.iter(|| black_box(&g).cut_rank(black_box(half)))
    });
    c.bench_function("cut-rank table petersen", |b| {
        b.iter(|| CutRankTable::new(black_box(&g)).unwrap())
    });

    let c12 = Graph::cycle(12).unwrap();
    c.bench_function("rank_width C12", |b| b.iter(|| rank_width(black_box(&c12)).unwrap()));
    c.bench_function("rank_width petersen", |b| b.iter(|| rank_width(black_box(&g)).unwrap()));

    let sevens = enumerate_graphs(7).unwrap();
    c.bench_function("canonical_form all 7-vertex graphs", |b| {
        b.iter(|| sevens.iter().map(|h| canonical_form(h).unwrap()).collect::<Vec<_>>())
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
