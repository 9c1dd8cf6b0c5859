use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

use lgfree_core::element::Element;
use lgfree_core::freeness::{build_chain_successor, multi_prime_compose, smooth_chain_check, ComposeOptions};
use lgfree_core::group::semibasic_decompose;
use lgfree_core::hnf;
use lgfree_core::ordinal::Ordinal;
use lgfree_core::presets::{discrete_ambient, limit_q_group, two_prime_group};
use lgfree_core::space::ClopenBlock;

/// Lower-triangular factorial-flavoured system, the shape chain steps produce.
fn system(n: usize) -> (hnf::Matrix, Vec<BigInt>) {
    let m: hnf::Matrix = (0..n)
        .map(|i| (0..n).map(|j| if j <= i { BigInt::from((i + 1) * (j + 2)) } else { BigInt::from(0) }).collect())
        .collect();
    let target = hnf::mul_row(&vec![BigInt::from(3); n], &m, n);
    (m, target)
}

fn hermite_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("hermite_solve");
    for n in [8usize, 16, 32] {
        let (m, v) = system(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| hnf::solve_left(black_box(&m), black_box(&v)))
        });
    }
    g.finish();
}

fn chain_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("chain");
    for r in [2u64, 4, 6] {
        let group = limit_q_group(r + 3);
        g.bench_with_input(BenchmarkId::new("successor", r), &r, |b, &r| {
            b.iter(|| build_chain_successor(black_box(&group), r).expect("chain builds"))
        });
    }
    let cert = build_chain_successor(&limit_q_group(9), 6).expect("chain builds");
    g.bench_function("check", |b| b.iter(|| smooth_chain_check(black_box(&cert))));
    let two = two_prime_group(6);
    let w: Ordinal = "w".parse().expect("literal");
    let w2: Ordinal = "w*2".parse().expect("literal");
    let blocks = [
        ClopenBlock::new(Ordinal::zero(), w.clone()).expect("block"),
        ClopenBlock::new(w, w2).expect("block"),
    ];
    g.bench_function("compose", |b| {
        b.iter(|| multi_prime_compose(black_box(&two), &blocks, ComposeOptions { depth: 3 }).expect("composes"))
    });
    g.finish();
}

fn semibasic(c: &mut Criterion) {
    let amb = discrete_ambient("w^2+1".parse().expect("literal"));
    let e = |s: &str| Element::basis(&amb, &s.parse().expect("literal")).expect("finite prime");
    let family: BTreeMap<Ordinal, Element> = [
        ("0", e("0")),
        ("1", e("1")),
        ("w", &e("w") + &e("0")),
        ("w*2", &e("w*2") + &e("1")),
        ("w^2", &(&e("w^2") + &e("w")) + &e("w*2").scale_i64(2)),
    ]
    .into_iter()
    .map(|(x, q)| (x.parse().expect("literal"), q))
    .collect();
    let f = family.values().enumerate().fold(Element::zero(&amb), |acc, (i, q)| &acc + &q.scale_i64(i as i64 - 2));
    let beta = Ordinal::from(2);
    c.bench_function("semibasic_decompose", |b| {
        b.iter(|| semibasic_decompose(black_box(&f), &family, &beta).expect("decomposes"))
    });
}

criterion_group!(benches, hermite_solve, chain_build, semibasic);
criterion_main!(benches);
