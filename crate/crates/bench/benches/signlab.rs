use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use signlab_core::roots::{chamber_involution_certificate, chamber_samples, siegel};
use signlab_core::{
    CharacterTable, FiniteMatrixGroup, GroupAutomorphism, GroupFamily, SignLab, CATALOG_ORDER_BOUND,
};

fn gl(n: usize, q: u32) -> FiniteMatrixGroup {
    FiniteMatrixGroup::load_or_build(GroupFamily::Gl, n, q, CATALOG_ORDER_BOUND, None).unwrap()
}

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("character-table");
    g.sample_size(10);
    for (n, q) in [(2, 3), (2, 5), (3, 2)] {
        let group = gl(n, q);
        g.bench_function(group.label().to_string(), |b| {
            b.iter(|| CharacterTable::compute(black_box(&group)).unwrap())
        });
    }
    g.finish();
}

fn indicators(c: &mut Criterion) {
    let group = gl(2, 7);
    let table = CharacterTable::compute(&group).unwrap();
    let lab = SignLab::new(&group, &table).unwrap();
    let ti = GroupAutomorphism::transpose_inverse(&group).unwrap();
    c.bench_function("sign-report GL_2(F_7)", |b| {
        b.iter(|| lab.sign_report(black_box(&ti)).unwrap())
    });
}

fn certificates(c: &mut Criterion) {
    let f = siegel(4).unwrap();
    let samples = chamber_samples(&f.datum, &f.parabolic, 1000, 0).unwrap();
    c.bench_function("chamber certificate siegel B4", |b| {
        b.iter(|| {
            chamber_involution_certificate(
                &f.datum,
                &f.involution,
                &f.parabolic,
                black_box(&samples),
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, tables, indicators, certificates);
criterion_main!(benches);
