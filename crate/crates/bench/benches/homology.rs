use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ghom_core::af::{af_h1_check, BratteliDiagram};
use ghom_core::sft::{truncated_homology, SftSystem, StableHomology, Tableau, Word};
use ghom_core::zmat::{smith_normal_form, IntMatrix};
use ghom_core::zn_lab::{assign_markers, boundary_ratio, MarkerConfiguration};

fn full_shift_truncation(c: &mut Criterion) {
    let mut group = c.benchmark_group("truncated_homology");
    group.sample_size(10);
    for n in [2usize, 4, 6] {
        let sys = SftSystem::full_shift(n);
        group.bench_with_input(BenchmarkId::new("full_shift_h0_depth6", n), &sys, |b, s| {
            b.iter(|| truncated_homology(black_box(s), 0, 6).unwrap())
        });
    }
    let sys = SftSystem::designated();
    group.bench_function("designated_h1_depth8", |b| b.iter(|| truncated_homology(black_box(&sys), 1, 8).unwrap()));
    group.finish();
}

fn index_evaluation(c: &mut Criterion) {
    let sys = SftSystem::designated();
    let mut h = StableHomology::new(&sys, 1, 8).unwrap();
    let w = |s: &[u8]| Word::new(s.to_vec());
    let t = Tableau::from_pairs(vec![
        (w(&[0]), w(&[0, 0])),
        (w(&[1]), w(&[0, 1])),
        (w(&[2, 1]), w(&[1])),
        (w(&[2, 2]), w(&[2])),
    ]);
    c.bench_function("index_of_generator", |b| b.iter(|| h.index_of(black_box(&t)).unwrap()));
}

fn smith(c: &mut Criterion) {
    let rows: Vec<Vec<i64>> = (0..40).map(|i| (0..40).map(|j| ((i * 7 + j * 13) % 11) as i64 - 5).collect()).collect();
    let m = IntMatrix::from_rows(&rows).unwrap();
    c.bench_function("smith_normal_form_40x40", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn af_levels(c: &mut Criterion) {
    let b2 = BratteliDiagram::uhf(2);
    c.bench_function("af_h1_uhf2_level5", |b| b.iter(|| af_h1_check(black_box(&b2), 5).unwrap()));
}

fn zn_grid(c: &mut Criterion) {
    let cfg = MarkerConfiguration::grid(2, 32, None, 1).unwrap();
    c.bench_function("zn_ratio_grid_m32", |b| {
        b.iter(|| {
            let a = assign_markers(black_box(&cfg));
            boundary_ratio(&cfg, &a, 1)
        })
    });
}

criterion_group!(benches, full_shift_truncation, index_evaluation, smith, af_levels, zn_grid);
criterion_main!(benches);
