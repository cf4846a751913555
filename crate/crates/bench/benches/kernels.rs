use criterion::{black_box, criterion_group, criterion_main, Criterion};

use nlts::cohomology::Complex;
use nlts::corpus;
use nlts::extensions::{build_extension, extensions_equivalent};
use nlts::lts::check_lts;
use nlts::operators::{grid_search_nijenhuis, DEFAULT_BUDGET};
use nlts_bench::{context, extension_data, grid, pair};

fn grid_search(c: &mut Criterion) {
    let l2 = corpus::l2();
    let vals = grid();
    c.bench_function("grid_search L2 {-1,0,1}", |b| {
        b.iter(|| grid_search_nijenhuis(black_box(&l2), &vals, DEFAULT_BUDGET).unwrap())
    });
}

fn axioms(c: &mut Criterion) {
    let sl2 = corpus::lie_system("sl2").unwrap();
    c.bench_function("check_lts sl2", |b| {
        b.iter(|| check_lts(black_box(sl2.bracket())).unwrap())
    });
}

fn differentials(c: &mut Criterion) {
    let mut g = c.benchmark_group("d");
    for name in ["L2-adjoint", "sl2-adjoint"] {
        let ctx = context(name);
        let cx = Complex::new(&ctx);
        for p in [1, 3, 5] {
            let x = pair(p, &ctx);
            g.bench_function(format!("{name} degree {p}"), |b| {
                b.iter(|| cx.d(black_box(&x)).unwrap())
            });
        }
    }
    g.finish();
}

fn cohomology(c: &mut Criterion) {
    let mut g = c.benchmark_group("cohomology_dim");
    g.sample_size(10);
    for (name, p) in [
        ("L2-adjoint", 3),
        ("L2-adjoint", 5),
        ("sl2-adjoint", 3),
        ("sl2-adjoint", 5),
    ] {
        let ctx = context(name);
        // A fresh complex each time; cochain bases stay cached across runs.
        g.bench_function(format!("{name} H{p}"), |b| {
            b.iter(|| Complex::new(&ctx).cohomology_dim(p).unwrap())
        });
    }
    g.finish();
}

fn extensions(c: &mut Criterion) {
    let ctx = context("sl2-adjoint");
    let data = extension_data(&ctx);
    c.bench_function("build+check extension sl2", |b| {
        b.iter(|| {
            build_extension(&ctx, black_box(&data))
                .unwrap()
                .check()
                .unwrap()
        })
    });
    c.bench_function("extensions_equivalent sl2 (self)", |b| {
        b.iter(|| extensions_equivalent(&ctx, &data, black_box(&data)).unwrap())
    });
}

criterion_group!(
    benches,
    grid_search,
    axioms,
    differentials,
    cohomology,
    extensions
);
criterion_main!(benches);
