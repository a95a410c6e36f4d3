use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use symgal_bench::{system, SYSTEMS};
use symgal_core::exactcore::charpoly;
use symgal_core::expr_io::parse_ratfunc;
use symgal_core::galois_report::{build_report, ReportOptions};
use symgal_core::lvhier::build_lv_matrix;
use symgal_core::ratsolve::{rational_solution_basis, SolveOptions};
use symgal_core::symclass::eigenring;

fn lv_matrices(c: &mut Criterion) {
    let s = system("fuchsian3");
    let mut group = c.benchmark_group("build_lv_matrix");
    for m in 1..=3 {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| build_lv_matrix(black_box(&s), m))
        });
    }
    group.finish();
}

fn rational_solutions(c: &mut Criterion) {
    let mut group = c.benchmark_group("ratsolve_degree2");
    group.sample_size(20);
    for (name, _) in SYSTEMS {
        let lv = build_lv_matrix(&system(name), 2);
        group.bench_function(*name, |b| {
            b.iter(|| rational_solution_basis(black_box(&lv.matrix), &SolveOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn eigenrings(c: &mut Criterion) {
    let s = system("cauchy_euler");
    c.bench_function("eigenring/cauchy_euler", |b| {
        b.iter(|| eigenring(black_box(&s), &SolveOptions::default()).unwrap())
    });
}

fn reports(c: &mut Criterion) {
    let mut group = c.benchmark_group("analyze");
    group.sample_size(10);
    for (name, _) in SYSTEMS {
        let s = system(name);
        group.bench_function(*name, |b| {
            b.iter(|| build_report(black_box(&s), 2, &ReportOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn substrate(c: &mut Criterion) {
    let text = "(3*x^4 - 2*x + 1/7)/(x^3 - x) + (x - 1)^5/(x^2 + 1)";
    c.bench_function("parse_ratfunc", |b| b.iter(|| parse_ratfunc(black_box(text)).unwrap()));
    let lv = build_lv_matrix(&system("airy"), 2);
    let m = lv.matrix.eval(&symgal_core::exactcore::qint(3)).unwrap();
    c.bench_function("charpoly_6x6", |b| b.iter(|| charpoly(black_box(&m)).unwrap()));
}

criterion_group!(benches, lv_matrices, rational_solutions, eigenrings, reports, substrate);
criterion_main!(benches);
