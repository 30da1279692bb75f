use criterion::{black_box, criterion_group, criterion_main, Criterion};
use minorkit::boundaried::{self, BoundariedGraph};
use minorkit::decomp;
use minorkit::graph::{canonical_code, named};
use minorkit::{minor, obstruction, Budget};

fn minor_search(c: &mut Criterion) {
    let (k5, p) = (named::complete(5), named::petersen());
    c.bench_function("minor K5 in petersen", |b| b.iter(|| minor::is_minor(black_box(&k5), black_box(&p)).unwrap()));
    let (k33, g) = (named::complete_bipartite(3, 3), named::grid(4, 4));
    c.bench_function("minor K3,3 not in grid 4x4", |b| b.iter(|| minor::is_minor(black_box(&k33), black_box(&g)).unwrap()));
}

fn enumeration(c: &mut Criterion) {
    let fam = [named::complete(3)];
    c.bench_function("obstructions K3 k=1 n<=6", |b| b.iter(|| obstruction::enumerate_obstructions(&fam, 1, 6).unwrap()));
}

fn treewidth(c: &mut Criterion) {
    let g = named::grid(4, 4);
    c.bench_function("treewidth grid 4x4", |b| b.iter(|| decomp::treewidth_exact(black_box(&g), &Budget::unlimited()).unwrap()));
    let p = named::petersen();
    c.bench_function("treewidth petersen", |b| b.iter(|| decomp::treewidth_exact(black_box(&p), &Budget::unlimited()).unwrap()));
}

fn folio(c: &mut Criterion) {
    let g = BoundariedGraph::new(named::grid(3, 3), vec![0, 8]).unwrap();
    c.bench_function("folio grid 3x3 ell=2", |b| b.iter(|| boundaried::folio(black_box(&g), 2).unwrap()));
}

fn canonical(c: &mut Criterion) {
    let p = named::petersen();
    c.bench_function("canonical code petersen", |b| b.iter(|| canonical_code(black_box(&p))));
    let g = named::grid(6, 6);
    c.bench_function("canonical code grid 6x6", |b| b.iter(|| canonical_code(black_box(&g))));
}

criterion_group!(benches, minor_search, enumeration, treewidth, folio, canonical);
criterion_main!(benches);
