use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use polyforge::arrangement::{complement_betti, AffineSubspace, Arrangement};
use polyforge::cct::{check_convex_position, ct_symmetric, kappa_chain};
use polyforge::complexcore::SimplicialComplex;
use polyforge::hirschpath::{combinatorial_segment, dual_diameter, SegmentTarget};
use polyforge::morse::{collapse_search, CollapseTarget, HasseDiagram, SearchConfig};
use polyforge::projective::{build_k_configuration, compile_polynomial, eval_scalar, IntPoly};
use polyforge::FieldElem;

fn kappa(c: &mut Criterion) {
    c.bench_function("kappa_chain/10", |b| b.iter(|| kappa_chain(black_box(10)).unwrap()));
}

fn torus(c: &mut Criterion) {
    let mut g = c.benchmark_group("torus");
    g.sample_size(10);
    for n in [3usize, 6] {
        g.bench_with_input(BenchmarkId::new("build", n), &n, |b, &n| b.iter(|| ct_symmetric(n).unwrap()));
        let t = ct_symmetric(n).unwrap();
        g.bench_with_input(BenchmarkId::new("convexity", n), &t, |b, t| b.iter(|| check_convex_position(t).unwrap()));
    }
    g.finish();
}

fn paths(c: &mut Criterion) {
    let s = SimplicialComplex::simplex_boundary(5).derived_subdivision();
    c.bench_function("segment/sd_boundary_4simplex", |b| {
        b.iter(|| combinatorial_segment(&s, 0, &SegmentTarget::Facet(black_box(119))).unwrap())
    });
    c.bench_function("diameter/sd_boundary_4simplex", |b| b.iter(|| dual_diameter(&s).unwrap()));
}

fn morse(c: &mut Criterion) {
    let h = HasseDiagram::of_simplicial(&SimplicialComplex::simplex(5).derived_subdivision());
    c.bench_function("collapse/sd_4simplex", |b| {
        b.iter(|| collapse_search(&h, &CollapseTarget::Point, &SearchConfig::default()).unwrap())
    });
}

fn arrangements(c: &mut Criterion) {
    let planes = vec![
        AffineSubspace::from_ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0]], &[0, 0, 0, 0]),
        AffineSubspace::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1]], &[0, 0, 0, 0]),
        AffineSubspace::from_ints(&[&[1, 0, 1, 0], &[0, 1, 0, 1]], &[0, 0, 0, 0]),
        AffineSubspace::from_ints(&[&[1, 0, 0, 1], &[0, 1, 1, 0]], &[1, 0, 0, 0]),
    ];
    let arr = Arrangement::new(4, planes).unwrap();
    c.bench_function("betti/four_planes_r4", |b| b.iter(|| complement_betti(&arr).unwrap()));
}

fn projective(c: &mut Criterion) {
    let prog = compile_polynomial(&IntPoly(vec![-2, 0, 1])).unwrap();
    c.bench_function("staudt/x2-2", |b| b.iter(|| eval_scalar(&prog, &[FieldElem::sqrt2()]).unwrap()));
    let mut g = c.benchmark_group("k_config");
    g.sample_size(10);
    g.bench_function("build", |b| b.iter(|| build_k_configuration().unwrap()));
    g.finish();
}

criterion_group!(benches, kappa, torus, paths, morse, arrangements, projective);
criterion_main!(benches);
