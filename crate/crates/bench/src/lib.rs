//! Criterion workloads for the exact cone routines.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use extcone::extend::{bipartite, ext_k_membership, is_entanglement_breaking, min_membership};
use extcone::quantum::{build_x, eta, psd_check_exact, symmetric_lift};
use extcone::{fixtures, make_based, BasedCone, Cone, DenseTensor, QuadScalar, Rational};

/// Square cone with the skewed base functional, and a point inside the max product.
pub fn skewed_square() -> (Cone, BasedCone, DenseTensor) {
    let s = fixtures::square_cone();
    let b = make_based(&s, &fixtures::skewed_phi()).expect("interior functional");
    let x = bipartite(
        [22, 10, 0, 1, 7, 6, 1, 7, -6]
            .iter()
            .map(|&v| Rational::int(v))
            .collect(),
        3,
        3,
    )
    .expect("3x3 point");
    (s, b, x)
}

fn dualize(c: &mut Criterion) {
    let mut g = c.benchmark_group("dualize");
    for (name, pts) in [
        ("cube", &fixtures::CUBE[..]),
        ("prism", &fixtures::PRISM[..]),
        ("octahedron", &fixtures::OCTAHEDRON[..]),
    ] {
        let cone = fixtures::cone_over(pts);
        g.bench_function(name, |b| b.iter(|| black_box(&cone).dualize()));
    }
    g.finish();
}

fn membership(c: &mut Criterion) {
    let (a, b, x) = skewed_square();
    let mut g = c.benchmark_group("ext_k_membership");
    g.sample_size(10);
    for k in 1..=3 {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |bench, &k| {
            bench.iter(|| ext_k_membership(black_box(&x), &a, &b, k).expect("verdict"))
        });
    }
    g.finish();
    c.bench_function("min_membership/square", |bench| {
        bench.iter(|| min_membership(black_box(x.entries()), &a, b.cone()).expect("verdict"))
    });
}

fn entanglement_breaking(c: &mut Criterion) {
    let mut g = c.benchmark_group("eb");
    g.sample_size(10);
    for (name, b) in fixtures::based_corpus()
        .into_iter()
        .filter(|(n, _)| ["square", "pentagon", "cube"].contains(n))
    {
        g.bench_function(name, |bench| {
            bench.iter(|| is_entanglement_breaking(black_box(&b), 2).expect("verdict"))
        });
    }
    g.finish();
}

fn polytopes(c: &mut Criterion) {
    let mut g = c.benchmark_group("polytope");
    for (name, p) in fixtures::polytope_corpus() {
        g.bench_function(BenchmarkId::new("hull_commutation", name), |b| {
            b.iter(|| {
                black_box(&p)
                    .affine_hull_commutes()
                    .expect("small polytope")
            })
        });
    }
    g.finish();
}

fn quantum(c: &mut Criterion) {
    let one = QuadScalar::from(1);
    let w = build_x(&one, &eta(), &(-(&eta() * &QuadScalar::from(2))));
    let lifted = symmetric_lift(&w).expect("9x9 operator");
    c.bench_function("psd_check/27x27", |b| {
        b.iter(|| psd_check_exact(black_box(&lifted)).expect("symmetric"))
    });
}

pub fn benchmarks(c: &mut Criterion) {
    dualize(c);
    membership(c);
    entanglement_breaking(c);
    polytopes(c);
    quantum(c);
}
