//! Standard cones and polytopes used by the tests, benches and shipped fixture files.

use crate::cone::{make_based, make_cone, BasedCone, Cone};
use crate::linalg::{vector, Vector};
use crate::polytope::Polytope;
use crate::scalar::Rational;

fn homogenize(points: &[&[i64]]) -> Vec<Vector> {
    points
        .iter()
        .map(|p| {
            let mut v = vec![1];
            v.extend_from_slice(p);
            vector(&v)
        })
        .collect()
}

fn first_coordinate(n: usize) -> Vector {
    let mut v = vec![Rational::int(0); n];
    v[0] = Rational::int(1);
    v
}

pub const SQUARE: [&[i64]; 4] = [&[1, 0], &[-1, 0], &[0, 1], &[0, -1]];
pub const TRIANGLE: [&[i64]; 3] = [&[0, 0], &[1, 0], &[0, 1]];
/// Listed in boundary order, so consecutive points span an edge.
pub const PENTAGON: [&[i64]; 5] = [&[0, 0], &[2, 0], &[3, 2], &[1, 3], &[-1, 2]];
pub const QUADRILATERAL: [&[i64]; 4] = [&[0, 0], &[2, 0], &[1, 1], &[0, 1]];
pub const CUBE: [&[i64]; 8] = [
    &[0, 0, 0],
    &[1, 0, 0],
    &[0, 1, 0],
    &[1, 1, 0],
    &[0, 0, 1],
    &[1, 0, 1],
    &[0, 1, 1],
    &[1, 1, 1],
];
pub const PRISM: [&[i64]; 6] = [
    &[0, 0, 0],
    &[1, 0, 0],
    &[0, 1, 0],
    &[0, 0, 1],
    &[1, 0, 1],
    &[0, 1, 1],
];
pub const OCTAHEDRON: [&[i64]; 6] = [
    &[1, 0, 0],
    &[-1, 0, 0],
    &[0, 1, 0],
    &[0, -1, 0],
    &[0, 0, 1],
    &[0, 0, -1],
];

/// The cone over the square with vertices `(±1, 0)`, `(0, ±1)`.
pub fn square_cone() -> Cone {
    cone_over(&SQUARE)
}

/// `φ = (1, 0, 0)`: the base is the square itself.
pub fn centered_phi() -> Vector {
    vector(&[1, 0, 0])
}

/// `φ′ = (1, 1/5, 0)`: the base is a quadrilateral that is not a parallelogram.
pub fn skewed_phi() -> Vector {
    vec![Rational::int(1), Rational::ratio(1, 5), Rational::int(0)]
}

/// Cone `{(t, t·p) : t ≥ 0, p ∈ conv(points)}`.
pub fn cone_over(points: &[&[i64]]) -> Cone {
    make_cone(&homogenize(points)).expect("fixture polytope is full-dimensional")
}

/// Cone over `points` based at height one.
pub fn based_over(points: &[&[i64]]) -> BasedCone {
    let c = cone_over(points);
    let phi = first_coordinate(c.ambient_dim());
    make_based(&c, &phi).expect("height functional is interior")
}

pub fn polytope(points: &[&[i64]]) -> Polytope {
    Polytope::from_vertices(&points.iter().map(|p| vector(p)).collect::<Vec<_>>())
        .expect("fixture polytope")
}

/// Named based cones covering simplices, products of simplices and non-products.
pub fn based_corpus() -> Vec<(&'static str, BasedCone)> {
    let square = square_cone();
    vec![
        (
            "segment",
            make_based(&Cone::orthant(2), &vector(&[1, 1])).unwrap(),
        ),
        (
            "triangle",
            make_based(&Cone::orthant(3), &vector(&[1, 1, 1])).unwrap(),
        ),
        ("square", make_based(&square, &centered_phi()).unwrap()),
        ("square-skewed", make_based(&square, &skewed_phi()).unwrap()),
        ("pentagon", based_over(&PENTAGON)),
        ("quadrilateral", based_over(&QUADRILATERAL)),
        ("cube", based_over(&CUBE)),
        ("prism", based_over(&PRISM)),
        ("octahedron", based_over(&OCTAHEDRON)),
        (
            "tetrahedron",
            make_based(&Cone::orthant(4), &vector(&[1, 1, 1, 1])).unwrap(),
        ),
    ]
}

/// The seven polygons and polyhedra of the commutation corpus.
pub fn polytope_corpus() -> Vec<(&'static str, Polytope)> {
    vec![
        ("triangle", polytope(&TRIANGLE)),
        ("square", polytope(&SQUARE)),
        ("cube", polytope(&CUBE)),
        ("prism", polytope(&PRISM)),
        ("pentagon", polytope(&PENTAGON)),
        ("quadrilateral", polytope(&QUADRILATERAL)),
        ("octahedron", polytope(&OCTAHEDRON)),
    ]
}
