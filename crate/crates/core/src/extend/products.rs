//! Minimal and maximal tensor products of cones, as generator and half-space lists.

use itertools::Itertools;

use crate::cone::{make_cone, Cone};
use crate::error::Result;
use crate::linalg::{self, Vector};
use crate::lp::{conic_membership, ConicMembership};
use crate::scalar::Rational;

/// Kronecker product of two coordinate vectors, first factor major.
pub fn kron(u: &[Rational], v: &[Rational]) -> Vector {
    u.iter()
        .flat_map(|a| v.iter().map(move |b| a * b))
        .collect()
}

/// Kronecker product of a list of vectors; the empty product is `[1]`.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a Vector>) -> Vector {
    factors
        .into_iter()
        .fold(vec![Rational::int(1)], |acc, f| kron(&acc, f))
}

/// `x ⊗ y` over all pairs of extreme rays. These generate `C_A ⊗min C_B`.
pub fn min_tensor_generators(a: &Cone, b: &Cone) -> Vec<Vector> {
    a.rays()
        .iter()
        .cartesian_product(b.rays())
        .map(|(x, y)| kron(x, y))
        .collect()
}

/// Generators of the iterated minimal product `C_1 ⊗min ⋯ ⊗min C_r`.
pub fn min_tensor_generators_multi(factors: &[&Cone]) -> Vec<Vector> {
    factors
        .iter()
        .map(|c| c.rays().iter())
        .multi_cartesian_product()
        .map(kron_all)
        .collect()
}

/// `f ⊗ g₁ ⊗ ⋯ ⊗ g_r` over the dual extreme rays of every factor. A tensor lies in
/// `C_A ⊗max C_1 ⊗max ⋯ ⊗max C_r` iff all of them are nonnegative on it.
pub fn max_tensor_halfspaces(a: &Cone, b_factors: &[&Cone]) -> Vec<Vector> {
    std::iter::once(a)
        .chain(b_factors.iter().copied())
        .map(|c| c.facets().iter())
        .multi_cartesian_product()
        .map(kron_all)
        .collect()
}

pub fn in_max_product(x: &[Rational], a: &Cone, b: &Cone) -> bool {
    max_tensor_halfspaces(a, &[b])
        .iter()
        .all(|h| !linalg::dot(h, x).is_negative())
}

/// Strict positivity on every max-product half-space.
pub fn in_max_interior(x: &[Rational], a: &Cone, b: &Cone) -> bool {
    max_tensor_halfspaces(a, &[b])
        .iter()
        .all(|h| linalg::dot(h, x).is_positive())
}

/// Decides `x ∈ C_A ⊗min C_B` with a decomposition or a separating functional.
pub fn min_membership(x: &[Rational], a: &Cone, b: &Cone) -> Result<ConicMembership> {
    conic_membership(x, &min_tensor_generators(a, b))
}

/// Outcome of comparing `C_A ⊗min C_B` with `C_A ⊗max C_B`.
#[derive(Clone, Debug, PartialEq)]
pub enum ProductComparison {
    /// Every extreme ray of the max product was decomposed into pure tensors.
    Equal,
    /// An extreme ray of the max product together with a functional separating it from min.
    Gap { point: Vector, functional: Vector },
}

/// Mutual inclusion test. `min ⊆ max` is checked on generators, `max ⊆ min` by
/// conic membership of each extreme ray of the max product.
pub fn compare_min_max(a: &Cone, b: &Cone) -> Result<ProductComparison> {
    let halfspaces = max_tensor_halfspaces(a, &[b]);
    let gens = min_tensor_generators(a, b);
    for g in &gens {
        if halfspaces.iter().any(|h| linalg::dot(h, g).is_negative()) {
            return Err(crate::Error::Inconsistent(
                "pure tensor violates a max-product half-space".into(),
            ));
        }
    }
    let max_rays = make_cone(&halfspaces)?.dualize();
    for r in max_rays.rays() {
        if let ConicMembership::Separated { functional } = conic_membership(r, &gens)? {
            return Ok(ProductComparison::Gap {
                point: r.clone(),
                functional,
            });
        }
    }
    Ok(ProductComparison::Equal)
}
