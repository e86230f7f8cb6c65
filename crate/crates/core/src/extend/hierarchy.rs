//! The dual hierarchy: the least `k` with `(Id ⊗ P_Sym)(x ⊗ y^{⊗(k−1)})` in the `k`-fold minimal product.

use itertools::Itertools;

use crate::cone::{BasedCone, Cone};
use crate::error::{Error, Result};
use crate::extend::products::{in_max_interior, kron};
use crate::linalg::Vector;
use crate::lp::{conic_membership, ConicMembership};
use crate::scalar::Rational;
use crate::tensor::symmetric_product_coordinates;

pub const DEFAULT_MAX_LEVEL: usize = 6;

/// Term `weight · a ⊗ P_Sym(b_{j₁} ⊗ ⋯ ⊗ b_{j_k})` with `a` and the `b`'s extreme rays.
#[derive(Clone, Debug, PartialEq)]
pub struct MinTerm {
    pub a_ray: usize,
    pub b_rays: Vec<usize>,
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HierarchyOutcome {
    Found { level: usize, terms: Vec<MinTerm> },
    Exhausted { max_level: usize },
}

/// Symmetric coordinates of `(Id ⊗ P_Sym)(x ⊗ y^{⊗(k−1)})`, row index of `x` major.
pub fn symmetrized_lift(x: &[Rational], na: usize, y: &[Rational], k: usize) -> Vector {
    let nb = y.len();
    (0..na)
        .flat_map(|a| {
            let mut factors = vec![x[a * nb..(a + 1) * nb].to_vec()];
            factors.extend(std::iter::repeat(y.to_vec()).take(k - 1));
            symmetric_product_coordinates(&factors)
        })
        .collect()
}

/// Generators `a ⊗ P_Sym(b_{j₁} ⊗ ⋯ ⊗ b_{j_k})` of the symmetric part of `C_A ⊗min C_B^{⊗min k}`.
pub fn symmetric_min_generators(
    a: &Cone,
    b: &Cone,
    k: usize,
) -> (Vec<(usize, Vec<usize>)>, Vec<Vector>) {
    let labels: Vec<(usize, Vec<usize>)> = (0..a.rays().len())
        .cartesian_product((0..b.rays().len()).combinations_with_replacement(k))
        .collect();
    let gens = labels
        .iter()
        .map(|(i, m)| {
            let bs: Vec<Vector> = m.iter().map(|&j| b.rays()[j].clone()).collect();
            kron(&a.rays()[*i], &symmetric_product_coordinates(&bs))
        })
        .collect();
    (labels, gens)
}

/// Searches `k = 1, …, max_level`. `y` is the base point of `b`.
pub fn dual_hierarchy_k(
    x: &[Rational],
    a: &Cone,
    b: &BasedCone,
    max_level: usize,
) -> Result<HierarchyOutcome> {
    let (na, nb) = (a.ambient_dim(), b.dim());
    if x.len() != na * nb {
        return Err(Error::DimensionMismatch(format!(
            "point of length {} for a {na}×{nb} product",
            x.len()
        )));
    }
    if !in_max_interior(x, a, b.cone()) {
        return Err(Error::NotInterior);
    }
    let y = b.base_point();
    for k in 1..=max_level {
        let target = symmetrized_lift(x, na, &y, k);
        let (labels, gens) = symmetric_min_generators(a, b.cone(), k);
        if let ConicMembership::Member { weights } = conic_membership(&target, &gens)? {
            let terms = labels
                .into_iter()
                .zip(weights)
                .filter(|(_, w)| !num_traits::Zero::is_zero(w))
                .map(|((a_ray, b_rays), weight)| MinTerm {
                    a_ray,
                    b_rays,
                    weight,
                })
                .collect();
            return Ok(HierarchyOutcome::Found { level: k, terms });
        }
    }
    Ok(HierarchyOutcome::Exhausted { max_level })
}
