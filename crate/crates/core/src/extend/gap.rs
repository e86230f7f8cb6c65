//! Points of `Ext_k` outside the minimal product, and vertices of max-product slices.

use num_traits::Zero;

use crate::cone::{make_cone, BasedCone, Cone};
use crate::error::{Error, Result};
use crate::extend::membership::{bipartite, ExtProblem};
use crate::extend::products::{kron_all, max_tensor_halfspaces, min_tensor_generators};
use crate::linalg::{self, Vector};
use crate::lp::{solve, LpOutcome, LpProblem};
use crate::scalar::Rational;
use crate::tensor::{symmetric_product_coordinates, DenseTensor};

/// A point of `Ext_k` together with the min-product facet it violates.
#[derive(Clone, Debug, PartialEq)]
pub struct GapPoint {
    pub point: DenseTensor,
    pub level: usize,
    /// Facet functional of `C_A ⊗min C_B` that is negative on `point`.
    pub functional: Vector,
}

fn sum_of(rows: &[Vector], n: usize) -> Vector {
    rows.iter()
        .fold(vec![Rational::zero(); n], |acc, r| linalg::add(&acc, r))
}

/// Minimizes every facet of `C_A ⊗min C_B` over the slice of `Ext_k` normalized by
/// `(Σ dual rays of C_A) ⊗ φ^{⊗k}` and returns the most negative point, scaled to
/// primitive integers. `None` means `Ext_k` equals the minimal product.
pub fn find_extension_gap(a: &Cone, b: &BasedCone, k: usize) -> Result<Option<GapPoint>> {
    let prob = ExtProblem::new(a, b, k)?;
    let (na, nb) = (a.ambient_dim(), b.dim());
    let min_facets = make_cone(&min_tensor_generators(a, b.cone()))?
        .facets()
        .to_vec();
    let red = prob.reduction_rows();
    let halfspaces = prob.halfspace_rows();
    let phis: Vec<Vector> = vec![b.phi().to_vec(); k];
    let norm_b = symmetric_product_coordinates(&phis);
    let norm_a = sum_of(a.facets(), na);
    let norm = {
        let per = norm_b.len();
        let orbits: Vec<Rational> = crate::tensor::multisets(nb, k)
            .iter()
            .map(|m| Rational::int(crate::tensor::orbit_size(m)))
            .collect();
        let mut row = Vec::with_capacity(na * per);
        for fa in &norm_a {
            for (w, o) in norm_b.iter().zip(&orbits) {
                row.push(fa * w * o);
            }
        }
        row
    };
    let mut best: Option<(Rational, Vector, Vector)> = None;
    for h in &min_facets {
        let mut objective = vec![Rational::zero(); prob.num_vars()];
        for (coef, row) in h.iter().zip(&red) {
            if coef.is_zero() {
                continue;
            }
            objective = linalg::add(&objective, &linalg::scale(row, coef));
        }
        let mut lp = LpProblem::new(prob.num_vars());
        lp.add_eq(norm.clone(), Rational::int(1));
        for r in &halfspaces {
            lp.add_ge(r.clone(), Rational::zero());
        }
        lp.minimize(objective);
        let LpOutcome::Feasible {
            point,
            optimum: Some((value, _)),
        } = solve(&lp)?
        else {
            return Err(Error::Inconsistent(
                "normalized extension slice must be bounded".into(),
            ));
        };
        if value.is_negative() && best.as_ref().map_or(true, |(v, _, _)| value < *v) {
            let x: Vector = red.iter().map(|row| linalg::dot(row, &point)).collect();
            best = Some((value, x, h.clone()));
        }
    }
    best.map(|(_, x, h)| {
        Ok(GapPoint {
            point: bipartite(linalg::primitive(&x), na, nb)?,
            level: k,
            functional: h,
        })
    })
    .transpose()
}

/// A vertex of `{z ∈ C₁ ⊗max ⋯ ⊗max C_r : N(z) = 1}` minimizing `objective`, where
/// `N` is the product of the dual-ray sums. Vertices of this slice are extreme rays.
pub fn max_product_vertex(factors: &[&Cone], objective: &[Rational]) -> Result<Vector> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyInput)?;
    let halfspaces = max_tensor_halfspaces(first, rest);
    let sums: Vec<Vector> = factors
        .iter()
        .map(|c| sum_of(c.facets(), c.ambient_dim()))
        .collect();
    let norm = kron_all(&sums);
    if objective.len() != norm.len() {
        return Err(Error::DimensionMismatch("objective length".into()));
    }
    let mut lp = LpProblem::new(norm.len());
    lp.add_eq(norm, Rational::int(1));
    for h in halfspaces {
        lp.add_ge(h, Rational::zero());
    }
    lp.minimize(objective.to_vec());
    match solve(&lp)? {
        LpOutcome::Feasible { point, .. } => Ok(point),
        _ => Err(Error::Inconsistent(
            "max-product slice must be bounded and nonempty".into(),
        )),
    }
}
