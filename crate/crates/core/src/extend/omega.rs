//! The vertex-facet tensor `ω_k = Σ_F x_F^{⊗k} ⊗ ψ_F` and its interiority test.

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::cone::BasedCone;
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::scalar::Rational;
use crate::tensor::{tensor_power, DenseTensor, Slot, Variance};

/// Vertex centroid of facet `f` of the base.
pub fn facet_centroid(b: &BasedCone, f: usize) -> Vector {
    let p = b.base();
    let on = p.face_from_facets(&[f]);
    let mut acc = vec![Rational::zero(); b.dim()];
    for &v in &on {
        acc = linalg::add(&acc, &p.vertices()[v]);
    }
    linalg::scale(&acc, &Rational::ratio(1, on.len() as i64))
}

/// `ω_k ∈ V^{⊗k} ⊗ V*`, with `x_F` the vertex centroid of `F`.
pub fn vertex_facet_tensor(b: &BasedCone, k: usize) -> Result<DenseTensor> {
    if k == 0 {
        return Err(Error::InvalidLevel);
    }
    let n = b.dim();
    let mut slots = vec![Slot::primal(n); k];
    slots.push(Slot::dual(n));
    let mut omega = DenseTensor::zeros(slots);
    for (f, psi) in b.base().facets().iter().enumerate() {
        let x = DenseTensor::vector(facet_centroid(b, f), Variance::Primal);
        let term =
            tensor_power(&x, k).kron(&DenseTensor::vector(psi.linear.clone(), Variance::Dual));
        omega = omega.add(&term)?;
    }
    Ok(omega)
}

/// `ψ_{F₁} ⊗ ⋯ ⊗ ψ_{F_k} ⊗ x`, a generator of the dual of `C^{⊗max k} ⊗max C*`.
pub fn tuple_tensor(b: &BasedCone, facets: &[usize], vertex: usize) -> DenseTensor {
    let p = b.base();
    facets
        .iter()
        .map(|&f| DenseTensor::vector(p.facets()[f].linear.clone(), Variance::Dual))
        .chain(std::iter::once(DenseTensor::vector(
            p.vertices()[vertex].clone(),
            Variance::Primal,
        )))
        .fold(DenseTensor::scalar(Rational::one()), |acc, t| acc.kron(&t))
}

/// Both sides of the interiority criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaReport {
    /// Strict positivity of `ω_k` against every dual generator.
    pub pairing_positive: bool,
    /// `min_x |Av(x)| > k`.
    pub avoiding_sets_large: bool,
    pub min_avoiding: usize,
}

impl OmegaReport {
    pub fn interior(&self) -> bool {
        self.pairing_positive
    }
}

/// Evaluates `ω_k ∈ int(C^{⊗max k} ⊗max C*)` by pairing against all dual generators and
/// compares with the avoiding-set count. Disagreement is [`Error::Inconsistent`].
pub fn omega_interior_test(b: &BasedCone, k: usize) -> Result<OmegaReport> {
    let omega = vertex_facet_tensor(b, k)?;
    let p = b.base();
    let nf = p.facets().len();
    let mut pairing_positive = true;
    'outer: for facets in (0..nf).combinations_with_replacement(k) {
        for v in 0..p.vertices().len() {
            let g = tuple_tensor(b, &facets, v);
            if !g.pair(&omega)?.is_positive() {
                pairing_positive = false;
                break 'outer;
            }
        }
    }
    let min_avoiding = (0..p.vertices().len())
        .map(|v| p.avoiding_set(v).len())
        .min()
        .unwrap_or(0);
    let report = OmegaReport {
        pairing_positive,
        avoiding_sets_large: min_avoiding > k,
        min_avoiding,
    };
    if report.pairing_positive != report.avoiding_sets_large {
        return Err(Error::Inconsistent(format!(
            "vertex-facet tensor positivity {} but minimum avoiding set {} at level {k}",
            report.pairing_positive, min_avoiding
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::make_based;
    use crate::extend::eb::admissible_tuples;
    use crate::extend::reduction::ReductionMap;
    use crate::fixtures;

    #[test]
    fn reduction_map_annihilates_omega() {
        for (name, b) in fixtures::based_corpus() {
            for k in 1..=3 {
                let omega = vertex_facet_tensor(&b, k).unwrap();
                let g = ReductionMap::for_base(&b, k).unwrap();
                assert!(g.tensor().pair(&omega).unwrap().is_zero(), "{name} k={k}");
            }
        }
    }

    #[test]
    fn square_level_one_pairings() {
        let b = make_based(&fixtures::square_cone(), &fixtures::centered_phi()).unwrap();
        let omega = vertex_facet_tensor(&b, 1).unwrap();
        let admissible = admissible_tuples(&b, 1);
        assert!(admissible.is_empty());
        for f in 0..4 {
            for v in 0..4 {
                let val = tuple_tensor(&b, &[f], v).pair(&omega).unwrap();
                assert!(val.is_positive());
            }
        }
        // At level 2 the admissible tuples are exactly the zero pairings.
        let omega2 = vertex_facet_tensor(&b, 2).unwrap();
        let adm = admissible_tuples(&b, 2);
        for f1 in 0..4 {
            for f2 in 0..4 {
                for v in 0..4 {
                    let val = tuple_tensor(&b, &[f1, f2], v).pair(&omega2).unwrap();
                    assert!(!val.is_negative());
                    assert_eq!(val.is_zero(), adm.contains(&(vec![f1, f2], v)));
                }
            }
        }
    }

    #[test]
    fn pentagon_level_two_all_positive() {
        let b = fixtures::based_over(&fixtures::PENTAGON);
        assert!(admissible_tuples(&b, 2).is_empty());
        let omega = vertex_facet_tensor(&b, 2).unwrap();
        for f1 in 0..5 {
            for f2 in 0..5 {
                for v in 0..5 {
                    assert!(tuple_tensor(&b, &[f1, f2], v)
                        .pair(&omega)
                        .unwrap()
                        .is_positive());
                }
            }
        }
    }

    #[test]
    fn interior_flips_for_square() {
        let b = make_based(&fixtures::square_cone(), &fixtures::centered_phi()).unwrap();
        assert!(omega_interior_test(&b, 1).unwrap().interior());
        assert!(!omega_interior_test(&b, 2).unwrap().interior());
        let p = fixtures::based_over(&fixtures::PENTAGON);
        assert!(omega_interior_test(&p, 2).unwrap().interior());
        assert!(!omega_interior_test(&p, 3).unwrap().interior());
    }
}
