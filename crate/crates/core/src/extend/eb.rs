//! Deciding whether `γ_k^φ` is entanglement-breaking, by factoring the base into
//! simplices and independently by a conic program over admissible tuples.

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::cone::BasedCone;
use crate::error::{Error, Result};
use crate::extend::products::kron;
use crate::extend::reduction::ReductionMap;
use crate::linalg::Vector;
use crate::lp::{conic_membership, ConicMembership};
use crate::polytope::{FactorizationFailure, SimplexFactorization};
use crate::scalar::Rational;
use crate::tensor::symmetric_product_coordinates;

/// Ordered tuples `(F₁,…,F_k, x)` with `Av(x) ⊆ {F₁,…,F_k}`, as `(facets, vertex)`.
pub fn admissible_tuples(b: &BasedCone, k: usize) -> Vec<(Vec<usize>, usize)> {
    let p = b.base();
    let nf = p.facets().len();
    let mut out = Vec::new();
    for v in 0..p.vertices().len() {
        let av = p.avoiding_set(v);
        if av.len() > k {
            continue;
        }
        for tuple in (0..k).map(|_| 0..nf).multi_cartesian_product() {
            if av.iter().all(|f| tuple.contains(f)) {
                out.push((tuple, v));
            }
        }
    }
    out
}

/// One term `weight · P_Sym(ψ_{F₁} ⊗ ⋯ ⊗ ψ_{F_k}) ⊗ x` of a decomposition of `γ_k^φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EbTerm {
    pub facets: Vec<usize>,
    pub vertex: usize,
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EbDecomposition {
    pub level: usize,
    pub terms: Vec<EbTerm>,
}

impl EbDecomposition {
    /// Exact check: every term admissible with nonnegative weight, and the terms re-sum to `γ_k^φ`.
    pub fn verify(&self, b: &BasedCone) -> Result<()> {
        let p = b.base();
        let k = self.level;
        let mut acc: Option<Vector> = None;
        for t in &self.terms {
            if t.weight.is_negative() || t.facets.len() != k {
                return Err(Error::Certificate("malformed decomposition term".into()));
            }
            if !p
                .avoiding_set(t.vertex)
                .iter()
                .all(|f| t.facets.contains(f))
            {
                return Err(Error::Certificate("term is not admissible".into()));
            }
            let g = term_coordinates(b, &t.facets, t.vertex);
            let scaled: Vector = g.iter().map(|x| x * &t.weight).collect();
            acc = Some(match acc {
                None => scaled,
                Some(a) => a.iter().zip(&scaled).map(|(x, y)| x + y).collect(),
            });
        }
        let target = gamma_coordinates(b, k)?;
        let acc = acc.unwrap_or_else(|| vec![Rational::zero(); target.len()]);
        if acc != target {
            return Err(Error::Certificate(
                "decomposition does not re-sum to the reduction map".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of [`is_entanglement_breaking`].
#[derive(Clone, Debug, PartialEq)]
pub enum EbVerdict {
    Breaking {
        decomposition: EbDecomposition,
        factorization: SimplexFactorization,
    },
    /// `separator` is nonnegative on every admissible generator and negative on `γ_k^φ`,
    /// in the symmetric coordinates of `(V*)^{⊗k} ⊗ V`.
    NotBreaking {
        separator: Vector,
        reason: EbObstruction,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum EbObstruction {
    NotAProduct(FactorizationFailure),
    TooManyFactors(usize),
}

impl EbVerdict {
    pub fn is_breaking(&self) -> bool {
        matches!(self, EbVerdict::Breaking { .. })
    }
}

fn gamma_coordinates(b: &BasedCone, k: usize) -> Result<Vector> {
    let g = ReductionMap::for_base(b, k)?;
    let group: Vec<usize> = (0..k).collect();
    Ok(g.tensor().symmetric_coordinates(&group))
}

/// Symmetric coordinates of `P_Sym(ψ_{F₁} ⊗ ⋯ ⊗ ψ_{F_k}) ⊗ x`.
fn term_coordinates(b: &BasedCone, facets: &[usize], vertex: usize) -> Vector {
    let p = b.base();
    let psi: Vec<Vector> = facets
        .iter()
        .map(|&f| p.facets()[f].linear.clone())
        .collect();
    kron(&symmetric_product_coordinates(&psi), &p.vertices()[vertex])
}

/// Decomposition read off a simplex factorization with `l ≤ k` factors. Slot `i ≤ l`
/// carries the rescaled facet of class `i` avoided by the vertex; the remaining slots
/// carry `φ`, expanded as the rescaled sum over the first class.
fn decomposition_from_factors(f: &SimplexFactorization, k: usize) -> EbDecomposition {
    let l = f.num_factors();
    let padding = &f.facet_classes[0];
    let mut terms = Vec::new();
    for (vertex, label) in f.vertex_labels.iter().enumerate() {
        let own: Vec<usize> = label
            .iter()
            .enumerate()
            .map(|(c, &j)| f.facet_classes[c][j])
            .collect();
        let own_weight: Rational = own
            .iter()
            .map(|&g| f.facet_scales[g].clone())
            .fold(Rational::one(), |a, s| a * s);
        let pads: Vec<Vec<&usize>> = if k == l {
            vec![Vec::new()]
        } else {
            (0..k - l)
                .map(|_| padding.iter())
                .multi_cartesian_product()
                .collect()
        };
        for pad in pads {
            let mut facets = own.clone();
            let mut weight = own_weight.clone();
            for &g in pad {
                facets.push(g);
                weight *= &f.facet_scales[g];
            }
            terms.push(EbTerm {
                facets,
                vertex,
                weight,
            });
        }
    }
    EbDecomposition { level: k, terms }
}

/// Decides whether `γ_k^φ` is entanglement-breaking. Both routes run; a disagreement
/// is reported as [`Error::Inconsistent`].
pub fn is_entanglement_breaking(b: &BasedCone, k: usize) -> Result<EbVerdict> {
    if k == 0 {
        return Err(Error::InvalidLevel);
    }
    let combinatorial = match b.base().factor_as_simplices() {
        Ok(f) if f.num_factors() <= k => Ok(f),
        Ok(f) => Err(EbObstruction::TooManyFactors(f.num_factors())),
        Err(e) => Err(EbObstruction::NotAProduct(e)),
    };

    let mut tuples: Vec<(Vec<usize>, usize)> = admissible_tuples(b, k)
        .into_iter()
        .filter(|(t, _)| t.windows(2).all(|w| w[0] <= w[1]))
        .collect();
    tuples.sort();
    let gens: Vec<Vector> = tuples
        .iter()
        .map(|(t, v)| term_coordinates(b, t, *v))
        .collect();
    let target = gamma_coordinates(b, k)?;
    let lp = conic_membership(&target, &gens)?;

    match (combinatorial, lp) {
        (Ok(factorization), ConicMembership::Member { .. }) => {
            let decomposition = decomposition_from_factors(&factorization, k);
            decomposition.verify(b)?;
            Ok(EbVerdict::Breaking {
                decomposition,
                factorization,
            })
        }
        (Err(reason), ConicMembership::Separated { functional }) => Ok(EbVerdict::NotBreaking {
            separator: functional,
            reason,
        }),
        (Ok(_), ConicMembership::Separated { .. }) => Err(Error::Inconsistent(
            "base factors into few simplices but the conic program is infeasible".into(),
        )),
        (Err(reason), ConicMembership::Member { .. }) => Err(Error::Inconsistent(format!(
            "conic program decomposes the reduction map but the base does not factor: {reason:?}"
        ))),
    }
}

/// Decomposition found by the conic program alone, for inspection.
pub fn lp_decomposition(b: &BasedCone, k: usize) -> Result<Option<EbDecomposition>> {
    let mut tuples: Vec<(Vec<usize>, usize)> = admissible_tuples(b, k)
        .into_iter()
        .filter(|(t, _)| t.windows(2).all(|w| w[0] <= w[1]))
        .collect();
    tuples.sort();
    let gens: Vec<Vector> = tuples
        .iter()
        .map(|(t, v)| term_coordinates(b, t, *v))
        .collect();
    let target = gamma_coordinates(b, k)?;
    Ok(match conic_membership(&target, &gens)? {
        ConicMembership::Member { weights } => Some(EbDecomposition {
            level: k,
            terms: tuples
                .into_iter()
                .zip(weights)
                .filter(|(_, w)| !w.is_zero())
                .map(|((facets, vertex), weight)| EbTerm {
                    facets,
                    vertex,
                    weight,
                })
                .collect(),
        }),
        ConicMembership::Separated { .. } => None,
    })
}
