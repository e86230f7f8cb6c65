//! Membership in the level-`k` extendibility cone `Ext_k(C_A, C_B, φ)`.
//!
//! Extensions are searched in `V_A ⊗ Sym_k(V_B)`. The unknowns are the symmetric
//! coordinates `c[a, m]` (one per row index `a` and multiset `m`), and a symmetric
//! functional `W` acts on them as `Σ orbit(m) W[a, m] c[a, m]`.

use itertools::Itertools;
use num_traits::Zero;

use crate::cone::{BasedCone, Cone};
use crate::error::{Error, Result};
use crate::extend::products::kron;
use crate::extend::reduction::ReductionMap;
use crate::linalg::{self, Vector};
use crate::lp::{conic_membership, solve, ConicMembership, LpOutcome, LpProblem};
use crate::scalar::Rational;
use crate::tensor::{multisets, orbit_size, symmetric_product_coordinates, DenseTensor, Slot};

/// Verdict of [`ext_k_membership`].
#[derive(Clone, Debug, PartialEq)]
pub enum ExtVerdict {
    /// A symmetric `k`-extension in `V_A ⊗ V_B^{⊗k}`.
    Member { extension: DenseTensor },
    /// `ζ ∈ V_A* ⊗ V_B*` with `ζ(x) < 0` and `(Id ⊗ γ_k*)(ζ)` in the minimal product of duals.
    NonMember { witness: DenseTensor },
}

impl ExtVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, ExtVerdict::Member { .. })
    }
}

/// Cones and level of one `Ext_k` question, with the coordinate bookkeeping.
pub struct ExtProblem<'a> {
    a: &'a Cone,
    b: &'a BasedCone,
    k: usize,
    sets: Vec<Vec<usize>>,
    orbits: Vec<Rational>,
}

impl<'a> ExtProblem<'a> {
    pub fn new(a: &'a Cone, b: &'a BasedCone, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidLevel);
        }
        let sets = multisets(b.dim(), k);
        let orbits = sets.iter().map(|m| Rational::int(orbit_size(m))).collect();
        Ok(ExtProblem {
            a,
            b,
            k,
            sets,
            orbits,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.a.ambient_dim() * self.sets.len()
    }

    /// LP row of the symmetric functional `f ⊗ W` where `w` are symmetric coordinates of `W`.
    fn row(&self, f: &[Rational], w: &[Rational]) -> Vector {
        let weighted: Vector = w.iter().zip(&self.orbits).map(|(x, o)| x * o).collect();
        kron(f, &weighted)
    }

    /// Rows `f ⊗ P_Sym(g₁ ⊗ ⋯ ⊗ g_k)` over dual rays `f` of `C_A` and multisets of dual rays of `C_B`.
    pub fn halfspace_rows(&self) -> Vec<Vector> {
        let bf = self.b.cone().facets();
        let sym: Vec<Vector> = (0..bf.len())
            .combinations_with_replacement(self.k)
            .map(|m| {
                let gs: Vec<Vector> = m.iter().map(|&i| bf[i].clone()).collect();
                symmetric_product_coordinates(&gs)
            })
            .collect();
        self.a
            .facets()
            .iter()
            .cartesian_product(&sym)
            .map(|(f, w)| self.row(f, w))
            .collect()
    }

    /// Rows of `e_a* ⊗ (γ_k)*(e_o*)`, in the row-major order of `(a, o)`.
    pub fn reduction_rows(&self) -> Vec<Vector> {
        let g = ReductionMap::new(self.b.phi(), self.k).expect("k ≥ 1");
        let (na, nb) = (self.a.ambient_dim(), self.b.dim());
        let mut rows = Vec::with_capacity(na * nb);
        for a in 0..na {
            let ea = unit(na, a);
            for o in 0..nb {
                rows.push(self.row(&ea, &g.adjoint_coordinates(&unit(nb, o))));
            }
        }
        rows
    }

    /// Full extension tensor from symmetric coordinates.
    pub fn expand(&self, c: &[Rational]) -> DenseTensor {
        let nb = self.b.dim();
        let mut slots = vec![Slot::primal(self.a.ambient_dim())];
        slots.extend(std::iter::repeat(Slot::primal(nb)).take(self.k));
        let per = self.sets.len();
        DenseTensor::from_fn(slots, |idx| {
            let mut m = idx[1..].to_vec();
            m.sort_unstable();
            let pos = self.sets.binary_search(&m).expect("multiset");
            c[idx[0] * per + pos].clone()
        })
    }

    /// Re-checks an extension: symmetric in the `B` slots, nonnegative on every
    /// max-product half-space, and reducing to `x`.
    pub fn verify_extension(&self, x: &DenseTensor, y: &DenseTensor) -> Result<()> {
        let group: Vec<usize> = (1..=self.k).collect();
        if !y.is_symmetric_in(&group) {
            return Err(Error::Certificate("extension is not symmetric".into()));
        }
        let bf = self.b.cone().facets();
        for f in self.a.facets() {
            for m in (0..bf.len()).combinations_with_replacement(self.k) {
                let h = m.iter().fold(dual(f), |acc, &i| acc.kron(&dual(&bf[i])));
                if h.pair(y)?.is_negative() {
                    return Err(Error::Certificate("extension violates a half-space".into()));
                }
            }
        }
        let reduced = ReductionMap::new(self.b.phi(), self.k)?.apply(y)?;
        if reduced.entries() != x.entries() {
            return Err(Error::Certificate(
                "extension does not reduce to the point".into(),
            ));
        }
        Ok(())
    }

    /// Re-checks a witness: `ζ(x) < 0` and `(Id ⊗ γ_k*)(ζ)` decomposes over
    /// `f ⊗ P_Sym(g₁ ⊗ ⋯ ⊗ g_k)`, by an independent conic membership solve.
    pub fn verify_witness(&self, x: &DenseTensor, zeta: &DenseTensor) -> Result<()> {
        if !linalg::dot(zeta.entries(), x.entries()).is_negative() {
            return Err(Error::Certificate(
                "witness is not negative on the point".into(),
            ));
        }
        let pulled = ReductionMap::new(self.b.phi(), self.k)?.apply_adjoint(zeta)?;
        let group: Vec<usize> = (1..=self.k).collect();
        let target = pulled.symmetric_coordinates(&group);
        let bf = self.b.cone().facets();
        let gens: Vec<Vector> = self
            .a
            .facets()
            .iter()
            .cartesian_product(
                (0..bf.len())
                    .combinations_with_replacement(self.k)
                    .map(|m| {
                        symmetric_product_coordinates(
                            &m.iter().map(|&i| bf[i].clone()).collect::<Vec<_>>(),
                        )
                    })
                    .collect::<Vec<_>>(),
            )
            .map(|(f, w)| kron(f, &w))
            .collect();
        match conic_membership(&target, &gens)? {
            ConicMembership::Member { .. } => Ok(()),
            ConicMembership::Separated { .. } => Err(Error::Certificate(
                "pulled-back witness is not in the minimal product of duals".into(),
            )),
        }
    }
}

fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::int(1);
    v
}

fn dual(v: &[Rational]) -> DenseTensor {
    DenseTensor::vector(v.to_vec(), crate::tensor::Variance::Dual)
}

/// Checks that `x` is a bipartite tensor on `V_A ⊗ V_B`.
pub fn check_bipartite(x: &DenseTensor, na: usize, nb: usize) -> Result<()> {
    if x.dims() != [na, nb] {
        return Err(Error::DimensionMismatch(format!(
            "expected a {na}×{nb} tensor, found shape {:?}",
            x.dims()
        )));
    }
    Ok(())
}

/// Builds the bipartite tensor with row-major `entries`.
pub fn bipartite(entries: Vector, na: usize, nb: usize) -> Result<DenseTensor> {
    DenseTensor::new(vec![Slot::primal(na), Slot::primal(nb)], entries)
}

/// Decides `x ∈ Ext_k(C_A, C_B, φ)`; both outcomes carry re-verified certificates.
pub fn ext_k_membership(x: &DenseTensor, a: &Cone, b: &BasedCone, k: usize) -> Result<ExtVerdict> {
    check_bipartite(x, a.ambient_dim(), b.dim())?;
    let prob = ExtProblem::new(a, b, k)?;
    let mut lp = LpProblem::new(prob.num_vars());
    let red = prob.reduction_rows();
    for (row, rhs) in red.iter().zip(x.entries()) {
        lp.add_eq(row.clone(), rhs.clone());
    }
    for row in prob.halfspace_rows() {
        lp.add_ge(row, Rational::zero());
    }
    let verdict = match solve(&lp)? {
        LpOutcome::Feasible { point, .. } => ExtVerdict::Member {
            extension: prob.expand(&point),
        },
        LpOutcome::Infeasible { certificate } => {
            let zeta: Vector = certificate.equalities.iter().map(|u| -u).collect();
            let zeta = linalg::primitive(&zeta);
            ExtVerdict::NonMember {
                witness: DenseTensor::new(
                    vec![Slot::dual(a.ambient_dim()), Slot::dual(b.dim())],
                    zeta,
                )?,
            }
        }
        LpOutcome::Unbounded { .. } => unreachable!("no objective"),
    };
    verify_verdict(&prob, x, &verdict)?;
    Ok(verdict)
}

pub fn verify_verdict(prob: &ExtProblem<'_>, x: &DenseTensor, v: &ExtVerdict) -> Result<()> {
    match v {
        ExtVerdict::Member { extension } => prob.verify_extension(x, extension),
        ExtVerdict::NonMember { witness } => prob.verify_witness(x, witness),
    }
}
