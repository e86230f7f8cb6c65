//! The reduction map `γ_k^φ : V^{⊗k} → V`, averaging the contraction of `k − 1` factors by `φ`.

use num_traits::{One, Zero};

use crate::cone::BasedCone;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Rational;
use crate::tensor::{symmetric_product_coordinates, DenseTensor, Slot};

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionMap {
    phi: Vector,
    k: usize,
    tensor: DenseTensor,
}

impl ReductionMap {
    /// `γ_k^φ` as a tensor in `(V*)^{⊗k} ⊗ V`: entry `(i₁,…,i_k, o)` equals
    /// `(1/k) Σ_j [i_j = o] Π_{l≠j} φ(i_l)`.
    pub fn new(phi: &[Rational], k: usize) -> Result<ReductionMap> {
        if k == 0 {
            return Err(Error::InvalidLevel);
        }
        let n = phi.len();
        let mut slots = vec![Slot::dual(n); k];
        slots.push(Slot::primal(n));
        let inv_k = Rational::ratio(1, k as i64);
        let tensor = DenseTensor::from_fn(slots, |idx| {
            let (ins, o) = idx.split_at(k);
            let o = o[0];
            let mut acc = Rational::zero();
            for j in 0..k {
                if ins[j] != o {
                    continue;
                }
                let mut prod = Rational::one();
                for (l, &i) in ins.iter().enumerate() {
                    if l != j {
                        prod *= &phi[i];
                    }
                }
                acc += &prod;
            }
            acc * &inv_k
        });
        Ok(ReductionMap {
            phi: phi.to_vec(),
            k,
            tensor,
        })
    }

    pub fn for_base(b: &BasedCone, k: usize) -> Result<ReductionMap> {
        ReductionMap::new(b.phi(), k)
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[Rational] {
        &self.phi
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.tensor
    }

    /// Applies `Id ⊗ γ_k^φ` to a tensor whose last `k` slots are copies of `V`.
    pub fn apply(&self, y: &DenseTensor) -> Result<DenseTensor> {
        let order = y.order();
        if order < self.k {
            return Err(Error::SlotMismatch("too few slots to reduce".into()));
        }
        let mine: Vec<usize> = (order - self.k..order).collect();
        let theirs: Vec<usize> = (0..self.k).collect();
        y.contract(&mine, &self.tensor, &theirs)
    }

    /// Applies `Id ⊗ (γ_k^φ)*` to a tensor whose last slot is `V*`.
    pub fn apply_adjoint(&self, zeta: &DenseTensor) -> Result<DenseTensor> {
        let last = zeta
            .order()
            .checked_sub(1)
            .ok_or_else(|| Error::SlotMismatch("nothing to pull back".into()))?;
        zeta.contract(&[last], &self.tensor, &[self.k])
    }

    /// `(γ_k^φ)*(ψ) = P_Sym(ψ ⊗ φ^{⊗(k−1)})` in symmetric coordinates.
    pub fn adjoint_coordinates(&self, psi: &[Rational]) -> Vec<Rational> {
        let mut factors = vec![psi.to_vec()];
        factors.extend(std::iter::repeat(self.phi.clone()).take(self.k - 1));
        symmetric_product_coordinates(&factors)
    }
}
