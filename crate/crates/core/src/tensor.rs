//! Dense multi-index tensors with slot bookkeeping.
//!
//! A tensor lives in a product of slots, each either a primal space `ℚⁿ` or its
//! dual. Entries are stored row-major. Contractions only pair a primal slot with a
//! dual slot of the same dimension.

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Primal,
    Dual,
}

impl Variance {
    pub fn flip(self) -> Self {
        match self {
            Variance::Primal => Variance::Dual,
            Variance::Dual => Variance::Primal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub dim: usize,
    pub variance: Variance,
}

impl Slot {
    pub fn primal(dim: usize) -> Self {
        Slot {
            dim,
            variance: Variance::Primal,
        }
    }

    pub fn dual(dim: usize) -> Self {
        Slot {
            dim,
            variance: Variance::Dual,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor<S = Rational> {
    slots: Vec<Slot>,
    entries: Vec<S>,
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Nondecreasing index tuples of length `k` over `0..n`, in lexicographic order.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations_with_replacement(k).collect()
}

/// Number of distinct arrangements of a sorted multiset.
pub fn orbit_size(multiset: &[usize]) -> i64 {
    let mut denom = 1;
    for (_, group) in &multiset.iter().group_by(|&&x| x) {
        denom *= factorial(group.count());
    }
    factorial(multiset.len()) / denom
}

/// Calls `f` on every multi-index of `dims` in row-major order.
fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.iter().any(|&d| d == 0) {
        return;
    }
    let mut idx = vec![0; dims.len()];
    loop {
        f(&idx);
        let mut pos = dims.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < dims[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}

impl<S: Scalar> DenseTensor<S> {
    pub fn new(slots: Vec<Slot>, entries: Vec<S>) -> Result<Self> {
        let expected: usize = slots.iter().map(|s| s.dim).product();
        if slots.iter().any(|s| s.dim == 0) {
            return Err(Error::SlotMismatch(
                "slot dimension must be positive".into(),
            ));
        }
        if entries.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for shape of size {expected}",
                entries.len()
            )));
        }
        Ok(DenseTensor { slots, entries })
    }

    pub fn zeros(slots: Vec<Slot>) -> Self {
        let n = slots.iter().map(|s| s.dim).product();
        DenseTensor {
            slots,
            entries: vec![S::zero(); n],
        }
    }

    /// The 0-slot tensor holding `value`.
    pub fn scalar(value: S) -> Self {
        DenseTensor {
            slots: Vec::new(),
            entries: vec![value],
        }
    }

    pub fn vector(values: Vec<S>, variance: Variance) -> Self {
        DenseTensor {
            slots: vec![Slot {
                dim: values.len(),
                variance,
            }],
            entries: values,
        }
    }

    pub fn from_fn(slots: Vec<Slot>, mut f: impl FnMut(&[usize]) -> S) -> Self {
        let dims: Vec<usize> = slots.iter().map(|s| s.dim).collect();
        let mut entries = Vec::with_capacity(dims.iter().product());
        for_each_index(&dims, |idx| entries.push(f(idx)));
        DenseTensor { slots, entries }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn order(&self) -> usize {
        self.slots.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.dim).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    pub fn with_slots(mut self, slots: Vec<Slot>) -> Result<Self> {
        let dims: Vec<usize> = slots.iter().map(|s| s.dim).collect();
        if dims != self.dims() {
            return Err(Error::SlotMismatch(
                "relabelling must keep dimensions".into(),
            ));
        }
        self.slots = slots;
        Ok(self)
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.slots.len()];
        for i in (0..self.slots.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.slots[i + 1].dim;
        }
        strides
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.slots.len());
        idx.iter()
            .zip(&self.slots)
            .fold(0, |acc, (&i, s)| acc * s.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.entries[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: S) {
        let f = self.flat_index(idx);
        self.entries[f] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.slots != other.slots {
            return Err(Error::SlotMismatch(format!(
                "{:?} vs {:?}",
                self.slots, other.slots
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(DenseTensor {
            slots: self.slots.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(DenseTensor {
            slots: self.slots.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, s: &S) -> Self {
        DenseTensor {
            slots: self.slots.clone(),
            entries: self.entries.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    /// Tensor product: slots concatenate, entries multiply.
    pub fn kron(&self, other: &Self) -> Self {
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for a in &self.entries {
            for b in &other.entries {
                if a.is_zero() || b.is_zero() {
                    entries.push(S::zero());
                } else {
                    entries.push(a.clone() * b.clone());
                }
            }
        }
        DenseTensor { slots, entries }
    }

    /// The action `U_σ`: input slot `i` moves to output position `sigma[i]`.
    ///
    /// On pure tensors, output slot `j` holds input factor `σ⁻¹(j)`. Every slot
    /// must be compatible with the slot it is sent to.
    pub fn permute_slots(&self, sigma: &[usize]) -> Result<Self> {
        let k = self.slots.len();
        if sigma.len() != k || !sigma.iter().copied().sorted().eq(0..k) {
            return Err(Error::SlotMismatch(format!(
                "{sigma:?} is not a permutation of 0..{k}"
            )));
        }
        for (i, &j) in sigma.iter().enumerate() {
            if self.slots[i] != self.slots[j] {
                return Err(Error::SlotMismatch(format!(
                    "cannot move slot {i} ({:?}) onto slot {j} ({:?})",
                    self.slots[i], self.slots[j]
                )));
            }
        }
        let dims = self.dims();
        let mut src = vec![0; k];
        let out = DenseTensor::from_fn(self.slots.clone(), |idx| {
            for i in 0..k {
                src[i] = idx[sigma[i]];
            }
            self.get(&src).clone()
        });
        debug_assert_eq!(out.dims(), dims);
        Ok(out)
    }

    /// Averages over all permutations of the listed slots, leaving the others fixed.
    pub fn symmetrize_slots(&self, group: &[usize]) -> Result<Self> {
        if group.is_empty() {
            return Ok(self.clone());
        }
        let first = self.slots[group[0]];
        if group
            .iter()
            .any(|&g| g >= self.slots.len() || self.slots[g] != first)
        {
            return Err(Error::SlotMismatch(
                "symmetrized slots must share dimension and variance".into(),
            ));
        }
        let perms: Vec<Vec<usize>> = (0..group.len()).permutations(group.len()).collect();
        let weight = S::from_rational(Rational::ratio(1, factorial(group.len())));
        let mut src = vec![0; self.slots.len()];
        Ok(DenseTensor::from_fn(self.slots.clone(), |idx| {
            let mut acc = S::zero();
            for p in &perms {
                src.copy_from_slice(idx);
                for (a, &b) in p.iter().enumerate() {
                    src[group[a]] = idx[group[b]];
                }
                let v = self.get(&src);
                if !v.is_zero() {
                    acc = acc + v.clone();
                }
            }
            acc * weight.clone()
        }))
    }

    /// `P_Sym = (1/k!) Σ_σ U_σ` over all slots.
    pub fn symmetric_project(&self) -> Result<Self> {
        let all: Vec<usize> = (0..self.slots.len()).collect();
        self.symmetrize_slots(&all)
    }

    pub fn is_symmetric_in(&self, group: &[usize]) -> bool {
        match self.symmetrize_slots(group) {
            Ok(t) => t == *self,
            Err(_) => false,
        }
    }

    /// Contracts the listed slots of `self` against the listed slots of `other`, pairwise.
    /// Remaining slots of `self` come first, then those of `other`.
    pub fn contract(&self, mine: &[usize], other: &Self, theirs: &[usize]) -> Result<Self> {
        if mine.len() != theirs.len() {
            return Err(Error::SlotMismatch(
                "contraction lists differ in length".into(),
            ));
        }
        for (&a, &b) in mine.iter().zip(theirs) {
            let (sa, sb) = (self.slots.get(a), other.slots.get(b));
            match (sa, sb) {
                (Some(sa), Some(sb)) if sa.dim == sb.dim && sa.variance != sb.variance => {}
                _ => {
                    return Err(Error::SlotMismatch(format!(
                        "cannot contract slot {a} ({sa:?}) with slot {b} ({sb:?})"
                    )))
                }
            }
        }
        let rest_a: Vec<usize> = (0..self.order()).filter(|i| !mine.contains(i)).collect();
        let rest_b: Vec<usize> = (0..other.order()).filter(|i| !theirs.contains(i)).collect();
        let out_slots: Vec<Slot> = rest_a
            .iter()
            .map(|&i| self.slots[i])
            .chain(rest_b.iter().map(|&i| other.slots[i]))
            .collect();
        let mut out = DenseTensor::<S>::zeros(out_slots);
        let rest_b_dims: Vec<usize> = rest_b.iter().map(|&i| other.slots[i].dim).collect();
        let b_strides = other.strides();
        let out_strides = out.strides();
        let a_dims = self.dims();
        let mut flat = 0usize;
        for_each_index(&a_dims, |idx| {
            let v = &self.entries[flat];
            flat += 1;
            if v.is_zero() {
                return;
            }
            let base_b: usize = theirs
                .iter()
                .zip(mine)
                .map(|(&tb, &ma)| idx[ma] * b_strides[tb])
                .sum();
            let base_out: usize = rest_a
                .iter()
                .enumerate()
                .map(|(pos, &ia)| idx[ia] * out_strides[pos])
                .sum();
            for_each_index(&rest_b_dims, |ridx| {
                let fb = base_b
                    + rest_b
                        .iter()
                        .zip(ridx)
                        .map(|(&ib, &r)| r * b_strides[ib])
                        .sum::<usize>();
                let w = &other.entries[fb];
                if w.is_zero() {
                    return;
                }
                let fo = base_out
                    + ridx
                        .iter()
                        .enumerate()
                        .map(|(pos, &r)| r * out_strides[rest_a.len() + pos])
                        .sum::<usize>();
                let prod = v.clone() * w.clone();
                let cur = std::mem::replace(&mut out.entries[fo], S::zero());
                out.entries[fo] = cur + prod;
            });
        });
        Ok(out)
    }

    /// Contracts one slot against a single-slot tensor of opposite variance.
    pub fn contract_slot(&self, slot: usize, f: &Self) -> Result<Self> {
        if f.order() != 1 {
            return Err(Error::SlotMismatch(
                "contracted tensor must have one slot".into(),
            ));
        }
        self.contract(&[slot], f, &[0])
    }

    /// Full contraction of two tensors with mutually dual slot lists.
    pub fn pair(&self, other: &Self) -> Result<S> {
        let all_a: Vec<usize> = (0..self.order()).collect();
        let all_b: Vec<usize> = (0..other.order()).collect();
        let t = self.contract(&all_a, other, &all_b)?;
        Ok(t.entries.into_iter().next().unwrap_or_else(S::zero))
    }

    /// Entries whose indices over `group` are nondecreasing, in row-major order.
    /// For a tensor symmetric in `group` these determine it completely.
    pub fn symmetric_coordinates(&self, group: &[usize]) -> Vec<S> {
        let mut out = Vec::new();
        let dims = self.dims();
        let mut flat = 0usize;
        for_each_index(&dims, |idx| {
            if group.windows(2).all(|w| idx[w[0]] <= idx[w[1]]) {
                out.push(self.entries[flat].clone());
            }
            flat += 1;
        });
        out
    }
}

/// Basis vector `e_i` of `ℚⁿ` as a one-slot tensor.
pub fn basis_vector<S: Scalar>(n: usize, i: usize, variance: Variance) -> DenseTensor<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    DenseTensor::vector(v, variance)
}

/// Symmetrized multiset monomials `P_Sym(e_{m₁} ⊗ ⋯ ⊗ e_{m_k})`, a basis of `Sym_k(ℚⁿ)`,
/// indexed by [`multisets`].
pub fn sym_basis(n: usize, k: usize) -> Vec<DenseTensor> {
    multisets(n, k)
        .into_iter()
        .map(|m| {
            let pure = m
                .iter()
                .map(|&i| basis_vector::<Rational>(n, i, Variance::Primal))
                .fold(DenseTensor::scalar(Rational::one()), |acc, e| acc.kron(&e));
            pure.symmetric_project().expect("equal slots")
        })
        .collect()
}

/// Symmetric coordinates of `P_Sym(v₁ ⊗ ⋯ ⊗ v_k)`, indexed by [`multisets`] of `0..n`.
///
/// Entry `m` is `perm(M)/k!` with `M[j][l] = v_j[m_l]`, computed over column subsets
/// instead of expanding the full `n^k` tensor.
pub fn symmetric_product_coordinates(factors: &[Vec<Rational>]) -> Vec<Rational> {
    let k = factors.len();
    let Some(n) = factors.first().map(Vec::len) else {
        return vec![Rational::one()];
    };
    let scale = Rational::ratio(1, factorial(k));
    let mut dp = vec![Rational::zero(); 1 << k];
    multisets(n, k)
        .into_iter()
        .map(|m| {
            dp.iter_mut().for_each(|x| *x = Rational::zero());
            dp[0] = Rational::one();
            for mask in 0..(1usize << k) {
                if dp[mask].is_zero() {
                    continue;
                }
                let j = mask.count_ones() as usize;
                if j == k {
                    continue;
                }
                let row = &factors[j];
                for (l, &ml) in m.iter().enumerate() {
                    if mask & (1 << l) != 0 || row[ml].is_zero() {
                        continue;
                    }
                    let add = &dp[mask] * &row[ml];
                    dp[mask | (1 << l)] += &add;
                }
            }
            &dp[(1 << k) - 1] * &scale
        })
        .collect()
}

/// Tensor power `v^{⊗k}`.
pub fn tensor_power<S: Scalar>(v: &DenseTensor<S>, k: usize) -> DenseTensor<S> {
    (0..k).fold(DenseTensor::scalar(S::one()), |acc, _| acc.kron(v))
}
