//! Double description method: extreme rays of `{h : gᵢ·h ≥ 0 for all i}`.
//!
//! Starts from the simplicial cone cut out by a basis of the rows, then inserts
//! the remaining rows one at a time. New rays come from adjacent pairs on
//! opposite sides of the inserted hyperplane; adjacency is the combinatorial test
//! (no third ray is tight on every row both are tight on).

use num_traits::Zero;

use crate::linalg::{self, Vector};
use crate::scalar::{Rational, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    v: Vector,
    zeros: Bits,
}

/// Extreme rays (primitive, unsorted) of the cone `{h : rows·h ≥ 0}`, which must be
/// pointed: `rows` has rank equal to the ambient dimension `dim`.
pub(crate) fn extreme_rays(rows: &[Vector], dim: usize) -> Vec<Vector> {
    let m = rows.len();
    // Greedy basis of the rows.
    let mut basis: Vec<usize> = Vec::new();
    let mut chosen: Vec<Vector> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(r.clone());
        if linalg::rank(&trial) > chosen.len() {
            chosen = trial;
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    assert_eq!(basis.len(), dim, "rows must span the ambient space");

    // Rays of {h : B h ≥ 0} are the columns of B⁻¹: solve B r = e_j.
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let rhs: Vector = (0..dim)
                .map(|i| {
                    if i == j {
                        Rational::int(1)
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let v = linalg::primitive(&linalg::solve(&chosen, &rhs, dim).expect("invertible"));
            let mut zeros = Bits::new(m);
            for (i, &b) in basis.iter().enumerate() {
                if i != j {
                    zeros.set(b);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    for (i, row) in rows.iter().enumerate() {
        if basis.contains(&i) {
            continue;
        }
        let values: Vec<Rational> = rays.iter().map(|r| linalg::dot(row, &r.v)).collect();
        let sign = |k: usize| values[k].signum();
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&k| sign(k) == Sign::Positive)
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&k| sign(k) == Sign::Negative)
            .collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if values[k].is_zero() {
                    r.zeros.set(i);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == n || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let v: Vector = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| &values[p] * a - &values[n] * b)
                    .collect();
                let mut zeros = common;
                zeros.set(i);
                next.push(Ray {
                    v: linalg::primitive(&v),
                    zeros,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            match values[k].signum() {
                Sign::Negative => {}
                Sign::Zero => {
                    r.zeros.set(i);
                    kept.push(r);
                }
                Sign::Positive => kept.push(r),
            }
        }
        kept.extend(next);
        rays = kept;
    }
    rays.into_iter().map(|r| r.v).collect()
}
