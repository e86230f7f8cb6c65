//! Proper polyhedral cones with both descriptions.
//!
//! A [`Cone`] stores its extreme rays and its facet functionals as primitive integer
//! vectors in lexicographic order, so two cones are equal exactly when they are the
//! same set. Construction checks properness and the double description
//! certificate: every ray saturates facets of rank `n − 1` and vice versa.

mod dd;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::polytope::Polytope;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    dim: usize,
    rays: Vec<Vector>,
    facets: Vec<Vector>,
}

impl Cone {
    /// The cone generated by `generators`. Redundant generators are dropped.
    pub fn from_generators(generators: &[Vector]) -> Result<Cone> {
        make_cone(generators)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn facets(&self) -> &[Vector] {
        &self.facets
    }

    /// The nonnegative orthant `ℝⁿ₊`.
    pub fn orthant(n: usize) -> Cone {
        let rays: Vec<Vector> = (0..n)
            .map(|i| (0..n).map(|j| Rational::int(i64::from(i == j))).collect())
            .collect();
        make_cone(&rays).expect("orthant is proper")
    }

    /// `C* = {f : f(x) ≥ 0 for x ∈ C}`: rays and facets swap roles.
    pub fn dualize(&self) -> Cone {
        Cone {
            dim: self.dim,
            rays: self.facets.clone(),
            facets: self.rays.clone(),
        }
    }

    /// True iff the number of extreme rays equals the ambient dimension.
    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|f| !linalg::dot(f, x).is_negative())
    }

    pub fn contains_in_interior(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|f| linalg::dot(f, x).is_positive())
    }

    /// Sum of the extreme rays, strictly positive on every facet.
    pub fn interior_point(&self) -> Vector {
        let mut acc = vec![Rational::zero(); self.dim];
        for r in &self.rays {
            acc = linalg::add(&acc, r);
        }
        debug_assert!(self.contains_in_interior(&acc));
        acc
    }

    /// `incidence[i][j]` is true when facet `j` vanishes on ray `i`.
    pub fn incidence(&self) -> Vec<Vec<bool>> {
        self.rays
            .iter()
            .map(|r| {
                self.facets
                    .iter()
                    .map(|f| linalg::dot(f, r).is_zero())
                    .collect()
            })
            .collect()
    }

    /// Re-checks the double description certificate.
    pub fn verify(&self) -> Result<()> {
        let n = self.dim;
        let bad = |m: &str| Err(Error::Certificate(m.into()));
        if linalg::rank(&self.rays) != n {
            return bad("rays do not span");
        }
        if linalg::rank(&self.facets) != n {
            return bad("facets do not span");
        }
        for r in &self.rays {
            if self.facets.iter().any(|f| linalg::dot(f, r).is_negative()) {
                return bad("facet negative on a ray");
            }
            let tight: Vec<Vector> = self
                .facets
                .iter()
                .filter(|f| linalg::dot(f, r).is_zero())
                .cloned()
                .collect();
            if linalg::rank(&tight) != n - 1 {
                return bad("ray is not extreme");
            }
        }
        for f in &self.facets {
            let tight: Vec<Vector> = self
                .rays
                .iter()
                .filter(|r| linalg::dot(f, r).is_zero())
                .cloned()
                .collect();
            if linalg::rank(&tight) != n - 1 {
                return bad("functional does not define a facet");
            }
        }
        Ok(())
    }
}

/// Builds the proper cone generated by `generators`.
pub fn make_cone(generators: &[Vector]) -> Result<Cone> {
    let Some(first) = generators.first() else {
        return Err(Error::EmptyInput);
    };
    let dim = first.len();
    if dim == 0 || generators.iter().any(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch(
            "generators must share a positive dimension".into(),
        ));
    }
    if generators.iter().any(|g| linalg::is_zero(g)) {
        return Err(Error::ZeroGenerator);
    }
    let mut gens: Vec<Vector> = generators.iter().map(|g| linalg::primitive(g)).collect();
    gens.sort();
    gens.dedup();
    let rank = linalg::rank(&gens);
    if rank < dim {
        return Err(Error::NotFullDimensional { rank, dim });
    }
    let mut facets = dd::extreme_rays(&gens, dim);
    facets.sort();
    facets.dedup();
    if facets.is_empty() || linalg::rank(&facets) < dim {
        return Err(Error::ContainsLine);
    }
    let rays: Vec<Vector> = gens
        .into_iter()
        .filter(|g| {
            let tight: Vec<Vector> = facets
                .iter()
                .filter(|f| linalg::dot(f, g).is_zero())
                .cloned()
                .collect();
            linalg::rank(&tight) == dim - 1
        })
        .collect();
    let cone = Cone { dim, rays, facets };
    cone.verify()?;
    Ok(cone)
}

pub fn dualize(c: &Cone) -> Cone {
    c.dualize()
}

/// A cone with a strictly positive functional `φ` and its base `K_φ = C ∩ φ⁻¹(1)`.
///
/// Vertex `i` of the base is ray `i` rescaled to `φ = 1`; facet `j` of the base is
/// cut out by facet functional `j` of the cone.
#[derive(Clone, Debug, PartialEq)]
pub struct BasedCone {
    cone: Cone,
    phi: Vector,
    base: Polytope,
}

impl BasedCone {
    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn phi(&self) -> &[Rational] {
        &self.phi
    }

    pub fn base(&self) -> &Polytope {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.cone.dim
    }

    /// Point of the base: the interior point rescaled to `φ = 1`.
    pub fn base_point(&self) -> Vector {
        let x = self.cone.interior_point();
        let s = linalg::dot(&self.phi, &x).recip().expect("phi positive");
        linalg::scale(&x, &s)
    }
}

/// Attaches `phi ∈ int C*` to `c`.
pub fn make_based(c: &Cone, phi: &[Rational]) -> Result<BasedCone> {
    if phi.len() != c.dim {
        return Err(Error::DimensionMismatch(format!(
            "functional of length {} on a cone in dimension {}",
            phi.len(),
            c.dim
        )));
    }
    if c.dim < 2 {
        return Err(Error::DimensionMismatch(
            "a based cone needs ambient dimension at least 2".into(),
        ));
    }
    if let Some(ray) = c
        .rays
        .iter()
        .position(|r| !linalg::dot(phi, r).is_positive())
    {
        return Err(Error::PhiNotInterior { ray });
    }
    let base = Polytope::base_of(c, phi);
    Ok(BasedCone {
        cone: c.clone(),
        phi: phi.to_vec(),
        base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;
    use proptest::prelude::*;

    fn square() -> Cone {
        make_cone(&[
            vector(&[1, 1, 0]),
            vector(&[1, -1, 0]),
            vector(&[1, 0, 1]),
            vector(&[1, 0, -1]),
        ])
        .unwrap()
    }

    #[test]
    fn drops_redundant_generator() {
        let c = make_cone(&[vector(&[1, 1]), vector(&[1, -1]), vector(&[1, 0])]).unwrap();
        assert_eq!(c.rays(), &[vector(&[1, -1]), vector(&[1, 1])]);
    }

    #[test]
    fn square_keeps_all_rays() {
        let c = square();
        assert_eq!(c.rays().len(), 4);
        assert!(!c.is_simplicial());
    }

    #[test]
    fn line_is_rejected() {
        let err = make_cone(&[vector(&[1, 0]), vector(&[-1, 0]), vector(&[0, 1])]).unwrap_err();
        assert_eq!(err, Error::ContainsLine);
        assert!(matches!(
            make_cone(&[vector(&[1, 0, 0]), vector(&[0, 1, 0])]),
            Err(Error::NotFullDimensional { rank: 2, dim: 3 })
        ));
        assert_eq!(make_cone(&[]).unwrap_err(), Error::EmptyInput);
        assert_eq!(
            make_cone(&[vector(&[0, 0]), vector(&[1, 0])]).unwrap_err(),
            Error::ZeroGenerator
        );
        // Whole plane.
        let err = make_cone(&[
            vector(&[1, 0]),
            vector(&[-1, 0]),
            vector(&[0, 1]),
            vector(&[0, -1]),
        ])
        .unwrap_err();
        assert_eq!(err, Error::ContainsLine);
    }

    #[test]
    fn orthant_is_self_dual_and_simplicial() {
        let o = Cone::orthant(3);
        assert_eq!(o.dualize(), o);
        assert!(o.is_simplicial());
        assert_eq!(o.interior_point(), vector(&[1, 1, 1]));
    }

    #[test]
    fn square_dual_matches_psi_generators() {
        // Twice the ψ forms ½(1,±1,±1), up to positive scaling.
        let d = square().dualize();
        let psi = make_cone(&[
            vector(&[1, 1, 1]),
            vector(&[1, 1, -1]),
            vector(&[1, -1, 1]),
            vector(&[1, -1, -1]),
        ])
        .unwrap();
        assert_eq!(d, psi);
        assert_eq!(d.interior_point(), vector(&[4, 0, 0]));
        assert_eq!(square().interior_point(), vector(&[4, 0, 0]));
    }

    #[test]
    fn pentagon_cone_is_not_simplicial() {
        let c = make_cone(&[
            vector(&[1, 0, 0]),
            vector(&[1, 2, 0]),
            vector(&[1, 3, 2]),
            vector(&[1, 1, 3]),
            vector(&[1, -1, 2]),
        ])
        .unwrap();
        assert_eq!(c.rays().len(), 5);
        assert!(!c.is_simplicial());
    }

    #[test]
    fn based_square() {
        let b = make_based(&square(), &vector(&[1, 0, 0])).unwrap();
        let mut verts = b.base().vertices().to_vec();
        verts.sort();
        let mut expected = vec![
            vector(&[1, 1, 0]),
            vector(&[1, -1, 0]),
            vector(&[1, 0, 1]),
            vector(&[1, 0, -1]),
        ];
        expected.sort();
        assert_eq!(verts, expected);
        assert_eq!(b.base().facets().len(), 4);
        assert_eq!(b.base_point(), vector(&[1, 0, 0]));
    }

    #[test]
    fn based_orthant_is_triangle() {
        let b = make_based(&Cone::orthant(3), &vector(&[1, 1, 1])).unwrap();
        assert_eq!(b.base().vertices().len(), 3);
        assert_eq!(b.base().dim(), 2);
    }

    #[test]
    fn skewed_square_base_is_not_parallelogram() {
        let phi = vec![Rational::int(1), Rational::ratio(1, 5), Rational::zero()];
        let b = make_based(&square(), &phi).unwrap();
        let v = b.base().vertices();
        // x/φ'(x): (1,1,0)/(6/5), (1,-1,0)/(4/5), (1,0,±1)/1.
        assert!(v.contains(&vec![
            Rational::ratio(5, 6),
            Rational::ratio(5, 6),
            Rational::zero()
        ]));
        assert!(v.contains(&vec![
            Rational::ratio(5, 4),
            Rational::ratio(-5, 4),
            Rational::zero()
        ]));
        assert!(v.contains(&vector(&[1, 0, 1])));
        assert!(v.contains(&vector(&[1, 0, -1])));
        // Opposite edges of a parallelogram are parallel; the diagonals' midpoints coincide.
        let mid =
            |a: &Vector, c: &Vector| linalg::scale(&linalg::add(a, c), &Rational::ratio(1, 2));
        let p = |x: &[i64]| {
            b.base()
                .vertices()
                .iter()
                .position(|v| linalg::primitive(v) == vector(x))
                .unwrap()
        };
        let (a, c) = (&v[p(&[1, 1, 0])], &v[p(&[1, -1, 0])]);
        let (bb, d) = (&v[p(&[1, 0, 1])], &v[p(&[1, 0, -1])]);
        assert_ne!(mid(a, c), mid(bb, d));
    }

    #[test]
    fn phi_must_be_interior() {
        assert_eq!(
            make_based(&square(), &vector(&[0, 1, 0])).unwrap_err(),
            Error::PhiNotInterior { ray: 0 }
        );
        assert!(make_based(&square(), &vector(&[1, 0])).is_err());
    }

    #[test]
    fn double_description_certificate() {
        let c = square();
        c.verify().unwrap();
        let inc = c.incidence();
        for (i, row) in inc.iter().enumerate() {
            assert_eq!(row.iter().filter(|&&b| b).count(), 2, "ray {i}");
        }
    }

    fn simplicial_generators() -> impl Strategy<Value = Vec<Vector>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..4, 3), 3)
            .prop_map(|rows| rows.iter().map(|r| vector(r)).collect::<Vec<_>>())
            .prop_filter("full rank", |g| linalg::rank(g) == 3)
    }

    fn random_generators() -> impl Strategy<Value = Vec<Vector>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..4, 3), 3..9)
            .prop_map(|rows| {
                rows.iter()
                    .map(|r| {
                        let mut v = vector(r);
                        // Keep every generator in the open half-space x₀ > 0.
                        v[0] = Rational::int(r[0].abs() + 1);
                        v
                    })
                    .collect::<Vec<_>>()
            })
            .prop_filter("full rank", |g| linalg::rank(g) == 3)
    }

    proptest! {
        #[test]
        fn bipolar_round_trip_simplicial(g in simplicial_generators()) {
            let c = make_cone(&g).unwrap();
            prop_assert!(c.is_simplicial());
            let dd = make_cone(c.dualize().rays()).unwrap();
            prop_assert_eq!(dd.dualize(), c.clone());
            prop_assert_eq!(c.dualize().dualize(), c);
        }

        #[test]
        fn dual_computed_from_facets_is_involutive(g in random_generators()) {
            let c = make_cone(&g).unwrap();
            let d = make_cone(c.facets()).unwrap();
            prop_assert_eq!(&d, &c.dualize());
            prop_assert_eq!(make_cone(d.facets()).unwrap(), c.clone());
            // Every generator lies in the cone.
            for x in &g {
                prop_assert!(c.contains(x));
            }
        }

        #[test]
        fn rebasing_recovers_rays(g in random_generators()) {
            let c = make_cone(&g).unwrap();
            let phi = vector(&[1, 0, 0]);
            let b = make_based(&c, &phi).unwrap();
            let again = make_cone(b.base().vertices()).unwrap();
            prop_assert_eq!(again, c);
        }
    }
}
