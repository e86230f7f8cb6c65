//! Face structure of polytopes: avoiding sets, simplicity, 2-levelness, the
//! affine-hull/intersection commutation test and recognition of products of simplices.
//!
//! A [`Polytope`] lives in an affine subspace `point + span(directions)` of some ℝᵐ.
//! Its facets are affine functionals `ψ_F(x) = linear·x + constant`, nonnegative on
//! the polytope and vanishing exactly on the facet.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::cone::{make_cone, Cone};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::scalar::Rational;

/// Largest facet count for which [`Polytope::affine_hull_commutes`] enumerates subsets.
pub const MAX_ENUMERATED_FACETS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineFunctional {
    pub linear: Vector,
    pub constant: Rational,
}

impl AffineFunctional {
    pub fn eval(&self, x: &[Rational]) -> Rational {
        linalg::dot(&self.linear, x) + &self.constant
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    point: Vector,
    directions: Vec<Vector>,
    vertices: Vec<Vector>,
    facets: Vec<AffineFunctional>,
    incidence: Vec<Vec<bool>>,
}

impl Polytope {
    /// Convex hull of `points`. Points that are not vertices are dropped; the vertices
    /// keep their input order and the facets are sorted colexicographically by vertex set.
    pub fn from_vertices(points: &[Vector]) -> Result<Polytope> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyInput);
        };
        let m = first.len();
        if points.iter().any(|p| p.len() != m) {
            return Err(Error::DimensionMismatch(
                "points of different lengths".into(),
            ));
        }
        let diffs: Vec<Vector> = points.iter().map(|p| linalg::sub(p, first)).collect();
        let mut echelon = diffs.clone();
        let pivots = linalg::rref(&mut echelon);
        let d = pivots.len();
        if d == 0 {
            return Err(Error::NotFullDimensional { rank: 0, dim: m });
        }
        let directions: Vec<Vector> = echelon.into_iter().take(d).collect();
        // Coordinates in the echelon basis are read off the pivot columns.
        let coords = |x: &[Rational]| -> Vector {
            let diff = linalg::sub(x, first);
            pivots.iter().map(|&c| diff[c].clone()).collect()
        };
        let lifted: Vec<Vector> = points
            .iter()
            .map(|p| {
                let mut v = vec![Rational::one()];
                v.extend(coords(p));
                v
            })
            .collect();
        let cone = make_cone(&lifted)?;
        let mut order: Vec<usize> = Vec::new();
        for p in &lifted {
            let key = linalg::primitive(p);
            if let Some(i) = cone.rays().iter().position(|r| *r == key) {
                if !order.contains(&i) {
                    order.push(i);
                }
            }
        }
        let vertices: Vec<Vector> = order
            .iter()
            .map(|&i| &cone.rays()[i])
            .map(|r| {
                let s = r[0].recip().expect("lifted rays have positive height");
                let mut x = first.clone();
                for (j, dir) in directions.iter().enumerate() {
                    let t = &r[j + 1] * &s;
                    x = linalg::add(&x, &linalg::scale(dir, &t));
                }
                x
            })
            .collect();
        // Pull each facet back: linear part L with L·dir_j = f_j, chosen supported on pivot columns.
        let facets: Vec<AffineFunctional> = cone
            .facets()
            .iter()
            .map(|f| {
                let mut linear = vec![Rational::zero(); m];
                for (j, &c) in pivots.iter().enumerate() {
                    linear[c] = f[j + 1].clone();
                }
                let constant = &f[0] - linalg::dot(&linear, first);
                AffineFunctional { linear, constant }
            })
            .collect();
        let mut facets: Vec<(Vec<usize>, AffineFunctional)> = facets
            .into_iter()
            .map(|f| {
                let on: Vec<usize> = (0..vertices.len())
                    .rev()
                    .filter(|&v| f.eval(&vertices[v]).is_zero())
                    .collect();
                (on, f)
            })
            .collect();
        facets.sort_by(|a, b| a.0.cmp(&b.0));
        let facets = facets.into_iter().map(|(_, f)| f).collect();
        Ok(Polytope::assemble(
            first.clone(),
            directions,
            vertices,
            facets,
        ))
    }

    /// The base `{x ∈ C : φ(x) = 1}` of a cone, with facets `x ↦ f·x` for the facets `f` of `C`.
    pub(crate) fn base_of(cone: &Cone, phi: &[Rational]) -> Polytope {
        let vertices: Vec<Vector> = cone
            .rays()
            .iter()
            .map(|r| linalg::scale(r, &linalg::dot(phi, r).recip().expect("phi positive")))
            .collect();
        let facets = cone
            .facets()
            .iter()
            .map(|f| AffineFunctional {
                linear: f.clone(),
                constant: Rational::zero(),
            })
            .collect();
        let mut point = vec![Rational::zero(); cone.ambient_dim()];
        for v in &vertices {
            point = linalg::add(&point, v);
        }
        point = linalg::scale(&point, &Rational::ratio(1, vertices.len() as i64));
        let directions = linalg::nullspace(&[phi.to_vec()], cone.ambient_dim());
        Polytope::assemble(point, directions, vertices, facets)
    }

    fn assemble(
        point: Vector,
        directions: Vec<Vector>,
        vertices: Vec<Vector>,
        facets: Vec<AffineFunctional>,
    ) -> Polytope {
        let incidence = vertices
            .iter()
            .map(|v| facets.iter().map(|f| f.eval(v).is_zero()).collect())
            .collect();
        Polytope {
            point,
            directions,
            vertices,
            facets,
            incidence,
        }
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[AffineFunctional] {
        &self.facets
    }

    pub fn incidence(&self) -> &[Vec<bool>] {
        &self.incidence
    }

    pub fn point(&self) -> &[Rational] {
        &self.point
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    /// Facets not containing vertex `v`.
    pub fn avoiding_set(&self, v: usize) -> Vec<usize> {
        self.incidence[v]
            .iter()
            .enumerate()
            .filter(|(_, &on)| !on)
            .map(|(j, _)| j)
            .collect()
    }

    /// Vertices lying on every facet in `facets`.
    pub fn face_from_facets(&self, facets: &[usize]) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| facets.iter().all(|&f| self.incidence[v][f]))
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        let d = self.dim();
        self.incidence
            .iter()
            .all(|row| row.iter().filter(|&&b| b).count() == d)
    }

    pub fn is_two_level(&self) -> bool {
        (0..self.facets.len()).all(|j| self.off_facet_value(j).is_some())
    }

    /// The single nonzero value of facet `j` on the vertices, if there is only one.
    fn off_facet_value(&self, j: usize) -> Option<Rational> {
        let mut values = self
            .vertices
            .iter()
            .map(|v| self.facets[j].eval(v))
            .filter(|x| !x.is_zero());
        let first = values.next()?;
        values.all(|x| x == first).then_some(first)
    }

    /// Facet `j` in the coordinates `t` of `point + Σ t_i directions_i`: `(coefficients, constant)`.
    fn restricted(&self, j: usize) -> (Vector, Rational) {
        let f = &self.facets[j];
        let coeffs = self
            .directions
            .iter()
            .map(|d| linalg::dot(&f.linear, d))
            .collect();
        (coeffs, f.eval(&self.point))
    }

    /// Dimension of `⋂_{F ∈ facets} aff(F)`; `None` when empty.
    pub fn hull_intersection_dim(&self, facets: &[usize]) -> Option<usize> {
        let mut rows = Vec::with_capacity(facets.len());
        let mut rhs = Vec::with_capacity(facets.len());
        for &j in facets {
            let (c, k) = self.restricted(j);
            rows.push(c);
            rhs.push(-k);
        }
        linalg::solution_dim(&rows, &rhs, self.dim())
    }

    /// Dimension of `aff(⋂_{F ∈ facets} F)`; `None` when the face is empty.
    pub fn face_dim(&self, facets: &[usize]) -> Option<usize> {
        let face = self.face_from_facets(facets);
        let pts: Vec<&[Rational]> = face.iter().map(|&v| self.vertices[v].as_slice()).collect();
        linalg::affine_dim(&pts)
    }

    /// Checks `aff(⋂ F) = ⋂ aff(F)` over every family of facets, smallest families first.
    pub fn affine_hull_commutes(&self) -> Result<HullCommutation> {
        let n = self.facets.len();
        if n > MAX_ENUMERATED_FACETS {
            return Err(Error::TooManyFacets(n));
        }
        for size in 2..=n {
            for subset in (0..n).combinations(size) {
                let face_dim = self.face_dim(&subset);
                let hull_dim = self.hull_intersection_dim(&subset);
                if face_dim != hull_dim {
                    return Ok(HullCommutation::Violated {
                        facets: subset,
                        face_dim,
                        hull_dim,
                    });
                }
            }
        }
        Ok(HullCommutation::Commutes)
    }

    /// Recognizes a product of simplices and returns the factor structure.
    pub fn factor_as_simplices(&self) -> Result<SimplexFactorization, FactorizationFailure> {
        use FactorizationFailure::*;
        if !self.is_simple() {
            return Err(NotSimple);
        }
        if !self.is_two_level() {
            return Err(NotTwoLevel);
        }
        let nf = self.facets.len();
        let nv = self.vertices.len();
        // Two facets are related when no vertex avoids both.
        let related =
            |a: usize, b: usize| a == b || self.incidence.iter().all(|row| row[a] || row[b]);
        let mut class_of = vec![usize::MAX; nf];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for f in 0..nf {
            if class_of[f] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = (0..nf).filter(|&g| related(f, g)).collect();
            for &g in &members {
                if class_of[g] != usize::MAX {
                    return Err(NotAnEquivalence);
                }
                class_of[g] = classes.len();
            }
            classes.push(members);
        }
        for class in &classes {
            for (&a, &b) in class.iter().tuple_combinations() {
                if !related(a, b) {
                    return Err(NotAnEquivalence);
                }
            }
            if class.len() < 2 {
                return Err(NotAnEquivalence);
            }
        }
        classes.sort_by_key(|c| (c.len(), c[0]));
        for (i, class) in classes.iter().enumerate() {
            for &f in class {
                class_of[f] = i;
            }
        }

        // Each vertex must avoid exactly one facet per class.
        let mut labels: Vec<Vec<usize>> = Vec::with_capacity(nv);
        for v in 0..nv {
            let mut label = Vec::with_capacity(classes.len());
            for class in &classes {
                let avoided: Vec<usize> = class
                    .iter()
                    .enumerate()
                    .filter(|(_, &f)| !self.incidence[v][f])
                    .map(|(pos, _)| pos)
                    .collect();
                if avoided.len() != 1 {
                    return Err(AvoidingSetMismatch { vertex: v });
                }
                label.push(avoided[0]);
            }
            labels.push(label);
        }
        let expected: usize = classes.iter().map(Vec::len).product();
        if labels.iter().unique().count() != nv || nv != expected {
            return Err(LabelingNotBijective);
        }
        for (v, label) in labels.iter().enumerate() {
            for (c, class) in classes.iter().enumerate() {
                for (pos, &f) in class.iter().enumerate() {
                    if self.incidence[v][f] != (label[c] != pos) {
                        return Err(IncidenceMismatch {
                            vertex: v,
                            facet: f,
                        });
                    }
                }
            }
        }

        // Affine check: x(label) = x(0,…,0) + Σ_c (x(0,…,j_c,…,0) − x(0,…,0)).
        let find = |label: &[usize]| labels.iter().position(|l| l == label).expect("bijective");
        let origin_label = vec![0; classes.len()];
        let origin = &self.vertices[find(&origin_label)];
        let mut steps: Vec<Vec<Vector>> = Vec::new();
        for (c, class) in classes.iter().enumerate() {
            let mut row = Vec::new();
            for j in 0..class.len() {
                let mut l = origin_label.clone();
                l[c] = j;
                row.push(linalg::sub(&self.vertices[find(&l)], origin));
            }
            steps.push(row);
        }
        for (v, label) in labels.iter().enumerate() {
            let mut x = origin.clone();
            for (c, &j) in label.iter().enumerate() {
                x = linalg::add(&x, &steps[c][j]);
            }
            if x != self.vertices[v] {
                return Err(NotAffineProduct { vertex: v });
            }
        }

        let facet_scales: Vec<Rational> = (0..nf)
            .map(|f| {
                self.off_facet_value(f)
                    .expect("two-level")
                    .recip()
                    .expect("nonzero")
            })
            .collect();
        // Rescaled facets of one class sum to 1 on every vertex.
        for class in &classes {
            for v in &self.vertices {
                let s: Rational = class
                    .iter()
                    .map(|&f| &facet_scales[f] * self.facets[f].eval(v))
                    .sum();
                if !s.is_one() {
                    return Err(NotAffineProduct { vertex: 0 });
                }
            }
        }
        Ok(SimplexFactorization {
            factor_dims: classes.iter().map(|c| c.len() - 1).collect(),
            vertex_labels: labels,
            facet_classes: classes,
            facet_scales,
        })
    }
}

/// Outcome of [`Polytope::affine_hull_commutes`]. Dimensions are `None` for empty sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HullCommutation {
    Commutes,
    Violated {
        facets: Vec<usize>,
        face_dim: Option<usize>,
        hull_dim: Option<usize>,
    },
}

impl HullCommutation {
    pub fn commutes(&self) -> bool {
        matches!(self, HullCommutation::Commutes)
    }
}

/// Product-of-simplices structure of a polytope.
///
/// Class `c` of `facet_classes` lists the facets coming from factor `c`, which is a
/// simplex of dimension `factor_dims[c]`. Vertex `v` avoids exactly facet
/// `facet_classes[c][vertex_labels[v][c]]` in each class. Multiplying facet `f`
/// by `facet_scales[f]` makes each class sum to 1 on the polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexFactorization {
    pub factor_dims: Vec<usize>,
    pub vertex_labels: Vec<Vec<usize>>,
    pub facet_classes: Vec<Vec<usize>>,
    pub facet_scales: Vec<Rational>,
}

impl SimplexFactorization {
    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorizationFailure {
    NotSimple,
    NotTwoLevel,
    NotAnEquivalence,
    AvoidingSetMismatch { vertex: usize },
    LabelingNotBijective,
    IncidenceMismatch { vertex: usize, facet: usize },
    NotAffineProduct { vertex: usize },
}

impl fmt::Display for FactorizationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FactorizationFailure::*;
        match self {
            NotSimple => write!(f, "not simple"),
            NotTwoLevel => write!(f, "not 2-level"),
            NotAnEquivalence => write!(f, "facet relation is not an equivalence"),
            AvoidingSetMismatch { vertex } => {
                write!(f, "vertex {vertex} does not avoid one facet per class")
            }
            LabelingNotBijective => write!(f, "vertex labeling is not a bijection"),
            IncidenceMismatch { vertex, facet } => {
                write!(
                    f,
                    "labeling disagrees with incidence at vertex {vertex}, facet {facet}"
                )
            }
            NotAffineProduct { vertex } => {
                write!(f, "vertex {vertex} breaks the affine product structure")
            }
        }
    }
}
