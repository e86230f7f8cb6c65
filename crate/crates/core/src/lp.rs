//! Exact rational linear programming.
//!
//! [`solve`] runs a dense two-phase simplex with Bland's rule over [`Rational`]s.
//! Every outcome carries a certificate that is checked before it is returned:
//! feasible points are substituted back, optima come with a dual solution of equal
//! value, and infeasibility comes with Farkas multipliers that combine the
//! constraints into `0 ≥ c` for some `c > 0`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub row: Vector,
    pub rhs: Rational,
}

/// `minimize objective·x` subject to `equalities` (`row·x = rhs`), `inequalities`
/// (`row·x ≥ rhs`) and `x_j ≥ 0` for every `j` with `nonneg[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub equalities: Vec<Constraint>,
    pub inequalities: Vec<Constraint>,
    pub nonneg: Vec<bool>,
    pub objective: Option<Vector>,
}

impl LpProblem {
    /// A problem over `num_vars` free variables with no constraints.
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            equalities: Vec::new(),
            inequalities: Vec::new(),
            nonneg: vec![false; num_vars],
            objective: None,
        }
    }

    pub fn add_eq(&mut self, row: Vector, rhs: Rational) -> &mut Self {
        self.equalities.push(Constraint { row, rhs });
        self
    }

    pub fn add_ge(&mut self, row: Vector, rhs: Rational) -> &mut Self {
        self.inequalities.push(Constraint { row, rhs });
        self
    }

    pub fn all_nonneg(&mut self) -> &mut Self {
        self.nonneg = vec![true; self.num_vars];
        self
    }

    pub fn minimize(&mut self, objective: Vector) -> &mut Self {
        self.objective = Some(objective);
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        let bad = self
            .equalities
            .iter()
            .chain(&self.inequalities)
            .any(|c| c.row.len() != n);
        if bad || self.nonneg.len() != n || self.objective.as_ref().is_some_and(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "LP rows must have {n} coefficients"
            )));
        }
        Ok(())
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && self
                .equalities
                .iter()
                .all(|c| linalg::dot(&c.row, x) == c.rhs)
            && self
                .inequalities
                .iter()
                .all(|c| linalg::dot(&c.row, x) >= c.rhs)
            && x.iter()
                .zip(&self.nonneg)
                .all(|(v, &nn)| !nn || !v.is_negative())
    }
}

/// Multipliers for equality rows (any sign), inequality rows (≥ 0) and variable
/// bounds `x_j ≥ 0` (≥ 0, zero on free variables).
#[derive(Clone, Debug, PartialEq)]
pub struct Multipliers {
    pub equalities: Vector,
    pub inequalities: Vector,
    pub bounds: Vector,
}

impl Multipliers {
    fn check_signs(&self, p: &LpProblem) -> Result<()> {
        if self.equalities.len() != p.equalities.len()
            || self.inequalities.len() != p.inequalities.len()
            || self.bounds.len() != p.num_vars
        {
            return Err(Error::Certificate(
                "multiplier vector has wrong length".into(),
            ));
        }
        if self.inequalities.iter().any(Rational::is_negative) {
            return Err(Error::Certificate("negative inequality multiplier".into()));
        }
        for (m, &nn) in self.bounds.iter().zip(&p.nonneg) {
            if m.is_negative() || (!nn && !m.is_zero()) {
                return Err(Error::Certificate("invalid bound multiplier".into()));
            }
        }
        Ok(())
    }

    /// Combined row `Σ λ_i row_i + Σ μ_j e_j` and right-hand side `Σ λ_i rhs_i`.
    pub fn combine(&self, p: &LpProblem) -> (Vector, Rational) {
        let mut row = self.bounds.clone();
        let mut rhs = Rational::zero();
        let pairs = p
            .equalities
            .iter()
            .zip(&self.equalities)
            .chain(p.inequalities.iter().zip(&self.inequalities));
        for (c, m) in pairs {
            if m.is_zero() {
                continue;
            }
            for (acc, a) in row.iter_mut().zip(&c.row) {
                if !a.is_zero() {
                    *acc += &(m * a);
                }
            }
            rhs += &(m * &c.rhs);
        }
        (row, rhs)
    }

    /// Checks that the multipliers refute feasibility: the combination is `0·x ≥ c` with `c > 0`.
    pub fn verify_farkas(&self, p: &LpProblem) -> Result<()> {
        self.check_signs(p)?;
        let (row, rhs) = self.combine(p);
        if !linalg::is_zero(&row) {
            return Err(Error::Certificate("combined row is not zero".into()));
        }
        if !rhs.is_positive() {
            return Err(Error::Certificate(
                "combined right-hand side is not positive".into(),
            ));
        }
        Ok(())
    }

    /// Checks dual feasibility for `objective` with dual value `value`.
    pub fn verify_dual(
        &self,
        p: &LpProblem,
        objective: &[Rational],
        value: &Rational,
    ) -> Result<()> {
        self.check_signs(p)?;
        let (row, rhs) = self.combine(p);
        if row != objective {
            return Err(Error::Certificate(
                "dual combination differs from objective".into(),
            ));
        }
        if &rhs != value {
            return Err(Error::Certificate("dual value differs from optimum".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Feasible,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    /// A feasible point; when an objective is present it is optimal, certified by `dual`.
    Feasible {
        point: Vector,
        optimum: Option<(Rational, Multipliers)>,
    },
    Infeasible {
        certificate: Multipliers,
    },
    /// A feasible point and a recession direction along which the objective decreases.
    Unbounded {
        point: Vector,
        ray: Vector,
    },
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Feasible { .. } => LpStatus::Feasible,
            LpOutcome::Infeasible { .. } => LpStatus::Infeasible,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible { point, .. } | LpOutcome::Unbounded { point, .. } => Some(point),
            LpOutcome::Infeasible { .. } => None,
        }
    }

    pub fn optimum(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Feasible {
                optimum: Some((v, _)),
                ..
            } => Some(v),
            _ => None,
        }
    }

    pub fn verify(&self, p: &LpProblem) -> Result<()> {
        match self {
            LpOutcome::Feasible { point, optimum } => {
                if !p.is_feasible_point(point) {
                    return Err(Error::Certificate("point violates a constraint".into()));
                }
                match (optimum, &p.objective) {
                    (Some((value, dual)), Some(c)) => {
                        if &linalg::dot(c, point) != value {
                            return Err(Error::Certificate("optimum does not match point".into()));
                        }
                        dual.verify_dual(p, c, value)
                    }
                    (None, None) => Ok(()),
                    _ => Err(Error::Certificate("optimum presence mismatch".into())),
                }
            }
            LpOutcome::Infeasible { certificate } => certificate.verify_farkas(p),
            LpOutcome::Unbounded { point, ray } => {
                let c = p
                    .objective
                    .as_ref()
                    .ok_or_else(|| Error::Certificate("unbounded without objective".into()))?;
                let ok = p.is_feasible_point(point)
                    && p.equalities
                        .iter()
                        .all(|e| linalg::dot(&e.row, ray).is_zero())
                    && p.inequalities
                        .iter()
                        .all(|e| !linalg::dot(&e.row, ray).is_negative())
                    && ray
                        .iter()
                        .zip(&p.nonneg)
                        .all(|(v, &nn)| !nn || !v.is_negative())
                    && linalg::dot(c, ray).is_negative();
                if ok {
                    Ok(())
                } else {
                    Err(Error::Certificate("invalid unbounded ray".into()))
                }
            }
        }
    }
}

/// Where an original variable lives in the standard form.
#[derive(Clone, Copy)]
enum VarColumns {
    NonNeg(usize),
    Free(usize, usize),
}

struct Tableau {
    rows: Vec<Vector>,
    rhs: Vector,
    /// Reduced costs over all columns (structural, then artificial).
    cost: Vector,
    /// Negated objective value.
    cost_rhs: Rational,
    basis: Vec<usize>,
    start_col: Vec<StartColumn>,
    num_structural: usize,
}

#[derive(Clone, Copy)]
enum StartColumn {
    Slack(usize),
    Artificial(usize),
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip().expect("pivot on zero");
        let nz: Vec<usize> = (0..self.rows[r].len())
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        for &j in &nz {
            self.rows[r][j] *= &inv;
        }
        self.rhs[r] *= &inv;
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            let row = &mut self.rows[i];
            for &j in &nz {
                row[j] -= &(&f * &prow[j]);
            }
            if !prhs.is_zero() {
                self.rhs[i] -= &(&f * &prhs);
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for &j in &nz {
                self.cost[j] -= &(&f * &prow[j]);
            }
            self.cost_rhs -= &(&f * &prhs);
        }
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column, then lowest basic index among ratio ties.
    /// Returns `Ok(true)` at optimality and `Err(column)` on unboundedness.
    fn run(&mut self, allowed: usize) -> std::result::Result<(), usize> {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Err(c),
            }
        }
    }

    fn structural_values(&self) -> Vector {
        let mut x = vec![Rational::zero(); self.num_structural];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_structural {
                x[b] = self.rhs[r].clone();
            }
        }
        x
    }

    /// Row duals `y = c_B B⁻¹`, read off each row's starting column: `y_r = c_j − d_j`
    /// where the starting column `j` is the unit vector of row `r` with cost `c_j`.
    fn row_duals(&self, art_cost: &Rational) -> Vector {
        self.start_col
            .iter()
            .map(|s| match *s {
                StartColumn::Slack(c) => -&self.cost[c],
                StartColumn::Artificial(a) => art_cost - &self.cost[self.num_structural + a],
            })
            .collect()
    }
}

/// Solves an LP exactly. The returned outcome has already been verified.
pub fn solve(p: &LpProblem) -> Result<LpOutcome> {
    p.validate()?;
    let outcome = solve_unchecked(p);
    outcome
        .verify(p)
        .map_err(|e| Error::Inconsistent(format!("simplex produced an invalid outcome: {e}")))?;
    Ok(outcome)
}

fn solve_unchecked(p: &LpProblem) -> LpOutcome {
    // Standard form: columns for variables (split when free), then one slack per inequality.
    let mut columns = Vec::with_capacity(p.num_vars);
    let mut ncols = 0;
    for &nn in &p.nonneg {
        if nn {
            columns.push(VarColumns::NonNeg(ncols));
            ncols += 1;
        } else {
            columns.push(VarColumns::Free(ncols, ncols + 1));
            ncols += 2;
        }
    }
    let slack0 = ncols;
    let num_structural = ncols + p.inequalities.len();
    let m = p.equalities.len() + p.inequalities.len();

    // Rows are negated where needed so that rhs ≥ 0. An inequality with rhs ≤ 0 is
    // negated so its slack enters with coefficient +1 and starts basic; every other
    // row gets an artificial column.
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut signs = Vec::with_capacity(m);
    let mut start_col = Vec::with_capacity(m);
    let mut num_art = 0;
    let all_rows = p
        .equalities
        .iter()
        .map(|c| (c, None))
        .chain(p.inequalities.iter().enumerate().map(|(i, c)| (c, Some(i))));
    for (c, slack) in all_rows {
        let mut row = vec![Rational::zero(); num_structural];
        for (j, a) in c.row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match columns[j] {
                VarColumns::NonNeg(col) => row[col] = a.clone(),
                VarColumns::Free(pos, neg) => {
                    row[pos] = a.clone();
                    row[neg] = -a;
                }
            }
        }
        if let Some(i) = slack {
            row[slack0 + i] = -Rational::one();
        }
        let slack_start = slack.is_some() && !c.rhs.is_positive();
        let negate = c.rhs.is_negative() || slack_start;
        let mut b = c.rhs.clone();
        if negate {
            for x in row.iter_mut() {
                if !x.is_zero() {
                    *x = -&*x;
                }
            }
            b = -b;
        }
        signs.push(if negate {
            -Rational::one()
        } else {
            Rational::one()
        });
        start_col.push(match slack {
            Some(i) if slack_start => StartColumn::Slack(slack0 + i),
            _ => {
                num_art += 1;
                StartColumn::Artificial(num_art - 1)
            }
        });
        rows.push(row);
        rhs.push(b);
    }
    let width = num_structural + num_art;
    for (row, s) in rows.iter_mut().zip(&start_col) {
        row.resize(width, Rational::zero());
        if let StartColumn::Artificial(a) = s {
            row[num_structural + a] = Rational::one();
        }
    }
    let basis: Vec<usize> = start_col
        .iter()
        .map(|s| match *s {
            StartColumn::Slack(c) => c,
            StartColumn::Artificial(a) => num_structural + a,
        })
        .collect();

    // Phase 1 reduced costs: 1 on artificials minus the sum of artificial rows.
    let mut cost = vec![Rational::zero(); width];
    let mut cost_rhs = Rational::zero();
    for ((row, b), s) in rows.iter().zip(&rhs).zip(&start_col) {
        if matches!(s, StartColumn::Slack(_)) {
            continue;
        }
        for j in 0..num_structural {
            if !row[j].is_zero() {
                cost[j] -= &row[j];
            }
        }
        cost_rhs -= b;
    }
    let mut t = Tableau {
        rows,
        rhs,
        cost,
        cost_rhs,
        basis,
        start_col: start_col.clone(),
        num_structural,
    };
    t.run(num_structural)
        .expect("phase one is bounded below by zero");

    let infeasibility = -&t.cost_rhs;
    let to_original = |y: &[Rational]| -> (Vector, Vector) {
        let lambda: Vector = y.iter().zip(&signs).map(|(a, s)| a * s).collect();
        let (eq, ineq) = lambda.split_at(p.equalities.len());
        (eq.to_vec(), ineq.to_vec())
    };
    let bound_multipliers = |target: Option<&Vector>, eq: &[Rational], ineq: &[Rational]| {
        let mult = Multipliers {
            equalities: eq.to_vec(),
            inequalities: ineq.to_vec(),
            bounds: vec![Rational::zero(); p.num_vars],
        };
        let (row, _) = mult.combine(p);
        let bounds = match target {
            Some(c) => linalg::sub(c, &row),
            None => row.iter().map(|v| -v).collect(),
        };
        Multipliers { bounds, ..mult }
    };

    if infeasibility.is_positive() {
        let y = t.row_duals(&Rational::one());
        let (eq, ineq) = to_original(&y);
        return LpOutcome::Infeasible {
            certificate: bound_multipliers(None, &eq, &ineq),
        };
    }

    // Drive zero-valued artificials out of the basis where the row allows it.
    for r in 0..t.rows.len() {
        if t.basis[r] >= num_structural {
            if let Some(c) = (0..num_structural).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }

    let original_point = |x: &[Rational]| -> Vector {
        columns
            .iter()
            .map(|c| match *c {
                VarColumns::NonNeg(col) => x[col].clone(),
                VarColumns::Free(pos, neg) => &x[pos] - &x[neg],
            })
            .collect()
    };

    let Some(objective) = &p.objective else {
        return LpOutcome::Feasible {
            point: original_point(&t.structural_values()),
            optimum: None,
        };
    };

    // Phase 2 costs: objective on structural columns, zero on artificials.
    let mut c_std = vec![Rational::zero(); width];
    for (j, cj) in objective.iter().enumerate() {
        match columns[j] {
            VarColumns::NonNeg(col) => c_std[col] = cj.clone(),
            VarColumns::Free(pos, neg) => {
                c_std[pos] = cj.clone();
                c_std[neg] = -cj;
            }
        }
    }
    let mut cost = c_std.clone();
    let mut cost_rhs = Rational::zero();
    for (r, &b) in t.basis.iter().enumerate() {
        let cb = &c_std[b];
        if cb.is_zero() {
            continue;
        }
        for j in 0..width {
            if !t.rows[r][j].is_zero() {
                cost[j] -= &(cb * &t.rows[r][j]);
            }
        }
        cost_rhs -= &(cb * &t.rhs[r]);
    }
    t.cost = cost;
    t.cost_rhs = cost_rhs;

    match t.run(num_structural) {
        Ok(()) => {
            let point = original_point(&t.structural_values());
            let value = -&t.cost_rhs;
            let y = t.row_duals(&Rational::zero());
            let (eq, ineq) = to_original(&y);
            LpOutcome::Feasible {
                point,
                optimum: Some((value, bound_multipliers(Some(objective), &eq, &ineq))),
            }
        }
        Err(c) => {
            let point = original_point(&t.structural_values());
            let mut dir = vec![Rational::zero(); num_structural];
            dir[c] = Rational::one();
            for (r, &b) in t.basis.iter().enumerate() {
                if b < num_structural {
                    dir[b] = -&t.rows[r][c];
                }
            }
            LpOutcome::Unbounded {
                point,
                ray: original_point(&dir),
            }
        }
    }
}

/// Result of testing `target ∈ cone(generators)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ConicMembership {
    /// Nonnegative weights with `Σ wᵢ gᵢ = target`.
    Member { weights: Vector },
    /// A primitive integer functional `h` with `h(target) < 0 ≤ h(gᵢ)` for all `i`.
    Separated { functional: Vector },
}

impl ConicMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, ConicMembership::Member { .. })
    }

    /// Indices and weights of the generators actually used.
    pub fn support(&self) -> Vec<(usize, Rational)> {
        match self {
            ConicMembership::Member { weights } => weights
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(i, w)| (i, w.clone()))
                .collect(),
            ConicMembership::Separated { .. } => Vec::new(),
        }
    }

    pub fn verify(&self, target: &[Rational], generators: &[Vector]) -> Result<()> {
        match self {
            ConicMembership::Member { weights } => {
                if weights.len() != generators.len() || weights.iter().any(Rational::is_negative) {
                    return Err(Error::Certificate("invalid decomposition weights".into()));
                }
                let mut acc = vec![Rational::zero(); target.len()];
                for (w, g) in weights.iter().zip(generators) {
                    if w.is_zero() {
                        continue;
                    }
                    for (a, x) in acc.iter_mut().zip(g) {
                        *a += &(w * x);
                    }
                }
                if acc != target {
                    return Err(Error::Certificate("decomposition does not re-sum".into()));
                }
                Ok(())
            }
            ConicMembership::Separated { functional } => {
                if !linalg::dot(functional, target).is_negative() {
                    return Err(Error::Certificate(
                        "functional is not negative on target".into(),
                    ));
                }
                if generators
                    .iter()
                    .any(|g| linalg::dot(functional, g).is_negative())
                {
                    return Err(Error::Certificate(
                        "functional is negative on a generator".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Decides whether `target` is a nonnegative combination of `generators`.
pub fn conic_membership(target: &[Rational], generators: &[Vector]) -> Result<ConicMembership> {
    let dim = target.len();
    if let Some(g) = generators.iter().find(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "generator of length {} for target of length {dim}",
            g.len()
        )));
    }
    let mut p = LpProblem::new(generators.len());
    p.all_nonneg();
    for d in 0..dim {
        let row = generators.iter().map(|g| g[d].clone()).collect();
        p.add_eq(row, target[d].clone());
    }
    let result = match solve(&p)? {
        LpOutcome::Feasible { point, .. } => ConicMembership::Member { weights: point },
        LpOutcome::Infeasible { certificate } => {
            let h: Vector = certificate.equalities.iter().map(|u| -u).collect();
            ConicMembership::Separated {
                functional: linalg::primitive(&h),
            }
        }
        LpOutcome::Unbounded { .. } => unreachable!("no objective"),
    };
    result.verify(target, generators)?;
    Ok(result)
}
