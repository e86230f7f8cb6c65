//! Exact verification of a 2-max-extendible operator on `ℂ³ ⊗ ℂ³` that has no
//! positive semidefinite 2-extension.
//!
//! All operators involved are real symmetric with entries in ℚ(√2), so the module
//! works with dense [`QuadScalar`] matrices and never touches floating point.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{QuadScalar, Rational, Sign};

/// Dense square matrix over ℚ(√2), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactOperator {
    dim: usize,
    entries: Vec<QuadScalar>,
}

impl fmt::Debug for ExactOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactOperator({})", self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ExactOperator {
    pub fn new(dim: usize, entries: Vec<QuadScalar>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {dim}×{dim} matrix",
                entries.len()
            )));
        }
        Ok(ExactOperator { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        ExactOperator {
            dim,
            entries: vec![QuadScalar::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ExactOperator::zeros(dim);
        for i in 0..dim {
            m.set(i, i, QuadScalar::one());
        }
        m
    }

    /// `|v⟩⟨v|` for a real vector `v`.
    pub fn outer(v: &[QuadScalar]) -> Self {
        let n = v.len();
        let mut m = ExactOperator::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, &v[i] * &v[j]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[QuadScalar] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadScalar {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QuadScalar) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(ExactOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(ExactOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: &QuadScalar) -> Self {
        ExactOperator {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} against {}×{}",
                self.dim, self.dim, other.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> QuadScalar {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    /// `tr(AB)` for symmetric or general operators, as `Σ A_ij B_ji`.
    pub fn trace_product(&self, other: &Self) -> Result<QuadScalar> {
        self.same_dim(other)?;
        let mut acc = QuadScalar::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let (a, b) = (self.get(i, j), other.get(j, i));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a * b;
                }
            }
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Self {
        let mut m = ExactOperator::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let n = self.dim * other.dim;
        let mut m = ExactOperator::zeros(n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        m.set(i * other.dim + k, j * other.dim + l, a * other.get(k, l));
                    }
                }
            }
        }
        m
    }

    /// Conjugation by the permutation of tensor factors `perm`: factor `f` of the input
    /// becomes factor `perm[f]` of the output.
    pub fn permute_factors(&self, factor_dims: &[usize], perm: &[usize]) -> Result<Self> {
        check_factors(self.dim, factor_dims)?;
        let out_dims: Vec<usize> = {
            let mut d = vec![0; factor_dims.len()];
            for (f, &p) in perm.iter().enumerate() {
                d[p] = factor_dims[f];
            }
            d
        };
        let map = |idx: usize| -> usize {
            let digits = split_index(idx, factor_dims);
            let mut out = vec![0; digits.len()];
            for (f, &p) in perm.iter().enumerate() {
                out[p] = digits[f];
            }
            join_index(&out, &out_dims)
        };
        let mut m = ExactOperator::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(map(i), map(j), self.get(i, j).clone());
            }
        }
        Ok(m)
    }
}

fn check_factors(dim: usize, factor_dims: &[usize]) -> Result<()> {
    if factor_dims.iter().product::<usize>() != dim || factor_dims.iter().any(|&d| d == 0) {
        return Err(Error::DimensionMismatch(format!(
            "factors {factor_dims:?} do not multiply to {dim}"
        )));
    }
    Ok(())
}

fn split_index(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for f in (0..dims.len()).rev() {
        out[f] = idx % dims[f];
        idx /= dims[f];
    }
    out
}

fn join_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

fn q(n: i64) -> QuadScalar {
    QuadScalar::from(n)
}

/// `η = 1 − √2/2`.
pub fn eta() -> QuadScalar {
    QuadScalar::new(Rational::int(1), Rational::ratio(-1, 2))
}

/// `X = α Σ|ii⟩⟨ii| + β Σ_{i≠j}|ij⟩⟨ij| + γ Σ_{i≠j}|ii⟩⟨jj|` on `ℂ³ ⊗ ℂ³`.
pub fn build_x(alpha: &QuadScalar, beta: &QuadScalar, gamma: &QuadScalar) -> ExactOperator {
    let mut m = ExactOperator::zeros(9);
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                m.set(4 * i, 4 * i, alpha.clone());
            } else {
                m.set(3 * i + j, 3 * i + j, beta.clone());
                m.set(4 * i, 4 * j, gamma.clone());
            }
        }
    }
    m
}

/// Result of [`psd_check_exact`].
#[derive(Clone, Debug, PartialEq)]
pub struct PsdReport {
    pub psd: bool,
    /// Number of positive pivots; the rank when `psd` holds.
    pub rank: usize,
    /// Positive pivots in elimination order.
    pub pivots: Vec<QuadScalar>,
}

impl PsdReport {
    pub fn positive_definite(&self, dim: usize) -> bool {
        self.psd && self.rank == dim
    }

    pub fn kernel_dim(&self, dim: usize) -> usize {
        dim - self.rank
    }
}

/// Symmetric Gaussian elimination with exact sign tests. A negative diagonal entry in
/// any Schur complement, or a zero diagonal with a nonzero row, rules out PSD.
pub fn psd_check_exact(m: &ExactOperator) -> Result<PsdReport> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.dim;
    let mut a: Vec<Vec<QuadScalar>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    loop {
        if alive.iter().any(|&i| a[i][i].sign() == Sign::Negative) {
            return Ok(PsdReport {
                psd: false,
                rank: pivots.len(),
                pivots,
            });
        }
        // Zero diagonals must come with zero rows.
        let mut zero_rows = Vec::new();
        for &i in &alive {
            if a[i][i].is_zero() {
                if alive.iter().any(|&j| !a[i][j].is_zero()) {
                    return Ok(PsdReport {
                        psd: false,
                        rank: pivots.len(),
                        pivots,
                    });
                }
                zero_rows.push(i);
            }
        }
        alive.retain(|i| !zero_rows.contains(i));
        let Some(&p) = alive.first() else {
            break;
        };
        let inv = a[p][p].checked_inv().expect("positive pivot");
        alive.remove(0);
        for &i in &alive {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] * &inv;
            for &j in &alive {
                if !a[p][j].is_zero() {
                    let d = &f * &a[p][j];
                    a[i][j] = &a[i][j] - &d;
                }
            }
        }
        pivots.push(a[p][p].clone());
    }
    Ok(PsdReport {
        psd: true,
        rank: pivots.len(),
        pivots,
    })
}

/// Transposes tensor factor `which` of an operator on `⊗ ℂ^{dᵢ}`.
pub fn partial_transpose(
    m: &ExactOperator,
    factor_dims: &[usize],
    which: usize,
) -> Result<ExactOperator> {
    check_factors(m.dim, factor_dims)?;
    if which >= factor_dims.len() {
        return Err(Error::DimensionMismatch(format!("no factor {which}")));
    }
    let mut out = ExactOperator::zeros(m.dim);
    for i in 0..m.dim {
        for j in 0..m.dim {
            let mut di = split_index(i, factor_dims);
            let mut dj = split_index(j, factor_dims);
            std::mem::swap(&mut di[which], &mut dj[which]);
            out.set(
                join_index(&di, factor_dims),
                join_index(&dj, factor_dims),
                m.get(i, j).clone(),
            );
        }
    }
    Ok(out)
}

/// Traces out factor `which`.
pub fn partial_trace(
    m: &ExactOperator,
    factor_dims: &[usize],
    which: usize,
) -> Result<ExactOperator> {
    check_factors(m.dim, factor_dims)?;
    if which >= factor_dims.len() {
        return Err(Error::DimensionMismatch(format!("no factor {which}")));
    }
    let mut rest = factor_dims.to_vec();
    rest.remove(which);
    let n: usize = rest.iter().product();
    let mut out = ExactOperator::zeros(n);
    for i in 0..m.dim {
        for j in 0..m.dim {
            let di = split_index(i, factor_dims);
            let dj = split_index(j, factor_dims);
            if di[which] != dj[which] || m.get(i, j).is_zero() {
                continue;
            }
            let mut ri = di.clone();
            ri.remove(which);
            let mut rj = dj.clone();
            rj.remove(which);
            let (oi, oj) = (join_index(&ri, &rest), join_index(&rj, &rest));
            let v = out.get(oi, oj) + m.get(i, j);
            out.set(oi, oj, v);
        }
    }
    Ok(out)
}

const TRIPARTITE: [usize; 3] = [3, 3, 3];

/// `½(Tr_{B₂} m + Tr_{B₁} m)` for `m` on `A ⊗ B₁ ⊗ B₂` with all factors `ℂ³`.
pub fn reduce_b_factors(m: &ExactOperator) -> Result<ExactOperator> {
    if m.dim != 27 {
        return Err(Error::DimensionMismatch(format!(
            "expected 27×27, found {0}×{0}",
            m.dim
        )));
    }
    let t2 = partial_trace(m, &TRIPARTITE, 2)?;
    let t1 = partial_trace(m, &TRIPARTITE, 1)?;
    Ok(t2.add(&t1)?.scale(&QuadScalar::from(Rational::ratio(1, 2))))
}

/// `(Id ⊗ P_Sym)(W ⊗ 1)` on `A ⊗ B₁ ⊗ B₂`, the adjoint of [`reduce_b_factors`] applied to `W`.
pub fn symmetric_lift(w: &ExactOperator) -> Result<ExactOperator> {
    if w.dim != 9 {
        return Err(Error::DimensionMismatch("expected a 9×9 operator".into()));
    }
    let padded = w.kron(&ExactOperator::identity(3));
    let swapped = padded.permute_factors(&TRIPARTITE, &[0, 2, 1])?;
    Ok(padded
        .add(&swapped)?
        .scale(&QuadScalar::from(Rational::ratio(1, 2))))
}

/// Vector on `(ℂ³)^{⊗3}` from `(coefficient, |ijk⟩)` terms with 1-based labels.
pub fn ket(terms: &[(QuadScalar, [usize; 3])]) -> Vec<QuadScalar> {
    let mut v = vec![QuadScalar::zero(); 27];
    for (c, [i, j, k]) in terms {
        let idx = (i - 1) * 9 + (j - 1) * 3 + (k - 1);
        v[idx] = &v[idx] + c;
    }
    v
}

/// The three vectors whose projectors extend `X_{4,1,2√2+1}`. The third one pairs
/// `|131⟩ + |113⟩` with `|232⟩ + |223⟩`, mirroring the first two vectors.
pub fn extension_vectors() -> [Vec<QuadScalar>; 3] {
    let r2 = QuadScalar::sqrt2();
    let one = q(1);
    [
        ket(&[
            (r2.clone(), [1, 1, 1]),
            (one.clone(), [2, 1, 2]),
            (one.clone(), [2, 2, 1]),
            (one.clone(), [3, 1, 3]),
            (one.clone(), [3, 3, 1]),
        ]),
        ket(&[
            (r2.clone(), [2, 2, 2]),
            (one.clone(), [3, 2, 3]),
            (one.clone(), [3, 3, 2]),
            (one.clone(), [1, 2, 1]),
            (one.clone(), [1, 1, 2]),
        ]),
        ket(&[
            (r2, [3, 3, 3]),
            (one.clone(), [1, 3, 1]),
            (one.clone(), [1, 1, 3]),
            (one.clone(), [2, 3, 2]),
            (one, [2, 2, 3]),
        ]),
    ]
}

/// `Σ_σ |σ(1)σ(2)σ(3)⟩` over the six permutations.
pub fn permutation_vector() -> Vec<QuadScalar> {
    let perms = [
        [1, 2, 3],
        [1, 3, 2],
        [2, 1, 3],
        [2, 3, 1],
        [3, 1, 2],
        [3, 2, 1],
    ];
    ket(&perms.map(|p| (q(1), p)))
}

/// One verified statement with the exact values it rests on.
#[derive(Clone, Debug, PartialEq)]
pub struct ClaimRecord {
    pub label: &'static str,
    pub passed: bool,
    pub values: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixReport {
    pub claims: Vec<ClaimRecord>,
    /// `c` with `reduce(|ψ⟩⟨ψ|) = c · X_{0,1,1}^{T_B}`.
    pub transpose_scale: QuadScalar,
}

impl AppendixReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}

fn require(label: &str, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ClaimFailed(format!("{label}: {what}")))
    }
}

/// Runs the four claims. Any failed identity aborts with [`Error::ClaimFailed`].
pub fn verify_appendix() -> Result<AppendixReport> {
    let eta = eta();
    let one = q(1);
    let r2 = QuadScalar::sqrt2();
    let mut claims = Vec::new();

    // 1. Y as a positive combination.
    let label = "decomposition";
    let y = build_x(&one, &eta, &one);
    let strong = build_x(&q(4), &one, &(&(&r2 * &q(2)) + &one));
    let weak = build_x(&q(0), &one, &one);
    let w1 = QuadScalar::from(Rational::ratio(1, 4));
    let w2 = QuadScalar::new(Rational::ratio(3, 4), Rational::ratio(-1, 2));
    let combo = strong.scale(&w1).add(&weak.scale(&w2))?;
    require(label, combo == y, "weighted sum differs from Y")?;
    require(
        label,
        w2.sign() == Sign::Positive,
        "second weight is not positive",
    )?;
    let y_psd = psd_check_exact(&y)?;
    require(label, y_psd.psd, "Y is not PSD")?;
    claims.push(ClaimRecord {
        label,
        passed: true,
        values: vec![
            ("eta".into(), eta.to_string()),
            ("weights".into(), format!("{w1}, {w2}")),
            ("Y kernel dimension".into(), y_psd.kernel_dim(9).to_string()),
        ],
    });

    // 2. PSD extension of X_{4,1,2√2+1}.
    let label = "psd-extension";
    let sigma = extension_vectors()
        .iter()
        .map(|v| ExactOperator::outer(v))
        .try_fold(ExactOperator::zeros(27), |acc, m| acc.add(&m))?;
    require(
        label,
        reduce_b_factors(&sigma)? == strong,
        "reduction differs from X_{4,1,2r2+1}",
    )?;
    require(
        label,
        sigma.permute_factors(&TRIPARTITE, &[0, 2, 1])? == sigma,
        "extension is not swap-invariant",
    )?;
    let sigma_psd = psd_check_exact(&sigma)?;
    require(label, sigma_psd.psd, "extension is not PSD")?;
    claims.push(ClaimRecord {
        label,
        passed: true,
        values: vec![("extension rank".into(), sigma_psd.rank.to_string())],
    });

    // 3. X_{0,1,1} through its partial transpose.
    let label = "max-extension";
    let psi = ExactOperator::outer(&permutation_vector());
    let reduced = reduce_b_factors(&psi)?;
    let weak_pt = partial_transpose(&weak, &[3, 3], 1)?;
    let (i, j) = (0..81)
        .map(|t| (t / 9, t % 9))
        .find(|&(i, j)| !weak_pt.get(i, j).is_zero())
        .expect("nonzero entry");
    let scale = reduced.get(i, j) * &weak_pt.get(i, j).checked_inv()?;
    require(
        label,
        scale.sign() == Sign::Positive,
        "scale is not positive",
    )?;
    require(
        label,
        reduced == weak_pt.scale(&scale),
        "reduction is not a multiple of the partial transpose",
    )?;
    require(label, psd_check_exact(&psi)?.psd, "projector is not PSD")?;
    // Transposing both B factors maps the PSD extension of the partial transpose to a
    // max-product extension of X_{0,1,1} itself.
    let flipped = partial_transpose(&partial_transpose(&psi, &TRIPARTITE, 1)?, &TRIPARTITE, 2)?;
    require(
        label,
        reduce_b_factors(&flipped)? == weak.scale(&scale),
        "transposed extension does not reduce to X_{0,1,1}",
    )?;
    claims.push(ClaimRecord {
        label,
        passed: true,
        values: vec![("scale".into(), scale.to_string())],
    });

    // 4. The obstruction.
    let label = "obstruction";
    let w = build_x(&one, &eta, &(-(&eta * &q(2))));
    let w_psd = psd_check_exact(&w)?;
    require(label, !w_psd.psd, "W is PSD")?;
    let w2_op = symmetric_lift(&w)?;
    let w2_psd = psd_check_exact(&w2_op)?;
    require(
        label,
        w2_psd.positive_definite(27),
        "W2 is not positive definite",
    )?;
    let tr = y.trace_product(&w)?;
    require(label, tr.is_zero(), "tr(YW) is not zero")?;
    let min_pivot = w2_psd
        .pivots
        .iter()
        .min_by(|a, b| a.to_f64().total_cmp(&b.to_f64()))
        .cloned()
        .expect("27 pivots");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..8 {
        let z = random_symmetric(&mut rng, 27);
        let lhs = reduce_b_factors(&z)?.trace_product(&w)?;
        let rhs = z.trace_product(&w2_op)?;
        require(label, lhs == rhs, "adjoint identity fails")?;
    }
    let z = build_x(&one, &q(0), &q(0)).kron(&ExactOperator::identity(3));
    require(
        label,
        reduce_b_factors(&z)?.trace_product(&w)? == z.trace_product(&w2_op)?,
        "adjoint identity fails on the padded projector",
    )?;
    claims.push(ClaimRecord {
        label,
        passed: true,
        values: vec![
            ("tr(YW)".into(), tr.to_string()),
            ("W2 positive pivots".into(), w2_psd.rank.to_string()),
            ("W2 smallest pivot".into(), min_pivot.to_string()),
        ],
    });

    Ok(AppendixReport {
        claims,
        transpose_scale: scale,
    })
}

/// Random symmetric matrix with small entries in ℚ(√2).
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> ExactOperator {
    let mut m = ExactOperator::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = QuadScalar::new(
                Rational::ratio(rng.gen_range(-5..6), rng.gen_range(1..4)),
                Rational::ratio(rng.gen_range(-3..4), rng.gen_range(1..3)),
            );
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}
