//! `F_{q^m}`-linear rank-metric codes.

use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::QSystem;
use crate::gf::{Elem, FieldCtx};
use crate::linalg::{
    self, enumerate_subspaces, mat_mul, projective_points, rank, transpose, vec_mat, Budget, Level,
    Matrix, Subspace,
};

/// Column space of `Γ(v)` inside `F_q^n`.
pub fn rank_support(ctx: &FieldCtx, v: &[Elem]) -> Subspace {
    let cols = transpose(&ctx.gamma_expand(v), ctx.m());
    Subspace::span_unchecked(ctx, Level::Sub, v.len(), cols)
}

pub fn rank_weight(ctx: &FieldCtx, v: &[Elem]) -> usize {
    let rows: Matrix = v.iter().filter(|x| !x.is_zero()).map(|&x| ctx.expand(x)).collect();
    if rows.is_empty() {
        return 0;
    }
    rank(ctx, &rows)
}

/// Counts `A_0, …, A_n` of codewords by rank weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightDistribution(pub Vec<u64>);

impl WeightDistribution {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> BigUint {
        self.0.iter().map(|&c| BigUint::from(c)).sum()
    }

    /// Smallest positive weight that occurs; `None` when only the zero word exists.
    pub fn min_weight(&self) -> Option<usize> {
        (1..self.0.len()).find(|&i| self.0[i] > 0)
    }

    pub fn max_weight(&self) -> Option<usize> {
        (1..self.0.len()).rev().find(|&i| self.0[i] > 0)
    }

    /// Nonzero weights that occur.
    pub fn support(&self) -> Vec<usize> {
        (1..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    /// The columns of the generator span an `F_q`-space of dimension `n`.
    pub nondegenerate: bool,
    pub effective_length: usize,
    /// Minimum rank distance of the dual, when it fits the budget.
    pub dual_distance: Option<usize>,
    /// `d(C^⊥) ≥ 2` agrees with the column-span criterion.
    pub dual_criterion_agrees: Option<bool>,
    /// `d(C^⊥) ≥ 3`.
    pub rank2_nondegenerate: Option<bool>,
    pub length_at_most_km: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneWeightReport {
    pub one_weight: bool,
    pub weight: Option<usize>,
    pub effective_length: usize,
    /// For one-weight codes: effective length equals `km` and `d = m`.
    pub classification_holds: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct RankCode {
    ctx: Arc<FieldCtx>,
    n: usize,
    generator: Matrix,
}

impl PartialEq for RankCode {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.n == other.n && self.generator == other.generator
    }
}

impl Eq for RankCode {}

impl RankCode {
    /// Code generated by the rows of `generator`, which must be independent.
    pub fn new(ctx: Arc<FieldCtx>, n: usize, generator: Matrix) -> Result<Self> {
        if let Some(r) = generator.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "generator row of length {} for n = {n}",
                r.len()
            )));
        }
        if generator.iter().flatten().any(|&x| !ctx.is_valid(x)) {
            return Err(Error::InvalidArgs("generator entry out of range".into()));
        }
        if rank(&ctx, &generator) != generator.len() {
            return Err(Error::InvalidArgs("generator rows are dependent".into()));
        }
        Ok(RankCode { ctx, n, generator })
    }

    /// Code spanned by arbitrary rows (an echelon basis is kept).
    pub fn from_span(ctx: Arc<FieldCtx>, n: usize, rows: Matrix) -> Result<Self> {
        let s = Subspace::span(&ctx, Level::Ext, n, &rows)?;
        Ok(RankCode {
            ctx,
            n,
            generator: s.into_basis(),
        })
    }

    pub fn zero(ctx: Arc<FieldCtx>, n: usize) -> Self {
        RankCode {
            ctx,
            n,
            generator: Vec::new(),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn ctx_arc(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.generator.len()
    }
    pub fn m(&self) -> usize {
        self.ctx.m()
    }
    pub fn q(&self) -> u64 {
        self.ctx.q() as u64
    }
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Columns of the generator as vectors of `F_{q^m}^k`.
    pub fn columns(&self) -> Matrix {
        transpose(&self.generator, self.n)
    }

    pub fn encode(&self, u: &[Elem]) -> Vec<Elem> {
        vec_mat(&self.ctx, u, &self.generator, self.n)
    }

    pub fn as_subspace(&self) -> Subspace {
        Subspace::span_unchecked(&self.ctx, Level::Ext, self.n, self.generator.clone())
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.as_subspace().contains_vector(&self.ctx, v)
    }

    fn check_codeword_budget(&self, budget: Budget) -> Result<()> {
        let count = BigUint::from(self.ctx.size()).pow(self.k() as u32);
        budget.check("codewords", &count)
    }

    /// Every codeword, in odometer order over message vectors.
    pub fn codewords(&self, budget: Budget) -> Result<Matrix> {
        self.check_codeword_budget(budget)?;
        let msgs = Subspace::full(Level::Ext, self.k()).elements(&self.ctx, Budget(u64::MAX))?;
        Ok(msgs.iter().map(|u| self.encode(u)).collect())
    }

    /// One message per projective class, normalized with leading one.
    pub fn projective_messages(&self, budget: Budget) -> Result<Matrix> {
        self.check_codeword_budget(budget)?;
        projective_points(&self.ctx, Level::Ext, self.k(), Budget(u64::MAX))
    }

    pub fn code_support(&self) -> Subspace {
        self.generator.iter().fold(Subspace::zero(Level::Sub, self.n), |acc, row| {
            acc.sum(&self.ctx, &rank_support(&self.ctx, row))
                .expect("supports share the ambient space")
        })
    }

    pub fn effective_length(&self) -> usize {
        self.code_support().dim()
    }

    /// `F_q`-dimension of the span of the generator columns.
    pub fn column_rank(&self) -> usize {
        let flat: Matrix = self
            .columns()
            .iter()
            .map(|c| crate::geometry::flatten(&self.ctx, c))
            .collect();
        rank(&self.ctx, &flat)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.column_rank() == self.n
    }

    pub fn nondegeneracy(&self, budget: Budget) -> NondegeneracyReport {
        let nondegenerate = self.is_nondegenerate();
        let dual_distance = self.dual_distance(budget).ok();
        NondegeneracyReport {
            nondegenerate,
            effective_length: self.effective_length(),
            dual_distance,
            dual_criterion_agrees: dual_distance.map(|d| (d >= 2) == nondegenerate),
            rank2_nondegenerate: dual_distance.map(|d| d >= 3),
            length_at_most_km: self.n <= self.k() * self.m(),
        }
    }

    /// Null space of the generator under `u·vᵀ`; the zero code when `k = n`.
    pub fn dual(&self) -> RankCode {
        let dual = self.as_subspace().orthogonal(&self.ctx);
        RankCode {
            ctx: self.ctx.clone(),
            n: self.n,
            generator: dual.into_basis(),
        }
    }

    /// `C·A` for an invertible `n×n` matrix `A` over `F_q`.
    pub fn apply_isometry(&self, a: &[Vec<Elem>]) -> Result<RankCode> {
        if a.len() != self.n || a.iter().any(|r| r.len() != self.n) {
            return Err(Error::DimensionMismatch("isometry must be n×n".into()));
        }
        if a.iter().flatten().any(|&x| !self.ctx.in_subfield(x)) {
            return Err(Error::InvalidArgs("isometry entries must lie in the subfield".into()));
        }
        if rank(&self.ctx, a) != self.n {
            return Err(Error::InvalidArgs("isometry is singular".into()));
        }
        Ok(RankCode {
            ctx: self.ctx.clone(),
            n: self.n,
            generator: mat_mul(&self.ctx, &self.generator, a),
        })
    }

    /// `{(c, 0, …, 0)}` with `extra` zero coordinates appended.
    pub fn zero_augment(&self, extra: usize) -> RankCode {
        let generator = self
            .generator
            .iter()
            .map(|r| r.iter().copied().chain(std::iter::repeat_n(Elem::ZERO, extra)).collect())
            .collect();
        RankCode {
            ctx: self.ctx.clone(),
            n: self.n + extra,
            generator,
        }
    }

    /// `[G | v^⊤]`.
    pub fn append_column(&self, v: &[Elem]) -> Result<RankCode> {
        if v.len() != self.k() {
            return Err(Error::DimensionMismatch("column length must equal k".into()));
        }
        let generator = self
            .generator
            .iter()
            .zip(v)
            .map(|(r, &x)| r.iter().copied().chain(std::iter::once(x)).collect())
            .collect();
        Ok(RankCode {
            ctx: self.ctx.clone(),
            n: self.n + 1,
            generator,
        })
    }

    /// Nondegenerate code of length `effective_length` equivalent to `self` up to zero coordinates.
    pub fn effective_embedding(&self) -> Result<RankCode> {
        if self.k() == 0 {
            return Ok(RankCode::zero(self.ctx.clone(), 0));
        }
        let sys = QSystem::from_column_span(self)?;
        Ok(sys.psi())
    }

    pub fn weight_distribution(&self, budget: Budget) -> Result<WeightDistribution> {
        let mut counts = vec![0u64; self.n + 1];
        counts[0] = 1;
        if self.k() == 0 {
            return Ok(WeightDistribution(counts));
        }
        let scalars = self.ctx.size() as u64 - 1;
        for u in self.projective_messages(budget)? {
            counts[rank_weight(&self.ctx, &self.encode(&u))] += scalars;
        }
        Ok(WeightDistribution(counts))
    }

    /// Distribution by visiting every codeword.
    pub fn weight_distribution_exhaustive(&self, budget: Budget) -> Result<WeightDistribution> {
        let mut counts = vec![0u64; self.n + 1];
        for c in self.codewords(budget)? {
            counts[rank_weight(&self.ctx, &c)] += 1;
        }
        Ok(WeightDistribution(counts))
    }

    /// Minimum rank distance; `n + 1` for the zero code.
    pub fn min_rank_distance(&self, budget: Budget) -> Result<usize> {
        Ok(self
            .weight_distribution(budget)?
            .min_weight()
            .unwrap_or(self.n + 1))
    }

    /// Largest rank weight of a codeword; `0` for the zero code.
    pub fn max_rank(&self, budget: Budget) -> Result<usize> {
        Ok(self.weight_distribution(budget)?.max_weight().unwrap_or(0))
    }

    /// Smallest `t` with a `t`-dimensional `V ⊆ F_q^n` such that `V ⊗ F_{q^m}`
    /// meets `span(parity)^⊥` in dimension at least `r`.
    fn min_support_dim(
        &self,
        parity: &Matrix,
        r: usize,
        dims: std::ops::RangeInclusive<usize>,
        budget: Budget,
    ) -> Result<usize> {
        let ctx = &*self.ctx;
        for t in dims {
            for v in enumerate_subspaces(ctx, Level::Sub, self.n, t, budget)? {
                let meet = if parity.is_empty() {
                    t
                } else {
                    let prod = mat_mul(ctx, parity, &transpose(v.basis(), self.n));
                    t - rank(ctx, &prod)
                };
                if meet >= r {
                    return Ok(t);
                }
            }
        }
        Ok(self.n + 1)
    }

    /// Minimum rank distance of the dual code.
    pub fn dual_distance(&self, budget: Budget) -> Result<usize> {
        if self.k() == self.n {
            return Ok(self.n + 1);
        }
        let g = self.generator.clone();
        if self.min_support_dim(&g, 1, 1..=1, budget)? == 1 {
            return Ok(1);
        }
        // no rank-1 dual word: the code is nondegenerate, and a rank-2 dual word
        // is a point of weight at least 2 on the linear set
        let sys = QSystem::from_code(self)?;
        if !sys.linear_set(budget)?.is_scattered() {
            return Ok(2);
        }
        self.min_support_dim(&g, 1, 3..=self.n, budget)
    }

    /// `r`-th generalized rank weight through hyperplane sections of the q-system.
    pub fn generalized_rank_weight(&self, r: usize, budget: Budget) -> Result<usize> {
        if r == 0 || r > self.k() {
            return Err(Error::InvalidArgs(format!("r = {r} outside 1..={}", self.k())));
        }
        let sys = QSystem::from_code(self)?;
        Ok(self.n - sys.max_intersection_codim(r, budget)?)
    }

    pub fn generalized_rank_weights(&self, budget: Budget) -> Result<Vec<usize>> {
        (1..=self.k())
            .map(|r| self.generalized_rank_weight(r, budget))
            .collect()
    }

    /// `r`-th generalized rank weight from the definition: the least dimension of a
    /// subspace with a basis in `F_q^n` meeting the code in dimension `r`.
    pub fn generalized_rank_weight_definitional(&self, r: usize, budget: Budget) -> Result<usize> {
        if r == 0 || r > self.k() {
            return Err(Error::InvalidArgs(format!("r = {r} outside 1..={}", self.k())));
        }
        let parity = self.dual().generator;
        self.min_support_dim(&parity, r, r..=self.n, budget)
    }

    /// Echelon generator with all entries in `F_q`, when one exists.
    pub fn subfield_generator(&self) -> Option<Matrix> {
        let rows = self.as_subspace().into_basis();
        rows.iter()
            .flatten()
            .all(|&x| self.ctx.in_subfield(x))
            .then_some(rows)
    }

    pub fn is_one_weight(&self, budget: Budget) -> Result<bool> {
        Ok(self.weight_distribution(budget)?.support().len() == 1)
    }

    pub fn classify_one_weight(&self, budget: Budget) -> Result<OneWeightReport> {
        let dist = self.weight_distribution(budget)?;
        let weights = dist.support();
        let one_weight = weights.len() == 1;
        let effective_length = self.effective_length();
        let weight = one_weight.then(|| weights[0]);
        Ok(OneWeightReport {
            one_weight,
            weight,
            effective_length,
            classification_holds: (one_weight && self.k() >= 2).then(|| {
                effective_length == self.k() * self.m() && weight == Some(self.m())
            }),
        })
    }
}

/// Rank of `vG` via the q-system: `n − dim(U ∩ ⟨v⟩^⊥)`.
pub fn rank_from_system(sys: &QSystem, v: &[Elem]) -> usize {
    let hyper = Subspace::span_unchecked(sys.ctx(), Level::Ext, v.len(), vec![v.to_vec()])
        .orthogonal(sys.ctx());
    sys.dim() - sys.intersection_dim(&hyper)
}

pub fn random_code<R: rand::Rng>(ctx: Arc<FieldCtx>, n: usize, k: usize, rng: &mut R) -> RankCode {
    let g = linalg::random_full_rank(&ctx, Level::Ext, k, n, rng);
    RankCode {
        ctx,
        n,
        generator: g,
    }
}

/// Random nondegenerate `[n, k]` code; requires `n ≤ km`.
pub fn random_nondegenerate_code<R: rand::Rng>(ctx: Arc<FieldCtx>, n: usize, k: usize, rng: &mut R) -> RankCode {
    assert!(n <= k * ctx.m() && k <= n && k > 0);
    loop {
        let c = random_code(ctx.clone(), n, k, rng);
        if c.is_nondegenerate() {
            return c;
        }
    }
}
