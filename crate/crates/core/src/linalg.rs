//! Subspaces in reduced row-echelon form, Gaussian binomials and
//! exhaustive subspace enumeration.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{prime_power, Elem, FieldCtx};

pub type Matrix = Vec<Vec<Elem>>;

/// Default cap on the number of objects any single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Upper bound on enumeration sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn check(&self, what: &str, required: &BigUint) -> Result<()> {
        if *required > BigUint::from(self.0) {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                required: required.clone(),
                budget: self.0,
            });
        }
        Ok(())
    }

    pub fn check_u128(&self, what: &str, required: u128) -> Result<()> {
        self.check(what, &BigUint::from(required))
    }
}

/// Which field of the tower the coefficients are taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// The subfield `F_q`.
    Sub,
    /// The extension `F_{q^m}`.
    Ext,
}

impl Level {
    pub fn order(self, ctx: &FieldCtx) -> u64 {
        match self {
            Level::Sub => ctx.q() as u64,
            Level::Ext => ctx.size() as u64,
        }
    }

    /// Field elements at this level, sorted by encoding.
    pub fn elements(self, ctx: &FieldCtx) -> Vec<Elem> {
        match self {
            Level::Sub => ctx.subfield().to_vec(),
            Level::Ext => (0..ctx.size()).map(Elem).collect(),
        }
    }
}

/// `row -= f * pivot_row`, touching columns from `start` on.
#[inline]
fn axpy(ctx: &FieldCtx, row: &mut [Elem], f: Elem, pivot_row: &[Elem], start: usize) {
    for j in start..row.len() {
        let b = pivot_row[j];
        if !b.is_zero() {
            row[j] = ctx.sub(row[j], ctx.mul(f, b));
        }
    }
}

/// Reduced row-echelon form with zero rows removed.
pub fn rref(ctx: &FieldCtx, mut rows: Matrix) -> Matrix {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(i, r);
        let iv = ctx.inv(rows[r][c]);
        if iv != Elem::ONE {
            for x in rows[r][c..].iter_mut() {
                *x = ctx.mul(*x, iv);
            }
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                axpy(ctx, row, f, &pivot, c);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

pub fn rank(ctx: &FieldCtx, rows: &[Vec<Elem>]) -> usize {
    rref(ctx, rows.to_vec()).len()
}

pub fn transpose(a: &[Vec<Elem>], ncols: usize) -> Matrix {
    (0..ncols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(ctx: &FieldCtx, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Matrix {
    let inner = b.len();
    let ncols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    (0..inner).fold(Elem::ZERO, |acc, t| {
                        ctx.add(acc, ctx.mul(row[t], b[t][j]))
                    })
                })
                .collect()
        })
        .collect()
}

/// `v · M` for a row vector `v`.
pub fn vec_mat(ctx: &FieldCtx, v: &[Elem], m: &[Vec<Elem>], ncols: usize) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; ncols];
    for (&c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                *o = ctx.add(*o, ctx.mul(c, x));
            }
        }
    }
    out
}

pub fn dot(ctx: &FieldCtx, u: &[Elem], v: &[Elem]) -> Elem {
    u.iter()
        .zip(v)
        .fold(Elem::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)))
}

pub fn scale(ctx: &FieldCtx, a: Elem, v: &[Elem]) -> Vec<Elem> {
    v.iter().map(|&x| ctx.mul(a, x)).collect()
}

pub fn add_vec(ctx: &FieldCtx, u: &[Elem], v: &[Elem]) -> Vec<Elem> {
    u.iter().zip(v).map(|(&a, &b)| ctx.add(a, b)).collect()
}

/// Index of the first nonzero entry.
pub fn leading(v: &[Elem]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// Scales `v` so that its first nonzero entry is one.
pub fn normalize(ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
    match leading(v) {
        None => v.to_vec(),
        Some(i) => scale(ctx, ctx.inv(v[i]), v),
    }
}

/// An `F_q`- or `F_{q^m}`-subspace of the coordinate space, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    level: Level,
    rows: Matrix,
}

impl Subspace {
    pub fn zero(level: Level, ambient: usize) -> Self {
        Subspace {
            ambient,
            level,
            rows: Vec::new(),
        }
    }

    pub fn full(level: Level, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut r = vec![Elem::ZERO; ambient];
                r[i] = Elem::ONE;
                r
            })
            .collect();
        Subspace {
            ambient,
            level,
            rows,
        }
    }

    pub fn span(ctx: &FieldCtx, level: Level, ambient: usize, vectors: &[Vec<Elem>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        if level == Level::Sub
            && vectors.iter().flatten().any(|&x| !ctx.in_subfield(x)) {
                return Err(Error::InvalidArgs("entry outside the subfield".into()));
            }
        Ok(Self::span_unchecked(ctx, level, ambient, vectors.to_vec()))
    }

    pub(crate) fn span_unchecked(ctx: &FieldCtx, level: Level, ambient: usize, vectors: Matrix) -> Self {
        Subspace {
            ambient,
            level,
            rows: rref(ctx, vectors),
        }
    }

    /// Wraps rows already known to be in reduced echelon form.
    pub(crate) fn from_rref(level: Level, ambient: usize, rows: Matrix) -> Self {
        Subspace {
            ambient,
            level,
            rows,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn level(&self) -> Level {
        self.level
    }
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }
    pub fn into_basis(self) -> Matrix {
        self.rows
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| leading(r).expect("echelon rows are nonzero"))
            .collect()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient || self.level != other.level {
            return Err(Error::DimensionMismatch(format!(
                "{:?}^{} vs {:?}^{}",
                self.level, self.ambient, other.level, other.ambient
            )));
        }
        Ok(())
    }

    /// `v` minus its projection onto the pivot columns.
    pub fn reduce(&self, ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        let mut out = v.to_vec();
        for row in &self.rows {
            let c = leading(row).expect("echelon rows are nonzero");
            let f = out[c];
            if !f.is_zero() {
                axpy(ctx, &mut out, f, row, c);
            }
        }
        out
    }

    pub fn contains_vector(&self, ctx: &FieldCtx, v: &[Elem]) -> bool {
        v.len() == self.ambient && self.reduce(ctx, v).iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, ctx: &FieldCtx, other: &Self) -> Result<bool> {
        self.compatible(other)?;
        Ok(other.rows.iter().all(|r| self.contains_vector(ctx, r)))
    }

    pub fn sum(&self, ctx: &FieldCtx, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self::span_unchecked(ctx, self.level, self.ambient, rows))
    }

    /// Zassenhaus intersection.
    pub fn intersection(&self, ctx: &FieldCtx, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let n = self.ambient;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.level, n));
        }
        let mut rows: Matrix = self
            .rows
            .iter()
            .map(|r| r.iter().chain(r.iter()).copied().collect())
            .collect();
        rows.extend(
            other
                .rows
                .iter()
                .map(|r| r.iter().copied().chain(std::iter::repeat_n(Elem::ZERO, n)).collect()),
        );
        let red = rref(ctx, rows);
        let inter: Matrix = red
            .into_iter()
            .filter(|r| r[..n].iter().all(|x| x.is_zero()))
            .map(|r| r[n..].to_vec())
            .collect();
        Ok(Self::span_unchecked(ctx, self.level, n, inter))
    }

    /// Orthogonal complement under `u·vᵀ`.
    pub fn orthogonal(&self, ctx: &FieldCtx) -> Self {
        let n = self.ambient;
        let pivots = self.pivots();
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let vecs: Matrix = (0..n)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![Elem::ZERO; n];
                x[f] = Elem::ONE;
                for (row, &c) in self.rows.iter().zip(&pivots) {
                    x[c] = ctx.neg(row[f]);
                }
                x
            })
            .collect();
        Self::span_unchecked(ctx, self.level, n, vecs)
    }

    /// Coordinates on `self / sub`; requires `sub ⊆ self`.
    pub fn quotient_map(&self, ctx: &FieldCtx, sub: &Self) -> Result<QuotientMap> {
        if !self.contains(ctx, sub)? {
            return Err(Error::NotContained);
        }
        let reduced: Matrix = self.rows.iter().map(|r| sub.reduce(ctx, r)).collect();
        let complement = Self::span_unchecked(ctx, self.level, self.ambient, reduced);
        Ok(QuotientMap {
            sub: sub.clone(),
            pivots: complement.pivots(),
            complement,
        })
    }

    /// All vectors of the subspace, in odometer order over the basis coefficients.
    pub fn elements(&self, ctx: &FieldCtx, budget: Budget) -> Result<Vec<Vec<Elem>>> {
        let order = self.level.order(ctx);
        let count = BigUint::from(order).pow(self.dim() as u32);
        budget.check("subspace elements", &count)?;
        let field = self.level.elements(ctx);
        let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
        let mut idx = vec![0usize; self.dim()];
        loop {
            let coeffs: Vec<Elem> = idx.iter().map(|&i| field[i]).collect();
            out.push(vec_mat(ctx, &coeffs, &self.rows, self.ambient));
            let mut pos = self.dim();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < field.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

/// Linear map from a subspace onto coordinates of a quotient.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    sub: Subspace,
    complement: Subspace,
    pivots: Vec<usize>,
}

impl QuotientMap {
    pub fn dim(&self) -> usize {
        self.complement.dim()
    }

    /// Coordinates of the class of `v`.
    pub fn apply(&self, ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        let r = self.sub.reduce(ctx, v);
        self.pivots.iter().map(|&c| r[c]).collect()
    }

    /// Representatives of a basis of the quotient.
    pub fn complement(&self) -> &Subspace {
        &self.complement
    }
}

/// Number of `b`-dimensional subspaces of `F_Q^a`.
pub fn gaussian_binomial(a: u64, b: u64, field_order: u64) -> Result<BigUint> {
    if b > a {
        return Err(Error::InvalidArgs(format!("binomial ({a} choose {b})")));
    }
    if prime_power(field_order).is_none() {
        return Err(Error::InvalidArgs(format!("{field_order} is not a prime power")));
    }
    Ok(gaussian_binomial_unchecked(a, b, field_order))
}

pub(crate) fn gaussian_binomial_unchecked(a: u64, b: u64, field_order: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let qq = BigUint::from(field_order);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..b {
        num *= qq.pow((a - i) as u32) - 1u32;
        den *= qq.pow((b - i) as u32) - 1u32;
    }
    num / den
}

/// Number of invertible `n×n` matrices over `F_Q`.
pub fn gl_order(n: u64, field_order: u64) -> BigUint {
    let qq = BigUint::from(field_order);
    let qn = qq.pow(n as u32);
    (0..n).fold(BigUint::one(), |acc, i| acc * (&qn - qq.pow(i as u32)))
}

/// Stream of all `t`-dimensional subspaces of the `N`-dimensional space.
///
/// Subspaces come grouped by pivot pattern (patterns in lexicographic order),
/// and within a pattern the free echelon entries run like an odometer with
/// the last entry fastest.
pub struct SubspaceIter {
    level: Level,
    ambient: usize,
    dim: usize,
    field: Vec<Elem>,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    idx: Vec<usize>,
    done: bool,
}

fn free_positions(pivots: &[usize], ambient: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &c) in pivots.iter().enumerate() {
        for j in c + 1..ambient {
            if !pivots.contains(&j) {
                out.push((i, j));
            }
        }
    }
    out
}

impl SubspaceIter {
    fn new(ctx: &FieldCtx, level: Level, ambient: usize, dim: usize) -> Self {
        let pivots: Vec<usize> = (0..dim).collect();
        let free = free_positions(&pivots, ambient);
        SubspaceIter {
            level,
            ambient,
            dim,
            field: level.elements(ctx),
            idx: vec![0; free.len()],
            free,
            pivots,
            done: dim > ambient,
        }
    }

    fn next_pivots(&mut self) -> bool {
        let t = self.dim;
        let n = self.ambient;
        let mut i = t;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < n - t + i {
                self.pivots[i] += 1;
                for j in i + 1..t {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                self.free = free_positions(&self.pivots, n);
                self.idx = vec![0; self.free.len()];
                return true;
            }
        }
        false
    }

    fn current(&self) -> Matrix {
        let mut rows = vec![vec![Elem::ZERO; self.ambient]; self.dim];
        for (i, &c) in self.pivots.iter().enumerate() {
            rows[i][c] = Elem::ONE;
        }
        for (&(i, j), &v) in self.free.iter().zip(&self.idx) {
            rows[i][j] = self.field[v];
        }
        rows
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let out = Subspace::from_rref(self.level, self.ambient, self.current());
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                if !self.next_pivots() {
                    self.done = true;
                }
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < self.field.len() {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(out)
    }
}

/// All `dim`-dimensional subspaces of the `ambient`-dimensional space, guarded by `budget`.
pub fn enumerate_subspaces(
    ctx: &FieldCtx,
    level: Level,
    ambient: usize,
    dim: usize,
    budget: Budget,
) -> Result<SubspaceIter> {
    let count = gaussian_binomial_unchecked(ambient as u64, dim as u64, level.order(ctx));
    budget.check(&format!("{dim}-dim subspaces of a {ambient}-dim space"), &count)?;
    Ok(SubspaceIter::new(ctx, level, ambient, dim))
}

/// Canonical representatives of the points of `PG(ambient-1, ·)`.
pub fn projective_points(ctx: &FieldCtx, level: Level, ambient: usize, budget: Budget) -> Result<Vec<Vec<Elem>>> {
    Ok(enumerate_subspaces(ctx, level, ambient, 1, budget)?
        .map(|s| s.into_basis().remove(0))
        .collect())
}

/// Every invertible `n×n` matrix over the chosen level.
pub fn general_linear_group(ctx: &FieldCtx, level: Level, n: usize, budget: Budget) -> Result<Vec<Matrix>> {
    budget.check("invertible matrices", &gl_order(n as u64, level.order(ctx)))?;
    let space: Vec<Vec<Elem>> = Subspace::full(level, n).elements(ctx, Budget(u64::MAX))?;
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Elem>> = Vec::new();
    fn rec(ctx: &FieldCtx, level: Level, n: usize, space: &[Vec<Elem>], stack: &mut Matrix, out: &mut Vec<Matrix>) {
        if stack.len() == n {
            out.push(stack.clone());
            return;
        }
        let span = Subspace::span_unchecked(ctx, level, n, stack.clone());
        for v in space {
            if !span.contains_vector(ctx, v) {
                stack.push(v.clone());
                rec(ctx, level, n, space, stack, out);
                stack.pop();
            }
        }
    }
    rec(ctx, level, n, &space, &mut stack, &mut out);
    Ok(out)
}

pub fn random_vector<R: Rng>(ctx: &FieldCtx, level: Level, n: usize, rng: &mut R) -> Vec<Elem> {
    match level {
        Level::Sub => {
            let f = ctx.subfield();
            (0..n).map(|_| f[rng.gen_range(0..f.len())]).collect()
        }
        Level::Ext => (0..n).map(|_| Elem(rng.gen_range(0..ctx.size()))).collect(),
    }
}

/// Uniformly random invertible matrix by rejection.
pub fn random_invertible<R: Rng>(ctx: &FieldCtx, level: Level, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m: Matrix = (0..n).map(|_| random_vector(ctx, level, n, rng)).collect();
        if rank(ctx, &m) == n {
            return m;
        }
    }
}

/// Random full-rank `k×n` matrix.
pub fn random_full_rank<R: Rng>(ctx: &FieldCtx, level: Level, k: usize, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m: Matrix = (0..k).map(|_| random_vector(ctx, level, n, rng)).collect();
        if rank(ctx, &m) == k {
            return m;
        }
    }
}
