//! q-systems, linear sets and the code/system correspondence.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg::{
    enumerate_subspaces, gaussian_binomial_unchecked, normalize, rank, transpose, vec_mat, Budget,
    Level, Matrix, Subspace,
};

/// Γ-coordinates of every entry of `v`, concatenated into a vector of `F_q^{km}`.
pub fn flatten(ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
    let m = ctx.m();
    let mut out = vec![Elem::ZERO; v.len() * m];
    for (i, &x) in v.iter().enumerate() {
        ctx.expand_into(x, &mut out[i * m..(i + 1) * m]);
    }
    out
}

/// Inverse of [`flatten`].
pub fn unflatten(ctx: &FieldCtx, w: &[Elem]) -> Vec<Elem> {
    w.chunks(ctx.m()).map(|c| ctx.reconstruct(c)).collect()
}

/// An `F_q`-subspace `U` of `F_{q^m}^k` spanning `F_{q^m}^k` over `F_{q^m}`.
#[derive(Debug, Clone)]
pub struct QSystem {
    ctx: Arc<FieldCtx>,
    k: usize,
    flat: Subspace,
    vectors: Matrix,
}

impl PartialEq for QSystem {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.k == other.k && self.flat == other.flat
    }
}

impl Eq for QSystem {}

/// Points of a linear set with their weights, in canonical point order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSet {
    pub q: u64,
    pub entries: BTreeMap<Vec<Elem>, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSetEntry {
    pub point: Vec<Elem>,
    pub weight: usize,
    pub multiplicity: u64,
}

impl LinearSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self, point: &[Elem]) -> usize {
        self.entries.get(point).copied().unwrap_or(0)
    }

    /// `(q^w − 1)/(q − 1)`.
    pub fn multiplicity(&self, point: &[Elem]) -> u64 {
        multiplicity(self.q, self.weight(point))
    }

    pub fn report(&self) -> Vec<LinearSetEntry> {
        self.entries
            .iter()
            .map(|(p, &w)| LinearSetEntry {
                point: p.clone(),
                weight: w,
                multiplicity: multiplicity(self.q, w),
            })
            .collect()
    }

    /// `Σ_P (q^{wt(P)} − 1)/(q − 1)`.
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.values().map(|&w| multiplicity(self.q, w)).sum()
    }

    pub fn is_scattered(&self) -> bool {
        self.entries.values().all(|&w| w == 1)
    }
}

pub fn multiplicity(q: u64, w: usize) -> u64 {
    (q.pow(w as u32) - 1) / (q - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardEquations {
    pub r: usize,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearityReport {
    /// Largest dimension of an `F_{q^m}`-subspace contained in `U`.
    pub direct: usize,
    /// Echelon basis of one such subspace.
    pub witness: Matrix,
    /// `k − min{r : d_r = n − (k − r)m}`.
    pub from_weights: usize,
    pub agrees: bool,
    /// `n − k(m − 1)`, signed.
    pub lower_bound: i64,
    pub lower_bound_holds: bool,
    /// `U` is the whole space and the two values differ.
    pub full_space_discrepancy: bool,
}

impl QSystem {
    /// `F_q`-span of `vectors`, which must span `F_{q^m}^k` over `F_{q^m}`.
    pub fn new(ctx: Arc<FieldCtx>, k: usize, vectors: &[Vec<Elem>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != k) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in F^{k}",
                v.len()
            )));
        }
        if vectors.iter().flatten().any(|&x| !ctx.is_valid(x)) {
            return Err(Error::InvalidArgs("entry out of range".into()));
        }
        if rank(&ctx, vectors) != k {
            return Err(Error::NotSpanning);
        }
        Ok(Self::new_unchecked(ctx, k, vectors))
    }

    fn new_unchecked(ctx: Arc<FieldCtx>, k: usize, vectors: &[Vec<Elem>]) -> Self {
        let flat_rows: Matrix = vectors.iter().map(|v| flatten(&ctx, v)).collect();
        let flat = Subspace::span_unchecked(&ctx, Level::Sub, k * ctx.m(), flat_rows);
        let vectors = flat.basis().iter().map(|w| unflatten(&ctx, w)).collect();
        QSystem {
            ctx,
            k,
            flat,
            vectors,
        }
    }

    /// `F_{q^m}^k` itself.
    pub fn full(ctx: Arc<FieldCtx>, k: usize) -> Self {
        let m = ctx.m();
        let flat = Subspace::full(Level::Sub, k * m);
        let vectors = flat.basis().iter().map(|w| unflatten(&ctx, w)).collect();
        QSystem {
            ctx,
            k,
            flat,
            vectors,
        }
    }

    /// The system of a nondegenerate code: the `F_q`-span of its columns.
    pub fn from_code(code: &RankCode) -> Result<Self> {
        if code.k() == 0 || !code.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        Ok(Self::new_unchecked(code.ctx_arc().clone(), code.k(), &code.columns()))
    }

    /// Column span of any code with `k ≥ 1`; its dimension is the effective length.
    pub fn from_column_span(code: &RankCode) -> Result<Self> {
        if code.k() == 0 {
            return Err(Error::Degenerate);
        }
        Ok(Self::new_unchecked(code.ctx_arc().clone(), code.k(), &code.columns()))
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn ctx_arc(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn k(&self) -> usize {
        self.k
    }
    /// `F_q`-dimension `n`.
    pub fn dim(&self) -> usize {
        self.flat.dim()
    }
    pub fn q(&self) -> u64 {
        self.ctx.q() as u64
    }
    pub fn m(&self) -> usize {
        self.ctx.m()
    }
    /// Canonical `F_q`-basis of `U` as vectors of `F_{q^m}^k`.
    pub fn vectors(&self) -> &Matrix {
        &self.vectors
    }
    /// `U` flattened into `F_q^{km}`.
    pub fn flat(&self) -> &Subspace {
        &self.flat
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.flat.contains_vector(&self.ctx, &flatten(&self.ctx, v))
    }

    /// The code whose generator has the canonical basis of `U` as columns.
    pub fn psi(&self) -> RankCode {
        let g = transpose(&self.vectors, self.k);
        RankCode::new(self.ctx.clone(), self.dim(), g).expect("a spanning system has full row rank")
    }

    /// Rows `flatten(M u_i)` for the basis vectors `u_i`.
    fn images(&self, m: &[Vec<Elem>]) -> Matrix {
        let mt = transpose(m, self.k);
        self.vectors
            .iter()
            .map(|u| flatten(&self.ctx, &vec_mat(&self.ctx, u, &mt, m.len())))
            .collect()
    }

    /// `dim_{F_q}(U ∩ ker M)` for a matrix `M` with `k` columns.
    pub fn kernel_intersection_dim(&self, m: &[Vec<Elem>]) -> usize {
        if m.is_empty() {
            return self.dim();
        }
        self.dim() - rank(&self.ctx, &self.images(m))
    }

    /// `F_q`-basis of `U ∩ ker M`, as vectors of `F_{q^m}^k`.
    pub fn kernel_section(&self, m: &[Vec<Elem>]) -> Matrix {
        if m.is_empty() {
            return self.vectors.clone();
        }
        let img = self.images(m);
        let width = img.first().map_or(0, |r| r.len());
        let cols = transpose(&img, width);
        let kernel = Subspace::span_unchecked(&self.ctx, Level::Sub, self.dim(), cols).orthogonal(&self.ctx);
        kernel
            .basis()
            .iter()
            .map(|a| vec_mat(&self.ctx, a, &self.vectors, self.k))
            .collect()
    }

    /// `dim_{F_q}(U ∩ H)` for an `F_{q^m}`-subspace `H`.
    pub fn intersection_dim(&self, h: &Subspace) -> usize {
        let perp = h.orthogonal(&self.ctx);
        self.kernel_intersection_dim(perp.basis())
    }

    /// `F_q`-basis of `U ∩ H`.
    pub fn section(&self, h: &Subspace) -> Matrix {
        let perp = h.orthogonal(&self.ctx);
        self.kernel_section(perp.basis())
    }

    /// `wt_U(P) = dim_{F_q}(U ∩ ⟨P⟩)`.
    pub fn point_weight(&self, point: &[Elem]) -> usize {
        let line = Subspace::span_unchecked(&self.ctx, Level::Ext, self.k, vec![point.to_vec()]);
        self.intersection_dim(&line)
    }

    /// `max dim_{F_q}(U ∩ H)` over `F_{q^m}`-subspaces `H` of codimension `r`.
    pub fn max_intersection_codim(&self, r: usize, budget: Budget) -> Result<usize> {
        let mut best = 0;
        for w in enumerate_subspaces(&self.ctx, Level::Ext, self.k, r, budget)? {
            best = best.max(self.kernel_intersection_dim(w.basis()));
        }
        Ok(best)
    }

    /// Every nonzero element of `U` with its projective point.
    pub fn linear_set(&self, budget: Budget) -> Result<LinearSet> {
        let q = self.q();
        let mut counts: BTreeMap<Vec<Elem>, u64> = BTreeMap::new();
        let elements = self.flat.elements(&self.ctx, budget)?;
        for w in elements.iter().skip(1) {
            let v = unflatten(&self.ctx, w);
            *counts.entry(normalize(&self.ctx, &v)).or_default() += 1;
        }
        let entries = counts
            .into_iter()
            .map(|(p, c)| {
                let mut w = 0;
                while q.pow(w as u32) - 1 < c {
                    w += 1;
                }
                (p, w)
            })
            .collect();
        Ok(LinearSet { q, entries })
    }

    pub fn is_scattered(&self, budget: Budget) -> Result<bool> {
        let scattered = self.linear_set(budget)?.is_scattered();
        if scattered && self.m() >= 2 && 2 * self.dim() > self.k * self.m() {
            return Err(Error::InternalInconsistency(format!(
                "scattered system of dimension {} exceeds km/2",
                self.dim()
            )));
        }
        Ok(scattered)
    }

    /// Both sides of `Σ_{dim H = r} |H ∩ U∖0| = (q^n − 1)·[k−1, r−1]_{q^m}`.
    pub fn standard_equations(&self, r: usize, budget: Budget) -> Result<StandardEquations> {
        if r == 0 || r > self.k {
            return Err(Error::InvalidArgs(format!("r = {r} outside 1..={}", self.k)));
        }
        let q = BigUint::from(self.q());
        let mut lhs = BigUint::from(0u32);
        // r-dimensional H are the kernels of (k − r)-dimensional W
        for w in enumerate_subspaces(&self.ctx, Level::Ext, self.k, self.k - r, budget)? {
            let d = self.kernel_intersection_dim(w.basis());
            lhs += q.pow(d as u32) - 1u32;
        }
        let rhs = (q.pow(self.dim() as u32) - 1u32)
            * gaussian_binomial_unchecked(self.k as u64 - 1, r as u64 - 1, self.ctx.size() as u64);
        Ok(StandardEquations {
            r,
            holds: lhs == rhs,
            lhs,
            rhs,
        })
    }

    /// Largest `F_{q^m}`-subspace contained in `U`, by descending search.
    pub fn largest_linear_subspace(&self, budget: Budget) -> Result<Subspace> {
        let m = self.m();
        for t in (0..=self.k).rev() {
            for h in enumerate_subspaces(&self.ctx, Level::Ext, self.k, t, budget)? {
                if self.intersection_dim(&h) == t * m {
                    return Ok(h);
                }
            }
        }
        Ok(Subspace::zero(Level::Ext, self.k))
    }

    pub fn linearity_index(&self, budget: Budget) -> Result<usize> {
        Ok(self.largest_linear_subspace(budget)?.dim())
    }

    pub fn linearity_report(&self, budget: Budget) -> Result<LinearityReport> {
        let witness = self.largest_linear_subspace(budget)?;
        let direct = witness.dim();
        let (n, k, m) = (self.dim() as i64, self.k as i64, self.m() as i64);
        let mut min_r = self.k;
        for r in 1..=self.k {
            let d = n - self.max_intersection_codim(r, budget)? as i64;
            if d == n - (k - r as i64) * m {
                min_r = r;
                break;
            }
        }
        let from_weights = self.k - min_r;
        let lower_bound = n - k * (m - 1);
        let is_full = self.flat.is_full();
        Ok(LinearityReport {
            direct,
            witness: witness.into_basis(),
            from_weights,
            agrees: direct == from_weights,
            lower_bound,
            lower_bound_holds: direct as i64 >= lower_bound,
            full_space_discrepancy: is_full && direct != from_weights,
        })
    }

    /// `U/T` realized in `F_{q^m}^{k − dim T}` by reducing modulo `T` and
    /// dropping its pivot coordinates.
    pub fn quotient(&self, t: &Subspace) -> Result<QSystem> {
        let t = match t.level() {
            Level::Ext => t.clone(),
            Level::Sub => self.extension_subspace_of(t)?,
        };
        if t.ambient() != self.k {
            return Err(Error::DimensionMismatch("quotient by a subspace of another space".into()));
        }
        if self.intersection_dim(&t) != t.dim() * self.m() {
            return Err(Error::NotContained);
        }
        let pivots = t.pivots();
        let keep: Vec<usize> = (0..self.k).filter(|c| !pivots.contains(c)).collect();
        let images: Matrix = self
            .vectors
            .iter()
            .map(|u| {
                let r = t.reduce(&self.ctx, u);
                keep.iter().map(|&c| r[c]).collect()
            })
            .collect();
        let k2 = keep.len();
        if k2 == 0 {
            return Err(Error::InvalidArgs("quotient by the whole space".into()));
        }
        QSystem::new(self.ctx.clone(), k2, &images)
    }

    /// Interprets an `F_q`-subspace of `F_q^{km}` as an `F_{q^m}`-subspace of `F_{q^m}^k`.
    fn extension_subspace_of(&self, flat: &Subspace) -> Result<Subspace> {
        let ctx = &*self.ctx;
        let m = self.m();
        if flat.ambient() != self.k * m || !flat.dim().is_multiple_of(m) {
            return Err(Error::NotLinearOverExtension);
        }
        let g = ctx.generator();
        for row in flat.basis() {
            let v: Vec<Elem> = unflatten(ctx, row).iter().map(|&x| ctx.mul(g, x)).collect();
            if !flat.contains_vector(ctx, &flatten(ctx, &v)) {
                return Err(Error::NotLinearOverExtension);
            }
        }
        let vecs: Matrix = flat.basis().iter().map(|r| unflatten(ctx, r)).collect();
        Ok(Subspace::span_unchecked(ctx, Level::Ext, self.k, vecs))
    }

    /// First `(n − 1)`-dimensional subspace of a scattered `U` that still spans.
    pub fn shrink_scattered(&self, budget: Budget) -> Result<QSystem> {
        let n = self.dim();
        if n <= self.k || !self.is_scattered(budget)? {
            return Err(Error::NotScattered);
        }
        for h in enumerate_subspaces(&self.ctx, Level::Sub, n, n - 1, budget)? {
            let vecs: Matrix = h
                .basis()
                .iter()
                .map(|a| vec_mat(&self.ctx, a, &self.vectors, self.k))
                .collect();
            if rank(&self.ctx, &vecs) == self.k {
                return Ok(Self::new_unchecked(self.ctx.clone(), self.k, &vecs));
            }
        }
        Err(Error::NoSpanningSubspace)
    }

    /// `φ(U)` for an invertible `k×k` matrix over `F_{q^m}` acting on column vectors.
    pub fn transform(&self, a: &[Vec<Elem>]) -> Result<QSystem> {
        if rank(&self.ctx, a) != self.k {
            return Err(Error::InvalidArgs("transformation is singular".into()));
        }
        let at = transpose(a, self.k);
        let vecs: Matrix = self
            .vectors
            .iter()
            .map(|u| vec_mat(&self.ctx, u, &at, self.k))
            .collect();
        Ok(Self::new_unchecked(self.ctx.clone(), self.k, &vecs))
    }
}
