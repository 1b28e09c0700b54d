//! Hamming-metric codes over `F_{q^m}` and the code associated with a rank-metric code.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::code::{RankCode, WeightDistribution};
use crate::error::{Error, Result};
use crate::geometry::QSystem;
use crate::gf::{Elem, FieldCtx};
use crate::linalg::{
    enumerate_subspaces, normalize, projective_points, rank, transpose, vec_mat, Budget, Level,
    Matrix,
};

/// A multiset of points of `PG(k − 1, q^m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjSystem {
    ctx: Arc<FieldCtx>,
    k: usize,
    entries: BTreeMap<Vec<Elem>, u64>,
}

impl ProjSystem {
    pub fn new(ctx: Arc<FieldCtx>, k: usize, points: BTreeMap<Vec<Elem>, u64>) -> Result<Self> {
        if points.values().any(|&m| m == 0) {
            return Err(Error::InvalidArgs("multiplicities must be positive".into()));
        }
        let mut entries = BTreeMap::new();
        for (p, mult) in points {
            if p.len() != k || p.iter().all(|x| x.is_zero()) {
                return Err(Error::InvalidArgs("points must be nonzero vectors of length k".into()));
            }
            *entries.entry(normalize(&ctx, &p)).or_insert(0) += mult;
        }
        let pts: Matrix = entries.keys().cloned().collect();
        if rank(&ctx, &pts) != k {
            return Err(Error::NotSpanning);
        }
        Ok(ProjSystem { ctx, k, entries })
    }

    /// Points of the linear set of `U` weighted by `(q^{wt} − 1)/(q − 1)`.
    pub fn from_qsystem(u: &QSystem, budget: Budget) -> Result<Self> {
        let ls = u.linear_set(budget)?;
        let entries = ls
            .entries
            .iter()
            .map(|(p, &w)| (p.clone(), crate::geometry::multiplicity(ls.q, w)))
            .collect();
        Ok(ProjSystem {
            ctx: u.ctx_arc().clone(),
            k: u.k(),
            entries,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &BTreeMap<Vec<Elem>, u64> {
        &self.entries
    }

    pub fn multiplicity(&self, point: &[Elem]) -> u64 {
        self.entries
            .get(&normalize(&self.ctx, point))
            .copied()
            .unwrap_or(0)
    }

    /// Total number of points counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Generator whose columns list the points in canonical order, repeats adjacent.
    pub fn to_code(&self) -> HammingCode {
        let cols: Matrix = self
            .entries
            .iter()
            .flat_map(|(p, &mult)| std::iter::repeat_n(p.clone(), mult as usize))
            .collect();
        let n = cols.len();
        HammingCode {
            ctx: self.ctx.clone(),
            n,
            generator: transpose(&cols, self.k),
        }
    }
}

/// `Ext^H`: the projective system of the linear set of `U` with multiplicities.
pub fn ext_h(u: &QSystem, budget: Budget) -> Result<ProjSystem> {
    ProjSystem::from_qsystem(u, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HammingMinimality {
    pub minimal: bool,
    /// A codeword and a non-proportional codeword whose support it contains.
    pub witness: Option<(Vec<Elem>, Vec<Elem>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalWeightCheck {
    pub total: BigUint,
    pub expected: BigUint,
    pub holds: bool,
}

/// An `F_{q^m}`-linear code in the Hamming metric.
#[derive(Debug, Clone)]
pub struct HammingCode {
    ctx: Arc<FieldCtx>,
    n: usize,
    generator: Matrix,
}

impl PartialEq for HammingCode {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.n == other.n && self.generator == other.generator
    }
}

impl Eq for HammingCode {}

pub fn hamming_weight(v: &[Elem]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

fn support_bits(v: &[Elem]) -> Vec<u64> {
    let mut bits = vec![0u64; v.len().div_ceil(64)];
    for (i, x) in v.iter().enumerate() {
        if !x.is_zero() {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

impl HammingCode {
    pub fn new(ctx: Arc<FieldCtx>, n: usize, generator: Matrix) -> Result<Self> {
        if generator.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("generator rows must have length n".into()));
        }
        if generator.iter().flatten().any(|&x| !ctx.is_valid(x)) {
            return Err(Error::InvalidArgs("generator entry out of range".into()));
        }
        if rank(&ctx, &generator) != generator.len() {
            return Err(Error::InvalidArgs("generator rows are dependent".into()));
        }
        Ok(HammingCode { ctx, n, generator })
    }

    /// The same generator read in the Hamming metric.
    pub fn from_rank_code(c: &RankCode) -> Self {
        HammingCode {
            ctx: c.ctx_arc().clone(),
            n: c.n(),
            generator: c.generator().clone(),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.generator.len()
    }
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }
    pub fn columns(&self) -> Matrix {
        transpose(&self.generator, self.n)
    }

    pub fn encode(&self, u: &[Elem]) -> Vec<Elem> {
        vec_mat(&self.ctx, u, &self.generator, self.n)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.columns().iter().all(|c| c.iter().any(|x| !x.is_zero()))
    }

    fn projective_messages(&self, budget: Budget) -> Result<Matrix> {
        budget.check("codewords", &BigUint::from(self.ctx.size()).pow(self.k() as u32))?;
        projective_points(&self.ctx, Level::Ext, self.k(), Budget(u64::MAX))
    }

    pub fn weight_distribution(&self, budget: Budget) -> Result<WeightDistribution> {
        let mut counts = vec![0u64; self.n + 1];
        counts[0] = 1;
        if self.k() == 0 {
            return Ok(WeightDistribution(counts));
        }
        let scalars = self.ctx.size() as u64 - 1;
        for u in self.projective_messages(budget)? {
            counts[hamming_weight(&self.encode(&u))] += scalars;
        }
        Ok(WeightDistribution(counts))
    }

    pub fn min_distance(&self, budget: Budget) -> Result<usize> {
        Ok(self
            .weight_distribution(budget)?
            .min_weight()
            .unwrap_or(self.n + 1))
    }

    /// Scan over pairs of projective codeword classes for support inclusion.
    pub fn minimality(&self, budget: Budget) -> Result<HammingMinimality> {
        let msgs = self.projective_messages(budget)?;
        let pairs = BigUint::from(msgs.len()).pow(2);
        budget.check("codeword pairs", &pairs)?;
        // proportional columns give identical supports, so keep one per class
        let mut classes: BTreeMap<Vec<Elem>, ()> = BTreeMap::new();
        for c in self.columns() {
            if c.iter().any(|x| !x.is_zero()) {
                classes.insert(normalize(&self.ctx, &c), ());
            }
        }
        let reps: Matrix = classes.into_keys().collect();
        let reduced = transpose(&reps, self.k());
        let words: Matrix = msgs.iter().map(|u| vec_mat(&self.ctx, u, &reduced, reps.len())).collect();
        let bits: Vec<Vec<u64>> = words.iter().map(|w| support_bits(w)).collect();
        for (i, bi) in bits.iter().enumerate() {
            for (j, bj) in bits.iter().enumerate() {
                if i != j && is_subset(bj, bi) {
                    return Ok(HammingMinimality {
                        minimal: false,
                        witness: Some((self.encode(&msgs[i]), self.encode(&msgs[j]))),
                    });
                }
            }
        }
        Ok(HammingMinimality {
            minimal: true,
            witness: None,
        })
    }

    pub fn is_minimal(&self, budget: Budget) -> Result<bool> {
        Ok(self.minimality(budget)?.minimal)
    }

    /// `min (N − #{i : G_i ∈ H})` over `F_{q^m}`-subspaces `H` of dimension `k − r`.
    pub fn generalized_weight(&self, r: usize, budget: Budget) -> Result<usize> {
        if r == 0 || r > self.k() {
            return Err(Error::InvalidArgs(format!("r = {r} outside 1..={}", self.k())));
        }
        let mut groups: BTreeMap<Vec<Elem>, usize> = BTreeMap::new();
        let mut zero_cols = 0;
        for c in self.columns() {
            if c.iter().all(|x| x.is_zero()) {
                zero_cols += 1;
            } else {
                *groups.entry(normalize(&self.ctx, &c)).or_default() += 1;
            }
        }
        let mut best = self.n;
        for h in enumerate_subspaces(&self.ctx, Level::Ext, self.k(), self.k() - r, budget)? {
            let inside: usize = groups
                .iter()
                .filter(|(p, _)| h.contains_vector(&self.ctx, p))
                .map(|(_, &c)| c)
                .sum();
            best = best.min(self.n - inside - zero_cols);
        }
        Ok(best)
    }

    /// `Σ_v wt(v)` against `N'(Q^k − Q^{k−1})`, `N'` the number of nonzero columns.
    pub fn total_weight(&self, budget: Budget) -> Result<TotalWeightCheck> {
        let dist = self.weight_distribution(budget)?;
        let total: BigUint = dist
            .counts()
            .iter()
            .enumerate()
            .map(|(j, &a)| BigUint::from(j) * a)
            .sum();
        let nonzero_cols = self.columns().iter().filter(|c| c.iter().any(|x| !x.is_zero())).count();
        let qq = BigUint::from(self.ctx.size());
        let k = self.k() as u32;
        let expected = if k == 0 {
            BigUint::from(0u32)
        } else {
            BigUint::from(nonzero_cols) * (qq.pow(k) - qq.pow(k - 1))
        };
        Ok(TotalWeightCheck {
            holds: total == expected,
            total,
            expected,
        })
    }
}

/// `(q^n − q^{n−i})/(q − 1)`: the Hamming weight in the associated code of a
/// rank-`i` codeword of a length-`n` code.
pub fn associated_weight(q: u64, n: usize, i: usize) -> u64 {
    (q.pow(n as u32) - q.pow((n - i) as u32)) / (q - 1)
}

/// The Hamming-metric code associated with a nondegenerate rank-metric code.
pub fn associated_code(c: &RankCode, budget: Budget) -> Result<HammingCode> {
    let u = QSystem::from_code(c)?;
    Ok(ext_h(&u, budget)?.to_code())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCorrespondence {
    pub rank: WeightDistribution,
    pub hamming: WeightDistribution,
    pub holds: bool,
}

/// Checks `A^H_j = A^rk_i` for `j = (q^n − q^{n−i})/(q − 1)` and `A^H_j = 0` elsewhere.
pub fn verify_weight_correspondence(c: &RankCode, budget: Budget) -> Result<WeightCorrespondence> {
    let h = associated_code(c, budget)?;
    let rank = c.weight_distribution(budget)?;
    let hamming = h.weight_distribution(budget)?;
    let q = c.q();
    let mut expected = vec![0u64; h.n() + 1];
    for (i, &a) in rank.counts().iter().enumerate() {
        expected[associated_weight(q, c.n(), i) as usize] += a;
    }
    Ok(WeightCorrespondence {
        holds: expected == hamming.counts(),
        rank,
        hamming,
    })
}
