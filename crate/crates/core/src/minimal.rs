//! Minimal rank-metric codes: three equivalent tests, length and rank bounds,
//! constructions, an existence bound and a small search.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::{rank_support, rank_weight, RankCode};
use crate::error::{Error, Result};
use crate::geometry::{flatten, QSystem};
use crate::gf::{prime_power, Elem, FieldCtx};
use crate::linalg::{
    add_vec, enumerate_subspaces, gaussian_binomial_unchecked, normalize, projective_points, rank,
    random_full_rank, scale, vec_mat, Budget, Level, Matrix, Subspace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Support inclusion over pairs of codewords.
    Pairwise,
    /// Every hyperplane section of the q-system spans the hyperplane.
    Cutting,
    /// Exact evaluation of the rank-weight sum over `c + λc'`.
    LambdaSum,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Pairwise, Method::Cutting, Method::LambdaSum];
}

/// Two non-proportional codewords with `σ(smaller) ⊆ σ(larger)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub larger_message: Vec<Elem>,
    pub smaller_message: Vec<Elem>,
    pub larger: Vec<Elem>,
    pub smaller: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub verdict: bool,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PairWitness>,
    /// For the cutting test: `v` such that `⟨v⟩^⊥ ∩ U` spans a proper subspace of `⟨v⟩^⊥`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperplane: Option<Vec<Elem>>,
}

/// Re-checks a witness against the definition of a minimal codeword.
pub fn verify_witness(code: &RankCode, w: &PairWitness) -> bool {
    let ctx = code.ctx();
    if code.encode(&w.larger_message) != w.larger || code.encode(&w.smaller_message) != w.smaller {
        return false;
    }
    if w.smaller.iter().all(|x| x.is_zero()) {
        return false;
    }
    let proportional = normalize(ctx, &w.larger) == normalize(ctx, &w.smaller);
    let big = rank_support(ctx, &w.larger);
    let small = rank_support(ctx, &w.smaller);
    !proportional && big.contains(ctx, &small).unwrap_or(false)
}

fn pair_witness(code: &RankCode, larger: &[Elem], smaller: &[Elem]) -> PairWitness {
    PairWitness {
        larger_message: larger.to_vec(),
        smaller_message: smaller.to_vec(),
        larger: code.encode(larger),
        smaller: code.encode(smaller),
    }
}

fn pair_budget(classes: usize, factor: u64, budget: Budget) -> Result<()> {
    let pairs = BigUint::from(classes).pow(2) * factor;
    budget.check("codeword pairs", &pairs)
}

pub fn is_minimal(code: &RankCode, method: Method, budget: Budget) -> Result<MinimalityReport> {
    if code.k() == 0 {
        return Ok(MinimalityReport {
            verdict: true,
            method,
            witness: None,
            hyperplane: None,
        });
    }
    let report = match method {
        Method::Pairwise => pairwise(code, budget)?,
        Method::Cutting => cutting(code, budget)?,
        Method::LambdaSum => lambda_sum(code, budget)?,
    };
    if let Some(w) = &report.witness {
        if !verify_witness(code, w) {
            return Err(Error::InternalInconsistency(format!(
                "{method:?} witness fails the support-inclusion check"
            )));
        }
    }
    Ok(report)
}

/// Runs all three tests and requires identical verdicts.
pub fn is_minimal_cross_checked(code: &RankCode, budget: Budget) -> Result<Vec<MinimalityReport>> {
    let reports: Vec<MinimalityReport> = Method::ALL
        .iter()
        .map(|&m| is_minimal(code, m, budget))
        .collect::<Result<_>>()?;
    if reports.iter().any(|r| r.verdict != reports[0].verdict) {
        return Err(Error::InternalInconsistency(format!(
            "minimality verdicts disagree: {:?}",
            reports.iter().map(|r| (r.method, r.verdict)).collect::<Vec<_>>()
        )));
    }
    Ok(reports)
}

fn pairwise(code: &RankCode, budget: Budget) -> Result<MinimalityReport> {
    let ctx = code.ctx();
    let msgs = code.projective_messages(budget)?;
    pair_budget(msgs.len(), 1, budget)?;
    let supports: Vec<Subspace> = msgs.iter().map(|u| rank_support(ctx, &code.encode(u))).collect();
    for (i, big) in supports.iter().enumerate() {
        for (j, small) in supports.iter().enumerate() {
            if i == j || small.dim() > big.dim() {
                continue;
            }
            if big.contains(ctx, small)? {
                if code.is_nondegenerate() {
                    check_reverse_inclusion(code, &msgs[i], &msgs[j])?;
                }
                return Ok(MinimalityReport {
                    verdict: false,
                    method: Method::Pairwise,
                    witness: Some(pair_witness(code, &msgs[i], &msgs[j])),
                    hyperplane: None,
                });
            }
        }
    }
    Ok(MinimalityReport {
        verdict: true,
        method: Method::Pairwise,
        witness: None,
        hyperplane: None,
    })
}

/// `σ(uG) ⊆ σ(vG)` must come with `⟨u⟩^⊥ ∩ U ⊇ ⟨v⟩^⊥ ∩ U`.
fn check_reverse_inclusion(code: &RankCode, larger: &[Elem], smaller: &[Elem]) -> Result<()> {
    let sys = QSystem::from_code(code)?;
    if !hyperplane_sections_nested(&sys, larger, smaller) {
        return Err(Error::InternalInconsistency(
            "support inclusion without the reverse inclusion of hyperplane sections".into(),
        ));
    }
    Ok(())
}

/// `⟨smaller⟩^⊥ ∩ U ⊇ ⟨larger⟩^⊥ ∩ U`.
pub fn hyperplane_sections_nested(sys: &QSystem, larger: &[Elem], smaller: &[Elem]) -> bool {
    let ctx = sys.ctx();
    let big = sys.kernel_section(&[larger.to_vec()]);
    let small = sys.kernel_section(&[smaller.to_vec()]);
    let flat = |vs: &Matrix| {
        let rows: Matrix = vs.iter().map(|v| flatten(ctx, v)).collect();
        Subspace::span_unchecked(ctx, Level::Sub, sys.k() * sys.m(), rows)
    };
    flat(&small).contains(ctx, &flat(&big)).unwrap_or(false)
}

fn cutting(code: &RankCode, budget: Budget) -> Result<MinimalityReport> {
    let sys = if code.is_nondegenerate() {
        QSystem::from_code(code)?
    } else {
        // the column span is the system of the effective-length embedding
        QSystem::from_column_span(code)?
    };
    match find_non_cutting_hyperplane(&sys, budget)? {
        None => Ok(MinimalityReport {
            verdict: true,
            method: Method::Cutting,
            witness: None,
            hyperplane: None,
        }),
        Some((v, u)) => Ok(MinimalityReport {
            verdict: false,
            method: Method::Cutting,
            witness: Some(pair_witness(code, &v, &u)),
            hyperplane: Some(v),
        }),
    }
}

/// First `v` with `⟨⟨v⟩^⊥ ∩ U⟩ ≠ ⟨v⟩^⊥`, paired with a non-proportional `u`
/// whose hyperplane contains that span.
fn find_non_cutting_hyperplane(sys: &QSystem, budget: Budget) -> Result<Option<(Vec<Elem>, Vec<Elem>)>> {
    let ctx = sys.ctx();
    let k = sys.k();
    for v in projective_points(ctx, Level::Ext, k, budget)? {
        let section = sys.kernel_section(std::slice::from_ref(&v));
        let span = Subspace::span_unchecked(ctx, Level::Ext, k, section.clone());
        if span.dim() == k - 1 {
            continue;
        }
        let perp = span.orthogonal(ctx);
        let u = perp
            .basis()
            .iter()
            .map(|w| normalize(ctx, w))
            .find(|w| *w != v)
            .ok_or_else(|| Error::InternalInconsistency("degenerate hyperplane section".into()))?;
        return Ok(Some((v, u)));
    }
    Ok(None)
}

/// Hyperplane test on a q-system; also checks `|H ∩ U| ≥ q^{k−1}` when it passes.
pub fn is_linear_cutting_blocking_set(sys: &QSystem, budget: Budget) -> Result<bool> {
    let cutting = find_non_cutting_hyperplane(sys, budget)?.is_none();
    if cutting {
        for v in projective_points(sys.ctx(), Level::Ext, sys.k(), budget)? {
            if sys.kernel_intersection_dim(&[v]) + 1 < sys.k() {
                return Err(Error::InternalInconsistency(
                    "cutting system with a hyperplane section below q^(k-1) elements".into(),
                ));
            }
        }
    }
    Ok(cutting)
}

fn message_index(u: &[Elem], size: u64) -> usize {
    u.iter().rev().fold(0u64, |acc, x| acc * size + x.0 as u64) as usize
}

fn lambda_sum(code: &RankCode, budget: Budget) -> Result<MinimalityReport> {
    let ctx = code.ctx();
    let size = ctx.size() as u64;
    let k = code.k();
    let n = code.n() as u32;
    let q = code.q() as u128;
    let qm = q.pow(code.m() as u32);
    let msgs = code.projective_messages(budget)?;
    pair_budget(msgs.len(), size - 1, budget)?;
    // rank of uG for every message u, indexed by message_index
    let all = Subspace::full(Level::Ext, k).elements(ctx, Budget(u64::MAX))?;
    let mut ranks = vec![0u32; all.len()];
    for u in &all {
        ranks[message_index(u, size)] = rank_weight(ctx, &code.encode(u)) as u32;
    }
    let qpow: Vec<u128> = (0..=n).map(|e| q.pow(e)).collect();
    let rk = |u: &[Elem]| ranks[message_index(u, size)];
    let scalars: Vec<Elem> = (1..ctx.size()).map(Elem).collect();
    for c in &msgs {
        let rc = rk(c);
        for c2 in &msgs {
            if c == c2 {
                continue;
            }
            let rc2 = rk(c2);
            let lhs: u128 = scalars
                .iter()
                .map(|&l| qpow[(n - rk(&add_vec(ctx, c, &scale(ctx, l, c2)))) as usize])
                .sum();
            let rhs = (qm - 1) * qpow[(n - rc) as usize] + qpow[n as usize] - qpow[(n - rc2) as usize];
            if lhs == rhs {
                return Ok(MinimalityReport {
                    verdict: false,
                    method: Method::LambdaSum,
                    witness: Some(pair_witness(code, c, c2)),
                    hyperplane: None,
                });
            }
        }
    }
    Ok(MinimalityReport {
        verdict: true,
        method: Method::LambdaSum,
        witness: None,
        hyperplane: None,
    })
}

/// Length, rank and linearity bounds evaluated for one code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsLedger {
    pub q: u64,
    pub m: usize,
    /// Effective length.
    pub n: usize,
    pub k: usize,
    pub linearity_index: usize,
    pub d: usize,
    pub max_rank: usize,
    pub minimal: bool,
    /// `n ≥ k + m − 1`; necessary for minimal codes with `k ≥ 2`.
    pub n_ge_k_plus_m_minus_1: Option<bool>,
    /// `w ≤ n − k + 1`; necessary for minimal codes.
    pub wmax_le_n_minus_k_plus_1: bool,
    /// `min_H |H ∩ U| = q^{n−w} ≥ q^{k−1}`; necessary for minimal codes.
    pub hyperplane_size_ge_q_pow_k_minus_1: bool,
    /// `n ≥ (k − 1)m + 1`; sufficient for minimality.
    pub sufficiency_n_ge_km_minus_m_plus_1: bool,
    /// `n − k ≥ (ℓ + 1)(m − 1)` when `k − ℓ ≥ 2`; necessary for minimal codes.
    pub gen_lower_bound_ok: Option<bool>,
    /// `(q^n − q^{n−m})(q^m − 1) < q^m(q^n − q^{n−d})`.
    pub ab_condition_holds: bool,
    pub inconsistencies: Vec<String>,
}

impl BoundsLedger {
    #[allow(clippy::too_many_arguments)]
    pub fn evaluate(
        q: u64,
        m: usize,
        n: usize,
        k: usize,
        linearity_index: usize,
        d: usize,
        max_rank: usize,
        minimal: bool,
    ) -> Self {
        let (ni, ki, mi, li) = (n as i64, k as i64, m as i64, linearity_index as i64);
        let n_ge = (k >= 2).then_some(ni >= ki + mi - 1);
        let wmax = max_rank as i64 <= ni - ki + 1;
        let hyper = ni - max_rank as i64 >= ki - 1;
        let sufficiency = ni > (ki - 1) * mi;
        let gen = (ki - li >= 2).then_some(ni - ki >= (li + 1) * (mi - 1));
        let ab = {
            // scaled by q^m so every exponent is nonnegative
            let qb = BigInt::from(q);
            let qp = |e: i64| qb.pow(e as u32);
            let lhs = (qp(ni + mi) - qp(ni)) * (qp(mi) - 1);
            let rhs = qp(2 * mi) * (qp(ni) - qp(ni - d.min(n) as i64));
            lhs < rhs
        };
        let mut inconsistencies = Vec::new();
        if minimal {
            if n_ge == Some(false) {
                inconsistencies.push("minimal code shorter than k + m - 1".to_string());
            }
            if !wmax {
                inconsistencies.push("minimal code with a codeword of rank above n - k + 1".to_string());
            }
            if !hyper {
                inconsistencies.push("minimal code with a hyperplane section below q^(k-1)".to_string());
            }
            if gen == Some(false) {
                inconsistencies.push("minimal code violating n - k >= (l + 1)(m - 1)".to_string());
            }
        }
        if sufficiency && k >= 1 && !minimal {
            inconsistencies.push("code with n >= (k - 1)m + 1 is not minimal".to_string());
        }
        if ab != (d == m) {
            inconsistencies.push("rank Ashikhmin-Barg condition does not match d = m".to_string());
        }
        BoundsLedger {
            q,
            m,
            n,
            k,
            linearity_index,
            d,
            max_rank,
            minimal,
            n_ge_k_plus_m_minus_1: n_ge,
            wmax_le_n_minus_k_plus_1: wmax,
            hyperplane_size_ge_q_pow_k_minus_1: hyper,
            sufficiency_n_ge_km_minus_m_plus_1: sufficiency,
            gen_lower_bound_ok: gen,
            ab_condition_holds: ab,
            inconsistencies,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }
}

/// Ledger for a nonzero code, computed on its effective-length embedding.
pub fn bounds_ledger(code: &RankCode, budget: Budget) -> Result<BoundsLedger> {
    if code.k() == 0 {
        return Err(Error::InvalidArgs("bounds need a nonzero code".into()));
    }
    let eff = code.effective_embedding()?;
    let sys = QSystem::from_code(&eff)?;
    let dist = eff.weight_distribution(budget)?;
    let minimal = is_minimal(&eff, Method::Cutting, budget)?.verdict;
    Ok(BoundsLedger::evaluate(
        eff.q(),
        eff.m(),
        eff.n(),
        eff.k(),
        sys.linearity_index(budget)?,
        dist.min_weight().unwrap_or(eff.n() + 1),
        dist.max_weight().unwrap_or(0),
        minimal,
    ))
}

/// `(I_k | αI_k | ⋯ | α^{m−1}I_k)` with `α` the primitive element.
pub fn construct_simplex(ctx: Arc<FieldCtx>, k: usize) -> Result<RankCode> {
    if k == 0 {
        return Err(Error::InvalidArgs("simplex code needs k >= 1".into()));
    }
    let m = ctx.m();
    let g = ctx.generator();
    let generator: Matrix = (0..k)
        .map(|i| {
            let mut row = vec![Elem::ZERO; k * m];
            for j in 0..m {
                row[j * k + i] = ctx.pow(g, j as u64);
            }
            row
        })
        .collect();
    RankCode::new(ctx, k * m, generator)
}

/// Modulus of `F_{2^12}`: `x^12 + x^7 + x^6 + x^5 + x^3 + x + 1`.
pub const ETA_MODULUS: [u32; 13] = [1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1];
/// Exponents `i` of the `F_2`-generators `η^i` of the scattered system in `F_{2^12}`.
pub const SCATTERED_633_EXPONENTS: [u32; 6] = [6, 22, 63, 89, 166, 289];

#[derive(Debug, Clone)]
pub struct Scattered633 {
    pub system: QSystem,
    pub code: RankCode,
    /// Number of elements of the span that satisfy `γ^64 + η^64 γ^3 + η^7 = 0`.
    pub polynomial_roots_in_span: usize,
}

/// The `[6,3]_{16/2}` system spanned by `η^6, …, η^289`, written over the
/// `F_16`-basis `{1, η, η²}` of `F_{2^12}`, with `F_16 = F_2[λ]`, `λ = η^273`.
pub fn construct_scattered_633(budget: Budget) -> Result<Scattered633> {
    let big = FieldCtx::new(2, 4, 3, Some(&ETA_MODULUS))?;
    let small = Arc::new(FieldCtx::new(2, 1, 4, Some(&[1, 1, 0, 0, 1]))?);
    let lambda = big.gpow(273);
    let l4 = big.pow(lambda, 4);
    if big.add(big.add(l4, lambda), Elem::ONE) != Elem::ZERO {
        return Err(Error::InternalInconsistency("λ^4 + λ + 1 ≠ 0".into()));
    }
    let stride = big.subfield_stride();
    let to_small = |x: Elem| -> Elem {
        match big.log(x) {
            None => Elem::ZERO,
            Some(l) => small.gpow((l / stride) as i64),
        }
    };
    let gens: Vec<Elem> = SCATTERED_633_EXPONENTS.iter().map(|&i| big.gpow(i as i64)).collect();
    let columns: Matrix = gens
        .iter()
        .map(|&x| big.expand(x).into_iter().map(to_small).collect())
        .collect();
    let generator = crate::linalg::transpose(&columns, 3);
    let code = RankCode::new(small.clone(), 6, generator)?;
    let system = QSystem::new(small.clone(), 3, &columns)?;
    if system.dim() != 6 {
        return Err(Error::InternalInconsistency("generators are dependent".into()));
    }
    let ls = system.linear_set(budget)?;
    if !ls.is_scattered() || ls.len() != 63 {
        return Err(Error::InternalInconsistency("system is not scattered".into()));
    }
    if !is_linear_cutting_blocking_set(&system, budget)? {
        return Err(Error::InternalInconsistency("system is not cutting".into()));
    }
    if !is_minimal(&code, Method::Cutting, budget)?.verdict {
        return Err(Error::InternalInconsistency("code is not minimal".into()));
    }
    let alpha = big.gpow(64);
    let beta = big.gpow(7);
    let polynomial_roots_in_span = (0u32..1 << gens.len())
        .filter(|mask| {
            let gamma = gens
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(Elem::ZERO, |acc, (_, &g)| big.add(acc, g));
            let val = big.add(
                big.add(big.pow(gamma, 64), big.mul(alpha, big.pow(gamma, 3))),
                beta,
            );
            val.is_zero()
        })
        .count();
    Ok(Scattered633 {
        system,
        code,
        polynomial_roots_in_span,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatteredMinimality {
    pub report: MinimalityReport,
    /// Least number of linear-set points on a hyperplane.
    pub min_points_on_hyperplane: u64,
    /// `(q^{n−m} − 1)/(q − 1)`.
    pub required_points: u64,
}

/// Minimality of `Ψ(U)` for a scattered `[n,3]` system with `n ≥ m + 2`.
pub fn minimal_from_scattered(sys: &QSystem, budget: Budget) -> Result<ScatteredMinimality> {
    let (n, k, m) = (sys.dim(), sys.k(), sys.m());
    if k != 3 {
        return Err(Error::HypothesisViolated(format!("k = {k}, expected 3")));
    }
    if n < m + 2 {
        return Err(Error::HypothesisViolated(format!("n = {n} < m + 2 = {}", m + 2)));
    }
    let ls = sys.linear_set(budget)?;
    if !ls.is_scattered() {
        return Err(Error::HypothesisViolated("linear set is not scattered".into()));
    }
    let ctx = sys.ctx();
    let q = sys.q();
    let required = (q.pow((n - m) as u32) - 1) / (q - 1);
    let points: Vec<&Vec<Elem>> = ls.entries.keys().collect();
    let mut min_points = u64::MAX;
    for v in projective_points(ctx, Level::Ext, k, budget)? {
        let on = points
            .iter()
            .filter(|p| crate::linalg::dot(ctx, p, &v).is_zero())
            .count() as u64;
        min_points = min_points.min(on);
    }
    if min_points < required || required < q + 1 {
        return Err(Error::InternalInconsistency(format!(
            "hyperplane meets the linear set in {min_points} < {required} points"
        )));
    }
    let report = is_minimal(&sys.psi(), Method::Cutting, budget)?;
    if !report.verdict {
        return Err(Error::InternalInconsistency("scattered system is not cutting".into()));
    }
    Ok(ScatteredMinimality {
        report,
        min_points_on_hyperplane: min_points,
        required_points: required,
    })
}

/// `[G | v^⊤]` for a minimal code.
pub fn extend_minimal(code: &RankCode, v: &[Elem], budget: Budget) -> Result<RankCode> {
    if !is_minimal(code, Method::Cutting, budget)?.verdict {
        return Err(Error::NotMinimalInput);
    }
    code.append_column(v)
}

fn check_field_order(q: u64) -> Result<(u32, u32)> {
    prime_power(q).ok_or_else(|| Error::InvalidArgs(format!("{q} is not a prime power")))
}

/// Exact value of the counting bound; positive values certify a minimal `[n,k]` code.
pub fn existence_bound(q: u64, m: usize, n: usize, k: usize) -> Result<BigRational> {
    check_field_order(q)?;
    if !(n >= k && k >= 2) || m == 0 {
        return Err(Error::InvalidArgs(format!("need n >= k >= 2 and m >= 1, got n={n} k={k} m={m}")));
    }
    let qb = BigInt::from(q);
    let p = |e: usize| qb.pow(e as u32);
    let first = BigRational::new(
        (p(m * n) - 1) * (p(m * (n - 1)) - 1),
        (p(m * k) - 1) * (p(m * (k - 1)) - 1),
    );
    let qm1: BigInt = p(m) - 1;
    let mut sum = BigRational::zero();
    for i in 2..=m {
        let binom = BigInt::from(gaussian_binomial_unchecked(m as u64, i as u64, q));
        let prod = (0..i).fold(BigInt::one(), |acc, j| acc * (p(n) - p(j)));
        let inner = BigRational::new(p(m * i) - 1, qm1.clone()) - BigRational::one();
        sum += BigRational::new(binom * prod, qm1.clone()) * inner;
    }
    Ok(first - sum / BigInt::from(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exhaustive,
    Random { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub strategy: Strategy,
    pub examined: u64,
    /// Every candidate was examined.
    pub exhausted: bool,
    /// Value of the existence bound when `n ≥ k ≥ 2`.
    pub existence_bound: Option<String>,
    /// Necessary conditions violated by the parameters.
    pub forbidden_by: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub code: Option<RankCode>,
    pub report: Option<MinimalityReport>,
    pub certificate: SearchCertificate,
}

/// Looks for a minimal `[n,k]_{q^m/q}` code among `k`-dimensional subspaces of `F_{q^m}^n`.
pub fn search_minimal(
    q: u64,
    m: usize,
    n: usize,
    k: usize,
    strategy: Strategy,
    budget: Budget,
) -> Result<SearchOutcome> {
    let (p, e) = check_field_order(q)?;
    if k == 0 || k > n {
        return Err(Error::InvalidArgs(format!("need 1 <= k <= n, got k={k} n={n}")));
    }
    let ctx = Arc::new(FieldCtx::new(p, e, m as u32, None)?);
    let mut forbidden_by = Vec::new();
    if k >= 2 && n < k + m - 1 {
        forbidden_by.push(format!("length bound n >= k + m - 1 = {}", k + m - 1));
    }
    let bound = (k >= 2).then(|| existence_bound(q, m, n, k)).transpose()?;
    let mut certificate = SearchCertificate {
        strategy,
        examined: 0,
        exhausted: false,
        existence_bound: bound.map(|b| b.to_string()),
        forbidden_by,
    };
    let test = |code: RankCode, certificate: &mut SearchCertificate| -> Result<Option<(RankCode, MinimalityReport)>> {
        certificate.examined += 1;
        let report = is_minimal(&code, Method::Cutting, budget)?;
        if report.verdict {
            let check = is_minimal(&code, Method::Pairwise, budget)?;
            if !check.verdict {
                return Err(Error::InternalInconsistency("cutting and pairwise disagree".into()));
            }
            return Ok(Some((code, report)));
        }
        Ok(None)
    };
    match strategy {
        Strategy::Exhaustive => {
            for s in enumerate_subspaces(&ctx, Level::Ext, n, k, budget)? {
                let code = RankCode::new(ctx.clone(), n, s.into_basis())?;
                if let Some((code, report)) = test(code, &mut certificate)? {
                    return Ok(SearchOutcome {
                        code: Some(code),
                        report: Some(report),
                        certificate,
                    });
                }
            }
            certificate.exhausted = true;
        }
        Strategy::Random { trials, seed } => {
            budget.check("random trials", &BigUint::from(trials))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let g = random_full_rank(&ctx, Level::Ext, k, n, &mut rng);
                let code = RankCode::from_span(ctx.clone(), n, g)?;
                if let Some((code, report)) = test(code, &mut certificate)? {
                    return Ok(SearchOutcome {
                        code: Some(code),
                        report: Some(report),
                        certificate,
                    });
                }
            }
        }
    }
    Ok(SearchOutcome {
        code: None,
        report: None,
        certificate,
    })
}

#[derive(Debug, Clone)]
pub struct KMinus1M {
    pub code: RankCode,
    pub system: QSystem,
    pub linearity_index: usize,
    pub d2: usize,
    pub minimal: bool,
}

/// A nondegenerate minimal `[(k−1)m, k]` code for `k ≥ 3`, `m ≥ 3`.
pub fn construct_k_minus_1_m(ctx: Arc<FieldCtx>, k: usize, budget: Budget) -> Result<KMinus1M> {
    let m = ctx.m();
    if k < 3 {
        return Err(Error::InvalidArgs(format!("k = {k}, expected k >= 3")));
    }
    if m <= 2 {
        return Err(Error::HypothesisViolated(format!(
            "a nondegenerate minimal [(k-1)m,k] code exists if and only if m >= 3; \
             with m = {m} every such code has linearity index >= k - m = {} >= k - 2",
            k as i64 - m as i64
        )));
    }
    let g = ctx.generator();
    let unit = |j: usize, x: Elem| {
        let mut v = vec![Elem::ZERO; k];
        v[j] = x;
        v
    };
    let mut vectors: Matrix = Vec::new();
    for j in 0..k - 3 {
        for &gamma in ctx.gamma() {
            vectors.push(unit(j, gamma));
        }
    }
    for j in k - 3..k {
        for i in 0..=m - 2 {
            vectors.push(unit(j, ctx.pow(g, i as u64)));
        }
    }
    let big = QSystem::new(ctx.clone(), k, &vectors)?;
    let target = (k - 1) * m;
    let mut system = None;
    for s in enumerate_subspaces(&ctx, Level::Sub, big.dim(), target, budget)? {
        let vecs: Matrix = s
            .basis()
            .iter()
            .map(|a| vec_mat(&ctx, a, big.vectors(), k))
            .collect();
        if rank(&ctx, &vecs) == k {
            system = Some(QSystem::new(ctx.clone(), k, &vecs)?);
            break;
        }
    }
    let system = system.ok_or(Error::NoSpanningSubspace)?;
    let code = system.psi();
    let linearity_index = system.linearity_index(budget)?;
    let d2 = code.generalized_rank_weight(2, budget)?;
    let minimal = is_minimal(&code, Method::Cutting, budget)?.verdict;
    if minimal != (linearity_index + 2 < k) || minimal != (d2 > m) || linearity_index + 3 > k {
        return Err(Error::InternalInconsistency(format!(
            "minimal = {minimal}, linearity index = {linearity_index}, d2 = {d2}"
        )));
    }
    Ok(KMinus1M {
        code,
        system,
        linearity_index,
        d2,
        minimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(2, 1, 3, Some(&[1, 1, 0, 1])).unwrap())
    }

    fn sample_code() -> RankCode {
        let ctx = f8();
        let a = ctx.generator();
        let a2 = ctx.mul(a, a);
        let z = Elem::ZERO;
        let o = Elem::ONE;
        RankCode::new(ctx, 4, vec![vec![o, z, z, z], vec![z, o, a, a2]]).unwrap()
    }

    #[test]
    fn sample_code_is_minimal_three_ways() {
        let reports = is_minimal_cross_checked(&sample_code(), Budget::default()).unwrap();
        assert!(reports.iter().all(|r| r.verdict));
    }

    #[test]
    fn non_minimal_example_has_witness() {
        let ctx = f8();
        let a = ctx.generator();
        let z = Elem::ZERO;
        let o = Elem::ONE;
        let c = RankCode::new(ctx, 4, vec![vec![o, z, z, z], vec![a, z, o, z]]).unwrap();
        for method in Method::ALL {
            let r = is_minimal(&c, method, Budget::default()).unwrap();
            assert!(!r.verdict, "{method:?}");
            assert!(verify_witness(&c, r.witness.as_ref().unwrap()));
        }
    }

    #[test]
    fn simplex_codes_are_minimal() {
        for (p, m, k) in [(2, 2, 2), (2, 3, 2), (3, 2, 2), (2, 2, 3)] {
            let ctx = Arc::new(FieldCtx::new(p, 1, m, None).unwrap());
            let s = construct_simplex(ctx, k).unwrap();
            assert!(is_minimal_cross_checked(&s, Budget::default()).unwrap()[0].verdict);
        }
    }

    #[test]
    fn simplex_small_examples() {
        let ctx = Arc::new(FieldCtx::new(2, 1, 3, None).unwrap());
        let s = construct_simplex(ctx, 1).unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.weight_distribution(Budget::default()).unwrap().support(), vec![3]);
    }

    #[test]
    fn ledger_for_sample_code() {
        let l = bounds_ledger(&sample_code(), Budget::default()).unwrap();
        assert!(l.is_consistent(), "{:?}", l.inconsistencies);
        assert_eq!(l.n_ge_k_plus_m_minus_1, Some(true));
        assert_eq!(l.n, l.k + l.m - 1);
        assert!(l.sufficiency_n_ge_km_minus_m_plus_1);
        assert!(!l.ab_condition_holds);
    }

    #[test]
    fn ledger_for_simplex() {
        let ctx = Arc::new(FieldCtx::new(2, 1, 2, None).unwrap());
        let l = bounds_ledger(&construct_simplex(ctx, 2).unwrap(), Budget::default()).unwrap();
        assert!(l.ab_condition_holds);
        assert!(l.is_consistent());
    }

    #[test]
    fn ab_condition_matches_d_equals_m() {
        for q in [2u64, 3, 4] {
            for m in 1..6usize {
                for n in 1..8usize {
                    for d in 1..=n.min(m) {
                        let l = BoundsLedger::evaluate(q, m, n, 2, 0, d, n.min(m), true);
                        assert_eq!(l.ab_condition_holds, d == m);
                    }
                }
            }
        }
    }

    #[test]
    fn existence_bound_values() {
        let v = existence_bound(2, 2, 4, 2).unwrap();
        assert_eq!(v, BigRational::from_integer(BigInt::from(217)));
        let first_only = existence_bound(5, 1, 3, 3).unwrap();
        assert_eq!(first_only, BigRational::one());
        assert!(existence_bound(6, 2, 4, 2).is_err());
        assert!(existence_bound(2, 2, 1, 2).is_err());
    }

    #[test]
    fn extension_stays_minimal() {
        let c = sample_code();
        let e = extend_minimal(&c, &[Elem::ONE, Elem::ONE], Budget::default()).unwrap();
        assert_eq!(e.n(), 5);
        assert!(is_minimal(&e, Method::Pairwise, Budget::default()).unwrap().verdict);
        let ctx = f8();
        let a = ctx.generator();
        let bad = RankCode::new(ctx, 4, vec![vec![Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ZERO], vec![a, Elem::ZERO, Elem::ONE, Elem::ZERO]]).unwrap();
        assert_eq!(
            extend_minimal(&bad, &[Elem::ONE, Elem::ONE], Budget::default()).unwrap_err(),
            Error::NotMinimalInput
        );
    }

    #[test]
    fn km1m_refuses_small_m() {
        let ctx = Arc::new(FieldCtx::new(2, 1, 2, None).unwrap());
        assert!(matches!(
            construct_k_minus_1_m(ctx, 3, Budget::default()),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
