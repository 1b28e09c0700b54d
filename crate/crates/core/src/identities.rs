//! Pless-type identities and exact statistics of `q^{n−rk(v)}` over a code.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::code::{RankCode, WeightDistribution};
use crate::error::{Error, Result};
use crate::linalg::{gaussian_binomial_unchecked, Budget};

fn gb(a: usize, b: usize, q: u64) -> BigUint {
    if b > a {
        BigUint::zero()
    } else {
        gaussian_binomial_unchecked(a as u64, b as u64, q)
    }
}

/// `Σ_{ν=j}^{r} q^{m(k−ν)} [n−j, ν−j]_q [r, ν]_q ∏_{ℓ<ν} (q^ν − q^ℓ)`.
///
/// Terms with `ν > k` carry a negative power of `q`, so the value is rational in general.
/// Terms with `ν > n` vanish, so `r > n` is allowed.
pub fn f_q(q: u64, n: usize, m: usize, k: usize, j: usize, r: usize) -> Result<BigRational> {
    if j > r || j > n {
        return Err(Error::InvalidArgs(format!("need j <= r and j <= n, got j={j} r={r} n={n}")));
    }
    let qb = BigInt::from(q);
    let mut total = BigRational::zero();
    for nu in j..=r {
        let e = m as i64 * (k as i64 - nu as i64);
        let power = if e >= 0 {
            BigRational::from_integer(qb.pow(e as u32))
        } else {
            BigRational::new(BigInt::one(), qb.pow((-e) as u32))
        };
        let prod = (0..nu).fold(BigInt::one(), |acc, l| acc * (qb.pow(nu as u32) - qb.pow(l as u32)));
        let coeff = BigInt::from(gb(n - j, nu - j, q)) * BigInt::from(gb(r, nu, q)) * prod;
        total += power * BigRational::from_integer(coeff);
    }
    Ok(total)
}

fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Pair {
        numerator: String,
        denominator: String,
    }
    Pair {
        numerator: x.numer().to_string(),
        denominator: x.denom().to_string(),
    }
    .serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlessCheck {
    pub r: usize,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: BigRational,
    pub equal: bool,
}

fn power_sum(q: u64, n: usize, r: usize, dist: &WeightDistribution, skip_zero: bool) -> BigInt {
    let qb = BigInt::from(q);
    dist.counts()
        .iter()
        .enumerate()
        .skip(skip_zero as usize)
        .filter(|(_, &a)| a > 0)
        .map(|(i, &a)| BigInt::from(a) * qb.pow((r * (n - i)) as u32))
        .sum()
}

/// Both sides of the identity `Σ_{v∈C} q^{r(n−rk v)} = Σ_{j≤r} A_j(C^⊥) f_q(n,m,k,j,r)`.
pub fn pless_values(
    code: &RankCode,
    dist: &WeightDistribution,
    dual_dist: &WeightDistribution,
    r: usize,
) -> Result<PlessCheck> {
    let (q, n, m, k) = (code.q(), code.n(), code.m(), code.k());
    let lhs = BigRational::from_integer(power_sum(q, n, r, dist, false));
    let mut rhs = BigRational::zero();
    for j in 0..=r {
        let a = dual_dist.get(j);
        if a > 0 {
            rhs += BigRational::from_integer(BigInt::from(a)) * f_q(q, n, m, k, j, r)?;
        }
    }
    Ok(PlessCheck {
        r,
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

pub fn pless_check(code: &RankCode, r: usize, budget: Budget) -> Result<PlessCheck> {
    let dist = code.weight_distribution(budget)?;
    let dual = code.dual().weight_distribution(budget)?;
    let check = pless_values(code, &dist, &dual, r)?;
    if !check.equal {
        return Err(Error::InternalInconsistency(format!("Pless identity fails at r = {r}")));
    }
    Ok(check)
}

/// Checks every `r ∈ {0, …, n}` from one pair of distributions.
pub fn pless_check_all(code: &RankCode, budget: Budget) -> Result<Vec<PlessCheck>> {
    let dist = code.weight_distribution(budget)?;
    let dual = code.dual().weight_distribution(budget)?;
    (0..=code.n())
        .map(|r| {
            let c = pless_values(code, &dist, &dual, r)?;
            if c.equal {
                Ok(c)
            } else {
                Err(Error::InternalInconsistency(format!("Pless identity fails at r = {r}")))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TotalWeightStats {
    #[serde(serialize_with = "ser_rational")]
    pub mean: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub variance: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub formula_mean: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub formula_var_bound: BigRational,
    pub mean_matches: bool,
    pub variance_attains_bound: bool,
    pub rank2_nondegenerate: bool,
    /// `variance ≥ bound`, with equality exactly for rank-2-nondegenerate codes.
    pub bound_consistent: bool,
}

/// Mean and variance of `q^{n−rk(v)}` over the nonzero codewords of a nondegenerate code.
pub fn total_weight_stats(code: &RankCode, budget: Budget) -> Result<TotalWeightStats> {
    if code.k() == 0 || !code.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let (q, n, m, k) = (code.q(), code.n(), code.m(), code.k());
    let dist = code.weight_distribution(budget)?;
    let dual_d = code.dual_distance(budget)?;
    let qb = BigInt::from(q);
    let p = |e: usize| qb.pow(e as u32);
    let count: BigInt = p(m * k) - 1;
    let ratio = |x: BigInt| BigRational::new(x, count.clone());
    let mean = ratio(power_sum(q, n, 1, &dist, true));
    let second = ratio(power_sum(q, n, 2, &dist, true));
    let variance = &second - &mean * &mean;
    let formula_mean = ratio(-p(n) + p(m * k) + p(m * (k - 1)) * (p(n) - 1));
    let f2 = f_q(q, n, m, k, 0, 2)?;
    let formula_var_bound =
        (BigRational::from_integer(-p(2 * n)) + f2) / BigRational::from_integer(count.clone())
            - &formula_mean * &formula_mean;
    let rank2_nondegenerate = k == n || dual_d >= 3;
    let attains = variance == formula_var_bound;
    let bound_consistent = variance >= formula_var_bound && attains == rank2_nondegenerate;
    Ok(TotalWeightStats {
        mean_matches: mean == formula_mean,
        variance_attains_bound: attains,
        rank2_nondegenerate,
        bound_consistent,
        mean,
        variance,
        formula_mean,
        formula_var_bound,
    })
}
