//! Exact arithmetic in the tower `F_p ⊆ F_q ⊆ F_{q^m}` with `q = p^e`.
//!
//! Elements of the top field `F_{p^{em}}` are stored as the integer
//! `Σ c_i p^i` of their coefficient vector modulo a primitive polynomial of
//! degree `em`. Multiplication goes through discrete-log tables, addition in
//! odd characteristic through Zech logarithms. The subfield `F_q` is the set
//! `{0} ∪ {g^(i·s)}` where `s = (q^m - 1)/(q - 1)` and `g` is the class of `x`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the size of the top field.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// Largest `|F| * m` for which the full basis-expansion table is kept.
const EXPANSION_TABLE_CAP: u64 = 1 << 23;

const NO_LOG: u32 = u32::MAX;

/// Canonical integer encoding of a field element.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serializable description of a field tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub m: u32,
    /// Coefficients `c_0, …, c_{em}` of the modulus, constant term first.
    pub modulus: Vec<u32>,
    /// Optional ordered `F_q`-basis of `F_{q^m}`, as element encodings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Elem>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldCtx> {
        let ctx = FieldCtx::new(self.p, self.e, self.m, Some(&self.modulus))?;
        match &self.gamma {
            Some(g) => ctx.with_gamma(g.clone()),
            None => Ok(ctx),
        }
    }
}

/// Immutable context for the tower `F_p ⊆ F_q ⊆ F_{q^m}`.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    m: u32,
    q: u32,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    stride: u32,
    subfield: Vec<Elem>,
    in_subfield: Vec<bool>,
    gamma: Vec<Elem>,
    /// `coords[t]` is the Γ-expansion of the monomial `x^t`.
    coords: Vec<Vec<Elem>>,
    expansion: Option<Vec<Elem>>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest == 1 {
        Some((p as u32, e))
    } else {
        None
    }
}

fn digits_of(mut v: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = v % p;
        v /= p;
    }
    out
}

fn value_of(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `a` modulo the monic polynomial `b` over `F_p` (constant term first).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    let p64 = p as u64;
    while r.len() > db {
        let lead = r[r.len() - 1] % p64;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                let sub = lead * c as u64 % p64;
                r[shift + i] = (r[shift + i] + p64 - sub) % p64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    // trial division by every monic polynomial of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut cand = digits_of(low as u32, p, d);
            cand.push(1);
            if poly_rem(modulus, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Inverse of a square matrix over `F_p`, or `None` when singular.
fn invert_mod_p(mat: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = mat.len();
    let p64 = p as u64;
    let mut a: Vec<Vec<u64>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u64> = row.iter().map(|&c| c as u64).collect();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let inv_mod = |x: u64| -> u64 {
        let mut result = 1u64;
        let mut base = x % p64;
        let mut exp = p64 - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % p64;
            }
            base = base * base % p64;
            exp >>= 1;
        }
        result
    };
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        let iv = if p == 2 { 1 } else { inv_mod(a[col][col]) };
        for c in a[col].iter_mut() {
            *c = *c * iv % p64;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..2 * n {
                    let sub = f * a[col][c] % p64;
                    a[r][c] = (a[r][c] + p64 - sub) % p64;
                }
            }
        }
    }
    Some(
        a.into_iter()
            .map(|row| row[n..].iter().map(|&c| c as u32).collect())
            .collect(),
    )
}

impl FieldCtx {
    /// Builds the tower with the default cap on the field size.
    pub fn new(p: u32, e: u32, m: u32, modulus: Option<&[u32]>) -> Result<Self> {
        Self::with_cap(p, e, m, modulus, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u32, e: u32, m: u32, modulus: Option<&[u32]>, cap: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 || m == 0 {
            return Err(Error::InvalidArgs("e and m must be positive".into()));
        }
        let degree = e.checked_mul(m).ok_or(Error::FieldTooLarge {
            size: u128::MAX,
            cap,
        })?;
        let size = (p as u128).checked_pow(degree).unwrap_or(u128::MAX);
        if size > cap as u128 || size > u32::MAX as u128 {
            return Err(Error::FieldTooLarge { size, cap });
        }
        let size = size as u32;
        let degree = degree as usize;
        match modulus {
            Some(coeffs) => {
                if coeffs.len() != degree + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected degree {degree}, got {} coefficients",
                        coeffs.len()
                    )));
                }
                if coeffs.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus("coefficient out of range".into()));
                }
                if coeffs[degree] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if coeffs[0] == 0 {
                    return Err(Error::InvalidModulus("constant term must be nonzero".into()));
                }
                if !is_irreducible(coeffs, p) {
                    return Err(Error::Reducible { p });
                }
                Self::from_modulus(p, e, m, size, coeffs.to_vec())?
                    .ok_or(Error::NotPrimitiveModulus)
            }
            None => {
                // lexicographically first primitive polynomial, ordered by Σ c_i p^i
                // over the non-leading coefficients
                for low in 0..size {
                    let mut coeffs = digits_of(low, p, degree);
                    if coeffs[0] == 0 {
                        continue;
                    }
                    coeffs.push(1);
                    if let Some(ctx) = Self::from_modulus(p, e, m, size, coeffs)? {
                        return Ok(ctx);
                    }
                }
                Err(Error::InternalInconsistency(
                    "no primitive polynomial found".into(),
                ))
            }
        }
    }

    /// Builds tables for `modulus`; `None` when `x` is not primitive.
    fn from_modulus(p: u32, e: u32, m: u32, size: u32, modulus: Vec<u32>) -> Result<Option<Self>> {
        let degree = modulus.len() - 1;
        let order = size - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![NO_LOG; size as usize];
        let mut cur = 1u32;
        for i in 0..order {
            if log[cur as usize] != NO_LOG || cur == 0 {
                return Ok(None);
            }
            exp[i as usize] = cur;
            log[cur as usize] = i;
            // multiply by x
            let mut d = digits_of(cur, p, degree);
            let top = d[degree - 1];
            d.rotate_right(1);
            d[0] = 0;
            if top != 0 {
                for (i, c) in d.iter_mut().enumerate() {
                    let sub = (top as u64 * modulus[i] as u64 % p as u64) as u32;
                    *c = (*c + p - sub) % p;
                }
            }
            cur = value_of(&d, p);
        }
        if cur != 1 {
            return Ok(None);
        }
        for i in 0..order as usize {
            exp[i + order as usize] = exp[i];
        }
        let mut zech = Vec::new();
        if p != 2 {
            zech = vec![NO_LOG; order as usize];
            for (i, z) in zech.iter_mut().enumerate() {
                let x = exp[i];
                // add one to the constant coefficient
                let y = if x % p == p - 1 { x - (p - 1) } else { x + 1 };
                if y != 0 {
                    *z = log[y as usize];
                }
            }
        }
        let q = p.pow(e);
        let stride = order / (q - 1);
        let mut subfield: Vec<Elem> = std::iter::once(Elem::ZERO)
            .chain((0..q - 1).map(|i| Elem(exp[(i * stride) as usize])))
            .collect();
        subfield.sort();
        let mut in_subfield = vec![false; size as usize];
        for s in &subfield {
            in_subfield[s.0 as usize] = true;
        }
        let mut ctx = FieldCtx {
            p,
            e,
            m,
            q,
            size,
            modulus,
            exp,
            log,
            zech,
            stride,
            subfield,
            in_subfield,
            gamma: Vec::new(),
            coords: Vec::new(),
            expansion: None,
        };
        let g = ctx.generator();
        let gamma: Vec<Elem> = (0..m as u64).map(|i| ctx.pow(g, i)).collect();
        ctx.install_gamma(gamma)?;
        Ok(Some(ctx))
    }

    /// Returns a copy of this context using `gamma` as the ordered `F_q`-basis.
    pub fn with_gamma(&self, gamma: Vec<Elem>) -> Result<Self> {
        let mut ctx = self.clone();
        ctx.install_gamma(gamma)?;
        Ok(ctx)
    }

    fn install_gamma(&mut self, gamma: Vec<Elem>) -> Result<()> {
        let m = self.m as usize;
        let e = self.e as usize;
        let degree = m * e;
        if gamma.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "basis needs {m} elements, got {}",
                gamma.len()
            )));
        }
        if gamma.iter().any(|g| g.0 >= self.size) {
            return Err(Error::InvalidArgs("basis element out of range".into()));
        }
        let omega = Elem(self.exp[self.stride as usize % (self.size as usize - 1)]);
        let betas: Vec<Elem> = (0..e as u64).map(|a| self.pow(omega, a)).collect();
        // column j*e + a holds the F_p-digits of β_a γ_j
        let mut mat = vec![vec![0u32; degree]; degree];
        for (j, &g) in gamma.iter().enumerate() {
            for (a, &b) in betas.iter().enumerate() {
                let d = digits_of(self.mul(b, g).0, self.p, degree);
                for (row, &c) in d.iter().enumerate() {
                    mat[row][j * e + a] = c;
                }
            }
        }
        let inv = invert_mod_p(&mat, self.p).ok_or(Error::DependentBasis)?;
        let coords: Vec<Vec<Elem>> = (0..degree)
            .map(|t| {
                (0..m)
                    .map(|j| {
                        (0..e).fold(Elem::ZERO, |acc, a| {
                            let y = inv[j * e + a][t];
                            self.add(acc, self.mul(Elem(y), betas[a]))
                        })
                    })
                    .collect()
            })
            .collect();
        self.gamma = gamma;
        self.coords = coords;
        self.expansion = None;
        if self.size as u64 * self.m as u64 <= EXPANSION_TABLE_CAP {
            let mut table = vec![Elem::ZERO; self.size as usize * m];
            let mut pw = vec![1u32; degree];
            for t in 1..degree {
                pw[t] = pw[t - 1] * self.p;
            }
            for x in 1..self.size {
                // x = (x - p^t) + p^t with t the lowest nonzero digit
                let mut t = 0;
                while (x / pw[t]).is_multiple_of(self.p) {
                    t += 1;
                }
                let prev = (x - pw[t]) as usize;
                for j in 0..m {
                    let v = self.add(table[prev * m + j], self.coords[t][j]);
                    table[x as usize * m + j] = v;
                }
            }
            self.expansion = Some(table);
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn m(&self) -> usize {
        self.m as usize
    }
    /// Size of the subfield `F_q`.
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Size of the top field `F_{q^m}`.
    pub fn size(&self) -> u32 {
        self.size
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// `(q^m - 1)/(q - 1)`, the exponent step locating `F_q^*` in `F_{q^m}^*`.
    pub fn subfield_stride(&self) -> u32 {
        self.stride
    }
    pub fn gamma(&self) -> &[Elem] {
        &self.gamma
    }
    /// Elements of `F_q`, sorted by encoding.
    pub fn subfield(&self) -> &[Elem] {
        &self.subfield
    }
    pub fn in_subfield(&self, x: Elem) -> bool {
        self.in_subfield[x.0 as usize]
    }
    pub fn is_valid(&self, x: Elem) -> bool {
        x.0 < self.size
    }

    pub fn spec(&self) -> FieldSpec {
        let g = self.generator();
        let default_gamma: Vec<Elem> = (0..self.m as u64).map(|i| self.pow(g, i)).collect();
        FieldSpec {
            p: self.p,
            e: self.e,
            m: self.m,
            modulus: self.modulus.clone(),
            gamma: (self.gamma != default_gamma).then(|| self.gamma.clone()),
        }
    }

    /// The primitive element `g`, the class of `x`.
    pub fn generator(&self) -> Elem {
        Elem(self.exp[1 % (self.size as usize - 1).max(1)])
    }

    /// `g^i` for any integer exponent.
    pub fn gpow(&self, i: i64) -> Elem {
        let order = self.size as i64 - 1;
        Elem(self.exp[i.rem_euclid(order) as usize])
    }

    /// Discrete log with respect to `g`; `None` for zero.
    pub fn log(&self, x: Elem) -> Option<u32> {
        (!x.is_zero()).then(|| self.log[x.0 as usize])
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let order = self.size - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + order - la };
        let z = self.zech[d as usize];
        if z == NO_LOG {
            Elem::ZERO
        } else {
            Elem(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        let half = (self.size - 1) / 2;
        Elem(self.exp[(self.log[a.0 as usize] + half) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let order = self.size - 1;
        let l = self.log[a.0 as usize];
        Elem(self.exp[((order - l) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, x: Elem, mut n: u64) -> Elem {
        let mut base = x;
        let mut acc = Elem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// `x ↦ x^q`.
    pub fn frobenius(&self, x: Elem) -> Elem {
        self.pow(x, self.q as u64)
    }

    /// Coordinates of `x` in the basis Γ, each an element of `F_q`.
    pub fn expand(&self, x: Elem) -> Vec<Elem> {
        let m = self.m as usize;
        if let Some(t) = &self.expansion {
            let i = x.0 as usize * m;
            return t[i..i + m].to_vec();
        }
        let degree = (self.e * self.m) as usize;
        let digits = digits_of(x.0, self.p, degree);
        let mut out = vec![Elem::ZERO; m];
        for (t, &d) in digits.iter().enumerate() {
            if d != 0 {
                for j in 0..m {
                    out[j] = self.add(out[j], self.mul(Elem(d), self.coords[t][j]));
                }
            }
        }
        out
    }

    /// Writes the Γ-coordinates of `x` into `out`.
    pub fn expand_into(&self, x: Elem, out: &mut [Elem]) {
        let m = self.m as usize;
        if let Some(t) = &self.expansion {
            let i = x.0 as usize * m;
            out[..m].copy_from_slice(&t[i..i + m]);
        } else {
            out[..m].copy_from_slice(&self.expand(x));
        }
    }

    /// `Σ_j c_j γ_j`.
    pub fn reconstruct(&self, coeffs: &[Elem]) -> Elem {
        coeffs
            .iter()
            .zip(&self.gamma)
            .fold(Elem::ZERO, |acc, (&c, &g)| self.add(acc, self.mul(c, g)))
    }

    /// The `n × m` matrix `Γ(v)` over `F_q`.
    pub fn gamma_expand(&self, v: &[Elem]) -> Vec<Vec<Elem>> {
        v.iter().map(|&x| self.expand(x)).collect()
    }

    /// Parses `"0"`, `"g^i"` or a decimal encoding.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if let Some(exp) = s.strip_prefix("g^") {
            let i: i64 = exp
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            return Ok(self.gpow(i));
        }
        if s == "g" {
            return Ok(self.generator());
        }
        let v: u64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad element {s:?}")))?;
        self.elem_from_u64(v)
    }

    pub fn elem_from_u64(&self, v: u64) -> Result<Elem> {
        if v >= self.size as u64 {
            return Err(Error::Parse(format!(
                "element {v} out of range for a field of size {}",
                self.size
            )));
        }
        Ok(Elem(v as u32))
    }

    /// Human notation: `0` or `g^i`.
    pub fn format_elem(&self, x: Elem) -> String {
        match self.log(x) {
            None => "0".to_string(),
            Some(l) => format!("g^{l}"),
        }
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.e == other.e
            && self.m == other.m
            && self.modulus == other.modulus
            && self.gamma == other.gamma
    }
}

impl Eq for FieldCtx {}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ETA_MODULUS: [u32; 13] = [1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1];

    #[test]
    fn f8_with_given_modulus() {
        let ctx = FieldCtx::new(2, 1, 3, Some(&[1, 1, 0, 1])).unwrap();
        let a = ctx.generator();
        assert_eq!(a, Elem(2));
        assert_eq!(ctx.gamma(), &[Elem(1), Elem(2), Elem(4)]);
        // α^3 = α + 1
        assert_eq!(ctx.pow(a, 3), ctx.add(a, Elem::ONE));
    }

    #[test]
    fn default_modulus_is_lexicographic_first_primitive() {
        assert_eq!(FieldCtx::new(2, 1, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldCtx::new(2, 1, 4, None).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(FieldCtx::new(2, 1, 2, None).unwrap().modulus(), &[1, 1, 1]);
        // x + 1 over F_3 has root 2, a primitive root mod 3
        assert_eq!(FieldCtx::new(3, 1, 1, None).unwrap().modulus(), &[1, 1]);
    }

    #[test]
    fn f4096_tower_over_f16() {
        let ctx = FieldCtx::new(2, 4, 3, Some(&ETA_MODULUS)).unwrap();
        assert_eq!(ctx.q(), 16);
        assert_eq!(ctx.subfield_stride(), 273);
        let lambda = ctx.gpow(273);
        let l4 = ctx.pow(lambda, 4);
        assert_eq!(ctx.add(ctx.add(l4, lambda), Elem::ONE), Elem::ZERO);
        assert!(ctx.in_subfield(lambda));
        assert_eq!(ctx.subfield().len(), 16);
    }

    #[test]
    fn frobenius_small_cases() {
        let ctx = FieldCtx::new(2, 1, 3, Some(&[1, 1, 0, 1])).unwrap();
        assert_eq!(ctx.frobenius(Elem::ZERO), Elem::ZERO);
        let a = ctx.generator();
        assert_eq!(ctx.frobenius(a), ctx.mul(a, a));
    }

    #[test]
    fn frobenius_fixes_exactly_the_subfield() {
        let ctx = FieldCtx::new(2, 4, 3, Some(&ETA_MODULUS)).unwrap();
        let fixed: Vec<Elem> = (0..ctx.size())
            .map(Elem)
            .filter(|&x| ctx.frobenius(x) == x)
            .collect();
        assert_eq!(fixed.len(), 16);
        assert_eq!(fixed, ctx.subfield());
    }

    #[test]
    fn gamma_expand_examples() {
        let ctx = FieldCtx::new(2, 1, 3, Some(&[1, 1, 0, 1])).unwrap();
        let a = ctx.generator();
        let rows = ctx.gamma_expand(&[Elem::ONE, a]);
        assert_eq!(rows, vec![vec![Elem(1), Elem(0), Elem(0)], vec![Elem(0), Elem(1), Elem(0)]]);
        let a2 = ctx.mul(a, a);
        let rows = ctx.gamma_expand(&[Elem::ZERO, Elem::ONE, a, a2]);
        assert_eq!(rows[0], vec![Elem(0); 3]);
        assert_eq!(rows[3], vec![Elem(0), Elem(0), Elem(1)]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 1, 2, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(
            FieldCtx::new(2, 1, 2, Some(&[1, 0, 1])).unwrap_err(),
            Error::Reducible { p: 2 }
        );
        // x^4+x^3+x^2+x+1 is irreducible with x of order 5
        assert_eq!(
            FieldCtx::new(2, 1, 4, Some(&[1, 1, 1, 1, 1])).unwrap_err(),
            Error::NotPrimitiveModulus
        );
        assert!(matches!(
            FieldCtx::new(2, 1, 21, None).unwrap_err(),
            Error::FieldTooLarge { .. }
        ));
        assert!(matches!(
            FieldCtx::new(2, 1, 3, Some(&[0, 1, 0, 1])).unwrap_err(),
            Error::InvalidModulus(_)
        ));
    }

    #[test]
    fn dependent_gamma_rejected() {
        let ctx = FieldCtx::new(2, 1, 3, None).unwrap();
        assert_eq!(
            ctx.with_gamma(vec![Elem(1), Elem(2), Elem(3)]).unwrap_err(),
            Error::DependentBasis
        );
        assert!(ctx.with_gamma(vec![Elem(3), Elem(5), Elem(7)]).is_ok());
    }

    #[test]
    fn expand_reconstruct_round_trip_exhaustive() {
        let fields = [
            FieldCtx::new(2, 2, 4, None).unwrap(),
            FieldCtx::new(3, 1, 5, None).unwrap(),
            FieldCtx::new(3, 2, 2, None).unwrap(),
            FieldCtx::new(2, 4, 3, Some(&ETA_MODULUS)).unwrap(),
            FieldCtx::new(5, 1, 3, None).unwrap(),
            FieldCtx::new(2, 1, 16, None).unwrap(),
        ];
        for ctx in &fields {
            for x in (0..ctx.size()).map(Elem) {
                let c = ctx.expand(x);
                assert!(c.iter().all(|&y| ctx.in_subfield(y)));
                assert_eq!(ctx.reconstruct(&c), x);
            }
        }
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ctx in [
            FieldCtx::new(3, 2, 3, None).unwrap(),
            FieldCtx::new(2, 4, 3, Some(&ETA_MODULUS)).unwrap(),
        ] {
            for _ in 0..10_000 {
                let x = Elem(rng.gen_range(0..ctx.size()));
                let y = Elem(rng.gen_range(0..ctx.size()));
                assert_eq!(
                    ctx.frobenius(ctx.add(x, y)),
                    ctx.add(ctx.frobenius(x), ctx.frobenius(y))
                );
                assert_eq!(
                    ctx.frobenius(ctx.mul(x, y)),
                    ctx.mul(ctx.frobenius(x), ctx.frobenius(y))
                );
            }
        }
    }

    #[test]
    fn subfield_is_closed() {
        let ctx = FieldCtx::new(3, 2, 2, None).unwrap();
        assert_eq!(ctx.subfield().len(), 9);
        for &a in ctx.subfield() {
            assert_eq!(ctx.frobenius(a), a);
            for &b in ctx.subfield() {
                assert!(ctx.in_subfield(ctx.add(a, b)));
                assert!(ctx.in_subfield(ctx.mul(a, b)));
            }
        }
    }

    #[test]
    fn odd_characteristic_arithmetic_matches_digits() {
        let ctx = FieldCtx::new(3, 1, 3, None).unwrap();
        for a in 0..27u32 {
            for b in 0..27u32 {
                let da = digits_of(a, 3, 3);
                let db = digits_of(b, 3, 3);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(ctx.add(Elem(a), Elem(b)), Elem(value_of(&sum, 3)));
                assert_eq!(ctx.sub(ctx.add(Elem(a), Elem(b)), Elem(b)), Elem(a));
            }
            if a != 0 {
                assert_eq!(ctx.mul(Elem(a), ctx.inv(Elem(a))), Elem::ONE);
            }
        }
    }

    #[test]
    fn parse_and_format() {
        let ctx = FieldCtx::new(2, 1, 3, None).unwrap();
        assert_eq!(ctx.parse_elem("0").unwrap(), Elem::ZERO);
        assert_eq!(ctx.parse_elem("g^1").unwrap(), Elem(2));
        assert_eq!(ctx.parse_elem("g^7").unwrap(), Elem::ONE);
        assert_eq!(ctx.parse_elem("5").unwrap(), Elem(5));
        assert!(ctx.parse_elem("8").is_err());
        assert_eq!(ctx.format_elem(Elem(4)), "g^2");
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
