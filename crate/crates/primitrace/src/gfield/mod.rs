//! Polynomial-basis finite field contexts GF(p^(s*n)) viewed as degree-n
//! extensions of GF(q), q = p^s: arithmetic, frobenius, relative traces,
//! subfield enumeration, primitivity, and optional exp/log tables.

mod poly;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numtheory::{self, Factorization};

/// Resource knobs for building and using a context.
#[derive(Debug, Clone)]
pub struct ContextConfig {
    /// Build exp/dlog/frobenius tables when the field has at most this many elements.
    pub table_ceiling: u64,
    /// Allow full-field or full-subfield enumeration up to this many elements.
    pub enumeration_ceiling: u64,
    /// Rho iteration budget for factoring the multiplicative group order.
    pub rho_budget: u64,
    /// Refuse to build fields larger than 2^max_field_bits elements.
    pub max_field_bits: u64,
}

impl Default for ContextConfig {
    fn default() -> Self {
        ContextConfig {
            table_ceiling: 1 << 22,
            enumeration_ceiling: 1 << 22,
            rho_budget: numtheory::DEFAULT_RHO_BUDGET,
            max_field_bits: 192,
        }
    }
}

/// An element of a fixed context, as a coefficient vector of length m
/// (constant term first) in the polynomial basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    /// Coefficients over GF(p), constant term first, always length m.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Exp/dlog/frobenius tables over element encodings (base-p integers).
pub(crate) struct Tables {
    /// Multiplicative group order as u64.
    pub ord: u64,
    /// exp[k] = encoding of g^k, k in 0..ord.
    pub exp: Vec<u64>,
    /// dlog[enc] = k with g^k = element, dlog[0] = u64::MAX.
    pub dlog: Vec<u64>,
}

/// A finite field GF(p^m) presented as GF(q^n), q = p^s, with the
/// lexicographically smallest monic irreducible defining polynomial.
pub struct FieldContext {
    p: u64,
    s: u32,
    n: u64,
    m: usize,
    q_big: BigUint,
    q_u64: Option<u64>,
    size: BigUint,
    order: BigUint,
    defining_poly: Vec<u64>,
    /// p-power frobenius matrix, column i = coeffs of (x^i)^p mod f.
    frob_p_cols: Vec<Vec<u64>>,
    /// q-power frobenius matrix (= p-power matrix composed s times).
    frob_q_cols: Vec<Vec<u64>>,
    order_factorization: Factorization,
    tables: Option<Tables>,
    config: ContextConfig,
}

impl FieldContext {
    /// Build GF(p^(s*n)) as a degree-n extension of GF(p^s) with defaults.
    pub fn build(p: u64, s: u32, n: u64) -> Result<FieldContext> {
        Self::build_with(p, s, n, ContextConfig::default())
    }

    /// Build with explicit resource limits.
    pub fn build_with(p: u64, s: u32, n: u64, config: ContextConfig) -> Result<FieldContext> {
        if !numtheory::is_prime_u64(p) {
            return Err(Error::NotPrime(BigUint::from(p)));
        }
        if s == 0 || n == 0 {
            return Err(Error::InvalidInput("need s >= 1 and n >= 1".into()));
        }
        let m_u64 = s as u64 * n;
        let bits = m_u64 as f64 * (p as f64).log2();
        if bits > config.max_field_bits as f64 {
            return Err(Error::ResourceLimit {
                what: format!(
                    "building GF({p}^{m_u64}) (~2^{bits:.0} elements exceeds the 2^{} cap)",
                    config.max_field_bits
                ),
                partial: None,
            });
        }
        let m = m_u64 as usize;
        let q_big = BigUint::from(p).pow(s);
        let q_u64 = q_big.to_u64();
        let size = BigUint::from(p).pow(m as u32);
        let order = &size - 1u32;
        let defining_poly = poly::smallest_irreducible(p, m);

        // Column i of the p-power matrix is (x^i)^p = (x^p)^i mod f.
        let xp = poly::powmod(p, &vec![0, 1], p, &defining_poly);
        let mut frob_p_cols = Vec::with_capacity(m);
        let mut cur: Vec<u64> = vec![1];
        for _ in 0..m {
            let mut col = cur.clone();
            col.resize(m, 0);
            frob_p_cols.push(col);
            cur = poly::mulmod(p, &cur, &xp, &defining_poly);
        }
        let mut frob_q_cols = identity_cols(m);
        for _ in 0..s {
            frob_q_cols = mat_mul(p, &frob_p_cols, &frob_q_cols);
        }

        let order_factorization = numtheory::factor_power_minus_one(&q_big, n, config.rho_budget)?;

        let mut ctx = FieldContext {
            p,
            s,
            n,
            m,
            q_big,
            q_u64,
            size,
            order,
            defining_poly,
            frob_p_cols,
            frob_q_cols,
            order_factorization,
            tables: None,
            config,
        };
        if ctx.size.to_u64().is_some_and(|sz| sz <= ctx.config.table_ceiling) {
            ctx.tables = Some(ctx.build_tables()?);
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Extension degree over GF(q).
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Absolute degree over GF(p).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> &BigUint {
        &self.q_big
    }

    pub fn q_u64(&self) -> Option<u64> {
        self.q_u64
    }

    /// Number of field elements p^m.
    pub fn size(&self) -> &BigUint {
        &self.size
    }

    /// Multiplicative group order p^m - 1.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_factorization(&self) -> &Factorization {
        &self.order_factorization
    }

    /// Monic defining polynomial, constant term first, length m + 1.
    pub fn defining_poly(&self) -> &[u64] {
        &self.defining_poly
    }

    pub fn config(&self) -> &ContextConfig {
        &self.config
    }

    /// Human-readable field description.
    pub fn descriptor(&self) -> String {
        format!(
            "GF({}^{}) as degree-{} extension of GF({}), f = {}",
            self.p,
            self.m,
            self.n,
            self.q_big,
            poly_string(&self.defining_poly)
        )
    }

    // ----- element construction -----

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.m],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    /// Element from coefficients (constant first); shorter vectors are padded.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.m {
            return Err(Error::InvalidInput(format!(
                "coefficient vector of length {} exceeds field degree {}",
                coeffs.len(),
                self.m
            )));
        }
        if let Some(bad) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidInput(format!(
                "coefficient {bad} is not reduced modulo p = {}",
                self.p
            )));
        }
        let mut c = coeffs.to_vec();
        c.resize(self.m, 0);
        Ok(FieldElement { coeffs: c })
    }

    /// Element whose base-p digit expansion is the given encoding.
    pub fn element_from_encoding(&self, enc: &BigUint) -> Result<FieldElement> {
        if enc >= &self.size {
            return Err(Error::InvalidInput(format!(
                "encoding {enc} out of range for a field of size {}",
                self.size
            )));
        }
        let mut coeffs = Vec::with_capacity(self.m);
        let p = BigUint::from(self.p);
        let mut rest = enc.clone();
        for _ in 0..self.m {
            let (div, rem) = rest.div_rem(&p);
            coeffs.push(rem.to_u64().unwrap());
            rest = div;
        }
        Ok(FieldElement { coeffs })
    }

    /// Base-p integer encoding of an element.
    pub fn encoding(&self, x: &FieldElement) -> BigUint {
        let p = BigUint::from(self.p);
        let mut acc = BigUint::zero();
        for &c in x.coeffs.iter().rev() {
            acc = acc * &p + c;
        }
        acc
    }

    pub(crate) fn enc_u64(&self, x: &FieldElement) -> u64 {
        debug_assert!(self.size.to_u64().is_some());
        let mut acc = 0u64;
        for &c in x.coeffs.iter().rev() {
            acc = acc * self.p + c;
        }
        acc
    }

    pub(crate) fn dec_u64(&self, mut enc: u64) -> FieldElement {
        let mut coeffs = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            coeffs.push(enc % self.p);
            enc /= self.p;
        }
        FieldElement { coeffs }
    }

    // ----- arithmetic -----

    fn check_len(&self, x: &FieldElement) {
        debug_assert_eq!(x.coeffs.len(), self.m, "element from a different context");
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check_len(a);
        self.check_len(b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            })
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.check_len(a);
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| if x == 0 { 0 } else { self.p - x })
            .collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check_len(a);
        self.check_len(b);
        let mut c = poly::mulmod(self.p, &a.coeffs, &b.coeffs, &self.defining_poly);
        c.resize(self.m, 0);
        FieldElement { coeffs: c }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check_len(a);
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut c = poly::invmod(self.p, &a.coeffs, &self.defining_poly)
            .expect("nonzero element of a field must be invertible");
        c.resize(self.m, 0);
        Ok(FieldElement { coeffs: c })
    }

    pub fn pow_u64(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut bits = e.clone();
        while !bits.is_zero() {
            if bits.is_odd() {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            bits >>= 1;
        }
        acc
    }

    // ----- frobenius and traces -----

    fn apply_cols(&self, cols: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u128; self.m];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (j, &cij) in cols[i].iter().enumerate() {
                acc[j] += vi as u128 * cij as u128;
            }
        }
        acc.into_iter().map(|c| (c % self.p as u128) as u64).collect()
    }

    /// x^(q^j).
    pub fn frobenius(&self, x: &FieldElement, j: u64) -> FieldElement {
        self.check_len(x);
        let j = j % self.n;
        // Table path: exponent arithmetic on discrete logs.
        if let (Some(t), false) = (self.tables.as_ref(), x.is_zero()) {
            let ord = t.ord;
            let k = t.dlog[self.enc_u64(x) as usize];
            let qj = numtheory::powmod_u64(self.q_u64.unwrap() % ord, j, ord);
            return self.dec_u64(t.exp[numtheory::mulmod_u64(k, qj, ord) as usize]);
        }
        let mut v = x.coeffs.clone();
        for _ in 0..j {
            v = self.apply_cols(&self.frob_q_cols, &v);
        }
        FieldElement { coeffs: v }
    }

    /// Relative trace from GF(q^n) onto GF(q^d), for d dividing n.
    pub fn trace(&self, x: &FieldElement, d: u64) -> Result<FieldElement> {
        self.check_len(x);
        if d == 0 || self.n % d != 0 {
            return Err(Error::NotADivisor { d, n: self.n });
        }
        let mut acc = x.coeffs.clone();
        let mut y = x.coeffs.clone();
        for _ in 1..(self.n / d) {
            for _ in 0..d {
                y = self.apply_cols(&self.frob_q_cols, &y);
            }
            for (a, &b) in acc.iter_mut().zip(&y) {
                *a = (*a + b) % self.p;
            }
        }
        Ok(FieldElement { coeffs: acc })
    }

    /// Absolute trace down to GF(p), as a scalar in 0..p.
    pub fn absolute_trace(&self, x: &FieldElement) -> u64 {
        self.check_len(x);
        let mut acc = x.coeffs.clone();
        let mut y = x.coeffs.clone();
        for _ in 1..self.m {
            y = self.apply_cols(&self.frob_p_cols, &y);
            for (a, &b) in acc.iter_mut().zip(&y) {
                *a = (*a + b) % self.p;
            }
        }
        debug_assert!(
            acc[1..].iter().all(|&c| c == 0),
            "absolute trace must land in the prime field"
        );
        acc[0]
    }

    /// Does x lie in the subfield GF(q^d)? (d must divide n.)
    pub fn in_subfield(&self, x: &FieldElement, d: u64) -> Result<bool> {
        self.check_len(x);
        if d == 0 || self.n % d != 0 {
            return Err(Error::NotADivisor { d, n: self.n });
        }
        Ok(self.frobenius(x, d) == *x)
    }

    /// All elements of the subfield GF(q^d), sorted by encoding. Computed as
    /// the kernel of (Frobenius^d - identity) over GF(p), so the parent field
    /// is never scanned.
    pub fn subfield_elements(&self, d: u64) -> Result<Vec<FieldElement>> {
        if d == 0 || self.n % d != 0 {
            return Err(Error::NotADivisor { d, n: self.n });
        }
        let sub_size = self.q_big.pow(d as u32);
        if sub_size.to_u64().map_or(true, |sz| sz > self.config.enumeration_ceiling) {
            return Err(Error::ResourceLimit {
                what: format!("enumerating a subfield of size {sub_size}"),
                partial: None,
            });
        }
        let sub_size = sub_size.to_u64().unwrap();
        // A = frobenius^d as a matrix over GF(p).
        let a = mat_pow(self.p, &self.frob_q_cols, d, self.m);
        let basis = kernel_minus_identity(self.p, &a, self.m);
        debug_assert_eq!(
            (self.p as u128).pow(basis.len() as u32),
            sub_size as u128,
            "kernel dimension must match the subfield size"
        );
        let mut out = Vec::with_capacity(sub_size as usize);
        let t = basis.len();
        for idx in 0..sub_size {
            let mut v = vec![0u64; self.m];
            let mut rest = idx;
            for b in basis.iter().take(t) {
                let digit = rest % self.p;
                rest /= self.p;
                if digit != 0 {
                    for (vi, &bi) in v.iter_mut().zip(b) {
                        *vi = (*vi + digit * bi) % self.p;
                    }
                }
            }
            out.push(FieldElement { coeffs: v });
        }
        out.sort_by(|x, y| x.coeffs.iter().rev().cmp(y.coeffs.iter().rev()));
        debug_assert!(out.windows(2).all(|w| w[0] != w[1]));
        Ok(out)
    }

    // ----- primitivity and enumeration -----

    /// True iff x generates the multiplicative group: x != 0 and
    /// x^((q^n-1)/r) != 1 for every prime r dividing q^n - 1.
    pub fn is_primitive(&self, x: &FieldElement) -> bool {
        self.check_len(x);
        if x.is_zero() {
            return false;
        }
        let one = self.one();
        for (r, _) in self.order_factorization.factors() {
            let e = &self.order / r;
            if self.pow(x, &e) == one {
                return false;
            }
        }
        true
    }

    /// Table-path primitivity on encodings (gcd test on the discrete log).
    pub(crate) fn is_primitive_enc(&self, enc: u64) -> bool {
        let t = self.tables.as_ref().expect("tables required");
        if enc == 0 {
            return false;
        }
        let k = t.dlog[enc as usize];
        k.gcd(&t.ord) == 1
    }

    /// Iterate every field element in encoding order (0, 1, 2, ...).
    pub fn enumerate(&self) -> Result<impl Iterator<Item = FieldElement> + '_> {
        let sz = self.size.to_u64().filter(|&sz| sz <= self.config.enumeration_ceiling);
        match sz {
            Some(sz) => Ok((0..sz).map(move |e| self.dec_u64(e))),
            None => Err(Error::ResourceLimit {
                what: format!("enumerating a field of size {}", self.size),
                partial: None,
            }),
        }
    }

    pub(crate) fn tables(&self) -> Option<&Tables> {
        self.tables.as_ref()
    }

    /// The tabulated generator g with exp[1] = g, when tables exist.
    pub fn generator(&self) -> Option<FieldElement> {
        self.tables.as_ref().map(|t| self.dec_u64(t.exp[1]))
    }

    fn build_tables(&self) -> Result<Tables> {
        let size = self.size.to_u64().unwrap();
        let ord = size - 1;
        // Smallest-encoding generator, found with the pow-based test.
        let mut gen = None;
        for enc in 1..size {
            let x = self.dec_u64(enc);
            if self.is_primitive(&x) {
                gen = Some(x);
                break;
            }
        }
        let g = gen.expect("a finite field always has a primitive element");
        let mut exp = vec![0u64; ord as usize];
        let mut dlog = vec![u64::MAX; size as usize];
        let mut cur = self.one();
        for (k, slot) in exp.iter_mut().enumerate() {
            let e = self.enc_u64(&cur);
            *slot = e;
            dlog[e as usize] = k as u64;
            cur = self.mul(&cur, &g);
        }
        debug_assert_eq!(cur, self.one(), "generator order must be exactly q^n - 1");
        Ok(Tables { ord, exp, dlog })
    }

    /// Encoded addition (used by table-driven sweeps).
    pub(crate) fn add_enc(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0u64;
        let mut mult = 1u64;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.m {
            let da = a % self.p;
            let db = b % self.p;
            a /= self.p;
            b /= self.p;
            let mut d = da + db;
            if d >= self.p {
                d -= self.p;
            }
            out += d * mult;
            mult *= self.p;
        }
        out
    }
}

fn identity_cols(m: usize) -> Vec<Vec<u64>> {
    (0..m)
        .map(|i| {
            let mut col = vec![0u64; m];
            col[i] = 1;
            col
        })
        .collect()
}

/// Compose two GF(p)-linear maps given by columns: (a . b)(v) = a(b(v)).
fn mat_mul(p: u64, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let m = a.len();
    b.iter()
        .map(|bcol| {
            let mut acc = vec![0u128; m];
            for (i, &bi) in bcol.iter().enumerate() {
                if bi == 0 {
                    continue;
                }
                for (j, &aij) in a[i].iter().enumerate() {
                    acc[j] += bi as u128 * aij as u128;
                }
            }
            acc.into_iter().map(|c| (c % p as u128) as u64).collect()
        })
        .collect()
}

fn mat_pow(p: u64, a: &[Vec<u64>], mut e: u64, m: usize) -> Vec<Vec<u64>> {
    let mut acc = identity_cols(m);
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(p, &base, &acc);
        }
        base = mat_mul(p, &base, &base);
        e >>= 1;
    }
    acc
}

/// Basis of ker(A - I) over GF(p), for A given in column form.
fn kernel_minus_identity(p: u64, a_cols: &[Vec<u64>], m: usize) -> Vec<Vec<u64>> {
    // Row-major matrix of A - I.
    let mut rows = vec![vec![0u64; m]; m];
    for (i, col) in a_cols.iter().enumerate() {
        for (j, &c) in col.iter().enumerate() {
            rows[j][i] = c;
        }
    }
    for i in 0..m {
        rows[i][i] = (rows[i][i] + p - 1) % p;
    }
    // Reduced row echelon form.
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..m {
        if let Some(sel) = (r..m).find(|&i| rows[i][c] != 0) {
            rows.swap(r, sel);
            let inv = poly::scalar_inv(p, rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = *x * inv % p;
            }
            for i in 0..m {
                if i != r && rows[i][c] != 0 {
                    let factor = rows[i][c];
                    for j in 0..m {
                        let sub = factor * rows[r][j] % p;
                        rows[i][j] = (rows[i][j] + p - sub) % p;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == m {
                break;
            }
        }
    }
    // Free columns give the kernel basis.
    let mut basis = Vec::new();
    for c in 0..m {
        if pivot_cols.contains(&c) {
            continue;
        }
        let mut v = vec![0u64; m];
        v[c] = 1;
        for (pr, &pc) in pivot_cols.iter().enumerate() {
            let coeff = rows[pr][c];
            if coeff != 0 {
                v[pc] = (p - coeff) % p;
            }
        }
        basis.push(v);
    }
    basis
}

fn poly_string(f: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_defining_poly_and_generator() {
        let ctx = FieldContext::build(2, 1, 3).unwrap();
        assert_eq!(ctx.defining_poly(), &[1, 1, 0, 1]); // x^3 + x + 1
        assert_eq!(ctx.size().to_u64().unwrap(), 8);
        // ord = 7 is prime, so the smallest non-unit encoding generates.
        let g = ctx.generator().unwrap();
        assert_eq!(ctx.encoding(&g).to_u64().unwrap(), 2);
        assert!(ctx.is_primitive(&g));
        assert!(!ctx.is_primitive(&ctx.one()));
        assert!(!ctx.is_primitive(&ctx.zero()));
    }

    #[test]
    fn gf4_absolute_traces_frozen() {
        // GF(4) with f = x^2 + x + 1: traces of 0,1,w,w+1 are 0,0,1,1.
        let ctx = FieldContext::build(2, 1, 2).unwrap();
        let traces: Vec<u64> = (0..4)
            .map(|e| ctx.absolute_trace(&ctx.dec_u64(e)))
            .collect();
        assert_eq!(traces, vec![0, 0, 1, 1]);
    }

    #[test]
    fn gf16_over_gf4_relative_trace() {
        // GF(16) = GF(4^2), f = x^4 + x + 1; Tr(x) = x + x^4 = 1.
        let ctx = FieldContext::build(2, 2, 2).unwrap();
        let x = ctx.from_coeffs(&[0, 1]).unwrap();
        let t = ctx.trace(&x, 1).unwrap();
        assert_eq!(t, ctx.one());
        assert!(ctx.in_subfield(&t, 1).unwrap());
        assert!(!ctx.in_subfield(&x, 1).unwrap());
    }

    #[test]
    fn trace_is_additive_and_onto() {
        let ctx = FieldContext::build(3, 1, 4).unwrap();
        // Additivity on all pairs in a subsample.
        for ea in (0..81u64).step_by(7) {
            for eb in (0..81u64).step_by(11) {
                let a = ctx.dec_u64(ea);
                let b = ctx.dec_u64(eb);
                let lhs = ctx.trace(&ctx.add(&a, &b), 2).unwrap();
                let rhs = ctx.add(&ctx.trace(&a, 2).unwrap(), &ctx.trace(&b, 2).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
        // Every target in GF(9) is hit exactly 9 times by the trace to d = 2.
        let mut counts = std::collections::HashMap::new();
        for e in 0..81u64 {
            let t = ctx.trace(&ctx.dec_u64(e), 2).unwrap();
            *counts.entry(ctx.enc_u64(&t)).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 9);
        assert!(counts.values().all(|&c| c == 9));
    }

    #[test]
    fn frobenius_fixes_exactly_the_subfield() {
        let ctx = FieldContext::build(2, 1, 6).unwrap();
        let sub2 = ctx.subfield_elements(2).unwrap();
        assert_eq!(sub2.len(), 4);
        let sub3 = ctx.subfield_elements(3).unwrap();
        assert_eq!(sub3.len(), 8);
        let sub1 = ctx.subfield_elements(1).unwrap();
        assert_eq!(sub1.len(), 2);
        for x in &sub2 {
            assert_eq!(ctx.frobenius(x, 2), *x);
            assert!(ctx.in_subfield(x, 2).unwrap());
        }
        // Count fixed points of frobenius^2 the slow way and compare.
        let fixed = ctx
            .enumerate()
            .unwrap()
            .filter(|x| ctx.frobenius(x, 2) == *x)
            .count();
        assert_eq!(fixed, 4);
        // Subfields are sorted by encoding and start with 0, 1.
        assert!(sub3[0].is_zero());
        assert_eq!(sub3[1], ctx.one());
    }

    #[test]
    fn primitive_count_matches_phi() {
        let ctx = FieldContext::build(2, 1, 6).unwrap();
        let count = ctx
            .enumerate()
            .unwrap()
            .filter(|x| ctx.is_primitive(x))
            .count() as u64;
        assert_eq!(count, crate::numtheory::euler_phi(63).unwrap());
        // Table fast path agrees with the pow-based definition.
        for e in 0..64u64 {
            assert_eq!(
                ctx.is_primitive_enc(e),
                ctx.is_primitive(&ctx.dec_u64(e)),
                "enc {e}"
            );
        }
    }

    #[test]
    fn arithmetic_roundtrips_gf81() {
        let ctx = FieldContext::build(3, 2, 2).unwrap(); // GF(81) over GF(9)
        for e in 1..81u64 {
            let x = ctx.dec_u64(e);
            let inv = ctx.inv(&x).unwrap();
            assert_eq!(ctx.mul(&x, &inv), ctx.one());
            // x^(q^n) = x.
            let qq = ctx.q().pow(2);
            assert_eq!(ctx.pow(&x, &qq), x);
        }
        assert!(ctx.inv(&ctx.zero()).is_err());
    }

    #[test]
    fn frobenius_composes() {
        let ctx = FieldContext::build(3, 1, 4).unwrap();
        for e in [1u64, 5, 17, 42, 80] {
            let x = ctx.dec_u64(e);
            for i in 0..4 {
                for j in 0..4 {
                    let a = ctx.frobenius(&ctx.frobenius(&x, i), j);
                    let b = ctx.frobenius(&x, i + j);
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn encoding_roundtrip_and_validation() {
        let ctx = FieldContext::build(5, 1, 3).unwrap();
        for e in 0..125u64 {
            let x = ctx.element_from_encoding(&BigUint::from(e)).unwrap();
            assert_eq!(ctx.encoding(&x).to_u64().unwrap(), e);
            assert_eq!(ctx.enc_u64(&x), e);
        }
        assert!(ctx.element_from_encoding(&BigUint::from(125u32)).is_err());
        assert!(ctx.from_coeffs(&[5]).is_err());
        assert!(ctx.from_coeffs(&[0, 0, 0, 1]).is_err());
    }

    #[test]
    fn add_enc_matches_element_addition() {
        for (p, s, n) in [(2u64, 1u32, 4u64), (3, 1, 3), (5, 1, 2)] {
            let ctx = FieldContext::build(p, s, n).unwrap();
            let sz = ctx.size().to_u64().unwrap();
            for a in 0..sz.min(40) {
                for b in 0..sz.min(40) {
                    let ea = ctx.dec_u64(a);
                    let eb = ctx.dec_u64(b);
                    assert_eq!(ctx.add_enc(a, b), ctx.enc_u64(&ctx.add(&ea, &eb)));
                }
            }
        }
    }

    #[test]
    fn medium_tableless_context_with_subfields() {
        // GF(2^35): too big for tables, but subfields work via kernels.
        let ctx = FieldContext::build(2, 1, 35).unwrap();
        assert!(ctx.tables().is_none());
        let sub5 = ctx.subfield_elements(5).unwrap();
        assert_eq!(sub5.len(), 32);
        let sub7 = ctx.subfield_elements(7).unwrap();
        assert_eq!(sub7.len(), 128);
        // GF(2^5) and GF(2^7) intersect in GF(2).
        let set5: std::collections::HashSet<_> =
            sub5.iter().map(|x| ctx.encoding(x)).collect();
        let common = sub7.iter().filter(|x| set5.contains(&ctx.encoding(x))).count();
        assert_eq!(common, 2);
        // Trace from GF(2^35) to GF(2^7) of a subfield element y is (35/7) y = 5y = y.
        let y = &sub7[5];
        let t = ctx.trace(y, 7).unwrap();
        assert_eq!(&t, y);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            FieldContext::build(6, 1, 2),
            Err(Error::NotPrime(_))
        ));
        assert!(FieldContext::build(2, 0, 2).is_err());
        assert!(FieldContext::build(2, 1, 0).is_err());
        assert!(matches!(
            FieldContext::build(2, 1, 500),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
