//! Character sums over finite fields: multiplicative and additive
//! characters, Gauss sums, indicator identities, and the exact counting
//! formula for primitive elements with prescribed traces.
//!
//! This module is verification-only.  Its floating-point results
//! cross-check the exact integer machinery; they never feed a verdict.

use std::cell::OnceCell;
use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gfield::{FieldContext, FieldElement};
use crate::numtheory;
use crate::tracelab::{self, enumerate_with_traces, TraceSpec};

/// A multiplicative character of exact order `t`, realized on the
/// discrete-log line as g^j -> e^(2 pi i j step / ord).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultChar {
    /// Exact order of the character.
    pub t: u64,
    /// Index u with gcd(u, t) = 1 selecting one of the phi(t) characters.
    pub index: u64,
    step: u64,
}

/// The additive character beta -> chi(c * beta).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddChar {
    c_enc: u64,
}

/// Result of the all-characters Gauss magnitude sweep.
#[derive(Clone, Copy, Debug)]
pub struct GaussSweepReport {
    /// Number of (eta, chi_c) pairs checked (eta nontrivial, c nonzero).
    pub checked: u64,
    /// Largest relative deviation of |G| from q^(n/2).
    pub max_rel_dev: f64,
    /// The reference magnitude q^(n/2).
    pub expected_magnitude: f64,
}

/// Full evaluation of the counting identity, with the boundary terms the
/// trivial character contributes under the eta(0) = 0 convention.
#[derive(Clone, Copy, Debug)]
pub struct CountFormulaReport {
    /// The count of primitive elements hitting the targets implied by the
    /// full character-sum expansion.
    pub n_implied: f64,
    /// The main term q^(n + D - lambda).
    pub main_term: f64,
    /// The cross term S: the portion with nontrivial eta and nonzero
    /// additive argument.
    pub s_term: Complex64,
    /// The full expansion q^D N / theta before any regrouping.
    pub full_sum: Complex64,
    /// full_sum - main_term - s_term.  Measured: -q^D when every target
    /// is zero (the trivial character's boundary term), 0 otherwise.
    pub residual: Complex64,
    /// theta = phi(q^n - 1) / (q^n - 1).
    pub theta: f64,
}

/// Both sides of the cross-term magnitude bound.
#[derive(Clone, Copy, Debug)]
pub struct SBoundReport {
    /// |S| as evaluated.
    pub s_abs: f64,
    /// The ceiling q^(n/2 + D) * W(q^n - 1).
    pub bound: f64,
    pub holds: bool,
}

/// Precomputed character data for one field context: discrete logs,
/// absolute traces, root-of-unity caches, and per-divisor trace
/// references.  Immutable after construction.
pub struct CharacterTable<'c> {
    ctx: &'c FieldContext,
    size: u64,
    ord: u64,
    theta: f64,
    exp: Vec<u64>,
    dlog: Vec<u64>,
    abs_trace: Vec<u64>,
    unity: Vec<Complex64>,
    unity_p: Vec<Complex64>,
    /// For each divisor d of n: the encodings of the subfield F_(q^d).
    sub_enc: BTreeMap<u64, Vec<u64>>,
    /// For each divisor d of n: target encoding -> encoding of the first
    /// element whose trace to degree d equals the target.
    trace_ref: BTreeMap<u64, HashMap<u64, u64>>,
    p_cache: OnceCell<Vec<Complex64>>,
    sum_cache: OnceCell<(Vec<Complex64>, Vec<Complex64>)>,
}

impl<'c> CharacterTable<'c> {
    /// Build the table.  Requires a context small enough to enumerate.
    pub fn new(ctx: &'c FieldContext) -> Result<CharacterTable<'c>> {
        let size = ctx.size().to_u64().ok_or_else(|| Error::ResourceLimit {
            what: "character table over an oversized field".into(),
            partial: None,
        })?;
        if size > ctx.config().enumeration_ceiling {
            return Err(Error::ResourceLimit {
                what: format!("character table over {size} elements"),
                partial: None,
            });
        }
        let tables = ctx.tables().ok_or_else(|| Error::ResourceLimit {
            what: "character table needs discrete logs".into(),
            partial: None,
        })?;
        let ord = tables.ord;
        let exp = tables.exp.clone();
        let dlog = tables.dlog.clone();
        let mut abs_trace = vec![0u64; size as usize];
        for enc in 0..size {
            abs_trace[enc as usize] = ctx.absolute_trace(&ctx.dec_u64(enc));
        }
        let unity = roots_of_unity(ord);
        let unity_p = roots_of_unity(ctx.p());
        let theta = numtheory::euler_phi(ord)? as f64 / ord as f64;
        let mut sub_enc = BTreeMap::new();
        let mut trace_ref = BTreeMap::new();
        for d in numtheory::divisors(ctx.n())? {
            let subs: Vec<u64> = ctx
                .subfield_elements(d)?
                .iter()
                .map(|x| ctx.enc_u64(x))
                .collect();
            let tr = tracelab::trace_table(ctx, d)?;
            let mut refs = HashMap::new();
            for (gamma, &a) in tr.iter().enumerate() {
                refs.entry(a).or_insert(gamma as u64);
            }
            sub_enc.insert(d, subs);
            trace_ref.insert(d, refs);
        }
        Ok(CharacterTable {
            ctx,
            size,
            ord,
            theta,
            exp,
            dlog,
            abs_trace,
            unity,
            unity_p,
            sub_enc,
            trace_ref,
            p_cache: OnceCell::new(),
            sum_cache: OnceCell::new(),
        })
    }

    pub fn ctx(&self) -> &FieldContext {
        self.ctx
    }

    /// Multiplicative group order q^n - 1.
    pub fn ord(&self) -> u64 {
        self.ord
    }

    /// theta = phi(q^n - 1) / (q^n - 1).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn mul_enc(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[((self.dlog[a as usize] + self.dlog[b as usize]) % self.ord) as usize]
        }
    }

    /// The character of exact order `t` selected by `index`; the indices
    /// 1 <= u <= t with gcd(u, t) = 1 enumerate the phi(t) characters of
    /// order t exactly once.
    pub fn mult_character(&self, t: u64, index: u64) -> Result<MultChar> {
        if t == 0 || self.ord % t != 0 {
            return Err(Error::NotADivisor { d: t, n: self.ord });
        }
        let u = index % t;
        if t > 1 && u.gcd(&t) != 1 {
            return Err(Error::InvalidInput(format!(
                "index {index} does not select a character of exact order {t}"
            )));
        }
        Ok(MultChar {
            t,
            index: u,
            step: u * (self.ord / t),
        })
    }

    /// All phi(t) characters of exact order t, by ascending index.
    pub fn characters_of_order(&self, t: u64) -> Result<Vec<MultChar>> {
        if t == 1 {
            return Ok(vec![self.mult_character(1, 1)?]);
        }
        (1..=t)
            .filter(|u| u.gcd(&t) == 1)
            .map(|u| self.mult_character(t, u))
            .collect()
    }

    fn mult_value_enc(&self, ch: &MultChar, enc: u64) -> Complex64 {
        if enc == 0 {
            Complex64::zero()
        } else {
            let j = self.dlog[enc as usize];
            self.unity[((j % self.ord).wrapping_mul(ch.step) % self.ord) as usize]
        }
    }

    /// eta(x), with eta(0) = 0.
    pub fn mult_value(&self, ch: &MultChar, x: &FieldElement) -> Complex64 {
        self.mult_value_enc(ch, self.ctx.enc_u64(x))
    }

    /// The additive character beta -> chi(c * beta), chi the canonical
    /// character of the prime field lifted through the absolute trace.
    pub fn add_character(&self, c: &FieldElement) -> AddChar {
        AddChar {
            c_enc: self.ctx.enc_u64(c),
        }
    }

    fn add_value_enc(&self, ch: &AddChar, enc: u64) -> Complex64 {
        self.unity_p[self.abs_trace[self.mul_enc(ch.c_enc, enc) as usize] as usize]
    }

    /// chi_c(x) = e^(2 pi i Tr(c x) / p).
    pub fn add_value(&self, ch: &AddChar, x: &FieldElement) -> Complex64 {
        self.add_value_enc(ch, self.ctx.enc_u64(x))
    }

    /// G(eta, chi_c) by direct index-ascending summation over the field.
    pub fn gauss_sum(&self, eta: &MultChar, chi: &AddChar) -> Complex64 {
        let mut acc = Complex64::zero();
        for enc in 1..self.size {
            acc += self.mult_value_enc(eta, enc) * self.add_value_enc(chi, enc);
        }
        acc
    }

    /// |G(eta, chi_c)| = q^(n/2) for every nontrivial eta and c != 0,
    /// checked for all pairs at once: for fixed c the values G(eta_u,
    /// chi_c) over u = 0..ord-1 are the unnormalized inverse DFT of
    /// k -> chi_c(g^k).
    pub fn gauss_magnitude_sweep(&self) -> Result<GaussSweepReport> {
        let ord = self.ord as usize;
        let expected = (self.size as f64).sqrt();
        let mut planner = rustfft::FftPlanner::new();
        let fft = planner.plan_fft_inverse(ord);
        let mut max_rel_dev: f64 = 0.0;
        let mut checked = 0u64;
        let mut buf = vec![Complex64::zero(); ord];
        for c_enc in 1..self.size {
            let chi = AddChar { c_enc };
            for (k, slot) in buf.iter_mut().enumerate() {
                *slot = self.add_value_enc(&chi, self.exp[k]);
            }
            fft.process(&mut buf);
            for value in buf.iter().skip(1) {
                let dev = (value.norm() - expected).abs() / expected;
                max_rel_dev = max_rel_dev.max(dev);
                checked += 1;
            }
        }
        Ok(GaussSweepReport {
            checked,
            max_rel_dev,
            expected_magnitude: expected,
        })
    }

    /// P[w] = sum over t | ord of (mu(t)/phi(t)) * sum of eta(w) over the
    /// characters of exact order t; the primitivity indicator is theta *
    /// P[w].  Indexed by encoding.
    fn p_vector(&self) -> &[Complex64] {
        self.p_cache.get_or_init(|| {
            let ord = self.ord;
            let mut p = vec![Complex64::zero(); self.size as usize];
            for t in numtheory::divisors(ord).expect("positive order") {
                let mu = numtheory::mobius(t).expect("positive t");
                if mu == 0 {
                    continue;
                }
                let phi = numtheory::euler_phi(t).expect("positive t");
                let coef = mu as f64 / phi as f64;
                let stride = ord / t;
                for u in 1..=t {
                    if t > 1 && u.gcd(&t) != 1 {
                        continue;
                    }
                    let step = (u % t) * stride;
                    for j in 0..ord {
                        let z = self.unity[((j * step) % ord) as usize];
                        p[self.exp[j as usize] as usize] += coef * z;
                    }
                    if t == 1 {
                        break;
                    }
                }
            }
            p
        })
    }

    /// PSUM[v] = sum over w != 0 of P[w] chi_v(w), and T1SUM[v] =
    /// sum over w != 0 of chi_v(w), both indexed by the encoding of v.
    fn psum_vectors(&self) -> (&[Complex64], &[Complex64]) {
        let (psum, t1sum) = self.sum_cache.get_or_init(|| {
            let ord = self.ord;
            let p = self.p_vector();
            // Reindex P by discrete log so the v loop is a plain rotation.
            let p_raw: Vec<Complex64> = (0..ord)
                .map(|j| p[self.exp[j as usize] as usize])
                .collect();
            let chi_raw: Vec<Complex64> = (0..ord)
                .map(|j| self.unity_p[self.abs_trace[self.exp[j as usize] as usize] as usize])
                .collect();
            let mut psum = vec![Complex64::zero(); self.size as usize];
            let mut t1sum = vec![Complex64::zero(); self.size as usize];
            // v = 0: chi_0 is identically 1.
            psum[0] = p_raw.iter().sum();
            t1sum[0] = Complex64::new(ord as f64, 0.0);
            for jv in 0..ord {
                let v = self.exp[jv as usize] as usize;
                let mut ps = Complex64::zero();
                let mut ts = Complex64::zero();
                for jw in 0..ord {
                    let chi = chi_raw[((jv + jw) % ord) as usize];
                    ps += p_raw[jw as usize] * chi;
                    ts += chi;
                }
                psum[v] = ps;
                t1sum[v] = ts;
            }
            (psum, t1sum)
        });
        (psum, t1sum)
    }

    /// The primitivity indicator evaluated through characters: theta *
    /// sum over t | ord of (mu(t)/phi(t)) * sum over eta of eta(beta).
    /// Equals 1 on primitive elements and 0 elsewhere, up to float error.
    pub fn primitive_indicator_via_sum(&self, beta: &FieldElement) -> f64 {
        let enc = self.ctx.enc_u64(beta);
        (self.theta * self.p_vector()[enc as usize]).re
    }

    /// The trace-fiber indicator evaluated through additive characters:
    /// q^(-d) * sum over c in F_(q^d) of chi_c(beta - gamma), gamma a
    /// reference element with trace(gamma, d) = a.  Equals 1 iff
    /// trace(beta, d) = a.
    pub fn trace_indicator_via_sum(&self, beta: &FieldElement, d: u64, a: &FieldElement) -> Result<f64> {
        if !self.ctx.in_subfield(a, d)? {
            return Err(Error::TargetOutsideSubfield { index: 0, d });
        }
        let refs = self
            .trace_ref
            .get(&d)
            .ok_or(Error::NotADivisor { d, n: self.ctx.n() })?;
        let gamma = refs[&self.ctx.enc_u64(a)];
        let diff = self.ctx.sub(beta, &self.ctx.dec_u64(gamma));
        let diff_enc = self.ctx.enc_u64(&diff);
        let subs = &self.sub_enc[&d];
        let mut acc = Complex64::zero();
        for &c in subs {
            acc += self.add_value_enc(&AddChar { c_enc: c }, diff_enc);
        }
        Ok((acc / subs.len() as f64).re)
    }

    /// The number of additive-shift tuples c with s(c) = v, for every v:
    /// the k-fold additive convolution of the subfield indicators.
    fn shift_counts(&self, spec: &TraceSpec) -> Vec<u64> {
        let mut z = vec![0u64; self.size as usize];
        z[0] = 1;
        for &d in spec.tuple().entries() {
            let subs = &self.sub_enc[&d];
            let mut next = vec![0u64; self.size as usize];
            for (v, &count) in z.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                for &y in subs {
                    next[self.ctx.add_enc(v as u64, y) as usize] += count;
                }
            }
            z = next;
        }
        z
    }

    /// Evaluate the full character-sum expansion of q^D N / theta without
    /// simplifications and return the implied count together with the
    /// main term, the cross term S, and the measured residual.
    ///
    /// Measured convention note: with eta(0) = 0 the trivial-character
    /// portion contributes q^(n + D - lambda) - q^D * [all targets zero],
    /// so the residual against main + S is exactly -q^D on all-zero
    /// targets and 0 otherwise.  The implied N is exact either way.
    pub fn count_via_character_formula(&self, spec: &TraceSpec) -> Result<CountFormulaReport> {
        self.guard_spec(spec)?;
        let (psum, t1sum) = self.psum_vectors();
        let zcount = self.shift_counts(spec);
        let beta_hat = enumerate_with_traces(self.ctx, spec)?
            .next()
            .ok_or_else(|| Error::Domain("admissible fiber is empty".into()))?;
        let neg_enc = self.ctx.enc_u64(&self.ctx.neg(&beta_hat));

        let mut full = Complex64::zero();
        let mut s_term = Complex64::zero();
        for (v, &count) in zcount.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let chi_v = self.add_value_enc(
                &AddChar { c_enc: v as u64 },
                neg_enc,
            );
            let weight = count as f64 * chi_v;
            full += weight * psum[v];
            if v != 0 {
                s_term += weight * (psum[v] - t1sum[v]);
            }
        }

        let n = self.ctx.n();
        let lambda = spec.tuple().lambda();
        let d_sum = spec.tuple().degree_sum();
        let q = self.ctx.q_u64().expect("enumerable context") as f64;
        let main_term = q.powi((n + d_sum - lambda) as i32);
        let q_pow_d = q.powi(d_sum as i32);
        Ok(CountFormulaReport {
            n_implied: self.theta * full.re / q_pow_d,
            main_term,
            s_term,
            full_sum: full,
            residual: full - main_term - s_term,
            theta: self.theta,
        })
    }

    /// Evaluate |S| exactly and compare against q^(n/2 + D) * W(q^n - 1).
    pub fn s_term_bound_check(&self, spec: &TraceSpec) -> Result<SBoundReport> {
        let report = self.count_via_character_formula(spec)?;
        let w = self
            .ctx
            .order_factorization()
            .squarefree_divisor_count()
            .to_f64()
            .ok_or_else(|| Error::ResourceLimit {
                what: "W(q^n - 1) exceeds f64".into(),
                partial: None,
            })?;
        let n = self.ctx.n();
        let d_sum = spec.tuple().degree_sum();
        let q = self.ctx.q_u64().expect("enumerable context") as f64;
        let bound = (self.size as f64).sqrt() * q.powi(d_sum as i32) * w;
        let s_abs = report.s_term.norm();
        let _ = n;
        Ok(SBoundReport {
            s_abs,
            bound,
            holds: s_abs < bound,
        })
    }

    fn guard_spec(&self, spec: &TraceSpec) -> Result<()> {
        if spec.tuple().n() != self.ctx.n() {
            return Err(Error::InvalidInput(format!(
                "spec is for degree n = {}, table has n = {}",
                spec.tuple().n(),
                self.ctx.n()
            )));
        }
        if !spec.admissible() {
            return Err(Error::Domain(
                "the counting formula needs an admissible target tuple".into(),
            ));
        }
        let q = self.ctx.q_u64().ok_or_else(|| Error::ResourceLimit {
            what: "counting formula over an oversized field".into(),
            partial: None,
        })?;
        let d_sum = spec.tuple().degree_sum();
        let mut q_pow_d = 1u64;
        for _ in 0..d_sum {
            q_pow_d = q_pow_d.checked_mul(q).ok_or_else(|| Error::ResourceLimit {
                what: "q^D exceeds u64".into(),
                partial: None,
            })?;
        }
        if q_pow_d > self.ctx.config().enumeration_ceiling {
            return Err(Error::ResourceLimit {
                what: format!("q^D = {q_pow_d} shift tuples"),
                partial: None,
            });
        }
        Ok(())
    }
}

/// e^(2 pi i j / m) for j = 0..m, each synthesized directly from its
/// angle so error does not accumulate across the table.
fn roots_of_unity(m: u64) -> Vec<Complex64> {
    let step = std::f64::consts::TAU / m as f64;
    (0..m)
        .map(|j| Complex64::from_polar(1.0, step * j as f64))
        .collect()
}
