//! Factorization internals: trial division, deterministic Miller-Rabin, and
//! a Brent-cycle Pollard rho over both u64 and arbitrary-precision integers.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division covers all primes below this bound.
pub const TRIAL_LIMIT: u64 = 1_000_000;

/// Default cap on total rho iterations per factorization call.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 26;

/// All primes below `TRIAL_LIMIT`, sieved once per process.
pub fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::with_capacity(80_000);
        for i in 2..limit {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j < limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

pub fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Witness set that makes Miller-Rabin deterministic below 3.317e24
/// (in particular for all of u64).
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mr_deterministic_bound() -> &'static BigUint {
    static BOUND: OnceLock<BigUint> = OnceLock::new();
    BOUND.get_or_init(|| "3317044064679887385961981".parse().unwrap())
}

fn miller_rabin_round_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = powmod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    MR_WITNESSES
        .iter()
        .all(|&a| miller_rabin_round_u64(n, a, d, s))
}

fn miller_rabin_round_big(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let a = a % n;
    if a.is_zero() {
        return true;
    }
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Primality test for arbitrary-precision integers: deterministic witnesses
/// below 3.317e24, plus 64 input-derived pseudo-random rounds above.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    for &p in small_primes().iter().take(100) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    for &a in MR_WITNESSES.iter() {
        if !miller_rabin_round_big(n, &BigUint::from(a), &d, s) {
            return false;
        }
    }
    if n <= mr_deterministic_bound() {
        return true;
    }
    // Extra rounds, seeded deterministically from the input.
    let mut seed = n
        .iter_u64_digits()
        .fold(0xD6E8_FEB8_6659_FD93u64, |acc, d| {
            acc.rotate_left(23) ^ d.wrapping_mul(0x2545_F491_4F6C_DD1D)
        });
    for _ in 0..64 {
        let a = BigUint::from(splitmix64(&mut seed) | 1) % n;
        if a < BigUint::from(2u32) {
            continue;
        }
        if !miller_rabin_round_big(n, &a, &d, s) {
            return false;
        }
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// One Brent-cycle rho attempt on a u64 composite. Returns a nontrivial
/// factor or None if the cycle closed or the budget ran out.
fn rho_attempt_u64(n: u64, x0: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let mut y = x0 % n;
    let mut r: u64 = 1;
    let mut q: u64 = 1;
    let mut g: u64 = 1;
    let mut x = y;
    let mut ys = y;
    // Modular add tolerating n > 2^63: sq + c < 2n may overflow u64.
    let step = |v: u64| {
        let sq = mulmod_u64(v, v, n);
        let (sum, wrapped) = sq.overflowing_add(c);
        if wrapped || sum >= n {
            sum.wrapping_sub(n)
        } else {
            sum
        }
    };
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k: u64 = 0;
        while k < r && g == 1 {
            ys = y;
            let batch = 128.min(r - k);
            if *budget < batch {
                *budget = 0;
                return None;
            }
            *budget -= batch;
            for _ in 0..batch {
                y = step(y);
                q = mulmod_u64(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += batch;
        }
        r <<= 1;
    }
    if g == n {
        // Backtrack one step at a time.
        loop {
            ys = step(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g != n && g > 1 {
        Some(g)
    } else {
        None
    }
}

fn rho_u64(n: u64, budget: &mut u64) -> Option<u64> {
    let mut seed = n ^ 0x9E37_79B9_7F4A_7C15;
    for _ in 0..64 {
        if *budget == 0 {
            return None;
        }
        let x0 = splitmix64(&mut seed) % n;
        let c = splitmix64(&mut seed) % (n - 1) + 1;
        if let Some(g) = rho_attempt_u64(n, x0, c, budget) {
            return Some(g);
        }
    }
    None
}

fn rho_attempt_big(n: &BigUint, x0: &BigUint, c: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    let mut y = x0 % n;
    let mut r: u64 = 1;
    let mut q = one.clone();
    let mut g = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    let step = |v: &BigUint| (v * v + c) % n;
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k: u64 = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = 128.min(r - k);
            if *budget < batch {
                *budget = 0;
                return None;
            }
            *budget -= batch;
            for _ in 0..batch {
                y = step(&y);
                q = (&q * absdiff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += batch;
        }
        r <<= 1;
    }
    if &g == n {
        loop {
            ys = step(&ys);
            g = absdiff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g != n && !g.is_one() {
        Some(g)
    } else {
        None
    }
}

fn rho_big(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let mut seed = n
        .iter_u64_digits()
        .fold(0x9E37_79B9_7F4A_7C15u64, |acc, d| acc.rotate_left(17) ^ d);
    for _ in 0..64 {
        if *budget == 0 {
            return None;
        }
        let x0 = BigUint::from(splitmix64(&mut seed)) % n;
        let c = BigUint::from(splitmix64(&mut seed)) % (n - 1u32) + 1u32;
        if let Some(g) = rho_attempt_big(n, &x0, &c, budget) {
            return Some(g);
        }
    }
    None
}

/// Exact integer k-th root via binary search.
pub fn iroot(n: &BigUint, k: u32) -> BigUint {
    if n.is_zero() || k == 1 {
        return n.clone();
    }
    let bits = n.bits();
    let mut hi = BigUint::one() << (bits / k as u64 + 1);
    let mut lo = BigUint::zero();
    while &lo + 1u32 < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if mid.pow(k) <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// If n = b^k with k >= 2, return (b, k) with k maximal.
pub fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    if n < &BigUint::from(4u32) {
        return None;
    }
    let bits = n.bits() as u32;
    for k in (2..=bits).rev() {
        let r = iroot(n, k);
        if r > BigUint::one() && r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

fn factor_recursive_u64(n: u64, out: &mut Vec<BigUint>, budget: &mut u64) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime_u64(n) {
        out.push(BigUint::from(n));
        return Ok(());
    }
    // rho may stall on prime powers; peel them off exactly.
    if let Some((b, k)) = perfect_power(&BigUint::from(n)) {
        let b = b.to_u64().unwrap();
        for _ in 0..k {
            factor_recursive_u64(b, out, budget)?;
        }
        return Ok(());
    }
    match rho_u64(n, budget) {
        Some(g) => {
            factor_recursive_u64(g, out, budget)?;
            factor_recursive_u64(n / g, out, budget)?;
            Ok(())
        }
        None => Err(budget_error(&BigUint::from(n), out)),
    }
}

pub(crate) fn factor_recursive(n: &BigUint, out: &mut Vec<BigUint>, budget: &mut u64) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if let Some(small) = n.to_u64() {
        return factor_recursive_u64(small, out, budget);
    }
    if is_prime_big(n) {
        out.push(n.clone());
        return Ok(());
    }
    if let Some((b, k)) = perfect_power(n) {
        for _ in 0..k {
            factor_recursive(&b, out, budget)?;
        }
        return Ok(());
    }
    match rho_big(n, budget) {
        Some(g) => {
            factor_recursive(&g, out, budget)?;
            factor_recursive(&(n / &g), out, budget)?;
            Ok(())
        }
        None => Err(budget_error(n, out)),
    }
}

fn budget_error(remaining: &BigUint, found: &[BigUint]) -> Error {
    let mut parts: Vec<String> = found.iter().map(|p| p.to_string()).collect();
    parts.sort();
    Error::ResourceLimit {
        what: format!("factoring (stuck composite cofactor {remaining})"),
        partial: if parts.is_empty() {
            None
        } else {
            Some(parts.join(" * "))
        },
    }
}

/// Strip every prime below `TRIAL_LIMIT` from n, pushing found primes.
pub(crate) fn trial_divide(n: &mut BigUint, out: &mut Vec<BigUint>) {
    for &p in small_primes() {
        if n.is_one() {
            return;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > *n {
            break;
        }
        while (&*n % p).is_zero() {
            out.push(pb.clone());
            *n /= p;
        }
    }
    if !n.is_one() {
        if let Some(small) = n.to_u64() {
            // After trial division to 10^6, any cofactor below 10^12 is prime.
            if small < TRIAL_LIMIT * TRIAL_LIMIT {
                out.push(BigUint::from(small));
                *n = BigUint::one();
            }
        }
    }
}

/// Trial division restricted to the progression r = 1 (mod step), for
/// cofactors whose prime divisors are known to lie in that progression.
pub(crate) fn progression_trial(n: &mut BigUint, step: u64, limit: u64, out: &mut Vec<BigUint>) {
    if step == 0 {
        return;
    }
    let mut r = TRIAL_LIMIT - (TRIAL_LIMIT % step) + 1;
    while r <= limit {
        if n.is_one() {
            return;
        }
        let rb = BigUint::from(r);
        if &rb * &rb > *n {
            break;
        }
        if (&*n % r).is_zero() {
            while (&*n % r).is_zero() {
                out.push(rb.clone());
                *n /= r;
            }
        }
        r += step;
    }
    if !n.is_one() {
        if let Some(small) = n.to_u64() {
            let bound = limit.max(TRIAL_LIMIT);
            if (small as u128) < bound as u128 * bound as u128 {
                out.push(BigUint::from(small));
                *n = BigUint::one();
            }
        }
    }
}
