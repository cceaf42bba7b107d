//! Dense polynomial arithmetic over the prime field GF(p), including the
//! irreducibility test and ordered search used to pick defining polynomials.

/// Coefficient vector, constant term first, no trailing zeros (zero = `[]`).
pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(f: &mut Poly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub(crate) fn deg(f: &Poly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub(crate) fn sub(p: u64, a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = *c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = (out[i] + p - c) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(p: u64, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += (ai as u128) * (bj as u128);
        }
    }
    let mut out: Poly = out.into_iter().map(|c| (c % p as u128) as u64).collect();
    trim(&mut out);
    out
}

/// Remainder of a modulo the monic polynomial f.
pub(crate) fn rem(p: u64, mut a: Poly, f: &Poly) -> Poly {
    trim(&mut a);
    let df = deg(f).expect("modulus must be nonzero");
    debug_assert_eq!(f[df], 1, "modulus must be monic");
    while let Some(da) = deg(&a) {
        if da < df {
            break;
        }
        let lead = a[da];
        if lead != 0 {
            let shift = da - df;
            for (i, &fc) in f.iter().enumerate() {
                let t = (lead as u128 * fc as u128) % p as u128;
                a[i + shift] = ((a[i + shift] as u128 + p as u128 * p as u128 - t) % p as u128) as u64;
            }
        }
        a.pop();
        trim(&mut a);
    }
    a
}

pub(crate) fn mulmod(p: u64, a: &Poly, b: &Poly, f: &Poly) -> Poly {
    rem(p, mul(p, a, b), f)
}

/// base^e mod f, e a u64 exponent.
pub(crate) fn powmod(p: u64, base: &Poly, mut e: u64, f: &Poly) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(p, base.clone(), f);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(p, &acc, &b, f);
        }
        b = mulmod(p, &b, &b, f);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd(p: u64, mut a: Poly, mut b: Poly) -> Poly {
    while !b.is_empty() {
        let db = deg(&b).unwrap();
        // Make b monic so `rem` applies.
        let inv = scalar_inv(p, b[db]);
        let bm: Poly = b.iter().map(|&c| c * inv % p).collect();
        let r = rem(p, a, &bm);
        a = bm;
        b = r;
    }
    if let Some(da) = deg(&a) {
        let inv = scalar_inv(p, a[da]);
        a.iter().map(|&c| c * inv % p).collect()
    } else {
        a
    }
}

pub(crate) fn scalar_inv(p: u64, a: u64) -> u64 {
    debug_assert!(a % p != 0);
    crate::numtheory::powmod_u64(a, p - 2, p)
}

/// Inverse of a modulo the monic irreducible f, via extended Euclid.
pub(crate) fn invmod(p: u64, a: &Poly, f: &Poly) -> Option<Poly> {
    let mut r0 = f.clone();
    let mut r1 = rem(p, a.clone(), f);
    let mut t0: Poly = Vec::new();
    let mut t1: Poly = vec![1];
    while !r1.is_empty() {
        let d0 = deg(&r0).unwrap();
        let d1 = deg(&r1).unwrap();
        if d0 < d1 {
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut t0, &mut t1);
            continue;
        }
        // One long-division step: r0 -= (lead(r0)/lead(r1)) x^{d0-d1} r1.
        let c = r0[d0] % p * scalar_inv(p, r1[d1]) % p;
        let shift = d0 - d1;
        let mut q: Poly = vec![0; shift + 1];
        q[shift] = c;
        let r2 = sub(p, &r0, &mul(p, &q, &r1));
        let t2 = sub(p, &t0, &mul(p, &q, &t1));
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    let d = deg(&r0)?;
    if d != 0 {
        return None; // gcd(a, f) is nonconstant: no inverse.
    }
    let inv = scalar_inv(p, r0[0]);
    let scaled: Poly = t0.iter().map(|&c| c * inv % p).collect();
    Some(rem(p, scaled, f))
}

pub(crate) fn eval(p: u64, f: &Poly, x: u64) -> u64 {
    let mut acc = 0u64;
    for &c in f.iter().rev() {
        acc = (crate::numtheory::mulmod_u64(acc, x, p) + c) % p;
    }
    acc
}

/// Irreducibility over GF(p): f of degree m is irreducible iff
/// x^{p^m} = x (mod f) and gcd(x^{p^{m/r}} - x, f) = 1 for each prime r | m.
pub(crate) fn is_irreducible(p: u64, f: &Poly) -> bool {
    let m = match deg(f) {
        Some(0) | None => return false,
        Some(m) => m,
    };
    if m == 1 {
        return true;
    }
    let mut checkpoints: Vec<usize> = Vec::new();
    let mut mm = m;
    let mut r = 2;
    while r * r <= mm {
        if mm % r == 0 {
            checkpoints.push(m / r);
            while mm % r == 0 {
                mm /= r;
            }
        }
        r += 1;
    }
    if mm > 1 {
        checkpoints.push(m / mm);
    }
    let x: Poly = vec![0, 1];
    let mut h = x.clone();
    for j in 1..=m {
        h = powmod(p, &h, p, f); // h = x^{p^j} mod f
        if checkpoints.contains(&j) {
            let g = gcd(p, sub(p, &h, &x), f.clone());
            if deg(&g) != Some(0) {
                return false;
            }
        }
    }
    h == x
}

/// The lexicographically smallest monic irreducible of degree m over GF(p),
/// ordering candidates by their low-coefficient vector read as a base-p
/// integer (constant term least significant).
pub(crate) fn smallest_irreducible(p: u64, m: usize) -> Poly {
    assert!(m >= 1);
    let mut counter = vec![0u64; m];
    loop {
        let mut f = counter.clone();
        f.push(1);
        // Cheap screen first: a root in GF(p) means a linear factor.
        let has_root = m >= 2 && (0..p).any(|x| eval(p, &f, x) == 0);
        if !has_root && is_irreducible(p, &f) {
            return f;
        }
        // Increment the base-p counter.
        let mut i = 0;
        loop {
            if i == m {
                unreachable!("ran out of degree-{m} candidates over GF({p})");
            }
            counter[i] += 1;
            if counter[i] < p {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}
