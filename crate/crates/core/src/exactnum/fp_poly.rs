//! Dense polynomials over a prime field stored as raw residues (lowest degree first).
//!
//! This is the kernel behind extension-field construction: reduction modulo the
//! defining polynomial, inversion, and the irreducibility test.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn degree(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            sub_mod(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
                p,
            )
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], p).expect("leading coefficient invertible");
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - db;
        q[shift] = c;
        for (j, &bj) in b[..=db].iter().enumerate() {
            r[shift + j] = sub_mod(r[shift + j], mul_mod(c, bj, p), p);
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    div_rem(a, m, p).1
}

pub(crate) fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_rem(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &b, m, p);
        }
        exp >>= 1;
        if exp > 0 {
            b = mul_rem(&b, &b, m, p);
        }
    }
    acc
}

pub(crate) fn monic_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let inv = inv_mod(x[d], p).unwrap();
        for c in x.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    x
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub(crate) fn inv_rem(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    trim(&mut r0);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = inv_mod(r0[0], p)?;
    let mut out: Vec<u64> = s0.iter().map(|&x| mul_mod(x, c, p)).collect();
    out = rem(&out, m, p);
    Some(out)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial of degree k >= 1.
pub fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = match degree(m) {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    // frob[i] = x^(p^i) mod m
    let mut frob = vec![rem(&x, m, p)];
    for i in 1..=k {
        let next = pow_rem(&frob[i - 1], p, m, p);
        frob.push(next);
    }
    if !sub(&frob[k], &frob[0], p).is_empty() {
        return false;
    }
    for q in prime_factors(k as u64) {
        let h = sub(&frob[k / q as usize], &frob[0], p);
        if degree(&monic_gcd(m, &h, p)) != Some(0) {
            return false;
        }
    }
    true
}

/// Seeded search for a monic irreducible polynomial of degree `k` over F_p.
pub fn random_irreducible(p: u64, k: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 32) ^ k as u64);
    loop {
        let mut m: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
}
