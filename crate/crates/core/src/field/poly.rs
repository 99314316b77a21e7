//! Dense polynomials over the prime field F_p, little-endian coefficient vectors.
//!
//! Only what modulus validation needs: remainder, products modulo a monic
//! polynomial, powers of `x`, and gcd.

pub(crate) type Poly = Vec<u32>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    crate::int::pow_mod(a as u128, (p - 2) as u128, p as u128) as u32
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    trim(out.into_iter().map(|v| v as u32).collect())
}

/// Remainder of `a` modulo an arbitrary nonzero polynomial `m`.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let m = trim(m.to_vec());
    assert!(!m.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p) as u64;
    let p64 = p as u64;
    while r.len() > dm {
        let dr = r.len() - 1;
        let factor = r[dr] as u64 * lead_inv % p64;
        if factor != 0 {
            let shift = dr - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = factor * c as u64 % p64;
                r[shift + i] = ((r[shift + i] as u64 + p64 - sub) % p64) as u32;
            }
        }
        r.pop();
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), m, p)
}

/// `x^e mod m`.
pub(crate) fn x_pow_mod(mut e: u128, m: &[u32], p: u32) -> Poly {
    let mut result: Poly = rem(&[1], m, p);
    let mut base: Poly = rem(&[0, 1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        e >>= 1;
    }
    result
}

/// Raise `a` to the p-th power modulo `m`.
pub(crate) fn pow_p_mod(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut result: Poly = rem(&[1], m, p);
    let mut base = a.to_vec();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        e >>= 1;
    }
    result
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod_p(lead, p) as u64;
        for c in x.iter_mut() {
            *c = (*c as u64 * inv % p as u64) as u32;
        }
    }
    x
}

/// Ben-Or irreducibility test for a monic polynomial of degree >= 1:
/// `f` is irreducible iff gcd(x^{p^i} - x, f) = 1 for 1 <= i <= deg/2.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let mut h = rem(&x, f, p);
    for _ in 1..=deg / 2 {
        h = pow_p_mod(&h, f, p);
        let g = gcd(&sub(&h, &x, p), f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// `f` irreducible and `x` of multiplicative order p^deg - 1 modulo `f`.
pub(crate) fn is_primitive(f: &[u32], p: u32) -> bool {
    if !is_irreducible(f, p) {
        return false;
    }
    let deg = (f.len() - 1) as u32;
    let order = (p as u64).pow(deg) - 1;
    let one: Poly = rem(&[1], f, p);
    crate::int::prime_divisors(order)
        .into_iter()
        .all(|r| x_pow_mod((order / r) as u128, f, p) != one)
}
