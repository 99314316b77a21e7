//! Arithmetic lemmas behind the c-differential results for power maps: the
//! gcd formula, linearized trinomials `z^{p^k} - a z - b`, quadratics and
//! Chebyshev polynomials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::int::{checked_pow, gcd, is_prime};

fn int_gcd(a: u64, b: u64) -> u64 {
    gcd(a as u128, b as u128) as u64
}

/// `gcd(p^k + 1, p^n - 1)` by the closed form, checked against the direct gcd.
///
/// p = 2: `(2^{gcd(2k,n)} - 1) / (2^{gcd(k,n)} - 1)`.
/// p odd: 2 when `n / gcd(n,k)` is odd, `p^{gcd(n,k)} + 1` otherwise.
pub fn gcd_power_formula(p: u64, k: u32, n: u32) -> Result<u128> {
    if !is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("k and n must be positive".into()));
    }
    let too_big = || Error::SizeGuardExceeded { what: format!("{p}^max(k,n) in 128 bits"), needed: u128::MAX, limit: u128::MAX };
    let pk = checked_pow(p as u128, k).ok_or_else(too_big)?;
    let pn = checked_pow(p as u128, n).ok_or_else(too_big)?;
    let direct = gcd(pk + 1, pn - 1);
    let g = int_gcd(k as u64, n as u64) as u32;
    let formula = if p == 2 {
        let top = int_gcd(2 * k as u64, n as u64) as u32;
        (checked_pow(2, top).ok_or_else(too_big)? - 1) / (checked_pow(2, g).ok_or_else(too_big)? - 1)
    } else if (n / g) % 2 == 1 {
        2
    } else {
        checked_pow(p as u128, g).ok_or_else(too_big)? + 1
    };
    if formula != direct {
        return Err(Error::FormulaMismatch { p, k, n, formula, direct });
    }
    Ok(formula)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootCase {
    /// `α_{m-1} = 1`, `β_{m-1} != 0`.
    NoRoot,
    /// `α_{m-1} != 1`.
    Unique,
    /// `α_{m-1} = 1`, `β_{m-1} = 0`: a coset of a GF(p^g)-line.
    Full,
}

/// Root structure of `f(z) = z^{p^k} - a z - b` over GF(p^n).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrinomialOutcome {
    pub p: u32,
    pub n: u32,
    /// Reduced into `1..n`.
    pub k: u32,
    pub a: FieldElement,
    pub b: FieldElement,
    pub g: u32,
    pub m: u32,
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub case: RootCase,
    pub count: u64,
    /// Sorted by rank.
    pub roots: Vec<FieldElement>,
    /// Full case only: the element of nonzero relative trace, the
    /// `(p^k - 1)`-th root of a, and the particular root.
    pub e: Option<FieldElement>,
    pub tau: Option<FieldElement>,
    pub particular: Option<FieldElement>,
}

/// Which exponents `t_i` the explicit-root formula uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RootExponents {
    /// `t_i = Σ_{j=i}^{m-2} p^{k(j+1)}`.
    Frobenius,
    /// `t_i = Σ_{j=i}^{m-2} p^{n(j+1)}`, i.e. `a^{t_i} = a^{m-1-i}`.
    #[cfg_attr(not(test), allow(dead_code))]
    FullDegree,
}

/// Evaluates `z^{p^k} - a z - b`.
pub fn trinomial_eval(field: &FieldSpec, k: u32, a: FieldElement, b: FieldElement, z: FieldElement) -> FieldElement {
    field.sub(field.sub(field.frobenius_k(z, k), field.mul(a, z)), b)
}

/// `(α_{m-1}, β_{m-1})` from `α_0 = a`, `β_0 = b`,
/// `α_r = a α_{r-1}^{p^k}`, `β_r = α_{r-1}^{p^k} b + β_{r-1}^{p^k}`.
fn alpha_beta(field: &FieldSpec, k: u32, m: u32, a: FieldElement, b: FieldElement) -> (FieldElement, FieldElement) {
    let (mut alpha, mut beta) = (a, b);
    for _ in 1..m {
        let af = field.frobenius_k(alpha, k);
        beta = field.add(field.mul(af, b), field.frobenius_k(beta, k));
        alpha = field.mul(a, af);
    }
    (alpha, beta)
}

/// `x = Tr_g(e)^{-1} Σ_{i<m} (Σ_{j<=i} e^{p^{kj}}) a^{t_i} b^{p^{ki}}`.
pub(crate) fn explicit_root(
    field: &FieldSpec,
    k: u32,
    g: u32,
    a: FieldElement,
    b: FieldElement,
    e: FieldElement,
    exps: RootExponents,
) -> Result<FieldElement> {
    let m = field.n() / g;
    let tr = field.trace_rel(g, e)?;
    let a_t = |i: u32| -> FieldElement {
        match exps {
            RootExponents::Frobenius => (i..m.saturating_sub(1)).fold(field.one(), |acc, j| field.mul(acc, field.frobenius_k(a, k * (j + 1)))),
            RootExponents::FullDegree => field.pow_u(a, (m - 1 - i) as u128),
        }
    };
    let mut sum = field.zero();
    let mut e_partial = field.zero();
    for i in 0..m {
        e_partial = field.add(e_partial, field.frobenius_k(e, k * i));
        let term = field.mul(field.mul(e_partial, a_t(i)), field.frobenius_k(b, k * i));
        sum = field.add(sum, term);
    }
    field.div(sum, tr)
}

/// Roots of `z^{p^k} - a z - b` by the α/β recursion, with explicit roots in
/// every case. `k` is taken mod n; `k ≡ 0` is rejected since then f is
/// `(1 - a) z - b`. For `a = 0` the recursion still applies (with `0^0 = 1`)
/// and yields the unique root `b^{p^{k(m-1)}}`.
pub fn trinomial_roots(field: &FieldSpec, k: u32, a: FieldElement, b: FieldElement) -> Result<TrinomialOutcome> {
    let n = field.n();
    field.element(a.rank() as u64)?;
    field.element(b.rank() as u64)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let k = k % n;
    if k == 0 {
        return Err(Error::SubfieldEdgeCase { k: n, n });
    }
    let g = int_gcd(k as u64, n as u64) as u32;
    let m = n / g;
    let (alpha, beta) = alpha_beta(field, k, m, a, b);
    let mut out = TrinomialOutcome {
        p: field.p(),
        n,
        k,
        a,
        b,
        g,
        m,
        alpha,
        beta,
        case: RootCase::NoRoot,
        count: 0,
        roots: Vec::new(),
        e: None,
        tau: None,
        particular: None,
    };
    if alpha != field.one() {
        out.case = RootCase::Unique;
        out.roots = vec![field.div(beta, field.sub(field.one(), alpha))?];
    } else if beta.is_zero() {
        out.case = RootCase::Full;
        let e = field
            .enumerate()
            .find(|&e| field.trace_rel(g, e).map(|t| !t.is_zero()).unwrap_or(false))
            .expect("the relative trace is onto");
        let exp = (field.p() as u128).pow(k) - 1;
        let tau = field
            .enumerate()
            .skip(1)
            .find(|&t| field.pow_u(t, exp) == a)
            .ok_or_else(|| Error::InvalidArgument(format!("no (p^k - 1)-th root of {a} although alpha = 1")))?;
        let x0 = explicit_root(field, k, g, a, b, e, RootExponents::Frobenius)?;
        let mut roots: Vec<FieldElement> = field.subfield(g)?.into_iter().map(|d| field.add(x0, field.mul(d, tau))).collect();
        roots.sort();
        out.case = RootCase::Full;
        out.roots = roots;
        out.e = Some(e);
        out.tau = Some(tau);
        out.particular = Some(x0);
    }
    out.count = out.roots.len() as u64;
    Ok(out)
}

/// Roots of `x^2 + A x + B`, sorted and deduplicated.
///
/// Characteristic 2 with `A != 0` substitutes `x = A y` and solves
/// `y^2 + y = B / A^2`, solvable iff its absolute trace is 0. Odd
/// characteristic uses the discriminant `A^2 - 4B`.
pub fn solve_quadratic(field: &FieldSpec, a: FieldElement, b: FieldElement) -> Vec<FieldElement> {
    let mut roots = if field.p() == 2 {
        if a.is_zero() {
            vec![field.sqrt(b).expect("every element is a square in characteristic 2")]
        } else {
            let t = field.div(b, field.mul(a, a)).expect("a != 0");
            match artin_schreier(field, t) {
                Some(y) => vec![field.mul(a, y), field.mul(a, field.add(y, field.one()))],
                None => Vec::new(),
            }
        }
    } else {
        let four = field.from_int(4);
        let disc = field.sub(field.mul(a, a), field.mul(four, b));
        let half = field.inv(field.from_int(2)).expect("p odd");
        match field.sqrt(disc) {
            Some(s) => {
                let minus_a = field.neg(a);
                vec![field.mul(field.add(minus_a, s), half), field.mul(field.sub(minus_a, s), half)]
            }
            None => Vec::new(),
        }
    };
    roots.sort();
    roots.dedup();
    debug_assert!(roots.iter().all(|&x| field.add(field.add(field.mul(x, x), field.mul(a, x)), b).is_zero()));
    roots
}

/// A solution of `y^2 + y = t` in characteristic 2, when `Tr(t) = 0`.
fn artin_schreier(field: &FieldSpec, t: FieldElement) -> Option<FieldElement> {
    if field.trace_abs(t) != 0 {
        return None;
    }
    let n = field.n();
    if n % 2 == 1 {
        // half-trace Σ t^{4^i}
        let mut acc = field.zero();
        let mut cur = t;
        for _ in 0..=(n - 1) / 2 {
            acc = field.add(acc, cur);
            cur = field.frobenius_k(cur, 2);
        }
        return Some(acc);
    }
    // y = Σ_{i<n-1} (Σ_{j>i} d^{2^j}) t^{2^i} for any d of trace 1
    let d = field.enumerate().find(|&d| field.trace_abs(d) == 1)?;
    let d_pows: Vec<FieldElement> = (0..n).map(|j| field.frobenius_k(d, j)).collect();
    let mut y = field.zero();
    for i in 0..n - 1 {
        let inner = d_pows[(i + 1) as usize..].iter().fold(field.zero(), |s, &v| field.add(s, v));
        y = field.add(y, field.mul(inner, field.frobenius_k(t, i)));
    }
    Some(y)
}

/// `T_ℓ(y)` with `T_0 = 2`, `T_1 = y`, `T_{ℓ+1} = y T_ℓ - T_{ℓ-1}`, so that
/// `T_ℓ(z + 1/z) = z^ℓ + z^{-ℓ}`.
pub fn chebyshev_eval(field: &FieldSpec, l: u64, y: FieldElement) -> FieldElement {
    let two = field.from_int(2);
    // ladder on (T_j, T_{j+1}) using T_{2j} = T_j^2 - 2, T_{2j+1} = T_j T_{j+1} - y
    let (mut t0, mut t1) = (two, y);
    for bit in (0..64 - l.leading_zeros()).rev() {
        let even = field.sub(field.mul(t0, t0), two);
        let odd = field.sub(field.mul(t0, t1), y);
        if (l >> bit) & 1 == 1 {
            t0 = odd;
            t1 = field.sub(field.mul(t1, t1), two);
        } else {
            t0 = even;
            t1 = odd;
        }
    }
    t0
}

/// Whether `T_ℓ` permutes the relevant set, by `gcd(ℓ, p^{2n} - 1) = 1`.
pub fn chebyshev_is_permutation(p: u64, n: u32, l: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    let big = checked_pow(p as u128, 2 * n).ok_or_else(|| Error::SizeGuardExceeded {
        what: format!("{p}^(2*{n}) in 128 bits"),
        needed: u128::MAX,
        limit: u128::MAX,
    })?;
    Ok(gcd(l as u128, big - 1) == 1)
}
