//! Exact arithmetic in GF(p^n).
//!
//! An element is identified with its *rank*: the integer whose base-p digits
//! are the coefficients of its polynomial-basis representation, digit `i`
//! being the coefficient of `x^i`. Rank 0 is zero and rank 1 is one.
//!
//! Multiplication goes through log/antilog tables when the field is small
//! enough (2^20 elements by default), otherwise through schoolbook products
//! reduced by the modulus.

pub(crate) mod poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int;

/// Fields with more elements than this get no log/antilog tables by default.
pub const DEFAULT_TABLE_BOUND: u32 = 1 << 20;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;

/// An element of GF(p^n), identified by its rank in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn rank(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl From<u32> for FieldElement {
    fn from(rank: u32) -> Self {
        FieldElement(rank)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct LogTables {
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`, doubled so products need no reduction.
    exp: Vec<u32>,
    /// `log[r]` for `r >= 1`; `log[0]` is unused.
    log: Vec<u32>,
}

/// Binary operations accepted by [`FieldSpec::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow,
    Neg,
    Frobenius,
}

/// Second operand for [`FieldSpec::arith`]: an element or an integer exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    None,
    Element(FieldElement),
    Exponent(i128),
}

/// A concrete model of GF(p^n).
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `weights[i] = p^i`.
    weights: Vec<u32>,
    generator: FieldElement,
    tables: Option<Arc<LogTables>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.n, self.modulus)
    }
}

impl FieldSpec {
    /// Build GF(p^n). Without a modulus, the lexicographically smallest
    /// primitive polynomial of degree `n` is used (lower coefficients read as
    /// a base-p integer, constant term least significant).
    pub fn new(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<Self> {
        Self::with_table_bound(p, n, modulus, DEFAULT_TABLE_BOUND)
    }

    pub fn with_table_bound(p: u32, n: u32, modulus: Option<&[u32]>, table_bound: u32) -> Result<Self> {
        if !int::is_prime(p as u64) {
            return Err(Error::NonPrimeCharacteristic(p as u64));
        }
        if n == 0 {
            return Err(Error::DegreeMismatch { expected: 0, detail: "extension degree must be at least 1".into() });
        }
        let q = match int::checked_pow(p as u128, n) {
            Some(q) if q <= MAX_ORDER as u128 => q as u32,
            _ => return Err(Error::FieldTooLarge { p, n }),
        };
        let modulus = match modulus {
            Some(m) => {
                validate_modulus(p, n, m)?;
                if !poly::is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus(m.to_vec()));
                }
                m.to_vec()
            }
            None => default_modulus(p, n),
        };
        let weights = (0..n).map(|i| p.pow(i)).collect();
        let mut spec = FieldSpec { p, n, q, modulus, weights, generator: FieldElement::ONE, tables: None };
        spec.generator = spec.find_generator();
        if q <= table_bound {
            spec.tables = Some(Arc::new(spec.build_tables()));
        }
        Ok(spec)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Field order p^n.
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A generator of the multiplicative group (the class of `x` whenever the
    /// modulus is primitive).
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn has_log_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Checks `rank < q`.
    pub fn element(&self, rank: u64) -> Result<FieldElement> {
        if rank < self.q as u64 {
            Ok(FieldElement(rank as u32))
        } else {
            Err(Error::RankOutOfRange { rank, q: self.q })
        }
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u32)
    }

    /// All elements in increasing rank order.
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn digits(&self, x: FieldElement) -> Vec<u32> {
        let mut r = x.0;
        (0..self.n)
            .map(|_| {
                let d = r % self.p;
                r /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElement {
        FieldElement(digits.iter().zip(&self.weights).map(|(d, w)| d * w).sum())
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(x.0 ^ y.0);
        }
        let (mut a, mut b, mut out) = (x.0, y.0, 0u32);
        for &w in &self.weights {
            let s = a % self.p + b % self.p;
            out += if s >= self.p { s - self.p } else { s } * w;
            a /= self.p;
            b /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        if self.p == 2 {
            return x;
        }
        let (mut a, mut out) = (x.0, 0u32);
        for &w in &self.weights {
            let d = a % self.p;
            out += if d == 0 { 0 } else { self.p - d } * w;
            a /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 == 0 || y.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.tables {
            Some(t) => FieldElement(t.exp[(t.log[x.0 as usize] + t.log[y.0 as usize]) as usize]),
            None => self.mul_schoolbook(x, y),
        }
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[x.0 as usize];
                FieldElement(t.exp[if l == 0 { 0 } else { (self.q - 1 - l) as usize }])
            }
            None => self.pow_u(x, (self.q - 2) as u128),
        })
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e` for any integer exponent; `0^0 = 1`, negative powers of 0 fail.
    pub fn pow(&self, x: FieldElement, e: i128) -> Result<FieldElement> {
        if x.0 == 0 {
            return match e {
                0 => Ok(FieldElement::ONE),
                e if e > 0 => Ok(FieldElement::ZERO),
                _ => Err(Error::DivisionByZero),
            };
        }
        let e = e.rem_euclid((self.q - 1) as i128) as u128;
        Ok(self.pow_u(x, e))
    }

    /// `x^e` for a nonnegative exponent; `0^0 = 1`.
    pub fn pow_u(&self, x: FieldElement, e: u128) -> FieldElement {
        if x.0 == 0 {
            return if e == 0 { FieldElement::ONE } else { FieldElement::ZERO };
        }
        let order = (self.q - 1) as u128;
        let e = e % order;
        if let Some(t) = &self.tables {
            let l = t.log[x.0 as usize] as u128;
            return FieldElement(t.exp[(l * e % order) as usize]);
        }
        let mut result = FieldElement::ONE;
        let mut base = x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    #[inline]
    pub fn frobenius(&self, x: FieldElement) -> FieldElement {
        self.pow_u(x, self.p as u128)
    }

    /// `x^{p^k}`.
    pub fn frobenius_k(&self, x: FieldElement, k: u32) -> FieldElement {
        (0..k % self.n).fold(x, |acc, _| self.frobenius(acc))
    }

    /// Dispatch one of the basic operations by name.
    pub fn arith(&self, op: ArithOp, x: FieldElement, y: Operand) -> Result<FieldElement> {
        let elem = || match y {
            Operand::Element(e) => Ok(e),
            _ => Err(Error::InvalidArgument(format!("{op:?} needs a field element operand"))),
        };
        match op {
            ArithOp::Add => Ok(self.add(x, elem()?)),
            ArithOp::Sub => Ok(self.sub(x, elem()?)),
            ArithOp::Mul => Ok(self.mul(x, elem()?)),
            ArithOp::Inv => self.inv(x),
            ArithOp::Neg => Ok(self.neg(x)),
            ArithOp::Frobenius => Ok(self.frobenius(x)),
            ArithOp::Pow => match y {
                Operand::Exponent(e) => self.pow(x, e),
                _ => Err(Error::InvalidArgument("pow needs an integer exponent".into())),
            },
        }
    }

    /// Absolute trace onto F_p, as an integer in `[0, p)`.
    pub fn trace_abs(&self, x: FieldElement) -> u32 {
        let mut acc = x;
        let mut sum = x;
        for _ in 1..self.n {
            acc = self.frobenius(acc);
            sum = self.add(sum, acc);
        }
        debug_assert!(sum.0 < self.p);
        sum.0
    }

    /// Trace of every element, indexed by rank. Uses F_p-linearity: the trace
    /// of a rank is the digit-weighted sum of the traces of `x^i`.
    pub fn trace_table(&self) -> Vec<u32> {
        let basis: Vec<u32> = (0..self.n).map(|i| self.trace_abs(FieldElement(self.weights[i as usize]))).collect();
        let mut table = vec![0u32; self.q as usize];
        for r in 1..self.q {
            // peel the lowest nonzero digit off a smaller rank
            let mut i = 0;
            while (r / self.weights[i]).is_multiple_of(self.p) {
                i += 1;
            }
            let prev = (r - self.weights[i]) as usize;
            table[r as usize] = (table[prev] + basis[i]) % self.p;
        }
        table
    }

    /// Relative trace onto the subfield GF(p^g): `sum_{i < n/g} x^{p^{g i}}`.
    pub fn trace_rel(&self, g: u32, x: FieldElement) -> Result<FieldElement> {
        if g == 0 || !self.n.is_multiple_of(g) {
            return Err(Error::NonDivisorSubfieldDegree { g, n: self.n });
        }
        let mut acc = x;
        let mut sum = x;
        for _ in 1..self.n / g {
            acc = self.frobenius_k(acc, g);
            sum = self.add(sum, acc);
        }
        Ok(sum)
    }

    /// Elements of the subfield GF(p^g), in rank order.
    pub fn subfield(&self, g: u32) -> Result<Vec<FieldElement>> {
        if g == 0 || !self.n.is_multiple_of(g) {
            return Err(Error::NonDivisorSubfieldDegree { g, n: self.n });
        }
        Ok(self.enumerate().filter(|&x| self.frobenius_k(x, g) == x).collect())
    }

    /// Euler's criterion; every element is a square in characteristic 2.
    pub fn is_square(&self, x: FieldElement) -> bool {
        if self.p == 2 || x.0 == 0 {
            return true;
        }
        self.pow_u(x, ((self.q - 1) / 2) as u128) == FieldElement::ONE
    }

    /// Some `y` with `y^2 = x`, or `None` when `x` is a non-square.
    pub fn sqrt(&self, x: FieldElement) -> Option<FieldElement> {
        if x.0 == 0 {
            return Some(x);
        }
        if self.p == 2 {
            // squaring is a bijection; its inverse is x^{2^{n-1}}
            return Some(self.pow_u(x, (self.q / 2) as u128));
        }
        if !self.is_square(x) {
            return None;
        }
        // Tonelli-Shanks in the cyclic group of order q-1
        let order = (self.q - 1) as u128;
        let mut s = 0u32;
        let mut t = order;
        while t.is_multiple_of(2) {
            t /= 2;
            s += 1;
        }
        let z = self.pow_u(self.generator, t);
        let mut m = s;
        let mut c = z;
        let mut r = self.pow_u(x, t.div_ceil(2));
        let mut u = self.pow_u(x, t);
        while u != FieldElement::ONE {
            let mut i = 0;
            let mut probe = u;
            while probe != FieldElement::ONE {
                probe = self.mul(probe, probe);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            r = self.mul(r, b);
            u = self.mul(u, c);
        }
        Some(r)
    }

    fn mul_schoolbook(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let a = poly::trim(self.digits(x));
        let b = poly::trim(self.digits(y));
        let r = poly::mul_mod(&a, &b, &self.modulus, self.p);
        self.from_digits(&r)
    }

    fn find_generator(&self) -> FieldElement {
        if self.q == 2 {
            return FieldElement::ONE;
        }
        let order = (self.q - 1) as u64;
        let divisors = int::prime_divisors(order);
        let is_gen = |g: FieldElement| {
            divisors.iter().all(|&r| self.pow_u(g, (order / r) as u128) != FieldElement::ONE)
        };
        // the class of x, reduced modulo the modulus
        let x = self.from_digits(&poly::rem(&[0, 1], &self.modulus, self.p));
        if x.0 != 0 && is_gen(x) {
            return x;
        }
        self.enumerate().skip(1).find(|&g| is_gen(g)).expect("a finite field has a primitive element")
    }

    fn build_tables(&self) -> LogTables {
        let order = (self.q - 1) as usize;
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![0u32; self.q as usize];
        let mut cur = FieldElement::ONE;
        for (i, slot) in exp[..order].iter_mut().enumerate() {
            *slot = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_schoolbook(cur, self.generator);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        if order == 0 {
            exp[0] = 1;
        }
        LogTables { exp, log }
    }
}

fn validate_modulus(p: u32, n: u32, m: &[u32]) -> Result<()> {
    if m.len() != n as usize + 1 {
        return Err(Error::DegreeMismatch { expected: n, detail: format!("{} coefficients given", m.len()) });
    }
    if let Some(&c) = m.iter().find(|&&c| c >= p) {
        return Err(Error::InvalidCoefficient { coefficient: c as u64, p });
    }
    if m[n as usize] != 1 {
        return Err(Error::DegreeMismatch { expected: n, detail: "leading coefficient must be 1".into() });
    }
    Ok(())
}

/// Smallest primitive monic polynomial of degree `n` over F_p.
fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    (0..count)
        .map(|low| {
            let mut f: Vec<u32> = (0..n).map(|i| ((low / (p as u64).pow(i)) % p as u64) as u32).collect();
            f.push(1);
            f
        })
        .find(|f| poly::is_primitive(f, p))
        .expect("primitive polynomials exist in every degree")
}

#[derive(Serialize, Deserialize)]
struct FieldSpecDoc {
    p: u32,
    n: u32,
    modulus: Vec<u32>,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FieldSpecDoc { p: self.p, n: self.n, modulus: self.modulus.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = FieldSpecDoc::deserialize(deserializer)?;
        FieldSpec::new(doc.p, doc.n, Some(&doc.modulus)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
