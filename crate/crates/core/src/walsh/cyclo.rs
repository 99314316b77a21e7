//! Exact arithmetic in the cyclotomic ring Z[ζ_p].

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `Σ coeffs[j] ζ_p^j`, stored with `coeffs[p-1] = 0` so the remaining
/// entries are coordinates in the basis `1, ζ, ..., ζ^{p-2}`.
///
/// For p = 2 this is just an integer (ζ_2 = -1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    coeffs: Vec<i128>,
}

impl CyclotomicInt {
    pub fn zero(p: u32) -> Self {
        CyclotomicInt { coeffs: vec![0; p as usize] }
    }

    pub fn from_int(p: u32, v: i128) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = v;
        z.canonicalize();
        z
    }

    /// `ζ_p^j`.
    pub fn zeta_pow(p: u32, j: u32) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[(j % p) as usize] = 1;
        z.canonicalize();
        z
    }

    /// Any coefficient vector of length p; canonicalized on the way in.
    pub fn from_coeffs(coeffs: Vec<i128>) -> Self {
        assert!(coeffs.len() >= 2, "cyclotomic vectors need p >= 2 entries");
        let mut z = CyclotomicInt { coeffs };
        z.canonicalize();
        z
    }

    pub fn p(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    fn canonicalize(&mut self) {
        canonicalize(&mut self.coeffs);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p(), other.p());
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicInt { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicInt { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: i128) -> Self {
        CyclotomicInt { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p(), other.p());
        let mut out = vec![0; self.coeffs.len()];
        mul_acc(&mut out, &self.coeffs, &other.coeffs);
        let mut z = CyclotomicInt { coeffs: out };
        z.canonicalize();
        z
    }

    /// Complex conjugate: ζ^j -> ζ^{-j}.
    pub fn conj(&self) -> Self {
        let mut z = CyclotomicInt { coeffs: conj_coeffs(&self.coeffs) };
        z.canonicalize();
        z
    }

    /// `z * conj(z)`; real and nonnegative, but not necessarily rational.
    pub fn norm_sq(&self) -> Self {
        self.mul(&self.conj())
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Result<i128> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Ok(self.coeffs[0])
        } else {
            Err(Error::NotRationalInteger(self.to_string()))
        }
    }
}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicInt({})", self)
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            match (j, mag) {
                (0, _) => write!(f, "{sign}{mag}")?,
                (_, 1) => write!(f, "{sign}z^{j}")?,
                _ => write!(f, "{sign}{mag}z^{j}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for CyclotomicInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<i128>::deserialize(d)?;
        if coeffs.len() < 2 {
            return Err(serde::de::Error::custom("cyclotomic vectors need at least 2 entries"));
        }
        Ok(CyclotomicInt::from_coeffs(coeffs))
    }
}

pub(crate) fn canonicalize(c: &mut [i128]) {
    let last = c[c.len() - 1];
    if last != 0 {
        c.iter_mut().for_each(|x| *x -= last);
    }
}

/// `acc += a * b` with exponents reduced mod p. Works on non-canonical vectors.
pub(crate) fn mul_acc(acc: &mut [i128], a: &[i128], b: &[i128]) {
    let p = acc.len();
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let k = if i + j >= p { i + j - p } else { i + j };
            acc[k] += x * y;
        }
    }
}

pub(crate) fn conj_coeffs(c: &[i128]) -> Vec<i128> {
    let p = c.len();
    (0..p).map(|j| c[(p - j) % p]).collect()
}
