//! Walsh transforms in Z[ζ_p] and the Walsh-side characterizations of
//! c-differential uniformity.
//!
//! `W_F(u, v) = Σ_x ζ_p^{Tr(v F(x)) - Tr(u x)}`. Everything is exact; the
//! statistics are rational integers and are extracted with
//! [`CyclotomicInt::as_integer`].
//!
//! Write `P(u, v) = W_F(u, v) · conj W_F(u, c v)` on the group
//! `GF(q) × GF(q)`. Counting solutions of `F(x+a) - cF(x) = F(y+a) - cF(y)`
//! with characters gives
//!
//! `Σ_a Σ_γ N(a, γ)^{k} = q^{-2(k-1)} · P^{*k}(0, 0)`
//!
//! where `N(a, γ)` is the c-DDT entry and `P^{*k}` the k-fold additive
//! convolution. Every statistic below is an instance of this identity.

mod cyclo;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cdiff::Kernel;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::function::FunctionTable;
use crate::int::checked_pow;

pub use cyclo::CyclotomicInt;
use cyclo::{canonicalize, conj_coeffs, mul_acc};

/// Size guards for the Walsh-side computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalshLimits {
    /// Largest q for which a full Walsh table is built.
    pub table_max_q: u32,
    /// Largest q for the q^4-term APcN sum.
    pub apcn_max_q: u32,
    /// Bound on q^{2δ} for the Walsh side of [`convolution_statistic`].
    pub convolution_terms: u128,
    /// Bound on q^δ for [`derivative_walsh_statistic`].
    pub derivative_terms: u128,
}

impl Default for WalshLimits {
    fn default() -> Self {
        WalshLimits { table_max_q: 729, apcn_max_q: 64, convolution_terms: 1_000_000_000, derivative_terms: 1_000_000_000 }
    }
}

impl WalshLimits {
    pub const UNLIMITED: WalshLimits =
        WalshLimits { table_max_q: u32::MAX, apcn_max_q: u32::MAX, convolution_terms: u128::MAX, derivative_terms: u128::MAX };
}

/// q values of Z[ζ_p] stored contiguously, p coefficients each.
#[derive(Clone, Debug, PartialEq, Eq)]
struct CycloVec {
    p: usize,
    data: Vec<i128>,
}

impl CycloVec {
    fn zeros(p: usize, len: usize) -> Self {
        CycloVec { p, data: vec![0; p * len] }
    }

    fn len(&self) -> usize {
        self.data.len() / self.p
    }

    fn get(&self, i: usize) -> &[i128] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    fn to_int(&self, i: usize) -> CyclotomicInt {
        CyclotomicInt::from_coeffs(self.get(i).to_vec())
    }
}

/// Exact Walsh values `W_F(u, v)` for all (u, v), row-major in u.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalshTable {
    pub field: FieldSpec,
    /// `entries[u * q + v]`.
    pub entries: Vec<CyclotomicInt>,
}

impl WalshTable {
    pub fn get(&self, u: FieldElement, v: FieldElement) -> &CyclotomicInt {
        &self.entries[u.rank() as usize * self.field.q() as usize + v.rank() as usize]
    }
}

/// `W_F(u, v)` for a single pair.
pub fn walsh(f: &FunctionTable, u: FieldElement, v: FieldElement) -> CyclotomicInt {
    let field = f.field();
    let p = field.p();
    let mut counts = vec![0i128; p as usize];
    for x in field.enumerate() {
        let e = field.trace_abs(field.mul(v, f.eval(x))) + p - field.trace_abs(field.mul(u, x));
        counts[(e % p) as usize] += 1;
    }
    CyclotomicInt::from_coeffs(counts)
}

fn check_table_size(field: &FieldSpec, limits: &WalshLimits) -> Result<()> {
    if field.q() > limits.table_max_q {
        return Err(Error::SizeGuardExceeded {
            what: "Walsh table".into(),
            needed: field.q() as u128,
            limit: limits.table_max_q as u128,
        });
    }
    Ok(())
}

fn raw_walsh_table(f: &FunctionTable) -> CycloVec {
    let field = f.field();
    let p = field.p() as usize;
    let q = field.q() as usize;
    let tr = field.trace_table();
    // tr(v F(x)) for every v, x
    let vf: Vec<u8> = (0..q)
        .into_par_iter()
        .flat_map_iter(|v| {
            let tr = &tr;
            field.enumerate().map(move |x| tr[field.mul(FieldElement(v as u32), f.eval(x)).rank() as usize] as u8)
        })
        .collect();
    let mut out = CycloVec::zeros(p, q * q);
    out.data.par_chunks_mut(q * p).enumerate().for_each(|(u, row)| {
        let ux: Vec<u8> = field.enumerate().map(|x| tr[field.mul(FieldElement(u as u32), x).rank() as usize] as u8).collect();
        for v in 0..q {
            let cell = &mut row[v * p..(v + 1) * p];
            let vfv = &vf[v * q..(v + 1) * q];
            for x in 0..q {
                let e = (vfv[x] as usize + p - ux[x] as usize) % p;
                cell[e] += 1;
            }
            canonicalize(cell);
        }
    });
    out
}

pub fn walsh_table(f: &FunctionTable, limits: &WalshLimits) -> Result<WalshTable> {
    check_table_size(f.field(), limits)?;
    let raw = raw_walsh_table(f);
    let entries = (0..raw.len()).map(|i| raw.to_int(i)).collect();
    Ok(WalshTable { field: f.field().clone(), entries })
}

/// An inequality `lhs >= rhs` whose equality case characterizes a uniformity
/// bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statistic {
    pub lhs: i128,
    pub rhs: i128,
}

impl Statistic {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }

    pub fn equality(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn reject_unit_c(c: FieldElement) -> Result<()> {
    if c == FieldElement::ONE {
        Err(Error::UnitC)
    } else {
        Ok(())
    }
}

fn q_pow(field: &FieldSpec, e: u32) -> i128 {
    checked_pow(field.q() as u128, e).expect("statistics stay within i128") as i128
}

/// Additive structure of GF(q) × GF(q), indexed `u * q + v`.
struct PairGroup {
    q: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl PairGroup {
    fn new(field: &FieldSpec, with_add: bool) -> Self {
        let q = field.q() as usize;
        let add = if with_add {
            (0..q * q).map(|i| field.add(FieldElement((i / q) as u32), FieldElement((i % q) as u32)).rank()).collect()
        } else {
            Vec::new()
        };
        let neg = field.enumerate().map(|x| field.neg(x).rank()).collect();
        PairGroup { q, add, neg }
    }

    fn add(&self, s: usize, t: usize) -> usize {
        let (su, sv) = (s / self.q, s % self.q);
        let (tu, tv) = (t / self.q, t % self.q);
        self.add[su * self.q + tu] as usize * self.q + self.add[sv * self.q + tv] as usize
    }

    fn neg(&self, s: usize) -> usize {
        self.neg[s / self.q] as usize * self.q + self.neg[s % self.q] as usize
    }

    fn sub(&self, s: usize, t: usize) -> usize {
        self.add(s, self.neg(t))
    }
}

/// `P(u, v) = W(u, v) conj W(u, c v)`.
fn pair_product(f: &FunctionTable, c: FieldElement, w: &CycloVec) -> CycloVec {
    let field = f.field();
    let q = field.q() as usize;
    let p = w.p;
    let cv: Vec<usize> = field.enumerate().map(|v| field.mul(c, v).rank() as usize).collect();
    let mut out = CycloVec::zeros(p, q * q);
    out.data.par_chunks_mut(p).enumerate().for_each(|(s, cell)| {
        let (u, v) = (s / q, s % q);
        let rhs = conj_coeffs(w.get(u * q + cv[v]));
        mul_acc(cell, w.get(s), &rhs);
        canonicalize(cell);
    });
    out
}

/// `(a * b)(t) = Σ_s a(s) b(t - s)` over the pair group.
fn convolve(g: &PairGroup, a: &CycloVec, b: &CycloVec) -> CycloVec {
    let p = a.p;
    let n = a.len();
    let mut out = CycloVec::zeros(p, n);
    out.data.par_chunks_mut(p).enumerate().for_each(|(t, cell)| {
        for s in 0..n {
            mul_acc(cell, a.get(s), b.get(g.sub(t, s)));
        }
        canonicalize(cell);
    });
    out
}

/// `(a * b)(0) = Σ_s a(s) b(-s)`.
fn convolve_at_zero(g: &PairGroup, a: &CycloVec, b: &CycloVec) -> CyclotomicInt {
    let mut acc = vec![0i128; a.p];
    for s in 0..a.len() {
        mul_acc(&mut acc, a.get(s), b.get(g.neg(s)));
    }
    CyclotomicInt::from_coeffs(acc)
}

/// `Σ_{u,v} |W_F(u,v)|^2 |W_F(u,cv)|^2 >= p^{4n}`, with equality iff F is
/// PcN (all directions a, including a = 0).
pub fn pcn_power_sum(f: &FunctionTable, c: FieldElement, limits: &WalshLimits) -> Result<Statistic> {
    reject_unit_c(c)?;
    check_table_size(f.field(), limits)?;
    let w = raw_walsh_table(f);
    let pp = pair_product(f, c, &w);
    // single terms are real but only rational for p <= 3; the total is rational
    let terms: Vec<CyclotomicInt> = (0..pp.len()).into_par_iter().map(|s| pp.to_int(s).norm_sq()).collect();
    let lhs = terms.iter().fold(CyclotomicInt::zero(f.field().p()), |acc, t| acc.add(t)).as_integer()?;
    Ok(Statistic { lhs, rhs: q_pow(f.field(), 4) })
}

/// The six-fold sum
/// `Σ conj W(u1+u2, v1+v2) W(u1+u2, c(v1+v2)) W(u1,v1) conj W(u1,cv1) W(u2,v2) conj W(u2,cv2)`
/// against `3 p^{2n} S - 2 p^{6n}` with S the [`pcn_power_sum`]. Equality iff
/// the uniformity (all a) is at most 2.
pub fn apcn_statistic(f: &FunctionTable, c: FieldElement, limits: &WalshLimits) -> Result<Statistic> {
    reject_unit_c(c)?;
    apcn_guard(f.field(), limits)?;
    let w = raw_walsh_table(f);
    let pp = pair_product(f, c, &w);
    let g = PairGroup::new(f.field(), true);
    let lhs = six_fold(&g, &pp, |s12| conj_coeffs(pp.get(s12)), |s| pp.get(s).to_vec()).as_integer()?;
    let s = pcn_power_sum(f, c, &WalshLimits::UNLIMITED)?.lhs;
    let rhs = 3 * q_pow(f.field(), 2) * s - 2 * q_pow(f.field(), 6);
    Ok(Statistic { lhs, rhs })
}

/// The six-fold sum with every single-index factor conjugated:
/// `Σ conj W(u1+u2, v1+v2) W(u1+u2, c(v1+v2)) conj W(u1,v1) conj W(u2,v2) W(u1,cv1) W(u2,cv2)`.
/// Kept for comparison with [`apcn_statistic`]; it need not be an integer.
pub fn apcn_sum_conjugated(f: &FunctionTable, c: FieldElement, limits: &WalshLimits) -> Result<CyclotomicInt> {
    reject_unit_c(c)?;
    apcn_guard(f.field(), limits)?;
    let w = raw_walsh_table(f);
    let pp = pair_product(f, c, &w);
    let g = PairGroup::new(f.field(), true);
    Ok(six_fold(&g, &pp, |s12| conj_coeffs(pp.get(s12)), |s| conj_coeffs(pp.get(s))))
}

fn apcn_guard(field: &FieldSpec, limits: &WalshLimits) -> Result<()> {
    if field.q() > limits.apcn_max_q {
        return Err(Error::SizeGuardExceeded {
            what: "APcN six-fold Walsh sum (q^4 terms)".into(),
            needed: field.q() as u128,
            limit: limits.apcn_max_q as u128,
        });
    }
    Ok(())
}

/// `Σ_{s1,s2} joint(s1+s2) · single(s1) · single(s2)`.
fn six_fold(
    g: &PairGroup,
    pp: &CycloVec,
    joint: impl Fn(usize) -> Vec<i128> + Sync,
    single: impl Fn(usize) -> Vec<i128> + Sync,
) -> CyclotomicInt {
    let p = pp.p;
    let n = pp.len();
    let singles: Vec<Vec<i128>> = (0..n).map(&single).collect();
    let joints: Vec<Vec<i128>> = (0..n).map(&joint).collect();
    let partials: Vec<Vec<i128>> = (0..n)
        .into_par_iter()
        .map(|s1| {
            let mut acc = vec![0i128; p];
            let mut tmp = vec![0i128; p];
            for s2 in 0..n {
                tmp.iter_mut().for_each(|t| *t = 0);
                mul_acc(&mut tmp, &joints[g.add(s1, s2)], &singles[s2]);
                mul_acc(&mut acc, &tmp, &singles[s1]);
            }
            canonicalize(&mut acc);
            acc
        })
        .collect();
    let mut total = vec![0i128; p];
    for part in partials {
        total.iter_mut().zip(part).for_each(|(t, x)| *t += x);
    }
    CyclotomicInt::from_coeffs(total)
}

/// Coefficients `A_0..A_δ` of `(x-1)(x-2)...(x-δ)`.
pub fn phi_coefficients(delta: u32) -> Vec<i128> {
    let mut a = vec![1i128];
    for i in 1..=delta as i128 {
        let mut next = vec![0i128; a.len() + 1];
        for (j, &c) in a.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= i * c;
        }
        a = next;
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvolutionStatistic {
    pub delta: u32,
    /// `Σ_{a,b} φ_δ(n_F(a,b,c))` from solution counts.
    pub count_side: i128,
    /// The same sum through Walsh convolutions; `None` when over the guard.
    pub walsh_side: Option<i128>,
}

impl ConvolutionStatistic {
    /// Zero exactly when every c-DDT entry (all a) is at most δ.
    pub fn equality(&self) -> bool {
        self.count_side == 0
    }

    pub fn sides_agree(&self) -> Option<bool> {
        self.walsh_side.map(|w| w == self.count_side)
    }
}

/// `M_k = Σ_a Σ_γ N(a,γ)^k` for k = 1..=kmax, index k-1.
fn ddt_moments(f: &FunctionTable, c: FieldElement, kmax: u32) -> Vec<i128> {
    let kernel = Kernel::new(f);
    let st = kernel.c_state(c);
    let q = kernel.q();
    let per_row: Vec<Vec<i128>> = (0..q as u32)
        .into_par_iter()
        .map_init(
            || vec![0u32; q],
            |hist, a| {
                kernel.accumulate_row(&st, a, hist);
                let mut m = vec![0i128; kmax as usize];
                for h in hist.iter_mut() {
                    let mut pw = 1i128;
                    for slot in m.iter_mut() {
                        pw *= *h as i128;
                        *slot += pw;
                    }
                    *h = 0;
                }
                m
            },
        )
        .collect();
    let mut total = vec![0i128; kmax as usize];
    for row in per_row {
        total.iter_mut().zip(row).for_each(|(t, x)| *t += x);
    }
    total
}

/// `Σ_{a,b} φ_δ(n_F(a,b,c)) >= 0` where `n_F(a,b,c)` counts the x with
/// `cD_aF(x) = cD_aF(b)` and `φ_δ(x) = (x-1)...(x-δ)`. Zero iff the
/// c-differential uniformity (all a) is at most δ.
pub fn convolution_statistic(f: &FunctionTable, c: FieldElement, delta: u32, limits: &WalshLimits) -> Result<ConvolutionStatistic> {
    reject_unit_c(c)?;
    if delta == 0 {
        return Err(Error::InvalidArgument("delta must be at least 1".into()));
    }
    let field = f.field();
    let a = phi_coefficients(delta);
    let moments = ddt_moments(f, c, delta + 1);
    let count_side = q_pow(field, 2) * a[0] + (1..=delta as usize).map(|j| a[j] * moments[j]).sum::<i128>();

    let terms = checked_pow(field.q() as u128, 2 * delta).unwrap_or(u128::MAX);
    let walsh_side = if terms <= limits.convolution_terms && field.q() <= limits.table_max_q {
        Some(convolution_walsh_side(f, c, &a)?)
    } else {
        None
    };
    Ok(ConvolutionStatistic { delta, count_side, walsh_side })
}

fn convolution_walsh_side(f: &FunctionTable, c: FieldElement, a: &[i128]) -> Result<i128> {
    let field = f.field();
    let delta = a.len() - 1;
    let w = raw_walsh_table(f);
    let pp = pair_product(f, c, &w);
    let g = PairGroup::new(field, delta >= 2);
    let mut total = q_pow(field, 2) * a[0];
    // conv holds P^{*j}
    let mut conv = pp.clone();
    for (j, &aj) in a.iter().enumerate().skip(1) {
        if j > 1 {
            conv = convolve(&g, &conv, &pp);
        }
        let at_zero = convolve_at_zero(&g, &conv, &pp).as_integer()?;
        let scale = q_pow(field, 2 * j as u32);
        if at_zero % scale != 0 {
            return Err(Error::NotRationalInteger(format!("P^*{}(0) = {at_zero} not divisible by q^{}", j + 1, 2 * j)));
        }
        total += aj * (at_zero / scale);
    }
    Ok(total)
}

/// `Σ_{a,γ} N(a,γ)^{k}` from the c-DDT and from `q^{-2(k-1)} P^{*k}(0,0)`.
pub fn moment_duality(f: &FunctionTable, c: FieldElement, k: u32) -> Result<(i128, CyclotomicInt)> {
    if k < 2 {
        return Err(Error::InvalidArgument("moment order must be at least 2".into()));
    }
    let count = ddt_moments(f, c, k)[k as usize - 1];
    let w = raw_walsh_table(f);
    let pp = pair_product(f, c, &w);
    let g = PairGroup::new(f.field(), k >= 3);
    let mut conv = pp.clone();
    for _ in 2..k {
        conv = convolve(&g, &conv, &pp);
    }
    Ok((count, convolve_at_zero(&g, &conv, &pp)))
}

/// Walsh values `W_D(0, v)` of `D = cD_aF`, indexed by v.
fn derivative_spectrum(f: &FunctionTable, c: FieldElement, a: FieldElement) -> CycloVec {
    let field = f.field();
    let p = field.p() as usize;
    let q = field.q() as usize;
    let tr = field.trace_table();
    let kernel = Kernel::new(f);
    let d = kernel.row_values(&kernel.c_state(c), a.rank());
    let mut out = CycloVec::zeros(p, q);
    out.data.par_chunks_mut(p).enumerate().for_each(|(v, cell)| {
        for &dx in &d {
            cell[tr[field.mul(FieldElement(v as u32), FieldElement(dx)).rank() as usize] as usize] += 1;
        }
        canonicalize(cell);
    });
    out
}

/// `Σ_s x(s) y(t - s)` over GF(q).
fn convolve_line(field: &FieldSpec, x: &CycloVec, y: &CycloVec) -> CycloVec {
    let q = field.q() as usize;
    let p = x.p;
    let mut out = CycloVec::zeros(p, q);
    out.data.par_chunks_mut(p).enumerate().for_each(|(t, cell)| {
        let t = FieldElement(t as u32);
        for s in field.enumerate() {
            mul_acc(cell, x.get(s.rank() as usize), y.get(field.sub(t, s).rank() as usize));
        }
        canonicalize(cell);
    });
    out
}

fn derivative_guard(field: &FieldSpec, delta: u32, limits: &WalshLimits) -> Result<()> {
    let terms = checked_pow(field.q() as u128, delta).unwrap_or(u128::MAX);
    if terms > limits.derivative_terms {
        return Err(Error::SizeGuardExceeded { what: "derivative Walsh sum (q^delta terms)".into(), needed: terms, limit: limits.derivative_terms });
    }
    Ok(())
}

fn derivative_sum(
    f: &FunctionTable,
    c: FieldElement,
    a: FieldElement,
    delta: u32,
    limits: &WalshLimits,
    conjugate_joint: bool,
) -> Result<i128> {
    reject_unit_c(c)?;
    if delta == 0 {
        return Err(Error::InvalidArgument("delta must be at least 1".into()));
    }
    let field = f.field();
    derivative_guard(field, delta, limits)?;
    let coeffs = phi_coefficients(delta);
    let w = derivative_spectrum(f, c, a);
    let joint: Vec<Vec<i128>> =
        (0..w.len()).map(|s| if conjugate_joint { conj_coeffs(w.get(s)) } else { w.get(s).to_vec() }).collect();
    let mut total = q_pow(field, 1) * coeffs[0];
    let mut conv = w.clone();
    for (j, &aj) in coeffs.iter().enumerate().skip(1) {
        if j > 1 {
            conv = convolve_line(field, &conv, &w);
        }
        // Σ_{v1..vj} joint(Σ v_i) Π W_D(0, v_i) = Σ_s joint(s) w^{*j}(s)
        let mut acc = vec![0i128; w.p];
        for (s, js) in joint.iter().enumerate() {
            mul_acc(&mut acc, js, conv.get(s));
        }
        let sum = CyclotomicInt::from_coeffs(acc).as_integer()?;
        let scale = q_pow(field, j as u32);
        if sum % scale != 0 {
            return Err(Error::NotRationalInteger(format!("derivative sum {sum} not divisible by q^{j}")));
        }
        total += aj * (sum / scale);
    }
    Ok(total)
}

/// `p^n A_0 + Σ_j p^{-jn} A_j Σ_{v_1..v_j} conj W_D(0, Σ v_i) Π W_D(0, v_i)`
/// for `D = cD_aF`. Equals `Σ_x φ_δ(#{y : D(y) = D(x)})`, so it is
/// nonnegative and zero iff row a of the c-DDT is bounded by δ.
pub fn derivative_walsh_statistic(f: &FunctionTable, c: FieldElement, a: FieldElement, delta: u32, limits: &WalshLimits) -> Result<i128> {
    derivative_sum(f, c, a, delta, limits, true)
}

/// The same sum without the conjugate on `W_D(0, Σ v_i)`. It counts tuples
/// with `D(x_i) = -D(x_0)` and can be negative in odd characteristic.
pub fn derivative_walsh_statistic_unconjugated(
    f: &FunctionTable,
    c: FieldElement,
    a: FieldElement,
    delta: u32,
    limits: &WalshLimits,
) -> Result<i128> {
    derivative_sum(f, c, a, delta, limits, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeWalshSummary {
    pub delta: u32,
    /// Statistic for each direction a, indexed by rank.
    pub per_a: Vec<i128>,
    /// Every per-a value is zero.
    pub all_zero: bool,
    /// Directions with a nonzero value.
    pub nonzero_directions: Vec<FieldElement>,
}

pub fn derivative_walsh_all(f: &FunctionTable, c: FieldElement, delta: u32, limits: &WalshLimits) -> Result<DerivativeWalshSummary> {
    let per_a = f
        .field()
        .enumerate()
        .map(|a| derivative_walsh_statistic(f, c, a, delta, limits))
        .collect::<Result<Vec<i128>>>()?;
    let nonzero_directions: Vec<FieldElement> =
        per_a.iter().enumerate().filter(|(_, &v)| v != 0).map(|(a, _)| FieldElement(a as u32)).collect();
    Ok(DerivativeWalshSummary { delta, all_zero: nonzero_directions.is_empty(), per_a, nonzero_directions })
}
