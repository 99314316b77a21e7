//! c-derivatives, c-differential distribution tables and c-differential
//! uniformity.
//!
//! For a function F and c in GF(p^n) the c-derivative in direction a is
//! `x -> F(x + a) - c F(x)`; the entry (a, b) of the c-DDT counts the x with
//! `F(x + a) - c F(x) = b`. The uniformity is the largest entry over the
//! admissible directions a, which depend on the [`AConvention`].
//!
//! Sweeps over c run in parallel on the ambient rayon pool. Every result is
//! produced per item and collected in rank order, so the output does not
//! depend on the number of worker threads.

mod kernel;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::function::{FunctionTable, Origin};

pub(crate) use kernel::Kernel;

/// Which directions a enter the maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AConvention {
    /// All a when c != 1, nonzero a when c = 1.
    PaperFootnote,
    /// Nonzero a for every c.
    NonzeroOnly,
}

impl AConvention {
    pub const BOTH: [AConvention; 2] = [AConvention::PaperFootnote, AConvention::NonzeroOnly];

    pub fn includes_zero_direction(self, c: FieldElement) -> bool {
        self == AConvention::PaperFootnote && c != FieldElement::ONE
    }

    pub fn label(self) -> &'static str {
        match self {
            AConvention::PaperFootnote => "paper",
            AConvention::NonzeroOnly => "nonzero",
        }
    }
}

impl fmt::Display for AConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    PcN,
    APcN,
    #[serde(rename = "higher")]
    Higher,
}

impl Classification {
    pub fn of(uniformity: u32) -> Self {
        match uniformity {
            0 | 1 => Classification::PcN,
            2 => Classification::APcN,
            _ => Classification::Higher,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::PcN => "PcN",
            Classification::APcN => "APcN",
            Classification::Higher => "higher",
        })
    }
}

/// Which values of c a spectrum covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum CFilter {
    All,
    Nonzero,
    /// Everything except 0 and 1.
    Exclude01,
    List(Vec<FieldElement>),
}

impl CFilter {
    pub fn values(&self, field: &FieldSpec) -> Result<Vec<FieldElement>> {
        Ok(match self {
            CFilter::All => field.enumerate().collect(),
            CFilter::Nonzero => field.enumerate().skip(1).collect(),
            CFilter::Exclude01 => field.enumerate().skip(2).collect(),
            CFilter::List(list) => {
                let mut out = Vec::with_capacity(list.len());
                for c in list {
                    out.push(field.element(c.rank() as u64)?);
                }
                out.sort();
                out.dedup();
                out
            }
        })
    }

    pub fn describe(&self) -> String {
        match self {
            CFilter::All => "all".into(),
            CFilter::Nonzero => "nonzero".into(),
            CFilter::Exclude01 => "no01".into(),
            CFilter::List(l) => {
                let parts: Vec<String> = l.iter().map(|c| c.to_string()).collect();
                parts.join(",")
            }
        }
    }
}

impl FromStr for CFilter {
    type Err = Error;

    /// `all`, `nonzero`, `no01`, or a comma-separated list of ranks.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(CFilter::All),
            "nonzero" => Ok(CFilter::Nonzero),
            "no01" => Ok(CFilter::Exclude01),
            list => list
                .split(',')
                .map(|r| r.trim().parse::<u32>().map(FieldElement))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(CFilter::List)
                .map_err(|_| Error::InvalidArgument(format!("c-set {list:?}: expected all, nonzero, no01 or a list of ranks"))),
        }
    }
}

impl FromStr for AConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AConvention::BOTH
            .into_iter()
            .find(|c| c.label() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("a-convention {s:?}: expected paper or nonzero")))
    }
}

/// A DDT entry attaining the uniformity, with its explicit solutions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub a: FieldElement,
    pub b: FieldElement,
    pub solutions: Vec<FieldElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Uniformity {
    pub c: FieldElement,
    pub value: u32,
    pub witness: Witness,
    pub classification: Classification,
}

/// Exact symmetries that let a sweep skip rows. All are checked against the
/// table itself, except scaling, which relies on the monomial origin that
/// [`FunctionTable`] guarantees.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Symmetries {
    /// F(x^p) = F(x)^p: rows for c^p are rows for c with a -> a^p.
    pub frobenius: bool,
    /// F(-x) = +-F(x): rows a and -a share their maximum.
    pub parity: bool,
    /// F(t x) = t^d F(x): every nonzero row is a relabelled copy of row 1.
    pub scaling: bool,
}

impl Symmetries {
    pub fn detect(f: &FunctionTable) -> Self {
        let field = f.field();
        let frobenius = field.enumerate().all(|x| f.eval(field.frobenius(x)) == field.frobenius(f.eval(x)));
        let parity = field.p() != 2 && {
            let even = field.enumerate().all(|x| f.eval(field.neg(x)) == f.eval(x));
            even || field.enumerate().all(|x| f.eval(field.neg(x)) == field.neg(f.eval(x)))
        };
        let scaling = matches!(f.origin(), Origin::Monomial { .. } | Origin::Inverse);
        Symmetries { frobenius, parity, scaling }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Use [`Symmetries`] to skip redundant rows and values of c.
    pub symmetry: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { symmetry: true }
    }
}

impl SweepOptions {
    pub const BRUTE_FORCE: SweepOptions = SweepOptions { symmetry: false };
}

/// Row maxima for one c: the a = 0 row and the best nonzero row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CProfile {
    pub c: FieldElement,
    pub zero_row_max: u32,
    pub nonzero_max: u32,
    /// Smallest nonzero a whose row reaches `nonzero_max`.
    pub nonzero_arg: FieldElement,
}

impl CProfile {
    /// Uniformity and the smallest direction a attaining it.
    pub fn under(&self, conv: AConvention) -> (u32, FieldElement) {
        if conv.includes_zero_direction(self.c) && self.zero_row_max >= self.nonzero_max {
            (self.zero_row_max, FieldElement::ZERO)
        } else {
            (self.nonzero_max, self.nonzero_arg)
        }
    }
}

/// The c-derivative `x -> F(x + a) - c F(x)` as a raw table.
pub fn c_derivative(f: &FunctionTable, c: FieldElement, a: FieldElement) -> FunctionTable {
    let k = Kernel::new(f);
    let st = k.c_state(c);
    FunctionTable::from_parts_unchecked(f.field(), k.row_values(&st, a.rank()))
}

/// Dense c-DDT, row-major: entry `a * q + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ddt {
    q: usize,
    counts: Vec<u32>,
}

impl Ddt {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn get(&self, a: FieldElement, b: FieldElement) -> u32 {
        self.counts[a.rank() as usize * self.q + b.rank() as usize]
    }

    pub fn row(&self, a: FieldElement) -> &[u32] {
        let s = a.rank() as usize * self.q;
        &self.counts[s..s + self.q]
    }

    /// Largest entry over the rows admitted by `conv`.
    pub fn max_entry(&self, c: FieldElement, conv: AConvention) -> u32 {
        let start = if conv.includes_zero_direction(c) { 0 } else { 1 };
        (start..self.q).flat_map(|a| self.counts[a * self.q..(a + 1) * self.q].iter().copied()).max().unwrap_or(0)
    }
}

/// Largest field for which [`ddt_c`] materializes the matrix.
pub const DENSE_DDT_LIMIT: u32 = 4096;

pub fn ddt_c(f: &FunctionTable, c: FieldElement) -> Result<Ddt> {
    let q = f.field().q();
    if q > DENSE_DDT_LIMIT {
        return Err(Error::SizeGuardExceeded {
            what: "dense c-DDT".into(),
            needed: q as u128 * q as u128,
            limit: DENSE_DDT_LIMIT as u128 * DENSE_DDT_LIMIT as u128,
        });
    }
    let k = Kernel::new(f);
    let st = k.c_state(c);
    let q = q as usize;
    let mut counts = vec![0u32; q * q];
    counts.par_chunks_mut(q).enumerate().for_each(|(a, row)| k.accumulate_row(&st, a as u32, row));
    Ok(Ddt { q, counts })
}

/// Streaming histogram of one DDT row, for fields too large for [`ddt_c`].
pub fn ddt_row(f: &FunctionTable, c: FieldElement, a: FieldElement) -> Vec<u32> {
    let k = Kernel::new(f);
    let st = k.c_state(c);
    let mut hist = vec![0u32; k.q()];
    k.accumulate_row(&st, a.rank(), &mut hist);
    hist
}

/// c-differential uniformity of F for one c, with the lexicographically
/// smallest witness (a, b).
pub fn uniformity(f: &FunctionTable, c: FieldElement, conv: AConvention) -> Uniformity {
    uniformity_with(f, c, conv, SweepOptions::default())
}

pub fn uniformity_with(f: &FunctionTable, c: FieldElement, conv: AConvention, opts: SweepOptions) -> Uniformity {
    let engine = Engine::new(f, opts);
    let profile = engine.profiles(&[c]).pop().expect("one profile per c");
    engine.resolve(&profile, conv)
}

/// Row profiles for each c in `cs` (any order, duplicates allowed), returned
/// in the order given. Both conventions can be read off one profile.
pub fn profiles(f: &FunctionTable, cs: &[FieldElement], opts: SweepOptions) -> Vec<CProfile> {
    Engine::new(f, opts).profiles(cs)
}

/// Uniformity for every c selected by `filter`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub field: FieldSpec,
    pub origin: Origin,
    pub convention: AConvention,
    pub c_set: CFilter,
    pub c_results: Vec<Uniformity>,
    /// `None` when the c-set is empty.
    pub overall_max: Option<u32>,
}

pub fn spectrum(f: &FunctionTable, filter: &CFilter, conv: AConvention, opts: SweepOptions) -> Result<SpectrumReport> {
    let cs = filter.values(f.field())?;
    let engine = Engine::new(f, opts);
    let profiles = engine.profiles(&cs);
    let c_results: Vec<Uniformity> = profiles.par_iter().map(|p| engine.resolve(p, conv)).collect();
    let overall_max = c_results.iter().map(|u| u.value).max();
    Ok(SpectrumReport {
        field: f.field().clone(),
        origin: f.origin().clone(),
        convention: conv,
        c_set: filter.clone(),
        c_results,
        overall_max,
    })
}

impl SpectrumReport {
    /// CSV with columns c_rank, uniformity, witness_a, witness_b, classification.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["c_rank", "uniformity", "witness_a", "witness_b", "classification"])?;
        for r in &self.c_results {
            w.write_record([
                r.c.to_string(),
                r.value.to_string(),
                r.witness.a.to_string(),
                r.witness.b.to_string(),
                r.classification.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One solution of `cD_aF(x0) = b1` checked against the second equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossSolution {
    pub x0: FieldElement,
    /// F(x0) = (b1 - b2) / (c2 - c1).
    pub predicted: bool,
    /// x0 also solves `c2D_aF(x) = b2`.
    pub actual: bool,
}

/// For every solution x0 of `F(x+a) - c1 F(x) = b1`, compare membership in
/// the solution set of `F(x+a) - c2 F(x) = b2` with the closed-form test
/// `F(x0) = (b1 - b2)/(c2 - c1)`.
pub fn cross_solution_check(
    f: &FunctionTable,
    a: FieldElement,
    b1: FieldElement,
    b2: FieldElement,
    c1: FieldElement,
    c2: FieldElement,
) -> Result<Vec<CrossSolution>> {
    if c1 == c2 || c1.is_zero() || c2.is_zero() {
        return Err(Error::DegenerateCs);
    }
    let field = f.field();
    let target = field.div(field.sub(b1, b2), field.sub(c2, c1))?;
    let d = |x: FieldElement, c: FieldElement| field.sub(f.eval(field.add(x, a)), field.mul(c, f.eval(x)));
    Ok(field
        .enumerate()
        .filter(|&x| d(x, c1) == b1)
        .map(|x0| CrossSolution { x0, predicted: f.eval(x0) == target, actual: d(x0, c2) == b2 })
        .collect())
}

/// Shared machinery behind [`uniformity`], [`profiles`] and [`spectrum`].
struct Engine<'a> {
    kernel: Kernel<'a>,
    sym: Symmetries,
    /// Directions whose rows are computed; the rest are copies.
    rows: Vec<u32>,
    frob: Vec<u32>,
}

impl<'a> Engine<'a> {
    fn new(f: &'a FunctionTable, opts: SweepOptions) -> Self {
        let kernel = Kernel::new(f);
        let field = f.field();
        let sym = if opts.symmetry { Symmetries::detect(f) } else { Symmetries::default() };
        let q = field.q();
        let rows: Vec<u32> = if sym.scaling {
            vec![0, 1]
        } else if sym.parity {
            (0..q).filter(|&a| a <= field.neg(FieldElement(a)).rank()).collect()
        } else {
            (0..q).collect()
        };
        let frob = if sym.frobenius { field.enumerate().map(|x| field.frobenius(x).rank()).collect() } else { Vec::new() };
        Engine { kernel, sym, rows, frob }
    }

    /// Row maximum for every a, using the row symmetries.
    fn row_maxima(&self, c: FieldElement) -> Vec<u32> {
        let st = self.kernel.c_state(c);
        let q = self.kernel.q();
        let computed: Vec<(u32, u32)> = self
            .rows
            .par_iter()
            .with_min_len(8)
            .map_init(|| vec![0u32; q], |hist, &a| (a, self.kernel.row_max(&st, a, hist).0))
            .collect();
        let mut maxima = vec![0u32; q];
        for &(a, m) in &computed {
            maxima[a as usize] = m;
        }
        if self.sym.scaling {
            let m1 = maxima[1];
            maxima[1..].iter_mut().for_each(|m| *m = m1);
        } else if self.sym.parity {
            let field = self.kernel.field();
            for &(a, m) in &computed {
                maxima[field.neg(FieldElement(a)).rank() as usize] = m;
            }
        }
        maxima
    }

    fn profile_from(&self, c: FieldElement, maxima: &[u32], relabel: impl Fn(u32) -> u32) -> CProfile {
        // maxima are indexed by the representative's directions; `relabel`
        // maps a direction for c to the representative's direction
        let zero_row_max = maxima[relabel(0) as usize];
        let mut nonzero_max = 0;
        let mut nonzero_arg = FieldElement::ZERO;
        for a in 1..maxima.len() as u32 {
            let m = maxima[relabel(a) as usize];
            if m > nonzero_max {
                nonzero_max = m;
                nonzero_arg = FieldElement(a);
            }
        }
        CProfile { c, zero_row_max, nonzero_max, nonzero_arg }
    }

    fn profiles(&self, cs: &[FieldElement]) -> Vec<CProfile> {
        if !self.sym.frobenius {
            return cs
                .par_iter()
                .map(|&c| {
                    let maxima = self.row_maxima(c);
                    self.profile_from(c, &maxima, |a| a)
                })
                .collect();
        }
        // group requested c by Frobenius orbit; c = rep^{p^i}
        let n = self.kernel.field().n();
        let mut groups: std::collections::BTreeMap<u32, Vec<(usize, u32)>> = std::collections::BTreeMap::new();
        for (idx, &c) in cs.iter().enumerate() {
            let mut orbit = Vec::with_capacity(n as usize);
            let mut cur = c.rank();
            for _ in 0..n {
                orbit.push(cur);
                cur = self.frob[cur as usize];
            }
            // orbit[i] = c^{p^i}; rep = orbit[j] means c = rep^{p^{n-j}}
            let (j, rep) = orbit.iter().enumerate().min_by_key(|&(_, &r)| r).map(|(j, &r)| (j, r)).unwrap();
            groups.entry(rep).or_default().push((idx, (n - j as u32) % n));
        }
        let groups: Vec<(u32, Vec<(usize, u32)>)> = groups.into_iter().collect();
        let mut out: Vec<(usize, CProfile)> = groups
            .par_iter()
            .flat_map_iter(|(rep, members)| {
                let maxima = self.row_maxima(FieldElement(*rep));
                members
                    .iter()
                    .map(|&(idx, shift)| {
                        // rows of rep^{p^shift} at a equal rows of rep at a^{p^{n-shift}}
                        let back = (n - shift) % n;
                        let relabel = |a: u32| (0..back).fold(a, |acc, _| self.frob[acc as usize]);
                        (idx, self.profile_from(cs[idx], &maxima, relabel))
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        out.sort_by_key(|&(idx, _)| idx);
        out.into_iter().map(|(_, p)| p).collect()
    }

    /// Smallest b in the winning row, with its solution set.
    fn resolve(&self, profile: &CProfile, conv: AConvention) -> Uniformity {
        let (value, a) = profile.under(conv);
        let st = self.kernel.c_state(profile.c);
        let row = self.kernel.row_values(&st, a.rank());
        let mut hist = vec![0u32; self.kernel.q()];
        row.iter().for_each(|&v| hist[v as usize] += 1);
        let b = hist.iter().position(|&h| h == value).expect("profile maximum occurs in its row") as u32;
        let solutions = row.iter().enumerate().filter(|&(_, &v)| v == b).map(|(x, _)| FieldElement(x as u32)).collect();
        Uniformity {
            c: profile.c,
            value,
            witness: Witness { a, b: FieldElement(b), solutions },
            classification: Classification::of(value),
        }
    }
}
