//! Inner loop of every c-differential sweep: the histogram of
//! `x -> F(x + a) - c F(x)` over the whole field.
//!
//! Characteristic 2 adds with XOR. Odd characteristic splits each rank into a
//! high and a low block of base-p digits and adds blockwise through two small
//! tables, so the working set stays cache-resident even at q = 3^7.

use crate::field::{FieldElement, FieldSpec};
use crate::function::FunctionTable;

pub(crate) struct SplitAdd {
    /// Number of ranks in the low block, p^{n_lo}.
    lo_size: u32,
    hi_size: u32,
    /// `lo_add[i * lo_size + j]`: low block of (i + j).
    lo_add: Vec<u32>,
    /// `hi_add[i * hi_size + j]`: high block of (i + j), premultiplied by `lo_size`.
    hi_add: Vec<u32>,
}

impl SplitAdd {
    fn new(field: &FieldSpec) -> Self {
        let n = field.n();
        let n_lo = n / 2;
        let lo_size = field.p().pow(n_lo);
        let hi_size = field.p().pow(n - n_lo);
        let block_add = |size: u32, scale: u32| -> Vec<u32> {
            let mut t = Vec::with_capacity((size * size) as usize);
            for i in 0..size {
                for j in 0..size {
                    // blocks embed as ranks scaled by `scale`; the sum never carries across blocks
                    let s = field.add(FieldElement(i * scale), FieldElement(j * scale)).rank();
                    t.push(s);
                }
            }
            t
        };
        let lo_add = block_add(lo_size, 1);
        let hi_add = block_add(hi_size, lo_size);
        SplitAdd { lo_size, hi_size, lo_add, hi_add }
    }

    #[inline]
    fn split(&self, r: u32) -> (u32, u32) {
        (r / self.lo_size, r % self.lo_size)
    }
}

enum Adder {
    Xor,
    Split(SplitAdd),
}

/// Per-function precomputation shared by all values of c.
pub(crate) struct Kernel<'a> {
    field: &'a FieldSpec,
    values: &'a [u32],
    q: usize,
    adder: Adder,
    /// Split layout only: F(x) blocks premultiplied for row indexing.
    f_hi_row: Vec<u32>,
    f_lo_row: Vec<u32>,
}

/// Per-c precomputation: the blocks of `-c F(x)`.
pub(crate) struct CState {
    neg_cf: Vec<u32>,
    neg_cf_hi: Vec<u32>,
    neg_cf_lo: Vec<u32>,
}

impl<'a> Kernel<'a> {
    pub fn new(f: &'a FunctionTable) -> Self {
        let field = f.field();
        let values = f.values();
        let q = field.q() as usize;
        if field.p() == 2 {
            return Kernel { field, values, q, adder: Adder::Xor, f_hi_row: Vec::new(), f_lo_row: Vec::new() };
        }
        let split = SplitAdd::new(field);
        let (f_hi_row, f_lo_row) = values
            .iter()
            .map(|&v| {
                let (h, l) = split.split(v);
                (h * split.hi_size, l * split.lo_size)
            })
            .unzip();
        Kernel { field, values, q, adder: Adder::Split(split), f_hi_row, f_lo_row }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn field(&self) -> &FieldSpec {
        self.field
    }

    pub fn c_state(&self, c: FieldElement) -> CState {
        let neg_cf: Vec<u32> = self
            .values
            .iter()
            .map(|&v| self.field.neg(self.field.mul(c, FieldElement(v))).rank())
            .collect();
        let (neg_cf_hi, neg_cf_lo) = match &self.adder {
            Adder::Xor => (Vec::new(), Vec::new()),
            Adder::Split(s) => neg_cf.iter().map(|&v| s.split(v)).unzip(),
        };
        CState { neg_cf, neg_cf_hi, neg_cf_lo }
    }

    /// Adds the histogram of `F(x + a) - c F(x)` into `hist` (length q).
    pub fn accumulate_row(&self, st: &CState, a: u32, hist: &mut [u32]) {
        match &self.adder {
            Adder::Xor => {
                let f = self.values;
                for (x, &w) in st.neg_cf.iter().enumerate() {
                    let v = f[x ^ a as usize] ^ w;
                    hist[v as usize] += 1;
                }
            }
            Adder::Split(s) => {
                let (ah, al) = s.split(a);
                let ls = s.lo_size as usize;
                let hs = s.hi_size as usize;
                let lo_add_a = &s.lo_add[..];
                for xh in 0..hs {
                    let base = s.hi_add[xh * hs + ah as usize];
                    let row_start = xh * ls;
                    let nh = &st.neg_cf_hi[row_start..row_start + ls];
                    let nl = &st.neg_cf_lo[row_start..row_start + ls];
                    for xl in 0..ls {
                        let xa = (base + lo_add_a[xl * ls + al as usize]) as usize;
                        let v = s.hi_add[(self.f_hi_row[xa] + nh[xl]) as usize]
                            + s.lo_add[(self.f_lo_row[xa] + nl[xl]) as usize];
                        hist[v as usize] += 1;
                    }
                }
            }
        }
    }

    /// The derivative values `F(x + a) - c F(x)` indexed by x.
    pub fn row_values(&self, st: &CState, a: u32) -> Vec<u32> {
        let a = FieldElement(a);
        (0..self.q as u32)
            .map(|x| {
                let xa = self.field.add(FieldElement(x), a);
                self.field.add(FieldElement(self.values[xa.rank() as usize]), FieldElement(st.neg_cf[x as usize])).rank()
            })
            .collect()
    }

    /// Row maximum and the smallest b attaining it; clears `hist`.
    pub fn row_max(&self, st: &CState, a: u32, hist: &mut [u32]) -> (u32, u32) {
        self.accumulate_row(st, a, hist);
        let mut best = (0u32, 0u32);
        for (b, slot) in hist.iter_mut().enumerate() {
            if *slot > best.0 {
                best = (*slot, b as u32);
            }
            *slot = 0;
        }
        best
    }
}
