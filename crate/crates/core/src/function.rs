//! Fully tabulated functions F: GF(p^n) -> GF(p^n).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// One `coefficient * x^exponent` term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exponent: u64,
    pub coefficient: FieldElement,
}

/// Where a table came from. Metadata only: evaluation always reads the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Origin {
    /// `x^exponent`, exponent reduced into `[1, q-1]`.
    Monomial { exponent: u64 },
    /// Nonzero terms in decreasing exponent order.
    Polynomial { terms: Vec<Term> },
    /// `x^{q-2}`, so 0 maps to 0.
    Inverse,
    Raw,
}

impl Origin {
    pub fn describe(&self) -> String {
        match self {
            Origin::Monomial { exponent } => format!("monomial:{exponent}"),
            Origin::Polynomial { terms } => {
                let body: Vec<String> = terms.iter().map(|t| format!("{}=r{}", t.exponent, t.coefficient)).collect();
                format!("poly:{}", body.join(","))
            }
            Origin::Inverse => "inverse".to_string(),
            Origin::Raw => "raw".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    field: FieldSpec,
    values: Vec<u32>,
    origin: Origin,
}

impl FunctionTable {
    /// `x^d` with `0^d = 0`. `d = 0` is rejected.
    pub fn monomial(field: &FieldSpec, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidExponent(0));
        }
        let order = (field.q() - 1) as u64;
        let reduced = match d % order {
            0 => order,
            e => e,
        };
        let values = field.enumerate().map(|x| field.pow_u(x, reduced as u128).rank()).collect();
        Ok(FunctionTable { field: field.clone(), values, origin: Origin::Monomial { exponent: reduced } })
    }

    /// The inverse function `x^{q-2}`, extended by `0 -> 0`.
    pub fn inverse(field: &FieldSpec) -> Self {
        let values = field.enumerate().map(|x| field.inv(x).map(|v| v.rank()).unwrap_or(0)).collect();
        FunctionTable { field: field.clone(), values, origin: Origin::Inverse }
    }

    /// `sum a_i x^i`. Any exponent is accepted, `x^0 = 1` including at 0.
    /// Repeated exponents are summed.
    pub fn polynomial(field: &FieldSpec, terms: &[(u64, FieldElement)]) -> Result<Self> {
        let mut merged: BTreeMap<u64, FieldElement> = BTreeMap::new();
        for &(e, c) in terms {
            field.element(c.rank() as u64)?;
            let slot = merged.entry(e).or_insert(FieldElement::ZERO);
            *slot = field.add(*slot, c);
        }
        let terms: Vec<Term> = merged
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponent, coefficient)| Term { exponent, coefficient })
            .collect();
        if terms.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        let values = field.enumerate().map(|x| evaluate(field, &terms, x).rank()).collect();
        Ok(FunctionTable { field: field.clone(), values, origin: Origin::Polynomial { terms } })
    }

    /// Wrap an explicit value table.
    pub fn raw(field: &FieldSpec, values: Vec<u32>) -> Result<Self> {
        check_values(field, values.iter().map(|&v| v as u64), values.len())?;
        Ok(FunctionTable { field: field.clone(), values, origin: Origin::Raw })
    }

    pub(crate) fn from_parts_unchecked(field: &FieldSpec, values: Vec<u32>) -> Self {
        debug_assert_eq!(values.len(), field.q() as usize);
        FunctionTable { field: field.clone(), values, origin: Origin::Raw }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    /// Value table indexed by rank.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.values[x.rank() as usize])
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.values.len()];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    pub fn save<W: Write>(&self, writer: W) -> Result<()> {
        let doc = TableDoc {
            field: self.field.clone(),
            origin: self.origin.clone(),
            values: self.values.iter().map(|&v| v as u64).collect(),
        };
        serde_json::to_writer(writer, &doc)?;
        Ok(())
    }

    /// Load and validate a table file. A symbolic origin is re-evaluated and
    /// must agree with the stored values.
    pub fn load<R: Read>(reader: R) -> Result<Self> {
        let doc: TableDoc = serde_json::from_reader(reader)?;
        let field = doc.field;
        check_values(&field, doc.values.iter().copied(), doc.values.len())?;
        let values: Vec<u32> = doc.values.into_iter().map(|v| v as u32).collect();
        let expected = match &doc.origin {
            Origin::Monomial { exponent } => Some(FunctionTable::monomial(&field, *exponent)?),
            Origin::Polynomial { terms } => {
                let pairs: Vec<_> = terms.iter().map(|t| (t.exponent, t.coefficient)).collect();
                Some(FunctionTable::polynomial(&field, &pairs)?)
            }
            Origin::Inverse => Some(FunctionTable::inverse(&field)),
            Origin::Raw => None,
        };
        if let Some(expected) = expected {
            if expected.values != values {
                return Err(Error::SchemaViolation(format!("values disagree with origin {}", doc.origin.describe())));
            }
        }
        Ok(FunctionTable { field, values, origin: doc.origin })
    }

    /// Load a table and require that it lives over `field`.
    pub fn load_for<R: Read>(reader: R, field: &FieldSpec) -> Result<Self> {
        let table = Self::load(reader)?;
        if table.field != *field {
            return Err(Error::FieldMismatch { expected: field.to_string(), found: table.field.to_string() });
        }
        Ok(table)
    }
}

/// Textual function descriptor:
/// `monomial:D`, `poly:E1=C1,E2=C2,...`, `inverse` or `table:PATH`.
///
/// A polynomial coefficient is either an integer (negative allowed, read in
/// the prime field) or `rN`, the element of rank N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionSpec {
    Monomial(u64),
    Polynomial(Vec<(u64, Coefficient)>),
    Inverse,
    Table(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Int(i64),
    Rank(u64),
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidArgument(format!("function spec {s:?}: {why}"));
        let s = s.trim();
        if s == "inverse" {
            return Ok(FunctionSpec::Inverse);
        }
        let (kind, body) = s.split_once(':').ok_or_else(|| bad("expected monomial:D, poly:E=C,..., inverse or table:PATH"))?;
        match kind {
            "monomial" => body.trim().parse().map(FunctionSpec::Monomial).map_err(|_| bad("exponent is not a nonnegative integer")),
            "table" if !body.is_empty() => Ok(FunctionSpec::Table(PathBuf::from(body))),
            "poly" => {
                let mut terms = Vec::new();
                for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    let (e, c) = part.split_once('=').ok_or_else(|| bad("terms look like E=C"))?;
                    let e: u64 = e.trim().parse().map_err(|_| bad("exponent is not a nonnegative integer"))?;
                    let c = c.trim();
                    let c = match c.strip_prefix('r') {
                        Some(r) => Coefficient::Rank(r.parse().map_err(|_| bad("rank coefficient is not an integer"))?),
                        None => Coefficient::Int(c.parse().map_err(|_| bad("coefficient is not an integer"))?),
                    };
                    terms.push((e, c));
                }
                if terms.is_empty() {
                    return Err(bad("no terms"));
                }
                Ok(FunctionSpec::Polynomial(terms))
            }
            _ => Err(bad("unknown kind")),
        }
    }
}

impl FunctionSpec {
    /// Tabulate over `field`. Tables loaded from disk must live over `field`.
    pub fn build(&self, field: &FieldSpec) -> Result<FunctionTable> {
        match self {
            FunctionSpec::Monomial(d) => FunctionTable::monomial(field, *d),
            FunctionSpec::Inverse => Ok(FunctionTable::inverse(field)),
            FunctionSpec::Table(path) => FunctionTable::load_for(BufReader::new(File::open(path)?), field),
            FunctionSpec::Polynomial(terms) => {
                let pairs = terms
                    .iter()
                    .map(|&(e, c)| {
                        let c = match c {
                            Coefficient::Int(v) => field.from_int(v),
                            Coefficient::Rank(r) => field.element(r)?,
                        };
                        Ok((e, c))
                    })
                    .collect::<Result<Vec<_>>>()?;
                FunctionTable::polynomial(field, &pairs)
            }
        }
    }
}

fn evaluate(field: &FieldSpec, terms: &[Term], x: FieldElement) -> FieldElement {
    terms.iter().fold(FieldElement::ZERO, |acc, t| {
        field.add(acc, field.mul(t.coefficient, field.pow_u(x, t.exponent as u128)))
    })
}

fn check_values(field: &FieldSpec, values: impl Iterator<Item = u64>, len: usize) -> Result<()> {
    if len != field.q() as usize {
        return Err(Error::SchemaViolation(format!("expected {} values, found {len}", field.q())));
    }
    for v in values {
        field.element(v)?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    field: FieldSpec,
    origin: Origin,
    values: Vec<u64>,
}
