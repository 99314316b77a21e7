//! Recomputing the published reference tables of maximal c-differential
//! uniformity and diffing them against the stored expectations.
//!
//! Expectations live in `data/reference_tables.json` and are never written
//! back; every cell carries its source.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cdiff::{profiles, AConvention, CFilter, SweepOptions};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::function::FunctionSpec;

/// The stored expectations.
pub const REFERENCE_DATA: &str = include_str!("../data/reference_tables.json");

/// Rows over fields larger than this only run with `allow_long`.
pub const LONG_ROW_MIN_Q: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceData {
    pub schema_version: u32,
    pub tables: Vec<ReferenceTable>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceTable {
    pub id: u32,
    pub caption: String,
    pub p: u32,
    /// `all`, `nonzero` or `no01`.
    pub c_set: String,
    pub columns: Vec<Column>,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Column {
    pub name: String,
    /// A [`FunctionSpec`] string.
    pub function: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    pub n: u32,
    pub column: String,
    pub expected: u32,
    pub source: String,
}

impl ReferenceData {
    pub fn load() -> Result<Self> {
        Self::parse(REFERENCE_DATA)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let data: ReferenceData = serde_json::from_str(text)?;
        for t in &data.tables {
            for cell in &t.cells {
                if !t.columns.iter().any(|c| c.name == cell.column) {
                    return Err(Error::SchemaViolation(format!("table {}: unknown column {:?}", t.id, cell.column)));
                }
            }
        }
        Ok(data)
    }

    pub fn table(&self, id: u32) -> Result<&ReferenceTable> {
        self.tables
            .iter()
            .find(|t| t.id == id)
            .ok_or_else(|| Error::InvalidArgument(format!("no reference table {id}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReproduceOptions {
    pub max_n: Option<u32>,
    pub allow_long: bool,
}

/// Computed value of one cell under each a-convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellResult {
    pub n: u32,
    pub column: String,
    pub function: String,
    pub expected: u32,
    pub source: String,
    pub computed_paper: u32,
    pub computed_nonzero: u32,
    /// Conventions under which the computed value equals the expectation.
    pub matching: Vec<AConvention>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRow {
    pub n: u32,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDiff {
    pub table: u32,
    pub caption: String,
    pub p: u32,
    pub c_set: String,
    pub cells: Vec<CellResult>,
    pub skipped: Vec<SkippedRow>,
    /// Conventions under which every computed cell matches.
    pub matching_conventions: Vec<AConvention>,
}

impl TableDiff {
    pub fn all_match(&self) -> bool {
        !self.matching_conventions.is_empty()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| c.matching.is_empty())
    }

    /// Side-by-side text rendering.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "table {}: {}", self.table, self.caption);
        let w = self.cells.iter().map(|c| c.column.len()).max().unwrap_or(6).max(6);
        let _ = writeln!(s, "{:>3}  {:<w$}  {:>8}  {:>5}  {:>7}  match", "n", "column", "expected", "paper", "nonzero");
        for c in &self.cells {
            let flag = if c.matching.is_empty() {
                "no".to_string()
            } else {
                c.matching.iter().map(|m| m.label()).collect::<Vec<_>>().join("+")
            };
            let _ = writeln!(
                s,
                "{:>3}  {:<w$}  {:>8}  {:>5}  {:>7}  {}",
                c.n, c.column, c.expected, c.computed_paper, c.computed_nonzero, flag
            );
        }
        for r in &self.skipped {
            let _ = writeln!(s, "{:>3}  skipped: {}", r.n, r.reason);
        }
        let verdict = if self.matching_conventions.is_empty() {
            "no a-convention reproduces every computed cell".to_string()
        } else {
            let names: Vec<&str> = self.matching_conventions.iter().map(|m| m.label()).collect();
            format!("all computed cells match under: {}", names.join(", "))
        };
        let _ = writeln!(s, "{verdict}");
        s
    }
}

/// Recompute one reference table.
pub fn reproduce(table: &ReferenceTable, opts: ReproduceOptions) -> Result<TableDiff> {
    let filter: CFilter = table.c_set.parse()?;
    let mut rows: Vec<u32> = table.cells.iter().map(|c| c.n).collect();
    rows.sort_unstable();
    rows.dedup();

    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for n in rows {
        if opts.max_n.is_some_and(|m| n > m) {
            continue;
        }
        let q = (table.p as u64).checked_pow(n);
        if q.is_none_or(|q| q >= LONG_ROW_MIN_Q) && !opts.allow_long {
            skipped.push(SkippedRow { n, reason: format!("GF({}^{n}) sweep is long-running; enable allow_long", table.p) });
            continue;
        }
        let field = FieldSpec::new(table.p, n, None)?;
        let cs = filter.values(&field)?;
        for cell in table.cells.iter().filter(|c| c.n == n) {
            let column = table.columns.iter().find(|c| c.name == cell.column).expect("checked on load");
            let f = column.function.parse::<FunctionSpec>()?.build(&field)?;
            let profs = profiles(&f, &cs, SweepOptions::default());
            let best = |conv| profs.iter().map(|p| p.under(conv).0).max().unwrap_or(0);
            let computed_paper = best(AConvention::PaperFootnote);
            let computed_nonzero = best(AConvention::NonzeroOnly);
            let matching = [(AConvention::PaperFootnote, computed_paper), (AConvention::NonzeroOnly, computed_nonzero)]
                .into_iter()
                .filter(|&(_, v)| v == cell.expected)
                .map(|(c, _)| c)
                .collect();
            cells.push(CellResult {
                n,
                column: cell.column.clone(),
                function: f.origin().describe(),
                expected: cell.expected,
                source: cell.source.clone(),
                computed_paper,
                computed_nonzero,
                matching,
            });
        }
    }
    let matching_conventions = AConvention::BOTH
        .into_iter()
        .filter(|conv| !cells.is_empty() && cells.iter().all(|c| c.matching.contains(conv)))
        .collect();
    Ok(TableDiff {
        table: table.id,
        caption: table.caption.clone(),
        p: table.p,
        c_set: table.c_set.clone(),
        cells,
        skipped,
        matching_conventions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_loads() {
        let data = ReferenceData::load().unwrap();
        assert_eq!(data.schema_version, 1);
        assert_eq!(data.table(1).unwrap().cells.len(), 16);
        assert_eq!(data.table(2).unwrap().cells.len(), 14);
        assert!(data.table(3).is_err());
        for t in &data.tables {
            for c in &t.columns {
                c.function.parse::<FunctionSpec>().unwrap();
            }
            t.c_set.parse::<CFilter>().unwrap();
        }
    }

    #[test]
    fn bad_column_rejected() {
        let text = REFERENCE_DATA.replacen("\"column\": \"x^5\"", "\"column\": \"x^7\"", 1);
        assert!(matches!(ReferenceData::parse(&text), Err(Error::SchemaViolation(_))));
    }

    #[test]
    fn small_rows() {
        let data = ReferenceData::load().unwrap();
        let d = reproduce(data.table(1).unwrap(), ReproduceOptions { max_n: Some(4), allow_long: false }).unwrap();
        assert_eq!(d.cells.len(), 8);
        let gold: Vec<u32> = d.cells.iter().filter(|c| c.column == "x^5").map(|c| c.computed_nonzero).collect();
        assert_eq!(gold, vec![2, 4, 3, 5]);
        assert!(d.render().contains("x^13"));
    }

    #[test]
    fn long_rows_skipped() {
        let data = ReferenceData::load().unwrap();
        let d = reproduce(data.table(2).unwrap(), ReproduceOptions { max_n: Some(11), allow_long: false }).unwrap();
        let skipped: Vec<u32> = d.skipped.iter().map(|r| r.n).collect();
        assert_eq!(skipped, vec![9, 11]);
        let d = reproduce(data.table(2).unwrap(), ReproduceOptions { max_n: Some(2), allow_long: false }).unwrap();
        assert!(d.all_match());
        assert_eq!(d.matching_conventions, AConvention::BOTH.to_vec());
    }
}
