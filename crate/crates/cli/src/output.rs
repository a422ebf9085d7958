//! Row model and deterministic CSV/JSON emission.
//!
//! Schema is fixed: `family,stat,measure,k,n,source,value` with exact
//! rationals rendered `p/q` (bare `p` for integers) and reals as shortest
//! round-trip decimals. Rows are sorted before emission so output never
//! depends on computation order.

use std::fmt::Write as _;

use treepaths::{FamilyName, StatKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceTag {
    Oracle,
    Series,
    Closed,
    Asym,
}

impl SourceTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceTag::Oracle => "oracle",
            SourceTag::Series => "series",
            SourceTag::Closed => "closed",
            SourceTag::Asym => "asym",
        }
    }

    fn rank(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub family: FamilyName,
    pub stat: StatKind,
    pub measure: &'static str,
    pub k: usize,
    pub n: u64,
    pub source: SourceTag,
    pub value: String,
}

pub const HEADER: &str = "family,stat,measure,k,n,source,value";

fn family_rank(f: FamilyName) -> usize {
    FamilyName::ALL.iter().position(|x| *x == f).expect("listed")
}

fn measure_rank(m: &str) -> usize {
    ["count", "edges", "expectation", "moment"]
        .iter()
        .position(|x| *x == m)
        .unwrap_or(usize::MAX)
}

pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by_key(|r| {
        (
            family_rank(r.family),
            r.stat.index(),
            measure_rank(r.measure),
            r.k,
            r.n,
            r.source.rank(),
        )
    });
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.family,
            r.stat,
            r.measure,
            r.k,
            r.n,
            r.source.as_str(),
            r.value
        );
    }
    out
}

pub fn to_json(rows: &[Row]) -> String {
    let values: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "family": r.family.as_str(),
                "stat": r.stat.as_str(),
                "measure": r.measure,
                "k": r.k,
                "n": r.n,
                "source": r.source.as_str(),
                "value": r.value,
            })
        })
        .collect();
    serde_json::to_string_pretty(&values).expect("plain strings and integers")
}

/// Measure column label for a moment index.
pub fn measure_label(k: usize) -> &'static str {
    match k {
        0 => "count",
        1 => "edges",
        _ => "moment",
    }
}
