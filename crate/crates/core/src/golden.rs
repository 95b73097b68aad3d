//! Bundled reference tables and per-coefficient comparison against them.

use serde::{Deserialize, Serialize};

use crate::birkhoff::Frame;
use crate::error::{Error, Result};
use crate::exact::{APoly, BiSeries, ExactScalar, LoopMatrix, ZLoop};

pub const H_TABLE_JSON: &str = include_str!("../data/h_expansion_table.json");
pub const BBTILDE_JSON: &str = include_str!("../data/bbtilde_terms.json");

#[derive(Deserialize)]
struct HTable {
    terms: Vec<HRow>,
}

#[derive(Deserialize)]
struct HRow {
    n: u32,
    f: APoly,
}

/// `F_0, …, F_6` from the bundled table.
pub fn h_table() -> Result<Vec<APoly>> {
    let t: HTable = serde_json::from_str(H_TABLE_JSON).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = vec![APoly::zero(); t.terms.len()];
    for row in t.terms {
        let slot = out
            .get_mut(row.n as usize)
            .ok_or_else(|| Error::Parse(format!("row n = {} out of range", row.n)))?;
        *slot = row.f;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoeffDiff {
    pub n: u32,
    pub exp: i32,
    pub expected: ExactScalar,
    pub actual: ExactScalar,
}

impl CoeffDiff {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

/// Every coefficient present in either table, for `n` up to the shorter length.
pub fn diff_h_table(expected: &[APoly], actual: &[APoly]) -> Vec<CoeffDiff> {
    let mut out = Vec::new();
    for (n, (e, a)) in expected.iter().zip(actual).enumerate() {
        let mut exps: Vec<i32> = e.terms().map(|(k, _)| k).chain(a.terms().map(|(k, _)| k)).collect();
        exps.sort_unstable();
        exps.dedup();
        for k in exps.into_iter().rev() {
            out.push(CoeffDiff {
                n: n as u32,
                exp: k,
                expected: e.coeff(k),
                actual: a.coeff(k),
            });
        }
    }
    out
}

#[derive(Deserialize)]
struct BTable {
    truncation: u32,
    entries: Vec<BEntry>,
}

#[derive(Deserialize)]
struct BEntry {
    n: u32,
    m: u32,
    row: usize,
    col: usize,
    coeff: ZLoop,
}

/// `B·B̃` through total degree 3 from the bundled table.
pub fn bbtilde_table() -> Result<LoopMatrix> {
    let t: BTable = serde_json::from_str(BBTILDE_JSON).map_err(|e| Error::Parse(e.to_string()))?;
    let mut entries = vec![BiSeries::zero(t.truncation); 4];
    for e in t.entries {
        if e.row > 1 || e.col > 1 || e.n + e.m > t.truncation {
            return Err(Error::Parse(format!("entry ({}, {}) at ({}, {})", e.n, e.m, e.row, e.col)));
        }
        entries[2 * e.row + e.col].add_term(e.n, e.m, &e.coeff);
    }
    LoopMatrix::from_rows(2, entries)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockDiff {
    pub n: u32,
    pub m: u32,
    pub row: usize,
    pub col: usize,
    pub expected: ZLoop,
    pub actual: ZLoop,
}

/// Compares the computed `B·B̃` with the table on every `(n, m)` with
/// `n + m ≤ 3`; returns the mismatching entries.
pub fn diff_bbtilde() -> Result<Vec<BlockDiff>> {
    let expected = bbtilde_table()?;
    let n = expected.truncation();
    let actual = Frame::compute(n)?.b_btilde;
    let mut out = Vec::new();
    for total in 0..=n {
        for qn in 0..=total {
            let qm = total - qn;
            for row in 0..2 {
                for col in 0..2 {
                    let e = expected.get(row, col).coeff(qn, qm);
                    let a = actual.get(row, col).coeff(qn, qm);
                    if e != a {
                        out.push(BlockDiff {
                            n: qn,
                            m: qm,
                            row,
                            col,
                            expected: e,
                            actual: a,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn table_parses_with_expected_shape() {
        let t = h_table().unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t[2].coeff(3), rat(121, 4));
        assert_eq!(t[6].coeff(0), rat(15268380040196927, 251942400000));
        let count: usize = t.iter().map(APoly::len).sum();
        assert_eq!(count, 55);
    }

    #[test]
    fn diff_reports_changed_coefficient() {
        let t = h_table().unwrap();
        let mut bad = t.clone();
        bad[3] = &bad[3] + &APoly::monomial(2, rat(1, 1));
        let d = diff_h_table(&t, &bad);
        let wrong: Vec<_> = d.iter().filter(|c| !c.matches()).collect();
        assert_eq!(wrong.len(), 1);
        assert_eq!((wrong[0].n, wrong[0].exp), (3, 2));
    }

    #[test]
    fn bbtilde_matches_table() {
        assert_eq!(diff_bbtilde().unwrap(), vec![]);
    }
}
