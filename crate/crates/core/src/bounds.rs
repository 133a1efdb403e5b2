//! Lower bounds on the lifting degree of girth-8 `(3, L)` codes.
//!
//! Every bound is integer-valued. The one irrational threshold,
//! `sqrt(5L^2 - 11L + 13/2) + 1/2`, is resolved with an exact integer
//! comparison rather than floating point.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Workers};
use crate::exponent::{ExponentMatrix, Girth8Matrix, Modulus};
use crate::girth::check_m8_validity;

/// `(J - 1)(L - 1) + 1`.
pub fn bound_classical(j: u64, l: u64) -> u64 {
    (j - 1) * (l - 1) + 1
}

/// Bound from an arithmetic run of length `m` among the row headers:
/// `m^2/2 - 3m/2 + 2L`, an integer since `m(m - 3)` is even.
pub fn bound_lemma2(l: u64, m: u64) -> Result<u64> {
    if m < 2 || m > l {
        return Err(Error::MOutOfRange { m, l });
    }
    Ok((m * m + 4 * l - 3 * m) / 2)
}

/// Bound from disjoint arithmetic runs of one common difference, lengths
/// sorted non-increasing.
pub fn bound_lemma3(l: u64, lengths: &[u64]) -> Result<u64> {
    let (&first, rest) = lengths.split_first().ok_or(Error::LengthTooSmall)?;
    if lengths.iter().any(|&j| j < 2) {
        return Err(Error::LengthTooSmall);
    }
    if lengths.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::UnsortedLengths);
    }
    let sum: u64 = lengths.iter().sum();
    if sum > l {
        return Err(Error::LengthsExceedL { sum, l });
    }
    let head = (first - 1) * (first - 2) / 2;
    let tail: u64 = rest.iter().map(|&j| j * (j - 1) / 2).sum();
    Ok(2 * l - 1 + head + tail)
}

/// Bound from `m` pairs of row headers sharing one difference: `2L + m - 2`.
pub fn bound_pairs(l: u64, m: u64) -> u64 {
    2 * l + m - 2
}

/// Smallest `p` with `p >= sqrt(5L^2 - 11L + 13/2) + 1/2`, i.e. the smallest
/// `p` with `(2p - 1)^2 >= 20L^2 - 44L + 26`.
pub fn bound_theorem1(l: u64) -> u64 {
    let target = 20 * l * l + 26 - 44 * l;
    // floor sqrt by float, then correct exactly
    let mut s = (target as f64).sqrt() as u64;
    while s * s > target {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= target {
        s += 1;
    }
    // smallest odd t = 2p - 1 with t^2 >= target
    let mut t = if s * s == target { s } else { s + 1 };
    if t % 2 == 0 {
        t += 1;
    }
    t.div_ceil(2)
}

/// Arithmetic structure of one common difference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceStructure {
    pub d: u64,
    /// Longest run `x, x + d, x + 2d, ...` inside the header set.
    pub longest: u64,
    /// Maximal runs of length at least 2, longest first. The runs are
    /// disjoint and no two can be joined.
    pub decomposition: Vec<u64>,
    /// Pairs `(x, x + d)` in the set.
    pub pairs: u64,
}

/// Arithmetic runs among ascending, distinct row headers. Differences are
/// taken between the stored residues without wrap-around.
pub fn detect_ap_structure(a: &[u64], modulus: Modulus) -> Result<Vec<DifferenceStructure>> {
    if a.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedHeaders);
    }
    if let Modulus::Finite(p) = modulus {
        if let Some(&value) = a.iter().find(|&&x| x >= p) {
            return Err(Error::HeaderOutOfRange { value, p });
        }
    }
    let set: BTreeSet<u64> = a.iter().copied().collect();
    let diffs: BTreeSet<u64> = a
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| a[i + 1..].iter().map(move |&y| y - x))
        .collect();
    Ok(diffs
        .into_iter()
        .map(|d| {
            // runs start at elements whose predecessor is absent
            let mut runs: Vec<u64> = a
                .iter()
                .filter(|&&x| x < d || !set.contains(&(x - d)))
                .map(|&start| {
                    let mut len = 1;
                    while set.contains(&(start + len * d)) {
                        len += 1;
                    }
                    len
                })
                .filter(|&len| len >= 2)
                .collect();
            runs.sort_unstable_by(|x, y| y.cmp(x));
            DifferenceStructure {
                d,
                longest: runs.first().copied().unwrap_or(1),
                pairs: runs.iter().map(|&r| r - 1).sum(),
                decomposition: runs,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Bound {
    pub d: u64,
    pub m: u64,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma3Bound {
    pub d: u64,
    pub lengths: Vec<u64>,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairBound {
    pub d: u64,
    pub pairs: u64,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub l: u64,
    pub classical: u64,
    pub theorem1: u64,
    /// `(L^2 + L) / 2`, binding only on matrices whose second row is an
    /// arithmetic progression; not part of `best` unless headers show one.
    pub arithmetic_row: u64,
    pub lemma2: Option<Lemma2Bound>,
    pub lemma3: Option<Lemma3Bound>,
    pub pairs: Option<PairBound>,
    pub best: u64,
    pub notes: Vec<String>,
}

/// The strongest bound for `L`, refined by a concrete header set when given.
pub fn best_bound(l: u64, a: Option<(&[u64], Modulus)>) -> Result<BoundReport> {
    if l < 2 {
        return Err(Error::DimensionTooSmall);
    }
    let classical = bound_classical(3, l);
    let theorem1 = bound_theorem1(l);
    let mut report = BoundReport {
        l,
        classical,
        theorem1,
        arithmetic_row: bound_lemma2(l, l)?,
        lemma2: None,
        lemma3: None,
        pairs: None,
        best: classical.max(theorem1),
        notes: vec![
            "classical: (J-1)(L-1)+1 with J = 3".into(),
            "theorem1: exact integer ceiling of sqrt(5L^2-11L+13/2)+1/2".into(),
        ],
    };
    let Some((headers, modulus)) = a else {
        return Ok(report);
    };
    if headers.len() as u64 != l {
        return Err(Error::InvalidHeaders);
    }
    let mut sorted = headers.to_vec();
    sorted.sort_unstable();
    for s in detect_ap_structure(&sorted, modulus)? {
        if s.longest >= 2 {
            let value = bound_lemma2(l, s.longest)?;
            if report.lemma2.as_ref().is_none_or(|b| value > b.value) {
                report.lemma2 = Some(Lemma2Bound {
                    d: s.d,
                    m: s.longest,
                    value,
                });
            }
            let value = bound_lemma3(l, &s.decomposition)?;
            if report.lemma3.as_ref().is_none_or(|b| value > b.value) {
                report.lemma3 = Some(Lemma3Bound {
                    d: s.d,
                    lengths: s.decomposition.clone(),
                    value,
                });
            }
            let value = bound_pairs(l, s.pairs);
            if report.pairs.as_ref().is_none_or(|b| value > b.value) {
                report.pairs = Some(PairBound {
                    d: s.d,
                    pairs: s.pairs,
                    value,
                });
            }
        }
    }
    report.notes.push(
        "lemma2/lemma3/pairs: maximized over common differences; lemma3 uses the maximal-run decomposition".into(),
    );
    report.best = [
        Some(report.best),
        report.lemma2.as_ref().map(|b| b.value),
        report.lemma3.as_ref().map(|b| b.value),
        report.pairs.as_ref().map(|b| b.value),
    ]
    .into_iter()
    .flatten()
    .max()
    .unwrap();
    Ok(report)
}

impl BoundReport {
    /// Aligned `name  value` lines.
    pub fn to_text(&self) -> String {
        let mut rows = vec![
            ("L".to_string(), self.l.to_string()),
            ("classical".to_string(), self.classical.to_string()),
            ("theorem1".to_string(), self.theorem1.to_string()),
            (
                "lemma2 (arithmetic row, if any)".to_string(),
                self.arithmetic_row.to_string(),
            ),
        ];
        if let Some(b) = &self.lemma2 {
            rows.push((
                format!("lemma2 (d={}, m={})", b.d, b.m),
                b.value.to_string(),
            ));
        }
        if let Some(b) = &self.lemma3 {
            rows.push((
                format!("lemma3 (d={}, lengths={:?})", b.d, b.lengths),
                b.value.to_string(),
            ));
        }
        if let Some(b) = &self.pairs {
            rows.push((
                format!("pairs (d={}, m={})", b.d, b.pairs),
                b.value.to_string(),
            ));
        }
        rows.push(("best".to_string(), self.best.to_string()));
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter()
            .map(|(k, v)| format!("{k:<width$}  {v}\n"))
            .collect()
    }
}

/// `ceil(3L^2 / 4)`, the lifting degree of the earlier construction with
/// row headers `0, 1, ..., L-1`.
pub fn prior_construction_p(l: u64) -> u64 {
    (3 * l * l).div_ceil(4)
}

/// One column of the comparison table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableColumn {
    pub l: u64,
    /// Arithmetic-row bound `(L^2 + L) / 2`.
    pub lemma: u64,
    /// `p_min` of the `d = 1` construction.
    pub construction: u64,
    pub prior_construction: u64,
}

pub fn comparison_table(ls: impl IntoIterator<Item = u64>) -> Result<Vec<TableColumn>> {
    ls.into_iter()
        .map(|l| {
            Ok(TableColumn {
                l,
                lemma: bound_lemma2(l, l)?,
                construction: crate::construct::p_min(l as usize, 1)?,
                prior_construction: prior_construction_p(l),
            })
        })
        .collect()
}

/// Renders the table with one row per quantity and one column per `L`.
pub fn render_table(cols: &[TableColumn]) -> String {
    type Cell = fn(&TableColumn) -> u64;
    let rows: [(&str, Cell); 4] = [
        ("L", |c| c.l),
        ("Lemma bound", |c| c.lemma),
        ("Our construction", |c| c.construction),
        ("Prior construction", |c| c.prior_construction),
    ];
    let label_w = rows.iter().map(|(n, _)| n.len()).max().unwrap();
    let cell_w = cols
        .iter()
        .flat_map(|c| rows.iter().map(move |(_, f)| f(c).to_string().len()))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for (name, f) in &rows {
        let _ = write!(out, "{name:<label_w$} |");
        for c in cols {
            let _ = write!(out, " {:>cell_w$} |", f(c));
        }
        out.push('\n');
    }
    out
}

/// Exhaustive-search limits: `L <= 5`, `p <= 16`.
pub const SEARCH_MAX_L: usize = 5;
pub const SEARCH_MAX_P: u64 = 16;

/// Searches all normalized `3 x L` matrices at lifting degree `p` for girth
/// at least 8, returning the first witness found.
///
/// Row headers are enumerated as ascending sets starting at 0, column
/// headers as ordered distinct tuples starting at 0; column permutation and
/// normalization reduce every matrix to this form. Order is lexicographic
/// in `(a, nb)` regardless of worker count.
pub fn exhaustive_search(l: usize, p: u64, workers: Workers) -> Result<Option<ExponentMatrix>> {
    if l > SEARCH_MAX_L || p > SEARCH_MAX_P {
        return Err(Error::SearchSpaceTooLarge { l, p });
    }
    if l < 2 || p < 2 {
        return Err(Error::DimensionTooSmall);
    }
    let a_sets = ascending_sets(l, p);
    let found = exec::find_map_first(workers, &a_sets, |a| {
        let mut nb = vec![0u64; l];
        let mut used = vec![false; p as usize];
        used[0] = true;
        extend_col_headers(a, &mut nb, &mut used, 1, p)
            .then(|| Girth8Matrix::new(a.clone(), nb, Modulus::Finite(p)).unwrap())
    });
    found.map(|m| m.to_exponent(p)).transpose()
}

/// True when no girth-8 normalized `3 x L` matrix exists at lifting degree `p`.
pub fn exhaustive_nonexistence(l: usize, p: u64) -> Result<bool> {
    Ok(exhaustive_search(l, p, Workers::Auto)?.is_none())
}

fn ascending_sets(l: usize, p: u64) -> Vec<Vec<u64>> {
    fn rec(cur: &mut Vec<u64>, l: usize, p: u64, out: &mut Vec<Vec<u64>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        let next = cur.last().map_or(0, |&x| x + 1);
        for x in next..p {
            cur.push(x);
            rec(cur, l, p, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if l as u64 <= p {
        rec(&mut vec![0], l, p, &mut out);
    }
    out
}

/// Depth-first over column headers; a leading principal block of a valid
/// girth-8 matrix is itself valid, so partial checks prune soundly.
fn extend_col_headers(a: &[u64], nb: &mut [u64], used: &mut [bool], k: usize, p: u64) -> bool {
    if k == nb.len() {
        return true;
    }
    for v in 1..p {
        if used[v as usize] {
            continue;
        }
        nb[k] = v;
        let m = Girth8Matrix::new(a[..=k].to_vec(), nb[..=k].to_vec(), Modulus::Finite(p))
            .expect("headers are reduced");
        if !check_m8_validity(&m).valid {
            continue;
        }
        used[v as usize] = true;
        if extend_col_headers(a, nb, used, k + 1, p) {
            return true;
        }
        used[v as usize] = false;
    }
    false
}
