//! Three independent girth checkers.
//!
//! * [`check_m8_validity`]: the distinctness conditions on the girth-8 matrix,
//!   which hold exactly when a `(3, L)` code has girth at least 8.
//! * [`find_cycle`] / [`girth_exponent`]: exhaustive search of the
//!   exponent matrix for index chains whose alternating shift sum vanishes mod p.
//! * [`girth_lifted`]: breadth-first search on the lifted Tanner graph.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Workers};
use crate::exponent::{ExponentMatrix, Girth8Matrix};
use crate::lifting::SparseBinaryMatrix;

/// Largest cycle half-length searched on the exponent matrix.
pub const MAX_HALF_LENGTH: usize = 6;

/// Girth of a code, exact up to 12.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Cycle(u32),
    AboveTwelve,
}

impl Girth {
    pub fn at_least(self, g: u32) -> bool {
        match self {
            Girth::Cycle(c) => c >= g,
            Girth::AboveTwelve => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Cycle(g) => write!(f, "{g}"),
            Girth::AboveTwelve => f.write_str(">12"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Girth::Cycle(g) => s.serialize_u32(*g),
            Girth::AboveTwelve => s.serialize_str(">12"),
        }
    }
}

impl<'de> Deserialize<'de> for Girth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(g) => Ok(Girth::Cycle(g)),
            Raw::Text(t) if t == ">12" => Ok(Girth::AboveTwelve),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad girth {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum Violation {
    /// Two row headers `a_i` coincide.
    RowACollision { first: usize, second: usize },
    /// Two column headers `-b_i` coincide.
    ColBCollision { first: usize, second: usize },
    /// Diagonal entry `(index, index)` equals the entry at `other`.
    DiagonalCollision { index: usize, other: (usize, usize) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub violation: Option<Violation>,
}

impl ValidityReport {
    fn from_violation(violation: Option<Violation>) -> Self {
        Self {
            valid: violation.is_none(),
            violation,
        }
    }
}

fn first_duplicate(values: &[u64]) -> Option<(usize, usize)> {
    let mut seen = HashMap::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        if let Some(&j) = seen.get(&v) {
            return Some((j, i));
        }
        seen.insert(v, i);
    }
    None
}

/// Checks the three distinctness conditions in `O(L^2)`.
pub fn check_m8_validity(m: &Girth8Matrix) -> ValidityReport {
    let modulus = m.modulus();
    let a: Vec<u64> = m.row_headers().iter().map(|&x| modulus.reduce(x)).collect();
    let nb: Vec<u64> = m.col_headers().iter().map(|&x| modulus.reduce(x)).collect();
    if let Some((first, second)) = first_duplicate(&a) {
        return ValidityReport::from_violation(Some(Violation::RowACollision { first, second }));
    }
    if let Some((first, second)) = first_duplicate(&nb) {
        return ValidityReport::from_violation(Some(Violation::ColBCollision { first, second }));
    }

    let n = m.size();
    let mut counts: HashMap<u64, u32> = HashMap::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            *counts.entry(m.entry(i, j)).or_default() += 1;
        }
    }
    let Some(index) = (0..n).find(|&i| counts[&m.entry(i, i)] > 1) else {
        return ValidityReport::from_violation(None);
    };
    let value = m.entry(index, index);
    let other = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| (i, j) != (index, index) && m.entry(i, j) == value)
        .expect("count above one implies a second position");
    ValidityReport::from_violation(Some(Violation::DiagonalCollision { index, other }))
}

/// A closed chain of exponent-matrix positions whose alternating sum vanishes mod p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub length: usize,
    /// `m_0 .. m_{k-1}`.
    pub rows: Vec<usize>,
    /// `n_0 .. n_k` with `n_k = n_0`.
    pub cols: Vec<usize>,
    /// The unreduced alternating sum.
    pub residual: i64,
}

impl CycleWitness {
    /// Re-checks the index constraints and the vanishing sum against `e`.
    pub fn verify(&self, e: &ExponentMatrix) -> bool {
        let k = self.rows.len();
        if k < 2 || self.length != 2 * k || self.cols.len() != k + 1 || self.cols[k] != self.cols[0]
        {
            return false;
        }
        if self.rows.iter().any(|&r| r >= e.rows()) || self.cols.iter().any(|&c| c >= e.cols()) {
            return false;
        }
        let distinct = (0..k)
            .all(|i| self.rows[i] != self.rows[(i + 1) % k] && self.cols[i] != self.cols[i + 1]);
        let sum: i64 = (0..k)
            .map(|i| {
                e.get(self.rows[i], self.cols[i]) as i64
                    - e.get(self.rows[i], self.cols[i + 1]) as i64
            })
            .sum();
        distinct && sum == self.residual && sum.rem_euclid(e.lifting_degree() as i64) == 0
    }
}

struct ChainSearch<'a> {
    e: &'a ExponentMatrix,
    k: usize,
    p: i64,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl ChainSearch<'_> {
    #[inline]
    fn term(&self, i: usize, next_col: usize) -> i64 {
        let r = self.rows[i];
        self.e.get(r, self.cols[i]) as i64 - self.e.get(r, next_col) as i64
    }

    /// Assigns `m_depth`, then `n_depth`; `sum` covers terms `0..depth-1`.
    fn descend(&mut self, depth: usize, sum: i64) -> Option<i64> {
        let (j_rows, l_cols) = (self.e.rows(), self.e.cols());
        for m in 0..j_rows {
            if depth > 0 && m == self.rows[depth - 1] {
                continue;
            }
            if depth == self.k - 1 && m == self.rows[0] {
                continue;
            }
            self.rows[depth] = m;
            for n in 0..l_cols {
                if depth > 0 && n == self.cols[depth - 1] {
                    continue;
                }
                let mut s = sum;
                if depth > 0 {
                    s += self.term(depth - 1, n);
                }
                self.cols[depth] = n;
                if depth == self.k - 1 {
                    if n == self.cols[0] {
                        continue;
                    }
                    let total = s + self.term(depth, self.cols[0]);
                    if total.rem_euclid(self.p) == 0 {
                        return Some(total);
                    }
                } else if let Some(total) = self.descend(depth + 1, s) {
                    return Some(total);
                }
            }
        }
        None
    }
}

/// First chain of half-length `k`, in lexicographic order of
/// `(m_0, n_0, m_1, n_1, ...)`, whose alternating sum vanishes mod p.
pub fn find_cycle(e: &ExponentMatrix, k: usize) -> Result<Option<CycleWitness>> {
    if k > MAX_HALF_LENGTH {
        return Err(Error::KTooLarge(k));
    }
    if k < 2 || e.rows() < 2 {
        return Ok(None);
    }
    let mut search = ChainSearch {
        e,
        k,
        p: e.lifting_degree() as i64,
        rows: vec![0; k],
        cols: vec![0; k],
    };
    Ok(search.descend(0, 0).map(|residual| {
        let mut cols = search.cols.clone();
        cols.push(cols[0]);
        CycleWitness {
            length: 2 * k,
            rows: search.rows.clone(),
            cols,
            residual,
        }
    }))
}

/// Shortest cycle witness of length at most 12.
pub fn shortest_cycle(e: &ExponentMatrix) -> Option<CycleWitness> {
    (2..=MAX_HALF_LENGTH).find_map(|k| find_cycle(e, k).expect("k within range"))
}

pub fn girth_exponent(e: &ExponentMatrix) -> Girth {
    shortest_cycle(e).map_or(Girth::AboveTwelve, |w| Girth::Cycle(w.length as u32))
}

/// Tanner-graph girth by BFS from every variable node, truncated at 12.
pub fn girth_lifted(h: &SparseBinaryMatrix) -> Result<Girth> {
    girth_lifted_with(h, Workers::Auto)
}

const NO_CYCLE: u32 = 14;
const ROOTS_PER_TASK: usize = 64;

pub fn girth_lifted_with(h: &SparseBinaryMatrix, workers: Workers) -> Result<Girth> {
    if h.n_rows() == 0 || h.n_cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let best = AtomicU32::new(NO_CYCLE);
    let tasks = h.n_cols().div_ceil(ROOTS_PER_TASK);
    exec::map_range(workers, tasks, |t| {
        let mut bfs = Bfs::new(h);
        let end = ((t + 1) * ROOTS_PER_TASK).min(h.n_cols());
        for root in t * ROOTS_PER_TASK..end {
            let bound = best.load(Ordering::Relaxed);
            if bound <= 4 {
                break;
            }
            let found = bfs.shortest_through(root, bound);
            best.fetch_min(found, Ordering::Relaxed);
        }
    });
    Ok(match best.into_inner() {
        g if g <= 12 => Girth::Cycle(g),
        _ => Girth::AboveTwelve,
    })
}

/// Scratch space for repeated BFS. Variables are nodes `0..n`, checks `n..n+m`.
struct Bfs<'a> {
    h: &'a SparseBinaryMatrix,
    stamp: Vec<u32>,
    depth: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<u32>,
    epoch: u32,
}

impl<'a> Bfs<'a> {
    fn new(h: &'a SparseBinaryMatrix) -> Self {
        let nodes = h.n_cols() + h.n_rows();
        Self {
            h,
            stamp: vec![0; nodes],
            depth: vec![0; nodes],
            parent: vec![u32::MAX; nodes],
            queue: Vec::with_capacity(nodes),
            epoch: 0,
        }
    }

    fn neighbors(&self, node: u32) -> impl Iterator<Item = u32> + 'a {
        let n = self.h.n_cols() as u32;
        let (list, offset): (&'a [u32], u32) = if node < n {
            (self.h.column(node as usize), n)
        } else {
            (self.h.row((node - n) as usize), 0)
        };
        list.iter().map(move |&x| x + offset)
    }

    /// Shortest closed walk through `root` found by BFS, if shorter than `bound`.
    fn shortest_through(&mut self, root: usize, bound: u32) -> u32 {
        self.epoch += 1;
        let epoch = self.epoch;
        self.queue.clear();
        self.queue.push(root as u32);
        self.stamp[root] = epoch;
        self.depth[root] = 0;
        self.parent[root] = u32::MAX;
        let mut best = bound;
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            let du = self.depth[u as usize];
            if 2 * du >= best {
                break;
            }
            let parent = self.parent[u as usize];
            for w in self.neighbors(u) {
                if w == parent {
                    continue;
                }
                let wi = w as usize;
                if self.stamp[wi] == epoch {
                    best = best.min(du + self.depth[wi] + 1);
                } else {
                    self.stamp[wi] = epoch;
                    self.depth[wi] = du + 1;
                    self.parent[wi] = u;
                    self.queue.push(w);
                }
            }
        }
        best
    }
}

/// The three girth verdicts for one `3 x L` exponent matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckerVerdicts {
    pub exponent: Girth,
    pub lifted: Girth,
    pub m8_valid: bool,
}

impl CheckerVerdicts {
    pub fn agree(&self) -> bool {
        self.exponent == self.lifted && self.m8_valid == self.exponent.at_least(8)
    }
}

/// Runs all three checkers on a normalized `3 x L` matrix.
pub fn compare_checkers(e: &ExponentMatrix) -> Result<CheckerVerdicts> {
    let m8_valid = check_m8_validity(&e.to_m8()?).valid;
    let lifted = girth_lifted_with(
        &crate::lifting::lift_with(e, Workers::Sequential),
        Workers::Sequential,
    )?;
    Ok(CheckerVerdicts {
        exponent: girth_exponent(e),
        lifted,
        m8_valid,
    })
}

/// [`compare_checkers`] over many matrices, one task per matrix.
pub fn compare_checkers_many(
    matrices: &[ExponentMatrix],
    workers: Workers,
) -> Result<Vec<CheckerVerdicts>> {
    exec::install(workers, || {
        exec::map_slice(workers, matrices, compare_checkers)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Modulus;
    use crate::lifting::lift;

    fn e1() -> ExponentMatrix {
        ExponentMatrix::new(
            vec![vec![0; 5], vec![0, 1, 2, 3, 4], vec![0, 11, 5, 9, 16]],
            17,
        )
        .unwrap()
    }

    fn e2() -> ExponentMatrix {
        ExponentMatrix::new(
            vec![
                vec![0; 6],
                vec![0, 1, 2, 3, 4, 5],
                vec![0, 16, 9, 6, 14, 22],
            ],
            23,
        )
        .unwrap()
    }

    #[test]
    fn e1_m8_is_valid() {
        let r = check_m8_validity(&e1().to_m8().unwrap());
        assert!(r.valid);
        assert_eq!(r.violation, None);
    }

    #[test]
    fn duplicate_row_header() {
        let m = Girth8Matrix::new(vec![0, 0, 3], vec![0, 1, 5], Modulus::Unbounded).unwrap();
        let r = check_m8_validity(&m);
        assert!(!r.valid);
        assert_eq!(
            r.violation,
            Some(Violation::RowACollision {
                first: 0,
                second: 1
            })
        );
    }

    #[test]
    fn duplicate_col_header_mod_p() {
        let m = Girth8Matrix::new(vec![0, 1, 3], vec![0, 8, 1], Modulus::Unbounded).unwrap();
        assert!(matches!(
            check_m8_validity(&m.at_modulus(7).unwrap()).violation,
            Some(Violation::ColBCollision {
                first: 1,
                second: 2
            })
        ));
    }

    #[test]
    fn diagonal_collision_reports_position() {
        // m[1][1] = 1 + 1 = 2 = m[2][0]
        let m = Girth8Matrix::new(vec![0, 1, 2], vec![0, 1, 7], Modulus::Unbounded).unwrap();
        let r = check_m8_validity(&m);
        assert_eq!(
            r.violation,
            Some(Violation::DiagonalCollision {
                index: 1,
                other: (2, 0)
            })
        );
    }

    #[test]
    fn e1_reinterpreted_at_13_agrees_with_bfs() {
        let e = e1().with_lifting_degree(13).unwrap();
        let valid = check_m8_validity(&e1().to_m8().unwrap().at_modulus(13).unwrap()).valid;
        let g = girth_lifted(&lift(&e)).unwrap();
        assert_eq!(valid, g.at_least(8));
        assert_eq!(girth_exponent(&e), g);
    }

    #[test]
    fn zero_matrix_has_four_cycles() {
        let z = ExponentMatrix::zeros(3, 2, 5).unwrap();
        let w = find_cycle(&z, 2).unwrap().unwrap();
        assert_eq!(w.length, 4);
        assert_eq!(w.rows, vec![0, 1]);
        assert_eq!(w.cols, vec![0, 1, 0]);
        assert!(w.verify(&z));
        assert_eq!(
            girth_exponent(&ExponentMatrix::zeros(3, 3, 11).unwrap()),
            Girth::Cycle(4)
        );
    }

    #[test]
    fn e1_cycles() {
        assert_eq!(find_cycle(&e1(), 2).unwrap(), None);
        assert_eq!(find_cycle(&e1(), 3).unwrap(), None);
        let w = find_cycle(&e1(), 4).unwrap().expect("girth is exactly 8");
        assert!(w.verify(&e1()));
        assert_eq!(girth_exponent(&e1()), Girth::Cycle(8));
        assert_eq!(find_cycle(&e1(), 7), Err(Error::KTooLarge(7)));
    }

    #[test]
    fn e2_below_minimum_lifting_degree() {
        let e = e2().with_lifting_degree(21).unwrap();
        assert_eq!(girth_exponent(&e), girth_lifted(&lift(&e)).unwrap());
    }

    #[test]
    fn lifted_girths() {
        let z = ExponentMatrix::zeros(3, 2, 3).unwrap();
        assert_eq!(girth_lifted(&lift(&z)).unwrap(), Girth::Cycle(4));
        assert_eq!(girth_lifted(&lift(&e1())).unwrap(), Girth::Cycle(8));
        assert_eq!(girth_lifted(&lift(&e2())).unwrap(), Girth::Cycle(8));
        assert_eq!(
            girth_lifted_with(&lift(&e2()), Workers::Sequential).unwrap(),
            Girth::Cycle(8)
        );
    }

    #[test]
    fn single_row_has_no_cycles() {
        let e = ExponentMatrix::new(vec![vec![0, 3, 1]], 5).unwrap();
        assert_eq!(girth_exponent(&e), Girth::AboveTwelve);
        assert_eq!(girth_lifted(&lift(&e)).unwrap(), Girth::AboveTwelve);
    }

    #[test]
    fn single_column_graph_has_no_cycles() {
        let h = SparseBinaryMatrix::from_columns(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(girth_lifted(&h).unwrap(), Girth::AboveTwelve);
    }

    #[test]
    fn empty_matrix_rejected() {
        let h = SparseBinaryMatrix::from_columns(0, vec![]).unwrap();
        assert_eq!(girth_lifted(&h), Err(Error::EmptyMatrix));
    }

    #[test]
    fn girth_serializes_marker() {
        assert_eq!(
            serde_json::to_string(&Girth::AboveTwelve).unwrap(),
            "\">12\""
        );
        assert_eq!(serde_json::from_str::<Girth>("8").unwrap(), Girth::Cycle(8));
        let w = find_cycle(&ExponentMatrix::zeros(3, 2, 5).unwrap(), 2)
            .unwrap()
            .unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(
            json,
            r#"{"length":4,"rows":[0,1],"cols":[0,1,0],"residual":0}"#
        );
    }
}
