//! Circulant lifting, GF(2) rank and the alist text format.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Workers};
use crate::exponent::ExponentMatrix;

/// Sparse binary matrix with both column and row adjacency kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseBinaryMatrix {
    n_rows: usize,
    n_cols: usize,
    cols: Vec<Vec<u32>>,
    rows: Vec<Vec<u32>>,
}

impl SparseBinaryMatrix {
    /// Builds from per-column row indices. Duplicates collapse.
    pub fn from_columns(n_rows: usize, mut cols: Vec<Vec<u32>>) -> Result<Self> {
        let mut rows = vec![Vec::new(); n_rows];
        for (j, col) in cols.iter_mut().enumerate() {
            col.sort_unstable();
            col.dedup();
            for &r in col.iter() {
                let slot = rows.get_mut(r as usize).ok_or(Error::IndexOutOfRange {
                    index: u64::from(r) + 1,
                    max: n_rows,
                })?;
                slot.push(j as u32);
            }
        }
        Ok(Self {
            n_rows,
            n_cols: cols.len(),
            cols,
            rows,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_columns(n, (0..n as u32).map(|i| vec![i]).collect()).unwrap()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Row indices of column `j`, ascending.
    pub fn column(&self, j: usize) -> &[u32] {
        &self.cols[j]
    }

    /// Column indices of row `i`, ascending.
    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j].binary_search(&(i as u32)).is_ok()
    }

    /// `H x^T` over GF(2) for a hard-decision word.
    pub fn syndrome_is_zero(&self, bits: &[bool]) -> bool {
        self.rows
            .iter()
            .all(|r| !r.iter().fold(false, |acc, &j| acc ^ bits[j as usize]))
    }
}

/// Replaces entry `e` of block `(i, j)` by the `p x p` permutation whose
/// row `t` has its one in column `(t + e) mod p`.
pub fn lift(e: &ExponentMatrix) -> SparseBinaryMatrix {
    lift_with(e, Workers::Auto)
}

pub fn lift_with(e: &ExponentMatrix, workers: Workers) -> SparseBinaryMatrix {
    let p = e.lifting_degree() as usize;
    let (j_rows, l_cols) = (e.rows(), e.cols());
    // column s of block j is hit by block-row t with (t + e) mod p = s
    let blocks: Vec<Vec<Vec<u32>>> = exec::map_range(workers, l_cols, |j| {
        (0..p)
            .map(|s| {
                (0..j_rows)
                    .map(|i| {
                        let shift = e.get(i, j) as usize;
                        (i * p + (s + p - shift) % p) as u32
                    })
                    .collect()
            })
            .collect()
    });
    SparseBinaryMatrix::from_columns(j_rows * p, blocks.into_iter().flatten().collect())
        .expect("lifted indices are in range")
}

/// Rank over GF(2) by dense bitset elimination.
pub fn rank_gf2(h: &SparseBinaryMatrix) -> usize {
    let words = h.n_cols().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..h.n_rows())
        .map(|i| {
            let mut bits = vec![0u64; words];
            for &j in h.row(i) {
                bits[j as usize / 64] |= 1 << (j % 64);
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for col in 0..h.n_cols() {
        let (w, mask) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut().filter(|r| r[w] & mask != 0) {
            for (x, y) in row[w..].iter_mut().zip(&pivot_row[w..]) {
                *x ^= y;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Serializes in alist layout (1-based indices). Empty lists are written as a
/// single `0`; other lists are not padded.
pub fn write_alist(h: &SparseBinaryMatrix) -> String {
    let col_w: Vec<usize> = (0..h.n_cols()).map(|j| h.column(j).len()).collect();
    let row_w: Vec<usize> = (0..h.n_rows()).map(|i| h.row(i).len()).collect();
    let join = |v: &mut dyn Iterator<Item = usize>| {
        let s = v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        if s.is_empty() {
            "0".to_string()
        } else {
            s
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.n_cols(), h.n_rows());
    let _ = writeln!(
        out,
        "{} {}",
        col_w.iter().max().copied().unwrap_or(0),
        row_w.iter().max().copied().unwrap_or(0)
    );
    let _ = writeln!(out, "{}", join(&mut col_w.iter().copied()));
    let _ = writeln!(out, "{}", join(&mut row_w.iter().copied()));
    for j in 0..h.n_cols() {
        let _ = writeln!(
            out,
            "{}",
            join(&mut h.column(j).iter().map(|&r| r as usize + 1))
        );
    }
    for i in 0..h.n_rows() {
        let _ = writeln!(
            out,
            "{}",
            join(&mut h.row(i).iter().map(|&c| c as usize + 1))
        );
    }
    out
}

/// Parses alist text. Zero entries used as padding are skipped.
pub fn read_alist(text: &str) -> Result<SparseBinaryMatrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut next_line = |what: &str| -> Result<Vec<u64>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::MalformedHeader(format!("missing {what}")))?;
        line.split_whitespace()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::MalformedHeader(format!("bad number {t:?} in {what}")))
            })
            .collect()
    };

    let dims = next_line("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(Error::MalformedHeader("first line must be \"N M\"".into()));
    };
    let (n, m) = (n as usize, m as usize);
    let maxw = next_line("max weights")?;
    let [max_col_w, max_row_w] = maxw[..] else {
        return Err(Error::MalformedHeader(
            "second line must hold two weights".into(),
        ));
    };
    let col_w = next_line("column weights")?;
    let row_w = next_line("row weights")?;
    if col_w.len() != n || row_w.len() != m {
        return Err(Error::MalformedHeader(format!(
            "expected {n} column and {m} row weights, got {} and {}",
            col_w.len(),
            row_w.len()
        )));
    }
    if col_w.iter().any(|&w| w > max_col_w) || row_w.iter().any(|&w| w > max_row_w) {
        return Err(Error::WeightMismatch(
            "weight exceeds declared maximum".into(),
        ));
    }

    let mut read_lists = |count: usize, weights: &[u64], bound: usize, what: &str| {
        (0..count)
            .map(|k| {
                let entries: Vec<u64> = next_line(what)?.into_iter().filter(|&x| x != 0).collect();
                if entries.len() as u64 != weights[k] {
                    return Err(Error::WeightMismatch(format!(
                        "{what} {} lists {} entries, weight says {}",
                        k + 1,
                        entries.len(),
                        weights[k]
                    )));
                }
                entries
                    .into_iter()
                    .map(|x| {
                        if x as usize > bound {
                            Err(Error::IndexOutOfRange {
                                index: x,
                                max: bound,
                            })
                        } else {
                            Ok((x - 1) as u32)
                        }
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()
    };
    let cols = read_lists(n, &col_w, m, "column")?;
    let rows = read_lists(m, &row_w, n, "row")?;

    let h = SparseBinaryMatrix::from_columns(m, cols)?;
    for (i, mut listed) in rows.into_iter().enumerate() {
        listed.sort_unstable();
        if listed != h.row(i) {
            return Err(Error::WeightMismatch(format!(
                "row {} disagrees with the column lists",
                i + 1
            )));
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> ExponentMatrix {
        ExponentMatrix::new(
            vec![vec![0; 5], vec![0, 1, 2, 3, 4], vec![0, 11, 5, 9, 16]],
            17,
        )
        .unwrap()
    }

    #[test]
    fn lift_zero_matrix_is_stacked_identities() {
        let h = lift(&ExponentMatrix::zeros(3, 2, 2).unwrap());
        assert_eq!((h.n_rows(), h.n_cols()), (6, 4));
        for j in 0..4u32 {
            let t = j % 2;
            assert_eq!(h.column(j as usize), &[t, 2 + t, 4 + t]);
        }
    }

    #[test]
    fn lift_single_shift() {
        let e = ExponentMatrix::new(vec![vec![0, 1]], 3).unwrap();
        let h = lift(&e);
        // block 1: row t -> column (t + 1) mod 3
        let block: Vec<Vec<u32>> = (0..3).map(|t| h.row(t)[1..].to_vec()).collect();
        assert_eq!(block, vec![vec![4], vec![5], vec![3]]);
    }

    #[test]
    fn lift_e1_is_regular() {
        let h = lift(&e1());
        assert_eq!((h.n_rows(), h.n_cols()), (51, 85));
        assert!((0..85).all(|j| h.column(j).len() == 3));
        assert!((0..51).all(|i| h.row(i).len() == 5));
        // one per block-row and block-column
        for bi in 0..3 {
            for bj in 0..5 {
                let mut count_rows = [0; 17];
                for s in 0..17 {
                    let hits: Vec<_> = h
                        .column(bj * 17 + s)
                        .iter()
                        .filter(|&&r| r as usize / 17 == bi)
                        .collect();
                    assert_eq!(hits.len(), 1);
                    count_rows[*hits[0] as usize % 17] += 1;
                }
                assert!(count_rows.iter().all(|&c| c == 1));
            }
        }
    }

    #[test]
    fn sequential_and_parallel_lift_agree() {
        assert_eq!(lift_with(&e1(), Workers::Sequential), lift(&e1()));
    }

    #[test]
    fn rank_basic() {
        assert_eq!(rank_gf2(&SparseBinaryMatrix::identity(70)), 70);
        let h = SparseBinaryMatrix::from_columns(2, vec![vec![0, 1], vec![], vec![0, 1]]).unwrap();
        assert_eq!(rank_gf2(&h), 1);
    }

    #[test]
    fn rank_of_lifted_e1() {
        // each block-row of a regular lift sums to the all-ones word, so at
        // least J - 1 = 2 dependencies
        let r = rank_gf2(&lift(&e1()));
        assert!(r <= 49);
        assert_eq!(r, 49);
    }

    #[test]
    fn alist_identity_exact() {
        let text = write_alist(&SparseBinaryMatrix::identity(2));
        assert_eq!(text, "2 2\n1 1\n1 1\n1 1\n1\n2\n1\n2\n");
        assert_eq!(read_alist(&text).unwrap(), SparseBinaryMatrix::identity(2));
    }

    #[test]
    fn alist_lifted() {
        let h = lift(&ExponentMatrix::zeros(3, 2, 2).unwrap());
        assert_eq!(read_alist(&write_alist(&h)).unwrap(), h);

        let text = write_alist(&lift(&e1()));
        assert_eq!(text.lines().nth(1), Some("3 5"));
    }

    #[test]
    fn alist_tolerates_padding() {
        let padded = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        let h = read_alist(padded).unwrap();
        assert_eq!(h.column(0), &[0]);
        assert_eq!(h.column(1), &[0, 1]);
        assert_eq!(h.column(2), &[1]);
    }

    #[test]
    fn alist_errors() {
        assert!(matches!(read_alist(""), Err(Error::MalformedHeader(_))));
        assert!(matches!(
            read_alist("2 x\n"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(
            read_alist("2 2\n1 1\n1 1\n1 1\n1 2\n2\n1\n2\n"),
            Err(Error::WeightMismatch(_))
        ));
        assert!(matches!(
            read_alist("2 2\n1 1\n1 1\n1 1\n3\n2\n1\n2\n"),
            Err(Error::IndexOutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            read_alist("2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n"),
            Err(Error::WeightMismatch(_))
        ));
    }
}
