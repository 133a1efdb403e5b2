//! Exponent matrices and girth-8 matrices.
//!
//! An [`ExponentMatrix`] is a `J x L` array of circulant shifts together with
//! the lifting degree `p`. For `J = 3` in normalized form
//!
//! ```text
//! 0   0    0   ...  0
//! 0   a_1  a_2 ...  a_{L-1}
//! 0   b_1  b_2 ...  b_{L-1}
//! ```
//!
//! the code is described equally well by the [`Girth8Matrix`] whose row
//! headers are the `a_i` and whose column headers are the negated `b_i`.
//! Headers are stored as `nb_i = -b_i`, which is what the constructions
//! produce directly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    entries: Vec<u64>,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u64>>, p: u64) -> Result<Self> {
        let cols = rows.first().map(Vec::len).ok_or(Error::NoRows)?;
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedRows {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::from_flat(rows.len(), cols, p, entries)
    }

    /// Builds from row-major entries.
    pub fn from_flat(rows: usize, cols: usize, p: u64, entries: Vec<u64>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::NoRows);
        }
        if cols < 2 {
            return Err(Error::TooFewColumns(cols));
        }
        if p < 2 {
            return Err(Error::LiftingDegreeTooSmall(p));
        }
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count must be rows * cols"
        );
        if let Some(k) = entries.iter().position(|&e| e >= p) {
            return Err(Error::EntryOutOfRange {
                row: k / cols,
                col: k % cols,
                value: entries[k],
                p,
            });
        }
        Ok(Self {
            rows,
            cols,
            p,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize, p: u64) -> Result<Self> {
        Self::from_flat(rows, cols, p, vec![0; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn lifting_degree(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_normalized(&self) -> bool {
        self.row(0).iter().all(|&e| e == 0) && (0..self.rows).all(|i| self.get(i, 0) == 0)
    }

    /// The same shifts read at another lifting degree (entries reduced mod `p`).
    pub fn with_lifting_degree(&self, p: u64) -> Result<Self> {
        Self::from_flat(
            self.rows,
            self.cols,
            p,
            self.entries.iter().map(|&e| e % p.max(1)).collect(),
        )
    }

    /// Subtracts row 0 from every row, then column 0 from every column.
    pub fn normalize(&self) -> Self {
        let p = self.p;
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[i * self.cols + j] = (self.get(i, j) + p - self.get(0, j)) % p;
            }
        }
        let first: Vec<u64> = (0..self.rows).map(|i| out.get(i, 0)).collect();
        for (i, c) in first.into_iter().enumerate() {
            for j in 0..self.cols {
                let e = &mut out.entries[i * self.cols + j];
                *e = (*e + p - c) % p;
            }
        }
        out
    }

    /// Column `j` of the output is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.cols)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.rows {
            entries.extend(perm.iter().map(|&src| self.get(i, src)));
        }
        Ok(Self { entries, ..*self })
    }

    pub fn swap_rows(&self, a: usize, b: usize) -> Result<Self> {
        for r in [a, b] {
            if r >= self.rows {
                return Err(Error::RowOutOfRange(r));
            }
        }
        let mut rows = self.to_rows();
        rows.swap(a, b);
        Ok(Self {
            entries: rows.concat(),
            ..*self
        })
    }

    /// Adds `c` (mod p) to every entry of row `i`.
    pub fn shift_row(&self, i: usize, c: u64) -> Self {
        let mut out = self.clone();
        for j in 0..self.cols {
            out.entries[i * self.cols + j] = (self.get(i, j) + c) % self.p;
        }
        out
    }

    /// Adds `c` (mod p) to every entry of column `j`.
    pub fn shift_column(&self, j: usize, c: u64) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            out.entries[i * self.cols + j] = (self.get(i, j) + c) % self.p;
        }
        out
    }

    pub fn to_m8(&self) -> Result<Girth8Matrix> {
        if self.rows != 3 {
            return Err(Error::WrongRowCount(self.rows));
        }
        if !self.is_normalized() {
            return Err(Error::NotNormalized);
        }
        let p = self.p;
        let a = self.row(1).to_vec();
        let nb = self.row(2).iter().map(|&b| (p - b) % p).collect();
        Girth8Matrix::new(a, nb, Modulus::Finite(p))
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for ExponentMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedText("empty input".into()))?;
        let dims = parse_numbers(header)?;
        let [j, l, p] = dims[..] else {
            return Err(Error::MalformedText(format!(
                "header must be \"J L p\", got {header:?}"
            )));
        };
        let (j, l) = (j as usize, l as usize);
        let mut rows = Vec::with_capacity(j);
        for i in 0..j {
            let line = lines
                .next()
                .ok_or_else(|| Error::MalformedText(format!("missing row {i}")))?;
            let row = parse_numbers(line)?;
            if row.len() != l {
                return Err(Error::MalformedText(format!(
                    "row {i} has {} entries, expected {l}",
                    row.len()
                )));
            }
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::MalformedText("trailing data after last row".into()));
        }
        Self::new(rows, p)
    }
}

fn parse_numbers(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::MalformedText(format!("not a non-negative integer: {t:?}")))
        })
        .collect()
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(n));
    }
    for &x in perm {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidPermutation(n));
        }
    }
    Ok(())
}

/// Arithmetic of a girth-8 matrix: residues mod `p`, or plain integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modulus {
    Finite(u64),
    Unbounded,
}

impl Modulus {
    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        match self {
            Modulus::Finite(p) => x % p,
            Modulus::Unbounded => x,
        }
    }
}

/// The `L x L` table `m[i][j] = a_i + nb_j`, reduced by the modulus when finite.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Girth8Matrix {
    modulus: Modulus,
    row_headers: Vec<u64>,
    col_headers: Vec<u64>,
}

impl Girth8Matrix {
    pub fn new(row_headers: Vec<u64>, col_headers: Vec<u64>, modulus: Modulus) -> Result<Self> {
        if row_headers.len() != col_headers.len()
            || row_headers.len() < 2
            || row_headers[0] != 0
            || col_headers[0] != 0
        {
            return Err(Error::InvalidHeaders);
        }
        if let Modulus::Finite(p) = modulus {
            if p < 2 {
                return Err(Error::LiftingDegreeTooSmall(p));
            }
            if let Some(&value) = row_headers.iter().chain(&col_headers).find(|&&v| v >= p) {
                return Err(Error::HeaderOutOfRange { value, p });
            }
        }
        Ok(Self {
            modulus,
            row_headers,
            col_headers,
        })
    }

    pub fn size(&self) -> usize {
        self.row_headers.len()
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// The `a_i`.
    pub fn row_headers(&self) -> &[u64] {
        &self.row_headers
    }

    /// The `nb_i = -b_i`.
    pub fn col_headers(&self) -> &[u64] {
        &self.col_headers
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        match self.modulus {
            // headers are already reduced, so one conditional subtraction suffices
            Modulus::Finite(p) => {
                let s = self.row_headers[i] + self.col_headers[j];
                if s >= p {
                    s - p
                } else {
                    s
                }
            }
            Modulus::Unbounded => self.row_headers[i] + self.col_headers[j],
        }
    }

    pub fn entries(&self) -> Vec<Vec<u64>> {
        let n = self.size();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn max_entry(&self) -> u64 {
        match self.modulus {
            Modulus::Unbounded => {
                self.row_headers.iter().max().unwrap() + self.col_headers.iter().max().unwrap()
            }
            Modulus::Finite(_) => {
                let n = self.size();
                (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| self.entry(i, j))
                    .max()
                    .unwrap()
            }
        }
    }

    /// Reduces the headers modulo `p`.
    pub fn at_modulus(&self, p: u64) -> Result<Self> {
        Self::new(
            self.row_headers.iter().map(|&a| a % p.max(1)).collect(),
            self.col_headers.iter().map(|&b| b % p.max(1)).collect(),
            Modulus::Finite(p),
        )
    }

    /// Reorders columns of the underlying code so that the row headers ascend.
    pub fn canonical(&self) -> Self {
        let mut order: Vec<usize> = (0..self.size()).collect();
        order.sort_by_key(|&i| (self.row_headers[i], i));
        Self {
            modulus: self.modulus,
            row_headers: order.iter().map(|&i| self.row_headers[i]).collect(),
            col_headers: order.iter().map(|&i| self.col_headers[i]).collect(),
        }
    }

    /// The normalized `3 x L` exponent matrix at lifting degree `p`.
    ///
    /// For a finite modulus `p` must equal it. For an unbounded matrix `p`
    /// must exceed every entry, so that no reduction alters the table.
    pub fn to_exponent(&self, p: u64) -> Result<ExponentMatrix> {
        match self.modulus {
            Modulus::Finite(modulus) if modulus != p => {
                return Err(Error::ModulusMismatch { p, modulus });
            }
            Modulus::Unbounded => {
                let max = self.max_entry();
                if p <= max {
                    return Err(Error::ModulusTooSmall { p, max });
                }
            }
            Modulus::Finite(_) => {}
        }
        let l = self.size();
        let mut entries = vec![0; l];
        entries.extend(self.row_headers.iter().map(|&a| a % p));
        entries.extend(self.col_headers.iter().map(|&nb| (p - nb % p) % p));
        ExponentMatrix::from_flat(3, l, p, entries)
    }
}
