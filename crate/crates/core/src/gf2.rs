//! Bit-packed vectors and matrices over GF(2).
//!
//! Coordinate `j` (0-based) of a vector lives in bit `j % 64` of word
//! `j / 64`. In the text format the first character is coordinate 0.

use std::fmt;
use std::ops::BitXorAssign;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Mask with the low `len` bits set (`len <= 64`).
#[inline]
pub fn low_mask(len: usize) -> u64 {
    if len >= WORD_BITS {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Fixed-length vector over GF(2). Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector of length `len <= 64` from the low bits of `bits`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= WORD_BITS, "from_u64 needs len <= 64, got {len}");
        let mut v = BitVec::zeros(len);
        if len > 0 {
            v.words[0] = bits & low_mask(len);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Low word for vectors of length at most 64.
    pub fn to_u64(&self) -> Option<u64> {
        (self.len <= WORD_BITS).then(|| self.words.first().copied().unwrap_or(0))
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let bit = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= bit;
        } else {
            self.words[i / WORD_BITS] &= !bit;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let cur = self.get(i);
        self.set(i, !cur);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Euclidean inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    /// Index of the first set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    /// Concatenation `self | other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Coordinates selected by `idx`, in that order.
    pub fn select(&self, idx: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(idx.len());
        for (t, &i) in idx.iter().enumerate() {
            if self.get(i) {
                out.set(t, true);
            }
        }
        out
    }

    /// Tail bits beyond `len` are zero.
    pub fn is_canonical(&self) -> bool {
        let extra = self.words.len() * WORD_BITS - self.len;
        if extra == 0 {
            return true;
        }
        let last = *self.words.last().unwrap();
        last >> (WORD_BITS - extra) == 0
    }
}

impl BitXorAssign<&BitVec> for BitVec {
    fn bitxor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(i, true),
                _ => return Err(Error::parse(1, format!("invalid bit character {:?}", c as char))),
            }
        }
        Ok(v)
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Matrix {
    ncols: usize,
    rows: Vec<BitVec>,
}

impl Gf2Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Gf2Matrix {
            ncols,
            rows: vec![BitVec::zeros(ncols); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>) -> Result<Self> {
        let ncols = rows
            .first()
            .map(BitVec::len)
            .ok_or_else(|| Error::DimensionMismatch("matrix needs at least one row".into()))?;
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {ncols} columns",
                bad.len()
            )));
        }
        Ok(Gf2Matrix { ncols, rows })
    }

    /// Rows given as low-bit masks of width `ncols <= 64`.
    pub fn from_u64_rows(ncols: usize, rows: &[u64]) -> Self {
        Gf2Matrix {
            ncols,
            rows: rows.iter().map(|&r| BitVec::from_u64(ncols, r)).collect(),
        }
    }

    /// Parses rows written as `0`/`1` strings, e.g. `["110", "011"]`.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let rows = rows.iter().map(|s| s.parse()).collect::<Result<Vec<BitVec>>>()?;
        Gf2Matrix::from_rows(rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    /// Rows as low-bit masks when `ncols <= 64`.
    pub fn to_u64_rows(&self) -> Option<Vec<u64>> {
        self.rows.iter().map(BitVec::to_u64).collect()
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut c = BitVec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> Gf2Matrix {
        Gf2Matrix {
            ncols: self.nrows(),
            rows: (0..self.ncols).map(|j| self.column(j)).collect(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Gf2Matrix {
        Gf2Matrix {
            ncols: cols.len(),
            rows: self.rows.iter().map(|r| r.select(cols)).collect(),
        }
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Gf2Matrix {
        assert_eq!(perm.len(), self.ncols, "column permutation has wrong length");
        self.select_columns(perm)
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Gf2Matrix {
        assert_eq!(perm.len(), self.nrows(), "row permutation has wrong length");
        Gf2Matrix {
            ncols: self.ncols,
            rows: perm.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.nrows() != other.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot place {} rows beside {} rows",
                self.nrows(),
                other.nrows()
            )));
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.concat(b)).collect();
        Gf2Matrix::from_rows(rows)
    }

    /// Reduced row echelon form with pivots taken first-nonzero, left to
    /// right. Returns the nonzero rows and their pivot columns.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.ncols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(col) {
                    *row ^= &pivot_row;
                }
            }
            pivots.push(col);
            r += 1;
        }
        rows.truncate(r);
        (
            Gf2Matrix {
                ncols: self.ncols,
                rows,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.nrows()
    }

    /// Inverse by Gauss-Jordan elimination on `[M | I]`.
    pub fn invert(&self) -> Result<Gf2Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.nrows(),
                self.ncols
            )));
        }
        let n = self.nrows();
        let aug = self.hconcat(&Gf2Matrix::identity(n))?;
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        let right: Vec<usize> = (n..2 * n).collect();
        Ok(red.select_columns(&right))
    }

    /// Standard product over GF(2).
    pub fn mul(&self, rhs: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.ncols != rhs.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols,
                rhs.nrows(),
                rhs.ncols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(rhs.ncols);
                for i in r.iter_ones() {
                    acc ^= &rhs.rows[i];
                }
                acc
            })
            .collect();
        Ok(Gf2Matrix {
            ncols: rhs.ncols,
            rows,
        })
    }

    /// Row vector times matrix: `v * self`.
    pub fn left_mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.nrows(), "vector length must equal the row count");
        let mut acc = BitVec::zeros(self.ncols);
        for i in v.iter_ones() {
            acc ^= &self.rows[i];
        }
        acc
    }

    /// Row-reduces so that the first `nrows` columns become the identity,
    /// without permuting columns. `None` when those columns are dependent.
    pub fn systematic_form(&self) -> Option<Gf2Matrix> {
        let k = self.nrows();
        if self.ncols < k {
            return None;
        }
        let mut rows = self.rows.clone();
        for col in 0..k {
            let p = (col..k).find(|&i| rows[i].get(col))?;
            rows.swap(col, p);
            let pivot_row = rows[col].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != col && row.get(col) {
                    *row ^= &pivot_row;
                }
            }
        }
        Some(Gf2Matrix {
            ncols: self.ncols,
            rows,
        })
    }

    /// Serializes in the matrix text format: a `"<nrows> <ncols>"` header
    /// followed by one `0`/`1` line per row, newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.nrows(), self.ncols);
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Gf2Matrix> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let mut dims = header.split(' ');
        let mut dim = |what: &str| -> Result<usize> {
            dims.next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| Error::parse(1, format!("bad {what} in header {header:?}")))
        };
        let nrows = dim("row count")?;
        let ncols = dim("column count")?;
        if dims.next().is_some() {
            return Err(Error::parse(1, format!("trailing tokens in header {header:?}")));
        }
        if nrows == 0 || ncols == 0 {
            return Err(Error::parse(1, "matrix dimensions must be positive"));
        }
        let mut rows = Vec::with_capacity(nrows);
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            if i >= nrows {
                return Err(Error::parse(lineno, "more rows than declared"));
            }
            if line.len() != ncols {
                return Err(Error::parse(
                    lineno,
                    format!("expected {ncols} characters, found {}", line.len()),
                ));
            }
            let row: BitVec = line.parse().map_err(|e| match e {
                Error::Parse { msg, .. } => Error::parse(lineno, msg),
                other => other,
            })?;
            rows.push(row);
        }
        if rows.len() != nrows {
            return Err(Error::parse(
                rows.len() + 2,
                format!("expected {nrows} rows, found {}", rows.len()),
            ));
        }
        Gf2Matrix::from_rows(rows)
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(ToString::to_string).collect();
        write!(f, "Gf2Matrix[{}]", rows.join(", "))
    }
}

/// Rank of a set of vectors given as low-bit masks (any width <= 64).
pub fn rank_u64(vectors: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &v in vectors {
        if insert_into_basis(&mut basis, v) {
            rank += 1;
        }
    }
    rank
}

/// XOR-basis insertion keyed by highest set bit. Returns false when `v`
/// already lies in the span.
#[inline]
pub fn insert_into_basis(basis: &mut [u64; 64], mut v: u64) -> bool {
    while v != 0 {
        let top = 63 - v.leading_zeros() as usize;
        if basis[top] == 0 {
            basis[top] = v;
            return true;
        }
        v ^= basis[top];
    }
    false
}
