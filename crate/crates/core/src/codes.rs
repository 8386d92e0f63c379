//! Binary linear `[n, k, d]` codes: parameters, duality, weight
//! enumerators, shortening and the complementary-information-set test.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::gf2::{insert_into_basis, low_mask, Gf2Matrix};

/// Codes are stored as one `u64` per generator row.
pub const MAX_LENGTH: usize = 64;
/// Largest dimension whose codewords are enumerated exhaustively.
pub const MAX_ENUM_DIM: usize = 28;
/// Largest half-length accepted by the brute-force CIS oracle.
pub const MAX_BRUTEFORCE_DIM: usize = 8;

/// A binary linear code given by a full-rank generator matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearCode {
    n: usize,
    gen: Vec<u64>,
}

impl LinearCode {
    pub fn new(gen: &Gf2Matrix) -> Result<Self> {
        let n = gen.ncols();
        if n > MAX_LENGTH {
            return Err(Error::LengthTooLarge { n, max: MAX_LENGTH });
        }
        let rows = gen.to_u64_rows().expect("width checked above");
        LinearCode::from_rows(n, rows)
    }

    /// `rows` must be linearly independent words of width `n`.
    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self> {
        if n > MAX_LENGTH {
            return Err(Error::LengthTooLarge { n, max: MAX_LENGTH });
        }
        if rows.is_empty() || n == 0 {
            return Err(Error::PreconditionFailed(
                "a code needs 0 < k <= n".into(),
            ));
        }
        let mask = low_mask(n);
        if rows.iter().any(|&r| r & !mask != 0) {
            return Err(Error::DimensionMismatch(format!(
                "generator row wider than length {n}"
            )));
        }
        let rank = crate::gf2::rank_u64(&rows);
        if rank < rows.len() {
            return Err(Error::RankDeficient {
                rank,
                rows: rows.len(),
            });
        }
        Ok(LinearCode { n, gen: rows })
    }

    /// Code spanned by `rows`, which may be dependent (at least one nonzero).
    pub fn from_spanning_rows(n: usize, rows: &[u64]) -> Result<Self> {
        let (basis, _) = rref_rows(n, rows);
        LinearCode::from_rows(n, basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.gen.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.gen
    }

    pub fn generator(&self) -> Gf2Matrix {
        Gf2Matrix::from_u64_rows(self.n, &self.gen)
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.k() > MAX_ENUM_DIM {
            return Err(Error::DimensionTooLarge {
                dim: self.k(),
                max: MAX_ENUM_DIM,
            });
        }
        Ok(())
    }

    /// All `2^k` codewords in Gray-code order, starting with zero.
    pub fn codewords(&self) -> Result<Vec<u64>> {
        self.check_enumerable()?;
        Ok(gray_span(&self.gen))
    }

    pub fn contains(&self, word: u64) -> bool {
        let (basis, pivots) = rref_rows(self.n, &self.gen);
        reduce(word, &basis, &pivots) == 0
    }

    pub fn weight_distribution(&self) -> Result<WeightDistribution> {
        self.check_enumerable()?;
        let mut counts = vec![0u64; self.n + 1];
        counts[0] = 1;
        let mut word = 0u64;
        for i in 1u64..(1u64 << self.k()) {
            word ^= self.gen[i.trailing_zeros() as usize];
            counts[word.count_ones() as usize] += 1;
        }
        Ok(WeightDistribution { counts })
    }

    pub fn minimum_weight(&self) -> Result<usize> {
        Ok(self
            .weight_distribution()?
            .minimum_weight()
            .expect("a code of positive dimension has a nonzero word"))
    }

    /// `None` when `k == n` (the dual is the zero code).
    pub fn dual_code(&self) -> Option<LinearCode> {
        if self.k() == self.n {
            return None;
        }
        let (basis, pivots) = rref_rows(self.n, &self.gen);
        let mut rows = Vec::with_capacity(self.n - self.k());
        for j in (0..self.n).filter(|j| !pivots.contains(j)) {
            let mut v = 1u64 << j;
            for (row, &p) in basis.iter().zip(&pivots) {
                if row >> j & 1 == 1 {
                    v |= 1u64 << p;
                }
            }
            rows.push(v);
        }
        Some(LinearCode::from_rows(self.n, rows).expect("dual basis is independent"))
    }

    /// Weight distribution of the dual, by direct enumeration.
    pub fn dual_weight_distribution(&self) -> Result<WeightDistribution> {
        match self.dual_code() {
            Some(d) => d.weight_distribution(),
            None => {
                let mut counts = vec![0u64; self.n + 1];
                counts[0] = 1;
                Ok(WeightDistribution { counts })
            }
        }
    }

    /// Minimum weight of the dual; `None` when the dual is the zero code.
    pub fn dual_distance(&self) -> Result<Option<usize>> {
        Ok(self.dual_weight_distribution()?.minimum_weight())
    }

    /// Some coordinate is zero in every codeword.
    pub fn has_zero_column(&self) -> bool {
        let support = self.gen.iter().fold(0u64, |acc, &r| acc | r);
        support != low_mask(self.n)
    }

    /// All codewords have even weight.
    pub fn is_even(&self) -> bool {
        self.gen.iter().all(|r| r.count_ones() % 2 == 0)
    }

    /// `C == C^perp`. False unless `n == 2k`.
    pub fn is_self_dual(&self) -> bool {
        if self.n != 2 * self.k() {
            return false;
        }
        self.gen
            .iter()
            .all(|&a| self.gen.iter().all(|&b| (a & b).count_ones() % 2 == 0))
    }

    /// `A_w == A_w^perp` for every `w`.
    pub fn is_formally_self_dual(&self) -> Result<bool> {
        if self.n != 2 * self.k() {
            return Ok(false);
        }
        Ok(self.weight_distribution()? == self.dual_weight_distribution()?)
    }

    /// The subcode of words vanishing on coordinate 0; the coordinate is
    /// kept, so the result is an `[n, k - 1]` code.
    pub fn shorten_first(&self) -> Result<LinearCode> {
        let Some(pivot) = self.gen.iter().position(|r| r & 1 == 1) else {
            return Err(Error::PreconditionFailed(
                "coordinate 1 is zero on the whole code".into(),
            ));
        };
        if self.k() == 1 {
            return Err(Error::PreconditionFailed(
                "shortening a one-dimensional code leaves the zero code".into(),
            ));
        }
        let p = self.gen[pivot];
        let rows = self
            .gen
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pivot)
            .map(|(_, &r)| if r & 1 == 1 { r ^ p } else { r })
            .collect();
        LinearCode::from_rows(self.n, rows)
    }

    /// Column `j` of the generator as a `k`-bit mask.
    pub fn column_masks(&self) -> Vec<u64> {
        (0..self.n)
            .map(|j| {
                self.gen
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &r)| acc | ((r >> j & 1) << i))
            })
            .collect()
    }

    fn require_rate_half(&self) -> Result<()> {
        if self.n != 2 * self.k() {
            return Err(Error::NotRateOneHalf {
                n: self.n,
                k: self.k(),
            });
        }
        Ok(())
    }

    /// Searches for two complementary information sets. Column 1 is fixed
    /// in the first set and the other `k - 1` columns run over subsets of
    /// `{2, .., 2k}` in lexicographic order, so at most `C(2k-1, k-1)`
    /// candidates are examined. Returns the witness set on success.
    pub fn cis_certificate(&self) -> Result<Option<InfoSetCertificate>> {
        self.require_rate_half()?;
        let k = self.k();
        let cols = self.column_masks();
        for rest in (1..2 * k).combinations(k - 1) {
            let mut basis = [0u64; 64];
            if !insert_into_basis(&mut basis, cols[0]) {
                return Ok(None);
            }
            if !rest.iter().all(|&j| insert_into_basis(&mut basis, cols[j])) {
                continue;
            }
            let mut in_set = vec![false; 2 * k];
            in_set[0] = true;
            for &j in &rest {
                in_set[j] = true;
            }
            let mut basis = [0u64; 64];
            let complement_ok = (0..2 * k)
                .filter(|&j| !in_set[j])
                .all(|j| insert_into_basis(&mut basis, cols[j]));
            if complement_ok {
                let mut columns = vec![1];
                columns.extend(rest.iter().map(|&j| j + 1));
                return Ok(Some(InfoSetCertificate { columns }));
            }
        }
        Ok(None)
    }

    pub fn is_cis(&self) -> Result<bool> {
        Ok(self.cis_certificate()?.is_some())
    }

    /// Ground truth for [`LinearCode::cis_certificate`]: tries every one of
    /// the `C(2k, k)` splits with a generic matrix rank.
    pub fn is_cis_bruteforce(&self) -> Result<bool> {
        self.require_rate_half()?;
        let k = self.k();
        if k > MAX_BRUTEFORCE_DIM {
            return Err(Error::DimensionTooLarge {
                dim: k,
                max: MAX_BRUTEFORCE_DIM,
            });
        }
        let g = self.generator();
        for mask in 0u32..(1 << (2 * k)) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let (left, right): (Vec<usize>, Vec<usize>) =
                (0..2 * k).partition(|&j| mask >> j & 1 == 1);
            if g.select_columns(&left).rank() == k && g.select_columns(&right).rank() == k {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Certificate replay: both the witness and its complement have rank `k`.
    pub fn verify_certificate(&self, cert: &InfoSetCertificate) -> bool {
        let k = self.k();
        if self.n != 2 * k || cert.columns.len() != k {
            return false;
        }
        let g = self.generator();
        let left: Vec<usize> = cert.columns.iter().map(|&c| c - 1).collect();
        let right: Vec<usize> = (0..self.n).filter(|j| !left.contains(j)).collect();
        g.select_columns(&left).rank() == k && g.select_columns(&right).rank() == k
    }

    /// `[I | A]` with identical row space, when the first `k` columns are an
    /// information set. No column permutation is applied.
    pub fn systematic_form(&self) -> Option<Gf2Matrix> {
        self.generator().systematic_form()
    }

    /// Generator in reduced row echelon form; unique for the row space.
    pub fn canonical_basis(&self) -> LinearCode {
        let (rows, _) = rref_rows(self.n, &self.gen);
        LinearCode { n: self.n, gen: rows }
    }

    /// Same row space.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.canonical_basis().gen == other.canonical_basis().gen
    }

    /// Coordinate `j` of the result is coordinate `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> LinearCode {
        assert_eq!(perm.len(), self.n, "permutation length must equal the code length");
        let gen = self
            .gen
            .iter()
            .map(|&r| {
                perm.iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &src)| acc | ((r >> src & 1) << j))
            })
            .collect();
        LinearCode { n: self.n, gen }
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode[{}, {}]{:?}", self.n, self.k(), self.generator())
    }
}

/// Reduced row echelon form of `rows` (pivot = lowest set coordinate,
/// processed left to right). Returns the nonzero rows and pivot columns.
pub fn rref_rows(n: usize, rows: &[u64]) -> (Vec<u64>, Vec<usize>) {
    let mut rows = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        let pr = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row >> col & 1 == 1 {
                *row ^= pr;
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn reduce(mut word: u64, basis: &[u64], pivots: &[usize]) -> u64 {
    for (row, &p) in basis.iter().zip(pivots) {
        if word >> p & 1 == 1 {
            word ^= row;
        }
    }
    word
}

/// Span of `rows` in Gray-code order.
pub fn gray_span(rows: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << rows.len());
    let mut word = 0u64;
    out.push(0);
    for i in 1u64..(1u64 << rows.len()) {
        word ^= rows[i.trailing_zeros() as usize];
        out.push(word);
    }
    out
}

/// Counts `A_0, .., A_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        WeightDistribution { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn length(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Smallest positive weight present.
    pub fn minimum_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&w| self.counts[w] > 0)
    }

    /// Image under the MacWilliams identity,
    /// `A'_j = |C|^-1 * sum_i A_i K_j(i)` with binary Krawtchouk `K_j`.
    /// `None` if some coefficient is not a non-negative integer.
    pub fn macwilliams_transform(&self) -> Option<WeightDistribution> {
        let n = self.length();
        let size: i128 = self.counts.iter().map(|&c| c as i128).sum();
        let binom = binomial_table(n);
        let mut out = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut acc: i128 = 0;
            for (i, &a) in self.counts.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mut kraw: i128 = 0;
                for s in 0..=j.min(i) {
                    if j - s > n - i {
                        continue;
                    }
                    let term = binom[i][s] * binom[n - i][j - s];
                    kraw += if s % 2 == 0 { term } else { -term };
                }
                acc += a as i128 * kraw;
            }
            if acc < 0 || acc % size != 0 {
                return None;
            }
            out.push((acc / size) as u64);
        }
        Some(WeightDistribution { counts: out })
    }
}

fn binomial_table(n: usize) -> Vec<Vec<i128>> {
    let mut t = vec![vec![0i128; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + if j <= i - 1 { t[i - 1][j] } else { 0 };
        }
    }
    t
}

/// A set of `k` column indices (1-based) forming an information set whose
/// complement is also an information set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfoSetCertificate {
    pub columns: Vec<usize>,
}

impl fmt::Display for InfoSetCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.columns.iter().join(","))
    }
}
