//! The enumeration campaigns: GL(n, F2) classes by bordering, CIS codes
//! `[I | A]` from GL representatives, `[n, k, >= d]` codes along subcode
//! chains, dimension extension at fixed length, weight-2 CIS codes from
//! the previous length, and the survey / report tables over a store.
//!
//! Every campaign is one or more [`generate`] steps. Only the last step
//! honours the shard options; earlier steps are recomputed in full by each
//! shard so that the candidate stream of the final step is identical
//! everywhere.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::{low_mask, BitVec, Gf2Matrix};
use crate::orderly::{generate, CanonStore, Canonical, ClassRecord, GenerateOptions};

/// Largest `n` for which [`classify_gl`] can hold matrices (rows are words).
pub const MAX_GL_N: usize = 32;

/// Inputs of one bordering step.
#[derive(Clone, Debug)]
pub struct BorderingInputs {
    pub sub: Gf2Matrix,
    pub x: BitVec,
    pub y: BitVec,
}

/// Parameters of [`chain_classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainParams {
    pub target_n: usize,
    pub target_k: usize,
    pub d_min: usize,
    pub even_only: bool,
}

/// Where the zero column goes before each chain stage adjoins a vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZeroColumn {
    First,
    #[default]
    Last,
}

/// `[[z, x], [y^T, A']]` with `z = 1 + x A'^-1 y^T`.
pub fn gl_extend(inp: &BorderingInputs) -> Result<Gf2Matrix> {
    let m = inp.sub.nrows();
    if !inp.sub.is_square() || inp.x.len() != m || inp.y.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "bordering a {}x{} matrix with vectors of length {} and {}",
            m,
            inp.sub.ncols(),
            inp.x.len(),
            inp.y.len()
        )));
    }
    if m + 1 > MAX_GL_N {
        return Err(Error::DimensionTooLarge { dim: m + 1, max: MAX_GL_N });
    }
    let sub = inp.sub.to_u64_rows().expect("bounded above");
    let inv = inp.sub.invert()?.to_u64_rows().expect("bounded above");
    let x = inp.x.to_u64().expect("bounded above");
    let y = inp.y.to_u64().expect("bounded above");
    let rows = border(&sub, &inv, x, y);
    let out = Gf2Matrix::from_u64_rows(m + 1, &rows);
    if !out.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    Ok(out)
}

fn border(sub: &[u64], inv: &[u64], x: u64, y: u64) -> Vec<u64> {
    let c = inv
        .iter()
        .enumerate()
        .filter(|&(i, _)| x >> i & 1 == 1)
        .fold(0u64, |acc, (_, &r)| acc ^ r);
    let z = 1 ^ ((c & y).count_ones() as u64 & 1);
    let mut rows = Vec::with_capacity(sub.len() + 1);
    rows.push(z | x << 1);
    for (i, &r) in sub.iter().enumerate() {
        rows.push((y >> i & 1) | r << 1);
    }
    rows
}

fn singleton_gl1() -> Result<CanonStore> {
    let mut store = CanonStore::new();
    let one = Gf2Matrix::identity(1);
    let rec = ClassRecord::from_matrix(&one)?;
    store.insert_if_new(rec.key, &one, true)?;
    Ok(store)
}

/// GL(n, F2) classes by bordering every representative of `prev` (the
/// GL(n-1) classes) with all `(x, y)` pairs. `prev` is ignored for `n == 1`.
pub fn classify_gl(n: usize, prev: &CanonStore, opts: &GenerateOptions) -> Result<CanonStore> {
    if n == 0 || n > MAX_GL_N {
        return Err(Error::DimensionTooLarge { dim: n, max: MAX_GL_N });
    }
    if n == 1 {
        return singleton_gl1();
    }
    let m = n - 1;
    let seeds: Vec<(Vec<u64>, Vec<u64>)> = prev
        .iter()
        .map(|r| {
            if !r.is_matrix() || r.object.nrows() != m || r.object.ncols() != m {
                return Err(Error::DimensionMismatch(format!(
                    "GL({n}) needs GL({m}) representatives"
                )));
            }
            let inv = r.object.invert()?;
            Ok((
                r.object.to_u64_rows().expect("bounded"),
                inv.to_u64_rows().expect("bounded"),
            ))
        })
        .collect::<Result<_>>()?;
    let pairs = 1u64 << (2 * m);
    let extender = |(sub, inv): &(Vec<u64>, Vec<u64>)| {
        (0..pairs)
            .map(|t| border(sub, inv, t & low_mask(m), t >> m))
            .collect::<Vec<_>>()
    };
    let canonize = |rows: &Vec<u64>| Canonical::of_matrix(&Gf2Matrix::from_u64_rows(n, rows));
    generate(&seeds, extender, |_| true, canonize, opts)
}

/// CIS codes `[I | A]` for every GL(n) representative `A`.
pub fn classify_cis_from_gl(n: usize, gl: &CanonStore, opts: &GenerateOptions) -> Result<CanonStore> {
    if gl.tags().any(|t| !t.is_matrix() || t.n != n || t.k != n) {
        return Err(Error::DimensionMismatch(format!(
            "classify-cis at length {} needs GL({n}) representatives",
            2 * n
        )));
    }
    if 2 * n > crate::codes::MAX_LENGTH {
        return Err(Error::LengthTooLarge { n: 2 * n, max: crate::codes::MAX_LENGTH });
    }
    let flat: Vec<u64> = gl
        .iter()
        .flat_map(|r| r.object.to_u64_rows().expect("bounded above"))
        .collect();
    let seeds: Vec<&[u64]> = flat.chunks(n).collect();
    let extender = |a: &&[u64]| {
        let rows: Vec<u64> = a.iter().enumerate().map(|(i, &r)| 1 << i | r << n).collect();
        std::iter::once(rows)
    };
    let canonize = |rows: &Vec<u64>| Canonical::of_code(&LinearCode::from_rows(2 * n, rows.clone())?);
    generate(&seeds, extender, |_| true, canonize, opts)
}

/// Nonzero coset representatives of `code` in `F2^n`: for each nontrivial
/// coset, its numerically smallest element, in increasing order.
pub fn coset_representatives(code: &LinearCode) -> Vec<u64> {
    let n = code.n();
    let mut rows = code.rows().to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in (0..n).rev() {
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
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    (1u64..1u64 << free.len())
        .map(|t| {
            free.iter()
                .enumerate()
                .fold(0u64, |acc, (b, &c)| acc | ((t >> b & 1) << c))
        })
        .collect()
}

fn admissible(code: &LinearCode, d_min: usize, even_only: bool) -> bool {
    (!even_only || code.is_even()) && code.minimum_weight().map(|d| d >= d_min).unwrap_or(false)
}

fn chain_stage0(n0: usize, d_min: usize, even_only: bool) -> Result<CanonStore> {
    let mut store = CanonStore::new();
    for w in d_min.max(1)..=n0 {
        if even_only && w % 2 == 1 {
            continue;
        }
        let code = LinearCode::from_rows(n0, vec![low_mask(w)])?;
        let rec = ClassRecord::from_code(&code)?;
        store.insert_if_new(rec.key, &rec.object, false)?;
    }
    Ok(store)
}

fn chain_step(
    base: &CanonStore,
    d_min: usize,
    even_only: bool,
    zero: ZeroColumn,
    opts: &GenerateOptions,
) -> Result<CanonStore> {
    let seeds: Vec<LinearCode> = base
        .iter()
        .map(|r| {
            let c = r.code()?;
            let rows = match zero {
                ZeroColumn::Last => c.rows().to_vec(),
                ZeroColumn::First => c.rows().iter().map(|&w| w << 1).collect(),
            };
            LinearCode::from_rows(c.n() + 1, rows)
        })
        .collect::<Result<_>>()?;
    extend_codes(&seeds, d_min, even_only, opts)
}

fn extend_codes(seeds: &[LinearCode], d_min: usize, even_only: bool, opts: &GenerateOptions) -> Result<CanonStore> {
    let extender = |c: &LinearCode| {
        coset_representatives(c).into_iter().filter_map(|x| {
            if x.count_ones() < d_min as u32 || (even_only && x.count_ones() % 2 == 1) {
                return None;
            }
            let mut rows = c.rows().to_vec();
            rows.push(x);
            Some(LinearCode::from_rows(c.n(), rows).expect("coset representative is outside the code"))
        })
        .collect::<Vec<_>>()
    };
    generate(
        seeds,
        extender,
        |c| admissible(c, d_min, even_only),
        Canonical::of_code,
        opts,
    )
}

/// All `[target_n, target_k, >= d_min]` codes (even codes only when
/// `even_only`) grown from one-dimensional codes by repeatedly appending a
/// zero column and adjoining a coset representative.
pub fn chain_classify(p: &ChainParams, opts: &GenerateOptions) -> Result<CanonStore> {
    chain_classify_with(p, ZeroColumn::Last, opts)
}

pub fn chain_classify_with(p: &ChainParams, zero: ZeroColumn, opts: &GenerateOptions) -> Result<CanonStore> {
    if p.target_k == 0 || p.target_k > p.target_n {
        return Err(Error::PreconditionFailed(format!(
            "chain needs 1 <= k <= n, got n = {}, k = {}",
            p.target_n, p.target_k
        )));
    }
    if p.target_n > crate::codes::MAX_LENGTH {
        return Err(Error::LengthTooLarge {
            n: p.target_n,
            max: crate::codes::MAX_LENGTH,
        });
    }
    opts.check()?;
    let n0 = p.target_n - p.target_k + 1;
    let mut store = chain_stage0(n0, p.d_min, p.even_only)?;
    if p.target_k == 1 {
        return Ok(if opts.shards == 1 {
            store
        } else {
            shard_of(&store, opts)
        });
    }
    let full = GenerateOptions::default();
    for stage in 1..p.target_k {
        let last = stage + 1 == p.target_k;
        store = chain_step(&store, p.d_min, p.even_only, zero, if last { opts } else { &full })?;
    }
    Ok(store)
}

fn shard_of(store: &CanonStore, opts: &GenerateOptions) -> CanonStore {
    let keep: std::collections::BTreeSet<_> = store
        .keys()
        .enumerate()
        .filter(|(i, _)| i % opts.shards == opts.shard_index)
        .map(|(_, k)| k.clone())
        .collect();
    store.filter(|r| keep.contains(&r.key))
}

/// Codes `C + <x>` over every code `C` of `base` and every nontrivial coset
/// representative `x`, kept when the minimum weight is at least `d_min`.
pub fn extend_dimension(base: &CanonStore, d_min: usize, opts: &GenerateOptions) -> Result<CanonStore> {
    let seeds: Vec<LinearCode> = base.iter().map(|r| r.code()).collect::<Result<_>>()?;
    if let Some(first) = seeds.first() {
        if seeds.iter().any(|c| c.n() != first.n()) {
            return Err(Error::DimensionMismatch("base codes differ in length".into()));
        }
    }
    extend_codes(&seeds, d_min, false, opts)
}

/// Generator `[I_k | A]` of `code` after moving a CIS witness to the front,
/// or `None` when the code is not CIS.
pub fn systematic_cis_generator(code: &LinearCode) -> Result<Option<Gf2Matrix>> {
    let Some(cert) = code.cis_certificate()? else {
        return Ok(None);
    };
    let mut perm: Vec<usize> = cert.columns.iter().map(|c| c - 1).collect();
    perm.extend((0..code.n()).filter(|j| !cert.columns.contains(&(j + 1))));
    Ok(code.permute_columns(&perm).systematic_form())
}

/// Rows of the `[2m + 2, m + 1]` code built from `[I_m | A]` and `y`:
/// first row `1 0..0 | 1 0..0`, then `0 | I_m | y^T | A`.
fn weight2_rows(a: &[u64], m: usize, y: u64) -> Vec<u64> {
    let n = m + 1;
    let mut rows = Vec::with_capacity(n);
    rows.push(1 | 1 << n);
    for (i, &r) in a.iter().enumerate() {
        rows.push(1 << (i + 1) | (y >> i & 1) << n | r << (n + 1));
    }
    rows
}

/// Length `2n` CIS codes of minimum weight 2 from the CIS classification
/// `prev` at length `2n - 2`.
pub fn build_weight2_cis(prev: &CanonStore, opts: &GenerateOptions) -> Result<CanonStore> {
    let seeds: Vec<(usize, Vec<u64>)> = prev
        .iter()
        .map(|r| {
            let c = r.code()?;
            let m = c.k();
            let g = systematic_cis_generator(&c)?.ok_or_else(|| {
                Error::PreconditionFailed(format!("code {} is not CIS", r.key))
            })?;
            let a = g.select_columns(&(m..2 * m).collect::<Vec<_>>());
            Ok((m, a.to_u64_rows().expect("bounded by code length")))
        })
        .collect::<Result<_>>()?;
    if let Some((m, _)) = seeds.first() {
        if seeds.iter().any(|(k, _)| k != m) {
            return Err(Error::DimensionMismatch("prev codes differ in length".into()));
        }
    }
    let extender = |(m, a): &(usize, Vec<u64>)| {
        let m = *m;
        (0..1u64 << m).map(|y| (m, weight2_rows(a, m, y))).collect::<Vec<_>>()
    };
    let canonize = |(m, rows): &(usize, Vec<u64>)| {
        let code = LinearCode::from_rows(2 * m + 2, rows.clone())?;
        let witness = crate::codes::InfoSetCertificate {
            columns: (1..=m + 1).collect(),
        };
        if !code.verify_certificate(&witness) {
            return Err(Error::PreconditionFailed(
                "weight-2 construction lost its information sets".into(),
            ));
        }
        Canonical::of_code(&code)
    };
    generate(&seeds, extender, |_| true, canonize, opts)
}

/// CIS and non-CIS counts over a store, with the dual distances of the
/// non-CIS codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyReport {
    pub total: usize,
    pub cis: usize,
    pub not_cis: usize,
    pub not_cis_by_dual_d: BTreeMap<usize, usize>,
}

impl SurveyReport {
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("class\tcount\n");
        let _ = writeln!(s, "total\t{}", self.total);
        let _ = writeln!(s, "cis\t{}", self.cis);
        let _ = writeln!(s, "not_cis\t{}", self.not_cis);
        for (d, c) in &self.not_cis_by_dual_d {
            let _ = writeln!(s, "not_cis_dual_d={d}\t{c}");
        }
        s
    }
}

/// Runs the CIS test on every code in `store`.
pub fn optimal_cis_survey(store: &CanonStore) -> Result<SurveyReport> {
    let records = store.records();
    let results: Vec<(bool, usize)> = records
        .par_iter()
        .map(|r| {
            let c = r.code()?;
            Ok((c.is_cis()?, c.dual_distance()?.unwrap_or(0)))
        })
        .collect::<Result<_>>()?;
    let mut report = SurveyReport {
        total: results.len(),
        cis: 0,
        not_cis: 0,
        not_cis_by_dual_d: BTreeMap::new(),
    };
    for (cis, dd) in results {
        if cis {
            report.cis += 1;
        } else {
            report.not_cis += 1;
            *report.not_cis_by_dual_d.entry(dd).or_insert(0) += 1;
        }
    }
    Ok(report)
}

/// Optional columns of [`classification_report`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    pub dual_column: bool,
    pub parity: bool,
}

/// One row of the report; `d == None` is the total row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportRow {
    pub d: Option<usize>,
    pub total: usize,
    pub self_dual: usize,
    pub only_fsd: usize,
    pub neither: usize,
    pub dual_d_ne_1: usize,
    pub only_even_fsd: usize,
    pub odd_fsd: usize,
}

impl ReportRow {
    fn add(&mut self, r: &ClassRecord) {
        let t = &r.tags;
        self.total += 1;
        if t.self_dual() {
            self.self_dual += 1;
        } else if t.formally_self_dual() {
            self.only_fsd += 1;
            if t.even() {
                self.only_even_fsd += 1;
            }
        } else {
            self.neither += 1;
        }
        if t.formally_self_dual() && !t.even() {
            self.odd_fsd += 1;
        }
        if t.dual_d != 1 {
            self.dual_d_ne_1 += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub options_dual: bool,
    pub options_parity: bool,
    /// Rows by increasing `d`, then the total row; empty for an empty store.
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn row(&self, d: usize) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.d == Some(d))
    }

    pub fn totals(&self) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.d.is_none())
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("d\ttotal\tsd\tonly_fsd\tneither");
        if self.options_dual {
            s.push_str("\tdual_d_ne_1");
        }
        if self.options_parity {
            s.push_str("\tonly_even_fsd\todd_fsd");
        }
        s.push('\n');
        for r in &self.rows {
            match r.d {
                Some(d) => {
                    let _ = write!(s, "{d}");
                }
                None => s.push_str("total"),
            }
            let _ = write!(s, "\t{}\t{}\t{}\t{}", r.total, r.self_dual, r.only_fsd, r.neither);
            if self.options_dual {
                let _ = write!(s, "\t{}", r.dual_d_ne_1);
            }
            if self.options_parity {
                let _ = write!(s, "\t{}\t{}", r.only_even_fsd, r.odd_fsd);
            }
            s.push('\n');
        }
        s
    }
}

/// Counts by minimum weight from the stored tags.
pub fn classification_report(store: &CanonStore, opts: ReportOptions) -> Report {
    let mut by_d: BTreeMap<usize, ReportRow> = BTreeMap::new();
    let mut total = ReportRow::default();
    for r in store.iter() {
        by_d.entry(r.tags.d)
            .or_insert_with(|| ReportRow {
                d: Some(r.tags.d),
                ..Default::default()
            })
            .add(&r);
        total.add(&r);
    }
    let mut rows: Vec<ReportRow> = by_d.into_values().collect();
    if !rows.is_empty() {
        rows.push(total);
    }
    Report {
        options_dual: opts.dual_column,
        options_parity: opts.parity,
        rows,
    }
}
