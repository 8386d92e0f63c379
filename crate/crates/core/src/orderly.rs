//! Orderly generation: a store of canonical keys with canonical payloads,
//! and the extend / filter / canonicalize / insert loop every pipeline
//! shares.
//!
//! Each record holds the canonical representative of its class (the matrix
//! or RREF generator under the canonical labeling), so the payload is a
//! function of the key alone and stores built from any shard split are
//! byte-identical after merging.
//!
//! On disk a store is one record per line, sorted by key:
//!
//! ```text
//! key-hex \t n \t k \t d \t d_dual \t flags \t row,row,...
//! ```
//!
//! where `flags` is a decimal bit set (`FLAG_*`). Matrix records carry
//! `n = ncols`, `k = nrows` and `d = d_dual = 0`. An undefined dual
//! distance (`k == n`) is written as `0`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::canon::{canonical_code, canonical_matrix, CanonicalKey};
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2Matrix};

pub const FLAG_SD: u8 = 1;
pub const FLAG_FSD: u8 = 1 << 1;
pub const FLAG_CIS: u8 = 1 << 2;
pub const FLAG_EVEN: u8 = 1 << 3;
/// Payload is an element of GL(n, F2) rather than a generator matrix.
pub const FLAG_MATRIX: u8 = 1 << 4;

/// Cached parameters of a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tags {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub dual_d: usize,
    pub flags: u8,
}

impl Tags {
    pub fn has(&self, flag: u8) -> bool {
        self.flags & flag != 0
    }

    pub fn is_matrix(&self) -> bool {
        self.has(FLAG_MATRIX)
    }

    pub fn self_dual(&self) -> bool {
        self.has(FLAG_SD)
    }

    pub fn formally_self_dual(&self) -> bool {
        self.has(FLAG_FSD)
    }

    pub fn cis(&self) -> bool {
        self.has(FLAG_CIS)
    }

    pub fn even(&self) -> bool {
        self.has(FLAG_EVEN)
    }
}

/// Tags of a code, computed from scratch.
pub fn code_tags(code: &LinearCode) -> Result<Tags> {
    let d = code.minimum_weight()?;
    let dual_d = code.dual_distance()?.unwrap_or(0);
    let mut flags = 0;
    if code.is_even() {
        flags |= FLAG_EVEN;
    }
    if code.n() == 2 * code.k() {
        if code.is_self_dual() {
            flags |= FLAG_SD;
        }
        if code.is_formally_self_dual()? {
            flags |= FLAG_FSD;
        }
        if code.is_cis()? {
            flags |= FLAG_CIS;
        }
    }
    Ok(Tags {
        n: code.n(),
        k: code.k(),
        d,
        dual_d,
        flags,
    })
}

fn matrix_tags(nrows: usize, ncols: usize) -> Tags {
    Tags {
        n: ncols,
        k: nrows,
        d: 0,
        dual_d: 0,
        flags: FLAG_MATRIX,
    }
}

/// Canonical form of one candidate, before tags are computed. Rows are
/// words with coordinate `j` at bit `j`.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub key: CanonicalKey,
    pub rows: Vec<u64>,
    pub ncols: usize,
    pub is_matrix: bool,
}

impl Canonical {
    pub fn of_matrix(a: &Gf2Matrix) -> Result<Self> {
        let (key, object) = canonical_matrix(a)?;
        Ok(Canonical {
            key,
            rows: object.to_u64_rows().expect("matrix graphs have at most 64 columns"),
            ncols: object.ncols(),
            is_matrix: true,
        })
    }

    pub fn of_code(c: &LinearCode) -> Result<Self> {
        let (key, rep) = canonical_code(c)?;
        Ok(Canonical {
            key,
            rows: rep.rows().to_vec(),
            ncols: rep.n(),
            is_matrix: false,
        })
    }

    pub fn object(&self) -> Gf2Matrix {
        Gf2Matrix::from_u64_rows(self.ncols, &self.rows)
    }

    fn tags(&self) -> Result<Tags> {
        if self.is_matrix {
            Ok(matrix_tags(self.rows.len(), self.ncols))
        } else {
            code_tags(&LinearCode::from_rows(self.ncols, self.rows.clone())?)
        }
    }

    pub fn into_record(self) -> Result<ClassRecord> {
        let tags = self.tags()?;
        Ok(ClassRecord {
            object: self.object(),
            key: self.key,
            tags,
        })
    }

    fn into_entry(self) -> Result<(CanonicalKey, Entry)> {
        let tags = self.tags()?;
        Ok((self.key, Entry::new(self.rows, &tags)))
    }
}

/// Compact in-memory form of a record.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Entry {
    rows: Box<[u64]>,
    /// n, k, d, dual_d, flags
    tags: [u8; 5],
}

impl Entry {
    fn new(rows: Vec<u64>, t: &Tags) -> Self {
        let b = |v: usize| u8::try_from(v).expect("parameters are at most 64");
        Entry {
            rows: rows.into_boxed_slice(),
            tags: [b(t.n), b(t.k), b(t.d), b(t.dual_d), t.flags],
        }
    }

    fn from_record(r: &ClassRecord) -> Self {
        Entry::new(r.object.to_u64_rows().expect("payloads are at most 64 columns wide"), &r.tags)
    }

    fn tags(&self) -> Tags {
        let [n, k, d, dual_d, flags] = self.tags;
        Tags {
            n: n as usize,
            k: k as usize,
            d: d as usize,
            dual_d: dual_d as usize,
            flags,
        }
    }

    fn record(&self, key: &CanonicalKey) -> ClassRecord {
        let tags = self.tags();
        ClassRecord {
            key: key.clone(),
            object: Gf2Matrix::from_u64_rows(tags.n, &self.rows),
            tags,
        }
    }
}

/// One equivalence class: key, canonical representative and tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub key: CanonicalKey,
    pub object: Gf2Matrix,
    pub tags: Tags,
}

impl ClassRecord {
    pub fn from_matrix(a: &Gf2Matrix) -> Result<Self> {
        Canonical::of_matrix(a)?.into_record()
    }

    pub fn from_code(c: &LinearCode) -> Result<Self> {
        Canonical::of_code(c)?.into_record()
    }

    pub fn is_matrix(&self) -> bool {
        self.tags.is_matrix()
    }

    pub fn code(&self) -> Result<LinearCode> {
        if self.is_matrix() {
            return Err(Error::PreconditionFailed(
                "record holds a matrix, not a code".into(),
            ));
        }
        LinearCode::new(&self.object)
    }

    /// Recomputes key and tags from the payload.
    pub fn recompute(&self) -> Result<ClassRecord> {
        if self.is_matrix() {
            ClassRecord::from_matrix(&self.object)
        } else {
            ClassRecord::from_code(&self.code()?)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fresh = self.recompute()?;
        if fresh.key != self.key || fresh.tags != self.tags {
            return Err(Error::KeyPayloadMismatch {
                key: self.key.to_hex(),
            });
        }
        Ok(())
    }

    pub fn to_line(&self) -> String {
        let t = &self.tags;
        let mut s = String::new();
        let _ = write!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t",
            self.key.to_hex(),
            t.n,
            t.k,
            t.d,
            t.dual_d,
            t.flags
        );
        for (i, r) in self.object.rows().iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&r.to_string());
        }
        s
    }

    pub fn parse_line(line: &str, lineno: usize) -> Result<Self> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 7 {
            return Err(Error::parse(
                lineno,
                format!("expected 7 tab-separated fields, found {}", fields.len()),
            ));
        }
        let num = |i: usize, what: &str| -> Result<usize> {
            fields[i]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad {what} {:?}", fields[i])))
        };
        let key = CanonicalKey::from_hex(fields[0]).map_err(|_| Error::parse(lineno, "bad key"))?;
        let tags = Tags {
            n: num(1, "n")?,
            k: num(2, "k")?,
            d: num(3, "d")?,
            dual_d: num(4, "dual distance")?,
            flags: fields[5]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad flags {:?}", fields[5])))?,
        };
        let rows = fields[6]
            .split(',')
            .map(|r| {
                r.parse::<BitVec>()
                    .map_err(|_| Error::parse(lineno, format!("bad row {r:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let object = Gf2Matrix::from_rows(rows).map_err(|e| Error::parse(lineno, e.to_string()))?;
        if object.ncols() != tags.n || object.nrows() != tags.k {
            return Err(Error::parse(lineno, "payload shape disagrees with n and k"));
        }
        Ok(ClassRecord { key, object, tags })
    }
}

/// Set of classes keyed by canonical key, iterated in ascending key order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CanonStore {
    entries: BTreeMap<CanonicalKey, Entry>,
}

/// Total and per-`d` record counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub per_d: BTreeMap<usize, usize>,
}

impl Summary {
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("d\tcount\n");
        for (d, c) in &self.per_d {
            let _ = writeln!(s, "{d}\t{c}");
        }
        let _ = writeln!(s, "total\t{}", self.total);
        s
    }
}

impl CanonStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<ClassRecord> {
        self.entries.get(key).map(|e| e.record(key))
    }

    /// Records in key order, materialized one at a time.
    pub fn iter(&self) -> impl Iterator<Item = ClassRecord> + '_ {
        self.entries.iter().map(|(k, e)| e.record(k))
    }

    pub fn tags(&self) -> impl Iterator<Item = Tags> + '_ {
        self.entries.values().map(Entry::tags)
    }

    pub fn records(&self) -> Vec<ClassRecord> {
        self.iter().collect()
    }

    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.entries.keys()
    }

    /// Inserts when `key` is absent. The payload is re-canonicalized first
    /// and must reproduce `key`.
    pub fn insert_if_new(&mut self, key: CanonicalKey, object: &Gf2Matrix, is_matrix: bool) -> Result<bool> {
        if self.entries.contains_key(&key) {
            return Ok(false);
        }
        let canon = if is_matrix {
            Canonical::of_matrix(object)?
        } else {
            Canonical::of_code(&LinearCode::new(object)?)?
        };
        if canon.key != key {
            return Err(Error::KeyPayloadMismatch { key: key.to_hex() });
        }
        let (key, entry) = canon.into_entry()?;
        self.entries.insert(key, entry);
        Ok(true)
    }

    /// Inserts a record whose key and tags are trusted.
    pub(crate) fn insert_record(&mut self, record: ClassRecord) -> bool {
        if self.entries.contains_key(&record.key) {
            return false;
        }
        let entry = Entry::from_record(&record);
        self.entries.insert(record.key, entry);
        true
    }

    fn insert_entry(&mut self, key: CanonicalKey, entry: Entry) {
        self.entries.entry(key).or_insert(entry);
    }

    /// Union of `parts`; a key present in several parts keeps the payload
    /// of the earliest one. Differing tags under one key are an error.
    pub fn merge(parts: &[CanonStore]) -> Result<CanonStore> {
        let mut out = CanonStore::new();
        for part in parts {
            for (key, e) in &part.entries {
                match out.entries.get(key) {
                    Some(existing) if existing.tags != e.tags => {
                        return Err(Error::ConflictingPayload { key: key.to_hex() });
                    }
                    Some(_) => {}
                    None => {
                        out.entries.insert(key.clone(), e.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Re-keys and re-tags every record in parallel.
    pub fn validate(&self) -> Result<()> {
        self.entries
            .par_iter()
            .try_for_each(|(k, e)| e.record(k).validate())
    }

    pub fn summary(&self) -> Summary {
        let mut per_d = BTreeMap::new();
        for t in self.tags() {
            *per_d.entry(t.d).or_insert(0) += 1;
        }
        Summary {
            total: self.len(),
            per_d,
        }
    }

    /// Records matching `pred`, as a new store.
    pub fn filter(&self, pred: impl Fn(&ClassRecord) -> bool) -> CanonStore {
        CanonStore {
            entries: self
                .entries
                .iter()
                .filter(|(k, e)| pred(&e.record(k)))
                .map(|(k, e)| (k.clone(), e.clone()))
                .collect(),
        }
    }

    pub fn write_to(&self, w: impl Write) -> Result<()> {
        let mut w = BufWriter::new(w);
        for r in self.iter() {
            w.write_all(r.to_line().as_bytes())?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("store text is ASCII")
    }

    pub fn read_from(r: impl Read) -> Result<CanonStore> {
        let mut store = CanonStore::new();
        for (i, line) in BufReader::new(r).lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let rec = ClassRecord::parse_line(&line, i + 1)?;
            let entry = Entry::from_record(&rec);
            if store.entries.insert(rec.key, entry).is_some() {
                return Err(Error::parse(i + 1, "duplicate key"));
            }
        }
        Ok(store)
    }

    pub fn from_text(text: &str) -> Result<CanonStore> {
        CanonStore::read_from(text.as_bytes())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_to(fs::File::create(path)?)
    }

    /// Writes `<path>.summary` beside the store.
    pub fn save_summary(&self, path: &Path) -> Result<()> {
        let mut p = path.as_os_str().to_owned();
        p.push(".summary");
        fs::write(p, self.summary().to_tsv())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CanonStore> {
        CanonStore::read_from(fs::File::open(path)?)
    }
}

/// Sharding controls for [`generate`].
#[derive(Clone, Debug)]
pub struct GenerateOptions {
    pub shards: usize,
    pub shard_index: usize,
    /// Report progress on stderr.
    pub progress: bool,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions {
            shards: 1,
            shard_index: 0,
            progress: false,
        }
    }
}

impl GenerateOptions {
    pub fn sharded(shards: usize, shard_index: usize) -> Self {
        GenerateOptions {
            shards,
            shard_index,
            progress: false,
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.shards == 0 || self.shard_index >= self.shards {
            return Err(Error::PreconditionFailed(format!(
                "shard index {} out of range for {} shards",
                self.shard_index, self.shards
            )));
        }
        Ok(())
    }
}

const SEED_BATCH: usize = 256;

/// One generation step. Candidates are numbered in seed order, then in the
/// extender's order; a candidate belongs to this shard when its number is
/// `shard_index` modulo `shards`. Accepted candidates are canonicalized and
/// inserted when their key is new.
pub fn generate<S, C, I, E, A, K>(
    seeds: &[S],
    extender: E,
    acceptor: A,
    canonize: K,
    opts: &GenerateOptions,
) -> Result<CanonStore>
where
    S: Sync,
    C: Send + Sync,
    I: IntoIterator<Item = C>,
    E: Fn(&S) -> I + Sync,
    A: Fn(&C) -> bool + Sync,
    K: Fn(&C) -> Result<Canonical> + Sync,
{
    opts.check()?;
    let mut store = CanonStore::new();
    let mut next_index = 0usize;
    let batches = seeds.len().div_ceil(SEED_BATCH);
    let report_every = (batches / 100).max(1);
    for (bi, batch) in seeds.chunks(SEED_BATCH).enumerate() {
        let candidates: Vec<Vec<C>> = batch
            .par_iter()
            .map(|s| extender(s).into_iter().collect())
            .collect();
        let mut offsets = Vec::with_capacity(candidates.len());
        for list in &candidates {
            offsets.push(next_index);
            next_index += list.len();
        }
        let locals: Vec<HashMap<CanonicalKey, Canonical>> = candidates
            .par_iter()
            .zip(offsets.par_iter())
            .map(|(list, &base)| {
                let mut local = HashMap::new();
                for (j, c) in list.iter().enumerate() {
                    if (base + j) % opts.shards != opts.shard_index || !acceptor(c) {
                        continue;
                    }
                    let canon = canonize(c)?;
                    if !store.contains(&canon.key) {
                        local.entry(canon.key.clone()).or_insert(canon);
                    }
                }
                Ok(local)
            })
            .collect::<Result<_>>()?;
        let mut fresh: BTreeMap<CanonicalKey, Canonical> = BTreeMap::new();
        for local in locals {
            for (k, v) in local {
                fresh.entry(k).or_insert(v);
            }
        }
        let entries: Vec<(CanonicalKey, Entry)> = fresh
            .into_values()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(Canonical::into_entry)
            .collect::<Result<_>>()?;
        for (k, e) in entries {
            store.insert_entry(k, e);
        }
        if opts.progress && ((bi + 1) % report_every == 0 || bi + 1 == batches) {
            eprintln!(
                "generate: {} / {} seeds, {} candidates, {} classes",
                (bi * SEED_BATCH + batch.len()),
                seeds.len(),
                next_index,
                store.len()
            );
        }
    }
    Ok(store)
}

/// [`generate`] with the canonicalized seeds included in the output. Every
/// shard carries all seeds.
pub fn generate_with_seeds<C, I, E, A, K>(
    seeds: &[C],
    extender: E,
    acceptor: A,
    canonize: K,
    opts: &GenerateOptions,
) -> Result<CanonStore>
where
    C: Send + Sync,
    I: IntoIterator<Item = C>,
    E: Fn(&C) -> I + Sync,
    A: Fn(&C) -> bool + Sync,
    K: Fn(&C) -> Result<Canonical> + Sync,
{
    let mut base = CanonStore::new();
    for s in seeds {
        base.insert_record(canonize(s)?.into_record()?);
    }
    let grown = generate(seeds, extender, acceptor, &canonize, opts)?;
    CanonStore::merge(&[base, grown])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::matrix_key;

    fn m(rows: &[&str]) -> Gf2Matrix {
        Gf2Matrix::from_strs(rows).unwrap()
    }

    fn gl2() -> Vec<Gf2Matrix> {
        ["10 01", "01 10", "11 01", "10 11", "01 11", "11 10"]
            .iter()
            .map(|s| m(&s.split(' ').collect::<Vec<_>>()))
            .collect()
    }

    #[test]
    fn insert_if_new_basics() {
        let mut store = CanonStore::new();
        let a = m(&["11", "01"]);
        let key = matrix_key(&a).unwrap();
        assert!(store.insert_if_new(key.clone(), &a, true).unwrap());
        assert!(!store.insert_if_new(key.clone(), &a, true).unwrap());
        assert_eq!(store.len(), 1);

        let wrong = matrix_key(&Gf2Matrix::identity(2)).unwrap();
        let err = store.insert_if_new(wrong, &m(&["11", "10"]), true);
        assert!(matches!(err, Err(Error::KeyPayloadMismatch { .. })));
        assert_eq!(store.len(), 1);
    }

    #[test]
    fn bordered_2x2_matrices_give_two_classes() {
        // the four borderings of [1]: z = 1 + x*y
        let bordered = [m(&["10", "01"]), m(&["11", "01"]), m(&["10", "11"]), m(&["01", "11"])];
        let mut store = CanonStore::new();
        let mut accepted = 0;
        let mut sizes = Vec::new();
        for a in &bordered {
            if store.insert_if_new(matrix_key(a).unwrap(), a, true).unwrap() {
                accepted += 1;
            }
            sizes.push(store.len());
        }
        assert_eq!(accepted, 2);
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn merge_semantics() {
        let recs: Vec<ClassRecord> = gl2().iter().map(|a| ClassRecord::from_matrix(a).unwrap()).collect();
        let mut left = CanonStore::new();
        left.insert_record(recs[0].clone());
        let mut right = CanonStore::new();
        right.insert_record(recs[2].clone());
        assert_ne!(recs[0].key, recs[2].key);
        let merged = CanonStore::merge(&[left.clone(), right.clone()]).unwrap();
        assert_eq!(merged.len(), 2);
        let same = CanonStore::merge(&[left.clone(), left.clone()]).unwrap();
        assert_eq!(same, left);

        let mut bad = recs[0].clone();
        bad.tags.flags |= FLAG_CIS;
        let mut conflicting = CanonStore::new();
        conflicting.insert_record(bad);
        assert!(matches!(
            CanonStore::merge(&[left, conflicting]),
            Err(Error::ConflictingPayload { .. })
        ));
    }

    #[test]
    fn store_text_round_trip_and_validation() {
        let seeds = gl2();
        let store = generate_with_seeds(
            &seeds,
            |_| Vec::<Gf2Matrix>::new(),
            |_| true,
            Canonical::of_matrix,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(store.len(), 2);
        let text = store.to_text();
        let back = CanonStore::from_text(&text).unwrap();
        assert_eq!(back, store);
        assert_eq!(back.to_text(), text);
        back.validate().unwrap();

        let tampered = text.replacen("\t16\t", "\t20\t", 1);
        let t = CanonStore::from_text(&tampered).unwrap();
        assert!(t.validate().is_err());
        assert!(CanonStore::from_text("zz\t1\t1\t0\t0\t16\t1").is_err());
        assert!(CanonStore::from_text("cb\t1\t1\t0\t0\t16").is_err());
    }

    #[test]
    fn code_records_carry_tags() {
        let c = LinearCode::from_rows(4, vec![0b0101, 0b1010]).unwrap();
        let r = ClassRecord::from_code(&c).unwrap();
        assert_eq!((r.tags.n, r.tags.k, r.tags.d, r.tags.dual_d), (4, 2, 2, 2));
        assert!(r.tags.self_dual() && r.tags.formally_self_dual() && r.tags.cis() && r.tags.even());
        r.validate().unwrap();
        let full = LinearCode::from_rows(2, vec![1, 2]).unwrap();
        let r = ClassRecord::from_code(&full).unwrap();
        assert_eq!((r.tags.d, r.tags.dual_d), (1, 0));
        assert!(!r.tags.cis());
    }

    #[test]
    fn duplicate_heavy_extender_matches_post_deduplication() {
        // every seed extends to all of GL(2), many times over
        let seeds: Vec<Gf2Matrix> = gl2();
        let extender = |_: &Gf2Matrix| {
            let mut v = Vec::new();
            for _ in 0..5 {
                v.extend(gl2());
            }
            v
        };
        let store = generate(&seeds, extender, |_| true, Canonical::of_matrix, &Default::default()).unwrap();

        let mut reference: Vec<CanonicalKey> = seeds
            .iter()
            .flat_map(extender)
            .map(|a| matrix_key(&a).unwrap())
            .collect();
        reference.sort();
        reference.dedup();
        assert_eq!(store.keys().cloned().collect::<Vec<_>>(), reference);
    }

    #[test]
    fn shards_merge_to_the_single_run() {
        let seeds: Vec<Gf2Matrix> = gl2();
        let extender = |a: &Gf2Matrix| {
            let cols: Vec<usize> = vec![1, 0];
            vec![a.clone(), a.permute_columns(&cols), a.transpose()]
        };
        let whole = generate(&seeds, extender, |_| true, Canonical::of_matrix, &Default::default()).unwrap();
        let parts: Vec<CanonStore> = (0..4)
            .map(|i| {
                generate(&seeds, extender, |_| true, Canonical::of_matrix, &GenerateOptions::sharded(4, i))
                    .unwrap()
            })
            .collect();
        let merged = CanonStore::merge(&parts).unwrap();
        assert_eq!(merged.to_text(), whole.to_text());
        assert!(generate(&seeds, extender, |_| true, Canonical::of_matrix, &GenerateOptions::sharded(2, 2)).is_err());
    }
}
