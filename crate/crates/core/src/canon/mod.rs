//! Colored bipartite graphs, the code and matrix encodings, and canonical
//! keys.
//!
//! A code becomes a graph whose black vertices are a generating set of
//! low-weight codewords and whose red vertices are the coordinates; an
//! invertible matrix becomes the graph whose biadjacency matrix is the
//! matrix itself. In both cases relabeling black (resp. red) vertices is a
//! permutation of words or rows (resp. coordinates or columns), so a
//! canonical labeling of the graph yields a key that is constant on
//! equivalence classes.

mod search;

use std::fmt;

use crate::codes::{rref_rows, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{low_mask, rank_u64, Gf2Matrix};

/// Red vertex count is limited by the `u64` adjacency rows.
pub const MAX_RED: usize = 64;

const KEY_TAG: u8 = 0xCB;

/// Bipartite graph with black vertices `0..n_black` and red vertices
/// `0..n_red`; bit `j` of `adj[i]` is the edge (black `i`, red `j`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoredBipartiteGraph {
    n_red: usize,
    adj: Vec<u64>,
}

impl ColoredBipartiteGraph {
    pub fn new(n_red: usize, adj: Vec<u64>) -> Result<Self> {
        if n_red == 0 || n_red > MAX_RED {
            return Err(Error::DimensionMismatch(format!(
                "red partite set must have 1..={MAX_RED} vertices, got {n_red}"
            )));
        }
        if adj.is_empty() {
            return Err(Error::DimensionMismatch("black partite set is empty".into()));
        }
        if adj.iter().any(|&r| r & !low_mask(n_red) != 0) {
            return Err(Error::DimensionMismatch("edge to a missing red vertex".into()));
        }
        Ok(ColoredBipartiteGraph { n_red, adj })
    }

    pub fn n_black(&self) -> usize {
        self.adj.len()
    }

    pub fn n_red(&self) -> usize {
        self.n_red
    }

    pub fn adj(&self) -> &[u64] {
        &self.adj
    }

    pub fn has_edge(&self, black: usize, red: usize) -> bool {
        self.adj[black] >> red & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn black_degrees(&self) -> Vec<usize> {
        self.adj.iter().map(|r| r.count_ones() as usize).collect()
    }

    /// Black `i` moves to `black_perm[i]`, red `j` to `red_perm[j]`.
    pub fn relabel(&self, black_perm: &[usize], red_perm: &[usize]) -> Self {
        let mut adj = vec![0u64; self.adj.len()];
        for (i, &row) in self.adj.iter().enumerate() {
            let mut out = 0u64;
            for (j, &to) in red_perm.iter().enumerate() {
                out |= (row >> j & 1) << to;
            }
            adj[black_perm[i]] = out;
        }
        ColoredBipartiteGraph {
            n_red: self.n_red,
            adj,
        }
    }
}

/// Byte string that is equal exactly on isomorphic graphs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Box<[u8]>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        hex::decode(s)
            .map(|b| CanonicalKey(b.into_boxed_slice()))
            .map_err(|e| Error::parse(1, format!("bad key hex: {e}")))
    }

    fn from_certificate(n_black: usize, n_red: usize, cert: &[u64]) -> Self {
        let row_bytes = n_red.div_ceil(8);
        let mut bytes = Vec::with_capacity(9 + row_bytes * cert.len());
        bytes.push(KEY_TAG);
        bytes.extend_from_slice(&(n_black as u32).to_be_bytes());
        bytes.extend_from_slice(&(n_red as u32).to_be_bytes());
        for &row in cert {
            bytes.extend_from_slice(&row.to_be_bytes()[8 - row_bytes..]);
        }
        CanonicalKey(bytes.into_boxed_slice())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

/// Canonical labeling of a graph.
#[derive(Clone, Debug)]
pub struct Labeling {
    /// `black_order[p]` is the black vertex at canonical position `p`.
    pub black_order: Vec<usize>,
    /// `red_order[p]` is the red vertex at canonical position `p`.
    pub red_order: Vec<usize>,
    /// Adjacency rows of the canonically labeled graph.
    pub canonical_adj: Vec<u64>,
    pub key: CanonicalKey,
}

pub fn canonical_labeling(g: &ColoredBipartiteGraph) -> Labeling {
    let nb = g.n_black();
    let lab = search::canonical_labeling(g);
    let key = CanonicalKey::from_certificate(nb, g.n_red(), &lab.cert);
    Labeling {
        black_order: lab.order[..nb].iter().map(|&v| v as usize).collect(),
        red_order: lab.order[nb..].iter().map(|&v| v as usize - nb).collect(),
        canonical_adj: lab.cert,
        key,
    }
}

pub fn canonical_key(g: &ColoredBipartiteGraph) -> CanonicalKey {
    canonical_labeling(g).key
}

/// Low-weight generating set of a code: all minimum-weight words, then
/// whole weight layers in increasing order until the set spans the code.
/// Sorted by weight, then lexicographically as 0/1 strings.
pub fn generating_set(code: &LinearCode) -> Result<Vec<u64>> {
    let n = code.n();
    let mut layers: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for w in code.codewords()? {
        if w != 0 {
            layers[w.count_ones() as usize].push(w);
        }
    }
    let mut set = Vec::new();
    for layer in layers.iter_mut().skip(1) {
        if layer.is_empty() {
            continue;
        }
        // as strings, coordinate 0 is the most significant character
        layer.sort_unstable_by_key(|&w| w.reverse_bits());
        set.extend_from_slice(layer);
        if rank_u64(&set) == code.k() {
            break;
        }
    }
    Ok(set)
}

pub fn code_to_graph(code: &LinearCode) -> Result<ColoredBipartiteGraph> {
    ColoredBipartiteGraph::new(code.n(), generating_set(code)?)
}

/// Rows are black vertices, columns red; the matrix must be invertible.
pub fn matrix_to_graph(a: &Gf2Matrix) -> Result<ColoredBipartiteGraph> {
    if !a.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let rows = a.to_u64_rows().ok_or(Error::DimensionTooLarge {
        dim: a.ncols(),
        max: MAX_RED,
    })?;
    ColoredBipartiteGraph::new(a.ncols(), rows)
}

pub fn code_key(code: &LinearCode) -> Result<CanonicalKey> {
    Ok(canonical_key(&code_to_graph(code)?))
}

pub fn matrix_key(a: &Gf2Matrix) -> Result<CanonicalKey> {
    Ok(canonical_key(&matrix_to_graph(a)?))
}

/// Key plus the class representative obtained by ordering coordinates
/// canonically and reducing the generator to RREF.
pub fn canonical_code(code: &LinearCode) -> Result<(CanonicalKey, LinearCode)> {
    let lab = canonical_labeling(&code_to_graph(code)?);
    let permuted = code.permute_columns(&lab.red_order);
    let (rows, _) = rref_rows(code.n(), permuted.rows());
    Ok((lab.key, LinearCode::from_rows(code.n(), rows)?))
}

/// Key plus the canonically relabeled matrix.
pub fn canonical_matrix(a: &Gf2Matrix) -> Result<(CanonicalKey, Gf2Matrix)> {
    let lab = canonical_labeling(&matrix_to_graph(a)?);
    Ok((
        lab.key,
        Gf2Matrix::from_u64_rows(a.ncols(), &lab.canonical_adj),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::{BTreeMap, BTreeSet};

    fn shuffle(rng: &mut StdRng, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, rng.gen_range(0..=i));
        }
        p
    }

    fn remark_a() -> Gf2Matrix {
        Gf2Matrix::from_strs(&["111", "011", "001"]).unwrap()
    }

    fn remark_b() -> Gf2Matrix {
        Gf2Matrix::from_strs(&["110", "011", "001"]).unwrap()
    }

    fn systematic(a: &Gf2Matrix) -> LinearCode {
        LinearCode::new(&Gf2Matrix::identity(a.nrows()).hconcat(a).unwrap()).unwrap()
    }

    fn gl(n: usize) -> Vec<Gf2Matrix> {
        let mut out = Vec::new();
        for m in 0u64..(1 << (n * n)) {
            let rows: Vec<u64> = (0..n).map(|i| (m >> (n * i)) & low_mask(n)).collect();
            if rank_u64(&rows) == n {
                out.push(Gf2Matrix::from_u64_rows(n, &rows));
            }
        }
        out
    }

    /// Orbit label under all row and column permutations: the smallest
    /// image as a row-major bit string.
    fn brute_orbit_label(a: &Gf2Matrix, perms: &[Vec<usize>]) -> u64 {
        let n = a.nrows();
        let rows = a.to_u64_rows().unwrap();
        let mut best = u64::MAX;
        for cp in perms {
            let cols: Vec<u64> = rows
                .iter()
                .map(|&r| (0..n).fold(0u64, |acc, j| acc | ((r >> cp[j] & 1) << j)))
                .collect();
            for rp in perms {
                let v = rp.iter().fold(0u64, |acc, &i| (acc << n) | cols[i]);
                best = best.min(v);
            }
        }
        best
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        use itertools::Itertools;
        (0..n).permutations(n).collect()
    }

    #[test]
    fn code_graph_examples() {
        let g = code_to_graph(&LinearCode::from_rows(2, vec![0b11]).unwrap()).unwrap();
        assert_eq!((g.n_black(), g.n_red()), (1, 2));
        assert!(g.has_edge(0, 0) && g.has_edge(0, 1));

        let c = LinearCode::from_rows(4, vec![0b0011, 0b1100]).unwrap();
        let g = code_to_graph(&c).unwrap();
        assert_eq!((g.n_black(), g.n_red(), g.edge_count()), (2, 4, 4));
    }

    #[test]
    fn code_graph_of_remark_code_matches_layer_oracle() {
        let c = systematic(&remark_a());
        let mut words: Vec<u64> = Vec::new();
        for m in 1u64..8 {
            let w = (0..3)
                .filter(|i| m >> i & 1 == 1)
                .fold(0, |acc, i| acc ^ c.rows()[i]);
            words.push(w);
        }
        let mut expected = 0;
        let mut chosen: Vec<u64> = Vec::new();
        for w in 1..=6 {
            let layer: Vec<u64> = words.iter().copied().filter(|x| x.count_ones() == w).collect();
            if layer.is_empty() {
                continue;
            }
            chosen.extend(&layer);
            expected += layer.len();
            if rank_u64(&chosen) == 3 {
                break;
            }
        }
        let g = code_to_graph(&c).unwrap();
        assert_eq!(g.n_black(), expected);
        assert_eq!(rank_u64(g.adj()), 3);
        let weights: Vec<u32> = g.adj().iter().map(|r| r.count_ones()).collect();
        assert!(weights.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn matrix_graph_examples() {
        let g = matrix_to_graph(&Gf2Matrix::identity(3)).unwrap();
        assert_eq!(g.black_degrees(), vec![1, 1, 1]);
        assert_eq!(g.edge_count(), 3);
        let mut da = matrix_to_graph(&remark_a()).unwrap().black_degrees();
        let mut db = matrix_to_graph(&remark_b()).unwrap().black_degrees();
        da.sort_unstable();
        db.sort_unstable();
        assert_eq!(da, vec![1, 2, 3]);
        assert_eq!(db, vec![1, 2, 2]);
        assert!(matches!(
            matrix_to_graph(&Gf2Matrix::from_strs(&["11", "11"]).unwrap()),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn remark_pair() {
        assert_ne!(matrix_key(&remark_a()).unwrap(), matrix_key(&remark_b()).unwrap());
        assert_eq!(
            code_key(&systematic(&remark_a())).unwrap(),
            code_key(&systematic(&remark_b())).unwrap()
        );
    }

    #[test]
    fn keys_survive_relabeling() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..20 {
            let nb = rng.gen_range(1..12);
            let nr = rng.gen_range(1..14);
            let adj: Vec<u64> = (0..nb).map(|_| rng.gen::<u64>() & low_mask(nr)).collect();
            let g = ColoredBipartiteGraph::new(nr, adj).unwrap();
            let key = canonical_key(&g);
            for _ in 0..100 {
                let h = g.relabel(&shuffle(&mut rng, nb), &shuffle(&mut rng, nr));
                assert_eq!(canonical_key(&h), key);
            }
        }
    }

    #[test]
    fn canonical_adjacency_is_a_relabeling() {
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..200 {
            let nb = rng.gen_range(1..10);
            let nr = rng.gen_range(1..10);
            let adj: Vec<u64> = (0..nb).map(|_| rng.gen::<u64>() & low_mask(nr)).collect();
            let g = ColoredBipartiteGraph::new(nr, adj).unwrap();
            let lab = canonical_labeling(&g);
            let mut black_to = vec![0; nb];
            for (p, &b) in lab.black_order.iter().enumerate() {
                black_to[b] = p;
            }
            let mut red_to = vec![0; nr];
            for (p, &r) in lab.red_order.iter().enumerate() {
                red_to[r] = p;
            }
            assert_eq!(g.relabel(&black_to, &red_to).adj(), lab.canonical_adj.as_slice());
        }
    }

    #[test]
    fn shapes_and_colors_never_collide() {
        // same edge set with colors swapped: 1 black x 2 red vs 2 black x 1 red
        let a = ColoredBipartiteGraph::new(2, vec![0b11]).unwrap();
        let b = ColoredBipartiteGraph::new(1, vec![1, 1]).unwrap();
        assert_ne!(canonical_key(&a), canonical_key(&b));
        // square graphs: a matrix vs its transpose are generally different
        let m = Gf2Matrix::from_strs(&["110", "010", "011"]).unwrap();
        let t = m.transpose();
        assert_ne!(matrix_key(&m).unwrap(), matrix_key(&t).unwrap());
    }

    #[test]
    fn isolated_red_vertices_are_handled() {
        let c = LinearCode::from_rows(10, vec![0b1111]).unwrap();
        let d = LinearCode::from_rows(10, vec![0b1111 << 6]).unwrap();
        assert_eq!(code_key(&c).unwrap(), code_key(&d).unwrap());
        let e = LinearCode::from_rows(10, vec![0b11111]).unwrap();
        assert_ne!(code_key(&c).unwrap(), code_key(&e).unwrap());
    }

    #[test]
    fn gl2_and_gl3_class_counts_match_bruteforce_orbits() {
        for (n, expected) in [(2, 2), (3, 7)] {
            let perms = all_perms(n);
            let mut pairs = BTreeSet::new();
            let mut keys = BTreeSet::new();
            let mut orbits = BTreeSet::new();
            for a in gl(n) {
                let key = matrix_key(&a).unwrap();
                let orbit = brute_orbit_label(&a, &perms);
                keys.insert(key.clone());
                orbits.insert(orbit);
                pairs.insert((key, orbit));
            }
            assert_eq!(keys.len(), expected);
            assert_eq!(orbits.len(), expected);
            assert_eq!(pairs.len(), expected);
        }
    }

    #[test]
    fn code_keys_distinguish_the_two_length_4_cis_classes() {
        let ii = systematic(&Gf2Matrix::identity(2));
        let other = systematic(&Gf2Matrix::from_strs(&["11", "01"]).unwrap());
        assert_ne!(code_key(&ii).unwrap(), code_key(&other).unwrap());
        // exhaustive column permutations confirm they are inequivalent
        let found = all_perms(4)
            .iter()
            .any(|p| ii.permute_columns(p).same_code(&other));
        assert!(!found);
    }

    #[test]
    fn canonical_code_rekeys_to_itself() {
        let mut rng = StdRng::seed_from_u64(3);
        let mut by_key: BTreeMap<CanonicalKey, LinearCode> = BTreeMap::new();
        for _ in 0..300 {
            let n = rng.gen_range(2..=10);
            let k = rng.gen_range(1..=n);
            let rows: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & low_mask(n)).collect();
            let Ok(c) = LinearCode::from_rows(n, rows) else { continue };
            let (key, rep) = canonical_code(&c).unwrap();
            assert_eq!(code_key(&rep).unwrap(), key);
            let shuffled = c.permute_columns(&shuffle(&mut rng, n));
            let (key2, rep2) = canonical_code(&shuffled).unwrap();
            assert_eq!(key2, key);
            assert_eq!(rep2, rep);
            by_key.insert(key, rep);
        }
        assert!(by_key.len() > 10);
    }

    #[test]
    fn generating_set_is_permutation_equivariant() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..100 {
            let n = rng.gen_range(4..=12);
            let k = rng.gen_range(1..=n / 2);
            let rows: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & low_mask(n)).collect();
            let Ok(c) = LinearCode::from_rows(n, rows) else { continue };
            let perm = shuffle(&mut rng, n);
            let s = generating_set(&c).unwrap();
            let t = generating_set(&c.permute_columns(&perm)).unwrap();
            let permute = |w: u64| (0..n).fold(0u64, |acc, j| acc | ((w >> perm[j] & 1) << j));
            let mut mapped: Vec<u64> = s.iter().map(|&w| permute(w)).collect();
            let mut t_sorted = t.clone();
            mapped.sort_unstable();
            t_sorted.sort_unstable();
            assert_eq!(mapped, t_sorted);
        }
    }

    #[test]
    fn refinement_trace_ignores_vertex_order() {
        // keys of this [14,7,4] code once depended on the input labeling
        let g = Gf2Matrix::from_strs(&[
            "10010000010101",
            "01010000011010",
            "00110000001111",
            "00001001010111",
            "00000101011001",
            "00000011001110",
            "00000000111100",
        ])
        .unwrap();
        let c = LinearCode::new(&g).unwrap();
        let key = code_key(&c).unwrap();
        let perm = [1, 6, 2, 8, 11, 7, 0, 9, 13, 12, 3, 5, 10, 4];
        assert_eq!(code_key(&c.permute_columns(&perm)).unwrap(), key);
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..300 {
            assert_eq!(code_key(&c.permute_columns(&shuffle(&mut rng, 14))).unwrap(), key);
        }
    }
}
