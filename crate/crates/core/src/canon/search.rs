//! Individualization-refinement search for canonical labelings of colored
//! bipartite graphs.
//!
//! Vertices `0..nb` are black, `nb..nb + nr` are red. The partition starts
//! as `[black | red]` and every refinement splits cells in place, so black
//! vertices always occupy the first `nb` positions. A leaf is labeled by the
//! sequence of refinement trace values along its path followed by the
//! adjacency certificate under the leaf ordering; the canonical leaf is the
//! lexicographically greatest label. Subtrees are skipped when their trace
//! prefix is already smaller than the best one, and automorphisms found
//! from equal leaves prune children lying in a common orbit.

use std::cmp::Ordering;
use std::collections::VecDeque;

use super::ColoredBipartiteGraph;

#[derive(Clone)]
struct Partition {
    /// position -> vertex
    lab: Vec<u32>,
    /// vertex -> position
    pos: Vec<u32>,
    /// vertex -> start position of its cell
    cell: Vec<u32>,
    /// cell start -> cell length (valid at starts only)
    len: Vec<u32>,
    cells: usize,
}

impl Partition {
    fn new(nb: usize, nr: usize) -> Self {
        let nv = nb + nr;
        let mut len = vec![0u32; nv];
        len[0] = nb as u32;
        len[nb] = nr as u32;
        Partition {
            lab: (0..nv as u32).collect(),
            pos: (0..nv as u32).collect(),
            cell: (0..nv).map(|v| if v < nb { 0 } else { nb as u32 }).collect(),
            len,
            cells: 2,
        }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> usize {
        let mut best = usize::MAX;
        let mut best_len = u32::MAX;
        let mut i = 0;
        while i < self.lab.len() {
            let l = self.len[i];
            if l > 1 && l < best_len {
                best = i;
                best_len = l;
            }
            i += l as usize;
        }
        best
    }

    /// Splits `v` off the front of its cell; returns the singleton's start.
    fn individualize(&mut self, v: u32) -> u32 {
        let xs = self.cell[v as usize];
        let xl = self.len[xs as usize];
        let pv = self.pos[v as usize];
        let u = self.lab[xs as usize];
        self.lab[xs as usize] = v;
        self.lab[pv as usize] = u;
        self.pos[v as usize] = xs;
        self.pos[u as usize] = pv;
        self.len[xs as usize] = 1;
        self.len[xs as usize + 1] = xl - 1;
        for i in xs + 1..xs + xl {
            self.cell[self.lab[i as usize] as usize] = xs + 1;
        }
        self.cells += 1;
        xs
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h.rotate_left(23) ^ x).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (h >> 29)
}

struct Leaf {
    lab: Vec<u32>,
    trace: Vec<u64>,
    cert: Vec<u64>,
    path: Vec<u32>,
}

/// Result of a canonical labeling: `order[p]` is the vertex placed at
/// canonical position `p`, and `cert` is row `i` = adjacency of canonical
/// black `i` expressed in canonical red positions.
pub(crate) struct Labeling {
    pub(crate) order: Vec<u32>,
    pub(crate) cert: Vec<u64>,
}

struct Search<'g> {
    g: &'g ColoredBipartiteGraph,
    nb: usize,
    nv: usize,
    nbrs: Vec<Vec<u32>>,
    // refinement scratch
    count: Vec<u32>,
    touched: Vec<u32>,
    cell_mark: Vec<bool>,
    tcells: Vec<u32>,
    queue: VecDeque<u32>,
    in_queue: Vec<bool>,
    // search state
    path: Vec<u32>,
    traces: Vec<u64>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<u32>>,
}

impl<'g> Search<'g> {
    fn new(g: &'g ColoredBipartiteGraph) -> Self {
        let nb = g.n_black();
        let nr = g.n_red();
        let nv = nb + nr;
        let mut nbrs = vec![Vec::new(); nv];
        for (b, &row) in g.adj().iter().enumerate() {
            let mut rest = row;
            while rest != 0 {
                let r = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                nbrs[b].push((nb + r) as u32);
                nbrs[nb + r].push(b as u32);
            }
        }
        Search {
            g,
            nb,
            nv,
            nbrs,
            count: vec![0; nv],
            touched: Vec::new(),
            cell_mark: vec![false; nv],
            tcells: Vec::new(),
            queue: VecDeque::new(),
            in_queue: vec![false; nv],
            path: Vec::new(),
            traces: Vec::new(),
            first: None,
            best: None,
            gens: Vec::new(),
        }
    }

    /// Equitable refinement by neighbour counts. Returns the trace hash.
    fn refine(&mut self, p: &mut Partition, splitters: &[u32]) -> u64 {
        let mut h = 0x243F_6A88_85A3_08D3u64;
        for &s in splitters {
            if !self.in_queue[s as usize] {
                self.in_queue[s as usize] = true;
                self.queue.push_back(s);
            }
        }
        while let Some(ws) = self.queue.pop_front() {
            self.in_queue[ws as usize] = false;
            if p.is_discrete() {
                continue;
            }
            let wl = p.len[ws as usize];
            h = mix(h, ((ws as u64) << 32) | wl as u64);
            for i in ws..ws + wl {
                let w = p.lab[i as usize] as usize;
                for &u in &self.nbrs[w] {
                    if self.count[u as usize] == 0 {
                        self.touched.push(u);
                    }
                    self.count[u as usize] += 1;
                }
            }
            for &u in &self.touched {
                let c = p.cell[u as usize];
                if !self.cell_mark[c as usize] {
                    self.cell_mark[c as usize] = true;
                    self.tcells.push(c);
                }
            }
            self.tcells.sort_unstable();
            for ti in 0..self.tcells.len() {
                let xs = self.tcells[ti] as usize;
                self.cell_mark[xs] = false;
                let xl = p.len[xs] as usize;
                let cnt = &self.count;
                let first_count = cnt[p.lab[xs] as usize];
                let uniform = p.lab[xs..xs + xl]
                    .iter()
                    .all(|&v| cnt[v as usize] == first_count);
                if uniform {
                    h = mix(h, ((xs as u64) << 40) | ((xl as u64) << 20) | first_count as u64);
                    continue;
                }
                h = mix(h, ((xs as u64) << 40) | ((xl as u64) << 20) | 0xF_FFFF);
                p.lab[xs..xs + xl].sort_unstable_by_key(|&v| cnt[v as usize]);
                let mut frags: Vec<(usize, usize)> = Vec::new();
                let mut start = xs;
                for i in xs + 1..=xs + xl {
                    if i == xs + xl || cnt[p.lab[i] as usize] != cnt[p.lab[i - 1] as usize] {
                        frags.push((start, i - start));
                        h = mix(h, ((cnt[p.lab[start] as usize] as u64) << 32) | (i - start) as u64);
                        start = i;
                    }
                }
                for &(fs, fl) in &frags {
                    p.len[fs] = fl as u32;
                    for i in fs..fs + fl {
                        let v = p.lab[i] as usize;
                        p.cell[v] = fs as u32;
                        p.pos[v] = i as u32;
                    }
                }
                p.cells += frags.len() - 1;
                if self.in_queue[xs] {
                    for &(fs, _) in &frags[1..] {
                        self.in_queue[fs] = true;
                        self.queue.push_back(fs as u32);
                    }
                } else {
                    let largest = frags
                        .iter()
                        .enumerate()
                        .max_by(|a, b| a.1 .1.cmp(&b.1 .1).then(b.0.cmp(&a.0)))
                        .map(|(i, _)| i)
                        .unwrap();
                    for (i, &(fs, _)) in frags.iter().enumerate() {
                        if i != largest {
                            self.in_queue[fs] = true;
                            self.queue.push_back(fs as u32);
                        }
                    }
                }
            }
            for &u in &self.touched {
                self.count[u as usize] = 0;
            }
            self.touched.clear();
            self.tcells.clear();
        }
        mix(h, p.cells as u64)
    }

    fn certificate(&self, p: &Partition) -> Vec<u64> {
        let nb = self.nb;
        (0..nb)
            .map(|i| {
                let b = p.lab[i] as usize;
                let mut row = 0u64;
                let mut rest = self.g.adj()[b];
                while rest != 0 {
                    let r = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    row |= 1u64 << (p.pos[nb + r] as usize - nb);
                }
                row
            })
            .collect()
    }

    fn trace_vs_best(&self) -> Ordering {
        let Some(best) = &self.best else {
            return Ordering::Greater;
        };
        let m = self.traces.len().min(best.trace.len());
        match self.traces[..m].cmp(&best.trace[..m]) {
            Ordering::Equal => self.traces.len().cmp(&m).then(Ordering::Equal),
            other => other,
        }
    }

    fn record_automorphism(&mut self, from: &[u32], to: &[u32]) {
        let mut perm = vec![0u32; self.nv];
        for (&a, &b) in from.iter().zip(to) {
            perm[a as usize] = b;
        }
        if perm.iter().enumerate().any(|(i, &v)| i as u32 != v) {
            self.gens.push(perm);
        }
    }

    /// Returns `Some(depth)` to unwind to the node at that depth.
    fn leaf(&mut self, p: &Partition) -> Option<usize> {
        let leaf = Leaf {
            lab: p.lab.clone(),
            trace: self.traces.clone(),
            cert: self.certificate(p),
            path: self.path.clone(),
        };
        let Some(first) = &self.first else {
            self.first = Some(Leaf {
                lab: leaf.lab.clone(),
                trace: leaf.trace.clone(),
                cert: leaf.cert.clone(),
                path: leaf.path.clone(),
            });
            self.best = Some(leaf);
            return None;
        };
        if leaf.trace == first.trace && leaf.cert == first.cert {
            let common = common_prefix(&first.path, &leaf.path);
            let from = first.lab.clone();
            self.record_automorphism(&from, &leaf.lab);
            return Some(common);
        }
        let best = self.best.as_ref().unwrap();
        match (&leaf.trace, &leaf.cert).cmp(&(&best.trace, &best.cert)) {
            Ordering::Equal => {
                let common = common_prefix(&best.path, &leaf.path);
                let from = best.lab.clone();
                self.record_automorphism(&from, &leaf.lab);
                Some(common)
            }
            Ordering::Greater => {
                self.best = Some(leaf);
                None
            }
            Ordering::Less => None,
        }
    }

    /// Orbit representatives under the stored generators that fix the
    /// current path pointwise.
    fn orbits(&self) -> Vec<u32> {
        let mut parent: Vec<u32> = (0..self.nv as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for g in &self.gens {
            if self.path.iter().any(|&v| g[v as usize] != v) {
                continue;
            }
            for (i, &j) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, i as u32), find(&mut parent, j));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
        (0..self.nv as u32).map(|v| find(&mut parent, v)).collect()
    }

    fn visit(&mut self, p: &Partition) -> Option<usize> {
        if self.trace_vs_best() == Ordering::Less {
            return None;
        }
        if p.is_discrete() {
            return self.leaf(p);
        }
        let depth = self.path.len();
        let t = p.target_cell();
        let mut cands: Vec<u32> = p.lab[t..t + p.len[t] as usize].to_vec();
        cands.sort_unstable();
        let mut tried: Vec<u32> = Vec::new();
        let mut orbit_cache: Option<(usize, Vec<u32>)> = None;
        for v in cands {
            if !tried.is_empty() && !self.gens.is_empty() {
                let stale = orbit_cache.as_ref().map_or(true, |(n, _)| *n != self.gens.len());
                if stale {
                    orbit_cache = Some((self.gens.len(), self.orbits()));
                }
                let orb = &orbit_cache.as_ref().unwrap().1;
                if tried.iter().any(|&u| orb[u as usize] == orb[v as usize]) {
                    continue;
                }
            }
            tried.push(v);
            let mut child = p.clone();
            let s = child.individualize(v);
            let h = self.refine(&mut child, &[s]);
            self.path.push(v);
            self.traces.push(mix(h, s as u64));
            let r = self.visit(&child);
            self.path.pop();
            self.traces.pop();
            if let Some(j) = r {
                if j < depth {
                    return Some(j);
                }
            }
        }
        None
    }
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

pub(crate) fn canonical_labeling(g: &ColoredBipartiteGraph) -> Labeling {
    let mut search = Search::new(g);
    let mut root = Partition::new(g.n_black(), g.n_red());
    let h = search.refine(&mut root, &[0, g.n_black() as u32]);
    search.traces.push(h);
    search.visit(&root);
    let best = search.best.expect("search always reaches a leaf");
    Labeling {
        order: best.lab,
        cert: best.cert,
    }
}
