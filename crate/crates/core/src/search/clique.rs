//! Maximum-clique search: exhaustive powerset for tiny graphs, and a
//! colouring-bound branch and bound otherwise.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::graph::{CompatibilityGraph, VSet};
use crate::error::{Error, Result};

/// Largest vertex count walked by the powerset search.
pub const POWERSET_BUDGET: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    None,
    /// Maximum families are down-closed; branching on `v` settles all its
    /// superspaces in the sibling branches.
    DownClosed,
    /// Maximum families are up-closed.
    UpClosed,
}

#[derive(Clone)]
pub struct CliqueQuery<'g> {
    pub graph: &'g CompatibilityGraph,
    /// A clique is rejected when it is a subset of any of these.
    pub forbidden: Vec<VSet>,
    pub dominance: Dominance,
    pub enumerate_all: bool,
    pub workers: usize,
}

#[derive(Debug, Clone)]
pub struct CliqueResult {
    pub maximum: usize,
    /// In canonical order. One entry unless every maximum was requested.
    pub witnesses: Vec<VSet>,
    pub nodes: u64,
    pub method: &'static str,
}

impl CliqueQuery<'_> {
    fn valid(&self, set: &VSet) -> bool {
        self.forbidden.iter().all(|f| !set.is_subset_of(f))
    }

    pub fn run(&self) -> Result<CliqueResult> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.max(1))
            .build()
            .map_err(|e| Error::BadParameters(format!("worker pool: {e}")))?;
        pool.install(|| {
            if self.graph.len() <= POWERSET_BUDGET as usize {
                Ok(self.powerset())
            } else {
                Ok(self.branch_and_bound())
            }
        })
    }

    /// Every subset of the vertex set, admissible or not.
    pub fn powerset(&self) -> CliqueResult {
        let g = self.graph;
        let m = g.len();
        assert!(m <= POWERSET_BUDGET as usize);
        let mask = |s: &VSet| s.iter().fold(0u32, |acc, v| acc | 1 << v);
        let closed: Vec<u32> = (0..m)
            .map(|v| {
                if g.admissible().contains(v) {
                    mask(g.neighbours(v)) | 1 << v
                } else {
                    0
                }
            })
            .collect();
        let forb: Vec<u32> = self.forbidden.iter().map(mask).collect();
        let (maximum, found) = (0u32..1 << m)
            .into_par_iter()
            .fold(
                || (0usize, Vec::<u32>::new()),
                |(best, mut list), set| {
                    let mut rest = set;
                    while rest != 0 {
                        let v = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        if set & !closed[v] != 0 {
                            return (best, list);
                        }
                    }
                    if forb.iter().any(|&f| set & !f == 0) {
                        return (best, list);
                    }
                    let size = set.count_ones() as usize;
                    if size > best {
                        list.clear();
                    }
                    if size >= best {
                        list.push(set);
                    }
                    (best.max(size), list)
                },
            )
            .reduce(
                || (0, Vec::new()),
                |(a, mut la), (b, lb)| match a.cmp(&b) {
                    std::cmp::Ordering::Greater => (a, la),
                    std::cmp::Ordering::Less => (b, lb),
                    std::cmp::Ordering::Equal => {
                        la.extend(lb);
                        (a, la)
                    }
                },
            );
        let mut witnesses: Vec<VSet> = found
            .into_iter()
            .map(|bits| {
                let mut s = VSet::EMPTY;
                for v in 0..m {
                    if bits >> v & 1 == 1 {
                        s.insert(v);
                    }
                }
                s
            })
            .collect();
        witnesses.sort_by_key(canonical_key);
        if !self.enumerate_all {
            witnesses.truncate(1);
        }
        CliqueResult {
            maximum,
            witnesses,
            nodes: 1 << m,
            method: "exhaustive",
        }
    }

    /// Colouring-bound branch and bound. Top-level branches run in
    /// parallel and share the incumbent `(size, earliest branch)`, packed
    /// so that `fetch_max` prefers larger sizes and then earlier branches;
    /// the reported witness is therefore independent of scheduling.
    pub fn branch_and_bound(&self) -> CliqueResult {
        let g = self.graph;
        let shared = AtomicU64::new(0);
        let root = VSet::EMPTY;
        let mut p = g.admissible();

        let mut tasks = Vec::new();
        let mut root_record = None;
        let root_branch = self.branch_set(&root, &p);
        if self.valid(&root) {
            root_record = Some(root);
        }
        let iter_order: Vec<usize> = match &root_branch {
            Some((set, _)) => set.iter().collect(),
            None => Vec::new(),
        };
        for v in iter_order {
            if !p.contains(v) {
                continue;
            }
            let mut r = root;
            r.insert(v);
            tasks.push((r, p.and(g.neighbours(v))));
            p.remove(v);
            p = self.dominate(p, v);
        }

        let results: Vec<Summary> = tasks
            .par_iter()
            .enumerate()
            .map(|(i, (r, p))| {
                let mut b = Branch {
                    q: self,
                    id: i as u32 + 1,
                    shared: &shared,
                    best: 0,
                    found: Vec::new(),
                    nodes: 0,
                };
                b.expand(*r, r.len(), *p);
                b.into_summary()
            })
            .collect();

        let mut maximum = 0;
        let mut witnesses: Vec<VSet> = Vec::new();
        if let Some(r) = root_record {
            witnesses.push(r);
        }
        let mut nodes = 1;
        for b in results {
            nodes += b.nodes;
            if b.best > maximum && !b.found.is_empty() {
                maximum = b.best;
                witnesses.clear();
            }
            if b.best == maximum && (self.enumerate_all || witnesses.is_empty()) {
                witnesses.extend(b.found);
            }
        }
        if self.enumerate_all {
            witnesses.sort_by_key(canonical_key);
            witnesses.dedup();
        } else {
            witnesses.truncate(1);
        }
        CliqueResult {
            maximum,
            witnesses,
            nodes,
            method: "branch-and-bound",
        }
    }

    fn dominate(&self, p: VSet, v: usize) -> VSet {
        match self.dominance {
            Dominance::None => p,
            Dominance::DownClosed => p.and_not(self.graph.above(v)),
            Dominance::UpClosed => p.and_not(self.graph.below(v)),
        }
    }

    /// The vertices to branch on: all of `p`, or, while `r` still lies
    /// inside some forbidden set, the candidates that escape the one with
    /// the fewest escapes (every valid extension uses one of them).
    /// `None` when some forbidden set can no longer be escaped.
    fn branch_set(&self, r: &VSet, p: &VSet) -> Option<(VSet, bool)> {
        let mut best: Option<VSet> = None;
        for f in &self.forbidden {
            if !r.is_subset_of(f) {
                continue;
            }
            let esc = p.and_not(f);
            if esc.is_empty() {
                return None;
            }
            if best.map_or(true, |b| esc.len() < b.len()) {
                best = Some(esc);
            }
        }
        match best {
            Some(b) => Some((b, true)),
            None => Some((*p, false)),
        }
    }
}

fn canonical_key(s: &VSet) -> Vec<usize> {
    s.iter().collect()
}

struct Branch<'a, 'g> {
    q: &'a CliqueQuery<'g>,
    id: u32,
    shared: &'a AtomicU64,
    best: usize,
    found: Vec<VSet>,
    nodes: u64,
}

struct Summary {
    best: usize,
    found: Vec<VSet>,
    nodes: u64,
}

fn pack(size: usize, id: u32) -> u64 {
    (size as u64) << 32 | (u32::MAX - id) as u64
}

impl Branch<'_, '_> {
    fn into_summary(self) -> Summary {
        Summary {
            best: self.best,
            found: self.found,
            nodes: self.nodes,
        }
    }

    fn pruned(&self, bound: usize) -> bool {
        let key = self.shared.load(Ordering::Relaxed);
        let size = (key >> 32) as usize;
        let holder = u32::MAX - (key & 0xffff_ffff) as u32;
        if self.q.enumerate_all {
            bound < size
        } else {
            bound < size || (bound == size && holder <= self.id)
        }
    }

    fn record(&mut self, r: VSet, size: usize) {
        if self.q.enumerate_all {
            if size < self.best {
                return;
            }
            if size > self.best {
                self.found.clear();
                self.best = size;
            }
            self.found.push(r);
            self.shared.fetch_max(pack(size, 0), Ordering::Relaxed);
        } else if size > self.best || self.found.is_empty() {
            if self.pruned(size) {
                return;
            }
            self.best = size;
            self.found.clear();
            self.found.push(r);
            self.shared.fetch_max(pack(size, self.id), Ordering::Relaxed);
        }
    }

    /// Greedy sequential colouring of `p`; vertices grouped by colour
    /// class, classes in increasing order.
    fn colour(&self, p: &VSet) -> (Vec<usize>, Vec<usize>) {
        let g = self.q.graph;
        let mut order = Vec::with_capacity(p.len());
        let mut colours = Vec::with_capacity(p.len());
        let mut uncoloured = *p;
        let mut k = 0;
        while !uncoloured.is_empty() {
            k += 1;
            let mut class = uncoloured;
            while let Some(v) = class.first() {
                class.remove(v);
                class = class.and_not(g.neighbours(v));
                uncoloured.remove(v);
                order.push(v);
                colours.push(k);
            }
        }
        (order, colours)
    }

    fn expand(&mut self, r: VSet, r_size: usize, mut p: VSet) {
        self.nodes += 1;
        let g = self.q.graph;
        if self.q.valid(&r) && !self.pruned(r_size) {
            self.record(r, r_size);
        }
        if p.is_empty() {
            return;
        }
        let Some((branch, restricted)) = self.q.branch_set(&r, &p) else {
            return;
        };
        let (order, colours) = self.colour(&p);
        let ncolours = colours.last().copied().unwrap_or(0);
        if self.pruned(r_size + ncolours) {
            return;
        }
        if restricted {
            for v in branch.iter() {
                if !p.contains(v) {
                    continue;
                }
                let mut child = r;
                child.insert(v);
                self.expand(child, r_size + 1, p.and(g.neighbours(v)));
                p.remove(v);
            }
            return;
        }
        for idx in (0..order.len()).rev() {
            let v = order[idx];
            if !p.contains(v) {
                continue;
            }
            if self.pruned(r_size + colours[idx]) {
                return;
            }
            let mut child = r;
            child.insert(v);
            self.expand(child, r_size + 1, p.and(g.neighbours(v)));
            p.remove(v);
            p = self.q.dominate(p, v);
        }
    }
}
