//! Compatibility graphs over the subspace lattice.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gfq::Field;
use crate::qbinom::gaussian_binomial;
use crate::subspace::{enumerate_subspaces, Family, Subspace};

/// Largest vertex set a graph may have.
pub const VERTEX_BUDGET: usize = 400;

const WORDS: usize = VERTEX_BUDGET.div_ceil(64);

/// Fixed-width vertex set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VSet([u64; WORDS]);

impl VSet {
    pub const EMPTY: VSet = VSet([0; WORDS]);

    pub fn first_n(n: usize) -> VSet {
        let mut s = VSet::EMPTY;
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn and(&self, o: &VSet) -> VSet {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0) {
            *a &= b;
        }
        r
    }

    #[inline]
    pub fn and_not(&self, o: &VSet) -> VSet {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0) {
            *a &= !b;
        }
        r
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_subset_of(&self, o: &VSet) -> bool {
        self.0.iter().zip(o.0).all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

impl std::fmt::Debug for VSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A pairwise constraint on families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// `dim(A + B) ≤ s`, diagonal included.
    SUnion(usize),
    /// `dim(A ∩ B) ≥ t`, diagonal included.
    TIntersecting(usize),
    /// No member below another.
    Antichain,
}

impl Constraint {
    pub fn label(&self) -> String {
        match self {
            Constraint::SUnion(s) => format!("{s}-union"),
            Constraint::TIntersecting(t) => format!("{t}-intersecting"),
            Constraint::Antichain => "antichain".into(),
        }
    }

    fn admits(&self, dim: usize) -> bool {
        match *self {
            Constraint::SUnion(s) => dim <= s,
            Constraint::TIntersecting(t) => dim >= t,
            Constraint::Antichain => true,
        }
    }

    fn compatible(&self, da: usize, db: usize, meet: usize) -> bool {
        match *self {
            Constraint::SUnion(s) => da + db - meet <= s,
            Constraint::TIntersecting(t) => meet >= t,
            Constraint::Antichain => meet != da && meet != db,
        }
    }
}

/// Vertices are every subspace of `GF(q)^n`. A vertex is admissible when
/// its dimension passes every constraint on the diagonal; edges join
/// distinct vertices whose pair passes every constraint.
pub struct CompatibilityGraph {
    field: Arc<Field>,
    n: usize,
    vertices: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
    adj: Vec<VSet>,
    above: Vec<VSet>,
    below: Vec<VSet>,
    admissible: VSet,
    constraints: Vec<Constraint>,
}

impl CompatibilityGraph {
    pub fn build(field: &Arc<Field>, n: usize, constraints: &[Constraint]) -> Result<Self> {
        let q = field.order();
        let mut total = BigUint::from(0u32);
        for k in 0..=n {
            total += gaussian_binomial(n as i64, k as i64, q)?;
        }
        if total > BigUint::from(VERTEX_BUDGET) {
            return Err(Error::BudgetExceeded {
                what: "compatibility graph vertices",
                size: total.to_string(),
                limit: VERTEX_BUDGET.to_string(),
            });
        }
        let mut raw = Vec::new();
        for k in 0..=n {
            raw.extend(enumerate_subspaces(field, n, k)?);
        }
        let m = raw.len();
        let admit = |s: &Subspace| constraints.iter().all(|c| c.admits(s.dim()));

        let mut meet = vec![0usize; m * m];
        for i in 0..m {
            meet[i * m + i] = raw[i].dim();
            for j in i + 1..m {
                let d = raw[i].meet_dim(&raw[j]).expect("same ambient");
                meet[i * m + j] = d;
                meet[j * m + i] = d;
            }
        }
        let edge = |i: usize, j: usize| {
            i != j
                && constraints
                    .iter()
                    .all(|c| c.compatible(raw[i].dim(), raw[j].dim(), meet[i * m + j]))
        };

        // admissible vertices first, by descending degree, ties in canonical order
        let degree: Vec<usize> = (0..m)
            .map(|i| (0..m).filter(|&j| admit(&raw[j]) && edge(i, j)).count())
            .collect();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| (!admit(&raw[i]), std::cmp::Reverse(degree[i]), i));

        let mut adj = vec![VSet::EMPTY; m];
        let mut above = vec![VSet::EMPTY; m];
        let mut below = vec![VSet::EMPTY; m];
        let mut admissible = VSet::EMPTY;
        for (a, &i) in order.iter().enumerate() {
            if admit(&raw[i]) {
                admissible.insert(a);
            }
            for (b, &j) in order.iter().enumerate() {
                if edge(i, j) {
                    adj[a].insert(b);
                }
                let mij = meet[i * m + j];
                if i != j && mij == raw[i].dim() {
                    above[a].insert(b);
                }
                if i != j && mij == raw[j].dim() {
                    below[a].insert(b);
                }
            }
        }
        let vertices: Vec<Subspace> = order.iter().map(|&i| raw[i].clone()).collect();
        let index = vertices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(CompatibilityGraph {
            field: field.clone(),
            n,
            vertices,
            index,
            adj,
            above,
            below,
            admissible,
            constraints: constraints.to_vec(),
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn admissible(&self) -> VSet {
        self.admissible
    }

    pub fn neighbours(&self, v: usize) -> &VSet {
        &self.adj[v]
    }

    /// Strict superspaces of `v` among the vertices.
    pub fn above(&self, v: usize) -> &VSet {
        &self.above[v]
    }

    /// Strict subspaces of `v` among the vertices.
    pub fn below(&self, v: usize) -> &VSet {
        &self.below[v]
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn set_of(&self, fam: &Family) -> VSet {
        let mut s = VSet::EMPTY;
        for m in fam {
            s.insert(self.index[m]);
        }
        s
    }

    pub fn family_of(&self, set: &VSet) -> Family {
        Family::new(&self.field, self.n, set.iter().map(|v| self.vertices[v].clone()))
            .expect("vertices share the ambient space")
    }

    /// True iff `set` is a clique of admissible vertices.
    pub fn is_clique(&self, set: &VSet) -> bool {
        set.is_subset_of(&self.admissible)
            && set.iter().all(|v| {
                let mut rest = *set;
                rest.remove(v);
                rest.is_subset_of(&self.adj[v])
            })
    }
}
