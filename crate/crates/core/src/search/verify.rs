//! Brute-force checks of the shadow, shade, cross-intersection, counting
//! and layer statements.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::POWERSET_BUDGET;
use crate::error::{Error, Result};
use crate::families::{build_k, build_t, is_s_union, is_t_intersecting, layer_inequality_violation};
use crate::gfq::Field;
use crate::qbinom::{
    cross_sharp_bound, disjoint_count, disjoint_count_inclusion_exclusion, gauss,
    gaussian_binomial_real, solve_gaussian_m, BigNat,
};
use crate::subspace::{dual, enumerate_subspaces, Family, Subspace};

/// Counterexample descriptions kept per report.
const KEEP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sample { trials: usize, seed: u64 },
}

impl Mode {
    fn label(&self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sample { .. } => "sample",
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Mode::Exhaustive => None,
            Mode::Sample { seed, .. } => Some(*seed),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    checked: u64,
    equalities: u64,
    secondary: u64,
    failures: u64,
    examples: Vec<String>,
}

impl Tally {
    fn fail(&mut self, msg: impl FnOnce() -> String) {
        self.failures += 1;
        if self.examples.len() < KEEP {
            self.examples.push(msg());
        }
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.checked += o.checked;
        self.equalities += o.equalities;
        self.secondary += o.secondary;
        self.failures += o.failures;
        for e in o.examples {
            if self.examples.len() < KEEP {
                self.examples.push(e);
            }
        }
        self
    }
}

fn layer(field: &Arc<Field>, n: usize, k: usize) -> Result<Vec<Subspace>> {
    Ok(enumerate_subspaces(field, n, k)?.collect())
}

fn index_of(list: &[Subspace]) -> HashMap<Subspace, usize> {
    list.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()
}

fn powerset_guard(size: usize) -> Result<()> {
    if size > POWERSET_BUDGET as usize {
        return Err(Error::BudgetExceeded {
            what: "exhaustive family enumeration",
            size: format!("2^{size}"),
            limit: format!("2^{POWERSET_BUDGET}"),
        });
    }
    Ok(())
}

fn members_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ShadowReport {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub mode: &'static str,
    pub seed: Option<u64>,
    pub families_checked: u64,
    /// Families meeting the shadow bound with equality (all full layers).
    pub equality_cases: u64,
    /// Individual ratio checks on t-intersecting families.
    pub intersecting_checks: u64,
    pub counterexample_count: u64,
    pub counterexamples: Vec<String>,
}

impl ShadowReport {
    pub fn passed(&self) -> bool {
        self.counterexample_count == 0
    }
}

struct ShadowContext {
    k: usize,
    q: u32,
    members: Vec<Subspace>,
    /// `u`-shadows of each member, for `0 ≤ u ≤ k`.
    below: Vec<Vec<FixedBitSet>>,
    meet: Vec<u8>,
}

impl ShadowContext {
    fn new(field: &Arc<Field>, n: usize, k: usize) -> Result<Self> {
        let members = layer(field, n, k)?;
        let mut below = Vec::with_capacity(members.len());
        let lower: Vec<(Vec<Subspace>, HashMap<Subspace, usize>)> = (0..=k)
            .map(|u| {
                let l = layer(field, n, u)?;
                let idx = index_of(&l);
                Ok((l, idx))
            })
            .collect::<Result<_>>()?;
        for m in &members {
            let per_u = (0..=k)
                .map(|u| {
                    let (l, idx) = &lower[u];
                    let mut bits = FixedBitSet::with_capacity(l.len());
                    for x in m.subspaces_of_dim(u) {
                        bits.insert(idx[&x]);
                    }
                    bits
                })
                .collect();
            below.push(per_u);
        }
        let c = members.len();
        let mut meet = vec![0u8; c * c];
        for i in 0..c {
            for j in 0..c {
                meet[i * c + j] = members[i].meet_dim(&members[j]).expect("same ambient") as u8;
            }
        }
        Ok(ShadowContext {
            k,
            q: field.order(),
            members,
            below,
            meet,
        })
    }

    fn shadow_size(&self, h: &[usize], u: usize) -> usize {
        let mut acc = self.below[h[0]][u].clone();
        for &i in &h[1..] {
            acc.union_with(&self.below[i][u]);
        }
        acc.count_ones(..)
    }

    fn check(&self, h: &[usize], t: &mut Tally) {
        let (k, q) = (self.k, self.q);
        let size = h.len();
        t.checked += 1;
        let shadow = self.shadow_size(h, k - 1);
        let m = solve_gaussian_m(&BigNat::from(size), k as u32, q).expect("nonempty");
        let full_layer = self.full_layer(h);
        let equal = if m.fract() == 0.0 {
            let exact = gauss(m as u64, k as u64 - 1, q);
            if BigNat::from(shadow) < exact {
                t.fail(|| format!("|H|={size}: shadow {shadow} < [{m},{}] = {exact}", k - 1));
                return;
            }
            BigNat::from(shadow) == exact
        } else {
            let rhs = gaussian_binomial_real(m, k as u32 - 1, q);
            if (shadow as f64) < rhs * (1.0 - 1e-9) {
                t.fail(|| format!("|H|={size}: shadow {shadow} < [{m:.6},{}] = {rhs:.6}", k - 1));
                return;
            }
            false
        };
        if equal {
            t.equalities += 1;
        }
        if equal != full_layer {
            t.fail(|| {
                format!("|H|={size}: equality={equal} but full layer of a subspace={full_layer}")
            });
        }

        let t_max = h
            .iter()
            .flat_map(|&a| h.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.meet[a * self.members.len() + b] as usize)
            .min()
            .unwrap_or(k);
        for tt in 1..=t_max {
            let top = 2 * k - tt;
            for u in k - tt..=k {
                t.secondary += 1;
                let lhs = BigNat::from(self.shadow_size(h, u)) * gauss(top as u64, k as u64, q);
                let rhs = BigNat::from(size) * gauss(top as u64, u as u64, q);
                if lhs < rhs {
                    t.fail(|| format!("|H|={size}: {tt}-intersecting ratio fails at u={u}"));
                }
            }
        }
    }

    fn full_layer(&self, h: &[usize]) -> bool {
        let k = self.k as u64;
        let size = BigNat::from(h.len());
        let n = self.members[0].ambient_dim() as u64;
        if !(k..=n).any(|j| gauss(j, k, self.q) == size) {
            return false;
        }
        let span = h[1..].iter().fold(self.members[h[0]].clone(), |acc, &i| {
            acc.span(&self.members[i]).expect("same ambient")
        });
        gauss(span.dim() as u64, k, self.q) == size
    }
}

/// Checks `|△(H)| ≥ [m, k−1]` with `|H| = [m, k]`, that equality occurs
/// exactly for full layers `[M, k]`, and, for `t`-intersecting `H`, the
/// ratio bound `|△_u(H)| / |H| ≥ [2k−t, u] / [2k−t, k]` for `k−t ≤ u ≤ k`.
pub fn verify_shadow_theorem(n: usize, k: usize, q: u32, mode: Mode) -> Result<ShadowReport> {
    if k < 2 || k > n {
        return Err(Error::BadParameters(format!("need 2 <= k <= n, got k={k} n={n}")));
    }
    let field = Field::shared(q)?;
    let count = gauss(n as u64, k as u64, q).to_usize().unwrap_or(usize::MAX);
    if mode == Mode::Exhaustive {
        powerset_guard(count)?;
    }
    let ctx = ShadowContext::new(&field, n, k)?;
    let tally = match mode {
        Mode::Exhaustive => (1u32..1 << count)
            .into_par_iter()
            .fold(Tally::default, |mut t, mask| {
                ctx.check(&members_of(mask), &mut t);
                t
            })
            .reduce(Tally::default, Tally::merge),
        Mode::Sample { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples: Vec<Vec<usize>> =
                (0..trials).map(|_| sample_uniform(&ctx.members, &field, n, k, &mut rng)).collect();
            samples
                .par_iter()
                .fold(Tally::default, |mut t, h| {
                    ctx.check(h, &mut t);
                    t
                })
                .reduce(Tally::default, Tally::merge)
        }
    };
    Ok(ShadowReport {
        n,
        k,
        q,
        mode: mode.label(),
        seed: mode.seed(),
        families_checked: tally.checked,
        equality_cases: tally.equalities,
        intersecting_checks: tally.secondary,
        counterexample_count: tally.failures,
        counterexamples: tally.examples,
    })
}

/// A random nonempty `k`-uniform family: a full layer of a random
/// subspace, a star through a random `t`-space, or an arbitrary subset.
fn sample_uniform(
    members: &[Subspace],
    field: &Arc<Field>,
    n: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let idx = index_of(members);
    let pick: Vec<usize> = match rng.gen_range(0..3) {
        0 => {
            let j = rng.gen_range(k..=n);
            let m = random_subspace(field, n, j, rng);
            m.subspaces_of_dim(k).iter().map(|x| idx[x]).collect()
        }
        1 => {
            let t = rng.gen_range(1..=k);
            let core = random_subspace(field, n, t, rng);
            let mut star: Vec<usize> = core.superspaces_of_dim(k).iter().map(|x| idx[x]).collect();
            star.shuffle(rng);
            let keep = rng.gen_range(1..=star.len());
            star.truncate(keep);
            star
        }
        _ => {
            let size = rng.gen_range(1..=members.len().min(64));
            let mut all: Vec<usize> = (0..members.len()).collect();
            all.shuffle(rng);
            all.truncate(size);
            all
        }
    };
    let mut pick = pick;
    pick.sort_unstable();
    pick
}

fn random_subspace(field: &Arc<Field>, n: usize, j: usize, rng: &mut ChaCha8Rng) -> Subspace {
    let q = field.order();
    loop {
        let rows: Vec<Vec<u8>> = (0..j)
            .map(|_| (0..n).map(|_| rng.gen_range(0..q) as u8).collect())
            .collect();
        let s = Subspace::span_of(field, n, &rows).expect("valid rows");
        if s.dim() == j {
            return s;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShadeReport {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub case: &'static str,
    pub mode: &'static str,
    pub seed: Option<u64>,
    #[serde(serialize_with = "decimal")]
    pub gap_bound: BigNat,
    pub families_checked: u64,
    pub equality_cases: u64,
    pub counterexample_count: u64,
    pub counterexamples: Vec<String>,
}

impl ShadeReport {
    pub fn passed(&self) -> bool {
        self.counterexample_count == 0
    }
}

fn decimal<S: serde::Serializer>(v: &BigNat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// For `k ≥ ⌈n/2⌉+1` checks `|△(H)| − |H| ≥ q[k−1,1]`; for
/// `k ≤ ⌊n/2⌋−1` checks `|▽(H)| − |H| ≥ q[n−k−1,1]`. Equality must occur
/// exactly at singletons.
pub fn verify_shade_lemma(n: usize, k: usize, q: u32, mode: Mode) -> Result<ShadeReport> {
    if n < 3 {
        return Err(Error::HypothesisViolated(format!("need n >= 3, got {n}")));
    }
    let (case, other, bound) = if k > n {
        return Err(Error::BadParameters(format!("k = {k} exceeds n = {n}")));
    } else if k >= n.div_ceil(2) + 1 {
        ("shadow", k - 1, BigNat::from(q) * gauss(k as u64 - 1, 1, q))
    } else if k + 1 <= n / 2 {
        ("shade", k + 1, BigNat::from(q) * gauss((n - k - 1) as u64, 1, q))
    } else {
        return Err(Error::HypothesisViolated(format!(
            "need k >= ceil(n/2)+1 or k <= floor(n/2)-1, got n={n} k={k}"
        )));
    };
    let field = Field::shared(q)?;
    let members = layer(&field, n, k)?;
    if mode == Mode::Exhaustive {
        powerset_guard(members.len())?;
    }
    let targets = layer(&field, n, other)?;
    let tidx = index_of(&targets);
    let reach: Vec<FixedBitSet> = members
        .iter()
        .map(|m| {
            let mut b = FixedBitSet::with_capacity(targets.len());
            let near = if other < k {
                m.subspaces_of_dim(other)
            } else {
                m.superspaces_of_dim(other)
            };
            for x in near {
                b.insert(tidx[&x]);
            }
            b
        })
        .collect();
    let bound_u = bound.to_usize().expect("small bound");
    let check = |h: &[usize], t: &mut Tally| {
        t.checked += 1;
        let mut acc = reach[h[0]].clone();
        for &i in &h[1..] {
            acc.union_with(&reach[i]);
        }
        let image = acc.count_ones(..);
        let gap = image as i64 - h.len() as i64;
        if gap < bound_u as i64 {
            t.fail(|| format!("|H|={}: gap {gap} < {bound_u}", h.len()));
        } else if gap == bound_u as i64 {
            t.equalities += 1;
            if h.len() != 1 {
                t.fail(|| format!("|H|={}: equality at a non-singleton", h.len()));
            }
        } else if h.len() == 1 {
            t.fail(|| "singleton strictly above the bound".to_string());
        }
    };
    let tally = match mode {
        Mode::Exhaustive => (1u32..1 << members.len())
            .into_par_iter()
            .fold(Tally::default, |mut t, mask| {
                check(&members_of(mask), &mut t);
                t
            })
            .reduce(Tally::default, Tally::merge),
        Mode::Sample { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut t = Tally::default();
            for _ in 0..trials {
                let h = sample_uniform(&members, &field, n, k, &mut rng);
                check(&h, &mut t);
            }
            t
        }
    };
    Ok(ShadeReport {
        n,
        k,
        q,
        case,
        mode: mode.label(),
        seed: mode.seed(),
        gap_bound: bound,
        families_checked: tally.checked,
        equality_cases: tally.equalities,
        counterexample_count: tally.failures,
        counterexamples: tally.examples,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossReport {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    #[serde(serialize_with = "decimal")]
    pub bound: BigNat,
    pub extremal_pair_size: usize,
    /// Whether the extremal pair attains the bound (required for `n ≥ 2k+2`).
    pub extremal_equality: bool,
    pub exhaustive_pairs: Option<u64>,
    pub trials: usize,
    pub seed: u64,
    pub largest_sampled: usize,
    pub violation_count: u64,
    pub violations: Vec<String>,
}

impl CrossReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// `|A| + |B| ≤ [n,k] − q^{k(k+1)}[n−k−1,k] + 1` for cross-intersecting
/// `A ⊆ [V,k]` and nonempty 2-intersecting `B ⊆ [V,k+1]`.
pub fn verify_cross_lemma(n: usize, k: usize, q: u32, trials: usize, seed: u64) -> Result<CrossReport> {
    if k < 1 || n < 2 * k + 1 {
        return Err(Error::HypothesisViolated(format!(
            "need k >= 1 and n >= 2k+1, got n={n} k={k}"
        )));
    }
    let report = cross_sharp_bound(n as u32, k as u32, q)?;
    let bound = report.value.clone();
    let bound_u = bound.to_usize().unwrap_or(usize::MAX);
    let field = Field::shared(q)?;
    let small = layer(&field, n, k)?;
    let large = layer(&field, n, k + 1)?;
    let large_idx = index_of(&large);

    // meets[b] = the k-spaces meeting large[b] nontrivially
    let meets: Vec<FixedBitSet> = large
        .par_iter()
        .map(|b| {
            let mut bits = FixedBitSet::with_capacity(small.len());
            for (i, a) in small.iter().enumerate() {
                if a.meet_dim(b).expect("same ambient") >= 1 {
                    bits.insert(i);
                }
            }
            bits
        })
        .collect();

    let mut tally = Tally::default();
    let b0 = 0usize;
    let extremal_pair_size = meets[b0].count_ones(..) + 1;
    let extremal_equality = BigNat::from(extremal_pair_size) == bound;
    if extremal_pair_size > bound_u || (report.hypothesis_ok && !extremal_equality) {
        tally.fail(|| format!("extremal pair has size {extremal_pair_size}, bound {bound}"));
    }

    let exhaustive_pairs = if small.len() + large.len() <= POWERSET_BUDGET as usize {
        let two = |a: usize, b: usize| large[a].meet_dim(&large[b]).expect("same ambient") >= 2;
        let mut pairs = 0u64;
        for bmask in 1u32..1 << large.len() {
            let bs = members_of(bmask);
            if !bs.iter().all(|&x| bs.iter().all(|&y| two(x, y))) {
                continue;
            }
            for amask in 0u32..1 << small.len() {
                let cross = members_of(amask)
                    .iter()
                    .all(|&a| bs.iter().all(|&b| meets[b].contains(a)));
                if !cross {
                    continue;
                }
                pairs += 1;
                let total = amask.count_ones() as usize + bs.len();
                if total > bound_u {
                    tally.fail(|| format!("exhaustive: |A|+|B| = {total} > {bound}"));
                }
            }
        }
        Some(pairs)
    } else {
        None
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut largest = 0;
    for trial in 0..trials {
        let bs = random_two_intersecting(n, k + 1, &large, &large_idx, &mut rng);
        let mut a = meets[bs[0]].clone();
        for &b in &bs[1..] {
            a.intersect_with(&meets[b]);
        }
        let mut a_size = a.count_ones(..);
        if rng.gen_bool(0.5) {
            let p: f64 = rng.gen();
            a_size = a.ones().filter(|_| rng.gen_bool(p)).count();
        }
        let total = a_size + bs.len();
        largest = largest.max(total);
        if total > bound_u {
            tally.fail(|| format!("trial {trial}: |A|+|B| = {total} > {bound}"));
        }
    }

    Ok(CrossReport {
        n,
        k,
        q,
        bound,
        extremal_pair_size,
        extremal_equality,
        exhaustive_pairs,
        trials,
        seed,
        largest_sampled: largest,
        violation_count: tally.failures,
        violations: tally.examples,
    })
}

/// A random nonempty 2-intersecting family of `kk`-spaces, grown greedily
/// from candidates of one of three shapes: a star through a plane, the
/// hyperplanes of a `(kk+1)`-space, or uniform picks.
fn random_two_intersecting(
    n: usize,
    kk: usize,
    large: &[Subspace],
    idx: &HashMap<Subspace, usize>,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let first = rng.gen_range(0..large.len());
    let b0 = &large[first];
    let mut cands: Vec<usize> = match rng.gen_range(0..3) {
        0 if kk >= 2 => {
            let planes = b0.subspaces_of_dim(2);
            let core = planes.choose(rng).expect("kk >= 2");
            core.superspaces_of_dim(kk).iter().map(|x| idx[x]).collect()
        }
        1 if kk < n => {
            let ups = b0.superspaces_of_dim(kk + 1);
            let top = ups.choose(rng).expect("kk < n");
            top.subspaces_of_dim(kk).iter().map(|x| idx[x]).collect()
        }
        _ => (0..64).map(|_| rng.gen_range(0..large.len())).collect(),
    };
    cands.shuffle(rng);
    let target = rng.gen_range(1..=cands.len().clamp(1, 40));
    let mut chosen = vec![first];
    for c in cands {
        if chosen.len() >= target {
            break;
        }
        if chosen.contains(&c) {
            continue;
        }
        if chosen
            .iter()
            .all(|&b| large[b].meet_dim(&large[c]).expect("same ambient") >= 2)
        {
            chosen.push(c);
        }
    }
    chosen
}

#[derive(Debug, Clone, Serialize)]
pub struct DisjointRow {
    pub m: usize,
    pub l: usize,
    #[serde(serialize_with = "decimal")]
    pub closed_form: BigNat,
    #[serde(serialize_with = "decimal")]
    pub inclusion_exclusion: BigNat,
    pub enumerated: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DisjointReport {
    pub n: usize,
    pub q: u32,
    pub rows: Vec<DisjointRow>,
    pub mismatches: usize,
}

impl DisjointReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Number of `l`-spaces meeting a fixed `m`-space trivially, three ways,
/// for every `m + l ≤ n` with `l ≥ 1` (or only `l = only_l`).
pub fn verify_disjoint_counts(n: usize, q: u32, only_l: Option<usize>) -> Result<DisjointReport> {
    let field = Field::shared(q)?;
    let mut rows = Vec::new();
    for l in 1..=n {
        if only_l.is_some_and(|x| x != l) {
            continue;
        }
        let ls = layer(&field, n, l)?;
        for m in 0..=n - l {
            let fixed = Subspace::unit_span(&field, n, &(0..m).collect::<Vec<_>>());
            let enumerated = ls
                .par_iter()
                .filter(|x| x.intersect(&fixed).expect("same ambient").dim() == 0)
                .count() as u64;
            rows.push(DisjointRow {
                m,
                l,
                closed_form: disjoint_count(n as u32, m as u32, l as u32, q)?,
                inclusion_exclusion: disjoint_count_inclusion_exclusion(n as u32, m as u32, l as u32, q)?,
                enumerated,
            });
        }
    }
    let mismatches = rows
        .iter()
        .filter(|r| {
            r.closed_form != r.inclusion_exclusion || r.closed_form != BigUint::from(r.enumerated)
        })
        .count();
    Ok(DisjointReport {
        n,
        q,
        rows,
        mismatches,
    })
}

/// A random `s`-union family: members of dimension at most `s` taken in
/// random order, each kept if compatible, until a random target size.
pub fn random_s_union(field: &Arc<Field>, n: usize, s: usize, rng: &mut ChaCha8Rng) -> Result<Family> {
    let mut pool = Vec::new();
    for k in 0..=s.min(n) {
        pool.extend(enumerate_subspaces(field, n, k)?);
    }
    pool.shuffle(rng);
    let target = rng.gen_range(0..=pool.len());
    let mut chosen: Vec<Subspace> = Vec::new();
    for x in pool {
        if chosen.len() >= target {
            break;
        }
        if chosen
            .iter()
            .all(|c| c.span_dim(&x).expect("same ambient") <= s)
        {
            chosen.push(x);
        }
    }
    Family::new(field, n, chosen)
}

#[derive(Debug, Clone, Serialize)]
pub struct LayerReport {
    pub n: usize,
    pub s: usize,
    pub q: u32,
    pub seed: u64,
    pub families_checked: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
}

impl LayerReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// On random `s`-union families (and `K`, `T` where defined): the layer
/// inequality `|F_i| + |F_{s+1−i}| ≤ [n,i]`, that the dual is
/// `(n−s)`-intersecting, and that dualising twice is the identity.
pub fn verify_layers(n: usize, s: usize, q: u32, trials: usize, seed: u64) -> Result<LayerReport> {
    if s == 0 || s > n {
        return Err(Error::BadParameters(format!("need 1 <= s <= n, got s={s} n={n}")));
    }
    let field = Field::shared(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fams = Vec::with_capacity(trials + 2);
    for _ in 0..trials {
        fams.push(random_s_union(&field, n, s, &mut rng)?);
    }
    if s >= 2 && s < n {
        fams.push(build_k(&field, n, s, None)?);
        fams.push(build_t(&field, n, s, None, None)?);
    }
    let mut tally = Tally::default();
    for (i, f) in fams.iter().enumerate() {
        if !is_s_union(f, s) {
            tally.fail(|| format!("family {i} is not {s}-union"));
            continue;
        }
        if let Some(bad) = layer_inequality_violation(f, s) {
            tally.fail(|| format!("family {i}: layer inequality fails at i={bad}"));
        }
        let d = dual(f);
        if !is_t_intersecting(&d, n - s) {
            tally.fail(|| format!("family {i}: dual is not {}-intersecting", n - s));
        }
        if dual(&d) != *f {
            tally.fail(|| format!("family {i}: double dual differs"));
        }
    }
    Ok(LayerReport {
        n,
        s,
        q,
        seed,
        families_checked: fams.len(),
        failure_count: tally.failures as usize,
        failures: tally.examples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shadow_exhaustive_small() {
        let r = verify_shadow_theorem(3, 2, 2, Mode::Exhaustive).unwrap();
        assert_eq!(r.families_checked, 127);
        assert!(r.passed(), "{:?}", r.counterexamples);
        // 7 singletons and the full layer of V
        assert_eq!(r.equality_cases, 8);
        assert!(r.intersecting_checks > 0);
    }

    #[test]
    fn shadow_rejects_degenerate_k() {
        assert!(verify_shadow_theorem(3, 1, 2, Mode::Exhaustive).is_err());
        assert!(matches!(
            verify_shadow_theorem(4, 2, 2, Mode::Exhaustive),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn shadow_sampled() {
        let r = verify_shadow_theorem(5, 2, 2, Mode::Sample { trials: 200, seed: 3 }).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
        assert!(r.equality_cases > 0);
    }

    #[test]
    fn shade_cases() {
        let r = verify_shade_lemma(4, 1, 2, Mode::Exhaustive).unwrap();
        assert_eq!(r.case, "shade");
        assert_eq!(r.gap_bound, BigNat::from(6u32));
        assert_eq!(r.families_checked, (1 << 15) - 1);
        assert_eq!(r.equality_cases, 15);
        assert!(r.passed());
        assert!(matches!(
            verify_shade_lemma(4, 2, 2, Mode::Exhaustive),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn cross_small() {
        let r = verify_cross_lemma(4, 1, 2, 50, 1).unwrap();
        assert_eq!(r.extremal_pair_size, 4);
        assert!(r.extremal_equality);
        assert!(r.passed());
        let r = verify_cross_lemma(3, 1, 2, 20, 1).unwrap();
        assert!(r.exhaustive_pairs.unwrap() > 0);
        assert!(r.passed(), "{:?}", r.violations);
        assert!(verify_cross_lemma(2, 1, 2, 1, 1).is_err());
    }

    #[test]
    fn disjoint_counts_agree() {
        let r = verify_disjoint_counts(4, 2, None).unwrap();
        assert!(r.passed());
        let row = r.rows.iter().find(|x| x.m == 2 && x.l == 2).unwrap();
        assert_eq!(row.enumerated, 16);
    }

    #[test]
    fn layers_on_random_families() {
        let r = verify_layers(4, 2, 2, 30, 9).unwrap();
        assert_eq!(r.families_checked, 32);
        assert!(r.passed(), "{:?}", r.failures);
    }
}
