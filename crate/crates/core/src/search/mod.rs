//! Extremal search at desk scale, and brute-force verifiers.

mod clique;
mod graph;
mod verify;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

pub use clique::{CliqueQuery, CliqueResult, Dominance, POWERSET_BUDGET};
pub use graph::{CompatibilityGraph, Constraint, VSet, VERTEX_BUDGET};
pub use verify::*;

use crate::error::{Error, Result};
use crate::families::{build_b, build_k, is_antichain, is_s_union, is_t_intersecting};
use crate::gfq::Field;
use crate::qbinom::{gauss, BigNat};
use crate::subspace::{enumerate_subspaces, write_family, Family};

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Restrict to families outside every optimal family.
    pub exclude: bool,
    pub enumerate_all: bool,
    pub workers: usize,
    /// Disable the closure-based pruning.
    pub naive: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            exclude: false,
            enumerate_all: false,
            workers: 1,
            naive: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchCertificate {
    pub problem: &'static str,
    pub parameters: BTreeMap<&'static str, usize>,
    pub constraints: Vec<String>,
    pub exclusion: Option<String>,
    pub maximum: usize,
    pub complete: bool,
    pub nodes_explored: u64,
    pub method: &'static str,
    pub vertices: usize,
    pub seed: Option<u64>,
    #[serde(serialize_with = "family_texts")]
    pub witnesses: Vec<Family>,
    /// Every witness re-checked against the family predicates.
    pub witnesses_verified: bool,
}

fn family_texts<S: serde::Serializer>(
    fams: &[Family],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(fams.iter().map(write_family))
}

struct Problem {
    name: &'static str,
    parameters: BTreeMap<&'static str, usize>,
    constraints: Vec<Constraint>,
    exclusion: Option<(String, Vec<Family>)>,
    dominance: Dominance,
}

fn solve(field: &Arc<Field>, n: usize, p: Problem, opts: &SearchOptions) -> Result<SearchCertificate> {
    let g = CompatibilityGraph::build(field, n, &p.constraints)?;
    let forbidden_fams = p.exclusion.as_ref().map(|e| e.1.clone()).unwrap_or_default();
    let query = CliqueQuery {
        graph: &g,
        forbidden: forbidden_fams.iter().map(|f| g.set_of(f)).collect(),
        dominance: p.dominance,
        enumerate_all: opts.enumerate_all,
        workers: opts.workers,
    };
    let res = query.run()?;
    let mut witnesses: Vec<Family> = res.witnesses.iter().map(|w| g.family_of(w)).collect();
    witnesses.sort();
    let verified = witnesses.iter().all(|w| {
        p.constraints.iter().all(|c| match *c {
            Constraint::SUnion(s) => is_s_union(w, s),
            Constraint::TIntersecting(t) => is_t_intersecting(w, t),
            Constraint::Antichain => is_antichain(w),
        }) && forbidden_fams.iter().all(|f| !w.is_subset_of(f))
            && w.len() == res.maximum
    });
    Ok(SearchCertificate {
        problem: p.name,
        parameters: p.parameters,
        constraints: p.constraints.iter().map(Constraint::label).collect(),
        exclusion: p.exclusion.map(|e| e.0),
        maximum: res.maximum,
        complete: true,
        nodes_explored: res.nodes,
        method: res.method,
        vertices: g.len(),
        seed: None,
        witnesses,
        witnesses_verified: verified,
    })
}

fn params(pairs: &[(&'static str, usize)]) -> BTreeMap<&'static str, usize> {
    pairs.iter().copied().collect()
}

/// Largest `s`-union family in `L(V)`; with `exclude`, largest one not
/// contained in any `K[n,s]`.
pub fn max_s_union(n: usize, q: u32, s: usize, opts: &SearchOptions) -> Result<SearchCertificate> {
    if s < 2 || s >= n {
        return Err(Error::ParametersOutOfRange(format!("need 2 <= s < n, got s={s} n={n}")));
    }
    let field = Field::shared(q)?;
    let exclusion = if opts.exclude {
        let mut ks = Vec::new();
        let label = if s % 2 == 0 {
            ks.push(build_k(&field, n, s, None)?);
            format!("not contained in K[{n},{s}]")
        } else {
            for e in enumerate_subspaces(&field, n, 1)? {
                ks.push(build_k(&field, n, s, Some(&e))?);
            }
            format!("not contained in K[{n},{s}] for any anchor E")
        };
        Some((label, ks))
    } else {
        None
    };
    let dominance = if opts.exclude || opts.naive {
        Dominance::None
    } else {
        Dominance::DownClosed
    };
    let problem = Problem {
        name: "max-union",
        parameters: params(&[("n", n), ("q", q as usize), ("s", s)]),
        constraints: vec![Constraint::SUnion(s)],
        exclusion,
        dominance,
    };
    solve(&field, n, problem, opts)
}

/// Largest `t`-intersecting family in `L(V)`.
pub fn max_t_intersecting(n: usize, q: u32, t: usize, opts: &SearchOptions) -> Result<SearchCertificate> {
    if t > n {
        return Err(Error::ParametersOutOfRange(format!("need t <= n, got t={t} n={n}")));
    }
    let field = Field::shared(q)?;
    let problem = Problem {
        name: "max-intersecting",
        parameters: params(&[("n", n), ("q", q as usize), ("t", t)]),
        constraints: vec![Constraint::TIntersecting(t)],
        exclusion: None,
        dominance: if opts.naive { Dominance::None } else { Dominance::UpClosed },
    };
    solve(&field, n, problem, opts)
}

type OptimalKey = (usize, u32, usize);

fn optimal_cache() -> &'static Mutex<HashMap<OptimalKey, Vec<Family>>> {
    static CACHE: OnceLock<Mutex<HashMap<OptimalKey, Vec<Family>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Every maximum `s`-union antichain, enumerated once per parameter set.
pub fn optimal_antichains(n: usize, q: u32, s: usize, workers: usize) -> Result<Vec<Family>> {
    if let Some(v) = optimal_cache().lock().unwrap().get(&(n, q, s)) {
        return Ok(v.clone());
    }
    let opts = SearchOptions {
        enumerate_all: true,
        workers,
        ..SearchOptions::default()
    };
    let cert = max_s_union_antichain(n, q, s, &opts)?;
    optimal_cache()
        .lock()
        .unwrap()
        .insert((n, q, s), cert.witnesses.clone());
    Ok(cert.witnesses)
}

/// Largest `s`-union antichain; with `exclude`, largest one outside the
/// optimal ones (both middle layers for `s = n`, `[V,d]` for `s = 2d < n`,
/// and every enumerated optimum for odd `s < n`).
pub fn max_s_union_antichain(
    n: usize,
    q: u32,
    s: usize,
    opts: &SearchOptions,
) -> Result<SearchCertificate> {
    if s < 2 || s > n {
        return Err(Error::ParametersOutOfRange(format!("need 2 <= s <= n, got s={s} n={n}")));
    }
    let field = Field::shared(q)?;
    let exclusion = if !opts.exclude {
        None
    } else if s == n {
        let (lo, hi) = (n / 2, n.div_ceil(2));
        let mut layers = vec![Family::full_layer(&field, n, lo)?];
        if hi != lo {
            layers.push(Family::full_layer(&field, n, hi)?);
        }
        Some((format!("not contained in [V,{lo}] nor [V,{hi}]"), layers))
    } else if s % 2 == 0 {
        let d = s / 2;
        Some((
            format!("not contained in [V,{d}]"),
            vec![Family::full_layer(&field, n, d)?],
        ))
    } else {
        let optimal = optimal_antichains(n, q, s, opts.workers)?;
        Some((
            format!(
                "not contained in any of the {} optimal {s}-union antichains",
                optimal.len()
            ),
            optimal,
        ))
    };
    let problem = Problem {
        name: "max-antichain",
        parameters: params(&[("n", n), ("q", q as usize), ("s", s)]),
        constraints: vec![Constraint::SUnion(s), Constraint::Antichain],
        exclusion,
        dominance: Dominance::None,
    };
    solve(&field, n, problem, opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub q: u32,
    pub d: usize,
    pub optimal_maximum: usize,
    pub optimal_count: usize,
    #[serde(serialize_with = "decimal")]
    pub conjectured_bound: BigNat,
    pub maximum: usize,
    pub bound_holds: bool,
    pub bound_attained: bool,
    /// Maximum witnesses equal to `B[n,2d+1]` for some anchor.
    pub b_witnesses: usize,
    pub other_witnesses: usize,
    pub verdict: &'static str,
    pub certificate: SearchCertificate,
}

fn decimal<S: serde::Serializer>(v: &BigNat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Searches every `(2d+1)`-union antichain outside all optimal ones and
/// compares the result with `[n,d] − q[d,1]` and with `B[n,2d+1]`.
pub fn conjecture_scan(n: usize, q: u32, d: usize, workers: usize) -> Result<ConjectureReport> {
    if d == 0 {
        return Err(Error::ParametersOutOfRange("d must be at least 1".into()));
    }
    let s = 2 * d + 1;
    if s >= n {
        return Err(Error::ParametersOutOfRange(format!("need 2d+1 < n, got d={d} n={n}")));
    }
    let field = Field::shared(q)?;
    let optimal = optimal_antichains(n, q, s, workers)?;
    let optimal_maximum = optimal.first().map_or(0, Family::len);
    let opts = SearchOptions {
        exclude: true,
        enumerate_all: true,
        workers,
        naive: false,
    };
    let certificate = max_s_union_antichain(n, q, s, &opts)?;
    let bound = gauss(n as u64, d as u64, q) - BigNat::from(q) * gauss(d as u64, 1, q);
    let maximum = certificate.maximum;
    let max_big = BigNat::from(maximum);
    let is_b = |w: &Family| {
        let tops: Vec<_> = w.iter().filter(|m| m.dim() == d + 1).collect();
        tops.len() == 1
            && build_b(&field, n, s, Some(tops[0])).map_or(false, |b| &b == w)
    };
    let b_witnesses = certificate.witnesses.iter().filter(|w| is_b(w)).count();
    let other_witnesses = certificate.witnesses.len() - b_witnesses;
    let verdict = if max_big > bound {
        "refuted: bound exceeded"
    } else if max_big < bound {
        "bound holds but is not attained"
    } else if other_witnesses > 0 {
        "bound holds; equality case refuted (extremal families other than B[n,2d+1])"
    } else {
        "confirmed"
    };
    Ok(ConjectureReport {
        n,
        q,
        d,
        optimal_maximum,
        optimal_count: optimal.len(),
        bound_holds: max_big <= bound,
        bound_attained: max_big == bound,
        conjectured_bound: bound,
        maximum,
        b_witnesses,
        other_witnesses,
        verdict,
        certificate,
    })
}
