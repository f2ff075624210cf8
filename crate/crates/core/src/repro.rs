//! The reproduction suite behind `qlattice repro`.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::families::{build_a, build_b, build_k, build_t, is_s_union};
use crate::gfq::Field;
use crate::qbinom::{gaussian_binomial, suboptimal_union_bound, BigNat};
use crate::search::{
    conjecture_scan, max_s_union, max_s_union_antichain, verify_cross_lemma,
    verify_disjoint_counts, verify_layers, verify_shade_lemma, verify_shadow_theorem, Mode,
    SearchOptions,
};
use crate::subspace::{enumerate_subspaces, Family};

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub limit_seconds: f64,
    pub detail: String,
}

type Check = fn(bool) -> Result<(bool, String)>;

const CRITERIA: [(u32, &str, f64, Check); 11] = [
    (1, "Gaussian binomial identities", 1.0, c1),
    (2, "enumeration matches [n,k]_q", 30.0, c2),
    (3, "disjoint-subspace counts", 60.0, c3),
    (4, "largest s-union families", 300.0, c4),
    (5, "largest s-union families outside K", 300.0, c5),
    (6, "largest antichains (s = n)", 600.0, c6),
    (7, "2-union antichains outside [V,1]", 60.0, c7),
    (8, "shadow and shade lemmas", 120.0, c8),
    (9, "cross-intersecting pairs", 300.0, c9),
    (10, "odd-s antichain scan at (4,2,1)", 600.0, c10),
    (11, "duality and layer inequality", 60.0, c11),
];

/// Runs every criterion; `quick` lowers sample counts.
pub fn run_all(quick: bool) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .map(|&(id, title, limit, check)| {
            let start = Instant::now();
            let res = check(quick);
            let seconds = start.elapsed().as_secs_f64();
            let (ok, detail) = match res {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            Outcome {
                id,
                title,
                passed: ok && seconds < limit,
                seconds,
                limit_seconds: limit,
                detail,
            }
        })
        .collect()
}

fn pascal_table(n: usize, q: u32) -> Vec<Vec<BigNat>> {
    let mut t = vec![vec![BigNat::from(0u32); n + 1]; n + 1];
    for a in 0..=n {
        t[a][0] = BigNat::from(1u32);
        for k in 1..=a {
            let up = if k <= a - 1 { t[a - 1][k].clone() } else { BigNat::from(0u32) };
            t[a][k] = t[a - 1][k - 1].clone() + num_traits::pow(BigNat::from(q), k) * up;
        }
    }
    t
}

fn c1(_: bool) -> Result<(bool, String)> {
    let mut checked = 0;
    for q in 2..=5u32 {
        let table = pascal_table(12, q);
        for n in 0..=12usize {
            for k in 0..=n {
                let v = gaussian_binomial(n as i64, k as i64, q)?;
                let sym = gaussian_binomial(n as i64, (n - k) as i64, q)?;
                if v != table[n][k] || v != sym {
                    return Ok((false, format!("mismatch at n={n} k={k} q={q}")));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} coefficients agree")))
}

fn c2(_: bool) -> Result<(bool, String)> {
    let mut checked = 0;
    for (q, top) in [(2u32, 5usize), (3, 4), (4, 3), (5, 3)] {
        let f = Field::shared(q)?;
        for n in 0..=top {
            for k in 0..=n {
                let count = enumerate_subspaces(&f, n, k)?.count();
                if BigNat::from(count) != gaussian_binomial(n as i64, k as i64, q)? {
                    return Ok((false, format!("count {count} wrong at n={n} k={k} q={q}")));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} layers enumerated")))
}

fn c3(_: bool) -> Result<(bool, String)> {
    let mut rows = 0;
    for (q, top) in [(2u32, 5usize), (3, 4)] {
        for n in 1..=top {
            let r = verify_disjoint_counts(n, q, None)?;
            if !r.passed() {
                return Ok((false, format!("{} mismatches at n={n} q={q}", r.mismatches)));
            }
            rows += r.rows.len();
        }
    }
    let r = verify_disjoint_counts(4, 2, Some(2))?;
    let at = r.rows.iter().find(|x| x.m == 2).map(|x| x.enumerated);
    let shown = at.map_or("missing".to_string(), |v| v.to_string());
    Ok((at == Some(16), format!("{rows} (n,m,l,q) cases agree; (4,2,2,2) -> {shown}")))
}

fn all() -> SearchOptions {
    SearchOptions {
        enumerate_all: true,
        ..SearchOptions::default()
    }
}

fn c4(_: bool) -> Result<(bool, String)> {
    let f = Field::shared(2)?;
    let a = max_s_union(3, 2, 2, &all())?;
    let unique = a.witnesses == vec![build_k(&f, 3, 2, None)?];
    let b = max_s_union(4, 2, 2, &SearchOptions::default())?;
    let c = max_s_union(4, 2, 3, &SearchOptions::default())?;
    let ok = a.maximum == 8
        && a.method == "exhaustive"
        && unique
        && b.maximum == 16
        && c.maximum == 23
        && b.complete
        && c.complete;
    Ok((
        ok,
        format!(
            "(3,2,2) -> {} ({}, unique K: {unique}); (4,2,2) -> {}; (4,2,3) -> {}",
            a.maximum, a.method, b.maximum, c.maximum
        ),
    ))
}

fn c5(_: bool) -> Result<(bool, String)> {
    let f = Field::shared(2)?;
    let opts = SearchOptions {
        exclude: true,
        ..all()
    };
    let c = max_s_union(4, 2, 2, &opts)?;
    let mut all_t = true;
    for w in &c.witnesses {
        let tops = w.layer(2);
        all_t &= tops.len() == 1 && *w == build_t(&f, 4, 2, None, Some(&tops.members()[0]))?;
    }
    let t = build_t(&f, 6, 3, None, None)?;
    let expect = suboptimal_union_bound(6, 3, 2)?.value;
    let mut escapes = true;
    for e in enumerate_subspaces(&f, 6, 1)? {
        escapes &= !t.is_subset_of(&build_k(&f, 6, 3, Some(&e))?);
    }
    let union = is_s_union(&t, 3);
    let ok = c.maximum == 5 && c.complete && all_t && BigNat::from(t.len()) == expect && union && escapes;
    Ok((
        ok,
        format!(
            "(4,2,2) excluded -> {} with {} witnesses, all T: {all_t}; |T[6,3]| = {} (bound {expect}), 3-union: {union}, escapes every K: {escapes}",
            c.maximum,
            c.witnesses.len(),
            t.len()
        ),
    ))
}

fn orbit(fams: impl IntoIterator<Item = Result<Family>>) -> Result<BTreeSet<Family>> {
    fams.into_iter().collect()
}

fn c6(_: bool) -> Result<(bool, String)> {
    let f = Field::shared(2)?;
    let a = max_s_union_antichain(3, 2, 3, &all())?;
    let layers: Vec<Family> = vec![Family::full_layer(&f, 3, 1)?, Family::full_layer(&f, 3, 2)?];
    let ok_a = a.maximum == 7 && a.witnesses == layers;
    let b = max_s_union_antichain(4, 2, 4, &all())?;
    let ok_b = b.maximum == 35 && b.witnesses == vec![Family::full_layer(&f, 4, 2)?];
    let c = max_s_union_antichain(4, 2, 4, &SearchOptions { exclude: true, ..all() })?;
    let mut expected = orbit(enumerate_subspaces(&f, 4, 1)?.map(|u| build_a(&f, 4, 4, Some(&u))))?;
    expected.extend(orbit(enumerate_subspaces(&f, 4, 3)?.map(|w| build_b(&f, 4, 4, Some(&w))))?);
    let got: BTreeSet<Family> = c.witnesses.iter().cloned().collect();
    let ok_c = c.maximum == 29 && c.complete && got == expected;
    Ok((
        ok_a && ok_b && ok_c,
        format!(
            "(3,2,3) -> {} [{} witnesses]; (4,2,4) -> {} [{}]; excluded -> {} [{} witnesses, A/B orbits: {}]",
            a.maximum,
            a.witnesses.len(),
            b.maximum,
            b.witnesses.len(),
            c.maximum,
            c.witnesses.len(),
            got == expected
        ),
    ))
}

fn c7(_: bool) -> Result<(bool, String)> {
    let f = Field::shared(2)?;
    let c = max_s_union_antichain(4, 2, 2, &SearchOptions { exclude: true, ..all() })?;
    let expected = orbit(enumerate_subspaces(&f, 4, 2)?.map(|w| build_b(&f, 4, 2, Some(&w))))?;
    let got: BTreeSet<Family> = c.witnesses.iter().cloned().collect();
    let b_union = is_s_union(&build_b(&f, 4, 2, None)?, 2);
    Ok((
        c.maximum == 13 && got == expected,
        format!(
            "search maximum {} with {} witnesses (expected 13, B[4,2] orbit); B[4,2] is 2-union: {b_union}",
            c.maximum,
            c.witnesses.len()
        ),
    ))
}

fn c8(_: bool) -> Result<(bool, String)> {
    let a = verify_shadow_theorem(3, 2, 2, Mode::Exhaustive)?;
    let b = verify_shade_lemma(4, 1, 2, Mode::Exhaustive)?;
    let c = verify_shade_lemma(4, 3, 2, Mode::Exhaustive)?;
    // the equality cases of the shadow bound at n=3, k=2 are the 7 singletons and [V,2]
    let ok = a.passed()
        && a.equality_cases == 8
        && b.passed()
        && b.equality_cases == 15
        && c.passed()
        && c.equality_cases == 15;
    Ok((
        ok,
        format!(
            "shadow: {} families, {} counterexamples, {} equalities; shade k=1: {} / {} / {}; k=3: {} / {} / {}",
            a.families_checked,
            a.counterexample_count,
            a.equality_cases,
            b.families_checked,
            b.counterexample_count,
            b.equality_cases,
            c.families_checked,
            c.counterexample_count,
            c.equality_cases
        ),
    ))
}

fn c9(quick: bool) -> Result<(bool, String)> {
    let a = verify_cross_lemma(4, 1, 2, 0, 0)?;
    let b = verify_cross_lemma(3, 1, 2, 0, 0)?;
    let trials = if quick { 1_000 } else { 10_000 };
    let c = verify_cross_lemma(6, 2, 2, trials, 2024)?;
    let ok = a.extremal_pair_size == 4
        && a.bound == BigNat::from(4u32)
        && a.passed()
        && b.exhaustive_pairs.is_some()
        && b.passed()
        && c.passed()
        && c.trials == trials;
    Ok((
        ok,
        format!(
            "extremal pair {} vs bound {}; {} exhaustive pairs, {} violations; {} trials at (6,2,2), {} violations, largest {} (bound {})",
            a.extremal_pair_size,
            a.bound,
            b.exhaustive_pairs.unwrap_or(0),
            b.violation_count,
            c.trials,
            c.violation_count,
            c.largest_sampled,
            c.bound
        ),
    ))
}

fn c10(_: bool) -> Result<(bool, String)> {
    let r = conjecture_scan(4, 2, 1, 1)?;
    let ok = r.certificate.complete && r.certificate.witnesses_verified;
    Ok((
        ok,
        format!(
            "{} optimal antichains of size {}; maximum outside them {} (conjectured {}); {} witnesses equal B[4,3], {} do not; verdict: {}",
            r.optimal_count,
            r.optimal_maximum,
            r.maximum,
            r.conjectured_bound,
            r.b_witnesses,
            r.other_witnesses,
            r.verdict
        ),
    ))
}

fn c11(quick: bool) -> Result<(bool, String)> {
    let trials = if quick { 50 } else { 200 };
    let mut checked = 0;
    for q in [2u32, 3] {
        for n in 2..=4usize {
            for s in 1..n {
                let r = verify_layers(n, s, q, trials, 11 * n as u64 + s as u64)?;
                if !r.passed() {
                    return Ok((false, format!("n={n} s={s} q={q}: {:?}", r.failures)));
                }
                checked += r.families_checked;
            }
        }
    }
    Ok((true, format!("{checked} families checked")))
}
