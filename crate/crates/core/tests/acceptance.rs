//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Expected values are written out here and checked against oracles that
//! live in this file (u128 Pascal tables, direct pairwise checks, a local
//! random generator) where that is possible. Criterion 7 cannot pass: the
//! family it names is not 2-union, and the true maximum is 1. The run
//! prints FAIL for it and exits nonzero only if the measured outcome
//! drifts from that documented value.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qlattice::families::{build_a, build_b, build_t};
use qlattice::qbinom::{disjoint_count, disjoint_count_inclusion_exclusion};
use qlattice::search::{
    conjecture_scan, max_s_union, max_s_union_antichain, verify_cross_lemma,
    verify_shade_lemma, verify_shadow_theorem, Mode, SearchOptions,
};
use qlattice::subspace::enumerate_subspaces;
use qlattice::{gaussian_binomial, Family, Field, Subspace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pascal(n: usize, q: u128) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; n + 1]; n + 1];
    for a in 0..=n {
        t[a][0] = 1;
        for k in 1..=a {
            t[a][k] = t[a - 1][k - 1] + q.pow(k as u32) * if k < a { t[a - 1][k] } else { 0 };
        }
    }
    t
}

fn gf(q: u32) -> Arc<Field> {
    Field::shared(q).unwrap()
}

fn layer(f: &Arc<Field>, n: usize, k: usize) -> Vec<Subspace> {
    enumerate_subspaces(f, n, k).unwrap().collect()
}

fn fam(f: &Arc<Field>, n: usize, m: impl IntoIterator<Item = Subspace>) -> Family {
    Family::new(f, n, m).unwrap()
}

fn all() -> SearchOptions {
    SearchOptions { enumerate_all: true, ..SearchOptions::default() }
}

fn excluded() -> SearchOptions {
    SearchOptions { exclude: true, ..all() }
}

fn s_union(f: &Family, s: usize) -> bool {
    let m = f.members();
    m.iter().all(|a| m.iter().all(|b| a.span_dim(b).unwrap() <= s))
}

fn t_intersecting(f: &Family, t: usize) -> bool {
    let m = f.members();
    m.iter().all(|a| m.iter().all(|b| a.meet_dim(b).unwrap() >= t))
}

fn antichain(f: &Family) -> bool {
    let m = f.members();
    m.iter().enumerate().all(|(i, a)| {
        m.iter()
            .enumerate()
            .all(|(j, b)| i == j || !a.is_subspace_of(b).unwrap())
    })
}

type Verdict = (bool, String);

fn c1() -> Verdict {
    for q in 2..=5u32 {
        let t = pascal(12, q as u128);
        for n in 0..=12 {
            for k in 0..=n {
                let v = gaussian_binomial(n as i64, k as i64, q).unwrap().to_string();
                let sym = gaussian_binomial(n as i64, (n - k) as i64, q).unwrap().to_string();
                if v != t[n][k].to_string() || sym != v {
                    return (false, format!("n={n} k={k} q={q}: {v} vs {}", t[n][k]));
                }
            }
        }
    }
    let spot = gaussian_binomial(4, 2, 2).unwrap().to_string() == "35"
        && gaussian_binomial(5, 2, 2).unwrap().to_string() == "155";
    (spot, "364 coefficients; [4,2]_2 = 35, [5,2]_2 = 155".into())
}

fn c2() -> Verdict {
    let mut layers = 0;
    for (q, top) in [(2u32, 5usize), (3, 4), (4, 3), (5, 3)] {
        let t = pascal(top, q as u128);
        let f = gf(q);
        for n in 0..=top {
            for k in 0..=n {
                let c = enumerate_subspaces(&f, n, k).unwrap().count() as u128;
                if c != t[n][k] {
                    return (false, format!("n={n} k={k} q={q}: {c} vs {}", t[n][k]));
                }
                layers += 1;
            }
        }
    }
    (true, format!("{layers} layers"))
}

fn c3() -> Verdict {
    let mut cases = 0;
    for (q, top) in [(2u32, 5usize), (3, 4)] {
        let f = gf(q);
        let t = pascal(top, q as u128);
        for n in 1..=top {
            for m in 0..=n {
                let z = Subspace::unit_span(&f, n, &(0..m).collect::<Vec<_>>());
                for l in 1..=n - m {
                    let direct = layer(&f, n, l)
                        .iter()
                        .filter(|w| w.meet_dim(&z).unwrap() == 0)
                        .count() as u128;
                    let closed = (q as u128).pow((l * m) as u32) * t[n - m][l];
                    let (n32, m32, l32) = (n as u32, m as u32, l as u32);
                    let a = disjoint_count(n32, m32, l32, q).unwrap().to_string();
                    let b = disjoint_count_inclusion_exclusion(n32, m32, l32, q).unwrap().to_string();
                    if direct != closed || a != direct.to_string() || b != a {
                        return (false, format!("(n,m,l,q)=({n},{m},{l},{q}): {direct} {closed} {a} {b}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    let spot = disjoint_count(4, 2, 2, 2).unwrap().to_string() == "16";
    (spot, format!("{cases} cases; (4,2,2,2) = 16"))
}

fn c4() -> Verdict {
    let f = gf(2);
    let a = max_s_union(3, 2, 2, &all()).unwrap();
    let k32 = fam(&f, 3, layer(&f, 3, 0).into_iter().chain(layer(&f, 3, 1)));
    let b = max_s_union(4, 2, 2, &SearchOptions::default()).unwrap();
    let c = max_s_union(4, 2, 3, &SearchOptions::default()).unwrap();
    let ok = a.maximum == 8
        && a.method == "exhaustive"
        && a.witnesses == vec![k32]
        && (b.maximum, b.complete) == (16, true)
        && (c.maximum, c.complete) == (23, true);
    (ok, format!("{} ({}, {} witness), {}, {}", a.maximum, a.method, a.witnesses.len(), b.maximum, c.maximum))
}

fn c5() -> Verdict {
    let f = gf(2);
    let r = max_s_union(4, 2, 2, &excluded()).unwrap();
    let literal = r.witnesses.iter().all(|w| {
        let tops: Vec<&Subspace> = w.iter().filter(|m| m.dim() == 2).collect();
        tops.len() == 1 && *w == build_t(&f, 4, 2, None, Some(tops[0])).unwrap()
    });
    let t = build_t(&f, 6, 3, None, None).unwrap();
    // K[6,3] anchored at E holds everything of dimension <= 1 and the lines through E
    let escapes = layer(&f, 6, 1).iter().all(|e| {
        t.iter().any(|m| m.dim() > 2 || (m.dim() == 2 && !e.is_subspace_of(m).unwrap()))
    });
    let ok = r.maximum == 5 && r.complete && !r.witnesses.is_empty() && literal
        && t.len() == 71 && s_union(&t, 3) && escapes;
    (ok, format!("{} with {} witnesses (all build_T: {literal}); |T[6,3]| = {}, escapes all 63 K: {escapes}", r.maximum, r.witnesses.len(), t.len()))
}

fn c6() -> Verdict {
    let f = gf(2);
    let a = max_s_union_antichain(3, 2, 3, &all()).unwrap();
    let want_a = vec![fam(&f, 3, layer(&f, 3, 1)), fam(&f, 3, layer(&f, 3, 2))];
    let b = max_s_union_antichain(4, 2, 4, &all()).unwrap();
    let c = max_s_union_antichain(4, 2, 4, &excluded()).unwrap();
    let mut orbit = BTreeSet::new();
    for u in layer(&f, 4, 1) {
        orbit.insert(build_a(&f, 4, 4, Some(&u)).unwrap());
    }
    for w in layer(&f, 4, 3) {
        orbit.insert(build_b(&f, 4, 4, Some(&w)).unwrap());
    }
    let got: BTreeSet<Family> = c.witnesses.iter().cloned().collect();
    let ok = a.maximum == 7
        && a.witnesses == want_a
        && b.maximum == 35
        && b.witnesses == vec![fam(&f, 4, layer(&f, 4, 2))]
        && c.maximum == 29
        && c.complete
        && orbit.len() == 30
        && got == orbit;
    (ok, format!("{} / {} / {} with {} witnesses (orbit size {})", a.maximum, b.maximum, c.maximum, got.len(), orbit.len()))
}

fn c7() -> (Verdict, bool) {
    let f = gf(2);
    let r = max_s_union_antichain(4, 2, 2, &excluded()).unwrap();
    let mut orbit = BTreeSet::new();
    for w in layer(&f, 4, 2) {
        orbit.insert(build_b(&f, 4, 2, Some(&w)).unwrap());
    }
    let got: BTreeSet<Family> = r.witnesses.iter().cloned().collect();
    let pass = r.maximum == 13 && got == orbit;
    // every 2-union antichain that escapes [V,1] is {0} or a single line
    let mut singles: BTreeSet<Family> = layer(&f, 4, 2).into_iter().map(|l| fam(&f, 4, [l])).collect();
    singles.insert(fam(&f, 4, [Subspace::zero(&f, 4)]));
    let documented = r.maximum == 1 && r.complete && got == singles
        && orbit.iter().all(|b| !s_union(b, 2));
    (
        (pass, format!("maximum {} with {} witnesses, expected 13; B[4,2] is not 2-union", r.maximum, got.len())),
        documented,
    )
}

fn c8() -> Verdict {
    let a = verify_shadow_theorem(3, 2, 2, Mode::Exhaustive).unwrap();
    let b = verify_shade_lemma(4, 1, 2, Mode::Exhaustive).unwrap();
    let c = verify_shade_lemma(4, 3, 2, Mode::Exhaustive).unwrap();
    // nonempty families of lines in F_2^3: 2^7 - 1; equality: 7 singletons and the full layer
    let ok = (a.families_checked, a.counterexample_count, a.equality_cases) == (127, 0, 8)
        && (b.families_checked, b.counterexample_count, b.equality_cases) == (32767, 0, 15)
        && (c.families_checked, c.counterexample_count, c.equality_cases) == (32767, 0, 15);
    (ok, format!("shadow {}/{}/{}; shade k=1 {}/{}/{}; k=3 {}/{}/{}",
        a.families_checked, a.counterexample_count, a.equality_cases,
        b.families_checked, b.counterexample_count, b.equality_cases,
        c.families_checked, c.counterexample_count, c.equality_cases))
}

fn c9() -> Verdict {
    let a = verify_cross_lemma(4, 1, 2, 0, 0).unwrap();
    let b = verify_cross_lemma(3, 1, 2, 0, 0).unwrap();
    let c = verify_cross_lemma(6, 2, 2, 10_000, 7).unwrap();
    let ok = a.extremal_pair_size == 15 - 12 + 1
        && a.bound.to_string() == "4"
        && b.exhaustive_pairs.unwrap_or(0) > 0
        && b.violation_count == 0
        && c.trials == 10_000
        && c.violation_count == 0;
    (ok, format!("extremal {}; {} exhaustive pairs, {} violations; 10000 pairs, {} violations",
        a.extremal_pair_size, b.exhaustive_pairs.unwrap_or(0), b.violation_count, c.violation_count))
}

fn c10() -> Verdict {
    let r = conjecture_scan(4, 2, 1, 1).unwrap();
    let cert = &r.certificate;
    let honest = cert.witnesses.iter().all(|w| w.len() == cert.maximum && s_union(w, 3) && antichain(w));
    let ok = cert.complete && cert.witnesses_verified && honest && !cert.witnesses.is_empty();
    (ok, format!("maximum {} (bound {}), {} B[4,3] witnesses, {} others: {}",
        r.maximum, r.conjectured_bound, r.b_witnesses, r.other_witnesses, r.verdict))
}

fn random_union(f: &Arc<Field>, n: usize, s: usize, rng: &mut ChaCha8Rng) -> Family {
    let mut pool: Vec<Subspace> = (0..=s).flat_map(|k| layer(f, n, k)).collect();
    pool.shuffle(rng);
    let keep = rng.gen_range(1..=pool.len());
    let mut chosen: Vec<Subspace> = Vec::new();
    for x in pool.into_iter().take(keep) {
        if chosen.iter().all(|c| c.span_dim(&x).unwrap() <= s) && x.dim() <= s {
            chosen.push(x);
        }
    }
    fam(f, n, chosen)
}

fn c11() -> Verdict {
    let mut checked = 0;
    for q in [2u32, 3] {
        let f = gf(q);
        for n in 2..=4usize {
            let t = pascal(n, q as u128);
            for s in 1..n {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 * q as u64 + 10 * n as u64 + s as u64);
                for _ in 0..200 {
                    let x = random_union(&f, n, s, &mut rng);
                    let d = fam(&f, n, x.iter().map(|m| m.orth_complement()));
                    let dd = fam(&f, n, d.iter().map(|m| m.orth_complement()));
                    let count = |i: usize| x.iter().filter(|m| m.dim() == i).count() as u128;
                    let layers = (0..=s / 2).all(|i| count(i) + count(s + 1 - i) <= t[n][i]);
                    if !s_union(&x, s) || !t_intersecting(&d, n - s) || dd != x || !layers {
                        return (false, format!("n={n} s={s} q={q}: {:?}", x.members()));
                    }
                    checked += 1;
                }
            }
        }
    }
    (checked == 2400, format!("{checked} families"))
}

fn main() -> ExitCode {
    let mut unexpected = 0;
    let mut line = |id: u32, limit: u64, run: &dyn Fn() -> (Verdict, bool)| {
        let start = Instant::now();
        let ((pass, detail), documented) = run();
        let took = start.elapsed();
        let in_time = took < Duration::from_secs(limit);
        let pass = pass && in_time;
        let status = if pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2}: {status}  [{:.3}s / {limit}s]  {detail}", took.as_secs_f64());
        let as_expected = if id == 7 { !pass && documented && in_time } else { pass };
        if !as_expected {
            unexpected += 1;
            println!("criterion {id:>2}: outcome differs from the recorded expectation");
        }
    };
    let plain = |c: fn() -> Verdict| move || (c(), true);
    line(1, 1, &plain(c1));
    line(2, 30, &plain(c2));
    line(3, 60, &plain(c3));
    line(4, 300, &plain(c4));
    line(5, 300, &plain(c5));
    line(6, 600, &plain(c6));
    line(7, 60, &c7);
    line(8, 120, &plain(c8));
    line(9, 300, &plain(c9));
    line(10, 600, &plain(c10));
    line(11, 60, &plain(c11));
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
