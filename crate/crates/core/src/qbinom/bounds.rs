//! Closed-form extremal bounds as exact integers.
//!
//! Each report carries the formula as text together with its parameter
//! bindings; [`BoundReport::recompute`] evaluates that text with the
//! independent evaluator in [`super::expr`].

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use super::expr::{evaluate, ExprError};
use super::{gauss_i, pow_i, BigNat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub theorem: &'static str,
    pub params: BTreeMap<&'static str, i64>,
    #[serde(serialize_with = "decimal")]
    pub value: BigNat,
    /// Whether the stated side conditions (including any equality or
    /// uniqueness clause) hold at these parameters.
    pub hypothesis_ok: bool,
    pub conjectural: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<&'static str>,
    pub formula: &'static str,
}

fn decimal<S: serde::Serializer>(v: &BigNat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl BoundReport {
    /// Re-evaluates `formula` under `params`.
    pub fn recompute(&self) -> std::result::Result<BigInt, ExprError> {
        let env: HashMap<String, i64> = self
            .params
            .iter()
            .map(|(k, &v)| (k.to_string(), v))
            .collect();
        evaluate(self.formula, &env)
    }
}

struct Draft {
    theorem: &'static str,
    params: Vec<(&'static str, i64)>,
    formula: &'static str,
    hypothesis_ok: bool,
    conjectural: bool,
    branch: Option<&'static str>,
}

impl Draft {
    fn new(theorem: &'static str, formula: &'static str, params: &[(&'static str, u32)]) -> Self {
        Draft {
            theorem,
            params: params.iter().map(|&(k, v)| (k, v as i64)).collect(),
            formula,
            hypothesis_ok: true,
            conjectural: false,
            branch: None,
        }
    }

    fn finish(self, value: BigInt) -> Result<BoundReport> {
        let value = value.to_biguint().ok_or_else(|| {
            Error::BadParameters(format!("bound {} evaluates negative", self.theorem))
        })?;
        Ok(BoundReport {
            theorem: self.theorem,
            params: self.params.into_iter().collect(),
            value,
            hypothesis_ok: self.hypothesis_ok,
            conjectural: self.conjectural,
            branch: self.branch,
            formula: self.formula,
        })
    }
}

fn g(m: u32, k: u32, q: u32) -> BigInt {
    gauss_i(m as i64, k as i64, q)
}

fn gs(m: i64, k: i64, q: u32) -> BigInt {
    gauss_i(m, k, q)
}

fn check_union_range(n: u32, s: u32) -> Result<()> {
    if s < 2 || s >= n {
        return Err(Error::BadParameters(format!("need 2 <= s < n, got s={s} n={n}")));
    }
    Ok(())
}

fn layers_up_to(n: u32, d: u32, q: u32) -> BigInt {
    (0..=d).map(|i| g(n, i, q)).sum()
}

/// Largest s-union family: `Σ_{i≤d}[n,i]` for `s = 2d`, plus `[n−1,d]` for `s = 2d+1`.
/// `hypothesis_ok` records `s ≤ n − 2`, where the optimum is unique.
pub fn optimal_union_bound(n: u32, s: u32, q: u32) -> Result<BoundReport> {
    check_union_range(n, s)?;
    let d = s / 2;
    let mut draft = if s % 2 == 0 {
        Draft::new("1.2", "sum(i=0..d, [n,i])", &[("n", n), ("q", q), ("s", s), ("d", d)])
    } else {
        Draft::new(
            "1.2",
            "sum(i=0..d, [n,i]) + [n-1,d]",
            &[("n", n), ("q", q), ("s", s), ("d", d)],
        )
    };
    draft.hypothesis_ok = s + 2 <= n;
    let mut value = layers_up_to(n, d, q);
    if s % 2 == 1 {
        value += g(n - 1, d, q);
    }
    draft.finish(value)
}

/// Largest s-union family not contained in an optimal one.
pub fn suboptimal_union_bound(n: u32, s: u32, q: u32) -> Result<BoundReport> {
    check_union_range(n, s)?;
    let d = s / 2;
    let params = [("n", n), ("q", q), ("s", s), ("d", d)];
    let (n_, d_) = (n as i64, d as i64);
    let twist = pow_i(q, (d * (d + 1)) as u64);
    if s % 2 == 0 {
        let draft = Draft::new(
            "1.3",
            "sum(i=0..d, [n,i]) - q^(d*(d+1))*[n-d-1,d] + 1",
            &params,
        );
        let value = layers_up_to(n, d, q) - twist * gs(n_ - d_ - 1, d_, q) + 1;
        draft.finish(value)
    } else {
        let mut draft = Draft::new(
            "1.3",
            "sum(i=0..d, [n,i]) + [n-1,d] - q^(d*(d+1))*[n-d-2,d] + q^(d+1)",
            &params,
        );
        draft.hypothesis_ok = (q >= 3 && n >= 2 * d + 3) || (q == 2 && n >= 2 * d + 4);
        let value = layers_up_to(n, d, q) + g(n - 1, d, q) - twist * gs(n_ - d_ - 2, d_, q)
            + pow_i(q, (d + 1) as u64);
        draft.finish(value)
    }
}

/// Largest s-union antichain: `[n, ⌊s/2⌋]` (for `s = n` this is Sperner's bound).
pub fn antichain_bound(n: u32, s: u32, q: u32) -> Result<BoundReport> {
    if s < 2 || s > n {
        return Err(Error::BadParameters(format!("need 2 <= s <= n, got s={s} n={n}")));
    }
    let f = s / 2;
    let theorem = if s < n { "1.4" } else { "1.5" };
    let draft = Draft::new(theorem, "[n,f]", &[("n", n), ("q", q), ("s", s), ("f", f)]);
    draft.finish(g(n, f, q))
}

/// Largest s-union antichain not contained in an optimal one. The case
/// `s = 2d + 1 < n` is conjectural and flagged as such.
pub fn suboptimal_antichain_bound(n: u32, s: u32, q: u32) -> Result<BoundReport> {
    if s < 2 || s > n {
        return Err(Error::BadParameters(format!("need 2 <= s <= n, got s={s} n={n}")));
    }
    let d = s / 2;
    if s == n {
        let draft = Draft::new(
            "1.5",
            "[n,f] - q*[f,1]",
            &[("n", n), ("q", q), ("s", s), ("f", d)],
        );
        return draft.finish(g(n, d, q) - BigInt::from(q) * g(d, 1, q));
    }
    let params = [("n", n), ("q", q), ("s", s), ("d", d)];
    if s % 2 == 0 {
        if d == 1 {
            Draft::new("1.6", "[n,1] - q", &params).finish(g(n, 1, q) - q)
        } else {
            Draft::new("1.6", "[n,d] - q*[n-d,1]", &params)
                .finish(g(n, d, q) - BigInt::from(q) * g(n - d, 1, q))
        }
    } else {
        let mut draft = Draft::new("conj5.1", "[n,d] - q*[d,1]", &params);
        draft.conjectural = true;
        draft.finish(g(n, d, q) - BigInt::from(q) * g(d, 1, q))
    }
}

/// Largest t-intersecting family of k-spaces.
pub fn ekr_bound(n: u32, k: u32, t: u32, q: u32) -> Result<BoundReport> {
    if t < 1 || t > k {
        return Err(Error::BadParameters(format!("need 1 <= t <= k, got t={t} k={k}")));
    }
    if n + t <= 2 * k {
        return Err(Error::BadParameters(format!(
            "need n > 2k - t, got n={n} k={k} t={t}"
        )));
    }
    let params = [("n", n), ("q", q), ("k", k), ("t", t)];
    if n >= 2 * k {
        let mut d = Draft::new("2.1", "[n-t,k-t]", &params);
        d.branch = Some("n>=2k");
        d.finish(g(n - t, k - t, q))
    } else {
        let mut d = Draft::new("2.1", "[2*k-t,k]", &params);
        d.branch = Some("2k-t<n<=2k");
        d.finish(g(2 * k - t, k, q))
    }
}

/// Largest intersecting family of k-spaces with trivial common intersection.
pub fn hm_bound(n: u32, k: u32, q: u32) -> Result<BoundReport> {
    let ok = k >= 2 && ((q >= 3 && n >= 2 * k + 1) || (q == 2 && n >= 2 * k + 2));
    if !ok {
        return Err(Error::HypothesisViolated(format!(
            "need k >= 2 and (q >= 3, n >= 2k+1) or (q = 2, n >= 2k+2); got n={n} k={k} q={q}"
        )));
    }
    let draft = Draft::new(
        "2.2",
        "[n-1,k-1] - q^(k*(k-1))*[n-k-1,k-1] + q^k",
        &[("n", n), ("q", q), ("k", k)],
    );
    let value = g(n - 1, k - 1, q) - pow_i(q, (k * (k - 1)) as u64) * g(n - k - 1, k - 1, q)
        + pow_i(q, k as u64);
    draft.finish(value)
}

/// `|A| + |B|` for cross-t-intersecting `A ⊆ [V,a]`, `B ⊆ [V,b]`.
pub fn cross_t_bound(n: u32, a: u32, b: u32, t: u32, q: u32) -> Result<BoundReport> {
    let ok = n >= 4
        && a >= 2
        && b >= 2
        && t >= 1
        && t < a.min(b)
        && a + b < n + t
        && g(n, a, q) <= g(n, b, q);
    if !ok {
        return Err(Error::HypothesisViolated(format!(
            "need n >= 4, a,b >= 2, 1 <= t < min(a,b), a+b < n+t, [n,a] <= [n,b]; \
             got n={n} a={a} b={b} t={t}"
        )));
    }
    let draft = Draft::new(
        "2.6",
        "[n,b] - sum(i=0..t-1, q^((a-i)*(b-i))*[a,i]*[n-a,b-i]) + 1",
        &[("n", n), ("q", q), ("a", a), ("b", b), ("t", t)],
    );
    let excluded: BigInt = (0..t)
        .map(|i| pow_i(q, ((a - i) * (b - i)) as u64) * g(a, i, q) * g(n - a, b - i, q))
        .sum();
    draft.finish(g(n, b, q) - excluded + 1)
}

/// `|A| + |B|` for cross-Sperner `A ⊆ [V,a]`, `B ⊆ [V,b]`, `a < b`.
pub fn cross_sperner_bound(n: u32, a: u32, b: u32, q: u32) -> Result<BoundReport> {
    if !(0 < a && a < b && b < n) {
        return Err(Error::BadParameters(format!(
            "need 0 < a < b < n, got a={a} b={b} n={n}"
        )));
    }
    let mut draft = Draft::new(
        "2.5",
        "max([n,b] - [n-a,b-a] + 1, [n,a] - [b,a] + 1)",
        &[("n", n), ("q", q), ("a", a), ("b", b)],
    );
    let first: BigInt = g(n, b, q) - g(n - a, b - a, q) + 1;
    let second: BigInt = g(n, a, q) - g(b, a, q) + 1;
    draft.branch = Some(match first.cmp(&second) {
        std::cmp::Ordering::Greater => "single-a",
        std::cmp::Ordering::Less => "single-b",
        std::cmp::Ordering::Equal => "both",
    });
    draft.finish(first.max(second))
}

/// `|A| + |B|` for cross-intersecting `A ⊆ [V,k]`, `B ⊆ [V,k+1]` with `B`
/// 2-intersecting. `hypothesis_ok` records `n ≥ 2k + 2`, where the extremal
/// pair is unique.
pub fn cross_sharp_bound(n: u32, k: u32, q: u32) -> Result<BoundReport> {
    if k < 1 || n < 2 * k + 1 {
        return Err(Error::BadParameters(format!(
            "need k >= 1 and n >= 2k + 1, got n={n} k={k}"
        )));
    }
    let mut draft = Draft::new(
        "2.7",
        "[n,k] - q^(k*(k+1))*[n-k-1,k] + 1",
        &[("n", n), ("q", q), ("k", k)],
    );
    draft.hypothesis_ok = n >= 2 * k + 2;
    let value = g(n, k, q) - pow_i(q, (k * (k + 1)) as u64) * g(n - k - 1, k, q) + 1;
    draft.finish(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(r: Result<BoundReport>) -> u64 {
        r.unwrap().value.try_into().unwrap()
    }

    #[test]
    fn optimal_union_values() {
        assert_eq!(v(optimal_union_bound(3, 2, 2)), 8);
        assert_eq!(v(optimal_union_bound(6, 3, 2)), 95);
        assert_eq!(v(optimal_union_bound(4, 2, 2)), 16);
        assert_eq!(v(optimal_union_bound(4, 3, 2)), 23);
        assert!(!optimal_union_bound(4, 3, 2).unwrap().hypothesis_ok);
        assert!(optimal_union_bound(4, 4, 2).is_err());
        assert!(optimal_union_bound(4, 1, 2).is_err());
    }

    #[test]
    fn suboptimal_union_values() {
        assert_eq!(v(suboptimal_union_bound(4, 2, 2)), 5);
        assert_eq!(v(suboptimal_union_bound(6, 3, 2)), 71);
        assert_eq!(v(suboptimal_union_bound(6, 4, 2)), 268);
        assert!(suboptimal_union_bound(6, 3, 2).unwrap().hypothesis_ok);
        assert!(!suboptimal_union_bound(5, 3, 2).unwrap().hypothesis_ok);
        assert!(suboptimal_union_bound(5, 3, 3).unwrap().hypothesis_ok);
        assert!(!suboptimal_union_bound(4, 3, 3).unwrap().hypothesis_ok);
    }

    #[test]
    fn antichain_values() {
        assert_eq!(v(antichain_bound(4, 4, 2)), 35);
        assert_eq!(v(antichain_bound(3, 2, 2)), 7);
        assert_eq!(v(antichain_bound(5, 5, 2)), 155);
        assert!(antichain_bound(3, 4, 2).is_err());
        assert_eq!(v(suboptimal_antichain_bound(4, 4, 2)), 29);
        assert_eq!(v(suboptimal_antichain_bound(3, 2, 2)), 5);
        assert_eq!(v(suboptimal_antichain_bound(5, 4, 2)), 141);
        let conj = suboptimal_antichain_bound(4, 3, 2).unwrap();
        assert!(conj.conjectural);
        assert_eq!(conj.theorem, "conj5.1");
        assert_eq!(u64::try_from(conj.value).unwrap(), 13);
    }

    #[test]
    fn ekr_values() {
        assert_eq!(v(ekr_bound(4, 2, 1, 2)), 7);
        assert_eq!(v(ekr_bound(5, 2, 1, 2)), 15);
        let r = ekr_bound(5, 3, 2, 2).unwrap();
        assert_eq!(r.branch, Some("2k-t<n<=2k"));
        assert_eq!(u64::try_from(r.value).unwrap(), 15);
        // n = 2k − t lies outside both branches
        assert!(ekr_bound(4, 3, 2, 2).is_err());
        assert!(ekr_bound(5, 2, 3, 2).is_err());
    }

    #[test]
    fn hm_values() {
        assert_eq!(v(hm_bound(6, 2, 2)), 7);
        assert_eq!(v(hm_bound(7, 2, 2)), 7);
        // [6,2]_3 − 3^6 [3,2]_3 + 27 = 11011 − 9477 + 27
        assert_eq!(v(hm_bound(7, 3, 3)), 1561);
        assert!(matches!(hm_bound(5, 2, 2), Err(Error::HypothesisViolated(_))));
        assert!(matches!(hm_bound(6, 1, 3), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn cross_values() {
        // 1395 − 2^6 [4,3]_2 + 1
        assert_eq!(v(cross_t_bound(6, 2, 3, 1, 2)), 436);
        // 155 − 2^4 [3,2]_2 + 1
        assert_eq!(v(cross_t_bound(5, 2, 2, 1, 2)), 44);
        assert!(matches!(
            cross_t_bound(6, 3, 2, 1, 2),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(cross_t_bound(4, 2, 2, 2, 2).is_err());

        let r = cross_sperner_bound(5, 2, 3, 2).unwrap();
        assert_eq!(u64::try_from(r.value).unwrap(), 149);
        assert_eq!(r.branch, Some("both"));
        assert_eq!(v(cross_sperner_bound(4, 1, 3, 2)), 9);
        assert!(cross_sperner_bound(4, 2, 2, 2).is_err());

        assert_eq!(v(cross_sharp_bound(4, 1, 2)), 4);
        assert_eq!(v(cross_sharp_bound(5, 2, 2)), 92);
        assert!(!cross_sharp_bound(5, 2, 2).unwrap().hypothesis_ok);
        assert!(cross_sharp_bound(4, 2, 2).is_err());
    }

    /// Every report's formula text, evaluated independently, reproduces its value.
    #[test]
    fn formula_text_reproduces_every_value() {
        let mut checked = 0;
        for q in [2u32, 3, 4, 5] {
            for n in 2..=10u32 {
                let mut reports = Vec::new();
                for s in 2..=n {
                    reports.extend(optimal_union_bound(n, s, q).ok());
                    reports.extend(suboptimal_union_bound(n, s, q).ok());
                    reports.extend(antichain_bound(n, s, q).ok());
                    reports.extend(suboptimal_antichain_bound(n, s, q).ok());
                }
                for k in 1..n {
                    reports.extend(hm_bound(n, k, q).ok());
                    reports.extend(cross_sharp_bound(n, k, q).ok());
                    for t in 1..=k {
                        reports.extend(ekr_bound(n, k, t, q).ok());
                    }
                    for b in 1..n {
                        reports.extend(cross_sperner_bound(n, k, b, q).ok());
                        for t in 1..n {
                            reports.extend(cross_t_bound(n, k, b, t, q).ok());
                        }
                    }
                }
                for r in reports {
                    assert_eq!(
                        r.recompute().unwrap(),
                        BigInt::from(r.value.clone()),
                        "{} {:?}",
                        r.theorem,
                        r.params
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 1000);
    }
}
