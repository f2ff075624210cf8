//! Exact Gaussian binomial arithmetic and the closed-form counts built on it.

mod bounds;
pub mod expr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use bounds::*;

pub type BigNat = BigUint;

/// `[m, k]_q` by the product `Π_{0≤i<k} (q^{m−i} − 1) / (q^{k−i} − 1)`.
/// Zero when `m < k`.
pub fn gaussian_binomial(m: i64, k: i64, q: u32) -> Result<BigNat> {
    if m < 0 || k < 0 {
        return Err(Error::NegativeArgument);
    }
    Ok(gauss(m as u64, k as u64, q))
}

pub(crate) fn gauss(m: u64, k: u64, q: u32) -> BigNat {
    if k > m {
        return BigNat::zero();
    }
    let k = k.min(m - k);
    let qb = BigNat::from(q);
    let mut acc = BigNat::one();
    // after step i, acc = [m, i+1]
    for i in 0..k {
        let num = num_traits::pow(qb.clone(), (m - i) as usize) - 1u32;
        let den = num_traits::pow(qb.clone(), (i + 1) as usize) - 1u32;
        acc = acc * num / den;
    }
    acc
}

/// Signed convenience wrapper: zero for a negative top or bottom entry.
pub(crate) fn gauss_i(m: i64, k: i64, q: u32) -> BigInt {
    if m < 0 || k < 0 {
        return BigInt::zero();
    }
    BigInt::from(gauss(m as u64, k as u64, q))
}

pub(crate) fn pow_i(q: u32, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// `[m, k]_q` with real `m`, from the same product.
pub fn gaussian_binomial_real(m: f64, k: u32, q: u32) -> f64 {
    let qf = q as f64;
    (0..k)
        .map(|i| (qf.powf(m - i as f64) - 1.0) / (qf.powf((k - i) as f64) - 1.0))
        .product()
}

/// The unique real `m ≥ k` with `[m, k]_q = size`, by bisection on the
/// increasing product.
pub fn solve_gaussian_m(size: &BigNat, k: u32, q: u32) -> Result<f64> {
    if size.is_zero() {
        return Err(Error::SizeZero);
    }
    if size.is_one() {
        return Ok(k as f64);
    }
    if k == 0 {
        return Err(Error::BadParameters(
            "[m, 0] is identically 1; no m attains a larger size".into(),
        ));
    }
    let target = size.to_f64().unwrap_or(f64::INFINITY);
    let lo0 = k as f64;
    let mut hi = lo0 + 1.0;
    while gaussian_binomial_real(hi, k, q) < target {
        hi = lo0 + 2.0 * (hi - lo0);
        if !hi.is_finite() {
            return Err(Error::BadParameters("size too large to invert".into()));
        }
    }
    let mut lo = lo0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gaussian_binomial_real(mid, k, q) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // snap to an integer root when it is one
    let r = hi.round();
    if r >= lo0 && gauss(r as u64, k as u64, q) == *size {
        return Ok(r);
    }
    Ok(0.5 * (lo + hi))
}

/// Number of `l`-spaces meeting a fixed `m`-space trivially: `q^{lm} [n−m, l]`.
pub fn disjoint_count(n: u32, m: u32, l: u32, q: u32) -> Result<BigNat> {
    check_disjoint_params(n, m, l)?;
    Ok(num_traits::pow(BigNat::from(q), (l * m) as usize) * gauss((n - m) as u64, l as u64, q))
}

/// The same count by q-inclusion–exclusion:
/// `Σ_t (−1)^t q^{t(t−1)/2} [m,t] [n−t, l−t]`.
pub fn disjoint_count_inclusion_exclusion(n: u32, m: u32, l: u32, q: u32) -> Result<BigNat> {
    check_disjoint_params(n, m, l)?;
    let mut acc = BigInt::zero();
    for t in 0..=m.min(l) {
        let term = pow_i(q, (t as u64) * (t as u64).saturating_sub(1) / 2)
            * gauss_i(m as i64, t as i64, q)
            * gauss_i((n - t) as i64, (l - t) as i64, q);
        if t % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint()
        .ok_or_else(|| Error::BadParameters("negative inclusion-exclusion total".into()))
}

/// Lower estimate `[n,l] − [m,1][n−1,l−1]`; may be negative for tiny `n`.
pub fn disjoint_count_lower_bound(n: u32, m: u32, l: u32, q: u32) -> Result<BigInt> {
    check_disjoint_params(n, m, l)?;
    Ok(gauss_i(n as i64, l as i64, q)
        - gauss_i(m as i64, 1, q) * gauss_i(n as i64 - 1, l as i64 - 1, q))
}

fn check_disjoint_params(n: u32, m: u32, l: u32) -> Result<()> {
    if l == 0 {
        return Err(Error::BadParameters("l must be at least 1".into()));
    }
    if m + l > n {
        return Err(Error::DimensionOverflow {
            sum: (m + l) as usize,
            n: n as usize,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: i64, k: i64, q: u32) -> u64 {
        gaussian_binomial(m, k, q).unwrap().to_u64().unwrap()
    }

    #[test]
    fn product_formula_examples() {
        assert_eq!(g(4, 2, 2), 35);
        assert_eq!(g(5, 2, 2), 155);
        assert_eq!(g(7, 0, 3), 1);
        assert_eq!(g(2, 3, 2), 0);
        assert_eq!(g(6, 3, 2), 1395);
        assert_eq!(g(6, 2, 3), 11011);
        assert_eq!(gaussian_binomial(-1, 0, 2), Err(Error::NegativeArgument));
        assert_eq!(gaussian_binomial(3, -1, 2), Err(Error::NegativeArgument));
    }

    #[test]
    fn pascal_and_symmetry() {
        for q in 2..=5u32 {
            for a in 1..=12i64 {
                for k in 0..=a {
                    assert_eq!(
                        gaussian_binomial(a, k, q).unwrap(),
                        gaussian_binomial(a, a - k, q).unwrap()
                    );
                    if k >= 1 && k < a {
                        let rhs = num_traits::pow(BigNat::from(q), (a - k) as usize)
                            * gaussian_binomial(a - 1, k - 1, q).unwrap()
                            + gaussian_binomial(a - 1, k, q).unwrap();
                        assert_eq!(gaussian_binomial(a, k, q).unwrap(), rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn real_matches_exact() {
        assert!((gaussian_binomial_real(4.0, 2, 2) - 35.0).abs() < 1e-9);
        for q in [2, 3, 4, 5] {
            for k in 0..=6u32 {
                assert!((gaussian_binomial_real(k as f64, k, q) - 1.0).abs() < 1e-12);
                for m in k..=10 {
                    let exact = gauss(m as u64, k as u64, q).to_f64().unwrap();
                    let real = gaussian_binomial_real(m as f64, k, q);
                    assert!((real - exact).abs() <= 1e-9 * exact, "{m} {k} {q}");
                    if exact < 1e15 {
                        assert_eq!(real.round(), exact);
                    }
                }
            }
        }
    }

    #[test]
    fn real_strictly_increasing_above_k() {
        for q in [2, 3, 5] {
            for k in 1..=4u32 {
                let vals: Vec<f64> = (0..=6)
                    .map(|i| gaussian_binomial_real(k as f64 + 0.5 * i as f64, k, q))
                    .collect();
                assert!(vals.windows(2).all(|w| w[0] < w[1]), "{vals:?}");
            }
        }
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_gaussian_m(&BigNat::from(1u32), 3, 2).unwrap(), 3.0);
        assert_eq!(solve_gaussian_m(&BigNat::from(35u32), 2, 2).unwrap(), 4.0);
        let m = solve_gaussian_m(&BigNat::from(5u32), 2, 2).unwrap();
        // [2,2]_2 = 1 < 5 < 7 = [3,2]_2
        assert!(m > 2.0 && m < 3.0);
        assert!((gaussian_binomial_real(m, 2, 2) - 5.0).abs() < 1e-9);
        assert_eq!(solve_gaussian_m(&BigNat::zero(), 2, 2), Err(Error::SizeZero));
    }

    #[test]
    fn solve_round_trips() {
        for q in [2, 3, 4] {
            for k in 1..=4u32 {
                for size in 1..400u32 {
                    let m = solve_gaussian_m(&BigNat::from(size), k, q).unwrap();
                    let back = gaussian_binomial_real(m, k, q);
                    assert!((back - size as f64).abs() <= 1e-9 * size as f64, "{size} {k} {q}");
                }
            }
        }
    }

    #[test]
    fn disjoint_count_examples() {
        assert_eq!(disjoint_count(4, 2, 2, 2).unwrap(), BigNat::from(16u32));
        assert_eq!(
            disjoint_count_inclusion_exclusion(4, 2, 2, 2).unwrap(),
            BigNat::from(16u32)
        );
        assert_eq!(disjoint_count_lower_bound(4, 2, 2, 2).unwrap(), BigInt::from(14));
        assert_eq!(disjoint_count(5, 0, 2, 3).unwrap(), gauss(5, 2, 3));
        assert_eq!(
            disjoint_count(4, 3, 2, 2),
            Err(Error::DimensionOverflow { sum: 5, n: 4 })
        );
        assert!(disjoint_count(4, 1, 0, 2).is_err());
    }

    #[test]
    fn disjoint_closed_form_matches_inclusion_exclusion() {
        for q in [2, 3] {
            for n in 1..=8 {
                for m in 0..=n {
                    for l in 1..=n - m {
                        let a = disjoint_count(n, m, l, q).unwrap();
                        let b = disjoint_count_inclusion_exclusion(n, m, l, q).unwrap();
                        assert_eq!(a, b, "n={n} m={m} l={l} q={q}");
                        let lb = disjoint_count_lower_bound(n, m, l, q).unwrap();
                        assert!(BigInt::from(a) >= lb);
                    }
                }
            }
        }
    }
}
