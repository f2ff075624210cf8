//! Table-driven arithmetic in GF(q) for prime powers q ≤ 256, and
//! reduced row echelon form over it.
//!
//! Elements are encoded as integers `0..q`. For `q = p^e` with `e > 1` an
//! element is the polynomial `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` packed as
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` (little-endian base `p`), reduced
//! modulo the Conway polynomial for `(p, e)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 256;

/// Conway polynomials for every prime power `p^e ≤ 256` with `e ≥ 2`.
/// Coefficients are listed from the constant term up, monic term omitted.
const CONWAY: &[(u32, u32, &[u8])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 1, 1, 0]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0]),
    (3, 2, &[2, 2]),
    (3, 3, &[1, 2, 0]),
    (3, 4, &[2, 0, 0, 2]),
    (3, 5, &[1, 2, 0, 0, 0]),
    (5, 2, &[2, 4]),
    (5, 3, &[3, 3, 0]),
    (7, 2, &[3, 6]),
    (11, 2, &[2, 7]),
    (13, 2, &[2, 12]),
];

fn conway(p: u32, e: u32) -> Option<&'static [u8]> {
    CONWAY
        .iter()
        .find(|&&(cp, ce, _)| cp == p && ce == e)
        .map(|&(_, _, c)| c)
}

/// Splits `q` into `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// The finite field GF(q).
///
/// Immutable once built; share it behind an [`Arc`] (see [`Field::shared`]).
#[derive(Clone)]
pub struct Field {
    q: u32,
    p: u32,
    e: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        if q > MAX_ORDER {
            return Err(Error::NotPrimePower(q));
        }
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let qs = q as usize;
        let digits = |mut c: u32| -> Vec<u32> {
            (0..e)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect()
        };
        let pack = |ds: &[u32]| -> u32 { ds.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let mut add = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = pack(&s) as u8;
            }
        }

        let modulus = if e > 1 { conway(p, e) } else { None };
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                // schoolbook product, then reduce x^k for k >= e using x^e = -(c_0 + ... )
                let mut prod = vec![0u32; (2 * e - 1) as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                if let Some(m) = modulus {
                    for k in (e as usize..prod.len()).rev() {
                        let c = prod[k];
                        if c == 0 {
                            continue;
                        }
                        prod[k] = 0;
                        for (i, &mi) in m.iter().enumerate() {
                            let idx = k - e as usize + i;
                            prod[idx] = (prod[idx] + (p - c) * mi as u32) % p;
                        }
                    }
                }
                mul[(a * q + b) as usize] = pack(&prod[..e as usize]) as u8;
            }
        }

        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap_or(0) as u8;
            if a > 0 {
                inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap_or(0) as u8;
            }
        }

        Ok(Field {
            q,
            p,
            e,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn shared(q: u32) -> Result<Arc<Self>> {
        Self::new(q).map(Arc::new)
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        (0..self.q).map(|c| c as u8)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// Dense row-major matrix of element codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl DoubleEndedIterator<Item = &[u8]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    fn check_entries(&self, field: &Field) -> Result<()> {
        match self.entries.iter().find(|&&x| x as u32 >= field.order()) {
            Some(&x) => Err(Error::EntryOutOfRange {
                entry: x as u32,
                q: field.order(),
            }),
            None => Ok(()),
        }
    }
}

/// Reduced row echelon form with zero rows dropped, together with the rank.
pub fn rref(field: &Field, m: &Matrix) -> Result<(Matrix, usize)> {
    m.check_entries(field)?;
    let mut work = m.clone();
    let pivots = rref_in_place(field, &mut work.entries, work.rows, work.cols);
    let rank = pivots.len();
    work.entries.truncate(rank * work.cols);
    work.rows = rank;
    Ok((work, rank))
}

/// Gauss–Jordan elimination on a row-major buffer. Returns pivot columns;
/// the first `pivots.len()` rows hold the reduced basis, the rest are zero.
pub(crate) fn rref_in_place(field: &Field, a: &mut [u8], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(a[r * cols + c]).expect("nonzero pivot");
        if inv != 1 {
            for j in c..cols {
                a[r * cols + j] = field.mul(a[r * cols + j], inv);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c];
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                let t = field.mul(factor, a[r * cols + j]);
                a[i * cols + j] = field.sub(a[i * cols + j], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank without producing the reduced matrix.
pub(crate) fn rank_of_rows(field: &Field, buf: &mut [u8], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| buf[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                buf.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(buf[r * cols + c]).expect("nonzero pivot");
        for i in r + 1..rows {
            let factor = field.mul(buf[i * cols + c], inv);
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                let t = field.mul(factor, buf[r * cols + j]);
                buf[i * cols + j] = field.sub(buf[i * cols + j], t);
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(cols: usize, rows: &[&[u8]]) -> Matrix {
        Matrix::from_rows(cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn gf2_characteristic() {
        let f = Field::new(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.characteristic(), 2);
    }

    #[test]
    fn gf4_generator_squares_to_g_plus_one() {
        let f = Field::new(4).unwrap();
        // x * x = x^2 = x + 1 mod x^2 + x + 1; x is code 2, x + 1 is code 3
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.add(2, 1), 3);
    }

    #[test]
    fn non_prime_powers_rejected() {
        for q in [0, 1, 6, 10, 12, 100, 257, 512] {
            assert!(matches!(Field::new(q), Err(Error::NotPrimePower(_))), "q={q}");
        }
    }

    #[test]
    fn all_prime_powers_up_to_256_build() {
        let count = (2..=256).filter(|&q| prime_power(q).is_some()).count();
        let built = (2..=256).filter(|&q| Field::new(q).is_ok()).count();
        assert_eq!(count, built);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::new(q).unwrap();
            let el: Vec<u8> = f.elements().collect();
            for &a in &el {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
                }
                for &b in &el {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &el {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn every_nonzero_element_invertible_up_to_256() {
        for q in (2..=256).filter(|&q| prime_power(q).is_some()) {
            let f = Field::new(q).unwrap();
            for a in 1..q {
                let inv = f.inv(a as u8).unwrap();
                assert_eq!(f.mul(a as u8, inv), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn conway_root_is_primitive() {
        for &(p, e, _) in CONWAY {
            let q = p.pow(e);
            let f = Field::new(q).unwrap();
            let x = p as u8;
            let mut acc = 1u8;
            let mut order = 0;
            loop {
                acc = f.mul(acc, x);
                order += 1;
                if acc == 1 {
                    break;
                }
            }
            assert_eq!(order, q - 1, "GF({q})");
        }
    }

    #[test]
    fn rref_gf2_example() {
        let f = Field::new(2).unwrap();
        let (r, rank) = rref(&f, &mat(3, &[&[1, 1, 0], &[0, 1, 1]])).unwrap();
        assert_eq!(rank, 2);
        assert_eq!(r, mat(3, &[&[1, 0, 1], &[0, 1, 1]]));
    }

    #[test]
    fn rref_single_reduced_row() {
        let f = Field::new(3).unwrap();
        let (r, rank) = rref(&f, &mat(3, &[&[1, 2, 0]])).unwrap();
        assert_eq!(rank, 1);
        assert_eq!(r, mat(3, &[&[1, 2, 0]]));
    }

    #[test]
    fn rref_zero_matrix() {
        let f = Field::new(5).unwrap();
        let (r, rank) = rref(&f, &Matrix::zeros(3, 4)).unwrap();
        assert_eq!(rank, 0);
        assert_eq!(r.rows(), 0);
    }

    #[test]
    fn rref_rejects_bad_entries() {
        let f = Field::new(3).unwrap();
        assert!(matches!(
            rref(&f, &mat(2, &[&[1, 3]])),
            Err(Error::EntryOutOfRange { entry: 3, q: 3 })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field_and_matrix() -> impl Strategy<Value = (u32, usize, usize, Vec<u8>)> {
            (prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9]), 0usize..5, 1usize..6)
                .prop_flat_map(|(q, r, c)| {
                    (
                        Just(q),
                        Just(r),
                        Just(c),
                        prop::collection::vec(0u8..q as u8, r * c),
                    )
                })
        }

        proptest! {
            #[test]
            fn rref_idempotent((q, r, c, e) in field_and_matrix()) {
                let f = Field::new(q).unwrap();
                let m = Matrix::new(r, c, e).unwrap();
                let (once, rank) = rref(&f, &m).unwrap();
                let (twice, rank2) = rref(&f, &once).unwrap();
                prop_assert_eq!(&once, &twice);
                prop_assert_eq!(rank, rank2);
                prop_assert_eq!(rank, once.rows());
            }

            #[test]
            fn rank_invariant_under_row_reversal((q, r, c, e) in field_and_matrix()) {
                let f = Field::new(q).unwrap();
                let m = Matrix::new(r, c, e.clone()).unwrap();
                let rows: Vec<Vec<u8>> = m.row_iter().rev().map(|x| x.to_vec()).collect();
                let flipped = Matrix::from_rows(c, &rows).unwrap();
                let (a, ra) = rref(&f, &m).unwrap();
                let (b, rb) = rref(&f, &flipped).unwrap();
                prop_assert_eq!(ra, rb);
                prop_assert_eq!(a, b);
                let mut buf = e;
                prop_assert_eq!(rank_of_rows(&f, &mut buf, r, c), ra);
            }
        }
    }
}
