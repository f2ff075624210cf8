use std::sync::Arc;

use num_bigint::BigUint;

use super::Subspace;
use crate::error::{Error, Result};
use crate::gfq::{Field, Matrix};
use crate::qbinom::gaussian_binomial;

/// Largest layer `[n, k]_q` that [`enumerate_subspaces`] will walk.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

/// Every `k`-dimensional subspace of `GF(q)^n`, each exactly once.
///
/// Order: pivot-column sets in lexicographic order; within a pivot set, the
/// free entries (row-major) count up in base `q` with the first entry most
/// significant.
pub fn enumerate_subspaces(field: &Arc<Field>, n: usize, k: usize) -> Result<SubspaceIter> {
    if k > n {
        return Err(Error::BadParameters(format!("k = {k} exceeds n = {n}")));
    }
    let size = gaussian_binomial(n as i64, k as i64, field.order())?;
    if size > BigUint::from(ENUMERATION_BUDGET) {
        return Err(Error::BudgetExceeded {
            what: "subspace enumeration",
            size: size.to_string(),
            limit: ENUMERATION_BUDGET.to_string(),
        });
    }
    Ok(SubspaceIter {
        inner: RrefIter::new(field.clone(), n, k),
    })
}

pub struct SubspaceIter {
    inner: RrefIter,
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let m = self.inner.next()?;
        Some(Subspace::from_rref(
            self.inner.field.clone(),
            self.inner.n,
            m,
        ))
    }
}

/// Walks the RREF matrices of rank `k` with `n` columns (no budget check).
pub struct RrefIter {
    field: Arc<Field>,
    n: usize,
    k: usize,
    pivots: Option<Vec<usize>>,
    // (row, col) of each free entry for the current pivot set
    free: Vec<(usize, usize)>,
    digits: Vec<u8>,
}

impl RrefIter {
    pub fn new(field: Arc<Field>, n: usize, k: usize) -> Self {
        let pivots = (k <= n).then(|| (0..k).collect::<Vec<_>>());
        let mut it = RrefIter {
            field,
            n,
            k,
            pivots,
            free: Vec::new(),
            digits: Vec::new(),
        };
        it.reset_free();
        it
    }

    fn reset_free(&mut self) {
        self.free.clear();
        if let Some(piv) = &self.pivots {
            for (r, &p) in piv.iter().enumerate() {
                for c in p + 1..self.n {
                    if !piv.contains(&c) {
                        self.free.push((r, c));
                    }
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn current(&self) -> Matrix {
        let piv = self.pivots.as_ref().expect("live iterator");
        let mut m = vec![0u8; self.k * self.n];
        for (r, &p) in piv.iter().enumerate() {
            m[r * self.n + p] = 1;
        }
        for (&(r, c), &d) in self.free.iter().zip(&self.digits) {
            m[r * self.n + c] = d;
        }
        Matrix::new(self.k, self.n, m).expect("shape")
    }

    fn advance(&mut self) {
        let q = self.field.order();
        for d in self.digits.iter_mut().rev() {
            if (*d as u32) + 1 < q {
                *d += 1;
                return;
            }
            *d = 0;
        }
        // digits wrapped: next pivot combination
        let piv = self.pivots.as_mut().expect("live iterator");
        let (k, n) = (self.k, self.n);
        let mut i = k;
        loop {
            if i == 0 {
                self.pivots = None;
                return;
            }
            i -= 1;
            if piv[i] < n - k + i {
                piv[i] += 1;
                for j in i + 1..k {
                    piv[j] = piv[j - 1] + 1;
                }
                break;
            }
        }
        self.reset_free();
    }
}

impl Iterator for RrefIter {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        self.pivots.as_ref()?;
        let m = self.current();
        self.advance();
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_counts() {
        let f2 = Field::shared(2).unwrap();
        assert_eq!(enumerate_subspaces(&f2, 3, 1).unwrap().count(), 7);
        assert_eq!(enumerate_subspaces(&f2, 4, 2).unwrap().count(), 35);
        for q in [2, 3, 4] {
            let f = Field::shared(q).unwrap();
            let zero: Vec<_> = enumerate_subspaces(&f, 4, 0).unwrap().collect();
            assert_eq!(zero, vec![Subspace::zero(&f, 4)]);
        }
    }

    #[test]
    fn order_is_pivot_lex_then_free_entries() {
        let f2 = Field::shared(2).unwrap();
        let lines: Vec<Vec<u8>> = enumerate_subspaces(&f2, 3, 1)
            .unwrap()
            .map(|s| s.basis().entries().to_vec())
            .collect();
        assert_eq!(
            lines,
            vec![
                vec![1, 0, 0],
                vec![1, 0, 1],
                vec![1, 1, 0],
                vec![1, 1, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 0, 1],
            ]
        );
    }

    #[test]
    fn distinct_and_in_rref() {
        let f = Field::shared(3).unwrap();
        let all: Vec<_> = enumerate_subspaces(&f, 4, 2).unwrap().collect();
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for s in &all {
            let again = Subspace::from_matrix(&f, s.basis().clone()).unwrap();
            assert_eq!(&again, s);
        }
    }

    #[test]
    fn budget_guard() {
        let f = Field::shared(2).unwrap();
        assert!(matches!(
            enumerate_subspaces(&f, 30, 15),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(enumerate_subspaces(&f, 3, 4).is_err());
    }
}
