//! Subspaces of GF(q)^n held in canonical (reduced row echelon) form.

mod enumerate;
mod family;
mod format;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gfq::{rank_of_rows, rref, rref_in_place, Field, Matrix};

pub use enumerate::{enumerate_subspaces, RrefIter, SubspaceIter, ENUMERATION_BUDGET};
pub use family::{dual, shade, shadow, Family};
pub use format::{parse_family, write_family};

/// A subspace of `GF(q)^n`. Equality, ordering and hashing go through the
/// canonical RREF basis, so two spanning sets of one subspace compare equal.
#[derive(Clone)]
pub struct Subspace {
    field: Arc<Field>,
    n: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The span of arbitrary row vectors.
    pub fn span_of(field: &Arc<Field>, n: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let m = Matrix::from_rows(n, rows)?;
        Self::from_matrix(field, m)
    }

    /// Row space of `m`.
    pub fn from_matrix(field: &Arc<Field>, m: Matrix) -> Result<Self> {
        let n = m.cols();
        let (basis, _) = rref(field, &m)?;
        Ok(Self::from_rref(field.clone(), n, basis))
    }

    /// Trusts that `basis` is already in RREF with no zero rows.
    pub(crate) fn from_rref(field: Arc<Field>, n: usize, basis: Matrix) -> Self {
        let pivots = basis
            .row_iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("no zero rows in RREF"))
            .collect();
        Subspace {
            field,
            n,
            basis,
            pivots,
        }
    }

    pub fn zero(field: &Arc<Field>, n: usize) -> Self {
        Self::from_rref(field.clone(), n, Matrix::zeros(0, n))
    }

    pub fn full(field: &Arc<Field>, n: usize) -> Self {
        Self::unit_span(field, n, &(0..n).collect::<Vec<_>>())
    }

    /// Span of the unit vectors `e_i` for the given coordinate indices.
    pub fn unit_span(field: &Arc<Field>, n: usize, coords: &[usize]) -> Self {
        let rows: Vec<Vec<u8>> = coords
            .iter()
            .map(|&i| {
                let mut v = vec![0u8; n];
                v[i] = 1;
                v
            })
            .collect();
        Self::span_of(field, n, &rows).expect("unit vectors are valid")
    }

    #[inline]
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    #[inline]
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    #[inline]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.n != other.n || self.field.order() != other.field.order() {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// `A + B`.
    pub fn span(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let stacked = self.basis.vstack(&other.basis)?;
        Self::from_matrix(&self.field, stacked)
    }

    /// `A ∩ B` by the Zassenhaus construction: row-reduce `[A | A; B | 0]`;
    /// rows with a vanishing left half carry a basis of the intersection.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let n = self.n;
        let rows = self.dim() + other.dim();
        let cols = 2 * n;
        let mut buf = vec![0u8; rows * cols];
        for (i, r) in self.basis.row_iter().enumerate() {
            buf[i * cols..i * cols + n].copy_from_slice(r);
            buf[i * cols + n..(i + 1) * cols].copy_from_slice(r);
        }
        for (i, r) in other.basis.row_iter().enumerate() {
            let i = i + self.dim();
            buf[i * cols..i * cols + n].copy_from_slice(r);
        }
        let pivots = rref_in_place(&self.field, &mut buf, rows, cols);
        let meet: Vec<Vec<u8>> = pivots
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c >= n)
            .map(|(i, _)| buf[i * cols + n..(i + 1) * cols].to_vec())
            .collect();
        Self::span_of(&self.field, n, &meet)
    }

    /// Orthogonal complement under the dot product `Σ u_i v_i`.
    pub fn orth_complement(&self) -> Subspace {
        let f = &self.field;
        let n = self.n;
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let rows: Vec<Vec<u8>> = (0..n)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u8; n];
                v[free] = 1;
                for (i, &p) in self.pivots.iter().enumerate() {
                    v[p] = f.neg(self.basis.get(i, free));
                }
                v
            })
            .collect();
        Self::span_of(f, n, &rows).expect("complement rows are valid")
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &mut [u8]) {
        let f = &self.field;
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = v[p];
            if c == 0 {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                *x = f.sub(*x, f.mul(c, b));
            }
        }
    }

    pub fn contains_vector(&self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// `self ≤ other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.same_ambient(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        Ok(self.basis.row_iter().all(|r| other.contains_vector(r)))
    }

    /// `other ≤ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        other.is_subspace_of(self)
    }

    /// `dim(A + B)` by a rank computation, without building the span.
    pub fn span_dim(&self, other: &Subspace) -> Result<usize> {
        self.same_ambient(other)?;
        let mut buf = self.basis.entries().to_vec();
        buf.extend_from_slice(other.basis.entries());
        Ok(rank_of_rows(
            &self.field,
            &mut buf,
            self.dim() + other.dim(),
            self.n,
        ))
    }

    /// `dim(A ∩ B) = dim A + dim B − dim(A + B)`.
    pub fn meet_dim(&self, other: &Subspace) -> Result<usize> {
        Ok(self.dim() + other.dim() - self.span_dim(other)?)
    }

    /// All `j`-dimensional subspaces of `self`, in canonical enumeration order
    /// of their coordinate matrices.
    pub fn subspaces_of_dim(&self, j: usize) -> Vec<Subspace> {
        let k = self.dim();
        if j > k {
            return Vec::new();
        }
        RrefIter::new(self.field.clone(), k, j)
            .map(|coeffs| {
                let m = multiply(&self.field, &coeffs, &self.basis);
                Subspace::from_matrix(&self.field, m).expect("product of valid matrices")
            })
            .collect()
    }

    /// All `j`-dimensional subspaces of the ambient space containing `self`.
    pub fn superspaces_of_dim(&self, j: usize) -> Vec<Subspace> {
        let k = self.dim();
        if j < k || j > self.n {
            return Vec::new();
        }
        let mut is_pivot = vec![false; self.n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.n).filter(|&c| !is_pivot[c]).collect();
        // the unit vectors on non-pivot coordinates span a complement W of self;
        // X ↦ self + X is a bijection from [W, j−k] to the j-spaces above self
        let complement = Subspace::unit_span(&self.field, self.n, &free);
        complement
            .subspaces_of_dim(j - k)
            .into_iter()
            .map(|x| self.span(&x).expect("same ambient"))
            .collect()
    }
}

/// `a (r×k) · b (k×n)`.
fn multiply(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let (r, k, n) = (a.rows(), a.cols(), b.cols());
    let mut out = vec![0u8; r * n];
    for i in 0..r {
        for t in 0..k {
            let c = a.get(i, t);
            if c == 0 {
                continue;
            }
            for j in 0..n {
                let idx = i * n + j;
                out[idx] = field.add(out[idx], field.mul(c, b.get(t, j)));
            }
        }
    }
    Matrix::new(r, n, out).expect("shape")
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.field.order() == other.field.order()
            && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.n.hash(state);
        self.basis.hash(state);
    }
}

impl Ord for Subspace {
    /// Canonical member order: by dimension, then by basis bytes.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.order(), self.n, self.dim(), self.basis.entries()).cmp(&(
            other.field.order(),
            other.n,
            other.dim(),
            other.basis.entries(),
        ))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, r) in self.basis.row_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            for &x in r {
                if self.field.order() > 9 {
                    write!(f, "{x}.")?;
                } else {
                    write!(f, "{x}")?;
                }
            }
        }
        write!(f, "⟩")
    }
}
