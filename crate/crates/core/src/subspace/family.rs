use std::collections::BTreeSet;
use std::sync::Arc;

use super::Subspace;
use crate::error::{Error, Result};
use crate::gfq::Field;

/// A set of subspaces of one ambient space, deduplicated and kept in
/// canonical order (dimension, then basis bytes).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    q: u32,
    n: usize,
    field: FieldHandle,
    members: Vec<Subspace>,
}

// Arc<Field> wrapper that compares by order only, so Family can derive Eq/Ord.
#[derive(Clone)]
struct FieldHandle(Arc<Field>);

impl PartialEq for FieldHandle {
    fn eq(&self, other: &Self) -> bool {
        self.0.order() == other.0.order()
    }
}
impl Eq for FieldHandle {}
impl PartialOrd for FieldHandle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FieldHandle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.order().cmp(&other.0.order())
    }
}
impl std::hash::Hash for FieldHandle {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.order().hash(state)
    }
}

impl Family {
    pub fn new(
        field: &Arc<Field>,
        n: usize,
        members: impl IntoIterator<Item = Subspace>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for m in members {
            if m.ambient_dim() != n || m.field().order() != field.order() {
                return Err(Error::AmbientMismatch);
            }
            set.insert(m);
        }
        Ok(Family {
            q: field.order(),
            n,
            field: FieldHandle(field.clone()),
            members: set.into_iter().collect(),
        })
    }

    pub fn empty(field: &Arc<Field>, n: usize) -> Self {
        Family {
            q: field.order(),
            n,
            field: FieldHandle(field.clone()),
            members: Vec::new(),
        }
    }

    /// Every `k`-space of the ambient space.
    pub fn full_layer(field: &Arc<Field>, n: usize, k: usize) -> Result<Self> {
        Self::new(field, n, super::enumerate_subspaces(field, n, k)?)
    }

    #[inline]
    pub fn field(&self) -> &Arc<Field> {
        &self.field.0
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subspace> {
        self.members.iter()
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.members.binary_search(s).is_ok()
    }

    pub fn is_subset_of(&self, other: &Family) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    /// `F_i`: the members of dimension `i`.
    pub fn layer(&self, i: usize) -> Family {
        Family {
            q: self.q,
            n: self.n,
            field: self.field.clone(),
            members: self.members.iter().filter(|m| m.dim() == i).cloned().collect(),
        }
    }

    /// `m(F)`.
    pub fn min_dim(&self) -> Result<usize> {
        self.members.first().map(|m| m.dim()).ok_or(Error::EmptyFamily)
    }

    /// `l(F)`.
    pub fn max_dim(&self) -> Result<usize> {
        self.members.last().map(|m| m.dim()).ok_or(Error::EmptyFamily)
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        Family::new(
            self.field(),
            self.n,
            self.members.iter().chain(other.members.iter()).cloned(),
        )
    }

    pub fn difference(&self, other: &Family) -> Family {
        Family {
            q: self.q,
            n: self.n,
            field: self.field.clone(),
            members: self
                .members
                .iter()
                .filter(|m| !other.contains(m))
                .cloned()
                .collect(),
        }
    }

    pub fn filter(&self, mut keep: impl FnMut(&Subspace) -> bool) -> Family {
        Family {
            q: self.q,
            n: self.n,
            field: self.field.clone(),
            members: self.members.iter().filter(|m| keep(m)).cloned().collect(),
        }
    }

    fn common_dim(&self) -> Result<Option<usize>> {
        let Some(first) = self.members.first() else {
            return Ok(None);
        };
        if self.members.iter().any(|m| m.dim() != first.dim()) {
            return Err(Error::MixedDimensions);
        }
        Ok(Some(first.dim()))
    }
}

impl std::fmt::Debug for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Family(q={}, n={}) ", self.q, self.n)?;
        f.debug_list().entries(&self.members).finish()
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a Subspace;
    type IntoIter = std::slice::Iter<'a, Subspace>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// The `u`-shadow: every `u`-space lying below some member.
pub fn shadow(h: &Family, u: usize) -> Result<Family> {
    if let Some(m) = h.members.iter().find(|m| m.dim() < u) {
        return Err(Error::DimensionOrderViolation { dim: m.dim(), u });
    }
    Family::new(
        h.field(),
        h.n,
        h.members.iter().flat_map(|m| m.subspaces_of_dim(u)),
    )
}

/// The shade of a `k`-uniform family: every `(k+1)`-space above some member.
pub fn shade(h: &Family) -> Result<Family> {
    let Some(k) = h.common_dim()? else {
        return Ok(Family::empty(h.field(), h.n));
    };
    if k >= h.n {
        return Err(Error::TopLayer);
    }
    Family::new(
        h.field(),
        h.n,
        h.members.iter().flat_map(|m| m.superspaces_of_dim(k + 1)),
    )
}

/// Member-wise orthogonal complement.
pub fn dual(f: &Family) -> Family {
    Family::new(f.field(), f.n, f.members.iter().map(|m| m.orth_complement()))
        .expect("complements share the ambient space")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbinom::gaussian_binomial;
    use crate::subspace::enumerate_subspaces;
    use num_bigint::BigUint;

    fn gf(q: u32) -> Arc<Field> {
        Field::shared(q).unwrap()
    }

    fn sp(f: &Arc<Field>, n: usize, rows: &[&[u8]]) -> Subspace {
        Subspace::span_of(f, n, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn gb(n: usize, k: usize, q: u32) -> usize {
        let v: BigUint = gaussian_binomial(n as i64, k as i64, q).unwrap();
        v.try_into().unwrap()
    }

    #[test]
    fn dedup_and_order() {
        let f = gf(2);
        let a = sp(&f, 3, &[&[1, 0, 0]]);
        let fam = Family::new(
            &f,
            3,
            vec![Subspace::full(&f, 3), a.clone(), a.clone(), Subspace::zero(&f, 3)],
        )
        .unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.min_dim().unwrap(), 0);
        assert_eq!(fam.max_dim().unwrap(), 3);
        assert!(Family::empty(&f, 3).min_dim().is_err());
        assert!(Family::new(&f, 3, vec![Subspace::zero(&f, 4)]).is_err());
    }

    #[test]
    fn shadow_examples() {
        let f = gf(2);
        let u = sp(&f, 4, &[&[1, 0, 0, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]]);
        let single = Family::new(&f, 4, vec![u]).unwrap();
        assert_eq!(shadow(&single, 2).unwrap().len(), gb(3, 2, 2));

        let layer = Family::full_layer(&f, 4, 2).unwrap();
        assert_eq!(shadow(&layer, 1).unwrap(), Family::full_layer(&f, 4, 1).unwrap());

        let x = sp(&f, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let y = sp(&f, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        let pair = Family::new(&f, 4, vec![x, y]).unwrap();
        assert_eq!(shadow(&pair, 1).unwrap().len(), 5);

        assert!(matches!(
            shadow(&pair, 3),
            Err(Error::DimensionOrderViolation { dim: 2, u: 3 })
        ));
    }

    #[test]
    fn shade_examples() {
        let f = gf(2);
        let zero = Family::new(&f, 4, vec![Subspace::zero(&f, 4)]).unwrap();
        assert_eq!(shade(&zero).unwrap(), Family::full_layer(&f, 4, 1).unwrap());

        let line = Family::new(&f, 4, vec![sp(&f, 4, &[&[0, 1, 1, 0]])]).unwrap();
        assert_eq!(shade(&line).unwrap().len(), 7);

        let layer = Family::full_layer(&f, 4, 2).unwrap();
        assert_eq!(shade(&layer).unwrap(), Family::full_layer(&f, 4, 3).unwrap());

        let mixed = Family::new(&f, 4, vec![Subspace::zero(&f, 4), sp(&f, 4, &[&[1, 0, 0, 0]])])
            .unwrap();
        assert_eq!(shade(&mixed), Err(Error::MixedDimensions));
        let top = Family::new(&f, 4, vec![Subspace::full(&f, 4)]).unwrap();
        assert_eq!(shade(&top), Err(Error::TopLayer));
    }

    #[test]
    fn dual_examples() {
        let f = gf(2);
        let zero = Family::new(&f, 3, vec![Subspace::zero(&f, 3)]).unwrap();
        assert_eq!(dual(&zero), Family::new(&f, 3, vec![Subspace::full(&f, 3)]).unwrap());
        for k in 0..=4 {
            let l = Family::full_layer(&f, 4, k).unwrap();
            assert_eq!(dual(&l), Family::full_layer(&f, 4, 4 - k).unwrap());
            assert_eq!(dual(&dual(&l)), l);
        }
    }

    #[test]
    fn shade_shadow_duality_all_line_families_gf2_3() {
        let f = gf(2);
        let lines: Vec<Subspace> = enumerate_subspaces(&f, 3, 1).unwrap().collect();
        for mask in 1u32..(1 << lines.len()) {
            let h = Family::new(
                &f,
                3,
                (0..lines.len()).filter(|i| mask >> i & 1 == 1).map(|i| lines[i].clone()),
            )
            .unwrap();
            let lhs = shade(&h).unwrap().len();
            let rhs = shadow(&dual(&h), 3 - 1 - 1).unwrap().len();
            assert_eq!(lhs, rhs, "mask {mask:b}");
        }
    }

    #[test]
    fn layers_partition() {
        let f = gf(3);
        let all = Family::new(
            &f,
            3,
            (0..=3).flat_map(|k| enumerate_subspaces(&f, 3, k).unwrap()),
        )
        .unwrap();
        let total: usize = (0..=3).map(|i| all.layer(i).len()).sum();
        assert_eq!(total, all.len());
        assert!(all.layer(4).is_empty());
    }
}
