//! The named extremal constructions and the pairwise family predicates.
//!
//! Anchors default to spans of leading unit vectors so that output is
//! deterministic.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfq::Field;
use crate::subspace::{enumerate_subspaces, Family, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyName {
    K,
    T,
    J,
    A,
    B,
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K" => Ok(FamilyName::K),
            "T" => Ok(FamilyName::T),
            "J" => Ok(FamilyName::J),
            "A" => Ok(FamilyName::A),
            "B" => Ok(FamilyName::B),
            _ => Err(Error::BadParameters(format!("unknown family `{s}`"))),
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Fixed subspaces used by the constructions. Which ones a construction
/// reads depends on its name and on the parity of `s`.
#[derive(Debug, Clone, Default)]
pub struct Anchors {
    pub e: Option<Subspace>,
    pub u: Option<Subspace>,
    pub w: Option<Subspace>,
    pub d: Option<Subspace>,
}

#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub n: usize,
    pub s: usize,
    pub q: u32,
    pub anchors: Anchors,
}

impl FamilySpec {
    pub fn new(name: FamilyName, n: usize, s: usize, q: u32) -> Self {
        FamilySpec {
            name,
            n,
            s,
            q,
            anchors: Anchors::default(),
        }
    }

    /// Assigns the members of `fam` to anchor slots by dimension.
    pub fn with_anchor_family(mut self, fam: &Family) -> Result<Self> {
        if fam.field().order() != self.q || fam.ambient_dim() != self.n {
            return Err(Error::BadAnchor(
                "anchor file has a different q or n".into(),
            ));
        }
        let s = self.s;
        let slot_dims: Vec<(usize, &mut Option<Subspace>)> = match self.name {
            FamilyName::K => vec![(1, &mut self.anchors.e)],
            FamilyName::T if s % 2 == 1 => {
                vec![(1, &mut self.anchors.e), (s / 2 + 1, &mut self.anchors.u)]
            }
            FamilyName::T => vec![(s / 2 + 1, &mut self.anchors.u)],
            FamilyName::J => vec![(3, &mut self.anchors.d)],
            FamilyName::A => vec![((s + 1) / 2 - 1, &mut self.anchors.u)],
            FamilyName::B => vec![(s / 2 + 1, &mut self.anchors.w)],
        };
        for (dim, slot) in slot_dims {
            let mut found = fam.iter().filter(|m| m.dim() == dim);
            match (found.next(), found.next()) {
                (Some(m), None) => *slot = Some(m.clone()),
                (None, _) => {}
                (Some(_), Some(_)) => {
                    return Err(Error::BadAnchor(format!(
                        "anchor file has several members of dimension {dim}"
                    )))
                }
            }
        }
        Ok(self)
    }

    pub fn build(&self) -> Result<Family> {
        let field = Field::shared(self.q)?;
        let a = &self.anchors;
        match self.name {
            FamilyName::K => build_k(&field, self.n, self.s, a.e.as_ref()),
            FamilyName::T => build_t(&field, self.n, self.s, a.e.as_ref(), a.u.as_ref()),
            FamilyName::J => build_j(&field, self.n, a.d.as_ref()),
            FamilyName::A => build_a(&field, self.n, self.s, a.u.as_ref()),
            FamilyName::B => build_b(&field, self.n, self.s, a.w.as_ref()),
        }
    }
}

fn leading(field: &Arc<Field>, n: usize, dim: usize) -> Subspace {
    Subspace::unit_span(field, n, &(0..dim).collect::<Vec<_>>())
}

fn anchor(
    field: &Arc<Field>,
    n: usize,
    given: Option<&Subspace>,
    dim: usize,
    name: &str,
    default: impl FnOnce() -> Subspace,
) -> Result<Subspace> {
    let Some(a) = given else {
        return Ok(default());
    };
    if a.ambient_dim() != n || a.field().order() != field.order() {
        return Err(Error::BadAnchor(format!("{name} lives in a different space")));
    }
    if a.dim() != dim {
        return Err(Error::BadAnchor(format!(
            "{name} must have dimension {dim}, has {}",
            a.dim()
        )));
    }
    Ok(a.clone())
}

fn union_range(n: usize, s: usize) -> Result<()> {
    if s < 2 || s >= n {
        return Err(Error::ParametersOutOfRange(format!(
            "need 2 <= s < n, got s={s} n={n}"
        )));
    }
    Ok(())
}

fn antichain_range(n: usize, s: usize) -> Result<()> {
    if s < 2 || s > n {
        return Err(Error::ParametersOutOfRange(format!(
            "need 2 <= s <= n, got s={s} n={n}"
        )));
    }
    Ok(())
}

fn layer_vec(field: &Arc<Field>, n: usize, k: usize) -> Result<Vec<Subspace>> {
    Ok(enumerate_subspaces(field, n, k)?.collect())
}

fn up_to(field: &Arc<Field>, n: usize, d: usize) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    for i in 0..=d {
        out.extend(enumerate_subspaces(field, n, i)?);
    }
    Ok(out)
}

/// `K[n,2d]` = all spaces of dimension at most `d`; for odd `s` add the
/// `(d+1)`-spaces through `E`.
pub fn build_k(field: &Arc<Field>, n: usize, s: usize, e: Option<&Subspace>) -> Result<Family> {
    union_range(n, s)?;
    let d = s / 2;
    let mut members = up_to(field, n, d)?;
    if s % 2 == 1 {
        let e = anchor(field, n, e, 1, "E", || leading(field, n, 1))?;
        members.extend(e.superspaces_of_dim(d + 1));
    }
    Family::new(field, n, members)
}

/// `T[n,s]`. Even `s` reads `U` (dimension `d+1`); odd `s` reads `E`
/// (dimension 1) and `U` (dimension `d+1`) with `E ≰ U`.
pub fn build_t(
    field: &Arc<Field>,
    n: usize,
    s: usize,
    e: Option<&Subspace>,
    u: Option<&Subspace>,
) -> Result<Family> {
    union_range(n, s)?;
    let d = s / 2;
    if s % 2 == 0 {
        let u = anchor(field, n, u, d + 1, "U", || leading(field, n, d + 1))?;
        let mut members = up_to(field, n, d - 1)?;
        members.extend(
            layer_vec(field, n, d)?
                .into_iter()
                .filter(|f| f.meet_dim(&u).expect("same ambient") > 0),
        );
        members.push(u);
        return Family::new(field, n, members);
    }
    let e = anchor(field, n, e, 1, "E", || leading(field, n, 1))?;
    let u = anchor(field, n, u, d + 1, "U", || {
        Subspace::unit_span(field, n, &(1..d + 2).collect::<Vec<_>>())
    })?;
    if e.is_subspace_of(&u)? {
        return Err(Error::BadAnchor("E must not lie in U".into()));
    }
    let mut members = up_to(field, n, d)?;
    members.extend(
        e.superspaces_of_dim(d + 1)
            .into_iter()
            .filter(|f| f.meet_dim(&u).expect("same ambient") >= 1),
    );
    members.extend(e.span(&u)?.subspaces_of_dim(d + 1));
    Family::new(field, n, members)
}

/// `J[n,5]`: all spaces of dimension at most 2, plus the 3-spaces meeting
/// `D` in at least a plane.
pub fn build_j(field: &Arc<Field>, n: usize, d: Option<&Subspace>) -> Result<Family> {
    if n < 6 {
        return Err(Error::ParametersOutOfRange(format!("J needs n >= 6, got {n}")));
    }
    let d = anchor(field, n, d, 3, "D", || leading(field, n, 3))?;
    let mut members = up_to(field, n, 2)?;
    members.extend(
        layer_vec(field, n, 3)?
            .into_iter()
            .filter(|f| f.meet_dim(&d).expect("same ambient") >= 2),
    );
    Family::new(field, n, members)
}

/// `A[n,s]`: the `⌈s/2⌉`-spaces not above `U`, together with `U`
/// (dimension `⌈s/2⌉ − 1`).
pub fn build_a(field: &Arc<Field>, n: usize, s: usize, u: Option<&Subspace>) -> Result<Family> {
    antichain_range(n, s)?;
    let c = (s + 1) / 2;
    let u = anchor(field, n, u, c - 1, "U", || leading(field, n, c - 1))?;
    let mut members: Vec<Subspace> = layer_vec(field, n, c)?
        .into_iter()
        .filter(|f| !u.is_subspace_of(f).expect("same ambient"))
        .collect();
    members.push(u);
    Family::new(field, n, members)
}

/// `B[n,s]`: the `⌊s/2⌋`-spaces not below `W`, together with `W`
/// (dimension `⌊s/2⌋ + 1`).
pub fn build_b(field: &Arc<Field>, n: usize, s: usize, w: Option<&Subspace>) -> Result<Family> {
    antichain_range(n, s)?;
    let f = s / 2;
    if f + 1 > n {
        return Err(Error::ParametersOutOfRange(format!(
            "W would need dimension {} > n = {n}",
            f + 1
        )));
    }
    let w = anchor(field, n, w, f + 1, "W", || leading(field, n, f + 1))?;
    let mut members: Vec<Subspace> = layer_vec(field, n, f)?
        .into_iter()
        .filter(|x| !x.is_subspace_of(&w).expect("same ambient"))
        .collect();
    members.push(w);
    Family::new(field, n, members)
}

/// `([V,d] ∖ [S,d]) ∪ [S,d+1]` for a `(2d+1)`-space `S`: an optimal
/// `(2d+1)`-union antichain other than `[V,d]`. Not a classification.
pub fn build_layer_swap(
    field: &Arc<Field>,
    n: usize,
    d: usize,
    s_space: Option<&Subspace>,
) -> Result<Family> {
    if d == 0 || 2 * d + 1 > n {
        return Err(Error::ParametersOutOfRange(format!(
            "need 1 <= d and 2d+1 <= n, got d={d} n={n}"
        )));
    }
    let big = anchor(field, n, s_space, 2 * d + 1, "S", || leading(field, n, 2 * d + 1))?;
    let mut members: Vec<Subspace> = layer_vec(field, n, d)?
        .into_iter()
        .filter(|x| !x.is_subspace_of(&big).expect("same ambient"))
        .collect();
    members.extend(big.subspaces_of_dim(d + 1));
    Family::new(field, n, members)
}

fn all_pairs(f: &Family, diagonal: bool, ok: impl Fn(&Subspace, &Subspace) -> bool + Sync) -> bool {
    let m = f.members();
    (0..m.len()).into_par_iter().all(|i| {
        let start = if diagonal { i } else { i + 1 };
        m[start..].iter().all(|b| ok(&m[i], b))
    })
}

fn cross_pairs(
    a: &Family,
    b: &Family,
    ok: impl Fn(&Subspace, &Subspace) -> bool + Sync,
) -> bool {
    if a.ambient_dim() != b.ambient_dim() || a.field().order() != b.field().order() {
        return false;
    }
    a.members()
        .par_iter()
        .all(|x| b.iter().all(|y| ok(x, y)))
}

/// `dim(A + B) ≤ s` for all members, the diagonal included.
pub fn is_s_union(f: &Family, s: usize) -> bool {
    all_pairs(f, true, |a, b| a.span(b).expect("same ambient").dim() <= s)
}

/// `dim(A ∩ B) ≥ t` for all members, the diagonal included.
pub fn is_t_intersecting(f: &Family, t: usize) -> bool {
    all_pairs(f, true, |a, b| a.intersect(b).expect("same ambient").dim() >= t)
}

pub fn is_antichain(f: &Family) -> bool {
    all_pairs(f, false, |a, b| {
        !a.is_subspace_of(b).expect("same ambient") && !b.is_subspace_of(a).expect("same ambient")
    })
}

pub fn is_cross_t_intersecting(a: &Family, b: &Family, t: usize) -> bool {
    cross_pairs(a, b, |x, y| x.intersect(y).expect("same ambient").dim() >= t)
}

pub fn is_cross_sperner(a: &Family, b: &Family) -> bool {
    cross_pairs(a, b, |x, y| {
        !x.is_subspace_of(y).expect("same ambient") && !y.is_subspace_of(x).expect("same ambient")
    })
}

/// The dimension-`i` slice.
pub fn layer(f: &Family, i: usize) -> Family {
    f.layer(i)
}

/// `|F_i| + |F_{s+1−i}| ≤ [n,i]` for `0 ≤ i ≤ ⌊s/2⌋`; returns the first
/// failing `i`.
pub fn layer_inequality_violation(f: &Family, s: usize) -> Option<usize> {
    let n = f.ambient_dim();
    let q = f.field().order();
    (0..=s / 2).find(|&i| {
        let hi = s + 1 - i;
        let upper = if hi <= n { f.layer(hi).len() } else { 0 };
        let bound = crate::qbinom::gauss(n as u64, i as u64, q);
        num_bigint::BigUint::from(f.layer(i).len() + upper) > bound
    })
}
