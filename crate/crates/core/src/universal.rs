//! The countable asymmetric relation on naturals read off ternary digits,
//! and the recursive embedding of finite asymmetric structures into it.
//!
//! For `m < n`, the digit `d_m(n)` of `n` at position `m` decides the pair:
//! 1 means `m ≺ n`, 2 means `n ≺ m`, 0 means unrelated.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{OrderError, OrderMap, RelStructure};
use crate::ternary::HereditaryNat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rel {
    Forward,
    Backward,
    Unrelated,
}

impl Rel {
    pub fn flip(self) -> Rel {
        match self {
            Rel::Forward => Rel::Backward,
            Rel::Backward => Rel::Forward,
            Rel::Unrelated => Rel::Unrelated,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniversalError {
    #[error("F and G share the element {0}")]
    NotDisjoint(HereditaryNat),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// `Forward` iff `m ≺ n`, `Backward` iff `n ≺ m`.
pub fn rel(m: &HereditaryNat, n: &HereditaryNat) -> Rel {
    use std::cmp::Ordering::*;
    match m.cmp(n) {
        Equal => Rel::Unrelated,
        Less => match n.digit(m) {
            1 => Rel::Forward,
            2 => Rel::Backward,
            _ => Rel::Unrelated,
        },
        Greater => rel(n, m).flip(),
    }
}

pub fn rel_u64(m: u64, n: u64) -> Rel {
    rel(&HereditaryNat::from(m), &HereditaryNat::from(n))
}

fn check_disjoint(
    f: &BTreeSet<HereditaryNat>,
    g: &BTreeSet<HereditaryNat>,
) -> Result<(), UniversalError> {
    match f.intersection(g).next() {
        Some(x) => Err(UniversalError::NotDisjoint(x.clone())),
        None => Ok(()),
    }
}

/// `sum_{m in F} 3^m + sum_{m in G} 2*3^m`.
///
/// Empty `F ∪ G` is accepted and yields 0.
pub fn witness(
    f: &BTreeSet<HereditaryNat>,
    g: &BTreeSet<HereditaryNat>,
) -> Result<HereditaryNat, UniversalError> {
    check_disjoint(f, g)?;
    let mut n = HereditaryNat::zero();
    for m in f {
        n.add_power(m.clone(), 1);
    }
    for m in g {
        n.add_power(m.clone(), 2);
    }
    Ok(n)
}

/// `witness(F, G) + 3^P` with `P = max(bound, max(F ∪ G)) + 1`.
///
/// The result exceeds `bound` and every member of `F ∪ G`, so all prescribed
/// digits are read from the result.
pub fn witness_above(
    f: &BTreeSet<HereditaryNat>,
    g: &BTreeSet<HereditaryNat>,
    bound: &HereditaryNat,
) -> Result<HereditaryNat, UniversalError> {
    let mut n = witness(f, g)?;
    let top = f.iter().chain(g).max().unwrap_or(bound).max(bound);
    n.add_power(top.successor(), 1);
    Ok(n)
}

pub fn set_of(xs: &[u64]) -> BTreeSet<HereditaryNat> {
    xs.iter().map(|&x| HereditaryNat::from(x)).collect()
}

/// Embeds `s` in element order. The first image is 0; each later image is
/// `witness_above` of the earlier images it must sit above (`F`) or below
/// (`G`), with the previous image as the bound.
pub fn embed_structure(s: &RelStructure) -> OrderMap<HereditaryNat> {
    let mut images: Vec<HereditaryNat> = Vec::with_capacity(s.len());
    for k in 0..s.len() {
        if k == 0 {
            images.push(HereditaryNat::zero());
            continue;
        }
        let mut f = BTreeSet::new();
        let mut g = BTreeSet::new();
        for (i, img) in images.iter().enumerate() {
            if s.related(i, k) {
                f.insert(img.clone());
            } else if s.related(k, i) {
                g.insert(img.clone());
            }
        }
        let next = witness_above(&f, &g, &images[k - 1])
            .expect("F and G are disjoint because s is asymmetric");
        images.push(next);
    }
    OrderMap::new(images)
}

/// First pair whose relation on images differs from the relation in `s`.
pub fn embedding_mismatch(
    s: &RelStructure,
    map: &OrderMap<HereditaryNat>,
) -> Option<(usize, usize)> {
    let img = &map.images;
    for a in 0..s.len() {
        for b in 0..s.len() {
            if a == b {
                continue;
            }
            if img[a] == img[b] {
                return Some((a, b));
            }
            let want = if s.related(a, b) {
                Rel::Forward
            } else if s.related(b, a) {
                Rel::Backward
            } else {
                Rel::Unrelated
            };
            if rel(&img[a], &img[b]) != want {
                return Some((a, b));
            }
        }
    }
    None
}

/// Which clause of the witness property failed, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StarViolation {
    /// some `m ∈ F` is not `≺ n`
    Below(u64),
    /// some `m ∈ G` does not satisfy `n ≺ m`
    Above(u64),
    /// some `m < n` outside `F ∪ G` is related to `n`
    Stray(u64),
}

/// Checks the three clauses for `n = witness(F, G)` over small naturals.
/// The stray clause is checked for every `m < n`; since `d_m(n) = 0` once
/// `3^m > n`, only `m` up to the leading ternary position need be scanned.
pub fn check_witness_property(f: &[u64], g: &[u64], n: &HereditaryNat) -> Option<StarViolation> {
    for &m in f {
        if rel(&HereditaryNat::from(m), n) != Rel::Forward {
            return Some(StarViolation::Below(m));
        }
    }
    for &m in g {
        if rel(&HereditaryNat::from(m), n) != Rel::Backward {
            return Some(StarViolation::Above(m));
        }
    }
    let top = n.leading_position().and_then(|p| p.to_u64()).unwrap_or(0);
    for m in 0..=top {
        let hm = HereditaryNat::from(m);
        if &hm >= n || f.contains(&m) || g.contains(&m) {
            continue;
        }
        if rel(&hm, n) != Rel::Unrelated {
            return Some(StarViolation::Stray(m));
        }
    }
    None
}
