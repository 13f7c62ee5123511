//! Conditions `(D, n, f)` of the forcing poset over a finite poset `E`:
//! `D` is a finite set of elements, `n` a depth, and `f(a)` a sequence of
//! length `n` with `f(a)(k) < max(k, 1)`.
//!
//! Element ids are ids of the ambient poset, so a condition over a subposet
//! is literally a condition over the larger one.

mod generic;
mod pipeline;
mod split;

pub use generic::{default_schedule, generic_build, shuffled_schedule, verify_generic, DenseRequest, GenericEmbedding, GenericReport};
pub use pipeline::{pipeline_embed, pipeline_from_generic, ChainSpec, ChainsJson, FactorJson, PairCertificate, PipelineReport, Xi};
pub use split::{split_density_check, split_project, DensityReport, SplitInstance};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{OrderError, Poset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForcingError {
    #[error("parts {i} and {j} meet in {got:?}, not in the root {root:?}")]
    Root {
        i: usize,
        j: usize,
        got: Vec<usize>,
        root: Vec<usize>,
    },
    #[error("parts {i} and {j} disagree on root element {a}")]
    Agreement { i: usize, j: usize, a: usize },
    #[error("root elements {a} <= {b} are not monotone at coordinate {k} of the deepest part")]
    Monotonicity { a: usize, b: usize, k: usize },
    #[error("no parts to amalgamate")]
    NoParts,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a condition: {0}")]
    Invalid(String),
    #[error("embedding has depth {have}, need {need}")]
    Depth { have: usize, need: usize },
    #[error("schedule mentions element {0} outside the poset")]
    Schedule(usize),
    #[error("split hypothesis fails: {0}")]
    Hypothesis(String),
    #[error("chain at coordinate {coord} has length {len}, need {need}")]
    ChainTooShort {
        coord: usize,
        len: String,
        need: String,
    },
    #[error("chain factor {coord}: {msg}")]
    Chain { coord: usize, msg: String },
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// `max(k, 1)`: the number of values allowed at coordinate `k`.
#[inline]
pub fn bound(k: usize) -> u64 {
    k.max(1) as u64
}

/// A triple `(D, n, f)` with `D` the key set of `f`. Not validated on
/// construction; see `is_condition`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Condition {
    pub n: usize,
    pub f: BTreeMap<usize, Vec<u64>>,
}

impl Condition {
    pub fn empty() -> Self {
        Condition::default()
    }

    pub fn new(n: usize, f: BTreeMap<usize, Vec<u64>>) -> Self {
        Condition { n, f }
    }

    pub fn domain(&self) -> BTreeSet<usize> {
        self.f.keys().copied().collect()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.f.contains_key(&a)
    }

    pub fn value(&self, a: usize, k: usize) -> u64 {
        self.f[&a][k]
    }

    /// Bound and length violations, ignoring the ambient poset.
    pub fn shape_error(&self) -> Option<String> {
        for (&a, v) in &self.f {
            if v.len() != self.n {
                return Some(format!("f({a}) has length {}, depth is {}", v.len(), self.n));
            }
            if let Some(k) = (0..v.len()).find(|&k| v[k] >= bound(k)) {
                return Some(format!("f({a})({k}) = {} is not below {}", v[k], bound(k)));
            }
        }
        None
    }
}

/// `{"D":[ids],"n":k,"f":{"id":[vals]}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionJson {
    #[serde(rename = "D")]
    pub domain: Vec<usize>,
    pub n: usize,
    pub f: BTreeMap<String, Vec<u64>>,
}

impl From<&Condition> for ConditionJson {
    fn from(p: &Condition) -> Self {
        ConditionJson {
            domain: p.f.keys().copied().collect(),
            n: p.n,
            f: p.f.iter().map(|(a, v)| (a.to_string(), v.clone())).collect(),
        }
    }
}

impl TryFrom<&ConditionJson> for Condition {
    type Error = ForcingError;

    fn try_from(j: &ConditionJson) -> Result<Self, Self::Error> {
        let mut f = BTreeMap::new();
        for (k, v) in &j.f {
            let a: usize = k
                .parse()
                .map_err(|_| ForcingError::Invalid(format!("key {k:?} is not an element id")))?;
            f.insert(a, v.clone());
        }
        let dom: BTreeSet<usize> = j.domain.iter().copied().collect();
        if dom != f.keys().copied().collect() {
            return Err(ForcingError::Invalid("D differs from the keys of f".into()));
        }
        let p = Condition { n: j.n, f };
        match p.shape_error() {
            Some(msg) => Err(ForcingError::Invalid(msg)),
            None => Ok(p),
        }
    }
}

impl Serialize for Condition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ConditionJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Condition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ConditionJson::deserialize(d)?;
        Condition::try_from(&j).map_err(serde::de::Error::custom)
    }
}

pub fn is_condition(e: &Poset, p: &Condition) -> bool {
    condition_error(e, p).is_none()
}

pub fn condition_error(e: &Poset, p: &Condition) -> Option<String> {
    if let Some(&a) = p.f.keys().find(|&&a| a >= e.len()) {
        return Some(format!("{a} is not an element of E"));
    }
    p.shape_error()
}

/// `p` extends `q` (`p <= q`).
pub fn extends(e: &Poset, p: &Condition, q: &Condition) -> bool {
    if p.n < q.n {
        return false;
    }
    for (a, qa) in &q.f {
        match p.f.get(a) {
            Some(pa) if pa[..q.n] == qa[..] => {}
            _ => return false,
        }
    }
    for &a in q.f.keys() {
        for &b in q.f.keys() {
            if a != b && e.le(a, b) && (q.n..p.n).any(|j| p.f[&a][j] > p.f[&b][j]) {
                return false;
            }
        }
    }
    true
}

/// A common extension of `parts`, which pairwise meet exactly in `root` and
/// agree on it below their common depth.
///
/// The deepest part supplies the values of root elements at every
/// coordinate; shallower parts are padded with the maximum of the root values
/// below each element (0 when there are none). For the result to extend a
/// shallower part, the root values must be monotone on the coordinates the
/// padding fills, which is checked (`Monotonicity`).
pub fn amalgamate(e: &Poset, parts: &[Condition], root: &BTreeSet<usize>) -> Result<Condition, ForcingError> {
    if parts.is_empty() {
        return Err(ForcingError::NoParts);
    }
    for (i, p) in parts.iter().enumerate() {
        if let Some(msg) = condition_error(e, p) {
            return Err(ForcingError::Invalid(format!("part {i}: {msg}")));
        }
    }
    if parts.len() == 1 {
        if !root.is_subset(&parts[0].domain()) {
            return Err(ForcingError::Root {
                i: 0,
                j: 0,
                got: parts[0].domain().into_iter().collect(),
                root: root.iter().copied().collect(),
            });
        }
        return Ok(parts[0].clone());
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let meet: BTreeSet<usize> = parts[i].domain().intersection(&parts[j].domain()).copied().collect();
            if &meet != root {
                return Err(ForcingError::Root {
                    i,
                    j,
                    got: meet.into_iter().collect(),
                    root: root.iter().copied().collect(),
                });
            }
            let m = parts[i].n.min(parts[j].n);
            for &a in root {
                if parts[i].f[&a][..m] != parts[j].f[&a][..m] {
                    return Err(ForcingError::Agreement { i, j, a });
                }
            }
        }
    }
    let deep = parts.iter().max_by_key(|p| p.n).unwrap();
    let nq = deep.n;
    let shallowest = parts.iter().map(|p| p.n).min().unwrap();
    for &a in root {
        for &b in root {
            if a != b && e.le(a, b) {
                if let Some(k) = (shallowest..nq).find(|&k| deep.f[&a][k] > deep.f[&b][k]) {
                    return Err(ForcingError::Monotonicity { a, b, k });
                }
            }
        }
    }
    let mut f: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for &a in root {
        f.insert(a, deep.f[&a].clone());
    }
    for p in parts {
        for (&a, v) in &p.f {
            if root.contains(&a) {
                continue;
            }
            let mut w = v.clone();
            for j in p.n..nq {
                let pad = root
                    .iter()
                    .filter(|&&c| e.le(c, a))
                    .map(|c| deep.f[c][j])
                    .max()
                    .unwrap_or(0);
                w.push(pad);
            }
            f.insert(a, w);
        }
    }
    Ok(Condition { n: nq, f })
}

/// An extension of `p` of depth at least `n` with `a` in its domain.
/// Returns `p` itself if it already qualifies. Otherwise new coordinates are
/// 0 for old elements, and a new `a` copies the pointwise maximum of the
/// elements below it (0 when there are none).
pub fn extend_into_d(e: &Poset, p: &Condition, n: usize, a: usize) -> Condition {
    let mut q = p.clone();
    enter_d(e, &mut q, n, a);
    q
}

pub(crate) fn enter_d(e: &Poset, q: &mut Condition, n: usize, a: usize) {
    if q.n < n {
        for v in q.f.values_mut() {
            v.resize(n, 0);
        }
        q.n = n;
    }
    if !q.contains(a) {
        let vals: Vec<u64> = (0..q.n)
            .map(|j| {
                q.f.iter()
                    .filter(|(&b, _)| e.le(b, a))
                    .map(|(_, v)| v[j])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        q.f.insert(a, vals);
    }
}

/// First `k >= n` with `f(a)(k) < f(b)(k)`.
pub fn strict_witness(p: &Condition, n: usize, a: usize, b: usize) -> Option<usize> {
    let (fa, fb) = (p.f.get(&a)?, p.f.get(&b)?);
    (n..p.n).find(|&k| fa[k] < fb[k])
}

/// An extension of `p` containing `a` and `b` with a coordinate `k >= n`
/// where `f(a)(k) < f(b)(k)`. Requires `b` not below-or-equal `a`.
///
/// After entering `a` and `b`, a fresh coordinate `k >= max(n, depth, |D| + 2)`
/// colors every element by its rank in a linear extension listing the
/// down-set of `a` first; the coordinates skipped before `k` are 0.
pub fn extend_into_e(e: &Poset, p: &Condition, n: usize, a: usize, b: usize) -> Result<Condition, ForcingError> {
    let mut q = p.clone();
    enter_e(e, &mut q, n, a, b)?;
    Ok(q)
}

pub(crate) fn enter_e(e: &Poset, q: &mut Condition, n: usize, a: usize, b: usize) -> Result<(), ForcingError> {
    if e.le(b, a) {
        return Err(ForcingError::Precondition(format!("{b} <= {a} in E")));
    }
    if strict_witness(q, n, a, b).is_some() {
        return Ok(());
    }
    let size_before = q.f.len();
    enter_d(e, q, 0, a);
    enter_d(e, q, 0, b);
    let k = n.max(q.n).max(size_before + 2);
    let dom: Vec<usize> = q.f.keys().copied().collect();
    let ext = e
        .linear_extension_placing(&dom, a, b)
        .expect("b is not below a");
    for (&c, v) in q.f.iter_mut() {
        v.resize(k, 0);
        let rank = ext.iter().position(|&x| x == c).unwrap() as u64;
        v.push(rank);
    }
    q.n = k + 1;
    Ok(())
}

/// `(D ∩ sub, n, f restricted)`.
pub fn projection(sub: &BTreeSet<usize>, p: &Condition) -> Condition {
    Condition {
        n: p.n,
        f: p.f.iter().filter(|(a, _)| sub.contains(a)).map(|(&a, v)| (a, v.clone())).collect(),
    }
}

/// `f_p(a)` is the length-`n_p` prefix of `upsilon(a)` for every `a` in
/// both `D_p` and `sub`. `upsilon` maps elements of `sub` to sequences.
pub fn quotient_member(
    sub: &BTreeSet<usize>,
    upsilon: &BTreeMap<usize, Vec<u64>>,
    p: &Condition,
) -> Result<bool, ForcingError> {
    for (a, v) in &p.f {
        if !sub.contains(a) {
            continue;
        }
        let u = upsilon
            .get(a)
            .ok_or_else(|| ForcingError::Invalid(format!("embedding undefined at {a}")))?;
        if u.len() < p.n {
            return Err(ForcingError::Depth { have: u.len(), need: p.n });
        }
        if u[..p.n] != v[..] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every condition whose domain is a subset of `elements` and whose depth is
/// at most `max_depth`.
pub fn enumerate_conditions(elements: &[usize], max_depth: usize) -> Vec<Condition> {
    let mut out = Vec::new();
    for mask in 0u32..1 << elements.len() {
        let dom: Vec<usize> = elements.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
        for n in 0..=max_depth {
            let seqs = all_sequences(n);
            let mut acc = vec![BTreeMap::new()];
            for &a in &dom {
                let mut next = Vec::with_capacity(acc.len() * seqs.len());
                for m in &acc {
                    for s in &seqs {
                        let mut m2: BTreeMap<usize, Vec<u64>> = m.clone();
                        m2.insert(a, s.clone());
                        next.push(m2);
                    }
                }
                acc = next;
            }
            out.extend(acc.into_iter().map(|f| Condition { n, f }));
        }
    }
    out
}

/// All sequences of length `n` with `s(k) < max(k, 1)`.
pub fn all_sequences(n: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|s: Vec<u64>| {
                (0..bound(k)).map(move |v| {
                    let mut s = s.clone();
                    s.push(v);
                    s
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cond(n: usize, f: &[(usize, &[u64])]) -> Condition {
        Condition::new(n, f.iter().map(|&(a, v)| (a, v.to_vec())).collect())
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn membership() {
        let e = Poset::antichain(2);
        assert!(is_condition(&e, &Condition::empty()));
        assert!(is_condition(&e, &cond(3, &[(0, &[0, 0, 1])])));
        assert!(!is_condition(&e, &cond(3, &[(0, &[0, 1, 0])])));
        assert!(!is_condition(&e, &cond(1, &[(5, &[0])])));
    }

    #[test]
    fn extension_basics() {
        let e = Poset::chain(2);
        let q = cond(2, &[(0, &[0, 0]), (1, &[0, 0])]);
        assert!(extends(&e, &q, &q));
        assert!(extends(&e, &q, &Condition::empty()));
        let bad = cond(3, &[(0, &[0, 0, 1]), (1, &[0, 0, 0])]);
        assert!(!extends(&e, &bad, &q));
        let good = cond(3, &[(0, &[0, 0, 0]), (1, &[0, 0, 1])]);
        assert!(extends(&e, &good, &q));
    }

    #[test]
    fn amalgamate_single_and_disjoint() {
        let e = Poset::antichain(2);
        let p = cond(2, &[(0, &[0, 0])]);
        assert_eq!(amalgamate(&e, std::slice::from_ref(&p), &set(&[])).unwrap(), p);
        let q = cond(2, &[(1, &[0, 0])]);
        let r = amalgamate(&e, &[p.clone(), q.clone()], &set(&[])).unwrap();
        assert_eq!(r, cond(2, &[(0, &[0, 0]), (1, &[0, 0])]));
    }

    #[test]
    fn amalgamate_pads_from_the_root() {
        // r = 0 below a = 1; the shallow part holds a, the deep part holds b = 2
        let e = Poset::from_edges(3, &[(0, 1)]).unwrap();
        let shallow = cond(3, &[(0, &[0, 0, 1]), (1, &[0, 0, 1])]);
        let deep = cond(5, &[(0, &[0, 0, 1, 2, 3]), (2, &[0, 0, 0, 0, 0])]);
        let q = amalgamate(&e, &[shallow.clone(), deep.clone()], &set(&[0])).unwrap();
        assert_eq!(q.f[&1][3..], [2, 3]);
        assert!(extends(&e, &q, &shallow));
        assert!(extends(&e, &q, &deep));
    }

    #[test]
    fn amalgamate_errors() {
        let e = Poset::antichain(3);
        let p = cond(2, &[(0, &[0, 0]), (1, &[0, 0])]);
        let q = cond(2, &[(0, &[0, 0]), (2, &[0, 0])]);
        assert!(matches!(amalgamate(&e, &[p.clone(), q.clone()], &set(&[])), Err(ForcingError::Root { .. })));
        let q2 = cond(3, &[(0, &[0, 0, 1]), (2, &[0, 0, 0])]);
        assert!(amalgamate(&e, &[p.clone(), q2], &set(&[0])).is_ok());
        let p3 = cond(3, &[(0, &[0, 0, 1]), (1, &[0, 0, 0])]);
        let q3 = cond(3, &[(0, &[0, 0, 0]), (2, &[0, 0, 0])]);
        assert!(matches!(amalgamate(&e, &[p3, q3], &set(&[0])), Err(ForcingError::Agreement { a: 0, .. })));
    }

    #[test]
    fn root_must_be_monotone_on_padded_coordinates() {
        // a = 0 <= b = 1 both in the root; the deep part breaks monotonicity
        // at coordinate 2, and then no condition extends both parts
        let e = Poset::from_edges(2, &[(0, 1)]).unwrap();
        let p0 = cond(2, &[(0, &[0, 0]), (1, &[0, 0])]);
        let p1 = cond(3, &[(0, &[0, 0, 1]), (1, &[0, 0, 0])]);
        assert_eq!(
            amalgamate(&e, &[p0.clone(), p1.clone()], &set(&[0, 1])),
            Err(ForcingError::Monotonicity { a: 0, b: 1, k: 2 })
        );
        let common = enumerate_conditions(&[0, 1], 4)
            .into_iter()
            .any(|q| extends(&e, &q, &p0) && extends(&e, &q, &p1));
        assert!(!common);
    }

    #[test]
    fn dense_d_entry() {
        let e = Poset::from_edges(2, &[(1, 0)]).unwrap();
        let p = extend_into_d(&e, &Condition::empty(), 4, 0);
        assert_eq!(p, cond(4, &[(0, &[0, 0, 0, 0])]));
        assert_eq!(extend_into_d(&e, &p, 2, 0), p);
        let p = cond(3, &[(1, &[0, 0, 1])]);
        let q = extend_into_d(&e, &p, 3, 0);
        assert_eq!(q.f[&0], vec![0, 0, 1]);
        assert!(extends(&e, &q, &p));
    }

    #[test]
    fn dense_e_entry() {
        let e = Poset::antichain(2);
        let p = extend_into_e(&e, &Condition::empty(), 0, 0, 1).unwrap();
        let k = strict_witness(&p, 0, 0, 1).unwrap();
        assert_eq!(p.n, k + 1);
        assert_eq!((p.f[&0][k], p.f[&1][k]), (0, 1));
        assert!(is_condition(&e, &p));
        let q = extend_into_e(&e, &p, 0, 1, 0).unwrap();
        assert!(extends(&e, &q, &p));
        assert!(strict_witness(&q, 0, 1, 0).is_some());

        let chain = Poset::chain(2);
        assert!(matches!(extend_into_e(&chain, &Condition::empty(), 0, 1, 0), Err(ForcingError::Precondition(_))));
        let mut p = Condition::empty();
        for n in [0, 5, 10, 20] {
            let next = extend_into_e(&chain, &p, n, 0, 1).unwrap();
            assert!(extends(&chain, &next, &p));
            assert!(strict_witness(&next, n, 0, 1).is_some());
            p = next;
        }
    }

    #[test]
    fn projections() {
        let p = cond(2, &[(0, &[0, 0]), (1, &[0, 0])]);
        assert_eq!(projection(&set(&[0, 1, 2]), &p), p);
        assert_eq!(projection(&set(&[2]), &p), cond(2, &[]));
        let e = Poset::antichain(3);
        assert!(extends(&e, &p, &projection(&set(&[1]), &p)));
    }

    #[test]
    fn quotient_membership() {
        let ups: BTreeMap<usize, Vec<u64>> = [(0, vec![0, 0, 1, 2])].into();
        let sub = set(&[0]);
        assert!(quotient_member(&sub, &ups, &cond(3, &[(1, &[0, 0, 1])])).unwrap());
        assert!(quotient_member(&sub, &ups, &cond(3, &[(0, &[0, 0, 1])])).unwrap());
        assert!(!quotient_member(&sub, &ups, &cond(3, &[(0, &[0, 0, 0])])).unwrap());
        assert!(matches!(
            quotient_member(&sub, &ups, &cond(5, &[(0, &[0, 0, 1, 2, 0])])),
            Err(ForcingError::Depth { have: 4, need: 5 })
        ));
    }

    #[test]
    fn json_shape() {
        let p = cond(3, &[(0, &[0, 0, 1])]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"D":[0],"n":3,"f":{"0":[0,0,1]}}"#);
        assert_eq!(serde_json::from_str::<Condition>(&text).unwrap(), p);
    }

    #[test]
    fn counts() {
        assert_eq!(all_sequences(4).len(), 6);
        // depth 0..=2 leaves only zeros: 3 depths for each of 4 domains
        assert_eq!(enumerate_conditions(&[0, 1], 2).len(), 12);
    }
}
