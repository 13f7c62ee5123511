//! Building a generic embedding by meeting a schedule of dense sets.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{enter_d, enter_e, strict_witness, Condition, ForcingError};
use crate::order::Poset;
use crate::seq::{leq_from, SeqFun};

/// A dense set to meet: depth at least `n` with `a` in the domain, or a
/// coordinate `k >= n` where `f(a)(k) < f(b)(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DenseRequest {
    D { n: usize, a: usize },
    E { n: usize, a: usize, b: usize },
}

fn rounds(e: &Poset, elements: &[usize], depth: usize) -> Vec<Vec<DenseRequest>> {
    let mut out = Vec::new();
    for n in 0..=depth {
        out.push(elements.iter().map(|&a| DenseRequest::D { n, a }).collect());
    }
    for n in 0..=depth {
        let mut round = Vec::new();
        for &a in elements {
            for &b in elements {
                if a != b && !e.le(b, a) {
                    round.push(DenseRequest::E { n, a, b });
                }
            }
        }
        out.push(round);
    }
    out
}

/// Every `D(n, a)` for `n <= depth`, then every `E(n, a, b)` with `b` not
/// below-or-equal `a`, round by round in lexicographic order.
pub fn default_schedule(e: &Poset, elements: &[usize], depth: usize) -> Vec<DenseRequest> {
    rounds(e, elements, depth).concat()
}

/// The default schedule with each round shuffled by `seed`.
pub fn shuffled_schedule(e: &Poset, elements: &[usize], depth: usize, seed: u64) -> Vec<DenseRequest> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rs = rounds(e, elements, depth);
    for r in &mut rs {
        r.shuffle(&mut rng);
    }
    rs.concat()
}

/// The map read off the final condition of a schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericEmbedding {
    /// depth requested by the schedule
    pub requested: usize,
    /// depth of the final condition, at least `requested`
    pub depth: usize,
    pub y: BTreeMap<usize, Vec<u64>>,
    /// depth at which both elements of the pair were in the domain
    pub thresholds: BTreeMap<(usize, usize), usize>,
    /// for `b` not below-or-equal `a`: every `k` with `Y(a)(k) < Y(b)(k)`
    pub witnesses: BTreeMap<(usize, usize), Vec<usize>>,
    pub condition: Condition,
}

impl GenericEmbedding {
    pub fn elements(&self) -> Vec<usize> {
        self.y.keys().copied().collect()
    }

    pub fn threshold(&self, a: usize, b: usize) -> usize {
        self.thresholds[&(a.min(b), a.max(b))]
    }

    /// Least `k >= from` with `Y(a)(k) < Y(b)(k)`.
    pub fn strict_from(&self, a: usize, b: usize, from: usize) -> Option<usize> {
        strict_witness(&self.condition, from, a, b)
    }
}

fn pair_key((a, b): &(usize, usize)) -> String {
    format!("{a},{b}")
}

#[derive(Serialize)]
struct GenericJson<'a> {
    requested: usize,
    depth: usize,
    #[serde(rename = "Y")]
    y: BTreeMap<String, &'a Vec<u64>>,
    thresholds: BTreeMap<String, usize>,
    witnesses: BTreeMap<String, &'a Vec<usize>>,
}

impl Serialize for GenericEmbedding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GenericJson {
            requested: self.requested,
            depth: self.depth,
            y: self.y.iter().map(|(a, v)| (a.to_string(), v)).collect(),
            thresholds: self.thresholds.iter().map(|(k, &v)| (pair_key(k), v)).collect(),
            witnesses: self.witnesses.iter().map(|(k, v)| (pair_key(k), v)).collect(),
        }
        .serialize(s)
    }
}

fn note(q: &Condition, entered: &mut BTreeMap<usize, usize>) {
    for &a in q.f.keys() {
        entered.entry(a).or_insert(q.n);
    }
}

/// Meets every request in order starting from the empty condition. Every
/// element of `elements` must be entered by some `D` or `E` request.
pub fn generic_build(
    e: &Poset,
    elements: &[usize],
    depth: usize,
    schedule: &[DenseRequest],
) -> Result<GenericEmbedding, ForcingError> {
    let allowed: BTreeSet<usize> = elements.iter().copied().collect();
    if let Some(&bad) = allowed.iter().find(|&&a| a >= e.len()) {
        return Err(ForcingError::Schedule(bad));
    }
    for r in schedule {
        let (DenseRequest::D { a, .. } | DenseRequest::E { a, .. }) = *r;
        let b = match *r {
            DenseRequest::E { b, .. } => b,
            _ => a,
        };
        for x in [a, b] {
            if !allowed.contains(&x) {
                return Err(ForcingError::Schedule(x));
            }
        }
    }
    let mut q = Condition::empty();
    let mut entered: BTreeMap<usize, usize> = BTreeMap::new();
    for r in schedule {
        match *r {
            DenseRequest::D { n, a } => enter_d(e, &mut q, n, a),
            DenseRequest::E { n, a, b } => {
                // entering a and b happens before new coordinates are added
                if !q.contains(a) {
                    enter_d(e, &mut q, 0, a);
                    note(&q, &mut entered);
                }
                if !q.contains(b) {
                    enter_d(e, &mut q, 0, b);
                    note(&q, &mut entered);
                }
                enter_e(e, &mut q, n, a, b)?;
            }
        }
        note(&q, &mut entered);
    }
    for &a in elements {
        if !q.contains(a) {
            return Err(ForcingError::Precondition(format!("schedule never enters element {a}")));
        }
    }
    let mut thresholds = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for &a in elements {
        for &b in elements {
            if a < b {
                thresholds.insert((a, b), entered[&a].max(entered[&b]));
            }
            if a != b && !e.le(b, a) {
                let (ya, yb) = (&q.f[&a], &q.f[&b]);
                witnesses.insert((a, b), (0..q.n).filter(|&k| ya[k] < yb[k]).collect());
            }
        }
    }
    Ok(GenericEmbedding {
        requested: depth,
        depth: q.n,
        y: elements.iter().map(|&a| (a, q.f[&a].clone())).collect(),
        thresholds,
        witnesses,
        condition: q,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericReport {
    pub ok: bool,
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

/// Checks that `a <= b` iff `Y(a) <= Y(b)` from the pair's threshold on,
/// that `Y` is injective, that every recorded witness is genuine, and that
/// for `b` not below-or-equal `a` a witness `k >= max(n, threshold)` exists
/// for every `n <= upto`.
pub fn verify_generic(e: &Poset, g: &GenericEmbedding, upto: usize) -> GenericReport {
    let mut failures = Vec::new();
    let mut pairs = 0;
    let seq = |a: usize| {
        SeqFun::index_bounded(&g.y[&a]).map_err(|err| format!("Y({a}) is not index-bounded: {err}"))
    };
    let els = g.elements();
    for &a in &els {
        if let Err(msg) = seq(a) {
            failures.push(msg);
        }
    }
    if !failures.is_empty() {
        return GenericReport { ok: false, pairs_checked: 0, failures };
    }
    for &a in &els {
        for &b in &els {
            if a == b {
                continue;
            }
            pairs += 1;
            let m = g.threshold(a, b);
            if g.y[&a] == g.y[&b] {
                failures.push(format!("Y({a}) = Y({b})"));
            }
            let leq = leq_from(&seq(a).unwrap(), &seq(b).unwrap(), m).expect("same profile");
            if leq != e.le(a, b) {
                failures.push(format!(
                    "{a} <= {b} is {} but Y({a}) <= Y({b}) from {m} is {leq}",
                    e.le(a, b)
                ));
            }
            if let Some(ws) = g.witnesses.get(&(a, b)) {
                for &k in ws {
                    if g.y[&a][k] >= g.y[&b][k] {
                        failures.push(format!("witness {k} for ({a},{b}) does not verify"));
                    }
                }
                for n in 0..=upto {
                    let from = n.max(m);
                    if !ws.iter().any(|&k| k >= from) {
                        failures.push(format!("no witness k >= {from} for ({a},{b})"));
                        break;
                    }
                }
            } else if !e.le(b, a) {
                failures.push(format!("witnesses for ({a},{b}) were not recorded"));
            }
        }
    }
    GenericReport {
        ok: failures.is_empty(),
        pairs_checked: pairs,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(e: &Poset, depth: usize) -> GenericEmbedding {
        let els: Vec<usize> = e.elements().collect();
        generic_build(e, &els, depth, &default_schedule(e, &els, depth)).unwrap()
    }

    #[test]
    fn singleton_is_all_zero() {
        let g = build(&Poset::antichain(1), 4);
        assert_eq!(g.y[&0], vec![0; 4]);
        assert_eq!(g.depth, 4);
        assert!(verify_generic(&Poset::antichain(1), &g, 4).ok);
    }

    #[test]
    fn antichain_gets_witnesses_both_ways() {
        let e = Poset::antichain(2);
        let g = build(&e, 3);
        let ab = &g.witnesses[&(0, 1)];
        let ba = &g.witnesses[&(1, 0)];
        assert!(!ab.is_empty() && !ba.is_empty());
        assert!(ab.iter().all(|k| !ba.contains(k)));
        let r = verify_generic(&e, &g, 3);
        assert!(r.ok, "{:?}", r.failures);
    }

    #[test]
    fn small_posets_embed() {
        for e in crate::order::posets_up_to_iso(4) {
            let g = build(&e, 6);
            assert!(g.depth >= 6);
            let r = verify_generic(&e, &g, 6);
            assert!(r.ok, "{:?}", r.failures);
        }
    }

    #[test]
    fn shuffled_schedules_also_embed() {
        let e = Poset::from_edges(4, &[(0, 1), (0, 2), (2, 3)]).unwrap();
        let els: Vec<usize> = e.elements().collect();
        for seed in 0..5 {
            let s = shuffled_schedule(&e, &els, 5, seed);
            assert_eq!(s.len(), default_schedule(&e, &els, 5).len());
            let g = generic_build(&e, &els, 5, &s).unwrap();
            assert!(verify_generic(&e, &g, 5).ok);
        }
    }

    #[test]
    fn schedule_errors() {
        let e = Poset::antichain(2);
        let bad = [DenseRequest::D { n: 0, a: 7 }];
        assert_eq!(generic_build(&e, &[0, 1], 0, &bad), Err(ForcingError::Schedule(7)));
        let missing = [DenseRequest::D { n: 0, a: 0 }];
        assert!(generic_build(&e, &[0, 1], 0, &missing).is_err());
    }

    #[test]
    fn subposet_keys_are_ambient_ids() {
        let e = Poset::chain(4);
        let g = generic_build(&e, &[1, 3], 2, &default_schedule(&e, &[1, 3], 2)).unwrap();
        assert_eq!(g.elements(), vec![1, 3]);
        assert!(verify_generic(&e, &g, 2).ok);
    }
}
