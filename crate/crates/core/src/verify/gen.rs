//! Seeded random instances for the property suites.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::depletion::DepletionInstance;
use crate::forcing::{bound, Condition};
use crate::order::Poset;
use crate::product::{Filter, FiniteStructure, ReducedProduct, Relation};

/// A poset on `0..n`: edges between positions of a random permutation,
/// each present with probability `p`, closed transitively.
pub fn poset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Poset {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((perm[i], perm[j]));
            }
        }
    }
    Poset::from_edges(n, &edges).expect("edges follow a permutation")
}

/// Up to `max_elems` elements spread over a core and `2..=max_indices`
/// fibers.
pub fn depletion<R: Rng>(rng: &mut R, max_elems: usize, max_indices: usize) -> DepletionInstance {
    let m = rng.gen_range(2..=max_indices);
    let n = rng.gen_range(m.min(max_elems)..=max_elems);
    let core_p = rng.gen_range(0.0..0.3);
    let mut core = Vec::new();
    let mut fibers = vec![Vec::new(); m];
    for x in 0..n {
        if rng.gen_bool(core_p) {
            core.push(x);
        } else {
            fibers[rng.gen_range(0..m)].push(x);
        }
    }
    let edge_p = rng.gen_range(0.15..0.6);
    let labels = (0..m).map(|i| i.to_string()).collect();
    DepletionInstance::new(labels, core, fibers, poset(rng, n, edge_p)).expect("valid by construction")
}

/// Random values of length `len` within the coordinate bounds.
pub fn sequence<R: Rng>(rng: &mut R, len: usize) -> Vec<u64> {
    (0..len).map(|k| rng.gen_range(0..bound(k))).collect()
}

/// Values at coordinate `k` for the elements of `dom` that respect `<=` of
/// `e`: each element takes the maximum of raw draws over its down-set.
pub fn monotone_column<R: Rng>(rng: &mut R, e: &Poset, dom: &[usize], k: usize) -> BTreeMap<usize, u64> {
    let raw: BTreeMap<usize, u64> = dom.iter().map(|&a| (a, rng.gen_range(0..bound(k)))).collect();
    dom.iter()
        .map(|&a| {
            let v = dom.iter().filter(|&&b| e.le(b, a)).map(|b| raw[b]).max().unwrap();
            (a, v)
        })
        .collect()
}

pub fn condition<R: Rng>(rng: &mut R, e: &Poset, depth: usize) -> Condition {
    let mut f = BTreeMap::new();
    for a in e.elements() {
        if rng.gen_bool(0.6) {
            f.insert(a, sequence(rng, depth));
        }
    }
    Condition::new(depth, f)
}

/// A random `q <= p` over `e`, adding up to `extra` coordinates and new
/// elements drawn from `allowed`.
pub fn extension<R: Rng>(rng: &mut R, e: &Poset, p: &Condition, allowed: &[usize], extra: usize) -> Condition {
    let n = p.n + rng.gen_range(0..=extra);
    let old: Vec<usize> = p.f.keys().copied().collect();
    let mut f = p.f.clone();
    for k in p.n..n {
        let col = monotone_column(rng, e, &old, k);
        for (a, v) in &col {
            f.get_mut(a).unwrap().push(*v);
        }
    }
    for &a in allowed {
        if !f.contains_key(&a) && rng.gen_bool(0.4) {
            f.insert(a, sequence(rng, n));
        }
    }
    Condition::new(n, f)
}

/// A family of conditions whose domains pairwise meet exactly in `root`,
/// agreeing on the root, with root values monotone from the shallowest depth
/// on.
pub struct PartFamily {
    pub e: Poset,
    pub root: BTreeSet<usize>,
    pub parts: Vec<Condition>,
}

pub fn part_family<R: Rng>(rng: &mut R, max_elems: usize, max_depth: usize) -> PartFamily {
    let n = rng.gen_range(2..=max_elems);
    let edge_p = rng.gen_range(0.1..0.6);
    let e = poset(rng, n, edge_p);
    let k = rng.gen_range(2..=3);
    let mut root = BTreeSet::new();
    let mut groups = vec![Vec::new(); k];
    for a in 0..n {
        if rng.gen_bool(0.35) {
            root.insert(a);
        } else {
            groups[rng.gen_range(0..k)].push(a);
        }
    }
    let depths: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=max_depth)).collect();
    let shallow = *depths.iter().min().unwrap();
    let deep = *depths.iter().max().unwrap();
    let root_list: Vec<usize> = root.iter().copied().collect();
    let mut rv: BTreeMap<usize, Vec<u64>> = root_list.iter().map(|&a| (a, Vec::new())).collect();
    for j in 0..deep {
        if j < shallow {
            for v in rv.values_mut() {
                v.push(rng.gen_range(0..bound(j)));
            }
        } else {
            for (a, x) in monotone_column(rng, &e, &root_list, j) {
                rv.get_mut(&a).unwrap().push(x);
            }
        }
    }
    let parts = groups
        .iter()
        .zip(&depths)
        .map(|(g, &d)| {
            let mut f: BTreeMap<usize, Vec<u64>> = rv.iter().map(|(&a, v)| (a, v[..d].to_vec())).collect();
            for &a in g {
                f.insert(a, sequence(rng, d));
            }
            Condition::new(d, f)
        })
        .collect();
    PartFamily { e, root, parts }
}

/// Factors of size 1..=3 with a binary `R` and a unary `P`, over a principal
/// filter with a random nonempty kernel.
pub fn reduced_product<R: Rng>(rng: &mut R, max_factors: usize) -> ReducedProduct {
    let k = rng.gen_range(1..=max_factors);
    let factors = (0..k)
        .map(|_| {
            let size = rng.gen_range(1..=3);
            let p = rng.gen_range(0.2..0.8);
            let mut rels = BTreeMap::new();
            let r: BTreeSet<Vec<usize>> = (0..size)
                .flat_map(|a| (0..size).map(move |b| vec![a, b]))
                .filter(|_| rng.gen_bool(p))
                .collect();
            let u: BTreeSet<Vec<usize>> = (0..size).map(|a| vec![a]).filter(|_| rng.gen_bool(p)).collect();
            rels.insert("R".to_string(), Relation { arity: 2, tuples: r });
            rels.insert("P".to_string(), Relation { arity: 1, tuples: u });
            FiniteStructure::new(size, rels).expect("valid by construction")
        })
        .collect();
    let mut kernel: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
    if kernel.is_empty() {
        kernel.push(rng.gen_range(0..k));
    }
    let filter = Filter::principal(k, &kernel).expect("nonempty kernel");
    ReducedProduct::new(factors, filter).expect("one language")
}
