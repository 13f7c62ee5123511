//! Enumeration of small posets, labelled and up to isomorphism.

use std::collections::BTreeMap;

use super::Poset;

/// Every poset on `0..n` in which `a < b` implies `a < b` as integers.
/// Each isomorphism type appears at least once.
pub fn naturally_labeled_posets(n: usize) -> Vec<Poset> {
    let mut layer = vec![Poset::antichain(0)];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &layer {
            // the new element k sits above a down-closed set of predecessors
            for mask in 0u32..(1 << k) {
                let below: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
                let down_closed = below
                    .iter()
                    .all(|&b| (0..k).all(|c| !p.lt(c, b) || mask >> c & 1 == 1));
                if !down_closed {
                    continue;
                }
                let m = k + 1;
                let mut lt = vec![false; m * m];
                for a in 0..k {
                    for b in 0..k {
                        lt[a * m + b] = p.lt(a, b);
                    }
                }
                for &b in &below {
                    lt[b * m + k] = true;
                }
                next.push(Poset { n: m, lt });
            }
        }
        layer = next;
    }
    layer
}

fn relabelled_key(p: &Poset, perm: &[usize]) -> u64 {
    let n = p.len();
    let mut key = 0u64;
    for a in 0..n {
        for b in 0..n {
            if p.lt(a, b) {
                key |= 1 << (perm[a] * n + perm[b]);
            }
        }
    }
    key
}

fn canonical_key(p: &Poset, perms: &[Vec<usize>]) -> u64 {
    perms.iter().map(|perm| relabelled_key(p, perm)).min().unwrap_or(0)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative of each isomorphism type of poset with `n` elements.
/// Supports `n <= 8`.
pub fn posets_up_to_iso(n: usize) -> Vec<Poset> {
    assert!(n <= 8, "isomorphism-type enumeration is limited to 8 elements");
    let perms = permutations(n);
    let mut seen: BTreeMap<u64, Poset> = BTreeMap::new();
    for p in naturally_labeled_posets(n) {
        seen.entry(canonical_key(&p, &perms)).or_insert(p);
    }
    seen.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphism_type_counts() {
        // unlabelled poset counts 1, 1, 2, 5, 16, 63
        let counts: Vec<usize> = (0..=5).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn naturally_labeled_counts() {
        // 1, 1, 2, 7, 40, 357
        let counts: Vec<usize> = (0..=5).map(|n| naturally_labeled_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 7, 40, 357]);
    }
}
