use std::collections::BTreeSet;

use num_bigint::BigUint;
use ordlab::order::RelStructure;
use ordlab::ternary::HereditaryNat;
use ordlab::universal::{
    check_witness_property, embed_structure, embedding_mismatch, rel, rel_u64, set_of, witness, Rel,
};
use proptest::prelude::*;

fn digit(n: u64, m: u64) -> u64 {
    if m >= 41 {
        0
    } else {
        n / 3u64.pow(m as u32) % 3
    }
}

fn disjoint_sets() -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    proptest::collection::btree_map(0u64..30, any::<bool>(), 0..6).prop_map(|m| {
        let f = m.iter().filter(|(_, &b)| b).map(|(&k, _)| k).collect();
        let g = m.iter().filter(|(_, &b)| !b).map(|(&k, _)| k).collect();
        (f, g)
    })
}

proptest! {
    #[test]
    fn relation_is_asymmetric(m in 0u64..531_441, n in 0u64..531_441) {
        let (r, s) = (rel_u64(m, n), rel_u64(n, m));
        prop_assert_eq!(r, s.flip());
        if m == n {
            prop_assert_eq!(r, Rel::Unrelated);
        }
    }

    #[test]
    fn relation_reads_the_digit(m in 0u64..200, n in 0u64..100_000) {
        prop_assume!(m < n);
        let want = match digit(n, m) { 1 => Rel::Forward, 2 => Rel::Backward, _ => Rel::Unrelated };
        prop_assert_eq!(rel_u64(m, n), want);
    }

    #[test]
    fn witness_sum((f, g) in disjoint_sets()) {
        let n = witness(&set_of(&f), &set_of(&g)).unwrap();
        let want: u64 = f.iter().map(|&m| 3u64.pow(m as u32)).sum::<u64>()
            + g.iter().map(|&m| 2 * 3u64.pow(m as u32)).sum::<u64>();
        prop_assert_eq!(n.to_u64(), Some(want));
        prop_assert!(check_witness_property(&f, &g, &n).is_none());
    }

    #[test]
    fn hereditary_order_matches_integers(a: u64, b: u64) {
        let (x, y) = (HereditaryNat::from(a), HereditaryNat::from(b));
        prop_assert_eq!(x.cmp(&y), a.cmp(&b));
        prop_assert_eq!(x.to_u64(), Some(a));
        prop_assert_eq!(x.to_string().parse::<HereditaryNat>().unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_structures_embed(n in 1usize..9, bits: u64) {
        let mut pairs = Vec::new();
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                match bits >> (2 * (k % 32)) & 3 {
                    1 => pairs.push((a, b)),
                    2 => pairs.push((b, a)),
                    _ => {}
                }
                k += 1;
            }
        }
        let s = RelStructure::new(n, &pairs).unwrap();
        let map = embed_structure(&s);
        prop_assert_eq!(embedding_mismatch(&s, &map), None);
        for w in map.images.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }
}

#[test]
fn overlapping_sets_are_rejected() {
    assert!(witness(&set_of(&[1, 2]), &set_of(&[2])).is_err());
}

#[test]
fn empty_sets_give_zero() {
    assert!(witness(&BTreeSet::new(), &BTreeSet::new()).unwrap().is_zero());
}

#[test]
fn long_chain_images_outgrow_machine_words() {
    let pairs: Vec<(usize, usize)> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
    let s = RelStructure::new(6, &pairs).unwrap();
    let map = embed_structure(&s);
    assert!(map.images.last().unwrap().to_u64().is_none());
    assert_eq!(embedding_mismatch(&s, &map), None);
    // the first few images are small enough to cross-check in binary
    let small: Vec<BigUint> = map.images[..3]
        .iter()
        .map(|h| h.to_biguint_bounded(64).unwrap())
        .collect();
    assert!(small[0] < small[1] && small[1] < small[2]);
    assert_eq!(rel(&map.images[0], &map.images[5]), Rel::Forward);
}
