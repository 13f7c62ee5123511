//! Splitting `E = A ∪ B` over `D = A ∩ B` and the projection pair
//! `p ↦ (π_A(p), π_B(p))`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{amalgamate, enumerate_conditions, extends, projection, Condition, ForcingError};
use crate::order::Poset;

/// `E = A ∪ B` with `D = A ∩ B` interpolating every comparison between
/// `A` and `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitInstance {
    e: Poset,
    a: BTreeSet<usize>,
    b: BTreeSet<usize>,
    d: BTreeSet<usize>,
}

impl SplitInstance {
    /// Checks that `A ∪ B` is all of `E` and that for `x ∈ A`, `y ∈ B`:
    /// `x <= y` iff `x <= d <= y` for some `d ∈ D`, and `x >= y` iff
    /// `x >= d >= y` for some `d ∈ D`.
    pub fn new(e: Poset, a: BTreeSet<usize>, b: BTreeSet<usize>) -> Result<Self, ForcingError> {
        let all: BTreeSet<usize> = e.elements().collect();
        let union: BTreeSet<usize> = a.union(&b).copied().collect();
        if union != all {
            return Err(ForcingError::Hypothesis(format!("A ∪ B = {union:?}, E = {all:?}")));
        }
        let d: BTreeSet<usize> = a.intersection(&b).copied().collect();
        for &x in &a {
            for &y in &b {
                let up = d.iter().any(|&z| e.le(x, z) && e.le(z, y));
                if e.le(x, y) != up {
                    return Err(ForcingError::Hypothesis(format!("{x} <= {y} is not interpolated by D")));
                }
                let down = d.iter().any(|&z| e.le(y, z) && e.le(z, x));
                if e.le(y, x) != down {
                    return Err(ForcingError::Hypothesis(format!("{y} <= {x} is not interpolated by D")));
                }
            }
        }
        Ok(SplitInstance { e, a, b, d })
    }

    pub fn poset(&self) -> &Poset {
        &self.e
    }

    pub fn a(&self) -> &BTreeSet<usize> {
        &self.a
    }

    pub fn b(&self) -> &BTreeSet<usize> {
        &self.b
    }

    pub fn d(&self) -> &BTreeSet<usize> {
        &self.d
    }
}

pub fn split_project(inst: &SplitInstance, p: &Condition) -> (Condition, Condition) {
    (projection(&inst.a, p), projection(&inst.b, p))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub conditions: usize,
    pub pairs_checked: usize,
    pub incompatible_pairs: usize,
    pub failures: Vec<String>,
}

/// Density of the projection pair, checked exhaustively.
///
/// For every `p` over `E` with `D ⊆ D_p` and depth at most `p_depth`, and
/// every `q_A <= π_A(p)`, `q_B <= π_B(p)` of depth at most `q_depth`: if the
/// two are compatible, their amalgamation `r` must satisfy `r <= p`,
/// `π_A(r) <= q_A` and `π_B(r) <= q_B`.
pub fn split_density_check(inst: &SplitInstance, p_depth: usize, q_depth: usize) -> DensityReport {
    let e = &inst.e;
    let all: Vec<usize> = e.elements().collect();
    let a_list: Vec<usize> = inst.a.iter().copied().collect();
    let b_list: Vec<usize> = inst.b.iter().copied().collect();
    let qa_all = enumerate_conditions(&a_list, q_depth);
    let qb_all = enumerate_conditions(&b_list, q_depth);
    let mut report = DensityReport {
        conditions: 0,
        pairs_checked: 0,
        incompatible_pairs: 0,
        failures: vec![],
    };
    for p in enumerate_conditions(&all, p_depth) {
        if !inst.d.iter().all(|d| p.contains(*d)) {
            continue;
        }
        report.conditions += 1;
        let (pa, pb) = split_project(inst, &p);
        let qas: Vec<&Condition> = qa_all.iter().filter(|q| extends(e, q, &pa)).collect();
        let qbs: Vec<&Condition> = qb_all.iter().filter(|q| extends(e, q, &pb)).collect();
        for qa in &qas {
            for qb in &qbs {
                report.pairs_checked += 1;
                let root: BTreeSet<usize> = qa.domain().intersection(&qb.domain()).copied().collect();
                let Ok(r) = amalgamate(e, &[(*qa).clone(), (*qb).clone()], &root) else {
                    report.incompatible_pairs += 1;
                    continue;
                };
                let (ra, rb) = split_project(inst, &r);
                if !(extends(e, &r, &p) && extends(e, &ra, qa) && extends(e, &rb, qb))
                    && report.failures.len() < 10 {
                        report.failures.push(format!(
                            "p = {}, q_A = {}, q_B = {}",
                            serde_json::to_string(&p).unwrap(),
                            serde_json::to_string(qa).unwrap(),
                            serde_json::to_string(qb).unwrap()
                        ));
                    }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn hypothesis_is_checked() {
        // 0 < 1 < 2 split at 1
        let e = Poset::chain(3);
        assert!(SplitInstance::new(e.clone(), set(&[0, 1]), set(&[1, 2])).is_ok());
        // without the middle element in D the comparison 0 < 2 is not interpolated
        assert!(matches!(
            SplitInstance::new(e.clone(), set(&[0, 1]), set(&[2])),
            Err(ForcingError::Hypothesis(_))
        ));
        assert!(SplitInstance::new(e, set(&[0]), set(&[1])).is_err());
    }

    #[test]
    fn projections_of_simple_conditions() {
        let e = Poset::chain(3);
        let inst = SplitInstance::new(e, set(&[0, 1]), set(&[1, 2])).unwrap();
        let p = Condition::new(3, [(1, vec![0, 0, 1])].into());
        assert_eq!(split_project(&inst, &p), (p.clone(), p.clone()));
        let p = Condition::new(3, [(0, vec![0, 0, 1])].into());
        assert!(split_project(&inst, &p).1.f.is_empty());
    }

    #[test]
    fn density_on_a_three_chain() {
        let inst = SplitInstance::new(Poset::chain(3), set(&[0, 1]), set(&[1, 2])).unwrap();
        let r = split_density_check(&inst, 3, 4);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert!(r.pairs_checked > 0);
    }

    #[test]
    fn density_needs_d_in_the_domain() {
        // p omits the interpolant 1; q_A pushes 0 above q_B's value for 2
        let e = Poset::chain(3);
        let inst = SplitInstance::new(e.clone(), set(&[0, 1]), set(&[1, 2])).unwrap();
        let p = Condition::new(3, [(0, vec![0, 0, 0]), (2, vec![0, 0, 0])].into());
        let qa = Condition::new(4, [(0, vec![0, 0, 0, 2])].into());
        let qb = Condition::new(4, [(2, vec![0, 0, 0, 0])].into());
        let (pa, pb) = split_project(&inst, &p);
        assert!(extends(&e, &qa, &pa) && extends(&e, &qb, &pb));
        let any = enumerate_conditions(&[0, 1, 2], 4).into_iter().any(|r| {
            let (ra, rb) = split_project(&inst, &r);
            extends(&e, &r, &p) && extends(&e, &ra, &qa) && extends(&e, &rb, &qb)
        });
        assert!(!any);
    }
}
