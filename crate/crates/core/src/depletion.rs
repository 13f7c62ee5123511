//! Depletions of a partial order over a fibered set, and the walks that
//! witness them.
//!
//! An instance has an index chain `I` (positions `0..m`), a core set `A`
//! and one fiber per index. An index subset `s` is a sorted list of
//! positions; its levels are the positions of `s` in increasing order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{OrderError, Poset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DepletionError {
    #[error("element {0} lies in more than one part")]
    Overlap(usize),
    #[error("element {0} lies in no part")]
    Unassigned(usize),
    #[error("an instance needs at least two indices, got {0}")]
    TooFewIndices(usize),
    #[error("index {0} is out of range")]
    Index(usize),
    #[error("index subset must have at least two indices")]
    ShortSubset,
    #[error("element {element} is not in the domain of the subset")]
    Membership { element: usize },
    #[error("endpoints must sit in the extreme fibers of the subset: {0}")]
    Level(String),
    #[error("unknown index label {0:?}")]
    Label(String),
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    Core,
    Fiber(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepletionInstance {
    labels: Vec<String>,
    core: Vec<usize>,
    fibers: Vec<Vec<usize>>,
    order: Poset,
    part: Vec<Part>,
}

impl DepletionInstance {
    /// Every element of `order` must lie in exactly one of `core` and the
    /// fibers; `fibers[i]` belongs to `labels[i]`.
    pub fn new(
        labels: Vec<String>,
        core: Vec<usize>,
        fibers: Vec<Vec<usize>>,
        order: Poset,
    ) -> Result<Self, DepletionError> {
        if labels.len() < 2 {
            return Err(DepletionError::TooFewIndices(labels.len()));
        }
        assert_eq!(labels.len(), fibers.len(), "one fiber per label");
        let n = order.len();
        let mut part: Vec<Option<Part>> = vec![None; n];
        let mut assign = |e: usize, p: Part| -> Result<(), DepletionError> {
            if e >= n {
                return Err(OrderError::OutOfRange { element: e, len: n }.into());
            }
            if part[e].is_some() {
                return Err(DepletionError::Overlap(e));
            }
            part[e] = Some(p);
            Ok(())
        };
        for &a in &core {
            assign(a, Part::Core)?;
        }
        for (i, fib) in fibers.iter().enumerate() {
            for &x in fib {
                assign(x, Part::Fiber(i))?;
            }
        }
        let part = part
            .into_iter()
            .enumerate()
            .map(|(e, p)| p.ok_or(DepletionError::Unassigned(e)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut core = core;
        core.sort_unstable();
        let fibers = fibers
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f
            })
            .collect();
        Ok(DepletionInstance {
            labels,
            core,
            fibers,
            order,
            part,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_count(&self) -> usize {
        self.labels.len()
    }

    pub fn core(&self) -> &[usize] {
        &self.core
    }

    pub fn fiber(&self, i: usize) -> &[usize] {
        &self.fibers[i]
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn part(&self, x: usize) -> Part {
        self.part[x]
    }

    pub fn label_position(&self, label: &str) -> Result<usize, DepletionError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| DepletionError::Label(label.to_string()))
    }

    /// Sorts, dedups and range-checks an index subset.
    pub fn subset(&self, s: &[usize]) -> Result<Vec<usize>, DepletionError> {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&bad) = s.iter().find(|&&i| i >= self.index_count()) {
            return Err(DepletionError::Index(bad));
        }
        if s.len() < 2 {
            return Err(DepletionError::ShortSubset);
        }
        Ok(s)
    }

    pub fn full_subset(&self) -> Vec<usize> {
        (0..self.index_count()).collect()
    }

    /// `A` together with the fibers indexed by `s`, in increasing id order.
    pub fn domain(&self, s: &[usize]) -> Vec<usize> {
        (0..self.order.len())
            .filter(|&x| match self.part[x] {
                Part::Core => true,
                Part::Fiber(i) => s.contains(&i),
            })
            .collect()
    }

    fn in_domain(&self, s: &[usize], x: usize) -> bool {
        x < self.order.len()
            && match self.part[x] {
                Part::Core => true,
                Part::Fiber(i) => s.contains(&i),
            }
    }

    fn level_in(&self, s: &[usize], x: usize) -> Option<usize> {
        match self.part[x] {
            Part::Fiber(i) => s.iter().position(|&j| j == i),
            Part::Core => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ascending,
    Descending,
}

/// One element per index in `s`, listed by index. Ascending walks increase
/// in the order as the index grows; descending walks decrease.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub s: Vec<usize>,
    pub steps: Vec<usize>,
    pub direction: Direction,
}

/// Result of a walk search that found nothing: the last level reached and
/// the elements reachable there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frontier {
    pub index: usize,
    pub reachable: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WalkOutcome {
    Found(Walk),
    None { frontier: Frontier },
}

impl WalkOutcome {
    pub fn walk(&self) -> Option<&Walk> {
        match self {
            WalkOutcome::Found(w) => Some(w),
            WalkOutcome::None { .. } => None,
        }
    }
}

/// Layered search over the indices `path` (in walk order), starting at
/// the elements `start` and following `<=` from each layer to the next.
/// Returns per-layer parents when `goal` is reached.
fn layered_search(
    inst: &DepletionInstance,
    path: &[usize],
    start: &[usize],
    goal: impl Fn(usize) -> bool,
) -> Result<Vec<usize>, Frontier> {
    let ord = &inst.order;
    // layers[l] = (element, parent position in layers[l-1])
    let mut layers: Vec<Vec<(usize, usize)>> = vec![start.iter().map(|&x| (x, 0)).collect()];
    for &idx in &path[1..] {
        let prev = layers.last().unwrap();
        let mut next = Vec::new();
        for &z in inst.fiber(idx) {
            if let Some(p) = prev.iter().position(|&(w, _)| ord.le(w, z)) {
                next.push((z, p));
            }
        }
        if next.is_empty() {
            let last = path[layers.len() - 1];
            return Err(Frontier {
                index: last,
                reachable: prev.iter().map(|&(w, _)| w).collect(),
            });
        }
        layers.push(next);
    }
    let last = layers.last().unwrap();
    let Some(mut pos) = last.iter().position(|&(z, _)| goal(z)) else {
        return Err(Frontier {
            index: *path.last().unwrap(),
            reachable: last.iter().map(|&(z, _)| z).collect(),
        });
    };
    let mut rev = Vec::with_capacity(layers.len());
    for layer in layers.iter().rev() {
        let (z, p) = layer[pos];
        rev.push(z);
        pos = p;
    }
    rev.reverse();
    Ok(rev)
}

/// Walk from `x` to `y` through every index of `s` between their levels.
/// Both must be fiber elements at distinct levels of `s`.
fn walk_between(inst: &DepletionInstance, s: &[usize], x: usize, y: usize) -> WalkOutcome {
    let lx = inst.level_in(s, x).expect("x in a fiber of s");
    let ly = inst.level_in(s, y).expect("y in a fiber of s");
    let (path, direction): (Vec<usize>, _) = if lx < ly {
        (s[lx..=ly].to_vec(), Direction::Ascending)
    } else {
        (s[ly..=lx].iter().rev().copied().collect(), Direction::Descending)
    };
    match layered_search(inst, &path, &[x], |z| z == y) {
        Ok(mut steps) => {
            let mut idx = path;
            if direction == Direction::Descending {
                steps.reverse();
                idx.reverse();
            }
            WalkOutcome::Found(Walk {
                s: idx,
                steps,
                direction,
            })
        }
        Err(frontier) => WalkOutcome::None { frontier },
    }
}

/// Searches for a walk between `x` and `y` along `s`. The endpoints must sit
/// in the fibers of `min s` and `max s`, in either order.
pub fn find_walk(
    inst: &DepletionInstance,
    s: &[usize],
    x: usize,
    y: usize,
) -> Result<WalkOutcome, DepletionError> {
    let s = inst.subset(s)?;
    for e in [x, y] {
        if !inst.in_domain(&s, e) {
            return Err(DepletionError::Membership { element: e });
        }
    }
    let (lo, hi) = (s[0], *s.last().unwrap());
    let ok = matches!(
        (inst.part(x), inst.part(y)),
        (Part::Fiber(i), Part::Fiber(j)) if (i == lo && j == hi) || (i == hi && j == lo)
    );
    if !ok {
        return Err(DepletionError::Level(format!(
            "x={x}, y={y}, extreme indices {lo} and {hi}"
        )));
    }
    Ok(walk_between(inst, &s, x, y))
}

/// Checks that `w` is a walk along exactly the indices `s`.
pub fn is_walk(inst: &DepletionInstance, s: &[usize], w: &Walk) -> bool {
    if w.s != s || w.steps.len() != s.len() {
        return false;
    }
    if !w.steps.iter().zip(s).all(|(&x, &i)| inst.part(x) == Part::Fiber(i)) {
        return false;
    }
    w.steps.windows(2).all(|p| match w.direction {
        Direction::Ascending => inst.order.le(p[0], p[1]),
        Direction::Descending => inst.order.le(p[1], p[0]),
    })
}

/// The steps of `w` at the indices of `s`, which must contain both ends.
pub fn restrict_walk(w: &Walk, s: &[usize]) -> Walk {
    let (idx, steps) = w
        .s
        .iter()
        .zip(&w.steps)
        .filter(|(i, _)| s.contains(i))
        .map(|(&i, &x)| (i, x))
        .unzip();
    Walk {
        s: idx,
        steps,
        direction: w.direction,
    }
}

/// Which clause justified `x ≪_s y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    SamePart,
    ThroughCore { a: usize },
    Walk(Walk),
}

/// `Some(reason)` iff `x ≪_s y`.
pub fn depletion_reason(
    inst: &DepletionInstance,
    s: &[usize],
    x: usize,
    y: usize,
) -> Result<Option<Reason>, DepletionError> {
    let s = inst.subset(s)?;
    for e in [x, y] {
        if !inst.in_domain(&s, e) {
            return Err(DepletionError::Membership { element: e });
        }
    }
    Ok(reason_unchecked(inst, &s, x, y))
}

fn reason_unchecked(inst: &DepletionInstance, s: &[usize], x: usize, y: usize) -> Option<Reason> {
    let ord = &inst.order;
    if !ord.le(x, y) {
        return None;
    }
    let (i, j) = match (inst.part(x), inst.part(y)) {
        (Part::Fiber(i), Part::Fiber(j)) if i != j => (i, j),
        _ => return Some(Reason::SamePart),
    };
    debug_assert!(s.contains(&i) && s.contains(&j));
    if let Some(&a) = inst.core.iter().find(|&&a| ord.le(x, a) && ord.le(a, y)) {
        return Some(Reason::ThroughCore { a });
    }
    walk_between(inst, s, x, y).walk().cloned().map(Reason::Walk)
}

pub fn depletion_rel(
    inst: &DepletionInstance,
    s: &[usize],
    x: usize,
    y: usize,
) -> Result<bool, DepletionError> {
    Ok(depletion_reason(inst, s, x, y)?.is_some())
}

/// The non-strict relation `≪_s` on `domain(s)`, indexed by domain position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepletionMatrix {
    pub s: Vec<usize>,
    pub domain: Vec<usize>,
    pub rel: Vec<Vec<bool>>,
}

impl DepletionMatrix {
    pub fn holds(&self, x: usize, y: usize) -> Option<bool> {
        let i = self.domain.iter().position(|&e| e == x)?;
        let j = self.domain.iter().position(|&e| e == y)?;
        Some(self.rel[i][j])
    }
}

pub fn depletion_matrix(
    inst: &DepletionInstance,
    s: &[usize],
) -> Result<DepletionMatrix, DepletionError> {
    let s = inst.subset(s)?;
    let domain = inst.domain(&s);
    let rel = domain
        .iter()
        .map(|&x| {
            domain
                .iter()
                .map(|&y| reason_unchecked(inst, &s, x, y).is_some())
                .collect()
        })
        .collect();
    Ok(DepletionMatrix { s, domain, rel })
}

/// `≪_s` as a poset on `domain(s)` (relabelled by domain position). Fails
/// if the relation is not a partial order.
pub fn depletion_order(
    inst: &DepletionInstance,
    s: &[usize],
) -> Result<(Vec<usize>, Poset), DepletionError> {
    let m = depletion_matrix(inst, s)?;
    let k = m.domain.len();
    for i in 0..k {
        for j in 0..k {
            if i != j && m.rel[i][j] && m.rel[j][i] {
                return Err(OrderError::Asymmetric {
                    a: m.domain[i],
                    b: m.domain[j],
                }
                .into());
            }
        }
    }
    let lt = (0..k * k)
        .map(|ij| ij / k != ij % k && m.rel[ij / k][ij % k])
        .collect();
    let p = Poset::from_strict_matrix(k, lt)?;
    Ok((m.domain, p))
}

fn interval(lo: usize, hi: usize) -> Vec<usize> {
    (lo.min(hi)..=lo.max(hi)).collect()
}

/// Whether any walk, in either direction, joins the fibers of the extreme
/// indices of `s`.
pub fn any_walk_along(inst: &DepletionInstance, s: &[usize]) -> bool {
    let lo = s[0];
    let up: Vec<usize> = s.to_vec();
    let down: Vec<usize> = s.iter().rev().copied().collect();
    let hi = *s.last().unwrap();
    layered_search(inst, &up, inst.fiber(lo), |_| true).is_ok()
        || layered_search(inst, &down, inst.fiber(hi), |_| true).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarVerdict {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

/// Whether some `s` with extreme indices `xi` and `eta` admits no walk.
/// Only the full interval is checked: any walk along it restricts to a walk
/// along every smaller `s` with the same ends.
pub fn star_condition(
    inst: &DepletionInstance,
    xi: usize,
    eta: usize,
) -> Result<StarVerdict, DepletionError> {
    for i in [xi, eta] {
        if i >= inst.index_count() {
            return Err(DepletionError::Index(i));
        }
    }
    if xi == eta {
        return Err(DepletionError::ShortSubset);
    }
    let s = interval(xi, eta);
    let holds = !any_walk_along(inst, &s);
    Ok(StarVerdict {
        holds,
        witness: holds.then_some(s),
    })
}

/// Same verdict as `star_condition`, found by trying every admissible `s`.
pub fn star_condition_exhaustive(
    inst: &DepletionInstance,
    xi: usize,
    eta: usize,
) -> Result<StarVerdict, DepletionError> {
    for i in [xi, eta] {
        if i >= inst.index_count() {
            return Err(DepletionError::Index(i));
        }
    }
    if xi == eta {
        return Err(DepletionError::ShortSubset);
    }
    let (lo, hi) = (xi.min(eta), xi.max(eta));
    let inner: Vec<usize> = (lo + 1..hi).collect();
    assert!(inner.len() < 20, "exhaustive search is for small index sets");
    for mask in 0u32..1 << inner.len() {
        let mut s = vec![lo];
        s.extend(
            inner
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &i)| i),
        );
        s.push(hi);
        if !any_walk_along(inst, &s) {
            return Ok(StarVerdict {
                holds: true,
                witness: Some(s),
            });
        }
    }
    Ok(StarVerdict {
        holds: false,
        witness: None,
    })
}

/// Greedy scan in index order: keep an index when the star condition holds
/// against every index already kept. Always contains index 0.
pub fn maximal_star_set(inst: &DepletionInstance) -> Vec<usize> {
    let mut x = vec![0];
    for eta in 1..inst.index_count() {
        let fits = x.iter().all(|&xi| {
            star_condition(inst, xi, eta)
                .map(|v| v.holds)
                .unwrap_or(false)
        });
        if fits {
            x.push(eta);
        }
    }
    x
}

/// JSON form: `{"I":[labels],"A":[ids],"F":{"label":[ids]},"edges":[[a,b]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepletionJson {
    #[serde(rename = "I")]
    pub index: Vec<serde_json::Value>,
    #[serde(rename = "A", default)]
    pub core: Vec<usize>,
    #[serde(rename = "F")]
    pub fibers: std::collections::BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
}

fn label_string(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl TryFrom<&DepletionJson> for DepletionInstance {
    type Error = DepletionError;

    fn try_from(j: &DepletionJson) -> Result<Self, Self::Error> {
        let labels: Vec<String> = j.index.iter().map(label_string).collect();
        for key in j.fibers.keys() {
            if !labels.contains(key) {
                return Err(DepletionError::Label(key.clone()));
            }
        }
        let fibers: Vec<Vec<usize>> = labels
            .iter()
            .map(|l| j.fibers.get(l).cloned().unwrap_or_default())
            .collect();
        let n = j
            .core
            .iter()
            .chain(fibers.iter().flatten())
            .map(|&e| e + 1)
            .max()
            .unwrap_or(0);
        let order = Poset::from_edges(n, &j.edges)?;
        DepletionInstance::new(labels, j.core.clone(), fibers, order)
    }
}

impl From<&DepletionInstance> for DepletionJson {
    fn from(inst: &DepletionInstance) -> Self {
        DepletionJson {
            index: inst
                .labels
                .iter()
                .map(|l| serde_json::Value::String(l.clone()))
                .collect(),
            core: inst.core.clone(),
            fibers: inst
                .labels
                .iter()
                .cloned()
                .zip(inst.fibers.iter().cloned())
                .collect(),
            edges: inst.order.covers(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(core: &[usize], fibers: &[&[usize]], edges: &[(usize, usize)]) -> DepletionInstance {
        let n = core
            .iter()
            .chain(fibers.iter().flat_map(|f| f.iter()))
            .max()
            .map_or(0, |m| m + 1);
        DepletionInstance::new(
            (0..fibers.len()).map(|i| i.to_string()).collect(),
            core.to_vec(),
            fibers.iter().map(|f| f.to_vec()).collect(),
            Poset::from_edges(n, edges).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn two_level_walk_is_the_pair() {
        let d = inst(&[], &[&[0], &[1]], &[(0, 1)]);
        let w = find_walk(&d, &[0, 1], 0, 1).unwrap();
        assert_eq!(w.walk().unwrap().steps, vec![0, 1]);
    }

    #[test]
    fn three_fiber_walk_needs_the_middle() {
        let d = inst(&[], &[&[0], &[1], &[2]], &[(0, 1), (1, 2)]);
        let w = find_walk(&d, &[0, 1, 2], 0, 2).unwrap();
        assert_eq!(w.walk().unwrap().steps, vec![0, 1, 2]);
        assert_eq!(w.walk().unwrap().direction, Direction::Ascending);

        let d = inst(&[], &[&[0], &[1], &[2]], &[(0, 2), (1, 2)]);
        let out = find_walk(&d, &[0, 1, 2], 0, 2).unwrap();
        assert_eq!(
            out,
            WalkOutcome::None {
                frontier: Frontier {
                    index: 0,
                    reachable: vec![0]
                }
            }
        );
    }

    #[test]
    fn unrelated_pair_has_no_walk() {
        let d = inst(&[], &[&[0], &[1]], &[]);
        assert!(find_walk(&d, &[0, 1], 0, 1).unwrap().walk().is_none());
    }

    #[test]
    fn descending_walk_runs_downward_in_index() {
        // 2 in the top fiber sits below 1 and 0
        let d = inst(&[], &[&[0], &[1], &[2]], &[(2, 1), (1, 0)]);
        let w = find_walk(&d, &[0, 1, 2], 2, 0).unwrap();
        let w = w.walk().unwrap();
        assert_eq!(w.direction, Direction::Descending);
        assert_eq!(w.steps, vec![0, 1, 2]);
        assert!(is_walk(&d, &[0, 1, 2], w));
        assert!(depletion_rel(&d, &[0, 1, 2], 2, 0).unwrap());
        assert!(!depletion_rel(&d, &[0, 1, 2], 0, 2).unwrap());
    }

    #[test]
    fn endpoints_must_be_extreme() {
        let d = inst(&[], &[&[0], &[1], &[2]], &[]);
        assert!(matches!(
            find_walk(&d, &[0, 1, 2], 0, 1),
            Err(DepletionError::Level(_))
        ));
        assert!(matches!(
            find_walk(&d, &[0, 2], 1, 2),
            Err(DepletionError::Membership { element: 1 })
        ));
    }

    #[test]
    fn core_interpolant_counts() {
        // 3 is a core element between fibers
        let d = inst(&[3], &[&[0], &[1], &[2]], &[(0, 3), (3, 2)]);
        assert_eq!(
            depletion_reason(&d, &[0, 1, 2], 0, 2).unwrap(),
            Some(Reason::ThroughCore { a: 3 })
        );
    }

    #[test]
    fn skipping_a_level_can_add_pairs() {
        let d = inst(&[], &[&[0], &[1], &[2]], &[(0, 2)]);
        assert!(depletion_rel(&d, &[0, 2], 0, 2).unwrap());
        assert!(!depletion_rel(&d, &[0, 1, 2], 0, 2).unwrap());
    }

    #[test]
    fn reflexive_and_two_level_restriction() {
        let d = inst(&[4], &[&[0, 1], &[2, 3]], &[(0, 2), (1, 4), (4, 3)]);
        let m = depletion_matrix(&d, &[0, 1]).unwrap();
        for (i, &x) in m.domain.iter().enumerate() {
            assert!(m.rel[i][i]);
            for (j, &y) in m.domain.iter().enumerate() {
                assert_eq!(m.rel[i][j], d.order().le(x, y));
            }
        }
        assert!(depletion_order(&d, &[0, 1]).is_ok());
    }

    #[test]
    fn star_condition_cases() {
        let d = inst(&[], &[&[0], &[1]], &[(0, 1)]);
        assert!(!star_condition(&d, 0, 1).unwrap().holds);

        let d = inst(&[], &[&[0], &[1], &[2]], &[(0, 1)]);
        let v = star_condition(&d, 0, 2).unwrap();
        assert_eq!(v.witness, Some(vec![0, 1, 2]));
        let ex = star_condition_exhaustive(&d, 0, 2).unwrap();
        assert!(ex.holds);
        assert_eq!(ex.witness, Some(vec![0, 2]));
    }

    #[test]
    fn maximal_star_sets() {
        let chain = inst(&[], &[&[0], &[1], &[2]], &[(0, 1), (1, 2)]);
        assert_eq!(maximal_star_set(&chain), vec![0]);
        let free = inst(&[], &[&[0], &[1], &[2]], &[]);
        assert_eq!(maximal_star_set(&free), vec![0, 1, 2]);
    }

    #[test]
    fn json_roundtrip() {
        let d = inst(&[3], &[&[0], &[1], &[2]], &[(0, 3), (3, 2)]);
        let j = DepletionJson::from(&d);
        let text = serde_json::to_string(&j).unwrap();
        let back: DepletionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(DepletionInstance::try_from(&back).unwrap(), d);
    }
}
