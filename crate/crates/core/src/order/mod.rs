//! Finite strict partial orders, asymmetric relation structures and
//! order-preserving maps between them.
//!
//! Elements are dense ids `0..n`. Relations are stored as flat `n * n`
//! boolean matrices; the strict order is kept transitively closed and the
//! non-strict order is derived as "lt or equal".

mod enumerate;

pub use enumerate::{naturally_labeled_posets, posets_up_to_iso};

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("edges close into a cycle through element {element}")]
    Cycle { element: usize },
    #[error("element {element} is outside 0..{len}")]
    OutOfRange { element: usize, len: usize },
    #[error("element ids must be exactly 0..{len}, got {got:?}")]
    NotDense { len: usize, got: Vec<usize> },
    #[error("relation is not asymmetric at ({a}, {b})")]
    Asymmetric { a: usize, b: usize },
    #[error("relation is not transitive at ({a}, {b}, {c})")]
    NotTransitive { a: usize, b: usize, c: usize },
    #[error("map is not total on the source: {0}")]
    Domain(String),
}

/// A finite strict partial order on `0..n`, stored transitively closed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    lt: Vec<bool>,
}

impl Poset {
    pub fn antichain(n: usize) -> Self {
        Poset {
            n,
            lt: vec![false; n * n],
        }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let mut lt = vec![false; n * n];
        for a in 0..n {
            for b in a + 1..n {
                lt[a * n + b] = true;
            }
        }
        Poset { n, lt }
    }

    /// Transitive closure of `edges` over `0..n`. Fails if the closure
    /// relates some element to itself.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, OrderError> {
        let mut lt = vec![false; n * n];
        for &(a, b) in edges {
            for e in [a, b] {
                if e >= n {
                    return Err(OrderError::OutOfRange { element: e, len: n });
                }
            }
            lt[a * n + b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if !lt[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if lt[k * n + j] {
                        lt[i * n + j] = true;
                    }
                }
            }
        }
        if let Some(element) = (0..n).find(|&x| lt[x * n + x]) {
            return Err(OrderError::Cycle { element });
        }
        Ok(Poset { n, lt })
    }

    /// Closure of `edges` over an explicit element set, which must be `0..n`.
    pub fn from_elements(
        elements: &BTreeSet<usize>,
        edges: &[(usize, usize)],
    ) -> Result<Self, OrderError> {
        let n = elements.len();
        if elements.iter().copied().ne(0..n) {
            return Err(OrderError::NotDense {
                len: n,
                got: elements.iter().copied().collect(),
            });
        }
        Self::from_edges(n, edges)
    }

    /// Accepts an already-closed strict relation, checking irreflexivity and
    /// transitivity.
    pub fn from_strict_matrix(n: usize, lt: Vec<bool>) -> Result<Self, OrderError> {
        assert_eq!(lt.len(), n * n, "matrix must be n*n");
        for a in 0..n {
            if lt[a * n + a] {
                return Err(OrderError::Cycle { element: a });
            }
            for b in 0..n {
                if !lt[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    if lt[b * n + c] && !lt[a * n + c] {
                        return Err(OrderError::NotTransitive { a, b, c });
                    }
                }
            }
        }
        Ok(Poset { n, lt })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.lt[a * self.n + b]
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// The strict relation as a flat row-major matrix.
    pub fn strict_matrix(&self) -> &[bool] {
        &self.lt
    }

    /// All pairs `(a, b)` with `a < b`, row-major.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn converse(&self) -> Poset {
        let n = self.n;
        let mut lt = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                lt[b * n + a] = self.lt(a, b);
            }
        }
        Poset { n, lt }
    }

    /// Covering pairs (the transitive reduction).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.lt(a, b) && !(0..self.n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// A maximum-length chain, lexicographically least among those of
    /// maximum length.
    pub fn longest_chain(&self) -> Vec<usize> {
        let n = self.n;
        if n == 0 {
            return Vec::new();
        }
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, b) in self.covers() {
            up[a].push(b);
        }
        // height[x] = length of the longest chain starting at x; fill in an
        // order where every cover of x comes before x.
        let order = self.linear_extension();
        let mut height = vec![1usize; n];
        for &x in order.iter().rev() {
            height[x] = 1 + up[x].iter().map(|&y| height[y]).max().unwrap_or(0);
        }
        let best = *height.iter().max().unwrap();
        let mut x = (0..n).find(|&x| height[x] == best).unwrap();
        let mut chain = vec![x];
        while height[x] > 1 {
            x = *up[x]
                .iter()
                .filter(|&&y| height[y] == height[x] - 1)
                .min()
                .unwrap();
            chain.push(x);
        }
        chain
    }

    /// A linear extension, taking the least available id at each step.
    pub fn linear_extension(&self) -> Vec<usize> {
        let all: Vec<usize> = self.elements().collect();
        self.linear_extension_of(&all)
    }

    /// A linear extension of the restriction to `subset`, least id first.
    pub fn linear_extension_of(&self, subset: &[usize]) -> Vec<usize> {
        let mut remaining: BTreeSet<usize> = subset.iter().copied().collect();
        let mut out = Vec::with_capacity(remaining.len());
        while let Some(&next) = remaining
            .iter()
            .find(|&&x| !remaining.iter().any(|&y| self.lt(y, x)))
        {
            remaining.remove(&next);
            out.push(next);
        }
        out
    }

    /// A linear extension of the restriction to `subset` that places `first`
    /// before `second`. Exists iff `second` is not below-or-equal `first`.
    /// Both must be in `subset`.
    pub fn linear_extension_placing(
        &self,
        subset: &[usize],
        first: usize,
        second: usize,
    ) -> Option<Vec<usize>> {
        if self.le(second, first) {
            return None;
        }
        // The down-set of `first` is an order ideal avoiding `second`; list it
        // first, then everything else.
        let (below, rest): (Vec<usize>, Vec<usize>) =
            subset.iter().partition(|&&x| self.le(x, first));
        let mut out = self.linear_extension_of(&below);
        out.extend(self.linear_extension_of(&rest));
        Some(out)
    }

    /// The induced suborder on `subset`, relabelled `0..subset.len()` in the
    /// given order.
    pub fn induced(&self, subset: &[usize]) -> Poset {
        let k = subset.len();
        let mut lt = vec![false; k * k];
        for (i, &a) in subset.iter().enumerate() {
            for (j, &b) in subset.iter().enumerate() {
                lt[i * k + j] = self.lt(a, b);
            }
        }
        Poset { n: k, lt }
    }
}

/// A finite structure with one asymmetric (hence irreflexive) binary relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelStructure {
    n: usize,
    rel: Vec<bool>,
}

impl RelStructure {
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let mut rel = vec![false; n * n];
        for &(a, b) in pairs {
            for e in [a, b] {
                if e >= n {
                    return Err(OrderError::OutOfRange { element: e, len: n });
                }
            }
            rel[a * n + b] = true;
        }
        Self::from_matrix(n, rel)
    }

    pub fn from_matrix(n: usize, rel: Vec<bool>) -> Result<Self, OrderError> {
        assert_eq!(rel.len(), n * n, "matrix must be n*n");
        for a in 0..n {
            for b in a..n {
                if rel[a * n + b] && rel[b * n + a] {
                    return Err(OrderError::Asymmetric { a, b });
                }
            }
        }
        Ok(RelStructure { n, rel })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.rel[a * self.n + b]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.related(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// An assignment of targets to the elements `0..images.len()` of a source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderMap<T = usize> {
    pub images: Vec<T>,
}

impl<T> OrderMap<T> {
    pub fn new(images: Vec<T>) -> Self {
        OrderMap { images }
    }
}

impl OrderMap<usize> {
    pub fn identity(n: usize) -> Self {
        OrderMap::new((0..n).collect())
    }
}

/// True iff `f` is injective and `a <= b` in `p` exactly when
/// `f(a) <= f(b)` in `q`.
pub fn is_order_embedding(f: &OrderMap, p: &Poset, q: &Poset) -> Result<bool, OrderError> {
    if f.images.len() != p.len() {
        return Err(OrderError::Domain(format!(
            "map has {} images, source has {} elements",
            f.images.len(),
            p.len()
        )));
    }
    if let Some(&bad) = f.images.iter().find(|&&y| y >= q.len()) {
        return Err(OrderError::OutOfRange {
            element: bad,
            len: q.len(),
        });
    }
    let img = &f.images;
    for a in p.elements() {
        for b in p.elements() {
            if a != b && img[a] == img[b] {
                return Ok(false);
            }
            if p.le(a, b) != q.le(img[a], img[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `{"elements":[ids],"edges":[[a,b],...]}`; edges are generators and the
/// closure is taken on load. The same shape describes a relation structure,
/// with `edges` read as the relation itself.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GraphJson {
    pub elements: Vec<usize>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
}

impl GraphJson {
    fn element_set(&self) -> BTreeSet<usize> {
        self.elements.iter().copied().collect()
    }

    pub fn to_poset(&self) -> Result<Poset, OrderError> {
        Poset::from_elements(&self.element_set(), &self.edges)
    }

    pub fn to_structure(&self) -> Result<RelStructure, OrderError> {
        let set = self.element_set();
        let n = set.len();
        if set.iter().copied().ne(0..n) {
            return Err(OrderError::NotDense {
                len: n,
                got: set.into_iter().collect(),
            });
        }
        RelStructure::new(n, &self.edges)
    }

    pub fn from_poset(p: &Poset) -> Self {
        GraphJson {
            elements: p.elements().collect(),
            edges: p.covers(),
        }
    }

    pub fn from_structure(s: &RelStructure) -> Self {
        GraphJson {
            elements: (0..s.len()).collect(),
            edges: s.pairs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs_of(p: &Poset) -> BTreeSet<(usize, usize)> {
        p.strict_pairs().into_iter().collect()
    }

    #[test]
    fn chain_edges_are_closed() {
        let p = Poset::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let want: BTreeSet<_> = [(0, 1), (1, 2), (0, 2)].into_iter().collect();
        assert_eq!(pairs_of(&p), want);
    }

    #[test]
    fn empty_edges_give_antichain() {
        let p = Poset::from_edges(2, &[]).unwrap();
        assert!(p.strict_pairs().is_empty());
        assert_eq!(p, Poset::antichain(2));
    }

    #[test]
    fn two_cycle_is_rejected() {
        assert!(matches!(
            Poset::from_edges(2, &[(0, 1), (1, 0)]),
            Err(OrderError::Cycle { .. })
        ));
    }

    #[test]
    fn sparse_element_ids_are_rejected() {
        let els: BTreeSet<usize> = [0, 2].into_iter().collect();
        assert!(matches!(
            Poset::from_elements(&els, &[]),
            Err(OrderError::NotDense { .. })
        ));
    }

    #[test]
    fn identity_is_an_embedding() {
        let p = Poset::from_edges(4, &[(0, 1), (2, 1), (1, 3)]).unwrap();
        assert!(is_order_embedding(&OrderMap::identity(4), &p, &p).unwrap());
    }

    #[test]
    fn constant_map_is_not_an_embedding() {
        let p = Poset::antichain(2);
        assert!(!is_order_embedding(&OrderMap::new(vec![0, 0]), &p, &p).unwrap());
    }

    #[test]
    fn chain_into_antichain_is_not_an_embedding() {
        let chain = Poset::chain(2);
        let anti = Poset::antichain(2);
        assert!(!is_order_embedding(&OrderMap::identity(2), &chain, &anti).unwrap());
    }

    #[test]
    fn partial_map_is_a_domain_error() {
        let p = Poset::chain(3);
        assert!(matches!(
            is_order_embedding(&OrderMap::new(vec![0, 1]), &p, &p),
            Err(OrderError::Domain(_))
        ));
    }

    #[test]
    fn longest_chain_examples() {
        assert_eq!(Poset::chain(3).longest_chain().len(), 3);
        assert_eq!(Poset::antichain(3).longest_chain().len(), 1);
        let p = Poset::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.longest_chain(), vec![0, 1, 2]);
        assert!(Poset::antichain(0).longest_chain().is_empty());
    }

    #[test]
    fn longest_chain_breaks_ties_lexicographically() {
        // 3 < 1 and 2 < 0: both length 2, [2, 0] is least.
        let p = Poset::from_edges(4, &[(3, 1), (2, 0)]).unwrap();
        assert_eq!(p.longest_chain(), vec![2, 0]);
    }

    #[test]
    fn converse_examples() {
        let c = Poset::chain(3);
        let d = c.converse();
        assert!(d.lt(2, 1) && d.lt(1, 0) && d.lt(2, 0));
        assert_eq!(Poset::antichain(3).converse(), Poset::antichain(3));
        assert_eq!(d.converse(), c);
    }

    #[test]
    fn linear_extension_placing_respects_request() {
        let p = Poset::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let all = [0, 1, 2, 3];
        let l = p.linear_extension_placing(&all, 3, 1).unwrap();
        let pos = |x: usize| l.iter().position(|&y| y == x).unwrap();
        assert!(pos(3) < pos(1));
        for (a, b) in p.strict_pairs() {
            assert!(pos(a) < pos(b));
        }
        assert!(p.linear_extension_placing(&all, 1, 0).is_none());
    }

    #[test]
    fn rel_structure_rejects_symmetric_pairs() {
        assert!(RelStructure::new(2, &[(0, 1)]).is_ok());
        assert!(matches!(
            RelStructure::new(2, &[(0, 1), (1, 0)]),
            Err(OrderError::Asymmetric { .. })
        ));
        assert!(RelStructure::new(1, &[(0, 0)]).is_err());
    }
}
