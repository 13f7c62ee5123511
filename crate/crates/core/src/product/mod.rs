//! Finite relational structures, filters on finite index sets, reduced
//! products, and chains for a formula's induced relation.

mod formula;

pub use formula::Formula;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("relation {rel} has arity {arity}, applied to {got} arguments")]
    Arity { rel: String, arity: usize, got: usize },
    #[error("tuple {tuple:?} of {rel} leaves the universe 0..{size}")]
    Tuple { rel: String, tuple: Vec<usize>, size: usize },
    #[error("variable {0} is unbound")]
    Unbound(String),
    #[error("formula error: {0}")]
    Formula(String),
    #[error("cannot parse formula: {0}")]
    Parse(String),
    #[error("filter error: {0}")]
    Filter(String),
    #[error("factors disagree on the language: {0}")]
    Language(String),
    #[error("{tuples} tuples exceed the exact-search budget {budget}")]
    Budget { tuples: usize, budget: usize },
    #[error("universe ids must be exactly 0..{0}")]
    Universe(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite relational structure on `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    size: usize,
    relations: BTreeMap<String, Relation>,
}

impl FiniteStructure {
    pub fn new(size: usize, relations: BTreeMap<String, Relation>) -> Result<Self, ProductError> {
        for (name, r) in &relations {
            for t in &r.tuples {
                if t.len() != r.arity {
                    return Err(ProductError::Arity {
                        rel: name.clone(),
                        arity: r.arity,
                        got: t.len(),
                    });
                }
                if t.iter().any(|&e| e >= size) {
                    return Err(ProductError::Tuple {
                        rel: name.clone(),
                        tuple: t.clone(),
                        size,
                    });
                }
            }
        }
        Ok(FiniteStructure { size, relations })
    }

    /// A single binary relation `name` given by its pairs.
    pub fn binary(size: usize, name: &str, pairs: &[(usize, usize)]) -> Result<Self, ProductError> {
        let tuples = pairs.iter().map(|&(a, b)| vec![a, b]).collect();
        Self::new(size, BTreeMap::from([(name.to_string(), Relation { arity: 2, tuples })]))
    }

    /// `(0..size, <)`.
    pub fn linear_order(size: usize) -> Self {
        let pairs: Vec<_> = (0..size).flat_map(|a| (a + 1..size).map(move |b| (a, b))).collect();
        Self::binary(size, "<", &pairs).expect("pairs are in range")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn signature(&self) -> BTreeMap<String, usize> {
        self.relations.iter().map(|(k, r)| (k.clone(), r.arity)).collect()
    }

    pub fn holds(&self, rel: &str, args: &[usize]) -> Result<bool, ProductError> {
        let r = self
            .relations
            .get(rel)
            .ok_or_else(|| ProductError::UnknownRelation(rel.to_string()))?;
        if r.arity != args.len() {
            return Err(ProductError::Arity {
                rel: rel.to_string(),
                arity: r.arity,
                got: args.len(),
            });
        }
        Ok(r.tuples.contains(args))
    }

    /// All `k`-tuples over the universe in lexicographic order.
    pub fn tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..self.size).map(move |e| {
                        let mut t = t.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
        }
        out
    }
}

/// Satisfaction of a quantifier-free formula under `env`.
pub fn eval_qf(
    s: &FiniteStructure,
    phi: &Formula,
    env: &BTreeMap<String, usize>,
) -> Result<bool, ProductError> {
    phi.eval(s, env)
}

/// Binds `x_i := a[i]` and `y_i := b[i]`.
pub fn pair_env(a: &[usize], b: &[usize]) -> BTreeMap<String, usize> {
    let mut env = BTreeMap::new();
    for (i, &v) in a.iter().enumerate() {
        env.insert(format!("x{i}"), v);
    }
    for (i, &v) in b.iter().enumerate() {
        env.insert(format!("y{i}"), v);
    }
    env
}

/// `a ≺ b` for the formula: `phi(a, b)` holds.
pub fn precedes(s: &FiniteStructure, phi: &Formula, a: &[usize], b: &[usize]) -> Result<bool, ProductError> {
    phi.eval(s, &pair_env(a, b))
}

/// A filter on `0..ground`, stored as its full member family. Every filter
/// on a finite set is principal; `kernel` is the intersection of members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    ground: usize,
    members: BTreeSet<u64>,
    kernel: u64,
}

fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &i| m | 1 << i)
}

fn set_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

impl Filter {
    const MAX_GROUND: usize = 20;

    /// Validates a member family: contains the ground set, excludes the empty
    /// set, is upward closed and closed under intersection.
    pub fn from_members(ground: usize, members: &[Vec<usize>]) -> Result<Self, ProductError> {
        if ground == 0 || ground > Self::MAX_GROUND {
            return Err(ProductError::Filter(format!(
                "ground size must be in 1..={}",
                Self::MAX_GROUND
            )));
        }
        let full = (1u64 << ground) - 1;
        let mut fam = BTreeSet::new();
        for m in members {
            if let Some(&i) = m.iter().find(|&&i| i >= ground) {
                return Err(ProductError::Filter(format!("index {i} outside the ground set")));
            }
            fam.insert(mask_of(m));
        }
        if !fam.contains(&full) {
            return Err(ProductError::Filter("the ground set is not a member".into()));
        }
        if fam.contains(&0) {
            return Err(ProductError::Filter("the empty set is a member".into()));
        }
        for &x in &fam {
            for i in 0..ground {
                if !fam.contains(&(x | 1 << i)) {
                    return Err(ProductError::Filter(format!(
                        "not upward closed: {:?} is a member but {:?} is not",
                        set_of(x),
                        set_of(x | 1 << i)
                    )));
                }
            }
            for &y in &fam {
                if !fam.contains(&(x & y)) {
                    return Err(ProductError::Filter(format!(
                        "not closed under intersection: {:?} and {:?}",
                        set_of(x),
                        set_of(y)
                    )));
                }
            }
        }
        let kernel = fam.iter().fold(full, |k, &x| k & x);
        Ok(Filter {
            ground,
            members: fam,
            kernel,
        })
    }

    /// All supersets of `kernel`.
    pub fn principal(ground: usize, kernel: &[usize]) -> Result<Self, ProductError> {
        if ground == 0 || ground > Self::MAX_GROUND {
            return Err(ProductError::Filter(format!(
                "ground size must be in 1..={}",
                Self::MAX_GROUND
            )));
        }
        if let Some(&i) = kernel.iter().find(|&&i| i >= ground) {
            return Err(ProductError::Filter(format!("index {i} outside the ground set")));
        }
        let k = mask_of(kernel);
        if k == 0 {
            return Err(ProductError::Filter("the empty set is a member".into()));
        }
        let full = (1u64 << ground) - 1;
        let free = full & !k;
        // enumerate subsets of `free`
        let mut members = BTreeSet::new();
        let mut sub = free;
        loop {
            members.insert(k | sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        Ok(Filter {
            ground,
            members,
            kernel: k,
        })
    }

    /// The filter generated by `gens`: supersets of their intersection.
    pub fn generated_by(ground: usize, gens: &[Vec<usize>]) -> Result<Self, ProductError> {
        let mut k: Vec<usize> = (0..ground).collect();
        for g in gens {
            k.retain(|i| g.contains(i));
        }
        Self::principal(ground, &k)
    }

    /// `{ground}`.
    pub fn trivial(ground: usize) -> Result<Self, ProductError> {
        Self::principal(ground, &(0..ground).collect::<Vec<_>>())
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn kernel(&self) -> Vec<usize> {
        set_of(self.kernel)
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|&m| set_of(m)).collect()
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        self.members.contains(&mask_of(set))
    }

    pub fn is_ultra(&self) -> bool {
        self.kernel.count_ones() == 1
    }
}

/// `∏_F A_n` for finitely many factors over one language.
#[derive(Debug, Clone)]
pub struct ReducedProduct {
    factors: Vec<FiniteStructure>,
    filter: Filter,
}

/// An element of the full product: one coordinate per factor.
pub type ProductElem = Vec<usize>;

impl ReducedProduct {
    pub fn new(factors: Vec<FiniteStructure>, filter: Filter) -> Result<Self, ProductError> {
        if factors.is_empty() {
            return Err(ProductError::Filter("no factors".into()));
        }
        if filter.ground() != factors.len() {
            return Err(ProductError::Filter(format!(
                "filter ground {} but {} factors",
                filter.ground(),
                factors.len()
            )));
        }
        let sig = factors[0].signature();
        if let Some(i) = factors.iter().position(|f| f.signature() != sig) {
            return Err(ProductError::Language(format!("factor {i} differs from factor 0")));
        }
        if let Some(i) = factors.iter().position(|f| f.size() == 0) {
            return Err(ProductError::Language(format!("factor {i} is empty")));
        }
        Ok(ReducedProduct { factors, filter })
    }

    pub fn factors(&self) -> &[FiniteStructure] {
        &self.factors
    }

    pub fn filter(&self) -> &Filter {
        &self.filter
    }

    /// Every element of the full product, lexicographically.
    pub fn elements(&self) -> Vec<ProductElem> {
        let mut out = vec![vec![]];
        for f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|t: Vec<usize>| {
                    (0..f.size()).map(move |e| {
                        let mut t = t.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// `a ~_F b`: the agreement set is in the filter.
    pub fn equivalent(&self, a: &[usize], b: &[usize]) -> bool {
        let agree: Vec<usize> = (0..self.factors.len()).filter(|&n| a[n] == b[n]).collect();
        self.filter.contains(&agree)
    }

    /// Equivalence classes of the full product, each listed in
    /// lexicographic order, classes ordered by their least member.
    pub fn classes(&self) -> Vec<Vec<ProductElem>> {
        let mut classes: Vec<Vec<ProductElem>> = Vec::new();
        for e in self.elements() {
            match classes.iter_mut().find(|c| self.equivalent(&c[0], &e)) {
                Some(c) => c.push(e),
                None => classes.push(vec![e]),
            }
        }
        classes
    }

    /// Coordinates where `rel` holds of the representatives.
    pub fn index_set(&self, rel: &str, args: &[ProductElem]) -> Result<Vec<usize>, ProductError> {
        let mut out = Vec::new();
        for (n, f) in self.factors.iter().enumerate() {
            let vals: Vec<usize> = args.iter().map(|a| a[n]).collect();
            if f.holds(rel, &vals)? {
                out.push(n);
            }
        }
        Ok(out)
    }

    pub fn holds(&self, rel: &str, args: &[ProductElem]) -> Result<bool, ProductError> {
        Ok(self.filter.contains(&self.index_set(rel, args)?))
    }

    /// Classical evaluation in the reduced product: atoms by the filter
    /// rule, connectives as usual.
    pub fn eval(&self, phi: &Formula, env: &BTreeMap<String, ProductElem>) -> Result<bool, ProductError> {
        phi.eval_with(&mut |rel, args| {
            let vals = args
                .iter()
                .map(|a| env.get(a).cloned().ok_or_else(|| ProductError::Unbound(a.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            self.holds(rel, &vals)
        })
    }

    /// Coordinates where `phi` holds of the representatives.
    pub fn satisfaction_set(
        &self,
        phi: &Formula,
        env: &BTreeMap<String, ProductElem>,
    ) -> Result<Vec<usize>, ProductError> {
        let mut out = Vec::new();
        for (n, f) in self.factors.iter().enumerate() {
            let local = env
                .iter()
                .map(|(k, v)| (k.clone(), v[n]))
                .collect::<BTreeMap<_, _>>();
            if phi.eval(f, &local)? {
                out.push(n);
            }
        }
        Ok(out)
    }
}

/// Outcome of comparing product truth with the filter test on the
/// coordinatewise truth set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LosCheck {
    pub product_holds: bool,
    pub index_set: Vec<usize>,
    pub index_set_in_filter: bool,
    /// index set in the filter implies the product satisfies the formula
    pub forward: bool,
    /// the product satisfies the formula implies the index set is in the filter
    pub backward: bool,
}

impl LosCheck {
    pub fn equivalent(&self) -> bool {
        self.forward && self.backward
    }
}

/// Checks `∏_F A_n ⊨ φ ⟺ {n : A_n ⊨ φ} ∈ F` for an atomic or negated
/// atomic `φ` at the given representatives.
pub fn atomic_los_check(
    rp: &ReducedProduct,
    phi: &Formula,
    env: &BTreeMap<String, ProductElem>,
) -> Result<LosCheck, ProductError> {
    if !phi.is_literal() {
        return Err(ProductError::Formula(format!(
            "{phi} is neither atomic nor a negated atom"
        )));
    }
    let product_holds = rp.eval(phi, env)?;
    let index_set = rp.satisfaction_set(phi, env)?;
    let index_set_in_filter = rp.filter.contains(&index_set);
    Ok(LosCheck {
        product_holds,
        index_set,
        index_set_in_filter,
        forward: !index_set_in_filter || product_holds,
        backward: !product_holds || index_set_in_filter,
    })
}

/// Whether `chain` is a chain for the formula's relation: for `i != j`,
/// `phi(chain[i], chain[j])` holds exactly when `i < j`.
pub fn is_op_chain(s: &FiniteStructure, phi: &Formula, chain: &[Vec<usize>]) -> Result<bool, ProductError> {
    for (i, a) in chain.iter().enumerate() {
        for (j, b) in chain.iter().enumerate() {
            if i != j && precedes(s, phi, a, b)? != (i < j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub const DEFAULT_CHAIN_BUDGET: usize = 10_000;

/// A longest chain of `k`-tuples for `phi(x̄, ȳ)`, found exactly.
///
/// The relation `t → u` iff `phi(t,u)` and not `phi(u,t)` is computed once.
/// A chain is a set on which this relation is a transitive tournament. If the
/// relation is transitive, chains are paths and a DAG longest path suffices;
/// otherwise a branch-and-bound search over successor sets is used.
pub fn longest_op_chain(
    s: &FiniteStructure,
    phi: &Formula,
    budget: usize,
) -> Result<Vec<Vec<usize>>, ProductError> {
    let k = phi.pair_arity()?;
    let count = s.size().checked_pow(k as u32).unwrap_or(usize::MAX);
    if count > budget {
        return Err(ProductError::Budget { tuples: count, budget });
    }
    let tuples = s.tuples(k);
    let t = tuples.len();
    if t == 0 {
        return Ok(vec![]);
    }
    let mut p = vec![false; t * t];
    for i in 0..t {
        for j in 0..t {
            if i != j {
                p[i * t + j] = precedes(s, phi, &tuples[i], &tuples[j])?;
            }
        }
    }
    let words = t.div_ceil(64);
    let mut succ = vec![vec![0u64; words]; t];
    for i in 0..t {
        for j in 0..t {
            if p[i * t + j] && !p[j * t + i] {
                succ[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    let edge = |i: usize, j: usize| succ[i][j / 64] >> (j % 64) & 1 == 1;
    let transitive = (0..t).all(|i| {
        (0..t).filter(|&j| edge(i, j)).all(|j| (0..t).all(|l| !edge(j, l) || edge(i, l)))
    });
    let order = if transitive {
        dag_longest(t, &succ)
    } else {
        let mut best = Vec::new();
        let all: Vec<u64> = (0..words)
            .map(|w| if (w + 1) * 64 <= t { u64::MAX } else { (1u64 << (t % 64)) - 1 })
            .collect();
        branch(&succ, &all, &mut Vec::new(), &mut best);
        best
    };
    Ok(order.into_iter().map(|i| tuples[i].clone()).collect())
}

fn dag_longest(t: usize, succ: &[Vec<u64>]) -> Vec<usize> {
    let edge = |i: usize, j: usize| succ[i][j / 64] >> (j % 64) & 1 == 1;
    // longest chain starting at i, computed in an order where successors
    // come first (a transitive acyclic relation: fewer successors first)
    let mut idx: Vec<usize> = (0..t).collect();
    idx.sort_by_key(|&i| (0..t).filter(|&j| edge(i, j)).count());
    let mut len = vec![1usize; t];
    let mut next = vec![usize::MAX; t];
    for &i in &idx {
        for j in 0..t {
            if edge(i, j) && len[j] + 1 > len[i] {
                len[i] = len[j] + 1;
                next[i] = j;
            }
        }
    }
    let mut start = 0;
    for i in 0..t {
        if len[i] > len[start] {
            start = i;
        }
    }
    let mut out = vec![start];
    while next[*out.last().unwrap()] != usize::MAX {
        out.push(next[*out.last().unwrap()]);
    }
    out
}

fn branch(succ: &[Vec<u64>], cand: &[u64], cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    let size: u32 = cand.iter().map(|w| w.count_ones()).sum();
    if size == 0 {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        return;
    }
    if cur.len() + size as usize <= best.len() {
        return;
    }
    for (w, &word) in cand.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let v = w * 64 + b;
            let next: Vec<u64> = cand.iter().zip(&succ[v]).map(|(c, s)| c & s).collect();
            cur.push(v);
            branch(succ, &next, cur, best);
            cur.pop();
        }
    }
}

/// For all `m <= j < N`: `phi(a_j, b_j)` and not `phi(b_j, a_j)` in factor `j`.
pub fn threshold_rel_product(
    factors: &[FiniteStructure],
    phi: &Formula,
    a: &[Vec<usize>],
    b: &[Vec<usize>],
    m: usize,
) -> Result<bool, ProductError> {
    for j in m..factors.len() {
        let f = &factors[j];
        if !precedes(f, phi, &a[j], &b[j])? || precedes(f, phi, &b[j], &a[j])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `{"universe":[ids],"relations":{"R":{"arity":2,"tuples":[[a,b]]}}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    pub universe: Vec<usize>,
    #[serde(default)]
    pub relations: BTreeMap<String, Relation>,
}

impl TryFrom<&StructureJson> for FiniteStructure {
    type Error = ProductError;

    fn try_from(j: &StructureJson) -> Result<Self, Self::Error> {
        let mut ids = j.universe.clone();
        ids.sort_unstable();
        if ids != (0..j.universe.len()).collect::<Vec<_>>() {
            return Err(ProductError::Universe(j.universe.len()));
        }
        FiniteStructure::new(j.universe.len(), j.relations.clone())
    }
}

impl From<&FiniteStructure> for StructureJson {
    fn from(s: &FiniteStructure) -> Self {
        StructureJson {
            universe: (0..s.size()).collect(),
            relations: s.relations.clone(),
        }
    }
}

/// `{"kernel":[...]}`, `{"generated_by":[[...]]}` or `{"members":[[...]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterJson {
    Kernel(Vec<usize>),
    GeneratedBy(Vec<Vec<usize>>),
    Members(Vec<Vec<usize>>),
}

impl FilterJson {
    pub fn to_filter(&self, ground: usize) -> Result<Filter, ProductError> {
        match self {
            FilterJson::Kernel(k) => Filter::principal(ground, k),
            FilterJson::GeneratedBy(g) => Filter::generated_by(ground, g),
            FilterJson::Members(m) => Filter::from_members(ground, m),
        }
    }
}

/// `{"factors":[structure, ...],"filter":filter}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductJson {
    pub factors: Vec<StructureJson>,
    pub filter: FilterJson,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, Vec<usize>)]) -> BTreeMap<String, ProductElem> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn eval_basics() {
        let s = FiniteStructure::binary(2, "R", &[(0, 1)]).unwrap();
        let r: Formula = "(R x0 y0)".parse().unwrap();
        assert!(eval_qf(&s, &r, &pair_env(&[0], &[1])).unwrap());
        let nr = r.clone().negate();
        assert!(!eval_qf(&s, &nr, &pair_env(&[0], &[1])).unwrap());
        let asym: Formula = "(and (R x0 y0) (not (R y0 x0)))".parse().unwrap();
        assert!(eval_qf(&s, &asym, &pair_env(&[0], &[1])).unwrap());
        let bad: Formula = "(R x0)".parse().unwrap();
        assert!(matches!(
            eval_qf(&s, &bad, &pair_env(&[0], &[1])),
            Err(ProductError::Arity { .. })
        ));
    }

    #[test]
    fn filter_validation() {
        assert!(Filter::from_members(2, &[vec![0, 1], vec![0]]).is_ok());
        assert!(Filter::from_members(2, &[vec![0]]).is_err());
        assert!(Filter::from_members(2, &[vec![0, 1], vec![0], vec![1], vec![]]).is_err());
        assert!(Filter::from_members(2, &[vec![0, 1], vec![0], vec![1]]).is_err());
        let f = Filter::generated_by(3, &[vec![0, 1]]).unwrap();
        assert_eq!(f.members(), vec![vec![0, 1], vec![0, 1, 2]]);
        assert!(Filter::principal(3, &[1]).unwrap().is_ultra());
    }

    #[test]
    fn trivial_filter_is_the_direct_product() {
        let a = FiniteStructure::binary(2, "R", &[(0, 1)]).unwrap();
        let b = FiniteStructure::binary(2, "R", &[(0, 1), (1, 0)]).unwrap();
        let rp = ReducedProduct::new(vec![a, b], Filter::trivial(2).unwrap()).unwrap();
        assert_eq!(rp.classes().len(), 4);
        assert!(rp.holds("R", &[vec![0, 1], vec![1, 0]]).unwrap());
        assert!(!rp.holds("R", &[vec![1, 1], vec![0, 0]]).unwrap());
    }

    #[test]
    fn principal_ultrafilter_projects() {
        let a = FiniteStructure::linear_order(3);
        let b = FiniteStructure::binary(3, "<", &[]).unwrap();
        let rp = ReducedProduct::new(vec![a, b], Filter::principal(2, &[0]).unwrap()).unwrap();
        assert_eq!(rp.classes().len(), 3);
        assert!(rp.holds("<", &[vec![0, 2], vec![1, 0]]).unwrap());
    }

    #[test]
    fn generated_filter_reads_two_coordinates() {
        let l = FiniteStructure::linear_order(2);
        let rp = ReducedProduct::new(vec![l.clone(), l.clone(), l], Filter::generated_by(3, &[vec![0, 1]]).unwrap())
            .unwrap();
        assert!(rp.holds("<", &[vec![0, 0, 1], vec![1, 1, 0]]).unwrap());
        assert!(!rp.holds("<", &[vec![0, 1, 0], vec![1, 1, 1]]).unwrap());
    }

    #[test]
    fn los_for_atoms_and_the_negated_converse() {
        let a = FiniteStructure::binary(2, "R", &[(0, 1)]).unwrap();
        let b = FiniteStructure::binary(2, "R", &[]).unwrap();
        let rp = ReducedProduct::new(vec![a, b], Filter::trivial(2).unwrap()).unwrap();
        let e = env(&[("x0", vec![0, 0]), ("y0", vec![1, 1])]);
        let r: Formula = "(R x0 y0)".parse().unwrap();
        let c = atomic_los_check(&rp, &r, &e).unwrap();
        assert!(c.equivalent() && !c.product_holds);
        assert_eq!(c.index_set, vec![0]);
        // R holds in factor 0 only: the product satisfies not-R, but the
        // set {1} where not-R holds is outside the trivial filter
        let c = atomic_los_check(&rp, &r.negate(), &e).unwrap();
        assert!(c.product_holds && c.forward && !c.backward);
        let and: Formula = "(and (R x0 y0))".parse().unwrap();
        assert!(atomic_los_check(&rp, &and, &e).is_err());
    }

    #[test]
    fn chains_in_small_structures() {
        let lt: Formula = "(< x0 y0)".parse().unwrap();
        let s = FiniteStructure::linear_order(5);
        let c = longest_op_chain(&s, &lt, DEFAULT_CHAIN_BUDGET).unwrap();
        assert_eq!(c.len(), 5);
        assert!(is_op_chain(&s, &lt, &c).unwrap());

        let anti = FiniteStructure::binary(4, "<", &[]).unwrap();
        assert_eq!(longest_op_chain(&anti, &lt, DEFAULT_CHAIN_BUDGET).unwrap().len(), 1);

        // a 3-cycle has no chain longer than 2
        let cyc = FiniteStructure::binary(3, "<", &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let c = longest_op_chain(&cyc, &lt, DEFAULT_CHAIN_BUDGET).unwrap();
        assert_eq!(c.len(), 2);
        assert!(is_op_chain(&cyc, &lt, &c).unwrap());
    }

    #[test]
    fn chain_budget() {
        let lt: Formula = "(< x0 y0)".parse().unwrap();
        let s = FiniteStructure::linear_order(20);
        assert!(matches!(
            longest_op_chain(&s, &lt, 10),
            Err(ProductError::Budget { tuples: 20, budget: 10 })
        ));
    }

    #[test]
    fn threshold_relation() {
        let lt: Formula = "(< x0 y0)".parse().unwrap();
        let fs = vec![FiniteStructure::linear_order(3); 4];
        let a = vec![vec![0]; 4];
        let mut b = vec![vec![1]; 4];
        assert!(threshold_rel_product(&fs, &lt, &a, &b, 0).unwrap());
        assert!(threshold_rel_product(&fs, &lt, &a, &a, 4).unwrap());
        b[2] = vec![0];
        for m in 0..=4 {
            assert_eq!(threshold_rel_product(&fs, &lt, &a, &b, m).unwrap(), m > 2);
        }
    }
}
