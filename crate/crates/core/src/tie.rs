//! Clopen subsets of Cantor space as canonical antichains of binary words,
//! points with eventually periodic expansions, and the decomposition of the
//! non-neighbourhoods of a point into two orthogonal chain-generated ideals.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TieError {
    #[error("not a binary word: {0:?}")]
    Word(String),
    #[error("antichain is not canonical: {0}")]
    Canonicality(String),
    #[error("probe has depth {probe}, decomposition depth is {depth}")]
    Depth { probe: usize, depth: usize },
    #[error("cannot parse point {0:?}; expected forms like 01^omega or 0(01)^omega")]
    Point(String),
    #[error("depth must be at least 1")]
    ZeroDepth,
}

/// A binary word of length at most 64; bit `i` of `bits` is letter `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const MAX_LEN: usize = 64;

    pub fn empty() -> Self {
        Word { len: 0, bits: 0 }
    }

    pub fn from_bits(letters: &[bool]) -> Self {
        assert!(letters.len() <= Self::MAX_LEN, "word too long");
        let bits = letters.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as u64) << i);
        Word { len: letters.len() as u8, bits }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len());
        self.bits >> i & 1 == 1
    }

    pub fn push(&self, b: bool) -> Word {
        assert!(self.len() < Self::MAX_LEN, "word too long");
        Word {
            len: self.len + 1,
            bits: self.bits | (b as u64) << self.len,
        }
    }

    pub fn prefix(&self, k: usize) -> Word {
        assert!(k <= self.len());
        let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        Word {
            len: k as u8,
            bits: self.bits & mask,
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len <= other.len && other.prefix(self.len()) == *self
    }

    /// All words of length `k`, lexicographically.
    pub fn all_of_length(k: usize) -> Vec<Word> {
        assert!(k < 32);
        (0u64..1 << k)
            .map(|i| Word::from_bits(&(0..k).map(|j| i >> (k - 1 - j) & 1 == 1).collect::<Vec<_>>()))
            .collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len().min(other.len());
        for i in 0..common {
            match self.bit(i).cmp(&other.bit(i)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Word {
    type Err = TieError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > Self::MAX_LEN || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(TieError::Word(s.to_string()));
        }
        Ok(Word::from_bits(&s.chars().map(|c| c == '1').collect::<Vec<_>>()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Empty,
    Full,
    Split(Box<Node>, Box<Node>),
}

fn mk(l: Node, r: Node) -> Node {
    match (l, r) {
        (Node::Empty, Node::Empty) => Node::Empty,
        (Node::Full, Node::Full) => Node::Full,
        (l, r) => Node::Split(Box::new(l), Box::new(r)),
    }
}

fn cell_node(w: &Word, from: usize) -> Node {
    if from == w.len() {
        return Node::Full;
    }
    let child = cell_node(w, from + 1);
    if w.bit(from) {
        mk(Node::Empty, child)
    } else {
        mk(child, Node::Empty)
    }
}

fn join_node(a: &Node, b: &Node) -> Node {
    match (a, b) {
        (Node::Full, _) | (_, Node::Full) => Node::Full,
        (Node::Empty, x) | (x, Node::Empty) => x.clone(),
        (Node::Split(al, ar), Node::Split(bl, br)) => mk(join_node(al, bl), join_node(ar, br)),
    }
}

fn leaves(n: &Node, path: Word, out: &mut Vec<Word>) {
    match n {
        Node::Empty => {}
        Node::Full => out.push(path),
        Node::Split(l, r) => {
            leaves(l, path.push(false), out);
            leaves(r, path.push(true), out);
        }
    }
}

/// Shape of the subtree at depth `k` spanned by a canonical slice whose
/// words share their first `k` letters.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    Empty,
    Full,
    Split,
}

fn shape(s: &[Word], k: usize) -> Shape {
    match s {
        [] => Shape::Empty,
        [w] if w.len() == k => Shape::Full,
        _ => Shape::Split,
    }
}

fn halves(s: &[Word], k: usize) -> (&[Word], &[Word]) {
    s.split_at(s.partition_point(|w| !w.bit(k)))
}

/// Replaces two full children just written after `start` by their parent.
fn merge_siblings(out: &mut Vec<Word>, start: usize, prefix: Word) {
    let k = prefix.len();
    if out.len() == start + 2 && out[start].len() == k + 1 && out[start + 1].len() == k + 1 {
        out.truncate(start);
        out.push(prefix);
    }
}

#[derive(Clone, Copy)]
enum Op {
    Meet,
    Join,
}

fn binop(op: Op, a: &[Word], b: &[Word], prefix: Word, out: &mut Vec<Word>) {
    let k = prefix.len();
    match (op, shape(a, k), shape(b, k)) {
        (Op::Meet, Shape::Empty, _) | (Op::Meet, _, Shape::Empty) => {}
        (Op::Meet, Shape::Full, _) => out.extend_from_slice(b),
        (Op::Meet, _, Shape::Full) => out.extend_from_slice(a),
        (Op::Join, Shape::Full, _) | (Op::Join, _, Shape::Full) => out.push(prefix),
        (Op::Join, Shape::Empty, _) => out.extend_from_slice(b),
        (Op::Join, _, Shape::Empty) => out.extend_from_slice(a),
        (_, Shape::Split, Shape::Split) => {
            let (a0, a1) = halves(a, k);
            let (b0, b1) = halves(b, k);
            let start = out.len();
            binop(op, a0, b0, prefix.push(false), out);
            binop(op, a1, b1, prefix.push(true), out);
            merge_siblings(out, start, prefix);
        }
    }
}

fn complement_into(a: &[Word], prefix: Word, out: &mut Vec<Word>) {
    let k = prefix.len();
    match shape(a, k) {
        Shape::Empty => out.push(prefix),
        Shape::Full => {}
        Shape::Split => {
            let (a0, a1) = halves(a, k);
            let start = out.len();
            complement_into(a0, prefix.push(false), out);
            complement_into(a1, prefix.push(true), out);
            merge_siblings(out, start, prefix);
        }
    }
}

fn leq_at(a: &[Word], b: &[Word], k: usize) -> bool {
    match (shape(a, k), shape(b, k)) {
        (Shape::Empty, _) | (_, Shape::Full) => true,
        (_, Shape::Empty) | (Shape::Full, _) => false,
        (Shape::Split, Shape::Split) => {
            let (a0, a1) = halves(a, k);
            let (b0, b1) = halves(b, k);
            leq_at(a0, b0, k + 1) && leq_at(a1, b1, k + 1)
        }
    }
}

fn disjoint_at(a: &[Word], b: &[Word], k: usize) -> bool {
    match (shape(a, k), shape(b, k)) {
        (Shape::Empty, _) | (_, Shape::Empty) => true,
        (Shape::Full, _) | (_, Shape::Full) => false,
        (Shape::Split, Shape::Split) => {
            let (a0, a1) = halves(a, k);
            let (b0, b1) = halves(b, k);
            disjoint_at(a0, b0, k + 1) && disjoint_at(a1, b1, k + 1)
        }
    }
}

/// A clopen set: the union of the basic cells `[w]` for `w` in a canonical
/// antichain (no word a prefix of another, no sibling pair `w0`, `w1`),
/// sorted lexicographically. The empty antichain is `∅`; `[""]` is the
/// whole space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clopen {
    words: Vec<Word>,
}

impl Clopen {
    pub fn empty() -> Self {
        Clopen { words: vec![] }
    }

    pub fn full() -> Self {
        Clopen {
            words: vec![Word::empty()],
        }
    }

    pub fn cell(w: Word) -> Self {
        Clopen { words: vec![w] }
    }

    fn from_node(n: &Node) -> Self {
        let mut words = Vec::new();
        leaves(n, Word::empty(), &mut words);
        Clopen { words }
    }

    /// The union of the cells `[w]`, in any presentation.
    pub fn union_of(words: &[Word]) -> Self {
        let n = words
            .iter()
            .fold(Node::Empty, |acc, w| join_node(&acc, &cell_node(w, 0)));
        Self::from_node(&n)
    }

    /// Accepts only a canonical antichain.
    pub fn from_canonical(words: Vec<Word>) -> Result<Self, TieError> {
        for (i, u) in words.iter().enumerate() {
            for v in &words[i + 1..] {
                if u.is_prefix_of(v) || v.is_prefix_of(u) {
                    return Err(TieError::Canonicality(format!("{u} and {v} overlap")));
                }
                if u.len() == v.len() && !u.is_empty() && u.prefix(u.len() - 1) == v.prefix(v.len() - 1) {
                    return Err(TieError::Canonicality(format!("siblings {u} and {v} are not merged")));
                }
            }
        }
        if words.windows(2).any(|p| p[0] >= p[1]) {
            return Err(TieError::Canonicality("words are not sorted".into()));
        }
        Ok(Clopen { words })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.words.len() == 1 && self.words[0].is_empty()
    }

    /// Length of the longest word; every cell of that depth is inside or
    /// outside.
    pub fn depth(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn meet(&self, other: &Clopen) -> Clopen {
        let mut words = Vec::new();
        binop(Op::Meet, &self.words, &other.words, Word::empty(), &mut words);
        Clopen { words }
    }

    pub fn join(&self, other: &Clopen) -> Clopen {
        let mut words = Vec::new();
        binop(Op::Join, &self.words, &other.words, Word::empty(), &mut words);
        Clopen { words }
    }

    pub fn complement(&self) -> Clopen {
        let mut words = Vec::new();
        complement_into(&self.words, Word::empty(), &mut words);
        Clopen { words }
    }

    pub fn leq(&self, other: &Clopen) -> bool {
        leq_at(&self.words, &other.words, 0)
    }

    pub fn disjoint(&self, other: &Clopen) -> bool {
        disjoint_at(&self.words, &other.words, 0)
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.words.iter().any(|w| (0..w.len()).all(|i| w.bit(i) == x.bit(i)))
    }

    /// A nonempty clopen strictly below a nonempty `self`.
    pub fn split_off(&self) -> Option<Clopen> {
        let w = self.words.first()?;
        Some(Clopen::cell(w.push(false)))
    }

    /// The set of depth-`d` cells inside, as a bitmask indexed by the cell's
    /// word read as a binary number. Requires `depth() <= d <= 6`.
    pub fn cell_mask(&self, d: usize) -> u64 {
        assert!(d <= 6 && self.depth() <= d);
        let mut m = 0;
        for (i, c) in Word::all_of_length(d).iter().enumerate() {
            if self.words.iter().any(|w| w.is_prefix_of(c)) {
                m |= 1 << i;
            }
        }
        m
    }

    /// The clopen whose depth-`d` cells are the set bits of `mask`.
    pub fn from_cell_mask(d: usize, mask: u64) -> Clopen {
        let cells: Vec<Word> = Word::all_of_length(d)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, w)| w)
            .collect();
        Clopen::union_of(&cells)
    }
}

impl fmt::Debug for Clopen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.words.iter().map(|w| w.to_string())).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct ClopenJson {
    antichain: Vec<String>,
}

impl Serialize for Clopen {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ClopenJson {
            antichain: self.words.iter().map(|w| w.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Clopen {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ClopenJson::deserialize(d)?;
        let words = j
            .antichain
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Word>, _>>()
            .map_err(serde::de::Error::custom)?;
        Clopen::from_canonical(words).map_err(serde::de::Error::custom)
    }
}

/// An eventually periodic point `prefix · period^ω`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl Point {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Self {
        assert!(!period.is_empty(), "period must be nonempty");
        Point { prefix, period }
    }

    /// `w · 0^ω`.
    pub fn zero_tail(w: &Word) -> Self {
        Point::new((0..w.len()).map(|i| w.bit(i)).collect(), vec![false])
    }

    pub fn bit(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// The first `k` letters.
    pub fn restrict(&self, k: usize) -> Word {
        Word::from_bits(&(0..k).map(|i| self.bit(i)).collect::<Vec<_>>())
    }
}

fn bits_of(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

impl FromStr for Point {
    type Err = TieError;

    /// `P(T)^omega`, or `Pt^omega` where the single letter `t` repeats.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TieError::Point(s.to_string());
        let body = s.trim().strip_suffix("^omega").ok_or_else(err)?;
        let (prefix, period) = if let Some(head) = body.strip_suffix(')') {
            let (p, t) = head.split_once('(').ok_or_else(err)?;
            (p, t)
        } else {
            if body.is_empty() {
                return Err(err());
            }
            body.split_at(body.len() - 1)
        };
        let prefix = bits_of(prefix).ok_or_else(err)?;
        let period = bits_of(period).ok_or_else(err)?;
        if period.is_empty() {
            return Err(err());
        }
        Ok(Point::new(prefix, period))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        write!(f, "{}({})^omega", w(&self.prefix), w(&self.period))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Chains `a_1 <= ... <= a_d` and `b_1 <= ... <= b_d`: `a_i` is the union
/// of the depth-`i` cells lexicographically below `x`'s, `b_i` of those above.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TieDecomposition {
    pub x: Point,
    pub depth: usize,
    pub a_chain: Vec<Clopen>,
    pub b_chain: Vec<Clopen>,
}

impl TieDecomposition {
    pub fn top_a(&self) -> &Clopen {
        self.a_chain.last().unwrap()
    }

    pub fn top_b(&self) -> &Clopen {
        self.b_chain.last().unwrap()
    }

    /// Checks disjointness from `x` and each other, and
    /// `a_d ∨ b_d ∨ [x↾d]` = everything.
    pub fn invariant_errors(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, a) in self.a_chain.iter().enumerate() {
            if a.contains(&self.x) {
                out.push(format!("a_{} contains x", i + 1));
            }
        }
        for (i, b) in self.b_chain.iter().enumerate() {
            if b.contains(&self.x) {
                out.push(format!("b_{} contains x", i + 1));
            }
        }
        for (i, a) in self.a_chain.iter().enumerate() {
            for (j, b) in self.b_chain.iter().enumerate() {
                if !a.disjoint(b) {
                    out.push(format!("a_{} meets b_{}", i + 1, j + 1));
                }
            }
        }
        for (name, ch) in [("a", &self.a_chain), ("b", &self.b_chain)] {
            for i in 1..ch.len() {
                if !ch[i - 1].leq(&ch[i]) {
                    out.push(format!("{name}_{i} is not below {name}_{}", i + 1));
                }
            }
        }
        let cover = self.top_a().join(self.top_b()).join(&Clopen::cell(self.x.restrict(self.depth)));
        if !cover.is_full() {
            out.push("a_d, b_d and the cell of x do not cover the space".into());
        }
        out
    }
}

pub fn tie_decompose(x: &Point, d: usize) -> Result<TieDecomposition, TieError> {
    if d == 0 {
        return Err(TieError::ZeroDepth);
    }
    if d > Word::MAX_LEN {
        return Err(TieError::Depth {
            probe: d,
            depth: Word::MAX_LEN,
        });
    }
    let mut a_chain = Vec::with_capacity(d);
    let mut b_chain = Vec::with_capacity(d);
    let (mut a, mut b) = (Clopen::empty(), Clopen::empty());
    for i in 1..=d {
        let k = i - 1;
        let stem = x.restrict(k);
        if x.bit(k) {
            a = a.join(&Clopen::cell(stem.push(false)));
        } else {
            b = b.join(&Clopen::cell(stem.push(true)));
        }
        a_chain.push(a.clone());
        b_chain.push(b.clone());
    }
    Ok(TieDecomposition {
        x: x.clone(),
        depth: d,
        a_chain,
        b_chain,
    })
}

/// Least `i` (1-based) with `u <= a_i`.
pub fn a_rank(td: &TieDecomposition, u: &Clopen) -> Option<usize> {
    td.a_chain.iter().position(|a| u.leq(a)).map(|i| i + 1)
}

pub fn b_rank(td: &TieDecomposition, u: &Clopen) -> Option<usize> {
    td.b_chain.iter().position(|b| u.leq(b)).map(|i| i + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TieReport {
    pub probes: usize,
    pub in_ultrafilter: usize,
    pub covered: usize,
    pub orthogonal: bool,
    pub failures: Vec<String>,
}

impl TieReport {
    pub fn ok(&self) -> bool {
        self.orthogonal && self.failures.is_empty()
    }
}

/// For every probe missing `x`: it lies below `a_d ∨ b_d`, and its parts
/// `u ∧ a_d` and `u ∧ b_d` are below chain elements. Probes containing `x`
/// are counted and skipped. Also checks `a_i ∧ b_j = ∅` for all `i, j`.
pub fn true_tie_check(td: &TieDecomposition, probes: &[Clopen]) -> Result<TieReport, TieError> {
    let mut r = TieReport {
        probes: probes.len(),
        in_ultrafilter: 0,
        covered: 0,
        orthogonal: true,
        failures: vec![],
    };
    for a in &td.a_chain {
        for b in &td.b_chain {
            if !a.disjoint(b) {
                r.orthogonal = false;
            }
        }
    }
    let ab = td.top_a().join(td.top_b());
    for u in probes {
        if u.depth() > td.depth {
            return Err(TieError::Depth {
                probe: u.depth(),
                depth: td.depth,
            });
        }
        if u.contains(&td.x) {
            r.in_ultrafilter += 1;
            continue;
        }
        let ua = u.meet(td.top_a());
        let ub = u.meet(td.top_b());
        let ok = u.leq(&ab)
            && ua.join(&ub) == *u
            && a_rank(td, &ua).is_some()
            && b_rank(td, &ub).is_some();
        if ok {
            r.covered += 1;
        } else if r.failures.len() < 10 {
            r.failures.push(format!("{u:?} is not covered"));
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub fragment_depth: usize,
    pub elements: usize,
    pub linear: bool,
    pub orthogonal: bool,
    pub dichotomy: bool,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.linear && self.orthogonal && self.dichotomy
    }
}

/// All clopens of depth at most `d`.
pub fn fragment(d: usize) -> Vec<Clopen> {
    assert!(d <= 4, "fragments beyond depth 4 have more than 2^16 elements");
    (0u64..1 << (1u32 << d)).map(|m| Clopen::from_cell_mask(d, m)).collect()
}

/// On the algebra of clopens of depth at most `d`: the chains are linearly
/// ordered, anything below some `a_i` is disjoint from anything below some
/// `b_j`, and every element or its complement lies in the ideal generated by
/// both chains.
pub fn expansion_axiom_check(elements: &[Clopen], d: usize, td: &TieDecomposition) -> AxiomReport {
    let mut failures = Vec::new();
    let linear = [&td.a_chain, &td.b_chain]
        .iter()
        .all(|ch| ch.iter().all(|u| ch.iter().all(|v| u.leq(v) || v.leq(u))));
    if !linear {
        failures.push("a chain is not linearly ordered".into());
    }
    let mut orthogonal = td
        .a_chain
        .iter()
        .all(|a| td.b_chain.iter().all(|b| a.disjoint(b)));
    let (top_a, top_b) = (td.top_a(), td.top_b());
    for u in elements {
        if u.leq(top_a) && !u.disjoint(top_b) {
            orthogonal = false;
            if failures.len() < 10 {
                failures.push(format!("{u:?} is in both ideals' reach"));
            }
        }
    }
    let ab = top_a.join(top_b);
    let mut dichotomy = true;
    for u in elements {
        if !u.leq(&ab) && !u.complement().leq(&ab) {
            dichotomy = false;
            if failures.len() < 10 {
                failures.push(format!("neither {u:?} nor its complement is in the ideal"));
            }
        }
    }
    AxiomReport {
        fragment_depth: d,
        elements: elements.len(),
        linear,
        orthogonal,
        dichotomy,
        failures,
    }
}

/// Replaces the last element at which either chain grows by its
/// predecessor. Used to check that the axioms notice a broken chain.
pub fn corrupt_last_growth(td: &TieDecomposition) -> TieDecomposition {
    let mut out = td.clone();
    let grow = |ch: &[Clopen]| (1..ch.len()).rev().find(|&i| ch[i] != ch[i - 1]);
    let ga = grow(&td.a_chain);
    let gb = grow(&td.b_chain);
    match (ga, gb) {
        (Some(i), Some(j)) if i >= j => {
            for k in i..out.a_chain.len() {
                out.a_chain[k] = td.a_chain[i - 1].clone();
            }
        }
        (_, Some(j)) => {
            for k in j..out.b_chain.len() {
                out.b_chain[k] = td.b_chain[j - 1].clone();
            }
        }
        (Some(i), None) => {
            for k in i..out.a_chain.len() {
                out.a_chain[k] = td.a_chain[i - 1].clone();
            }
        }
        (None, None) => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(ws: &[&str]) -> Clopen {
        Clopen::union_of(&ws.iter().map(|w| w.parse().unwrap()).collect::<Vec<_>>())
    }

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn algebra_basics() {
        let u = c(&["01", "1"]);
        assert!(u.meet(&u.complement()).is_empty());
        assert!(c(&["0", "1"]).is_full());
        assert!(c(&["00"]).leq(&c(&["0"])));
        assert!(!c(&["0"]).leq(&c(&["00"])));
        assert_eq!(c(&["00", "01", "1"]), Clopen::full());
        assert_eq!(c(&["0", "01"]), c(&["0"]));
    }

    #[test]
    fn canonical_parsing() {
        let ok: Clopen = serde_json::from_str(r#"{"antichain":["00","1"]}"#).unwrap();
        assert_eq!(ok, c(&["00", "1"]));
        for bad in [
            r#"{"antichain":["0","01"]}"#,
            r#"{"antichain":["00","01"]}"#,
            r#"{"antichain":["1","00"]}"#,
            r#"{"antichain":["2"]}"#,
        ] {
            assert!(serde_json::from_str::<Clopen>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn membership() {
        let x = pt("01^omega");
        assert!(Clopen::full().contains(&x));
        assert!(!Clopen::empty().contains(&x));
        assert!(c(&["01"]).contains(&x));
        assert!(!c(&["01"]).contains(&pt("00^omega")));
    }

    #[test]
    fn point_syntax() {
        let x = pt("0(01)^omega");
        assert_eq!(x.restrict(6).to_string(), "001010");
        assert_eq!(pt("1^omega").restrict(3).to_string(), "111");
        assert_eq!(pt(&x.to_string()), x);
        for bad in ["01", "^omega", "0(2)^omega", "0()^omega"] {
            assert!(bad.parse::<Point>().is_err(), "{bad}");
        }
    }

    #[test]
    fn lexicographic_split() {
        let td = tie_decompose(&pt("0^omega"), 2).unwrap();
        assert!(td.top_a().is_empty());
        assert_eq!(*td.top_b(), c(&["00"]).complement());

        let td = tie_decompose(&pt("1^omega"), 2).unwrap();
        assert!(td.top_b().is_empty());
        assert_eq!(*td.top_a(), c(&["11"]).complement());

        let td = tie_decompose(&pt("01^omega"), 2).unwrap();
        assert_eq!(*td.top_a(), c(&["00"]));
        assert_eq!(*td.top_b(), c(&["1"]));
        assert!(td.invariant_errors().is_empty());
    }

    #[test]
    fn probes() {
        let td = tie_decompose(&pt("010^omega"), 3).unwrap();
        let r = true_tie_check(&td, &[Clopen::empty(), Clopen::full(), c(&["1", "00"])]).unwrap();
        assert_eq!((r.in_ultrafilter, r.covered), (1, 2));
        assert!(r.ok());
        assert!(matches!(
            true_tie_check(&td, &[c(&["0101"])]),
            Err(TieError::Depth { probe: 4, depth: 3 })
        ));
    }

    #[test]
    fn exhaustive_depth_three() {
        let frag = fragment(3);
        assert_eq!(frag.len(), 256);
        let td = tie_decompose(&pt("010^omega"), 3).unwrap();
        let r = true_tie_check(&td, &frag).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.in_ultrafilter + r.covered, 256);
        assert!(expansion_axiom_check(&frag, 3, &td).ok());
    }

    #[test]
    fn depth_one_fragment() {
        let frag = fragment(1);
        assert_eq!(frag.len(), 4);
        let td = tie_decompose(&pt("1^omega"), 1).unwrap();
        assert!(expansion_axiom_check(&frag, 1, &td).ok());
    }

    #[test]
    fn corrupted_chain_breaks_the_dichotomy() {
        let td = tie_decompose(&pt("010^omega"), 3).unwrap();
        let bad = corrupt_last_growth(&td);
        assert_eq!(bad.b_chain[2], td.b_chain[1]);
        let r = expansion_axiom_check(&fragment(3), 3, &bad);
        assert!(!r.dichotomy);
    }

    #[test]
    fn cell_masks_roundtrip() {
        for m in 0u64..256 {
            assert_eq!(Clopen::from_cell_mask(3, m).cell_mask(3), m);
        }
    }

    #[test]
    fn atomless() {
        let u = c(&["011"]);
        let v = u.split_off().unwrap();
        assert!(!v.is_empty() && v.leq(&u) && v != u);
    }
}
