//! Partial Hamilton cycles, extension counting, edge probabilities and the
//! method of conditional expectations.
//!
//! A partial Hamilton cycle `G` with `r` non-trivial and `s` trivial paths has
//! `2^(r-1) (r+s-1)!` Hamilton-cycle extensions (`(n-1)!/2` when `G` is empty).
//! Adding a join edge `e` turns `(r, s)` into `(r', s')` with
//! `r' + s' = r + s - 1`, so a uniformly random extension contains `e` with
//! probability `2^(r'-r) / (r+s-1)`. Everything here is exact.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::{Edge, Weighting};
use crate::scoring::{self, ItemKind, ScoreItem};

const NONE: usize = usize::MAX;

/// A Hamilton cycle of `K_n` in canonical form: it starts at vertex 0 and the
/// second vertex is smaller than the last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HamCycle {
    order: Vec<usize>,
}

impl HamCycle {
    /// Accepts any rotation or direction of a cyclic vertex sequence.
    pub fn new(n: usize, order: Vec<usize>) -> Result<HamCycle> {
        if n < 3 {
            return Err(Error::TooSmall { n });
        }
        if order.len() != n {
            return Err(Error::NotHamiltonian(format!(
                "{} vertices listed, expected {n}",
                order.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(Error::NotHamiltonian(format!(
                    "vertex {} out of range",
                    v + 1
                )));
            }
            if seen[v] {
                return Err(Error::NotHamiltonian(format!("vertex {} repeated", v + 1)));
            }
            seen[v] = true;
        }
        Ok(HamCycle::canonical(order))
    }

    fn canonical(mut order: Vec<usize>) -> HamCycle {
        let n = order.len();
        let start = order
            .iter()
            .position(|&v| v == 0)
            .expect("vertex 0 present");
        order.rotate_left(start);
        if order[1] > order[n - 1] {
            order[1..].reverse();
        }
        HamCycle { order }
    }

    /// Rebuilds a cycle from an edge set in which every vertex has degree 2.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<HamCycle> {
        if edges.len() != n {
            return Err(Error::NotHamiltonian(format!(
                "{} edges, expected {n}",
                edges.len()
            )));
        }
        let mut adj = vec![[NONE; 2]; n];
        for e in edges {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if a >= n {
                    return Err(Error::NotHamiltonian(format!(
                        "vertex {} out of range",
                        a + 1
                    )));
                }
                let slot = &mut adj[a];
                if slot[0] == NONE {
                    slot[0] = b;
                } else if slot[1] == NONE {
                    slot[1] = b;
                } else {
                    return Err(Error::NotHamiltonian(format!(
                        "vertex {} has degree > 2",
                        a + 1
                    )));
                }
            }
        }
        let mut order = Vec::with_capacity(n);
        let (mut prev, mut cur) = (NONE, 0usize);
        for _ in 0..n {
            order.push(cur);
            let [a, b] = adj[cur];
            let next = if a != prev { a } else { b };
            if next == NONE {
                return Err(Error::NotHamiltonian(format!(
                    "vertex {} has degree < 2",
                    cur + 1
                )));
            }
            prev = cur;
            cur = next;
        }
        if cur != 0 {
            return Err(Error::NotHamiltonian(
                "edges do not close a single cycle".into(),
            ));
        }
        HamCycle::new(n, order)
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// The `n` edges in traversal order; edge `i` joins positions `i` and `i+1`.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.n();
        (0..n)
            .map(|i| Edge::new(self.order[i], self.order[(i + 1) % n]))
            .collect()
    }

    /// `positions()[v]` is the index of `v` in the canonical order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.n()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn weight(&self, w: &Weighting) -> i128 {
        let n = self.n();
        (0..n)
            .map(|i| w.weight(self.order[i], self.order[(i + 1) % n]) as i128)
            .sum()
    }

    /// 1-based vertex list, as printed in result records.
    pub fn one_based(&self) -> Vec<usize> {
        self.order.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Display for HamCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.order {
            write!(f, "{}-", v + 1)?;
        }
        write!(f, "{}", self.order[0] + 1)
    }
}

/// A spanning union of vertex-disjoint paths (trivial paths allowed), or a
/// complete Hamilton cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialHamCycle {
    n: usize,
    adj: Vec<[usize; 2]>,
    edges: Vec<Edge>,
    complete: bool,
    paths: Vec<Vec<usize>>,
    path_of: Vec<usize>,
    pos: Vec<usize>,
    nontrivial: usize,
}

impl PartialHamCycle {
    pub fn empty(n: usize) -> Result<PartialHamCycle> {
        if n < 3 {
            return Err(Error::TooSmall { n });
        }
        let mut g = PartialHamCycle {
            n,
            adj: vec![[NONE; 2]; n],
            edges: Vec::new(),
            complete: false,
            paths: Vec::new(),
            path_of: vec![0; n],
            pos: vec![0; n],
            nontrivial: 0,
        };
        g.reindex();
        Ok(g)
    }

    /// Validates that `edges` form vertex-disjoint paths or one Hamilton cycle.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<PartialHamCycle> {
        let mut g = PartialHamCycle::empty(n)?;
        let mut seen = std::collections::HashSet::new();
        for &e in edges {
            if e.v >= n {
                return Err(Error::VertexOutOfRange { v: e.v, n });
            }
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge { u: e.u, v: e.v });
            }
            for x in [e.u, e.v] {
                let slot = &mut g.adj[x];
                if slot[0] == NONE {
                    slot[0] = e.other(x);
                } else if slot[1] == NONE {
                    slot[1] = e.other(x);
                } else {
                    return Err(Error::DegreeExceeded { v: x });
                }
            }
        }
        g.edges = edges.to_vec();
        g.edges.sort_unstable();
        // Every component with no degree-<2 vertex is a cycle.
        let mut visited = vec![false; n];
        for v in 0..n {
            if g.degree(v) < 2 {
                let mut prev = NONE;
                let mut cur = v;
                loop {
                    visited[cur] = true;
                    let next = g.adj[cur].into_iter().find(|&x| x != NONE && x != prev);
                    match next {
                        Some(x) => {
                            prev = cur;
                            cur = x;
                        }
                        None => break,
                    }
                }
            }
        }
        if let Some(v) = (0..n).find(|&v| !visited[v]) {
            let mut len = 0;
            let (mut prev, mut cur) = (NONE, v);
            loop {
                len += 1;
                let [a, b] = g.adj[cur];
                let next = if a != prev { a } else { b };
                prev = cur;
                cur = next;
                if cur == v {
                    break;
                }
            }
            if len < n {
                return Err(Error::PrematureCycle);
            }
            g.complete = true;
        }
        g.reindex();
        Ok(g)
    }

    fn reindex(&mut self) {
        let n = self.n;
        self.paths.clear();
        self.nontrivial = 0;
        if self.complete {
            let mut order = Vec::with_capacity(n);
            let (mut prev, mut cur) = (NONE, 0usize);
            for _ in 0..n {
                order.push(cur);
                let [a, b] = self.adj[cur];
                let next = if a != prev { a } else { b };
                prev = cur;
                cur = next;
            }
            for (i, &v) in order.iter().enumerate() {
                self.path_of[v] = 0;
                self.pos[v] = i;
            }
            self.paths.push(order);
            return;
        }
        let mut visited = vec![false; n];
        for v in 0..n {
            if visited[v] || self.degree(v) == 2 {
                continue;
            }
            let id = self.paths.len();
            let mut path = Vec::new();
            let (mut prev, mut cur) = (NONE, v);
            loop {
                visited[cur] = true;
                self.path_of[cur] = id;
                self.pos[cur] = path.len();
                path.push(cur);
                match self.adj[cur].into_iter().find(|&x| x != NONE && x != prev) {
                    Some(x) => {
                        prev = cur;
                        cur = x;
                    }
                    None => break,
                }
            }
            if path.len() > 1 {
                self.nontrivial += 1;
            }
            self.paths.push(path);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x != NONE).count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied().filter(|&x| x != NONE)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][0] == b || self.adj[a][1] == b
    }

    /// Number of non-trivial paths `r` (0 for a complete cycle).
    pub fn r(&self) -> usize {
        if self.complete {
            0
        } else {
            self.nontrivial
        }
    }

    /// Number of trivial paths `s`.
    pub fn s(&self) -> usize {
        if self.complete {
            0
        } else {
            self.paths.len() - self.nontrivial
        }
    }

    /// `r + s`; a complete cycle counts as one.
    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// Path vertex sequences. A complete cycle is reported as one sequence
    /// starting at vertex 0.
    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    pub fn path_of(&self, v: usize) -> usize {
        self.path_of[v]
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    /// The endpoints of the path holding `v` (equal for a trivial path).
    pub fn path_ends(&self, v: usize) -> (usize, usize) {
        let p = &self.paths[self.path_of[v]];
        (p[0], p[p.len() - 1])
    }

    pub fn path_len(&self, v: usize) -> usize {
        self.paths[self.path_of[v]].len()
    }

    /// Whether adding `e` keeps this a partial Hamilton cycle.
    pub fn is_joinable(&self, e: Edge) -> bool {
        if self.complete || e.v >= self.n || self.has_edge(e.u, e.v) {
            return false;
        }
        if self.degree(e.u) == 2 || self.degree(e.v) == 2 {
            return false;
        }
        self.path_of[e.u] != self.path_of[e.v] || self.paths.len() == 1
    }

    /// `J(G)`, sorted lexicographically. For a Hamilton path this is the
    /// single closing edge.
    pub fn join_edges(&self) -> Result<Vec<Edge>> {
        if self.complete {
            return Err(Error::AlreadyComplete);
        }
        if self.paths.len() == 1 {
            let p = &self.paths[0];
            return Ok(vec![Edge::new(p[0], p[p.len() - 1])]);
        }
        let ends: Vec<usize> = (0..self.n).filter(|&v| self.degree(v) < 2).collect();
        let mut out = Vec::new();
        for (i, &a) in ends.iter().enumerate() {
            for &b in &ends[i + 1..] {
                if self.path_of[a] != self.path_of[b] {
                    out.push(Edge::new(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Adds a join edge, failing with the reason it is not one.
    pub fn add_edge(&mut self, e: Edge) -> Result<()> {
        if self.complete {
            return Err(Error::AlreadyComplete);
        }
        if e.v >= self.n {
            return Err(Error::VertexOutOfRange { v: e.v, n: self.n });
        }
        if self.has_edge(e.u, e.v) {
            return Err(Error::DuplicateEdge { u: e.u, v: e.v });
        }
        for x in [e.u, e.v] {
            if self.degree(x) == 2 {
                return Err(Error::DegreeExceeded { v: x });
            }
        }
        if self.path_of[e.u] == self.path_of[e.v] {
            if self.paths.len() != 1 {
                return Err(Error::PrematureCycle);
            }
            self.complete = true;
        }
        for x in [e.u, e.v] {
            let slot = &mut self.adj[x];
            if slot[0] == NONE {
                slot[0] = e.other(x);
            } else {
                slot[1] = e.other(x);
            }
        }
        let at = self.edges.binary_search(&e).unwrap_err();
        self.edges.insert(at, e);
        self.reindex();
        Ok(())
    }

    pub fn with_edge(&self, e: Edge) -> Result<PartialHamCycle> {
        let mut g = self.clone();
        g.add_edge(e)?;
        Ok(g)
    }

    pub fn to_ham_cycle(&self) -> Option<HamCycle> {
        if self.complete {
            Some(HamCycle::canonical(self.paths[0].clone()))
        } else {
            None
        }
    }

    /// Change in `r` caused by adding the join edge `e`.
    pub(crate) fn join_delta_r(&self, e: Edge) -> i32 {
        let tu = self.path_len(e.u) == 1;
        let tv = self.path_len(e.v) == 1;
        match (tu, tv) {
            (true, true) => 1,
            (false, false) => -1,
            _ => 0,
        }
    }
}

/// `2^(r-1) (r+s-1)!` as an integer: the number of Hamilton cycles containing `g`.
pub fn extension_count(g: &PartialHamCycle) -> BigUint {
    if g.is_complete() {
        return BigUint::one();
    }
    let p = g.path_count();
    let mut f = BigUint::one();
    for i in 2..p {
        f *= BigUint::from(i);
    }
    match g.r() {
        0 => f / 2u32,
        r => f << (r - 1),
    }
}

/// `P(e in H)` for `H` uniform over the extensions of `g`.
pub fn edge_prob(g: &PartialHamCycle, e: Edge) -> Result<BigRational> {
    if !g.is_joinable(e) {
        return Err(Error::NotJoinable { u: e.u, v: e.v });
    }
    let p = g.path_count();
    if p == 1 {
        return Ok(BigRational::one());
    }
    let (num, den) = prob_parts(g.join_delta_r(e), p);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn prob_parts(delta_r: i32, paths: usize) -> (i64, i64) {
    let m = paths as i64 - 1;
    match delta_r {
        1 => (2, m),
        0 => (1, m),
        _ => (1, 2 * m),
    }
}

/// `E(w(H))` for `H` uniform over the extensions of `g`.
pub fn expected_weight(w: &Weighting, g: &PartialHamCycle) -> BigRational {
    let base = w
        .subgraph_weight(g.edges())
        .expect("edges of g are edges of K_n");
    let mut total = BigRational::from_integer(BigInt::from(base));
    if g.is_complete() {
        return total;
    }
    let joins = g.join_edges().expect("incomplete");
    if g.path_count() == 1 {
        return total + BigRational::from_integer(BigInt::from(w.w(joins[0])));
    }
    // P(e) = 2^(r'-r)/(p-1): gather the sum over the common denominator 2(p-1).
    let mut scaled = BigInt::zero();
    for e in joins {
        let factor = match g.join_delta_r(e) {
            1 => 4,
            0 => 2,
            _ => 1,
        };
        scaled += BigInt::from(factor * w.w(e) as i128);
    }
    total += BigRational::new(scaled, BigInt::from(2 * (g.path_count() as i64 - 1)));
    total
}

/// Expectations of the extensions `G ∪ e`, one per join edge, in join order.
#[derive(Debug, Clone)]
pub enum Scores {
    Exact(Vec<BigRational>),
    /// `numerators[i] / denominator` with a positive common denominator.
    Scaled {
        denominator: i128,
        numerators: Vec<i128>,
    },
}

impl Scores {
    pub fn len(&self) -> usize {
        match self {
            Scores::Exact(v) => v.len(),
            Scores::Scaled { numerators, .. } => numerators.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the smallest score; the first one on ties.
    pub fn argmin(&self) -> usize {
        match self {
            Scores::Exact(v) => first_min(v.iter()),
            Scores::Scaled { numerators, .. } => first_min(numerators.iter()),
        }
    }

    pub fn value(&self, i: usize) -> BigRational {
        match self {
            Scores::Exact(v) => v[i].clone(),
            Scores::Scaled {
                denominator,
                numerators,
            } => BigRational::new(BigInt::from(numerators[i]), BigInt::from(*denominator)),
        }
    }
}

fn first_min<'a, T: Ord + 'a>(it: impl Iterator<Item = &'a T>) -> usize {
    let mut best: Option<(usize, &T)> = None;
    for (i, x) in it.enumerate() {
        if best.is_none_or(|(_, b)| x < b) {
            best = Some((i, x));
        }
    }
    best.expect("at least one candidate").0
}

/// Exact conditional expectation of a fixed functional `X` over the
/// Hamilton-cycle extensions of a partial Hamilton cycle.
pub trait ConditionalExpectation {
    fn expectation(&mut self, g: &PartialHamCycle) -> Result<BigRational>;

    /// `E(X | G ∪ e)` for every `e` in `joins` (which is `J(G)`).
    /// Implementations may override this with an incremental evaluation.
    fn score_extensions(&mut self, g: &PartialHamCycle, joins: &[Edge]) -> Result<Scores> {
        let mut out = Vec::with_capacity(joins.len());
        for &e in joins {
            out.push(self.expectation(&g.with_edge(e)?)?);
        }
        Ok(Scores::Exact(out))
    }
}

/// Adapts a closure to [`ConditionalExpectation`].
pub struct FnExpectation<F>(pub F);

impl<F> ConditionalExpectation for FnExpectation<F>
where
    F: FnMut(&PartialHamCycle) -> Result<BigRational>,
{
    fn expectation(&mut self, g: &PartialHamCycle) -> Result<BigRational> {
        (self.0)(g)
    }
}

/// Completes `g0` to a Hamilton cycle `H` with `X(H) <= E(X | g0)`.
///
/// Each step adds the join edge minimising the conditional expectation,
/// the lexicographically smallest one on ties. The chosen value can never
/// exceed the current one; a violation is reported instead of returned.
pub fn derandomize<C: ConditionalExpectation + ?Sized>(
    g0: &PartialHamCycle,
    oracle: &mut C,
) -> Result<HamCycle> {
    let mut g = g0.clone();
    let mut current = oracle.expectation(&g)?;
    while !g.is_complete() {
        let joins = g.join_edges()?;
        let scores = oracle.score_extensions(&g, &joins)?;
        if scores.len() != joins.len() {
            return Err(Error::InvariantViolation(format!(
                "{} scores for {} join edges",
                scores.len(),
                joins.len()
            )));
        }
        let best = scores.argmin();
        let value = scores.value(best);
        if value > current {
            return Err(Error::InvariantViolation(format!(
                "conditional expectation rose from {current} to {value}"
            )));
        }
        g.add_edge(joins[best])?;
        current = value;
    }
    Ok(g.to_ham_cycle().expect("complete"))
}

/// [`ConditionalExpectation`] of the cycle weight, scored incrementally.
pub struct WeightExpectation<'a> {
    w: &'a Weighting,
}

impl<'a> WeightExpectation<'a> {
    pub fn new(w: &'a Weighting) -> WeightExpectation<'a> {
        WeightExpectation { w }
    }
}

impl ConditionalExpectation for WeightExpectation<'_> {
    fn expectation(&mut self, g: &PartialHamCycle) -> Result<BigRational> {
        Ok(expected_weight(self.w, g))
    }

    fn score_extensions(&mut self, g: &PartialHamCycle, joins: &[Edge]) -> Result<Scores> {
        if g.path_count() < scoring::MIN_INCREMENTAL_PATHS {
            let mut out = Vec::with_capacity(joins.len());
            for &e in joins {
                out.push(expected_weight(self.w, &g.with_edge(e)?));
            }
            return Ok(Scores::Exact(out));
        }
        let items = weight_items(self.w, joins);
        let sums = scoring::extension_sums(g, &items, joins)?;
        let p = g.path_count() as i128;
        let base = self.w.subgraph_weight(g.edges())?;
        // Bucket k carries denominator 8 * (p-2)^(k).
        let den = 8 * (p - 2);
        let numerators = sums
            .iter()
            .map(|acc| {
                base.checked_mul(den)
                    .and_then(|x| x.checked_add(acc[0].checked_mul(p - 2)?))
                    .and_then(|x| x.checked_add(acc[1]))
                    .ok_or(Error::ArithmeticOverflow("weight scores"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Scores::Scaled {
            denominator: den,
            numerators,
        })
    }
}

pub(crate) fn weight_items(w: &Weighting, joins: &[Edge]) -> Vec<ScoreItem> {
    joins
        .iter()
        .map(|&e| ScoreItem {
            verts: [e.u, e.v, e.u, e.v],
            kind: ItemKind::Edge,
            payload: w.w(e) as i128,
        })
        .collect()
}

/// A Hamilton cycle containing `g` whose weight is at most the average over
/// all such cycles.
pub fn min_avg_cycle(w: &Weighting, g: &PartialHamCycle) -> Result<HamCycle> {
    if w.n() != g.n() {
        return Err(Error::SizeMismatch {
            left: w.n(),
            right: g.n(),
        });
    }
    derandomize(g, &mut WeightExpectation::new(w))
}
