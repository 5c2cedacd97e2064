//! 4-cycle balance: how far a weighting is from one where every Hamilton
//! cycle has the same weight.
//!
//! A 4-cycle `a-b-c-d-a` has the two perfect matchings `{ab, cd}` and
//! `{bc, da}`; its balance is the absolute difference of their weights. A
//! Hamilton cycle `H` that contains the heavier matching of `C` and can swap
//! it for the lighter one (a 2-opt move) gains `bal(C)`. The sum of those
//! gains is `q(H)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hamcycle::{
    derandomize, expected_weight, ConditionalExpectation, HamCycle, PartialHamCycle, Scores,
};
use crate::instance::{Edge, Weighting};
use crate::scoring::{self, ItemKind, ScoreItem};

/// A 4-cycle of `K_n`, stored as `a-b-c-d-a` with `a` the smallest vertex and
/// `b < d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FourCycle {
    a: usize,
    b: usize,
    c: usize,
    d: usize,
}

impl FourCycle {
    /// Builds the 4-cycle visiting `order` cyclically.
    pub fn new(order: [usize; 4]) -> Result<FourCycle> {
        for i in 0..4 {
            for j in i + 1..4 {
                if order[i] == order[j] {
                    return Err(Error::SharedVertex { v: order[i] });
                }
            }
        }
        let start = (0..4).min_by_key(|&i| order[i]).expect("four entries");
        let mut o = [0; 4];
        for (i, slot) in o.iter_mut().enumerate() {
            *slot = order[(start + i) % 4];
        }
        if o[1] > o[3] {
            o.swap(1, 3);
        }
        Ok(FourCycle {
            a: o[0],
            b: o[1],
            c: o[2],
            d: o[3],
        })
    }

    /// The three 4-cycles on the vertex set `{a < b < c < d}`.
    pub fn on_subset(a: usize, b: usize, c: usize, d: usize) -> [FourCycle; 3] {
        debug_assert!(a < b && b < c && c < d);
        [
            FourCycle { a, b, c, d },
            FourCycle { a, b, c: d, d: c },
            FourCycle { a, b: c, c: b, d },
        ]
    }

    pub fn vertices(&self) -> [usize; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn edges(&self) -> [Edge; 4] {
        let [a, b, c, d] = self.vertices();
        [
            Edge::new(a, b),
            Edge::new(b, c),
            Edge::new(c, d),
            Edge::new(d, a),
        ]
    }

    /// `({ab, cd}, {bc, da})`.
    pub fn matchings(&self) -> ([Edge; 2], [Edge; 2]) {
        let [ab, bc, cd, da] = self.edges();
        ([ab, cd], [bc, da])
    }
}

impl fmt::Display for FourCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-{}-{}-{}-{}",
            self.a + 1,
            self.b + 1,
            self.c + 1,
            self.d + 1,
            self.a + 1
        )
    }
}

/// How a 4-cycle sits in a Hamilton cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbedStatus {
    NotEmbedded,
    EmbeddedOnly,
    CorrectlyEmbedded,
    HeavilyEmbedded,
    HeavilyAndCorrectlyEmbedded,
}

impl EmbedStatus {
    pub fn is_embedded(self) -> bool {
        self != EmbedStatus::NotEmbedded
    }

    pub fn is_correct(self) -> bool {
        matches!(
            self,
            EmbedStatus::CorrectlyEmbedded | EmbedStatus::HeavilyAndCorrectlyEmbedded
        )
    }

    pub fn is_heavy(self) -> bool {
        matches!(
            self,
            EmbedStatus::HeavilyEmbedded | EmbedStatus::HeavilyAndCorrectlyEmbedded
        )
    }
}

fn matching_weight(w: &Weighting, m: &[Edge; 2]) -> i128 {
    w.w(m[0]) as i128 + w.w(m[1]) as i128
}

/// `|w(ab) + w(cd) - w(bc) - w(da)|`.
pub fn balance(w: &Weighting, c: &FourCycle) -> i128 {
    let (m1, m2) = c.matchings();
    (matching_weight(w, &m1) - matching_weight(w, &m2)).abs()
}

/// The sum of the balances of all `3 C(n,4)` 4-cycles.
pub fn four_cycle_norm(w: &Weighting) -> i128 {
    let n = w.n();
    let mut total = 0i128;
    for a in 0..n {
        for b in a + 1..n {
            let ab = w.weight(a, b) as i128;
            for c in b + 1..n {
                let ac = w.weight(a, c) as i128;
                let bc = w.weight(b, c) as i128;
                for d in c + 1..n {
                    let m1 = ab + w.weight(c, d) as i128;
                    let m2 = ac + w.weight(b, d) as i128;
                    let m3 = w.weight(a, d) as i128 + bc;
                    total += (m1 - m2).abs() + (m1 - m3).abs() + (m2 - m3).abs();
                }
            }
        }
    }
    total
}

/// Whether the vertex-disjoint edges `e1`, `e2` interleave along `h`.
pub fn crossing(h: &HamCycle, e1: Edge, e2: Edge) -> Result<bool> {
    if let Some(v) = e1.shares_vertex(&e2) {
        return Err(Error::SharedVertex { v });
    }
    let n = h.n();
    if e1.v >= n || e2.v >= n {
        return Err(Error::VertexOutOfRange {
            v: e1.v.max(e2.v),
            n,
        });
    }
    let pos = h.positions();
    Ok(crosses(&pos, e1, e2))
}

fn crosses(pos: &[usize], e1: Edge, e2: Edge) -> bool {
    let sorted = |e: Edge| {
        let (p, q) = (pos[e.u], pos[e.v]);
        (p.min(q), p.max(q))
    };
    let (mut a, mut b) = sorted(e1);
    let (mut x, mut y) = sorted(e2);
    if x < a {
        std::mem::swap(&mut a, &mut x);
        std::mem::swap(&mut b, &mut y);
    }
    a < x && x < b && b < y
}

pub fn embedding_status(w: &Weighting, h: &HamCycle, c: &FourCycle) -> EmbedStatus {
    let pos = h.positions();
    let n = h.n();
    let in_h = |e: Edge| {
        let d = pos[e.u].abs_diff(pos[e.v]);
        d == 1 || d == n - 1
    };
    let (m1, m2) = c.matchings();
    let has1 = m1.iter().all(|&e| in_h(e));
    let has2 = m2.iter().all(|&e| in_h(e));
    if !has1 && !has2 {
        return EmbedStatus::NotEmbedded;
    }
    let shared = c.edges().iter().filter(|&&e| in_h(e)).count();
    let (w1, w2) = (matching_weight(w, &m1), matching_weight(w, &m2));
    let heavy = (has1 && w1 > w2) || (has2 && w2 > w1);
    let correct = shared == 2 && {
        let other = if has1 { m2 } else { m1 };
        crosses(&pos, other[0], other[1])
    };
    match (heavy, correct) {
        (true, true) => EmbedStatus::HeavilyAndCorrectlyEmbedded,
        (true, false) => EmbedStatus::HeavilyEmbedded,
        (false, true) => EmbedStatus::CorrectlyEmbedded,
        (false, false) => EmbedStatus::EmbeddedOnly,
    }
}

/// Gain of swapping the `h` edges at positions `i < j` for the other matching
/// of their 4-cycle, or 0 if that is not an improvement.
fn exchange_gain(w: &Weighting, order: &[usize], i: usize, j: usize) -> i128 {
    let n = order.len();
    let (vi, vi1) = (order[i], order[(i + 1) % n]);
    let (vj, vj1) = (order[j], order[(j + 1) % n]);
    let kept = w.weight(vi, vi1) as i128 + w.weight(vj, vj1) as i128;
    let swapped = w.weight(vi, vj) as i128 + w.weight(vi1, vj1) as i128;
    (kept - swapped).max(0)
}

fn disjoint_positions(n: usize, i: usize, j: usize) -> bool {
    j > i + 1 && !(i == 0 && j == n - 1)
}

/// `q(H)`: total balance of the 4-cycles heavily and correctly embedded in `h`.
pub fn q_value(w: &Weighting, h: &HamCycle) -> i128 {
    let n = h.n();
    let order = h.order();
    let mut total = 0;
    for i in 0..n {
        for j in i + 2..n {
            if disjoint_positions(n, i, j) {
                total += exchange_gain(w, order, i, j);
            }
        }
    }
    total
}

/// A maximum-weight index-sum class of vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    /// The class index `i + j` with 1-based positions.
    pub class: usize,
    pub edges: Vec<Edge>,
    pub total: u128,
}

/// Best class `{(i, j) : i < j, i + j = q}` over positions `0..n`, returned as
/// `(q 0-based, pairs)`.
fn best_class(
    n: usize,
    t: &mut dyn FnMut(usize, usize) -> u128,
) -> (usize, Vec<(usize, usize)>, u128) {
    let mut sums = vec![0u128; 2 * n];
    for i in 0..n {
        for j in i + 1..n {
            sums[i + j] += t(i, j);
        }
    }
    let mut best = 1;
    for q in 2..=2 * n - 3 {
        if sums[q] > sums[best] {
            best = q;
        }
    }
    let pairs = (0..n)
        .filter_map(|i| {
            let j = best.checked_sub(i)?;
            (i < j && j < n).then_some((i, j))
        })
        .collect();
    (best, pairs, sums[best])
}

/// A pairwise non-crossing edge set carrying at least a `1/(2n)` share of the
/// total of `t`. Positions are taken along `h`; the heaviest index-sum class
/// wins, the smallest class on ties.
pub fn noncrossing_selection(h: &HamCycle, mut t: impl FnMut(Edge) -> u128) -> Selection {
    let order = h.order().to_vec();
    let (q, pairs, total) = best_class(h.n(), &mut |i, j| t(Edge::new(order[i], order[j])));
    Selection {
        class: q + 2,
        edges: pairs
            .into_iter()
            .map(|(i, j)| Edge::new(order[i], order[j]))
            .collect(),
        total,
    }
}

/// Applies a non-crossing family of improving 2-opt exchanges, losing at
/// least `q(H) / 2n` weight. The result is rebuilt and checked to be a
/// Hamilton cycle.
pub fn improve(w: &Weighting, h: &HamCycle) -> Result<HamCycle> {
    let n = h.n();
    if w.n() != n {
        return Err(Error::SizeMismatch {
            left: w.n(),
            right: n,
        });
    }
    let order = h.order();
    let (_, pairs, total) = best_class(n, &mut |i, j| {
        if disjoint_positions(n, i, j) {
            exchange_gain(w, order, i, j) as u128
        } else {
            0
        }
    });
    if total == 0 {
        return Ok(h.clone());
    }
    let mut edges: Vec<Edge> = h.edges();
    let mut removed = vec![false; n];
    let mut added = Vec::new();
    for (i, j) in pairs {
        if !disjoint_positions(n, i, j) || exchange_gain(w, order, i, j) == 0 {
            continue;
        }
        removed[i] = true;
        removed[j] = true;
        added.push(Edge::new(order[i], order[j]));
        added.push(Edge::new(order[(i + 1) % n], order[(j + 1) % n]));
    }
    let mut kept: Vec<Edge> = edges
        .drain(..)
        .enumerate()
        .filter(|(i, _)| !removed[*i])
        .map(|(_, e)| e)
        .collect();
    kept.extend(added);
    let out = HamCycle::from_edges(n, &kept).map_err(|e| {
        Error::InvariantViolation(format!("non-crossing exchanges broke the cycle: {e}"))
    })?;
    let lhs = out.weight(w) * 2 * n as i128;
    let rhs = h.weight(w) * 2 * n as i128 - q_value(w, h);
    if lhs > rhs {
        return Err(Error::InvariantViolation(format!(
            "improvement lost {} * 2n, needed q = {}",
            h.weight(w) - out.weight(w),
            q_value(w, h)
        )));
    }
    Ok(out)
}

/// Every unbalanced 4-cycle with its heavier matching as the first and third
/// edge of `verts`.
fn unbalanced_items(w: &Weighting) -> Vec<ScoreItem> {
    let n = w.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for cyc in FourCycle::on_subset(a, b, c, d) {
                        let (m1, m2) = cyc.matchings();
                        let diff = matching_weight(w, &m1) - matching_weight(w, &m2);
                        let [a, b, c, d] = cyc.vertices();
                        let verts = match diff.signum() {
                            1 => [a, b, c, d],
                            -1 => [b, c, d, a],
                            _ => continue,
                        };
                        out.push(ScoreItem {
                            verts,
                            kind: ItemKind::Cycle,
                            payload: diff.abs(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// `E(q(H))` for `H` uniform over the extensions of `g`.
pub fn expected_q(w: &Weighting, g: &PartialHamCycle) -> Result<BigRational> {
    if w.n() != g.n() {
        return Err(Error::SizeMismatch {
            left: w.n(),
            right: g.n(),
        });
    }
    expected_q_items(w, g, &unbalanced_items(w))
}

fn expected_q_items(
    w: &Weighting,
    g: &PartialHamCycle,
    items: &[ScoreItem],
) -> Result<BigRational> {
    match g.to_ham_cycle() {
        Some(h) => Ok(BigRational::from_integer(BigInt::from(q_value(w, &h)))),
        None => scoring::direct_sum(g, items),
    }
}

/// [`ConditionalExpectation`] of `X(H) = w(H) - q(H) / 2n`.
pub struct LightCycleExpectation<'a> {
    w: &'a Weighting,
    items: Vec<ScoreItem>,
    /// Items still feasible for the partial cycle last scored.
    live: Vec<ScoreItem>,
    live_for: Vec<Edge>,
}

impl<'a> LightCycleExpectation<'a> {
    pub fn new(w: &'a Weighting) -> LightCycleExpectation<'a> {
        let items = unbalanced_items(w);
        LightCycleExpectation {
            w,
            live: items.clone(),
            items,
            live_for: Vec::new(),
        }
    }

    fn two_n(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(2 * self.w.n()))
    }

    fn value(&self, g: &PartialHamCycle, items: &[ScoreItem]) -> Result<BigRational> {
        Ok(expected_weight(self.w, g) - expected_q_items(self.w, g, items)? / self.two_n())
    }

    fn live_items(&mut self, g: &PartialHamCycle) -> &mut Vec<ScoreItem> {
        let grows = self.live_for.iter().all(|e| g.has_edge(e.u, e.v));
        if !grows {
            self.live = self.items.clone();
        }
        self.live_for = g.edges().to_vec();
        &mut self.live
    }
}

impl ConditionalExpectation for LightCycleExpectation<'_> {
    fn expectation(&mut self, g: &PartialHamCycle) -> Result<BigRational> {
        let items = std::mem::take(&mut self.items);
        let out = self.value(g, &items);
        self.items = items;
        out
    }

    fn score_extensions(&mut self, g: &PartialHamCycle, joins: &[Edge]) -> Result<Scores> {
        let p = g.path_count();
        let mut live = std::mem::take(self.live_items(g));
        if p < scoring::MIN_INCREMENTAL_PATHS {
            live.retain(|item| scoring::feasible(g, item));
            let mut out = Vec::with_capacity(joins.len());
            for &e in joins {
                out.push(self.value(&g.with_edge(e)?, &live)?);
            }
            self.live = live;
            return Ok(Scores::Exact(out));
        }
        let q_sums = scoring::extension_sums_pruning(g, &mut live, joins)?;
        self.live = live;
        let w_items = crate::hamcycle::weight_items(self.w, joins);
        let w_sums = scoring::extension_sums(g, &w_items, joins)?;

        let overflow = || Error::ArithmeticOverflow("light cycle scores");
        let n = self.w.n() as i128;
        let (p2, p3) = (p as i128 - 2, p as i128 - 3);
        let base = self.w.subgraph_weight(g.edges())?;
        let denominator = (16 * n).checked_mul(p2 * p3).ok_or_else(overflow)?;
        let mut numerators = Vec::with_capacity(joins.len());
        for (wa, qa) in w_sums.iter().zip(&q_sums) {
            let weight_part = base
                .checked_mul(8 * p2 * p3)
                .and_then(|x| x.checked_add(wa[0].checked_mul(p2 * p3)?))
                .and_then(|x| x.checked_add(wa[1].checked_mul(p3)?))
                .and_then(|x| x.checked_mul(2 * n))
                .ok_or_else(overflow)?;
            let q_part = qa[0]
                .checked_mul(p2 * p3)
                .and_then(|x| x.checked_add(qa[1].checked_mul(p3)?))
                .and_then(|x| x.checked_add(qa[2]))
                .ok_or_else(overflow)?;
            numerators.push(weight_part.checked_sub(q_part).ok_or_else(overflow)?);
        }
        Ok(Scores::Scaled {
            denominator,
            numerators,
        })
    }
}

/// A Hamilton cycle with `w(H) <= d n - k`, strictly below when the norm
/// exceeds `k n^3`. Requires `four_cycle_norm(w) >= k n^3`.
pub fn light_hamilton(w: &Weighting, k: u64) -> Result<HamCycle> {
    let n = w.n();
    let norm = four_cycle_norm(w);
    let threshold = k as i128 * (n as i128).pow(3);
    if norm < threshold {
        return Err(Error::PreconditionFailed(format!(
            "4-cycle norm {norm} is below k n^3 = {threshold}"
        )));
    }
    let start = PartialHamCycle::empty(n)?;
    let h = derandomize(&start, &mut LightCycleExpectation::new(w))?;
    let out = improve(w, &h)?;
    let slack = w.density().slack(out.weight(w), n, k);
    let ok = if norm > threshold {
        slack > 0
    } else {
        slack >= 0
    };
    if !ok {
        return Err(Error::InvariantViolation(format!(
            "light cycle of weight {} misses the bound (slack {slack})",
            out.weight(w)
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a - 1, b - 1)
    }

    fn cyc(v: [usize; 4]) -> FourCycle {
        FourCycle::new(v.map(|x| x - 1)).unwrap()
    }

    fn ham(v: &[usize]) -> HamCycle {
        HamCycle::new(v.len(), v.iter().map(|x| x - 1).collect()).unwrap()
    }

    fn two_edges() -> Weighting {
        let mut w = Weighting::zero(4).unwrap();
        w.set(e(1, 2), 1);
        w.set(e(3, 4), 1);
        w
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn canonical_four_cycles() {
        assert_eq!(cyc([3, 2, 1, 4]), cyc([1, 2, 3, 4]));
        assert_eq!(cyc([1, 4, 3, 2]), cyc([1, 2, 3, 4]));
        assert_eq!(cyc([1, 2, 3, 4]).to_string(), "1-2-3-4-1");
        let all = FourCycle::on_subset(0, 1, 2, 3);
        assert_eq!(all[1], cyc([1, 2, 4, 3]));
        assert_eq!(all[2], cyc([1, 3, 2, 4]));
        assert!(FourCycle::new([0, 1, 1, 2]).is_err());
    }

    #[test]
    fn balance_examples() {
        let c = cyc([1, 2, 3, 4]);
        assert_eq!(balance(&Weighting::from_fn(4, |_, _| 7).unwrap(), &c), 0);
        let mut w = Weighting::zero(4).unwrap();
        w.set(e(1, 2), 1);
        assert_eq!(balance(&w, &c), 1);
        w.set(e(1, 2), 5);
        w.set(e(3, 4), 2);
        w.set(e(2, 3), 3);
        w.set(e(1, 4), 4);
        assert_eq!(balance(&w, &c), 0);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(four_cycle_norm(&Weighting::zero(6).unwrap()), 0);
        let mut w = Weighting::zero(5).unwrap();
        w.set(e(1, 2), 1);
        assert_eq!(four_cycle_norm(&w), 6);
        let mut ledger = crate::instance::TransformLedger::zero(5);
        ledger.lambda[2] = 1;
        let shifted = Weighting::zero(5)
            .unwrap()
            .apply_transform(&ledger)
            .unwrap();
        assert_eq!(four_cycle_norm(&shifted), 0);
    }

    #[test]
    fn crossing_examples() {
        let h = ham(&[1, 2, 3, 4]);
        assert!(crossing(&h, e(1, 3), e(2, 4)).unwrap());
        assert!(crossing(&h, e(2, 4), e(1, 3)).unwrap());
        let h6 = ham(&[1, 2, 3, 4, 5, 6]);
        assert!(!crossing(&h6, e(1, 3), e(4, 6)).unwrap());
        assert_eq!(
            crossing(&h6, e(1, 3), e(3, 5)),
            Err(Error::SharedVertex { v: 2 })
        );
    }

    #[test]
    fn embedding_examples() {
        let w = two_edges();
        let zero = Weighting::zero(4).unwrap();
        let h = ham(&[1, 2, 3, 4]);
        assert_eq!(
            embedding_status(&zero, &h, &cyc([1, 2, 3, 4])),
            EmbedStatus::EmbeddedOnly
        );
        assert_eq!(
            embedding_status(&w, &h, &cyc([1, 2, 3, 4])),
            EmbedStatus::HeavilyEmbedded
        );
        assert_eq!(
            embedding_status(&w, &h, &cyc([1, 2, 4, 3])),
            EmbedStatus::HeavilyAndCorrectlyEmbedded
        );
        assert_eq!(
            embedding_status(&zero, &h, &cyc([1, 2, 4, 3])),
            EmbedStatus::CorrectlyEmbedded
        );
    }

    #[test]
    fn q_value_examples() {
        let w = two_edges();
        assert_eq!(q_value(&w, &ham(&[1, 2, 3, 4])), 2);
        assert_eq!(q_value(&w, &ham(&[1, 3, 2, 4])), 0);
        assert_eq!(
            q_value(
                &Weighting::from_fn(6, |_, _| 4).unwrap(),
                &ham(&[1, 2, 3, 4, 5, 6])
            ),
            0
        );
    }

    #[test]
    fn selection_examples() {
        let h = ham(&[1, 2, 3, 4, 5, 6]);
        let s = noncrossing_selection(&h, |_| 1);
        assert_eq!(s.class, 7);
        assert_eq!(s.edges, vec![e(1, 6), e(2, 5), e(3, 4)]);
        assert_eq!(s.total, 3);
        let zero = noncrossing_selection(&h, |_| 0);
        assert_eq!(zero.total, 0);
        for (i, &x) in s.edges.iter().enumerate() {
            for &y in &s.edges[i + 1..] {
                assert!(!crossing(&h, x, y).unwrap());
            }
        }
    }

    #[test]
    fn improve_example() {
        let w = two_edges();
        let h = ham(&[1, 2, 3, 4]);
        let better = improve(&w, &h).unwrap();
        assert_eq!(better, ham(&[1, 3, 2, 4]));
        assert_eq!(better.weight(&w), 0);
    }

    #[test]
    fn expected_q_examples() {
        let w = two_edges();
        let empty = PartialHamCycle::empty(4).unwrap();
        assert_eq!(expected_q(&w, &empty).unwrap(), rat(4, 3));
        let g = PartialHamCycle::from_edges(4, &[e(1, 3)]).unwrap();
        assert_eq!(expected_q(&w, &g).unwrap(), rat(1, 1));
        assert_eq!(
            expected_q(
                &Weighting::zero(6).unwrap(),
                &PartialHamCycle::empty(6).unwrap()
            )
            .unwrap(),
            rat(0, 1)
        );
    }

    #[test]
    fn light_cycle_scores_match_direct() {
        let w = Weighting::from_fn(9, |u, v| ((u * 7 + v * 13 + u * v) % 11) as i64 - 5).unwrap();
        let mut oracle = LightCycleExpectation::new(&w);
        let mut g = PartialHamCycle::from_edges(9, &[e(2, 3), e(6, 7), e(7, 8)]).unwrap();
        while !g.is_complete() {
            let joins = g.join_edges().unwrap();
            let scores = oracle.score_extensions(&g, &joins).unwrap();
            for (i, &j) in joins.iter().enumerate() {
                let direct = oracle.expectation(&g.with_edge(j).unwrap()).unwrap();
                assert_eq!(scores.value(i), direct, "{j} with {} paths", g.path_count());
            }
            g.add_edge(joins[scores.argmin()]).unwrap();
        }
    }

    #[test]
    fn light_hamilton_single_heavy_edge() {
        let n = 20;
        let mut w = Weighting::zero(n).unwrap();
        w.set(e(1, 2), -100);
        let norm = four_cycle_norm(&w);
        assert_eq!(norm, 2 * 153 * 100);
        let k = (norm / (n as i128).pow(3)) as u64;
        let h = light_hamilton(&w, k).unwrap();
        assert!(w.beats_average(&h, k).unwrap());
    }

    #[test]
    fn light_hamilton_rejects_small_norm() {
        let w = Weighting::zero(6).unwrap();
        assert!(matches!(
            light_hamilton(&w, 1),
            Err(Error::PreconditionFailed(_))
        ));
        let h = light_hamilton(&w, 0).unwrap();
        assert_eq!(h.weight(&w), 0);
    }
}
