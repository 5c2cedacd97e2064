//! Shared machinery for scoring all join edges of a partial Hamilton cycle at
//! once.
//!
//! An item is either a single edge `f` (weight terms) or a 4-cycle with a
//! marked matching (4-cycle terms). Relative to a partial Hamilton cycle `G`
//! an item contributes `payload * o * count(G ∪ item) / count(G)`, where `o`
//! is 1, or 1/2 when the two matching edges end up on different paths, or 0
//! when the item is infeasible or wrongly oriented.
//!
//! Scoring `G ∪ e` for every join edge `e` naively costs one pass over the
//! items per candidate. Instead each item is evaluated against `G ∪ e` only
//! for the few `e` that touch a path the item meets; for every other `e` the
//! effect of `e` is the same as attaching a fresh pendant vertex to each of
//! its endpoints, which is accumulated per vertex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hamcycle::{extension_count, PartialHamCycle};
use crate::instance::Edge;

/// Below this many paths the per-candidate evaluation is used.
pub(crate) const MIN_INCREMENTAL_PATHS: usize = 4;

const GHOST: usize = usize::MAX - 1;
const GHOST_PATH: usize = usize::MAX;
const MAX_SLOTS: usize = 8;
const MAX_EXTRA: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ItemKind {
    /// The edge `verts[0] verts[1]`.
    Edge,
    /// The 4-cycle `verts[0..4]` with matching `v0v1, v2v3`.
    Cycle,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct ScoreItem {
    pub verts: [usize; 4],
    pub kind: ItemKind,
    pub payload: i128,
}

impl ScoreItem {
    fn pairs(&self) -> ([[usize; 2]; 2], usize) {
        let [a, b, c, d] = self.verts;
        let count = match self.kind {
            ItemKind::Edge => 1,
            ItemKind::Cycle => 2,
        };
        ([[a, b], [c, d]], count)
    }

    fn distinct_verts(&self) -> &[usize] {
        match self.kind {
            ItemKind::Edge => &self.verts[..2],
            ItemKind::Cycle => &self.verts[..],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Eval {
    /// Item edges missing from the graph the item is evaluated against.
    pub k: usize,
    pub dr: i32,
    pub closed: bool,
    pub half: bool,
}

impl Eval {
    /// `8 * o * 2^dr`, always an integer since `dr >= -2`. A closed item has
    /// exactly one extension, so there `dr` does not apply.
    fn factor8(&self) -> i128 {
        let base: i128 = if self.half { 4 } else { 8 };
        if self.closed {
            base
        } else if self.dr >= 0 {
            base << self.dr
        } else {
            base >> (-self.dr)
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Slot {
    path: usize,
    parent: usize,
    /// Vertices on the base path.
    len: usize,
    /// Vertices on the chain, valid at the union-find root.
    size: usize,
    start: usize,
    end: usize,
}

/// A handful of edges added on top of `G`, tracked only on the paths they touch.
struct Overlay<'a> {
    g: &'a PartialHamCycle,
    slots: [Slot; MAX_SLOTS],
    nslots: usize,
    extra: [(usize, usize); MAX_EXTRA],
    nextra: usize,
    closing: Option<usize>,
    total: usize,
}

impl<'a> Overlay<'a> {
    fn new(g: &'a PartialHamCycle, ghost: bool) -> Overlay<'a> {
        Overlay {
            g,
            slots: [Slot::default(); MAX_SLOTS],
            nslots: 0,
            extra: [(0, 0); MAX_EXTRA],
            nextra: 0,
            closing: None,
            total: g.n() + ghost as usize,
        }
    }

    fn slot(&mut self, v: usize) -> usize {
        let path = if v == GHOST {
            GHOST_PATH
        } else {
            self.g.path_of(v)
        };
        if let Some(i) = self.slots[..self.nslots]
            .iter()
            .position(|s| s.path == path)
        {
            return i;
        }
        let (len, start, end) = if v == GHOST {
            (1, GHOST, GHOST)
        } else {
            let (s, e) = self.g.path_ends(v);
            (self.g.path_len(v), s, e)
        };
        let i = self.nslots;
        self.slots[i] = Slot {
            path,
            parent: i,
            len,
            size: len,
            start,
            end,
        };
        self.nslots += 1;
        i
    }

    fn find(&self, mut i: usize) -> usize {
        while self.slots[i].parent != i {
            i = self.slots[i].parent;
        }
        i
    }

    fn extra(&self) -> &[(usize, usize)] {
        &self.extra[..self.nextra]
    }

    fn degree(&self, v: usize) -> usize {
        let base = if v == GHOST { 0 } else { self.g.degree(v) };
        base + self
            .extra()
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    fn has(&self, a: usize, b: usize) -> bool {
        (a != GHOST && b != GHOST && self.g.has_edge(a, b))
            || self
                .extra()
                .iter()
                .any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    /// Adds `ab`; returns the change in the number of non-trivial paths, or
    /// `None` if the result is no longer a partial Hamilton cycle.
    fn add(&mut self, a: usize, b: usize) -> Option<i32> {
        if self.closing.is_some() || self.degree(a) >= 2 || self.degree(b) >= 2 {
            return None;
        }
        let sa = self.slot(a);
        let sb = self.slot(b);
        let ra = self.find(sa);
        let rb = self.find(sb);
        if ra == rb {
            if self.slots[ra].size != self.total {
                return None;
            }
            self.closing = Some(self.nextra);
            self.extra[self.nextra] = (a, b);
            self.nextra += 1;
            return Some(0);
        }
        let ta = self.slots[ra].size == 1;
        let tb = self.slots[rb].size == 1;
        let dr = match (ta, tb) {
            (true, true) => 1,
            (false, false) => -1,
            _ => 0,
        };
        self.slots[rb].parent = ra;
        self.slots[ra].size += self.slots[rb].size;
        self.extra[self.nextra] = (a, b);
        self.nextra += 1;
        Some(dr)
    }

    fn same_chain(&mut self, a: usize, b: usize) -> bool {
        let sa = self.slot(a);
        let sb = self.slot(b);
        self.find(sa) == self.find(sb)
    }

    /// Positions of `verts` (all on one chain) along a traversal of that
    /// chain, together with the chain length.
    fn positions(&mut self, verts: &[usize; 4]) -> ([usize; 4], usize) {
        let s0 = self.slot(verts[0]);
        let root = self.find(s0);
        let closing = self.closing;
        let mut open_extra = [(0, 0); MAX_EXTRA];
        let mut nopen = 0;
        for (i, &e) in self.extra().iter().enumerate() {
            if Some(i) != closing {
                open_extra[nopen] = e;
                nopen += 1;
            }
        }
        let open_extra = &open_extra[..nopen];
        let extra_deg = |x: usize| {
            open_extra
                .iter()
                .filter(|&&(a, b)| a == x || b == x)
                .count()
        };
        let mut start = None;
        'outer: for i in 0..self.nslots {
            if self.find(i) != root {
                continue;
            }
            let s = self.slots[i];
            for x in [s.start, s.end] {
                let free = if s.len == 1 {
                    extra_deg(x) < 2
                } else {
                    extra_deg(x) == 0
                };
                if free {
                    start = Some((i, x));
                    break 'outer;
                }
            }
        }
        let (mut slot, mut x) = start.expect("an open chain has an end");
        let mut used = [false; MAX_EXTRA];
        let mut out = [usize::MAX; 4];
        let mut offset = 0;
        loop {
            let s = self.slots[slot];
            let forward = s.len == 1 || x == s.start;
            for (k, &v) in verts.iter().enumerate() {
                let vs = if v == GHOST {
                    GHOST_PATH
                } else {
                    self.g.path_of(v)
                };
                if vs == s.path {
                    let p = if v == GHOST { 0 } else { self.g.position(v) };
                    out[k] = offset + if forward { p } else { s.len - 1 - p };
                }
            }
            offset += s.len;
            let exit = if s.len == 1 {
                x
            } else if forward {
                s.end
            } else {
                s.start
            };
            let next = open_extra
                .iter()
                .enumerate()
                .find(|&(i, &(a, b))| !used[i] && (a == exit || b == exit));
            match next {
                Some((i, &(a, b))) => {
                    used[i] = true;
                    x = if a == exit { b } else { a };
                    slot = self.slot(x);
                }
                None => break,
            }
        }
        (out, offset)
    }
}

/// Evaluates `item` against `G ∪ virt`. `virt` may use the pendant vertex
/// [`GHOST`].
fn evaluate(g: &PartialHamCycle, item: &ScoreItem, virt: Option<(usize, usize)>) -> Option<Eval> {
    let ghost = virt.is_some_and(|(a, b)| a == GHOST || b == GHOST);
    let mut ov = Overlay::new(g, ghost);
    if let Some((a, b)) = virt {
        ov.add(a, b)?;
    }
    let mut k = 0;
    let mut dr = 0;
    let (pairs, count) = item.pairs();
    for &[a, b] in &pairs[..count] {
        if ov.has(a, b) {
            continue;
        }
        dr += ov.add(a, b)?;
        k += 1;
    }
    let mut half = false;
    if item.kind == ItemKind::Cycle {
        let [v0, v1, v2, v3] = item.verts;
        if ov.same_chain(v0, v2) {
            let (pos, len) = ov.positions(&item.verts);
            let meet = |a: usize, b: usize| {
                let (pa, pb) = (pos[a], pos[b]);
                if pa + 1 == pb {
                    (pa, a)
                } else if pb + 1 == pa {
                    (pb, b)
                } else {
                    // The closing edge is traversed last, from the far end.
                    debug_assert!(pa.min(pb) == 0 && pa.max(pb) == len - 1);
                    (len - 1, if pa == len - 1 { a } else { b })
                }
            };
            let (m1, x) = meet(0, 1);
            let (m2, y) = meet(2, 3);
            let (first, second) = if m1 < m2 { (x, y) } else { (y, x) };
            let pair = (item.verts[first], item.verts[second]);
            let good = [(v1, v2), (v3, v0)]
                .iter()
                .any(|&(a, b)| pair == (a, b) || pair == (b, a));
            if !good {
                return None;
            }
        } else {
            half = true;
        }
    }
    Some(Eval {
        k,
        dr,
        closed: ov.closing.is_some(),
        half,
    })
}

/// `m (m-1) ... (m-k+1)`.
pub(crate) fn falling(m: usize, k: usize) -> i128 {
    (0..k).map(|i| m as i128 - i as i128).product()
}

fn add_to(slot: &mut i128, x: i128) -> Result<()> {
    *slot = slot
        .checked_add(x)
        .ok_or(Error::ArithmeticOverflow("extension scoring"))?;
    Ok(())
}

fn term(item: &ScoreItem, ev: &Eval) -> Result<i128> {
    item.payload
        .checked_mul(ev.factor8())
        .ok_or(Error::ArithmeticOverflow("extension scoring"))
}

/// Whether `item` can still appear in some extension of `g` (with the right
/// orientation).
pub(crate) fn feasible(g: &PartialHamCycle, item: &ScoreItem) -> bool {
    evaluate(g, item, None).is_some()
}

/// `Σ payload * o * count(G ∪ item) / count(G)` over `items`, for an
/// incomplete `g`.
pub(crate) fn direct_sum(g: &PartialHamCycle, items: &[ScoreItem]) -> Result<BigRational> {
    assert!(!g.is_complete());
    let p = g.path_count();
    let mut acc = [0i128; 3];
    let mut closed = 0i128;
    for item in items {
        if let Some(ev) = evaluate(g, item, None) {
            let t = term(item, &ev)?;
            if ev.closed {
                add_to(&mut closed, t)?;
            } else {
                add_to(&mut acc[ev.k], t)?;
            }
        }
    }
    let mut total = BigRational::zero();
    for (k, &a) in acc.iter().enumerate() {
        if a != 0 {
            let den = 8 * falling(p - 1, k);
            total += BigRational::new(BigInt::from(a), BigInt::from(den));
        }
    }
    if closed != 0 {
        let den = BigInt::from(8) * BigInt::from(extension_count(g));
        total += BigRational::new(BigInt::from(closed), den);
    }
    Ok(total)
}

/// For every join edge `e`, the per-bucket sums `acc[k]` of `8 * payload * o *
/// 2^dr` over items missing `k` edges from `G ∪ e`, so that the item sum for
/// `G ∪ e` is `Σ_k acc[k] / (8 (p-2)^(k))`. Requires at least
/// [`MIN_INCREMENTAL_PATHS`] paths. Infeasible items are removed from `items`.
pub(crate) fn extension_sums_pruning(
    g: &PartialHamCycle,
    items: &mut Vec<ScoreItem>,
    joins: &[Edge],
) -> Result<Vec<[i128; 3]>> {
    assert!(g.path_count() >= MIN_INCREMENTAL_PATHS);
    let n = g.n();
    let mut end_id = vec![usize::MAX; n];
    let mut m = 0;
    for (v, id) in end_id.iter_mut().enumerate() {
        if g.degree(v) < 2 {
            *id = m;
            m += 1;
        }
    }
    let mut join_id = vec![u32::MAX; m * m];
    for (j, e) in joins.iter().enumerate() {
        let (a, b) = (end_id[e.u], end_id[e.v]);
        join_id[a * m + b] = j as u32;
        join_id[b * m + a] = j as u32;
    }
    let mut total = [0i128; 3];
    let mut per_vertex = vec![[0i128; 3]; n];
    let mut special = vec![[0i128; 3]; joins.len()];

    let mut keep = Vec::with_capacity(items.len());
    for item in items.iter() {
        let Some(ev0) = evaluate(g, item, None) else {
            continue;
        };
        keep.push(*item);
        let k0 = ev0.k;
        let generic = term(item, &ev0)?;
        add_to(&mut total[k0], generic)?;

        let verts = item.distinct_verts();
        let mut delta = [0i128; 4];
        for (i, &x) in verts.iter().enumerate() {
            if g.degree(x) < 2 {
                let val = match evaluate(g, item, Some((x, GHOST))) {
                    Some(ev) => {
                        debug_assert_eq!(ev.k, k0);
                        term(item, &ev)?
                    }
                    None => 0,
                };
                delta[i] = val - generic;
                add_to(&mut per_vertex[x][k0], delta[i])?;
            }
        }
        let delta_of =
            |v: usize| -> i128 { verts.iter().position(|&x| x == v).map_or(0, |i| delta[i]) };

        let mut related = [usize::MAX; 4];
        let mut nrel = 0;
        for &x in verts {
            let pth = g.path_of(x);
            if !related[..nrel].contains(&pth) {
                related[nrel] = pth;
                nrel += 1;
            }
        }
        for i in 0..nrel {
            for j in i + 1..nrel {
                let pi = &g.paths()[related[i]];
                let pj = &g.paths()[related[j]];
                let ends_i = path_end_list(pi);
                let ends_j = path_end_list(pj);
                for &a in ends_i.iter().flatten() {
                    for &b in ends_j.iter().flatten() {
                        let jid = join_id[end_id[a] * m + end_id[b]];
                        debug_assert_ne!(jid, u32::MAX);
                        let slot = &mut special[jid as usize];
                        let estimate = generic + delta_of(a) + delta_of(b);
                        add_to(&mut slot[k0], -estimate)?;
                        if let Some(ev) = evaluate(g, item, Some((a, b))) {
                            add_to(&mut slot[ev.k], term(item, &ev)?)?;
                        }
                    }
                }
            }
        }
    }
    *items = keep;

    let mut out = Vec::with_capacity(joins.len());
    for (j, e) in joins.iter().enumerate() {
        let mut acc = total;
        for k in 0..3 {
            for part in [per_vertex[e.u][k], per_vertex[e.v][k], special[j][k]] {
                add_to(&mut acc[k], part)?;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// As [`extension_sums_pruning`] without touching the item list.
pub(crate) fn extension_sums(
    g: &PartialHamCycle,
    items: &[ScoreItem],
    joins: &[Edge],
) -> Result<Vec<[i128; 3]>> {
    let mut owned = items.to_vec();
    extension_sums_pruning(g, &mut owned, joins)
}

fn path_end_list(path: &[usize]) -> [Option<usize>; 2] {
    if path.len() == 1 {
        [Some(path[0]), None]
    } else {
        [Some(path[0]), Some(path[path.len() - 1])]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a - 1, b - 1)
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(5, 0), 1);
        assert_eq!(falling(5, 2), 20);
        assert_eq!(falling(1, 2), 0);
    }

    #[test]
    fn cycle_orientation_on_path() {
        // G is the Hamilton path 1-2-3-4-5, so H = 1-2-3-4-5-1.
        let g = PartialHamCycle::from_edges(5, &[e(1, 2), e(2, 3), e(3, 4), e(4, 5)]).unwrap();
        // Matching 12, 43 against 24, 31: H becomes 1-3-2-4-5-1.
        let good = ScoreItem {
            verts: [0, 1, 3, 2],
            kind: ItemKind::Cycle,
            payload: 1,
        };
        assert_eq!(
            evaluate(&g, &good, None),
            Some(Eval {
                k: 0,
                dr: 0,
                closed: false,
                half: false
            })
        );
        // Matching 12, 34 against 23, 41 would double the edge 23.
        let bad = ScoreItem {
            verts: [0, 1, 2, 3],
            kind: ItemKind::Cycle,
            payload: 1,
        };
        assert_eq!(evaluate(&g, &bad, None), None);
    }

    #[test]
    fn split_matching_counts_half() {
        let g = PartialHamCycle::from_edges(6, &[e(1, 2), e(4, 5)]).unwrap();
        let item = ScoreItem {
            verts: [0, 1, 4, 3],
            kind: ItemKind::Cycle,
            payload: 3,
        };
        let ev = evaluate(&g, &item, None).unwrap();
        assert!(ev.half);
        assert_eq!(ev.k, 0);
        assert_eq!(term(&item, &ev).unwrap(), 12);
    }

    #[test]
    fn closing_item_has_one_extension() {
        // Paths 3-1-2-4 and 5-6; adding 35 and 46 closes the cycle, which is
        // one of the two extensions, and trading them for 45, 36 keeps a Hamilton cycle.
        let g = PartialHamCycle::from_edges(6, &[e(1, 2), e(1, 3), e(2, 4), e(5, 6)]).unwrap();
        let item = ScoreItem {
            verts: [2, 4, 3, 5],
            kind: ItemKind::Cycle,
            payload: 1,
        };
        let ev = evaluate(&g, &item, None).unwrap();
        assert!(ev.closed);
        assert_eq!(
            direct_sum(&g, &[item]).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
    }
}
