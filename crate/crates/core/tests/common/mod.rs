#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use tspba::{Edge, HamCycle, PartialHamCycle, Weighting};

pub fn random_weighting(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Weighting {
    Weighting::from_fn(n, |_, _| rng.gen_range(lo..=hi)).unwrap()
}

/// `sum lambda_v I_v + c`: every Hamilton cycle has the same weight.
pub fn zero_class(rng: &mut impl Rng, n: usize, spread: i64) -> (Weighting, Vec<i64>, i64) {
    let lambda: Vec<i64> = (0..n).map(|_| rng.gen_range(-spread..=spread)).collect();
    let c = rng.gen_range(-spread..=spread);
    let w = Weighting::from_fn(n, |u, v| lambda[u] + lambda[v] + c).unwrap();
    (w, lambda, c)
}

/// Adds a random amount in `-size..=size` to `count` random edges.
pub fn perturb(rng: &mut impl Rng, w: &mut Weighting, count: usize, size: i64) -> Vec<Edge> {
    let n = w.n();
    let mut touched = Vec::new();
    for _ in 0..count {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        let e = Edge::new(a, b);
        w.set(e, w.w(e) + rng.gen_range(-size..=size));
        touched.push(e);
    }
    touched
}

pub fn random_cycle(rng: &mut impl Rng, n: usize) -> HamCycle {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    HamCycle::new(n, order).unwrap()
}

/// A random sub-forest of a random Hamilton cycle, never the whole cycle.
pub fn random_partial(rng: &mut impl Rng, n: usize) -> PartialHamCycle {
    let h = random_cycle(rng, n);
    let keep = rng.gen_range(0.0..1.0);
    let mut edges: Vec<Edge> = h
        .edges()
        .into_iter()
        .filter(|_| rng.gen_bool(keep))
        .collect();
    if edges.len() == n {
        edges.remove(rng.gen_range(0..n));
    }
    PartialHamCycle::from_edges(n, &edges).unwrap()
}

/// Every linear forest of `K_n` that is a proper subset of some Hamilton cycle.
pub fn all_partials(cycles: &[HamCycle]) -> Vec<PartialHamCycle> {
    let n = cycles[0].n();
    let mut seen = std::collections::BTreeSet::new();
    for h in cycles {
        let edges = h.edges();
        for mask in 0u32..(1 << n) - 1 {
            let mut sub: Vec<Edge> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| edges[i])
                .collect();
            sub.sort();
            seen.insert(sub);
        }
    }
    seen.into_iter()
        .map(|edges| PartialHamCycle::from_edges(n, &edges).unwrap())
        .collect()
}

/// Whether consecutive vertices of `h` include both ends of `e`.
pub fn cycle_has(h: &HamCycle, e: Edge) -> bool {
    let pos = h.positions();
    let d = pos[e.u].abs_diff(pos[e.v]);
    d == 1 || d == h.n() - 1
}
