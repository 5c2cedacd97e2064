//! Brute-force ground truth: exhaustive enumeration of Hamilton cycles and an
//! exact Held-Karp search.
//!
//! Nothing here reuses the combinatorics of the solver modules; only the
//! instance types are shared.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hamcycle::{HamCycle, PartialHamCycle};
use crate::instance::{Edge, Weighting};
use crate::kernel::{Verdict, XPartialHC};

/// Size limits for the exhaustive routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_n_enumerate: usize,
    pub max_n_dp: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_n_enumerate: 10,
            max_n_dp: 22,
        }
    }
}

impl EnumerationBudget {
    fn check_enumerate(&self, n: usize) -> Result<()> {
        if n > self.max_n_enumerate {
            return Err(Error::BudgetExceeded {
                n,
                max: self.max_n_enumerate,
            });
        }
        if n < 3 {
            return Err(Error::TooSmall { n });
        }
        Ok(())
    }

    fn check_dp(&self, n: usize) -> Result<()> {
        if n > self.max_n_dp {
            return Err(Error::BudgetExceeded {
                n,
                max: self.max_n_dp,
            });
        }
        Ok(())
    }
}

/// All `(n-1)!/2` Hamilton cycles of `K_n`, canonical and in lexicographic order.
pub fn enumerate_hamiltons(n: usize, budget: &EnumerationBudget) -> Result<Vec<HamCycle>> {
    budget.check_enumerate(n)?;
    let mut out = Vec::new();
    let mut order = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    fn rec(n: usize, order: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<HamCycle>) {
        if order.len() == n {
            if order[1] < order[n - 1] {
                out.push(HamCycle::new(n, order.clone()).expect("permutation"));
            }
            return;
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                order.push(v);
                rec(n, order, used, out);
                order.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut order, &mut used, &mut out);
    Ok(out)
}

fn cycle_edges(h: &HamCycle) -> Vec<Edge> {
    let o = h.order();
    let n = o.len();
    (0..n).map(|i| Edge::new(o[i], o[(i + 1) % n])).collect()
}

fn cycle_weight(w: &Weighting, h: &HamCycle) -> i128 {
    cycle_edges(h).iter().map(|&e| w.w(e) as i128).sum()
}

/// A minimum-weight Hamilton cycle, the lexicographically smallest canonical
/// one among ties.
pub fn exact_min_hamilton(w: &Weighting, budget: &EnumerationBudget) -> Result<(HamCycle, i128)> {
    let n = w.n();
    budget.check_dp(n)?;
    let limit = i64::MAX as u128 / 4;
    if (n as u128) * (w.max_abs() as u128) >= limit {
        return Err(Error::ArithmeticOverflow("held-karp table"));
    }
    // Vertex 0 is the fixed start; subsets range over vertices 1..n, bit v-1.
    let m = n - 1;
    let full = (1usize << m) - 1;
    const INF: i64 = i64::MAX;
    let mut dp = vec![INF; (1usize << m) * m];
    let idx = |set: usize, v: usize| set * m + (v - 1);
    for v in 1..n {
        dp[idx(1 << (v - 1), v)] = w.weight(0, v);
    }
    for set in 1..=full {
        for v in 1..n {
            let bit = 1 << (v - 1);
            if set & bit == 0 {
                continue;
            }
            let cur = dp[idx(set, v)];
            if cur == INF {
                continue;
            }
            for u in 1..n {
                let ub = 1 << (u - 1);
                if set & ub != 0 {
                    continue;
                }
                let cand = cur + w.weight(v, u);
                let slot = &mut dp[idx(set | ub, u)];
                if cand < *slot {
                    *slot = cand;
                }
            }
        }
    }
    let best = (1..n)
        .map(|v| dp[idx(full, v)] + w.weight(v, 0))
        .min()
        .expect("n >= 3");
    // Walk forward from 0, always taking the smallest vertex that still admits
    // an optimal completion; dp[R][v] doubles as the cost from v back to 0
    // through R.
    let mut order = vec![0usize];
    let mut remaining = full;
    let mut spent = 0i64;
    let mut last = 0usize;
    while remaining != 0 {
        let next = (1..n)
            .find(|&v| {
                let bit = 1 << (v - 1);
                remaining & bit != 0 && {
                    let tail = dp[idx(remaining, v)];
                    tail != INF && spent + w.weight(last, v) + tail == best
                }
            })
            .expect("an optimal continuation exists");
        spent += w.weight(last, next);
        remaining &= !(1 << (next - 1));
        order.push(next);
        last = next;
    }
    let cycle = HamCycle::new(n, order)?;
    Ok((cycle, best as i128))
}

/// The exact answer, from the minimum cycle.
pub fn verdict_oracle(w: &Weighting, k: u64, budget: &EnumerationBudget) -> Result<Verdict> {
    let (cycle, weight) = exact_min_hamilton(w, budget)?;
    if w.density().admits(weight, w.n(), k) {
        Ok(Verdict::Yes { cycle, weight })
    } else {
        Ok(Verdict::No { cycle, weight })
    }
}

/// The constant `alpha` with `w2(H) = w(H) + alpha` for every Hamilton cycle,
/// if there is one.
pub fn equivalence_check(
    w: &Weighting,
    w2: &Weighting,
    budget: &EnumerationBudget,
) -> Result<Option<i128>> {
    if w.n() != w2.n() {
        return Err(Error::SizeMismatch {
            left: w.n(),
            right: w2.n(),
        });
    }
    let mut alpha = None;
    for h in enumerate_hamiltons(w.n(), budget)? {
        let d = cycle_weight(w2, &h) - cycle_weight(w, &h);
        match alpha {
            None => alpha = Some(d),
            Some(a) if a != d => return Ok(None),
            _ => {}
        }
    }
    Ok(alpha)
}

/// Minimum over all Hamilton cycles of the weight left after deleting the
/// edges with both ends outside `x`.
pub fn brute_min_x_partial(
    w: &Weighting,
    x: &[usize],
    budget: &EnumerationBudget,
) -> Result<XPartialHC> {
    let n = w.n();
    let mut in_x = vec![false; n];
    for &v in x {
        if v >= n {
            return Err(Error::VertexOutOfRange { v, n });
        }
        in_x[v] = true;
    }
    let mut best: Option<(i128, Vec<Edge>)> = None;
    for h in enumerate_hamiltons(n, budget)? {
        let kept: Vec<Edge> = cycle_edges(&h)
            .into_iter()
            .filter(|e| in_x[e.u] || in_x[e.v])
            .collect();
        let weight: i128 = kept.iter().map(|&e| w.w(e) as i128).sum();
        if best.as_ref().is_none_or(|(b, _)| weight < *b) {
            best = Some((weight, kept));
        }
    }
    let (_, edges) = best.expect("at least one cycle");
    XPartialHC::from_edges(w, x, edges)
}

/// Hamilton cycles containing every edge of `g`.
pub fn extensions(g: &PartialHamCycle, budget: &EnumerationBudget) -> Result<Vec<HamCycle>> {
    let n = g.n();
    let all = enumerate_hamiltons(n, budget)?;
    Ok(all
        .into_iter()
        .filter(|h| {
            let pos = position_table(h);
            g.edges().iter().all(|&e| adjacent(&pos, e))
        })
        .collect())
}

fn position_table(h: &HamCycle) -> Vec<usize> {
    let mut pos = vec![0; h.n()];
    for (i, &v) in h.order().iter().enumerate() {
        pos[v] = i;
    }
    pos
}

fn adjacent(pos: &[usize], e: Edge) -> bool {
    let n = pos.len();
    let d = pos[e.u].abs_diff(pos[e.v]);
    d == 1 || d == n - 1
}

/// `P(e in H)` over the extensions of `g`, by counting.
pub fn edge_prob_by_enumeration(
    g: &PartialHamCycle,
    e: Edge,
    budget: &EnumerationBudget,
) -> Result<BigRational> {
    let ext = extensions(g, budget)?;
    let hits = ext
        .iter()
        .filter(|h| adjacent(&position_table(h), e))
        .count();
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(ext.len()),
    ))
}

/// The average of `f` over the extensions of `g`.
pub fn average_over_extensions(
    g: &PartialHamCycle,
    budget: &EnumerationBudget,
    mut f: impl FnMut(&HamCycle) -> i128,
) -> Result<BigRational> {
    let ext = extensions(g, budget)?;
    let total: i128 = ext.iter().map(&mut f).sum();
    Ok(BigRational::new(
        BigInt::from(total),
        BigInt::from(ext.len()),
    ))
}

/// `q(H)` by scanning every 4-cycle and testing whether swapping its matching
/// out of `h` leaves a Hamilton cycle.
pub fn q_by_symmetric_difference(w: &Weighting, h: &HamCycle) -> i128 {
    let n = w.n();
    let pos = position_table(h);
    let base = cycle_edges(h);
    let mut total = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for [p, q, r, s] in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
                        let m1 = [Edge::new(p, q), Edge::new(r, s)];
                        let m2 = [Edge::new(q, r), Edge::new(s, p)];
                        let w1 = w.w(m1[0]) as i128 + w.w(m1[1]) as i128;
                        let w2 = w.w(m2[0]) as i128 + w.w(m2[1]) as i128;
                        let (heavy, light) = if w1 > w2 { (m1, m2) } else { (m2, m1) };
                        if w1 == w2 || !heavy.iter().all(|&e| adjacent(&pos, e)) {
                            continue;
                        }
                        let mut edges: Vec<Edge> = base
                            .iter()
                            .copied()
                            .filter(|e| !heavy.contains(e))
                            .collect();
                        let mut ok = true;
                        for e in light {
                            if edges.contains(&e) {
                                ok = false;
                            }
                            edges.push(e);
                        }
                        if ok && is_hamilton_cycle(n, &edges) {
                            total += (w1 - w2).abs();
                        }
                    }
                }
            }
        }
    }
    total
}

fn is_hamilton_cycle(n: usize, edges: &[Edge]) -> bool {
    if edges.len() != n {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    if adj.iter().any(|a| a.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut steps) = (usize::MAX, 0, 0);
    loop {
        let next = if adj[cur][0] != prev {
            adj[cur][0]
        } else {
            adj[cur][1]
        };
        prev = cur;
        cur = next;
        steps += 1;
        if cur == 0 {
            break;
        }
    }
    steps == n
}
