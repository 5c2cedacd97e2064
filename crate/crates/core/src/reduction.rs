//! Structural reduction of instances with small 4-cycle norm.
//!
//! If the norm is at most `k n^3`, deleting the edges of a few unbalanced
//! 4-cycles leaves a graph where every 4-cycle is balanced. On such a graph
//! the weighting is a sum of vertex shifts plus a constant, which can be
//! subtracted off without changing which Hamilton cycles are light. What is
//! left has small support and small absolute weight.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fourcycle::{four_cycle_norm, light_hamilton};
use crate::hamcycle::HamCycle;
use crate::instance::{pairs, CertificateCheck, Edge, TransformLedger, Weighting};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Paper,
    Test,
    Custom,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileKind::Paper => "paper",
            ProfileKind::Test => "test",
            ProfileKind::Custom => "custom",
        })
    }
}

/// Every numeric constant of the pipeline. Only the `paper` values carry the
/// theoretical guarantees; under any other profile each guarantee is checked
/// at runtime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantsProfile {
    pub kind: ProfileKind,
    /// The pipeline needs `n > dichotomy_n_factor * (k + 1)`.
    pub dichotomy_n_factor: u64,
    /// Bound `w*[K_n] <= abs_norm_factor * k * n` after compression.
    pub abs_norm_factor: u64,
    /// At most `removal_iter_factor * k * n` 4-cycles are removed.
    pub removal_iter_factor: u64,
    /// `|S| <= removal_edge_factor * k * n`.
    pub removal_edge_factor: u64,
    /// Sparsified support has at most `sparsify_support_factor * k * (n + 1)` edges.
    pub sparsify_support_factor: u64,
    /// `(numerator, denominator)`: a vertex is heavy if its support degree is
    /// at least this fraction of `n`.
    pub high_degree_fraction: (u64, u64),
    /// The averaging branch fires when the negative matching exceeds
    /// `matching_threshold * k` edges.
    pub matching_threshold: u64,
    /// `|X| <= x_bound_factor * k`.
    pub x_bound_factor: u64,
    /// Zero-support minimum degree must reach `|X̄|/2 + kernel_degree_slack * t`.
    pub kernel_degree_slack: u64,
    /// Candidate lists keep `candidate_multiplier * t + 1` vertices.
    pub candidate_multiplier: u64,
    /// Instances with at most this many vertices are solved exactly.
    pub brute_force_max_n: u64,
    /// Largest vertex count handed to subset dynamic programming.
    pub dp_cap: u64,
}

impl ConstantsProfile {
    pub fn paper() -> ConstantsProfile {
        ConstantsProfile {
            kind: ProfileKind::Paper,
            dichotomy_n_factor: 5000,
            abs_norm_factor: 4000,
            removal_iter_factor: 4,
            removal_edge_factor: 16,
            sparsify_support_factor: 32,
            high_degree_fraction: (1, 4),
            matching_threshold: 100_000,
            x_bound_factor: 300_000,
            kernel_degree_slack: 4,
            candidate_multiplier: 2,
            brute_force_max_n: 22,
            dp_cap: 22,
        }
    }

    /// Scaled-down constants so that every stage runs on small instances.
    pub fn test() -> ConstantsProfile {
        ConstantsProfile {
            kind: ProfileKind::Test,
            dichotomy_n_factor: 1,
            abs_norm_factor: 4000,
            removal_iter_factor: 4,
            removal_edge_factor: 16,
            sparsify_support_factor: 32,
            high_degree_fraction: (1, 4),
            matching_threshold: 1,
            x_bound_factor: 300_000,
            kernel_degree_slack: 1,
            candidate_multiplier: 2,
            brute_force_max_n: 7,
            dp_cap: 20,
        }
    }

    pub fn by_name(name: &str) -> Result<ConstantsProfile> {
        match name {
            "paper" => Ok(ConstantsProfile::paper()),
            "test" => Ok(ConstantsProfile::test()),
            other => Err(Error::Parse(format!(
                "unknown profile `{other}` (expected paper or test)"
            ))),
        }
    }

    pub fn is_paper(&self) -> bool {
        self.kind == ProfileKind::Paper
    }

    /// Overrides one constant by name; the profile becomes `custom`.
    pub fn set(&mut self, name: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Parse(format!("constant {name}: {what} `{value}`"));
        if name == "high_degree_fraction" {
            let (a, b) = value
                .split_once('/')
                .ok_or_else(|| bad("expected a/b, got"))?;
            let a = u64::from_str(a.trim()).map_err(|_| bad("not a fraction"))?;
            let b = u64::from_str(b.trim()).map_err(|_| bad("not a fraction"))?;
            if a == 0 || b == 0 {
                return Err(bad("must be positive, got"));
            }
            self.high_degree_fraction = (a, b);
        } else {
            let v = u64::from_str(value.trim()).map_err(|_| bad("not a positive integer"))?;
            if v == 0 {
                return Err(bad("must be positive, got"));
            }
            let slot = match name {
                "dichotomy_n_factor" => &mut self.dichotomy_n_factor,
                "abs_norm_factor" => &mut self.abs_norm_factor,
                "removal_iter_factor" => &mut self.removal_iter_factor,
                "removal_edge_factor" => &mut self.removal_edge_factor,
                "sparsify_support_factor" => &mut self.sparsify_support_factor,
                "matching_threshold" => &mut self.matching_threshold,
                "x_bound_factor" => &mut self.x_bound_factor,
                "kernel_degree_slack" => &mut self.kernel_degree_slack,
                "candidate_multiplier" => &mut self.candidate_multiplier,
                "brute_force_max_n" => &mut self.brute_force_max_n,
                "dp_cap" => &mut self.dp_cap,
                _ => return Err(Error::Parse(format!("unknown constant `{name}`"))),
            };
            *slot = v;
        }
        self.kind = ProfileKind::Custom;
        Ok(())
    }

    /// Whether the paper-profile size condition `n > factor * (k + 1)` holds.
    pub fn large_enough(&self, n: usize, k: u64) -> bool {
        n as u128 > self.dichotomy_n_factor as u128 * (k as u128 + 1)
    }
}

impl Default for ConstantsProfile {
    fn default() -> Self {
        ConstantsProfile::paper()
    }
}

fn present(removed: &[bool], n: usize, a: usize, b: usize) -> bool {
    !removed[edge_index(n, a.min(b), a.max(b))]
}

fn edge_index(n: usize, u: usize, v: usize) -> usize {
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Edges whose removal leaves only balanced 4-cycles.
///
/// 4-cycles are scanned in lexicographic order of vertex subset, then of the
/// three pairings; every unbalanced cycle with all four edges still present
/// loses those edges. Removal never changes a balance, so one pass suffices.
pub fn removal_set(w: &Weighting, k: u64, profile: &ConstantsProfile) -> Result<Vec<Edge>> {
    let n = w.n();
    let cap = profile.removal_iter_factor as u128 * k as u128 * n as u128;
    let mut removed = vec![false; pairs(n)];
    let mut out = Vec::new();
    let mut iterations: u128 = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for [p, q, r, s] in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
                        let cyc = [(p, q), (q, r), (r, s), (s, p)];
                        if !cyc.iter().all(|&(x, y)| present(&removed, n, x, y)) {
                            continue;
                        }
                        let m1 = w.weight(p, q) as i128 + w.weight(r, s) as i128;
                        let m2 = w.weight(q, r) as i128 + w.weight(s, p) as i128;
                        if m1 == m2 {
                            continue;
                        }
                        iterations += 1;
                        if iterations > cap {
                            return Err(Error::IterationCapExceeded { cap });
                        }
                        for (x, y) in cyc {
                            removed[edge_index(n, x.min(y), x.max(y))] = true;
                            out.push(Edge::new(x, y));
                        }
                    }
                }
            }
        }
    }
    out.sort_unstable();
    if profile.is_paper()
        && four_cycle_norm(w) <= k as i128 * (n as i128).pow(3)
        && n as u128 > 50 * k as u128
        && out.len() as u128 > profile.removal_edge_factor as u128 * k as u128 * n as u128
    {
        return Err(Error::InvariantViolation(format!(
            "removal set has {} edges, above the {}kn bound",
            out.len(),
            profile.removal_edge_factor
        )));
    }
    Ok(out)
}

/// The vertex set of a component with the most edges, ties to the component
/// with the smallest vertex.
pub fn largest_component(vertices: &[usize], edges: &[Edge]) -> Vec<usize> {
    let mut adj: HashMap<usize, Vec<usize>> = vertices.iter().map(|&v| (v, Vec::new())).collect();
    for e in edges {
        if adj.contains_key(&e.u) && adj.contains_key(&e.v) {
            adj.get_mut(&e.u).expect("present").push(e.v);
            adj.get_mut(&e.v).expect("present").push(e.u);
        }
    }
    let mut order: Vec<usize> = vertices.to_vec();
    order.sort_unstable();
    order.dedup();
    let mut seen: HashMap<usize, bool> = HashMap::new();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for &s in &order {
        if seen.contains_key(&s) {
            continue;
        }
        let mut comp = vec![s];
        let mut degree_sum = 0;
        seen.insert(s, true);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            degree_sum += adj[&v].len();
            for &u in &adj[&v] {
                if seen.insert(u, true).is_none() {
                    comp.push(u);
                    queue.push_back(u);
                }
            }
        }
        let edge_count = degree_sum / 2;
        if best.as_ref().is_none_or(|(c, _)| edge_count > *c) {
            comp.sort_unstable();
            best = Some((edge_count, comp));
        }
    }
    best.map(|(_, c)| c).unwrap_or_default()
}

/// Shifts `w` so that all but a few edges get weight 0, given a set `s` whose
/// removal leaves every 4-cycle balanced.
pub fn sparsify(
    w: &Weighting,
    s: &[Edge],
    k: u64,
    profile: &ConstantsProfile,
) -> Result<(Weighting, TransformLedger)> {
    let n = w.n();
    let mut removed = vec![false; pairs(n)];
    for e in s {
        removed[edge_index(n, e.u, e.v)] = true;
    }
    let degree = |v: usize| {
        (0..n)
            .filter(|&u| u != v && present(&removed, n, u, v))
            .count()
    };
    let v0 = (0..n)
        .max_by_key(|&v| (degree(v), std::cmp::Reverse(v)))
        .expect("n >= 3");

    let mut ledger = TransformLedger::zero(n);
    for u in 0..n {
        if u != v0 && present(&removed, n, u, v0) {
            ledger.shift_vertex(u, -w.weight(u, v0))?;
        }
    }
    let shifted = w.apply_transform(&ledger)?;

    let rest: Vec<usize> = (0..n).filter(|&v| v != v0).collect();
    let rest_edges: Vec<Edge> = shifted
        .edges()
        .map(|(e, _)| e)
        .filter(|e| !e.contains(v0) && !removed[edge_index(n, e.u, e.v)])
        .collect();
    let comp = largest_component(&rest, &rest_edges);
    let mut in_comp = vec![false; n];
    for &v in &comp {
        in_comp[v] = true;
    }
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for e in &rest_edges {
        if in_comp[e.u] && in_comp[e.v] {
            *counts.entry(shifted.w(*e)).or_default() += 1;
        }
    }
    let alpha = counts
        .into_iter()
        .max_by_key(|&(value, count)| (count, std::cmp::Reverse(value)))
        .map_or(0, |(value, _)| value);
    ledger.shift_all(-alpha)?;
    ledger.shift_vertex(v0, alpha)?;
    let out = w.apply_transform(&ledger)?;

    if profile.is_paper() && n as u128 > 65 * k as u128 + 3 {
        let support = out.edges().filter(|&(_, x)| x != 0).count() as u128;
        let bound = profile.sparsify_support_factor as u128 * k as u128 * (n as u128 + 1);
        if support > bound {
            return Err(Error::InvariantViolation(format!(
                "sparsified support {support} exceeds {bound}"
            )));
        }
    }
    Ok((out, ledger))
}

/// Reduces `w` to an equivalent weighting of small absolute weight. Requires
/// `four_cycle_norm(w) <= k n^3` for the guarantees to apply.
pub fn compress(
    w: &Weighting,
    k: u64,
    profile: &ConstantsProfile,
) -> Result<(Weighting, TransformLedger)> {
    let n = w.n();
    let s = removal_set(w, k, profile)?;
    let (sparse, mut ledger) = sparsify(w, &s, k, profile)?;
    let (num, den) = profile.high_degree_fraction;
    let mut support_degree = vec![0u64; n];
    for (e, x) in sparse.edges() {
        if x != 0 {
            support_degree[e.u] += 1;
            support_degree[e.v] += 1;
        }
    }
    let heavy: Vec<bool> = (0..n)
        .map(|v| support_degree[v] as u128 * den as u128 >= num as u128 * n as u128)
        .collect();
    let light: Vec<usize> = (0..n).filter(|&v| !heavy[v]).collect();
    if !light.is_empty() {
        for x in (0..n).filter(|&v| heavy[v]) {
            let sum: i128 = light.iter().map(|&v| sparse.weight(x, v) as i128).sum();
            let floor = sum.div_euclid(light.len() as i128);
            let floor = i64::try_from(floor).map_err(|_| Error::ArithmeticOverflow("compress"))?;
            ledger.shift_vertex(x, -floor)?;
        }
    }
    let out = w.apply_transform(&ledger)?;
    if profile.is_paper() && profile.large_enough(n, k) {
        let bound = profile.abs_norm_factor as i128 * k as i128 * n as i128;
        if out.total_abs_weight() > bound {
            return Err(Error::InvariantViolation(format!(
                "compressed absolute weight {} exceeds {bound}",
                out.total_abs_weight()
            )));
        }
    }
    Ok((out, ledger))
}

/// Outcome of the structural dichotomy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DichotomyResult {
    /// A cycle strictly below `d n - k`.
    Certificate { cycle: HamCycle, norm4: i128 },
    /// An equivalent weighting: `w*(H) = w(H) + ledger.alpha()` for every `H`.
    Reduced {
        weighting: Weighting,
        ledger: TransformLedger,
        abs_norm: i128,
        norm4: i128,
    },
}

/// Either a light cycle (large 4-cycle norm) or a compressed equivalent
/// instance (small norm).
pub fn dichotomy(w: &Weighting, k: u64, profile: &ConstantsProfile) -> Result<DichotomyResult> {
    let n = w.n();
    if profile.is_paper() && !profile.large_enough(n, k) {
        return Err(Error::PreconditionFailed(format!(
            "n = {n} is not above {} (k + 1)",
            profile.dichotomy_n_factor
        )));
    }
    let norm4 = four_cycle_norm(w);
    if norm4 > k as i128 * (n as i128).pow(3) {
        let cycle = light_hamilton(w, k)?;
        let slack = w.density().slack(cycle.weight(w), n, k);
        match w.verify_certificate(k, cycle.order()) {
            CertificateCheck::Valid { .. } if slack > 0 => {}
            other => {
                return Err(Error::InvariantViolation(format!(
                    "light cycle failed verification: {other:?} (slack {slack})"
                )))
            }
        }
        return Ok(DichotomyResult::Certificate { cycle, norm4 });
    }
    let (weighting, ledger) = compress(w, k, profile)?;
    let abs_norm = weighting.total_abs_weight();
    Ok(DichotomyResult::Reduced {
        weighting,
        ledger,
        abs_norm,
        norm4,
    })
}
