//! Weighted complete graphs, exact threshold tests and equivalence-preserving
//! vertex shifts.
//!
//! Vertices are `0..n` inside the library; the text format and the CLI print
//! them 1-based. Weights are `i64`, every derived sum is `i128`. With
//! `n <= MAX_VERTICES` no sum, product or cross-multiplied threshold in this
//! crate can leave the `i128` range, so those paths use plain arithmetic.
//! Operations that produce new `i64` weights use checked arithmetic.

use std::fmt;

use crate::error::{Error, Result};
use crate::hamcycle::HamCycle;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 1 << 15;

/// An undirected edge stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Builds the canonical edge. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Edge {
        assert_ne!(a, b, "self-loop {a}-{b}");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn shares_vertex(&self, other: &Edge) -> Option<usize> {
        if other.contains(self.u) {
            Some(self.u)
        } else if other.contains(self.v) {
            Some(self.v)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u + 1, self.v + 1)
    }
}

#[inline]
fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Number of edges of `K_n`.
#[inline]
pub fn pairs(n: usize) -> usize {
    n * (n - 1) / 2
}

/// An integer weighting of the edges of `K_n`, one entry per unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weighting {
    n: usize,
    weights: Vec<i64>,
}

impl Weighting {
    /// The all-zero weighting.
    pub fn zero(n: usize) -> Result<Weighting> {
        check_size(n)?;
        Ok(Weighting {
            n,
            weights: vec![0; pairs(n)],
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Result<Weighting> {
        check_size(n)?;
        let mut weights = Vec::with_capacity(pairs(n));
        for u in 0..n {
            for v in u + 1..n {
                weights.push(f(u, v));
            }
        }
        Ok(Weighting { n, weights })
    }

    /// Weights in row-major upper-triangle order `w(0,1), w(0,2), ..., w(1,2), ...`.
    pub fn from_upper_triangle(n: usize, weights: Vec<i64>) -> Result<Weighting> {
        check_size(n)?;
        if weights.len() != pairs(n) {
            return Err(Error::Parse(format!(
                "expected {} weights for n = {n}, got {}",
                pairs(n),
                weights.len()
            )));
        }
        Ok(Weighting { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn upper_triangle(&self) -> &[i64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, a: usize, b: usize) -> i64 {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.weights[pair_index(self.n, u, v)]
    }

    #[inline]
    pub fn w(&self, e: Edge) -> i64 {
        self.weights[pair_index(self.n, e.u, e.v)]
    }

    pub fn set(&mut self, e: Edge, value: i64) {
        let i = pair_index(self.n, e.u, e.v);
        self.weights[i] = value;
    }

    /// Iterates `(edge, weight)` in lexicographic edge order.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, i64)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |u| (u + 1..n).map(move |v| Edge { u, v }))
            .zip(self.weights.iter().copied())
    }

    /// `w(K_n)`.
    pub fn total_weight(&self) -> i128 {
        self.weights.iter().map(|&x| x as i128).sum()
    }

    /// `max |w(e)|`.
    pub fn max_abs(&self) -> u64 {
        self.weights
            .iter()
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    fn check_edge(&self, e: Edge) -> Result<()> {
        if e.v >= self.n {
            Err(Error::UnknownEdge { u: e.u, v: e.v })
        } else {
            Ok(())
        }
    }

    /// `w(G)` for the edge set `G`.
    pub fn subgraph_weight(&self, edges: &[Edge]) -> Result<i128> {
        let mut sum = 0i128;
        for &e in edges {
            self.check_edge(e)?;
            sum += self.w(e) as i128;
        }
        Ok(sum)
    }

    /// `w[G]`, the sum of absolute weights.
    pub fn abs_weight(&self, edges: &[Edge]) -> Result<i128> {
        let mut sum = 0i128;
        for &e in edges {
            self.check_edge(e)?;
            sum += self.w(e).unsigned_abs() as i128;
        }
        Ok(sum)
    }

    /// `w[K_n]`.
    pub fn total_abs_weight(&self) -> i128 {
        self.weights.iter().map(|x| x.unsigned_abs() as i128).sum()
    }

    pub fn density(&self) -> DensityRatio {
        DensityRatio {
            numerator: self.total_weight(),
            denominator: pairs(self.n) as i128,
        }
    }

    /// Whether `w(H) <= d*n - k`, decided by cross-multiplying with `C(n,2)`.
    pub fn beats_average(&self, cycle: &HamCycle, k: u64) -> Result<bool> {
        if cycle.n() != self.n {
            return Err(Error::NotHamiltonian(format!(
                "cycle on {} vertices for an instance with {}",
                cycle.n(),
                self.n
            )));
        }
        Ok(self.density().admits(cycle.weight(self), self.n, k))
    }

    /// `w'(uv) = w(uv) + lambda_u + lambda_v + c`.
    pub fn apply_transform(&self, ledger: &TransformLedger) -> Result<Weighting> {
        if ledger.lambda.len() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: ledger.lambda.len(),
            });
        }
        let mut out = Vec::with_capacity(self.weights.len());
        for (e, w) in self.edges() {
            let shifted = (w as i128)
                + ledger.lambda[e.u] as i128
                + ledger.lambda[e.v] as i128
                + ledger.constant as i128;
            out.push(
                i64::try_from(shifted).map_err(|_| Error::ArithmeticOverflow("apply_transform"))?,
            );
        }
        Ok(Weighting {
            n: self.n,
            weights: out,
        })
    }

    /// Partitions the edges of `K_n` by the sign of their weight.
    pub fn support_split(&self) -> SupportSplit {
        let mut split = SupportSplit::default();
        for (e, w) in self.edges() {
            match w.signum() {
                1 => split.positive.push(e),
                -1 => split.negative.push(e),
                _ => split.zero.push(e),
            }
        }
        split
    }

    /// Checks a proposed certificate: a Hamilton cycle (any rotation or
    /// direction) whose weight is at most `d*n - k`.
    pub fn verify_certificate(&self, k: u64, order: &[usize]) -> CertificateCheck {
        let cycle = match HamCycle::new(self.n, order.to_vec()) {
            Ok(c) => c,
            Err(Error::NotHamiltonian(reason)) => return CertificateCheck::NotHamiltonian(reason),
            Err(other) => return CertificateCheck::NotHamiltonian(other.to_string()),
        };
        let weight = cycle.weight(self);
        if self.density().admits(weight, self.n, k) {
            CertificateCheck::Valid { weight }
        } else {
            CertificateCheck::ThresholdMissed { weight }
        }
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::TooSmall { n })
    } else if n > MAX_VERTICES {
        Err(Error::TooLarge {
            n,
            max: MAX_VERTICES,
        })
    } else {
        Ok(())
    }
}

/// Builds a weighting from `(u, v, weight)` triples, 0-based, one per unordered pair.
pub fn validate(n: usize, entries: &[(usize, usize, i64)]) -> Result<Weighting> {
    check_size(n)?;
    let mut slots: Vec<Option<i64>> = vec![None; pairs(n)];
    for &(a, b, w) in entries {
        if a == b {
            return Err(Error::SelfLoop { v: a });
        }
        for x in [a, b] {
            if x >= n {
                return Err(Error::VertexOutOfRange { v: x, n });
            }
        }
        let e = Edge::new(a, b);
        let slot = &mut slots[pair_index(n, e.u, e.v)];
        if slot.is_some() {
            return Err(Error::DuplicateEdge { u: e.u, v: e.v });
        }
        *slot = Some(w);
    }
    let mut weights = Vec::with_capacity(slots.len());
    let mut it = slots.into_iter();
    for u in 0..n {
        for v in u + 1..n {
            match it.next().flatten() {
                Some(w) => weights.push(w),
                None => return Err(Error::MissingEdge { u, v }),
            }
        }
    }
    Ok(Weighting { n, weights })
}

/// Edges grouped by weight sign.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SupportSplit {
    pub positive: Vec<Edge>,
    pub negative: Vec<Edge>,
    pub zero: Vec<Edge>,
}

/// Outcome of [`Weighting::verify_certificate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateCheck {
    Valid { weight: i128 },
    NotHamiltonian(String),
    ThresholdMissed { weight: i128 },
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CertificateCheck::Valid { .. })
    }
}

/// The average edge weight `w(K_n) / C(n,2)`, kept as an unreduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityRatio {
    pub numerator: i128,
    pub denominator: i128,
}

impl DensityRatio {
    /// Whether a cycle of weight `weight` satisfies `weight <= d*n - k`.
    pub fn admits(&self, weight: i128, n: usize, k: u64) -> bool {
        self.slack(weight, n, k) >= 0
    }

    /// `(d*n - k - weight) * C(n,2)`, an exact integer.
    pub fn slack(&self, weight: i128, n: usize, k: u64) -> i128 {
        n as i128 * self.numerator - (k as i128 + weight) * self.denominator
    }
}

impl fmt::Display for DensityRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Per-vertex shifts `lambda_v` plus a constant `c` added to every edge.
///
/// Applying it adds `alpha = 2 * sum(lambda) + c * n` to every Hamilton cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransformLedger {
    pub lambda: Vec<i64>,
    pub constant: i64,
}

impl TransformLedger {
    pub fn zero(n: usize) -> TransformLedger {
        TransformLedger {
            lambda: vec![0; n],
            constant: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn alpha(&self) -> i128 {
        2 * self.lambda.iter().map(|&x| x as i128).sum::<i128>()
            + self.constant as i128 * self.lambda.len() as i128
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.lambda.iter().all(|&x| x == 0)
    }

    pub fn shift_vertex(&mut self, v: usize, amount: i64) -> Result<()> {
        self.lambda[v] = self.lambda[v]
            .checked_add(amount)
            .ok_or(Error::ArithmeticOverflow("ledger shift"))?;
        Ok(())
    }

    pub fn shift_all(&mut self, amount: i64) -> Result<()> {
        self.constant = self
            .constant
            .checked_add(amount)
            .ok_or(Error::ArithmeticOverflow("ledger constant"))?;
        Ok(())
    }

    /// Componentwise sum: applying the result equals applying `self` then `other`.
    pub fn compose(&self, other: &TransformLedger) -> Result<TransformLedger> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let lambda = self
            .lambda
            .iter()
            .zip(&other.lambda)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::ArithmeticOverflow("ledger compose"))?;
        let constant = self
            .constant
            .checked_add(other.constant)
            .ok_or(Error::ArithmeticOverflow("ledger compose"))?;
        Ok(TransformLedger { lambda, constant })
    }
}
