//! Acceptance criteria, one line per criterion. Run with
//! `cargo test --test acceptance`; exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use tspba::oracle::q_by_symmetric_difference;
use tspba::*;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

const SEED: u64 = 0x7590_ba11;

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ tag)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_cycles(n: usize) -> Vec<HamCycle> {
    enumerate_hamiltons(n, &EnumerationBudget::default()).unwrap()
}

fn contains_all(h: &HamCycle, g: &PartialHamCycle) -> bool {
    g.edges().iter().all(|&e| cycle_has(h, e))
}

/// `C(n,2) w(H) <= n w(K_n) - k C(n,2)`, computed from scratch.
fn below_average(w: &Weighting, h: &HamCycle, k: u64) -> (i128, i128) {
    let n = w.n() as i128;
    let total: i128 = w.edges().map(|(_, x)| x as i128).sum();
    let cyc: i128 = h.edges().iter().map(|&e| w.w(e) as i128).sum();
    let m = n * (n - 1) / 2;
    (m * cyc, n * total - k as i128 * m)
}

fn c1_counting() -> Check {
    let mut r = rng(1);
    for n in 5..=8 {
        let cycles = all_cycles(n);
        for _ in 0..1000 {
            let g = random_partial(&mut r, n);
            let expect = cycles.iter().filter(|h| contains_all(h, &g)).count();
            let got = extension_count(&g);
            ensure(got == BigUint::from(expect), || {
                format!("n={n} edges {:?}: {got} vs {expect}", g.edges())
            })?;
        }
    }
    Ok("4000 partial cycles, n = 5..8".into())
}

fn c2_probability() -> Check {
    let mut r = rng(2);
    let mut checked = 0;
    for i in 0..200 {
        let n = 6 + i % 3;
        let cycles = all_cycles(n);
        let g = random_partial(&mut r, n);
        let ext: Vec<&HamCycle> = cycles.iter().filter(|h| contains_all(h, &g)).collect();
        for e in g.join_edges().unwrap() {
            let hits = ext.iter().filter(|h| cycle_has(h, e)).count();
            let expect = BigRational::new(BigInt::from(hits), BigInt::from(ext.len()));
            let got = edge_prob(&g, e).unwrap();
            ensure(got == expect, || format!("n={n} e={e}: {got} vs {expect}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} join edges over 200 partial cycles"))
}

fn c3_vizing() -> Check {
    let mut r = rng(3);
    let n = 60;
    for i in 0..100 {
        let w = random_weighting(&mut r, n, -100, 100);
        let h = min_avg_cycle(&w, &PartialHamCycle::empty(n).unwrap()).unwrap();
        let (lhs, rhs) = below_average(&w, &h, 0);
        ensure(lhs <= rhs, || format!("instance {i}: {lhs} > {rhs}"))?;
    }
    Ok("100 instances, n = 60".into())
}

fn c4_improve() -> Check {
    let mut r = rng(4);
    let n = 50;
    let mut gained = 0;
    for i in 0..100 {
        let w = random_weighting(&mut r, n, -50, 50);
        let h = random_cycle(&mut r, n);
        let q = q_by_symmetric_difference(&w, &h);
        let h2 = improve(&w, &h).unwrap();
        let (w1, w2) = (h.weight(&w), h2.weight(&w));
        let two_n = 2 * n as i128;
        ensure(w2 * two_n <= w1 * two_n - q, || {
            format!("instance {i}: w(H') = {w2}, w(H) = {w1}, q = {q}")
        })?;
        if w2 < w1 {
            gained += 1;
        }
    }
    Ok(format!("100 instances, n = 50, {gained} strictly improved"))
}

fn c5_expected_q() -> Check {
    let mut r = rng(5);
    let mut checked = 0;
    let check = |w: &Weighting, g: &PartialHamCycle, qs: &[(HamCycle, i128)]| {
        let (mut sum, mut count) = (0i128, 0i128);
        for (h, q) in qs {
            if contains_all(h, g) {
                sum += q;
                count += 1;
            }
        }
        let expect = BigRational::new(BigInt::from(sum), BigInt::from(count));
        let got = expected_q(w, g).unwrap();
        ensure(got == expect, || {
            format!("edges {:?}: {got} vs {expect}", g.edges())
        })
    };
    // Every linear forest of K_6, which covers every orientation pattern of a
    // 4-cycle against one or more paths.
    let cycles6 = all_cycles(6);
    for _ in 0..2 {
        let w = random_weighting(&mut r, 6, -5, 5);
        let qs: Vec<(HamCycle, i128)> = cycles6
            .iter()
            .map(|h| (h.clone(), q_by_symmetric_difference(&w, h)))
            .collect();
        for g in all_partials(&cycles6) {
            check(&w, &g, &qs)?;
            checked += 1;
        }
    }
    for n in 7..=8 {
        let cycles = all_cycles(n);
        let w = random_weighting(&mut r, n, -5, 5);
        let qs: Vec<(HamCycle, i128)> = cycles
            .iter()
            .map(|h| (h.clone(), q_by_symmetric_difference(&w, h)))
            .collect();
        for _ in 0..150 {
            check(&w, &random_partial(&mut r, n), &qs)?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} partial cycles, n = 6 exhaustive, n = 7, 8 sampled"
    ))
}

fn c6_light_cycle() -> Check {
    let mut r = rng(6);
    let n = 30usize;
    let mut strict = 0;
    for i in 0..50 {
        let w = random_weighting(&mut r, n, -10, 10);
        let norm = four_cycle_norm(&w);
        let k = (norm / (n as i128).pow(3)) as u64;
        let h = light_hamilton(&w, k).unwrap();
        let (lhs, rhs) = below_average(&w, &h, k);
        ensure(lhs <= rhs, || {
            format!("instance {i}: not below average (k = {k})")
        })?;
        if norm > k as i128 * (n as i128).pow(3) {
            ensure(lhs < rhs, || {
                format!("instance {i}: not strictly below (k = {k})")
            })?;
            strict += 1;
        }
    }
    Ok(format!(
        "50 instances, n = 30, {strict} with the strict contract"
    ))
}

fn restrict(w: &Weighting, s: &[usize]) -> Weighting {
    Weighting::from_fn(s.len(), |i, j| w.weight(s[i], s[j])).unwrap()
}

fn c7_dichotomy() -> Check {
    let mut r = rng(7);
    let n = 100;
    let p = ConstantsProfile::test();
    let budget = EnumerationBudget::default();
    let (mut certs, mut reduced) = (0, 0);
    for i in 0..50 {
        let (mut w, _, _) = zero_class(&mut r, n, 20);
        let count = r.gen_range(0..=5);
        let touched = perturb(&mut r, &mut w, count, 15);
        let k = r.gen_range(1..=2);
        match dichotomy(&w, k, &p).map_err(|e| format!("instance {i}: {e}"))? {
            DichotomyResult::Certificate { cycle, .. } => {
                let (lhs, rhs) = below_average(&w, &cycle, k);
                ensure(lhs < rhs, || format!("instance {i}: certificate not below"))?;
                certs += 1;
            }
            DichotomyResult::Reduced {
                weighting, ledger, ..
            } => {
                let s: Vec<usize> = {
                    let mut s = sample(&mut r, n, 10).into_vec();
                    s.sort_unstable();
                    s
                };
                let lambda_s: i128 = s.iter().map(|&v| ledger.lambda[v] as i128).sum();
                let expect = 2 * lambda_s + 10 * ledger.constant as i128;
                let got = equivalence_check(&restrict(&w, &s), &restrict(&weighting, &s), &budget)
                    .unwrap();
                ensure(got == Some(expect), || {
                    format!("instance {i}: replica offset {got:?}, ledger says {expect}")
                })?;
                let ends: Vec<usize> = touched.iter().flat_map(|e| [e.u, e.v]).collect();
                for (e, x) in weighting.edges() {
                    ensure(x == 0 || ends.contains(&e.u) || ends.contains(&e.v), || {
                        format!("instance {i}: support edge {e} outside the perturbed closure")
                    })?;
                }
                reduced += 1;
            }
        }
    }
    Ok(format!(
        "50 instances, n = 100: {certs} certificates, {reduced} reduced"
    ))
}

fn c8_zero_class() -> Check {
    let mut r = rng(8);
    let n = 100;
    let p = ConstantsProfile::test();
    let (w, _, _) = zero_class(&mut r, n, 50);
    ensure(four_cycle_norm(&w) == 0, || "norm4 is not 0".into())?;
    let (star, _) = compress(&w, 1, &p).map_err(|e| e.to_string())?;
    ensure(star.edges().all(|(_, x)| x == 0), || {
        "compress did not reach 0".into()
    })?;
    let no = solve(&w, 1, &p).map_err(|e| e.to_string())?;
    ensure(no.verdict.label() == "no", || {
        format!("k = 1 gave {}", no.verdict)
    })?;
    let yes = solve(&w, 0, &p).map_err(|e| e.to_string())?;
    ensure(yes.verdict.label() == "yes", || {
        format!("k = 0 gave {}", yes.verdict)
    })?;
    Ok("n = 100".into())
}

fn c9_end_to_end() -> Check {
    let mut r = rng(9);
    let p = ConstantsProfile::test();
    let budget = EnumerationBudget::default();
    let (mut yes, mut no, mut insufficient) = (0, 0, 0);
    let total = 300;
    for i in 0..total {
        let n = r.gen_range(8..=16);
        let k = r.gen_range(0..=4);
        let size = r.gen_range(1..=3);
        let w = match i % 3 {
            0 => random_weighting(&mut r, n, -size, size),
            1 => {
                let (mut w, _, _) = zero_class(&mut r, n, 3);
                let count = r.gen_range(0..=3);
                perturb(&mut r, &mut w, count, 3);
                w
            }
            _ => {
                let kind = Generator::SparseSupport {
                    count: r.gen_range(1..=n),
                    min: -size,
                    max: size,
                };
                generate(n, kind, r.gen()).unwrap()
            }
        };
        let report = solve(&w, k, &p).map_err(|e| format!("instance {i}: {e}"))?;
        let oracle = verdict_oracle(&w, k, &budget).unwrap();
        match &report.verdict {
            Verdict::ProfileInsufficient { .. } => insufficient += 1,
            v => {
                ensure(v.label() == oracle.label(), || {
                    format!("instance {i} (n={n}, k={k}): solve {v}, oracle {oracle}")
                })?;
                if let Verdict::Yes { cycle, .. } = v {
                    ensure(w.verify_certificate(k, cycle.order()).is_valid(), || {
                        format!("instance {i}: certificate rejected")
                    })?;
                    yes += 1;
                } else {
                    no += 1;
                }
            }
        }
    }
    let rate = insufficient as f64 / total as f64;
    ensure(rate < 0.5, || {
        format!("profile_insufficient rate {rate:.3}")
    })?;
    Ok(format!(
        "{yes} yes, {no} no, {insufficient} profile_insufficient (rate {rate:.3})"
    ))
}

fn c10_kernel() -> Check {
    let mut r = rng(10);
    let p = ConstantsProfile::test();
    let budget = EnumerationBudget::default();
    for i in 0..100 {
        let t = r.gen_range(1..=3);
        let n = r.gen_range((3 * t + 1).max(5)..=10);
        let w = random_weighting(&mut r, n, -6, 6);
        let x = sample(&mut r, n, t).into_vec();
        let fast = min_x_partial(&w, &x, &p).map_err(|e| format!("case {i}: {e}"))?;
        fast.validate(&w).map_err(|e| format!("case {i}: {e}"))?;
        let brute = brute_min_x_partial(&w, &x, &budget).unwrap();
        ensure(fast.weight == brute.weight, || {
            format!(
                "case {i} (n={n}, X={x:?}): {} vs {}",
                fast.weight, brute.weight
            )
        })?;
    }
    Ok("100 cases, n <= 10, |X| <= 3".into())
}

fn c11_dirac() -> Check {
    let mut r = rng(11);
    let m = 30;
    let min_degree = m / 2 + 6;
    for i in 0..100 {
        let mut ids = sample(&mut r, 3 * m, m).into_vec();
        ids.sort_unstable();
        let mut adj = vec![vec![true; m]; m];
        let mut degree = vec![m - 1; m];
        for _ in 0..m * m {
            let (a, b) = (r.gen_range(0..m), r.gen_range(0..m));
            if a != b && adj[a][b] && degree[a] > min_degree && degree[b] > min_degree {
                adj[a][b] = false;
                adj[b][a] = false;
                degree[a] -= 1;
                degree[b] -= 1;
            }
        }
        let mut forced = Vec::new();
        let mut used = vec![false; m];
        let r_count = r.gen_range(0..=4);
        while forced.len() < r_count {
            let (a, b) = (r.gen_range(0..m), r.gen_range(0..m));
            if a != b && adj[a][b] && !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                forced.push(Edge::new(ids[a], ids[b]));
            }
        }
        let mut allowed = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if adj[a][b] && !forced.contains(&Edge::new(ids[a], ids[b])) {
                    allowed.push(Edge::new(ids[a], ids[b]));
                }
            }
        }
        let order = dirac_extend(&ids, &allowed, &forced).map_err(|e| format!("graph {i}: {e}"))?;
        let mut seen = order.clone();
        seen.sort_unstable();
        ensure(seen == ids, || format!("graph {i}: not a permutation"))?;
        let steps: Vec<Edge> = (0..m)
            .map(|j| Edge::new(order[j], order[(j + 1) % m]))
            .collect();
        ensure(
            steps
                .iter()
                .all(|e| allowed.contains(e) || forced.contains(e)),
            || format!("graph {i}: uses a missing edge"),
        )?;
        ensure(forced.iter().all(|e| steps.contains(e)), || {
            format!("graph {i}: drops a forced edge")
        })?;
    }
    Ok(format!(
        "100 graphs, m = {m}, min degree {min_degree}, r <= 4"
    ))
}

fn c12_performance() -> Check {
    const NORM_LIMIT: Duration = Duration::from_secs(5);
    const REMOVAL_LIMIT: Duration = Duration::from_secs(30);
    let mut r = rng(12);
    let w = random_weighting(&mut r, 120, -100, 100);
    let t = Instant::now();
    let _ = four_cycle_norm(&w);
    let norm_time = t.elapsed();
    ensure(norm_time < NORM_LIMIT, || {
        format!("norm at n = 120 took {norm_time:?}")
    })?;

    let (mut w, _, _) = zero_class(&mut r, 60, 20);
    perturb(&mut r, &mut w, 5, 50);
    let t = Instant::now();
    let s = removal_set(&w, 5, &ConstantsProfile::test()).map_err(|e| e.to_string())?;
    let removal_time = t.elapsed();
    ensure(removal_time < REMOVAL_LIMIT, || {
        format!("removal_set at n = 60 took {removal_time:?}")
    })?;
    Ok(format!(
        "norm n = 120 in {:.2} s, removal_set n = 60 in {:.2} s ({} edges)",
        norm_time.as_secs_f64(),
        removal_time.as_secs_f64(),
        s.len()
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("counting", c1_counting),
        ("edge probability", c2_probability),
        ("averaging cycle", c3_vizing),
        ("local improvement", c4_improve),
        ("expected q", c5_expected_q),
        ("light cycle", c6_light_cycle),
        ("structural dichotomy", c7_dichotomy),
        ("zero class", c8_zero_class),
        ("end-to-end oracle agreement", c9_end_to_end),
        ("kernel partial cycle", c10_kernel),
        ("dirac completion", c11_dirac),
        ("performance floor", c12_performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({secs:.1} s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({secs:.1} s) {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
