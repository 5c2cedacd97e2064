//! The full decision procedure on a few small instances, with the route taken.

use tspba::{solve, ConstantsProfile, Edge, Weighting};

fn main() -> tspba::Result<()> {
    let profile = ConstantsProfile::test();
    let n = 14;

    // All cycles weigh the same: never below average for k >= 1.
    let flat = Weighting::from_fn(n, |u, v| (u + v) as i64)?;
    // One cheap edge pulls some cycles below the mean.
    let mut dip = Weighting::zero(n)?;
    dip.set(Edge::new(2, 9), -30);
    // Two heavy stars: any cycle must pay for them.
    let stars = Weighting::from_fn(n, |u, v| if u < 2 || v < 2 { 3 } else { 0 })?;

    for (name, w) in [("flat", &flat), ("dip", &dip), ("stars", &stars)] {
        for k in [1, 3] {
            let report = solve(w, k, &profile)?;
            println!("{name:6} k = {k}: {} via {}", report.verdict, report.route);
        }
    }

    // Past the exact-search cutoff the `paper` profile needs n > 5000 (k + 1)
    // and refuse smaller instances rather than guess.
    let mut big = Weighting::zero(30)?;
    big.set(Edge::new(2, 9), -30);
    let report = solve(&big, 1, &ConstantsProfile::paper())?;
    println!("paper profile, n = 30: {}", report.verdict);
    Ok(())
}
