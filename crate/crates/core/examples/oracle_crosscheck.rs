//! Cross-checks the solver against exact search on random small instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tspba::{solve, verdict_oracle, ConstantsProfile, EnumerationBudget, Verdict, Weighting};

fn main() -> tspba::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let profile = ConstantsProfile::test();
    let budget = EnumerationBudget::default();
    let (mut agree, mut skipped) = (0, 0);
    for _ in 0..60 {
        let n = rng.gen_range(8..=13);
        let k = rng.gen_range(0..=3);
        let w = Weighting::from_fn(n, |_, _| rng.gen_range(-2..=2))?;
        let ours = solve(&w, k, &profile)?.verdict;
        let exact = verdict_oracle(&w, k, &budget)?;
        match ours {
            Verdict::ProfileInsufficient { .. } => skipped += 1,
            v if v.label() == exact.label() => agree += 1,
            v => panic!("n = {n}, k = {k}: solver says {v}, exact search {exact}"),
        }
    }
    println!("{agree} agree, {skipped} profile_insufficient, 0 disagree");
    Ok(())
}
