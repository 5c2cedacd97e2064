//! Large 4-cycle norm forces a cycle well below the average.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tspba::{four_cycle_norm, improve, light_hamilton, q_value, Weighting};

fn main() -> tspba::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 24;
    let w = Weighting::from_fn(n, |_, _| rng.gen_range(-20..=20))?;
    let norm = four_cycle_norm(&w);
    let k = (norm / (n as i128).pow(3)) as u64;
    println!("norm4 = {norm}, so k = {k}");

    let h = light_hamilton(&w, k)?;
    let slack = w.density().slack(h.weight(&w), n, k);
    println!("cycle {h}");
    println!(
        "weight {}, margin below d n - k: {} / C(n,2)",
        h.weight(&w),
        slack
    );

    let q = q_value(&w, &h);
    let again = improve(&w, &h)?;
    println!("q(H) = {q}, one more improve step: {}", again.weight(&w));
    Ok(())
}
