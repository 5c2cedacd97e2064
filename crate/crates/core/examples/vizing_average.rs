//! Derandomized averaging: a Hamilton cycle no heavier than the mean, grown
//! one join edge at a time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tspba::{expected_weight, min_avg_cycle, PartialHamCycle, Weighting};

fn main() -> tspba::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 40;
    let w = Weighting::from_fn(n, |_, _| rng.gen_range(-100..=100))?;

    let empty = PartialHamCycle::empty(n)?;
    let h = min_avg_cycle(&w, &empty)?;
    println!("density        {}", w.density());
    println!("average cycle  {:.2}", to_f64(&expected_weight(&w, &empty)));
    println!("found          {}", h.weight(&w));

    // Starting from a forced edge set works the same way.
    let forced = PartialHamCycle::from_edges(n, &h.edges()[..5])?;
    let h2 = min_avg_cycle(&w, &forced)?;
    println!(
        "with 5 forced  {} (average over extensions {:.2})",
        h2.weight(&w),
        to_f64(&expected_weight(&w, &forced))
    );
    Ok(())
}

fn to_f64(x: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
