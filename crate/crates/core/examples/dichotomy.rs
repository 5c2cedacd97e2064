//! Either a certificate or an equivalent instance with a tiny support.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tspba::{dichotomy, ConstantsProfile, DichotomyResult, Edge, Weighting};

fn report(name: &str, w: &Weighting, k: u64) -> tspba::Result<()> {
    match dichotomy(w, k, &ConstantsProfile::test())? {
        DichotomyResult::Certificate { cycle, norm4 } => {
            println!(
                "{name}, k = {k}: norm4 {norm4} > k n^3, certificate of weight {} (d n = {:.1})",
                cycle.weight(w),
                w.density().numerator as f64 * w.n() as f64 / w.density().denominator as f64
            );
        }
        DichotomyResult::Reduced {
            weighting,
            ledger,
            abs_norm,
            norm4,
        } => {
            let support: Vec<String> = weighting
                .edges()
                .filter(|&(_, x)| x != 0)
                .map(|(e, x)| format!("{e}:{x}"))
                .collect();
            println!(
                "{name}, k = {k}: norm4 {norm4}, reduced with alpha {} and |w*| = {abs_norm}; support {}",
                ledger.alpha(),
                support.join(" ")
            );
        }
    }
    Ok(())
}

fn main() -> tspba::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    // Vertex shifts plus three bumped edges: the norm stays small.
    let n = 60;
    let lambda: Vec<i64> = (0..n).map(|_| rng.gen_range(-30..=30)).collect();
    let mut shifted = Weighting::from_fn(n, |u, v| lambda[u] + lambda[v] + 4)?;
    for (a, b, bump) in [(3, 17, 9), (8, 40, -6), (21, 22, 4)] {
        let e = Edge::new(a, b);
        shifted.set(e, shifted.w(e) + bump);
    }
    report("shifted", &shifted, 1)?;

    // Unstructured weights: the norm is large and a light cycle exists.
    let noisy = Weighting::from_fn(20, |_, _| rng.gen_range(-10..=10))?;
    report("noisy", &noisy, 2)?;
    Ok(())
}
