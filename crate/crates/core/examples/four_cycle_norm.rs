//! 4-cycle balance and norm, and why vertex shifts do not change them.

use tspba::{balance, four_cycle_norm, Edge, FourCycle, TransformLedger, Weighting};

fn main() -> tspba::Result<()> {
    let n = 8;
    let mut w = Weighting::zero(n)?;
    w.set(Edge::new(0, 1), 5);
    w.set(Edge::new(2, 3), -2);

    for c in FourCycle::on_subset(0, 1, 2, 3) {
        println!("{c}  balance {}", balance(&w, &c));
    }
    println!("norm4 = {}", four_cycle_norm(&w));

    let mut ledger = TransformLedger::zero(n);
    ledger.shift_vertex(4, 7)?;
    ledger.shift_all(-3)?;
    let shifted = w.apply_transform(&ledger)?;
    println!(
        "after shifting: norm4 = {}, every cycle moves by {}",
        four_cycle_norm(&shifted),
        ledger.alpha()
    );
    Ok(())
}
