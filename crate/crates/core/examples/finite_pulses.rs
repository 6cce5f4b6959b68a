//! Fidelity of the amplified cat when the flips are rectangular pulses of
//! finite amplitude ε⊥ and width π/ε⊥.

use strobocat::protocols::{amplify_finite_with, plus_vacuum, PulseAlignment};
use strobocat::spin_boson::SystemParams;

fn main() -> strobocat::Result<()> {
    let params = SystemParams::default();
    let initial = plus_vacuum(&params);
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "eps_perp", "n=4", "n=8", "n=12", "n=12 ctr");
    for eps in (1..=12).map(|k| 10.0 * k as f64) {
        let mut row = Vec::new();
        for n in [4, 8, 12] {
            row.push(amplify_finite_with(n, eps, &params, &initial, PulseAlignment::LeadingEdge)?.fidelity_vs_ideal);
        }
        let centred = amplify_finite_with(12, eps, &params, &initial, PulseAlignment::Centered)?.fidelity_vs_ideal;
        println!("{eps:>8.1} {:>10.6} {:>10.6} {:>10.6} {:>10.6}", row[0], row[1], row[2], centred);
    }
    Ok(())
}
