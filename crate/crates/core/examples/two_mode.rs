//! One qubit flipping against two oscillators: after the σ_x measurement
//! the oscillators are left in an entangled two-mode cat.

use strobocat::protocols::two_mode_cat;
use strobocat::spin_boson::{SystemParams, DOWN, UP};

fn main() -> strobocat::Result<()> {
    let params = SystemParams::default();
    for (l1, l2) in [(0.2, 0.2), (0.2, 0.1), (0.2, 0.0)] {
        let r = two_mode_cat(12, l1, l2, &params)?;
        let a = r.conditional_amplitudes;
        println!(
            "lambda = ({l1}, {l2}): up ({:.3}, {:.3}) down ({:.3}, {:.3})  p+ = {:.4}  S1 = {:.4}",
            a[UP][0].re, a[UP][1].re, a[DOWN][0].re, a[DOWN][1].re, r.p_plus, r.mode1_entropy_plus
        );
    }
    Ok(())
}
