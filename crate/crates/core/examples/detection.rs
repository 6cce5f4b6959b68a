//! Spectroscopic readout of a 12-flip cat: drive the qubit at the splitting
//! of the |↑⟩|−2nα₀⟩ branch, apply a π/2 pulse and measure σ_x. Prints p₋
//! against the drive amplitude for two qubit splittings next to the
//! frozen-oscillator prediction.

use strobocat::protocols::{detect_spectroscopy, ideal_cat};
use strobocat::spin_boson::SystemParams;

fn main() -> strobocat::Result<()> {
    let n = 12;
    println!("{:>6} {:>10} {:>10} {:>10}", "eps_d", "ez=3.2", "ez=4.0", "frozen");
    for k in 0..=20 {
        let eps_d = 0.5 + 0.5 * k as f64;
        let mut row = Vec::new();
        let mut analytic = 0.0;
        for eps_z in [3.2, 4.0] {
            let params = SystemParams {
                eps_z,
                eps_d,
                ..SystemParams::default()
            };
            let r = detect_spectroscopy(&ideal_cat(n, &params)?, &params, n)?;
            row.push(r.p_minus);
            analytic = r.analytic_p_minus;
        }
        println!("{eps_d:>6.2} {:>10.4} {:>10.4} {analytic:>10.4}", row[0], row[1]);
    }
    Ok(())
}
