//! Qubit-oscillator entanglement of the amplified state.

use strobocat::analysis::{qubit_reduced, von_neumann_entropy};
use strobocat::protocols::{amplified_amplitude, ideal_cat};
use strobocat::spin_boson::SystemParams;

fn main() -> strobocat::Result<()> {
    let params = SystemParams::default();
    println!("{:>3} {:>8} {:>12} {:>12}", "n", "2n*a0", "entropy", "closed form");
    for n in [1, 2, 4, 6, 8, 12] {
        let amp = amplified_amplitude(n, &params);
        let s = qubit_reduced(&ideal_cat(n, &params)?)?.entropy;
        let d = (-2.0 * amp * amp).exp();
        let closed = von_neumann_entropy(&[(1.0 + d) / 2.0, (1.0 - d) / 2.0]);
        println!("{n:>3} {amp:>8.2} {s:>12.8} {closed:>12.8}");
    }
    println!("ln 2 = {:.8}", std::f64::consts::LN_2);
    Ok(())
}
