//! Where amplification stops in a damped resonator, and what a single spin
//! does to the resonator amplitude.

use strobocat::protocols::{mrfm_amplitude, saturation};
use strobocat::spin_boson::SystemParams;

fn main() -> strobocat::Result<()> {
    for q in [1e2, 1e3, 1e4] {
        let params = SystemParams {
            q_factor: q,
            ..SystemParams::default()
        };
        let r = saturation(&params)?;
        match r.simulated_n_s {
            Some(sim) => println!("Q = {q:>8.0}: n_s = {:>9.2}, simulated {sim:>9.2} after {} flips", r.model.n_s, r.flips),
            None => println!("Q = {q:>8.0}: n_s = {:>9.2}, still growing after {} flips", r.model.n_s, r.flips),
        }
    }

    let params = SystemParams::default();
    for m in 1..=3 {
        let r = mrfm_amplitude(12, m, &params)?;
        println!(
            "m = {m}: amplitude {:.2}, resolution {:.2}, Q threshold {:.3}, resolvable {}",
            r.amplitude, r.resolution, r.q_threshold, r.single_spin_resolvable
        );
    }
    Ok(())
}
