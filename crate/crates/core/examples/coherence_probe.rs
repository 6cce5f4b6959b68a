//! Distinguishing the cat from a classical mixture: a π/2 pulse followed by
//! n more flips gives p₊ = 3/4 for the superposition and 1/2 for the
//! mixture.

use strobocat::protocols::{coherence_probe, ideal_cat};
use strobocat::spin_boson::SystemParams;

fn main() -> strobocat::Result<()> {
    let params = SystemParams {
        n_trunc: 128,
        ..SystemParams::default()
    };
    for n in [1, 4, 12] {
        let cat = ideal_cat(n, &params)?;
        let coherent = coherence_probe(&cat, &params, n, true)?;
        let mixture = coherence_probe(&cat, &params, n, false)?;
        println!(
            "n = {n:>2}: cat p+ = {:.6}  mixture p+ = {:.6}",
            coherent.p_plus, mixture.p_plus
        );
    }
    Ok(())
}
