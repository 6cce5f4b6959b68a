//! Ideal stroboscopic amplification: a flip every half period grows the
//! qubit-conditioned displacement by 2α₀ per flip.

use strobocat::protocols::{
    amplified_amplitude, amplify_ideal, closed_form_propagator, composed_flip_propagator, plus_vacuum,
};
use strobocat::spin_boson::{SystemParams, DOWN, UP};

fn main() -> strobocat::Result<()> {
    let params = SystemParams::default();
    println!("{:>3} {:>10} {:>10} {:>14}", "n", "<a>_up", "<a>_down", "1 - fidelity");
    for n in [2, 4, 8, 12] {
        let r = amplify_ideal(n, &params, &plus_vacuum(&params))?;
        let up = r.conditional_amplitudes[UP].expect("populated branch");
        let down = r.conditional_amplitudes[DOWN].expect("populated branch");
        println!("{n:>3} {:>10.6} {:>10.6} {:>14.2e}", up.re, down.re, 1.0 - r.fidelity_vs_ideal);
    }

    let n = 6;
    let k = params.fock().interior_for(amplified_amplitude(n, &params));
    let interior: Vec<usize> = (0..k).chain(params.n_trunc..params.n_trunc + k).collect();
    let dev = composed_flip_propagator(n, &params)?
        .phase_aligned_deviation(&closed_form_propagator(n, &params)?, &interior);
    println!("n = {n}: flip sequence vs closed form on {k} interior levels: {dev:.2e}");
    Ok(())
}
