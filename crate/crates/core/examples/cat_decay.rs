//! Thermal decay of an oscillator cat at T = 20 mK, f₀ = 100 MHz, Q = 10⁴,
//! compared with the α²k_BT/Q estimate.

use strobocat::analysis::temperature_in_oscillator_units;
use strobocat::protocols::cat_coherence_decay;
use strobocat::spin_boson::SystemParams;

fn main() -> strobocat::Result<()> {
    let params = SystemParams {
        q_factor: 1e4,
        temperature: temperature_in_oscillator_units(0.020, 100e6),
        n_trunc: 64,
        ..SystemParams::default()
    };
    println!("k_BT/ħω₀ = {:.4}", params.temperature);
    println!("{:>6} {:>12} {:>12} {:>12} {:>8}", "alpha", "fitted", "4γ(n̄+½)α²", "α²kT/Q", "ratio");
    let mut rates = Vec::new();
    for alpha in [2.0, 3.0] {
        let r = cat_coherence_decay(alpha, &params, 1, 20)?;
        println!(
            "{:>6.2} {:>12.4e} {:>12.4e} {:>12.4e} {:>8.3}",
            alpha,
            r.fitted_rate,
            r.short_time_rate,
            r.estimate,
            r.fitted_rate / r.estimate
        );
        rates.push(r.fitted_rate);
    }
    println!("rate ratio {:.4} (amplitude² ratio {:.4})", rates[1] / rates[0], 9.0 / 4.0);
    Ok(())
}
