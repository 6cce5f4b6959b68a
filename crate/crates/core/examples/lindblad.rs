//! Damped oscillator under the Lindblad equation: the coherent amplitude
//! decays as e^{−γt/2}e^{−iω₀t} at zero temperature.

use num_complex::Complex64 as C64;
use strobocat::evolve::{lindblad_trajectory, BathParams, DensityMatrix, LindbladOptions};
use strobocat::fock::{coherent_state, ladder_ops, FockSpace};

fn main() -> strobocat::Result<()> {
    let space = FockSpace::new(32)?;
    let ops = ladder_ops(space);
    let bath = BathParams::new(0.05, 0.0)?;
    let rho = DensityMatrix::from_pure(&coherent_state(C64::new(1.0, 0.0), space)?)?;
    let times: Vec<f64> = (1..=8).map(|k| k as f64).collect();
    let states = lindblad_trajectory(&ops.number, bath, &ops.lower, &rho, &times, &LindbladOptions::default())?;
    println!("{:>4} {:>22} {:>22} {:>8}", "t", "<a>", "exact", "purity");
    for (t, s) in times.iter().zip(&states) {
        let a = s.expectation(&ops.lower)?;
        let exact = C64::from_polar((-0.5 * bath.gamma * t).exp(), -t);
        println!("{t:>4.1} {:>22.6} {:>22.6} {:>8.5}", a, exact, s.purity());
    }
    Ok(())
}
