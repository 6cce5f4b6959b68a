//! Coherent states, displacements and overlaps on a truncated Fock space.

use num_complex::Complex64 as C64;
use strobocat::analysis::fidelity;
use strobocat::fock::{coherent_state, displacement, FockSpace, StateVector};

fn main() -> strobocat::Result<()> {
    let alpha = 2.4;
    let space = FockSpace::for_amplitude(alpha);
    println!("n_trunc for |alpha| = {alpha}: {}", space.n_trunc());

    let plus = coherent_state(C64::new(alpha, 0.0), space)?;
    let minus = coherent_state(C64::new(-alpha, 0.0), space)?;
    let overlap = minus.inner(&plus)?;
    println!("<-a|a> = {:.4e}  (closed form {:.4e})", overlap.norm(), (-2.0 * alpha * alpha).exp());

    let d = displacement(C64::new(alpha, 0.0), space)?;
    let displaced = d.apply(&StateVector::basis(space.n_trunc(), 0))?;
    println!("D(a)|0> vs |a>: 1 - F = {:.2e}", 1.0 - fidelity(&displaced, &plus)?);
    let wide = FockSpace::new(64)?;
    println!(
        "n_trunc 64: {} levels stay accurate for |alpha| <= {alpha}, guard interior {}",
        wide.interior_for(alpha),
        wide.guard_interior()
    );
    Ok(())
}
