//! Position densities of the two qubit branches of a 12-flip cat, as CSV
//! on stdout (x in units of δx₀).

use strobocat::analysis::position_density;
use strobocat::protocols::ideal_cat;
use strobocat::spin_boson::SystemParams;

fn main() -> strobocat::Result<()> {
    let params = SystemParams::default();
    let grid: Vec<f64> = (0..=160).map(|k| -8.0 + 0.1 * k as f64).collect();
    let d = position_density(&ideal_cat(12, &params)?, &grid)?;
    println!("x,up,down");
    for ((x, u), v) in d.grid.iter().zip(&d.up).zip(&d.down) {
        println!("{x:.2},{u:.6e},{v:.6e}");
    }
    Ok(())
}
