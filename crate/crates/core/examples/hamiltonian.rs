//! Rotating-frame Hamiltonian and the coupling derived from device values.

use strobocat::spin_boson::{build_h_rot, coupling_from_physical, PhysicalDeviceParams, SystemParams};

fn main() -> strobocat::Result<()> {
    let mut dev = PhysicalDeviceParams {
        e_j0: 10e9,
        e_c: 50e9,
        c_x0: 20e-18,
        c_g: 1e-18,
        v_x0: 1.0,
        v_g0: 1.0,
        d0: 1.0,
        mass: 1e-16,
        omega0: 100e6,
    };
    // δx₀/d₀ = 1.6e-6, and the gate cancels the static charge so ε_z = 0
    dev.d0 = dev.delta_x0() / 1.6e-6;
    dev.v_g0 = -dev.c_x0 * dev.v_x0 / dev.c_g;
    dev.validate()?;
    let g = coupling_from_physical(&dev);
    println!("delta_x0 = {:.3e} m", dev.delta_x0());
    println!("lambda0 = {:.2} MHz, eps_z = {:.3e} Hz", g.lambda0 / 1e6, g.eps_z);

    let params = g.to_system_params(dev.omega0, &SystemParams { n_trunc: 16, ..SystemParams::default() });
    println!("in units of omega0: lambda0 = {:.4}, alpha0 = {:.4}", params.lambda0, params.alpha0());

    let h = build_h_rot(&SystemParams { n_trunc: 16, ..SystemParams::default() }, false);
    println!("H_rot: {}x{}, hermitian = {}", h.dim(), h.dim(), h.is_hermitian());
    Ok(())
}
