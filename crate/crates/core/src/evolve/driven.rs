use serde::{Deserialize, Serialize};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::StateVector;
use crate::linalg::{diff_norm, expm_apply_taylor, vec_norm, SparseMatrix};
use crate::spin_boson::{detect_parts, SystemParams};

/// Exponential integrators for H(t) = H₀ + ε_d cos(ω_d t) X. Every step is
/// a product of exact exponentials, so each step is unitary to rounding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stepper {
    /// exp(−iH(t+h/2)h), second order.
    Midpoint,
    /// Fourth-order commutator-free Magnus scheme with two exponentials
    /// evaluated at the Gauss-Legendre nodes.
    #[default]
    CommutatorFree4,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrivenOptions {
    pub stepper: Stepper,
    /// Convergence threshold on ‖ψ_{h/2} − ψ_h‖.
    pub tolerance: f64,
    pub max_halvings: usize,
    /// Step count of the first attempt; chosen from the fastest time scale
    /// when absent.
    pub initial_steps: Option<usize>,
}

impl Default for DrivenOptions {
    fn default() -> Self {
        DrivenOptions {
            stepper: Stepper::default(),
            tolerance: 1e-9,
            max_halvings: 20,
            initial_steps: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DrivenReport {
    pub state: StateVector,
    pub steps: usize,
    pub last_change: f64,
}

/// Integrates i dψ/dt = H(t)ψ with H(t) = `build_h_detect(params, t)` over
/// `[start, start + duration]` using the default options.
pub fn propagate_driven(params: &SystemParams, start: f64, duration: f64, psi: &StateVector) -> Result<StateVector> {
    Ok(propagate_driven_with(params, start, duration, psi, &DrivenOptions::default())?.state)
}

pub fn propagate_driven_with(
    params: &SystemParams,
    start: f64,
    duration: f64,
    psi: &StateVector,
    opts: &DrivenOptions,
) -> Result<DrivenReport> {
    params.composite().check_state(psi)?;
    if !(duration >= 0.0) {
        return Err(Error::validation("duration", "must be >= 0"));
    }
    if duration == 0.0 {
        return Ok(DrivenReport {
            state: psi.clone(),
            steps: 0,
            last_change: 0.0,
        });
    }
    let (h0, x) = detect_parts(params);
    let sys = DrivenSystem {
        h0: SparseMatrix::from_dense(h0.entries()),
        x: SparseMatrix::from_dense(x.entries()),
        eps_d: params.eps_d,
        omega_d: params.omega_d,
    };
    let rate = params
        .omega_d
        .abs()
        .max(params.eps_d.abs())
        .max(params.eps_z.abs())
        .max(params.omega0);
    let mut steps = opts
        .initial_steps
        .unwrap_or_else(|| (duration * rate / 0.5).ceil() as usize)
        .max(1);
    let mut prev = sys.run(opts.stepper, start, duration, steps, psi.as_slice());
    let mut last_change = f64::INFINITY;
    for _ in 0..opts.max_halvings {
        steps *= 2;
        let next = sys.run(opts.stepper, start, duration, steps, psi.as_slice());
        last_change = diff_norm(&next, &prev);
        prev = next;
        if last_change < opts.tolerance {
            return Ok(DrivenReport {
                state: StateVector::from_slice(&prev),
                steps,
                last_change,
            });
        }
    }
    Err(Error::Convergence {
        halvings: opts.max_halvings,
        last_change,
        tolerance: opts.tolerance,
    })
}

struct DrivenSystem {
    h0: SparseMatrix,
    x: SparseMatrix,
    eps_d: f64,
    omega_d: f64,
}

impl DrivenSystem {
    fn drive(&self, t: f64) -> f64 {
        self.eps_d * (self.omega_d * t).cos()
    }

    /// ψ ← exp(−ih(c₀H₀ + gX)) ψ
    fn exp_step(&self, c0: f64, g: f64, h: f64, psi: &mut [C64]) {
        let bound = c0.abs() * self.h0.norm_inf() + g.abs() * self.x.norm_inf();
        let c0c = C64::new(c0, 0.0);
        let gc = C64::new(g, 0.0);
        expm_apply_taylor(
            |v, out| {
                self.h0.apply_into(v, out);
                for o in out.iter_mut() {
                    *o *= c0c;
                }
                self.x.apply_add(gc, v, out);
            },
            bound,
            C64::new(0.0, -h),
            psi,
        );
    }

    fn run(&self, stepper: Stepper, start: f64, duration: f64, steps: usize, psi0: &[C64]) -> Vec<C64> {
        let h = duration / steps as f64;
        let mut psi = psi0.to_vec();
        let s3 = 3f64.sqrt();
        let (a1, a2) = ((3.0 - 2.0 * s3) / 12.0, (3.0 + 2.0 * s3) / 12.0);
        for j in 0..steps {
            let t = start + j as f64 * h;
            match stepper {
                Stepper::Midpoint => self.exp_step(1.0, self.drive(t + 0.5 * h), h, &mut psi),
                Stepper::CommutatorFree4 => {
                    let f1 = self.drive(t + (0.5 - s3 / 6.0) * h);
                    let f2 = self.drive(t + (0.5 + s3 / 6.0) * h);
                    self.exp_step(0.5, a2 * f1 + a1 * f2, h, &mut psi);
                    self.exp_step(0.5, a1 * f1 + a2 * f2, h, &mut psi);
                }
            }
        }
        debug_assert!((vec_norm(&psi) - vec_norm(psi0)).abs() < 1e-9);
        psi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::detection_coefficients;
    use crate::evolve::propagate_static;
    use crate::spin_boson::{build_h_rot, DOWN, UP};

    fn bare_qubit(eps_z: f64, eps_d: f64, omega_d: f64) -> SystemParams {
        SystemParams {
            lambda0: 0.0,
            eps_z,
            eps_d,
            omega_d,
            n_trunc: 2,
            ..SystemParams::default()
        }
    }

    fn down(p: &SystemParams) -> StateVector {
        let s = p.composite();
        StateVector::basis(s.dim(), s.index(DOWN, 0))
    }

    fn up_population(p: &SystemParams, psi: &StateVector) -> f64 {
        psi.as_slice()[..p.n_trunc].iter().map(|c| c.norm_sqr()).sum()
    }

    #[test]
    fn undriven_matches_static() {
        let p = SystemParams {
            eps_d: 0.0,
            eps_z: 2.0,
            omega_d: 1.3,
            n_trunc: 32,
            ..SystemParams::default()
        };
        let s = p.composite();
        let psi = s
            .product(C64::new(0.6, 0.0), C64::new(0.0, 0.8), &StateVector::basis(32, 1))
            .unwrap();
        let a = propagate_driven(&p, 0.0, 2.5, &psi).unwrap();
        let b = propagate_static(&build_h_rot(&p, false), 2.5, &psi).unwrap();
        assert!(diff_norm(a.as_slice(), b.as_slice()) < 1e-9);
    }

    #[test]
    fn resonant_pi_pulse_flips() {
        let p = bare_qubit(20.0, 0.5, 20.0);
        let out = propagate_driven(&p, 0.0, std::f64::consts::PI / p.eps_d, &down(&p)).unwrap();
        assert!(up_population(&p, &out) > 0.999);
        assert!((out.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn detuned_drive_follows_closed_form() {
        let shift = 1.92;
        let p = bare_qubit(100.0 + shift, 1.92, 100.0);
        let out = propagate_driven(&p, 0.0, std::f64::consts::PI / p.eps_d, &down(&p)).unwrap();
        let expect = detection_coefficients(p.eps_d, shift).c_up.norm_sqr();
        assert!((expect - 0.316).abs() < 1e-3);
        assert!((up_population(&p, &out) - expect).abs() < 0.03);
    }

    #[test]
    fn steppers_agree() {
        let p = bare_qubit(3.0, 1.0, 2.5);
        let psi = down(&p);
        let cf4 = propagate_driven(&p, 0.3, 2.0, &psi).unwrap();
        let mid = propagate_driven_with(
            &p,
            0.3,
            2.0,
            &psi,
            &DrivenOptions {
                stepper: Stepper::Midpoint,
                ..DrivenOptions::default()
            },
        )
        .unwrap();
        assert!(diff_norm(cf4.as_slice(), mid.state.as_slice()) < 5e-9);
        let up = StateVector::basis(4, p.composite().index(UP, 0));
        assert!(propagate_driven(&p, 0.0, 1.0, &up).is_ok());
    }

    #[test]
    fn fourth_order_error_scaling() {
        let p = bare_qubit(3.0, 1.0, 2.5);
        let (h0, x) = detect_parts(&p);
        let sys = DrivenSystem {
            h0: SparseMatrix::from_dense(h0.entries()),
            x: SparseMatrix::from_dense(x.entries()),
            eps_d: p.eps_d,
            omega_d: p.omega_d,
        };
        let psi = down(&p);
        let reference = sys.run(Stepper::CommutatorFree4, 0.0, 2.0, 4096, psi.as_slice());
        let e1 = diff_norm(&sys.run(Stepper::CommutatorFree4, 0.0, 2.0, 32, psi.as_slice()), &reference);
        let e2 = diff_norm(&sys.run(Stepper::CommutatorFree4, 0.0, 2.0, 64, psi.as_slice()), &reference);
        let order = (e1 / e2).log2();
        assert!(order > 3.7 && order < 4.3, "observed order {order}");
    }

    #[test]
    fn non_convergence_is_reported() {
        let p = bare_qubit(3.0, 1.0, 2.5);
        let opts = DrivenOptions {
            tolerance: 0.0,
            max_halvings: 2,
            ..DrivenOptions::default()
        };
        let err = propagate_driven_with(&p, 0.0, 1.0, &down(&p), &opts).unwrap_err();
        assert!(err.is_convergence_error());
    }
}
