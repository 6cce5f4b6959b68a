//! Qubit ⊗ oscillator composite space and the rotating-frame Hamiltonians.
//!
//! Units: ħ = 1 and energies are measured in units of the oscillator
//! frequency, so `omega0 = 1` for every shipped scenario. Composite indices
//! are `q · n_trunc + k` with `q = 0` for |↑⟩ (σ_z = +1) and `q = 1` for |↓⟩.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{displacement, ladder_ops, FockSpace, OperatorMatrix, StateVector};

pub const UP: usize = 0;
pub const DOWN: usize = 1;

/// Rotating-frame model parameters, all energies in units of ω₀ (ħ = 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemParams {
    pub omega0: f64,
    pub lambda0: f64,
    pub eps_z: f64,
    pub eps_perp_amp: f64,
    pub eps_d: f64,
    pub omega_d: f64,
    pub q_factor: f64,
    /// k_B T in the same energy units as `omega0`.
    pub temperature: f64,
    pub n_trunc: usize,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            omega0: 1.0,
            lambda0: 0.2,
            eps_z: 0.0,
            eps_perp_amp: 60.0,
            eps_d: 1.9,
            omega_d: 0.0,
            q_factor: 1e4,
            temperature: 0.0,
            n_trunc: 64,
        }
    }
}

impl SystemParams {
    /// Dimensionless coupling α₀ = λ₀ / 2ω₀.
    pub fn alpha0(&self) -> f64 {
        self.lambda0 / (2.0 * self.omega0)
    }

    /// Half the oscillator period, the spacing of the stroboscopic flips.
    pub fn tau0(&self) -> f64 {
        std::f64::consts::PI / self.omega0
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("omega0", self.omega0),
            ("lambda0", self.lambda0),
            ("eps_z", self.eps_z),
            ("eps_perp_amp", self.eps_perp_amp),
            ("eps_d", self.eps_d),
            ("omega_d", self.omega_d),
            ("temperature", self.temperature),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::validation(name, format!("must be finite, got {v}")));
            }
        }
        if !(self.omega0 > 0.0) {
            return Err(Error::validation("omega0", "must be > 0"));
        }
        if !(self.q_factor > 0.0) {
            return Err(Error::validation("q_factor", "must be > 0"));
        }
        if self.temperature < 0.0 {
            return Err(Error::validation("temperature", "must be >= 0"));
        }
        if self.n_trunc < 2 {
            return Err(Error::validation("n_trunc", "must be >= 2"));
        }
        Ok(())
    }

    pub fn fock(&self) -> FockSpace {
        FockSpace::new(self.n_trunc.max(2)).expect("n_trunc >= 2")
    }

    pub fn composite(&self) -> CompositeSpace {
        CompositeSpace::new(self.fock())
    }
}

/// Device-level inputs for deriving λ₀ and ε_z. Masses in kg, lengths in
/// m, capacitances in F, voltages in V; `e_j0`, `e_c` and `omega0` share one
/// frequency unit (for example Hz) and the derived couplings come out in it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalDeviceParams {
    pub e_j0: f64,
    pub e_c: f64,
    pub c_x0: f64,
    pub c_g: f64,
    pub v_x0: f64,
    pub v_g0: f64,
    pub d0: f64,
    pub mass: f64,
    /// Mechanical frequency as an ordinary frequency (cycles per second).
    pub omega0: f64,
}

const HBAR: f64 = 1.054_571_817e-34;
const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

impl PhysicalDeviceParams {
    /// Gate voltages may take either sign; every other field must be
    /// positive.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("e_j0", self.e_j0),
            ("e_c", self.e_c),
            ("c_x0", self.c_x0),
            ("c_g", self.c_g),
            ("d0", self.d0),
            ("mass", self.mass),
            ("omega0", self.omega0),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::validation(name, format!("must be positive, got {v}")));
            }
        }
        for (name, v) in [("v_x0", self.v_x0), ("v_g0", self.v_g0)] {
            if !v.is_finite() {
                return Err(Error::validation(name, format!("must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Zero-point width √(ħ / 2mω₀) in metres.
    pub fn delta_x0(&self) -> f64 {
        (HBAR / (2.0 * self.mass * 2.0 * std::f64::consts::PI * self.omega0)).sqrt()
    }
}

/// λ₀ and ε_z derived from device values, in the frequency unit of `e_c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedCoupling {
    pub lambda0: f64,
    pub eps_z: f64,
}

impl DerivedCoupling {
    /// Rescales into oscillator units on top of `base`.
    pub fn to_system_params(&self, omega0: f64, base: &SystemParams) -> SystemParams {
        SystemParams {
            lambda0: self.lambda0 / omega0,
            eps_z: self.eps_z / omega0,
            ..base.clone()
        }
    }
}

/// λ₀ = 4E_c (V_x0 C_x0 / 2e)(δx₀ / d₀),  ε_z = 8E_c (C_g V_g0 + C_x0 V_x0) / 2e.
///
/// `v_x0 = 0` is accepted here and yields λ₀ = 0.
pub fn coupling_from_physical(dev: &PhysicalDeviceParams) -> DerivedCoupling {
    let two_e = 2.0 * ELEMENTARY_CHARGE;
    let lambda0 = 4.0 * dev.e_c * (dev.v_x0 * dev.c_x0 / two_e) * (dev.delta_x0() / dev.d0);
    let eps_z = 8.0 * dev.e_c * (dev.c_g * dev.v_g0 + dev.c_x0 * dev.v_x0) / two_e;
    DerivedCoupling { lambda0, eps_z }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositeSpace {
    fock: FockSpace,
}

impl CompositeSpace {
    pub fn new(fock: FockSpace) -> Self {
        CompositeSpace { fock }
    }

    pub fn fock(&self) -> FockSpace {
        self.fock
    }

    pub fn n_trunc(&self) -> usize {
        self.fock.n_trunc()
    }

    pub fn dim(&self) -> usize {
        2 * self.fock.n_trunc()
    }

    pub fn index(&self, qubit: usize, fock: usize) -> usize {
        qubit * self.fock.n_trunc() + fock
    }

    /// `qubit ⊗ osc` for a qubit amplitude pair `(c↑, c↓)`.
    pub fn product(&self, c_up: C64, c_down: C64, osc: &StateVector) -> Result<StateVector> {
        if osc.dim() != self.n_trunc() {
            return Err(Error::dimension(format!(
                "oscillator state has dimension {}, space has {}",
                osc.dim(),
                self.n_trunc()
            )));
        }
        let q = StateVector::from_slice(&[c_up, c_down]);
        StateVector::new(q.kron(osc).into_inner())
    }

    /// The unnormalized oscillator factor of one qubit branch.
    pub fn branch(&self, state: &StateVector, qubit: usize) -> Result<StateVector> {
        self.check_state(state)?;
        let n = self.n_trunc();
        Ok(StateVector::from_slice(&state.as_slice()[qubit * n..(qubit + 1) * n]))
    }

    pub fn check_state(&self, state: &StateVector) -> Result<()> {
        if state.dim() != self.dim() {
            return Err(Error::dimension(format!(
                "state has dimension {}, composite space has {}",
                state.dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

fn qubit_op(entries: [[f64; 2]; 2], im: bool) -> OperatorMatrix {
    let m = DMatrix::from_fn(2, 2, |i, j| {
        if im {
            C64::new(0.0, entries[i][j])
        } else {
            C64::new(entries[i][j], 0.0)
        }
    });
    OperatorMatrix::from_parts(m, true, true)
}

pub fn identity2() -> OperatorMatrix {
    OperatorMatrix::identity(2)
}

pub fn sigma_x() -> OperatorMatrix {
    qubit_op([[0.0, 1.0], [1.0, 0.0]], false)
}

pub fn sigma_y() -> OperatorMatrix {
    qubit_op([[0.0, -1.0], [1.0, 0.0]], true)
}

pub fn sigma_z() -> OperatorMatrix {
    qubit_op([[1.0, 0.0], [0.0, -1.0]], false)
}

/// (σ_x + σ_z)/√2: sends |↑⟩ → |+⟩ and |↓⟩ → |−⟩.
pub fn hadamard() -> OperatorMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    qubit_op([[s, s], [s, -s]], false)
}

/// `qubit_op ⊗ osc_op` in the composite ordering.
pub fn embed(qubit: &OperatorMatrix, osc: &OperatorMatrix, space: CompositeSpace) -> Result<OperatorMatrix> {
    if qubit.dim() != 2 {
        return Err(Error::dimension(format!("qubit operator must be 2x2, got {}", qubit.dim())));
    }
    if osc.dim() != space.n_trunc() {
        return Err(Error::dimension(format!(
            "oscillator operator has dimension {}, space has {}",
            osc.dim(),
            space.n_trunc()
        )));
    }
    Ok(qubit.kron(osc))
}

/// ω₀â†â − (λ₀/2)(â+â†)σ_z − (ε_z/2)σ_z, plus (ε⊥/2)σ_x when `include_pulse`.
pub fn build_h_rot(params: &SystemParams, include_pulse: bool) -> OperatorMatrix {
    let pulse = if include_pulse { params.eps_perp_amp } else { 0.0 };
    build_static(params, params.eps_z, pulse / 2.0)
}

/// The rotating-frame Hamiltonian with the detection drive
/// ε_d cos(ω_d t)σ_x in place of the pulse term.
pub fn build_h_detect(params: &SystemParams, t: f64) -> OperatorMatrix {
    build_static(params, params.eps_z, params.eps_d * (params.omega_d * t).cos())
}

/// The time-independent part of the detection Hamiltonian and the operator
/// multiplying `ε_d cos(ω_d t)`.
pub fn detect_parts(params: &SystemParams) -> (OperatorMatrix, OperatorMatrix) {
    let space = params.composite();
    let drive = embed(&sigma_x(), &OperatorMatrix::identity(space.n_trunc()), space).expect("matching dims");
    (build_static(params, params.eps_z, 0.0), drive)
}

fn build_static(params: &SystemParams, eps_z: f64, sx_coeff: f64) -> OperatorMatrix {
    let n = params.n_trunc.max(2);
    let dim = 2 * n;
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    for q in 0..2 {
        let sz = if q == UP { 1.0 } else { -1.0 };
        let off = q * n;
        for k in 0..n {
            h[(off + k, off + k)] = C64::new(params.omega0 * k as f64 - 0.5 * eps_z * sz, 0.0);
            if k + 1 < n {
                let c = C64::new(-0.5 * params.lambda0 * sz * ((k + 1) as f64).sqrt(), 0.0);
                h[(off + k, off + k + 1)] = c;
                h[(off + k + 1, off + k)] = c;
            }
        }
    }
    if sx_coeff != 0.0 {
        for k in 0..n {
            h[(k, n + k)] = C64::new(sx_coeff, 0.0);
            h[(n + k, k)] = C64::new(sx_coeff, 0.0);
        }
    }
    OperatorMatrix::from_parts(h, true, false)
}

/// D = exp(α₀σ_z(â† − â)): displaces the |↑⟩ branch by +α₀ and |↓⟩ by −α₀.
pub fn conditional_displacement(params: &SystemParams) -> Result<OperatorMatrix> {
    let a0 = params.alpha0();
    block_diag(
        &displacement(C64::new(a0, 0.0), params.fock())?,
        &displacement(C64::new(-a0, 0.0), params.fock())?,
    )
}

/// Block-diagonal `|↑⟩⟨↑| ⊗ upper + |↓⟩⟨↓| ⊗ lower`.
pub fn block_diag(upper: &OperatorMatrix, lower: &OperatorMatrix) -> Result<OperatorMatrix> {
    let n = upper.dim();
    if lower.dim() != n {
        return Err(Error::dimension("block sizes differ"));
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(upper.entries());
    m.view_mut((n, n), (n, n)).copy_from(lower.entries());
    Ok(OperatorMatrix::from_parts(
        m,
        upper.is_hermitian() && lower.is_hermitian(),
        upper.is_unitary() && lower.is_unitary(),
    ))
}

/// e^{−iπâ†â} = diag((−1)ᵏ) on the oscillator.
pub fn parity(space: FockSpace) -> OperatorMatrix {
    let n = space.n_trunc();
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i != j {
            C64::new(0.0, 0.0)
        } else if i % 2 == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        }
    });
    OperatorMatrix::from_parts(m, true, true)
}

/// The ideal instantaneous flip −iσ_x on the composite space.
pub fn ideal_flip(space: CompositeSpace) -> OperatorMatrix {
    embed(&sigma_x(), &OperatorMatrix::identity(space.n_trunc()), space)
        .expect("matching dims")
        .scaled(C64::new(0.0, -1.0))
}

/// Position operator x̂ = â + â† in units of δx₀.
pub fn position_operator(space: FockSpace) -> OperatorMatrix {
    let ops = ladder_ops(space);
    OperatorMatrix::from_parts(ops.lower.entries() + ops.raise.entries(), true, false)
}
