use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{OperatorMatrix, StateVector};
use crate::linalg::{trace_norm_hermitian, HermitianEigen};
use crate::spin_boson::SystemParams;

const MAX_DIM: usize = 256;

/// A trace-one, hermitian, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Checks trace = 1 and hermiticity to 1e-10 and λ_min > −1e-8.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::dimension("density matrix must be square"));
        }
        let rho = DensityMatrix { entries };
        let tr = rho.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let herm = (&rho.entries - rho.entries.adjoint()).camax();
        if herm > 1e-10 {
            return Err(Error::InvalidState(format!("not hermitian (max |ρ-ρ†| = {herm:.3e})")));
        }
        let min = rho.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min < -1e-8 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(rho)
    }

    /// |ψ⟩⟨ψ| for a normalized ψ.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let v = psi.normalized()?;
        let a = v.amplitudes();
        Ok(DensityMatrix {
            entries: a * a.adjoint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        HermitianEigen::new(&self.entries).values
    }

    /// tr(ρA)
    pub fn expectation(&self, op: &OperatorMatrix) -> Result<C64> {
        if op.dim() != self.dim() {
            return Err(Error::dimension("operator and density matrix differ in dimension"));
        }
        Ok((&self.entries * op.entries()).trace())
    }

    /// ⟨φ|ρ|χ⟩
    pub fn matrix_element(&self, phi: &StateVector, chi: &StateVector) -> Result<C64> {
        if phi.dim() != self.dim() || chi.dim() != self.dim() {
            return Err(Error::dimension("state and density matrix differ in dimension"));
        }
        Ok(phi.amplitudes().dotc(&(&self.entries * chi.amplitudes())))
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }
}

/// Mechanical bath: damping rate γ = ω₀/Q and thermal occupation n̄.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    pub gamma: f64,
    pub nbar: f64,
}

impl BathParams {
    pub fn new(gamma: f64, nbar: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::validation("gamma", "must be finite and >= 0"));
        }
        if !(nbar >= 0.0) || !nbar.is_finite() {
            return Err(Error::validation("nbar", "must be finite and >= 0"));
        }
        Ok(BathParams { gamma, nbar })
    }

    /// γ = ω₀/Q, n̄ from the exact Bose factor at k_BT = `temperature`.
    pub fn from_system(params: &SystemParams) -> Result<Self> {
        BathParams::new(
            params.omega0 / params.q_factor,
            bose_occupation(params.omega0, params.temperature),
        )
    }
}

/// 1 / (e^{ω/k_BT} − 1), zero at zero temperature.
pub fn bose_occupation(omega: f64, kbt: f64) -> f64 {
    if kbt <= 0.0 {
        0.0
    } else {
        1.0 / (omega / kbt).exp_m1()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LindbladOptions {
    /// Convergence threshold on the trace-norm change under step halving.
    pub tolerance: f64,
    pub max_halvings: usize,
    pub initial_steps: Option<usize>,
}

impl Default for LindbladOptions {
    fn default() -> Self {
        LindbladOptions {
            tolerance: 1e-8,
            max_halvings: 20,
            initial_steps: None,
        }
    }
}

/// Integrates dρ/dt = −i[H,ρ] + γ(n̄+1)𝒟[L]ρ + γn̄𝒟[L†]ρ for `duration`,
/// where `lowering` is the oscillator annihilation operator embedded in the
/// same space as `h`.
///
/// The coherent part is solved exactly in the eigenbasis of `H` and RK4 is
/// applied to the dissipator in the interaction picture; the step is halved
/// until the trace-norm change falls below the tolerance.
pub fn lindblad_evolve(
    h: &OperatorMatrix,
    bath: BathParams,
    lowering: &OperatorMatrix,
    rho: &DensityMatrix,
    duration: f64,
) -> Result<DensityMatrix> {
    lindblad_evolve_with(h, bath, lowering, rho, duration, &LindbladOptions::default())
}

pub fn lindblad_evolve_with(
    h: &OperatorMatrix,
    bath: BathParams,
    lowering: &OperatorMatrix,
    rho: &DensityMatrix,
    duration: f64,
    opts: &LindbladOptions,
) -> Result<DensityMatrix> {
    let sys = Liouvillian::new(h, bath, lowering, rho.dim())?;
    sys.evolve(rho, duration, opts)
}

/// States at each of the (ascending) `times`, starting from `rho` at t = 0.
pub fn lindblad_trajectory(
    h: &OperatorMatrix,
    bath: BathParams,
    lowering: &OperatorMatrix,
    rho: &DensityMatrix,
    times: &[f64],
    opts: &LindbladOptions,
) -> Result<Vec<DensityMatrix>> {
    let sys = Liouvillian::new(h, bath, lowering, rho.dim())?;
    let mut out = Vec::with_capacity(times.len());
    let mut current = rho.clone();
    let mut t = 0.0;
    for &next in times {
        if next < t {
            return Err(Error::validation("times", "must be ascending and >= 0"));
        }
        current = sys.evolve(&current, next - t, opts)?;
        t = next;
        out.push(current.clone());
    }
    Ok(out)
}

struct Liouvillian {
    energies: Vec<f64>,
    basis: DMatrix<C64>,
    l: DMatrix<C64>,
    ld: DMatrix<C64>,
    ldl: DMatrix<C64>,
    lld: DMatrix<C64>,
    down: f64,
    up: f64,
    /// Fastest Bohr frequency carried by a jump-operator matrix element.
    jump_frequency: f64,
}

impl Liouvillian {
    fn new(h: &OperatorMatrix, bath: BathParams, lowering: &OperatorMatrix, dim: usize) -> Result<Self> {
        if h.dim() != dim || lowering.dim() != dim {
            return Err(Error::dimension(format!(
                "Hamiltonian ({}), jump operator ({}) and state ({dim}) must agree",
                h.dim(),
                lowering.dim()
            )));
        }
        if dim > MAX_DIM {
            return Err(Error::dimension(format!("density matrices limited to dimension {MAX_DIM}, got {dim}")));
        }
        if !h.is_hermitian() && h.hermiticity_error() >= 1e-12 {
            return Err(Error::InvalidState("Hamiltonian is not hermitian".into()));
        }
        let eig = HermitianEigen::new(h.entries());
        let basis = eig.vectors;
        let l = basis.adjoint() * lowering.entries() * &basis;
        let ld = l.adjoint();
        let energies: Vec<f64> = eig.values.iter().copied().collect();
        let scale = l.camax();
        let mut jump_frequency: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                if l[(i, j)].norm() > 1e-12 * scale {
                    jump_frequency = jump_frequency.max((energies[i] - energies[j]).abs());
                }
            }
        }
        Ok(Liouvillian {
            ldl: &ld * &l,
            lld: &l * &ld,
            l,
            ld,
            energies,
            basis,
            down: bath.gamma * (bath.nbar + 1.0),
            up: bath.gamma * bath.nbar,
            jump_frequency,
        })
    }

    fn dissipative(&self) -> bool {
        self.down != 0.0 || self.up != 0.0
    }

    /// Schrödinger-picture ρ[m,n] = e^{−i(E_m−E_n)t} ρ_I[m,n] when `sign` is −1.
    fn rotate(&self, m: &DMatrix<C64>, t: f64, sign: f64) -> DMatrix<C64> {
        let e = &self.energies;
        DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            m[(i, j)] * C64::from_polar(1.0, sign * (e[i] - e[j]) * t)
        })
    }

    fn dissipator(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let half = C64::new(0.5, 0.0);
        let mut out = (&self.l * rho * &self.ld - (&self.ldl * rho + rho * &self.ldl) * half) * C64::new(self.down, 0.0);
        if self.up != 0.0 {
            out += (&self.ld * rho * &self.l - (&self.lld * rho + rho * &self.lld) * half) * C64::new(self.up, 0.0);
        }
        out
    }

    fn rhs(&self, t: f64, rho_i: &DMatrix<C64>) -> DMatrix<C64> {
        let rho_s = self.rotate(rho_i, t, -1.0);
        self.rotate(&self.dissipator(&rho_s), t, 1.0)
    }

    /// Interaction-picture state at `duration` after `steps` RK4 steps.
    fn integrate(&self, rho0: &DMatrix<C64>, duration: f64, steps: usize) -> DMatrix<C64> {
        let h = duration / steps as f64;
        let c = |x: f64| C64::new(x, 0.0);
        let mut rho = rho0.clone();
        for j in 0..steps {
            let t = j as f64 * h;
            let k1 = self.rhs(t, &rho);
            let k2 = self.rhs(t + 0.5 * h, &(&rho + &k1 * c(0.5 * h)));
            let k3 = self.rhs(t + 0.5 * h, &(&rho + &k2 * c(0.5 * h)));
            let k4 = self.rhs(t + h, &(&rho + &k3 * c(h)));
            rho += (k1 + (k2 + k3) * c(2.0) + k4) * c(h / 6.0);
        }
        rho
    }

    fn evolve(&self, rho: &DensityMatrix, duration: f64, opts: &LindbladOptions) -> Result<DensityMatrix> {
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(Error::validation("duration", "must be finite and >= 0"));
        }
        let rho0 = self.basis.adjoint() * rho.entries() * &self.basis;
        let finish = |rho_i: DMatrix<C64>| {
            let s = self.rotate(&rho_i, duration, -1.0);
            let full = &self.basis * s * self.basis.adjoint();
            let herm = (&full + full.adjoint()) * C64::new(0.5, 0.0);
            DensityMatrix { entries: herm }
        };
        if duration == 0.0 || !self.dissipative() {
            return Ok(finish(rho0));
        }
        let decay = (self.down + self.up) * self.energies.len() as f64;
        let h0 = (1.0 / decay).min(1.0 / self.jump_frequency.max(1e-12));
        let mut steps = opts
            .initial_steps
            .unwrap_or_else(|| (duration / h0).ceil() as usize)
            .max(1);
        let mut prev = self.integrate(&rho0, duration, steps);
        let mut last_change = f64::INFINITY;
        for _ in 0..opts.max_halvings {
            steps *= 2;
            let next = self.integrate(&rho0, duration, steps);
            let diff = &next - &prev;
            last_change = trace_norm_hermitian(&((&diff + diff.adjoint()) * C64::new(0.5, 0.0)));
            prev = next;
            if last_change < opts.tolerance {
                return Ok(finish(prev));
            }
        }
        Err(Error::Convergence {
            halvings: opts.max_halvings,
            last_change,
            tolerance: opts.tolerance,
        })
    }
}
