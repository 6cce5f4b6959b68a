//! Truncated Fock-space primitives: states, operators, ladder operators,
//! coherent states and displacements.
//!
//! Convergence in the cutoff is controlled by a single rule: a scenario whose
//! largest coherent amplitude is `|α|` needs `n_trunc ≥ |α|² + 8|α| + 20`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::HermitianEigen;

const HERMITIAN_TOL: f64 = 1e-12;
const MAX_EXP_DIM: usize = 4096;

/// Smallest cutoff allowed by the truncation rule for amplitude `|α|`.
pub fn truncation_requirement(alpha_abs: f64) -> usize {
    let a = alpha_abs.abs();
    (a * a + 8.0 * a + 20.0 - 1e-9).ceil() as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockSpace {
    n_trunc: usize,
}

impl FockSpace {
    pub fn new(n_trunc: usize) -> Result<Self> {
        if n_trunc < 2 {
            return Err(Error::dimension(format!("n_trunc must be >= 2, got {n_trunc}")));
        }
        Ok(FockSpace { n_trunc })
    }

    /// The smallest space satisfying the truncation rule for `alpha_abs`.
    pub fn for_amplitude(alpha_abs: f64) -> Self {
        FockSpace {
            n_trunc: truncation_requirement(alpha_abs).max(2),
        }
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    pub fn check_amplitude(&self, alpha_abs: f64) -> Result<()> {
        let required = truncation_requirement(alpha_abs);
        if required > self.n_trunc {
            return Err(Error::Truncation {
                alpha: alpha_abs.abs(),
                required,
                n_trunc: self.n_trunc,
            });
        }
        Ok(())
    }

    /// Number of low Fock indices kept when the top 10% are treated as a
    /// guard band.
    pub fn guard_interior(&self) -> usize {
        self.n_trunc - (self.n_trunc as f64 * 0.1).ceil() as usize
    }

    /// Largest `k` such that every Fock state `|j⟩, j < k`, displaced by up
    /// to `alpha_max`, still satisfies the truncation rule. Operator
    /// identities are exact on this block up to the rule's tail bound.
    pub fn interior_for(&self, alpha_max: f64) -> usize {
        let mut k = 0;
        while k < self.n_trunc {
            let reach = (k as f64).sqrt() + alpha_max.abs();
            if truncation_requirement(reach) > self.n_trunc {
                break;
            }
            k += 1;
        }
        k
    }
}

/// A complex amplitude vector. Constructors that normalize say so; raw
/// vectors (branch projections, unnormalized superpositions) come from
/// [`StateVector::from_raw`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
}

impl StateVector {
    /// Normalizes `amps`; fails on a zero vector.
    pub fn new(amps: DVector<C64>) -> Result<Self> {
        let norm = amps.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState(format!("cannot normalize vector of norm {norm}")));
        }
        Ok(StateVector { amps: amps / C64::new(norm, 0.0) })
    }

    pub fn from_raw(amps: DVector<C64>) -> Self {
        StateVector { amps }
    }

    pub fn from_slice(amps: &[C64]) -> Self {
        StateVector {
            amps: DVector::from_column_slice(amps),
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = DVector::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        StateVector { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn as_slice(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn into_inner(self) -> DVector<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        StateVector::new(self.amps.clone())
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::dimension(format!(
                "inner product of dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Tensor product `self ⊗ other`, with `self` as the slow index.
    pub fn kron(&self, other: &StateVector) -> StateVector {
        StateVector {
            amps: self.amps.kronecker(&other.amps),
        }
    }

    pub fn scaled(&self, s: C64) -> StateVector {
        StateVector { amps: &self.amps * s }
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        if self.dim() != other.dim() {
            return Err(Error::dimension("adding states of different dimension"));
        }
        Ok(StateVector {
            amps: &self.amps + &other.amps,
        })
    }

    /// `⟨ψ|A|ψ⟩ / ⟨ψ|ψ⟩`
    pub fn expectation(&self, op: &OperatorMatrix) -> Result<C64> {
        let applied = op.apply(self)?;
        let norm2 = self.amps.norm_squared();
        Ok(self.amps.dotc(&applied.amps) / norm2)
    }
}

/// Dense complex square matrix with verified structure flags.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<C64>,
    hermitian: bool,
    unitary: bool,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::dimension(format!(
                "operator must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(OperatorMatrix {
            entries,
            hermitian: false,
            unitary: false,
        })
    }

    /// Builds an operator and sets the hermitian flag; fails if
    /// `max |M − M†| ≥ 1e-12`.
    pub fn hermitian(entries: DMatrix<C64>) -> Result<Self> {
        let mut op = OperatorMatrix::new(entries)?;
        let err = op.hermiticity_error();
        if err >= HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("operator is not hermitian (max |M-M†| = {err:.3e})")));
        }
        op.hermitian = true;
        Ok(op)
    }

    pub(crate) fn from_parts(entries: DMatrix<C64>, hermitian: bool, unitary: bool) -> Self {
        OperatorMatrix {
            entries,
            hermitian,
            unitary,
        }
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix {
            entries: DMatrix::identity(dim, dim),
            hermitian: true,
            unitary: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).camax()
    }

    /// `max |M†M − I|` restricted to indices in `interior`.
    pub fn unitarity_error(&self, interior: &[usize]) -> f64 {
        let prod = self.entries.adjoint() * &self.entries;
        let mut worst: f64 = 0.0;
        for &i in interior {
            for &j in interior {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
            unitary: self.unitary,
        }
    }

    pub fn matmul(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.dim() != rhs.dim() {
            return Err(Error::dimension(format!("matmul of {} and {}", self.dim(), rhs.dim())));
        }
        Ok(OperatorMatrix {
            entries: &self.entries * &rhs.entries,
            hermitian: false,
            unitary: self.unitary && rhs.unitary,
        })
    }

    pub fn scaled(&self, s: C64) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries * s,
            hermitian: self.hermitian && s.im == 0.0,
            unitary: self.unitary && (s.norm() - 1.0).abs() < 1e-15,
        }
    }

    pub fn plus(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.dim() != rhs.dim() {
            return Err(Error::dimension(format!("sum of {} and {}", self.dim(), rhs.dim())));
        }
        Ok(OperatorMatrix {
            entries: &self.entries + &rhs.entries,
            hermitian: self.hermitian && rhs.hermitian,
            unitary: false,
        })
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, exp: u32) -> OperatorMatrix {
        let mut result = DMatrix::identity(self.dim(), self.dim());
        let mut base = self.entries.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        OperatorMatrix {
            entries: result,
            hermitian: self.hermitian,
            unitary: self.unitary,
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if self.dim() != psi.dim() {
            return Err(Error::dimension(format!(
                "operator of dimension {} applied to state of dimension {}",
                self.dim(),
                psi.dim()
            )));
        }
        Ok(StateVector::from_raw(&self.entries * psi.amplitudes()))
    }

    /// Kronecker product `self ⊗ rhs` (self is the slow index).
    pub fn kron(&self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.kronecker(&rhs.entries),
            hermitian: self.hermitian && rhs.hermitian,
            unitary: self.unitary && rhs.unitary,
        }
    }

    /// `max |self − other|` over the given row/column indices.
    pub fn block_deviation(&self, other: &OperatorMatrix, indices: &[usize]) -> f64 {
        let mut worst: f64 = 0.0;
        for &i in indices {
            for &j in indices {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        worst
    }

    /// Deviation on `indices` after removing a global phase: the phase is
    /// read off the largest-magnitude entry of `self` within the block.
    pub fn phase_aligned_deviation(&self, other: &OperatorMatrix, indices: &[usize]) -> f64 {
        let mut best = (0, 0);
        let mut best_mag = -1.0;
        for &i in indices {
            for &j in indices {
                let mag = self.entries[(i, j)].norm();
                if mag > best_mag {
                    best_mag = mag;
                    best = (i, j);
                }
            }
        }
        let a = self.entries[best];
        let b = other.entries[best];
        let phase = if b.norm() > 0.0 && a.norm() > 0.0 {
            let r = a / b;
            r / r.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut worst: f64 = 0.0;
        for &i in indices {
            for &j in indices {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)] * phase).norm());
            }
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub struct LadderOps {
    pub lower: OperatorMatrix,
    pub raise: OperatorMatrix,
    pub number: OperatorMatrix,
}

pub fn ladder_ops(space: FockSpace) -> LadderOps {
    let n = space.n_trunc();
    let mut lower = DMatrix::zeros(n, n);
    for k in 1..n {
        lower[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    let raise = lower.adjoint();
    let number = DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(i as f64, 0.0) } else { C64::new(0.0, 0.0) });
    LadderOps {
        lower: OperatorMatrix::from_parts(lower, false, false),
        raise: OperatorMatrix::from_parts(raise, false, false),
        number: OperatorMatrix::from_parts(number, true, false),
    }
}

/// `|α⟩ = e^{−|α|²/2} Σ αⁿ/√(n!) |n⟩`, renormalized on the truncated space.
pub fn coherent_state(alpha: C64, space: FockSpace) -> Result<StateVector> {
    space.check_amplitude(alpha.norm())?;
    let n = space.n_trunc();
    let mut amps = DVector::zeros(n);
    amps[0] = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for k in 1..n {
        amps[k] = amps[k - 1] * alpha / (k as f64).sqrt();
    }
    StateVector::new(amps)
}

/// `D(α) = exp(α â† − α* â)` computed as the exponential of the truncated
/// generator, which keeps it exactly unitary on the truncated space.
pub fn displacement(alpha: C64, space: FockSpace) -> Result<OperatorMatrix> {
    space.check_amplitude(alpha.norm())?;
    let ops = ladder_ops(space);
    // G = α a† − α* a is anti-hermitian; K = iG is hermitian and D = exp(−iK).
    let gen = ops.raise.entries() * alpha - ops.lower.entries() * alpha.conj();
    let k = gen * C64::new(0.0, 1.0);
    let eig = HermitianEigen::new(&k);
    Ok(OperatorMatrix::from_parts(eig.exp_matrix(C64::new(0.0, -1.0)), false, true))
}

/// `exp(scale · M)`. Hermitian inputs are diagonalized; anything else goes
/// through Padé scaling and squaring.
pub fn matrix_exponential(m: &OperatorMatrix, scale: C64) -> Result<OperatorMatrix> {
    if m.dim() > MAX_EXP_DIM {
        return Err(Error::dimension(format!(
            "matrix exponential limited to dimension {MAX_EXP_DIM}, got {}",
            m.dim()
        )));
    }
    if m.is_hermitian() || m.hermiticity_error() < HERMITIAN_TOL {
        let eig = HermitianEigen::new(m.entries());
        let unitary = scale.re == 0.0;
        let hermitian = scale.im == 0.0;
        return Ok(OperatorMatrix::from_parts(eig.exp_matrix(scale), hermitian, unitary));
    }
    Ok(OperatorMatrix::from_parts((m.entries() * scale).exp(), false, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn space(n: usize) -> FockSpace {
        FockSpace::new(n).unwrap()
    }

    /// ⟨β|α⟩ from the series Σ (β*α)^k / k! with Gaussian prefactors.
    fn overlap_series(alpha: C64, beta: C64) -> C64 {
        let mut term = c(1.0, 0.0);
        let mut sum = c(1.0, 0.0);
        for k in 1..400 {
            term = term * beta.conj() * alpha / k as f64;
            sum += term;
        }
        sum * (-(alpha.norm_sqr() + beta.norm_sqr()) / 2.0).exp()
    }

    #[test]
    fn rejects_tiny_space() {
        assert!(FockSpace::new(1).is_err());
        assert!(FockSpace::new(2).is_ok());
    }

    #[test]
    fn ladder_two_level() {
        let ops = ladder_ops(space(2));
        let l = ops.lower.entries();
        assert_eq!(l[(0, 1)], c(1.0, 0.0));
        assert_eq!(l[(0, 0)], c(0.0, 0.0));
        assert_eq!(l[(1, 0)], c(0.0, 0.0));
        assert_eq!(l[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn commutator_is_identity_except_last_entry() {
        let n = 12;
        let ops = ladder_ops(space(n));
        let a = ops.lower.entries();
        let ad = ops.raise.entries();
        let comm = a * ad - ad * a;
        for i in 0..n {
            for j in 0..n {
                let expect = if i != j {
                    0.0
                } else if i < n - 1 {
                    1.0
                } else {
                    1.0 - n as f64
                };
                assert!((comm[(i, j)] - c(expect, 0.0)).norm() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn number_eigenbasis() {
        let ops = ladder_ops(space(8));
        let e5 = StateVector::basis(8, 5);
        let out = ops.number.apply(&e5).unwrap();
        assert_eq!(out, e5.scaled(c(5.0, 0.0)));
    }

    #[test]
    fn vacuum_and_mean_number() {
        let s = space(64);
        assert_eq!(coherent_state(c(0.0, 0.0), s).unwrap(), StateVector::basis(64, 0));
        let psi = coherent_state(c(2.4, 0.0), s).unwrap();
        let n = psi.expectation(&ladder_ops(s).number).unwrap();
        assert!((n.re - 5.76).abs() < 1e-9);
    }

    #[test]
    fn opposite_coherent_overlap() {
        let s = space(64);
        let a = coherent_state(c(2.4, 0.0), s).unwrap();
        let b = coherent_state(c(-2.4, 0.0), s).unwrap();
        let got = b.inner(&a).unwrap();
        let oracle = overlap_series(c(2.4, 0.0), c(-2.4, 0.0));
        assert!((got - oracle).norm() < 1e-12);
        assert!((got.norm() - (-11.52f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn truncation_error_reported() {
        let err = coherent_state(c(4.0, 0.0), space(40)).unwrap_err();
        assert!(matches!(err, Error::Truncation { required: 68, .. }));
        assert!(displacement(c(4.0, 0.0), space(40)).is_err());
    }

    #[test]
    fn displacement_identity_and_inverse() {
        let s = space(64);
        let d0 = displacement(c(0.0, 0.0), s).unwrap();
        assert!((d0.entries() - DMatrix::<C64>::identity(64, 64)).camax() < 1e-14);
        let prod = displacement(c(1.0, 0.0), s)
            .unwrap()
            .matmul(&displacement(c(-1.0, 0.0), s).unwrap())
            .unwrap();
        let interior: Vec<usize> = (0..s.guard_interior()).collect();
        assert!(prod.block_deviation(&OperatorMatrix::identity(64), &interior) < 1e-10);
        let unitary = displacement(c(1.3, -0.4), s).unwrap();
        assert!(unitary.unitarity_error(&interior) < 1e-10);
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        let s = space(64);
        let d = displacement(c(1.2, 0.0), s).unwrap();
        let out = d.apply(&StateVector::basis(64, 0)).unwrap();
        let coh = coherent_state(c(1.2, 0.0), s).unwrap();
        let f = coh.inner(&out).unwrap().norm_sqr();
        assert!(f > 1.0 - 1e-10);
    }

    #[test]
    fn pauli_exponential() {
        let sx = OperatorMatrix::hermitian(DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])).unwrap();
        let u = matrix_exponential(&sx, c(0.0, -std::f64::consts::FRAC_PI_2)).unwrap();
        let expect = sx.scaled(c(0.0, -1.0));
        assert!((u.entries() - expect.entries()).camax() < 1e-12);
        assert!(u.is_unitary());
        let zero = OperatorMatrix::new(DMatrix::zeros(3, 3)).unwrap();
        let id = matrix_exponential(&zero, c(1.0, 0.0)).unwrap();
        assert!((id.entries() - DMatrix::<C64>::identity(3, 3)).camax() == 0.0);
    }

    #[test]
    fn number_exponential_is_parity() {
        let s = space(16);
        let p = matrix_exponential(&ladder_ops(s).number, c(0.0, -std::f64::consts::PI)).unwrap();
        for k in 0..16 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((p.entries()[(k, k)] - c(sign, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn non_hermitian_exponential_uses_pade() {
        // nilpotent: exp(N) = I + N
        let n = OperatorMatrix::new(DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(2.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)])).unwrap();
        let e = matrix_exponential(&n, c(1.0, 0.0)).unwrap();
        assert!((e.entries()[(0, 1)] - c(2.0, 1.0)).norm() < 1e-12);
        assert!((e.entries()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(matrix_exponential(&OperatorMatrix::identity(4097), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn interior_block_shrinks_with_amplitude() {
        let s = space(64);
        assert!(s.interior_for(0.0) > s.interior_for(1.2));
        assert_eq!(s.guard_interior(), 57);
        assert_eq!(truncation_requirement(2.4), 45);
    }
}
