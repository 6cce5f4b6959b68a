#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strobocat::fock::{OperatorMatrix, StateVector};

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn complex_in_disc(r: f64) -> impl Strategy<Value = C64> {
    (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(m, phi)| C64::from_polar(m, phi))
}

/// Normalized state with Gaussian amplitudes on the first `support` levels
/// of each `block` of `dim`.
pub fn random_state(seed: u64, dim: usize, block: usize, support: usize) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DVector::zeros(dim);
    for start in (0..dim).step_by(block) {
        for k in start..(start + support.min(block)) {
            v[k] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    StateVector::new(v).unwrap()
}

pub fn random_hermitian(seed: u64, dim: usize) -> OperatorMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    OperatorMatrix::hermitian((&a + a.adjoint()) * c(0.5)).unwrap()
}

pub fn interior_indices(n_trunc: usize, k: usize) -> Vec<usize> {
    (0..k).chain(n_trunc..n_trunc + k).collect()
}
