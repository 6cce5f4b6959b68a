//! Dense and sparse complex linear-algebra helpers shared by the propagators.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

/// Eigendecomposition of a Hermitian matrix, `M = V diag(λ) V†`.
///
/// The sparsity graph of `M` is split into connected components first and
/// each component is diagonalized on its own. For the spin-boson Hamiltonian
/// without a transverse pulse this separates the two σ_z sectors, which
/// halves the problem size and keeps the sectors exactly decoupled.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn new(m: &DMatrix<C64>) -> Self {
        let n = m.nrows();
        let mut values = DVector::zeros(n);
        let mut vectors = DMatrix::zeros(n, n);
        let mut offset = 0;
        for comp in components(m) {
            let k = comp.len();
            let sub = DMatrix::from_fn(k, k, |i, j| m[(comp[i], comp[j])]);
            // symmetrize away rounding noise before the solver sees it
            let sub = (&sub + sub.adjoint()) * C64::new(0.5, 0.0);
            let eig = SymmetricEigen::new(sub);
            for c in 0..k {
                values[offset + c] = eig.eigenvalues[c];
                for r in 0..k {
                    vectors[(comp[r], offset + c)] = eig.eigenvectors[(r, c)];
                }
            }
            offset += k;
        }
        HermitianEigen { values, vectors }
    }

    /// `exp(scale · M)` as a dense matrix.
    pub fn exp_matrix(&self, scale: C64) -> DMatrix<C64> {
        let phases = self.values.map(|l| (scale * l).exp());
        let mut scaled = self.vectors.clone();
        for (c, p) in phases.iter().enumerate() {
            scaled.column_mut(c).scale_mut_c(*p);
        }
        scaled * self.vectors.adjoint()
    }

    /// `exp(scale · M) v` without forming the matrix exponential.
    pub fn exp_apply(&self, scale: C64, v: &DVector<C64>) -> DVector<C64> {
        let mut coeffs = self.vectors.ad_mul(v);
        for (c, l) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= (scale * *l).exp();
        }
        &self.vectors * coeffs
    }
}

trait ScaleComplex {
    fn scale_mut_c(&mut self, s: C64);
}

impl<S> ScaleComplex for nalgebra::Matrix<C64, nalgebra::Dyn, nalgebra::U1, S>
where
    S: nalgebra::StorageMut<C64, nalgebra::Dyn, nalgebra::U1>,
{
    fn scale_mut_c(&mut self, s: C64) {
        for x in self.iter_mut() {
            *x *= s;
        }
    }
}

/// Connected components of the undirected graph with an edge wherever
/// `m[i, j] != 0`, each sorted ascending, ordered by smallest member.
fn components(m: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in 0..n {
            if i != j && m[(i, j)] != C64::new(0.0, 0.0) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

/// Compressed-row sparse matrix extracted from a dense operator. Exact zeros
/// are dropped, so products agree with the dense matrix bit for bit up to
/// summation order.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseMatrix {
    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let n = m.nrows();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..n {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v != C64::new(0.0, 0.0) {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseMatrix {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `y = self · x`
    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    /// `y += s · self · x`
    pub fn apply_add(&self, s: C64, x: &[C64], y: &mut [C64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi += s * acc;
        }
    }

    /// Maximum absolute row sum, an upper bound on the spectral norm of a
    /// Hermitian matrix.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .map(|k| self.vals[k].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// Applies `exp(scale · A) v` for an operator given by its action, using a
/// Taylor series summed until the terms fall below machine precision.
///
/// `norm_bound` must bound `‖A‖`; the step is split so that each piece has
/// `|scale|·‖A‖ ≤ 0.5`, which keeps the series short and the partial sums
/// well conditioned.
pub fn expm_apply_taylor<F>(apply: F, norm_bound: f64, scale: C64, v: &mut [C64])
where
    F: Fn(&[C64], &mut [C64]),
{
    let reach = scale.norm() * norm_bound;
    let pieces = (reach / 0.5).ceil().max(1.0) as usize;
    let s = scale / pieces as f64;
    let n = v.len();
    let mut term = vec![C64::new(0.0, 0.0); n];
    let mut next = vec![C64::new(0.0, 0.0); n];
    for _ in 0..pieces {
        term.copy_from_slice(v);
        for k in 1..=60 {
            apply(&term, &mut next);
            let f = s / k as f64;
            let mut tnorm = 0.0;
            for (t, x) in term.iter_mut().zip(next.iter()) {
                *t = f * x;
                tnorm += t.norm_sqr();
            }
            let mut vnorm = 0.0;
            for (vi, t) in v.iter_mut().zip(term.iter()) {
                *vi += t;
                vnorm += vi.norm_sqr();
            }
            if tnorm <= 1e-34 * vnorm.max(1e-300) {
                break;
            }
        }
    }
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn diff_norm(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &DMatrix<C64>) -> f64 {
    HermitianEigen::new(m).values.iter().map(|l| l.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigen_reconstructs_block_matrix() {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 2)] = c(0.3, 0.4);
        m[(2, 0)] = c(0.3, -0.4);
        m[(2, 2)] = c(-1.0, 0.0);
        m[(1, 1)] = c(2.0, 0.0);
        m[(3, 3)] = c(0.5, 0.0);
        assert_eq!(components(&m), vec![vec![0, 2], vec![1], vec![3]]);
        let eig = HermitianEigen::new(&m);
        let mut d = eig.vectors.clone();
        for (col, l) in eig.values.iter().enumerate() {
            d.column_mut(col).scale_mut_c(c(*l, 0.0));
        }
        let back = d * eig.vectors.adjoint();
        assert!((back - &m).camax() < 1e-14);
    }

    #[test]
    fn taylor_matches_eigen_exponential() {
        let a = DMatrix::from_fn(6, 6, |i, j| c(0.3 * i as f64 - 0.1 * j as f64, 0.05 * (i * j) as f64));
        let m = &a + a.adjoint();
        let sp = SparseMatrix::from_dense(&m);
        let v0: Vec<C64> = (0..6).map(|k| c(1.0 / (k + 1) as f64, 0.1 * k as f64)).collect();
        let mut v = v0.clone();
        let scale = c(0.0, -1.7);
        expm_apply_taylor(|x, y| sp.apply_into(x, y), sp.norm_inf(), scale, &mut v);
        let eig = HermitianEigen::new(&m);
        let expect = eig.exp_apply(scale, &DVector::from_vec(v0));
        assert!(diff_norm(&v, expect.as_slice()) < 1e-12);
    }
}
