//! Dense operator on the 2^N-dimensional product space of an N-spin chain.

use ndarray::prelude::*;
use num_complex::Complex64 as C64;

use crate::error::{SimError, SimResult};

/// Dense complex operator (Hamiltonian, density matrix, or unitary) on an
/// N-spin Hilbert space. `dim == 2^n_spins` always holds.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperator {
    n_spins: usize,
    mat: Array2<C64>,
}

impl SpinOperator {
    /// Wrap a dense matrix, checking the dimension and finiteness invariants.
    pub fn new(n_spins: usize, mat: Array2<C64>) -> SimResult<Self> {
        let dim = 1usize << n_spins;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(SimError::DimensionMismatch(format!(
                "expected {dim}x{dim} for {n_spins} spins, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SimError::Contract(
                "operator entries must be finite".into(),
            ));
        }
        Ok(Self { n_spins, mat })
    }

    pub fn zeros(n_spins: usize) -> Self {
        let dim = 1usize << n_spins;
        Self { n_spins, mat: Array2::zeros((dim, dim)) }
    }

    pub fn identity(n_spins: usize) -> Self {
        let dim = 1usize << n_spins;
        Self { n_spins, mat: Array2::eye(dim) }
    }

    /// Diagonal operator from real diagonal entries.
    pub fn from_real_diagonal(n_spins: usize, diag: &[f64]) -> SimResult<Self> {
        let dim = 1usize << n_spins;
        if diag.len() != dim {
            return Err(SimError::DimensionMismatch(format!(
                "diagonal length {} != dim {dim}",
                diag.len()
            )));
        }
        let mut mat = Array2::zeros((dim, dim));
        for (k, &d) in diag.iter().enumerate() {
            mat[[k, k]] = C64::new(d, 0.0);
        }
        Self::new(n_spins, mat)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.mat
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { n_spins: self.n_spins, mat: adjoint(&self.mat) }
    }

    /// Matrix product `self * other`.
    pub fn dot(&self, other: &Self) -> SimResult<Self> {
        if self.dim() != other.dim() {
            return Err(SimError::DimensionMismatch(format!(
                "{} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self { n_spins: self.n_spins, mat: self.mat.dot(&other.mat) })
    }

    pub fn scale(&self, a: C64) -> Self {
        Self { n_spins: self.n_spins, mat: self.mat.mapv(|z| z * a) }
    }

    pub fn add(&self, other: &Self) -> SimResult<Self> {
        if self.dim() != other.dim() {
            return Err(SimError::DimensionMismatch(format!(
                "{} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self { n_spins: self.n_spins, mat: &self.mat + &other.mat })
    }

    pub fn trace(&self) -> C64 {
        self.mat.diag().sum()
    }

    /// Re Tr[self * other], computed without forming the product.
    pub fn trace_product_re(&self, other: &Self) -> SimResult<f64> {
        if self.dim() != other.dim() {
            return Err(SimError::DimensionMismatch(format!(
                "{} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        let mut acc = 0.0;
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                let z = self.mat[[a, b]] * other.mat[[b, a]];
                acc += z.re;
            }
        }
        Ok(acc)
    }

    /// Largest |self - other| entry.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.mat, &other.mat)
    }

    /// Largest deviation from Hermiticity, max |A - A^dagger|.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let d = (self.mat[[i, j]] - self.mat[[j, i]].conj()).norm();
                r = r.max(d);
            }
        }
        r
    }
}

/// Conjugate transpose of a raw matrix.
pub fn adjoint(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

/// Largest |a - b| entry of two raw matrices.
pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entry magnitude.
pub fn max_abs(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
