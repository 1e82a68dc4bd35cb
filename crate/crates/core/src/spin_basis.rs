//! Computational basis and single-site spin operators.
//!
//! Basis convention: the bit for spin 1 is the most significant bit of the
//! index; bit value 0 is spin up (m = +1/2), 1 is spin down (m = -1/2).
//! Under this ordering the all-up state is index 0.

use ndarray::prelude::*;
use ndarray::linalg::kron;
use num_complex::Complex64 as C64;

use crate::error::{SimError, SimResult};
use crate::operator::SpinOperator;

/// Raising operator I^+ for a single spin-1/2.
pub fn raising() -> Array2<C64> {
    array![
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(0.0, 0.0)]
    ]
}

/// Lowering operator I^- for a single spin-1/2.
pub fn lowering() -> Array2<C64> {
    array![
        [C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    ]
}

/// z-component I_z for a single spin-1/2, diag(1/2, -1/2).
pub fn spin_z() -> Array2<C64> {
    array![
        [C64::new(0.5, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(-0.5, 0.0)]
    ]
}

/// The (I^+, I^-, I_z) triple for a single spin-1/2.
pub fn single_site_ops() -> (Array2<C64>, Array2<C64>, Array2<C64>) {
    (raising(), lowering(), spin_z())
}

/// Embed a 2x2 single-site operator at `site` (1-based) in an N-spin chain:
/// Id (x) ... (x) local_op (x) ... (x) Id, spin 1 leftmost.
pub fn embed(site: usize, local_op: &Array2<C64>, n_spins: usize) -> SimResult<SpinOperator> {
    if n_spins == 0 {
        return Err(SimError::Argument("n_spins must be >= 1".into()));
    }
    if site == 0 || site > n_spins {
        return Err(SimError::Argument(format!(
            "site {site} out of range 1..={n_spins}"
        )));
    }
    if local_op.nrows() != 2 || local_op.ncols() != 2 {
        return Err(SimError::Argument("local operator must be 2x2".into()));
    }
    let left = Array2::<C64>::eye(1 << (site - 1));
    let right = Array2::<C64>::eye(1 << (n_spins - site));
    let mat = kron(&kron(&left, local_op), &right);
    SpinOperator::new(n_spins, mat)
}

/// Total I_z = sum_j I_z^(j); diagonal with entry magnetization(k) at index k.
pub fn total_iz(n_spins: usize) -> SpinOperator {
    let dim = 1usize << n_spins;
    let diag: Vec<f64> = (0..dim).map(|k| magnetization(k, n_spins)).collect();
    SpinOperator::from_real_diagonal(n_spins, &diag).expect("diag length matches dim")
}

/// Magnetization of basis state `index`: (N - 2*popcount)/2.
pub fn magnetization(index: usize, n_spins: usize) -> f64 {
    debug_assert!(index < (1 << n_spins));
    (n_spins as f64 - 2.0 * index.count_ones() as f64) / 2.0
}

/// Twice the magnetization as an exact integer, for order arithmetic.
pub fn two_m(index: usize, n_spins: usize) -> i64 {
    n_spins as i64 - 2 * index.count_ones() as i64
}

/// MQ order connecting row `r` to column `c`: magnetization(r) - magnetization(c).
/// Always an integer because both states share the same chain length.
pub fn order_of(r: usize, c: usize, n_spins: usize) -> i64 {
    (two_m(r, n_spins) - two_m(c, n_spins)) / 2
}
