//! Reduced two-spin states, Wootters concurrence, and entanglement of
//! formation.

use ndarray::prelude::*;
use ndarray_linalg::{Eigh, SVD, UPLO};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{SimError, SimResult};
use crate::operator::SpinOperator;

/// Reduced states may have eigenvalues this far below zero before the input
/// is rejected as unphysical.
pub const NEG_EIGENVALUE_TOL: f64 = 1e-9;
/// Concurrences below this are reported as exactly zero.
pub const CONCURRENCE_ZERO_THRESHOLD: f64 = 1e-9;

/// Two-spin reduced density matrix in the basis |uu>, |ud>, |du>, |dd>,
/// first slot = spin m.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    /// 1-based pair, m < n.
    pub pair: (usize, usize),
    pub rho: Array2<C64>,
}

/// Concurrence and entanglement of formation for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceResult {
    /// Wootters concurrence in [0, 1].
    pub c: f64,
    /// Descending square roots of the eigenvalues of the spin-flip product.
    pub lambdas: [f64; 4],
    /// Entanglement of formation in [0, 1].
    pub e_f: f64,
}

/// Trace out every spin except m and n (1-based, m < n).
pub fn reduce_to_pair(rho: &SpinOperator, m: usize, n: usize) -> SimResult<ReducedState> {
    let n_spins = rho.n_spins();
    if n_spins < 2 {
        return Err(SimError::Argument("need at least 2 spins".into()));
    }
    if m == 0 || n == 0 || m >= n || n > n_spins {
        return Err(SimError::Argument(format!(
            "pair ({m},{n}) invalid for {n_spins} spins (need 1 <= m < n <= N)"
        )));
    }
    // Bit positions counted from the LSB; spin 1 is the MSB.
    let pos_m = n_spins - m;
    let pos_n = n_spins - n;
    let full = rho.matrix();
    let mut red = Array2::<C64>::zeros((4, 4));
    let env_count = 1usize << (n_spins - 2);
    for env in 0..env_count {
        // Spread the environment bits around the two pair positions.
        // pos_n < pos_m, so insert at the lower position first.
        let base = insert_zero_bit(insert_zero_bit(env, pos_n), pos_m);
        for a in 0..4usize {
            let ra = base | ((a >> 1) << pos_m) | ((a & 1) << pos_n);
            for b in 0..4usize {
                let cb = base | ((b >> 1) << pos_m) | ((b & 1) << pos_n);
                red[[a, b]] += full[[ra, cb]];
            }
        }
    }
    validate_reduced(&red, (m, n))?;
    Ok(ReducedState { pair: (m, n), rho: red })
}

fn insert_zero_bit(v: usize, pos: usize) -> usize {
    ((v >> pos) << (pos + 1)) | (v & ((1usize << pos) - 1))
}

fn validate_reduced(red: &Array2<C64>, pair: (usize, usize)) -> SimResult<()> {
    let mut herm = 0.0_f64;
    for i in 0..4 {
        for j in i..4 {
            herm = herm.max((red[[i, j]] - red[[j, i]].conj()).norm());
        }
    }
    if herm > 1e-10 {
        return Err(SimError::Contract(format!(
            "reduced state of pair {pair:?} not Hermitian: residual {herm:.3e}"
        )));
    }
    let tr: C64 = red.diag().sum();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(SimError::Contract(format!(
            "reduced state of pair {pair:?} has trace {tr}"
        )));
    }
    Ok(())
}

/// Smallest eigenvalue of the reduced state; used by the per-run invariant
/// ledger. Slightly negative values down to -NEG_EIGENVALUE_TOL are normal
/// round-off.
pub fn min_eigenvalue(rs: &ReducedState) -> SimResult<f64> {
    let (vals, _) = rs.rho.eigh(UPLO::Lower)?;
    Ok(vals.iter().copied().fold(f64::INFINITY, f64::min))
}

fn sigma_yy() -> Array2<C64> {
    // sigma_y (x) sigma_y = antidiag(-1, 1, 1, -1).
    let mut m = Array2::<C64>::zeros((4, 4));
    m[[0, 3]] = C64::new(-1.0, 0.0);
    m[[1, 2]] = C64::new(1.0, 0.0);
    m[[2, 1]] = C64::new(1.0, 0.0);
    m[[3, 0]] = C64::new(-1.0, 0.0);
    m
}

/// Wootters concurrence of a two-spin state: with
/// R = rho (sy (x) sy) rho* (sy (x) sy), the lambda_k are the descending
/// square roots of its eigenvalues and C = max(0, l1 - l2 - l3 - l4).
///
/// The lambdas are obtained as the singular values of
/// sqrt(rho~) sqrt(rho) = Y sqrt(rho)* Y sqrt(rho), which equal the
/// eigenvalue square roots of R but come out with absolute accuracy on the
/// machine-epsilon scale even when two lambdas nearly coincide (taking
/// sqrt of a near-zero eigenvalue of R would lose half the digits there).
pub fn concurrence(rs: &ReducedState) -> SimResult<ConcurrenceResult> {
    let (evals, evecs) = rs.rho.eigh(UPLO::Lower)?;
    for &w in &evals {
        if w < -NEG_EIGENVALUE_TOL {
            return Err(SimError::Contract(format!(
                "reduced state of pair {:?} has eigenvalue {w:.3e}",
                rs.pair
            )));
        }
    }
    // sqrt(rho) = V diag(sqrt(w)) V^dagger, negatives clamped as round-off.
    let mut scaled = evecs.clone();
    for (mut col, &w) in scaled.columns_mut().into_iter().zip(evals.iter()) {
        let s = w.max(0.0).sqrt();
        col.mapv_inplace(|z| z * s);
    }
    let sqrt_rho = scaled.dot(&crate::operator::adjoint(&evecs));
    let yy = sigma_yy();
    let a = yy
        .dot(&sqrt_rho.mapv(|z| z.conj()))
        .dot(&yy)
        .dot(&sqrt_rho);
    let (_, sigma, _) = a.svd(false, false)?;
    let mut lambdas = [0.0f64; 4];
    for (slot, &s) in lambdas.iter_mut().zip(sigma.iter()) {
        *slot = s;
    }
    // Singular values already arrive descending and non-negative.
    let mut c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    if c < CONCURRENCE_ZERO_THRESHOLD {
        c = 0.0;
    }
    c = c.min(1.0);
    let e_f = entanglement_of_formation(c)?;
    Ok(ConcurrenceResult { c, lambdas, e_f })
}

/// Entanglement of formation as a function of concurrence:
/// E_F = h((1 + sqrt(1 - C^2)) / 2) with h the binary entropy in bits.
pub fn entanglement_of_formation(c: f64) -> SimResult<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&c) {
        return Err(SimError::Argument(format!(
            "concurrence must lie in [0, 1], got {c}"
        )));
    }
    let c = c.clamp(0.0, 1.0);
    if c == 0.0 {
        return Ok(0.0);
    }
    if c == 1.0 {
        return Ok(1.0);
    }
    let x = 0.5 * (1.0 + (1.0 - c * c).sqrt());
    Ok(binary_entropy(x))
}

fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}
