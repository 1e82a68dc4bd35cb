//! Multiple-quantum order decomposition, intensities J_n, and the detected
//! signal.
//!
//! The order of a matrix element (r, c) is the difference of the Zeeman
//! magnetizations of the bra and ket states. Grouping the elements of an
//! evolved operator by that difference realizes the MQ-order decomposition;
//! the intensities are J_n = Re Tr[rho(tau) rho_zn(tau)].

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{SimError, SimResult};
use crate::operator::SpinOperator;
use crate::spin_basis::order_of;

/// Allowed imaginary residue on a J_n trace.
pub const IMAG_TRACE_TOL: f64 = 1e-10;

/// Spectral intensities J_n for every order n in [-N, N].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceSpectrum {
    pub n_spins: usize,
    /// J_n keyed by order; every n in [-N, N] is present (odd orders are 0).
    pub orders: BTreeMap<i64, f64>,
}

impl CoherenceSpectrum {
    pub fn intensity(&self, n: i64) -> f64 {
        self.orders.get(&n).copied().unwrap_or(0.0)
    }

    /// Sum over all orders; conserved under MQ evolution.
    pub fn total(&self) -> f64 {
        self.orders.values().sum()
    }

    /// max |J_n - J_{-n}|.
    pub fn symmetry_residual(&self) -> f64 {
        (1..=self.n_spins as i64)
            .map(|n| (self.intensity(n) - self.intensity(-n)).abs())
            .fold(0.0, f64::max)
    }

    /// max |J_n| over odd n.
    pub fn max_odd_order(&self) -> f64 {
        self.orders
            .iter()
            .filter(|(n, _)| *n % 2 != 0)
            .map(|(_, j)| j.abs())
            .fold(0.0, f64::max)
    }
}

/// RF offset and evolution time entering the detected signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalParams {
    /// RF offset, rad/s; must exceed the local dipolar field frequency.
    pub delta_omega: f64,
    /// Evolution-period time, s.
    pub t: f64,
}

/// Split an operator into its MQ-order components. Component n keeps exactly
/// the elements (r, c) with order_of(r, c) == n; the partition is an exact
/// masking, summing the components rebuilds the input bit for bit.
pub fn decompose_orders(a: &SpinOperator) -> BTreeMap<i64, SpinOperator> {
    let n = a.n_spins() as i64;
    let dim = a.dim();
    let mut parts: BTreeMap<i64, ndarray::Array2<C64>> = (-n..=n)
        .map(|k| (k, ndarray::Array2::zeros((dim, dim))))
        .collect();
    let src = a.matrix();
    for r in 0..dim {
        for c in 0..dim {
            let ord = order_of(r, c, a.n_spins());
            // parts holds every order in [-N, N].
            parts.get_mut(&ord).unwrap()[[r, c]] = src[[r, c]];
        }
    }
    parts
        .into_iter()
        .map(|(k, m)| {
            (k, SpinOperator::new(a.n_spins(), m).expect("dims fixed by construction"))
        })
        .collect()
}

/// J_n = Re Tr[rho(tau) rho_zn(tau)] for every order, computed as a masked
/// trace without materializing the components. The imaginary residue of each
/// trace is checked against `IMAG_TRACE_TOL`.
pub fn coherence_intensities(
    rho_tau: &SpinOperator,
    rho_z_tau: &SpinOperator,
) -> SimResult<CoherenceSpectrum> {
    if rho_tau.dim() != rho_z_tau.dim() {
        return Err(SimError::DimensionMismatch(format!(
            "{} vs {}",
            rho_tau.dim(),
            rho_z_tau.dim()
        )));
    }
    let n_spins = rho_tau.n_spins();
    let n = n_spins as i64;
    let dim = rho_tau.dim();
    let rho = rho_tau.matrix();
    let rho_z = rho_z_tau.matrix();
    let mut sums: BTreeMap<i64, C64> = (-n..=n).map(|k| (k, C64::new(0.0, 0.0))).collect();
    for a in 0..dim {
        for b in 0..dim {
            // Tr[rho rho_zn] = sum_{a,b} rho[a,b] rho_zn[b,a]; the element
            // (b, a) of rho_z belongs to order n = m_b - m_a.
            let ord = order_of(b, a, n_spins);
            *sums.get_mut(&ord).unwrap() += rho[[a, b]] * rho_z[[b, a]];
        }
    }
    let mut orders = BTreeMap::new();
    for (k, z) in sums {
        if z.im.abs() > IMAG_TRACE_TOL {
            return Err(SimError::Contract(format!(
                "J_{k} has imaginary residue {:.3e} > {IMAG_TRACE_TOL:.0e}",
                z.im
            )));
        }
        orders.insert(k, z.re);
    }
    Ok(CoherenceSpectrum { n_spins, orders })
}

/// Detected signal S(tau, t) = sum_n exp(-i n delta_omega t) J_n(tau).
pub fn signal(spec: &CoherenceSpectrum, p: &SignalParams) -> C64 {
    spec.orders
        .iter()
        .map(|(&n, &j)| C64::from_polar(1.0, -(n as f64) * p.delta_omega * p.t) * j)
        .sum()
}
