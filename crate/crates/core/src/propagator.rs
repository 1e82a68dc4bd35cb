//! Exact unitary evolution via one Hermitian eigendecomposition.
//!
//! H_MQ is diagonalized once per (chain, model); U(tau) = exp(-i tau H) is
//! then assembled from the spectrum for any tau. The sweep hot path keeps
//! operators rotated into the eigenbasis so each tau point costs two
//! matrix products per evolved operator.

use ndarray::prelude::*;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{SimError, SimResult};
use crate::operator::{adjoint, SpinOperator};

/// Hermiticity gate on eigendecomposition inputs.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Allowed residual for V V^dagger = I and spectral reconstruction.
pub const DECOMPOSITION_TOL: f64 = 1e-10;

/// Spectral decomposition of a Hermitian operator: H = V diag(lambda) V^dagger.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    n_spins: usize,
    /// Ascending eigenvalues, 1/s.
    eigenvalues: Array1<f64>,
    /// Eigenvectors as columns.
    eigenvectors: Array2<C64>,
    /// Cached V^dagger.
    adjoint: Array2<C64>,
}

impl EigenSystem {
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Array2<C64> {
        &self.eigenvectors
    }

    /// max |V V^dagger - I|.
    pub fn unitarity_residual(&self) -> f64 {
        let vvh = self.eigenvectors.dot(&self.adjoint);
        let mut r = 0.0_f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                r = r.max((vvh[[i, j]] - expect).norm());
            }
        }
        r
    }

    /// max |V diag(lambda) V^dagger - H|.
    pub fn reconstruction_residual(&self, h: &SpinOperator) -> f64 {
        let mut scaled = self.eigenvectors.clone();
        for (mut col, &l) in scaled.columns_mut().into_iter().zip(self.eigenvalues.iter()) {
            col.mapv_inplace(|z| z * l);
        }
        let rebuilt = scaled.dot(&self.adjoint);
        crate::operator::max_abs_diff(&rebuilt, h.matrix())
    }

    /// U(tau) = V diag(exp(-i lambda tau)) V^dagger.
    pub fn propagator_at(&self, tau: f64) -> SimResult<SpinOperator> {
        if !tau.is_finite() {
            return Err(SimError::Argument(format!("tau must be finite, got {tau}")));
        }
        let mut scaled = self.eigenvectors.clone();
        for (mut col, &l) in scaled.columns_mut().into_iter().zip(self.eigenvalues.iter()) {
            let phase = C64::from_polar(1.0, -l * tau);
            col.mapv_inplace(|z| z * phase);
        }
        SpinOperator::new(self.n_spins, scaled.dot(&self.adjoint))
    }

    /// Rotate an operator into the eigenbasis: V^dagger A V.
    pub fn to_eigenbasis(&self, a: &SpinOperator) -> SimResult<Array2<C64>> {
        if a.dim() != self.dim() {
            return Err(SimError::DimensionMismatch(format!(
                "{} vs {}",
                a.dim(),
                self.dim()
            )));
        }
        Ok(self.adjoint.dot(a.matrix()).dot(&self.eigenvectors))
    }

    /// Evolve an operator already rotated into the eigenbasis:
    /// U A U^dagger = V (Lambda (V^dagger A V) Lambda^dagger) V^dagger,
    /// where the inner conjugation is an entry-wise phase.
    pub fn evolve_in_eigenbasis(&self, a_eig: &Array2<C64>, tau: f64) -> SimResult<SpinOperator> {
        if !tau.is_finite() {
            return Err(SimError::Argument(format!("tau must be finite, got {tau}")));
        }
        let dim = self.dim();
        if a_eig.nrows() != dim || a_eig.ncols() != dim {
            return Err(SimError::DimensionMismatch(format!(
                "{}x{} vs dim {dim}",
                a_eig.nrows(),
                a_eig.ncols()
            )));
        }
        let phases: Vec<C64> = self
            .eigenvalues
            .iter()
            .map(|&l| C64::from_polar(1.0, -l * tau))
            .collect();
        let mut inner = a_eig.clone();
        for i in 0..dim {
            for j in 0..dim {
                inner[[i, j]] *= phases[i] * phases[j].conj();
            }
        }
        SpinOperator::new(self.n_spins, self.eigenvectors.dot(&inner).dot(&self.adjoint))
    }
}

/// Eigendecompose a Hermitian operator; eigenvalues come out ascending.
pub fn eigendecompose(h: &SpinOperator) -> SimResult<EigenSystem> {
    let res = h.hermiticity_residual();
    if res > HERMITICITY_TOL {
        return Err(SimError::Contract(format!(
            "input not Hermitian: residual {res:.3e} > {HERMITICITY_TOL:.0e}"
        )));
    }
    let (eigenvalues, eigenvectors) = h.matrix().eigh(UPLO::Lower)?;
    debug_assert!(eigenvalues.windows(2).into_iter().all(|w| w[0] <= w[1]));
    let adj = adjoint(&eigenvectors);
    Ok(EigenSystem {
        n_spins: h.n_spins(),
        eigenvalues,
        eigenvectors,
        adjoint: adj,
    })
}

/// rho -> U rho U^dagger.
pub fn evolve(rho: &SpinOperator, u: &SpinOperator) -> SimResult<SpinOperator> {
    if rho.dim() != u.dim() {
        return Err(SimError::DimensionMismatch(format!(
            "{} vs {}",
            rho.dim(),
            u.dim()
        )));
    }
    let m = u.matrix().dot(rho.matrix()).dot(&adjoint(u.matrix()));
    SpinOperator::new(rho.n_spins(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::{build_hmq, coupling_matrix, CouplingModel};
    use crate::spin_basis::total_iz;
    use crate::thermal::{equilibrium_state, ThermalConfig};

    /// Series-expansion oracle for exp(-i tau H), independent of the
    /// spectral route. Scaling-and-squaring with a plain Taylor series.
    fn expm_oracle(h: &Array2<C64>, tau: f64) -> Array2<C64> {
        let dim = h.nrows();
        let a = h.mapv(|z| z * C64::new(0.0, -tau));
        let norm: f64 = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let a = a.mapv(|z| z / 2f64.powi(s as i32));
        let mut result = Array2::<C64>::eye(dim);
        let mut term = Array2::<C64>::eye(dim);
        for k in 1..=20 {
            term = term.dot(&a) / C64::new(k as f64, 0.0);
            result = result + &term;
        }
        for _ in 0..s {
            result = result.dot(&result);
        }
        result
    }

    fn hmq_n2() -> SpinOperator {
        build_hmq(&coupling_matrix(2, &CouplingModel::nearest_neighbor()).unwrap())
    }

    #[test]
    fn zero_hamiltonian() {
        let es = eigendecompose(&SpinOperator::zeros(3)).unwrap();
        assert!(es.eigenvalues().iter().all(|&l| l == 0.0));
        let u = es.propagator_at(1.7).unwrap();
        assert!(u.max_abs_diff(&SpinOperator::identity(3)) < 1e-12);
    }

    #[test]
    fn n2_spectrum() {
        let es = eigendecompose(&hmq_n2()).unwrap();
        let expect = [-0.5, 0.0, 0.0, 0.5];
        for (got, want) in es.eigenvalues().iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Array2::<C64>::zeros((2, 2));
        m[[0, 1]] = C64::new(1.0, 0.0);
        let op = SpinOperator::new(1, m).unwrap();
        assert!(matches!(eigendecompose(&op), Err(SimError::Contract(_))));
    }

    #[test]
    fn spectrum_symmetric_about_zero() {
        // exp(i pi I_z) conjugation maps H_MQ to -H_MQ, so the spectrum is
        // symmetric; checked numerically for both models.
        for n in 2..=6 {
            for model in [CouplingModel::nearest_neighbor(), CouplingModel::all_pairs()] {
                let h = build_hmq(&coupling_matrix(n, &model).unwrap());
                let es = eigendecompose(&h).unwrap();
                let l = es.eigenvalues();
                let dim = l.len();
                for i in 0..dim {
                    assert!(
                        (l[i] + l[dim - 1 - i]).abs() < 1e-10,
                        "N={n}: {} vs {}",
                        l[i],
                        l[dim - 1 - i]
                    );
                }
            }
        }
    }

    #[test]
    fn decomposition_residuals() {
        for n in 2..=6 {
            let h = build_hmq(&coupling_matrix(n, &CouplingModel::all_pairs()).unwrap());
            let es = eigendecompose(&h).unwrap();
            assert!(es.unitarity_residual() < DECOMPOSITION_TOL);
            assert!(es.reconstruction_residual(&h) < DECOMPOSITION_TOL);
        }
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let es = eigendecompose(&hmq_n2()).unwrap();
        let u = es.propagator_at(0.0).unwrap();
        assert!(u.max_abs_diff(&SpinOperator::identity(2)) < 1e-12);
    }

    #[test]
    fn n2_block_closed_form() {
        // On {|uu>, |dd>} the Hamiltonian is -(1/2) sigma_x, so
        // U = cos(tau/2) I + i sin(tau/2) sigma_x on that block; the middle
        // states are untouched.
        let es = eigendecompose(&hmq_n2()).unwrap();
        for tau in [0.3, 1.0, 2.5, 7.9] {
            let u = es.propagator_at(tau).unwrap();
            let m = u.matrix();
            let (c, s) = ((tau / 2.0).cos(), (tau / 2.0).sin());
            assert!((m[[0, 0]] - C64::new(c, 0.0)).norm() < 1e-12);
            assert!((m[[3, 3]] - C64::new(c, 0.0)).norm() < 1e-12);
            assert!((m[[0, 3]] - C64::new(0.0, s)).norm() < 1e-12);
            assert!((m[[3, 0]] - C64::new(0.0, s)).norm() < 1e-12);
            assert!((m[[1, 1]] - C64::new(1.0, 0.0)).norm() < 1e-12);
            assert!((m[[2, 2]] - C64::new(1.0, 0.0)).norm() < 1e-12);
            assert!(m[[1, 2]].norm() < 1e-12 && m[[0, 1]].norm() < 1e-12);
            // Cross-check the whole matrix against the series oracle.
            let oracle = expm_oracle(hmq_n2().matrix(), tau);
            assert!(crate::operator::max_abs_diff(m, &oracle) < 1e-12);
        }
    }

    #[test]
    fn propagator_matches_series_oracle_n3() {
        let h = build_hmq(&coupling_matrix(3, &CouplingModel::all_pairs()).unwrap());
        let es = eigendecompose(&h).unwrap();
        for tau in [0.5, 2.0, 6.0] {
            let u = es.propagator_at(tau).unwrap();
            let oracle = expm_oracle(h.matrix(), tau);
            assert!(crate::operator::max_abs_diff(u.matrix(), &oracle) < 1e-11);
        }
    }

    #[test]
    fn group_property() {
        let es = eigendecompose(&hmq_n2()).unwrap();
        let (t1, t2) = (1.3, 2.9);
        let u1 = es.propagator_at(t1).unwrap();
        let u2 = es.propagator_at(t2).unwrap();
        let u12 = es.propagator_at(t1 + t2).unwrap();
        assert!(u1.dot(&u2).unwrap().max_abs_diff(&u12) < 1e-9);
    }

    #[test]
    fn evolve_identities() {
        let rho = equilibrium_state(2, &ThermalConfig::default()).unwrap();
        let id = SpinOperator::identity(2);
        assert!(evolve(&rho, &id).unwrap().max_abs_diff(&rho) < 1e-15);

        let mixed = SpinOperator::identity(2).scale(C64::new(0.25, 0.0));
        let es = eigendecompose(&hmq_n2()).unwrap();
        let u = es.propagator_at(3.1).unwrap();
        assert!(evolve(&mixed, &u).unwrap().max_abs_diff(&mixed) < 1e-12);
    }

    #[test]
    fn evolve_rejects_dim_mismatch() {
        let rho = SpinOperator::identity(2);
        let u = SpinOperator::identity(3);
        assert!(matches!(
            evolve(&rho, &u),
            Err(SimError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn n2_population_oscillation() {
        // <uu|rho(tau)|uu> = p0 cos^2(tau/2) + p3 sin^2(tau/2).
        let rho = equilibrium_state(2, &ThermalConfig::default()).unwrap();
        let p0 = rho.matrix()[[0, 0]].re;
        let p3 = rho.matrix()[[3, 3]].re;
        let es = eigendecompose(&hmq_n2()).unwrap();
        for tau in [0.0, 0.7, 1.9, 4.4] {
            let u = es.propagator_at(tau).unwrap();
            let rt = evolve(&rho, &u).unwrap();
            let (c2, s2) = ((tau / 2.0).cos().powi(2), (tau / 2.0).sin().powi(2));
            assert!((rt.matrix()[[0, 0]].re - (p0 * c2 + p3 * s2)).abs() < 1e-12);
        }
    }

    #[test]
    fn evolution_conserves_spectrum_purity_energy() {
        let h = build_hmq(&coupling_matrix(4, &CouplingModel::all_pairs()).unwrap());
        let es = eigendecompose(&h).unwrap();
        let rho = equilibrium_state(4, &ThermalConfig::default()).unwrap();
        let rho_spec = rho.matrix().eigh(UPLO::Lower).unwrap().0;
        let purity0 = rho.trace_product_re(&rho).unwrap();
        let energy0 = rho.trace_product_re(&h).unwrap();
        for tau in [0.5, 3.0, 11.0] {
            let u = es.propagator_at(tau).unwrap();
            assert!(
                u.dot(&u.adjoint()).unwrap().max_abs_diff(&SpinOperator::identity(4))
                    < DECOMPOSITION_TOL
            );
            let rt = evolve(&rho, &u).unwrap();
            let spec = rt.matrix().eigh(UPLO::Lower).unwrap().0;
            let spec_diff: f64 = rho_spec
                .iter()
                .zip(spec.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(spec_diff < 1e-9);
            assert!((rt.trace_product_re(&rt).unwrap() - purity0).abs() < 1e-10);
            assert!((rt.trace_product_re(&h).unwrap() - energy0).abs() < 1e-10);
            assert!((rt.trace().re - 1.0).abs() < 1e-12);
            assert!(rt.hermiticity_residual() < 1e-12);
        }
    }

    #[test]
    fn eigenbasis_route_matches_direct_evolution() {
        let h = build_hmq(&coupling_matrix(4, &CouplingModel::all_pairs()).unwrap());
        let es = eigendecompose(&h).unwrap();
        let iz = total_iz(4);
        let iz_eig = es.to_eigenbasis(&iz).unwrap();
        for tau in [0.4, 2.2, 9.5] {
            let u = es.propagator_at(tau).unwrap();
            let direct = evolve(&iz, &u).unwrap();
            let fast = es.evolve_in_eigenbasis(&iz_eig, tau).unwrap();
            assert!(direct.max_abs_diff(&fast) < 1e-11);
        }
    }
}
