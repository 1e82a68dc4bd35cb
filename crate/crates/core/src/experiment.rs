//! Sweep orchestration: configure a chain, evolve it over a tau grid, and
//! collect coherence spectra, concurrences, and entanglement of formation,
//! with per-point invariant checks attached to every result.

use std::collections::BTreeSet;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use ndarray::prelude::*;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::{coherence_intensities, signal, CoherenceSpectrum, SignalParams};
use crate::coupling::{build_hmq, coupling_matrix, CouplingModel};
use crate::entanglement::{concurrence, min_eigenvalue, reduce_to_pair};
use crate::error::{SimError, SimResult};
use crate::operator::{adjoint, SpinOperator};
use crate::propagator::eigendecompose;
use crate::spin_basis::total_iz;
use crate::thermal::{equilibrium_state, ThermalConfig};

/// Largest chain the dense representation accepts (2^12 = 4096).
pub const MAX_SPINS: usize = 12;

/// Thresholds for the per-run invariant ledger.
pub const SUM_RULE_TOL: f64 = 1e-10;
pub const SYMMETRY_TOL: f64 = 1e-10;
pub const ODD_ORDER_TOL: f64 = 1e-12;
pub const UNITARITY_TOL: f64 = 1e-10;
pub const REDUCED_EIG_TOL: f64 = -1e-9;

/// First grid point where a concurrence exceeds this counts as its
/// appearance time.
pub const APPEARANCE_THRESHOLD: f64 = 1e-3;

pub const SCHEMA_VERSION: u32 = 1;

/// Which spin pairs to track.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSelection {
    /// Every pair (m, n) with m < n.
    All,
    /// An explicit 1-based list.
    List(Vec<(usize, usize)>),
}

impl Default for PairSelection {
    fn default() -> Self {
        PairSelection::All
    }
}

/// Detected-signal synthesis over an evolution-time grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalConfig {
    /// RF offset, rad/s; must be > 0.
    pub delta_omega: f64,
    /// End of the t grid, s (starts at 0).
    pub t_max: f64,
    /// Number of t points, >= 1.
    pub t_steps: usize,
}

/// Which observables a sweep records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputSelection {
    pub coherences: bool,
    pub concurrences: bool,
    pub eof: bool,
    /// Also emit J_n / (sum_m J_m at tau = 0) columns in CSV.
    #[serde(default)]
    pub normalized: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal: Option<SignalConfig>,
}

impl Default for OutputSelection {
    fn default() -> Self {
        Self {
            coherences: true,
            concurrences: true,
            eof: true,
            normalized: false,
            signal: None,
        }
    }
}

/// Full description of one sweep; serialized into every result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_spins: usize,
    pub model: CouplingModel,
    pub thermal: ThermalConfig,
    /// Grid bounds in the dimensionless unit D_nn * tau.
    pub tau_start: f64,
    pub tau_end: f64,
    pub tau_steps: usize,
    #[serde(default)]
    pub pairs: PairSelection,
    #[serde(default)]
    pub outputs: OutputSelection,
}

impl ExperimentConfig {
    /// Default sweep: grid 0..20 in 201 points, all pairs, all observables.
    pub fn new(n_spins: usize, model: CouplingModel) -> Self {
        Self {
            n_spins,
            model,
            thermal: ThermalConfig::default(),
            tau_start: 0.0,
            tau_end: 20.0,
            tau_steps: 201,
            pairs: PairSelection::All,
            outputs: OutputSelection::default(),
        }
    }

    pub fn validate(&self) -> SimResult<()> {
        if self.n_spins < 2 {
            return Err(SimError::Argument(format!(
                "need at least 2 spins, got {}",
                self.n_spins
            )));
        }
        if self.n_spins > MAX_SPINS {
            return Err(SimError::Budget(format!(
                "{} spins exceeds the dense-matrix limit of {MAX_SPINS} (dim 2^{})",
                self.n_spins, MAX_SPINS
            )));
        }
        if !(self.tau_start >= 0.0) || !(self.tau_end >= self.tau_start) {
            return Err(SimError::Argument(format!(
                "need 0 <= tau_start <= tau_end, got [{}, {}]",
                self.tau_start, self.tau_end
            )));
        }
        if self.tau_steps < 1 {
            return Err(SimError::Argument("tau_steps must be >= 1".into()));
        }
        if !(self.model.d_nn > 0.0) {
            return Err(SimError::Argument(format!(
                "d_nn must be > 0, got {}",
                self.model.d_nn
            )));
        }
        if let PairSelection::List(pairs) = &self.pairs {
            for &(m, n) in pairs {
                if m == 0 || m >= n || n > self.n_spins {
                    return Err(SimError::Argument(format!(
                        "pair ({m},{n}) invalid for {} spins",
                        self.n_spins
                    )));
                }
            }
        }
        if let Some(sc) = &self.outputs.signal {
            if !(sc.delta_omega > 0.0) {
                return Err(SimError::Argument(format!(
                    "signal offset must be > 0, got {}",
                    sc.delta_omega
                )));
            }
            if sc.t_steps < 1 || !(sc.t_max >= 0.0) {
                return Err(SimError::Argument("invalid signal t grid".into()));
            }
        }
        Ok(())
    }

    /// The tracked pairs in deterministic order.
    pub fn resolved_pairs(&self) -> Vec<(usize, usize)> {
        match &self.pairs {
            PairSelection::All => {
                let mut v = Vec::new();
                for m in 1..self.n_spins {
                    for n in (m + 1)..=self.n_spins {
                        v.push((m, n));
                    }
                }
                v
            }
            PairSelection::List(pairs) => {
                // Deduplicate but keep the caller's order.
                let mut seen = BTreeSet::new();
                pairs
                    .iter()
                    .copied()
                    .filter(|p| seen.insert(*p))
                    .collect()
            }
        }
    }

    /// Grid of dimensionless D_nn * tau values.
    pub fn tau_grid(&self) -> Vec<f64> {
        if self.tau_steps == 1 {
            return vec![self.tau_start];
        }
        let step = (self.tau_end - self.tau_start) / (self.tau_steps - 1) as f64;
        (0..self.tau_steps)
            .map(|i| self.tau_start + i as f64 * step)
            .collect()
    }
}

/// Concurrence / entanglement-of-formation series for one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSeries {
    pub pair: (usize, usize),
    pub concurrence: Vec<f64>,
    pub eof: Vec<f64>,
}

/// Detected signal on a (tau, t) grid, stored as (re, im) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSweep {
    pub delta_omega: f64,
    pub t_grid: Vec<f64>,
    /// values[i][k] = S(tau_i, t_k).
    pub values: Vec<Vec<(f64, f64)>>,
}

/// Invariant residuals at one tau point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub sum_rule_residual: f64,
    pub symmetry_residual: f64,
    pub max_odd_order: f64,
    pub unitarity_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_reduced_eigenvalue: Option<f64>,
}

/// Worst-case residuals over the whole sweep plus the pass verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantSummary {
    pub max_sum_rule_residual: f64,
    pub max_symmetry_residual: f64,
    pub max_odd_order: f64,
    pub max_unitarity_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_reduced_eigenvalue: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantLedger {
    pub per_tau: Vec<InvariantRecord>,
    pub summary: InvariantSummary,
}

/// Everything one sweep produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub schema_version: u32,
    pub code_version: String,
    pub config: ExperimentConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Dimensionless D_nn * tau values.
    pub tau_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectra: Option<Vec<CoherenceSpectrum>>,
    pub pair_series: Vec<PairSeries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal: Option<SignalSweep>,
    pub invariants: InvariantLedger,
}

impl SweepResult {
    pub fn is_flagged(&self) -> bool {
        !self.invariants.summary.passed
    }

    pub fn pair_index(&self, pair: (usize, usize)) -> Option<usize> {
        self.pair_series.iter().position(|ps| ps.pair == pair)
    }

    pub fn concurrence_series(&self, pair: (usize, usize)) -> Option<&[f64]> {
        self.pair_index(pair)
            .map(|i| self.pair_series[i].concurrence.as_slice())
    }

    /// J_n(tau_i) for one order across the grid, if spectra were recorded.
    pub fn intensity_series(&self, order: i64) -> Option<Vec<f64>> {
        self.spectra
            .as_ref()
            .map(|s| s.iter().map(|sp| sp.intensity(order)).collect())
    }
}

/// Index of the first grid point where a series exceeds `threshold`.
pub fn first_crossing(series: &[f64], threshold: f64) -> Option<usize> {
    series.iter().position(|&v| v > threshold)
}

struct PointResult {
    spectrum: CoherenceSpectrum,
    pair_values: Vec<(f64, f64)>, // (C, E_F) per pair
    signal_row: Option<Vec<(f64, f64)>>,
    invariants: InvariantRecord,
}

/// rho diagonal with entries `diag`: U rho U^dagger computed as a
/// column-scaled product, saving one dense multiplication.
fn conjugate_diagonal(u: &Array2<C64>, u_adj: &Array2<C64>, diag: &[f64]) -> Array2<C64> {
    let mut scaled = u.clone();
    for (mut col, &d) in scaled.columns_mut().into_iter().zip(diag.iter()) {
        col.mapv_inplace(|z| z * d);
    }
    scaled.dot(u_adj)
}

fn unitarity_residual(u: &Array2<C64>, u_adj: &Array2<C64>) -> f64 {
    let prod = u.dot(u_adj);
    let dim = prod.nrows();
    let mut r = 0.0_f64;
    for i in 0..dim {
        for j in 0..dim {
            let expect = if i == j { 1.0 } else { 0.0 };
            r = r.max((prod[[i, j]] - C64::new(expect, 0.0)).norm());
        }
    }
    r
}

/// Run one sweep. Deterministic for a given config: tau points are evaluated
/// in parallel but merged in grid order, and nothing draws randomness.
pub fn run_sweep(cfg: &ExperimentConfig) -> SimResult<SweepResult> {
    cfg.validate()?;
    let n = cfg.n_spins;
    let cmat = coupling_matrix(n, &cfg.model)?;
    let hmq = build_hmq(&cmat);
    let es = eigendecompose(&hmq)?;
    let rho_eq = equilibrium_state(n, &cfg.thermal)?;
    let iz = total_iz(n);
    let rho_diag: Vec<f64> = (0..rho_eq.dim()).map(|k| rho_eq.matrix()[[k, k]].re).collect();
    let iz_diag: Vec<f64> = (0..iz.dim()).map(|k| iz.matrix()[[k, k]].re).collect();

    let pairs = cfg.resolved_pairs();
    let track_pairs = cfg.outputs.concurrences || cfg.outputs.eof;
    let tau_grid = cfg.tau_grid();
    let d_nn = cfg.model.d_nn;

    let signal_tgrid: Option<Vec<f64>> = cfg.outputs.signal.map(|sc| {
        if sc.t_steps == 1 {
            vec![0.0]
        } else {
            let dt = sc.t_max / (sc.t_steps - 1) as f64;
            (0..sc.t_steps).map(|k| k as f64 * dt).collect()
        }
    });

    let points: SimResult<Vec<PointResult>> = tau_grid
        .par_iter()
        .map(|&dtau| {
            let tau_s = dtau / d_nn;
            let u = es.propagator_at(tau_s)?;
            let u_mat = u.matrix();
            let u_adj = adjoint(u_mat);
            let rho_t = SpinOperator::new(n, conjugate_diagonal(u_mat, &u_adj, &rho_diag))?;
            let rho_z_t = SpinOperator::new(n, conjugate_diagonal(u_mat, &u_adj, &iz_diag))?;
            let spectrum = coherence_intensities(&rho_t, &rho_z_t)?;

            let mut pair_values = Vec::with_capacity(pairs.len());
            let mut min_red_eig: Option<f64> = None;
            if track_pairs {
                for &(pm, pn) in &pairs {
                    let rs = reduce_to_pair(&rho_t, pm, pn)?;
                    let eig_min = min_eigenvalue(&rs)?;
                    min_red_eig = Some(min_red_eig.map_or(eig_min, |m: f64| m.min(eig_min)));
                    if eig_min < REDUCED_EIG_TOL {
                        return Err(SimError::Contract(format!(
                            "reduced state ({pm},{pn}) at D*tau = {dtau} has eigenvalue {eig_min:.3e}"
                        )));
                    }
                    let cr = concurrence(&rs)?;
                    pair_values.push((cr.c, cr.e_f));
                }
            }

            let signal_row = match (&cfg.outputs.signal, &signal_tgrid) {
                (Some(sc), Some(tg)) => Some(
                    tg.iter()
                        .map(|&t| {
                            let s = signal(
                                &spectrum,
                                &SignalParams { delta_omega: sc.delta_omega, t },
                            );
                            (s.re, s.im)
                        })
                        .collect(),
                ),
                _ => None,
            };

            let j_total_expected: f64 = rho_diag
                .iter()
                .zip(iz_diag.iter())
                .map(|(r, z)| r * z)
                .sum();
            let invariants = InvariantRecord {
                sum_rule_residual: (spectrum.total() - j_total_expected).abs(),
                symmetry_residual: spectrum.symmetry_residual(),
                max_odd_order: spectrum.max_odd_order(),
                unitarity_residual: unitarity_residual(u_mat, &u_adj),
                min_reduced_eigenvalue: min_red_eig,
            };
            Ok(PointResult { spectrum, pair_values, signal_row, invariants })
        })
        .collect();
    let points = points?;

    let per_tau: Vec<InvariantRecord> = points.iter().map(|p| p.invariants).collect();
    let summary = summarize(&per_tau);

    let spectra = if cfg.outputs.coherences {
        Some(points.iter().map(|p| p.spectrum.clone()).collect())
    } else {
        None
    };

    let pair_series = if track_pairs {
        pairs
            .iter()
            .enumerate()
            .map(|(pi, &pair)| PairSeries {
                pair,
                concurrence: points.iter().map(|p| p.pair_values[pi].0).collect(),
                eof: points.iter().map(|p| p.pair_values[pi].1).collect(),
            })
            .collect()
    } else {
        Vec::new()
    };

    let signal_out = match (cfg.outputs.signal, signal_tgrid) {
        (Some(sc), Some(t_grid)) => Some(SignalSweep {
            delta_omega: sc.delta_omega,
            t_grid,
            values: points
                .into_iter()
                .map(|p| p.signal_row.unwrap_or_default())
                .collect(),
        }),
        _ => None,
    };

    Ok(SweepResult {
        schema_version: SCHEMA_VERSION,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        notes: Vec::new(),
        tau_grid,
        spectra,
        pair_series,
        signal: signal_out,
        invariants: InvariantLedger { per_tau, summary },
    })
}

fn summarize(records: &[InvariantRecord]) -> InvariantSummary {
    let fold_max = |f: fn(&InvariantRecord) -> f64| {
        records.iter().map(f).fold(0.0, f64::max)
    };
    let max_sum_rule = fold_max(|r| r.sum_rule_residual);
    let max_symmetry = fold_max(|r| r.symmetry_residual);
    let max_odd = fold_max(|r| r.max_odd_order);
    let max_unitarity = fold_max(|r| r.unitarity_residual);
    let min_red = records
        .iter()
        .filter_map(|r| r.min_reduced_eigenvalue)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));
    let passed = max_sum_rule < SUM_RULE_TOL
        && max_symmetry < SYMMETRY_TOL
        && max_odd < ODD_ORDER_TOL
        && max_unitarity < UNITARITY_TOL
        && min_red.map_or(true, |v| v > REDUCED_EIG_TOL);
    InvariantSummary {
        max_sum_rule_residual: max_sum_rule,
        max_symmetry_residual: max_symmetry,
        max_odd_order: max_odd,
        max_unitarity_residual: max_unitarity,
        min_reduced_eigenvalue: min_red,
        passed,
    }
}

/// Canned figure reconstructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

impl std::str::FromStr for Figure {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            other => Err(SimError::Argument(format!(
                "unknown figure '{other}' (expected fig1, fig2, or fig3)"
            ))),
        }
    }
}

const FIGURE_PAIRS: [(usize, usize); 10] = [
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (1, 3),
    (2, 4),
    (3, 5),
    (1, 4),
    (2, 5),
    (3, 6),
];

const GRID_NOTE: &str =
    "tau grid 0..20 x 201 reconstructed from figure axis extents; best-effort";

/// Run the sweeps behind one figure. Returns (label, result) in panel order.
pub fn reproduce_figure(which: Figure) -> SimResult<Vec<(String, SweepResult)>> {
    let mut out = Vec::new();
    match which {
        Figure::Fig1 | Figure::Fig2 => {
            let model = if which == Figure::Fig1 {
                CouplingModel::nearest_neighbor()
            } else {
                CouplingModel::all_pairs()
            };
            let mut cfg = ExperimentConfig::new(8, model);
            cfg.pairs = PairSelection::List(FIGURE_PAIRS.to_vec());
            let mut result = run_sweep(&cfg)?;
            result.notes.push(GRID_NOTE.to_string());
            let label = if which == Figure::Fig1 { "fig1" } else { "fig2" };
            out.push((label.to_string(), result));
        }
        Figure::Fig3 => {
            for n in [6usize, 7, 8, 9] {
                let mut cfg = ExperimentConfig::new(n, CouplingModel::all_pairs());
                cfg.pairs = PairSelection::List(vec![(1, n)]);
                let mut result = run_sweep(&cfg)?;
                result.notes.push(GRID_NOTE.to_string());
                out.push((format!("fig3_n{n}"), result));
            }
        }
    }
    Ok(out)
}

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(SimError::Argument(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

fn fmt_float(v: f64) -> String {
    // `{}` on f64 prints the shortest decimal that round-trips.
    format!("{v}")
}

/// Even orders 0, 2, ..., N-rounded-down, the CSV J columns.
fn csv_orders(n_spins: usize) -> Vec<i64> {
    (0..=n_spins as i64).filter(|n| n % 2 == 0).collect()
}

/// Serialize a sweep. CSV: one row per tau with J, C, and EF columns per the
/// recorded observables (plus a companion `<stem>_signal.csv` when a signal
/// grid was requested). JSON: the complete result including metadata and the
/// invariant ledger.
pub fn write_output(result: &SweepResult, format: OutputFormat, path: &Path) -> SimResult<()> {
    match format {
        OutputFormat::Json => {
            let f = std::fs::File::create(path)
                .map_err(|e| SimError::io(path.display().to_string(), e))?;
            let mut w = std::io::BufWriter::new(f);
            serde_json::to_writer_pretty(&mut w, result)?;
            w.write_all(b"\n")
                .map_err(|e| SimError::io(path.display().to_string(), e))?;
            Ok(())
        }
        OutputFormat::Csv => {
            write_csv(result, path)?;
            if result.signal.is_some() {
                let mut sig_path = path.to_path_buf();
                let stem = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "signal".into());
                sig_path.set_file_name(format!("{stem}_signal.csv"));
                write_signal_csv(result, &sig_path)?;
            }
            Ok(())
        }
    }
}

fn write_csv(result: &SweepResult, path: &Path) -> SimResult<()> {
    let to_io = |e: std::io::Error| SimError::io(path.display().to_string(), e);
    let f = std::fs::File::create(path).map_err(to_io)?;
    let mut w = std::io::BufWriter::new(f);

    let outputs = &result.config.outputs;
    let orders = csv_orders(result.config.n_spins);

    let mut header = vec!["tau".to_string()];
    if let Some(_) = &result.spectra {
        for &n in &orders {
            header.push(format!("J{n}"));
        }
        if outputs.normalized {
            for &n in &orders {
                header.push(format!("J{n}_norm"));
            }
        }
    }
    if outputs.concurrences {
        for ps in &result.pair_series {
            header.push(format!("C_{}_{}", ps.pair.0, ps.pair.1));
        }
    }
    if outputs.eof {
        for ps in &result.pair_series {
            header.push(format!("EF_{}_{}", ps.pair.0, ps.pair.1));
        }
    }
    writeln!(w, "{}", header.join(",")).map_err(to_io)?;

    let norm_base = result
        .spectra
        .as_ref()
        .and_then(|s| s.first())
        .map(|s| s.total());

    for (i, &tau) in result.tau_grid.iter().enumerate() {
        let mut row = vec![fmt_float(tau)];
        if let Some(spectra) = &result.spectra {
            for &n in &orders {
                row.push(fmt_float(spectra[i].intensity(n)));
            }
            if outputs.normalized {
                let base = norm_base.unwrap_or(1.0);
                for &n in &orders {
                    row.push(fmt_float(spectra[i].intensity(n) / base));
                }
            }
        }
        if outputs.concurrences {
            for ps in &result.pair_series {
                row.push(fmt_float(ps.concurrence[i]));
            }
        }
        if outputs.eof {
            for ps in &result.pair_series {
                row.push(fmt_float(ps.eof[i]));
            }
        }
        writeln!(w, "{}", row.join(",")).map_err(to_io)?;
    }
    Ok(())
}

fn write_signal_csv(result: &SweepResult, path: &Path) -> SimResult<()> {
    let to_io = |e: std::io::Error| SimError::io(path.display().to_string(), e);
    let sweep = result.signal.as_ref().expect("caller checked");
    let f = std::fs::File::create(path).map_err(to_io)?;
    let mut w = std::io::BufWriter::new(f);
    writeln!(w, "tau,t,s_re,s_im").map_err(to_io)?;
    for (i, &tau) in result.tau_grid.iter().enumerate() {
        for (k, &t) in sweep.t_grid.iter().enumerate() {
            let (re, im) = sweep.values[i][k];
            writeln!(
                w,
                "{},{},{},{}",
                fmt_float(tau),
                fmt_float(t),
                fmt_float(re),
                fmt_float(im)
            )
            .map_err(to_io)?;
        }
    }
    Ok(())
}

/// Emit the plot-ready CSV files for one figure into `out_dir`.
/// Returns the written paths.
pub fn write_figure_csvs(
    which: Figure,
    results: &[(String, SweepResult)],
    out_dir: &Path,
) -> SimResult<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| SimError::io(out_dir.display().to_string(), e))?;
    let mut written = Vec::new();
    match which {
        Figure::Fig1 | Figure::Fig2 => {
            let (_, result) = &results[0];
            let prefix = if which == Figure::Fig1 { "fig1" } else { "fig2" };
            let orders: Vec<i64> = if which == Figure::Fig1 {
                vec![0, 2]
            } else {
                vec![0, 2, 4, 6]
            };
            let a = out_dir.join(format!("{prefix}a.csv"));
            write_order_panel(result, &orders, &a)?;
            written.push(a);

            let families: &[&[(usize, usize)]] = &[
                &[(1, 2), (2, 3), (3, 4), (4, 5)],
                &[(1, 3), (2, 4), (3, 5)],
                &[(1, 4), (2, 5), (3, 6)],
            ];
            let panels: &[&str] = if which == Figure::Fig1 {
                &["b", "c", "d"]
            } else {
                &["b", "c"]
            };
            for (panel, family) in panels.iter().zip(families) {
                let p = out_dir.join(format!("{prefix}{panel}.csv"));
                write_pair_panel(result, family, &p)?;
                written.push(p);
            }
        }
        Figure::Fig3 => {
            for (label, result) in results {
                let n = result.config.n_spins;
                let p = out_dir.join(format!("{label}.csv"));
                write_pair_panel(result, &[(1, n)], &p)?;
                written.push(p);
            }
        }
    }
    Ok(written)
}

fn write_order_panel(result: &SweepResult, orders: &[i64], path: &Path) -> SimResult<()> {
    let to_io = |e: std::io::Error| SimError::io(path.display().to_string(), e);
    let spectra = result
        .spectra
        .as_ref()
        .ok_or_else(|| SimError::Argument("sweep recorded no coherences".into()))?;
    let f = std::fs::File::create(path).map_err(to_io)?;
    let mut w = std::io::BufWriter::new(f);
    let header: Vec<String> = std::iter::once("tau".to_string())
        .chain(orders.iter().map(|n| format!("J{n}")))
        .collect();
    writeln!(w, "{}", header.join(",")).map_err(to_io)?;
    for (i, &tau) in result.tau_grid.iter().enumerate() {
        let row: Vec<String> = std::iter::once(fmt_float(tau))
            .chain(orders.iter().map(|&n| fmt_float(spectra[i].intensity(n))))
            .collect();
        writeln!(w, "{}", row.join(",")).map_err(to_io)?;
    }
    Ok(())
}

fn write_pair_panel(
    result: &SweepResult,
    pairs: &[(usize, usize)],
    path: &Path,
) -> SimResult<()> {
    let to_io = |e: std::io::Error| SimError::io(path.display().to_string(), e);
    let f = std::fs::File::create(path).map_err(to_io)?;
    let mut w = std::io::BufWriter::new(f);
    let mut series = Vec::new();
    for &pair in pairs {
        let s = result.concurrence_series(pair).ok_or_else(|| {
            SimError::Argument(format!("pair {pair:?} not tracked in this sweep"))
        })?;
        series.push((pair, s));
    }
    let header: Vec<String> = std::iter::once("tau".to_string())
        .chain(series.iter().map(|((m, n), _)| format!("C_{m}_{n}")))
        .collect();
    writeln!(w, "{}", header.join(",")).map_err(to_io)?;
    for (i, &tau) in result.tau_grid.iter().enumerate() {
        let row: Vec<String> = std::iter::once(fmt_float(tau))
            .chain(series.iter().map(|(_, s)| fmt_float(s[i])))
            .collect();
        writeln!(w, "{}", row.join(",")).map_err(to_io)?;
    }
    Ok(())
}
