//! Channel fitting `min ||Q G P - alpha I_S||_F^2` under unit-modulus
//! meta-atom constraints.
//!
//! Both architectures share one layered model. The precoder is
//! `P = Phi^L W^L ... Phi^1 W^1` and the combiner is
//! `Q = U^1 Psi^1 ... U^K Psi^K`. The 2-layer meta-fiber SIM is the case
//! `L = K = 2` with fiber matrices. Layers are addressed with a unified
//! 1-based index `p`: `p <= L` is TX layer `p`, and `p > L` is RX layer
//! `L + K - p + 1`. The sweep order is therefore TX input to TX output,
//! then RX input to RX output.

mod ao;
mod cascade;
mod update;

pub use ao::{run_ao, run_ao_2layer, run_ao_multilayer, run_ao_observed, UpdateEvent};
pub use cascade::{cascades, cascades_2layer, cascades_multilayer};
pub use update::{phase_coefficients, phase_update_closed_form, LayerSweep, PhaseCoefficients, UpdateOutcome};

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{
    build_rx_fiber_matrices, build_tx_fiber_matrices, rx_diffraction_matrices, tx_diffraction_matrices,
    MultiLayerTopology, TwoLayerTopology,
};
use crate::seed::rng_from_seed;
use crate::{ComplexMatrix, Error, Result};

/// Identifies one programmable layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    /// TX layer `l` (1-based, `Phi^l`).
    Tx(usize),
    /// RX layer `k` (1-based, `Psi^k`).
    Rx(usize),
}

/// Channel plus fixed transmission matrices of both SIMs.
#[derive(Debug, Clone, PartialEq)]
pub struct FitProblem {
    channel: ComplexMatrix,
    tx: Vec<ComplexMatrix>,
    rx: Vec<ComplexMatrix>,
    streams: usize,
    target_phase: f64,
}

impl FitProblem {
    /// `tx = [W^1, ..., W^L]`, `rx = [U^1, ..., U^K]`, `channel = G`.
    pub fn new(channel: ComplexMatrix, tx: Vec<ComplexMatrix>, rx: Vec<ComplexMatrix>) -> Result<Self> {
        if tx.is_empty() || rx.is_empty() {
            return Err(Error::invalid("fit problem", "need at least one TX and one RX layer"));
        }
        let streams = tx[0].ncols();
        if streams == 0 {
            return Err(Error::invalid("fit problem", "stream count must be >= 1"));
        }
        for l in 1..tx.len() {
            if tx[l].ncols() != tx[l - 1].nrows() {
                return Err(Error::dims("TX chain", format!("W^{} with {} columns", l + 1, tx[l - 1].nrows()), tx[l].ncols()));
            }
        }
        if rx[0].nrows() != streams {
            return Err(Error::dims("RX ports", format!("U^1 with {streams} rows"), rx[0].nrows()));
        }
        for k in 1..rx.len() {
            if rx[k].nrows() != rx[k - 1].ncols() {
                return Err(Error::dims("RX chain", format!("U^{} with {} rows", k + 1, rx[k - 1].ncols()), rx[k].nrows()));
            }
        }
        let tx_out = tx.last().map(|w| w.nrows()).unwrap_or(0);
        let rx_in = rx.last().map(|u| u.ncols()).unwrap_or(0);
        if channel.shape() != (rx_in, tx_out) {
            return Err(Error::dims("channel", format!("{rx_in}x{tx_out}"), format!("{}x{}", channel.nrows(), channel.ncols())));
        }
        for m in tx.iter().chain(rx.iter()).chain(std::iter::once(&channel)) {
            if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::invalid("fit problem", "matrices must be finite"));
            }
        }
        Ok(FitProblem { channel, tx, rx, streams, target_phase: 0.0 })
    }

    /// Meta-fiber 2-layer problem; `channel` must be `NS x MS`.
    pub fn two_layer(topology: &TwoLayerTopology, channel: ComplexMatrix) -> Result<Self> {
        topology.validate()?;
        let (w1, w2) = build_tx_fiber_matrices(topology);
        let (u2, u1) = build_rx_fiber_matrices(topology);
        Self::new(channel, vec![w1, w2], vec![u1, u2])
    }

    /// Diffraction multi-layer problem; `channel` must be `U x W`.
    pub fn multi_layer(topology: &MultiLayerTopology, channel: ComplexMatrix) -> Result<Self> {
        let tx = tx_diffraction_matrices(topology)?;
        let rx = rx_diffraction_matrices(topology)?;
        Self::new(channel, tx, rx)
    }

    /// Fits `alpha e^{j zeta} I` instead of `alpha I` (alpha stays real).
    pub fn with_target_phase(mut self, zeta: f64) -> Self {
        self.target_phase = zeta;
        self
    }

    /// Scales every layer's transmission matrix by `sqrt(1 - ratio)`.
    pub fn with_attenuation(mut self, ratio: f64) -> Result<Self> {
        self.tx = crate::metrics::apply_attenuation(&self.tx, ratio)?;
        self.rx = crate::metrics::apply_attenuation(&self.rx, ratio)?;
        Ok(self)
    }

    pub fn channel(&self) -> &ComplexMatrix {
        &self.channel
    }

    pub fn tx_matrices(&self) -> &[ComplexMatrix] {
        &self.tx
    }

    pub fn rx_matrices(&self) -> &[ComplexMatrix] {
        &self.rx
    }

    pub fn streams(&self) -> usize {
        self.streams
    }

    pub fn target_phase(&self) -> f64 {
        self.target_phase
    }

    pub fn tx_layers(&self) -> usize {
        self.tx.len()
    }

    pub fn rx_layers(&self) -> usize {
        self.rx.len()
    }

    /// `L + K`.
    pub fn layer_count(&self) -> usize {
        self.tx.len() + self.rx.len()
    }

    /// Maps a unified index to its layer.
    pub fn layer(&self, p: usize) -> Result<Layer> {
        let (l, k) = (self.tx.len(), self.rx.len());
        if p == 0 || p > l + k {
            Err(Error::InvalidLayer { index: p, count: l + k })
        } else if p <= l {
            Ok(Layer::Tx(p))
        } else {
            Ok(Layer::Rx(l + k - p + 1))
        }
    }

    /// Atom count of unified layer `p`.
    pub fn layer_size(&self, p: usize) -> Result<usize> {
        Ok(match self.layer(p)? {
            Layer::Tx(l) => self.tx[l - 1].nrows(),
            Layer::Rx(k) => self.rx[k - 1].ncols(),
        })
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        (1..=self.layer_count()).map(|p| self.layer_size(p).unwrap_or(0)).collect()
    }

    /// `alpha e^{j zeta} I_S`.
    pub fn target(&self, alpha: f64) -> ComplexMatrix {
        let diag = Complex64::from_polar(alpha, self.target_phase);
        ComplexMatrix::from_diagonal_element(self.streams, self.streams, diag)
    }
}

/// Decision variables: one phase vector per layer (unified order) and `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub layer_phases: Vec<Vec<f64>>,
    pub alpha: f64,
}

impl PhaseState {
    /// All phases zero (identity phase matrices) and `alpha = 1`.
    pub fn identity(problem: &FitProblem) -> Self {
        PhaseState {
            layer_phases: problem.layer_sizes().into_iter().map(|n| vec![0.0; n]).collect(),
            alpha: 1.0,
        }
    }

    /// Phases uniform on `[0, 2 pi)`, `alpha = 1`.
    pub fn random(problem: &FitProblem, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        PhaseState {
            layer_phases: problem
                .layer_sizes()
                .into_iter()
                .map(|n| (0..n).map(|_| rng.random::<f64>() * TAU).collect())
                .collect(),
            alpha: 1.0,
        }
    }

    pub fn check(&self, problem: &FitProblem) -> Result<()> {
        let sizes = problem.layer_sizes();
        if self.layer_phases.len() != sizes.len() {
            return Err(Error::dims("phase state layers", sizes.len(), self.layer_phases.len()));
        }
        for (p, (phases, &n)) in self.layer_phases.iter().zip(&sizes).enumerate() {
            if phases.len() != n {
                return Err(Error::dims("phase state layer length", format!("{n} at layer {}", p + 1), phases.len()));
            }
            if phases.iter().any(|t| !t.is_finite()) {
                return Err(Error::invalid("phase state", "phases must be finite"));
            }
        }
        if !self.alpha.is_finite() {
            return Err(Error::invalid("phase state", "alpha must be finite"));
        }
        Ok(())
    }

    /// `e^{j theta}` for unified layer `p`.
    pub fn phasors(&self, p: usize) -> Vec<Complex64> {
        self.layer_phases[p - 1].iter().map(|&t| Complex64::from_polar(1.0, t)).collect()
    }
}

/// Maps an angle into `[0, 2 pi)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Stopping and policy knobs of the AO solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Stop once one sweep lowers `J` by no more than `threshold * J_prev`.
    pub threshold: f64,
    pub initialization: Initialization,
    pub order: UpdateOrder,
    pub evaluation: CoefficientEvaluation,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: 20,
            threshold: 1e-14,
            initialization: Initialization::Identity,
            order: UpdateOrder::Ascending,
            evaluation: CoefficientEvaluation::Direct,
        }
    }
}

impl SolverConfig {
    pub fn with_iterations(max_iterations: usize) -> Self {
        SolverConfig { max_iterations, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::invalid("solver config", "max_iterations must be >= 1"));
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.threshold >= 0.0) {
            return Err(Error::invalid("solver config", "threshold must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Initialization {
    /// Zero phases, `alpha = 1`.
    Identity,
    /// Uniform random phases, `alpha = 1`.
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateOrder {
    Ascending,
    /// Atoms of each layer visited in a fresh random order every sweep.
    Shuffled { seed: u64 },
}

/// How the sum over the other atoms of a layer is formed for each update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientEvaluation {
    /// Re-sum the coefficient tensor over all other atoms: `O(S^2 Q)` per atom.
    Direct,
    /// Keep a running total and subtract the atom's own term: `O(S^2)` per atom.
    Incremental,
}

/// Outcome of an AO run.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub state: PhaseState,
    /// `J` before the first sweep, then after every sweep.
    pub objective_trace: Vec<f64>,
    /// NMSE aligned with `objective_trace`.
    pub nmse_trace: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
}

impl FitResult {
    pub fn final_objective(&self) -> f64 {
        *self.objective_trace.last().unwrap_or(&f64::NAN)
    }

    pub fn final_nmse(&self) -> f64 {
        *self.nmse_trace.last().unwrap_or(&f64::NAN)
    }
}

pub(crate) fn scale_rows(m: &ComplexMatrix, phasors: &[Complex64]) -> ComplexMatrix {
    let mut out = m.clone();
    for (mut row, &f) in out.row_iter_mut().zip(phasors) {
        row *= f;
    }
    out
}

pub(crate) fn scale_cols(m: &ComplexMatrix, phasors: &[Complex64]) -> ComplexMatrix {
    let mut out = m.clone();
    for (mut col, &f) in out.column_iter_mut().zip(phasors) {
        col *= f;
    }
    out
}

/// Unified index of TX layer `l` or RX layer `k`.
fn unified(problem: &FitProblem, layer: Layer) -> usize {
    match layer {
        Layer::Tx(l) => l,
        Layer::Rx(k) => problem.tx_layers() + problem.rx_layers() - k + 1,
    }
}

/// `P = Phi^L W^L ... Phi^1 W^1`.
pub fn assemble_precoder(state: &PhaseState, problem: &FitProblem) -> Result<ComplexMatrix> {
    state.check(problem)?;
    let mut p = scale_rows(&problem.tx[0], &state.phasors(1));
    for l in 2..=problem.tx_layers() {
        p = scale_rows(&(&problem.tx[l - 1] * p), &state.phasors(l));
    }
    Ok(p)
}

/// `Q = U^1 Psi^1 ... U^K Psi^K`.
pub fn assemble_combiner(state: &PhaseState, problem: &FitProblem) -> Result<ComplexMatrix> {
    state.check(problem)?;
    let k_max = problem.rx_layers();
    let mut q = scale_cols(&problem.rx[k_max - 1], &state.phasors(unified(problem, Layer::Rx(k_max))));
    for k in (1..k_max).rev() {
        q = scale_cols(&problem.rx[k - 1], &state.phasors(unified(problem, Layer::Rx(k)))) * q;
    }
    Ok(q)
}

/// End-to-end channel `H = Q G P`.
pub fn equivalent_channel(state: &PhaseState, problem: &FitProblem) -> Result<ComplexMatrix> {
    let p = assemble_precoder(state, problem)?;
    let q = assemble_combiner(state, problem)?;
    Ok(q * &problem.channel * p)
}

/// `J = ||Q G P - alpha e^{j zeta} I||_F^2`.
pub fn objective(state: &PhaseState, problem: &FitProblem) -> Result<f64> {
    let h = equivalent_channel(state, problem)?;
    Ok(residual_energy(&h, &problem.target(state.alpha)))
}

/// `||H - target||_F^2`.
pub fn residual_energy(h: &ComplexMatrix, target: &ComplexMatrix) -> f64 {
    h.iter().zip(target.iter()).map(|(a, b)| (a - b).norm_sqr()).sum()
}

/// Least-squares gain `alpha = tr(H + H^H) / 2S = Re tr(H) / S`.
pub fn alpha_update(h: &ComplexMatrix) -> f64 {
    alpha_update_with_phase(h, 0.0)
}

/// Least-squares real gain for the rotated target `alpha e^{j zeta} I`.
pub fn alpha_update_with_phase(h: &ComplexMatrix, zeta: f64) -> f64 {
    let s = h.nrows().min(h.ncols());
    let rot = Complex64::from_polar(1.0, -zeta);
    (h.trace() * rot).re / s as f64
}
