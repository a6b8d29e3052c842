//! Fixtures shared by the criterion benchmarks.

use simfiber_core::channel::sample_rayleigh_channel;
use simfiber_core::{FitProblem, MultiLayerTopology, SolverConfig, TwoLayerTopology};

/// Unit-variance channel so timings do not depend on path loss.
pub fn two_layer_problem(streams: usize, atoms: usize, seed: u64) -> FitProblem {
    let topo = TwoLayerTopology::new(streams, atoms, atoms).expect("valid topology");
    let g = sample_rayleigh_channel(atoms * streams, atoms * streams, 1.0, seed).expect("valid channel");
    FitProblem::two_layer(&topo, g).expect("consistent shapes")
}

pub fn multi_layer_problem(streams: usize, layers: usize, atoms: usize, seed: u64) -> FitProblem {
    let topo = MultiLayerTopology::half_wavelength(streams, layers, atoms, 0.0107).expect("valid topology");
    let g = sample_rayleigh_channel(atoms, atoms, 1.0, seed).expect("valid channel");
    FitProblem::multi_layer(&topo, g).expect("consistent shapes")
}

/// Exactly `sweeps` full sweeps, no early stop.
pub fn fixed_sweeps(sweeps: usize) -> SolverConfig {
    SolverConfig { max_iterations: sweeps, threshold: 0.0, ..SolverConfig::default() }
}
