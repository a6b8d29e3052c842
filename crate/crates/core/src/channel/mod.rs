//! System-model construction: meta-fiber topologies, diffraction matrices
//! and the stochastic MIMO channel.
//!
//! Everything here is a pure function of its inputs (plus a seed for the
//! sampler), so built matrices can be shared freely across threads.

mod diffraction;
mod fading;
mod fiber;

pub use diffraction::{
    build_diffraction_matrix, rayleigh_sommerfeld_coefficient, rx_diffraction_matrices,
    tx_diffraction_matrices, GridShape, MultiLayerTopology, Side,
};
pub use fading::{path_gain, sample_rayleigh_channel, LinkBudget, PathGainConvention};
pub use fiber::{build_rx_fiber_matrices, build_tx_fiber_matrices};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dimensions and meta-fiber gains of a 2-layer meta-fiber SIM pair.
///
/// Each of the `streams` ports owns one sub-area. On the TX side a sub-area
/// has `2m` input-layer atoms and `m` output-layer atoms; on the RX side it
/// has `n` input-layer atoms and `2n` output-layer atoms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLayerTopology {
    pub streams: usize,
    pub m: usize,
    pub n: usize,
    /// Amplitude of the port-to-layer meta-fiber, `|rho_1|`.
    pub rho1_mag: f64,
    /// Phase of the port-to-layer meta-fiber, `psi_1` (radians).
    pub psi1: f64,
    /// Amplitude of the layer-to-layer meta-fiber, `|rho_2|`.
    pub rho2_mag: f64,
    /// Phase of the layer-to-layer meta-fiber, `psi_2` (radians).
    pub psi2: f64,
}

impl TwoLayerTopology {
    /// Ideal (lossless, phase-neutral) meta-fibers.
    pub fn new(streams: usize, m: usize, n: usize) -> Result<Self> {
        Self::with_fibers(streams, m, n, 1.0, 0.0, 1.0, 0.0)
    }

    pub fn with_fibers(
        streams: usize,
        m: usize,
        n: usize,
        rho1_mag: f64,
        psi1: f64,
        rho2_mag: f64,
        psi2: f64,
    ) -> Result<Self> {
        let topology = TwoLayerTopology {
            streams,
            m,
            n,
            rho1_mag,
            psi1,
            rho2_mag,
            psi2,
        };
        topology.validate()?;
        Ok(topology)
    }

    pub fn validate(&self) -> Result<()> {
        if self.streams == 0 || self.m == 0 || self.n == 0 {
            return Err(Error::invalid(
                "two-layer topology",
                format!(
                    "streams, m and n must be >= 1 (got {}, {}, {})",
                    self.streams, self.m, self.n
                ),
            ));
        }
        for (name, value) in [("rho1_mag", self.rho1_mag), ("rho2_mag", self.rho2_mag)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    "two-layer topology",
                    format!("{name} must be positive and finite, got {value}"),
                ));
            }
        }
        if !(self.psi1.is_finite() && self.psi2.is_finite()) {
            return Err(Error::invalid("two-layer topology", "fiber phases must be finite"));
        }
        Ok(())
    }

    /// Complex gain `|rho_1| e^{j psi_1}`.
    pub fn rho1(&self) -> Complex64 {
        Complex64::from_polar(self.rho1_mag, self.psi1)
    }

    /// Complex gain `|rho_2| e^{j psi_2}`.
    pub fn rho2(&self) -> Complex64 {
        Complex64::from_polar(self.rho2_mag, self.psi2)
    }

    /// Atoms per layer in unified order: TX input, TX output, RX input, RX output.
    pub fn layer_sizes(&self) -> [usize; 4] {
        let (s, m, n) = (self.streams, self.m, self.n);
        [2 * m * s, m * s, n * s, 2 * n * s]
    }

    pub fn total_atoms(&self) -> usize {
        self.layer_sizes().iter().sum()
    }
}

/// Phase settings of one TX sub-area that realize a requested output symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubareaPhases {
    /// First input-layer atom.
    pub input_first: f64,
    /// Second input-layer atom.
    pub input_second: f64,
    /// Output-layer atom.
    pub output: f64,
}

/// Largest output amplitude a sub-area can synthesize, `2 chi |rho_1| |rho_2|`.
pub fn max_subarea_amplitude(chi: f64, topology: &TwoLayerTopology) -> f64 {
    2.0 * chi * topology.rho1_mag * topology.rho2_mag
}

/// Phases that make one sub-area emit `target` from a port driven with amplitude `chi`.
///
/// The two input atoms set the amplitude through `2 cos(theta)` and the output
/// atom sets the phase.
pub fn synthesize_subarea_phases(
    target: Complex64,
    chi: f64,
    topology: &TwoLayerTopology,
) -> Result<SubareaPhases> {
    if !(chi.is_finite() && chi > 0.0) {
        return Err(Error::invalid("port amplitude", format!("chi must be positive, got {chi}")));
    }
    let max = max_subarea_amplitude(chi, topology);
    let amplitude = target.norm();
    if amplitude > max {
        return Err(Error::AmplitudeOutOfRange {
            requested: amplitude,
            max,
        });
    }
    let b = amplitude / (chi * topology.rho1_mag * topology.rho2_mag);
    let spread = (b / 2.0).clamp(0.0, 1.0).acos();
    let delta = target.im.atan2(target.re);
    Ok(SubareaPhases {
        input_first: spread,
        input_second: -spread,
        output: delta - topology.psi1 - topology.psi2,
    })
}

/// Output symbol of one sub-area for the given phases (forward model).
pub fn subarea_output(phases: &SubareaPhases, chi: f64, topology: &TwoLayerTopology) -> Complex64 {
    let pair = Complex64::from_polar(1.0, phases.input_first)
        + Complex64::from_polar(1.0, phases.input_second);
    topology.rho1() * topology.rho2() * chi * pair * Complex64::from_polar(1.0, phases.output)
}
