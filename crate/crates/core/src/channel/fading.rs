use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::seed::rng_from_seed;
use crate::{ComplexMatrix, Error, Result};

/// How the reference gain `beta_0` at 1 m is formed from the wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathGainConvention {
    /// `beta_0 = (4 pi / lambda)^2`, the free-space *loss* at 1 m used
    /// directly as a variance. Gives variances far above 1 at centimeter
    /// wavelengths.
    FreeSpaceLoss,
    /// `beta_0 = (lambda / 4 pi)^2`, the free-space power gain at 1 m.
    #[default]
    FreeSpaceGain,
}

impl PathGainConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            PathGainConvention::FreeSpaceLoss => "free_space_loss",
            PathGainConvention::FreeSpaceGain => "free_space_gain",
        }
    }
}

/// Link-level power and distance parameters (linear units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// Carrier wavelength in meters; determines `beta_0`.
    pub wavelength: f64,
    pub distance_m: f64,
    /// Path-loss exponent `gamma`.
    pub gamma: f64,
    /// Per-stream transmit power in watts.
    pub pt: f64,
    /// Noise power in watts.
    pub n0: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("wavelength", self.wavelength),
            ("distance", self.distance_m),
            ("transmit power", self.pt),
            ("noise power", self.n0),
        ];
        for (name, v) in checks {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid("link budget", format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::invalid("link budget", format!("path-loss exponent must be positive, got {}", self.gamma)));
        }
        Ok(())
    }

    pub fn reference_gain(&self, convention: PathGainConvention) -> f64 {
        let k = 4.0 * PI / self.wavelength;
        match convention {
            PathGainConvention::FreeSpaceLoss => k * k,
            PathGainConvention::FreeSpaceGain => 1.0 / (k * k),
        }
    }
}

/// Large-scale channel variance `beta = beta_0 d^-gamma`.
pub fn path_gain(budget: &LinkBudget, convention: PathGainConvention) -> f64 {
    budget.reference_gain(convention) * budget.distance_m.powf(-budget.gamma)
}

/// i.i.d. `CN(0, beta)` matrix, deterministic in `seed`.
///
/// Entries are drawn in row-major order, real part first. Each entry is a
/// unit-variance draw scaled by `sqrt(beta / 2)` per component.
pub fn sample_rayleigh_channel(rows: usize, cols: usize, beta: f64, seed: u64) -> Result<ComplexMatrix> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid("channel variance", format!("beta must be positive, got {beta}")));
    }
    let mut rng = rng_from_seed(seed);
    let scale = (beta / 2.0).sqrt();
    let entries: Vec<Complex64> = (0..rows * cols)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re * scale, im * scale)
        })
        .collect();
    Ok(ComplexMatrix::from_row_slice(rows, cols, &entries))
}
