//! Figures of merit for a fitted end-to-end channel `H = Q G P`.

mod ber;

pub use ber::{ber_qpsk, qpsk_ber_analytic, BerConfig, BerEstimate};

use serde::{Deserialize, Serialize};

use crate::{ComplexMatrix, Error, Result};

/// `||H - alpha I||_F^2 / (alpha^2 S)`.
pub fn nmse(h: &ComplexMatrix, alpha: f64, streams: usize) -> Result<f64> {
    if h.shape() != (streams, streams) {
        return Err(Error::dims("nmse", format!("{streams}x{streams}"), format!("{}x{}", h.nrows(), h.ncols())));
    }
    if alpha == 0.0 {
        return Err(Error::ZeroGain);
    }
    let residual: f64 = h
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let (i, j) = (idx % streams, idx / streams);
            if i == j {
                (z - alpha).norm_sqr()
            } else {
                z.norm_sqr()
            }
        })
        .sum();
    Ok(residual / (alpha * alpha * streams as f64))
}

/// `sum_{i != j} |H_ij|^2 / sum_i |H_ii|^2`; infinite when the diagonal vanishes.
pub fn off_diagonal_ratio(h: &ComplexMatrix) -> f64 {
    let mut diag = 0.0;
    let mut off = 0.0;
    for ((i, j), z) in h.iter().enumerate().map(|(idx, z)| ((idx % h.nrows(), idx / h.nrows()), z)) {
        if i == j {
            diag += z.norm_sqr();
        } else {
            off += z.norm_sqr();
        }
    }
    if diag == 0.0 {
        if off == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        off / diag
    }
}

/// Which interference covariance enters the capacity expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityFormula {
    /// `P_t E E^H + N0 I`: the fitting residual carries the per-stream power.
    #[default]
    PowerScaledInterference,
    /// `E E^H + N0 I` with the residual left unscaled.
    UnscaledInterference,
}

impl CapacityFormula {
    pub fn as_str(&self) -> &'static str {
        match self {
            CapacityFormula::PowerScaledInterference => "power_scaled_interference",
            CapacityFormula::UnscaledInterference => "unscaled_interference",
        }
    }
}

/// Fitted channel plus power levels; `pt` is per stream.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityInputs {
    pub h: ComplexMatrix,
    pub alpha: f64,
    pub pt: f64,
    pub n0: f64,
}

impl CapacityInputs {
    pub fn new(h: ComplexMatrix, alpha: f64, pt: f64, n0: f64) -> Result<Self> {
        let inputs = CapacityInputs { h, alpha, pt, n0 };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.h.is_square() {
            return Err(Error::dims("capacity channel", "square", format!("{}x{}", self.h.nrows(), self.h.ncols())));
        }
        if !(self.pt.is_finite() && self.pt > 0.0) {
            return Err(Error::invalid("transmit power", format!("must be positive, got {}", self.pt)));
        }
        if !(self.n0.is_finite() && self.n0 > 0.0) {
            return Err(Error::invalid("noise power", format!("must be positive, got {}", self.n0)));
        }
        if !self.alpha.is_finite() {
            return Err(Error::invalid("alpha", "must be finite"));
        }
        Ok(())
    }

    pub fn streams(&self) -> usize {
        self.h.nrows()
    }

    /// Fitting residual `E = H - alpha I`.
    pub fn residual(&self) -> ComplexMatrix {
        let s = self.streams();
        &self.h - ComplexMatrix::from_diagonal_element(s, s, self.alpha.into())
    }
}

/// `log2 det(I + alpha^2 P_t X^-1)` with `X` the selected interference-plus-noise
/// covariance.
///
/// Evaluated as `sum_i log2(1 + alpha^2 P_t / lambda_i(X))` over the
/// eigenvalues of the Hermitian `X`, which keeps full relative precision at
/// physical power levels.
pub fn capacity_exact(inputs: &CapacityInputs, formula: CapacityFormula) -> Result<f64> {
    inputs.validate()?;
    let s = inputs.streams();
    let e = inputs.residual();
    let interference_scale = match formula {
        CapacityFormula::PowerScaledInterference => inputs.pt,
        CapacityFormula::UnscaledInterference => 1.0,
    };
    let mut x = (&e * e.adjoint()) * crate::Complex64::from(interference_scale);
    for i in 0..s {
        x[(i, i)] += inputs.n0;
    }
    let x = (&x + x.adjoint()) * crate::Complex64::from(0.5);
    let eig = x.symmetric_eigenvalues();
    let signal = inputs.alpha * inputs.alpha * inputs.pt;
    let mut nats = 0.0;
    for &lambda in eig.iter() {
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
        if !(lambda > 0.0) {
            return Err(Error::Singular("interference-plus-noise covariance"));
        }
        nats += (signal / lambda).ln_1p();
    }
    Ok(nats / std::f64::consts::LN_2)
}

/// `S log2(1 + alpha^2 P_t / N0)`.
pub fn capacity_upper_bound(alpha: f64, pt: f64, n0: f64, streams: usize) -> f64 {
    streams as f64 * (alpha * alpha * pt / n0).ln_1p() / std::f64::consts::LN_2
}

/// Scales every matrix by `sqrt(1 - ratio)` so each layer passes `1 - ratio`
/// of its input energy.
pub fn apply_attenuation(matrices: &[ComplexMatrix], ratio: f64) -> Result<Vec<ComplexMatrix>> {
    if !(0.0..1.0).contains(&ratio) {
        return Err(Error::invalid("attenuation ratio", format!("must lie in [0, 1), got {ratio}")));
    }
    if ratio == 0.0 {
        return Ok(matrices.to_vec());
    }
    let amplitude = (1.0 - ratio).sqrt();
    Ok(matrices.iter().map(|m| m * crate::Complex64::from(amplitude)).collect())
}

/// Energy fraction surviving `layers` layers at per-layer loss `ratio`.
pub fn energy_retained(ratio: f64, layers: u32) -> f64 {
    (1.0 - ratio).powi(layers as i32)
}

/// `1 - (1 - ratio)^layers`.
pub fn energy_loss(ratio: f64, layers: u32) -> f64 {
    1.0 - energy_retained(ratio, layers)
}
