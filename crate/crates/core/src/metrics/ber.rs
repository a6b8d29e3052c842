//! Monte Carlo QPSK bit error rate over a fitted channel.
//!
//! Symbols are Gray-mapped, `((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2)`, and
//! scaled to per-stream power `P_t`. White `CN(0, N0)` noise is added after
//! combining and each port is detected on its own by the quadrant of
//! `y_i sign(alpha)`, i.e. the nearest point of the alpha-scaled
//! constellation. Off-diagonal leakage acts as extra noise.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use libm::erfc;

use super::CapacityInputs;
use crate::seed::{derive_seed, rng_from_seed};
use crate::{Error, Result};

/// Symbol vectors per independently seeded block.
const BLOCK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BerConfig {
    /// Symbol vectors to transmit; each carries one QPSK symbol per stream.
    pub n_symbols: u64,
    pub seed: u64,
}

impl BerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_symbols == 0 {
            return Err(Error::invalid("BER symbol count", "must be >= 1"));
        }
        Ok(())
    }
}

/// Bit error count over `bits` transmitted bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BerEstimate {
    pub errors: u64,
    pub bits: u64,
}

impl BerEstimate {
    pub fn rate(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.errors as f64 / self.bits as f64
        }
    }

    /// Binomial standard error of [`rate`](Self::rate).
    pub fn standard_error(&self) -> f64 {
        let p = self.rate();
        if self.bits == 0 {
            0.0
        } else {
            (p * (1.0 - p) / self.bits as f64).sqrt()
        }
    }

    pub fn merge(self, other: BerEstimate) -> BerEstimate {
        BerEstimate { errors: self.errors + other.errors, bits: self.bits + other.bits }
    }
}

/// Simulates `config.n_symbols` QPSK symbol vectors through `inputs.h`.
///
/// Blocks draw from seeds derived from `config.seed` and are summed, so the
/// count does not depend on how rayon schedules them.
pub fn ber_qpsk(inputs: &CapacityInputs, config: &BerConfig) -> Result<BerEstimate> {
    inputs.validate()?;
    config.validate()?;
    let s = inputs.streams();
    let h = &inputs.h;
    let amplitude = (inputs.pt / 2.0).sqrt();
    let noise_std = (inputs.n0 / 2.0).sqrt();
    let polarity = if inputs.alpha < 0.0 { -1.0 } else { 1.0 };
    let blocks = config.n_symbols.div_ceil(BLOCK);

    let total = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = rng_from_seed(derive_seed(config.seed, block));
            let count = BLOCK.min(config.n_symbols - block * BLOCK);
            let mut bits = vec![(false, false); s];
            let mut symbols = vec![Complex64::new(0.0, 0.0); s];
            let mut errors = 0u64;
            for _ in 0..count {
                for (b, x) in bits.iter_mut().zip(symbols.iter_mut()) {
                    *b = (rng.random::<bool>(), rng.random::<bool>());
                    let re = if b.0 { -amplitude } else { amplitude };
                    let im = if b.1 { -amplitude } else { amplitude };
                    *x = Complex64::new(re, im);
                }
                for (i, b) in bits.iter().enumerate() {
                    let mut y = Complex64::new(0.0, 0.0);
                    for (j, x) in symbols.iter().enumerate() {
                        y += h[(i, j)] * x;
                    }
                    let nr: f64 = StandardNormal.sample(&mut rng);
                    let ni: f64 = StandardNormal.sample(&mut rng);
                    y += Complex64::new(nr * noise_std, ni * noise_std);
                    let z = y * polarity;
                    errors += u64::from((z.re < 0.0) != b.0) + u64::from((z.im < 0.0) != b.1);
                }
            }
            BerEstimate { errors, bits: 2 * s as u64 * count }
        })
        .reduce(BerEstimate::default, BerEstimate::merge);
    Ok(total)
}

/// Gray-coded QPSK bit error probability `Q(sqrt(snr))` for
/// `snr = alpha^2 P_t / N0`.
pub fn qpsk_ber_analytic(snr: f64) -> f64 {
    0.5 * erfc((snr / 2.0).sqrt())
}
