use num_complex::Complex64;

use super::TwoLayerTopology;
use crate::ComplexMatrix;

/// TX fiber matrices `(W1, W2)`.
///
/// `W1` (`2MS x S`) feeds port `s` into its sub-area's `2M` input atoms.
/// `W2` (`MS x 2MS`) merges each consecutive pair of input atoms into one
/// output atom.
pub fn build_tx_fiber_matrices(topology: &TwoLayerTopology) -> (ComplexMatrix, ComplexMatrix) {
    let (s, m) = (topology.streams, topology.m);
    let rho1 = topology.rho1();
    let rho2 = topology.rho2();
    let zero = Complex64::new(0.0, 0.0);

    let w1 = ComplexMatrix::from_fn(2 * m * s, s, |row, col| {
        if row / (2 * m) == col {
            rho1
        } else {
            zero
        }
    });
    let w2 = ComplexMatrix::from_fn(m * s, 2 * m * s, |row, col| {
        if col / 2 == row {
            rho2
        } else {
            zero
        }
    });
    (w1, w2)
}

/// RX fiber matrices `(U2, U1)`.
///
/// `U2` (`2NS x NS`) splits each RX input atom onto a pair of output atoms.
/// `U1` (`S x 2NS`) sums a sub-area's `2N` output atoms into its port.
pub fn build_rx_fiber_matrices(topology: &TwoLayerTopology) -> (ComplexMatrix, ComplexMatrix) {
    let (s, n) = (topology.streams, topology.n);
    let rho1 = topology.rho1();
    let rho2 = topology.rho2();
    let zero = Complex64::new(0.0, 0.0);

    let u2 = ComplexMatrix::from_fn(2 * n * s, n * s, |row, col| {
        if row / 2 == col {
            rho2
        } else {
            zero
        }
    });
    let u1 = ComplexMatrix::from_fn(s, 2 * n * s, |row, col| {
        if col / (2 * n) == row {
            rho1
        } else {
            zero
        }
    });
    (u2, u1)
}
