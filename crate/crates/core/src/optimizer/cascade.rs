use super::{assemble_combiner, assemble_precoder, scale_cols, scale_rows, unified, FitProblem, Layer, PhaseState};
use crate::{ComplexMatrix, Error, Result};

/// Cascades around unified layer `p`: `(A, B)` with `A Phi^p B = Q G P`.
///
/// `A` spans from layer `p` to the receive ports and `B` from the transmit
/// ports up to (excluding) the atoms of layer `p`.
pub fn cascades(p: usize, state: &PhaseState, problem: &FitProblem) -> Result<(ComplexMatrix, ComplexMatrix)> {
    state.check(problem)?;
    match problem.layer(p)? {
        Layer::Tx(l) => {
            let q = assemble_combiner(state, problem)?;
            let mut a = q * problem.channel();
            for j in (l + 1..=problem.tx_layers()).rev() {
                a = scale_cols(&a, &state.phasors(j)) * &problem.tx_matrices()[j - 1];
            }
            let mut b = problem.tx_matrices()[0].clone();
            for j in 2..=l {
                b = &problem.tx_matrices()[j - 1] * scale_rows(&b, &state.phasors(j - 1));
            }
            Ok((a, b))
        }
        Layer::Rx(k) => {
            let rx = problem.rx_matrices();
            let mut a = rx[0].clone();
            for j in 2..=k {
                a = scale_cols(&a, &state.phasors(unified(problem, Layer::Rx(j - 1)))) * &rx[j - 1];
            }
            let mut b = problem.channel() * assemble_precoder(state, problem)?;
            for j in (k + 1..=problem.rx_layers()).rev() {
                b = &rx[j - 1] * scale_rows(&b, &state.phasors(unified(problem, Layer::Rx(j))));
            }
            Ok((a, b))
        }
    }
}

/// `(R^q, T^q)` of the 2-layer model, `q` in `1..=4`.
pub fn cascades_2layer(q: usize, state: &PhaseState, problem: &FitProblem) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if problem.tx_layers() != 2 || problem.rx_layers() != 2 {
        return Err(Error::invalid(
            "2-layer cascade",
            format!("problem has {} TX and {} RX layers", problem.tx_layers(), problem.rx_layers()),
        ));
    }
    cascades(q, state, problem)
}

/// `(A^p, B^p)` of the multi-layer model, `p` in `1..=L+K`.
pub fn cascades_multilayer(p: usize, state: &PhaseState, problem: &FitProblem) -> Result<(ComplexMatrix, ComplexMatrix)> {
    cascades(p, state, problem)
}
