use rand::seq::SliceRandom;

use super::{
    alpha_update_with_phase, cascades, equivalent_channel, residual_energy, FitProblem, FitResult, Initialization,
    LayerSweep, PhaseState, SolverConfig, UpdateOrder,
};
use crate::seed::{derive_seed, rng_from_seed};
use crate::{Error, Result};

/// One coordinate update reported to an observer.
#[derive(Debug)]
pub struct UpdateEvent<'a> {
    /// 1-based sweep number.
    pub iteration: usize,
    /// Unified layer index, or `None` for the `alpha` update.
    pub layer: Option<usize>,
    pub atom: Option<usize>,
    pub objective_before: f64,
    pub objective_after: f64,
    /// State after the update.
    pub state: &'a PhaseState,
}

/// Alternating optimization over every phase of every layer, then `alpha`.
pub fn run_ao(problem: &FitProblem, config: &SolverConfig) -> Result<FitResult> {
    run_ao_observed(problem, config, |_| {})
}

/// [`run_ao`] restricted to the 2-layer meta-fiber model.
pub fn run_ao_2layer(problem: &FitProblem, config: &SolverConfig) -> Result<FitResult> {
    if problem.tx_layers() != 2 || problem.rx_layers() != 2 {
        return Err(Error::invalid(
            "2-layer solver",
            format!("problem has {} TX and {} RX layers", problem.tx_layers(), problem.rx_layers()),
        ));
    }
    run_ao(problem, config)
}

pub fn run_ao_multilayer(problem: &FitProblem, config: &SolverConfig) -> Result<FitResult> {
    run_ao(problem, config)
}

fn nmse_of(objective: f64, alpha: f64, streams: usize) -> f64 {
    if alpha == 0.0 {
        f64::INFINITY
    } else {
        objective / (alpha * alpha * streams as f64)
    }
}

/// Like [`run_ao`], calling `observer` after every phase and `alpha` update.
pub fn run_ao_observed<F>(problem: &FitProblem, config: &SolverConfig, mut observer: F) -> Result<FitResult>
where
    F: FnMut(&UpdateEvent<'_>),
{
    config.validate()?;
    let mut state = match config.initialization {
        Initialization::Identity => PhaseState::identity(problem),
        Initialization::Random { seed } => PhaseState::random(problem, seed),
    };
    let streams = problem.streams();
    let zeta = problem.target_phase();

    let h = equivalent_channel(&state, problem)?;
    let mut current = residual_energy(&h, &problem.target(state.alpha));
    let mut objective_trace = vec![current];
    let mut nmse_trace = vec![nmse_of(current, state.alpha, streams)];
    let mut converged = false;
    let mut iterations_used = 0;

    for iteration in 1..=config.max_iterations {
        iterations_used = iteration;
        let previous = current;
        for p in 1..=problem.layer_count() {
            let (a, b) = cascades(p, &state, problem)?;
            let target = problem.target(state.alpha);
            let mut sweep = LayerSweep::new(&a, &b, &target, &state.layer_phases[p - 1], config.evaluation)?;
            let mut order: Vec<usize> = (0..sweep.atoms()).collect();
            if let UpdateOrder::Shuffled { seed } = config.order {
                let mut rng = rng_from_seed(derive_seed(derive_seed(seed, iteration as u64), p as u64));
                order.shuffle(&mut rng);
            }
            for m in order {
                let outcome = sweep.update(m);
                state.layer_phases[p - 1][m] = outcome.theta;
                observer(&UpdateEvent {
                    iteration,
                    layer: Some(p),
                    atom: Some(m),
                    objective_before: outcome.objective_before,
                    objective_after: outcome.objective_after,
                    state: &state,
                });
            }
        }

        let h = equivalent_channel(&state, problem)?;
        let before = residual_energy(&h, &problem.target(state.alpha));
        state.alpha = alpha_update_with_phase(&h, zeta);
        current = residual_energy(&h, &problem.target(state.alpha));
        observer(&UpdateEvent {
            iteration,
            layer: None,
            atom: None,
            objective_before: before,
            objective_after: current,
            state: &state,
        });
        objective_trace.push(current);
        nmse_trace.push(nmse_of(current, state.alpha, streams));

        if previous - current <= config.threshold * previous {
            converged = true;
            break;
        }
    }

    Ok(FitResult { state, objective_trace, nmse_trace, iterations_used, converged })
}
