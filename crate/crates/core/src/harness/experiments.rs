use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{Architecture, ExperimentConfig, ExperimentKind, SystemParams};
use super::output::ResultRecord;
use crate::baselines::{svd_ideal_transceivers, zf_capacity, zf_precoder};
use crate::channel::{path_gain, sample_rayleigh_channel};
use crate::metrics::{
    ber_qpsk, capacity_exact, capacity_upper_bound, nmse, off_diagonal_ratio, BerConfig, CapacityInputs,
};
use crate::optimizer::{alpha_update, equivalent_channel, run_ao, FitProblem, FitResult};
use crate::seed::{derive_seed, stream};
use crate::{ComplexMatrix, Error, Result};

/// Runs `config` and returns its records in canonical order: sweep point,
/// then architecture, then per-trial records by trial index, then the
/// trial aggregates. Output does not depend on the worker count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let seeds: Vec<u64> = (0..config.trials as u64).map(|t| derive_seed(config.seed, t)).collect();
    run_with_seeds(config, &seeds)
}

/// Seed of trial `trial` under `master`.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    derive_seed(master, trial as u64)
}

struct Keyed {
    point: usize,
    arch: usize,
    trial: usize,
    record: ResultRecord,
}

/// Channel and fitted transceiver of one trial, before any power-dependent
/// metric is evaluated.
enum Fitted {
    Solver { h: ComplexMatrix, result: FitResult },
    Svd { h: ComplexMatrix, alpha: f64 },
    Conventional { g: ComplexMatrix },
}

pub(crate) fn run_with_seeds(config: &ExperimentConfig, seeds: &[u64]) -> Result<Vec<ResultRecord>> {
    if config.kind == ExperimentKind::ScalingBench {
        return run_scaling(config, seeds);
    }
    let points = config.points();
    let architectures = config.architectures();
    let groups: Vec<Vec<usize>> = if config.kind.sweeps_power() {
        vec![(0..points.len()).collect()]
    } else {
        (0..points.len()).map(|i| vec![i]).collect()
    };
    let mut tasks = Vec::new();
    for group in &groups {
        for arch in 0..architectures.len() {
            for (trial, &seed) in seeds.iter().enumerate() {
                tasks.push((group.as_slice(), arch, trial, seed));
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::invalid("worker pool", e.to_string()))?;
    let outputs: Vec<Result<Vec<Keyed>>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(group, arch, trial, seed)| {
                run_task(config, &points, group, architectures[arch], trial, seed)
                    .map(|records| {
                        records
                            .into_iter()
                            .map(|(point, record)| Keyed { point, arch, trial, record })
                            .collect()
                    })
            })
            .collect()
    });
    let mut keyed = Vec::new();
    for out in outputs {
        keyed.extend(out?);
    }
    // stable: records of one (point, arch, trial) keep their emission order
    keyed.sort_by_key(|k| (k.point, k.arch, k.trial));

    let mut records = Vec::with_capacity(keyed.len());
    let mut start = 0;
    while start < keyed.len() {
        let (p, a) = (keyed[start].point, keyed[start].arch);
        let end = keyed[start..].iter().position(|k| (k.point, k.arch) != (p, a)).map_or(keyed.len(), |i| start + i);
        let block: Vec<ResultRecord> = keyed[start..end].iter().map(|k| k.record.clone()).collect();
        let aggregates = aggregate(&block);
        records.extend(block);
        records.extend(aggregates);
        start = end;
    }
    Ok(records)
}

fn channel_gain(config: &ExperimentConfig, params: &SystemParams) -> f64 {
    path_gain(&params.link_budget(), config.path_gain)
}

fn fit(config: &ExperimentConfig, arch: Architecture, params: &SystemParams, seed: u64) -> Result<Fitted> {
    let beta = channel_gain(config, params);
    let s = params.streams;
    match arch {
        Architecture::TwoLayer => {
            let topology = params.two_layer_topology()?;
            let g = sample_rayleigh_channel(params.n * s, params.m * s, beta, derive_seed(seed, stream::TWO_LAYER_CHANNEL))?;
            let problem = FitProblem::two_layer(&topology, g)?.with_attenuation(params.attenuation)?;
            let result = run_ao(&problem, &config.solver)?;
            let h = equivalent_channel(&result.state, &problem)?;
            Ok(Fitted::Solver { h, result })
        }
        Architecture::MultiLayer => {
            let topology = params.multi_layer_topology()?;
            let g = sample_rayleigh_channel(
                params.rx_atoms,
                params.tx_atoms,
                beta,
                derive_seed(seed, stream::MULTI_LAYER_CHANNEL),
            )?;
            let problem = FitProblem::multi_layer(&topology, g)?.with_attenuation(params.attenuation)?;
            let result = run_ao(&problem, &config.solver)?;
            let h = equivalent_channel(&result.state, &problem)?;
            Ok(Fitted::Solver { h, result })
        }
        Architecture::Svd => {
            let g = sample_rayleigh_channel(params.n * s, params.m * s, beta, derive_seed(seed, stream::TWO_LAYER_CHANNEL))?;
            let (p, q) = svd_ideal_transceivers(&g, s)?;
            let h = q * g * p;
            let alpha = alpha_update(&h);
            Ok(Fitted::Svd { h, alpha })
        }
        Architecture::ZeroForcing => {
            let g = sample_rayleigh_channel(s, s, beta, derive_seed(seed, stream::CONVENTIONAL_CHANNEL))?;
            Ok(Fitted::Conventional { g })
        }
    }
}

fn run_task(
    config: &ExperimentConfig,
    points: &[Option<f64>],
    group: &[usize],
    arch: Architecture,
    trial: usize,
    seed: u64,
) -> Result<Vec<(usize, ResultRecord)>> {
    let fit_params = config.system.at(config.kind, arch, points[group[0]]);
    let fitted = fit(config, arch, &fit_params, seed)?;
    let mut out = Vec::new();
    for &point in group {
        let params = config.system.at(config.kind, arch, points[point]);
        let mut base = ResultRecord::template(config, arch, points[point], &params);
        base.trial = Some(trial);
        base.trial_seed = Some(seed);
        for record in evaluate(config, arch, &params, &fitted, &base, seed, point)? {
            out.push((point, record));
        }
    }
    Ok(out)
}

fn nmse_or_nan(h: &ComplexMatrix, alpha: f64) -> f64 {
    nmse(h, alpha, h.nrows()).unwrap_or(f64::NAN)
}

fn evaluate(
    config: &ExperimentConfig,
    arch: Architecture,
    params: &SystemParams,
    fitted: &Fitted,
    base: &ResultRecord,
    seed: u64,
    point: usize,
) -> Result<Vec<ResultRecord>> {
    let (pt, n0, s) = (params.pt_watts(), params.n0_watts(), params.streams);
    let mut out = Vec::new();
    let (h, alpha, ber_inputs) = match fitted {
        Fitted::Solver { h, result } => {
            if config.kind == ExperimentKind::Convergence {
                for (i, (&j, &d)) in result.objective_trace.iter().zip(&result.nmse_trace).enumerate() {
                    for (metric, value) in [("objective", j), ("nmse", if d.is_finite() { d } else { f64::NAN })] {
                        let mut r = base.with_metric(metric, value);
                        r.iteration = Some(i);
                        out.push(r);
                    }
                }
            }
            out.push(base.with_metric("iterations", result.iterations_used as f64));
            out.push(base.with_metric("objective", result.final_objective()));
            let atoms = match arch {
                Architecture::MultiLayer => params.multi_layer_topology()?.total_atoms(),
                _ => params.two_layer_topology()?.total_atoms(),
            };
            out.push(base.with_metric("total_atoms", atoms as f64));
            let alpha = result.state.alpha;
            (h.clone(), alpha, CapacityInputs::new(h.clone(), alpha, pt, n0)?)
        }
        Fitted::Svd { h, alpha } => (h.clone(), *alpha, CapacityInputs::new(h.clone(), *alpha, pt, n0)?),
        Fitted::Conventional { g } => {
            let zf = zf_precoder(g, pt)?;
            let h = g * &zf.precoder;
            out.push(base.with_metric("alpha", zf.gain));
            out.push(base.with_metric("capacity", zf_capacity(zf.gain, n0, s)));
            if config.kind == ExperimentKind::BerCurve {
                let inputs = CapacityInputs::new(h, zf.gain, 1.0, n0)?;
                push_ber(config, &inputs, base, seed, point, &mut out)?;
            }
            return Ok(out);
        }
    };

    out.push(base.with_metric("alpha", alpha));
    out.push(base.with_metric("nmse", nmse_or_nan(&h, alpha)));
    out.push(base.with_metric("capacity", capacity_exact(&ber_inputs, config.capacity_formula)?));
    out.push(base.with_metric("capacity_bound", capacity_upper_bound(alpha, pt, n0, s)));
    match config.kind {
        ExperimentKind::Heatmap => {
            out.push(base.with_metric("off_diagonal_ratio", off_diagonal_ratio(&h)));
            for i in 0..h.nrows() {
                for j in 0..h.ncols() {
                    let mut r = base.with_metric("abs_h", h[(i, j)].norm());
                    r.row = Some(i);
                    r.col = Some(j);
                    out.push(r);
                }
            }
        }
        ExperimentKind::BerCurve => push_ber(config, &ber_inputs, base, seed, point, &mut out)?,
        _ => {}
    }
    Ok(out)
}

fn push_ber(
    config: &ExperimentConfig,
    inputs: &CapacityInputs,
    base: &ResultRecord,
    seed: u64,
    point: usize,
    out: &mut Vec<ResultRecord>,
) -> Result<()> {
    let ber_seed = derive_seed(derive_seed(seed, stream::BER_SYMBOLS), point as u64);
    let est = ber_qpsk(inputs, &BerConfig { n_symbols: config.sweep.ber_symbols, seed: ber_seed })?;
    out.push(base.with_metric("ber", est.rate()));
    out.push(base.with_metric("bit_errors", est.errors as f64));
    out.push(base.with_metric("bits", est.bits as f64));
    Ok(())
}

/// Mean and sample standard deviation over trials of every scalar metric
/// (per iteration where present). BER is also pooled over bits.
fn aggregate(block: &[ResultRecord]) -> Vec<ResultRecord> {
    type Key = (String, Option<usize>);
    let mut order: Vec<Key> = Vec::new();
    let mut groups: HashMap<Key, (ResultRecord, Vec<f64>)> = HashMap::new();
    for r in block.iter().filter(|r| r.row.is_none() && r.trial.is_some()) {
        let key = (r.metric.clone(), r.iteration);
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                let mut t = r.clone();
                t.trial = None;
                t.trial_seed = None;
                (t, Vec::new())
            })
            .1
            .push(r.value);
    }
    let mut out = Vec::new();
    for key in &order {
        let (template, values) = &groups[key];
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        out.push(template.with_metric(&format!("{}_mean", key.0), mean));
        out.push(template.with_metric(&format!("{}_std", key.0), std));
    }
    let errors = groups.get(&("bit_errors".to_string(), None));
    let bits = groups.get(&("bits".to_string(), None));
    if let (Some((template, e)), Some((_, b))) = (errors, bits) {
        let pooled = e.iter().sum::<f64>() / b.iter().sum::<f64>();
        out.push(template.with_metric("ber_pooled", pooled));
    }
    out
}

/// Least-squares fit of `log y = slope log x + intercept`; returns
/// `(slope, intercept, r_squared)`.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::invalid("log-log fit", "need at least two paired samples"));
    }
    if x.iter().chain(y).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::invalid("log-log fit", "samples must be positive"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = ly.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("log-log fit", "x values must differ"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, intercept, r2))
}

/// Sequential timing runs; parallel trials would perturb the clock.
fn run_scaling(config: &ExperimentConfig, seeds: &[u64]) -> Result<Vec<ResultRecord>> {
    let points = config.points();
    let architectures = config.architectures();
    let mut solver = config.solver;
    solver.threshold = 0.0;
    let mut records = Vec::new();
    for &arch in &architectures {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &point in &points {
            let params = config.system.at(config.kind, arch, point);
            let beta = channel_gain(config, &params);
            let s = params.streams;
            let mut block = Vec::new();
            for (trial, &seed) in seeds.iter().enumerate() {
                let problem = match arch {
                    Architecture::MultiLayer => {
                        let g = sample_rayleigh_channel(
                            params.rx_atoms,
                            params.tx_atoms,
                            beta,
                            derive_seed(seed, stream::MULTI_LAYER_CHANNEL),
                        )?;
                        FitProblem::multi_layer(&params.multi_layer_topology()?, g)?
                    }
                    _ => {
                        let g = sample_rayleigh_channel(
                            params.n * s,
                            params.m * s,
                            beta,
                            derive_seed(seed, stream::TWO_LAYER_CHANNEL),
                        )?;
                        FitProblem::two_layer(&params.two_layer_topology()?, g)?
                    }
                };
                let problem = problem.with_attenuation(params.attenuation)?;
                let mut best_total = f64::INFINITY;
                let mut best_sweep = f64::INFINITY;
                for _ in 0..config.sweep.timing_repeats {
                    let start = Instant::now();
                    let result = run_ao(&problem, &solver)?;
                    let total = start.elapsed().as_secs_f64() * 1e3;
                    best_total = best_total.min(total);
                    best_sweep = best_sweep.min(total / result.iterations_used as f64);
                }
                let mut r = ResultRecord::template(config, arch, point, &params).with_metric("sweep_ms", best_sweep);
                r.trial = Some(trial);
                r.trial_seed = Some(seed);
                r.duration_ms = Some(best_total);
                block.push(r);
            }
            let aggregates = aggregate(&block);
            if let Some(mean) = aggregates.iter().find(|r| r.metric == "sweep_ms_mean") {
                xs.push(point.unwrap_or(1.0));
                ys.push(mean.value);
            }
            records.extend(block);
            records.extend(aggregates);
        }
        if xs.len() >= 2 {
            let (slope, intercept, r2) = loglog_fit(&xs, &ys)?;
            let base = ResultRecord::template(config, arch, None, &config.system);
            records.push(base.with_metric("loglog_slope", slope));
            records.push(base.with_metric("loglog_intercept", intercept));
            records.push(base.with_metric("loglog_r_squared", r2));
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::OutputFormat;

    fn small(kind: ExperimentKind) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(kind);
        c.trials = 3;
        c.seed = 11;
        c.system.streams = 2;
        c.system.m = 3;
        c.system.n = 3;
        c.system.tx_layers = 2;
        c.system.rx_layers = 2;
        c.system.tx_atoms = 9;
        c.system.rx_atoms = 9;
        c.solver.max_iterations = 5;
        c.sweep.ber_symbols = 2000;
        c
    }

    fn values(records: &[ResultRecord], metric: &str) -> Vec<f64> {
        records.iter().filter(|r| r.metric == metric).map(|r| r.value).collect()
    }

    #[test]
    fn loglog_fit_recovers_power_law() {
        let x = [8.0, 16.0, 32.0, 64.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(2.0)).collect();
        let (slope, intercept, r2) = loglog_fit(&x, &y).unwrap();
        assert!((slope - 2.0).abs() < 1e-12);
        assert!((intercept - 3f64.ln()).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
        assert!(loglog_fit(&[1.0], &[1.0]).is_err());
        assert!(loglog_fit(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn replay_is_bit_exact_and_worker_independent() {
        for kind in [ExperimentKind::Convergence, ExperimentKind::CapacityCompare, ExperimentKind::BerCurve] {
            let mut c = small(kind);
            c.sweep.architectures = None;
            c.workers = Some(1);
            let a = run_experiment(&c).unwrap();
            c.workers = Some(4);
            let b = run_experiment(&c).unwrap();
            let mut x = Vec::new();
            let mut y = Vec::new();
            crate::harness::write_results(&a, &mut x, OutputFormat::Csv).unwrap();
            crate::harness::write_results(&b, &mut y, OutputFormat::Csv).unwrap();
            assert_eq!(x, y, "{kind:?}");
        }
    }

    #[test]
    fn seed_isolation() {
        let c = small(ExperimentKind::SweepDistance);
        let seeds: Vec<u64> = (0..3).map(|t| trial_seed(c.seed, t)).collect();
        let mut changed = seeds.clone();
        changed[1] ^= 0xdead_beef;
        let a = run_with_seeds(&c, &seeds).unwrap();
        let b = run_with_seeds(&c, &changed).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            match x.trial {
                Some(1) => assert_ne!(x.trial_seed, y.trial_seed),
                Some(_) => assert_eq!(x, y),
                None => {}
            }
        }
    }

    #[test]
    fn canonical_order() {
        let c = small(ExperimentKind::SweepAttenuation);
        let records = run_experiment(&c).unwrap();
        let points = c.values();
        let mut last = (0usize, 0usize);
        for r in &records {
            let p = points.iter().position(|v| Some(*v) == r.point).unwrap();
            let a = c.architectures().iter().position(|a| a.as_str() == r.architecture).unwrap();
            assert!((p, a) >= last);
            last = (p, a);
        }
        let block: Vec<_> = records.iter().take_while(|r| r.point == Some(points[0]) && r.architecture == "two_layer").collect();
        let first_aggregate = block.iter().position(|r| r.trial.is_none()).unwrap();
        assert!(block[..first_aggregate].windows(2).all(|w| w[0].trial <= w[1].trial));
        assert!(block[first_aggregate..].iter().all(|r| r.trial.is_none() && (r.metric.ends_with("_mean") || r.metric.ends_with("_std"))));
    }

    #[test]
    fn aggregates_are_trial_statistics() {
        let c = small(ExperimentKind::SweepDistance);
        let records = run_experiment(&c).unwrap();
        let point = Some(c.values()[0]);
        let per_trial: Vec<f64> = records
            .iter()
            .filter(|r| r.point == point && r.architecture == "two_layer" && r.metric == "capacity")
            .map(|r| r.value)
            .collect();
        assert_eq!(per_trial.len(), 3);
        let mean = per_trial.iter().sum::<f64>() / 3.0;
        let got = records
            .iter()
            .find(|r| r.point == point && r.architecture == "two_layer" && r.metric == "capacity_mean")
            .unwrap();
        assert!((got.value - mean).abs() < 1e-12 * mean);
    }

    #[test]
    fn records_state_provenance() {
        let mut c = small(ExperimentKind::SweepStreams);
        c.sweep.values = Some(vec![1.0, 2.0]);
        c.capacity_formula = crate::metrics::CapacityFormula::UnscaledInterference;
        for r in run_experiment(&c).unwrap() {
            assert_eq!(r.path_gain, "free_space_gain");
            assert_eq!(r.capacity_formula, "unscaled_interference");
            assert_eq!(Some(r.streams as f64), r.point);
            assert_eq!(r.duration_ms, None);
        }
    }

    #[test]
    fn svd_capacity_meets_bound_at_every_distance() {
        let c = small(ExperimentKind::SweepDistance);
        let records = run_experiment(&c).unwrap();
        let svd: Vec<&ResultRecord> = records.iter().filter(|r| r.architecture == "svd" && r.trial.is_some()).collect();
        let caps: Vec<f64> = svd.iter().filter(|r| r.metric == "capacity").map(|r| r.value).collect();
        let bounds: Vec<f64> = svd.iter().filter(|r| r.metric == "capacity_bound").map(|r| r.value).collect();
        assert_eq!(caps.len(), c.values().len() * 3);
        for (c, b) in caps.iter().zip(&bounds) {
            assert!((c - b).abs() < 1e-9, "{c} vs {b}");
        }
    }

    #[test]
    fn capacity_never_exceeds_bound() {
        for kind in [ExperimentKind::SweepAtoms, ExperimentKind::SweepAttenuation, ExperimentKind::CapacityCompare] {
            let mut c = small(kind);
            if kind == ExperimentKind::SweepAtoms {
                c.sweep.values = Some(vec![1.0, 2.0, 3.0]);
            }
            let records = run_experiment(&c).unwrap();
            let trial: Vec<&ResultRecord> = records.iter().filter(|r| r.trial.is_some()).collect();
            for r in trial.iter().filter(|r| r.metric == "capacity" && r.architecture != "zero_forcing") {
                let bound = trial
                    .iter()
                    .find(|b| b.metric == "capacity_bound" && b.trial == r.trial && b.point == r.point && b.architecture == r.architecture)
                    .unwrap();
                assert!(r.value <= bound.value + 1e-9);
            }
        }
    }

    #[test]
    fn convergence_traces() {
        let c = small(ExperimentKind::Convergence);
        let records = run_experiment(&c).unwrap();
        let trace: Vec<&ResultRecord> =
            records.iter().filter(|r| r.trial == Some(0) && r.metric == "objective" && r.iteration.is_some()).collect();
        assert_eq!(trace.len(), 6);
        assert!(trace.windows(2).all(|w| w[1].value <= w[0].value));
        let mean_trace = records.iter().filter(|r| r.metric == "nmse_mean" && r.iteration.is_some()).count();
        assert_eq!(mean_trace, 6);
    }

    #[test]
    fn heatmap_emits_entries() {
        let mut c = small(ExperimentKind::Heatmap);
        c.sweep.values = Some(vec![1.0, 2.0]);
        let records = run_experiment(&c).unwrap();
        let entries = records.iter().filter(|r| r.metric == "abs_h").count();
        assert_eq!(entries, 2 * 3 * 4);
        assert!(records.iter().filter(|r| r.metric == "abs_h").all(|r| r.row.is_some() && r.col.is_some()));
        assert!(records.iter().all(|r| r.metric != "abs_h_mean"));
        assert_eq!(values(&records, "off_diagonal_ratio").len(), 6);
    }

    #[test]
    fn ber_pooling() {
        let c = small(ExperimentKind::BerCurve);
        let records = run_experiment(&c).unwrap();
        let pooled = values(&records, "ber_pooled");
        assert_eq!(pooled.len(), c.values().len() * 2);
        assert!(pooled.iter().all(|p| (0.0..=1.0).contains(p)));
        let bits = values(&records, "bits");
        assert!(bits.iter().all(|&b| b == 2.0 * 2.0 * 2000.0));
    }

    #[test]
    fn scaling_records() {
        let mut c = small(ExperimentKind::ScalingBench);
        c.trials = 1;
        c.sweep.values = Some(vec![2.0, 4.0]);
        c.sweep.timing_repeats = 1;
        c.solver.max_iterations = 2;
        let records = run_experiment(&c).unwrap();
        assert!(records.iter().filter(|r| r.metric == "sweep_ms").all(|r| r.duration_ms.is_some() && r.value > 0.0));
        assert_eq!(values(&records, "loglog_slope").len(), 1);
    }
}
