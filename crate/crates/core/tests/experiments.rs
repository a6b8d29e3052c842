//! End-to-end experiment runs: figure trends, heatmap thresholds, golden output.

use std::path::PathBuf;

use simfiber_core::harness::{
    emit_results, read_results, run_experiment, Architecture, ExperimentConfig, ExperimentKind, OutputFormat,
    ResultRecord,
};

fn means(records: &[ResultRecord], arch: &str, metric: &str) -> Vec<(f64, f64)> {
    records
        .iter()
        .filter(|r| r.architecture == arch && r.metric == metric && r.iteration.is_none() && r.row.is_none())
        .map(|r| (r.point.unwrap(), r.value))
        .collect()
}

fn two_layer_only(kind: ExperimentKind) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(kind);
    c.sweep.architectures = Some(vec![Architecture::TwoLayer]);
    c.trials = 10;
    c.seed = 5;
    c
}

fn heatmap_ratios(iterations: usize) -> (f64, f64) {
    let mut c = ExperimentConfig::new(ExperimentKind::Heatmap);
    c.trials = 10;
    c.solver.max_iterations = iterations;
    assert_eq!(c.output_format(), OutputFormat::JsonLines);
    let ratio = means(&run_experiment(&c).unwrap(), "two_layer", "off_diagonal_ratio_mean");
    let at = |m: f64| ratio.iter().find(|(p, _)| *p == m).unwrap().1;
    (at(1.0), at(4.0))
}

// Cutoffs from pilot runs at the default seed: M=N=4 sits near 6e-5 after
// 20 sweeps and near 5e-8 after 50.
#[test]
fn heatmap_off_diagonal_thresholds() {
    let (one, four) = heatmap_ratios(20);
    assert!(one > 0.1, "M=N=1 ratio {one}");
    assert!(four < 1e-3, "M=N=4 ratio {four}");
    let (one, four) = heatmap_ratios(50);
    assert!(one > 0.1, "M=N=1 ratio {one}");
    assert!(four < 1e-6, "M=N=4 ratio {four}");
}

#[test]
fn nmse_falls_with_atoms() {
    let mut c = two_layer_only(ExperimentKind::SweepAtoms);
    c.sweep.values = Some(vec![1.0, 2.0, 4.0, 9.0]);
    let nmse = means(&run_experiment(&c).unwrap(), "two_layer", "nmse_mean");
    assert_eq!(nmse.len(), 4);
    for w in nmse.windows(2) {
        assert!(w[1].1 < w[0].1, "{nmse:?}");
    }
}

#[test]
fn nmse_rises_with_streams() {
    let mut c = two_layer_only(ExperimentKind::SweepStreams);
    c.system.m = 4;
    c.system.n = 4;
    c.sweep.values = Some(vec![2.0, 4.0, 6.0, 8.0]);
    let nmse = means(&run_experiment(&c).unwrap(), "two_layer", "nmse_mean");
    for w in nmse.windows(2) {
        assert!(w[1].1 > w[0].1, "{nmse:?}");
    }
}

#[test]
fn capacity_falls_with_distance() {
    let mut c = ExperimentConfig::new(ExperimentKind::SweepDistance);
    c.system.m = 9;
    c.system.n = 9;
    c.trials = 10;
    let records = run_experiment(&c).unwrap();
    for arch in ["two_layer"] {
        let cap = means(&records, arch, "capacity_mean");
        assert!(cap.len() >= 3);
        for w in cap.windows(2) {
            assert!(w[1].1 < w[0].1, "{arch}: {cap:?}");
        }
    }
    // E = 0 for the SVD transceivers, so capacity is the bound
    let svd: Vec<&ResultRecord> = records.iter().filter(|r| r.architecture == "svd" && r.trial.is_some()).collect();
    for r in svd.iter().filter(|r| r.metric == "capacity") {
        let bound = svd.iter().find(|b| b.metric == "capacity_bound" && b.trial == r.trial && b.point == r.point).unwrap();
        assert!((r.value - bound.value).abs() < 1e-9);
    }
}

#[test]
fn capacity_peaks_at_moderate_streams() {
    let mut c = two_layer_only(ExperimentKind::SweepStreams);
    c.system.m = 4;
    c.system.n = 4;
    let cap = means(&run_experiment(&c).unwrap(), "two_layer", "capacity_mean");
    let (peak, _) = cap.iter().cloned().fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let (first, last) = (cap.first().unwrap().0, cap.last().unwrap().0);
    assert!(peak > first && peak < last, "peak at S={peak}: {cap:?}");
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/convergence.csv")
}

/// Set `SIMFIBER_BLESS=1` to regenerate the golden file.
#[test]
fn convergence_golden_file() {
    let mut c = ExperimentConfig::new(ExperimentKind::Convergence);
    c.system.m = 4;
    c.system.n = 4;
    c.trials = 3;
    c.seed = 11;
    let records = run_experiment(&c).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let fresh = dir.path().join("convergence.csv");
    emit_results(&records, &fresh, OutputFormat::Csv).unwrap();
    let golden = golden_path();
    if std::env::var_os("SIMFIBER_BLESS").is_some() {
        std::fs::copy(&fresh, &golden).unwrap();
    }
    assert_eq!(std::fs::read(&fresh).unwrap(), std::fs::read(&golden).unwrap());
    assert_eq!(read_results(&golden, OutputFormat::Csv).unwrap(), records);
}
