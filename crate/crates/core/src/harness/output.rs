use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

use super::config::{Architecture, ExperimentConfig, ExperimentKind, OutputFormat, SystemParams};
use crate::optimizer::{Initialization, UpdateOrder};
use crate::{Error, Result};

/// One metric value with every parameter needed to replay it.
///
/// Aggregates over trials have `trial = None` and metric names ending in
/// `_mean` or `_std`. Per-iteration values carry `iteration`, heatmap
/// entries carry `row` and `col`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub kind: String,
    pub architecture: String,
    /// Swept value at this point, if the kind sweeps one.
    pub point: Option<f64>,
    pub trial: Option<usize>,
    pub trial_seed: Option<u64>,
    pub master_seed: u64,
    pub iteration: Option<usize>,
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub metric: String,
    /// `NaN` marks an undefined value (written as `null` in JSON lines).
    #[serde(deserialize_with = "nan_if_missing")]
    pub value: f64,
    pub streams: usize,
    pub m: usize,
    pub n: usize,
    pub tx_layers: usize,
    pub rx_layers: usize,
    pub tx_atoms: usize,
    pub rx_atoms: usize,
    pub pt_dbm: f64,
    pub n0_dbm: f64,
    pub wavelength_m: f64,
    pub distance_m: f64,
    pub path_loss_exponent: f64,
    pub rho1_mag: f64,
    pub psi1: f64,
    pub rho2_mag: f64,
    pub psi2: f64,
    pub atom_spacing_m: f64,
    pub layer_spacing_m: f64,
    pub port_spacing_m: f64,
    pub attenuation: f64,
    pub max_iterations: usize,
    pub threshold: f64,
    pub initialization: String,
    pub update_order: String,
    pub evaluation: String,
    pub path_gain: String,
    pub capacity_formula: String,
    pub ber_symbols: u64,
    /// Wall-clock time of the measured run; only `scaling_bench` sets it.
    pub duration_ms: Option<f64>,
}

/// CSV header, in field order.
pub const CSV_HEADER: [&str; 40] = [
    "kind",
    "architecture",
    "point",
    "trial",
    "trial_seed",
    "master_seed",
    "iteration",
    "row",
    "col",
    "metric",
    "value",
    "streams",
    "m",
    "n",
    "tx_layers",
    "rx_layers",
    "tx_atoms",
    "rx_atoms",
    "pt_dbm",
    "n0_dbm",
    "wavelength_m",
    "distance_m",
    "path_loss_exponent",
    "rho1_mag",
    "psi1",
    "rho2_mag",
    "psi2",
    "atom_spacing_m",
    "layer_spacing_m",
    "port_spacing_m",
    "attenuation",
    "max_iterations",
    "threshold",
    "initialization",
    "update_order",
    "evaluation",
    "path_gain",
    "capacity_formula",
    "ber_symbols",
    "duration_ms",
];

fn nan_if_missing<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl ResultRecord {
    /// Record skeleton for one point of `config`, with an empty metric.
    pub fn template(
        config: &ExperimentConfig,
        architecture: Architecture,
        point: Option<f64>,
        params: &SystemParams,
    ) -> Self {
        let initialization = match config.solver.initialization {
            Initialization::Identity => "identity".to_string(),
            Initialization::Random { seed } => format!("random:{seed}"),
        };
        let update_order = match config.solver.order {
            UpdateOrder::Ascending => "ascending".to_string(),
            UpdateOrder::Shuffled { seed } => format!("shuffled:{seed}"),
        };
        let evaluation = match config.solver.evaluation {
            crate::optimizer::CoefficientEvaluation::Direct => "direct",
            crate::optimizer::CoefficientEvaluation::Incremental => "incremental",
        };
        ResultRecord {
            kind: config.kind.as_str().to_string(),
            architecture: architecture.as_str().to_string(),
            point,
            trial: None,
            trial_seed: None,
            master_seed: config.seed,
            iteration: None,
            row: None,
            col: None,
            metric: String::new(),
            value: f64::NAN,
            streams: params.streams,
            m: params.m,
            n: params.n,
            tx_layers: params.tx_layers,
            rx_layers: params.rx_layers,
            tx_atoms: params.tx_atoms,
            rx_atoms: params.rx_atoms,
            pt_dbm: params.pt_dbm,
            n0_dbm: params.n0_dbm,
            wavelength_m: params.wavelength_m,
            distance_m: params.distance_m,
            path_loss_exponent: params.path_loss_exponent,
            rho1_mag: params.rho1_mag,
            psi1: params.psi1,
            rho2_mag: params.rho2_mag,
            psi2: params.psi2,
            atom_spacing_m: params.atom_spacing_m,
            layer_spacing_m: params.layer_spacing_m,
            port_spacing_m: params.port_spacing_m,
            attenuation: params.attenuation,
            max_iterations: config.solver.max_iterations,
            threshold: config.solver.threshold,
            initialization,
            update_order,
            evaluation: evaluation.to_string(),
            path_gain: config.path_gain.as_str().to_string(),
            capacity_formula: config.capacity_formula.as_str().to_string(),
            ber_symbols: config.sweep.ber_symbols,
            duration_ms: None,
        }
    }

    pub fn with_metric(&self, metric: &str, value: f64) -> Self {
        ResultRecord { metric: metric.to_string(), value, ..self.clone() }
    }

    pub fn kind(&self) -> Option<ExperimentKind> {
        serde_json::from_value(serde_json::Value::String(self.kind.clone())).ok()
    }
}

/// Writes `records` to `writer` in `format`.
pub fn write_results<W: Write>(records: &[ResultRecord], writer: W, format: OutputFormat) -> Result<()> {
    let io = |e: std::io::Error| Error::Io { path: "<output>".into(), source: e };
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
            w.write_record(CSV_HEADER).map_err(csv_error)?;
            for r in records {
                w.serialize(r).map_err(csv_error)?;
            }
            w.flush().map_err(io)?;
        }
        OutputFormat::JsonLines => {
            let mut w = BufWriter::new(writer);
            for r in records {
                let line = serde_json::to_string(r).map_err(|e| Error::Format { path: "<output>".into(), message: e.to_string() })?;
                w.write_all(line.as_bytes()).map_err(io)?;
                w.write_all(b"\n").map_err(io)?;
            }
            w.flush().map_err(io)?;
        }
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Format { path: "<output>".into(), message: e.to_string() }
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::Io { path: path.to_path_buf(), source },
        Error::Format { message, .. } => Error::Format { path: path.to_path_buf(), message },
        other => other,
    }
}

/// Persists `records` at `path`.
pub fn emit_results(records: &[ResultRecord], path: &Path, format: OutputFormat) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    write_results(records, file, format).map_err(|e| with_path(e, path))
}

/// Parses records written by [`write_results`].
pub fn parse_results<R: Read>(reader: R, format: OutputFormat) -> Result<Vec<ResultRecord>> {
    let format_error = |message: String| Error::Format { path: "<input>".into(), message };
    match format {
        OutputFormat::Csv => {
            let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
            let header = r.headers().map_err(|e| format_error(e.to_string()))?.clone();
            if header.iter().ne(CSV_HEADER.iter().copied()) {
                return Err(format_error("unexpected CSV header".into()));
            }
            r.deserialize().map(|row| row.map_err(|e| format_error(e.to_string()))).collect()
        }
        OutputFormat::JsonLines => {
            let mut out = Vec::new();
            for (i, line) in BufReader::new(reader).lines().enumerate() {
                let line = line.map_err(|source| Error::Io { path: "<input>".into(), source })?;
                if line.trim().is_empty() {
                    continue;
                }
                out.push(serde_json::from_str(&line).map_err(|e| format_error(format!("line {}: {e}", i + 1)))?);
            }
            Ok(out)
        }
    }
}

pub fn read_results(path: &Path, format: OutputFormat) -> Result<Vec<ResultRecord>> {
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_results(file, format).map_err(|e| with_path(e, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ResultRecord> {
        let config = ExperimentConfig::new(ExperimentKind::SweepDistance);
        let params = config.system;
        let base = ResultRecord::template(&config, Architecture::TwoLayer, Some(150.0), &params);
        let mut a = base.with_metric("capacity", 31.25);
        a.trial = Some(0);
        a.trial_seed = Some(u64::MAX);
        let mut b = base.with_metric("nmse", 1.234_567_890_123_456_7e-17);
        b.iteration = Some(3);
        let mut c = base.with_metric("sweep_ms", 0.1 + 0.2);
        c.duration_ms = Some(12.5);
        c.row = Some(1);
        c.col = Some(2);
        vec![a, b, c]
    }

    #[test]
    fn header_matches_field_order() {
        let mut buf = Vec::new();
        let mut w = csv::Writer::from_writer(&mut buf);
        w.serialize(&sample()[0]).unwrap();
        drop(w);
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_results(&[], &mut buf, OutputFormat::Csv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", CSV_HEADER.join(",")));
        let mut buf = Vec::new();
        write_results(&[], &mut buf, OutputFormat::JsonLines).unwrap();
        assert!(buf.is_empty());
    }

    #[test]
    fn round_trip_both_formats() {
        let records = sample();
        for format in [OutputFormat::Csv, OutputFormat::JsonLines] {
            let mut buf = Vec::new();
            write_results(&records, &mut buf, format).unwrap();
            assert_eq!(parse_results(buf.as_slice(), format).unwrap(), records);
        }
    }

    #[test]
    fn nan_survives_as_nan() {
        let mut records = sample();
        records[0].value = f64::NAN;
        for format in [OutputFormat::Csv, OutputFormat::JsonLines] {
            let mut buf = Vec::new();
            write_results(&records, &mut buf, format).unwrap();
            assert!(parse_results(buf.as_slice(), format).unwrap()[0].value.is_nan());
        }
    }

    #[test]
    fn file_round_trip_and_io_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        emit_results(&sample(), &path, OutputFormat::Csv).unwrap();
        assert_eq!(read_results(&path, OutputFormat::Csv).unwrap(), sample());
        let missing = dir.path().join("no/such/dir/out.csv");
        match emit_results(&sample(), &missing, OutputFormat::Csv) {
            Err(Error::Io { path, .. }) => assert_eq!(path, missing),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_foreign_csv() {
        assert!(parse_results("a,b\n1,2\n".as_bytes(), OutputFormat::Csv).is_err());
        assert!(parse_results("{not json}\n".as_bytes(), OutputFormat::JsonLines).is_err());
    }

    #[test]
    fn kind_parses_back() {
        assert_eq!(sample()[0].kind(), Some(ExperimentKind::SweepDistance));
    }
}
