use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{GridShape, LinkBudget, MultiLayerTopology, PathGainConvention, TwoLayerTopology};
use crate::metrics::CapacityFormula;
use crate::optimizer::SolverConfig;
use crate::units::dbm_to_watts;
use crate::{Error, Result};

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Per-sweep objective and NMSE traces.
    Convergence,
    /// `|H_ij|` of the fitted channel for a few atom counts.
    Heatmap,
    /// Sub-area size `M = N` (or `W = U` for multi-layer).
    SweepAtoms,
    SweepStreams,
    SweepDistance,
    SweepAttenuation,
    /// Capacity of every architecture over a transmit-power grid.
    CapacityCompare,
    /// QPSK BER over a transmit-power grid.
    BerCurve,
    /// Wall-clock time per AO sweep against `M`.
    ScalingBench,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::Heatmap => "heatmap",
            ExperimentKind::SweepAtoms => "sweep_atoms",
            ExperimentKind::SweepStreams => "sweep_streams",
            ExperimentKind::SweepDistance => "sweep_distance",
            ExperimentKind::SweepAttenuation => "sweep_attenuation",
            ExperimentKind::CapacityCompare => "capacity_compare",
            ExperimentKind::BerCurve => "ber_curve",
            ExperimentKind::ScalingBench => "scaling_bench",
        }
    }

    /// Values swept when the config gives none.
    pub fn default_values(&self) -> Vec<f64> {
        match self {
            ExperimentKind::Convergence => vec![],
            ExperimentKind::Heatmap => vec![1.0, 4.0],
            ExperimentKind::SweepAtoms => vec![1.0, 2.0, 4.0, 6.0, 9.0, 12.0, 16.0, 20.0, 25.0],
            ExperimentKind::SweepStreams => vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
            ExperimentKind::SweepDistance => vec![50.0, 100.0, 150.0, 200.0, 250.0, 300.0],
            ExperimentKind::SweepAttenuation => vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
            ExperimentKind::CapacityCompare => vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            ExperimentKind::BerCurve => vec![-40.0, -35.0, -30.0, -25.0, -20.0, -15.0],
            ExperimentKind::ScalingBench => vec![8.0, 16.0, 32.0, 64.0],
        }
    }

    pub fn default_architectures(&self) -> Vec<Architecture> {
        use Architecture::*;
        match self {
            ExperimentKind::Convergence | ExperimentKind::Heatmap => vec![TwoLayer],
            ExperimentKind::SweepAtoms | ExperimentKind::SweepStreams => vec![TwoLayer],
            ExperimentKind::SweepDistance => vec![TwoLayer, Svd],
            ExperimentKind::SweepAttenuation | ExperimentKind::BerCurve => vec![TwoLayer, MultiLayer],
            ExperimentKind::CapacityCompare => vec![TwoLayer, MultiLayer, ZeroForcing],
            ExperimentKind::ScalingBench => vec![TwoLayer],
        }
    }

    /// Kinds whose swept value only changes the transmit power, so one fit
    /// per trial serves every point.
    pub fn sweeps_power(&self) -> bool {
        matches!(self, ExperimentKind::CapacityCompare | ExperimentKind::BerCurve)
    }

    fn needs_solver(&self) -> bool {
        matches!(self, ExperimentKind::Convergence | ExperimentKind::Heatmap | ExperimentKind::ScalingBench)
    }
}

/// Transceiver architecture evaluated at each point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    /// Meta-fiber 2-layer SIMs fitted by AO.
    TwoLayer,
    /// Diffraction multi-layer SIMs fitted by AO.
    MultiLayer,
    /// SVD-ideal transceivers on the 2-layer channel dimensions.
    Svd,
    /// Zero-forcing over an `S x S` conventional MIMO channel.
    ZeroForcing,
}

impl Architecture {
    pub fn as_str(&self) -> &'static str {
        match self {
            Architecture::TwoLayer => "two_layer",
            Architecture::MultiLayer => "multi_layer",
            Architecture::Svd => "svd",
            Architecture::ZeroForcing => "zero_forcing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutputFormat {
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "jsonl")]
    JsonLines,
}

impl OutputFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::JsonLines => "jsonl",
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Config { field: "kind".into(), message: format!("unknown experiment kind `{s}`") })
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" | "json_lines" => Ok(OutputFormat::JsonLines),
            other => Err(Error::Config { field: "format".into(), message: format!("unknown format `{other}`") }),
        }
    }
}

/// Physical and architectural parameters. Powers are in dBm, lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    pub streams: usize,
    /// Per-stream transmit power.
    pub pt_dbm: f64,
    pub n0_dbm: f64,
    pub wavelength_m: f64,
    pub distance_m: f64,
    pub path_loss_exponent: f64,
    /// TX sub-area size `M` of the 2-layer SIM.
    pub m: usize,
    /// RX sub-area size `N` of the 2-layer SIM.
    pub n: usize,
    pub rho1_mag: f64,
    pub psi1: f64,
    pub rho2_mag: f64,
    pub psi2: f64,
    pub tx_layers: usize,
    pub rx_layers: usize,
    /// Atoms per TX layer of the multi-layer SIM (a perfect square).
    pub tx_atoms: usize,
    pub rx_atoms: usize,
    pub atom_spacing_m: f64,
    pub layer_spacing_m: f64,
    pub port_spacing_m: f64,
    /// Energy fraction lost per layer, applied to every layer matrix.
    pub attenuation: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            streams: 4,
            pt_dbm: 20.0,
            n0_dbm: -110.0,
            wavelength_m: 0.0107,
            distance_m: 150.0,
            path_loss_exponent: 3.5,
            m: 25,
            n: 25,
            rho1_mag: 1.0,
            psi1: 0.0,
            rho2_mag: 1.0,
            psi2: 0.0,
            tx_layers: 7,
            rx_layers: 7,
            tx_atoms: 100,
            rx_atoms: 100,
            atom_spacing_m: 0.00535,
            layer_spacing_m: 0.00535,
            port_spacing_m: 0.00535,
            attenuation: 0.0,
        }
    }
}

impl SystemParams {
    pub fn pt_watts(&self) -> f64 {
        dbm_to_watts(self.pt_dbm)
    }

    pub fn n0_watts(&self) -> f64 {
        dbm_to_watts(self.n0_dbm)
    }

    pub fn link_budget(&self) -> LinkBudget {
        LinkBudget {
            wavelength: self.wavelength_m,
            distance_m: self.distance_m,
            gamma: self.path_loss_exponent,
            pt: self.pt_watts(),
            n0: self.n0_watts(),
        }
    }

    pub fn two_layer_topology(&self) -> Result<TwoLayerTopology> {
        TwoLayerTopology::with_fibers(self.streams, self.m, self.n, self.rho1_mag, self.psi1, self.rho2_mag, self.psi2)
    }

    pub fn multi_layer_topology(&self) -> Result<MultiLayerTopology> {
        let topology = MultiLayerTopology {
            streams: self.streams,
            tx_layers: self.tx_layers,
            rx_layers: self.rx_layers,
            tx_grid: GridShape::square(self.tx_atoms)?,
            rx_grid: GridShape::square(self.rx_atoms)?,
            atom_spacing: self.atom_spacing_m,
            layer_spacing: self.layer_spacing_m,
            port_spacing: self.port_spacing_m,
            atom_area: self.atom_spacing_m * self.atom_spacing_m,
            wavelength: self.wavelength_m,
        };
        topology.validate()?;
        Ok(topology)
    }

    /// Parameters at one sweep point.
    pub fn at(&self, kind: ExperimentKind, architecture: Architecture, value: Option<f64>) -> SystemParams {
        let mut p = *self;
        let Some(v) = value else { return p };
        match kind {
            ExperimentKind::Convergence => {}
            ExperimentKind::Heatmap | ExperimentKind::SweepAtoms | ExperimentKind::ScalingBench => match architecture {
                Architecture::MultiLayer => {
                    p.tx_atoms = v as usize;
                    p.rx_atoms = v as usize;
                }
                _ => {
                    p.m = v as usize;
                    p.n = v as usize;
                }
            },
            ExperimentKind::SweepStreams => p.streams = v as usize,
            ExperimentKind::SweepDistance => p.distance_m = v,
            ExperimentKind::SweepAttenuation => p.attenuation = v,
            ExperimentKind::CapacityCompare | ExperimentKind::BerCurve => p.pt_dbm = v,
        }
        p
    }

    fn validate(&self, architectures: &[Architecture]) -> Result<()> {
        let counts = [("streams", self.streams), ("m", self.m), ("n", self.n)];
        for (name, v) in counts {
            if v == 0 {
                return Err(field_error(format!("system.{name}"), "must be >= 1"));
            }
        }
        let positive = [
            ("wavelength_m", self.wavelength_m),
            ("distance_m", self.distance_m),
            ("path_loss_exponent", self.path_loss_exponent),
            ("atom_spacing_m", self.atom_spacing_m),
            ("layer_spacing_m", self.layer_spacing_m),
            ("port_spacing_m", self.port_spacing_m),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(field_error(format!("system.{name}"), format!("must be positive, got {v}")));
            }
        }
        let finite = [("pt_dbm", self.pt_dbm), ("n0_dbm", self.n0_dbm), ("psi1", self.psi1), ("psi2", self.psi2)];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(field_error(format!("system.{name}"), "must be finite"));
            }
        }
        let fibers = [("rho1_mag", self.rho1_mag), ("rho2_mag", self.rho2_mag)];
        for (name, v) in fibers {
            if !(v.is_finite() && v > 0.0 && v <= 1.0) {
                return Err(field_error(format!("system.{name}"), format!("must lie in (0, 1], got {v}")));
            }
        }
        if !(0.0..1.0).contains(&self.attenuation) {
            return Err(field_error("system.attenuation", format!("must lie in [0, 1), got {}", self.attenuation)));
        }
        if architectures.contains(&Architecture::MultiLayer) {
            for (name, v) in [("tx_layers", self.tx_layers), ("rx_layers", self.rx_layers)] {
                if v == 0 {
                    return Err(field_error(format!("system.{name}"), "must be >= 1"));
                }
            }
            for (name, v) in [("tx_atoms", self.tx_atoms), ("rx_atoms", self.rx_atoms)] {
                if GridShape::square(v).is_err() || v == 0 {
                    return Err(field_error(format!("system.{name}"), format!("must be a nonzero perfect square, got {v}")));
                }
            }
        }
        Ok(())
    }
}

/// Sweep grid and per-kind knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepParams {
    /// Swept values; their meaning depends on the experiment kind.
    pub values: Option<Vec<f64>>,
    pub architectures: Option<Vec<Architecture>>,
    /// Symbol vectors per trial and point for BER.
    pub ber_symbols: u64,
    /// Timed repetitions per point in `scaling_bench`; the fastest counts.
    pub timing_repeats: usize,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams { values: None, architectures: None, ber_symbols: 100_000, timing_repeats: 3 }
    }
}

/// One experiment, as read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Master seed; trial seeds are derived from it.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
    /// Worker threads; defaults to the number of cores.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub path_gain: PathGainConvention,
    #[serde(default)]
    pub capacity_formula: CapacityFormula,
    #[serde(default)]
    pub system: SystemParams,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub sweep: SweepParams,
}

fn default_trials() -> usize {
    10
}

/// Dotted path of the key a TOML error points at, best effort.
fn toml_error_field(text: &str, e: &toml::de::Error) -> String {
    let message = e.message();
    let quoted = ["unknown field `", "missing field `"]
        .iter()
        .find_map(|p| message.split_once(p))
        .and_then(|(_, rest)| rest.split_once('`'))
        .map(|(name, _)| name.to_string());
    let Some(span) = e.span() else {
        return quoted.unwrap_or_else(|| "<document>".into());
    };
    let before = &text[..span.start.min(text.len())];
    let table = before
        .lines()
        .filter_map(|l| l.trim().strip_prefix('[').and_then(|l| l.strip_suffix(']')))
        .next_back()
        .map(|t| t.trim().to_string());
    let key = quoted.or_else(|| {
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let line = text[line_start..].lines().next().unwrap_or("");
        line.split_once('=').map(|(k, _)| k.trim().to_string())
    });
    match (table, key) {
        (Some(t), Some(k)) if !k.is_empty() => format!("{t}.{k}"),
        (None, Some(k)) if !k.is_empty() => k,
        (Some(t), _) => t,
        _ => "<document>".into(),
    }
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config { field: field.into(), message: message.into() }
}

impl ExperimentConfig {
    /// Defaults for `kind`.
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            trials: default_trials(),
            seed: 0,
            output: None,
            format: None,
            workers: None,
            path_gain: PathGainConvention::default(),
            capacity_formula: CapacityFormula::default(),
            system: SystemParams::default(),
            solver: SolverConfig::default(),
            sweep: SweepParams::default(),
        }
    }

    /// Parses and validates a TOML document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text)
            .map_err(|e| Error::Config { field: toml_error_field(text, &e), message: e.message().to_string() })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    pub fn values(&self) -> Vec<f64> {
        self.sweep.values.clone().unwrap_or_else(|| self.kind.default_values())
    }

    pub fn architectures(&self) -> Vec<Architecture> {
        self.sweep.architectures.clone().unwrap_or_else(|| self.kind.default_architectures())
    }

    pub fn output_format(&self) -> OutputFormat {
        self.format.unwrap_or(match self.kind {
            ExperimentKind::Heatmap => OutputFormat::JsonLines,
            _ => OutputFormat::Csv,
        })
    }

    /// Sweep points as `(index, value)`; a single unvalued point for
    /// `convergence`.
    pub fn points(&self) -> Vec<Option<f64>> {
        match self.kind {
            ExperimentKind::Convergence => vec![None],
            _ => self.values().into_iter().map(Some).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(field_error("trials", "must be >= 1"));
        }
        if self.workers == Some(0) {
            return Err(field_error("workers", "must be >= 1"));
        }
        self.solver.validate().map_err(|e| field_error("solver", e.to_string()))?;
        if self.sweep.ber_symbols == 0 {
            return Err(field_error("sweep.ber_symbols", "must be >= 1"));
        }
        if self.sweep.timing_repeats == 0 {
            return Err(field_error("sweep.timing_repeats", "must be >= 1"));
        }

        let architectures = self.architectures();
        if architectures.is_empty() {
            return Err(field_error("sweep.architectures", "must not be empty"));
        }
        for (i, a) in architectures.iter().enumerate() {
            if architectures[..i].contains(a) {
                return Err(field_error("sweep.architectures", format!("`{}` listed twice", a.as_str())));
            }
            let solver_only = self.kind.needs_solver();
            if solver_only && !matches!(a, Architecture::TwoLayer | Architecture::MultiLayer) {
                return Err(field_error(
                    "sweep.architectures",
                    format!("`{}` has no solver trace for kind `{}`", a.as_str(), self.kind.as_str()),
                ));
            }
        }

        let values = self.values();
        if self.kind != ExperimentKind::Convergence && values.is_empty() {
            return Err(field_error("sweep.values", "must not be empty"));
        }
        if self.kind == ExperimentKind::Convergence && self.sweep.values.is_some() {
            return Err(field_error("sweep.values", "convergence runs a single point"));
        }
        for &v in &values {
            self.check_value(v)?;
        }

        self.system.validate(&architectures)?;
        for value in self.points() {
            for &a in &architectures {
                self.system.at(self.kind, a, value).validate(&architectures)?;
            }
        }
        Ok(())
    }

    fn check_value(&self, v: f64) -> Result<()> {
        let bad = |message: String| Err(field_error("sweep.values", message));
        if !v.is_finite() {
            return bad(format!("{v} is not finite"));
        }
        let counting = matches!(
            self.kind,
            ExperimentKind::Heatmap | ExperimentKind::SweepAtoms | ExperimentKind::SweepStreams | ExperimentKind::ScalingBench
        );
        if counting && (v < 1.0 || v.fract() != 0.0) {
            return bad(format!("{v} is not a positive integer"));
        }
        match self.kind {
            ExperimentKind::SweepDistance if v <= 0.0 => bad(format!("distance {v} must be positive")),
            ExperimentKind::SweepAttenuation if !(0.0..1.0).contains(&v) => bad(format!("attenuation {v} must lie in [0, 1)")),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_the_operating_point() {
        let c = ExperimentConfig::new(ExperimentKind::SweepDistance);
        assert_eq!(c.system.streams, 4);
        assert_eq!((c.system.m, c.system.n), (25, 25));
        assert_eq!((c.system.tx_layers, c.system.tx_atoms), (7, 100));
        assert_eq!(c.solver.max_iterations, 20);
        assert!((c.system.pt_watts() - 0.1).abs() < 1e-15);
        assert!((c.system.n0_watts() - 1e-14).abs() < 1e-28);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn minimal_toml() {
        let c = ExperimentConfig::from_toml_str("kind = \"convergence\"\n").unwrap();
        assert_eq!(c, ExperimentConfig::new(ExperimentKind::Convergence));
    }

    #[test]
    fn full_toml_round_trip() {
        let mut c = ExperimentConfig::new(ExperimentKind::SweepAtoms);
        c.trials = 3;
        c.seed = 42;
        c.sweep.values = Some(vec![1.0, 4.0, 9.0]);
        c.sweep.architectures = Some(vec![Architecture::TwoLayer, Architecture::MultiLayer]);
        c.system.attenuation = 0.1;
        c.path_gain = PathGainConvention::FreeSpaceLoss;
        c.capacity_formula = CapacityFormula::UnscaledInterference;
        c.format = Some(OutputFormat::JsonLines);
        let text = c.to_toml_string();
        assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), c);
    }

    #[test]
    fn nested_tables_and_enums() {
        let text = r#"
kind = "ber_curve"
trials = 2
seed = 7
path_gain = "free_space_loss"
capacity_formula = "unscaled_interference"

[system]
streams = 2
m = 5

[solver]
max_iterations = 4
initialization = { random = { seed = 3 } }
order = "ascending"
evaluation = "incremental"

[sweep]
values = [-10.0, 0.0]
architectures = ["two_layer", "zero_forcing"]
ber_symbols = 1000
"#;
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(c.system.streams, 2);
        assert_eq!(c.system.n, 25);
        assert_eq!(c.solver.max_iterations, 4);
        assert_eq!(c.solver.initialization, crate::optimizer::Initialization::Random { seed: 3 });
        assert_eq!(c.architectures(), vec![Architecture::TwoLayer, Architecture::ZeroForcing]);
    }

    fn config_error(text: &str) -> (String, String) {
        match ExperimentConfig::from_toml_str(text) {
            Err(Error::Config { field, message }) => (field, message),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let (field, message) = config_error("kind = \"heatmap\"\ncolour = 3\n");
        assert_eq!(field, "colour");
        assert!(message.contains("unknown field"), "{message}");
        let (field, _) = config_error("kind = \"heatmap\"\n[system]\nstreamz = 3\n");
        assert_eq!(field, "system.streamz");
        assert_eq!(config_error("kind = \"heatmap\"\n[system]\nstreams = \"x\"\n").0, "system.streams");
        assert_eq!(config_error("trials = 3\n").0, "kind");
        assert!(ExperimentConfig::from_toml_str("kind = \"nope\"\n").is_err());
        assert!(ExperimentConfig::from_toml_str("trials = 3\n").is_err());
    }

    #[test]
    fn field_level_validation() {
        assert_eq!(config_error("kind = \"heatmap\"\ntrials = 0\n").0, "trials");
        assert_eq!(config_error("kind = \"heatmap\"\n[system]\nstreams = 0\n").0, "system.streams");
        assert_eq!(config_error("kind = \"heatmap\"\n[system]\ndistance_m = -1.0\n").0, "system.distance_m");
        assert_eq!(config_error("kind = \"heatmap\"\n[system]\nattenuation = 1.0\n").0, "system.attenuation");
        assert_eq!(config_error("kind = \"heatmap\"\n[system]\nrho1_mag = 1.5\n").0, "system.rho1_mag");
        assert_eq!(config_error("kind = \"sweep_attenuation\"\n[system]\ntx_atoms = 50\n").0, "system.tx_atoms");
        assert_eq!(config_error("kind = \"sweep_atoms\"\n[sweep]\nvalues = [2.5]\n").0, "sweep.values");
        assert_eq!(config_error("kind = \"sweep_attenuation\"\n[sweep]\nvalues = [1.2]\n").0, "sweep.values");
        assert_eq!(config_error("kind = \"sweep_atoms\"\n[sweep]\nvalues = []\n").0, "sweep.values");
        assert_eq!(config_error("kind = \"convergence\"\n[sweep]\nvalues = [1.0]\n").0, "sweep.values");
        assert_eq!(config_error("kind = \"heatmap\"\n[sweep]\narchitectures = [\"svd\"]\n").0, "sweep.architectures");
        assert_eq!(config_error("kind = \"heatmap\"\n[solver]\nmax_iterations = 0\n").0, "solver");
        assert_eq!(config_error("kind = \"heatmap\"\nworkers = 0\n").0, "workers");
        assert_eq!(
            config_error("kind = \"sweep_atoms\"\n[sweep]\nvalues = [4.0, 5.0]\narchitectures = [\"multi_layer\"]\n").0,
            "system.tx_atoms"
        );
    }

    #[test]
    fn sweep_point_parameters() {
        let base = SystemParams::default();
        assert_eq!(base.at(ExperimentKind::SweepAtoms, Architecture::TwoLayer, Some(9.0)).m, 9);
        let multi = base.at(ExperimentKind::SweepAtoms, Architecture::MultiLayer, Some(49.0));
        assert_eq!((multi.tx_atoms, multi.m), (49, 25));
        assert_eq!(base.at(ExperimentKind::SweepStreams, Architecture::Svd, Some(2.0)).streams, 2);
        assert_eq!(base.at(ExperimentKind::BerCurve, Architecture::TwoLayer, Some(-3.0)).pt_dbm, -3.0);
        assert_eq!(base.at(ExperimentKind::Convergence, Architecture::TwoLayer, None), base);
    }

    #[test]
    fn output_format_defaults_and_parsing() {
        assert_eq!(ExperimentConfig::new(ExperimentKind::Heatmap).output_format(), OutputFormat::JsonLines);
        assert_eq!(ExperimentConfig::new(ExperimentKind::SweepAtoms).output_format(), OutputFormat::Csv);
        assert_eq!("jsonl".parse::<OutputFormat>().unwrap(), OutputFormat::JsonLines);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
