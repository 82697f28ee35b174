//! Device parameters, gate choice, separation thresholds and the flat config
//! document they are read from.
//!
//! Every frequency in this module is linear (Hz) and every time is in seconds.
//! Angular units appear only when a Hamiltonian is assembled, through
//! [`to_angular`].
//!
//! The config document is flat TOML:
//!
//! ```toml
//! n_qubits = 4
//! g3_over_2pi_hz = 60e6        # third-order SNAIL nonlinearity / 2π (Hz)
//! lambda = 0.1                 # SNAIL-qubit hybridization, 0 < λ < 1
//! t1_s = 80e-6                 # scalar (broadcast) or one entry per qubit; `inf` allowed
//! band_lo_hz = 4.0e9
//! band_hi_hz = 5.0e9
//! gate = "iswap"               # or "sqrt_iswap"
//! target_fidelity = 0.99
//! delta_q_hz = 180e6           # min qubit-qubit separation
//! delta2_q_hz = 150e6          # min conversion-conversion separation
//! # optional: alpha_over_2pi_hz, snail_freq_hz, delta_s_hz, delta_s_conv_hz,
//! # delta4_q_hz, spectator_model ("angle_matched" | "literal" | "off"),
//! # eta_min, eta_max, eta_points, delta_min_hz, delta_max_hz, delta_points,
//! # bisect_tol_hz, resolution_hz
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::ConfigError;
use crate::scalar::Real;

/// Linear to angular frequency: `2π·f`.
pub fn to_angular<T: Real>(f: T) -> T {
    T::TAU() * f
}

/// Closed frequency interval in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(lo: f64, hi: f64) -> Result<Self, ConfigError> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(ConfigError::OutOfRange {
                key: "band",
                reason: "band edges must be finite".into(),
            });
        }
        if lo >= hi {
            return Err(ConfigError::BandwidthInverted { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, f: f64) -> bool {
        (self.lo..=self.hi).contains(&f)
    }
}

/// Physical constants of one module.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceParams {
    pub g3_over_2pi: f64,
    pub lambda: f64,
    /// One entry per qubit; `f64::INFINITY` disables damping.
    pub t1_per_qubit: Vec<f64>,
    pub n_qubits: usize,
    pub bandwidth: Band,
    /// Reported only; the two-level truncation never uses it.
    pub alpha_over_2pi: Option<f64>,
    pub snail_freq: Option<f64>,
}

impl DeviceParams {
    /// Amplitude-damping rates `1/T1`, zero for infinite lifetimes.
    pub fn decay_rates(&self) -> Vec<f64> {
        self.t1_per_qubit.iter().map(|&t| 1.0 / t).collect()
    }

    /// T1 of simulated mode `k`; modes past the qubit list reuse the last entry.
    pub fn t1_for_mode(&self, k: usize) -> f64 {
        let last = self.t1_per_qubit.len() - 1;
        self.t1_per_qubit[k.min(last)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Iswap,
    SqrtIswap,
}

impl GateKind {
    /// Rotation angle accumulated by the conversion generator.
    pub fn theta(self) -> f64 {
        match self {
            GateKind::Iswap => PI / 2.0,
            GateKind::SqrtIswap => PI / 4.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::Iswap => "iswap",
            GateKind::SqrtIswap => "sqrt_iswap",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GateKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s.to_ascii_lowercase().as_str() {
            "iswap" => Ok(GateKind::Iswap),
            "sqrt_iswap" | "sqrtiswap" | "sqrt-iswap" => Ok(GateKind::SqrtIswap),
            _ => Err(ConfigError::UnknownVariant {
                key: "gate",
                value: s.into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub target_fidelity: f64,
}

impl GateSpec {
    pub fn theta(&self) -> f64 {
        self.kind.theta()
    }
}

/// How the worst-case spectator prefactor is turned into a static rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectatorModel {
    /// Static rate whose accumulated angle over the gate equals the
    /// worst-case detuning bound.
    #[default]
    AngleMatched,
    /// Prefactor `2/(δ·ln 2)` read as a pure number with δ in MHz.
    Literal,
    /// No spectator term.
    Off,
}

impl SpectatorModel {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectatorModel::AngleMatched => "angle_matched",
            SpectatorModel::Literal => "literal",
            SpectatorModel::Off => "off",
        }
    }
}

impl FromStr for SpectatorModel {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s.to_ascii_lowercase().as_str() {
            "angle_matched" => Ok(SpectatorModel::AngleMatched),
            "literal" => Ok(SpectatorModel::Literal),
            "off" | "none" => Ok(SpectatorModel::Off),
            _ => Err(ConfigError::UnknownVariant {
                key: "spectator_model",
                value: s.into(),
            }),
        }
    }
}

/// Separation thresholds in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationConstraints {
    /// Minimum qubit-qubit separation.
    pub delta_q: f64,
    /// Minimum conversion-conversion separation.
    pub delta2_q: f64,
    /// Minimum qubit-SNAIL separation.
    pub delta_s: Option<f64>,
    /// Minimum separation between SNAIL-qubit and qubit-qubit conversions.
    pub delta_s_conv: Option<f64>,
    /// Inter-module conversion separation; parsed but not used.
    pub delta4_q: Option<f64>,
}

/// Sweep axes and solver resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub eta_min: f64,
    pub eta_max: f64,
    pub eta_points: usize,
    pub delta_min_hz: f64,
    pub delta_max_hz: f64,
    pub delta_points: usize,
    pub bisect_tol_hz: f64,
    pub resolution_hz: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            eta_min: 0.05,
            eta_max: 4.0,
            eta_points: 40,
            delta_min_hz: 10e6,
            delta_max_hz: 1e9,
            delta_points: 40,
            bisect_tol_hz: 1e6,
            resolution_hz: 1e6,
        }
    }
}

impl SweepSettings {
    pub fn eta_axis(&self) -> Vec<f64> {
        log_space(self.eta_min, self.eta_max, self.eta_points)
    }

    pub fn delta_axis(&self) -> Vec<f64> {
        log_space(self.delta_min_hz, self.delta_max_hz, self.delta_points)
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub device: DeviceParams,
    pub gate: GateSpec,
    pub separations: SeparationConstraints,
    pub spectator_model: SpectatorModel,
    pub sweep: SweepSettings,
}

const KNOWN_KEYS: &[&str] = &[
    "n_qubits",
    "g3_over_2pi_hz",
    "lambda",
    "t1_s",
    "band_lo_hz",
    "band_hi_hz",
    "gate",
    "target_fidelity",
    "delta_q_hz",
    "delta2_q_hz",
    "alpha_over_2pi_hz",
    "snail_freq_hz",
    "delta_s_hz",
    "delta_s_conv_hz",
    "delta4_q_hz",
    "spectator_model",
    "eta_min",
    "eta_max",
    "eta_points",
    "delta_min_hz",
    "delta_max_hz",
    "delta_points",
    "bisect_tol_hz",
    "resolution_hz",
];

struct Doc(Table);

impl Doc {
    fn get(&self, key: &'static str) -> Option<&Value> {
        self.0.get(key)
    }

    fn require(&self, key: &'static str) -> Result<&Value, ConfigError> {
        self.get(key).ok_or(ConfigError::MissingKey(key))
    }

    fn number(key: &'static str, v: &Value) -> Result<f64, ConfigError> {
        match v {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            Value::String(s) if s.eq_ignore_ascii_case("inf") => Ok(f64::INFINITY),
            other => Err(ConfigError::OutOfRange {
                key,
                reason: format!("expected a number, found {}", other.type_str()),
            }),
        }
    }

    fn f64(&self, key: &'static str) -> Result<f64, ConfigError> {
        Self::number(key, self.require(key)?)
    }

    fn opt_f64(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        self.get(key).map(|v| Self::number(key, v)).transpose()
    }

    fn count(&self, key: &'static str) -> Result<Option<usize>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(other) => Err(ConfigError::OutOfRange {
                key,
                reason: format!("expected a non-negative integer, found {other}"),
            }),
        }
    }

    fn string(&self, key: &'static str) -> Result<Option<&str>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(ConfigError::OutOfRange {
                key,
                reason: format!("expected a string, found {}", other.type_str()),
            }),
        }
    }
}

fn positive(key: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::OutOfRange {
            key,
            reason: format!("must be a positive finite number, got {v}"),
        })
    }
}

fn opt_positive(key: &'static str, v: Option<f64>) -> Result<Option<f64>, ConfigError> {
    v.map(|x| positive(key, x)).transpose()
}

impl Config {
    /// Parses and validates a config document.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| ConfigError::Syntax(e.message().to_string()))?;
        if let Some(k) = table.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(ConfigError::Syntax(format!("unknown key `{k}`")));
        }
        let doc = Doc(table);

        let n_qubits = doc
            .count("n_qubits")?
            .ok_or(ConfigError::MissingKey("n_qubits"))?;
        if n_qubits < 2 {
            return Err(ConfigError::OutOfRange {
                key: "n_qubits",
                reason: format!("need at least 2 qubits, got {n_qubits}"),
            });
        }
        let g3 = positive("g3_over_2pi_hz", doc.f64("g3_over_2pi_hz")?)?;
        let lambda = doc.f64("lambda")?;
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(ConfigError::OutOfRange {
                key: "lambda",
                reason: format!("must lie in (0, 1), got {lambda}"),
            });
        }

        let t1_per_qubit = match doc.require("t1_s")? {
            Value::Array(items) => items
                .iter()
                .map(|v| Doc::number("t1_s", v))
                .collect::<Result<Vec<_>, _>>()?,
            v => vec![Doc::number("t1_s", v)?; n_qubits],
        };
        if t1_per_qubit.len() != n_qubits {
            return Err(ConfigError::OutOfRange {
                key: "t1_s",
                reason: format!(
                    "expected 1 or {n_qubits} entries, got {}",
                    t1_per_qubit.len()
                ),
            });
        }
        if let Some(bad) = t1_per_qubit.iter().find(|&&t| t.is_nan() || t <= 0.0) {
            return Err(ConfigError::OutOfRange {
                key: "t1_s",
                reason: format!("lifetimes must be positive or inf, got {bad}"),
            });
        }

        let lo = doc.f64("band_lo_hz")?;
        let hi = doc.f64("band_hi_hz")?;
        let bandwidth = Band::new(lo, hi)?;
        if lo <= 0.0 {
            return Err(ConfigError::OutOfRange {
                key: "band_lo_hz",
                reason: format!("must be positive, got {lo}"),
            });
        }

        let kind: GateKind = doc
            .string("gate")?
            .ok_or(ConfigError::MissingKey("gate"))?
            .parse()?;
        let target_fidelity = doc.f64("target_fidelity")?;
        if !(target_fidelity > 0.0 && target_fidelity <= 1.0) {
            return Err(ConfigError::OutOfRange {
                key: "target_fidelity",
                reason: format!("must lie in (0, 1], got {target_fidelity}"),
            });
        }

        let separations = SeparationConstraints {
            delta_q: positive("delta_q_hz", doc.f64("delta_q_hz")?)?,
            delta2_q: positive("delta2_q_hz", doc.f64("delta2_q_hz")?)?,
            delta_s: opt_positive("delta_s_hz", doc.opt_f64("delta_s_hz")?)?,
            delta_s_conv: opt_positive("delta_s_conv_hz", doc.opt_f64("delta_s_conv_hz")?)?,
            delta4_q: opt_positive("delta4_q_hz", doc.opt_f64("delta4_q_hz")?)?,
        };

        let spectator_model = doc
            .string("spectator_model")?
            .map(str::parse)
            .transpose()?
            .unwrap_or_default();

        let d = SweepSettings::default();
        let sweep = SweepSettings {
            eta_min: positive("eta_min", doc.opt_f64("eta_min")?.unwrap_or(d.eta_min))?,
            eta_max: positive("eta_max", doc.opt_f64("eta_max")?.unwrap_or(d.eta_max))?,
            eta_points: doc.count("eta_points")?.unwrap_or(d.eta_points),
            delta_min_hz: positive(
                "delta_min_hz",
                doc.opt_f64("delta_min_hz")?.unwrap_or(d.delta_min_hz),
            )?,
            delta_max_hz: positive(
                "delta_max_hz",
                doc.opt_f64("delta_max_hz")?.unwrap_or(d.delta_max_hz),
            )?,
            delta_points: doc.count("delta_points")?.unwrap_or(d.delta_points),
            bisect_tol_hz: positive(
                "bisect_tol_hz",
                doc.opt_f64("bisect_tol_hz")?.unwrap_or(d.bisect_tol_hz),
            )?,
            resolution_hz: positive(
                "resolution_hz",
                doc.opt_f64("resolution_hz")?.unwrap_or(d.resolution_hz),
            )?,
        };
        if sweep.eta_min > sweep.eta_max {
            return Err(ConfigError::OutOfRange {
                key: "eta_max",
                reason: "eta_max must not be below eta_min".into(),
            });
        }
        if sweep.delta_min_hz > sweep.delta_max_hz {
            return Err(ConfigError::OutOfRange {
                key: "delta_max_hz",
                reason: "delta_max_hz must not be below delta_min_hz".into(),
            });
        }
        if sweep.eta_points == 0 || sweep.delta_points == 0 {
            return Err(ConfigError::OutOfRange {
                key: "eta_points",
                reason: "sweep axes need at least one point".into(),
            });
        }

        Ok(Config {
            device: DeviceParams {
                g3_over_2pi: g3,
                lambda,
                t1_per_qubit,
                n_qubits,
                bandwidth,
                alpha_over_2pi: doc.opt_f64("alpha_over_2pi_hz")?,
                snail_freq: opt_positive("snail_freq_hz", doc.opt_f64("snail_freq_hz")?)?,
            },
            gate: GateSpec {
                kind,
                target_fidelity,
            },
            separations,
            spectator_model,
            sweep,
        })
    }

    /// Serializes to the same flat document [`Config::parse`] reads.
    pub fn to_toml_string(&self) -> String {
        let mut t = Table::new();
        let mut put = |k: &str, v: Value| {
            t.insert(k.to_string(), v);
        };
        let dev = &self.device;
        put("n_qubits", Value::Integer(dev.n_qubits as i64));
        put("g3_over_2pi_hz", Value::Float(dev.g3_over_2pi));
        put("lambda", Value::Float(dev.lambda));
        put(
            "t1_s",
            Value::Array(dev.t1_per_qubit.iter().map(|&x| Value::Float(x)).collect()),
        );
        put("band_lo_hz", Value::Float(dev.bandwidth.lo));
        put("band_hi_hz", Value::Float(dev.bandwidth.hi));
        if let Some(a) = dev.alpha_over_2pi {
            put("alpha_over_2pi_hz", Value::Float(a));
        }
        if let Some(s) = dev.snail_freq {
            put("snail_freq_hz", Value::Float(s));
        }
        put("gate", Value::String(self.gate.kind.as_str().into()));
        put("target_fidelity", Value::Float(self.gate.target_fidelity));
        let sep = &self.separations;
        put("delta_q_hz", Value::Float(sep.delta_q));
        put("delta2_q_hz", Value::Float(sep.delta2_q));
        for (k, v) in [
            ("delta_s_hz", sep.delta_s),
            ("delta_s_conv_hz", sep.delta_s_conv),
            ("delta4_q_hz", sep.delta4_q),
        ] {
            if let Some(v) = v {
                put(k, Value::Float(v));
            }
        }
        put(
            "spectator_model",
            Value::String(self.spectator_model.as_str().into()),
        );
        let sw = &self.sweep;
        put("eta_min", Value::Float(sw.eta_min));
        put("eta_max", Value::Float(sw.eta_max));
        put("eta_points", Value::Integer(sw.eta_points as i64));
        put("delta_min_hz", Value::Float(sw.delta_min_hz));
        put("delta_max_hz", Value::Float(sw.delta_max_hz));
        put("delta_points", Value::Integer(sw.delta_points as i64));
        put("bisect_tol_hz", Value::Float(sw.bisect_tol_hz));
        put("resolution_hz", Value::Float(sw.resolution_hz));
        toml::to_string(&t).expect("flat table serializes")
    }
}

impl FromStr for Config {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Config::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) const ISWAP_DOC: &str = r#"
        n_qubits = 4
        g3_over_2pi_hz = 60e6
        band_lo_hz = 4.0e9
        band_hi_hz = 5.0e9
        lambda = 0.1
        t1_s = 80e-6
        gate = "iswap"
        target_fidelity = 0.99
        delta_q_hz = 180e6
        delta2_q_hz = 150e6
    "#;

    #[test]
    fn parses_iswap_reference() {
        let c = Config::parse(ISWAP_DOC).unwrap();
        assert_eq!(c.device.n_qubits, 4);
        assert_eq!(c.device.g3_over_2pi, 60e6);
        assert_eq!(c.device.bandwidth, Band { lo: 4e9, hi: 5e9 });
        assert_eq!(c.device.t1_per_qubit, vec![80e-6; 4]);
        assert_eq!(c.gate.kind, GateKind::Iswap);
        assert_eq!(c.gate.theta(), PI / 2.0);
        assert_eq!(c.spectator_model, SpectatorModel::AngleMatched);
        assert_eq!(c.sweep, SweepSettings::default());
    }

    #[test]
    fn inverted_band_is_rejected() {
        let doc = ISWAP_DOC
            .replace("band_lo_hz = 4.0e9", "band_lo_hz = 5.0e9")
            .replace("band_hi_hz = 5.0e9", "band_hi_hz = 4.0e9");
        let err = Config::parse(&doc).unwrap_err();
        assert!(matches!(err, ConfigError::BandwidthInverted { .. }));
        assert!(err.to_string().contains("bandwidth inverted"));
    }

    #[test]
    fn missing_lambda_names_the_key() {
        let doc = ISWAP_DOC.replace("lambda = 0.1", "");
        let err = Config::parse(&doc).unwrap_err();
        assert_eq!(err, ConfigError::MissingKey("lambda"));
        assert!(err.to_string().contains("lambda"));
    }

    #[test]
    fn range_checks() {
        for (from, to, key) in [
            ("lambda = 0.1", "lambda = 1.0", "lambda"),
            ("n_qubits = 4", "n_qubits = 1", "n_qubits"),
            ("t1_s = 80e-6", "t1_s = -1.0", "t1_s"),
            ("t1_s = 80e-6", "t1_s = [1e-5, 2e-5]", "t1_s"),
            (
                "target_fidelity = 0.99",
                "target_fidelity = 1.5",
                "target_fidelity",
            ),
            ("delta_q_hz = 180e6", "delta_q_hz = 0", "delta_q_hz"),
        ] {
            let err = Config::parse(&ISWAP_DOC.replace(from, to)).unwrap_err();
            assert!(err.to_string().contains(key), "{key}: {err}");
        }
        let err = Config::parse(&ISWAP_DOC.replace("\"iswap\"", "\"cz\"")).unwrap_err();
        assert!(matches!(
            err,
            ConfigError::UnknownVariant { key: "gate", .. }
        ));
        assert!(Config::parse("n_qubits = ").is_err());
        assert!(Config::parse(&format!("{ISWAP_DOC}\nbogus = 1")).is_err());
    }

    #[test]
    fn per_qubit_and_infinite_t1() {
        let c = Config::parse(&ISWAP_DOC.replace("t1_s = 80e-6", "t1_s = [inf, 1e-4, 2e-4, 3e-4]"))
            .unwrap();
        assert_eq!(c.device.t1_per_qubit[0], f64::INFINITY);
        assert_eq!(c.device.decay_rates()[0], 0.0);
        assert_eq!(c.device.t1_for_mode(7), 3e-4);
    }

    #[test]
    fn angular_conversion() {
        assert!((to_angular(60e6f64) - 3.7699111843077515e8).abs() < 1.0);
        assert_eq!(to_angular(0.0f64), 0.0);
        assert_eq!(to_angular(1.0f64), 2.0 * PI);
    }

    #[test]
    fn log_space_endpoints() {
        let v = log_space(0.05, 4.0, 40);
        assert_eq!(v.len(), 40);
        assert_eq!(v[0], 0.05);
        assert_eq!(v[39], 4.0);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    fn arb_config() -> impl Strategy<Value = Config> {
        (
            2usize..8,
            1e6f64..1e9,
            0.001f64..0.999,
            prop::collection::vec(prop_oneof![Just(f64::INFINITY), 1e-6f64..1e-3], 8),
            (1e9f64..5e9, 1e8f64..3e9),
            prop::bool::ANY,
            0.5f64..=1.0,
            (1e6f64..1e9, 1e6f64..1e9, prop::option::of(1e6f64..1e9)),
            prop_oneof![
                Just(SpectatorModel::AngleMatched),
                Just(SpectatorModel::Literal),
                Just(SpectatorModel::Off)
            ],
        )
            .prop_map(
                |(n, g3, lambda, t1, (lo, w), sqrt, f, (dq, d2, ds), model)| Config {
                    device: DeviceParams {
                        g3_over_2pi: g3,
                        lambda,
                        t1_per_qubit: t1[..n].to_vec(),
                        n_qubits: n,
                        bandwidth: Band { lo, hi: lo + w },
                        alpha_over_2pi: ds.map(|x| -x),
                        snail_freq: ds,
                    },
                    gate: GateSpec {
                        kind: if sqrt {
                            GateKind::SqrtIswap
                        } else {
                            GateKind::Iswap
                        },
                        target_fidelity: f,
                    },
                    separations: SeparationConstraints {
                        delta_q: dq,
                        delta2_q: d2,
                        delta_s: ds,
                        delta_s_conv: ds.map(|x| x * 0.5),
                        delta4_q: None,
                    },
                    spectator_model: model,
                    sweep: SweepSettings::default(),
                },
            )
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(c in arb_config()) {
            let text = c.to_toml_string();
            let back = Config::parse(&text).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
