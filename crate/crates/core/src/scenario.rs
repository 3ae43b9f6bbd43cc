//! Scenario files: the JSON schema describing a complete simulation setup.
//!
//! Angles accept either plain numbers (radians) or `pi`-expression strings
//! such as `"pi/2"`, `"0.3pi"` or `"-3pi/4"`, so reference configurations
//! stay exact instead of being truncated to decimal radians. Unknown fields
//! are rejected.
//!
//! ```json
//! {
//!   "name": "example",
//!   "n": 2,
//!   "omega": 1.0,
//!   "edges": [[1, 2], [2, 1]],
//!   "oscillators": [
//!     { "prc": "negative_sine", "gain": 0.4 },
//!     { "prc": { "kind": "sawtooth" }, "gain": 0.5 }
//!   ],
//!   "initial_phases": ["0", "pi/2"],
//!   "t_max": 100.0,
//!   "sample_dt": 0.25
//! }
//! ```

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::engine::{NetworkConfig, StopRule, EPS_FIRE};
use crate::error::{Error, Result};
use crate::monitors::{
    EnabledChecks, MonitorSettings, CHECK_ARC_CONTAINMENT, CHECK_DIAMETER_MONOTONE,
    CHECK_FIRING_GAPS, CHECK_ROUND_CONTRACTION, DEFAULT_SYNC_EPSILON,
};
use crate::phase::{Phase, PhaseVector, EPS_GEOM};
use crate::prc::{OscillatorProfile, PhaseResponseCurve, PrcKind};
use crate::topology::Topology;

/// A number that may be written as a `pi`-expression string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PiValue {
    Number(f64),
    Expr(String),
}

impl PiValue {
    pub fn value(&self) -> Result<f64> {
        match self {
            PiValue::Number(v) => {
                if v.is_finite() {
                    Ok(*v)
                } else {
                    Err(Error::Scenario(format!("non-finite number {v}")))
                }
            }
            PiValue::Expr(s) => parse_pi_expr(s),
        }
    }
}

/// Parses `[sign][coefficient]pi[/divisor]` or a plain decimal literal.
pub fn parse_pi_expr(s: &str) -> Result<f64> {
    let bad = || Error::Scenario(format!("invalid angle literal `{s}`"));
    let t = s.trim().to_ascii_lowercase();
    if t.is_empty() {
        return Err(bad());
    }
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(&t)),
    };
    let idx = body.find("pi").ok_or_else(bad)?;
    let coef_str = body[..idx].trim();
    let coef: f64 = if coef_str.is_empty() {
        1.0
    } else {
        coef_str.parse().map_err(|_| bad())?
    };
    let tail = body[idx + 2..].trim();
    let divisor: f64 = if tail.is_empty() {
        1.0
    } else if let Some(d) = tail.strip_prefix('/') {
        let d: f64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0.0 {
            return Err(bad());
        }
        d
    } else {
        return Err(bad());
    };
    let v = sign * coef * PI / divisor;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrcDetail {
    pub kind: PrcKind,
    #[serde(default)]
    pub breakpoints: Option<Vec<(PiValue, PiValue)>>,
    #[serde(default)]
    pub value_at_pi: Option<PiValue>,
}

/// Either a bare kind name or a detailed object with parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PrcSpec {
    Named(PrcKind),
    Detailed(PrcDetail),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSpec {
    pub prc: PrcSpec,
    pub gain: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_eps_fire")]
    pub eps_fire: f64,
    #[serde(default = "default_eps_sync")]
    pub eps_sync: f64,
    #[serde(default = "default_eps_geom")]
    pub eps_geom: f64,
}

fn default_eps_fire() -> f64 {
    EPS_FIRE
}

fn default_eps_sync() -> f64 {
    crate::monitors::DEFAULT_EPS_SYNC
}

fn default_eps_geom() -> f64 {
    EPS_GEOM
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_fire: default_eps_fire(),
            eps_sync: default_eps_sync(),
            eps_geom: default_eps_geom(),
        }
    }
}

/// A complete scenario: network, initial state, horizon, tolerances,
/// enabled monitors and output location.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: Option<String>,
    pub n: usize,
    pub omega: PiValue,
    /// Influence arcs `[from, to]`, 1-indexed.
    pub edges: Vec<(usize, usize)>,
    pub oscillators: Vec<OscillatorSpec>,
    pub initial_phases: Vec<PiValue>,
    /// Time horizon in seconds.
    pub t_max: f64,
    #[serde(default)]
    pub sample_dt: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Names of enabled monitor checks; absent means all.
    #[serde(default)]
    pub monitors: Option<Vec<String>>,
    /// Diameter threshold for synchronization detection.
    #[serde(default)]
    pub sync_epsilon: Option<f64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ScenarioFile {
    pub fn from_str(text: &str) -> Result<Self> {
        // serde_json diagnostics carry "at line L column C".
        serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    /// Display name: explicit `name` field, falling back to `unnamed`.
    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or("unnamed")
    }

    pub fn build_topology(&self) -> Result<Topology> {
        let mut arcs = Vec::with_capacity(self.edges.len());
        for &(from, to) in &self.edges {
            if from == 0 || from > self.n || to == 0 || to > self.n {
                return Err(Error::Scenario(format!(
                    "edge [{from}, {to}] out of range for n = {} (edges are 1-indexed)",
                    self.n
                )));
            }
            arcs.push((from - 1, to - 1));
        }
        Topology::new(self.n, &arcs)
    }

    fn build_profile(&self, spec: &OscillatorSpec) -> Result<OscillatorProfile> {
        let prc = match &spec.prc {
            PrcSpec::Named(kind) => named_prc(*kind)?,
            PrcSpec::Detailed(detail) => {
                let mut prc = match detail.kind {
                    PrcKind::Tabulated => {
                        let raw = detail.breakpoints.as_ref().ok_or_else(|| {
                            Error::Scenario("tabulated PRC needs breakpoints".into())
                        })?;
                        let mut pts = Vec::with_capacity(raw.len());
                        for (a, v) in raw {
                            pts.push((a.value()?, v.value()?));
                        }
                        PhaseResponseCurve::tabulated(pts)?
                    }
                    kind => {
                        if detail.breakpoints.is_some() {
                            return Err(Error::Scenario(
                                "breakpoints are only valid for the tabulated kind".into(),
                            ));
                        }
                        named_prc(kind)?
                    }
                };
                if let Some(v) = &detail.value_at_pi {
                    prc = prc.with_value_at_pi(v.value()?);
                }
                prc
            }
        };
        OscillatorProfile::new(prc, spec.gain)
    }

    /// Builds the full network configuration, validating every field.
    pub fn build_config(&self) -> Result<NetworkConfig> {
        if self.oscillators.len() != self.n {
            return Err(Error::Scenario(format!(
                "{} oscillator entries for n = {}",
                self.oscillators.len(),
                self.n
            )));
        }
        if self.initial_phases.len() != self.n {
            return Err(Error::Scenario(format!(
                "{} initial phases for n = {}",
                self.initial_phases.len(),
                self.n
            )));
        }
        let topology = self.build_topology()?;
        let profiles = self
            .oscillators
            .iter()
            .map(|spec| self.build_profile(spec))
            .collect::<Result<Vec<_>>>()?;
        let phases = self
            .initial_phases
            .iter()
            .map(|v| Phase::new(v.value()?))
            .collect::<Result<Vec<_>>>()?;
        let initial = PhaseVector::new(phases)?;
        NetworkConfig::new(self.omega.value()?, profiles, topology, initial)?
            .with_eps_fire(self.tolerances.eps_fire)
    }

    pub fn stop_rule(&self) -> StopRule {
        StopRule::at_time(self.t_max)
    }

    pub fn monitor_settings(&self) -> Result<MonitorSettings> {
        let enabled = match &self.monitors {
            None => EnabledChecks::default(),
            Some(names) => {
                let mut enabled = EnabledChecks {
                    diameter_monotone: false,
                    firing_gaps: false,
                    arc_containment: false,
                    round_contraction: false,
                };
                for name in names {
                    match name.as_str() {
                        CHECK_DIAMETER_MONOTONE => enabled.diameter_monotone = true,
                        CHECK_FIRING_GAPS => enabled.firing_gaps = true,
                        CHECK_ARC_CONTAINMENT => enabled.arc_containment = true,
                        CHECK_ROUND_CONTRACTION => enabled.round_contraction = true,
                        other => {
                            return Err(Error::Scenario(format!("unknown monitor `{other}`")))
                        }
                    }
                }
                enabled
            }
        };
        Ok(MonitorSettings {
            eps_geom: self.tolerances.eps_geom,
            eps_sync: self.tolerances.eps_sync,
            sync_epsilon: self.sync_epsilon.unwrap_or(DEFAULT_SYNC_EPSILON),
            enabled,
            ..MonitorSettings::default()
        })
    }
}

fn named_prc(kind: PrcKind) -> Result<PhaseResponseCurve> {
    match kind {
        PrcKind::Sawtooth => Ok(PhaseResponseCurve::sawtooth()),
        PrcKind::Triangle => Ok(PhaseResponseCurve::triangle()),
        PrcKind::NegativeSine => Ok(PhaseResponseCurve::negative_sine()),
        PrcKind::Tabulated => Err(Error::Scenario(
            "tabulated PRC needs an object with breakpoints".into(),
        )),
    }
}
