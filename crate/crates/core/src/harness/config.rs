//! JSON scenario files.
//!
//! ```json
//! {
//!   "name": "example-c",
//!   "nodes": 4,
//!   "edges": [{"i": 1, "j": 3, "coupling": {"kind": "saturation", "gain": 2.0, "level": 2.0}}],
//!   "output_row": [0.0, 1.0],
//!   "omega": 100.0,
//!   "frames": ["original", "rotating", "averaged"],
//!   "initial": {"kind": "random", "seed": 7, "radius": 5.0},
//!   "horizon": 60.0,
//!   "integrator": {"base_step": 0.01, "steps_per_period": 400, "sample_interval": 0.05},
//!   "quadrature": {"rule": "gauss_legendre", "nodes": 24, "periodic": true},
//!   "output_dir": "out"
//! }
//! ```
//!
//! Node indices are 1-based, matching the `n1 … np` labels in reports. Edge
//! `{"i": a, "j": b}` sets `γ_ab`, so oscillator `a` listens to `b`.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coupling::{validate_coupling, CouplingFunction, Interconnection};
use crate::dynamics::{Frame, IntegratorSpec};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub i: usize,
    pub j: usize,
    pub coupling: CouplingFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    Explicit {
        states: Vec<[f64; 2]>,
    },
    /// Oscillators uniform in a disc of `radius` around a centre drawn
    /// uniformly from a disc of `center_radius` (defaults to `radius`).
    Random {
        seed: u64,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center_radius: Option<f64>,
    },
}

fn default_row() -> [f64; 2] {
    [0.0, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    pub nodes: usize,
    #[serde(default)]
    pub edges: Vec<EdgeConfig>,
    #[serde(default = "default_row")]
    pub output_row: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Defaults to the original frame when `omega` is set, else averaged.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<Frame>>,
    pub initial: InitialCondition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub integrator: IntegratorSpec,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// Parses a scenario, reporting the JSON path of the offending field.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::validation(path, e.into_inner().to_string())
    })
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub net: Interconnection,
    pub output_row: [f64; 2],
    pub omega: Option<f64>,
    pub frames: Vec<Frame>,
    pub initial: InitialCondition,
    pub horizon: Option<f64>,
    pub integrator: IntegratorSpec,
    pub quadrature: QuadratureSpec,
    pub output_dir: Option<PathBuf>,
    /// SHA-256 of the canonical re-serialization of the config.
    pub config_hash: String,
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(
            path,
            format!("must be positive, got {v}"),
        ))
    }
}

impl ScenarioConfig {
    pub fn into_scenario(self) -> Result<Scenario> {
        if self.nodes == 0 {
            return Err(Error::validation("nodes", "must be at least 1"));
        }
        let mut net = Interconnection::new(self.nodes)?;
        for (k, e) in self.edges.iter().enumerate() {
            for (name, v) in [("i", e.i), ("j", e.j)] {
                if v == 0 || v > self.nodes {
                    return Err(Error::validation(
                        format!("edges[{k}].{name}"),
                        format!("node index {v} outside 1..={}", self.nodes),
                    ));
                }
            }
            if e.i == e.j {
                return Err(Error::validation(format!("edges[{k}]"), "self-coupling"));
            }
            validate_coupling(&e.coupling).map_err(|err| match err {
                Error::Validation { path, message } => {
                    Error::validation(format!("edges[{k}].coupling.{path}"), message)
                }
                other => other,
            })?;
            net.set(e.i - 1, e.j - 1, e.coupling)?;
        }
        let amp = self.output_row[0].hypot(self.output_row[1]);
        if !(amp > 0.0 && amp.is_finite()) {
            return Err(Error::validation("output_row", "must be a nonzero row"));
        }
        if let Some(w) = self.omega {
            positive("omega", w)?;
        }
        let frames = self.frames.clone().unwrap_or_else(|| match self.omega {
            Some(_) => vec![Frame::Original],
            None => vec![Frame::Averaged],
        });
        let needs_omega = frames
            .iter()
            .any(|f| matches!(f, Frame::Original | Frame::Rotating));
        if needs_omega && self.omega.is_none() {
            return Err(Error::validation(
                "omega",
                "required for original or rotating frames",
            ));
        }
        if frames.is_empty() {
            return Err(Error::validation(
                "frames",
                "at least one frame is required",
            ));
        }
        match &self.initial {
            InitialCondition::Explicit { states } => {
                if states.len() != self.nodes {
                    return Err(Error::validation(
                        "initial.states",
                        format!("expected {} states, got {}", self.nodes, states.len()),
                    ));
                }
                if states.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::validation("initial.states", "non-finite entry"));
                }
            }
            InitialCondition::Random {
                radius,
                center_radius,
                ..
            } => {
                positive("initial.radius", *radius)?;
                if let Some(c) = center_radius {
                    if !(c.is_finite() && *c >= 0.0) {
                        return Err(Error::validation(
                            "initial.center_radius",
                            "must be nonnegative",
                        ));
                    }
                }
            }
        }
        if let Some(h) = self.horizon {
            positive("horizon", h)?;
        }
        self.integrator.validate()?;
        self.quadrature.validate()?;

        let canonical = serde_json::to_string(&self)?;
        let config_hash = hex::encode(Sha256::digest(canonical.as_bytes()));
        Ok(Scenario {
            name: if self.name.is_empty() {
                "scenario".into()
            } else {
                self.name
            },
            net,
            output_row: self.output_row,
            omega: self.omega,
            frames,
            initial: self.initial,
            horizon: self.horizon,
            integrator: self.integrator,
            quadrature: self.quadrature,
            output_dir: self.output_dir,
            config_hash,
        })
    }
}

/// Uniform point in a disc.
pub fn sample_disc(rng: &mut impl Rng, center: [f64; 2], radius: f64) -> [f64; 2] {
    let r = radius * rng.gen::<f64>().sqrt();
    let th = std::f64::consts::TAU * rng.gen::<f64>();
    [center[0] + r * th.cos(), center[1] + r * th.sin()]
}

/// `nodes` points uniform in a disc of `radius` around a centre drawn from a
/// disc of `center_radius`, all from one seeded stream.
pub fn random_blocks(seed: u64, nodes: usize, radius: f64, center_radius: f64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = sample_disc(&mut rng, [0.0, 0.0], center_radius);
    (0..nodes)
        .map(|_| sample_disc(&mut rng, center, radius))
        .collect()
}

impl Scenario {
    pub fn seed(&self) -> Option<u64> {
        match self.initial {
            InitialCondition::Random { seed, .. } => Some(seed),
            InitialCondition::Explicit { .. } => None,
        }
    }

    pub fn initial_blocks(&self) -> Vec<[f64; 2]> {
        match &self.initial {
            InitialCondition::Explicit { states } => states.clone(),
            InitialCondition::Random {
                seed,
                radius,
                center_radius,
            } => random_blocks(
                *seed,
                self.net.nodes(),
                *radius,
                center_radius.unwrap_or(*radius),
            ),
        }
    }

    /// Configured horizon, else `max(60, 20 · 2π/ω_min)`.
    pub fn horizon_for(&self, omega_min: Option<f64>) -> f64 {
        self.horizon.unwrap_or_else(|| match omega_min {
            Some(w) => 60f64.max(20.0 * std::f64::consts::TAU / w),
            None => 60.0,
        })
    }

    /// Integrator settings with the harness sample interval filled in.
    pub fn run_integrator(&self) -> IntegratorSpec {
        IntegratorSpec {
            sample_interval: Some(
                self.integrator
                    .sample_interval
                    .unwrap_or(super::DEFAULT_SAMPLE_INTERVAL),
            ),
            ..self.integrator
        }
    }
}
