//! Problem configuration: one JSON file describing agent, graph, bound and
//! optional simulation settings.
//!
//! `agent` and `graph` are either inline objects or paths resolved relative to
//! the config file's directory.

use std::fs;
use std::path::{Path, PathBuf};

use diffh2::{AgentDynamics, DisturbanceKind, DisturbanceSpec, Method, Vector, WeightedGraph};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    agent: Option<Value>,
    graph: Value,
    gamma: Option<f64>,
    #[serde(default)]
    method: Option<Method>,
    c: Option<f64>,
    simulation: Option<RawSimulation>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    #[serde(rename = "T")]
    t_final: f64,
    dt: f64,
    x0: Option<Vec<f64>>,
    disturbance: Option<RawDisturbance>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDisturbance {
    kind: String,
    channel: Option<usize>,
    #[serde(default = "unit_scale")]
    scale: f64,
    /// JSON file holding an array of sample rows.
    file: Option<String>,
    samples: Option<Vec<Vec<f64>>>,
}

fn unit_scale() -> f64 {
    1.0
}

/// Simulation block of a config.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub t_final: f64,
    pub dt: f64,
    /// `None` means the zero initial state.
    pub x0: Option<Vec<f64>>,
    pub disturbance: DisturbanceSpec,
}

/// A parsed problem instance. The agent is optional so that `spectrum` works
/// on graph-only configs.
#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub agent: Option<AgentDynamics>,
    pub graph: WeightedGraph,
    pub gamma: Option<f64>,
    pub method: Method,
    pub c: Option<f64>,
    pub simulation: Option<SimulationConfig>,
}

impl ProblemConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base, &path.display().to_string())
    }

    /// Parses config text; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path, origin: &str) -> Result<Self, CliError> {
        let raw: RawConfig = serde_json::from_str(text)
            .map_err(|e| CliError::input(format!("{origin}: {e}")))?;
        let agent = raw
            .agent
            .map(|v| load_part::<AgentDynamics>(v, base, "agent"))
            .transpose()?;
        let graph = load_part::<WeightedGraph>(raw.graph, base, "graph")?;
        if let Some(g) = raw.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return Err(CliError::input(format!("{origin}: gamma must be positive, got {g}")));
            }
        }
        let simulation = raw
            .simulation
            .map(|s| simulation_config(s, base, origin))
            .transpose()?;
        Ok(ProblemConfig {
            agent,
            graph,
            gamma: raw.gamma,
            method: raw.method.unwrap_or(Method::LowGain),
            c: raw.c,
            simulation,
        })
    }

    pub fn agent(&self) -> Result<&AgentDynamics, CliError> {
        self.agent
            .as_ref()
            .ok_or_else(|| CliError::input("config has no \"agent\" entry"))
    }

    pub fn gamma(&self) -> Result<f64, CliError> {
        self.gamma
            .ok_or_else(|| CliError::input("config has no \"gamma\" entry"))
    }

    pub fn simulation(&self) -> Result<&SimulationConfig, CliError> {
        self.simulation
            .as_ref()
            .ok_or_else(|| CliError::input("config has no \"simulation\" block"))
    }

    /// Initial state for the simulation, zero when not given.
    pub fn initial_state(&self, dim: usize) -> Result<Vector, CliError> {
        let sim = self.simulation()?;
        match &sim.x0 {
            None => Ok(Vector::zeros(dim)),
            Some(v) if v.len() == dim => Ok(Vector::from_column_slice(v)),
            Some(v) => Err(CliError::input(format!(
                "simulation.x0 has {} entries, expected {dim}",
                v.len()
            ))),
        }
    }
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn read_json(path: &Path, what: &str) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{what} file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{what} file {}: {e}", path.display())))
}

fn load_part<T: DeserializeOwned>(v: Value, base: &Path, what: &str) -> Result<T, CliError> {
    match v {
        Value::String(rel) => {
            let path = resolve(base, &rel);
            let doc = read_json(&path, what)?;
            serde_json::from_value(doc)
                .map_err(|e| CliError::input(format!("{what} file {}: {e}", path.display())))
        }
        other => serde_json::from_value(other).map_err(|e| CliError::input(format!("{what}: {e}"))),
    }
}

fn simulation_config(raw: RawSimulation, base: &Path, origin: &str) -> Result<SimulationConfig, CliError> {
    let disturbance = match raw.disturbance {
        None => DisturbanceSpec::zero(),
        Some(d) => {
            let kind = match d.kind.as_str() {
                "zero" => DisturbanceKind::Zero,
                "impulse" => DisturbanceKind::Impulse {
                    channel: d.channel.ok_or_else(|| {
                        CliError::input(format!("{origin}: impulse disturbance needs \"channel\""))
                    })?,
                },
                "samples" => DisturbanceKind::Samples(match (d.samples, d.file) {
                    (Some(rows), None) => rows,
                    (None, Some(rel)) => {
                        let path = resolve(base, &rel);
                        serde_json::from_value(read_json(&path, "samples")?).map_err(|e| {
                            CliError::input(format!("samples file {}: {e}", path.display()))
                        })?
                    }
                    _ => {
                        return Err(CliError::input(format!(
                            "{origin}: sampled disturbance needs exactly one of \"samples\" or \"file\""
                        )))
                    }
                }),
                other => {
                    return Err(CliError::input(format!(
                        "{origin}: unknown disturbance kind {other:?} (expected zero, impulse or samples)"
                    )))
                }
            };
            DisturbanceSpec { kind, scale: d.scale }
        }
    };
    Ok(SimulationConfig {
        t_final: raw.t_final,
        dt: raw.dt,
        x0: raw.x0,
        disturbance,
    })
}
