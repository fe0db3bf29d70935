//! Run configuration: one JSON file with nested sections, plus
//! `section.key=value` overrides applied before validation.

use std::path::PathBuf;

use fermisim_core::fermion::{build_hubbard, build_pairing};
use fermisim_core::phase_estimation::{default_energy_bounds, default_window, Engine, InputState, PeConfig};
use fermisim_core::{FermionHamiltonian, TrotterOrder};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Pairing {
        levels: usize,
        #[serde(default)]
        d: f64,
        g: f64,
    },
    Hubbard {
        sites: usize,
        #[serde(default)]
        eps: f64,
        #[serde(default)]
        t: f64,
        #[serde(default)]
        u: f64,
        #[serde(default)]
        periodic: bool,
    },
    Custom {
        n_levels: usize,
        #[serde(default)]
        e0: f64,
        /// `[i, j, value]` for `a†_i a_j`.
        #[serde(default)]
        one_body: Vec<(usize, usize, f64)>,
        /// `[i, j, k, l, value]` for `a†_i a†_j a_l a_k`.
        #[serde(default)]
        two_body: Vec<(usize, usize, usize, usize, f64)>,
    },
}

impl ModelSpec {
    pub fn build(&self) -> Result<FermionHamiltonian, CliError> {
        Ok(match *self {
            ModelSpec::Pairing { levels, d, g } => build_pairing(levels, d, g)?,
            ModelSpec::Hubbard { sites, eps, t, u, periodic } => build_hubbard(sites, eps, t, u, periodic)?,
            ModelSpec::Custom { n_levels, e0, ref one_body, ref two_body } => {
                let mut h = FermionHamiltonian::new(n_levels)?;
                h.set_e0(e0)?;
                for &(i, j, v) in one_body {
                    h.add_one_body(i, j, v)?;
                }
                for &(i, j, k, l, v) in two_body {
                    h.add_two_body(i, j, k, l, v)?;
                }
                h
            }
        })
    }

    /// The same model family with `qubits` simulation qubits.
    pub fn with_qubits(&self, qubits: usize) -> Result<ModelSpec, CliError> {
        let half = || {
            if qubits == 0 || qubits % 2 != 0 {
                Err(CliError::Config(format!("this model needs an even positive qubit count, got {qubits}")))
            } else {
                Ok(qubits / 2)
            }
        };
        Ok(match *self {
            ModelSpec::Pairing { d, g, .. } => ModelSpec::Pairing { levels: half()?, d, g },
            ModelSpec::Hubbard { eps, t, u, periodic, .. } => ModelSpec::Hubbard { sites: half()?, eps, t, u, periodic },
            ModelSpec::Custom { .. } => return Err(CliError::Config("gate-count needs a pairing or hubbard model".into())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EngineSpec {
    Factored,
    Circuit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeSection {
    pub work_qubits: usize,
    /// Defaults to the window derived from the spectral bound.
    pub dt: Option<f64>,
    pub e_max: Option<f64>,
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub input: InputSpec,
    #[serde(default = "default_true")]
    pub fresh_per_shot: bool,
    #[serde(default = "default_engine")]
    pub engine: EngineSpec,
}

fn default_shots() -> usize {
    10_000
}

fn default_true() -> bool {
    true
}

fn default_engine() -> EngineSpec {
    EngineSpec::Factored
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSpec {
    #[default]
    Random,
    /// Basis state as a bit string, qubit 1 first.
    Basis(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompileSection {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_order")]
    pub order: u32,
    #[serde(default = "default_intervals")]
    pub intervals: usize,
}

fn default_dt() -> f64 {
    0.1
}

fn default_order() -> u32 {
    1
}

fn default_intervals() -> usize {
    1
}

impl Default for CompileSection {
    fn default() -> Self {
        Self { dt: default_dt(), order: default_order(), intervals: default_intervals() }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    /// Write zero-count histogram bins too.
    #[serde(default)]
    pub dense: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    /// Defaults to two shifts with irrational ratios to `dt`.
    pub dt_shifts: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateCountSection {
    pub qubits: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Compile,
    PhaseEst,
    Exact,
    Scan,
    GateCount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub pe: Option<PeSection>,
    #[serde(default)]
    pub compile: CompileSection,
    #[serde(default)]
    pub output: OutputSection,
    pub scan: Option<ScanSection>,
    pub gate_count: Option<GateCountSection>,
    /// When present it must name the subcommand being run.
    pub mode: Option<Mode>,
}

/// A validated configuration with the hash of its effective JSON form.
pub struct LoadedConfig {
    pub config: RunConfig,
    pub hash: String,
}

/// Apply `a.b.c=value` to a JSON tree. The value is read as JSON when it
/// parses, otherwise as a string.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override {assignment:?} is not key=value")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!("bad override key {path:?}")));
    }
    let mut node = root;
    for key in &keys[..keys.len() - 1] {
        let obj = node.as_object_mut().ok_or_else(|| CliError::Config(format!("{path:?} does not name an object field")))?;
        node = obj.entry(key.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node.as_object_mut().ok_or_else(|| CliError::Config(format!("{path:?} does not name an object field")))?;
    obj.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

pub fn load(text: &str, overrides: &[String], seed: Option<u64>) -> Result<LoadedConfig, CliError> {
    let mut root: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
    for o in overrides {
        apply_override(&mut root, o)?;
    }
    if let Some(seed) = seed {
        apply_override(&mut root, &format!("pe.seed={seed}"))?;
    }
    let config: RunConfig = serde_json::from_value(root).map_err(|e| CliError::Config(e.to_string()))?;
    // Hash the normalized form so key order and defaults in the file do not matter.
    let canonical = serde_json::to_string(&config).expect("config serializes");
    let hash = hex::encode(Sha256::digest(canonical.as_bytes()));
    Ok(LoadedConfig { config, hash })
}

impl RunConfig {
    pub fn check_mode(&self, mode: Mode) -> Result<(), CliError> {
        match self.mode {
            Some(m) if m != mode => Err(CliError::Config(format!("config is for mode {m:?}, not {mode:?}"))),
            _ => Ok(()),
        }
    }

    pub fn trotter_order(&self) -> Result<TrotterOrder, CliError> {
        Ok(TrotterOrder::from_int(self.compile.order)?)
    }

    pub fn pe_config(&self, h: &FermionHamiltonian) -> Result<PeConfig, CliError> {
        let pe = self.pe.as_ref().ok_or_else(|| CliError::Config("missing pe section".into()))?;
        let mut cfg = PeConfig::for_hamiltonian(h, pe.work_qubits)?;
        let (lo, hi) = default_energy_bounds(h)?;
        let (e_max, dt) = default_window(lo, hi, pe.work_qubits)?;
        cfg.e_max = pe.e_max.unwrap_or(e_max);
        cfg.dt = pe.dt.unwrap_or(dt);
        cfg.shots = pe.shots;
        cfg.seed = pe.seed;
        cfg.fresh_per_shot = pe.fresh_per_shot;
        cfg.input = match &pe.input {
            InputSpec::Random => InputState::Random,
            InputSpec::Basis(b) => InputState::Basis(b.clone()),
        };
        cfg.engine = match pe.engine {
            EngineSpec::Factored => Engine::Factored,
            EngineSpec::Circuit => Engine::Circuit,
        };
        cfg.intervals = self.compile.intervals;
        cfg.trotter_order = self.trotter_order()?;
        cfg.validate()?;
        Ok(cfg)
    }
}
