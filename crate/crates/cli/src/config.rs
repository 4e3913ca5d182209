//! Strict JSON configuration. Physical quantities have no defaults; only
//! tolerances and budgets do.

use std::path::Path;

use num_complex::Complex64 as C64;
use qubit_landscape::dynamics::{
    canonical_frame, exceptional_control, min_time, ControlGrid, HamiltonianPair,
};
use qubit_landscape::landscape::{OptimizerConfig, Tolerances};
use qubit_landscape::mat2::CMat2;
use qubit_landscape::objectives::gates;
use qubit_landscape::{DensityMatrix, Objective, QuantumState};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::Failure;

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

/// Either Pauli coefficients `[c_I, c_x, c_y, c_z]` or explicit entries
/// `[[[re, im], [re, im]], [[re, im], [re, im]]]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Pauli([f64; 4]),
    Entries(CMat2),
}

impl MatrixSpec {
    pub fn matrix(&self) -> CMat2 {
        match self {
            MatrixSpec::Pauli([a, b, c, d]) => CMat2::from_real_pauli(*a, *b, *c, *d),
            MatrixSpec::Entries(m) => *m,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub h0: MatrixSpec,
    pub v: MatrixSpec,
}

impl PairSpec {
    pub fn build(&self) -> Result<HamiltonianPair, Failure> {
        Ok(HamiltonianPair::new(self.h0.matrix(), self.v.matrix())?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GateSpec {
    /// `"hadamard"` or `"not"`.
    Named(String),
    /// `diag(1, e^{iφ})`.
    Phase {
        phase: f64,
    },
    Entries(CMat2),
}

impl GateSpec {
    pub fn matrix(&self) -> Result<CMat2, Failure> {
        match self {
            GateSpec::Named(name) => match name.as_str() {
                "hadamard" => Ok(gates::hadamard()),
                "not" => Ok(gates::not()),
                other => Err(Failure::Config(format!(
                    "unknown gate \"{other}\" (expected hadamard, not, {{\"phase\": φ}} or entries)"
                ))),
            },
            GateSpec::Phase { phase } => Ok(gates::phase(*phase)),
            GateSpec::Entries(m) => Ok(*m),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    Transition {
        initial: [C64; 2],
        target: [C64; 2],
    },
    Observable {
        /// Pauli coefficients of `ρ0`.
        rho0: [f64; 4],
        observable: MatrixSpec,
    },
    Gate {
        #[serde(rename = "W")]
        w: GateSpec,
    },
}

impl ObjectiveSpec {
    pub fn build(&self) -> Result<Objective, Failure> {
        match self {
            ObjectiveSpec::Transition { initial, target } => Ok(Objective::transition(
                QuantumState::new(initial[0], initial[1])?,
                QuantumState::new(target[0], target[1])?,
            )),
            ObjectiveSpec::Observable { rho0, observable } => {
                let [a, b, c, d] = *rho0;
                let rho = DensityMatrix::new(CMat2::from_real_pauli(a, b, c, d))?;
                Ok(Objective::observable(rho, observable.matrix())?)
            }
            ObjectiveSpec::Gate { w } => Ok(Objective::gate(w.matrix()?)?),
        }
    }
}

/// Exactly one of `horizon` and `t_multiplier` (in units of `T_min`).
pub fn resolve_time(
    horizon: Option<f64>,
    t_multiplier: Option<f64>,
    pair: &HamiltonianPair,
) -> Result<f64, Failure> {
    match (horizon, t_multiplier) {
        (Some(t), None) => Ok(t),
        (None, Some(m)) => Ok(m * min_time(pair)?),
        _ => Err(Failure::Config(
            "give exactly one of \"horizon\" and \"t_multiplier\"".into(),
        )),
    }
}

/// `{"values": [...]}`, `{"constant": f, "segments": N}` or
/// `{"exceptional": true, "segments": N}` (the constant `f0`).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ControlSpec {
    Values { values: Vec<f64> },
    Constant { constant: f64, segments: usize },
    Exceptional { exceptional: bool, segments: usize },
}

impl ControlSpec {
    pub fn build(&self, pair: &HamiltonianPair, horizon: f64) -> Result<ControlGrid, Failure> {
        Ok(match self {
            ControlSpec::Values { values } => ControlGrid::new(horizon, values.clone())?,
            ControlSpec::Constant { constant, segments } => {
                ControlGrid::constant(horizon, *segments, *constant)?
            }
            ControlSpec::Exceptional {
                exceptional,
                segments,
            } => {
                if !exceptional {
                    return Err(Failure::Config(
                        "\"exceptional\" must be true when given".into(),
                    ));
                }
                ControlGrid::constant(horizon, *segments, exceptional_control(pair)?)?
            }
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagateConfig {
    pub pair: PairSpec,
    pub horizon: Option<f64>,
    pub t_multiplier: Option<f64>,
    pub control: ControlSpec,
    #[serde(default)]
    pub objective: Option<ObjectiveSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradcheckConfig {
    #[serde(default = "fifty")]
    pub instances: usize,
    #[serde(default = "thirty_two")]
    pub segments: usize,
    #[serde(default = "gradcheck_threshold")]
    pub threshold: f64,
    #[serde(default = "fd_step")]
    pub step: f64,
    #[serde(default)]
    pub seed: u64,
}

fn fifty() -> usize {
    50
}
fn thirty_two() -> usize {
    32
}
fn gradcheck_threshold() -> f64 {
    1e-6
}
fn fd_step() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub pair: PairSpec,
    pub objective: ObjectiveSpec,
    pub horizon: Option<f64>,
    pub t_multiplier: Option<f64>,
    pub init: ControlSpec,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct F0Config {
    pub pair: PairSpec,
    pub objective: ObjectiveSpec,
    pub horizon: Option<f64>,
    pub t_multiplier: Option<f64>,
    pub segments: usize,
    pub epsilons: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankConfig {
    pub pair: PairSpec,
    pub horizon: Option<f64>,
    pub t_multiplier: Option<f64>,
    #[serde(default)]
    pub control: Option<ControlSpec>,
    /// Extra constant values at which to report the family rank.
    #[serde(default)]
    pub probes: Vec<f64>,
}

/// Slice directions: explicit vectors, or the two canonical variations
/// around `f0`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum DirectionsSpec {
    Explicit { a: Vec<f64>, b: Vec<f64> },
    Exceptional { exceptional_variations: bool },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceConfig {
    pub pair: PairSpec,
    pub objective: ObjectiveSpec,
    pub horizon: Option<f64>,
    pub t_multiplier: Option<f64>,
    pub base: ControlSpec,
    pub directions: DirectionsSpec,
    pub extent: [f64; 2],
    pub resolution: usize,
}

impl DirectionsSpec {
    pub fn build(
        &self,
        pair: &HamiltonianPair,
        base: &ControlGrid,
    ) -> Result<(Vec<f64>, Vec<f64>), Failure> {
        match self {
            DirectionsSpec::Explicit { a, b } => Ok((a.clone(), b.clone())),
            DirectionsSpec::Exceptional {
                exceptional_variations,
            } => {
                if !exceptional_variations {
                    return Err(Failure::Config(
                        "\"exceptional_variations\" must be true when given".into(),
                    ));
                }
                let frame = canonical_frame(pair)?;
                let [a, b] = qubit_landscape::landscape::exceptional::exceptional_variations(
                    frame.time_scale,
                    base.horizon(),
                    base.segments(),
                );
                Ok((a, b))
            }
        }
    }
}
