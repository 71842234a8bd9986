//! Run configuration: a single flat JSON document describing the system, the
//! initial state, the integrator, and what to check.
//!
//! Rational `k` travels as the string `"p/q"` so the exact integer pair
//! survives parsing. The `initial_state` is either explicit
//! (`{"chart": ..., "q1": ...}`) or the name of a preset whose initial state
//! to borrow.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use superint_core::{
    preset, Chart, IntegratorOptions, InvariantKind, PhaseState, Preset, SystemSpec,
};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialStateSpec {
    Named(String),
    Explicit { chart: Chart, q1: f64, q2: f64, p1: f64, p2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Drift,
    Bracket,
    PhaseRotation,
    Rank,
}

impl std::fmt::Display for CheckKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CheckKind::Drift => "drift",
            CheckKind::Bracket => "bracket",
            CheckKind::PhaseRotation => "phase_rotation",
            CheckKind::Rank => "rank",
        };
        f.write_str(s)
    }
}

/// Pass/fail thresholds for `verify`. Defaults match the acceptance
/// tolerances used throughout the test suites.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub drift: f64,
    pub bracket_analytic: f64,
    pub bracket_fd: f64,
    pub rotation: f64,
    pub rank_agreement: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            drift: 1e-7,
            bracket_analytic: 1e-6,
            bracket_fd: 1e-5,
            rotation: 1e-5,
            rank_agreement: 0.95,
        }
    }
}

/// Parameter grid for `sweep`: the cartesian product of the supplied axes.
/// `k` values are rational strings; `n_x`/`n_y` are integers.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Grid {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub k: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ka: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub kb: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub g: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub omega0: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub n_x: Vec<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub n_y: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub system: SystemSpec,
    pub initial_state: InitialStateSpec,
    #[serde(default = "default_integrator")]
    pub integrator: IntegratorOptions,
    pub invariants: Vec<InvariantKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Checks run by `verify`; absent means every applicable check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckKind>>,
    /// Parameter deltas applied to the system used for *invariant evaluation*
    /// in the drift check (the trajectory still follows the true system).
    /// This is the negative-control hook.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_bracket_points")]
    pub bracket_points: usize,
    #[serde(default = "default_rank_points")]
    pub rank_points: usize,
    /// Sweep-only fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(default = "default_ics", skip_serializing_if = "is_default_ics")]
    pub ics_per_point: usize,
}

fn default_integrator() -> IntegratorOptions {
    IntegratorOptions::default()
}

fn default_bracket_points() -> usize {
    1000
}

fn default_rank_points() -> usize {
    100
}

fn default_ics() -> usize {
    5
}

fn is_default_ics(v: &usize) -> bool {
    *v == default_ics()
}

impl RunConfig {
    pub fn from_preset(p: &Preset) -> Self {
        let s = p.initial_state;
        Self {
            system: p.system.clone(),
            initial_state: InitialStateSpec::Explicit {
                chart: s.chart,
                q1: s.q1,
                q2: s.q2,
                p1: s.p1,
                p2: s.p2,
            },
            integrator: p.options,
            invariants: p.invariants.clone(),
            seed: 0,
            output_dir: None,
            checks: None,
            mismatch: None,
            tolerances: Tolerances::default(),
            bracket_points: default_bracket_points(),
            rank_points: default_rank_points(),
            grid: None,
            ics_per_point: default_ics(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Resolve the initial state, validate every referenced name and
    /// invariant, and return the concrete state.
    pub fn resolve_initial_state(&self) -> Result<PhaseState, CliError> {
        let state = match &self.initial_state {
            InitialStateSpec::Named(name) => preset(name)
                .ok_or_else(|| CliError::Config(format!("unknown preset {name:?}")))?
                .initial_state,
            InitialStateSpec::Explicit { chart, q1, q2, p1, p2 } => {
                PhaseState::new(*q1, *q2, *p1, *p2, *chart)
                    .map_err(|e| CliError::Config(format!("initial_state: {e}")))?
            }
        };
        if state.chart != self.system.chart() {
            return Err(CliError::Config(format!(
                "initial_state chart {} does not match the {} family's {} chart",
                state.chart,
                self.system.family_name(),
                self.system.chart()
            )));
        }
        Ok(state)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.system
            .validate()
            .map_err(|e| CliError::Config(format!("system: {e}")))?;
        self.integrator
            .validate()
            .map_err(|e| CliError::Config(format!("integrator: {e}")))?;
        for kind in &self.invariants {
            if !kind.applies_to(&self.system) {
                return Err(CliError::Config(format!(
                    "invariant {kind} does not apply to family {}",
                    self.system.family_name()
                )));
            }
        }
        self.resolve_initial_state().map(|_| ())
    }

    /// The system with the mismatch deltas applied, used for invariant
    /// evaluation in negative-control runs.
    pub fn invariant_system(&self) -> Result<SystemSpec, CliError> {
        let Some(mismatch) = &self.mismatch else {
            return Ok(self.system.clone());
        };
        let mut sys = self.system.clone();
        for (param, delta) in mismatch {
            apply_delta(&mut sys, param, *delta)?;
        }
        sys.validate()
            .map_err(|e| CliError::Config(format!("mismatched system: {e}")))?;
        Ok(sys)
    }
}

fn apply_delta(sys: &mut SystemSpec, param: &str, delta: f64) -> Result<(), CliError> {
    let family = sys.family_name();
    let unknown = || {
        CliError::Config(format!(
            "mismatch parameter {param:?} does not exist on family {family}"
        ))
    };
    match sys {
        SystemSpec::VaN { omega0, k1, k2, .. } | SystemSpec::VbN { omega0, k1, k2, .. } => {
            match param {
                "omega0" => *omega0 += delta,
                "k1" => *k1 += delta,
                "k2" => *k2 += delta,
                _ => return Err(unknown()),
            }
        }
        SystemSpec::Vak { omega0, ka, kb, .. } => match param {
            "omega0" => *omega0 += delta,
            "ka" => *ka += delta,
            "kb" => *kb += delta,
            _ => return Err(unknown()),
        },
        SystemSpec::Vck { g, ka, kb, .. } | SystemSpec::VckRot { g, ka, kb, .. } => match param {
            "g" => *g += delta,
            "ka" => *ka += delta,
            "kb" => *kb += delta,
            _ => return Err(unknown()),
        },
    }
    Ok(())
}
