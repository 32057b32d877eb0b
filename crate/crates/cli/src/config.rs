//! JSON configuration documents and flag overrides.
//!
//! Unknown keys are rejected everywhere so a typo in a config never silently
//! falls back to a default. Core invariants are re-validated when the
//! documents are converted into core types.

use serde::{Deserialize, Serialize};

use skilltask_core::iteration::{LearningConfig, MatrixSignMode, ValueUpdateMode};
use skilltask_core::production::{CostModel, MatchingMatrix, SkillVector, TaskValueVector};
use skilltask_core::scenario::{PricePath, ScenarioSpec};

use crate::error::{CliError, CliResult};

/// Price as a flat number or one entry per period.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PriceConfig {
    Constant(f64),
    PerPeriod(Vec<f64>),
}

impl Default for PriceConfig {
    fn default() -> Self {
        PriceConfig::Constant(1.0)
    }
}

impl From<PriceConfig> for PricePath {
    fn from(p: PriceConfig) -> Self {
        match p {
            PriceConfig::Constant(v) => PricePath::Constant(v),
            PriceConfig::PerPeriod(v) => PricePath::PerPeriod(v),
        }
    }
}

fn one() -> f64 {
    1.0
}

/// Scenario document; also the payload of `gen`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub skills_dim: usize,
    pub tasks_dim: usize,
    pub periods: usize,
    #[serde(default)]
    pub price: PriceConfig,
    #[serde(default = "one")]
    pub expected_quantity: f64,
    #[serde(default)]
    pub shock_sigma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_skills: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skill_path: Option<Vec<Vec<f64>>>,
}

impl ScenarioConfig {
    pub fn to_spec(&self) -> CliResult<ScenarioSpec> {
        let ideal_matrix = match &self.ideal_matrix {
            Some(rows) => Some(MatchingMatrix::new(rows.clone())?),
            None => None,
        };
        let base_skills = match &self.base_skills {
            Some(labor) => Some(SkillVector::from_labor(labor.clone())?),
            None => None,
        };
        let skill_path = match &self.skill_path {
            Some(path) => Some(
                path.iter()
                    .map(|labor| SkillVector::from_labor(labor.clone()))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        let spec = ScenarioSpec {
            skills_dim: self.skills_dim,
            tasks_dim: self.tasks_dim,
            periods: self.periods,
            price: self.price.clone().into(),
            expected_quantity: self.expected_quantity,
            shock_sigma: self.shock_sigma,
            seed: self.seed,
            ideal_matrix,
            base_skills,
            skill_path,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeConfig {
    Descent,
    PaperLiteral,
}

impl From<ModeConfig> for MatrixSignMode {
    fn from(m: ModeConfig) -> Self {
        match m {
            ModeConfig::Descent => MatrixSignMode::Descent,
            ModeConfig::PaperLiteral => MatrixSignMode::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ValueModeConfig {
    ExactGradient,
    PaperDelta,
}

impl From<ValueModeConfig> for ValueUpdateMode {
    fn from(m: ValueModeConfig) -> Self {
        match m {
            ValueModeConfig::ExactGradient => ValueUpdateMode::ExactGradient,
            ValueModeConfig::PaperDelta => ValueUpdateMode::PaperDelta,
        }
    }
}

fn default_lr() -> f64 {
    0.1
}

fn default_tol() -> f64 {
    1e-8
}

fn default_max_periods() -> usize {
    10_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearningSection {
    #[serde(default = "default_lr")]
    pub lr_matrix: f64,
    #[serde(default = "default_lr")]
    pub lr_value: f64,
    #[serde(default = "default_mode")]
    pub mode: ModeConfig,
    #[serde(default = "default_value_mode")]
    pub value_mode: ValueModeConfig,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_periods")]
    pub max_periods: usize,
}

fn default_mode() -> ModeConfig {
    ModeConfig::Descent
}

fn default_value_mode() -> ValueModeConfig {
    ValueModeConfig::ExactGradient
}

impl Default for LearningSection {
    fn default() -> Self {
        Self {
            lr_matrix: default_lr(),
            lr_value: default_lr(),
            mode: default_mode(),
            value_mode: default_value_mode(),
            tol: default_tol(),
            max_periods: default_max_periods(),
        }
    }
}

impl LearningSection {
    pub fn to_config(&self) -> CliResult<LearningConfig> {
        Ok(LearningConfig::new(
            self.lr_matrix,
            self.lr_value,
            self.mode.into(),
            self.value_mode.into(),
            self.tol,
            self.max_periods,
        )?)
    }
}

/// Skill prices; omitted vectors default to zeros of the scenario dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine_price: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wage: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_coeff: Option<Vec<f64>>,
    #[serde(default)]
    pub interest_rate: f64,
    #[serde(default = "one")]
    pub depreciation: f64,
}

impl Default for CostSection {
    fn default() -> Self {
        Self {
            machine_price: None,
            wage: None,
            fixed_coeff: None,
            interest_rate: 0.0,
            depreciation: 1.0,
        }
    }
}

impl CostSection {
    pub fn to_model(&self, skills_dim: usize) -> CliResult<CostModel> {
        let fill = |v: &Option<Vec<f64>>| v.clone().unwrap_or_else(|| vec![0.0; skills_dim]);
        Ok(CostModel::new(
            fill(&self.machine_price),
            fill(&self.wage),
            fill(&self.fixed_coeff),
            self.interest_rate,
            self.depreciation,
        )?)
    }
}

/// Explicit starting parameters; anything omitted is drawn uniformly from
/// [0, 1) with the seeded generator.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

/// Top-level run document: a scenario plus learning, cost, and initial
/// parameter sections. `train` only needs `learning`, `initial`, and `seed`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioConfig>,
    #[serde(default)]
    pub learning: LearningSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSection>,
    /// Seed for drawing initial parameters when no scenario section is
    /// present (training runs).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_prefix: Option<String>,
}

/// Flag overrides merged onto a loaded config, flags winning.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub lr_matrix: Option<f64>,
    pub lr_value: Option<f64>,
    pub periods: Option<usize>,
    pub mode: Option<ModeConfig>,
    pub value_mode: Option<ValueModeConfig>,
}

impl Overrides {
    pub fn apply(&self, config: &mut RunConfig) {
        if let Some(seed) = self.seed {
            config.seed = Some(seed);
            if let Some(sc) = config.scenario.as_mut() {
                sc.seed = seed;
            }
        }
        if let Some(tol) = self.tol {
            config.learning.tol = tol;
        }
        if let Some(lr) = self.lr_matrix {
            config.learning.lr_matrix = lr;
        }
        if let Some(lr) = self.lr_value {
            config.learning.lr_value = lr;
        }
        if let Some(periods) = self.periods {
            config.learning.max_periods = periods;
            if let Some(sc) = config.scenario.as_mut() {
                sc.periods = periods;
            }
        }
        if let Some(mode) = self.mode {
            config.learning.mode = mode;
        }
        if let Some(mode) = self.value_mode {
            config.learning.value_mode = mode;
        }
    }
}

/// Read a file and parse it as JSON, mapping missing files to I/O errors and
/// malformed content to validation errors.
pub fn load_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Construct the initial parameters for a run, drawing anything missing from
/// the seeded stream.
pub fn initial_parameters(
    initial: Option<&InitialSection>,
    skills_dim: usize,
    tasks_dim: usize,
    seed: u64,
) -> CliResult<(MatchingMatrix, TaskValueVector)> {
    // stream tag 4; tags 1-3 belong to scenario generation
    let mut rng = skilltask_core::rng::SimRng::from_stream(seed, 4, 0);
    let matrix = match initial.and_then(|s| s.matrix.as_ref()) {
        Some(rows) => MatchingMatrix::new(rows.clone())?,
        None => MatchingMatrix::random_uniform(skills_dim, tasks_dim, 0.0, 1.0, &mut rng)?,
    };
    let values = match initial.and_then(|s| s.values.as_ref()) {
        Some(v) => TaskValueVector::new(v.clone())?,
        None => TaskValueVector::random_uniform(tasks_dim, 0.0, 1.0, &mut rng)?,
    };
    Ok((matrix, values))
}
