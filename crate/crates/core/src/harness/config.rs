//! JSON experiment configuration. Angles are in degrees and frequencies in
//! GHz at this boundary; everything is converted to SI/radians on use.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::array_model::{ArrayConfig, SectorPlan};
use crate::error::{Error, Result};
use crate::estimator::{EstimatorOptions, Mode};
use crate::exec::Execution;
use crate::scene_synth::REFERENCE_COUPLING_MAGNITUDES;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub array: ArraySection,
    pub scene: SceneSection,
    #[serde(default)]
    pub acquisition: AcquisitionSection,
    #[serde(default)]
    pub estimator: EstimatorSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub n_antennas: usize,
    pub n_rf: usize,
    pub carrier_ghz: f64,
    pub bandwidth_ghz: f64,
    pub n_subcarriers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSection {
    pub n_targets: usize,
    #[serde(default)]
    pub angles: AngleSpec,
    #[serde(default)]
    pub reflection: ReflectionSpec,
    #[serde(default)]
    pub coupling: CouplingSpec,
}

/// Either the literal `"random"` or a list of angles in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    Fixed(Vec<f64>),
    Random(RandomAngles),
}

impl Default for AngleSpec {
    fn default() -> Self {
        AngleSpec::Random(RandomAngles::Random)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomAngles {
    Random,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReflectionSpec {
    /// |β| = 1 with a uniform random phase per trial.
    #[default]
    UnitRandomPhase,
    /// β = 1 for every target.
    Unit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    /// Off: C = I.
    #[serde(default = "default_true")]
    pub enabled: bool,
    /// Coefficient count L (leading 1 included).
    #[serde(default = "default_band")]
    pub band: usize,
    /// Sectors of the true direction-dependent coupling.
    #[serde(default = "default_sectors")]
    pub sectors: usize,
    /// Magnitude profiles, leading 1 included; sector s uses profile s mod len.
    #[serde(default = "default_profiles")]
    pub magnitudes: Vec<Vec<f64>>,
    /// Phases in degrees, same shape as `magnitudes`, shared by every
    /// subcarrier. Absent: uniform random phases per trial and subcarrier.
    #[serde(default)]
    pub phases_deg: Option<Vec<Vec<f64>>>,
}

impl Default for CouplingSpec {
    fn default() -> Self {
        Self {
            enabled: true,
            band: default_band(),
            sectors: default_sectors(),
            magnitudes: default_profiles(),
            phases_deg: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcquisitionSection {
    #[serde(default = "default_snapshots")]
    pub snapshots: usize,
    #[serde(default)]
    pub power: PowerSpec,
}

impl Default for AcquisitionSection {
    fn default() -> Self {
        Self { snapshots: default_snapshots(), power: PowerSpec::default() }
    }
}

/// `"normalized"` (ρ = P_r / (M N²) = 1) or an explicit linear power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PowerSpec {
    Linear(f64),
    Named(NamedPower),
}

impl Default for PowerSpec {
    fn default() -> Self {
        PowerSpec::Named(NamedPower::Normalized)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedPower {
    Normalized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSection {
    #[serde(default = "default_modes")]
    pub modes: Vec<Mode>,
    #[serde(default = "default_grid_step")]
    pub grid_step_deg: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_sectors")]
    pub sectors: usize,
}

impl Default for EstimatorSection {
    fn default() -> Self {
        Self {
            modes: default_modes(),
            grid_step_deg: default_grid_step(),
            epsilon: default_epsilon(),
            max_iter: default_max_iter(),
            sectors: default_sectors(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_snr")]
    pub snr_db: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Random target angles are drawn uniformly in ±this bound.
    #[serde(default = "default_angle_bound")]
    pub angle_bound_deg: f64,
    /// Minimum separation between random targets.
    #[serde(default)]
    pub min_separation_deg: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            snr_db: default_snr(),
            trials: default_trials(),
            seed: 0,
            angle_bound_deg: default_angle_bound(),
            min_separation_deg: 0.0,
        }
    }
}

fn default_true() -> bool {
    true
}
fn default_band() -> usize {
    5
}
fn default_sectors() -> usize {
    6
}
fn default_profiles() -> Vec<Vec<f64>> {
    REFERENCE_COUPLING_MAGNITUDES.iter().map(|p| p.to_vec()).collect()
}
fn default_snapshots() -> usize {
    100
}
fn default_modes() -> Vec<Mode> {
    Mode::ALL.to_vec()
}
fn default_grid_step() -> f64 {
    0.02
}
fn default_epsilon() -> f64 {
    1e-4
}
fn default_max_iter() -> usize {
    50
}
fn default_snr() -> Vec<f64> {
    vec![0.0, 10.0, 20.0]
}
fn default_trials() -> usize {
    50
}
fn default_angle_bound() -> f64 {
    90.0
}

impl ExperimentConfig {
    /// Parses and validates a JSON document. Schema errors carry the path of
    /// the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::Schema { path: e.path().to_string(), message: e.inner().to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let schema = |path: &str, message: String| Error::Schema { path: path.into(), message };
        self.array_config().map_err(|e| schema("array", e.to_string()))?;
        let n = self.array.n_antennas;
        let k = self.scene.n_targets;
        if k == 0 || k >= n {
            return Err(schema("scene.n_targets", format!("must lie in 1..{n}")));
        }
        if let AngleSpec::Fixed(a) = &self.scene.angles {
            if a.len() != k {
                return Err(schema("scene.angles", format!("{} angles for {k} targets", a.len())));
            }
            if a.iter().any(|x| !(x.abs() <= 90.0)) {
                return Err(schema("scene.angles", "angles must lie in [-90, 90] degrees".into()));
            }
        }
        let c = &self.scene.coupling;
        if c.band == 0 || c.band > n {
            return Err(schema("scene.coupling.band", format!("must lie in 1..={n}")));
        }
        if c.sectors == 0 {
            return Err(schema("scene.coupling.sectors", "must be positive".into()));
        }
        if c.enabled {
            if c.magnitudes.is_empty() || c.magnitudes.iter().any(|p| p.len() != c.band) {
                return Err(schema("scene.coupling.magnitudes", format!("each profile needs {} entries", c.band)));
            }
            if c.magnitudes.iter().any(|p| p[0] != 1.0 || p.iter().any(|x| !(x.is_finite() && *x >= 0.0))) {
                return Err(schema("scene.coupling.magnitudes", "profiles start with 1 and are non-negative".into()));
            }
            if let Some(ph) = &c.phases_deg {
                let shape_ok = ph.len() == c.magnitudes.len()
                    && ph.iter().all(|p| p.len() == c.band && p.iter().all(|x| x.is_finite()) && p[0] == 0.0);
                if !shape_ok {
                    return Err(schema("scene.coupling.phases_deg", "must match magnitudes, leading phase 0".into()));
                }
            }
        }
        if self.acquisition.snapshots == 0 {
            return Err(schema("acquisition.snapshots", "must be positive".into()));
        }
        if let PowerSpec::Linear(p) = self.acquisition.power {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(schema("acquisition.power", "must be a non-negative number".into()));
            }
        }
        let e = &self.estimator;
        if e.modes.is_empty() {
            return Err(schema("estimator.modes", "at least one mode".into()));
        }
        if !(e.grid_step_deg > 0.0 && e.grid_step_deg <= 90.0) {
            return Err(schema("estimator.grid_step_deg", "must lie in (0, 90]".into()));
        }
        if !(e.epsilon > 0.0) {
            return Err(schema("estimator.epsilon", "must be positive".into()));
        }
        if e.max_iter == 0 {
            return Err(schema("estimator.max_iter", "must be positive".into()));
        }
        if e.sectors == 0 {
            return Err(schema("estimator.sectors", "must be positive".into()));
        }
        let s = &self.sweep;
        if s.snr_db.is_empty() || s.snr_db.iter().any(|x| !x.is_finite()) {
            return Err(schema("sweep.snr_db", "needs at least one finite SNR".into()));
        }
        if s.trials == 0 {
            return Err(schema("sweep.trials", "must be positive".into()));
        }
        if !(s.angle_bound_deg > 0.0 && s.angle_bound_deg <= 90.0) {
            return Err(schema("sweep.angle_bound_deg", "must lie in (0, 90]".into()));
        }
        if !(s.min_separation_deg >= 0.0) || s.min_separation_deg * (k as f64 - 1.0) >= 2.0 * s.angle_bound_deg {
            return Err(schema("sweep.min_separation_deg", "cannot be met inside the angle bound".into()));
        }
        Ok(())
    }

    pub fn array_config(&self) -> Result<ArrayConfig> {
        let a = &self.array;
        ArrayConfig::new(a.n_antennas, a.n_rf, a.carrier_ghz * 1e9, a.bandwidth_ghz * 1e9, a.n_subcarriers)
    }

    pub fn estimator_options(&self, exec: Execution) -> Result<EstimatorOptions> {
        Ok(EstimatorOptions {
            grid_step_deg: self.estimator.grid_step_deg,
            epsilon: self.estimator.epsilon,
            max_iter: self.estimator.max_iter,
            sectors: SectorPlan::uniform(self.estimator.sectors)?,
            band: self.scene.coupling.band,
            polish: true,
            exec,
        })
    }

    /// SHA-256 of the canonical JSON serialization, hex encoded.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        format!("{:x}", Sha256::digest(canonical.as_bytes()))
    }
}
