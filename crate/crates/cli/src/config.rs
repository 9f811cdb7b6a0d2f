//! Scenario configuration: a versioned JSON schema with one variant per
//! subcommand. Unknown keys are errors, not warnings — reproducibility
//! beats leniency.

use serde::{Deserialize, Serialize};

use cavnet_core::params::RateSet;
use cavnet_core::{Error as CoreError, Result as CoreResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Converts a "2π × MHz" quantity to rad/s.
pub fn mhz_to_rad(mhz: f64) -> f64 {
    std::f64::consts::TAU * mhz * 1e6
}

/// Converts rad/s back to "2π × MHz" for reporting.
pub fn rad_to_mhz(rad: f64) -> f64 {
    rad / (std::f64::consts::TAU * 1e6)
}

/// Rate record at the CLI boundary, all entries in 2π × MHz.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RatesMhz {
    pub g: f64,
    pub kappa_l: f64,
    pub kappa_r: f64,
    pub kappa_loss: f64,
    pub gamma: f64,
    pub delta_ac: f64,
    pub delta_u: f64,
    pub omega_l: f64,
}

impl Default for RatesMhz {
    fn default() -> Self {
        // The reference strong-coupling system (g, κ, γ) = 2π×(7, 2.5, 3)
        // MHz with an overcoupled left mirror.
        Self {
            g: 7.0,
            kappa_l: 2.3,
            kappa_r: 0.1,
            kappa_loss: 0.1,
            gamma: 3.0,
            delta_ac: 0.0,
            delta_u: 0.0,
            omega_l: 0.0,
        }
    }
}

impl RatesMhz {
    pub fn to_rate_set(&self) -> CoreResult<RateSet> {
        let rs = RateSet {
            g: mhz_to_rad(self.g),
            kappa_l: mhz_to_rad(self.kappa_l),
            kappa_r: mhz_to_rad(self.kappa_r),
            kappa_loss: mhz_to_rad(self.kappa_loss),
            gamma: mhz_to_rad(self.gamma),
            delta_ac: mhz_to_rad(self.delta_ac),
            delta_u: mhz_to_rad(self.delta_u),
            delta_c: 0.0,
            delta_a: 0.0,
            omega_l: mhz_to_rad(self.omega_l),
        };
        rs.validate()?;
        Ok(rs)
    }
}

/// A linear sweep specification.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Sweep {
    pub fn validate(&self) -> CoreResult<()> {
        if self.points < 2 {
            return Err(CoreError::InvalidParameter("sweeps need at least 2 points".into()));
        }
        if !(self.from.is_finite() && self.to.is_finite()) || self.from >= self.to {
            return Err(CoreError::InvalidParameter("sweep range must be finite and increasing".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points)
            .map(|i| {
                self.from + (self.to - self.from) * i as f64 / (self.points - 1) as f64
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamsArgs {
    pub cavity: cavnet_core::params::PhysicalCavity,
    /// Atomic polarization decay rate in 2π × MHz (experiments quote it
    /// directly).
    pub gamma_mhz: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumModel {
    Jc,
    Lambda,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpectrumArgs {
    pub model: SpectrumModel,
    #[serde(default)]
    pub rates: RatesMhz,
    /// Swept parameter in 2π × MHz: Δ_ac for the two-level model, Ω_L for
    /// the Λ model.
    pub sweep: Sweep,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScanArgs {
    #[serde(default)]
    pub rates: RatesMhz,
    /// Probe detuning sweep, 2π × MHz.
    pub sweep: Sweep,
    #[serde(default = "one")]
    pub mode_matching: f64,
    /// Also scan the bare cavity (g = 0) for reference columns.
    #[serde(default)]
    pub include_empty: bool,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RabiArgs {
    #[serde(default)]
    pub rates: RatesMhz,
    pub duration_ns: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PurcellArgs {
    #[serde(default)]
    pub rates: RatesMhz,
    /// Atom-cavity detuning sweep, 2π × MHz.
    pub sweep: Sweep,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct G2Args {
    #[serde(default)]
    pub rates: RatesMhz,
    /// Probe detuning, 2π × MHz.
    pub drive_detuning: f64,
    /// Drive amplitude, 2π × MHz.
    pub drive_amplitude: f64,
    pub tau_max_ns: f64,
    pub points: usize,
    #[serde(default = "default_nmax")]
    pub n_max: usize,
}

fn default_nmax() -> usize {
    5
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HomArgs {
    /// Intensity 1/e time of the photon envelopes, ns.
    pub envelope_tau_ns: f64,
    pub envelope_duration_ns: f64,
    pub envelope_step_ns: f64,
    /// Carrier offset between the sources, 2π × MHz.
    #[serde(default)]
    pub detuning_mhz: f64,
    /// Shot-to-shot carrier jitter (1σ), 2π × MHz.
    #[serde(default)]
    pub jitter_mhz: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum BsmInput {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
    /// Product state |H,V⟩.
    HorizontalVertical,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BsmArgs {
    pub input: BsmInput,
    #[serde(default = "one")]
    pub indistinguishability: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolName {
    Memory,
    Transfer,
    Entangle,
    Teleport,
    Ghz,
    Eraser,
    Ndpd,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    Ideal,
    Paper2011,
    Paper2012,
    Paper2013,
    Paper2014,
}

impl PresetName {
    pub fn parse(s: &str) -> CoreResult<Self> {
        match s {
            "ideal" => Ok(Self::Ideal),
            "paper2011" => Ok(Self::Paper2011),
            "paper2012" => Ok(Self::Paper2012),
            "paper2013" => Ok(Self::Paper2013),
            "paper2014" => Ok(Self::Paper2014),
            other => Err(CoreError::InvalidParameter(format!("unknown preset {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProtocolArgs {
    pub name: ProtocolName,
    pub preset: PresetName,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RepeaterArgs {
    pub segments: usize,
    pub p_link: f64,
    pub swap: f64,
    /// Memory cutoff in attempt slots; absent = unlimited.
    #[serde(default)]
    pub cutoff: Option<u64>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "default_slot_us")]
    pub slot_duration_us: f64,
}

fn default_slot_us() -> f64 {
    100.0
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TomoArgs {
    /// CSV of (setting, outcome, count) rows; see the README for the
    /// format.
    pub counts_csv: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BayesArgs {
    /// CSV with one photon count per line (single `clicks` column).
    pub clicks_csv: String,
    #[serde(default = "default_bright")]
    pub bright_mean: f64,
    #[serde(default = "default_levels")]
    pub levels: [f64; 3],
    #[serde(default = "default_transition")]
    pub transition_prob: f64,
}

fn default_bright() -> f64 {
    20.0
}

fn default_levels() -> [f64; 3] {
    [1.0, 0.7, 0.4]
}

fn default_transition() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct FiguresArgs {
    pub seed: u64,
    pub trials: u64,
}

impl Default for FiguresArgs {
    fn default() -> Self {
        Self { seed: 1, trials: 100_000 }
    }
}

/// The dispatchable scenario.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "command", content = "args", rename_all = "snake_case")]
pub enum ScenarioConfig {
    Params(ParamsArgs),
    Spectrum(SpectrumArgs),
    Scan(ScanArgs),
    Rabi(RabiArgs),
    Purcell(PurcellArgs),
    G2(G2Args),
    Hom(HomArgs),
    Bsm(BsmArgs),
    Protocol(ProtocolArgs),
    Repeater(RepeaterArgs),
    Tomo(TomoArgs),
    Bayes(BayesArgs),
    Figures(FiguresArgs),
}

impl ScenarioConfig {
    pub fn command_name(&self) -> &'static str {
        match self {
            Self::Params(_) => "params",
            Self::Spectrum(_) => "spectrum",
            Self::Scan(_) => "scan",
            Self::Rabi(_) => "rabi",
            Self::Purcell(_) => "purcell",
            Self::G2(_) => "g2",
            Self::Hom(_) => "hom",
            Self::Bsm(_) => "bsm",
            Self::Protocol(_) => "protocol",
            Self::Repeater(_) => "repeater",
            Self::Tomo(_) => "tomo",
            Self::Bayes(_) => "bayes",
            Self::Figures(_) => "figures",
        }
    }

    /// The seed recorded in the config, when the command samples.
    pub fn seed(&self) -> Option<u64> {
        match self {
            Self::Hom(a) => Some(a.seed),
            Self::Bsm(a) => Some(a.seed),
            Self::Protocol(a) => Some(a.seed),
            Self::Repeater(a) => Some(a.seed),
            Self::Figures(a) => Some(a.seed),
            _ => None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        match &mut self {
            Self::Hom(a) => a.seed = seed,
            Self::Bsm(a) => a.seed = seed,
            Self::Protocol(a) => a.seed = seed,
            Self::Repeater(a) => a.seed = seed,
            Self::Figures(a) => a.seed = seed,
            _ => {}
        }
        self
    }
}

/// On-disk config: schema version plus the scenario. Serialized with the
/// keys `schema`, `command`, `args`; anything else is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub schema: u32,
    pub scenario: ScenarioConfig,
}

impl ConfigFile {
    pub fn new(scenario: ScenarioConfig) -> Self {
        Self { schema: SCHEMA_VERSION, scenario }
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let obj = value
            .as_object()
            .ok_or_else(|| anyhow::anyhow!("config root must be a JSON object"))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "schema" | "command" | "args") {
                anyhow::bail!("unknown top-level config key {key:?}");
            }
        }
        let schema = obj
            .get("schema")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| anyhow::anyhow!("config is missing the integer `schema` field"))?
            as u32;
        if schema != SCHEMA_VERSION {
            anyhow::bail!("unsupported config schema {schema} (this build reads {SCHEMA_VERSION})");
        }
        let scenario: ScenarioConfig = serde_json::from_value(value)?;
        Ok(Self { schema, scenario })
    }

    pub fn emit(&self) -> String {
        let mut value = serde_json::to_value(&self.scenario).expect("scenario serializes");
        let obj = value.as_object_mut().expect("tagged enum is an object");
        obj.insert("schema".into(), serde_json::json!(self.schema));
        // serde_json sorts object keys, so the emitted form is stable.
        let mut text = serde_json::to_string_pretty(&value).expect("config serializes");
        text.push('\n');
        text
    }
}
