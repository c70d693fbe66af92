//! Versioned scenario configuration.

use serde::{Deserialize, Serialize};

use crate::criteria::Cond2Grids;
use crate::error::{Error, Result};
use crate::profiles::{MeasureProfile, VolumeProfile};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub scenario: String,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub volume: Option<VolumeConfig>,
    #[serde(default)]
    pub measure: Option<MeasureConfig>,
    #[serde(default)]
    pub grids: GridsConfig,
    #[serde(default)]
    pub discrete: DiscreteConfig,
    #[serde(default)]
    pub picard: PicardConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n: Option<f64>,
    pub alpha: Option<f64>,
    pub q: Option<f64>,
    pub gamma: Option<f64>,
    #[serde(default = "one")]
    pub r0: f64,
    #[serde(default = "one")]
    pub a: f64,
    /// Relative quadrature tolerance.
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            n: None,
            alpha: None,
            q: None,
            gamma: None,
            r0: 1.0,
            a: 1.0,
            tol: default_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum VolumeConfig {
    Euclidean {
        n: f64,
    },
    Power {
        #[serde(default = "one")]
        c: f64,
        n: f64,
    },
    Piecewise {
        c0: f64,
        breakpoints: Vec<f64>,
        exponents: Vec<f64>,
    },
    Table {
        r: Vec<f64>,
        v: Vec<f64>,
        tail_exponent: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasureConfig {
    SameAsVolume {},
    PowerDensity {
        gamma: f64,
        n: Option<f64>,
    },
    Dirac {},
    Table {
        r: Vec<f64>,
        s: Vec<f64>,
        tail_exponent: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default = "yes")]
    pub log: bool,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                if i + 1 == self.points {
                    self.max
                } else if self.log {
                    self.min * (self.max / self.min).powf(t)
                } else {
                    self.min + t * (self.max - self.min)
                }
            })
            .collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        let finite = self.min.is_finite() && self.max.is_finite();
        if !finite || self.points == 0 || (self.points > 1 && !(self.min < self.max)) {
            return Err(Error::Config(format!(
                "grids.{name}: need finite min < max and points >= 1"
            )));
        }
        if self.log && !(self.min > 0.0) {
            return Err(Error::Config(format!("grids.{name}: log grid needs min > 0")));
        }
        if self.points > 100_000 {
            return Err(Error::Config(format!("grids.{name}: at most 100000 points")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridsConfig {
    /// Distances `d(x,o)` for the cond-int2 sup.
    pub x: Option<GridSpec>,
    /// Radii `r ≥ r0` for the cond-int2 sup.
    pub r: Option<GridSpec>,
    /// Distances of the Green table.
    pub d: Option<GridSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelSource {
    /// Seeded random quasi-metric space with finite diagonal.
    #[default]
    Random,
    /// Riesz kernel on seeded uniform points.
    Riesz,
    /// Kernel read from a text file.
    File,
    /// Random space with the quasi-distance of one pair inflated.
    Perturbed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteConfig {
    #[serde(default)]
    pub kernel: KernelSource,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// Exponent `p` of `|x − y|^{−p}` for random spaces.
    #[serde(default = "default_power")]
    pub power: f64,
    #[serde(default = "default_quantize")]
    pub quantize_bits: Option<u32>,
    pub path: Option<String>,
    #[serde(default)]
    pub origin: usize,
    #[serde(default = "default_depth")]
    pub depth: usize,
    /// Factor by which a perturbed kernel inflates the quasi-distance `1/K(0,1)`.
    #[serde(default = "default_inflate")]
    pub inflate: f64,
    /// κ above this is flagged as far from a quasi-metric.
    #[serde(default = "default_kappa_limit")]
    pub kappa_limit: f64,
}

impl Default for DiscreteConfig {
    fn default() -> Self {
        DiscreteConfig {
            kernel: KernelSource::Random,
            points: default_points(),
            seed: default_seed(),
            dim: default_dim(),
            power: default_power(),
            quantize_bits: default_quantize(),
            path: None,
            origin: 0,
            depth: default_depth(),
            inflate: default_inflate(),
            kappa_limit: default_kappa_limit(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardConfig {
    #[serde(default = "default_r_max")]
    pub r_max: Vec<f64>,
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default = "default_picard_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_guard")]
    pub guard: f64,
    #[serde(default = "default_eta_amplitude")]
    pub eta_amplitude: f64,
    #[serde(default = "default_eta_radius")]
    pub eta_radius: f64,
    /// Halve the forcing until the iteration contracts.
    #[serde(default = "yes")]
    pub auto_scale: bool,
    /// Also run the nested-domain equivalence probe on the largest radius.
    #[serde(default)]
    pub probe: bool,
    /// Directory for dense kernel caches of small grids.
    pub kernel_cache: Option<String>,
}

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig {
            r_max: default_r_max(),
            h: default_h(),
            tol: default_picard_tol(),
            max_iters: default_max_iters(),
            guard: default_guard(),
            eta_amplitude: default_eta_amplitude(),
            eta_radius: default_eta_radius(),
            auto_scale: true,
            probe: false,
            kernel_cache: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    pub path: Option<String>,
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn default_tol() -> f64 {
    crate::quadrature::DEFAULT_TOL
}
fn default_points() -> usize {
    8
}
fn default_seed() -> u64 {
    42
}
fn default_dim() -> usize {
    3
}
fn default_power() -> f64 {
    1.5
}
fn default_quantize() -> Option<u32> {
    Some(10)
}
fn default_depth() -> usize {
    3
}
fn default_inflate() -> f64 {
    1e3
}
fn default_kappa_limit() -> f64 {
    64.0
}
fn default_r_max() -> Vec<f64> {
    vec![2.0]
}
fn default_h() -> f64 {
    0.125
}
fn default_picard_tol() -> f64 {
    1e-8
}
fn default_max_iters() -> usize {
    10_000
}
fn default_guard() -> f64 {
    1e6
}
fn default_eta_amplitude() -> f64 {
    100.0
}
fn default_eta_radius() -> f64 {
    0.25
}

/// Parses TOML, reporting the offending line and field on failure.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        match line {
            Some(l) => Error::Config(format!("line {l}: {}", e.message())),
            None => Error::Config(e.message().to_string()),
        }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &str) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {path}: {e}")))?;
    parse_config(&text)
}

fn positive(v: f64, field: &str) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{field} must be positive and finite, got {v}")))
    }
}

impl ScenarioConfig {
    /// Field-level checks that do not depend on the subcommand.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                self.schema_version
            )));
        }
        let m = &self.model;
        if let Some(a) = m.alpha {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::Config(format!("model.alpha must lie in (0,1), got {a}")));
            }
        }
        if let Some(q) = m.q {
            if !(q > 1.0) || !q.is_finite() {
                return Err(Error::Config(format!("model.q must exceed 1, got {q}")));
            }
        }
        if let Some(n) = m.n {
            positive(n, "model.n")?;
        }
        if let (Some(g), Some(a)) = (self.gamma(), m.alpha) {
            if !(g > -2.0 * a) {
                return Err(Error::Config(format!("gamma = {g} must exceed -2 alpha = {}", -2.0 * a)));
            }
        }
        positive(m.r0, "model.r0")?;
        positive(m.a, "model.a")?;
        positive(m.tol, "model.tol")?;
        for (name, g) in [("x", &self.grids.x), ("r", &self.grids.r), ("d", &self.grids.d)] {
            if let Some(g) = g {
                g.validate(name)?;
            }
        }
        let d = &self.discrete;
        if d.points == 0 || d.dim == 0 {
            return Err(Error::Config("discrete.points and discrete.dim must be positive".into()));
        }
        positive(d.power, "discrete.power")?;
        positive(d.inflate, "discrete.inflate")?;
        positive(d.kappa_limit, "discrete.kappa_limit")?;
        if d.kernel == KernelSource::File && d.path.is_none() {
            return Err(Error::Config("discrete.path is required for kernel = \"file\"".into()));
        }
        let p = &self.picard;
        if p.r_max.is_empty() {
            return Err(Error::Config("picard.r_max must list at least one radius".into()));
        }
        for &r in &p.r_max {
            positive(r, "picard.r_max")?;
        }
        if p.r_max.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config("picard.r_max must be strictly increasing".into()));
        }
        positive(p.h, "picard.h")?;
        positive(p.tol, "picard.tol")?;
        positive(p.guard, "picard.guard")?;
        positive(p.eta_radius, "picard.eta_radius")?;
        if !(p.eta_amplitude >= 0.0) || !p.eta_amplitude.is_finite() {
            return Err(Error::Config("picard.eta_amplitude must be finite and non-negative".into()));
        }
        if p.max_iters == 0 {
            return Err(Error::Config("picard.max_iters must be positive".into()));
        }
        Ok(())
    }

    /// `γ` from the measure section, falling back to the model section.
    pub fn gamma(&self) -> Option<f64> {
        match &self.measure {
            Some(MeasureConfig::PowerDensity { gamma, .. }) => Some(*gamma),
            _ => self.model.gamma,
        }
    }

    pub fn require<T: Copy>(v: Option<T>, field: &str) -> Result<T> {
        v.ok_or_else(|| Error::Config(format!("{field} is required for this command")))
    }

    pub fn alpha(&self) -> Result<f64> {
        Self::require(self.model.alpha, "model.alpha")
    }

    pub fn q(&self) -> Result<f64> {
        Self::require(self.model.q, "model.q")
    }

    /// Dimension of the volume profile, or `model.n`.
    pub fn dimension(&self) -> Result<f64> {
        match &self.volume {
            Some(VolumeConfig::Euclidean { n }) | Some(VolumeConfig::Power { n, .. }) => Ok(*n),
            _ => Self::require(self.model.n, "model.n"),
        }
    }

    /// Euclidean dimension for the grid solver.
    pub fn lattice_dimension(&self) -> Result<usize> {
        let n = self.dimension()?;
        if n.fract() != 0.0 || !(1.0..=6.0).contains(&n) {
            return Err(Error::Config(format!("grid dimension must be an integer in 1..=6, got {n}")));
        }
        Ok(n as usize)
    }

    /// Volume profile; defaults to Euclidean in `model.n`.
    pub fn volume_profile(&self) -> Result<VolumeProfile<f64>> {
        let built = match &self.volume {
            None => VolumeProfile::euclidean(Self::require(self.model.n, "model.n")?),
            Some(VolumeConfig::Euclidean { n }) => VolumeProfile::euclidean(*n),
            Some(VolumeConfig::Power { c, n }) => VolumeProfile::power_law(*c, *n),
            Some(VolumeConfig::Piecewise { c0, breakpoints, exponents }) => {
                VolumeProfile::piecewise(*c0, breakpoints.clone(), exponents.clone())
            }
            Some(VolumeConfig::Table { r, v, tail_exponent }) => VolumeProfile::table(r.clone(), v.clone(), *tail_exponent),
        };
        built.map_err(|e| Error::Config(format!("volume: {e}")))
    }

    /// Measure profile; defaults to a power density when `model.gamma` is
    /// set and to `σ = μ` otherwise.
    pub fn measure_profile(&self) -> Result<MeasureProfile<f64>> {
        let built = match &self.measure {
            None => match self.model.gamma {
                Some(g) => MeasureProfile::power_density(g, self.dimension()?),
                None => Ok(MeasureProfile::same_as_volume()),
            },
            Some(MeasureConfig::SameAsVolume {}) => Ok(MeasureProfile::same_as_volume()),
            Some(MeasureConfig::Dirac {}) => Ok(MeasureProfile::dirac()),
            Some(MeasureConfig::PowerDensity { gamma, n }) => {
                let n = match n {
                    Some(n) => *n,
                    None => self.dimension()?,
                };
                MeasureProfile::power_density(*gamma, n)
            }
            Some(MeasureConfig::Table { r, s, tail_exponent }) => MeasureProfile::table(r.clone(), s.clone(), *tail_exponent),
        };
        built.map_err(|e| Error::Config(format!("measure: {e}")))
    }

    pub fn cond2_grids(&self) -> Cond2Grids {
        let mut g = Cond2Grids::standard(self.model.r0);
        if let Some(x) = &self.grids.x {
            g.x = x.values();
        }
        if let Some(r) = &self.grids.r {
            g.r = r.values();
        }
        g
    }

    /// Green-table distances, log-spaced over `[0.1, 10]` by default.
    pub fn d_grid(&self) -> Vec<f64> {
        self.grids
            .d
            .unwrap_or(GridSpec {
                min: 0.1,
                max: 10.0,
                points: 21,
                log: true,
            })
            .values()
    }
}
