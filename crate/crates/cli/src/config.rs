//! Run configuration: parsing, validation and the internal canonical form.
//!
//! JSON and TOML documents deserialize into the same [`RunConfig`]. Ladders
//! are validated while parsing, so a bad ladder is reported with line
//! information like any syntax error.

use std::num::{NonZeroU64, NonZeroUsize};
use std::path::PathBuf;

use serde::Deserialize;

use semichain::space::{
    build_circle_grid, build_disjoint_union, build_odometer_space, build_product_within, build_shift_space,
    validate_metric,
};
use semichain::structure::DeltaRule;
use semichain::{Budget, FiniteMetricSpace, MapSpec, ScaleLadder};

use crate::expr::parse_map_expr;
use crate::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigFormat {
    Json,
    Toml,
}

impl ConfigFormat {
    /// Guess from a file extension, falling back to the first character.
    pub fn detect(path: Option<&std::path::Path>, text: &str) -> Self {
        match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("json") => ConfigFormat::Json,
            Some("toml") => ConfigFormat::Toml,
            _ if text.trim_start().starts_with('{') => ConfigFormat::Json,
            _ => ConfigFormat::Toml,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub system: SystemConfig,
    pub analyses: Vec<AnalysisRequest>,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Either a preset (with its size parameters) or an explicit space and generators.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub preset: Option<String>,
    /// Points per circle for circle presets, point count for `identity`/`complete`.
    pub n: Option<usize>,
    /// Word length for `example-4.2`, digit count for `odometer`.
    pub depth: Option<usize>,
    pub space: Option<SpaceSpec>,
    #[serde(default)]
    pub generators: Vec<Generator>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceSpec {
    Circle {
        n: usize,
        #[serde(default = "one")]
        circumference: f64,
    },
    Uniform {
        n: usize,
        #[serde(default = "one")]
        distance: f64,
    },
    /// Explicit distance rows.
    Matrix { distances: Vec<Vec<f64>> },
    Union { parts: Vec<SpaceSpec>, cross_distance: f64 },
    Product { first: Box<SpaceSpec>, second: Box<SpaceSpec> },
    Shift { symbols: usize, depth: usize },
    Odometer { digits: Vec<usize> },
}

fn one() -> f64 {
    1.0
}

impl SpaceSpec {
    pub fn build(&self, budget: &Budget) -> Result<FiniteMetricSpace, ConfigError> {
        let space = match self {
            SpaceSpec::Circle { n, circumference } => build_circle_grid(*n, *circumference),
            SpaceSpec::Uniform { n, distance } => FiniteMetricSpace::uniform(*n, *distance),
            SpaceSpec::Matrix { distances } => {
                let n = distances.len();
                if let Some(row) = distances.iter().position(|r| r.len() != n) {
                    return Err(ConfigError::Invalid(format!(
                        "distance row {row} has {} entries, expected {n}",
                        distances[row].len()
                    )));
                }
                let s = FiniteMetricSpace::from_matrix(n, distances.concat())?;
                let report = validate_metric(&s);
                if !report.is_valid() {
                    return Err(ConfigError::Invalid(format!("distance matrix is not a metric: {report:?}")));
                }
                Ok(s)
            }
            SpaceSpec::Union { parts, cross_distance } => {
                let parts = parts.iter().map(|p| p.build(budget)).collect::<Result<Vec<_>, _>>()?;
                build_disjoint_union(parts, *cross_distance)
            }
            SpaceSpec::Product { first, second } => {
                build_product_within(&first.build(budget)?, &second.build(budget)?, budget)
            }
            SpaceSpec::Shift { symbols, depth } => build_shift_space(*symbols, *depth, budget),
            SpaceSpec::Odometer { digits } => build_odometer_space(digits, budget),
        }?;
        budget_check(&space, budget)?;
        Ok(space)
    }
}

fn budget_check(space: &FiniteMetricSpace, budget: &Budget) -> Result<(), ConfigError> {
    if space.point_count() > budget.points {
        return Err(ConfigError::Build(semichain::Error::Resource(format!(
            "space has {} points, budget is {}",
            space.point_count(),
            budget.points
        ))));
    }
    Ok(())
}

/// A generator: a map expression such as `"3x + 1/16"` or a structured map.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "GeneratorRepr")]
pub struct Generator(pub MapSpec);

#[derive(Deserialize)]
#[serde(untagged)]
enum GeneratorRepr {
    Expr(String),
    Spec(MapSpec),
}

impl TryFrom<GeneratorRepr> for Generator {
    type Error = String;

    fn try_from(r: GeneratorRepr) -> Result<Self, String> {
        match r {
            GeneratorRepr::Expr(s) => parse_map_expr(&s).map(Generator),
            GeneratorRepr::Spec(m) => Ok(Generator(m)),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub points: Option<NonZeroUsize>,
    pub words: Option<NonZeroUsize>,
    pub generators: Option<NonZeroUsize>,
    pub chains: Option<NonZeroUsize>,
    pub search: Option<NonZeroU64>,
}

impl BudgetConfig {
    pub fn resolve(&self) -> Budget {
        let d = Budget::default();
        Budget {
            points: self.points.map_or(d.points, NonZeroUsize::get),
            words: self.words.map_or(d.words, NonZeroUsize::get),
            generators: self.generators.map_or(d.generators, NonZeroUsize::get),
            chains: self.chains.map_or(d.chains, NonZeroUsize::get),
            search: self.search.map_or(d.search, NonZeroU64::get),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

/// One requested analysis. Every parameter left out falls back to the
/// preset's defaults (or defaults derived from the space).
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AnalysisRequest {
    Entropy(EntropyRequest),
    Recurrence(RecurrenceRequest),
    Mixing(MixingRequest),
    Decompose(DecomposeRequest),
    Ladder(LadderRequest),
    VerifyAll(VerifyAllRequest),
}

impl AnalysisRequest {
    pub const KINDS: [&'static str; 6] = ["entropy", "recurrence", "mixing", "decompose", "ladder", "verify-all"];

    pub fn kind(&self) -> &'static str {
        match self {
            AnalysisRequest::Entropy(_) => "entropy",
            AnalysisRequest::Recurrence(_) => "recurrence",
            AnalysisRequest::Mixing(_) => "mixing",
            AnalysisRequest::Decompose(_) => "decompose",
            AnalysisRequest::Ladder(_) => "ladder",
            AnalysisRequest::VerifyAll(_) => "verify-all",
        }
    }

    /// Report key: the explicit name or the kind.
    pub fn name(&self) -> String {
        let explicit = match self {
            AnalysisRequest::Entropy(r) => &r.name,
            AnalysisRequest::Recurrence(r) => &r.name,
            AnalysisRequest::Mixing(r) => &r.name,
            AnalysisRequest::Decompose(r) => &r.name,
            AnalysisRequest::Ladder(r) => &r.name,
            AnalysisRequest::VerifyAll(r) => &r.name,
        };
        explicit.clone().unwrap_or_else(|| self.kind().to_string())
    }

    /// A request of the given kind with every parameter defaulted.
    pub fn default_for(kind: &str) -> Option<Self> {
        Some(match kind {
            "entropy" => AnalysisRequest::Entropy(Default::default()),
            "recurrence" => AnalysisRequest::Recurrence(Default::default()),
            "mixing" => AnalysisRequest::Mixing(Default::default()),
            "decompose" => AnalysisRequest::Decompose(Default::default()),
            "ladder" => AnalysisRequest::Ladder(Default::default()),
            "verify-all" => AnalysisRequest::VerifyAll(Default::default()),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyRequest {
    pub name: Option<String>,
    pub epsilons: Option<ScaleLadder>,
    pub deltas: Option<ScaleLadder>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    /// Words per length; 0 averages over every word.
    pub word_sample: Option<usize>,
    pub include_endpoint: Option<bool>,
    pub strict: Option<bool>,
    /// Also estimate the orbit (Bufetov) entropy at each ε.
    pub orbit: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceRequest {
    pub name: Option<String>,
    pub epsilons: Option<ScaleLadder>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixingRequest {
    pub name: Option<String>,
    pub epsilons: Option<ScaleLadder>,
    /// Ball radii for the starting sets.
    pub deltas: Option<ScaleLadder>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeRequest {
    pub name: Option<String>,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderRequest {
    pub name: Option<String>,
    pub epsilons: Option<ScaleLadder>,
    pub delta_rule: Option<DeltaRule>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyAllRequest {
    pub name: Option<String>,
    /// Chain tolerance for the single-scale checks.
    pub epsilon: Option<f64>,
    /// Ball radius for mixing checks.
    pub delta: Option<f64>,
    /// Tolerance for the skew-product identity.
    pub skew_delta: Option<f64>,
    /// Power used by the proposition checks.
    pub k: Option<usize>,
    /// ε ladder for the mixing-time bound and the period ladder.
    pub epsilons: Option<ScaleLadder>,
    /// δ ladder for the mixing-time bound.
    pub deltas: Option<ScaleLadder>,
    /// ε ladder for the recurrence-time trend.
    pub ubd_epsilons: Option<ScaleLadder>,
    /// Scales for the box-dimension estimates.
    pub box_ladder: Option<ScaleLadder>,
}

/// Parses a JSON or TOML document. Syntax and schema errors carry line information.
pub fn parse_config(text: &str, format: ConfigFormat) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = match format {
        ConfigFormat::Json => serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            format: "JSON",
            message: e.to_string(),
        })?,
        ConfigFormat::Toml => toml::from_str(text).map_err(|e| ConfigError::Parse {
            format: "TOML",
            message: e.to_string().trim_end().to_string(),
        })?,
    };
    validate(&config)?;
    Ok(config)
}

/// Checks that need the whole document.
pub fn validate(config: &RunConfig) -> Result<(), ConfigError> {
    let s = &config.system;
    match (&s.preset, &s.space) {
        (Some(_), Some(_)) => return Err(ConfigError::Invalid("system: give either `preset` or `space`, not both".into())),
        (None, None) => return Err(ConfigError::Invalid("system: needs `preset` or `space`".into())),
        (Some(_), None) if !s.generators.is_empty() => {
            return Err(ConfigError::Invalid("system: presets bring their own generators".into()))
        }
        (None, Some(_)) if s.generators.is_empty() => {
            return Err(ConfigError::Invalid("system: an explicit space needs at least one generator".into()))
        }
        (None, Some(_)) if s.n.is_some() || s.depth.is_some() => {
            return Err(ConfigError::Invalid("system: `n` and `depth` only apply to presets".into()))
        }
        _ => {}
    }
    if config.analyses.is_empty() {
        return Err(ConfigError::Invalid("analyses: at least one analysis is required".into()));
    }
    let mut names: Vec<String> = config.analyses.iter().map(AnalysisRequest::name).collect();
    names.sort();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(ConfigError::Invalid(format!(
            "analyses: duplicate analysis name `{}` (set `name` to tell them apart)",
            w[0]
        )));
    }
    for a in &config.analyses {
        check_request(a)?;
    }
    Ok(())
}

fn positive(what: &str, v: Option<f64>) -> Result<(), ConfigError> {
    match v {
        Some(x) if !(x.is_finite() && x > 0.0) => {
            Err(ConfigError::Invalid(format!("{what} must be a positive real, got {x}")))
        }
        _ => Ok(()),
    }
}

fn check_request(a: &AnalysisRequest) -> Result<(), ConfigError> {
    let name = a.name();
    match a {
        AnalysisRequest::Entropy(r) => {
            if r.n_min == Some(0) {
                return Err(ConfigError::Invalid(format!("{name}: n_min must be positive")));
            }
            if let (Some(lo), Some(hi)) = (r.n_min, r.n_max) {
                if lo > hi {
                    return Err(ConfigError::Invalid(format!("{name}: n_min {lo} exceeds n_max {hi}")));
                }
            }
        }
        AnalysisRequest::Decompose(r) => positive(&format!("{name}: epsilon"), r.epsilon)?,
        AnalysisRequest::Ladder(r) => match r.delta_rule {
            Some(DeltaRule::Scaled { factor }) => positive(&format!("{name}: delta_rule factor"), Some(factor))?,
            Some(DeltaRule::Fixed { delta }) => positive(&format!("{name}: delta_rule delta"), Some(delta))?,
            _ => {}
        },
        AnalysisRequest::VerifyAll(r) => {
            positive(&format!("{name}: epsilon"), r.epsilon)?;
            positive(&format!("{name}: delta"), r.delta)?;
            positive(&format!("{name}: skew_delta"), r.skew_delta)?;
            if r.k == Some(0) {
                return Err(ConfigError::Invalid(format!("{name}: k must be positive")));
            }
        }
        AnalysisRequest::Recurrence(_) | AnalysisRequest::Mixing(_) => {}
    }
    Ok(())
}
