//! Configuration-driven runner for semichain analyses.
//!
//! A run resolves a [`RunConfig`] into a generator system, executes the
//! requested analyses concurrently and assembles a deterministic report:
//! analyses are keyed by name in sorted order, and everything that varies
//! between identical runs (timings, tool version) lives under `metadata`.

pub mod analysis;
pub mod config;
pub mod expr;
pub mod presets;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use semichain::{Budget, GeneratorSystem};

use analysis::{run_analysis, AnalysisOutput, Context, CsvTable, Status};
pub use config::{parse_config, ConfigFormat, OutputFormat, RunConfig};
use presets::{build_preset, derived_defaults, Defaults};

pub const SCHEMA_VERSION: u32 = 1;

/// Problems with the configuration itself (exit status 2).
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{format} config error: {message}")]
    Parse { format: &'static str, message: String },
    #[error("config error: {0}")]
    Invalid(String),
    #[error("unknown preset `{0}` (see `semichain list-presets`)")]
    UnknownPreset(String),
    #[error("cannot build system: {0}")]
    Build(#[from] semichain::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(ConfigError::Build(semichain::Error::Resource(_))) => 1,
            RunError::Config(_) => 2,
            RunError::Write { .. } => 1,
        }
    }
}

/// Reads and parses a config file, picking the format from the extension.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, ConfigFormat::detect(Some(path), &text))
}

/// A resolved system together with its default tolerances.
pub struct ResolvedSystem {
    pub system: GeneratorSystem,
    pub defaults: Defaults,
    pub preset: Option<String>,
}

pub fn resolve_system(config: &RunConfig, budget: &Budget) -> Result<ResolvedSystem, ConfigError> {
    let s = &config.system;
    if let Some(name) = &s.preset {
        let p = build_preset(name, s.n, s.depth, budget)?;
        return Ok(ResolvedSystem {
            system: p.system,
            defaults: p.defaults,
            preset: Some(p.name),
        });
    }
    let space = s
        .space
        .as_ref()
        .ok_or_else(|| ConfigError::Invalid("system: needs `preset` or `space`".into()))?
        .build(budget)?;
    let specs: Vec<_> = s.generators.iter().map(|g| g.0.clone()).collect();
    let system = semichain::system::from_map_specs(space, &specs)?;
    let defaults = derived_defaults(&system);
    Ok(ResolvedSystem {
        system,
        defaults,
        preset: None,
    })
}

/// SHA-256 over the space description, the map tables and (for spaces up to
/// 2048 points) every pairwise distance.
pub fn system_digest(g: &GeneratorSystem) -> String {
    let mut h = Sha256::new();
    let space = g.space();
    h.update(space.describe().as_bytes());
    h.update((space.point_count() as u64).to_le_bytes());
    h.update((g.m() as u64).to_le_bytes());
    for t in g.tables() {
        for &y in t {
            h.update(y.to_le_bytes());
        }
    }
    h.update(g.quantization_error().to_bits().to_le_bytes());
    if space.point_count() <= 2048 {
        for x in space.points() {
            for y in space.points() {
                h.update(space.dist(x, y).to_bits().to_le_bytes());
            }
        }
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemInfo {
    pub preset: Option<String>,
    pub space: String,
    pub points: usize,
    pub generators: usize,
    pub quantization_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisRecord {
    pub kind: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub result: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool_version: &'static str,
    /// Wall-clock time per analysis, in milliseconds.
    pub elapsed_ms: BTreeMap<String, u128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub system_digest: String,
    pub system: SystemInfo,
    pub seed: u64,
    pub budget: Budget,
    pub analyses: BTreeMap<String, AnalysisRecord>,
    pub metadata: Metadata,
}

impl Report {
    /// 0 when every analysis succeeded, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.analyses.values().all(|a| a.status == Status::Ok) {
            0
        } else {
            1
        }
    }

    /// The `analyses` object alone, serialized; identical across runs with the same config and seed.
    pub fn analyses_json(&self) -> String {
        serde_json::to_string_pretty(&self.analyses).expect("report serializes")
    }
}

/// Everything a run produced, before anything is written.
pub struct RunResult {
    pub report: Report,
    pub tables: BTreeMap<String, Vec<CsvTable>>,
}

/// Executes every analysis of `config`, concurrently, and assembles the report.
pub fn execute(config: &RunConfig) -> Result<RunResult, ConfigError> {
    let budget = config.budget.resolve();
    let resolved = resolve_system(config, &budget)?;
    let cx = Context {
        system: &resolved.system,
        defaults: &resolved.defaults,
        seed: config.seed,
        budget: &budget,
    };
    let outputs: Vec<(String, &'static str, Result<AnalysisOutput, semichain::Error>, u128)> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = config
                .analyses
                .iter()
                .map(|req| {
                    let cx = &cx;
                    scope.spawn(move || {
                        let start = Instant::now();
                        let out = run_analysis(req, cx);
                        (req.name(), req.kind(), out, start.elapsed().as_millis())
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("analysis thread panicked"))
                .collect()
        });

    let mut analyses = BTreeMap::new();
    let mut tables = BTreeMap::new();
    let mut elapsed_ms = BTreeMap::new();
    for (name, kind, out, ms) in outputs {
        elapsed_ms.insert(name.clone(), ms);
        let record = match out {
            Ok(o) => {
                tables.insert(name.clone(), o.tables);
                AnalysisRecord {
                    kind,
                    status: o.status,
                    error: None,
                    result: o.payload,
                }
            }
            Err(e) => AnalysisRecord {
                kind,
                status: Status::Error,
                error: Some(e.to_string()),
                result: Value::Null,
            },
        };
        analyses.insert(name, record);
    }
    let g = &resolved.system;
    let report = Report {
        schema_version: SCHEMA_VERSION,
        system_digest: system_digest(g),
        system: SystemInfo {
            preset: resolved.preset.clone(),
            space: g.space().describe(),
            points: g.point_count(),
            generators: g.m(),
            quantization_error: g.quantization_error(),
        },
        seed: config.seed,
        budget,
        analyses,
        metadata: Metadata {
            tool_version: env!("CARGO_PKG_VERSION"),
            elapsed_ms,
        },
    };
    Ok(RunResult { report, tables })
}

/// Writes `report.json` and/or one CSV per table into `dir`; returns the written paths.
pub fn write_outputs(result: &RunResult, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>, RunError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Write { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();
    if format.json() {
        let path = dir.join("report.json");
        let mut text = serde_json::to_string_pretty(&result.report).expect("report serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(io(&path))?;
        written.push(path);
    }
    if format.csv() {
        for (name, tables) in &result.tables {
            for t in tables {
                let path = dir.join(format!("{name}-{}.csv", t.stem));
                write_csv(&path, t).map_err(|e| RunError::Write {
                    path: path.clone(),
                    source: std::io::Error::other(e),
                })?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

fn write_csv(path: &Path, t: &CsvTable) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&t.headers)?;
    for row in &t.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Full run: execute, then write into the configured directory.
pub fn run(config: &RunConfig) -> Result<(RunResult, Vec<PathBuf>), RunError> {
    let result = execute(config)?;
    let dir = config.output.dir.clone().unwrap_or_else(|| PathBuf::from("semichain-out"));
    let format = config.output.format.unwrap_or_default();
    let written = write_outputs(&result, &dir, format)?;
    Ok((result, written))
}

/// Config for `semichain preset <name> <analysis...>`.
pub fn preset_config(
    name: &str,
    analyses: &[String],
    n: Option<usize>,
    depth: Option<usize>,
) -> Result<RunConfig, ConfigError> {
    let requests = analyses
        .iter()
        .map(|a| {
            config::AnalysisRequest::default_for(a).ok_or_else(|| {
                ConfigError::Invalid(format!(
                    "unknown analysis `{a}` (expected one of {})",
                    config::AnalysisRequest::KINDS.join(", ")
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let config = RunConfig {
        seed: 0,
        system: config::SystemConfig {
            preset: Some(name.to_string()),
            n,
            depth,
            ..Default::default()
        },
        analyses: requests,
        budget: Default::default(),
        output: Default::default(),
    };
    config::validate(&config)?;
    Ok(config)
}
