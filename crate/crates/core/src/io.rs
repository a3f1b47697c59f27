//! Configuration parsing, CSV/JSON file formats and run manifests.
//!
//! Floats in every CSV are written with 17 significant digits, so each file
//! reads back to bit-identical values.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiments::{ConnectivityRadius, Regime, RegimeConfig, TrialOutcome, TrialResult};
use crate::geometry::{Metric, PointSet};
use crate::graphs::{GeometricGraph, GraphKind, GraphParams};
use crate::laplacian::RegularizedLaplacian;
use crate::metrics::DEFAULT_TOLERANCE;
use crate::spectra::{SpectralDistribution, DEFAULT_DENSE_CAP};

pub const DEFAULT_TRIALS: usize = 10;
pub const DEFAULT_THERMODYNAMIC_ALPHA: f64 = 0.001;
pub const DEFAULT_LOG_EXPONENT: f64 = 1.5;
pub const DEFAULT_GAMMA: f64 = 12.0;
pub const DEFAULT_GRID_POINTS: usize = 2001;
/// Largest matrix written by [`write_matrix_csv`].
pub const MATRIX_DUMP_CAP: usize = 1024;

const CONFIG_KEYS: &[&str] = &[
    "regime",
    "n",
    "d",
    "metric",
    "alpha",
    "trials",
    "seed",
    "tol",
    "workers",
    "eigen_cap",
    "samples",
    "grid_points",
    "gamma",
    "c",
    "log_exponent",
    "rho",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// The flat JSON config schema. Every field but `regime` is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfigDocument {
    pub regime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

/// Parse and validate a JSON experiment config, applying defaults.
pub fn parse_config(text: &str) -> Result<RegimeConfig> {
    let mut value: Value = serde_json::from_str(text)?;
    let object = value
        .as_object_mut()
        .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    let mut unknown: Vec<String> = object
        .keys()
        .filter(|k| !CONFIG_KEYS.contains(&k.as_str()))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        unknown.sort();
        return Err(Error::UnknownKeys(unknown));
    }
    if let Some(n) = object.get_mut("n") {
        if n.is_number() {
            *n = json!([n.clone()]);
        }
    }
    let doc: ConfigDocument = serde_json::from_value(value)?;
    config_from_document(&doc)
}

fn reject_keys(doc: &ConfigDocument, regime: &str, keys: &[(&str, bool)]) -> Result<()> {
    match keys.iter().find(|(_, present)| *present) {
        Some((key, _)) => Err(Error::Config(format!(
            "key {key:?} does not apply to the {regime} regime ({:?})",
            doc.regime
        ))),
        None => Ok(()),
    }
}

pub fn config_from_document(doc: &ConfigDocument) -> Result<RegimeConfig> {
    let (regime, default_sizes, default_alpha) = match doc.regime.as_str() {
        "connectivity" => {
            reject_keys(
                doc,
                "connectivity",
                &[("gamma", doc.gamma.is_some()), ("rho", doc.rho.is_some())],
            )?;
            let rule = match (doc.c, doc.log_exponent) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config(
                        "give either \"c\" or \"log_exponent\", not both".into(),
                    ))
                }
                (Some(c), None) => ConnectivityRadius::LogScaled { c },
                (None, e) => ConnectivityRadius::LogPower {
                    exponent: e.unwrap_or(DEFAULT_LOG_EXPONENT),
                },
            };
            (Regime::Connectivity(rule), vec![512, 2048, 4096], 0.0)
        }
        "thermodynamic" => {
            reject_keys(
                doc,
                "thermodynamic",
                &[
                    ("c", doc.c.is_some()),
                    ("log_exponent", doc.log_exponent.is_some()),
                    ("rho", doc.rho.is_some()),
                ],
            )?;
            let gamma = doc.gamma.unwrap_or(DEFAULT_GAMMA);
            (
                Regime::Thermodynamic { gamma },
                vec![4096],
                DEFAULT_THERMODYNAMIC_ALPHA,
            )
        }
        "dense" => {
            reject_keys(
                doc,
                "dense",
                &[
                    ("c", doc.c.is_some()),
                    ("log_exponent", doc.log_exponent.is_some()),
                    ("gamma", doc.gamma.is_some()),
                ],
            )?;
            let rho = doc
                .rho
                .ok_or_else(|| Error::Config("dense regime needs \"rho\"".into()))?;
            (Regime::Dense { rho }, vec![1024], 0.0)
        }
        other => {
            return Err(Error::Config(format!(
                "regime must be connectivity, thermodynamic or dense, got {other:?}"
            )))
        }
    };
    let metric = match &doc.metric {
        Some(m) => m.parse()?,
        None => Metric::Euclidean,
    };
    let cfg = RegimeConfig {
        regime,
        sizes: doc.n.clone().unwrap_or(default_sizes),
        d: doc.d.unwrap_or(1),
        metric,
        alpha: doc.alpha.unwrap_or(default_alpha),
        trials: doc.trials.unwrap_or(DEFAULT_TRIALS),
        base_seed: doc.seed.unwrap_or(0),
        tol: doc.tol.unwrap_or(DEFAULT_TOLERANCE),
        workers: doc.workers.unwrap_or(1),
        eigen_cap: doc.eigen_cap.unwrap_or(DEFAULT_DENSE_CAP),
        samples: doc.samples,
        grid_points: doc.grid_points.unwrap_or(DEFAULT_GRID_POINTS),
    };
    cfg.validate()?;
    Ok(cfg)
}

/// The fully explicit document for a config; parsing it gives the config back.
pub fn config_document(cfg: &RegimeConfig) -> ConfigDocument {
    let mut doc = ConfigDocument {
        regime: cfg.regime.name().to_string(),
        n: Some(cfg.sizes.clone()),
        d: Some(cfg.d),
        metric: Some(cfg.metric.to_string()),
        alpha: Some(cfg.alpha),
        trials: Some(cfg.trials),
        seed: Some(cfg.base_seed),
        tol: Some(cfg.tol),
        workers: Some(cfg.workers),
        eigen_cap: Some(cfg.eigen_cap),
        samples: cfg.samples,
        grid_points: Some(cfg.grid_points),
        ..Default::default()
    };
    match cfg.regime {
        Regime::Connectivity(ConnectivityRadius::LogPower { exponent }) => {
            doc.log_exponent = Some(exponent)
        }
        Regime::Connectivity(ConnectivityRadius::LogScaled { c }) => doc.c = Some(c),
        Regime::Thermodynamic { gamma } => doc.gamma = Some(gamma),
        Regime::Dense { rho } => doc.rho = Some(rho),
    }
    doc
}

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Write `lines` (without terminators) to `path`, one per line.
fn write_lines(path: &Path, lines: impl IntoIterator<Item = String>) -> Result<()> {
    let mut out = create(path)?;
    for line in lines {
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Data lines of a CSV with the expected header, as `(line number, text)`.
fn read_rows(path: &Path, header: &str) -> Result<Vec<(usize, String)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let first = lines
        .next()
        .transpose()
        .map_err(|e| Error::io(path, e))?
        .unwrap_or_default();
    if first.trim() != header {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            reason: format!("expected header {header:?}, found {first:?}"),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if !line.trim().is_empty() {
            rows.push((i + 2, line));
        }
    }
    Ok(rows)
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, field: &str) -> Result<T> {
    field.trim().parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason: format!("cannot parse {field:?}"),
    })
}

pub fn write_eigenvalues_csv(f: &SpectralDistribution, path: &Path) -> Result<()> {
    let rows = f.eigenvalues().iter().map(|&x| fmt_f64(x));
    write_lines(path, std::iter::once("lambda".to_string()).chain(rows))
}

pub fn read_eigenvalues_csv(path: &Path) -> Result<SpectralDistribution> {
    let values = read_rows(path, "lambda")?
        .iter()
        .map(|(line, text)| parse_field::<f64>(path, *line, text))
        .collect::<Result<Vec<_>>>()?;
    SpectralDistribution::new(values, path.display().to_string())
}

/// `x,F` rows of the ESD evaluated on a sorted grid.
pub fn write_cdf_csv(f: &SpectralDistribution, grid: &[f64], path: &Path) -> Result<()> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("grid", "CDF grid must be sorted ascending"));
    }
    let rows = grid
        .iter()
        .map(|&x| format!("{},{}", fmt_f64(x), fmt_f64(f.cdf(x))));
    write_lines(path, std::iter::once("x,F".to_string()).chain(rows))
}

pub fn read_cdf_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    read_rows(path, "x,F")?
        .iter()
        .map(|(line, text)| {
            let (x, f) = text.split_once(',').ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: *line,
                reason: "expected two columns".into(),
            })?;
            Ok((parse_field(path, *line, x)?, parse_field(path, *line, f)?))
        })
        .collect()
}

pub fn write_points_csv(points: &PointSet, path: &Path) -> Result<()> {
    let header = (0..points.dim())
        .map(|k| format!("x{k}"))
        .collect::<Vec<_>>()
        .join(",");
    let rows = points
        .iter()
        .map(|p| p.iter().map(|&c| fmt_f64(c)).collect::<Vec<_>>().join(","));
    write_lines(path, std::iter::once(header).chain(rows))
}

/// Row-per-line dump of the dense matrix; refused above [`MATRIX_DUMP_CAP`].
pub fn write_matrix_csv(l: &RegularizedLaplacian, path: &Path) -> Result<()> {
    let n = l.n();
    if n > MATRIX_DUMP_CAP {
        return Err(Error::invalid(
            "n",
            format!("matrix dumps are limited to n <= {MATRIX_DUMP_CAP}, got {n}"),
        ));
    }
    let rows = (0..n).map(|i| {
        (0..n)
            .map(|j| fmt_f64(l.get(i, j)))
            .collect::<Vec<_>>()
            .join(",")
    });
    write_lines(path, rows)
}

/// JSON sidecar of an edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSidecar {
    pub n: usize,
    pub d: usize,
    pub r: f64,
    pub metric: String,
    pub kind: GraphKind,
    pub seed: Option<u64>,
}

pub fn sidecar_path(edges: &Path) -> PathBuf {
    edges.with_extension("json")
}

/// Edge list `u,v` (`u < v`) at `path` plus the sidecar next to it.
pub fn write_graph(g: &GeometricGraph, path: &Path) -> Result<()> {
    let rows = g.edges().map(|(u, v)| format!("{u},{v}"));
    write_lines(path, std::iter::once("u,v".to_string()).chain(rows))?;
    let p = g.params();
    let sidecar = GraphSidecar {
        n: p.n,
        d: p.d,
        r: p.r,
        metric: p.metric.to_string(),
        kind: p.kind,
        seed: p.seed,
    };
    write_json(&sidecar, &sidecar_path(path))
}

pub fn read_graph(path: &Path) -> Result<GeometricGraph> {
    let meta_path = sidecar_path(path);
    let text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let sidecar: GraphSidecar = serde_json::from_str(&text)?;
    let params = GraphParams {
        n: sidecar.n,
        d: sidecar.d,
        r: sidecar.r,
        metric: sidecar.metric.parse()?,
        kind: sidecar.kind,
        seed: sidecar.seed,
    };
    let edges = read_rows(path, "u,v")?
        .iter()
        .map(|(line, text)| {
            let (u, v) = text.split_once(',').ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: *line,
                reason: "expected two columns".into(),
            })?;
            Ok((parse_field(path, *line, u)?, parse_field(path, *line, v)?))
        })
        .collect::<Result<Vec<(usize, usize)>>>()?;
    GeometricGraph::from_edges(params, &edges)
}

pub const TRIALS_HEADER: &str = "n,seed,radius,nominal_degree,rgg_mean_degree,dgg_mean_degree,status,singular_graph,singular_vertex,levy,levy_cubed,ks,theorem2_bound,bound_satisfied,side_condition";

/// One row per trial. Wall times are left out so equal configs give
/// byte-identical files; they go to the manifest instead.
pub fn write_trials_csv(trials: &[TrialResult], path: &Path) -> Result<()> {
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    let rows = trials.iter().map(|t| {
        let (status, graph, vertex, report) = match &t.outcome {
            TrialOutcome::Completed(r) => ("completed", String::new(), String::new(), Some(r)),
            TrialOutcome::Singular { graph, vertex } => {
                ("singular", graph.to_string(), vertex.to_string(), None)
            }
        };
        [
            t.n.to_string(),
            t.seed.to_string(),
            fmt_f64(t.radius),
            fmt_f64(t.nominal_degree),
            fmt_f64(t.rgg_mean_degree),
            fmt_f64(t.dgg_mean_degree),
            status.to_string(),
            graph,
            vertex,
            opt(report.map(|r| r.levy)),
            opt(report.map(|r| r.levy_cubed)),
            opt(report.map(|r| r.ks)),
            opt(t.theorem2_bound),
            t.bound_satisfied()
                .map(|b| b.to_string())
                .unwrap_or_default(),
            t.side_condition.to_string(),
        ]
        .join(",")
    });
    write_lines(path, std::iter::once(TRIALS_HEADER.to_string()).chain(rows))
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    write_lines(path, [serde_json::to_string_pretty(value)?])
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// Reproducibility record written next to experiment outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub base_seed: u64,
    pub config: ConfigDocument,
    pub stages: Vec<StageTiming>,
    /// SHA-256 of each output, keyed by path relative to the output directory.
    pub outputs: BTreeMap<String, String>,
    pub extras: Value,
}

impl RunManifest {
    pub fn new(cfg: &RegimeConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: String::new(),
            base_seed: cfg.base_seed,
            config: config_document(cfg),
            stages: Vec::new(),
            outputs: BTreeMap::new(),
            extras: Value::Null,
        }
    }

    pub fn record_stage(&mut self, stage: &str, elapsed: Duration) {
        self.stages.push(StageTiming {
            stage: stage.to_string(),
            seconds: elapsed.as_secs_f64(),
        });
    }

    pub fn record_output(&mut self, dir: &Path, relative: &str) -> Result<()> {
        let digest = sha256_file(&dir.join(relative))?;
        self.outputs.insert(relative.to_string(), digest);
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(self, path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Outputs whose current checksum differs from the recorded one.
    pub fn verify(&self, dir: &Path) -> Result<Vec<String>> {
        let mut mismatched = Vec::new();
        for (relative, digest) in &self.outputs {
            if &sha256_file(&dir.join(relative))? != digest {
                mismatched.push(relative.clone());
            }
        }
        Ok(mismatched)
    }
}
