//! Sweep configuration files.
//!
//! ```text
//! # shared keys
//! model = er
//! p = 20
//! sizes = 20, 30, 40, 50
//! lambda = 0.5, 1
//! replicas = 200
//! tmax = pilot
//! base_seed = 7
//! out = results
//!
//! [cell slow]
//! lambda = 0.05
//! ```
//!
//! Keys before the first section are shared. Each `[cell NAME]` section
//! overrides shared keys and defines one group of cells (every size times
//! every λ). Without sections the shared keys form a single group named
//! `main`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::graph::{read_graph, Graph, GraphModelSpec};
use crate::structure::TaskConfig;
use crate::weights::{PhiSpec, WeightModel};

use super::HarnessError;

/// Graph family of a group; `size` picks `n` (or `ℓ` for glued star paths).
#[derive(Debug, Clone, PartialEq)]
pub enum GraphFamily {
    Er { p: f64 },
    Irg { weights: WeightModel },
    GluedStarPath { m: usize },
    /// A fixed graph file, shared by all sizes.
    File { path: PathBuf, graph: Graph },
}

impl GraphFamily {
    pub fn spec(&self, size: usize) -> Option<GraphModelSpec> {
        match self {
            GraphFamily::Er { p } => Some(GraphModelSpec::Er { n: size, p: *p }),
            GraphFamily::Irg { weights } => Some(GraphModelSpec::Irg { n: size, weights: weights.clone() }),
            GraphFamily::GluedStarPath { m } => Some(GraphModelSpec::GluedStarPath { ell: size, m: *m }),
            GraphFamily::File { .. } => None,
        }
    }

    pub fn build(&self, size: usize, seed: u64) -> Result<Graph, HarnessError> {
        match self {
            GraphFamily::File { graph, .. } => Ok(graph.clone()),
            other => Ok(other.spec(size).unwrap().generate(seed)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaGrid {
    Values,
    /// Calibrate one λ per group so the pilot median lands in the window.
    Pilot { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TmaxPolicy {
    Fixed(f64),
    /// `factor ×` pilot median, capped at `cap`.
    Pilot { factor: f64, cap: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellGroup {
    pub name: String,
    pub family: GraphFamily,
    pub sizes: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub lambda_mode: LambdaGrid,
    pub replicas: u64,
    pub tmax: TmaxPolicy,
    pub structure: Option<TaskConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub groups: Vec<CellGroup>,
    pub base_seed: u64,
    pub out_dir: PathBuf,
    pub pilot_replicas: u64,
    /// Target window for pilot medians.
    pub pilot_window: (f64, f64),
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, HarnessError> {
    let items: Result<Vec<T>, _> = v.split(',').map(|s| s.trim().parse::<T>()).collect();
    let items = items.map_err(|_| HarnessError::Config(format!("`{key}`: cannot parse `{v}`")))?;
    if items.is_empty() {
        return Err(HarnessError::Config(format!("`{key}` is empty")));
    }
    Ok(items)
}

fn parse_one<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, HarnessError> {
    v.trim().parse().map_err(|_| HarnessError::Config(format!("`{key}`: cannot parse `{v}`")))
}

const KNOWN_KEYS: &[&str] = &[
    "model", "p", "weights", "m", "graph", "sizes", "lambda", "lambda_range", "replicas", "tmax",
    "tmax_factor", "tmax_cap", "base_seed", "out", "pilot_replicas", "pilot_window", "k", "phi",
    "levels", "max_trials", "eps1",
];

impl SweepConfig {
    /// Parses a config; relative paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, HarnessError> {
        let mut shared: BTreeMap<String, String> = BTreeMap::new();
        let mut sections: Vec<(String, BTreeMap<String, String>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let inner = rest
                    .strip_suffix(']')
                    .ok_or_else(|| HarnessError::Config(format!("line {}: unterminated section", i + 1)))?;
                let name = inner.trim().strip_prefix("cell").map(str::trim).unwrap_or(inner.trim());
                let name = if name.is_empty() { format!("cell{}", sections.len()) } else { name.to_string() };
                sections.push((name, BTreeMap::new()));
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key = value", i + 1)))?;
            let k = k.trim().to_string();
            if !KNOWN_KEYS.contains(&k.as_str()) {
                return Err(HarnessError::Config(format!("line {}: unknown key `{k}`", i + 1)));
            }
            let target = sections.last_mut().map_or(&mut shared, |s| &mut s.1);
            target.insert(k, v.trim().to_string());
        }
        if sections.is_empty() {
            sections.push(("main".into(), BTreeMap::new()));
        }
        let get = |k: &str| shared.get(k).cloned();
        let base_seed = get("base_seed").map_or(Ok(0), |v| parse_one("base_seed", &v))?;
        let out_dir = base_dir.join(get("out").unwrap_or_else(|| "sweep-out".into()));
        let pilot_replicas = get("pilot_replicas").map_or(Ok(50), |v| parse_one("pilot_replicas", &v))?;
        let pilot_window = match get("pilot_window") {
            None => (1e2, 1e4),
            Some(v) => {
                let w: Vec<f64> = parse_list("pilot_window", &v)?;
                if w.len() != 2 || !(w[0] > 0.0 && w[0] < w[1]) {
                    return Err(HarnessError::Config("`pilot_window` needs lo, hi with 0 < lo < hi".into()));
                }
                (w[0], w[1])
            }
        };
        let mut groups = Vec::new();
        for (name, over) in &sections {
            let mut keys = shared.clone();
            keys.extend(over.clone());
            groups.push(parse_group(name, &keys, base_dir)?);
        }
        Ok(SweepConfig { groups, base_seed, out_dir, pilot_replicas, pilot_window })
    }
}

fn parse_group(name: &str, keys: &BTreeMap<String, String>, base_dir: &Path) -> Result<CellGroup, HarnessError> {
    let need = |k: &str| keys.get(k).ok_or_else(|| HarnessError::Config(format!("group `{name}`: missing `{k}`")));
    let family = match need("model")?.as_str() {
        "er" => GraphFamily::Er { p: parse_one("p", need("p")?)? },
        "irg" => GraphFamily::Irg {
            weights: need("weights")?.parse().map_err(|e| HarnessError::Config(format!("`weights`: {e}")))?,
        },
        "glued" => GraphFamily::GluedStarPath { m: parse_one("m", need("m")?)? },
        "file" => {
            let path = base_dir.join(need("graph")?);
            let file = std::fs::File::open(&path)
                .map_err(|e| HarnessError::Config(format!("graph file {}: {e}", path.display())))?;
            let graph = read_graph(std::io::BufReader::new(file))?;
            GraphFamily::File { path, graph }
        }
        other => return Err(HarnessError::Config(format!("unknown model `{other}`"))),
    };
    let sizes: Vec<usize> = match (&family, keys.get("sizes")) {
        (GraphFamily::File { graph, .. }, None) => vec![graph.n()],
        (_, Some(v)) => parse_list("sizes", v)?,
        (_, None) => return Err(HarnessError::Config(format!("group `{name}`: missing `sizes`"))),
    };
    if sizes.contains(&0) {
        return Err(HarnessError::Config("sizes must be >= 1".into()));
    }
    let (lambdas, lambda_mode) = match need("lambda")?.as_str() {
        "pilot" => {
            let range: Vec<f64> = keys.get("lambda_range").map_or(Ok(vec![0.01, 10.0]), |v| parse_list("lambda_range", v))?;
            if range.len() != 2 || !(range[0] > 0.0 && range[0] < range[1]) {
                return Err(HarnessError::Config("`lambda_range` needs lo, hi with 0 < lo < hi".into()));
            }
            (Vec::new(), LambdaGrid::Pilot { lo: range[0], hi: range[1] })
        }
        v => {
            let l: Vec<f64> = parse_list("lambda", v)?;
            if l.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                return Err(HarnessError::Config("lambda values must be positive".into()));
            }
            (l, LambdaGrid::Values)
        }
    };
    let replicas: u64 = parse_one("replicas", need("replicas")?)?;
    if replicas == 0 {
        return Err(HarnessError::Config("replicas must be >= 1".into()));
    }
    let tmax = match need("tmax")?.as_str() {
        "pilot" => TmaxPolicy::Pilot {
            factor: keys.get("tmax_factor").map_or(Ok(20.0), |v| parse_one("tmax_factor", v))?,
            cap: keys.get("tmax_cap").map_or(Ok(1e6), |v| parse_one("tmax_cap", v))?,
        },
        v => {
            let t: f64 = parse_one("tmax", v)?;
            if !(t > 0.0) {
                return Err(HarnessError::Config("tmax must be positive".into()));
            }
            TmaxPolicy::Fixed(t)
        }
    };
    let structure = match keys.get("k") {
        None => None,
        Some(k) => {
            let k: u64 = parse_one("k", k)?;
            let phi: PhiSpec = keys
                .get("phi")
                .map_or(Ok(PhiSpec::sqrt()), |v| v.parse())
                .map_err(|e| HarnessError::Config(format!("`phi`: {e}")))?;
            let max_size = *sizes.iter().max().unwrap();
            let cfg = TaskConfig {
                k,
                phi,
                levels: keys.get("levels").map_or(Ok(TaskConfig::default_levels(max_size)), |v| parse_one("levels", v))?,
                max_trials: keys.get("max_trials").map_or(Ok(10), |v| parse_one("max_trials", v))?,
                eps1: parse_one("eps1", keys.get("eps1").map_or("0.01", |s| s.as_str()))?,
            };
            cfg.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
            Some(cfg)
        }
    };
    Ok(CellGroup { name: name.to_string(), family, sizes, lambdas, lambda_mode, replicas, tmax, structure })
}
