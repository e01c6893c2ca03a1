//! Continuous-time contact process: event-driven simulation, replica batches,
//! the exact small-graph oracle and record files.

mod fenwick;
mod io;
mod oracle;
mod sim;

pub use io::{read_records, write_records, write_survival};
pub use oracle::{exact_mean_extinction, ORACLE_MAX_N};
pub use sim::{simulate, InfectionState, RECOUNT_INTERVAL};

use crate::exec::Execution;
use crate::graph::{Graph, VertexSet};
use crate::rng::{derive_seed, rng_from_seed};
use crate::stats::{kaplan_meier, SurvivalPoint};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ContactError {
    #[error("{0}")]
    InvalidArgument(String),
    #[error("exact oracle limited to n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },
    #[error("oracle did not converge after {sweeps} sweeps (residual {residual:e})")]
    NotConverged { sweeps: usize, residual: f64 },
    #[error("records file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Initially infected vertices.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum InitialSet {
    #[default]
    Full,
    Vertices(VertexSet),
}

impl InitialSet {
    pub fn to_set(&self, n: usize) -> VertexSet {
        match self {
            InitialSet::Full => VertexSet::full(n),
            InitialSet::Vertices(s) => s.clone(),
        }
    }
}

/// Outcome of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtinctionRecord {
    pub replica: u64,
    pub seed: u64,
    /// Extinction time, or exactly `t_max` when censored.
    pub tau: f64,
    pub censored: bool,
    pub events: u64,
    pub peak_infected: u32,
}

impl ExtinctionRecord {
    /// Empty initial set: nothing to simulate.
    pub fn is_degenerate(&self) -> bool {
        self.peak_infected == 0
    }
}

pub(crate) fn check_params(lambda: f64, t_max: f64) -> Result<(), ContactError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(ContactError::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    if !(t_max > 0.0) {
        return Err(ContactError::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    Ok(())
}

/// Runs replica `index` with seed `base_seed + index`.
pub fn run_replica(
    g: &Graph,
    lambda: f64,
    init: &InitialSet,
    t_max: f64,
    base_seed: u64,
    index: u64,
) -> Result<ExtinctionRecord, ContactError> {
    let seed = derive_seed(base_seed, index);
    let mut rng = rng_from_seed(seed);
    let mut rec = simulate(g, lambda, init, t_max, &mut rng)?;
    rec.replica = index;
    rec.seed = seed;
    Ok(rec)
}

/// `replicas` independent runs from full occupancy.
pub fn batch(
    g: &Graph,
    lambda: f64,
    replicas: u64,
    t_max: f64,
    base_seed: u64,
) -> Result<Vec<ExtinctionRecord>, ContactError> {
    batch_with(g, lambda, &InitialSet::Full, replicas, t_max, base_seed, Execution::default())
}

/// Like [`batch`] with an explicit initial set and execution mode. Records
/// come back in replica order regardless of `exec`.
pub fn batch_with(
    g: &Graph,
    lambda: f64,
    init: &InitialSet,
    replicas: u64,
    t_max: f64,
    base_seed: u64,
    exec: Execution,
) -> Result<Vec<ExtinctionRecord>, ContactError> {
    check_params(lambda, t_max)?;
    if replicas == 0 {
        return Err(ContactError::InvalidArgument("replicas must be >= 1".into()));
    }
    exec.map_indices(replicas, |i| run_replica(g, lambda, init, t_max, base_seed, i)).into_iter().collect()
}

/// Kaplan–Meier survival curve of the extinction times.
pub fn survival_curve(records: &[ExtinctionRecord]) -> Vec<SurvivalPoint> {
    let obs: Vec<(f64, bool)> = records.iter().map(|r| (r.tau, r.censored)).collect();
    kaplan_meier(&obs)
}

pub fn censor_fraction(records: &[ExtinctionRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.censored).count() as f64 / records.len() as f64
}
