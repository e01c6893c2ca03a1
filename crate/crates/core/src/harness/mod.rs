//! Sweeps over (size, λ) cells, pilot calibration, scaling fits and the
//! exponential-law test of extinction times.

mod config;

pub use config::*;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use crate::contact::{batch_with, censor_fraction, write_records, ContactError, ExtinctionRecord, InitialSet};
use crate::exec::Execution;
use crate::graph::{Graph, GraphError};
use crate::rng::derive_seed;
use crate::stats::{ks_exp1, ks_pvalue, linear_fit, median, LinearFit};
use crate::structure::certify_irg;

/// Default KS acceptance threshold.
pub const KS_THRESHOLD: f64 = 0.08;
/// Minimum uncensored records for [`metastability_test`].
pub const MIN_UNCENSORED: usize = 200;
/// Largest censor fraction for [`metastability_test`].
pub const MAX_CENSOR_FRACTION: f64 = 0.01;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Contact(#[from] ContactError),
    #[error("pilot: {0}")]
    Pilot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Comment lines identifying the producing run.
pub fn provenance(command_line: &str, seed: u64) -> Vec<String> {
    vec![
        format!("irgcp {}", env!("CARGO_PKG_VERSION")),
        format!("command: {command_line}"),
        format!("base_seed: {seed}"),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail,
    NotEvaluable(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetastabilityReport {
    pub samples: usize,
    pub uncensored: usize,
    pub censor_fraction: f64,
    /// Sample mean of the uncensored times.
    pub mean: f64,
    /// KS distance of `τ / mean` to Exp(1); `None` when not evaluable.
    pub ks: Option<f64>,
    pub p_value: Option<f64>,
    pub threshold: f64,
    pub verdict: Verdict,
}

/// KS test of `τ / mean(τ)` against Exp(1).
///
/// Needs at least 200 uncensored records and a censor fraction below 1%.
/// The normalisation uses the sample mean, which biases the statistic by
/// `O(1/√m)`; no correction is applied.
pub fn metastability_test(records: &[ExtinctionRecord], threshold: f64) -> MetastabilityReport {
    let taus: Vec<f64> = records.iter().filter(|r| !r.censored).map(|r| r.tau).collect();
    let cf = censor_fraction(records);
    let mean = if taus.is_empty() { f64::NAN } else { taus.iter().sum::<f64>() / taus.len() as f64 };
    let mut rep = MetastabilityReport {
        samples: records.len(),
        uncensored: taus.len(),
        censor_fraction: cf,
        mean,
        ks: None,
        p_value: None,
        threshold,
        verdict: Verdict::Pass,
    };
    if taus.len() < MIN_UNCENSORED {
        rep.verdict = Verdict::NotEvaluable(format!("{} uncensored records, need {MIN_UNCENSORED}", taus.len()));
        return rep;
    }
    if cf >= MAX_CENSOR_FRACTION {
        rep.verdict = Verdict::NotEvaluable(format!("censor fraction {cf} is not below {MAX_CENSOR_FRACTION}"));
        return rep;
    }
    if !(mean > 0.0) {
        rep.verdict = Verdict::NotEvaluable("mean extinction time is zero".into());
        return rep;
    }
    let scaled: Vec<f64> = taus.iter().map(|t| t / mean).collect();
    let d = ks_exp1(&scaled);
    rep.ks = Some(d);
    rep.p_value = Some(ks_pvalue(d, scaled.len()));
    rep.verdict = if d < threshold { Verdict::Pass } else { Verdict::Fail };
    rep
}

/// Median extinction time of a short pilot batch from full occupancy.
pub fn pilot_median(
    g: &Graph,
    lambda: f64,
    replicas: u64,
    t_cap: f64,
    seed: u64,
    exec: Execution,
) -> Result<f64, HarnessError> {
    let recs = batch_with(g, lambda, &InitialSet::Full, replicas, t_cap, seed, exec)?;
    let taus: Vec<f64> = recs.iter().map(|r| r.tau).collect();
    Ok(median(&taus).unwrap_or(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PilotResult {
    pub lambda: f64,
    pub median: f64,
    pub steps: u32,
}

/// Bisection on `ln λ` in `[lo, hi]` until `median_at(λ)` lies in `window`.
///
/// `median_at` must be nondecreasing in λ up to noise.
pub fn calibrate_lambda<F>(mut median_at: F, lo: f64, hi: f64, window: (f64, f64), max_steps: u32) -> Result<PilotResult, HarnessError>
where
    F: FnMut(f64) -> Result<f64, HarnessError>,
{
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let target = (window.0 * window.1).sqrt();
    let mut best: Option<PilotResult> = None;
    for step in 1..=max_steps {
        let lambda = (0.5 * (a + b)).exp();
        let m = median_at(lambda)?;
        let res = PilotResult { lambda, median: m, steps: step };
        if m >= window.0 && m <= window.1 {
            return Ok(res);
        }
        let closer = best.is_none_or(|p| (p.median.ln() - target.ln()).abs() > (m.ln() - target.ln()).abs());
        if closer {
            best = Some(res);
        }
        if m < window.0 {
            a = lambda.ln();
        } else {
            b = lambda.ln();
        }
    }
    Err(HarnessError::Pilot(format!(
        "no λ in [{lo}, {hi}] puts the median in [{}, {}] (closest: λ = {:?})",
        window.0,
        window.1,
        best.map(|p| (p.lambda, p.median))
    )))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub group: String,
    pub size: usize,
    pub vertices: usize,
    pub lambda: f64,
    pub replicas: u64,
    pub t_max: f64,
    pub median_tau: f64,
    pub censor_fraction: f64,
    /// Certified star density `ℓ / n` when a structure config is present.
    pub structure_density: Option<f64>,
    /// `None` on success, otherwise the cell's error.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupFit {
    pub group: String,
    pub lambda: f64,
    /// Fit of `ln(median τ)` against size.
    pub fit: Option<LinearFit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub cells: Vec<CellSummary>,
    pub fits: Vec<GroupFit>,
    pub records_dir: PathBuf,
}

impl SweepSummary {
    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }
}

/// Graph seed of a size; shared by all λ so cells at equal size use the
/// same graph.
pub fn graph_seed(base: u64, size: usize) -> u64 {
    derive_seed(base, 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(size as u64 + 1))
}

fn cell_seed(base: u64, index: usize) -> u64 {
    derive_seed(base, (index as u64 + 1) << 32)
}

struct CellPlan<'a> {
    group: &'a CellGroup,
    lambda: f64,
}

fn run_cell(
    plan: &CellPlan<'_>,
    graph: &Graph,
    seed: u64,
    cfg: &SweepConfig,
    exec: Execution,
) -> Result<(Vec<ExtinctionRecord>, f64), HarnessError> {
    let t_max = match plan.group.tmax {
        TmaxPolicy::Fixed(t) => t,
        TmaxPolicy::Pilot { factor, cap } => {
            let m = pilot_median(graph, plan.lambda, cfg.pilot_replicas, cap, seed ^ 0x5a5a, exec)?;
            (factor * m).clamp(1.0, cap)
        }
    };
    let recs = batch_with(graph, plan.lambda, &InitialSet::Full, plan.group.replicas, t_max, seed, exec)?;
    Ok((recs, t_max))
}

/// Runs every cell, writes records, `summary.csv` and `fits.csv` under
/// the output directory. Cell failures are recorded and do not stop the
/// sweep.
pub fn run_sweep(cfg: &SweepConfig, header: &[String], exec: Execution) -> Result<SweepSummary, HarnessError> {
    let records_dir = cfg.out_dir.join("records");
    fs::create_dir_all(&records_dir)?;
    let mut cells = Vec::new();
    let mut index = 0usize;
    for group in &cfg.groups {
        let mut lambdas = group.lambdas.clone();
        if let LambdaGrid::Pilot { lo, hi } = group.lambda_mode {
            let size = *group.sizes.iter().max().unwrap();
            let graph = group.family.build(size, graph_seed(cfg.base_seed, size))?;
            // Runs past twice the window only need to register as too long.
            let cap = match group.tmax {
                TmaxPolicy::Pilot { cap, .. } => cap,
                TmaxPolicy::Fixed(t) => t,
            }
            .min(2.0 * cfg.pilot_window.1);
            let seed = derive_seed(cfg.base_seed, u64::MAX);
            let p = calibrate_lambda(
                |l| pilot_median(&graph, l, cfg.pilot_replicas, cap, seed, exec),
                lo,
                hi,
                cfg.pilot_window,
                40,
            )?;
            lambdas = vec![p.lambda];
        }
        for &size in &group.sizes {
            let graph = group.family.build(size, graph_seed(cfg.base_seed, size));
            let density = match (&graph, &group.structure) {
                (Ok(g), Some(tc)) => certify_irg(g, tc, false).ok().map(|c| c.certificate.stars.len() as f64 / g.n() as f64),
                _ => None,
            };
            for &lambda in &lambdas {
                let plan = CellPlan { group, lambda };
                let seed = cell_seed(cfg.base_seed, index);
                index += 1;
                let mut summary = CellSummary {
                    group: group.name.clone(),
                    size,
                    vertices: graph.as_ref().map_or(0, |g| g.n()),
                    lambda,
                    replicas: group.replicas,
                    t_max: f64::NAN,
                    median_tau: f64::NAN,
                    censor_fraction: f64::NAN,
                    structure_density: density,
                    error: None,
                };
                let outcome = match &graph {
                    Ok(g) => run_cell(&plan, g, seed, cfg, exec),
                    Err(e) => Err(HarnessError::Config(e.to_string())),
                };
                match outcome {
                    Ok((recs, t_max)) => {
                        let taus: Vec<f64> = recs.iter().map(|r| r.tau).collect();
                        summary.t_max = t_max;
                        summary.median_tau = median(&taus).unwrap_or(f64::NAN);
                        summary.censor_fraction = censor_fraction(&recs);
                        let path = records_dir.join(format!("{}_s{size}_l{lambda}.csv", group.name));
                        let mut h = header.to_vec();
                        h.push(format!("cell: group={} size={size} lambda={lambda} t_max={t_max} seed={seed}", group.name));
                        write_records(&recs, &h, fs::File::create(path)?)?;
                    }
                    Err(e) => summary.error = Some(e.to_string()),
                }
                cells.push(summary);
            }
        }
    }
    let mut fits = Vec::new();
    for group in &cfg.groups {
        let mut lambdas: Vec<f64> = cells.iter().filter(|c| c.group == group.name).map(|c| c.lambda).collect();
        lambdas.sort_by(f64::total_cmp);
        lambdas.dedup();
        for lambda in lambdas {
            let pts: Vec<(f64, f64)> = cells
                .iter()
                .filter(|c| c.group == group.name && c.lambda == lambda && c.error.is_none() && c.median_tau > 0.0)
                .map(|c| (c.size as f64, c.median_tau.ln()))
                .collect();
            let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            fits.push(GroupFit { group: group.name.clone(), lambda, fit: linear_fit(&x, &y) });
        }
    }
    let summary = SweepSummary { cells, fits, records_dir };
    write_summary(&summary, header, cfg)?;
    Ok(summary)
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn write_summary(s: &SweepSummary, header: &[String], cfg: &SweepConfig) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(cfg.out_dir.join("summary.csv"))?);
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "group,size,vertices,lambda,replicas,t_max,median_tau,censor_fraction,structure_density,status")?;
    for c in &s.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            c.group,
            c.size,
            c.vertices,
            c.lambda,
            c.replicas,
            c.t_max,
            c.median_tau,
            c.censor_fraction,
            opt(c.structure_density),
            c.error.as_deref().map_or("ok".to_string(), |e| format!("error: {}", e.replace(',', ";")))
        )?;
    }
    out.flush()?;
    let mut out = std::io::BufWriter::new(fs::File::create(cfg.out_dir.join("fits.csv"))?);
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "group,lambda,points,slope,intercept,r_squared")?;
    for f in &s.fits {
        match f.fit {
            Some(fit) => writeln!(out, "{},{},{},{},{},{}", f.group, f.lambda, fit.points, fit.slope, fit.intercept, fit.r_squared)?,
            None => writeln!(out, "{},{},,,,", f.group, f.lambda)?,
        }
    }
    out.flush()
}
