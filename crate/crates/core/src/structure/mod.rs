//! Search for disjoint spaced stars: the exploration / trial / experiment
//! pipeline on rank-one graphs, the greedy construction on Erdős–Rényi
//! graphs, and independent certificate validation.

mod certificate;
mod er;
mod explore;
mod pipeline;

pub use certificate::*;
pub use er::*;
pub use explore::*;
pub use pipeline::*;

use std::collections::HashSet;

use crate::graph::Graph;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum StructureError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("task failed: {0}")]
    TaskFailed(String),
    #[error("certificate rejected: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidCertificate(Vec<Violation>),
    #[error("certificate file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Certificate plus the run that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct IrgCertification {
    pub certificate: StarCertificate,
    pub run: PipelineRun,
}

/// Star size `M = 2K`. Each collected centre keeps its first two seed sets
/// as leaves. A seed vertex that itself became a centre is removed from its
/// parent's leaves and replaced from the unused third seed set. In strict
/// mode stars are cut to exactly `2K − 1` leaves.
pub fn assemble_irg_certificate(centers: &[CollectedCenter], k: u64, psi1: u64, strict: bool) -> StarCertificate {
    let is_center: HashSet<u32> = centers.iter().map(|c| c.center.vertex).collect();
    let m = 2 * k as usize;
    let stars = centers
        .iter()
        .map(|c| {
            let [f1, f2, f3] = &c.center.seeds;
            let mut leaves: Vec<u32> = f1.iter().chain(f2).copied().filter(|x| !is_center.contains(x)).collect();
            let spare = f3.iter().copied().filter(|x| !is_center.contains(x));
            let missing = m.saturating_sub(leaves.len());
            leaves.extend(spare.take(missing));
            if strict {
                leaves.truncate(m - 1);
            }
            Star { center: c.center.vertex, leaves }
        })
        .collect();
    StarCertificate { m, mode: SpacingMode::Connected, spacing_bound: psi1 as u32 + 1, stars }
}

/// Task I, then Task II, then certificate assembly and validation.
pub fn certify_irg(g: &Graph, cfg: &TaskConfig, strict: bool) -> Result<IrgCertification, StructureError> {
    let run = run_pipeline(g, cfg)?;
    let Some(t2) = run.task2.as_ref() else {
        return Err(StructureError::TaskFailed(format!("Task I failed after {} trials", run.task1.trials.len())));
    };
    match t2.stop {
        Task2Stop::Success => {}
        Task2Stop::NoActiveSets => {
            return Err(StructureError::TaskFailed(format!(
                "Task II ran out of active sets after {} experiments",
                t2.experiments
            )))
        }
        Task2Stop::ExperimentBudget => {
            return Err(StructureError::TaskFailed(format!(
                "Task II exceeded its budget of {} experiments",
                t2.experiment_budget
            )))
        }
    }
    let certificate = assemble_irg_certificate(&t2.centers, cfg.k, run.psi.psi1, strict);
    let verdict = validate_certificate(g, &certificate);
    if !verdict.is_valid() {
        return Err(StructureError::InvalidCertificate(verdict.violations));
    }
    Ok(IrgCertification { certificate, run })
}
