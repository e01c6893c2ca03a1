use crate::graph::{Graph, VertexSet};
use crate::weights::{psi_functions, Budget, PhiSpec, PsiValues};

use super::explore::{explore_in_place, BudgetAudit, ConsumptionLog, SeedSets};
use super::StructureError;

#[derive(Debug, Clone, PartialEq)]
pub struct TaskConfig {
    pub k: u64,
    pub phi: PhiSpec,
    /// Level budget of a trial.
    pub levels: u32,
    pub max_trials: u32,
    pub eps1: f64,
}

impl TaskConfig {
    /// `max(1, ⌊ln ln ln n⌋)`.
    pub fn default_levels(n: usize) -> u32 {
        let l = (n as f64).ln().ln().ln();
        if l.is_finite() && l >= 1.0 {
            l.floor() as u32
        } else {
            1
        }
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        let bad = |m: String| Err(StructureError::InvalidConfig(m));
        if self.k == 0 {
            return bad("K must be >= 1".into());
        }
        if self.levels == 0 {
            return bad("L must be >= 1".into());
        }
        if !(self.eps1 > 0.0 && self.eps1 < 1.0) {
            return bad(format!("eps1 must lie in (0, 1), got {}", self.eps1));
        }
        self.phi.validate().map_err(|e| StructureError::InvalidConfig(e.to_string()))
    }

    pub fn psi(&self) -> Result<PsiValues, StructureError> {
        psi_functions(self.k, &self.phi).map_err(|e| StructureError::InvalidConfig(e.to_string()))
    }

    /// `K^(L+1) ψ₂(K)`.
    pub fn trial_budget(&self, psi: &PsiValues) -> Budget {
        let factor = (self.k as u128).checked_pow(self.levels + 1);
        match factor {
            Some(f) => psi.psi2.times(f),
            None => Budget::Overflow,
        }
    }

    /// `(⌊ε₁ n⌋, ⌊ε₁ n / 4⌋)`: experiment budget and success threshold.
    pub fn task2_limits(&self, n: usize) -> (u64, u64) {
        let e = self.eps1 * n as f64;
        (e.floor() as u64, (e / 4.0).floor() as u64)
    }
}

/// A vertex found by a successful exploration.
#[derive(Debug, Clone, PartialEq)]
pub struct Center {
    pub vertex: u32,
    pub seeds: SeedSets,
    /// Start vertex of the exploration that found it.
    pub found_from: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub success: bool,
    pub start: u32,
    /// Levels reached.
    pub level: u32,
    /// On success, the `L` centres `u₁ … u_L`, each found from a third seed
    /// set of its predecessor.
    pub lineage: Vec<Center>,
    pub consumed: u64,
    pub explorations: u64,
}

struct Found {
    center: Center,
    parent: Option<usize>,
}

/// Runs one trial on `source` (in place). The start vertex is the lowest
/// vertex of `source` and counts as consumed.
pub(crate) fn trial_in_place(
    g: &Graph,
    source: &mut VertexSet,
    cfg: &TaskConfig,
    psi: &PsiValues,
    log: &mut ConsumptionLog,
    audit: &mut BudgetAudit,
) -> Option<TrialResult> {
    let start = source.first()?;
    let before = log.consumed();
    log.take(source, start);
    let mut res =
        TrialResult { success: false, start, level: 0, lineage: Vec::new(), consumed: 0, explorations: 0 };
    let mut found: Vec<Found> = Vec::new();
    let mut explore = |v: u32, source: &mut VertexSet, log: &mut ConsumptionLog, res: &mut TrialResult| {
        let e = explore_in_place(g, v, source, cfg.k, psi.psi1, log);
        audit.exploration(psi, e.vertices_consumed());
        res.explorations += 1;
        e
    };

    let e = explore(start, source, log, &mut res);
    let mut last_level: Vec<usize> = Vec::new();
    if let (Some(c), Some(seeds)) = (e.center, e.seeds) {
        found.push(Found { center: Center { vertex: c, seeds, found_from: start }, parent: None });
        last_level.push(0);
        res.level = 1;
    }
    let mut finisher = None;
    if res.level == cfg.levels && !last_level.is_empty() {
        finisher = Some(0);
    }
    while finisher.is_none() && !last_level.is_empty() {
        let waiting: Vec<(u32, usize)> = last_level
            .iter()
            .flat_map(|&i| found[i].center.seeds[2].iter().map(move |&y| (y, i)))
            .collect();
        let mut next = Vec::new();
        for (y, parent) in waiting {
            let e = explore(y, source, log, &mut res);
            if let (Some(c), Some(seeds)) = (e.center, e.seeds) {
                found.push(Found { center: Center { vertex: c, seeds, found_from: y }, parent: Some(parent) });
                next.push(found.len() - 1);
                if res.level + 1 == cfg.levels {
                    finisher = Some(found.len() - 1);
                    break;
                }
            }
        }
        if !next.is_empty() {
            res.level += 1;
        }
        last_level = next;
    }
    if let Some(mut i) = finisher {
        res.success = true;
        let mut chain = vec![];
        loop {
            chain.push(found[i].center.clone());
            match found[i].parent {
                Some(p) => i = p,
                None => break,
            }
        }
        chain.reverse();
        res.lineage = chain;
    }
    res.consumed = (log.consumed() - before) as u64;
    audit.trial(cfg.trial_budget(psi), res.consumed);
    Some(res)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task1Result {
    pub success: bool,
    pub trials: Vec<TrialResult>,
    /// Source after the last trial.
    pub source: VertexSet,
    pub consumed: u64,
}

impl Task1Result {
    pub fn lineage(&self) -> &[Center] {
        self.trials.last().filter(|t| t.success).map_or(&[], |t| &t.lineage)
    }
}

pub(crate) fn task1_in_place(
    g: &Graph,
    cfg: &TaskConfig,
    psi: &PsiValues,
    log: &mut ConsumptionLog,
    audit: &mut BudgetAudit,
) -> Task1Result {
    let mut source = VertexSet::full(g.n());
    let mut trials = Vec::new();
    let mut success = false;
    for _ in 0..cfg.max_trials {
        let Some(t) = trial_in_place(g, &mut source, cfg, psi, log, audit) else { break };
        success = t.success;
        trials.push(t);
        if success {
            break;
        }
    }
    let consumed = (g.n() - source.len()) as u64;
    Task1Result { success, trials, source, consumed }
}

/// Task I: trials on shrinking sources, stopping at the first success or
/// after `max_trials` trials.
pub fn task1(g: &Graph, cfg: &TaskConfig) -> Result<(Task1Result, BudgetAudit), StructureError> {
    cfg.validate()?;
    let psi = cfg.psi()?;
    let mut log = ConsumptionLog::new(g.n());
    let mut audit = BudgetAudit::default();
    let r = task1_in_place(g, cfg, &psi, &mut log, &mut audit);
    Ok((r, audit))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub success: bool,
    pub center: Option<Center>,
    pub consumed: u64,
    pub explorations: u64,
}

/// Explorations of `z₁, z₂, …` in turn on the shared `source`, stopping at
/// the first success.
pub(crate) fn experiment_in_place(
    g: &Graph,
    f: &[u32],
    source: &mut VertexSet,
    k: u64,
    psi: &PsiValues,
    log: &mut ConsumptionLog,
    audit: &mut BudgetAudit,
) -> ExperimentResult {
    let before = log.consumed();
    let mut out = ExperimentResult { success: false, center: None, consumed: 0, explorations: 0 };
    for &z in f {
        let e = explore_in_place(g, z, source, k, psi.psi1, log);
        audit.exploration(psi, e.vertices_consumed());
        out.explorations += 1;
        if let (Some(c), Some(seeds)) = (e.center, e.seeds) {
            out.success = true;
            out.center = Some(Center { vertex: c, seeds, found_from: z });
            break;
        }
    }
    out.consumed = (log.consumed() - before) as u64;
    audit.experiment(psi, out.consumed);
    out
}

/// One experiment on a copy of `source`.
pub fn experiment(
    g: &Graph,
    f: &[u32],
    source: &VertexSet,
    k: u64,
    phi: &PhiSpec,
) -> Result<(ExperimentResult, VertexSet), StructureError> {
    let psi = psi_functions(k, phi).map_err(|e| StructureError::InvalidConfig(e.to_string()))?;
    if f.iter().any(|&z| source.contains(z)) {
        return Err(StructureError::InvalidConfig("experiment set overlaps the source".into()));
    }
    let mut s = source.clone();
    let mut log = ConsumptionLog::new(g.n());
    let r = experiment_in_place(g, f, &mut s, k, &psi, &mut log, &mut BudgetAudit::default());
    Ok((r, s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task2Stop {
    /// More than `⌊ε₁ n / 4⌋` active sets.
    Success,
    NoActiveSets,
    ExperimentBudget,
}

/// A collected centre. Index `parent` refers to [`Task2Result::centers`].
#[derive(Debug, Clone, PartialEq)]
pub struct CollectedCenter {
    pub center: Center,
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task2Result {
    pub stop: Task2Stop,
    /// Task I lineage first, then experiment successes in discovery order.
    pub centers: Vec<CollectedCenter>,
    pub experiments: u64,
    /// Active-set count after each experiment.
    pub active_trajectory: Vec<u64>,
    pub experiment_budget: u64,
    pub success_threshold: u64,
}

impl Task2Result {
    pub fn success(&self) -> bool {
        self.stop == Task2Stop::Success
    }
}

pub(crate) fn task2_in_place(
    g: &Graph,
    lineage: &[Center],
    source: &mut VertexSet,
    cfg: &TaskConfig,
    psi: &PsiValues,
    log: &mut ConsumptionLog,
    audit: &mut BudgetAudit,
) -> Task2Result {
    let (budget, threshold) = cfg.task2_limits(g.n());
    let mut centers: Vec<CollectedCenter> = lineage
        .iter()
        .enumerate()
        .map(|(i, c)| CollectedCenter { center: c.clone(), parent: i.checked_sub(1) })
        .collect();
    // Active sets as (centre index, seed set 0 or 1); the newest is last.
    let mut active: Vec<(usize, usize)> = (0..centers.len()).flat_map(|i| [(i, 0), (i, 1)]).collect();
    let mut res = Task2Result {
        stop: Task2Stop::NoActiveSets,
        centers: Vec::new(),
        experiments: 0,
        active_trajectory: Vec::new(),
        experiment_budget: budget,
        success_threshold: threshold,
    };
    res.stop = loop {
        if active.len() as u64 > threshold {
            break Task2Stop::Success;
        }
        let Some((owner, which)) = active.pop() else { break Task2Stop::NoActiveSets };
        if res.experiments == budget {
            active.push((owner, which));
            break Task2Stop::ExperimentBudget;
        }
        let f = centers[owner].center.seeds[which].clone();
        let e = experiment_in_place(g, &f, source, cfg.k, psi, log, audit);
        res.experiments += 1;
        if let Some(c) = e.center {
            centers.push(CollectedCenter { center: c, parent: Some(owner) });
            let i = centers.len() - 1;
            active.push((i, 0));
            active.push((i, 1));
        }
        res.active_trajectory.push(active.len() as u64);
    };
    res.centers = centers;
    res
}

/// Task II from a successful Task I, on a copy of its source.
pub fn task2(g: &Graph, t1: &Task1Result, cfg: &TaskConfig) -> Result<(Task2Result, BudgetAudit), StructureError> {
    cfg.validate()?;
    if !t1.success {
        return Err(StructureError::TaskFailed("Task I did not succeed".into()));
    }
    let psi = cfg.psi()?;
    let mut source = t1.source.clone();
    let mut log = ConsumptionLog::new(g.n());
    let mut audit = BudgetAudit::default();
    let r = task2_in_place(g, t1.lineage(), &mut source, cfg, &psi, &mut log, &mut audit);
    Ok((r, audit))
}

/// Full run of both tasks with shared bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineRun {
    pub task1: Task1Result,
    pub task2: Option<Task2Result>,
    pub audit: BudgetAudit,
    pub double_consumptions: u64,
    /// Source sizes before Task I, after Task I and after Task II.
    pub source_sizes: Vec<usize>,
    pub psi: PsiValues,
}

pub fn run_pipeline(g: &Graph, cfg: &TaskConfig) -> Result<PipelineRun, StructureError> {
    cfg.validate()?;
    let psi = cfg.psi()?;
    let mut log = ConsumptionLog::new(g.n());
    let mut audit = BudgetAudit::default();
    let t1 = task1_in_place(g, cfg, &psi, &mut log, &mut audit);
    let mut sizes = vec![g.n(), t1.source.len()];
    let t2 = if t1.success {
        let mut source = t1.source.clone();
        let r = task2_in_place(g, t1.lineage(), &mut source, cfg, &psi, &mut log, &mut audit);
        sizes.push(source.len());
        Some(r)
    } else {
        None
    };
    Ok(PipelineRun { task1: t1, task2: t2, audit, double_consumptions: log.double_consumptions(), source_sizes: sizes, psi })
}
