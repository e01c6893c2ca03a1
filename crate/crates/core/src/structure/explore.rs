use std::collections::{HashMap, VecDeque};

use crate::graph::{Graph, VertexSet};
use crate::weights::{psi_functions, Budget, LawError, PhiSpec, PsiValues};

/// Global record of consumed vertices across a pipeline run.
///
/// Every removal from a source set goes through [`ConsumptionLog::take`]; a
/// vertex taken twice is counted as a double consumption.
#[derive(Debug, Clone)]
pub struct ConsumptionLog {
    taken: VertexSet,
    double: u64,
}

impl ConsumptionLog {
    pub fn new(n: usize) -> Self {
        ConsumptionLog { taken: VertexSet::empty(n), double: 0 }
    }

    /// Removes `v` from `source` and records it. Returns `false` when `v` was
    /// not in `source`.
    pub fn take(&mut self, source: &mut VertexSet, v: u32) -> bool {
        if !source.remove(v) {
            return false;
        }
        if !self.taken.insert(v) {
            self.double += 1;
        }
        true
    }

    pub fn double_consumptions(&self) -> u64 {
        self.double
    }

    pub fn consumed(&self) -> usize {
        self.taken.len()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.taken.contains(v)
    }
}

/// Three seed sets of size `K`, in ascending vertex order.
pub type SeedSets = [Vec<u32>; 3];

/// Outcome of one exploration.
#[derive(Debug, Clone, PartialEq)]
pub struct Exploration {
    pub start: u32,
    pub success: bool,
    pub center: Option<u32>,
    pub seeds: Option<SeedSets>,
    /// Tree-distance from `start` to the center.
    pub center_depth: u32,
    /// Edges `(parent, child)` of the discovered tree, in discovery order.
    pub tree_edges: Vec<(u32, u32)>,
    /// Vertices removed from the source, in removal order.
    pub consumed: Vec<u32>,
    pub steps: u64,
}

impl Exploration {
    pub fn vertices_consumed(&self) -> u64 {
        self.consumed.len() as u64
    }
}

/// Result of [`explore`] on a copy of the source.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplorationResult {
    pub exploration: Exploration,
    pub remaining_source: VertexSet,
}

/// Exploration of `v` in `source` with type `K`, on a copy of `source`.
pub fn explore(g: &Graph, v: u32, source: &VertexSet, k: u64, phi: &PhiSpec) -> Result<ExplorationResult, LawError> {
    let psi = psi_functions(k, phi)?;
    let mut remaining = source.clone();
    let mut log = ConsumptionLog::new(g.n());
    let exploration = explore_in_place(g, v, &mut remaining, k, psi.psi1, &mut log);
    Ok(ExplorationResult { exploration, remaining_source: remaining })
}

/// Exploration of `v`, removing consumed vertices from `source`.
///
/// The waiting set is first-in first-out and neighbours are taken in
/// ascending index order. A vertex with at least `3K` neighbours in the
/// current source ends the exploration: its `3K` lowest neighbours become
/// the seed sets. Otherwise all its neighbours are removed from the source
/// and those within tree-distance `psi1` of `v` join the waiting set.
pub fn explore_in_place(
    g: &Graph,
    v: u32,
    source: &mut VertexSet,
    k: u64,
    psi1: u64,
    log: &mut ConsumptionLog,
) -> Exploration {
    let need = (3 * k) as usize;
    let mut out = Exploration {
        start: v,
        success: false,
        center: None,
        seeds: None,
        center_depth: 0,
        tree_edges: Vec::new(),
        consumed: Vec::new(),
        steps: 0,
    };
    let mut depth: HashMap<u32, u64> = HashMap::from([(v, 0)]);
    let mut waiting = VecDeque::from([v]);
    let mut nbrs = Vec::with_capacity(need);
    while let Some(x) = waiting.pop_front() {
        out.steps += 1;
        nbrs.clear();
        nbrs.extend(g.neighbors(x).iter().copied().filter(|&y| source.contains(y)));
        if nbrs.is_empty() {
            continue;
        }
        let dx = depth[&x];
        if nbrs.len() >= need {
            nbrs.truncate(need);
            for &y in &nbrs {
                log.take(source, y);
                out.consumed.push(y);
            }
            let ku = k as usize;
            out.seeds = Some([nbrs[..ku].to_vec(), nbrs[ku..2 * ku].to_vec(), nbrs[2 * ku..].to_vec()]);
            out.success = true;
            out.center = Some(x);
            out.center_depth = dx as u32;
            return out;
        }
        for &y in &nbrs {
            log.take(source, y);
            out.consumed.push(y);
            out.tree_edges.push((x, y));
            depth.insert(y, dx + 1);
            if dx < psi1 {
                waiting.push_back(y);
            }
        }
    }
    out
}

/// Per-run budget bookkeeping.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BudgetAudit {
    pub explorations: u64,
    pub exploration_violations: u64,
    pub trials: u64,
    pub trial_violations: u64,
    pub experiments: u64,
    pub experiment_violations: u64,
    pub max_exploration_consumed: u64,
    pub max_trial_consumed: u64,
    pub max_experiment_consumed: u64,
}

impl BudgetAudit {
    pub fn violations(&self) -> u64 {
        self.exploration_violations + self.trial_violations + self.experiment_violations
    }

    pub(crate) fn exploration(&mut self, psi: &PsiValues, consumed: u64) {
        self.explorations += 1;
        self.max_exploration_consumed = self.max_exploration_consumed.max(consumed);
        if !psi.psi2.allows(consumed) {
            self.exploration_violations += 1;
        }
    }

    pub(crate) fn trial(&mut self, budget: Budget, consumed: u64) {
        self.trials += 1;
        self.max_trial_consumed = self.max_trial_consumed.max(consumed);
        if !budget.allows(consumed) {
            self.trial_violations += 1;
        }
    }

    pub(crate) fn experiment(&mut self, psi: &PsiValues, consumed: u64) {
        self.experiments += 1;
        self.max_experiment_consumed = self.max_experiment_consumed.max(consumed);
        if !psi.psi3.allows(consumed) {
            self.experiment_violations += 1;
        }
    }

    pub fn merge(&mut self, o: &BudgetAudit) {
        self.explorations += o.explorations;
        self.exploration_violations += o.exploration_violations;
        self.trials += o.trials;
        self.trial_violations += o.trial_violations;
        self.experiments += o.experiments;
        self.experiment_violations += o.experiment_violations;
        self.max_exploration_consumed = self.max_exploration_consumed.max(o.max_exploration_consumed);
        self.max_trial_consumed = self.max_trial_consumed.max(o.max_trial_consumed);
        self.max_experiment_consumed = self.max_experiment_consumed.max(o.max_experiment_consumed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (1..n as u32).map(|i| (i - 1, i)).collect();
        Graph::unweighted(n, &edges)
    }

    #[test]
    fn immediate_success_and_isolated_failure() {
        let star = crate::graph::glue_star_path(1, 8).unwrap();
        let src = VertexSet::from_iter(8, 1..8);
        let r = explore(&star, 0, &src, 2, &PhiSpec::sqrt()).unwrap();
        assert!(r.exploration.success);
        assert_eq!(r.exploration.vertices_consumed(), 6);
        assert_eq!(r.exploration.seeds, Some([vec![1, 2], vec![3, 4], vec![5, 6]]));
        assert_eq!(r.remaining_source.to_vec(), vec![7]);

        let g = Graph::empty(4);
        let src = VertexSet::from_iter(4, 1..4);
        let r = explore(&g, 0, &src, 1, &PhiSpec::sqrt()).unwrap();
        assert!(!r.exploration.success);
        assert_eq!(r.remaining_source, src);
        assert_eq!(r.exploration.vertices_consumed(), 0);
    }

    #[test]
    fn path_with_zero_depth_stops_after_first_step() {
        // K = 2 with φ(k) = k² gives ψ₁ = ⌊2 / 6⌋ = 0.
        let phi = PhiSpec::Power { beta: 2.0 };
        assert_eq!(crate::weights::psi1(2, &phi), 0);
        let g = path(6);
        let src = VertexSet::from_iter(6, 1..6);
        let r = explore(&g, 0, &src, 2, &phi).unwrap();
        assert!(!r.exploration.success);
        assert_eq!(r.exploration.consumed, vec![1]);
        assert_eq!(r.exploration.steps, 1);
    }
}
