//! Marked mixed-Poisson Galton–Watson trees, thinning, and the harness that
//! compares tree generations with graph neighbourhoods.

use std::collections::HashSet;
use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::exec::Execution;
use crate::graph::{Graph, VertexSet};
use crate::rng::stream_rng;
use crate::stats::{chi_square_homogeneity, ks_two_sample, ChiSquareResult};
use crate::weights::{psi1, PhiSpec};

/// Node budget per tree.
pub const MAX_TREE_NODES: usize = 1_000_000;

/// Chi-square acceptance level used by [`CouplingReport::passes`].
pub const COUPLING_ALPHA: f64 = 0.01;

const ROOT: u32 = u32::MAX;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum GwError {
    #[error("source set is empty")]
    EmptySource,
    #[error("root {0} lies in the source set")]
    RootInSource(u32),
    #[error("{0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    /// Graph vertex carried by the node.
    pub mark: u32,
    /// Parent index, `None` for the root.
    pub parent: Option<u32>,
    pub height: u32,
    /// Children occupy `first_child .. first_child + child_count`.
    pub first_child: u32,
    pub child_count: u32,
    pub thinned: bool,
}

/// Tree stored in breadth-first order; children of a node are contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedTree {
    pub nodes: Vec<TreeNode>,
    pub depth: u32,
    /// Set when the node budget stopped the construction.
    pub truncated: bool,
}

impl MarkedTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn children(&self, i: usize) -> std::ops::Range<usize> {
        let n = &self.nodes[i];
        n.first_child as usize..(n.first_child + n.child_count) as usize
    }

    /// Node counts per height `0..=depth`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.depth as usize + 1];
        for n in &self.nodes {
            out[n.height as usize] += 1;
        }
        out
    }

    /// Unthinned node counts per height.
    pub fn unthinned_layer_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.depth as usize + 1];
        for n in self.nodes.iter().filter(|n| !n.thinned) {
            out[n.height as usize] += 1;
        }
        out
    }

    fn has_ancestor_mark(&self, i: usize, mark: u32) -> bool {
        let mut p = self.nodes[i].parent;
        while let Some(j) = p {
            let node = &self.nodes[j as usize];
            if node.mark == mark {
                return true;
            }
            p = node.parent;
        }
        false
    }

    /// Copy with thinning flags set: a node is thinned when its parent is
    /// thinned or a strict ancestor carries the same mark.
    pub fn thin(&self) -> MarkedTree {
        let mut t = self.clone();
        for i in 0..t.nodes.len() {
            let thinned = match t.nodes[i].parent {
                None => false,
                Some(p) => t.nodes[p as usize].thinned || t.has_ancestor_mark(i, t.nodes[i].mark),
            };
            t.nodes[i].thinned = thinned;
        }
        t
    }

    /// Per-height counts of distinct new marks in breadth-first order.
    ///
    /// A node counts when its parent counted and its mark has not been seen
    /// at a lower height or earlier at the same height. These are the layer
    /// sizes the graph neighbourhood is compared against.
    pub fn distinct_layer_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.depth as usize + 1];
        let mut seen = HashSet::new();
        let mut counted = vec![false; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            let parent_ok = n.parent.is_none_or(|p| counted[p as usize]);
            if parent_ok && seen.insert(n.mark) {
                counted[i] = true;
                out[n.height as usize] += 1;
            }
        }
        out
    }
}

/// Inverse-CDF sampler of marks `m ∈ U` with probability `w_m / ℓ_U`.
#[derive(Debug, Clone)]
pub struct MarkSampler {
    members: Vec<u32>,
    cumulative: Vec<f64>,
}

impl MarkSampler {
    pub fn new(g: &Graph, source: &VertexSet) -> Result<Self, GwError> {
        let members = source.to_vec();
        if members.is_empty() {
            return Err(GwError::EmptySource);
        }
        let mut acc = 0.0;
        let cumulative = members
            .iter()
            .map(|&m| {
                acc += g.weight(m);
                acc
            })
            .collect();
        Ok(MarkSampler { members, cumulative })
    }

    /// `ℓ_U`.
    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u = rng.random::<f64>() * self.total();
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.members[i.min(self.members.len() - 1)]
    }
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u32 {
    if mean <= 0.0 {
        return 0;
    }
    match Poisson::new(mean) {
        Ok(d) => {
            let x: f64 = d.sample(rng);
            x.min(u32::MAX as f64) as u32
        }
        Err(_) => 0,
    }
}

fn check_root(g: &Graph, v: u32, source: &VertexSet) -> Result<(), GwError> {
    if v as usize >= g.n() || source.universe() != g.n() {
        return Err(GwError::InvalidArgument(format!("vertex {v} or source set does not match the graph")));
    }
    if source.contains(v) {
        return Err(GwError::RootInSource(v));
    }
    Ok(())
}

/// Breadth-first tree to height `depth` rooted at `v`, marks drawn from
/// `source`. A node with mark `m` has `Poisson(w_m ℓ_U / ℓ_n)` children.
pub fn sample_marked_tree<R: Rng + ?Sized>(
    g: &Graph,
    v: u32,
    source: &VertexSet,
    depth: u32,
    rng: &mut R,
) -> Result<MarkedTree, GwError> {
    check_root(g, v, source)?;
    let marks = MarkSampler::new(g, source)?;
    Ok(grow_tree(g, v, &marks, depth, rng))
}

fn grow_tree<R: Rng + ?Sized>(g: &Graph, v: u32, marks: &MarkSampler, depth: u32, rng: &mut R) -> MarkedTree {
    let scale = marks.total() / g.ell_n();
    let mut nodes = vec![TreeNode {
        mark: v,
        parent: None,
        height: 0,
        first_child: ROOT,
        child_count: 0,
        thinned: false,
    }];
    let mut truncated = false;
    let mut i = 0;
    while i < nodes.len() {
        let node = nodes[i];
        if node.height == depth {
            break;
        }
        let want = poisson(g.weight(node.mark) * scale, rng) as usize;
        let room = MAX_TREE_NODES - nodes.len();
        let take = want.min(room);
        truncated |= take < want;
        nodes[i].first_child = nodes.len() as u32;
        nodes[i].child_count = take as u32;
        for _ in 0..take {
            nodes.push(TreeNode {
                mark: marks.sample(rng),
                parent: Some(i as u32),
                height: node.height + 1,
                first_child: ROOT,
                child_count: 0,
                thinned: false,
            });
        }
        if truncated {
            break;
        }
        i += 1;
    }
    for n in nodes.iter_mut().filter(|n| n.first_child == ROOT) {
        n.first_child = 0;
    }
    MarkedTree { nodes, depth, truncated }
}

/// Layer sizes of `B_R(v, U)` in a fresh draw of the edge set with the
/// graph's weights kept fixed.
///
/// Edges are revealed lazily during the search: each pair is examined at most
/// once, so the result has the law of a full resample.
pub fn resampled_layers<R: Rng + ?Sized>(
    g: &Graph,
    v: u32,
    source: &VertexSet,
    depth: u32,
    rng: &mut R,
) -> Vec<usize> {
    let mut layers = vec![0usize; depth as usize + 1];
    layers[0] = 1;
    let mut unseen = source.to_vec();
    let mut frontier = vec![v];
    let ell = g.ell_n();
    for layer in layers.iter_mut().skip(1) {
        let mut next = Vec::new();
        for &x in &frontier {
            let wx = g.weight(x);
            unseen.retain(|&y| {
                let p = -(-wx * g.weight(y) / ell).exp_m1();
                if rng.random::<f64>() < p {
                    next.push(y);
                    false
                } else {
                    true
                }
            });
        }
        *layer = next.len();
        frontier = next;
    }
    layers
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeightComparison {
    pub height: u32,
    /// `tree[k]`: samples with `k` tree nodes at this height.
    pub tree: Vec<u64>,
    pub graph: Vec<u64>,
    pub chi_square: ChiSquareResult,
    pub ks: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingReport {
    pub samples: u64,
    pub depth: u32,
    pub heights: Vec<HeightComparison>,
    /// Trees that hit the node budget.
    pub truncated_trees: u64,
}

impl CouplingReport {
    pub fn passes(&self) -> bool {
        self.heights.iter().all(|h| h.chi_square.p_value > COUPLING_ALPHA)
    }

    /// CSV body `height,side,value,count` followed by a `#`-prefixed summary.
    pub fn write_csv<W: Write>(&self, header: &[String], out: W) -> std::io::Result<()> {
        let mut out = std::io::BufWriter::new(out);
        for line in header {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "height,side,value,count")?;
        for h in &self.heights {
            for (side, hist) in [("tree", &h.tree), ("graph", &h.graph)] {
                for (value, count) in hist.iter().enumerate().filter(|(_, c)| **c > 0) {
                    writeln!(out, "{},{side},{value},{count}", h.height)?;
                }
            }
        }
        writeln!(out, "# summary: samples={} depth={} truncated_trees={}", self.samples, self.depth, self.truncated_trees)?;
        writeln!(out, "# height,chi_square,dof,p_value,ks")?;
        for h in &self.heights {
            writeln!(
                out,
                "# {},{},{},{},{}",
                h.height, h.chi_square.statistic, h.chi_square.dof, h.chi_square.p_value, h.ks
            )?;
        }
        writeln!(out, "# verdict: {}", if self.passes() { "pass" } else { "fail" })?;
        out.flush()
    }
}

fn histogram(values: impl Iterator<Item = usize>) -> Vec<u64> {
    let mut h = Vec::new();
    for v in values {
        if h.len() <= v {
            h.resize(v + 1, 0);
        }
        h[v] += 1;
    }
    h
}

/// Draws `samples` trees and `samples` independent edge resamples and
/// compares the layer-size laws at heights `1..=depth`.
///
/// Sample `i` uses stream `2i` (tree) and `2i + 1` (graph) of `seed`.
pub fn coupling_compare(
    g: &Graph,
    v: u32,
    source: &VertexSet,
    depth: u32,
    samples: u64,
    seed: u64,
    exec: Execution,
) -> Result<CouplingReport, GwError> {
    check_root(g, v, source)?;
    let marks = MarkSampler::new(g, source)?;
    let rows = exec.map_indices(samples, |i| {
        let mut trng = stream_rng(seed, 2 * i);
        let tree = grow_tree(g, v, &marks, depth, &mut trng);
        let mut grng = stream_rng(seed, 2 * i + 1);
        let graph = resampled_layers(g, v, source, depth, &mut grng);
        (tree.distinct_layer_sizes(), graph, tree.truncated)
    });
    let truncated_trees = rows.iter().filter(|r| r.2).count() as u64;
    let heights = (1..=depth as usize)
        .map(|h| {
            let tree = histogram(rows.iter().map(|r| r.0[h]));
            let graph = histogram(rows.iter().map(|r| r.1[h]));
            let a: Vec<f64> = rows.iter().map(|r| r.0[h] as f64).collect();
            let b: Vec<f64> = rows.iter().map(|r| r.1[h] as f64).collect();
            HeightComparison {
                height: h as u32,
                chi_square: chi_square_homogeneity(&tree, &graph),
                ks: ks_two_sample(&a, &b),
                tree,
                graph,
            }
        })
        .collect();
    Ok(CouplingReport { samples, depth, heights, truncated_trees })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeResult {
    pub depth: u32,
    /// Child-count threshold `3K + 1`.
    pub threshold: u32,
    pub hits: u64,
    pub samples: u64,
}

impl ProbeResult {
    pub fn probability(&self) -> f64 {
        self.hits as f64 / self.samples as f64
    }
}

/// Whether some unthinned node at height `<= depth` has at least `threshold`
/// unthinned children.
fn has_heavy_node(t: &MarkedTree, depth: u32, threshold: u32) -> bool {
    (0..t.nodes.len()).any(|i| {
        let n = &t.nodes[i];
        n.height <= depth && !n.thinned && t.children(i).filter(|&c| !t.nodes[c].thinned).count() >= threshold as usize
    })
}

/// Monte Carlo estimate of the probability that the thinned tree has a node
/// within height `ψ₁(K)` with at least `3K + 1` children.
pub fn subtree_high_degree_probe(
    g: &Graph,
    v: u32,
    source: &VertexSet,
    k: u64,
    phi: &PhiSpec,
    samples: u64,
    seed: u64,
) -> Result<ProbeResult, GwError> {
    probe_at_depth(g, v, source, k, psi1(k, phi) as u32, samples, seed)
}

/// [`subtree_high_degree_probe`] with an explicit search depth. Trees are
/// built to `depth + 1` and share their prefix across depths for a given
/// seed, so the estimate is nondecreasing in `depth`.
pub fn probe_at_depth(
    g: &Graph,
    v: u32,
    source: &VertexSet,
    k: u64,
    depth: u32,
    samples: u64,
    seed: u64,
) -> Result<ProbeResult, GwError> {
    if k == 0 {
        return Err(GwError::InvalidArgument("K must be >= 1".into()));
    }
    check_root(g, v, source)?;
    let marks = MarkSampler::new(g, source)?;
    let threshold = u32::try_from(3 * k + 1).map_err(|_| GwError::InvalidArgument("K too large".into()))?;
    let hits = Execution::default()
        .map_indices(samples, |i| {
            let mut rng = stream_rng(seed, i);
            let t = grow_tree(g, v, &marks, depth + 1, &mut rng).thin();
            has_heavy_node(&t, depth, threshold)
        })
        .into_iter()
        .filter(|&b| b)
        .count() as u64;
    Ok(ProbeResult { depth, threshold, hits, samples })
}
