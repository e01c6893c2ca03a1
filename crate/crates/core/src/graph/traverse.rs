use std::collections::VecDeque;

use super::{Graph, VertexSet};
use crate::exec::Execution;

/// Largest component size for which the diameter is computed exactly.
pub const EXACT_DIAMETER_MAX: usize = 50_000;

/// Sizes of the distance layers `0..=radius` around `v` inside
/// `restrict ∪ {v}`.
pub fn bfs_layers(g: &Graph, v: u32, restrict: &VertexSet, radius: usize) -> Vec<usize> {
    let mut layers = vec![0usize; radius + 1];
    let mut seen = VertexSet::empty(g.n());
    seen.insert(v);
    layers[0] = 1;
    let mut frontier = vec![v];
    for layer in layers.iter_mut().skip(1) {
        let mut next = Vec::new();
        for &x in &frontier {
            for &y in g.neighbors(x) {
                if restrict.contains(y) && seen.insert(y) {
                    next.push(y);
                }
            }
        }
        *layer = next.len();
        frontier = next;
    }
    layers
}

/// BFS distances from `source`; `u32::MAX` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, source: u32) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    dist[source as usize] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize] + 1;
        for &y in g.neighbors(x) {
            if dist[y as usize] == u32::MAX {
                dist[y as usize] = d;
                queue.push_back(y);
            }
        }
    }
    dist
}

fn eccentricity(g: &Graph, source: u32) -> (u32, u32) {
    let dist = bfs_distances(g, source);
    let (far, d) = dist
        .iter()
        .enumerate()
        .filter(|(_, d)| **d != u32::MAX)
        .max_by_key(|(i, d)| (**d, std::cmp::Reverse(*i)))
        .map(|(i, d)| (i as u32, *d))
        .unwrap_or((source, 0));
    (far, d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSummary {
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
    /// Diameter of the largest component (ties broken by lowest vertex).
    pub diameter: u32,
    /// `true` when `diameter` is a two-sweep lower bound, not exact.
    pub diameter_is_lower_bound: bool,
    /// Component label per vertex; labels follow first appearance.
    pub labels: Vec<u32>,
}

impl ComponentSummary {
    /// Vertices of the largest component.
    pub fn largest(&self) -> Vec<u32> {
        let label = self.largest_label();
        (0..self.labels.len() as u32).filter(|&v| self.labels[v as usize] == label).collect()
    }

    fn largest_label(&self) -> u32 {
        let mut counts = vec![0usize; self.sizes.len()];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        // max_by_key keeps the last maximum; reverse to prefer the first.
        counts.iter().enumerate().rev().max_by_key(|(_, c)| **c).map_or(0, |(i, _)| i as u32)
    }
}

pub fn components_and_diameter(g: &Graph) -> ComponentSummary {
    components_and_diameter_with(g, Execution::default())
}

/// Components by traversal; exact diameter of the largest component by BFS
/// from each of its vertices when it has at most [`EXACT_DIAMETER_MAX`]
/// vertices, a two-sweep lower bound otherwise.
pub fn components_and_diameter_with(g: &Graph, exec: Execution) -> ComponentSummary {
    let n = g.n();
    let mut labels = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    for s in 0..n as u32 {
        if labels[s as usize] != u32::MAX {
            continue;
        }
        let label = sizes.len() as u32;
        labels[s as usize] = label;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &y in g.neighbors(x) {
                if labels[y as usize] == u32::MAX {
                    labels[y as usize] = label;
                    stack.push(y);
                }
            }
        }
        sizes.push(size);
    }
    let mut summary =
        ComponentSummary { sizes: Vec::new(), diameter: 0, diameter_is_lower_bound: false, labels };
    if n == 0 {
        return summary;
    }
    let members = {
        summary.sizes = sizes.clone();
        summary.largest()
    };
    if members.len() <= EXACT_DIAMETER_MAX {
        let ecc = exec.map_indices(members.len() as u64, |i| eccentricity(g, members[i as usize]).1);
        summary.diameter = ecc.into_iter().max().unwrap_or(0);
    } else {
        let (far, _) = eccentricity(g, members[0]);
        summary.diameter = eccentricity(g, far).1;
        summary.diameter_is_lower_bound = true;
    }
    summary.sizes.sort_unstable_by(|a, b| b.cmp(a));
    summary
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeavyCore {
    /// Weight threshold `√(4 p ℓ_n / n)`.
    pub threshold: f64,
    pub vertices: Vec<u32>,
    /// `|A_p| / n`, the empirical estimate of `P(w >= threshold)`.
    pub fraction: f64,
}

/// Vertices whose weight is at least `√(4 p · ℓ_n/n)`.
pub fn extract_heavy_core(g: &Graph, p: f64) -> HeavyCore {
    let n = g.n().max(1) as f64;
    let threshold = (4.0 * p * g.ell_n() / n).sqrt();
    let vertices: Vec<u32> = (0..g.n() as u32).filter(|&v| g.weight(v) >= threshold).collect();
    let fraction = vertices.len() as f64 / n;
    HeavyCore { threshold, vertices, fraction }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::glue_star_path;

    fn path(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (1..n as u32).map(|i| (i - 1, i)).collect();
        Graph::unweighted(n, &edges)
    }

    #[test]
    fn layers_on_small_graphs() {
        let g = Graph::empty(3);
        assert_eq!(bfs_layers(&g, 0, &VertexSet::full(3), 3), vec![1, 0, 0, 0]);
        let star = glue_star_path(1, 6).unwrap();
        assert_eq!(bfs_layers(&star, 0, &VertexSet::full(6), 1), vec![1, 5]);
        let p = path(6);
        let rest = VertexSet::from_iter(6, 1..6);
        assert_eq!(bfs_layers(&p, 0, &rest, 3), vec![1, 1, 1, 1]);
        // v inside the restriction is ignored.
        assert_eq!(bfs_layers(&p, 0, &VertexSet::full(6), 3), vec![1, 1, 1, 1]);
        // Restriction cuts the path.
        let cut = VertexSet::from_iter(6, [1, 3, 4]);
        assert_eq!(bfs_layers(&p, 0, &cut, 3), vec![1, 1, 0, 0]);
    }

    #[test]
    fn components_of_empty_and_path() {
        let s = components_and_diameter(&Graph::empty(5));
        assert_eq!(s.sizes, vec![1; 5]);
        assert_eq!(s.diameter, 0);
        let s = components_and_diameter(&path(6));
        assert_eq!(s.sizes, vec![6]);
        assert_eq!(s.diameter, 5);
        assert!(!s.diameter_is_lower_bound);
        let two = Graph::unweighted(5, &[(0, 1), (2, 3), (3, 4)]);
        let s = components_and_diameter(&two);
        assert_eq!(s.sizes, vec![3, 2]);
        assert_eq!(s.diameter, 2);
        assert_eq!(s.largest(), vec![2, 3, 4]);
    }

    #[test]
    fn heavy_core_thresholds() {
        let g = Graph::from_edges(vec![3.0; 10], &[]).unwrap();
        // √(4·1·3) ≈ 3.46 > 3
        assert!(extract_heavy_core(&g, 1.0).vertices.is_empty());
        // √(4·0.75·3) = 3
        let core = extract_heavy_core(&g, 0.75);
        assert_eq!(core.vertices.len(), 10);
        assert_eq!(core.fraction, 1.0);
    }
}
