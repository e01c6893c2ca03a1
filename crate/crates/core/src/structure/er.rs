use crate::graph::{Graph, VertexSet};

use super::certificate::{validate_certificate, SpacingMode, Star, StarCertificate};
use super::StructureError;

/// Default number of search-node expansions for [`long_path`].
pub const DEFAULT_PATH_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyStars {
    /// Successful candidates, ascending.
    pub gamma: Vec<u32>,
    /// `leaves[i]`: the `M` leaves claimed by `gamma[i]`, ascending.
    pub leaves: Vec<Vec<u32>>,
    /// `|A|`; `A` is the vertex prefix `0 .. |A|`.
    pub a_size: usize,
    /// Candidates scanned: `0 .. ⌊n / 4M⌋`.
    pub candidates: usize,
}

/// Greedy stars: for each candidate `i < ⌊n/4M⌋` in order, claim its `M`
/// lowest neighbours in `A^c` not claimed before, or skip it when fewer than
/// `M` remain. `A` is the first `⌊n/2⌋ − 1` vertices.
pub fn er_greedy_stars(g: &Graph, m: usize) -> Result<GreedyStars, StructureError> {
    if m == 0 {
        return Err(StructureError::InvalidConfig("M must be >= 1".into()));
    }
    let n = g.n();
    let a_size = (n / 2).saturating_sub(1);
    let candidates = n / (4 * m);
    let mut used = VertexSet::empty(n);
    let mut out = GreedyStars { gamma: Vec::new(), leaves: Vec::new(), a_size, candidates };
    let mut pick = Vec::with_capacity(m);
    for i in 0..candidates as u32 {
        pick.clear();
        for &y in g.neighbors(i) {
            if y as usize >= a_size && !used.contains(y) {
                pick.push(y);
                if pick.len() == m {
                    break;
                }
            }
        }
        if pick.len() == m {
            for &y in &pick {
                used.insert(y);
            }
            out.gamma.push(i);
            out.leaves.push(pick.clone());
        }
    }
    Ok(out)
}

struct Frame {
    vertex: u32,
    options: Vec<u32>,
    next: usize,
}

/// Longest simple path found by depth-first search with backtracking inside
/// the subgraph induced by `within`, spending at most `budget` expansions.
///
/// The search starts from a minimum-degree vertex of the largest induced
/// component and tries neighbours with the fewest free neighbours first.
pub fn long_path(g: &Graph, within: &VertexSet, budget: u64) -> Vec<u32> {
    let members = within.to_vec();
    if members.is_empty() {
        return Vec::new();
    }
    let induced = |x: u32| g.neighbors(x).iter().copied().filter(|&y| within.contains(y));
    let n = g.n();
    // Largest induced component.
    let mut comp = vec![u32::MAX; n];
    let mut best_comp = (0usize, 0u32);
    for &s in &members {
        if comp[s as usize] != u32::MAX {
            continue;
        }
        comp[s as usize] = s;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for y in induced(x) {
                if comp[y as usize] == u32::MAX {
                    comp[y as usize] = s;
                    stack.push(y);
                }
            }
        }
        if size > best_comp.0 {
            best_comp = (size, s);
        }
    }
    let (comp_size, label) = best_comp;
    let start = members
        .iter()
        .copied()
        .filter(|&v| comp[v as usize] == label)
        .min_by_key(|&v| (induced(v).count(), v))
        .unwrap();

    let mut on_path = vec![false; n];
    let free_degree = |y: u32, on_path: &[bool]| induced(y).filter(|&z| !on_path[z as usize]).count();
    let options = |x: u32, on_path: &[bool]| {
        let mut o: Vec<u32> = induced(x).filter(|&y| !on_path[y as usize]).collect();
        o.sort_by_key(|&y| (free_degree(y, on_path), y));
        o
    };
    on_path[start as usize] = true;
    let mut stack = vec![Frame { vertex: start, options: options(start, &on_path), next: 0 }];
    let mut best: Vec<u32> = vec![start];
    let mut spent = 1u64;
    while !stack.is_empty() && stack.len() < comp_size && spent < budget {
        let top = stack.last_mut().unwrap();
        if top.next < top.options.len() {
            let y = top.options[top.next];
            top.next += 1;
            if on_path[y as usize] {
                continue;
            }
            on_path[y as usize] = true;
            spent += 1;
            let opts = options(y, &on_path);
            stack.push(Frame { vertex: y, options: opts, next: 0 });
        } else {
            let v = top.vertex;
            if stack.len() > best.len() {
                best = stack.iter().map(|f| f.vertex).collect();
            }
            on_path[v as usize] = false;
            stack.pop();
        }
    }
    if stack.len() > best.len() {
        best = stack.iter().map(|f| f.vertex).collect();
    }
    best
}

/// Whether `path` is a simple path of `g`.
pub fn is_simple_path(g: &Graph, path: &[u32]) -> bool {
    let mut seen = VertexSet::empty(g.n());
    path.iter().all(|&v| (v as usize) < g.n() && seen.insert(v)) && path.windows(2).all(|p| g.has_edge(p[0], p[1]))
}

/// Outcome of [`certify_er`] with the intermediate sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ErCertification {
    pub certificate: StarCertificate,
    pub greedy: GreedyStars,
}

/// Greedy stars, a long path through their centres, and a chain certificate
/// with spacing 1 whose stars are the path vertices with their leaves.
pub fn certify_er(g: &Graph, m: usize, budget: u64) -> Result<ErCertification, StructureError> {
    let greedy = er_greedy_stars(g, m)?;
    if greedy.gamma.is_empty() {
        return Err(StructureError::TaskFailed("no greedy star centre found".into()));
    }
    let within = VertexSet::from_iter(g.n(), greedy.gamma.iter().copied());
    let path = long_path(g, &within, budget);
    if !is_simple_path(g, &path) {
        return Err(StructureError::TaskFailed("path search returned an invalid path".into()));
    }
    let stars = path
        .iter()
        .map(|&c| {
            let i = greedy.gamma.binary_search(&c).expect("path stays inside gamma");
            Star { center: c, leaves: greedy.leaves[i].clone() }
        })
        .collect();
    let certificate = StarCertificate { m, mode: SpacingMode::Chain, spacing_bound: 1, stars };
    let verdict = validate_certificate(g, &certificate);
    if !verdict.is_valid() {
        return Err(StructureError::InvalidCertificate(verdict.violations));
    }
    Ok(ErCertification { certificate, greedy })
}
