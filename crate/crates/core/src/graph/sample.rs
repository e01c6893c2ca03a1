use rand::Rng;

use super::{Graph, GraphError};
use crate::rng::{open_unit, rng_from_seed};
use crate::weights::WeightModel;

/// Largest `n` for which [`IrgMethod::Auto`] tests every pair directly.
pub const IRG_PAIRWISE_MAX_N: usize = 2048;

/// Edge-sampling route for rank-one graphs. Both produce the exact law.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum IrgMethod {
    #[default]
    Auto,
    /// One Bernoulli per pair, `O(n²)`.
    Pairwise,
    /// Vertices sorted by weight; geometric skips under a running
    /// upper-bound probability, thinned to the exact one. `O(n + m)`.
    SortedSkip,
}

/// Model of a random (or deterministic) graph.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphModelSpec {
    Irg { n: usize, weights: WeightModel },
    /// `ER(n, p/n)`.
    Er { n: usize, p: f64 },
    GluedStarPath { ell: usize, m: usize },
}

impl GraphModelSpec {
    pub fn validate(&self) -> Result<(), GraphError> {
        match self {
            GraphModelSpec::Irg { n, weights } => {
                if *n == 0 {
                    return Err(GraphError::InvalidArgument("n must be >= 1".into()));
                }
                weights.validate()?;
            }
            GraphModelSpec::Er { n, p } => {
                if *n == 0 {
                    return Err(GraphError::InvalidArgument("n must be >= 1".into()));
                }
                check_er(*n, *p)?;
            }
            GraphModelSpec::GluedStarPath { ell, m } => {
                if *ell == 0 || *m == 0 {
                    return Err(GraphError::InvalidArgument("ell and M must be >= 1".into()));
                }
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            GraphModelSpec::Irg { n, .. } | GraphModelSpec::Er { n, .. } => *n,
            GraphModelSpec::GluedStarPath { ell, m } => ell * m,
        }
    }

    /// Samples the graph; `seed` is ignored by the deterministic model.
    pub fn generate(&self, seed: u64) -> Result<Graph, GraphError> {
        self.validate()?;
        match self {
            GraphModelSpec::Irg { n, weights } => sample_irg(*n, weights, seed),
            GraphModelSpec::Er { n, p } => sample_er(*n, *p, seed),
            GraphModelSpec::GluedStarPath { ell, m } => glue_star_path(*ell, *m),
        }
    }
}

fn check_er(n: usize, p: f64) -> Result<f64, GraphError> {
    let q = p / n as f64;
    if !(p >= 0.0) || !(q <= 1.0) {
        return Err(GraphError::InvalidArgument(format!("edge probability p/n = {p}/{n} outside [0, 1]")));
    }
    Ok(q)
}

pub fn sample_weights<R: Rng + ?Sized>(n: usize, model: &WeightModel, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| model.sample(rng)).collect()
}

/// Rank-one graph: i.i.d. weights, then each pair independently with
/// probability `1 - exp(-w_i w_j / ℓ_n)`.
pub fn sample_irg(n: usize, model: &WeightModel, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidArgument("n must be >= 1".into()));
    }
    model.validate()?;
    let mut rng = rng_from_seed(seed);
    let weights = sample_weights(n, model, &mut rng);
    let edges = irg_edges(&weights, IrgMethod::Auto, &mut rng);
    Graph::from_edges(weights, &edges)
}

/// Edges of a rank-one graph with the given (quenched) weights.
pub fn irg_edges<R: Rng + ?Sized>(weights: &[f64], method: IrgMethod, rng: &mut R) -> Vec<(u32, u32)> {
    let n = weights.len();
    let ell: f64 = weights.iter().sum();
    let prob = |a: usize, b: usize| -(-weights[a] * weights[b] / ell).exp_m1();
    let method = match method {
        IrgMethod::Auto if n <= IRG_PAIRWISE_MAX_N => IrgMethod::Pairwise,
        IrgMethod::Auto => IrgMethod::SortedSkip,
        m => m,
    };
    let mut edges = Vec::new();
    match method {
        IrgMethod::Pairwise | IrgMethod::Auto => {
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < prob(i, j) {
                        edges.push((i as u32, j as u32));
                    }
                }
            }
        }
        IrgMethod::SortedSkip => {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
            for a in 0..n.saturating_sub(1) {
                let u = order[a];
                let mut b = a + 1;
                let mut p = prob(u, order[b]);
                while b < n && p > 0.0 {
                    if p < 1.0 {
                        let skip = (open_unit(rng).ln() / (-p).ln_1p()).floor();
                        b = b.saturating_add(skip as usize);
                    }
                    if b < n {
                        let v = order[b];
                        let q = prob(u, v);
                        if rng.random::<f64>() * p < q {
                            edges.push((u.min(v) as u32, u.max(v) as u32));
                        }
                        p = q;
                        b += 1;
                    }
                }
            }
        }
    }
    edges
}

/// `ER(n, p/n)` with unit weights, by geometric skipping over the pair
/// sequence.
pub fn sample_er(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    let q = check_er(n, p)?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    if q >= 1.0 {
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                edges.push((i, j));
            }
        }
    } else if q > 0.0 {
        let log_miss = (-q).ln_1p();
        let (mut v, mut w): (usize, i64) = (1, -1);
        while v < n {
            let skip = (open_unit(&mut rng).ln() / log_miss).floor();
            w = w.saturating_add(1).saturating_add(skip.min(i64::MAX as f64 / 4.0) as i64);
            while v < n && w >= v as i64 {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as u32, v as u32));
            }
        }
    }
    Graph::from_edges(vec![1.0; n], &edges)
}

/// Spine vertex index of star `i` in [`glue_star_path`].
pub fn glued_center(i: usize) -> u32 {
    i as u32
}

/// Leaf `j` (`0 <= j < m-1`) of star `i` in [`glue_star_path`] with `ell` stars.
pub fn glued_leaf(ell: usize, m: usize, i: usize, j: usize) -> u32 {
    (ell + i * (m - 1) + j) as u32
}

/// Path of `ell` spine vertices `0..ell`, each the centre of a star with
/// `m - 1` private leaves (star size `m` counts the centre). Unit weights.
pub fn glue_star_path(ell: usize, m: usize) -> Result<Graph, GraphError> {
    if ell == 0 || m == 0 {
        return Err(GraphError::InvalidArgument("ell and M must be >= 1".into()));
    }
    let mut edges: Vec<(u32, u32)> = (1..ell).map(|i| (i as u32 - 1, i as u32)).collect();
    for i in 0..ell {
        for j in 0..m - 1 {
            edges.push((glued_center(i), glued_leaf(ell, m, i, j)));
        }
    }
    Graph::from_edges(vec![1.0; ell * m], &edges)
}
