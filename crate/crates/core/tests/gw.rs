use irgcp::exec::Execution;
use irgcp::graph::{sample_irg, Graph, VertexSet};
use irgcp::gw::*;
use irgcp::rng::{rng_from_seed, stream_rng};
use irgcp::weights::{PhiSpec, WeightModel};

fn constant_graph(n: usize, c: f64) -> Graph {
    Graph::from_edges(vec![c; n], &[]).unwrap()
}

fn all_but(n: usize, v: u32) -> VertexSet {
    VertexSet::from_iter(n, (0..n as u32).filter(|&x| x != v))
}

/// Thinned iff the marks on the root path (node included) repeat.
fn brute_thinned(t: &MarkedTree, i: usize) -> bool {
    let mut marks = vec![t.nodes[i].mark];
    let mut p = t.nodes[i].parent;
    while let Some(j) = p {
        marks.push(t.nodes[j as usize].mark);
        p = t.nodes[j as usize].parent;
    }
    let len = marks.len();
    marks.sort_unstable();
    marks.dedup();
    marks.len() < len
}

#[test]
fn single_mark_source_and_zero_depth() {
    let g = constant_graph(5, 2.0);
    let u = VertexSet::from_iter(5, [3]);
    let t = sample_marked_tree(&g, 0, &u, 4, &mut rng_from_seed(1)).unwrap();
    assert_eq!(t.root().mark, 0);
    assert!(t.nodes[1..].iter().all(|n| n.mark == 3));
    let t = sample_marked_tree(&g, 0, &all_but(5, 0), 0, &mut rng_from_seed(1)).unwrap();
    assert_eq!(t.nodes.len(), 1);
    assert!(matches!(sample_marked_tree(&g, 0, &VertexSet::empty(5), 2, &mut rng_from_seed(0)), Err(GwError::EmptySource)));
    assert!(matches!(sample_marked_tree(&g, 0, &VertexSet::full(5), 2, &mut rng_from_seed(0)), Err(GwError::RootInSource(0))));
}

#[test]
fn root_offspring_mean() {
    let (n, c) = (10_000usize, 3.0);
    let g = constant_graph(n, c);
    let u = all_but(n, 0);
    let mean = c * (n as f64 - 1.0) / n as f64;
    let draws = 100_000u64;
    let total: u64 = (0..draws)
        .map(|i| sample_marked_tree(&g, 0, &u, 1, &mut stream_rng(7, i)).unwrap().root().child_count as u64)
        .sum();
    let sd = (mean / draws as f64).sqrt();
    assert!((total as f64 / draws as f64 - mean).abs() < 3.0 * sd);
}

#[test]
fn thinning_matches_root_path_scan() {
    let g = sample_irg(30, &WeightModel::power_law(2.5, 1.0).unwrap(), 3).unwrap();
    let u = all_but(30, 0);
    for s in 0..1000 {
        let t = sample_marked_tree(&g, 0, &u, 4, &mut rng_from_seed(s)).unwrap();
        let thin = t.thin();
        let mut per_height = [0usize; 5];
        let mut children_of = [0usize; 5];
        for (i, node) in thin.nodes.iter().enumerate() {
            assert_eq!(node.thinned, brute_thinned(&t, i), "seed {s}, node {i}");
            assert_eq!(node.mark, t.nodes[i].mark);
            per_height[node.height as usize] += 1;
            children_of[node.height as usize] += node.child_count as usize;
            if let Some(p) = node.parent {
                assert_eq!(node.height, thin.nodes[p as usize].height + 1);
            }
            if !t.truncated && node.height == 4 {
                assert_eq!(node.child_count, 0);
            }
        }
        for h in 1..5 {
            assert_eq!(per_height[h], children_of[h - 1]);
        }
        assert!(!t.nodes.iter().any(|n| n.thinned), "sampling leaves flags unset");
        assert!(thin.unthinned_layer_sizes()[1] <= t.root().child_count as usize);
    }
}

#[test]
fn two_vertex_coupling_is_bernoulli() {
    let g = Graph::from_edges(vec![1.0, 2.0], &[]).unwrap();
    let u = VertexSet::from_iter(2, [1]);
    let samples = 20_000;
    let r = coupling_compare(&g, 0, &u, 1, samples, 5, Execution::default()).unwrap();
    let p = -(-2.0f64 / 3.0).exp_m1();
    let sd = (p * (1.0 - p) / samples as f64).sqrt();
    let h = &r.heights[0];
    for hist in [&h.tree, &h.graph] {
        assert!(hist.len() <= 2);
        assert!((hist[1] as f64 / samples as f64 - p).abs() < 4.0 * sd);
    }
    assert!(r.passes());
}

#[test]
fn full_complement_coupling() {
    let g = constant_graph(500, 3.0);
    let r = coupling_compare(&g, 0, &all_but(500, 0), 2, 10_000, 17, Execution::default()).unwrap();
    assert!(r.passes(), "{:?}", r.heights.iter().map(|h| h.chi_square.p_value).collect::<Vec<_>>());
    assert_eq!(r.truncated_trees, 0);
    let mut buf = Vec::new();
    r.write_csv(&["x".into()], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.contains("height,side,value,count\n1,tree,"));
    assert!(text.contains("# verdict: pass"));
}

#[test]
fn coupling_is_deterministic_across_execution_modes() {
    let g = constant_graph(200, 2.0);
    let u = all_but(200, 0);
    let a = coupling_compare(&g, 0, &u, 2, 500, 1, Execution::Sequential).unwrap();
    let b = coupling_compare(&g, 0, &u, 2, 500, 1, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn probe_examples() {
    let n = 1000;
    let heavy = sample_irg(n, &WeightModel::power_law(2.2, 1.0).unwrap(), 2).unwrap();
    let r = subtree_high_degree_probe(&heavy, 0, &all_but(n, 0), 1, &PhiSpec::identity(), 2000, 3).unwrap();
    assert_eq!(r.threshold, 4);
    assert!(r.probability() > 0.0);

    // Bounded weights, depth 0: the Poisson tail of the root offspring.
    let c = 2.0;
    let g = constant_graph(n, c);
    let mean = c * (n as f64 - 1.0) / n as f64;
    let mut pmf = (-mean).exp();
    let mut below = 0.0;
    for k in 0..4 {
        below += pmf;
        pmf *= mean / (k + 1) as f64;
    }
    let tail = 1.0 - below;
    let samples = 40_000;
    let r = probe_at_depth(&g, 0, &all_but(n, 0), 1, 0, samples, 9).unwrap();
    let sd = (tail * (1.0 - tail) / samples as f64).sqrt();
    assert!((r.probability() - tail).abs() < 4.0 * sd, "{} vs {tail}", r.probability());

    let probs: Vec<f64> =
        (0..4).map(|d| probe_at_depth(&g, 0, &all_but(n, 0), 1, d, 3000, 4).unwrap().probability()).collect();
    assert!(probs.windows(2).all(|w| w[0] <= w[1]), "{probs:?}");
}
