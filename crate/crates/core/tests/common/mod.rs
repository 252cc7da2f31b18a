//! Fixtures shared by the integration suites: the worked-example graphs,
//! the exhaustive small-graph corpus, and a seeded monomial sampler.

#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zgrade::graph::{enumerate_graphs, DirectedGraph, Path};
use zgrade::lpa::PathMonomial;

/// Two vertices joined by a single edge; v2 is a sink.
pub fn arrow() -> Arc<DirectedGraph> {
    Arc::new(DirectedGraph::build(&["v1", "v2"], &[("f1", "v1", "v2")]).expect("fixture graph"))
}

/// Five vertices with edges f1: v2→v1, f2: v2→v3, f3: v4→v3, f4: v5→v4;
/// sinks at v1 and v3, the only length-two path is f4·f3.
pub fn chain5() -> Arc<DirectedGraph> {
    Arc::new(
        DirectedGraph::build(
            &["v1", "v2", "v3", "v4", "v5"],
            &[
                ("f1", "v2", "v1"),
                ("f2", "v2", "v3"),
                ("f3", "v4", "v3"),
                ("f4", "v5", "v4"),
            ],
        )
        .expect("fixture graph"),
    )
}

/// One vertex carrying two loops g1 and g2.
pub fn rose2() -> Arc<DirectedGraph> {
    Arc::new(
        DirectedGraph::build(&["v"], &[("g1", "v", "v"), ("g2", "v", "v")])
            .expect("fixture graph"),
    )
}

/// One vertex with a single loop.
pub fn single_loop() -> Arc<DirectedGraph> {
    Arc::new(DirectedGraph::build(&["v"], &[("e", "v", "v")]).expect("fixture graph"))
}

/// Every directed multigraph with at most three vertices and three
/// edges, shared-ownership wrapped for the algebra constructors.
pub fn corpus() -> Vec<Arc<DirectedGraph>> {
    enumerate_graphs(3, 3).into_iter().map(Arc::new).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sampler over path-pair monomials αβ★ with matching ends,
/// including reducible ones — normalization behaviour is exactly what
/// the rewriting tests want to exercise.
pub struct MonomialSampler {
    all: Vec<Path>,
    by_end: Vec<Vec<Path>>,
}

impl MonomialSampler {
    pub fn new(g: &DirectedGraph, max_len: usize) -> Self {
        let all: Vec<Path> = g.enumerate_paths(max_len).into_iter().flatten().collect();
        let mut by_end = vec![Vec::new(); g.vertex_count()];
        for p in &all {
            by_end[p.end(g)].push(p.clone());
        }
        MonomialSampler { all, by_end }
    }

    pub fn sample(&self, g: &DirectedGraph, rng: &mut ChaCha8Rng) -> PathMonomial {
        let alpha = self.all[rng.gen_range(0..self.all.len())].clone();
        let mates = &self.by_end[alpha.end(g)];
        let beta = mates[rng.gen_range(0..mates.len())].clone();
        PathMonomial::new(g, alpha, beta).expect("sampled ends match")
    }
}
