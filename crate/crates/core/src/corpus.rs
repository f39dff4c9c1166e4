//! Seeded random systems and graphs for property checks.

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{build_chain_graph, Digraph};
use crate::space::FiniteMetricSpace;
use crate::system::{from_map_tables, GeneratorSystem};

/// Jump tolerance used with [`random_system`]: links the pairs at distance 1.
pub const CORPUS_DELTA: f64 = 1.2;

/// `n` points with pairwise distances drawn from `{1, 1.5, 2}` (any such
/// matrix satisfies the triangle inequality) and `m` random maps.
pub fn random_system<R: Rng>(rng: &mut R, n: usize, m: usize) -> GeneratorSystem {
    let mut dist = vec![0.0; n * n];
    for x in 0..n {
        for y in (x + 1)..n {
            let d = [1.0, 1.5, 2.0][rng.random_range(0..3)];
            dist[x * n + y] = d;
            dist[y * n + x] = d;
        }
    }
    let space = FiniteMetricSpace::from_matrix(n, dist).expect("valid metric");
    let tables = (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(0..n as u32)).collect())
        .collect();
    from_map_tables(space, tables).expect("valid tables")
}

/// A random system whose δ-chain union graph at [`CORPUS_DELTA`] is strongly
/// connected, with `2 <= |X| <= max_points` and `1 <= m <= max_m`.
pub fn random_transitive_system(seed: u64, max_points: usize, max_m: usize) -> GeneratorSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.random_range(2..=max_points);
        let m = rng.random_range(1..=max_m);
        let g = random_system(&mut rng, n, m);
        let cg = build_chain_graph(&g, CORPUS_DELTA).expect("valid delta");
        if cg.union_graph().is_strongly_connected() {
            return g;
        }
    }
}

/// A random strongly connected digraph on `n` nodes: a random Hamiltonian
/// cycle plus extra random edges.
pub fn random_strongly_connected_digraph(seed: u64, n: usize, extra_edges: usize) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut succ = vec![Vec::new(); n];
    for i in 0..n {
        succ[order[i]].push(order[(i + 1) % n] as u32);
    }
    for _ in 0..extra_edges {
        let u = rng.random_range(0..n);
        succ[u].push(rng.random_range(0..n as u32));
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
    }
    Digraph::from_successors(succ)
}

/// A system on a uniform space whose chain graph at any `δ < 1` has union graph `d`:
/// generator `i` sends `x` to its `i`-th successor (the last one repeated).
/// Every node needs a successor.
pub fn system_realizing(d: &Digraph) -> GeneratorSystem {
    let n = d.node_count();
    let m = (0..n).map(|u| d.successors(u).len()).max().unwrap_or(1).max(1);
    let tables = (0..m)
        .map(|i| {
            (0..n)
                .map(|u| {
                    let s = d.successors(u);
                    assert!(!s.is_empty(), "node {u} has no successor");
                    s[i.min(s.len() - 1)]
                })
                .collect()
        })
        .collect();
    let space = FiniteMetricSpace::uniform(n, 1.0).expect("positive size");
    from_map_tables(space, tables).expect("valid tables")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible_and_transitive() {
        for seed in 0..10 {
            let a = random_transitive_system(seed, 12, 3);
            let b = random_transitive_system(seed, 12, 3);
            assert_eq!(a.tables(), b.tables());
            let cg = build_chain_graph(&a, CORPUS_DELTA).unwrap();
            assert!(cg.union_graph().is_strongly_connected());
        }
        for seed in 0..10 {
            assert!(random_strongly_connected_digraph(seed, 9, 5).is_strongly_connected());
        }
    }
}
