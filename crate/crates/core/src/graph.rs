//! The δ-chain relation as per-generator boolean adjacency.
//!
//! `(x, y) ∈ A_i` iff `d(f_i(x), y) <= δ` (non-strict). Row `x` of `A_i` is
//! the closed δ-ball around `f_i(x)`, so the graph stores one bitset ball per
//! point and shares it between generators. Path counting runs over big
//! integers; reachability only over bits.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::space::PointId;
use crate::system::{Chain, GeneratorSystem, Word};

/// Successor lists of a directed graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    succ: Vec<Vec<u32>>,
}

impl Digraph {
    pub fn from_successors(succ: Vec<Vec<u32>>) -> Self {
        Digraph { succ }
    }

    pub fn node_count(&self) -> usize {
        self.succ.len()
    }

    pub fn successors(&self, u: usize) -> &[u32] {
        &self.succ[u]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v as usize)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&(v as u32)).is_ok()
    }

    fn reversed(&self) -> Digraph {
        let mut pred = vec![Vec::new(); self.node_count()];
        for (u, v) in self.edges() {
            pred[v].push(u as u32);
        }
        Digraph { succ: pred }
    }

    /// BFS distances from `root` (`None` = unreachable).
    pub fn bfs_levels(&self, root: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        level[root] = Some(0);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let next = level[u].expect("visited") + 1;
            for &v in &self.succ[u] {
                if level[v as usize].is_none() {
                    level[v as usize] = Some(next);
                    queue.push_back(v as usize);
                }
            }
        }
        level
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return false;
        }
        self.bfs_levels(0).iter().all(Option::is_some)
            && self.reversed().bfs_levels(0).iter().all(Option::is_some)
    }

    /// Strongly connected components (Kosaraju, iterative), each sorted ascending.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![(s, 0usize)];
            while let Some((u, i)) = stack.last_mut() {
                if let Some(&v) = self.succ[*u].get(*i) {
                    *i += 1;
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        stack.push((v as usize, 0));
                    }
                } else {
                    order.push(*u);
                    stack.pop();
                }
            }
        }
        let rev = self.reversed();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for &s in order.iter().rev() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &rev.succ[u] {
                    if comp[v as usize] == usize::MAX {
                        comp[v as usize] = id;
                        members.push(v as usize);
                        stack.push(v as usize);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The digraph period: gcd of `level(u) + 1 - level(v)` over all edges for
    /// BFS levels from `root`. Only meaningful on strongly connected graphs;
    /// returns `None` if some node is unreachable from `root`.
    pub fn period_from(&self, root: usize) -> Option<usize> {
        let level = self.bfs_levels(root);
        let mut g: usize = 0;
        for (u, v) in self.edges() {
            let (lu, lv) = (level[u]? as i64, level[v]? as i64);
            g = num_integer::gcd(g, (lu + 1 - lv).unsigned_abs() as usize);
        }
        Some(g)
    }

    /// Length of the shortest directed cycle through `x`, `None` if there is none.
    pub fn shortest_cycle_through(&self, x: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        for &v in &self.succ[x] {
            if v as usize == x {
                return Some(1);
            }
            if dist[v as usize] == usize::MAX {
                dist[v as usize] = 1;
                queue.push_back(v as usize);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.succ[u] {
                if v as usize == x {
                    return Some(dist[u] + 1);
                }
                if dist[v as usize] == usize::MAX {
                    dist[v as usize] = dist[u] + 1;
                    queue.push_back(v as usize);
                }
            }
        }
        None
    }

    /// Induced subgraph on `nodes` (listed in the order that defines the new indices).
    pub fn induced(&self, nodes: &[usize]) -> Digraph {
        let mut local = vec![u32::MAX; self.node_count()];
        for (i, &u) in nodes.iter().enumerate() {
            local[u] = i as u32;
        }
        let succ = nodes
            .iter()
            .map(|&u| {
                let mut vs: Vec<u32> = self.succ[u]
                    .iter()
                    .filter_map(|&v| (local[v as usize] != u32::MAX).then_some(local[v as usize]))
                    .collect();
                vs.sort_unstable();
                vs
            })
            .collect();
        Digraph { succ }
    }

    /// Out-neighbourhood of a node set.
    pub fn step(&self, from: &FixedBitSet) -> FixedBitSet {
        let mut next = FixedBitSet::with_capacity(self.node_count());
        for u in from.ones() {
            for &v in &self.succ[u] {
                next.insert(v as usize);
            }
        }
        next
    }

    /// Boolean `k`-th power: `u → v` iff some walk of exactly `k` edges joins them.
    pub fn power(&self, k: usize) -> Digraph {
        let n = self.node_count();
        let succ = (0..n)
            .map(|u| {
                let mut layer = FixedBitSet::with_capacity(n);
                layer.insert(u);
                for _ in 0..k {
                    layer = self.step(&layer);
                }
                layer.ones().map(|v| v as u32).collect()
            })
            .collect();
        Digraph { succ }
    }
}

/// The δ-chain relation of a generator system.
#[derive(Debug, Clone)]
pub struct ChainGraph {
    system: GeneratorSystem,
    delta: f64,
    /// Closed δ-ball around each point, as index lists and as bitsets.
    balls: Vec<Vec<u32>>,
    ball_bits: Vec<FixedBitSet>,
    union: Digraph,
    warning: Option<String>,
}

impl ChainGraph {
    pub fn system(&self) -> &GeneratorSystem {
        &self.system
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn point_count(&self) -> usize {
        self.balls.len()
    }

    pub fn m(&self) -> usize {
        self.system.m()
    }

    /// Set when δ is below the quantization error of the system.
    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    /// Tolerance at which grid chains shadow continuum chains: δ plus the quantization error.
    pub fn effective_tolerance(&self) -> f64 {
        self.delta + self.system.quantization_error()
    }

    /// Row `x` of `A_i`, sorted.
    pub fn row(&self, i: usize, x: usize) -> &[u32] {
        &self.balls[self.system.table(i)[x] as usize]
    }

    pub fn has_edge(&self, i: usize, x: usize, y: usize) -> bool {
        self.ball_bits[self.system.table(i)[x] as usize].contains(y)
    }

    /// Closed δ-ball around a point.
    pub fn ball(&self, x: usize) -> &[u32] {
        &self.balls[x]
    }

    /// `U = ∪_i A_i`.
    pub fn union_graph(&self) -> &Digraph {
        &self.union
    }
}

/// Builds every `A_i` and their union.
pub fn build_chain_graph(g: &GeneratorSystem, delta: f64) -> Result<ChainGraph> {
    if !(delta.is_finite() && delta >= 0.0) {
        return invalid("delta must be a nonnegative real");
    }
    let space = g.space();
    let n = space.point_count();
    let mut balls = Vec::with_capacity(n);
    let mut ball_bits = Vec::with_capacity(n);
    for x in 0..n {
        let row: Vec<u32> = (0..n)
            .filter(|&y| space.dist_idx(x, y) <= delta)
            .map(|y| y as u32)
            .collect();
        let mut bits = FixedBitSet::with_capacity(n);
        bits.extend(row.iter().map(|&y| y as usize));
        balls.push(row);
        ball_bits.push(bits);
    }
    let union = (0..n)
        .map(|x| {
            let mut acc = FixedBitSet::with_capacity(n);
            for t in g.tables() {
                acc.union_with(&ball_bits[t[x] as usize]);
            }
            acc.ones().map(|y| y as u32).collect()
        })
        .collect();
    let warning = (delta < g.quantization_error()).then(|| {
        format!(
            "delta {delta} is below the quantization error {}; grid chains are only \
             representative at tolerance {}",
            g.quantization_error(),
            delta + g.quantization_error()
        )
    });
    Ok(ChainGraph {
        system: g.clone(),
        delta,
        balls,
        ball_bits,
        union: Digraph { succ: union },
        warning,
    })
}

/// Whether every step `(x_j, x_{j+1})` lies in `A_{w[j]}`.
pub fn is_chain(cg: &ChainGraph, c: &Chain) -> Result<bool> {
    let m = cg.m();
    if let Some(bad) = c.word().letters().iter().find(|&&l| l as usize >= m) {
        return invalid(format!("letter {bad} outside alphabet of size {m}"));
    }
    if let Some(bad) = c.points().iter().find(|p| p.index() >= cg.point_count()) {
        return invalid(format!("point {bad} outside the space"));
    }
    Ok(c
        .word()
        .letters()
        .iter()
        .zip(c.points().windows(2))
        .all(|(&l, pair)| cg.has_edge(l as usize, pair[0].index(), pair[1].index())))
}

/// Vector of `(w,δ)`-chain counts by starting point: entry `x` is the number
/// of chains for `w` starting at `x`.
pub fn chains_from_each_point(cg: &ChainGraph, w: &Word) -> Vec<BigUint> {
    let n = cg.point_count();
    let mut v = vec![BigUint::one(); n];
    for &l in w.letters().iter().rev() {
        v = (0..n)
            .map(|x| {
                cg.row(l as usize, x)
                    .iter()
                    .fold(BigUint::zero(), |acc, &y| acc + &v[y as usize])
            })
            .collect();
    }
    v
}

/// `|E(w, δ)|`: all labeled paths `1ᵀ A_{w[0]} A_{w[1]} ... A_{w[n-1]} 1`.
pub fn count_chains_for_word(cg: &ChainGraph, w: &Word) -> BigUint {
    chains_from_each_point(cg, w).into_iter().sum()
}

/// `Σ_{|w| = n} |E(w, δ)| = 1ᵀ (Σ_i A_i)^n 1`.
pub fn total_chain_count(cg: &ChainGraph, n: usize) -> BigUint {
    let mut v = vec![BigUint::one(); cg.point_count()];
    for _ in 0..n {
        v = sum_matrix_step(cg, &v);
    }
    v.into_iter().sum()
}

/// One multiplication by `Σ_i A_i` (with multiplicity).
pub(crate) fn sum_matrix_step(cg: &ChainGraph, v: &[BigUint]) -> Vec<BigUint> {
    (0..cg.point_count())
        .map(|x| {
            let mut acc = BigUint::zero();
            for i in 0..cg.m() {
                for &y in cg.row(i, x) {
                    acc += &v[y as usize];
                }
            }
            acc
        })
        .collect()
}

/// Exact-length reachability in the union graph: layer 0 is `start`, layer
/// `t + 1` the out-neighbours of layer `t`.
pub fn reach_layers(cg: &ChainGraph, start: &[PointId], n_max: usize) -> Result<Vec<Vec<PointId>>> {
    if start.is_empty() {
        return invalid("reach_layers needs a nonempty start set");
    }
    let n = cg.point_count();
    let mut layer = FixedBitSet::with_capacity(n);
    for p in start {
        if p.index() >= n {
            return invalid(format!("start point {p} outside the space"));
        }
        layer.insert(p.index());
    }
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(layer.ones().map(PointId::from).collect());
    for _ in 0..n_max {
        layer = cg.union_graph().step(&layer);
        out.push(layer.ones().map(PointId::from).collect());
    }
    Ok(out)
}

/// Summary of a chain graph for reports.
#[derive(Debug, Clone, Serialize)]
pub struct ChainGraphSummary {
    pub delta: f64,
    pub quantization_error: f64,
    pub effective_tolerance: f64,
    pub point_count: usize,
    pub generators: usize,
    pub union_edges: usize,
    pub warning: Option<String>,
}

impl ChainGraph {
    pub fn summary(&self) -> ChainGraphSummary {
        ChainGraphSummary {
            delta: self.delta,
            quantization_error: self.system.quantization_error(),
            effective_tolerance: self.effective_tolerance(),
            point_count: self.point_count(),
            generators: self.m(),
            union_edges: self.union.edges().count(),
            warning: self.warning.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::build_circle_grid;
    use crate::system::{from_map_specs, from_map_tables, MapSpec};

    fn p(i: usize) -> PointId {
        PointId::from(i)
    }

    fn doubling(n: usize) -> GeneratorSystem {
        from_map_specs(build_circle_grid(n, 1.0).unwrap(), &[MapSpec::Affine { a: 2.0, b: 0.0 }]).unwrap()
    }

    #[test]
    fn graph_extremes() {
        let c = build_circle_grid(6, 1.0).unwrap();
        let id = from_map_specs(c.clone(), &[MapSpec::Identity]).unwrap();
        let cg = build_chain_graph(&id, 0.1).unwrap();
        for x in 0..6 {
            assert_eq!(cg.row(0, x), &[x as u32]);
        }
        let cg = build_chain_graph(&id, c.diameter()).unwrap();
        for x in 0..6 {
            assert_eq!(cg.row(0, x).len(), 6);
        }
        let d = build_chain_graph(&doubling(8), 0.0).unwrap();
        for x in 0..8 {
            assert_eq!(d.row(0, x), &[((2 * x) % 8) as u32]);
        }
    }

    #[test]
    fn chain_validity() {
        let g = doubling(8);
        let cg = build_chain_graph(&g, 0.0).unwrap();
        let w = Word::parse("00", 1).unwrap();
        let orbit = Chain::new(w.clone(), vec![p(1), p(2), p(4)]).unwrap();
        assert!(is_chain(&cg, &orbit).unwrap());
        let off = Chain::new(Word::parse("0", 1).unwrap(), vec![p(0), p(1)]).unwrap();
        assert!(!is_chain(&cg, &off).unwrap());
        let full = build_chain_graph(&g, 1.0).unwrap();
        assert!(is_chain(&full, &off).unwrap());
        assert!(Chain::new(w, vec![p(0)]).is_err());
    }

    #[test]
    fn counting_examples() {
        let c = build_circle_grid(5, 1.0).unwrap();
        let id = from_map_specs(c.clone(), &[MapSpec::Identity, MapSpec::Identity]).unwrap();
        let cg = build_chain_graph(&id, 0.0).unwrap();
        let w = Word::parse("0101", 2).unwrap();
        assert_eq!(count_chains_for_word(&cg, &w), BigUint::from(5u32));
        assert_eq!(total_chain_count(&cg, 3), BigUint::from(40u32));
        let full = build_chain_graph(&id, 1.0).unwrap();
        assert_eq!(count_chains_for_word(&full, &w), BigUint::from(5u32).pow(5));
    }

    #[test]
    fn layers_on_identity_and_complete() {
        let c = build_circle_grid(6, 1.0).unwrap();
        let id = from_map_tables(c.clone(), vec![(0..6).collect()]).unwrap();
        let cg = build_chain_graph(&id, 0.0).unwrap();
        let layers = reach_layers(&cg, &[p(2), p(4)], 5).unwrap();
        assert!(layers.iter().all(|l| l == &vec![p(2), p(4)]));
        let full = build_chain_graph(&id, 1.0).unwrap();
        let layers = reach_layers(&full, &[p(0)], 3).unwrap();
        assert!(layers[1..].iter().all(|l| l.len() == 6));
        assert!(reach_layers(&cg, &[], 3).is_err());
    }

    #[test]
    fn digraph_period_and_cycles() {
        let two = Digraph::from_successors(vec![vec![1], vec![0]]);
        assert_eq!(two.period_from(0), Some(2));
        assert_eq!(two.shortest_cycle_through(1), Some(2));
        let looped = Digraph::from_successors(vec![vec![0, 1], vec![0]]);
        assert_eq!(looped.period_from(1), Some(1));
        let chain = Digraph::from_successors(vec![vec![1], vec![]]);
        assert!(!chain.is_strongly_connected());
        assert_eq!(chain.shortest_cycle_through(0), None);
    }
}
