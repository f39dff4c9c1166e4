//! Cyclic structure of chain transitive systems.
//!
//! On a strongly connected union graph the period `k` (gcd of cycle lengths)
//! splits the points into `k` classes by BFS level mod `k`; every edge
//! advances the class by one, and `G^k` maps each class into itself. Down a
//! tolerance ladder the periods form a divisibility chain that either
//! stabilizes or keeps growing, the latter being the adding-machine signature.
//! Also here: the truncated odometer and the numerical-semigroup lemmas behind
//! "all large multiples of the period are cycle lengths".

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::budget::{checked_pow, Budget};
use crate::error::{invalid, Error, Result};
use crate::graph::{build_chain_graph, ChainGraph, Digraph};
use crate::recurrence::{is_chain_recurrent, is_chain_transitive};
use crate::space::{build_odometer_space, ScaleLadder};
use crate::system::{from_map_specs, power_system, GeneratorSystem, MapSpec};

/// Period `k_ε` of the union graph.
pub fn period_k(cg: &ChainGraph) -> Result<usize> {
    if !is_chain_transitive(cg) {
        return Err(Error::NotTransitive { delta: cg.delta() });
    }
    Ok(cg.union_graph().period_from(0).expect("strongly connected"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionCase {
    /// `k = 1`.
    Mixing,
    /// `k > 1` with a verified cyclic permutation of classes.
    Periodic,
    /// The class structure failed verification; fields are reported as computed.
    DiagnosticOnly,
}

/// How the per-class mixing of `G^k` was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassMixingMethod {
    /// Chain graph of the power system `G^k` at the same tolerance.
    PowerSystem,
    /// `G^k` exceeded the generator budget; the boolean power `U^k` of the
    /// union graph was used instead (an upper bound on the `G^k` relation).
    BooleanPower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub epsilon: f64,
    pub k: usize,
    pub class_of: Vec<usize>,
    pub class_sizes: Vec<usize>,
    /// Every union edge goes from class `i` to class `i + 1 mod k`.
    pub permutation_ok: bool,
    /// `x` reaches `y` by a chain of positive length divisible by `k` iff they share a class.
    pub equivalence_ok: bool,
    pub per_class_mixing: Vec<bool>,
    pub per_class_method: ClassMixingMethod,
    pub case: DecompositionCase,
}

fn is_primitive(d: &Digraph) -> bool {
    d.node_count() > 0 && d.is_strongly_connected() && d.period_from(0) == Some(1)
}

/// Nodes reachable from `root` by walks of positive length.
fn reachable_positive(d: &Digraph, root: usize) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(d.node_count());
    let mut queue: VecDeque<usize> = d.successors(root).iter().map(|&v| v as usize).collect();
    for &v in &queue {
        seen.insert(v);
    }
    while let Some(u) = queue.pop_front() {
        for &v in d.successors(u) {
            if !seen.put(v as usize) {
                queue.push_back(v as usize);
            }
        }
    }
    seen
}

/// The `~_ε` classes and the Case 1 / Case 2 verdict at the graph's tolerance.
pub fn epsilon_classes(cg: &ChainGraph, budget: &Budget) -> Result<DecompositionReport> {
    let k = period_k(cg)?;
    let u = cg.union_graph();
    let n = cg.point_count();
    let levels = u.bfs_levels(0);
    let class_of: Vec<usize> = levels.iter().map(|l| l.expect("strongly connected") % k).collect();
    let mut class_sizes = vec![0; k];
    for &c in &class_of {
        class_sizes[c] += 1;
    }
    let permutation_ok = u.edges().all(|(a, b)| class_of[b] == (class_of[a] + 1) % k);

    let uk = u.power(k);
    let equivalence_ok = (0..n).all(|x| {
        let reach = reachable_positive(&uk, x);
        (0..n).all(|y| reach.contains(y) == (class_of[y] == class_of[x]))
    });

    let members: Vec<Vec<usize>> = (0..k)
        .map(|c| (0..n).filter(|&x| class_of[x] == c).collect())
        .collect();
    let g = cg.system();
    let (power_graph, per_class_method) = if checked_pow(g.m(), k) <= budget.generators as u128 {
        let gk = power_system(g, k, budget)?;
        let cgk = build_chain_graph(&gk, cg.delta())?;
        (cgk.union_graph().clone(), ClassMixingMethod::PowerSystem)
    } else {
        (uk, ClassMixingMethod::BooleanPower)
    };
    let per_class_mixing = members
        .iter()
        .map(|nodes| is_primitive(&power_graph.induced(nodes)))
        .collect();

    let case = if !(permutation_ok && equivalence_ok) {
        DecompositionCase::DiagnosticOnly
    } else if k == 1 {
        DecompositionCase::Mixing
    } else {
        DecompositionCase::Periodic
    };
    Ok(DecompositionReport {
        epsilon: cg.delta(),
        k,
        class_of,
        class_sizes,
        permutation_ok,
        equivalence_ok,
        per_class_mixing,
        per_class_method,
        case,
    })
}

/// How the chain tolerance δ follows the ladder ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum DeltaRule {
    /// δ = ε.
    #[default]
    Equal,
    /// δ = factor · ε.
    Scaled { factor: f64 },
    /// δ fixed.
    Fixed { delta: f64 },
}

impl DeltaRule {
    pub fn delta_for(&self, epsilon: f64) -> f64 {
        match *self {
            DeltaRule::Equal => epsilon,
            DeltaRule::Scaled { factor } => factor * epsilon,
            DeltaRule::Fixed { delta } => delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthFlag {
    Stabilized,
    Growing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderEntry {
    pub epsilon: f64,
    pub delta: f64,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderDiagnostic {
    pub entries: Vec<LadderEntry>,
    /// Each period divides the next one down the ladder.
    pub divisibility_ok: bool,
    /// `growing` when the last two periods differ.
    pub growth_flag: GrowthFlag,
    /// Set when transitivity fails partway; entries stop there.
    pub truncated: Option<String>,
}

/// `k_ε` down the ladder.
pub fn k_ladder(g: &GeneratorSystem, eps_ladder: &ScaleLadder, rule: DeltaRule) -> Result<LadderDiagnostic> {
    let mut entries = Vec::with_capacity(eps_ladder.len());
    let mut truncated = None;
    for &epsilon in eps_ladder.values() {
        let delta = rule.delta_for(epsilon);
        let cg = build_chain_graph(g, delta)?;
        match period_k(&cg) {
            Ok(k) => entries.push(LadderEntry { epsilon, delta, k }),
            Err(Error::NotTransitive { .. }) => {
                truncated = Some(format!("not chain transitive at epsilon {epsilon} (delta {delta})"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let divisibility_ok = entries.windows(2).all(|w| w[1].k % w[0].k == 0);
    let growth_flag = match entries.as_slice() {
        [.., a, b] if a.k != b.k => GrowthFlag::Growing,
        _ => GrowthFlag::Stabilized,
    };
    Ok(LadderDiagnostic {
        entries,
        divisibility_ok,
        growth_flag,
        truncated,
    })
}

/// Truncated odometer digit sizes `J = (j_0, ..., j_{L-1})`, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdometerSpec {
    pub digits: Vec<usize>,
}

impl OdometerSpec {
    pub fn new(digits: Vec<usize>) -> Result<Self> {
        if digits.is_empty() {
            return invalid("odometer needs at least one digit");
        }
        if let Some(j) = digits.iter().find(|&&j| j < 2) {
            return invalid(format!("odometer digit sizes must be >= 2, got {j}"));
        }
        Ok(OdometerSpec { digits })
    }

    /// `J = (2, ..., 2)` of length `depth`.
    pub fn dyadic(depth: usize) -> Result<Self> {
        Self::new(vec![2; depth])
    }
}

/// Add-one-with-carry on the digit space, carrying from `a_0` rightward.
pub fn odometer_system(spec: &OdometerSpec, budget: &Budget) -> Result<GeneratorSystem> {
    let space = build_odometer_space(&spec.digits, budget)?;
    from_map_specs(space, &[MapSpec::AddOne])
}

/// gcd of a nonempty set of positive integers.
pub fn gcd_of_set(t: &[u64]) -> Result<u64> {
    if t.is_empty() {
        return invalid("gcd of an empty set");
    }
    if t.contains(&0) {
        return invalid("gcd_of_set takes positive integers");
    }
    Ok(t.iter().fold(0, |a, &b| num_integer::gcd(a, b)))
}

/// Whether `n` is a nonnegative integer combination of `gens`.
fn representable_table(gens: &[u64], limit: usize) -> Vec<bool> {
    let mut ok = vec![false; limit + 1];
    ok[0] = true;
    for v in 1..=limit {
        ok[v] = gens.iter().any(|&a| a as usize <= v && ok[v - a as usize]);
    }
    ok
}

/// `(d, N)`: `d` the gcd and `N >= 1` least such that `n·d` is a nonnegative
/// combination of the generators for every `n >= N`.
pub fn additive_stabilization_bound(generators: &[u64]) -> Result<(u64, u64)> {
    let d = gcd_of_set(generators)?;
    let mut reduced: Vec<u64> = generators.iter().map(|&a| a / d).collect();
    reduced.sort_unstable();
    reduced.dedup();
    let (lo, hi) = (reduced[0], *reduced.last().expect("nonempty"));
    if lo == 1 {
        return Ok((d, 1));
    }
    // (lo - 1)(hi - 1) exceeds the Frobenius number; lo consecutive hits past it settle everything
    let cap = ((lo - 1) * (hi - 1) + lo) as usize;
    let ok = representable_table(&reduced, cap);
    let last_gap = (1..=cap).rev().find(|&v| !ok[v]).unwrap_or(0);
    debug_assert!(ok[last_gap + 1..].iter().all(|&b| b));
    Ok((d, last_gap as u64 + 1))
}

/// The two-generator Frobenius number `ab − a − b`; −1 when one generator is 1.
pub fn frobenius_two(a: u64, b: u64) -> Result<i64> {
    if a == 0 || b == 0 {
        return invalid("generators must be positive");
    }
    if num_integer::gcd(a, b) != 1 {
        return invalid(format!("{a} and {b} are not coprime"));
    }
    Ok((a * b) as i64 - a as i64 - b as i64)
}

/// Whether `n = x·a + y·b` for some nonnegative integers `x, y`.
pub fn representable(n: u64, a: u64, b: u64) -> bool {
    if a == 0 {
        return n.is_multiple_of(b);
    }
    (0..=n / a).any(|x| (n - x * a).is_multiple_of(b))
}

/// Power cap for total chain transitivity.
pub const TOTAL_TRANSITIVITY_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectivityReport {
    pub epsilon: f64,
    /// The ε-proximity graph of the points is connected.
    pub epsilon_connected: bool,
    pub recurrent: bool,
    pub transitive: bool,
    /// `G^k` chain transitive for every `k <= power_cap`.
    pub totally_transitive: bool,
    pub power_cap: usize,
    pub mixing: bool,
    /// All four properties agree; `None` when the space is not ε-connected.
    pub all_agree: Option<bool>,
}

fn proximity_connected(g: &GeneratorSystem, epsilon: f64) -> bool {
    let space = g.space();
    let n = space.point_count();
    let mut seen = FixedBitSet::with_capacity(n);
    seen.insert(0);
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for y in 0..n {
            if !seen.contains(y) && space.dist_idx(x, y) <= epsilon {
                seen.insert(y);
                stack.push(y);
            }
        }
    }
    seen.count_ones(..) == n
}

/// Recurrence, transitivity, total transitivity and mixing at ε on an
/// ε-connected space, where they coincide.
pub fn connectivity_equivalence_check(g: &GeneratorSystem, epsilon: f64, budget: &Budget) -> Result<ConnectivityReport> {
    let cg = build_chain_graph(g, epsilon)?;
    let epsilon_connected = proximity_connected(g, epsilon);
    let recurrent = is_chain_recurrent(&cg);
    let transitive = is_chain_transitive(&cg);
    let mixing = transitive && cg.union_graph().period_from(0) == Some(1);
    let mut power_cap = 1;
    let mut totally_transitive = transitive;
    for k in 2..=TOTAL_TRANSITIVITY_CAP {
        if !totally_transitive || checked_pow(g.m(), k) > budget.generators as u128 {
            break;
        }
        let gk = power_system(g, k, budget)?;
        totally_transitive = is_chain_transitive(&build_chain_graph(&gk, epsilon)?);
        power_cap = k;
    }
    let all_agree = epsilon_connected.then_some(
        recurrent == transitive && transitive == totally_transitive && totally_transitive == mixing,
    );
    Ok(ConnectivityReport {
        epsilon,
        epsilon_connected,
        recurrent,
        transitive,
        totally_transitive,
        power_cap,
        mixing,
        all_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{random_strongly_connected_digraph, system_realizing};
    use crate::recurrence::{is_chain_mixing, recurrence_time};
    use crate::space::{build_circle_grid, build_disjoint_union, FiniteMetricSpace, PointId};
    use crate::system::{apply_word, from_map_tables, Word};

    fn two_circles() -> GeneratorSystem {
        let c = build_circle_grid(32, 1.0).unwrap();
        let x = build_disjoint_union(vec![c.clone(), c], 1.0).unwrap();
        let cross = |a| MapSpec::CrossAffine { a, b: 0.0, target: vec![] };
        from_map_specs(x, &[cross(2.0), cross(3.0)]).unwrap()
    }

    /// gcd of all cycle lengths through `x` up to `bound`, by exact-length reachability.
    fn brute_cycle_gcd(d: &Digraph, x: usize, bound: usize) -> usize {
        let n = d.node_count();
        let mut layer = FixedBitSet::with_capacity(n);
        layer.insert(x);
        let mut g = 0;
        for t in 1..=bound {
            layer = d.step(&layer);
            if layer.contains(x) {
                g = num_integer::gcd(g, t);
            }
        }
        g
    }

    #[test]
    fn small_periods() {
        let looped = system_realizing(&Digraph::from_successors(vec![vec![0, 1], vec![0]]));
        assert_eq!(period_k(&build_chain_graph(&looped, 0.5).unwrap()).unwrap(), 1);
        let two = system_realizing(&Digraph::from_successors(vec![vec![1], vec![0]]));
        assert_eq!(period_k(&build_chain_graph(&two, 0.5).unwrap()).unwrap(), 2);
        let split = system_realizing(&Digraph::from_successors(vec![vec![0], vec![1]]));
        assert!(matches!(
            period_k(&build_chain_graph(&split, 0.5).unwrap()),
            Err(Error::NotTransitive { .. })
        ));
    }

    #[test]
    fn period_is_basepoint_free_and_divides_cycles() {
        for seed in 0..100 {
            let d = random_strongly_connected_digraph(seed, 3 + seed as usize % 8, seed as usize % 4);
            let n = d.node_count();
            let k = d.period_from(0).unwrap();
            for root in 0..n {
                assert_eq!(d.period_from(root), Some(k), "seed {seed}");
                assert_eq!(brute_cycle_gcd(&d, root, 4 * n * n), k, "seed {seed}");
            }
            let cg = build_chain_graph(&system_realizing(&d), 0.5).unwrap();
            for (_, r) in recurrence_time(&cg).r_per_point {
                assert_eq!(r.unwrap() % k, 0);
            }
        }
    }

    #[test]
    fn two_circles_split_into_the_circles() {
        let cg = build_chain_graph(&two_circles(), 0.05).unwrap();
        let r = epsilon_classes(&cg, &Budget::default()).unwrap();
        assert_eq!(r.k, 2);
        assert!(r.permutation_ok && r.equivalence_ok);
        assert_eq!(r.case, DecompositionCase::Periodic);
        for x in 0..64 {
            assert_eq!(r.class_of[x], r.class_of[0] ^ usize::from(x >= 32));
        }
        assert_eq!(r.per_class_mixing, vec![true, true]);
        assert_eq!(r.per_class_method, ClassMixingMethod::PowerSystem);
    }

    #[test]
    fn three_cycle_classes() {
        let d = Digraph::from_successors(vec![vec![1], vec![2], vec![0]]);
        let cg = build_chain_graph(&system_realizing(&d), 0.5).unwrap();
        let r = epsilon_classes(&cg, &Budget::default()).unwrap();
        assert_eq!(r.k, 3);
        assert_eq!(r.class_sizes, vec![1, 1, 1]);
        assert_eq!(r.per_class_mixing, vec![true; 3]);
        let tight = Budget {
            generators: 0,
            ..Budget::default()
        };
        let fallback = epsilon_classes(&cg, &tight).unwrap();
        assert_eq!(fallback.per_class_method, ClassMixingMethod::BooleanPower);
        assert_eq!(fallback.per_class_mixing, vec![true; 3]);
    }

    #[test]
    fn mixing_case_iff_chain_mixing() {
        for seed in 0..60 {
            let d = random_strongly_connected_digraph(seed, 2 + seed as usize % 7, seed as usize % 3);
            let cg = build_chain_graph(&system_realizing(&d), 0.5).unwrap();
            let r = epsilon_classes(&cg, &Budget::default()).unwrap();
            assert!(r.permutation_ok && r.equivalence_ok);
            assert_eq!(r.class_sizes.len(), r.k);
            assert!(r.class_sizes.iter().all(|&s| s >= 1));
            assert_eq!(r.case == DecompositionCase::Mixing, is_chain_mixing(&cg));
        }
    }

    #[test]
    fn odometer_orbits() {
        let b = Budget::default();
        let two = odometer_system(&OdometerSpec::new(vec![2]).unwrap(), &b).unwrap();
        assert_eq!(two.table(0), &[1, 0]);
        // index = a_0 + 2 a_1
        let g = odometer_system(&OdometerSpec::new(vec![2, 2]).unwrap(), &b).unwrap();
        let orbit: Vec<String> = (0..5)
            .map(|t| {
                let p = if t == 0 {
                    PointId(0)
                } else {
                    apply_word(&g, &Word::new(vec![0; t], 1).unwrap(), PointId(0)).unwrap()
                };
                g.space().label(p)
            })
            .collect();
        assert_eq!(orbit[0], orbit[4]);
        let idx: Vec<u32> = (0..4).scan(0u32, |x, _| {
            let cur = *x;
            *x = g.table(0)[cur as usize];
            Some(cur)
        }).collect();
        assert_eq!(idx, vec![0, 1, 2, 3]);
        let g32 = odometer_system(&OdometerSpec::new(vec![3, 2]).unwrap(), &b).unwrap();
        let mut x = 0u32;
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..6 {
            seen.insert(x);
            x = g32.table(0)[x as usize];
        }
        assert_eq!((x, seen.len()), (0, 6));
        assert!(OdometerSpec::new(vec![2, 1]).is_err());
    }

    #[test]
    fn dyadic_odometer_periods_match_resolution() {
        for depth in 1..=6 {
            let g = odometer_system(&OdometerSpec::dyadic(depth).unwrap(), &Budget::default()).unwrap();
            for i in 0..=depth {
                let cg = build_chain_graph(&g, 0.5f64.powi(i as i32)).unwrap();
                assert!(is_chain_transitive(&cg));
                assert_eq!(period_k(&cg).unwrap(), 1 << i, "depth {depth} scale {i}");
            }
        }
    }

    #[test]
    fn odometer_ladder_doubles() {
        let g = odometer_system(&OdometerSpec::dyadic(6).unwrap(), &Budget::default()).unwrap();
        let ladder = ScaleLadder::new((0..=6).map(|i| 1.5 * 0.5f64.powi(i)).collect()).unwrap();
        let d = k_ladder(&g, &ladder, DeltaRule::Equal).unwrap();
        let ks: Vec<usize> = d.entries.iter().map(|e| e.k).collect();
        assert_eq!(ks, vec![1, 2, 4, 8, 16, 32, 64]);
        assert!(d.divisibility_ok);
        assert_eq!(d.growth_flag, GrowthFlag::Growing);
    }

    #[test]
    fn two_circle_ladder_stabilizes() {
        let ladder = ScaleLadder::new(vec![0.2, 0.1, 0.05]).unwrap();
        let d = k_ladder(&two_circles(), &ladder, DeltaRule::Equal).unwrap();
        assert!(d.entries.iter().all(|e| e.k == 2));
        assert_eq!(d.growth_flag, GrowthFlag::Stabilized);
        let id = from_map_tables(build_circle_grid(8, 1.0).unwrap(), vec![(0..8).collect()]).unwrap();
        let cut = k_ladder(&id, &ScaleLadder::new(vec![0.2, 0.01]).unwrap(), DeltaRule::Equal).unwrap();
        assert_eq!(cut.entries.len(), 1);
        assert!(cut.truncated.is_some());
    }

    #[test]
    fn semigroup_lemmas() {
        assert_eq!(gcd_of_set(&[4, 6]).unwrap(), 2);
        assert_eq!(gcd_of_set(&[6, 10, 15]).unwrap(), 1);
        assert_eq!(gcd_of_set(&[7]).unwrap(), 7);
        assert!(gcd_of_set(&[]).is_err());
        assert_eq!(additive_stabilization_bound(&[3, 5]).unwrap(), (1, 8));
        assert_eq!(additive_stabilization_bound(&[2, 3]).unwrap(), (1, 2));
        assert_eq!(additive_stabilization_bound(&[4, 6]).unwrap(), (2, 2));
        assert_eq!(additive_stabilization_bound(&[1, 9]).unwrap(), (1, 1));
        assert_eq!(frobenius_two(3, 5).unwrap(), 7);
        assert_eq!(frobenius_two(2, 3).unwrap(), 1);
        assert_eq!(frobenius_two(1, 7).unwrap(), -1);
        assert!(frobenius_two(4, 6).is_err());
        assert!(!representable(7, 3, 5) && representable(8, 3, 5));
    }

    #[test]
    fn frobenius_matches_exhaustive_search() {
        for a in 1..=12u64 {
            for b in (a + 1)..=12 {
                if num_integer::gcd(a, b) != 1 {
                    continue;
                }
                let f = frobenius_two(a, b).unwrap();
                // brute force: largest non-representable below a generous horizon
                let largest = (0..(a * b + 50)).filter(|&n| !representable(n, a, b)).max();
                assert_eq!(largest.map_or(-1, |v| v as i64), f, "({a},{b})");
                let (d, n) = additive_stabilization_bound(&[a, b]).unwrap();
                assert_eq!((d, n as i64), (1, f.max(0) + 1));
            }
        }
    }

    #[test]
    fn connectivity_corollary() {
        let b = Budget::default();
        let circle = build_circle_grid(32, 1.0).unwrap();
        let dt = from_map_specs(
            circle.clone(),
            &[MapSpec::Affine { a: 2.0, b: 0.0 }, MapSpec::Affine { a: 3.0, b: 0.0 }],
        )
        .unwrap();
        let r = connectivity_equivalence_check(&dt, 0.05, &b).unwrap();
        assert_eq!(r.all_agree, Some(true));
        assert!(r.mixing && r.totally_transitive);
        let split = connectivity_equivalence_check(&two_circles(), 0.05, &b).unwrap();
        assert!(!split.epsilon_connected);
        assert_eq!(split.all_agree, None);
        let id = from_map_specs(circle, &[MapSpec::Identity]).unwrap();
        let r = connectivity_equivalence_check(&id, 0.05, &b).unwrap();
        assert_eq!(r.all_agree, Some(true));
        assert!(r.transitive);
        let pts = FiniteMetricSpace::uniform(3, 1.0).unwrap();
        let lone = from_map_tables(pts, vec![vec![0, 1, 2]]).unwrap();
        assert!(!connectivity_equivalence_check(&lone, 0.5, &b).unwrap().epsilon_connected);
    }
}
