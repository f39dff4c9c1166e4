//! Chain recurrence, transitivity and mixing at a fixed tolerance, with
//! recurrence and mixing times.
//!
//! Everything here reads the union graph `U = ∪ A_i` of a [`ChainGraph`]
//! built at the jump tolerance ε: a `(w, ε)`-chain of length `n` from `x` to
//! `y` exists for some `w` iff `U` has a walk of length `n` from `x` to `y`.
//! "For all `n >= N`" is certified finitely: on a strongly connected graph
//! every node has a predecessor, so once the exact-length reach layer is the
//! whole space it stays so, and on a primitive graph this happens within the
//! Wielandt bound `(n - 1)^2 + 1`.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::budget::Budget;
use crate::entropy::spectral_growth;
use crate::error::{invalid, Result};
use crate::graph::{build_chain_graph, ChainGraph};
use crate::space::{PointId, ScaleLadder};
use crate::system::{power_system, product_system, GeneratorSystem};

/// `(n - 1)^2 + 1`: the largest exponent a primitive `n`-node graph can need.
pub fn wielandt_cap(n: usize) -> usize {
    n.saturating_sub(1).pow(2) + 1
}

/// Strong connectivity of the union graph.
pub fn is_chain_transitive(cg: &ChainGraph) -> bool {
    cg.union_graph().is_strongly_connected()
}

/// Strongly connected with period 1 (primitive).
pub fn is_chain_mixing(cg: &ChainGraph) -> bool {
    is_chain_transitive(cg) && cg.union_graph().period_from(0) == Some(1)
}

/// Every point lies on a cycle of the union graph.
pub fn is_chain_recurrent(cg: &ChainGraph) -> bool {
    (0..cg.point_count()).all(|x| recurrence_time_point(cg, PointId::from(x)).is_some())
}

/// `r_ε(x, G)`: shortest cycle through `x` in the union graph.
pub fn recurrence_time_point(cg: &ChainGraph, x: PointId) -> Option<usize> {
    cg.union_graph().shortest_cycle_through(x.index())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceReport {
    pub epsilon: f64,
    pub recurrent: bool,
    pub transitive: bool,
    pub mixing: bool,
    pub r_per_point: Vec<(PointId, Option<usize>)>,
    /// `r_ε(G)`, defined when every point is recurrent.
    pub r_global: Option<usize>,
    pub wielandt_cap: usize,
}

pub fn recurrence_time(cg: &ChainGraph) -> RecurrenceReport {
    let r_per_point: Vec<(PointId, Option<usize>)> = (0..cg.point_count())
        .map(PointId::from)
        .map(|x| (x, recurrence_time_point(cg, x)))
        .collect();
    let r_global = r_per_point
        .iter()
        .map(|(_, r)| *r)
        .collect::<Option<Vec<usize>>>()
        .and_then(|rs| rs.into_iter().max());
    let transitive = is_chain_transitive(cg);
    RecurrenceReport {
        epsilon: cg.delta(),
        recurrent: r_global.is_some(),
        transitive,
        mixing: transitive && cg.union_graph().period_from(0) == Some(1),
        r_per_point,
        r_global,
        wielandt_cap: wielandt_cap(cg.point_count()),
    }
}

/// First `t >= 1` at which the exact-length reach layer from `start` is everything.
fn first_full_layer(cg: &ChainGraph, start: &FixedBitSet) -> Option<usize> {
    let n = cg.point_count();
    let mut layer = start.clone();
    for t in 1..=wielandt_cap(n) {
        layer = cg.union_graph().step(&layer);
        if layer.count_ones(..) == n {
            return Some(t);
        }
    }
    None
}

/// `m_ε(x, δ, G)` with `B(x, δ)` the closed ball; `None` unless the union graph is primitive.
pub fn mixing_time_point(cg: &ChainGraph, x: PointId, delta_ball: f64) -> Option<usize> {
    if !is_chain_mixing(cg) {
        return None;
    }
    mixing_time_point_unchecked(cg, x, delta_ball)
}

fn mixing_time_point_unchecked(cg: &ChainGraph, x: PointId, delta_ball: f64) -> Option<usize> {
    let space = cg.system().space();
    let mut start = FixedBitSet::with_capacity(cg.point_count());
    start.extend(space.closed_ball(x, delta_ball).into_iter().map(PointId::index));
    first_full_layer(cg, &start)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingReport {
    pub epsilon: f64,
    pub delta: f64,
    pub mixing: bool,
    pub m_per_point: Vec<(PointId, Option<usize>)>,
    /// `m_ε(δ, G)`, defined when the system is ε-chain mixing.
    pub m_global: Option<usize>,
    pub wielandt_cap: usize,
}

pub fn mixing_time(cg: &ChainGraph, delta_ball: f64) -> MixingReport {
    let mixing = is_chain_mixing(cg);
    let m_per_point: Vec<(PointId, Option<usize>)> = (0..cg.point_count())
        .map(PointId::from)
        .map(|x| (x, mixing.then(|| mixing_time_point_unchecked(cg, x, delta_ball)).flatten()))
        .collect();
    let m_global = m_per_point
        .iter()
        .map(|(_, m)| *m)
        .collect::<Option<Vec<usize>>>()
        .and_then(|ms| ms.into_iter().max());
    MixingReport {
        epsilon: cg.delta(),
        delta: delta_ball,
        mixing,
        m_per_point,
        m_global,
        wielandt_cap: wielandt_cap(cg.point_count()),
    }
}

/// Result of one check in [`proposition_suite`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CheckOutcome {
    Pass,
    Fail { detail: String },
    Skipped { reason: String },
    /// Existential check: a witness tolerance was found (the smallest one any point needed).
    Found { epsilon_prime: f64 },
    /// Existential check: the tolerance grid ran out for `points` points.
    Exhausted { points: usize, smallest_tried: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionCheck {
    pub name: String,
    pub outcome: CheckOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionReport {
    pub epsilon: f64,
    pub delta: f64,
    pub k: usize,
    pub checks: Vec<PropositionCheck>,
}

impl PropositionReport {
    pub fn failures(&self) -> Vec<&PropositionCheck> {
        self.checks
            .iter()
            .filter(|c| matches!(c.outcome, CheckOutcome::Fail { .. }))
            .collect()
    }

    pub fn all_passed(&self) -> bool {
        self.failures().is_empty()
    }

    fn push(&mut self, name: &str, outcome: CheckOutcome) {
        self.checks.push(PropositionCheck {
            name: name.to_string(),
            outcome,
        });
    }
}

fn pass_or_fail(failures: Vec<String>) -> CheckOutcome {
    if failures.is_empty() {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail {
            detail: failures.join("; "),
        }
    }
}

/// Tolerances `ε, ε/2, ε/4, ...` down to the first value below the smallest
/// positive distance (beyond which the chain relation no longer changes).
pub fn halving_grid(epsilon: f64, g: &GeneratorSystem) -> Vec<f64> {
    let floor = g.space().min_positive_distance().unwrap_or(epsilon);
    let mut out = vec![epsilon];
    let mut e = epsilon;
    while e >= floor && out.len() < 64 {
        e /= 2.0;
        out.push(e);
    }
    out
}

/// Searches the halving grid for tolerances `ε' <= ε` with `need(x) <= have(ε', x)`
/// at every point that has a requirement.
fn existential_search(
    g: &GeneratorSystem,
    epsilon: f64,
    needs: &[Option<usize>],
    mut have: impl FnMut(&ChainGraph, usize) -> Option<usize>,
) -> Result<CheckOutcome> {
    let grid = halving_grid(epsilon, g);
    let mut open: Vec<usize> = (0..needs.len()).filter(|&x| needs[x].is_some()).collect();
    let mut smallest_needed = epsilon;
    for &e in &grid {
        if open.is_empty() {
            break;
        }
        let cg = build_chain_graph(g, e)?;
        open.retain(|&x| {
            let ok = have(&cg, x).is_some_and(|h| needs[x].expect("required") <= h);
            if ok {
                smallest_needed = smallest_needed.min(e);
            }
            !ok
        });
    }
    Ok(if open.is_empty() {
        CheckOutcome::Found {
            epsilon_prime: smallest_needed,
        }
    } else {
        CheckOutcome::Exhausted {
            points: open.len(),
            smallest_tried: *grid.last().expect("nonempty grid"),
        }
    })
}

/// Product and power relations between recurrence and mixing times at one
/// tolerance `ε` (chain jumps) and ball radius `δ`.
///
/// The inequalities are checked exactly on the built graphs: the product's
/// union graph is the tensor product of the factors' union graphs under the
/// max metric, and every `G^k`-chain step is realized by a `k`-step `G`-chain.
/// The existential statements are searched over the halving grid of `ε`.
pub fn proposition_suite(
    g: &GeneratorSystem,
    h: &GeneratorSystem,
    k: usize,
    epsilon: f64,
    delta: f64,
    budget: &Budget,
) -> Result<PropositionReport> {
    if k == 0 {
        return invalid("power k must be positive");
    }
    let mut report = PropositionReport {
        epsilon,
        delta,
        k,
        checks: Vec::new(),
    };
    let cg_g = build_chain_graph(g, epsilon)?;
    let cg_h = build_chain_graph(h, epsilon)?;
    let gh = product_system(g, h, budget)?;
    let cg_gh = build_chain_graph(&gh, epsilon)?;
    let gk = power_system(g, k, budget)?;
    let cg_gk = build_chain_graph(&gk, epsilon)?;

    let rg = recurrence_time(&cg_g);
    let rh = recurrence_time(&cg_h);
    let rgh = recurrence_time(&cg_gh);
    let rgk = recurrence_time(&cg_gk);
    let nh = h.point_count();

    report.push(
        "product-recurrence-equivalence",
        pass_or_fail(if (rg.recurrent && rh.recurrent) == rgh.recurrent {
            vec![]
        } else {
            vec![format!(
                "G {} H {} but G×H {}",
                rg.recurrent, rh.recurrent, rgh.recurrent
            )]
        }),
    );

    if rg.recurrent && rh.recurrent {
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for x in 0..g.point_count() {
            for y in 0..nh {
                let a = rg.r_per_point[x].1.expect("recurrent");
                let b = rh.r_per_point[y].1.expect("recurrent");
                match rgh.r_per_point[x * nh + y].1 {
                    None => upper.push(format!("({x},{y}) not recurrent in G×H")),
                    Some(r) => {
                        if r < a.max(b) {
                            lower.push(format!("r({x},{y})={r} < max({a},{b})"));
                        }
                        if r > num_integer::lcm(a, b) {
                            upper.push(format!("r({x},{y})={r} > lcm({a},{b})"));
                        }
                    }
                }
            }
        }
        report.push("product-recurrence-lower", pass_or_fail(lower));
        report.push("product-recurrence-upper", pass_or_fail(upper));
    } else {
        let reason = "G or H is not chain recurrent at this tolerance".to_string();
        report.push("product-recurrence-lower", CheckOutcome::Skipped { reason: reason.clone() });
        report.push("product-recurrence-upper", CheckOutcome::Skipped { reason });
    }

    report.push(
        "power-recurrence-implies-base",
        pass_or_fail(if !rgk.recurrent || rg.recurrent {
            vec![]
        } else {
            vec!["G^k recurrent but G not".to_string()]
        }),
    );

    let mut lower = Vec::new();
    for x in 0..g.point_count() {
        if let Some(rk) = rgk.r_per_point[x].1 {
            match rg.r_per_point[x].1 {
                None => lower.push(format!("x={x} recurrent under G^k only")),
                Some(r) if k * rk < r => lower.push(format!("x={x}: {k}·{rk} < {r}")),
                Some(_) => {}
            }
        }
    }
    report.push("power-recurrence-lower", pass_or_fail(lower));

    let needs: Vec<Option<usize>> = rgk.r_per_point.iter().map(|(_, r)| *r).collect();
    report.push(
        "power-recurrence-existential",
        existential_search(g, epsilon, &needs, |cg, x| recurrence_time_point(cg, PointId::from(x)))?,
    );

    let mg = mixing_time(&cg_g, delta);
    let mh = mixing_time(&cg_h, delta);
    if mg.mixing && mh.mixing {
        let mgh = mixing_time(&cg_gh, delta);
        let expected = mg.m_global.max(mh.m_global);
        report.push(
            "product-mixing-equality",
            pass_or_fail(if mgh.m_global == expected {
                vec![]
            } else {
                vec![format!("m(G×H)={:?} but max={:?}", mgh.m_global, expected)]
            }),
        );
    } else {
        report.push(
            "product-mixing-equality",
            CheckOutcome::Skipped {
                reason: "G or H is not chain mixing at this tolerance".into(),
            },
        );
    }

    let mgk = mixing_time(&cg_gk, delta);
    match (mg.m_global, mgk.m_global) {
        (Some(m), Some(mk)) => report.push(
            "power-mixing-lower",
            pass_or_fail(if k * mk >= m {
                vec![]
            } else {
                vec![format!("{k}·{mk} < {m}")]
            }),
        ),
        (None, Some(_)) => report.push(
            "power-mixing-lower",
            CheckOutcome::Fail {
                detail: "G^k mixing but G not".into(),
            },
        ),
        _ => report.push(
            "power-mixing-lower",
            CheckOutcome::Skipped {
                reason: "G^k is not chain mixing at this tolerance".into(),
            },
        ),
    }

    match mgk.m_global {
        Some(mk) => {
            // one global requirement, checked at a single representative index
            let needs = [Some(mk)];
            report.push(
                "power-mixing-existential",
                existential_search(g, epsilon, &needs, |cg, _| mixing_time(cg, delta).m_global)?,
            );
        }
        None => report.push(
            "power-mixing-existential",
            CheckOutcome::Skipped {
                reason: "G^k is not chain mixing at this tolerance".into(),
            },
        ),
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UbdEntry {
    pub epsilon: f64,
    pub recurrent: bool,
    pub transitive: bool,
    pub r_global: Option<usize>,
    /// `r_ε(G) · ε^(b̄ + 1)`.
    pub product: Option<f64>,
}

/// Recurrence-time growth against the upper box dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UbdReport {
    pub upper_b: f64,
    pub exponent: f64,
    pub entries: Vec<UbdEntry>,
    /// Empirical constant: the largest product on the ladder.
    pub max_product: Option<f64>,
    /// The products rise at each of the last two ladder steps.
    pub growing: bool,
    /// Set when transitivity fails somewhere on the ladder.
    pub partial: Option<String>,
}

/// Reports `r_ε(G) · ε^(b̄+1)` down the ladder (chains built at δ = ε).
pub fn verify_ubd(g: &GeneratorSystem, eps_ladder: &ScaleLadder, upper_b: f64) -> Result<UbdReport> {
    let exponent = upper_b + 1.0;
    let mut entries = Vec::new();
    let mut partial = None;
    for &eps in eps_ladder.values() {
        let cg = build_chain_graph(g, eps)?;
        let r = recurrence_time(&cg);
        if !r.transitive && partial.is_none() {
            partial = Some(format!("not chain transitive at epsilon {eps}"));
        }
        entries.push(UbdEntry {
            epsilon: eps,
            recurrent: r.recurrent,
            transitive: r.transitive,
            r_global: r.r_global,
            product: r.r_global.map(|r| r as f64 * eps.powf(exponent)),
        });
    }
    let products: Vec<f64> = entries.iter().filter_map(|e| e.product).collect();
    let max_product = products.iter().cloned().reduce(f64::max);
    let growing = match products.len() {
        0 | 1 => false,
        2 => products[1] > products[0],
        n => products[n - 1] > products[n - 2] && products[n - 2] > products[n - 3],
    };
    Ok(UbdReport {
        upper_b,
        exponent,
        entries,
        max_product,
        growing,
        partial,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LbmEntry {
    pub epsilon: f64,
    pub delta: f64,
    pub mixing_time: Option<usize>,
}

/// Both sides of the mixing-time lower bound on entropy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LbmReport {
    /// Entropy estimate on the left-hand side.
    pub h_hat: f64,
    pub h_hat_source: String,
    pub lower_b: f64,
    pub log_m: f64,
    /// Mixing times over the whole `(ε, δ)` grid.
    pub entries: Vec<LbmEntry>,
    /// Tolerance standing in for `ε → 0`.
    pub epsilon_used: f64,
    /// `b̲ · max_δ log(1/δ) / m̂_ε(δ) − log m`.
    pub rhs_raw: Option<f64>,
    /// `max(0, rhs_raw)`.
    pub rhs: Option<f64>,
    pub slack: f64,
    /// `h_hat >= rhs − slack`; `None` when the right side is unavailable.
    pub holds: Option<bool>,
    pub partial: Option<String>,
}

/// Default tolerance on the lower-bound check, in nats.
pub const LBM_SLACK: f64 = 0.1;

/// Mixing-time lower bound with `ĥ(G)` from the path-count growth oracle at the
/// smallest ladder ε.
pub fn verify_lbm(
    g: &GeneratorSystem,
    eps_ladder: &ScaleLadder,
    delta_ladder: &ScaleLadder,
    lower_b: f64,
) -> Result<LbmReport> {
    let cg = build_chain_graph(g, eps_ladder.smallest())?;
    let h = spectral_growth(&cg);
    let source = format!("spectral growth rate at epsilon {}", eps_ladder.smallest());
    verify_lbm_with(g, eps_ladder, delta_ladder, lower_b, h.rate, &source, LBM_SLACK)
}

/// [`verify_lbm`] against a caller-supplied entropy estimate.
pub fn verify_lbm_with(
    g: &GeneratorSystem,
    eps_ladder: &ScaleLadder,
    delta_ladder: &ScaleLadder,
    lower_b: f64,
    h_hat: f64,
    h_hat_source: &str,
    slack: f64,
) -> Result<LbmReport> {
    let mut entries = Vec::new();
    let mut partial = None;
    for &eps in eps_ladder.values() {
        let cg = build_chain_graph(g, eps)?;
        let mixing = is_chain_mixing(&cg);
        if !mixing && partial.is_none() {
            partial = Some(format!("not chain mixing at epsilon {eps}"));
        }
        for &delta in delta_ladder.values() {
            entries.push(LbmEntry {
                epsilon: eps,
                delta,
                mixing_time: mixing.then(|| mixing_time(&cg, delta).m_global).flatten(),
            });
        }
    }
    let epsilon_used = eps_ladder.smallest();
    let log_m = (g.m() as f64).ln();
    let at_smallest: Option<Vec<f64>> = entries
        .iter()
        .filter(|e| e.epsilon == epsilon_used)
        .map(|e| e.mixing_time.map(|m| (1.0 / e.delta).ln() / m as f64))
        .collect();
    let rhs_raw = at_smallest.map(|v| lower_b * v.into_iter().fold(f64::NEG_INFINITY, f64::max) - log_m);
    let rhs = rhs_raw.map(|r| r.max(0.0));
    Ok(LbmReport {
        h_hat,
        h_hat_source: h_hat_source.to_string(),
        lower_b,
        log_m,
        entries,
        epsilon_used,
        rhs_raw,
        rhs,
        slack,
        holds: rhs.map(|r| h_hat >= r - slack),
        partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{random_strongly_connected_digraph, random_transitive_system, system_realizing, CORPUS_DELTA};
    use crate::graph::Digraph;
    use crate::space::{build_circle_grid, build_disjoint_union, build_shift_space, FiniteMetricSpace};
    use crate::system::{from_map_specs, from_map_tables, MapSpec};

    fn two_circles() -> GeneratorSystem {
        let c = build_circle_grid(32, 1.0).unwrap();
        let x = build_disjoint_union(vec![c.clone(), c], 1.0).unwrap();
        let cross = |a| MapSpec::CrossAffine { a, b: 0.0, target: vec![] };
        from_map_specs(x, &[cross(2.0), cross(3.0)]).unwrap()
    }

    fn prepend_shift(depth: usize) -> GeneratorSystem {
        let s = build_shift_space(2, depth, &Budget::default()).unwrap();
        from_map_specs(s, &[MapSpec::Prepend { symbol: 0 }, MapSpec::Prepend { symbol: 1 }]).unwrap()
    }

    /// All-pairs shortest walk lengths by Floyd–Warshall.
    fn floyd(d: &Digraph) -> Vec<Vec<usize>> {
        let n = d.node_count();
        let inf = usize::MAX / 4;
        let mut dist = vec![vec![inf; n]; n];
        for (u, v) in d.edges() {
            dist[u][v] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    dist[i][j] = dist[i][j].min(dist[i][k] + dist[k][j]);
                }
            }
        }
        dist
    }

    /// Boolean matrix powers: first `t` after which `start · U^s` is all ones for every `s >= t`
    /// up to `horizon`.
    fn brute_mixing(d: &Digraph, start: &[usize], horizon: usize) -> Option<usize> {
        let n = d.node_count();
        let mut row = vec![false; n];
        for &s in start {
            row[s] = true;
        }
        let mut full_at = Vec::new();
        for _ in 1..=horizon {
            let mut next = vec![false; n];
            for u in 0..n {
                for v in 0..n {
                    if row[u] && d.has_edge(u, v) {
                        next[v] = true;
                    }
                }
            }
            row = next;
            full_at.push(row.iter().all(|&b| b));
        }
        let last_bad = full_at.iter().rposition(|&f| !f);
        match last_bad {
            None => Some(1),
            Some(i) if i + 1 < horizon => Some(i + 2),
            _ => None,
        }
    }

    #[test]
    fn trivial_regimes() {
        let c = build_circle_grid(6, 1.0).unwrap();
        let id = from_map_specs(c.clone(), &[MapSpec::Identity]).unwrap();
        let complete = build_chain_graph(&id, 1.0).unwrap();
        assert!(is_chain_transitive(&complete) && is_chain_mixing(&complete));
        assert_eq!(recurrence_time(&complete).r_global, Some(1));
        assert_eq!(mixing_time(&complete, 0.1).m_global, Some(1));
        let fine = build_chain_graph(&id, 0.01).unwrap();
        let r = recurrence_time(&fine);
        assert_eq!(r.r_global, Some(1));
        assert!(r.recurrent && !r.transitive && !r.mixing);
        assert_eq!(mixing_time_point(&fine, PointId(0), 0.1), None);
    }

    #[test]
    fn recurrence_matches_floyd_warshall() {
        for seed in 0..40 {
            let d = random_strongly_connected_digraph(seed, 6, 4);
            let cg = build_chain_graph(&system_realizing(&d), 0.5).unwrap();
            assert_eq!(cg.union_graph(), &d);
            let dist = floyd(&d);
            let r = recurrence_time(&cg);
            for x in 0..6 {
                assert_eq!(r.r_per_point[x].1, Some(dist[x][x]), "seed {seed} x {x}");
            }
            assert_eq!(r.r_global, (0..6).map(|x| dist[x][x]).max());
        }
    }

    #[test]
    fn mixing_matches_matrix_powers() {
        let mut checked = 0;
        for seed in 0..60 {
            let g = random_transitive_system(seed, 8, 2);
            let cg = build_chain_graph(&g, CORPUS_DELTA).unwrap();
            let horizon = 3 * wielandt_cap(g.point_count());
            for x in 0..g.point_count() {
                let ball: Vec<usize> = g.space().closed_ball(PointId::from(x), 1.2).iter().map(|p| p.index()).collect();
                let oracle = brute_mixing(cg.union_graph(), &ball, horizon);
                assert_eq!(mixing_time_point(&cg, PointId::from(x), 1.2), oracle, "seed {seed}");
                checked += oracle.is_some() as usize;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn two_circles_transitive_not_mixing() {
        let cg = build_chain_graph(&two_circles(), 0.05).unwrap();
        assert!(is_chain_transitive(&cg));
        assert!(!is_chain_mixing(&cg));
        let r = recurrence_time(&cg);
        for (_, rx) in &r.r_per_point {
            let rx = rx.expect("recurrent");
            assert!(rx >= 2 && rx % 2 == 0);
        }
        let dist = floyd(cg.union_graph());
        assert_eq!(r.r_global, (0..64).map(|x| dist[x][x]).max());
        // frozen from the Floyd–Warshall oracle
        assert_eq!(r.r_global, Some(4));
        assert_eq!(mixing_time(&cg, 0.05).m_global, None);
    }

    #[test]
    fn prepend_shift_mixes_quickly() {
        let cg = build_chain_graph(&prepend_shift(6), 0.3).unwrap();
        assert!(is_chain_mixing(&cg));
        let m = mixing_time(&cg, 0.01);
        // from a single word, every word is reached in exactly n >= 2 steps
        assert_eq!(m.m_global, Some(2));
        let mut last = 0;
        for eps in [0.5, 0.3, 0.15] {
            let cg = build_chain_graph(&prepend_shift(6), eps).unwrap();
            let v = mixing_time(&cg, 0.01).m_global.unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn proposition_suite_on_random_corpus() {
        for seed in 0..20 {
            let g = random_transitive_system(seed, 8, 2);
            let h = random_transitive_system(seed + 1000, 6, 2);
            let k = 1 + (seed as usize % 3);
            let report = proposition_suite(&g, &h, k, CORPUS_DELTA, 1.2, &Budget::default()).unwrap();
            assert!(report.all_passed(), "seed {seed}: {:?}", report.failures());
        }
    }

    #[test]
    fn power_one_gives_equalities() {
        let g = random_transitive_system(3, 8, 2);
        let cg = build_chain_graph(&g, CORPUS_DELTA).unwrap();
        let g1 = power_system(&g, 1, &Budget::default()).unwrap();
        let cg1 = build_chain_graph(&g1, CORPUS_DELTA).unwrap();
        assert_eq!(recurrence_time(&cg), recurrence_time(&cg1));
        assert_eq!(mixing_time(&cg, 1.2), mixing_time(&cg1, 1.2));
        let report = proposition_suite(&g, &g, 1, CORPUS_DELTA, 1.2, &Budget::default()).unwrap();
        assert!(report.all_passed());
        let found = report.checks.iter().find(|c| c.name == "power-recurrence-existential").unwrap();
        assert_eq!(found.outcome, CheckOutcome::Found { epsilon_prime: CORPUS_DELTA });
    }

    #[test]
    fn self_product_recurrence_collapses() {
        let g = random_transitive_system(11, 6, 2);
        let gg = product_system(&g, &g, &Budget::default()).unwrap();
        let r = recurrence_time(&build_chain_graph(&g, CORPUS_DELTA).unwrap());
        let rr = recurrence_time(&build_chain_graph(&gg, CORPUS_DELTA).unwrap());
        let n = g.point_count();
        for x in 0..n {
            assert_eq!(rr.r_per_point[x * n + x].1, r.r_per_point[x].1);
        }
    }

    #[test]
    fn ubd_and_lbm_reports() {
        let c = build_circle_grid(64, 1.0).unwrap();
        let g = from_map_specs(c, &[MapSpec::Affine { a: 2.0, b: 0.0 }, MapSpec::Affine { a: 3.0, b: 0.0 }]).unwrap();
        let ladder = ScaleLadder::new(vec![0.2, 0.1, 0.05]).unwrap();
        let ubd = verify_ubd(&g, &ladder, 1.0).unwrap();
        assert!(ubd.partial.is_none());
        assert!(ubd.max_product.unwrap().is_finite());
        for e in &ubd.entries {
            assert_eq!(e.product.unwrap(), e.r_global.unwrap() as f64 * e.epsilon.powi(2));
        }
        let deltas = ScaleLadder::new(vec![0.3, 0.2]).unwrap();
        let lbm = verify_lbm(&g, &ladder, &deltas, 1.0).unwrap();
        assert_eq!(lbm.holds, Some(true));
        assert_eq!(lbm.rhs, lbm.rhs_raw.map(|r| r.max(0.0)));
    }

    #[test]
    fn lbm_partial_when_not_mixing() {
        let space = FiniteMetricSpace::uniform(2, 1.0).unwrap();
        let swap = from_map_tables(space, vec![vec![1, 0]]).unwrap();
        let ladder = ScaleLadder::new(vec![0.5]).unwrap();
        let r = verify_lbm(&swap, &ladder, &ladder, 1.0).unwrap();
        assert!(r.partial.is_some());
        assert_eq!(r.holds, None);
    }
}
