//! Orbit entropy and pseudo-entropy of a free semigroup action.
//!
//! Orbit counts work with the Bowen-type word metric `d_w`: a set is
//! `(w, ε)`-separated when distinct points satisfy `d_w >= ε`, and spanning
//! when every point is within `d_w < ε` of it. Pseudo-orbit counts work with
//! `(w, δ)`-chains compared coordinatewise on `0 <= i < n`: separated when some
//! coordinate differs by `> ε`, spanning when all coordinates are within `<= ε`.
//! The inequalities differ between the two families; both are implemented as
//! written, and [`PseudoRules`] can switch the pseudo family to the orbit
//! conventions for sensitivity studies.
//!
//! Because the pseudo-orbit comparison ignores the endpoint `x_n`, two chains
//! sharing `x_0 .. x_{n-1}` are never separated; all pseudo counts therefore
//! run over the distinct prefixes, which are exactly the chains of the word
//! with its last letter removed.
//!
//! Entropies are reported as raw curves `(n, log average count)` together with
//! a least-squares slope over the upper half of the `n` range. The exact
//! growth-rate oracle [`spectral_growth_rate`] uses big-integer path counts.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::{checked_pow, Budget};
use crate::error::{invalid, Error, Result};
use crate::graph::{build_chain_graph, chains_from_each_point, sum_matrix_step, ChainGraph};
use crate::solve::{max_independent_small, min_union_cover_small, BitGraph};
use crate::space::{ScaleLadder, EXACT_COVER_LIMIT};
use crate::system::{skew_depth_for, skew_product, suffix_trajectory, GeneratorSystem, Word};

/// Chain sets up to this size get exact separated/spanning optima.
pub const EXACT_CHAIN_LIMIT: usize = 4096;
/// Words drawn per length when the exhaustive average is over budget.
pub const DEFAULT_WORD_SAMPLE: usize = 256;

/// A count together with whether it is the true optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Count {
    pub value: u128,
    /// `false` for greedy results: lower bounds for separated counts, upper
    /// bounds for spanning counts.
    pub exact: bool,
}

/// Comparison conventions for pseudo-orbit separated/spanning sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PseudoRules {
    /// Compare coordinate `n` too (the definitions stop at `n - 1`).
    pub include_endpoint: bool,
    /// Separation needs `d > ε` (coverage `d <= ε`); when `false`, separation
    /// needs `d >= ε` and coverage `d < ε`, matching the orbit counts.
    pub strict: bool,
}

impl Default for PseudoRules {
    fn default() -> Self {
        PseudoRules {
            include_endpoint: false,
            strict: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyMethod {
    OrbitSeparated,
    OrbitSpanning,
    PseudoSeparated,
    PseudoSpanning,
    SpectralOracle,
}

/// One entropy estimate with the raw growth curve behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyEstimate {
    /// Nats.
    pub value: f64,
    pub method: EntropyMethod,
    pub epsilon: f64,
    /// 0 for orbit methods.
    pub delta: f64,
    pub n_range: (usize, usize),
    /// Words averaged per length; 0 means every word.
    pub word_sample: usize,
    /// `(n, log of the word-averaged count)`.
    pub raw_curve: Vec<(usize, f64)>,
    /// Every underlying count was an exact optimum.
    pub exact: bool,
}

fn conflict_masks_small(n: usize, close: impl Fn(usize, usize) -> bool) -> Vec<u32> {
    (0..n)
        .map(|x| (0..n).filter(|&y| y != x && close(x, y)).fold(0u32, |a, y| a | (1 << y)))
        .collect()
}

fn orbit_trajectories(g: &GeneratorSystem, w: &Word) -> Vec<Vec<u32>> {
    g.space()
        .points()
        .map(|x| suffix_trajectory(g, w, x).into_iter().map(|p| p.0).collect())
        .collect()
}

fn dw_from(g: &GeneratorSystem, tx: &[u32], ty: &[u32]) -> f64 {
    tx.iter()
        .zip(ty)
        .map(|(&a, &b)| g.space().dist_idx(a as usize, b as usize))
        .fold(0.0, f64::max)
}

/// Greedy maximal set in index order of points pairwise "far" (never "close").
fn greedy_far_set(n: usize, close: impl Fn(usize, usize) -> bool) -> usize {
    let mut kept: Vec<usize> = Vec::new();
    for x in 0..n {
        if kept.iter().all(|&k| !close(k, x)) {
            kept.push(x);
        }
    }
    kept.len()
}

/// `N(w, ε, G)`: the largest set with pairwise `d_w >= ε`.
pub fn orbit_separated_count(g: &GeneratorSystem, w: &Word, epsilon: f64) -> Result<Count> {
    if !(epsilon > 0.0) {
        return invalid("epsilon must be positive");
    }
    let traj = orbit_trajectories(g, w);
    let n = traj.len();
    let close = |x: usize, y: usize| dw_from(g, &traj[x], &traj[y]) < epsilon;
    if n <= EXACT_COVER_LIMIT {
        let conflict = conflict_masks_small(n, close);
        return Ok(Count {
            value: max_independent_small(&conflict) as u128,
            exact: true,
        });
    }
    Ok(Count {
        value: greedy_far_set(n, close) as u128,
        exact: false,
    })
}

/// `B(w, ε, G)`: the smallest set with every point at `d_w < ε` from a member.
pub fn orbit_spanning_count(g: &GeneratorSystem, w: &Word, epsilon: f64) -> Result<Count> {
    if !(epsilon > 0.0) {
        return invalid("epsilon must be positive");
    }
    let traj = orbit_trajectories(g, w);
    let n = traj.len();
    let close = |x: usize, y: usize| dw_from(g, &traj[x], &traj[y]) < epsilon;
    if n <= EXACT_COVER_LIMIT {
        let balls: Vec<u32> = conflict_masks_small(n, close)
            .into_iter()
            .enumerate()
            .map(|(x, c)| c | (1 << x))
            .collect();
        return Ok(Count {
            value: min_union_cover_small(&balls, n) as u128,
            exact: true,
        });
    }
    // a maximal separated set spans
    Ok(Count {
        value: greedy_far_set(n, close) as u128,
        exact: false,
    })
}

/// The coordinate sequences compared by the pseudo-orbit counts.
struct ChainPrefixes {
    /// Flat storage, `stride` points per sequence, in lexicographic order.
    data: Vec<u32>,
    stride: usize,
}

impl ChainPrefixes {
    fn len(&self) -> usize {
        self.data.len() / self.stride
    }

    fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }
}

fn compared_word(w: &Word, rules: PseudoRules) -> Word {
    if rules.include_endpoint || w.is_empty() {
        w.clone()
    } else {
        w.prefix(w.len() - 1)
    }
}

fn enumerate_chains(cg: &ChainGraph, u: &Word, budget: &Budget) -> Result<ChainPrefixes> {
    let total: BigUint = chains_from_each_point(cg, u).into_iter().sum();
    let total = total.to_usize().unwrap_or(usize::MAX);
    if total > budget.chains {
        return Err(Error::Resource(format!(
            "{total} chains for word {u} exceed the chain budget of {}",
            budget.chains
        )));
    }
    let stride = u.len() + 1;
    let mut data = Vec::with_capacity(total * stride);
    let mut current = Vec::with_capacity(stride);
    fn dfs(cg: &ChainGraph, letters: &[u32], current: &mut Vec<u32>, data: &mut Vec<u32>) {
        let j = current.len() - 1;
        if j == letters.len() {
            data.extend_from_slice(current);
            return;
        }
        let x = current[j] as usize;
        for &y in cg.row(letters[j] as usize, x) {
            current.push(y);
            dfs(cg, letters, current, data);
            current.pop();
        }
    }
    for x in 0..cg.point_count() {
        current.push(x as u32);
        dfs(cg, u.letters(), &mut current, &mut data);
        current.pop();
    }
    Ok(ChainPrefixes { data, stride })
}

/// Closeness table for pseudo-orbit coordinates: `close[p]` holds `q` with
/// `d(p, q) <= ε` (strict rules) or `d(p, q) < ε`.
fn closeness(cg: &ChainGraph, epsilon: f64, rules: PseudoRules) -> Vec<FixedBitSet> {
    let space = cg.system().space();
    let n = space.point_count();
    (0..n)
        .map(|p| {
            let mut s = FixedBitSet::with_capacity(n);
            s.extend((0..n).filter(|&q| {
                let d = space.dist_idx(p, q);
                if rules.strict {
                    d <= epsilon
                } else {
                    d < epsilon
                }
            }));
            s
        })
        .collect()
}

fn sequences_close(a: &[u32], b: &[u32], close: &[FixedBitSet]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| close[x as usize].contains(y as usize))
}

/// Pseudo-orbit counting problem shared by the separated and spanning variants.
enum PseudoCase {
    /// All distinct sequences are pairwise separated; the count is known.
    AllSeparated(u128),
    /// Every pair of sequences is close.
    AllClose,
    Materialized(ChainPrefixes, Vec<FixedBitSet>),
}

fn pseudo_case(cg: &ChainGraph, w: &Word, epsilon: f64, rules: PseudoRules, budget: &Budget) -> Result<PseudoCase> {
    if !(epsilon > 0.0) {
        return invalid("epsilon must be positive");
    }
    if let Some(bad) = w.letters().iter().find(|&&l| l as usize >= cg.m()) {
        return invalid(format!("letter {bad} outside alphabet of size {}", cg.m()));
    }
    let space = cg.system().space();
    let u = compared_word(w, rules);
    let all_separated = match space.min_positive_distance() {
        None => true,
        Some(min) => (rules.strict && epsilon < min) || (!rules.strict && epsilon <= min),
    };
    if all_separated {
        let total: BigUint = chains_from_each_point(cg, &u).into_iter().sum();
        return Ok(PseudoCase::AllSeparated(total.to_u128().unwrap_or(u128::MAX)));
    }
    let diam = space.diameter();
    if (rules.strict && epsilon >= diam) || (!rules.strict && epsilon > diam) {
        return Ok(PseudoCase::AllClose);
    }
    let seqs = enumerate_chains(cg, &u, budget)?;
    let close = closeness(cg, epsilon, rules);
    Ok(PseudoCase::Materialized(seqs, close))
}

fn conflict_graph(seqs: &ChainPrefixes, close: &[FixedBitSet]) -> BitGraph {
    let n = seqs.len();
    let mut g = BitGraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if sequences_close(seqs.get(i), seqs.get(j), close) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Greedy maximal pairwise-separated subfamily, sequences taken in lexicographic order.
fn greedy_separated(seqs: &ChainPrefixes, close: &[FixedBitSet]) -> usize {
    let lists: Vec<Vec<u32>> = close.iter().map(|s| s.ones().map(|q| q as u32).collect()).collect();
    let mut kept: HashSet<&[u32]> = HashSet::new();
    let mut kept_order: Vec<&[u32]> = Vec::new();
    let mut probe = vec![0u32; seqs.stride];
    for i in 0..seqs.len() {
        let s = seqs.get(i);
        let neighbourhood: f64 = s.iter().map(|&p| lists[p as usize].len() as f64).product();
        let conflicted = if neighbourhood <= kept_order.len() as f64 {
            any_close_member(s, 0, &lists, &mut probe, &kept)
        } else {
            kept_order.iter().any(|k| sequences_close(k, s, close))
        };
        if !conflicted {
            kept.insert(s);
            kept_order.push(s);
        }
    }
    kept_order.len()
}

fn any_close_member(s: &[u32], j: usize, lists: &[Vec<u32>], probe: &mut [u32], kept: &HashSet<&[u32]>) -> bool {
    if j == s.len() {
        return kept.contains(&probe[..]);
    }
    for &q in &lists[s[j] as usize] {
        probe[j] = q;
        if any_close_member(s, j + 1, lists, probe, kept) {
            return true;
        }
    }
    false
}

/// `N*(w, ε, δ, G)` on the chain graph at δ.
pub fn pseudo_separated_count(cg: &ChainGraph, w: &Word, epsilon: f64) -> Result<Count> {
    pseudo_separated_count_with(cg, w, epsilon, PseudoRules::default(), &Budget::default())
}

pub fn pseudo_separated_count_with(
    cg: &ChainGraph,
    w: &Word,
    epsilon: f64,
    rules: PseudoRules,
    budget: &Budget,
) -> Result<Count> {
    Ok(match pseudo_case(cg, w, epsilon, rules, budget)? {
        PseudoCase::AllSeparated(v) => Count { value: v, exact: true },
        PseudoCase::AllClose => Count { value: 1, exact: true },
        PseudoCase::Materialized(seqs, close) => {
            let exact = (seqs.len() <= EXACT_CHAIN_LIMIT)
                .then(|| conflict_graph(&seqs, &close).max_independent_set(budget.search))
                .flatten();
            match exact {
                Some(v) => Count { value: v as u128, exact: true },
                None => Count {
                    value: greedy_separated(&seqs, &close) as u128,
                    exact: false,
                },
            }
        }
    })
}

/// `B*(w, ε, δ, G)` on the chain graph at δ.
pub fn pseudo_spanning_count(cg: &ChainGraph, w: &Word, epsilon: f64) -> Result<Count> {
    pseudo_spanning_count_with(cg, w, epsilon, PseudoRules::default(), &Budget::default())
}

pub fn pseudo_spanning_count_with(
    cg: &ChainGraph,
    w: &Word,
    epsilon: f64,
    rules: PseudoRules,
    budget: &Budget,
) -> Result<Count> {
    Ok(match pseudo_case(cg, w, epsilon, rules, budget)? {
        PseudoCase::AllSeparated(v) => Count { value: v, exact: true },
        PseudoCase::AllClose => Count { value: 1, exact: true },
        PseudoCase::Materialized(seqs, close) => {
            let exact = (seqs.len() <= EXACT_CHAIN_LIMIT)
                .then(|| conflict_graph(&seqs, &close).min_dominating_set(budget.search))
                .flatten();
            match exact {
                Some(v) => Count { value: v as u128, exact: true },
                // a maximal separated family covers everything
                None => Count {
                    value: greedy_separated(&seqs, &close) as u128,
                    exact: false,
                },
            }
        }
    })
}

/// The words averaged at length `n`: all of them (`word_sample == 0`) or a
/// seeded uniform sample.
pub fn words_for_length(m: usize, n: usize, word_sample: usize, seed: u64, budget: &Budget) -> Result<Vec<Word>> {
    if word_sample == 0 {
        let count = checked_pow(m, n);
        if count > budget.words as u128 {
            return Err(Error::Resource(format!(
                "{count} words of length {n} exceed the word budget of {}",
                budget.words
            )));
        }
        return Ok(Word::all(n, m).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    Ok((0..word_sample)
        .map(|_| {
            let letters = (0..n).map(|_| rng.random_range(0..m as u32)).collect();
            Word::new(letters, m).expect("letters in range")
        })
        .collect())
}

/// Exhaustive when `m^n` fits the word budget, otherwise [`DEFAULT_WORD_SAMPLE`] words.
pub fn auto_word_sample(m: usize, n_max: usize, budget: &Budget) -> usize {
    if checked_pow(m, n_max) <= budget.words as u128 {
        0
    } else {
        DEFAULT_WORD_SAMPLE
    }
}

/// Least-squares slope of the curve over its upper half (at least two points).
pub fn growth_slope(curve: &[(usize, f64)]) -> f64 {
    match curve.len() {
        0 => f64::NAN,
        1 => curve[0].1 / curve[0].0.max(1) as f64,
        len => {
            let keep = (len.div_ceil(2)).max(2);
            let pts = &curve[len - keep..];
            let k = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0 as f64).sum::<f64>() / k;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
            let sxy: f64 = pts.iter().map(|p| (p.0 as f64 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
            sxy / sxx
        }
    }
}

fn check_range(n_range: &RangeInclusive<usize>) -> Result<()> {
    if n_range.is_empty() || *n_range.start() == 0 {
        return invalid("n range must be a nonempty range of positive lengths");
    }
    Ok(())
}

/// Bufetov entropy estimate from word-averaged orbit separated counts.
pub fn bufetov_entropy(
    g: &GeneratorSystem,
    epsilon: f64,
    n_range: RangeInclusive<usize>,
    word_sample: usize,
    seed: u64,
    budget: &Budget,
) -> Result<EntropyEstimate> {
    check_range(&n_range)?;
    let mut curve = Vec::new();
    let mut exact = true;
    for n in n_range.clone() {
        let words = words_for_length(g.m(), n, word_sample, seed, budget)?;
        let mut sum = 0.0;
        for w in &words {
            let c = orbit_separated_count(g, w, epsilon)?;
            exact &= c.exact;
            sum += c.value as f64;
        }
        curve.push((n, (sum / words.len() as f64).ln()));
    }
    Ok(EntropyEstimate {
        value: growth_slope(&curve),
        method: EntropyMethod::OrbitSeparated,
        epsilon,
        delta: 0.0,
        n_range: (*n_range.start(), *n_range.end()),
        word_sample,
        raw_curve: curve,
        exact,
    })
}

/// Word-averaged pseudo-orbit count estimate at one `(ε, δ)`.
#[allow(clippy::too_many_arguments)]
pub fn pseudo_entropy_at(
    cg: &ChainGraph,
    epsilon: f64,
    n_range: RangeInclusive<usize>,
    word_sample: usize,
    seed: u64,
    method: EntropyMethod,
    rules: PseudoRules,
    budget: &Budget,
) -> Result<EntropyEstimate> {
    check_range(&n_range)?;
    let mut curve = Vec::new();
    let mut exact = true;
    for n in n_range.clone() {
        let words = words_for_length(cg.m(), n, word_sample, seed, budget)?;
        let mut sum = 0.0;
        for w in &words {
            let c = match method {
                EntropyMethod::PseudoSpanning => pseudo_spanning_count_with(cg, w, epsilon, rules, budget)?,
                EntropyMethod::PseudoSeparated => pseudo_separated_count_with(cg, w, epsilon, rules, budget)?,
                other => return invalid(format!("{other:?} is not a pseudo-orbit method")),
            };
            exact &= c.exact;
            sum += c.value as f64;
        }
        curve.push((n, (sum / words.len() as f64).ln()));
    }
    Ok(EntropyEstimate {
        value: growth_slope(&curve),
        method,
        epsilon,
        delta: cg.delta(),
        n_range: (*n_range.start(), *n_range.end()),
        word_sample,
        raw_curve: curve,
        exact,
    })
}

/// Pseudo-entropy estimates over an `(ε, δ)` grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoEntropyMatrix {
    pub epsilons: Vec<f64>,
    pub deltas: Vec<f64>,
    /// `entries[d][e]` is the estimate at `deltas[d]`, `epsilons[e]`.
    pub entries: Vec<Vec<EntropyEstimate>>,
    /// Estimate at the smallest ε taken at the smallest δ.
    pub corner: f64,
    pub rules: PseudoRules,
}

/// Pseudo-entropy `h*(ε, δ, G)` estimates from pseudo-separated counts over both ladders.
#[allow(clippy::too_many_arguments)]
pub fn pseudo_entropy(
    g: &GeneratorSystem,
    eps_ladder: &ScaleLadder,
    delta_ladder: &ScaleLadder,
    n_range: RangeInclusive<usize>,
    word_sample: usize,
    seed: u64,
    rules: PseudoRules,
    budget: &Budget,
) -> Result<PseudoEntropyMatrix> {
    let mut entries = Vec::with_capacity(delta_ladder.len());
    for &delta in delta_ladder.values() {
        let cg = build_chain_graph(g, delta)?;
        let row = eps_ladder
            .values()
            .iter()
            .map(|&eps| {
                pseudo_entropy_at(
                    &cg,
                    eps,
                    n_range.clone(),
                    word_sample,
                    seed,
                    EntropyMethod::PseudoSeparated,
                    rules,
                    budget,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        entries.push(row);
    }
    let corner = entries
        .last()
        .and_then(|row| row.last())
        .map(|e| e.value)
        .expect("nonempty ladders");
    Ok(PseudoEntropyMatrix {
        epsilons: eps_ladder.values().to_vec(),
        deltas: delta_ladder.values().to_vec(),
        entries,
        corner,
        rules,
    })
}

/// Growth rate of total chain counts, with convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRate {
    /// `lim (1/n) log[(1/m^n) Σ_{|w|=n} |E(w, δ)|]`, i.e. `log λ(Σ A_i) - log m`.
    pub rate: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Lag used for count ratios (the lcm of cyclic-class periods).
    pub lag: usize,
}

/// Iteration cap of [`spectral_growth`].
pub const SPECTRAL_MAX_ITER: usize = 4000;
/// Relative tolerance on successive count-ratio estimates.
pub const SPECTRAL_REL_TOL: f64 = 1e-9;

pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// The exact growth oracle: big-integer counts `c_n = 1ᵀ (Σ A_i)^n 1`, with
/// `log(c_n / c_{n-L}) / L` iterated until successive values agree to a relative
/// `1e-9`, minus `log m`. `L` is the lcm of the periods of the nontrivial
/// strongly connected components, so periodic graphs converge too.
pub fn spectral_growth(cg: &ChainGraph) -> GrowthRate {
    let n = cg.point_count();
    let log_m = (cg.m() as f64).ln();
    if n == 0 {
        return GrowthRate {
            rate: f64::NEG_INFINITY,
            iterations: 0,
            converged: true,
            lag: 1,
        };
    }
    let lag = component_period_lcm(cg.union_graph(), 64);
    let mut v = vec![BigUint::from(1u32); n];
    let mut logs = vec![ln_big(&BigUint::from(n))];
    let mut prev: Option<f64> = None;
    for it in 1..=SPECTRAL_MAX_ITER {
        v = sum_matrix_step(cg, &v);
        let c: BigUint = v.iter().sum();
        if c.is_zero() {
            return GrowthRate {
                rate: f64::NEG_INFINITY,
                iterations: it,
                converged: true,
                lag,
            };
        }
        logs.push(ln_big(&c));
        if it < lag {
            continue;
        }
        let est = (logs[it] - logs[it - lag]) / lag as f64;
        if let Some(p) = prev {
            if (est - p).abs() <= SPECTRAL_REL_TOL * est.abs().max(1e-3) {
                return GrowthRate {
                    rate: est - log_m,
                    iterations: it,
                    converged: true,
                    lag,
                };
            }
        }
        prev = Some(est);
    }
    GrowthRate {
        rate: prev.expect("at least one estimate") - log_m,
        iterations: SPECTRAL_MAX_ITER,
        converged: false,
        lag,
    }
}

/// [`spectral_growth`] rate only; `-inf` for an empty relation.
pub fn spectral_growth_rate(cg: &ChainGraph) -> f64 {
    spectral_growth(cg).rate
}

/// lcm of the periods of nontrivial strongly connected components, or 1 if it exceeds `cap`.
fn component_period_lcm(g: &crate::graph::Digraph, cap: usize) -> usize {
    let comps = g.strongly_connected_components();
    let mut lcm = 1usize;
    for members in comps {
        let sub = g.induced(&members);
        if sub.edges().next().is_none() {
            continue;
        }
        if let Some(p) = sub.period_from(0) {
            lcm = num_integer::lcm(lcm, p.max(1));
            if lcm > cap {
                return 1;
            }
        }
    }
    lcm
}

/// Outcome of the skew-product entropy identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkewIdentityReport {
    pub delta: f64,
    pub depth: usize,
    pub m: usize,
    /// Growth rate of the skew product's δ-chains (a single map, no `log m` shift).
    pub h_skew: f64,
    /// Word-averaged growth rate of the action's δ-chains.
    pub h_action: f64,
    pub log_m: f64,
    /// `|h_skew - (log m + h_action)|`.
    pub discrepancy: f64,
    pub converged: bool,
    pub skew_points: usize,
}

/// Builds the skew product at depth `ceil(log_m(1/δ))` and compares chain growth rates.
pub fn verify_skew_identity(g: &GeneratorSystem, delta: f64, budget: &Budget) -> Result<SkewIdentityReport> {
    let m = g.m();
    let depth = skew_depth_for(m, delta);
    let f = skew_product(g, depth, budget)?;
    let cg_f = build_chain_graph(&f, delta)?;
    let cg_g = build_chain_graph(g, delta)?;
    let gf = spectral_growth(&cg_f);
    let gg = spectral_growth(&cg_g);
    // The branch maps of the realization partition the skew product's δ-relation,
    // so its single-map growth is the branch-summed rate without the log m shift.
    let h_skew = gf.rate + (f.m() as f64).ln();
    let log_m = (m as f64).ln();
    Ok(SkewIdentityReport {
        delta,
        depth,
        m,
        h_skew,
        h_action: gg.rate,
        log_m,
        discrepancy: (h_skew - (log_m + gg.rate)).abs(),
        converged: gf.converged && gg.converged,
        skew_points: f.point_count(),
    })
}
