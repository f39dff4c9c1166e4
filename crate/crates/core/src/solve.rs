//! Exact combinatorial optimizers behind the covering and separated-set counts.
//!
//! Two regimes: bitmask brute force for at most 32 elements, and
//! branch-and-bound over bitset graphs for the pseudo-orbit problems (a few
//! thousand vertices). The branch-and-bound solvers take a work limit and
//! return `None` when it is hit, so callers can fall back to a flagged
//! heuristic instead of hanging. A search node over `c` candidates of an
//! `n`-vertex graph is charged `(c + 1) * (n / 64 + 1)`, roughly the bitset
//! word operations one pass over its candidates costs.

use fixedbitset::FixedBitSet;

/// Fewest members of `family` (bitmasks over `n <= 24` elements) whose union is everything.
///
/// Panics if the family does not cover every element.
pub(crate) fn min_union_cover_small(family: &[u32], n: usize) -> usize {
    assert!(n <= 24, "bitmask cover limited to 24 elements");
    if n == 0 {
        return 0;
    }
    let full = (1u32 << n) - 1;
    assert_eq!(
        family.iter().fold(0, |a, f| a | f) & full,
        full,
        "family does not cover"
    );
    let mut sets: Vec<u32> = family.iter().map(|f| f & full).collect();
    sets.sort_unstable();
    sets.dedup();
    let mut seen = vec![false; 1 << n];
    seen[0] = true;
    let mut frontier = vec![0u32];
    let mut k = 0;
    loop {
        k += 1;
        let mut next = Vec::new();
        for &r in &frontier {
            for &s in &sets {
                let u = r | s;
                if u == full {
                    return k;
                }
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
}

/// Largest set of pairwise non-conflicting elements; `conflict[i]` is a bitmask
/// of the elements conflicting with `i` (self bit ignored).
pub(crate) fn max_independent_small(conflict: &[u32]) -> usize {
    fn go(mask: u32, conflict: &[u32]) -> usize {
        if mask == 0 {
            return 0;
        }
        let v = mask.trailing_zeros() as usize;
        let bit = 1u32 << v;
        let nbrs = conflict[v] & !bit;
        if mask & nbrs == 0 {
            return 1 + go(mask & !bit, conflict);
        }
        let take = 1 + go(mask & !bit & !nbrs, conflict);
        let skip = go(mask & !bit, conflict);
        take.max(skip)
    }
    let n = conflict.len();
    assert!(n <= 32);
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    go(all, conflict)
}

/// Symmetric, loop-free adjacency on bitsets.
#[derive(Debug, Clone)]
pub struct BitGraph {
    adj: Vec<FixedBitSet>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        BitGraph {
            adj: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    fn full(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        s.insert_range(..);
        s
    }

    fn components(&self, within: &FixedBitSet) -> Vec<FixedBitSet> {
        let mut left = within.clone();
        let mut out = Vec::new();
        while let Some(start) = left.ones().next() {
            let mut comp = FixedBitSet::with_capacity(self.len());
            let mut stack = vec![start];
            comp.insert(start);
            left.set(start, false);
            while let Some(u) = stack.pop() {
                let mut fresh = self.adj[u].clone();
                fresh.intersect_with(&left);
                for v in fresh.ones() {
                    comp.insert(v);
                    stack.push(v);
                }
                left.difference_with(&fresh);
            }
            out.push(comp);
        }
        out
    }

    /// Greedy maximal independent set taking vertices in index order.
    pub fn greedy_independent(&self) -> usize {
        self.greedy_independent_in(&self.full())
    }

    fn greedy_independent_in(&self, within: &FixedBitSet) -> usize {
        let mut blocked = within.clone();
        blocked.toggle_range(..);
        let mut count = 0;
        for v in within.ones() {
            if !blocked.contains(v) {
                count += 1;
                blocked.insert(v);
                blocked.union_with(&self.adj[v]);
            }
        }
        count
    }

    /// Maximum independent set size, or `None` if `work_limit` is exhausted.
    pub fn max_independent_set(&self, work_limit: u64) -> Option<usize> {
        let mut work = 0;
        self.mis_within(&self.full(), &mut work, work_limit)
    }

    fn mis_within(&self, within: &FixedBitSet, work: &mut u64, limit: u64) -> Option<usize> {
        let mut search = Search {
            g: self,
            work: *work,
            limit,
        };
        let mut total = 0;
        let result = self.components(within).into_iter().try_for_each(|comp| {
            let mut best = self.greedy_independent_in(&comp);
            search.mis(comp, 0, &mut best)?;
            total += best;
            Some(())
        });
        *work = search.work;
        result.map(|()| total)
    }

    /// Minimum dominating set size (closed neighbourhoods), or `None` if `work_limit` is exhausted.
    pub fn min_dominating_set(&self, work_limit: u64) -> Option<usize> {
        let closed: Vec<FixedBitSet> = (0..self.len())
            .map(|v| {
                let mut s = self.adj[v].clone();
                s.insert(v);
                s
            })
            .collect();
        let mut work = 0;
        let mut total = 0;
        for comp in self.components(&self.full()) {
            let mut best = greedy_dominating(&closed, &comp);
            // Vertices with disjoint closed neighbourhoods need distinct
            // dominators, so a maximum packing bounds the optimum from below.
            // It is worth half the remaining allowance; failing it only loses the bound.
            let square = self.closed_square(&closed, &comp);
            let share = work + (work_limit - work.min(work_limit)) / 2;
            let mut packing_work = work;
            let packing = square.mis_within(&comp, &mut packing_work, share).unwrap_or(0);
            work = packing_work.min(share);
            if packing < best {
                let mut search = Search {
                    g: self,
                    work,
                    limit: work_limit,
                };
                search.dominate(&closed, comp.clone(), comp, packing, 0, &mut best)?;
                work = search.work;
            }
            total += best;
        }
        Some(total)
    }

    /// Graph joining distinct vertices of `comp` whose closed neighbourhoods meet.
    fn closed_square(&self, closed: &[FixedBitSet], comp: &FixedBitSet) -> BitGraph {
        let mut sq = BitGraph::new(self.len());
        for u in comp.ones() {
            let mut reach = FixedBitSet::with_capacity(self.len());
            for v in closed[u].ones() {
                reach.union_with(&closed[v]);
            }
            reach.intersect_with(comp);
            reach.set(u, false);
            sq.adj[u] = reach;
        }
        sq
    }
}

fn greedy_dominating(closed: &[FixedBitSet], comp: &FixedBitSet) -> usize {
    let mut undominated = comp.clone();
    let mut count = 0;
    while undominated.count_ones(..) > 0 {
        let best = comp
            .ones()
            .max_by_key(|&v| (closed[v].intersection_count(&undominated), std::cmp::Reverse(v)))
            .expect("nonempty component");
        undominated.difference_with(&closed[best]);
        count += 1;
    }
    count
}

struct Search<'a> {
    g: &'a BitGraph,
    work: u64,
    limit: u64,
}

impl Search<'_> {
    fn tick(&mut self, candidates: usize) -> Option<()> {
        let words = (self.g.len() / 64 + 1) as u64;
        self.work += (candidates as u64 + 1) * words;
        (self.work <= self.limit).then_some(())
    }

    fn mis(&mut self, mut cand: FixedBitSet, mut size: usize, best: &mut usize) -> Option<()> {
        // Isolated vertices belong to some optimum. A neighbour w with
        // N[v] inside N[w] can be swapped for v in any optimum, so drop it.
        loop {
            self.tick(cand.count_ones(..))?;
            let mut changed = false;
            let snapshot: Vec<usize> = cand.ones().collect();
            for v in snapshot {
                if !cand.contains(v) {
                    continue;
                }
                let mut nv = self.g.adj[v].clone();
                nv.intersect_with(&cand);
                let nbrs: Vec<usize> = nv.ones().collect();
                if nbrs.is_empty() {
                    size += 1;
                    cand.set(v, false);
                    changed = true;
                    continue;
                }
                self.tick(nbrs.len())?;
                for w in nbrs {
                    if nv.difference(&self.g.adj[w]).all(|x| x == w) {
                        cand.set(w, false);
                        nv.set(w, false);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if cand.count_ones(..) == 0 {
            *best = (*best).max(size);
            return Some(());
        }
        let comps = self.g.components(&cand);
        if comps.len() > 1 {
            let mut sum = size;
            for c in comps {
                let mut sub = self.g.greedy_independent_in(&c);
                self.mis(c, 0, &mut sub)?;
                sum += sub;
            }
            *best = (*best).max(sum);
            return Some(());
        }
        // Partition the candidates into cliques. Everything up to clique c
        // holds at most c independent vertices, so scanning from the last
        // clique down, a vertex whose clique index cannot beat the incumbent
        // ends the node.
        let (order, class) = self.clique_partition(&cand);
        for (&v, &c) in order.iter().zip(&class).rev() {
            if size + c <= *best {
                return Some(());
            }
            let mut take = cand.clone();
            take.set(v, false);
            take.difference_with(&self.g.adj[v]);
            self.mis(take, size + 1, best)?;
            cand.set(v, false);
        }
        Some(())
    }

    /// Greedy clique partition of `cand`, vertices taken by ascending degree
    /// and placed in the first clique they are adjacent to entirely. Returns
    /// the vertices sorted by clique and the 1-based clique index of each.
    fn clique_partition(&self, cand: &FixedBitSet) -> (Vec<usize>, Vec<usize>) {
        let mut by_degree: Vec<(usize, usize)> =
            cand.ones().map(|v| (self.g.adj[v].intersection_count(cand), v)).collect();
        by_degree.sort_unstable();
        let mut cliques: Vec<(FixedBitSet, Vec<usize>)> = Vec::new();
        for &(_, v) in &by_degree {
            // `common` is the set of vertices adjacent to every member.
            match cliques.iter_mut().find(|(common, _)| common.contains(v)) {
                Some((common, members)) => {
                    common.intersect_with(&self.g.adj[v]);
                    members.push(v);
                }
                None => {
                    let mut common = self.g.adj[v].clone();
                    common.intersect_with(cand);
                    cliques.push((common, vec![v]));
                }
            }
        }
        let mut order = Vec::with_capacity(by_degree.len());
        let mut class = Vec::with_capacity(by_degree.len());
        for (i, (_, members)) in cliques.into_iter().enumerate() {
            class.extend(std::iter::repeat_n(i + 1, members.len()));
            order.extend(members);
        }
        (order, class)
    }

    /// Set-cover search: every vertex of `need` must be dominated by a chosen
    /// member of `allowed`. Vertices an earlier sibling branch already tried
    /// leave `allowed`, which keeps each dominating set to one branch.
    /// `floor` is a proven lower bound; reaching it ends the search.
    fn dominate(
        &mut self,
        closed: &[FixedBitSet],
        mut need: FixedBitSet,
        mut allowed: FixedBitSet,
        floor: usize,
        mut count: usize,
        best: &mut usize,
    ) -> Option<()> {
        self.tick(need.count_ones(..) + allowed.count_ones(..))?;
        if *best <= floor || count >= *best {
            return Some(());
        }
        loop {
            let mut changed = false;
            // A vertex with one allowed dominator forces it; one whose
            // dominators include all of another's is dominated for free.
            let snapshot: Vec<usize> = need.ones().collect();
            for b in snapshot {
                if !need.contains(b) {
                    continue;
                }
                let mut db = closed[b].clone();
                db.intersect_with(&allowed);
                let mut doms = db.ones();
                let Some(d) = doms.next() else {
                    return Some(());
                };
                if doms.next().is_none() {
                    count += 1;
                    if count >= *best {
                        return Some(());
                    }
                    need.difference_with(&closed[d]);
                    allowed.set(d, false);
                    changed = true;
                    continue;
                }
                let mut near = closed[d].clone();
                near.intersect_with(&need);
                self.tick(near.count_ones(..))?;
                for a in near.ones() {
                    if a != b && db.is_subset(&closed[a]) {
                        need.set(a, false);
                        changed = true;
                    }
                }
            }
            // A dominator whose remaining coverage another one contains is never needed.
            let snapshot: Vec<usize> = allowed.ones().collect();
            for v in snapshot {
                let mut sv = closed[v].clone();
                sv.intersect_with(&need);
                let Some(u) = sv.ones().next() else {
                    allowed.set(v, false);
                    changed = true;
                    continue;
                };
                let mut rivals = closed[u].clone();
                rivals.intersect_with(&allowed);
                self.tick(rivals.count_ones(..))?;
                if rivals.ones().any(|w| w != v && sv.is_subset(&closed[w])) {
                    allowed.set(v, false);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if need.count_ones(..) == 0 {
            *best = (*best).min(count);
            return Some(());
        }
        // Each chosen vertex v covers gain(v) needed vertices; charging every
        // needed u 1/c(u), with c(u) the best gain among its allowed
        // dominators, never charges a chosen vertex more than 1.
        let mut gain = vec![0usize; self.g.len()];
        for v in allowed.ones() {
            gain[v] = closed[v].intersection_count(&need);
        }
        let mut fractional = 0.0;
        for u in need.ones() {
            let c = closed[u].intersection(&allowed).map(|v| gain[v]).max().unwrap_or(0);
            fractional += 1.0 / c as f64;
        }
        let needed = (fractional - 1e-9).ceil() as usize;
        if count + needed >= *best {
            return Some(());
        }
        // Needed vertices with pairwise disjoint allowed dominators each need their own.
        let mut order: Vec<(usize, usize)> =
            need.ones().map(|u| (closed[u].intersection_count(&allowed), u)).collect();
        order.sort_unstable();
        let mut used = FixedBitSet::with_capacity(self.g.len());
        let mut packing = 0;
        for &(_, u) in &order {
            if closed[u].intersection(&allowed).all(|v| !used.contains(v)) {
                used.union_with(&closed[u]);
                packing += 1;
            }
        }
        if count + packing >= *best {
            return Some(());
        }
        // Branch on the needed vertex with the fewest allowed dominators.
        let u = order[0].1;
        let mut choices: Vec<usize> = closed[u].intersection(&allowed).collect();
        choices.sort_by_key(|&v| (std::cmp::Reverse(gain[v]), v));
        for v in choices {
            allowed.set(v, false);
            let mut rest = need.clone();
            rest.difference_with(&closed[v]);
            self.dominate(closed, rest, allowed.clone(), floor, count + 1, best)?;
        }
        Some(())
    }
}
