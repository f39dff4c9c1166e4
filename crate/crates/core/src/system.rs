//! Free semigroup actions as quantized point maps.
//!
//! A [`GeneratorSystem`] holds `m` total maps on a finite space. Words act
//! with the rightmost letter first: for `w = i_0 i_1 ... i_{k-1}`,
//! `f_w = f_{i_0} ∘ f_{i_1} ∘ ... ∘ f_{i_{k-1}}`. Everything word-indexed in
//! this crate (power systems, Bowen metrics, chains) is defined relative to
//! that single convention.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::{checked_pow, Budget};
use crate::error::{invalid, Error, Result};
use crate::space::{build_product_within, build_shift_space, FiniteMetricSpace, PointId};

/// A finite word over the alphabet `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<u32>);

impl Word {
    /// Validates every letter against the alphabet size.
    pub fn new(letters: Vec<u32>, m: usize) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|&&l| l as usize >= m) {
            return invalid(format!("letter {bad} outside alphabet of size {m}"));
        }
        Ok(Word(letters))
    }

    /// Parses a digit string such as `"0110"`.
    pub fn parse(s: &str, m: usize) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| c.to_digit(36).ok_or_else(|| Error::InvalidArgument(format!("bad letter {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters, m)
    }

    /// The `index`-th word of length `len` in lexicographic order (first letter most significant).
    pub fn from_index(mut index: u128, len: usize, m: usize) -> Self {
        let mut letters = vec![0u32; len];
        for slot in letters.iter_mut().rev() {
            *slot = (index % m as u128) as u32;
            index /= m as u128;
        }
        Word(letters)
    }

    /// Lexicographic index, inverse of [`Word::from_index`].
    pub fn index(&self, m: usize) -> u128 {
        self.0.iter().fold(0u128, |acc, &l| acc * m as u128 + l as u128)
    }

    /// All words of length `len`, in lexicographic order.
    pub fn all(len: usize, m: usize) -> impl Iterator<Item = Word> {
        let count = checked_pow(m, len);
        (0..count).map(move |i| Word::from_index(i, len, m))
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The reversed word `w̄`.
    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The first `len` letters.
    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.iter().all(|&l| l < 36) {
            for &l in &self.0 {
                write!(f, "{}", std::char::from_digit(l, 36).expect("digit"))?;
            }
            Ok(())
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

/// A labeled pseudo-orbit `(x_0, ..., x_n)` with its word of length `n`.
///
/// Step `j` uses letter `w[j]`: the chain condition is
/// `d(f_{w[j]}(x_j), x_{j+1}) <= delta`. Validity is checked by
/// [`crate::graph::ChainGraph::is_chain`], not stored here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    word: Word,
    points: Vec<PointId>,
}

impl Chain {
    pub fn new(word: Word, points: Vec<PointId>) -> Result<Self> {
        if points.len() != word.len() + 1 {
            return invalid(format!(
                "chain with word of length {} needs {} points, got {}",
                word.len(),
                word.len() + 1,
                points.len()
            ));
        }
        Ok(Chain { word, points })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }
}

/// Continuous maps the configuration language can describe; each is
/// quantized onto a grid by [`quantize_map`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapSpec {
    Identity,
    /// `x ↦ a·x + b mod c` on a circle grid (or on every circle of a union, part-preserving).
    Affine { a: f64, b: f64 },
    /// `x ↦ a·x + b` landing in circle `target[p]` for a point of circle `p` of a union.
    /// An empty `target` on a two-part union means "the other circle".
    CrossAffine {
        a: f64,
        b: f64,
        #[serde(default)]
        target: Vec<usize>,
    },
    /// `s_0 s_1 ... ↦ symbol s_0 s_1 ...` on a truncated shift space.
    Prepend { symbol: usize },
    /// Add one with carry on an odometer digit space.
    AddOne,
    /// Coordinatewise map on a product space.
    Product { first: Box<MapSpec>, second: Box<MapSpec> },
    /// Explicit image table.
    Table { table: Vec<u32> },
}

/// `m` total maps on a finite metric space.
#[derive(Debug, Clone)]
pub struct GeneratorSystem {
    space: FiniteMetricSpace,
    maps: Arc<Vec<Vec<u32>>>,
    quantization_error: f64,
}

impl GeneratorSystem {
    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    /// Number of generators `m`.
    pub fn m(&self) -> usize {
        self.maps.len()
    }

    pub fn point_count(&self) -> usize {
        self.space.point_count()
    }

    pub fn quantization_error(&self) -> f64 {
        self.quantization_error
    }

    /// Image table of generator `i`.
    pub fn table(&self, i: usize) -> &[u32] {
        &self.maps[i]
    }

    pub fn tables(&self) -> &[Vec<u32>] {
        &self.maps
    }

    #[inline]
    pub fn apply(&self, i: usize, x: PointId) -> PointId {
        PointId(self.maps[i][x.index()])
    }

    pub(crate) fn with_error(mut self, quantization_error: f64) -> Self {
        self.quantization_error = quantization_error;
        self
    }
}

/// An exact system from explicit image tables.
pub fn from_map_tables(space: FiniteMetricSpace, tables: Vec<Vec<u32>>) -> Result<GeneratorSystem> {
    if tables.is_empty() {
        return invalid("a generator system needs at least one map");
    }
    let n = space.point_count();
    for (i, t) in tables.iter().enumerate() {
        if t.len() != n {
            return invalid(format!("table {i} has length {}, expected {n}", t.len()));
        }
        if let Some(bad) = t.iter().find(|&&y| y as usize >= n) {
            return invalid(format!("table {i} maps to point {bad}, space has {n} points"));
        }
    }
    Ok(GeneratorSystem {
        space,
        maps: Arc::new(tables),
        quantization_error: 0.0,
    })
}

/// Quantizes each spec and assembles a system; the recorded error is the max over generators.
pub fn from_map_specs(space: FiniteMetricSpace, specs: &[MapSpec]) -> Result<GeneratorSystem> {
    let mut tables = Vec::with_capacity(specs.len());
    let mut err: f64 = 0.0;
    for spec in specs {
        let (t, e) = quantize_map(&space, spec)?;
        tables.push(t);
        err = err.max(e);
    }
    Ok(from_map_tables(space, tables)?.with_error(err))
}

/// Snaps each grid point's true image to the nearest grid point (ties to the
/// lower index). Returns the table and the largest snap distance.
pub fn quantize_map(space: &FiniteMetricSpace, map: &MapSpec) -> Result<(Vec<u32>, f64)> {
    let n = space.point_count();
    match map {
        MapSpec::Identity => Ok(((0..n as u32).collect(), 0.0)),
        MapSpec::Table { table } => {
            if table.len() != n || table.iter().any(|&y| y as usize >= n) {
                return invalid(format!("explicit table must have {n} in-range entries"));
            }
            Ok((table.clone(), 0.0))
        }
        MapSpec::Affine { a, b } => {
            if let Some((cn, c)) = space.circle_params() {
                let mut table = Vec::with_capacity(n);
                let mut err: f64 = 0.0;
                for k in 0..cn {
                    let (y, e) = snap_on_circle(cn, c, affine_image(k, cn, c, *a, *b, c));
                    table.push(y as u32);
                    err = err.max(e);
                }
                return Ok((table, err));
            }
            if let Some((parts, _)) = space.union_parts() {
                let targets: Vec<usize> = (0..parts.len()).collect();
                return cross_affine(space, *a, *b, &targets);
            }
            Err(Error::UnsupportedMap("affine maps need a circle grid or a union of circles".into()))
        }
        MapSpec::CrossAffine { a, b, target } => {
            let Some((parts, _)) = space.union_parts() else {
                return Err(Error::UnsupportedMap("cross-part maps need a disjoint union".into()));
            };
            let targets = if target.is_empty() {
                if parts.len() != 2 {
                    return invalid("an implicit cross target needs exactly two parts");
                }
                vec![1, 0]
            } else {
                target.clone()
            };
            if targets.len() != parts.len() || targets.iter().any(|&t| t >= parts.len()) {
                return invalid("cross target must list one valid part per part");
            }
            cross_affine(space, *a, *b, &targets)
        }
        MapSpec::Prepend { symbol } => {
            let Some((m, depth)) = space.shift_params() else {
                return Err(Error::UnsupportedMap("prepend maps need a shift space".into()));
            };
            if *symbol >= m {
                return invalid(format!("symbol {symbol} outside alphabet of size {m}"));
            }
            let lead = checked_pow(m, depth - 1) as usize;
            let table = (0..n).map(|i| (symbol * lead + i / m) as u32).collect();
            Ok((table, 0.0))
        }
        MapSpec::AddOne => {
            if space.odometer_digits().is_none() {
                return Err(Error::UnsupportedMap("add-one maps need an odometer space".into()));
            }
            Ok(((0..n).map(|i| ((i + 1) % n) as u32).collect(), 0.0))
        }
        MapSpec::Product { first, second } => {
            let Some((a, b)) = space.product_factors() else {
                return Err(Error::UnsupportedMap("coordinatewise maps need a product space".into()));
            };
            let (ta, ea) = quantize_map(a, first)?;
            let (tb, eb) = quantize_map(b, second)?;
            let nb = b.point_count();
            let table = (0..n)
                .map(|i| ta[i / nb] * nb as u32 + tb[i % nb])
                .collect();
            Ok((table, ea.max(eb)))
        }
    }
}

fn affine_image(k: usize, n: usize, c_src: f64, a: f64, b: f64, c_dst: f64) -> f64 {
    let x = k as f64 * c_src / n as f64;
    (a * x + b).rem_euclid(c_dst)
}

/// Nearest grid index to arc position `y`, ties to the lower index.
fn snap_on_circle(n: usize, c: f64, y: f64) -> (usize, f64) {
    let h = c / n as f64;
    let lo = ((y / h).floor() as usize) % n;
    let hi = (lo + 1) % n;
    let arc = |k: usize| {
        let d = (y - k as f64 * h).abs();
        d.min(c - d)
    };
    let (dl, dh) = (arc(lo), arc(hi));
    let tie = 1e-12 * c;
    if (dl - dh).abs() <= tie {
        let k = lo.min(hi);
        (k, arc(k))
    } else if dl < dh {
        (lo, dl)
    } else {
        (hi, dh)
    }
}

fn cross_affine(space: &FiniteMetricSpace, a: f64, b: f64, targets: &[usize]) -> Result<(Vec<u32>, f64)> {
    let (parts, offsets) = space.union_parts().expect("union");
    let mut circles = Vec::with_capacity(parts.len());
    for p in parts {
        match p.circle_params() {
            Some(c) => circles.push(c),
            None => return Err(Error::UnsupportedMap("cross-part affine maps need circle parts".into())),
        }
    }
    let mut table = Vec::with_capacity(space.point_count());
    let mut err: f64 = 0.0;
    for (p, &(n_src, c_src)) in circles.iter().enumerate() {
        let q = targets[p];
        let (n_dst, c_dst) = circles[q];
        for k in 0..n_src {
            let (y, e) = snap_on_circle(n_dst, c_dst, affine_image(k, n_src, c_src, a, b, c_dst));
            table.push((offsets[q] + y) as u32);
            err = err.max(e);
        }
    }
    Ok((table, err))
}

/// `f_w(x)` with the rightmost letter acting first.
pub fn apply_word(g: &GeneratorSystem, w: &Word, x: PointId) -> Result<PointId> {
    if w.is_empty() {
        return invalid("apply_word needs a nonempty word");
    }
    Ok(w.letters().iter().rev().fold(x, |p, &l| g.apply(l as usize, p)))
}

/// Trajectory `x, f_{i_0}(x), f_{i_1} f_{i_0}(x), ...` of the suffix maps of `w̄`
/// (letter `i_0` first); entry `j` is the image under the length-`j` suffix.
pub fn suffix_trajectory(g: &GeneratorSystem, w: &Word, x: PointId) -> Vec<PointId> {
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut p = x;
    out.push(p);
    for &l in w.letters() {
        p = g.apply(l as usize, p);
        out.push(p);
    }
    out
}

/// Bowen-type metric `d_w(x, y) = max_{w' <= w̄} d(f_{w'}(x), f_{w'}(y))`,
/// the maximum including the empty suffix (identity).
pub fn word_metric_dw(g: &GeneratorSystem, w: &Word, x: PointId, y: PointId) -> f64 {
    let tx = suffix_trajectory(g, w, x);
    let ty = suffix_trajectory(g, w, y);
    tx.iter()
        .zip(&ty)
        .map(|(&a, &b)| g.space().dist(a, b))
        .fold(0.0, f64::max)
}

/// `G^k`: one generator per length-`k` word, in lexicographic word order, each
/// generator's table being `f_w`.
pub fn power_system(g: &GeneratorSystem, k: usize, budget: &Budget) -> Result<GeneratorSystem> {
    if k == 0 {
        return invalid("power must be positive");
    }
    let m = g.m();
    budget.check_generators(checked_pow(m, k), "power system")?;
    let mut tables: Vec<Vec<u32>> = g.tables().to_vec();
    for _ in 1..k {
        // words of length L+1: u = i_0 * m^L + rest, f_u = f_{i_0} ∘ f_rest
        let mut next = Vec::with_capacity(tables.len() * m);
        for lead in g.tables() {
            for rest in &tables {
                next.push(rest.iter().map(|&x| lead[x as usize]).collect());
            }
        }
        tables = next;
    }
    Ok(from_map_tables(g.space().clone(), tables)?.with_error(g.quantization_error()))
}

/// `G × H` on the max-metric product; generator `j * n + k` is `f_j × g_k`.
pub fn product_system(g: &GeneratorSystem, h: &GeneratorSystem, budget: &Budget) -> Result<GeneratorSystem> {
    budget.check_generators(g.m() as u128 * h.m() as u128, "product system")?;
    let space = build_product_within(g.space(), h.space(), budget)?;
    let nb = h.point_count() as u32;
    let mut tables = Vec::with_capacity(g.m() * h.m());
    for f in g.tables() {
        for k in h.tables() {
            let mut t = Vec::with_capacity(space.point_count());
            for &fx in f.iter() {
                for &ky in k.iter() {
                    t.push(fx * nb + ky);
                }
            }
            tables.push(t);
        }
    }
    let err = g.quantization_error().max(h.quantization_error());
    Ok(from_map_tables(space, tables)?.with_error(err))
}

/// Finite realization of the skew product `(ω, x) ↦ (σ(ω), f_{ω_0}(x))` on
/// `Σ_m(depth) × X`.
///
/// Truncation erases the symbol that the shift would reveal, so the skew
/// product is realized as `m` branch maps: branch `s` sends `(w, x)` to
/// `(σ(w)·s, f_{w_0}(x))`. When `depth >= ceil(log_m(1/δ))` the branches have
/// pairwise distinct symbolic images at scale δ, and the union of their
/// δ-relations is the δ-chain relation of the skew product.
///
/// With `m = 1` the symbolic factor is a single point and the result is `G`
/// on `{*} × X`.
pub fn skew_product(g: &GeneratorSystem, depth: usize, budget: &Budget) -> Result<GeneratorSystem> {
    let m = g.m();
    let nx = g.point_count();
    if m == 1 {
        let space = build_product_within(&FiniteMetricSpace::point(), g.space(), budget)?;
        return Ok(from_map_tables(space, g.tables().to_vec())?.with_error(g.quantization_error()));
    }
    let shift = build_shift_space(m, depth, budget)?;
    let space = build_product_within(&shift, g.space(), budget)?;
    let words = shift.point_count();
    let lead = words / m;
    let mut tables = Vec::with_capacity(m);
    for s in 0..m {
        let mut t = Vec::with_capacity(words * nx);
        for w in 0..words {
            let w0 = w / lead;
            let shifted = (w % lead) * m + s;
            let f = g.table(w0);
            for &fx in f.iter() {
                t.push((shifted * nx) as u32 + fx);
            }
        }
        tables.push(t);
    }
    Ok(from_map_tables(space, tables)?.with_error(g.quantization_error()))
}

/// Smallest `depth` with `m^-depth <= delta`, i.e. `ceil(log_m(1/δ))`, at least 1.
pub fn skew_depth_for(m: usize, delta: f64) -> usize {
    if m < 2 || delta >= 1.0 {
        return 1;
    }
    let mut depth = 1;
    let mut scale = 1.0 / m as f64;
    while scale > delta {
        depth += 1;
        scale /= m as f64;
    }
    depth
}
