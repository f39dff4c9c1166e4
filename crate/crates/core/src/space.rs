//! Finite metric spaces standing in for a compact phase space.
//!
//! Every space is an indexed point set `0..point_count` with a metric that is
//! either tabulated (hand-built matrices) or evaluated from the geometry
//! (circle grids, disjoint unions, max-metric products, truncated one-sided
//! shift spaces and odometer digit spaces). Structured geometries evaluate
//! distances in O(1) or O(depth), so they never allocate a quadratic table.
//!
//! Covering numbers come in two flavours: covers by sets of diameter at most
//! `delta` ([`covering_number`], used for box dimension) and covers by closed
//! balls of a given radius ([`ball_covering_number`]).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::{checked_pow, Budget};
use crate::error::{invalid, Error, Result};

/// Spaces with at most this many points get exact minimum covers.
pub const EXACT_COVER_LIMIT: usize = 16;

/// Index of a point in a [`FiniteMetricSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointId(pub u32);

impl PointId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for PointId {
    fn from(i: usize) -> Self {
        PointId(i as u32)
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

#[derive(Debug, Clone)]
enum Geometry {
    Circle {
        n: usize,
        circumference: f64,
    },
    Matrix {
        n: usize,
        dist: Vec<f64>,
    },
    Uniform {
        n: usize,
        value: f64,
    },
    Union {
        parts: Vec<FiniteMetricSpace>,
        offsets: Vec<usize>,
        cross: f64,
    },
    Product {
        a: FiniteMetricSpace,
        b: FiniteMetricSpace,
    },
    Shift {
        m: usize,
        depth: usize,
    },
    Odometer {
        digits: Vec<usize>,
        /// `scales[k]` is the distance of two states whose first differing digit is `k`.
        scales: Vec<f64>,
    },
}

/// A finite point set with a (validated or validatable) metric.
///
/// Cloning is cheap: the geometry is shared.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    geometry: Arc<Geometry>,
    point_count: usize,
    diameter: f64,
    min_positive: Option<f64>,
}

impl FiniteMetricSpace {
    fn from_geometry(geometry: Geometry) -> Self {
        let point_count = match &geometry {
            Geometry::Circle { n, .. } | Geometry::Matrix { n, .. } | Geometry::Uniform { n, .. } => *n,
            Geometry::Union { parts, .. } => parts.iter().map(|p| p.point_count).sum(),
            Geometry::Product { a, b } => a.point_count * b.point_count,
            Geometry::Shift { m, depth } => checked_pow(*m, *depth) as usize,
            Geometry::Odometer { digits, .. } => digits.iter().product(),
        };
        let mut space = FiniteMetricSpace {
            geometry: Arc::new(geometry),
            point_count,
            diameter: 0.0,
            min_positive: None,
        };
        let (diameter, min_positive) = space.extremes();
        space.diameter = diameter;
        space.min_positive = min_positive;
        space
    }

    /// Builds a space from an explicit row-major distance table.
    ///
    /// Only shape, finiteness and nonnegativity are checked here; the metric
    /// axioms are left to [`validate_metric`] so that broken inputs can be
    /// inspected rather than rejected outright.
    pub fn from_matrix(n: usize, dist: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return invalid("a metric space needs at least one point");
        }
        if dist.len() != n * n {
            return invalid(format!("distance table has {} entries, expected {}", dist.len(), n * n));
        }
        if let Some(bad) = dist.iter().find(|d| !d.is_finite() || **d < 0.0) {
            return invalid(format!("distance {bad} is not a finite nonnegative real"));
        }
        Ok(Self::from_geometry(Geometry::Matrix { n, dist }))
    }

    /// `n` points, all pairwise at distance `value` (the discrete metric scaled).
    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        if n == 0 {
            return invalid("a metric space needs at least one point");
        }
        if !(value.is_finite() && value > 0.0) {
            return invalid("uniform distance must be positive");
        }
        Ok(Self::from_geometry(Geometry::Uniform { n, value }))
    }

    /// The one-point space.
    pub fn point() -> Self {
        Self::from_geometry(Geometry::Uniform { n: 1, value: 1.0 })
    }

    #[inline]
    pub fn point_count(&self) -> usize {
        self.point_count
    }

    #[inline]
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Smallest positive pairwise distance, `None` for spaces without distinct pairs.
    pub fn min_positive_distance(&self) -> Option<f64> {
        self.min_positive
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.point_count).map(PointId::from)
    }

    pub fn contains(&self, p: PointId) -> bool {
        p.index() < self.point_count
    }

    /// Distance between two points. Panics on out-of-range ids.
    pub fn dist(&self, x: PointId, y: PointId) -> f64 {
        self.dist_idx(x.index(), y.index())
    }

    pub(crate) fn dist_idx(&self, x: usize, y: usize) -> f64 {
        assert!(x < self.point_count && y < self.point_count, "point out of range");
        match &*self.geometry {
            Geometry::Circle { n, circumference } => {
                let diff = x.abs_diff(y);
                let steps = diff.min(n - diff);
                steps as f64 * circumference / *n as f64
            }
            Geometry::Matrix { n, dist } => dist[x * n + y],
            Geometry::Uniform { value, .. } => {
                if x == y {
                    0.0
                } else {
                    *value
                }
            }
            Geometry::Union { parts, offsets, cross } => {
                let (px, lx) = locate(offsets, x);
                let (py, ly) = locate(offsets, y);
                if px == py {
                    parts[px].dist_idx(lx, ly)
                } else {
                    *cross
                }
            }
            Geometry::Product { a, b } => {
                let nb = b.point_count;
                let da = a.dist_idx(x / nb, y / nb);
                let db = b.dist_idx(x % nb, y % nb);
                da.max(db)
            }
            Geometry::Shift { m, depth } => match first_shift_disagreement(*m, *depth, x, y) {
                None => 0.0,
                Some(k) => (*m as f64).powi(-(k as i32)),
            },
            Geometry::Odometer { digits, scales } => {
                let (mut a, mut b) = (x, y);
                for (k, &j) in digits.iter().enumerate() {
                    if a % j != b % j {
                        return scales[k];
                    }
                    a /= j;
                    b /= j;
                }
                0.0
            }
        }
    }

    /// Human-readable descriptor of a point.
    pub fn label(&self, p: PointId) -> String {
        let i = p.index();
        match &*self.geometry {
            Geometry::Circle { n, circumference } => format!("{:.6}", i as f64 * circumference / *n as f64),
            Geometry::Matrix { .. } | Geometry::Uniform { .. } => format!("{i}"),
            Geometry::Union { parts, offsets, .. } => {
                let (part, local) = locate(offsets, i);
                format!("{part}:{}", parts[part].label(PointId::from(local)))
            }
            Geometry::Product { a, b } => {
                let nb = b.point_count;
                format!(
                    "({}, {})",
                    a.label(PointId::from(i / nb)),
                    b.label(PointId::from(i % nb))
                )
            }
            Geometry::Shift { m, depth } => shift_digits(*m, *depth, i)
                .iter()
                .map(|d| std::char::from_digit(*d as u32, 36).unwrap_or('?'))
                .collect(),
            Geometry::Odometer { digits, .. } => {
                let mut a = i;
                let mut out = Vec::with_capacity(digits.len());
                for &j in digits {
                    out.push((a % j).to_string());
                    a /= j;
                }
                format!("({})", out.join(","))
            }
        }
    }

    /// Closed ball `{y : dist(x, y) <= radius}` in index order.
    pub fn closed_ball(&self, x: PointId, radius: f64) -> Vec<PointId> {
        self.points().filter(|&y| self.dist(x, y) <= radius).collect()
    }

    /// Index of the unique part containing `p` in a disjoint union, `None` otherwise.
    pub fn union_part_of(&self, p: PointId) -> Option<usize> {
        match &*self.geometry {
            Geometry::Union { offsets, .. } => Some(locate(offsets, p.index()).0),
            _ => None,
        }
    }

    pub(crate) fn circle_params(&self) -> Option<(usize, f64)> {
        match &*self.geometry {
            Geometry::Circle { n, circumference } => Some((*n, *circumference)),
            _ => None,
        }
    }

    pub(crate) fn union_parts(&self) -> Option<(&[FiniteMetricSpace], &[usize])> {
        match &*self.geometry {
            Geometry::Union { parts, offsets, .. } => Some((parts, offsets)),
            _ => None,
        }
    }

    pub(crate) fn product_factors(&self) -> Option<(&FiniteMetricSpace, &FiniteMetricSpace)> {
        match &*self.geometry {
            Geometry::Product { a, b } => Some((a, b)),
            _ => None,
        }
    }

    pub(crate) fn shift_params(&self) -> Option<(usize, usize)> {
        match &*self.geometry {
            Geometry::Shift { m, depth } => Some((*m, *depth)),
            _ => None,
        }
    }

    pub(crate) fn odometer_digits(&self) -> Option<&[usize]> {
        match &*self.geometry {
            Geometry::Odometer { digits, .. } => Some(digits),
            _ => None,
        }
    }

    /// Short structural description, stable across runs (used in digests).
    pub fn describe(&self) -> String {
        match &*self.geometry {
            Geometry::Circle { n, circumference } => format!("circle(n={n},c={circumference})"),
            Geometry::Matrix { n, .. } => format!("matrix(n={n})"),
            Geometry::Uniform { n, value } => format!("uniform(n={n},d={value})"),
            Geometry::Union { parts, cross, .. } => format!(
                "union[{}](cross={cross})",
                parts.iter().map(|p| p.describe()).collect::<Vec<_>>().join(";")
            ),
            Geometry::Product { a, b } => format!("product[{};{}]", a.describe(), b.describe()),
            Geometry::Shift { m, depth } => format!("shift(m={m},depth={depth})"),
            Geometry::Odometer { digits, .. } => format!("odometer({digits:?})"),
        }
    }

    fn extremes(&self) -> (f64, Option<f64>) {
        let n = self.point_count;
        if n < 2 {
            return (0.0, None);
        }
        match &*self.geometry {
            Geometry::Circle { n, circumference } => {
                let h = circumference / *n as f64;
                ((n / 2) as f64 * h, Some(h))
            }
            Geometry::Uniform { value, .. } => (*value, Some(*value)),
            Geometry::Union { parts, cross, .. } => {
                let mut diam: f64 = if parts.len() > 1 { *cross } else { 0.0 };
                let mut min_pos = if parts.len() > 1 && *cross > 0.0 { Some(*cross) } else { None };
                for p in parts {
                    diam = diam.max(p.diameter);
                    min_pos = min_opt(min_pos, p.min_positive);
                }
                (diam, min_pos)
            }
            Geometry::Product { a, b } => {
                (a.diameter.max(b.diameter), min_opt(a.min_positive, b.min_positive))
            }
            Geometry::Shift { m, depth } => (1.0, Some((*m as f64).powi(-(*depth as i32 - 1)))),
            Geometry::Odometer { digits, scales } => {
                let last = digits.len() - 1;
                (scales[0], Some(scales[last]))
            }
            Geometry::Matrix { .. } => {
                let mut diam: f64 = 0.0;
                let mut min_pos: Option<f64> = None;
                for x in 0..n {
                    for y in 0..n {
                        let d = self.dist_idx(x, y);
                        diam = diam.max(d);
                        if d > 0.0 {
                            min_pos = min_opt(min_pos, Some(d));
                        }
                    }
                }
                (diam, min_pos)
            }
        }
    }
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn locate(offsets: &[usize], i: usize) -> (usize, usize) {
    let part = offsets.partition_point(|&o| o <= i) - 1;
    (part, i - offsets[part])
}

/// Digits of a shift-space word, most significant (index 0) first.
pub(crate) fn shift_digits(m: usize, depth: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; depth];
    for slot in out.iter_mut().rev() {
        *slot = idx % m;
        idx /= m;
    }
    out
}

fn first_shift_disagreement(m: usize, depth: usize, x: usize, y: usize) -> Option<usize> {
    if x == y {
        return None;
    }
    let mut place = checked_pow(m, depth - 1) as usize;
    for k in 0..depth {
        if (x / place) % m != (y / place) % m {
            return Some(k);
        }
        place /= m;
    }
    None
}

/// Strictly decreasing list of positive scales (epsilon or delta ladders).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleLadder(Vec<f64>);

impl ScaleLadder {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("ladder must not be empty");
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return invalid(format!("ladder value {v} is not a positive real"));
        }
        if let Some(w) = values.windows(2).find(|w| w[1] >= w[0]) {
            return invalid(format!(
                "ladder must be strictly decreasing, found {} followed by {}",
                w[0], w[1]
            ));
        }
        Ok(ScaleLadder(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn smallest(&self) -> f64 {
        *self.0.last().expect("nonempty ladder")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<'de> Deserialize<'de> for ScaleLadder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(d)?;
        ScaleLadder::new(values).map_err(serde::de::Error::custom)
    }
}

/// Points at arc positions `k * circumference / n` with shortest-arc distance.
pub fn build_circle_grid(n: usize, circumference: f64) -> Result<FiniteMetricSpace> {
    if n < 2 {
        return invalid(format!("circle grid needs n >= 2, got {n}"));
    }
    if !(circumference.is_finite() && circumference > 0.0) {
        return invalid("circumference must be positive");
    }
    Ok(FiniteMetricSpace::from_geometry(Geometry::Circle { n, circumference }))
}

/// Disjoint union with a constant distance between points of different parts.
///
/// `cross_distance` must be at least half the largest part diameter, otherwise
/// a cross-part detour could shortcut a within-part distance.
pub fn build_disjoint_union(
    parts: Vec<FiniteMetricSpace>,
    cross_distance: f64,
) -> Result<FiniteMetricSpace> {
    if parts.is_empty() {
        return invalid("disjoint union of zero parts");
    }
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().expect("one part"));
    }
    if !(cross_distance.is_finite() && cross_distance >= 0.0) {
        return invalid("cross distance must be a nonnegative real");
    }
    let max_diam = parts.iter().map(|p| p.diameter).fold(0.0, f64::max);
    if cross_distance < max_diam / 2.0 {
        return Err(Error::MetricViolation(format!(
            "cross distance {cross_distance} is below half the largest part diameter ({max_diam})"
        )));
    }
    let mut offsets = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for p in &parts {
        offsets.push(acc);
        acc += p.point_count;
    }
    Ok(FiniteMetricSpace::from_geometry(Geometry::Union {
        parts,
        offsets,
        cross: cross_distance,
    }))
}

/// Max-metric product; point `(x, y)` has index `x * |b| + y`.
pub fn build_product(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> FiniteMetricSpace {
    FiniteMetricSpace::from_geometry(Geometry::Product {
        a: a.clone(),
        b: b.clone(),
    })
}

/// [`build_product`] with a size check against `budget`.
pub fn build_product_within(
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
    budget: &Budget,
) -> Result<FiniteMetricSpace> {
    budget.check_points(a.point_count as u128 * b.point_count as u128, "product space")?;
    Ok(build_product(a, b))
}

/// Words of length `depth` over `m` symbols with `d(w, w') = m^-k`, `k` the
/// first index where they disagree. Word `w_0 w_1 ... w_{depth-1}` has index
/// `sum w_i m^(depth-1-i)` (leading symbol most significant).
pub fn build_shift_space(m: usize, depth: usize, budget: &Budget) -> Result<FiniteMetricSpace> {
    if m < 2 {
        return invalid(format!("shift space needs m >= 2 symbols, got {m}"));
    }
    if depth == 0 {
        return invalid("shift space depth must be positive");
    }
    budget.check_points(checked_pow(m, depth), "shift space")?;
    Ok(FiniteMetricSpace::from_geometry(Geometry::Shift { m, depth }))
}

/// Digit space of a truncated odometer: states are digit tuples `(a_0, ..., a_{L-1})`
/// with `0 <= a_i < digits[i]`, indexed in mixed radix with `a_0` least significant.
/// Two states whose first differing digit is `k` are at distance
/// `1 / (digits[0] * ... * digits[k-1])`.
pub fn build_odometer_space(digits: &[usize], budget: &Budget) -> Result<FiniteMetricSpace> {
    if digits.is_empty() {
        return invalid("odometer needs at least one digit");
    }
    if let Some(j) = digits.iter().find(|&&j| j < 2) {
        return invalid(format!("odometer digit sizes must be >= 2, got {j}"));
    }
    let total = digits
        .iter()
        .fold(1u128, |acc, &j| acc.saturating_mul(j as u128));
    budget.check_points(total, "odometer space")?;
    let mut scales = Vec::with_capacity(digits.len());
    let mut scale = 1.0;
    for &j in digits {
        scales.push(scale);
        scale /= j as f64;
    }
    Ok(FiniteMetricSpace::from_geometry(Geometry::Odometer {
        digits: digits.to_vec(),
        scales,
    }))
}

/// Which metric axiom failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Identity,
    Symmetry,
    Triangle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ValidationReport {
    Valid,
    Violation {
        axiom: Axiom,
        /// For the triangle axiom `(x, y, z)` with `d(x,z) > d(x,y) + d(y,z)`;
        /// for pairwise axioms the third entry repeats the second.
        witness: (PointId, PointId, PointId),
    },
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidationReport::Valid)
    }
}

/// Exhaustive axiom check; cubic in the point count.
pub fn validate_metric(s: &FiniteMetricSpace) -> ValidationReport {
    let n = s.point_count;
    let tol = 1e-12 * s.diameter.max(1.0);
    for x in 0..n {
        for y in 0..n {
            let d = s.dist_idx(x, y);
            if (x == y && d != 0.0) || (x != y && d <= 0.0) {
                let (px, py) = (PointId::from(x), PointId::from(y));
                return ValidationReport::Violation {
                    axiom: Axiom::Identity,
                    witness: (px, py, py),
                };
            }
            if (d - s.dist_idx(y, x)).abs() > tol {
                let (px, py) = (PointId::from(x), PointId::from(y));
                return ValidationReport::Violation {
                    axiom: Axiom::Symmetry,
                    witness: (px, py, py),
                };
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let dxy = s.dist_idx(x, y);
            for z in 0..n {
                if s.dist_idx(x, z) > dxy + s.dist_idx(y, z) + tol {
                    return ValidationReport::Violation {
                        axiom: Axiom::Triangle,
                        witness: (PointId::from(x), PointId::from(y), PointId::from(z)),
                    };
                }
            }
        }
    }
    ValidationReport::Valid
}

/// Result of a minimum-cover computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub count: usize,
    /// `false` when the count is a heuristic upper bound.
    pub exact: bool,
}

/// `N_delta(X)`: the fewest subsets of diameter at most `delta` covering the space.
///
/// Exact (exhaustive) up to [`EXACT_COVER_LIMIT`] points; above that a greedy
/// cover that grows each set around the lowest-index uncovered seed, taking
/// candidates in order of distance from the seed.
pub fn covering_number(s: &FiniteMetricSpace, delta: f64) -> Result<Cover> {
    if !(delta.is_finite() && delta > 0.0) {
        return invalid("covering scale must be positive");
    }
    let n = s.point_count;
    if s.diameter <= delta {
        return Ok(Cover { count: 1, exact: true });
    }
    if let Some(min_pos) = s.min_positive {
        if delta < min_pos {
            return Ok(Cover { count: n, exact: true });
        }
    }
    if n <= EXACT_COVER_LIMIT {
        let close: Vec<u32> = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| s.dist_idx(x, y) <= delta)
                    .fold(0u32, |acc, y| acc | (1 << y))
            })
            .collect();
        let maximal = maximal_cliques_small(&close, n);
        let count = crate::solve::min_union_cover_small(&maximal, n);
        return Ok(Cover { count, exact: true });
    }
    let mut covered = vec![false; n];
    let mut count = 0;
    let mut seed = 0;
    while seed < n {
        if covered[seed] {
            seed += 1;
            continue;
        }
        count += 1;
        covered[seed] = true;
        let mut members = vec![seed];
        let mut candidates: Vec<(f64, usize)> = (0..n)
            .filter(|&y| !covered[y])
            .map(|y| (s.dist_idx(seed, y), y))
            .filter(|(d, _)| *d <= delta)
            .collect();
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, y) in candidates {
            if members.iter().all(|&m| s.dist_idx(m, y) <= delta) {
                members.push(y);
                covered[y] = true;
            }
        }
    }
    Ok(Cover { count, exact: false })
}

/// Fewest closed balls of the given radius (centred at points) covering the space.
pub fn ball_covering_number(s: &FiniteMetricSpace, radius: f64) -> Result<Cover> {
    if !(radius.is_finite() && radius >= 0.0) {
        return invalid("ball radius must be nonnegative");
    }
    let n = s.point_count;
    if n <= EXACT_COVER_LIMIT {
        let balls: Vec<u32> = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| s.dist_idx(x, y) <= radius)
                    .fold(0u32, |acc, y| acc | (1 << y))
            })
            .collect();
        let count = crate::solve::min_union_cover_small(&balls, n);
        return Ok(Cover { count, exact: true });
    }
    let mut covered = vec![false; n];
    let mut count = 0;
    for x in 0..n {
        if covered[x] {
            continue;
        }
        count += 1;
        for (y, c) in covered.iter_mut().enumerate() {
            if s.dist_idx(x, y) <= radius {
                *c = true;
            }
        }
    }
    Ok(Cover { count, exact: false })
}

/// Maximal sets of pairwise-close points, as bitmasks over at most 32 points.
fn maximal_cliques_small(close: &[u32], n: usize) -> Vec<u32> {
    // Bron–Kerbosch without pivoting; n <= 16 keeps this tiny.
    fn bk(r: u32, p: u32, x: u32, close: &[u32], out: &mut Vec<u32>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let (mut p, mut x) = (p, x);
        while p != 0 {
            let v = p.trailing_zeros() as usize;
            let bit = 1u32 << v;
            bk(r | bit, p & close[v], x & close[v], close, out);
            p &= !bit;
            x |= bit;
        }
    }
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut out = Vec::new();
    let without_self: Vec<u32> = close.iter().enumerate().map(|(i, c)| c & !(1 << i)).collect();
    bk(0, all, 0, &without_self, &mut out);
    out
}

/// Output of [`box_dimension_estimate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxDimension {
    pub lower_b: f64,
    pub upper_b: f64,
    /// `(delta, N_delta, exact)` per ladder value.
    pub curve: Vec<(f64, usize, bool)>,
}

/// Lower/upper box-dimension surrogates: the min and max slope of
/// `log N_delta` against `log(1/delta)` over consecutive ladder pairs.
pub fn box_dimension_estimate(s: &FiniteMetricSpace, ladder: &ScaleLadder) -> Result<BoxDimension> {
    if s.point_count == 1 {
        let curve = ladder.values().iter().map(|&d| (d, 1, true)).collect();
        return Ok(BoxDimension {
            lower_b: 0.0,
            upper_b: 0.0,
            curve,
        });
    }
    if ladder.len() < 2 {
        return invalid("box dimension needs at least two ladder scales");
    }
    let min_pos = s.min_positive.unwrap_or(0.0);
    for &d in ladder.values() {
        if !(d > min_pos && d < s.diameter) {
            return invalid(format!(
                "ladder scale {d} outside ({min_pos}, {}) where covering numbers are informative",
                s.diameter
            ));
        }
    }
    let mut curve = Vec::with_capacity(ladder.len());
    for &d in ladder.values() {
        let c = covering_number(s, d)?;
        curve.push((d, c.count, c.exact));
    }
    let slopes: Vec<f64> = curve
        .windows(2)
        .map(|w| {
            let (d1, n1, _) = w[0];
            let (d2, n2, _) = w[1];
            ((n2 as f64).ln() - (n1 as f64).ln()) / ((1.0 / d2).ln() - (1.0 / d1).ln())
        })
        .collect();
    let lower_b = slopes.iter().copied().fold(f64::INFINITY, f64::min);
    let upper_b = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(BoxDimension {
        lower_b,
        upper_b,
        curve,
    })
}
