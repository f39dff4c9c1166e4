//! Built-in example systems and the tolerances they are analysed at by default.

use semichain::space::{build_circle_grid, build_disjoint_union, build_shift_space};
use semichain::structure::{odometer_system, OdometerSpec};
use semichain::system::{from_map_specs, from_map_tables};
use semichain::{Budget, FiniteMetricSpace, GeneratorSystem, MapSpec, ScaleLadder};

use crate::ConfigError;

pub struct PresetInfo {
    pub name: &'static str,
    pub description: &'static str,
}

const PRESETS: &[PresetInfo] = &[
    PresetInfo {
        name: "example-4.1",
        description: "two circles (n points each, default 32) at distance 1; x -> 2x and x -> 3x land in the other circle",
    },
    PresetInfo {
        name: "example-4.2",
        description: "prepend-0 and prepend-1 on binary words of length depth (default 6)",
    },
    PresetInfo {
        name: "doubling-tripling",
        description: "circle grid (n points, default 128) with x -> 2x and x -> 3x",
    },
    PresetInfo {
        name: "odometer-L",
        description: "dyadic adding machine on L binary digits, e.g. odometer-6",
    },
    PresetInfo {
        name: "identity-n",
        description: "n-point circle grid with two identity maps, e.g. identity-4",
    },
    PresetInfo {
        name: "complete-n",
        description: "n points at mutual distance 1 with the identity map; every chain step is allowed at tolerance 1",
    },
];

pub fn list_presets() -> &'static [PresetInfo] {
    PRESETS
}

/// Whether `name` resolves to a preset (`odometer-6` matches `odometer-L`).
pub fn is_preset(name: &str) -> bool {
    parse_name(name).is_ok()
}

/// Analysis tolerances used when a request leaves them out.
#[derive(Debug, Clone)]
pub struct Defaults {
    pub epsilons: ScaleLadder,
    /// Mixing-ball radii and the δ ladder of the mixing-time bound.
    pub deltas: ScaleLadder,
    /// Chain tolerances for entropy estimates.
    pub entropy_deltas: ScaleLadder,
    pub ubd_epsilons: ScaleLadder,
    pub box_ladder: Option<ScaleLadder>,
    pub n_range: (usize, usize),
    /// Single-scale chain tolerance (decomposition, verification).
    pub epsilon: f64,
    /// Single-scale ball radius.
    pub delta: f64,
    pub skew_delta: f64,
    pub k: usize,
}

pub struct Preset {
    pub name: String,
    pub system: GeneratorSystem,
    pub defaults: Defaults,
}

#[derive(Debug, Clone, Copy)]
enum Family {
    TwoCircles,
    PrependShift,
    DoublingTripling,
    Odometer(Option<usize>),
    Identity(usize),
    Complete(usize),
}

fn parse_name(name: &str) -> Result<Family, ConfigError> {
    let sized = |prefix: &str| -> Option<Result<usize, ConfigError>> {
        let rest = name.strip_prefix(prefix)?;
        Some(
            rest.parse::<usize>()
                .map_err(|_| ConfigError::Invalid(format!("preset `{name}`: `{rest}` is not a size"))),
        )
    };
    match name {
        "example-4.1" => return Ok(Family::TwoCircles),
        "example-4.2" => return Ok(Family::PrependShift),
        "doubling-tripling" => return Ok(Family::DoublingTripling),
        "odometer" => return Ok(Family::Odometer(None)),
        _ => {}
    }
    if let Some(l) = sized("odometer-") {
        return Ok(Family::Odometer(Some(l?)));
    }
    if let Some(n) = sized("identity-") {
        return Ok(Family::Identity(n?));
    }
    if let Some(n) = sized("complete-") {
        return Ok(Family::Complete(n?));
    }
    Err(ConfigError::UnknownPreset(name.to_string()))
}

fn ladder(values: Vec<f64>) -> ScaleLadder {
    ScaleLadder::new(values).expect("preset ladders are strictly decreasing")
}

/// Builds a preset. `n` and `depth` override the size parameters where they apply.
pub fn build_preset(
    name: &str,
    n: Option<usize>,
    depth: Option<usize>,
    budget: &Budget,
) -> Result<Preset, ConfigError> {
    let family = parse_name(name)?;
    let unused = |what: &str| ConfigError::Invalid(format!("preset `{name}` takes no `{what}` parameter"));
    let (system, defaults) = match family {
        Family::TwoCircles => {
            if depth.is_some() {
                return Err(unused("depth"));
            }
            let g = two_circles(n.unwrap_or(32))?;
            let d = Defaults {
                epsilons: ladder(vec![0.1, 0.05]),
                deltas: ladder(vec![0.05]),
                entropy_deltas: ladder(vec![0.05]),
                ubd_epsilons: ladder(vec![0.2, 0.1, 0.05]),
                box_ladder: Some(ladder(vec![0.2, 0.1, 0.05])),
                n_range: (1, 3),
                epsilon: 0.05,
                delta: 0.05,
                skew_delta: 0.05,
                k: 2,
            };
            (g, d)
        }
        Family::PrependShift => {
            if n.is_some() {
                return Err(unused("n"));
            }
            let g = prepend_shift(depth.unwrap_or(6), budget)?;
            let d = Defaults {
                epsilons: ladder(vec![0.5, 0.3, 0.15]),
                deltas: ladder(vec![0.1, 0.01]),
                entropy_deltas: ladder(vec![0.3, 0.15]),
                ubd_epsilons: ladder(vec![0.5, 0.3, 0.15]),
                box_ladder: Some(ladder(vec![0.3, 0.15, 0.07])),
                n_range: (1, 4),
                epsilon: 0.3,
                delta: 0.01,
                skew_delta: 0.25,
                k: 2,
            };
            (g, d)
        }
        Family::DoublingTripling => {
            if depth.is_some() {
                return Err(unused("depth"));
            }
            let g = doubling_tripling(n.unwrap_or(128))?;
            let d = Defaults {
                epsilons: ladder(vec![0.1, 0.05, 0.025]),
                deltas: ladder(vec![0.2, 0.1]),
                entropy_deltas: ladder(vec![0.05, 0.025]),
                ubd_epsilons: ladder(vec![0.2, 0.1, 0.05, 0.025]),
                box_ladder: Some(ladder(vec![0.1, 0.05, 0.025])),
                n_range: (1, 3),
                epsilon: 0.05,
                delta: 0.1,
                skew_delta: 1.0 / 32.0,
                k: 2,
            };
            (g, d)
        }
        Family::Odometer(l) => {
            if n.is_some() {
                return Err(unused("n"));
            }
            let l = match (l, depth) {
                (Some(a), Some(b)) if a != b => {
                    return Err(ConfigError::Invalid(format!("preset `{name}` conflicts with depth {b}")))
                }
                (Some(a), _) | (None, Some(a)) => a,
                (None, None) => 6,
            };
            if l == 0 {
                return Err(ConfigError::Invalid("odometer needs at least one digit".into()));
            }
            let g = odometer_system(&OdometerSpec::dyadic(l)?, budget)?;
            let scale = |i: usize| 0.5f64.powi(i as i32);
            let box_values: Vec<f64> = (0..l.saturating_sub(1)).map(|i| 0.75 * scale(i)).collect();
            let d = Defaults {
                epsilons: ladder((0..=l).map(|i| 1.5 * scale(i)).collect()),
                deltas: ladder(vec![0.5, scale(l)]),
                // Coarser scales put a large share of the space in every ball.
                entropy_deltas: ladder(if l >= 2 { vec![scale(l - 2), scale(l - 1)] } else { vec![scale(l)] }),
                ubd_epsilons: ladder((0..=l).map(|i| 1.5 * scale(i)).collect()),
                box_ladder: (box_values.len() >= 2).then(|| ladder(box_values)),
                n_range: (1, 3),
                epsilon: 1.5 * scale(l),
                delta: scale(l),
                skew_delta: 0.25,
                k: 2,
            };
            (g, d)
        }
        Family::Identity(size) => {
            if n.is_some() || depth.is_some() {
                return Err(unused(if n.is_some() { "n" } else { "depth" }));
            }
            let space = build_circle_grid(size, 1.0)?;
            let g = from_map_specs(space, &[MapSpec::Identity, MapSpec::Identity])?;
            let spacing = 1.0 / size as f64;
            let d = Defaults {
                epsilons: ladder(vec![0.5, 0.25]),
                deltas: ladder(vec![spacing / 2.0]),
                entropy_deltas: ladder(vec![spacing / 2.0]),
                ubd_epsilons: ladder(vec![0.5, 0.25]),
                box_ladder: None,
                n_range: (1, 4),
                epsilon: 0.5,
                delta: spacing / 2.0,
                skew_delta: spacing / 2.0,
                k: 2,
            };
            (g, d)
        }
        Family::Complete(size) => {
            if n.is_some() || depth.is_some() {
                return Err(unused(if n.is_some() { "n" } else { "depth" }));
            }
            let space = FiniteMetricSpace::uniform(size, 1.0)?;
            let g = from_map_tables(space, vec![(0..size as u32).collect()])?;
            let d = Defaults {
                epsilons: ladder(vec![1.0]),
                deltas: ladder(vec![1.0]),
                entropy_deltas: ladder(vec![1.0]),
                ubd_epsilons: ladder(vec![1.0]),
                box_ladder: None,
                n_range: (1, 4),
                epsilon: 1.0,
                delta: 1.0,
                skew_delta: 1.0,
                k: 2,
            };
            (g, d)
        }
    };
    if system.point_count() > budget.points {
        return Err(ConfigError::Build(semichain::Error::Resource(format!(
            "preset `{name}` has {} points, budget is {}",
            system.point_count(),
            budget.points
        ))));
    }
    Ok(Preset {
        name: name.to_string(),
        system,
        defaults,
    })
}

/// Defaults for an explicit system, scaled to its diameter.
pub fn derived_defaults(g: &GeneratorSystem) -> Defaults {
    let space = g.space();
    let diam = if space.diameter() > 0.0 { space.diameter() } else { 1.0 };
    let min_pos = space.min_positive_distance().unwrap_or(diam);
    let eps: Vec<f64> = [4.0, 8.0, 16.0].iter().map(|s| diam / s).collect();
    let box_values: Vec<f64> = eps.iter().copied().filter(|&e| e > min_pos && e < diam).collect();
    Defaults {
        epsilons: ladder(eps.clone()),
        deltas: ladder(vec![eps[1]]),
        entropy_deltas: ladder(vec![eps[1]]),
        ubd_epsilons: ladder(eps.clone()),
        box_ladder: (box_values.len() >= 2).then(|| ladder(box_values)),
        n_range: (1, 3),
        epsilon: eps[0],
        delta: eps[1],
        skew_delta: eps[1],
        k: 2,
    }
}

fn two_circles(n: usize) -> Result<GeneratorSystem, ConfigError> {
    let c = build_circle_grid(n, 1.0)?;
    let x = build_disjoint_union(vec![c.clone(), c], 1.0)?;
    let cross = |a| MapSpec::CrossAffine { a, b: 0.0, target: vec![] };
    Ok(from_map_specs(x, &[cross(2.0), cross(3.0)])?)
}

fn prepend_shift(depth: usize, budget: &Budget) -> Result<GeneratorSystem, ConfigError> {
    let s = build_shift_space(2, depth, budget)?;
    Ok(from_map_specs(s, &[MapSpec::Prepend { symbol: 0 }, MapSpec::Prepend { symbol: 1 }])?)
}

fn doubling_tripling(n: usize) -> Result<GeneratorSystem, ConfigError> {
    let c = build_circle_grid(n, 1.0)?;
    Ok(from_map_specs(
        c,
        &[MapSpec::Affine { a: 2.0, b: 0.0 }, MapSpec::Affine { a: 3.0, b: 0.0 }],
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use semichain::system::apply_word;
    use semichain::{PointId, Word};

    #[test]
    fn registry_lookup() {
        let names: Vec<&str> = list_presets().iter().map(|p| p.name).collect();
        assert!(names.contains(&"example-4.1"));
        assert!(is_preset("odometer-6"));
        assert!(is_preset("identity-4"));
        assert!(!is_preset("odometer-x"));
        assert!(matches!(
            build_preset("lorenz", None, None, &Budget::default()),
            Err(ConfigError::UnknownPreset(_))
        ));
    }

    #[test]
    fn example_systems_have_the_documented_shape() {
        let b = Budget::default();
        let two = build_preset("example-4.1", None, None, &b).unwrap();
        assert_eq!((two.system.point_count(), two.system.m()), (64, 2));
        // point 1 of the first circle (angle 1/32) doubles into the second circle
        assert_eq!(two.system.apply(0, PointId(1)), PointId(34));
        let shift = build_preset("example-4.2", None, Some(4), &b).unwrap();
        assert_eq!(shift.system.point_count(), 16);
        let w = Word::parse("01", 2).unwrap();
        // prepend 1 acts first, then prepend 0: 1111 -> 1111 -> 0111 ... = 0b0111
        assert_eq!(apply_word(&shift.system, &w, PointId(15)).unwrap(), PointId(0b0111));
        let odo = build_preset("odometer-6", None, None, &b).unwrap();
        assert_eq!(odo.system.point_count(), 64);
        assert_eq!(odo.defaults.epsilons.len(), 7);
        assert_eq!(build_preset("complete-5", None, None, &b).unwrap().system.m(), 1);
        assert!(build_preset("odometer-3", None, Some(4), &b).is_err());
        assert!(build_preset("doubling-tripling", None, Some(3), &b).is_err());
    }

    #[test]
    fn derived_defaults_fit_the_space() {
        let g = doubling_tripling(64).unwrap();
        let d = derived_defaults(&g);
        assert_eq!(d.epsilons.values(), &[0.125, 0.0625, 0.03125]);
        assert!(d.box_ladder.is_some());
    }
}
