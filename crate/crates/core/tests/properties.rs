use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semichain::corpus::{random_strongly_connected_digraph, random_system, system_realizing};
use semichain::entropy::{
    orbit_separated_count, orbit_spanning_count, pseudo_separated_count_with, pseudo_spanning_count_with, PseudoRules,
};
use semichain::graph::{build_chain_graph, count_chains_for_word, reach_layers, total_chain_count};
use semichain::recurrence::{is_chain_mixing, is_chain_transitive, mixing_time, recurrence_time, wielandt_cap};
use semichain::space::{
    box_dimension_estimate, build_circle_grid, build_disjoint_union, build_odometer_space, build_product,
    build_shift_space, covering_number, validate_metric,
};
use semichain::structure::{epsilon_classes, frobenius_two, period_k, representable};
use semichain::system::{
    apply_word, power_system, product_system, quantize_map, suffix_trajectory, word_metric_dw,
};
use semichain::{Budget, FiniteMetricSpace, GeneratorSystem, MapSpec, PointId, ScaleLadder, Word};

fn system(seed: u64, n: usize, m: usize) -> GeneratorSystem {
    random_system(&mut ChaCha8Rng::seed_from_u64(seed), n, m)
}

fn word(letters: &[u32], m: usize) -> Word {
    Word::new(letters.iter().map(|&l| l % m as u32).collect(), m).unwrap()
}

/// Scales used on random systems: distances there are 1, 1.5 or 2.
const SCALES: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn builders_produce_metrics(n in 2usize..20, c in 0.5f64..3.0, m in 2usize..4, depth in 1usize..4, parts in 1usize..4) {
        let circle = build_circle_grid(n, c).unwrap();
        prop_assert!(validate_metric(&circle).is_valid());
        let union = build_disjoint_union(vec![circle.clone(); parts], c).unwrap();
        prop_assert!(validate_metric(&union).is_valid());
        let shift = build_shift_space(m, depth, &Budget::default()).unwrap();
        prop_assert!(validate_metric(&shift).is_valid());
        let odo = build_odometer_space(&vec![m; depth], &Budget::default()).unwrap();
        prop_assert!(validate_metric(&odo).is_valid());
        let prod = build_product(&circle, &shift);
        prop_assert!(validate_metric(&prod).is_valid());
        prop_assert_eq!(prod.diameter(), circle.diameter().max(shift.diameter()));
    }

    #[test]
    fn shift_distances_are_powers(m in 2usize..4, depth in 1usize..5) {
        let s = build_shift_space(m, depth, &Budget::default()).unwrap();
        let allowed: Vec<f64> = (0..depth).map(|k| (m as f64).powi(-(k as i32))).collect();
        for x in s.points() {
            for y in s.points() {
                let d = s.dist(x, y);
                prop_assert!(d == 0.0 || allowed.contains(&d));
            }
        }
    }

    #[test]
    fn covering_is_monotone(n in 2usize..40, d1 in 0.0f64..0.6, d2 in 0.0f64..0.6) {
        let s = build_circle_grid(n, 1.0).unwrap();
        let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
        prop_assert!(covering_number(&s, lo).unwrap().count >= covering_number(&s, hi).unwrap().count);
        prop_assert_eq!(covering_number(&s, s.diameter()).unwrap().count, 1);
    }

    #[test]
    fn box_bounds_ordered(n in 64usize..400) {
        let s = build_circle_grid(n, 1.0).unwrap();
        let lo = 1.0 / n as f64;
        let ladder = ScaleLadder::new(vec![0.2, 0.1, 0.05, 0.025].into_iter().filter(|&v| v > lo).collect()).unwrap();
        let b = box_dimension_estimate(&s, &ladder).unwrap();
        prop_assert!(b.lower_b <= b.upper_b + 1e-12);
    }

    #[test]
    fn word_composition(seed in any::<u64>(), n in 1usize..10, m in 1usize..4,
                        u in prop::collection::vec(any::<u32>(), 1..5), v in prop::collection::vec(any::<u32>(), 1..5)) {
        let g = system(seed, n, m);
        let (u, v) = (word(&u, m), word(&v, m));
        for x in g.space().points() {
            prop_assert_eq!(
                apply_word(&g, &u.concat(&v), x).unwrap(),
                apply_word(&g, &u, apply_word(&g, &v, x).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn word_metric_bounds(seed in any::<u64>(), n in 1usize..10, m in 1usize..4, w in prop::collection::vec(any::<u32>(), 0..5)) {
        let g = system(seed, n, m);
        let w = word(&w, m);
        for x in g.space().points() {
            for y in g.space().points() {
                let d = word_metric_dw(&g, &w, x, y);
                prop_assert!(d >= g.space().dist(x, y));
                prop_assert_eq!(d, word_metric_dw(&g, &w, y, x));
            }
        }
    }

    #[test]
    fn power_generators_are_words(seed in any::<u64>(), n in 1usize..8, m in 1usize..4, k in 1usize..4) {
        let g = system(seed, n, m);
        let gk = power_system(&g, k, &Budget::default()).unwrap();
        for w in Word::all(k, m) {
            let i = w.index(m) as usize;
            for x in g.space().points() {
                prop_assert_eq!(gk.apply(i, x), apply_word(&g, &w, x).unwrap());
            }
        }
    }

    #[test]
    fn product_projects(seed in any::<u64>(), n1 in 1usize..6, n2 in 1usize..6, m1 in 1usize..3, m2 in 1usize..3,
                        letters in prop::collection::vec((any::<u32>(), any::<u32>()), 1..4)) {
        let g = system(seed, n1, m1);
        let h = system(seed ^ 0xABCD, n2, m2);
        let gh = product_system(&g, &h, &Budget::default()).unwrap();
        let w1 = Word::new(letters.iter().map(|p| p.0 % m1 as u32).collect(), m1).unwrap();
        let w2 = Word::new(letters.iter().map(|p| p.1 % m2 as u32).collect(), m2).unwrap();
        let v = Word::new(w1.letters().iter().zip(w2.letters()).map(|(&a, &b)| a * m2 as u32 + b).collect(), m1 * m2).unwrap();
        for x in 0..n1 {
            for y in 0..n2 {
                let p = PointId::from(x * n2 + y);
                let orbit = suffix_trajectory(&gh, &v, p);
                let ox = suffix_trajectory(&g, &w1, PointId::from(x));
                let oy = suffix_trajectory(&h, &w2, PointId::from(y));
                for (j, q) in orbit.iter().enumerate() {
                    prop_assert_eq!(q.index() / n2, ox[j].index());
                    prop_assert_eq!(q.index() % n2, oy[j].index());
                }
            }
        }
    }

    #[test]
    fn quantization_error_is_half_gap(n in 2usize..64, a in -5.0f64..5.0, b in -1.0f64..1.0) {
        let s = build_circle_grid(n, 1.0).unwrap();
        let (_, err) = quantize_map(&s, &MapSpec::Affine { a, b }).unwrap();
        prop_assert!(err <= 0.5 / n as f64 + 1e-12);
    }

    #[test]
    fn chain_counts_monotone_and_total(seed in any::<u64>(), n in 1usize..7, m in 1usize..4, len in 1usize..5, di in 0usize..4, dj in 0usize..4) {
        let g = system(seed, n, m);
        let (d1, d2) = (SCALES[di.min(dj)], SCALES[di.max(dj)]);
        let small = build_chain_graph(&g, d1).unwrap();
        let large = build_chain_graph(&g, d2).unwrap();
        let mut sum = BigUint::from(0u32);
        for w in Word::all(len, m) {
            let a = count_chains_for_word(&small, &w);
            prop_assert!(a <= count_chains_for_word(&large, &w));
            prop_assert!(a >= BigUint::from(n));
            sum += a;
        }
        prop_assert_eq!(total_chain_count(&small, len), sum);
    }

    #[test]
    fn primitive_layers_fill_within_cap(seed in any::<u64>(), n in 2usize..9, extra in 0usize..6) {
        let d = random_strongly_connected_digraph(seed, n, extra);
        let cg = build_chain_graph(&system_realizing(&d), 0.5).unwrap();
        if is_chain_mixing(&cg) {
            let cap = wielandt_cap(n);
            for x in 0..n {
                let layers = reach_layers(&cg, &[PointId::from(x)], cap).unwrap();
                prop_assert_eq!(layers[cap].len(), n);
            }
        }
    }

    #[test]
    fn sandwich_and_monotonicity(seed in any::<u64>(), n in 2usize..7, m in 1usize..3, len in 1usize..4,
                                 ei in 0usize..3, di in 0usize..3) {
        let g = system(seed, n, m);
        let eps = [0.75, 1.25, 1.75][ei];
        let delta = [0.5, 1.0, 1.5][di];
        let cg = build_chain_graph(&g, delta).unwrap();
        let wider = build_chain_graph(&g, delta + 0.5).unwrap();
        // Exact optima are needed for the inequalities; allow the solvers a generous search.
        let budget = Budget { search: 1_000_000_000, ..Budget::default() };
        let rules = PseudoRules::default();
        for w in Word::all(len, m) {
            let sep = pseudo_separated_count_with(&cg, &w, eps, rules, &budget).unwrap();
            let span = pseudo_spanning_count_with(&cg, &w, eps, rules, &budget).unwrap();
            let span_half = pseudo_spanning_count_with(&cg, &w, eps / 2.0, rules, &budget).unwrap();
            prop_assert!(sep.exact && span.exact && span_half.exact);
            prop_assert!(span_half.value >= sep.value && sep.value >= span.value);
            let coarser = pseudo_separated_count_with(&cg, &w, eps + 0.5, rules, &budget).unwrap();
            prop_assert!(coarser.exact && coarser.value <= sep.value);
            let wider_sep = pseudo_separated_count_with(&wider, &w, eps, rules, &budget).unwrap();
            prop_assert!(wider_sep.exact && wider_sep.value >= sep.value);
            let orbit_sep = orbit_separated_count(&g, &w, eps).unwrap();
            prop_assert!(orbit_spanning_count(&g, &w, eps).unwrap().value <= orbit_sep.value);
            prop_assert!(orbit_separated_count(&g, &w, eps + 0.5).unwrap().value <= orbit_sep.value);
        }
    }

    #[test]
    fn recurrence_hierarchy(seed in any::<u64>(), n in 2usize..9, m in 1usize..4, i in 0usize..3) {
        let g = system(seed, n, m);
        let (e1, e2) = (SCALES[i], SCALES[i + 1]);
        let cg = build_chain_graph(&g, e1).unwrap();
        let coarse = build_chain_graph(&g, e2).unwrap();
        let r = recurrence_time(&cg);
        prop_assert!(!r.mixing || r.transitive);
        prop_assert!(!r.transitive || r.recurrent);
        let rc = recurrence_time(&coarse);
        for (a, b) in r.r_per_point.iter().zip(&rc.r_per_point) {
            if let Some(ra) = a.1 {
                prop_assert!(b.1.unwrap() <= ra);
            }
        }
        if r.transitive {
            let k = period_k(&cg).unwrap();
            prop_assert!(r.r_per_point.iter().all(|(_, v)| v.unwrap() % k == 0));
            let classes = epsilon_classes(&cg, &Budget::default()).unwrap();
            prop_assert!(classes.permutation_ok && classes.equivalence_ok);
            prop_assert_eq!(classes.class_sizes.len(), k);
        }
        let mix = mixing_time(&cg, 1.0);
        prop_assert_eq!(mix.m_global.is_some(), is_chain_mixing(&cg));
        if let Some(mg) = mix.m_global {
            prop_assert!(mg <= wielandt_cap(n));
            prop_assert!(mixing_time(&coarse, 1.0).m_global.unwrap() <= mg);
        }
        prop_assert!(!is_chain_mixing(&cg) || is_chain_transitive(&cg));
    }

    #[test]
    fn frobenius_vs_search(a in 1u64..13, b in 1u64..13) {
        prop_assume!(a != b && num_integer::gcd(a, b) == 1);
        let f = frobenius_two(a, b).unwrap();
        if f >= 0 {
            prop_assert!(!representable(f as u64, a, b));
        }
        for n in (f + 1).max(0) as u64..(f + 1).max(0) as u64 + a.max(b) {
            prop_assert!(representable(n, a, b));
        }
    }
}

#[test]
fn uniform_space_counts() {
    let s = FiniteMetricSpace::uniform(5, 1.0).unwrap();
    assert!(validate_metric(&s).is_valid());
    assert_eq!(covering_number(&s, 0.5).unwrap().count, 5);
}
