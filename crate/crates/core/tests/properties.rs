use std::collections::BTreeSet;

use proptest::prelude::*;

use symdyn::density::{self, CoveringForest, Slope};
use symdyn::exact::{rational, Rational};
use symdyn::lll::{self, LLLInstance, Predicate, Variable, Weight};
use symdyn::shift::{
    ball_interior, coding_check, interior_and_boundary, pattern_density, pattern_occurrences,
    CodingVerdict,
};
use symdyn::{Element, GroupModel, Letter, Pattern, WindowConfig};

fn v2(x: i64, y: i64) -> Element {
    Element::Vector(vec![x, y])
}

fn letters(k: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (0..k, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)),
        0..12,
    )
}

proptest! {
    #[test]
    fn heisenberg_is_a_group(a in prop::array::uniform3(-20i64..20),
                             b in prop::array::uniform3(-20i64..20),
                             c in prop::array::uniform3(-20i64..20)) {
        let h = GroupModel::heisenberg();
        let (a, b, c) = (Element::Heisenberg(a), Element::Heisenberg(b), Element::Heisenberg(c));
        prop_assert_eq!(h.multiply(&h.multiply(&a, &b), &c), h.multiply(&a, &h.multiply(&b, &c)));
        prop_assert!(h.multiply(&a, &h.inverse(&a)).is_identity());
        prop_assert!(h.multiply(&h.inverse(&a), &a).is_identity());
    }

    #[test]
    fn evaluation_is_a_homomorphism(u in letters(2), v in letters(2)) {
        for g in [GroupModel::free(2).unwrap(), GroupModel::lattice(2).unwrap(), GroupModel::z2_z3(), GroupModel::heisenberg()] {
            let mut uv = u.clone();
            uv.extend(&v);
            prop_assert_eq!(g.evaluate(&uv), g.multiply(&g.evaluate(&u), &g.evaluate(&v)));
            let e = g.evaluate(&u);
            prop_assert_eq!(g.canonicalize(&g.format(&e)).unwrap(), e);
        }
    }

    #[test]
    fn density_of_complement(cells in prop::collection::btree_map((-5i64..5, -5i64..5), 0u32..2, 1..40)) {
        let p = Pattern::from_cells(cells.iter().map(|(&(x, y), &s)| (v2(x, y), s)));
        let d = pattern_density(&p).unwrap();
        prop_assert_eq!(pattern_density(&p.complement()).unwrap(), rational(1, 1) - d);
    }

    #[test]
    fn ball_interior_is_monotone_and_exact(cells in prop::collection::btree_set((-6i64..6, -6i64..6), 1..100), r in 0u32..3) {
        let z2 = GroupModel::lattice(2).unwrap();
        let f: BTreeSet<Element> = cells.iter().map(|&(x, y)| v2(x, y)).collect();
        let k: BTreeSet<Element> = z2.identity_ball(r).unwrap().members().iter().cloned().collect();
        let (int, bdry) = interior_and_boundary(&z2, &f, &k);
        prop_assert_eq!(&ball_interior(&z2, &f, r), &int);
        prop_assert_eq!(int.len() + bdry.len(), f.len());
        let bigger = ball_interior(&z2, &f, r + 1);
        prop_assert!(bigger.is_subset(&int));
    }

    #[test]
    fn occurrences_match_coordinate_scan(bits in prop::collection::vec(0u32..2, 61),
                                         pattern in prop::collection::btree_map((-1i64..2, -1i64..2), 0u32..2, 1..4)) {
        let z2 = GroupModel::lattice(2).unwrap();
        let ball = z2.identity_ball(5).unwrap();
        let x = WindowConfig::new(z2.clone(), ball.clone(), 2, bits).unwrap();
        let p = Pattern::from_cells(pattern.iter().map(|(&(a, b), &s)| (v2(a, b), s)));
        let got: BTreeSet<Element> = pattern_occurrences(&x, &p).into_iter().collect();
        let mut want = BTreeSet::new();
        for g in ball.members() {
            let Element::Vector(c) = g else { unreachable!() };
            if pattern.iter().all(|(&(a, b), &s)| x.symbol_at(&v2(c[0] + a, c[1] + b)) == Some(s)) {
                want.insert(g.clone());
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn coding_round_trip(words in prop::collection::vec(letters(2), 1..10), syms in prop::collection::vec(0u32..3, 10)) {
        let f2 = GroupModel::free(2).unwrap();
        let p = Pattern::from_cells(words.iter().zip(&syms).map(|(w, &s)| (f2.evaluate(w), s)));
        match coding_check(&f2, &p.to_coding(&f2)).unwrap() {
            CodingVerdict::Consistent(q) => prop_assert_eq!(q, p),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn margins_do_not_depend_on_event_order(events in prop::collection::vec((0usize..10, 0usize..10, 2u32..6), 1..12),
                                            rotate in 0usize..12) {
        let vars: Vec<Variable> = (0..10).map(|i| Variable { label: format!("v{i}"), alphabet: 2 }).collect();
        let build = |order: &[(usize, usize, u32)]| {
            let mut inst = LLLInstance::new(vars.clone());
            for (i, &(a, b, k)) in order.iter().enumerate() {
                let b = if a == b { (b + 1) % 10 } else { b };
                inst.push_event(format!("{a}-{b}-{k}-{i}"), 1, [a, b], rational(1, 2),
                                Weight::DyadicRoot(k), Predicate::PairsEqual(vec![(a, b)])).unwrap();
            }
            inst
        };
        let mut rotated = events.clone();
        let len = rotated.len();
        rotated.rotate_left(rotate % len);
        let key = |inst: &LLLInstance| {
            let v = lll::verify_condition(inst).unwrap();
            let mut m: Vec<(String, String)> = v.margins.iter()
                .map(|m| {
                    let (a, b, k, _) = {
                        let parts: Vec<&str> = inst.events()[m.id].label.split('-').collect();
                        (parts[0].to_string(), parts[1].to_string(), parts[2].to_string(), ())
                    };
                    (format!("{a}-{b}-{k}"), m.margin.to_string())
                })
                .collect();
            m.sort();
            (v.holds, m)
        };
        prop_assert_eq!(key(&build(&events)), key(&build(&rotated)));
    }

    #[test]
    fn sturmian_words_are_balanced(q in 2u64..=610, p_frac in 0.0f64..1.0) {
        let p = ((q as f64) * p_frac) as u64;
        let alpha = Slope::new(p, q).unwrap();
        let w = density::sturmian(&alpha, 0..800);
        prop_assert!(density::is_balanced(&w, 200));
        let ones: u64 = w[..q as usize].iter().map(|&b| b as u64).sum();
        prop_assert_eq!(ones, alpha.numer() * (q / alpha.denom()));
    }

    #[test]
    fn cluster_bounds_imply_aggregate_bound(choices in prop::collection::vec(any::<bool>(), 200), num in 1u64..13) {
        // Any assignment meeting the per-cluster bounds also meets the aggregate one.
        let z2 = GroupModel::lattice(2).unwrap();
        let f = CoveringForest::build(&z2, 10, 1).unwrap();
        let alpha = Slope::new(num, 13).unwrap();
        let mut symbols = vec![0u32; f.window().len()];
        for (i, (_, leaves)) in f.clusters(1).into_iter().enumerate() {
            let ones = alpha.floor_mul(leaves.len() as u64) as usize + choices[i % 200] as usize;
            for &h in leaves.iter().take(ones.min(leaves.len())) {
                symbols[h] = 1;
            }
        }
        let x = WindowConfig::new(z2, f.window().clone(), 2, symbols).unwrap();
        let report = density::verify_condition1(&x, &f, &alpha).unwrap();
        prop_assert!(report.failures().next().is_none());
        prop_assert!(report.aggregates.iter().all(|a| a.pass));
    }
}

#[test]
fn resampling_on_a_cycle_stays_within_the_expected_bound() {
    // 50 binary variables on a cycle, one event per 6-window: "all equal".
    // μ = 2/64, x = 1/16, and each event meets 10 others.
    let vars: Vec<Variable> = (0..50)
        .map(|i| Variable {
            label: format!("v{i}"),
            alphabet: 2,
        })
        .collect();
    let mut inst = LLLInstance::new(vars);
    for s in 0..50 {
        let support: Vec<usize> = (0..6).map(|i| (s + i) % 50).collect();
        let pairs = support.windows(2).map(|w| (w[0], w[1])).collect();
        inst.push_event(
            format!("w{s}"),
            1,
            support,
            rational(1, 32),
            Weight::Rational(rational(1, 16)),
            Predicate::PairsEqual(pairs),
        )
        .unwrap();
    }
    assert!(lll::verify_condition(&inst).unwrap().holds);
    for e in inst.events() {
        assert_eq!(inst.audit_probability(e), Some(rational(1, 32)));
    }
    let runs = 200;
    let total: usize = (0..runs)
        .map(|seed| lll::resample(&inst, seed, 10_000).unwrap().trace.len())
        .sum();
    // The expected number of resamplings is at most Σ x/(1−x) = 50/15.
    let mean = Rational::new((total as i64).into(), (runs as i64).into());
    assert!(mean <= rational(50, 15), "mean {mean}");
}

#[test]
fn fill_deviation_decreases_over_balls() {
    let z2 = GroupModel::lattice(2).unwrap();
    let f = CoveringForest::build(&z2, 25, 2).unwrap();
    let alpha = Slope::new(377, 610).unwrap();
    let x = density::fill_density(&f, &alpha).unwrap();
    let report = density::measure_density(
        &x,
        &density::ball_sequence(&z2, 5..=25).unwrap(),
        Some(&alpha),
    )
    .unwrap();
    let dev: Vec<f64> = report.rows.iter().map(|r| r.deviation.unwrap()).collect();
    // Not monotone ball by ball, but the worst deviation shrinks with the radius.
    let small = dev[..6].iter().cloned().fold(0.0, f64::max);
    let large = dev[15..].iter().cloned().fold(0.0, f64::max);
    assert!(large < small, "{dev:?}");
    assert!(large < 0.03);
}
