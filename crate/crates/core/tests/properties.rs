mod common;

use std::cmp::Ordering;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strata_core::asymptotic::{moduli_dimension, validate_data, AsymptoticData, Eps, FourTuple};
use strata_core::exactnum::*;
use strata_core::graph::{check_exists, validate_graph, DecoratedGraph};
use strata_core::orbit::{act, interior_point, orbits_equal, validate_point, GroupElement};
use strata_core::strata::{census, collapse_arc, refine, Bounds, CollapseOutcome, Refinement, Side};
use strata_core::symmetry::{are_isomorphic, aut_group, canonical_code, verify_isomorphism};

fn pair(r: i64) -> impl Strategy<Value = IntPair> {
    (-r..=r, -r..=r).prop_filter("nonzero", |&(p, pp)| p != 0 || pp != 0).prop_map(|(p, pp)| IntPair::new(p, pp))
}

fn angle_pair(r: i64) -> impl Strategy<Value = IntPair> {
    pair(r).prop_filter("defines an angle", |&p| defines_angle(p).unwrap())
}

fn angle(r: i64) -> impl Strategy<Value = AngleSpec> {
    prop_oneof![
        1 => Just(AngleSpec::Zero),
        1 => Just(AngleSpec::Pi),
        8 => angle_pair(r).prop_map(AngleSpec::Interior),
    ]
}

fn alpha_f(p: IntPair, a: &AngleSpec) -> f64 {
    let c = cos_float(a);
    p.pp as f64 * (1.0 - 3.0 * c * c) - p.p as f64 * 6f64.sqrt() * c
}

proptest! {
    #[test]
    fn cmp_angle_is_a_total_order(a in angle(200), b in angle(200), c in angle(200)) {
        prop_assert_eq!(cmp_angle(&a, &b), cmp_angle(&b, &a).reverse());
        if cmp_angle(&a, &b) != Ordering::Greater && cmp_angle(&b, &c) != Ordering::Greater {
            prop_assert_ne!(cmp_angle(&a, &c), Ordering::Greater);
        }
        let (fa, fb) = (angle_float(&a), angle_float(&b));
        if (fa - fb).abs() > 1e-9 {
            prop_assert_eq!(cmp_angle(&a, &b), fa.partial_cmp(&fb).unwrap());
        }
    }

    #[test]
    fn sign_alpha_matches_float(p in pair(500), a in angle(500)) {
        let f = alpha_f(p, &a);
        let scale = (p.p.abs() + p.pp.abs()) as f64;
        if f.abs() > 1e-9 * scale {
            let want = if f > 0.0 { Sign::Positive } else { Sign::Negative };
            prop_assert_eq!(sign_alpha_at(p, &a).unwrap(), want);
        }
    }

    #[test]
    fn alpha_vanishes_exactly_on_proportional_pairs(p in pair(60), q in angle_pair(60)) {
        prop_assume!(q.pp != 0);
        let zero = sign_alpha_at(p, &AngleSpec::Interior(q)).unwrap() == Sign::Zero;
        prop_assert_eq!(zero, p.det(&q) == 0);
    }

    #[test]
    fn alpha_ratio_reproduces_float(n in pair(40), d in pair(40), at in angle_pair(40)) {
        let a = AngleSpec::Interior(at);
        prop_assume!(sign_alpha_at(d, &a).unwrap() != Sign::Zero);
        let r = alpha_ratio(n, d, at).unwrap();
        let rf = num_traits::ToPrimitive::to_f64(&r).unwrap();
        prop_assert!((rf * alpha_f(d, &a) - alpha_f(n, &a)).abs() < 1e-7 * (1.0 + alpha_f(n, &a).abs()));
    }

    #[test]
    fn between_is_strict(a in angle(50), b in angle(50)) {
        let (lo, hi) = match cmp_angle(&a, &b) {
            Ordering::Less => (a, b),
            Ordering::Greater => (b, a),
            Ordering::Equal => return Ok(()),
        };
        let m = angle_strictly_between(&lo, &hi).unwrap();
        prop_assert!(m.is_valid());
        prop_assert_eq!(cmp_angle(&lo, &m), Ordering::Less);
        prop_assert_eq!(cmp_angle(&m, &hi), Ordering::Less);
    }

    #[test]
    fn quadint_sign_matches_float(a in -10_000i64..10_000, b in -10_000i64..10_000) {
        let f = a as f64 + b as f64 * 6f64.sqrt();
        let s = sign_quadint(&QuadInt::from_ints(a, b));
        if f.abs() > 1e-6 {
            prop_assert_eq!(s, if f > 0.0 { Sign::Positive } else { Sign::Negative });
        }
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rational(&rational_to_string(&r)), Some(r));
    }
}

fn data_strategy() -> impl Strategy<Value = AsymptoticData> {
    let tuple = (any::<bool>(), -3i64..=3, -4i64..=4);
    (prop::collection::vec(tuple, 1..=3), any::<bool>(), 0u8..4).prop_filter_map("valid data", |(ts, last_plus, cp)| {
        let c_plus = i64::from(cp == 0);
        let mut tuples: Vec<FourTuple> = ts
            .iter()
            .map(|&(plus, p, pp)| FourTuple::new(0, if plus { Eps::Plus } else { Eps::Minus }, p, pp))
            .collect();
        let sp: i64 = tuples.iter().map(|t| t.eps.sign() * t.pair.p).sum();
        let spp: i64 = tuples.iter().map(|t| t.eps.sign() * t.pair.pp).sum::<i64>() + c_plus;
        let eps = if last_plus { Eps::Plus } else { Eps::Minus };
        tuples.push(FourTuple::new(0, eps, -eps.sign() * sp, -eps.sign() * spp));
        let a = AsymptoticData::new(0, c_plus, tuples);
        validate_data(&a).is_ok().then_some(a)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn data_json_round_trips_and_order_is_irrelevant(a in data_strategy(), rot in 0usize..5) {
        prop_assert_eq!(AsymptoticData::from_json(&a.to_json()).unwrap(), a.clone());
        let mut b = a.clone();
        let k = rot % b.tuples.len();
        b.tuples.rotate_left(k);
        prop_assert!(validate_data(&b).is_ok());
        prop_assert_eq!(moduli_dimension(&a), moduli_dimension(&b));
    }

    #[test]
    fn census_is_deterministic_and_order_free(a in data_strategy()) {
        let bounds = Bounds::default();
        let first = census(&a, &bounds).unwrap();
        prop_assert_eq!(&census(&a, &bounds).unwrap(), &first);
        let mut b = a.clone();
        b.tuples.reverse();
        let keys = |c: &[strata_core::strata::CensusEntry]| c.iter().map(|e| (e.key.clone(), e.dim)).collect::<Vec<_>>();
        prop_assert_eq!(keys(&census(&b, &bounds).unwrap()), keys(&first));
    }

    #[test]
    fn census_dimensions_cohere(a in data_strategy()) {
        let total = moduli_dimension(&a);
        for e in census(&a, &Bounds::default()).unwrap() {
            prop_assert!(e.dim <= total);
            prop_assert_eq!(e.codim, total - e.dim);
            if let (Some(t), Some(s)) = (&e.representative, &e.stratum) {
                prop_assert!(validate_graph(t).is_ok());
                prop_assert_eq!(e.dim, 2 + s.m as i64 + t.gamma_vertex_count() as i64);
                prop_assert_eq!(e.nonempty, check_exists(t).is_nonempty());
            }
        }
    }
}

trait Verdict {
    fn is_nonempty(&self) -> bool;
}

impl Verdict for strata_core::graph::ExistenceReport {
    fn is_nonempty(&self) -> bool {
        self.verdict == strata_core::graph::Existence::Nonempty
    }
}

fn corpus_graph() -> impl Strategy<Value = (String, DecoratedGraph)> {
    let mut all: Vec<(String, DecoratedGraph)> = corpus().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    all.push(("four-arc".into(), four_arc()));
    all.push(("cancel-pair".into(), cancel_pair()));
    all.push(("six-valent".into(), six_valent()));
    prop::sample::select(all)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabeling_preserves_everything((name, g) in corpus_graph(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_relabel(&g, &mut rng);
        prop_assert!(validate_graph(&h).is_ok(), "{}", name);
        prop_assert_eq!(check_exists(&h).is_nonempty(), check_exists(&g).is_nonempty());
        prop_assert_eq!(canonical_code(&h), canonical_code(&g));
        prop_assert_eq!(aut_group(&h).order, aut_group(&g).order);
        let iso = are_isomorphic(&g, &h).unwrap();
        prop_assert!(verify_isomorphism(&g, &h, &iso));
        prop_assert_eq!(DecoratedGraph::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn moves_are_sound((name, g) in corpus_graph(), pick in any::<prop::sample::Index>(), side in any::<bool>()) {
        let multi: Vec<usize> = (0..g.vertices.len()).filter(|&v| g.vertices[v].label.gamma().is_some()).collect();
        let o = multi[pick.index(multi.len())];
        let gm = g.vertices[o].label.gamma().unwrap();
        let data = g.derived_data().sorted();
        let arc = pick.index(gm.arcs.len()) + 1;
        if let Ok(out) = collapse_arc(&g, o, arc) {
            if let CollapseOutcome::Internal { graph } = &out {
                prop_assert_eq!(graph.derived_data().sorted(), data.clone());
            }
            if !matches!(out, CollapseOutcome::Rejected { .. }) {
                prop_assert!(validate_graph(out.graph().unwrap()).is_ok(), "{} collapse", name);
            }
        }
        let v = pick.index(gm.vertices.len());
        let side = if side { Side::Upper } else { Side::Lower };
        for mv in [Refinement::ReduceVertex { o, v }, Refinement::SplitTrivalent { o, v, side, angle: None }] {
            if let Ok(t) = refine(&g, &mv) {
                prop_assert!(validate_graph(&t).is_ok());
                prop_assert_eq!(t.derived_data().sorted(), data.clone());
                prop_assert_eq!(check_exists(&t).verdict == strata_core::graph::Existence::Nonempty,
                    check_exists(&g).verdict == strata_core::graph::Existence::Nonempty);
            }
        }
    }

    #[test]
    fn lattice_actions_compose(n1 in pair(5), n2 in pair(5), which in 0usize..4) {
        let g = [a4(), a5(), a6(), a7()][which].clone();
        let x = interior_point(&g).unwrap();
        let l = |n: IntPair| GroupElement::Lattice { n };
        let y = act(&g, &l(n2), &act(&g, &l(n1), &x).unwrap()).unwrap();
        prop_assert_eq!(&y, &act(&g, &l(n1 + n2), &x).unwrap());
        prop_assert!(validate_point(&g, &y).is_ok());
        prop_assert!(orbits_equal(&g, &x, &y));
        prop_assert!(orbits_equal(&g, &y, &x));
    }
}
