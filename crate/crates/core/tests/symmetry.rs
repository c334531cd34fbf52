mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strata_core::graph::homotopy_signature;
use strata_core::exactnum::IntPair;
use strata_core::symmetry::*;

#[test]
fn aut_orders_match_brute_force() {
    for (name, g) in corpus() {
        assert_eq!(aut_group(&g).order, brute_force_aut_count(&g), "{name}");
    }
    assert_eq!(aut_group(&a4()).order, 1);
    assert_eq!(aut_group(&a5()).order, 2);
    assert_eq!(aut_group(&a6()).order, 4);
}

#[test]
fn aut_elements_are_automorphisms() {
    for (name, g) in corpus() {
        let a = aut_group(&g);
        let all = aut_elements(&g, &a);
        assert_eq!(all.len() as u64, a.order, "{name}");
        for x in &all {
            assert!(verify_isomorphism(&g, &g, x), "{name}");
        }
    }
}

#[test]
fn isomorphism_examples() {
    let id = are_isomorphic(&a4(), &a4()).unwrap();
    assert!(verify_isomorphism(&a4(), &a4(), &id));
    assert!(are_isomorphic(&a4(), &a5()).is_none());
    // swap the two +1 Γ vertices of the A5 circle vertex
    let g = a5();
    let pv: Vec<usize> = (0..g.vertices.len()).collect();
    let pe: Vec<usize> = (0..g.edges.len()).collect();
    let pgv = [(1, vec![1, 0])].into_iter().collect();
    let pa = [(1, vec![0, 1])].into_iter().collect();
    let h = relabel(&g, &pv, &pe, &pgv, &pa, 0);
    assert_ne!(g, h);
    let iso = are_isomorphic(&g, &h).unwrap();
    assert!(verify_isomorphism(&g, &h, &iso));
    assert!(!iso.is_identity());
}

#[test]
fn random_relabelings_are_isomorphic() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, g) in corpus() {
        for _ in 0..20 {
            let h = random_relabel(&g, &mut rng);
            let iso = are_isomorphic(&g, &h).unwrap_or_else(|| panic!("{name}"));
            assert!(verify_isomorphism(&g, &h, &iso));
            assert!(verify_isomorphism(&h, &g, &iso.inverse()));
            assert_eq!(canonical_code(&g), canonical_code(&h));
            assert_eq!(homotopy_signature(&g), homotopy_signature(&h));
            assert_eq!(aut_group(&h).order, aut_group(&g).order);
        }
    }
}

#[test]
fn distinct_corpus_graphs_are_not_isomorphic() {
    let c = corpus();
    for (i, (n1, g1)) in c.iter().enumerate() {
        for (n2, g2) in &c[i + 1..] {
            assert!(are_isomorphic(g1, g2).is_none(), "{n1} vs {n2}");
        }
    }
}

#[test]
fn homotopy_signature_examples() {
    assert_eq!(homotopy_signature(&a7_at(IntPair::new(3, -2))), homotopy_signature(&a7()));
    assert_ne!(homotopy_signature(&a7()), homotopy_signature(&a4()));
}

#[test]
fn diagonal_examples() {
    assert_eq!(canonical_diagonal(&a4()).k_t, 1);
    assert_eq!(canonical_diagonal(&a5()).k_t, 1);
    let d = canonical_diagonal(&a6());
    assert_eq!((d.k_t, d.m_minus), (2, 2));
    assert_eq!(d.generator.order(&a6()), 2);
}
