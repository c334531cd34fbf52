mod common;

use std::collections::BTreeMap;

use common::*;
use strata_core::exactnum::{rat, rat_int, IntPair, Rational};
use strata_core::orbit::*;
use strata_core::symmetry::{aut_elements, aut_group, stabilizer};

fn a4_point(tau_b: Rational) -> OrbitPoint {
    let mut x = interior_point(&a4()).unwrap();
    x.tau.insert(1, tau_b);
    x
}

#[test]
fn a4_interior_point_is_forced() {
    let x = interior_point(&a4()).unwrap();
    assert_eq!(x.r[&1][&1], rat_int(1));
    assert!(validate_point(&a4(), &x).is_ok());
}

#[test]
fn a5_points() {
    let g = a5();
    let x = interior_point(&g).unwrap();
    assert!(validate_point(&g, &x).is_ok());
    let mut y = x.clone();
    y.r.insert(1, [(1, rat(1, 2)), (2, rat(1, 2))].into_iter().collect());
    assert!(validate_point(&g, &y).is_ok());
    y.r.insert(1, [(1, rat_int(1)), (2, rat_int(0))].into_iter().collect());
    assert!(validate_point(&g, &y).has("point-positive"));
}

#[test]
fn a4_lattice_examples() {
    let g = a4();
    let x = a4_point(rat_int(0));
    let y = act(&g, &GroupElement::Lattice { n: IntPair::new(0, 1) }, &x).unwrap();
    assert_eq!(y.tau[&1], rat_int(0));
    assert_eq!(y.tau_minus, rat_int(-1));
    let y = act(&g, &GroupElement::Lattice { n: IntPair::new(1, 0) }, &x).unwrap();
    assert_eq!(y.tau[&1], rat_int(-1));
    assert_eq!(y.tau_minus, rat_int(1));
    assert_eq!(act(&g, &GroupElement::Lattice { n: IntPair::ZERO }, &x).unwrap(), x);
}

#[test]
fn a4_orbit_examples() {
    let g = a4();
    let x = a4_point(rat_int(0));
    assert!(!orbits_equal(&g, &x, &a4_point(rat(1, 2))));
    let mut y = x.clone();
    y.tau_minus = rat_int(-1);
    assert!(orbits_equal(&g, &x, &y));
}

#[test]
fn a4_reeb_examples() {
    let g = a4();
    let x = a4_point(rat_int(0));
    assert!(reeb_invariant(&g, 1, 0, &x).unwrap().abs() < 1e-12);
    let y = act(&g, &GroupElement::Lattice { n: IntPair::new(1, 0) }, &x).unwrap();
    let v = reeb_invariant(&g, 1, 0, &y).unwrap();
    assert!(v.min(2.0 * std::f64::consts::PI - v) < 1e-9, "{v}");
    let q = reeb_invariant(&g, 1, 0, &a4_point(rat(1, 4))).unwrap();
    assert!((q - std::f64::consts::FRAC_PI_2).abs() < 1e-9, "{q}");
}

#[test]
fn a6_stabilizers() {
    let g = a6();
    let mut x = interior_point(&g).unwrap();
    x.r.insert(1, (1..=4).map(|a| (a, rat(1, 4))).collect());
    assert!(validate_point(&g, &x).is_ok());
    assert_eq!(stabilizer(&g, &x.r).order, 2);
    let mut y = x.clone();
    let b: BTreeMap<usize, Rational> =
        [(1, rat(1, 6)), (2, rat(1, 3)), (3, rat(1, 6)), (4, rat(1, 3))].into_iter().collect();
    y.r.insert(1, b);
    assert!(validate_point(&g, &y).is_ok());
    assert_eq!(stabilizer(&g, &y.r).order, 2);
    let b: BTreeMap<usize, Rational> =
        [(1, rat(1, 10)), (2, rat(2, 10)), (3, rat(3, 10)), (4, rat(4, 10))].into_iter().collect();
    y.r.insert(1, b);
    assert_eq!(stabilizer(&g, &y.r).order, 1);
    assert_eq!(stabilizer(&a4(), &interior_point(&a4()).unwrap().r).order, 1);
}

#[test]
fn aut_action_preserves_validity() {
    for (name, g) in corpus() {
        let Some(x) = interior_point(&g) else { continue };
        let a = aut_group(&g);
        for iso in aut_elements(&g, &a) {
            match act(&g, &GroupElement::AutElt { iso }, &x) {
                Ok(y) => assert!(validate_point(&g, &y).is_ok(), "{name}"),
                Err(OrbitError::UnsupportedExtension) => {}
                Err(e) => panic!("{name}: {e}"),
            }
        }
    }
}

#[test]
fn point_json_round_trip() {
    let mut x = interior_point(&a6()).unwrap();
    x.r.insert(1, (1..=4).map(|a| (a, rat(1, 4))).collect());
    let s = x.to_json();
    assert!(s.contains("\"1/4\""));
    assert_eq!(OrbitPoint::from_json(&s).unwrap(), x);
}
