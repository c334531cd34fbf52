//! Acceptance gate: one PASS/FAIL line per criterion.

mod common;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strata_core::asymptotic::{
    check_linear_exists, linear_graph, moduli_dimension, validate_data, AsymptoticData, Eps, FourTuple, LinearGraph,
};
use strata_core::exactnum::{cmp_angle, defines_angle, rat, sign_alpha_at, AngleSpec, IntPair, Rational, Sign};
use strata_core::graph::{
    blow_up, check_exists, phi_eval, path_set_pairing, validate_graph, DecoratedGraph, Existence, Path, PathSet,
};
use strata_core::orbit::{
    act_in, interior_point_in, orbits_equal_in, reeb_invariant_in, validate_point_in, Frame, GroupElement, OrbitError,
    OrbitPoint,
};
use strata_core::strata::{
    arc_difference_class, census_full, collapse_arc, refine, split_at_arcset, Bounds, CensusEntry, CollapseOutcome,
    Refinement, Side,
};
use strata_core::symmetry::{aut_elements, aut_group, stabilizer};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

// ---------- float oracle ----------

const RANGE: i64 = 30;

/// `cos θ` of the pair by the quadratic formula, when it lies in `(−1, 1)`.
///
/// `(p, 0)` with `p < 0` solves the equation at `π/2` but is excluded by the
/// definability rule `|p′/p| > √(3/2)`.
fn cos_oracle(p: i64, pp: i64) -> Option<f64> {
    let (p, pp) = (p as f64, pp as f64);
    if pp == 0.0 {
        return (p > 0.0).then_some(0.0);
    }
    let s6 = 6f64.sqrt();
    let c = (-s6 * p + (6.0 * p * p + 12.0 * pp * pp).sqrt()) / (6.0 * pp);
    (c.abs() < 1.0).then_some(c)
}

fn alpha_oracle(p: i64, pp: i64, c: f64) -> f64 {
    pp as f64 * (1.0 - 3.0 * c * c) - p as f64 * 6f64.sqrt() * c
}

fn grid() -> Vec<IntPair> {
    let mut out = Vec::new();
    for p in -RANGE..=RANGE {
        for pp in -RANGE..=RANGE {
            if p != 0 || pp != 0 {
                out.push(IntPair::new(p, pp));
            }
        }
    }
    out
}

fn sign_of(x: f64) -> Sign {
    if x > 0.0 {
        Sign::Positive
    } else if x < 0.0 {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let all = grid();
    let mut bad = Vec::new();
    let mut angles: Vec<(AngleSpec, f64, f64)> = vec![(AngleSpec::Zero, 1.0, 0.0), (AngleSpec::Pi, -1.0, std::f64::consts::PI)];
    for &q in &all {
        let oracle = cos_oracle(q.p, q.pp);
        let exact = defines_angle(q).map_err(|e| e.to_string())?;
        if let Some(c) = oracle {
            if 1.0 - c.abs() > 1e-9 && !exact {
                bad.push(format!("defines_angle{q} = false, oracle cos {c}"));
            }
            if exact {
                angles.push((AngleSpec::Interior(q), c, c.acos()));
            }
        } else if exact {
            bad.push(format!("defines_angle{q} = true, oracle undefined"));
        }
    }
    let mut evaluated = 0u64;
    for &p in &all {
        for (a, c, _) in &angles {
            let f = alpha_oracle(p.p, p.pp, *c);
            if f.abs() <= 1e-9 {
                continue;
            }
            evaluated += 1;
            let s = sign_alpha_at(p, a).map_err(|e| e.to_string())?;
            if s != sign_of(f) && bad.len() < 10 {
                bad.push(format!("sign α{p} at {a}: exact {s:?}, float {f}"));
            }
        }
    }
    let mut compared = 0u64;
    for (a, _, ta) in &angles {
        for (b, _, tb) in &angles {
            if (ta - tb).abs() <= 1e-9 {
                continue;
            }
            compared += 1;
            let want = if ta < tb { Ordering::Less } else { Ordering::Greater };
            if cmp_angle(a, b) != want && bad.len() < 10 {
                bad.push(format!("cmp {a} {b}: exact {:?}, float {ta} {tb}", cmp_angle(a, b)));
            }
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("{evaluated} signs, {compared} comparisons, 0 mismatches in {:.1?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let all: Vec<(IntPair, f64)> =
        grid().into_iter().filter_map(|q| cos_oracle(q.p, q.pp).map(|c| (q, c.acos()))).collect();
    let mut same_sign = 0u64;
    let mut cross = 0u64;
    for &(p, tp) in &all {
        for &(q, tq) in &all {
            let exact = cmp_angle(&AngleSpec::Interior(p), &AngleSpec::Interior(q));
            if p.pp != 0 && q.pp != 0 && (p.pp > 0) == (q.pp > 0) {
                // θ_P > θ_Q iff p′q − pq′ < 0
                let d = p.pp as i128 * q.p as i128 - p.p as i128 * q.pp as i128;
                let rule = match d.cmp(&0) {
                    Ordering::Less => Ordering::Greater,
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => Ordering::Less,
                };
                ensure(exact == rule, || format!("determinant rule fails on {p} {q}"))?;
                if (tp - tq).abs() > 1e-9 {
                    ensure((tp > tq) == (rule == Ordering::Greater), || format!("determinant rule vs float on {p} {q}"))?;
                }
                same_sign += 1;
            } else if p.pp < 0 && q.pp > 0 {
                ensure(exact == Ordering::Greater && tp > tq, || format!("half-plane rule on {p} {q}"))?;
                cross += 1;
            }
        }
    }
    // the literal "p < 0 and q′ > 0" reading fails here
    let (p, q) = (IntPair::new(-1, 2), IntPair::new(0, 1));
    let tp = cos_oracle(p.p, p.pp).unwrap().acos();
    let tq = cos_oracle(q.p, q.pp).unwrap().acos();
    ensure((tp - 0.6155).abs() < 1e-4 && (tq - 0.9553).abs() < 1e-4, || format!("float angles {tp} {tq}"))?;
    let literal_says_greater = p.p < 0 && q.pp > 0;
    let exact = cmp_angle(&AngleSpec::Interior(p), &AngleSpec::Interior(q));
    ensure(literal_says_greater && exact == Ordering::Less && tp < tq, || {
        format!("counterexample not reproduced: exact {exact:?}")
    })?;
    Ok(format!(
        "determinant rule on {same_sign} same-sign pairs, p′-keyed half-plane rule on {cross} pairs; \
         literal p-keyed rule refuted by (−1,2) vs (0,1): {tp:.4} < {tq:.4}"
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let a4 = a4_data();
    ensure(validate_data(&a4).is_ok(), || "A4 data invalid".into())?;
    let g = linear(&a4);
    ensure(validate_graph(&g).is_ok(), || "A4 graph invalid".into())?;
    let pairs: Vec<IntPair> = g.edges.iter().map(|e| e.pair).collect();
    ensure(pairs == vec![IntPair::new(1, 1), IntPair::new(1, 2)], || format!("A4 edges {pairs:?}"))?;
    let rep = check_linear_exists(&a4).map_err(|e| e.to_string())?;
    ensure(rep.verdict == Existence::Nonempty, || format!("A4 verdict {:?}", rep.verdict))?;
    ensure(moduli_dimension(&a4) == 3, || format!("A4 dim {}", moduli_dimension(&a4)))?;

    let cp = cplus_data();
    let g = linear(&cp);
    let pairs: Vec<IntPair> = g.edges.iter().map(|e| e.pair).collect();
    ensure(pairs == vec![IntPair::new(0, -1), IntPair::new(2, 3)], || format!("ç₊ edges {pairs:?}"))?;
    let rep = check_linear_exists(&cp).map_err(|e| e.to_string())?;
    let Existence::Empty { witness, .. } = rep.verdict else {
        return Err("ç₊ instance reported nonempty".into());
    };
    let w = match witness {
        AngleSpec::Interior(q) => cos_oracle(q.p, q.pp).ok_or("witness undefined")?.acos(),
        AngleSpec::Zero => 0.0,
        AngleSpec::Pi => std::f64::consts::PI,
    };
    ensure(0.955 < w && w < 2.186, || format!("witness at {w}"))?;

    let cy = cylinder_data();
    ensure(matches!(linear_graph(&cy), Ok(LinearGraph::Cylinder { .. })), || "cylinder not special".into())?;
    ensure(moduli_dimension(&cy) == 1, || "cylinder dim".into())?;
    let c = census_full(&cy, &Bounds::default()).map_err(|e| e.to_string())?;
    ensure(c.len() == 1 && c[0].cylinder && c[0].dim == 1, || "cylinder census".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("A4, ç₊ (witness θ ≈ {w:.3}) and cylinder instances in {:.1?}", start.elapsed()))
}

// ---------- census corpora ----------

fn corpus_data() -> Vec<(String, AsymptoticData)> {
    vec![
        ("A4".into(), a4_data()),
        ("A5".into(), a5_data()),
        ("A6".into(), a6_data()),
        ("A7".into(), a7().derived_data()),
    ]
}

/// A valid data set of `L` tuples with `δ = 0`, balanced by its last tuple.
fn random_data(rng: &mut ChaCha8Rng) -> Option<AsymptoticData> {
    let l = rng.gen_range(2..=4);
    let c_plus = i64::from(rng.gen_bool(0.15));
    let mut tuples = Vec::new();
    let (mut sp, mut spp) = (0i64, c_plus);
    for _ in 0..l - 1 {
        let eps = if rng.gen_bool(0.5) { Eps::Plus } else { Eps::Minus };
        let (p, pp) = (rng.gen_range(-3..=3), rng.gen_range(-4..=4));
        sp += eps.sign() * p;
        spp += eps.sign() * pp;
        tuples.push(FourTuple::new(0, eps, p, pp));
    }
    let eps = if rng.gen_bool(0.5) { Eps::Plus } else { Eps::Minus };
    // ε(p, p′) cancels the running sums
    tuples.push(FourTuple::new(0, eps, -eps.sign() * sp, -eps.sign() * spp));
    let a = AsymptoticData::new(0, c_plus, tuples);
    validate_data(&a).is_ok().then_some(a)
}

fn thm_dimension(a: &AsymptoticData) -> i64 {
    let count = |f: &dyn Fn(&FourTuple) -> bool| a.tuples.iter().filter(|t| f(t)).count() as i64;
    let n_plus = count(&|t| t.delta == 0 && t.eps == Eps::Plus);
    let n_minus = count(&|t| t.delta == 0 && t.eps == Eps::Minus);
    let n_hat = count(&|t| t.delta != 0);
    n_plus + 2 * (n_minus + n_hat + a.c_minus + a.c_plus - 1)
}

fn check_entry_dims(name: &str, a: &AsymptoticData, entries: &[CensusEntry]) -> Result<(), String> {
    let n_plus = a.tuples.iter().filter(|t| t.delta == 0 && t.eps == Eps::Plus).count() as i64;
    let mut best = i64::MIN;
    for e in entries.iter().filter(|e| !e.boundary) {
        if e.cylinder {
            ensure(e.dim == 1, || format!("{name}: cylinder dim {}", e.dim))?;
            best = best.max(e.dim);
            continue;
        }
        let t = e.representative.as_ref().ok_or_else(|| format!("{name}: {} has no representative", e.key))?;
        let s = e.stratum.as_ref().ok_or_else(|| format!("{name}: {} has no stratum data", e.key))?;
        let mut gamma_vertices = 0i64;
        let mut c = 0i64;
        let mut b = 0i64;
        for v in &t.vertices {
            let Some(g) = v.label.gamma() else { continue };
            gamma_vertices += g.vertices.len() as i64;
            c += g.vertices.iter().filter(|x| x.m == 0).count() as i64;
            b += v.label.tuples().iter().filter(|x| x.delta == 0 && x.eps == Eps::Minus).count() as i64;
        }
        let m = s.m as i64;
        let by_gamma = 2 + m + gamma_vertices;
        let by_data = n_plus + b + c + m + 2;
        ensure(e.dim == by_gamma && e.dim == by_data, || {
            format!("{name}: {} dim {} vs 2+m+ΣV = {by_gamma}, N₊+|B|+c+m+2 = {by_data}", e.key, e.dim)
        })?;
        best = best.max(e.dim);
    }
    let want = thm_dimension(a);
    ensure(best == want, || format!("{name}: max dim {best}, dimension formula {want}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let bounds = Bounds::default();
    let mut checked = 0usize;
    for (name, a) in corpus_data() {
        let entries = census_full(&a, &bounds).map_err(|e| format!("{name}: {e}"))?;
        check_entry_dims(&name, &a, &entries)?;
        checked += entries.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut sets = 0usize;
    let mut tries = 0usize;
    while sets < 100 {
        tries += 1;
        ensure(tries < 20_000, || format!("only {sets} feasible random data sets"))?;
        let Some(a) = random_data(&mut rng) else { continue };
        let Ok(entries) = census_full(&a, &bounds) else { continue };
        // feasibility: the census sees a nonempty stratum
        if !entries.iter().any(|e| e.nonempty && !e.boundary) {
            continue;
        }
        check_entry_dims(&format!("random {a:?}"), &a, &entries)?;
        checked += entries.len();
        sets += 1;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{checked} entries over 4 corpora and {sets} random data sets in {:.1?}", start.elapsed()))
}

/// Every graph the move and oracle suites run over.
fn graph_corpus() -> Vec<(String, DecoratedGraph)> {
    let mut out: Vec<(String, DecoratedGraph)> = corpus().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    out.push(("four-arc".into(), four_arc()));
    out.push(("cancel-pair".into(), cancel_pair()));
    out.push(("six-valent".into(), six_valent()));
    for (name, a) in corpus_data() {
        if let Ok(entries) = census_full(&a, &Bounds::default()) {
            for (i, e) in entries.into_iter().enumerate() {
                if let Some(r) = e.representative {
                    out.push((format!("{name} census {i}"), r));
                }
            }
        }
    }
    out
}

fn criterion_5(graphs: &[(String, DecoratedGraph)]) -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for (name, g) in graphs {
        if g.gamma_vertex_count() > 8 {
            continue;
        }
        let a = aut_group(g).order;
        let b = brute_force_aut_count(g);
        ensure(a == b, || format!("{name}: aut order {a}, brute force {b}"))?;
        n += 1;
    }
    for (g, want) in [(a4(), 1), (a5(), 2), (a6(), 4)] {
        ensure(aut_group(&g).order == want, || format!("expected order {want}"))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{n} graphs agree with brute force in {:.1?}", start.elapsed()))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn criterion_6() -> Outcome {
    let g = a6();
    let f = Frame::new(&g);
    let o = (0..g.vertices.len()).find(|&v| g.vertices[v].label.gamma().is_some_and(|x| x.arcs.len() == 4)).ok_or("no circle")?;
    let gm = g.vertices[o].label.gamma().unwrap();
    let edge = *gm.loops.keys().next().unwrap();
    let order: Vec<usize> = gm.loops[&edge].iter().map(|x| x.unsigned_abs() as usize).collect();
    let n = order.len() as i64;
    let m_minus = g.edges.iter().filter(|e| e.from == o || e.to == o).map(|e| e.pair.gcd()).fold(0, gcd);
    let k = gcd(m_minus, n);
    let brute = |r: &BTreeMap<usize, Rational>| -> usize {
        (0..k)
            .filter(|j| {
                let s = (j * (n / k)) as usize;
                (0..order.len()).all(|i| r[&order[i]] == r[&order[(i + s) % order.len()]])
            })
            .count()
    };
    let base = interior_point_in(&g, &f).ok_or("no A6 point")?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases: Vec<BTreeMap<usize, Rational>> = vec![(1..=4).map(|a| (a, rat(1, 4))).collect()];
    for _ in 0..30 {
        let w: Vec<i64> = (0..4).map(|_| rng.gen_range(1..20)).collect();
        let total: i64 = w.iter().sum();
        cases.push((0..4).map(|i| (order[i], rat(w[i], total))).collect());
        let (x, y) = (rng.gen_range(1..20), rng.gen_range(1..20));
        cases.push((0..4).map(|i| (order[i], rat(if i % 2 == 0 { x } else { y }, 2 * (x + y)))).collect());
    }
    let mut seen = BTreeMap::new();
    for r in &cases {
        let mut x = base.clone();
        x.r.insert(o, r.clone());
        ensure(validate_point_in(&g, &f, &x).is_ok(), || format!("invalid A6 point {r:?}"))?;
        let s = stabilizer(&g, &x.r).order;
        let b = brute(r);
        ensure(s == b, || format!("stabilizer {s}, brute force {b} on {r:?}"))?;
        ensure(k as usize % s == 0, || format!("order {s} exceeds k = {k}"))?;
        *seen.entry(s).or_insert(0) += 1;
    }
    ensure(stabilizer(&g, &{
        let mut x = base.clone();
        x.r.insert(o, cases[0].clone());
        x.r
    })
    .order
        == 2, || "all-equal point should have order 2".into())?;
    ensure(seen.contains_key(&1), || "no generic point was trivial".into())?;
    Ok(format!("k = gcd({m_minus}, {n}) = {k}; {} points, orders {seen:?}", cases.len()))
}

fn random_element(rng: &mut ChaCha8Rng, t: &DecoratedGraph, f: &Frame, auts: &[strata_core::symmetry::Isomorphism]) -> GroupElement {
    let shift = f.shiftable();
    match rng.gen_range(0..3) {
        1 if !shift.is_empty() => {
            GroupElement::VertexShift { vertex: shift[rng.gen_range(0..shift.len())], k: rng.gen_range(-3..=3) }
        }
        2 if auts.len() > 1 && f.aut.edge_fixing() => GroupElement::AutElt { iso: auts[rng.gen_range(0..auts.len())].clone() },
        _ => {
            let _ = t;
            GroupElement::Lattice { n: IntPair::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3)) }
        }
    }
}

fn reeb_all(t: &DecoratedGraph, f: &Frame, x: &OrbitPoint) -> Result<Vec<f64>, OrbitError> {
    let mut out = Vec::new();
    for v in &t.vertices {
        let Some(g) = v.label.gamma() else { continue };
        for u in &g.vertices {
            if u.m != 0 {
                out.push(reeb_invariant_in(t, f, v.id, u.id, x)?);
            }
        }
    }
    Ok(out)
}

fn same_mod_2pi(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d) < 1e-9
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pool = Vec::new();
    for (name, g) in corpus() {
        let f = Frame::new(&g);
        if let Some(x) = interior_point_in(&g, &f) {
            let auts = aut_elements(&g, &f.aut);
            pool.push((name, g, f, x, auts));
        }
    }
    ensure(!pool.is_empty(), || "no graph has an interior point".into())?;
    let mut aut_cases = 0;
    for case in 0..1000 {
        let (name, t, f, x0, auts) = &pool[rng.gen_range(0..pool.len())];
        let warm = GroupElement::Lattice { n: IntPair::new(rng.gen_range(-2..=2), rng.gen_range(-2..=2)) };
        let x = act_in(t, f, &warm, x0).map_err(|e| e.to_string())?;
        let a = random_element(&mut rng, t, f, auts);
        let b = random_element(&mut rng, t, f, auts);
        let ya = act_in(t, f, &a, &x).map_err(|e| format!("{name} case {case}: {e}"))?;
        ensure(validate_point_in(t, f, &ya).is_ok(), || format!("{name} case {case}: {a:?} broke validity"))?;
        let translation = |g: &GroupElement| !matches!(g, GroupElement::AutElt { .. });
        if translation(&a) && translation(&b) {
            let ab = act_in(t, f, &b, &ya).map_err(|e| e.to_string())?;
            let ba = act_in(t, f, &a, &act_in(t, f, &b, &x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(ab == ba, || format!("{name} case {case}: {a:?} and {b:?} do not commute"))?;
            ensure(orbits_equal_in(t, f, &x, &ab), || format!("{name} case {case}: orbit of an act-image missed"))?;
        } else {
            aut_cases += 1;
        }
        if translation(&a) {
            let r0 = reeb_all(t, f, &x).map_err(|e| e.to_string())?;
            let r1 = reeb_all(t, f, &ya).map_err(|e| e.to_string())?;
            ensure(r0.iter().zip(&r1).all(|(u, v)| same_mod_2pi(*u, *v)), || {
                format!("{name} case {case}: Reeb invariants moved under {a:?}: {r0:?} vs {r1:?}")
            })?;
            ensure(orbits_equal_in(t, f, &x, &ya), || format!("{name} case {case}: {a:?} image not identified"))?;
        }
        let mut off = ya.clone();
        off.tau_minus += rat(1, 2);
        ensure(!orbits_equal_in(t, f, &x, &off), || format!("{name} case {case}: half-step τ₋ shift identified"))?;
    }
    Ok(format!("1000 seeded cases over {} graphs ({aut_cases} involving Aut)", pool.len()))
}

fn criterion_8(graphs: &[(String, DecoratedGraph)]) -> Outcome {
    let mut pairs = 0;
    let mut saw_four_arc = false;
    for (name, t) in graphs {
        for v in &t.vertices {
            let Some(gm) = v.label.gamma() else { continue };
            for (i, a) in gm.arcs.iter().enumerate() {
                for (j, b) in gm.arcs.iter().enumerate() {
                    if i == j || a.from != b.from || a.to != b.to || a.from == a.to {
                        continue;
                    }
                    let c = arc_difference_class(t, v.id, i + 1, j + 1).map_err(|e| format!("{name} o={}: {e}", v.id))?;
                    let mut chain = vec![0i64; gm.arcs.len()];
                    let mut q = IntPair::ZERO;
                    for (&e, &k) in &c.coefficients {
                        for &id in &gm.loops[&e] {
                            chain[id.unsigned_abs() as usize - 1] += k as i64 * id.signum();
                        }
                        q = q + IntPair::new(k as i64 * t.edges[e].pair.p, k as i64 * t.edges[e].pair.pp);
                    }
                    let mut want = vec![0i64; gm.arcs.len()];
                    want[i] += 1;
                    want[j] -= 1;
                    ensure(chain == want, || format!("{name} o={} arcs {} {}: Σcℓ = {chain:?}", v.id, i + 1, j + 1))?;
                    ensure(q == c.q, || format!("{name} o={}: ΣcQ = {q}, class says {}", v.id, c.q))?;
                    pairs += 1;
                    saw_four_arc |= name == "four-arc";
                }
            }
        }
    }
    ensure(saw_four_arc, || "the four-arc graph was not exercised".into())?;
    Ok(format!("{pairs} ordered parallel pairs"))
}

fn nonempty(t: &DecoratedGraph) -> bool {
    check_exists(t).verdict == Existence::Nonempty
}

fn criterion_9(graphs: &[(String, DecoratedGraph)]) -> Outcome {
    let mut counts = [0usize; 3];
    for (name, t) in graphs {
        let data = t.derived_data().sorted();
        let sound = |what: &str, g: &DecoratedGraph, d: &AsymptoticData| -> Result<(), String> {
            let r = validate_graph(g);
            ensure(r.is_ok(), || format!("{name}: {what} gave an invalid graph: {r}"))?;
            ensure(validate_data(d).is_ok(), || format!("{name}: {what} broke the data totals"))?;
            ensure(g.derived_data().sorted() == d.sorted(), || format!("{name}: {what} graph/data mismatch"))
        };
        for v in &t.vertices {
            let Some(gm) = v.label.gamma() else { continue };
            let o = v.id;
            for arc in 1..=gm.arcs.len() {
                let Ok(out) = collapse_arc(t, o, arc) else { continue };
                let label = format!("collapse o={o} arc={arc}");
                match &out {
                    CollapseOutcome::Internal { graph } => sound(&label, graph, &data)?,
                    CollapseOutcome::BoundarySameMerge { data: d, graph, .. }
                    | CollapseOutcome::BoundaryCancel { data: d, graph, .. } => sound(&label, graph, d)?,
                    CollapseOutcome::Rejected { .. } => continue,
                }
                counts[0] += 1;
            }
            for a in 1..=gm.arcs.len() {
                for b in a + 1..=gm.arcs.len() {
                    let Ok(pieces) = split_at_arcset(t, o, &[a, b]) else { continue };
                    for p in &pieces {
                        sound(&format!("split o={o} {{{a},{b}}}"), &p.graph, &p.data)?;
                        counts[1] += 1;
                    }
                }
            }
            let mut moves: Vec<Refinement> = (0..gm.vertices.len()).map(|u| Refinement::ReduceVertex { o, v: u }).collect();
            for u in 0..gm.vertices.len() {
                for side in [Side::Upper, Side::Lower] {
                    moves.push(Refinement::SplitTrivalent { o, v: u, side, angle: None });
                }
            }
            for mv in moves {
                let Ok(t2) = refine(t, &mv) else { continue };
                sound(&format!("{mv:?}"), &t2, &data)?;
                ensure(nonempty(t) == nonempty(&t2), || format!("{name}: {mv:?} changed the existence verdict"))?;
                counts[2] += 1;
            }
        }
    }
    ensure(counts.iter().all(|&c| c > 0), || format!("some move never applied: {counts:?}"))?;
    Ok(format!("{} collapses, {} split pieces, {} refinements", counts[0], counts[1], counts[2]))
}

fn criterion_10(graphs: &[(String, DecoratedGraph)]) -> Outcome {
    let mut lifted = 0;
    let mut sets = 0;
    for (name, t) in graphs {
        for v in &t.vertices {
            let Some(gm) = v.label.gamma() else { continue };
            let o = v.id;
            let b = blow_up(t, o).map_err(|e| format!("{name}: {e}"))?;
            for (l, e) in b.lifted_loops.iter().zip(&b.edge_ids) {
                let got = phi_eval(&b, l).map_err(|e| e.to_string())?;
                ensure(got == t.edges[*e].pair, || format!("{name} o={o} e={e}: φ = {got}"))?;
                lifted += 1;
            }
            for (&e, ids) in &gm.loops {
                let arcs: Vec<usize> = ids.iter().map(|x| x.unsigned_abs() as usize).collect();
                let q = t.edges[e].pair;
                let around: Vec<(usize, bool)> = arcs.iter().chain(&arcs[..1]).map(|&a| (a, true)).collect();
                let set = PathSet { vertex: o, paths: vec![Path { edge: e, steps: around }] };
                let fwd = path_set_pairing(t, &set).map_err(|err| format!("{name} o={o} e={e}: {err}"))?;
                let back = path_set_pairing(t, &set.reversed()).map_err(|err| err.to_string())?;
                ensure(fwd == q || fwd == -q, || format!("{name} o={o} e={e}: circumnavigation gives {fwd}, Q = {q}"))?;
                ensure(back == -fwd, || format!("{name} o={o} e={e}: reversed circumnavigation gives {back}"))?;
                for k in 0..arcs.len() {
                    let (a, c) = (arcs[k], arcs[(k + 1) % arcs.len()]);
                    let steps = if arcs.len() == 1 {
                        vec![(a, true), (a, false), (a, true)]
                    } else {
                        vec![(a, true), (c, true), (c, false), (a, false), (a, true)]
                    };
                    let set = PathSet { vertex: o, paths: vec![Path { edge: e, steps }] };
                    let z = path_set_pairing(t, &set).map_err(|err| format!("{name} o={o} e={e}: {err}"))?;
                    ensure(z == IntPair::ZERO, || format!("{name} o={o} e={e}: out-and-back gives {z}"))?;
                    sets += 1;
                }
                sets += 2;
            }
        }
    }
    Ok(format!("{lifted} lifted loops, {sets} path sets"))
}

fn main() {
    let graphs = graph_corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("exact-sign oracle equivalence", Box::new(criterion_1)),
        ("comparison-rule audit", Box::new(criterion_2)),
        ("worked instances", Box::new(criterion_3)),
        ("dimension coherence on every census", Box::new(criterion_4)),
        ("automorphism oracle", Box::new(|| criterion_5(&graphs))),
        ("stabilizer oracle", Box::new(criterion_6)),
        ("orbit-action suite", Box::new(criterion_7)),
        ("arc-difference chain identity", Box::new(|| criterion_8(&graphs))),
        ("move soundness", Box::new(|| criterion_9(&graphs))),
        ("φ homomorphism and pairing anchors", Box::new(|| criterion_10(&graphs))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match out {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
