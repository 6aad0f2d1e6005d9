//! Independent oracles for the integration tests. Nothing here calls the
//! library evaluator, validator or satisfiability search.

#![allow(dead_code)]

use bimodal::formula::{Formula, Kind};
use bimodal::semantics::{BimodalModel, FrameClass, WorldId};
use rand::rngs::StdRng;
use rand::Rng;
use std::collections::BTreeSet;

/// Truth of a modality-free formula under `assign`, atom `i` being bit `i`.
pub fn prop_eval(f: &Formula, assign: u64) -> bool {
    match f.kind() {
        Kind::Atom(i) => (assign >> i) & 1 == 1,
        Kind::Not(a) => !prop_eval(a, assign),
        Kind::And(a, b) => prop_eval(a, assign) && prop_eval(b, assign),
        Kind::K(_) | Kind::Box(_) => panic!("modal operator in a propositional check"),
    }
}

/// Textbook recursive truth definition. Exponential in nesting depth, so
/// only for small formulas.
pub fn naive_holds(m: &BimodalModel, w: WorldId, f: &Formula) -> bool {
    match f.kind() {
        Kind::Atom(i) => m.atom_true(*i, w),
        Kind::Not(a) => !naive_holds(m, w, a),
        Kind::And(a, b) => naive_holds(m, w, a) && naive_holds(m, w, b),
        Kind::K(a) => m.l_successors(w).iter().all(|&v| naive_holds(m, v, a)),
        Kind::Box(a) => m.d_successors(w).iter().all(|&v| naive_holds(m, v, a)),
    }
}

type Rel = BTreeSet<(usize, usize)>;

fn pairs(m: &BimodalModel, l: bool) -> Rel {
    if l {
        m.l_pairs().collect()
    } else {
        m.d_pairs().collect()
    }
}

fn reflexive(r: &Rel, n: usize) -> bool {
    (0..n).all(|a| r.contains(&(a, a)))
}

fn symmetric(r: &Rel) -> bool {
    r.iter().all(|&(a, b)| r.contains(&(b, a)))
}

fn transitive(r: &Rel) -> bool {
    r.iter()
        .all(|&(a, b)| r.iter().filter(|&&(c, _)| c == b).all(|&(_, d)| r.contains(&(a, d))))
}

/// `p ◊ q L r` implies some `s` with `p L s ◊ r`.
fn left_commutes(d: &Rel, l: &Rel, n: usize) -> bool {
    d.iter().all(|&(p, q)| {
        l.iter()
            .filter(|&&(a, _)| a == q)
            .all(|&(_, r)| (0..n).any(|s| l.contains(&(p, s)) && d.contains(&(s, r))))
    })
}

/// `p L q ◊ r` implies some `s` with `p ◊ s L r`.
fn right_commutes(d: &Rel, l: &Rel, n: usize) -> bool {
    l.iter().all(|&(p, q)| {
        d.iter()
            .filter(|&&(a, _)| a == q)
            .all(|&(_, r)| (0..n).any(|s| d.contains(&(p, s)) && l.contains(&(s, r))))
    })
}

/// Frame conditions of `class` checked from their first-order definitions.
/// The product class is checked on the commutator conditions plus the
/// declared shape.
pub fn naive_frame_ok(m: &BimodalModel, class: FrameClass) -> bool {
    let n = m.len();
    let (d, l) = (pairs(m, false), pairs(m, true));
    let equivalence = reflexive(&l, n) && symmetric(&l) && transitive(&l);
    let d_ok = transitive(&d) && (class == FrameClass::K4xS5Commutator || reflexive(&d, n));
    let commutes = left_commutes(&d, &l, n)
        && (class == FrameClass::CrossAxiom || right_commutes(&d, &l, n));
    let persistent = class != FrameClass::CrossAxiom
        || m.valuation().values().all(|set| d.iter().all(|(a, b)| set.contains(a) == set.contains(b)));
    let product = class != FrameClass::S4xS5Product || product_ok(m, &d, &l);
    equivalence && d_ok && commutes && persistent && product
}

fn product_ok(m: &BimodalModel, d: &Rel, l: &Rel) -> bool {
    let Some((n1, n2)) = m.product_shape() else { return false };
    if n1 * n2 != m.len() {
        return false;
    }
    let coord = |p: usize| (p / n2, p % n2);
    let d1: BTreeSet<(usize, usize)> = d.iter().map(|&(a, b)| (coord(a).0, coord(b).0)).collect();
    let want_d: Rel = (0..m.len())
        .flat_map(|a| (0..m.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| coord(a).1 == coord(b).1 && d1.contains(&(coord(a).0, coord(b).0)))
        .collect();
    let want_l: Rel = (0..m.len())
        .flat_map(|a| (0..m.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| coord(a).0 == coord(b).0)
        .collect();
    *d == want_d && *l == want_l
}

fn relations(n: usize) -> impl Iterator<Item = Rel> {
    (0u32..1 << (n * n)).map(move |mask| {
        (0..n * n).filter(|&i| (mask >> i) & 1 == 1).map(|i| (i / n, i % n)).collect()
    })
}

fn model_from(n: usize, d: &Rel, l: &Rel, atoms: &[u32], val: u64) -> BimodalModel {
    let mut m = BimodalModel::new();
    for i in 0..n {
        m.add_world(format!("n{}", i)).unwrap();
    }
    for &(a, b) in d {
        m.add_d(a, b);
    }
    for &(a, b) in l {
        m.add_l(a, b);
    }
    for (j, &atom) in atoms.iter().enumerate() {
        m.declare_atom(atom);
        for w in 0..n {
            if (val >> (j * n + w)) & 1 == 1 {
                m.set_atom(atom, w, true);
            }
        }
    }
    m
}

/// Exhaustive search over every pair of relations on up to `max_points`
/// points (at most 3), filtered by [`naive_frame_ok`]. Product frames are
/// enumerated from all shapes `n1 × n2` and all preorders on `W1`.
pub fn naive_sat(f: &Formula, class: FrameClass, max_points: usize) -> Option<(BimodalModel, WorldId)> {
    assert!(max_points <= 3, "the naive oracle is limited to 3 points");
    let atoms: Vec<u32> = f.atoms().into_iter().collect();
    for n in 1..=max_points {
        let frames: Vec<(Rel, Rel, Option<(usize, usize)>)> = if class == FrameClass::S4xS5Product {
            let mut out = Vec::new();
            for n1 in (1..=n).filter(|k| n % k == 0) {
                let n2 = n / n1;
                for r1 in relations(n1).filter(|r| reflexive(r, n1) && transitive(r)) {
                    let id = |v: usize, x: usize| v * n2 + x;
                    let d: Rel = r1
                        .iter()
                        .flat_map(|&(v, v2)| (0..n2).map(move |x| (id(v, x), id(v2, x))))
                        .collect();
                    let l: Rel = (0..n1)
                        .flat_map(|v| (0..n2).flat_map(move |x| (0..n2).map(move |y| (id(v, x), id(v, y)))))
                        .collect();
                    out.push((d, l, Some((n1, n2))));
                }
            }
            out
        } else {
            let ls: Vec<Rel> = relations(n)
                .filter(|l| reflexive(l, n) && symmetric(l) && transitive(l))
                .collect();
            let mut out = Vec::new();
            for d in relations(n) {
                for l in &ls {
                    out.push((d.clone(), l.clone(), None));
                }
            }
            out
        };
        for (d, l, shape) in &frames {
            let mut frame_only = model_from(n, d, l, &[], 0);
            frame_only.set_product_shape(*shape);
            if !naive_frame_ok(&frame_only, class) {
                continue;
            }
            for val in 0u64..1 << (atoms.len() * n) {
                let mut m = model_from(n, d, l, &atoms, val);
                m.set_product_shape(*shape);
                if !naive_frame_ok(&m, class) {
                    continue;
                }
                if let Some(w) = (0..n).find(|&w| naive_holds(&m, w, f)) {
                    return Some((m, w));
                }
            }
        }
    }
    None
}

/// A random formula over atoms `0..atoms` with at most `depth` nested
/// operators.
pub fn random_formula(rng: &mut StdRng, atoms: u32, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return Formula::atom(rng.gen_range(0..atoms));
    }
    match rng.gen_range(0..5) {
        0 => random_formula(rng, atoms, depth - 1).not(),
        1 => random_formula(rng, atoms, depth - 1).and(&random_formula(rng, atoms, depth - 1)),
        2 => random_formula(rng, atoms, depth - 1).k(),
        3 => random_formula(rng, atoms, depth - 1).boxed(),
        _ => random_formula(rng, atoms, depth - 1).diamond(),
    }
}
