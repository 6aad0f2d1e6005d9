//! A bounded satisfiability oracle: exhaustive search over all models with
//! at most a given number of points, used to cross-check the constructions
//! on tiny instances.
//!
//! Models are enumerated in a fixed order. Sizes go up from one point. For
//! each size the `L` partitions come in restricted-growth order, then the
//! `◊` relations in increasing bitmask order (bit `p·m + q` for `p ◊→ q`),
//! then the valuations, with the first atom's point mask varying slowest.
//! The search evaluates formulas on bitmasks and does not use
//! [`crate::semantics::Evaluator`]; a hit is re-checked with it before
//! being returned.

use crate::formula::{AtomId, Formula, Kind};
use crate::semantics::{validate, BimodalModel, Evaluator, FrameClass, WorldId};
use std::collections::HashMap;
use thiserror::Error;

/// Environment variable overriding the ceiling, as `points,atoms`.
pub const CEILING_ENV: &str = "BIMODAL_SAT_CEILING";

/// Hard limit on the number of points: relations are enumerated as bitmasks
/// over all `m²` pairs.
pub const MAX_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("{what} {got} exceeds the ceiling {ceiling}")]
    CeilingExceeded { what: &'static str, got: usize, ceiling: usize },
    #[error("bad value for {CEILING_ENV}: {0}")]
    BadCeiling(String),
}

/// Enumeration limits. The default is 4 points and 3 atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ceiling {
    pub max_points: usize,
    pub max_atoms: usize,
}

impl Default for Ceiling {
    fn default() -> Ceiling {
        Ceiling { max_points: 4, max_atoms: 3 }
    }
}

impl Ceiling {
    /// Parses `points,atoms`. Points may not exceed [`MAX_POINTS`].
    pub fn parse(text: &str) -> Result<Ceiling, SatError> {
        let bad = || SatError::BadCeiling(text.to_string());
        let (p, a) = text.split_once(',').ok_or_else(bad)?;
        let max_points: usize = p.trim().parse().map_err(|_| bad())?;
        let max_atoms: usize = a.trim().parse().map_err(|_| bad())?;
        if max_points == 0 || max_points > MAX_POINTS {
            return Err(bad());
        }
        Ok(Ceiling { max_points, max_atoms })
    }

    /// The ceiling from [`CEILING_ENV`], or the default when it is unset.
    pub fn from_env() -> Result<Ceiling, SatError> {
        match std::env::var(CEILING_ENV) {
            Ok(v) => Ceiling::parse(&v),
            Err(_) => Ok(Ceiling::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatVerdict {
    Sat { model: BimodalModel, point: WorldId },
    /// No model with at most `max_points` points over the formula's
    /// `atoms` atoms exists.
    UnsatWithinBound { max_points: usize, atoms: usize },
}

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatVerdict::Sat { .. })
    }
}

/// [`bounded_sat_with`] under the ceiling from the environment.
pub fn bounded_sat(f: &Formula, class: FrameClass, max_points: usize) -> Result<SatVerdict, SatError> {
    bounded_sat_with(f, class, max_points, Ceiling::from_env()?)
}

/// Searches all models of `class` with at most `max_points` points over the
/// atoms of `f` and returns the first one (and its least point) satisfying
/// `f`.
pub fn bounded_sat_with(
    f: &Formula,
    class: FrameClass,
    max_points: usize,
    ceiling: Ceiling,
) -> Result<SatVerdict, SatError> {
    if max_points == 0 {
        return Err(SatError::ZeroBound);
    }
    if max_points > ceiling.max_points {
        return Err(SatError::CeilingExceeded { what: "bound", got: max_points, ceiling: ceiling.max_points });
    }
    let program = Program::compile(f);
    if program.atoms.len() > ceiling.max_atoms {
        return Err(SatError::CeilingExceeded {
            what: "atom count",
            got: program.atoms.len(),
            ceiling: ceiling.max_atoms,
        });
    }
    for m in 1..=max_points {
        for frame in frames(m, class) {
            if let Some((model, point)) = search_valuations(&program, &frame, class) {
                return Ok(SatVerdict::Sat { model, point });
            }
        }
    }
    Ok(SatVerdict::UnsatWithinBound { max_points, atoms: program.atoms.len() })
}

/// A frame on `m ≤ 5` points as successor bitmasks.
#[derive(Debug, Clone)]
struct MaskFrame {
    m: usize,
    d: Vec<u32>,
    l: Vec<u32>,
    shape: Option<(usize, usize)>,
}

fn has(mask: u32, q: usize) -> bool {
    (mask >> q) & 1 == 1
}

fn points(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&q| has(mask, q))
}

/// Set partitions of `0..m` as restricted growth strings, in lexicographic
/// order.
fn partitions(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |&b| b + 1);
        for b in 0..=next {
            prefix.push(b);
            go(prefix, m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), m, &mut out);
    out
}

fn frame_ok(d: &[u32], l: &[u32], class: FrameClass) -> bool {
    let m = d.len();
    for p in 0..m {
        if class.reflexive_d() && !has(d[p], p) {
            return false;
        }
        for q in points(d[p]) {
            if d[q] & !d[p] != 0 {
                return false;
            }
            // Left commutativity: p ◊ q L r gives s with p L s ◊ r.
            for r in points(l[q]) {
                if !points(l[p]).any(|s| has(d[s], r)) {
                    return false;
                }
            }
        }
        if class.right_commutative() {
            for q in points(l[p]) {
                for r in points(d[q]) {
                    if !points(d[p]).any(|s| has(l[s], r)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The first factorisation `m = n1·n2` under which the frame is a product
/// with ids `v·n2 + x`.
fn product_shape(frame: &MaskFrame) -> Option<(usize, usize)> {
    let m = frame.m;
    (1..=m).filter(|n1| m % n1 == 0).map(|n1| (n1, m / n1)).find(|&(n1, n2)| {
        let id = |v: usize, x: usize| v * n2 + x;
        (0..m).all(|a| {
            let (v, x) = (a / n2, a % n2);
            points(frame.d[a]).all(|b| b % n2 == x && (0..n2).all(|y| has(frame.d[id(v, y)], id(b / n2, y))))
                && points(frame.l[a]).all(|b| b / n2 == v && (0..n1).all(|u| has(frame.l[id(u, x)], id(u, b % n2))))
        })
    })
}

/// Transitive relations on `0..m` (reflexive when the class asks for it)
/// in increasing bitmask order. Rows are fixed from the most significant
/// one down, pruning as soon as an assigned pair breaks transitivity.
fn transitive_relations(m: usize, reflexive: bool) -> Vec<Vec<u32>> {
    fn go(p: usize, d: &mut Vec<u32>, reflexive: bool, out: &mut Vec<Vec<u32>>) {
        let m = d.len();
        for row in 0u32..(1 << m) {
            if reflexive && !has(row, p) {
                continue;
            }
            let forward = points(row).filter(|&q| q > p).all(|q| d[q] & !row == 0);
            let backward = (p + 1..m).filter(|&q| has(d[q], p)).all(|q| row & !d[q] == 0);
            if !(forward && backward) {
                continue;
            }
            d[p] = row;
            if p == 0 {
                debug_assert!(transitive_closed(d));
                out.push(d.clone());
            } else {
                go(p - 1, d, reflexive, out);
            }
            d[p] = 0;
        }
    }
    let mut out = Vec::new();
    go(m - 1, &mut vec![0; m], reflexive, &mut out);
    out
}

fn transitive_closed(d: &[u32]) -> bool {
    (0..d.len()).all(|p| points(d[p]).all(|q| d[q] & !d[p] == 0))
}

fn frames(m: usize, class: FrameClass) -> Vec<MaskFrame> {
    let relations = transitive_relations(m, class.reflexive_d());
    let mut out = Vec::new();
    for blocks in partitions(m) {
        let l: Vec<u32> = (0..m)
            .map(|p| (0..m).filter(|&q| blocks[q] == blocks[p]).map(|q| 1u32 << q).sum())
            .collect();
        for d in &relations {
            if !frame_ok(d, &l, class) {
                continue;
            }
            let mut frame = MaskFrame { m, d: d.clone(), l: l.clone(), shape: None };
            if class == FrameClass::S4xS5Product {
                match product_shape(&frame) {
                    Some(s) => frame.shape = Some(s),
                    None => continue,
                }
            }
            out.push(frame);
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Atom(usize),
    Not(usize),
    And(usize, usize),
    K(usize),
    Box(usize),
}

/// A formula flattened to its distinct subformulas, children first.
struct Program {
    formula: Formula,
    ops: Vec<Op>,
    atoms: Vec<AtomId>,
}

impl Program {
    fn compile(f: &Formula) -> Program {
        let subs = f.subformulas();
        let index: HashMap<&Formula, usize> = subs.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let atoms: Vec<AtomId> = f.atoms().into_iter().collect();
        let ops = subs
            .iter()
            .map(|g| match g.kind() {
                Kind::Atom(a) => Op::Atom(atoms.binary_search(a).expect("collected above")),
                Kind::Not(a) => Op::Not(index[a]),
                Kind::And(a, b) => Op::And(index[a], index[b]),
                Kind::K(a) => Op::K(index[a]),
                Kind::Box(a) => Op::Box(index[a]),
            })
            .collect();
        Program { formula: f.clone(), ops, atoms }
    }

    /// The set of points satisfying the whole formula.
    fn run(&self, frame: &MaskFrame, val: &[u32], scratch: &mut Vec<u32>) -> u32 {
        let all = (1u32 << frame.m) - 1;
        let boxed = |rel: &[u32], s: u32| (0..frame.m).filter(|&p| rel[p] & !s == 0).map(|p| 1u32 << p).sum();
        scratch.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Atom(a) => val[a],
                Op::Not(a) => all & !scratch[a],
                Op::And(a, b) => scratch[a] & scratch[b],
                Op::K(a) => boxed(&frame.l, scratch[a]),
                Op::Box(a) => boxed(&frame.d, scratch[a]),
            };
            scratch.push(v);
        }
        *scratch.last().expect("a formula has at least one subformula")
    }
}

/// Masks allowed for a single atom: any, or for cross axiom models only
/// those closed under `◊` in both directions.
fn atom_masks(frame: &MaskFrame, class: FrameClass) -> Vec<u32> {
    (0..(1u32 << frame.m))
        .filter(|&s| {
            class != FrameClass::CrossAxiom || (0..frame.m).all(|p| has(s, p) || frame.d[p] & s == 0)
                && (0..frame.m).all(|p| !has(s, p) || frame.d[p] & !s == 0)
        })
        .collect()
}

fn search_valuations(program: &Program, frame: &MaskFrame, class: FrameClass) -> Option<(BimodalModel, WorldId)> {
    let masks = atom_masks(frame, class);
    let k = program.atoms.len();
    let mut idx = vec![0usize; k];
    let mut val = vec![0u32; k];
    let mut scratch = Vec::with_capacity(program.ops.len());
    loop {
        for (a, &i) in idx.iter().enumerate() {
            val[a] = masks[i];
        }
        let sat = program.run(frame, &val, &mut scratch);
        if sat != 0 {
            let point = sat.trailing_zeros() as usize;
            let model = materialize(program, frame, &val, class, point);
            assert!(validate(&model, class).passed(), "enumerated frame fails {}", class);
            assert!(Evaluator::new(&model).holds(point, &program.formula), "bitmask evaluation disagrees");
            return Some((model, point));
        }
        let mut a = k;
        loop {
            if a == 0 {
                return None;
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < masks.len() {
                break;
            }
            idx[a] = 0;
        }
    }
}

fn materialize(program: &Program, frame: &MaskFrame, val: &[u32], class: FrameClass, point: WorldId) -> BimodalModel {
    let mut model = BimodalModel::new();
    for p in 0..frame.m {
        model.add_world(format!("w{}", p)).expect("distinct names");
    }
    for p in 0..frame.m {
        for q in points(frame.d[p]) {
            model.add_d(p, q);
        }
        for q in points(frame.l[p]) {
            model.add_l(p, q);
        }
    }
    for (i, &atom) in program.atoms.iter().enumerate() {
        model.declare_atom(atom);
        for p in points(val[i]) {
            model.set_atom(atom, p, true);
        }
    }
    model.set_class(Some(class));
    model.set_product_shape(frame.shape);
    model.set_designated(Some(point));
    model
}
