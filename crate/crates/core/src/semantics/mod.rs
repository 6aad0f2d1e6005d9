//! Finite bimodal models, frame-class validation, clouds and the model checker.

mod dump;
mod eval;
mod validate;

use crate::formula::AtomId;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub use eval::{eval, Evaluator, PointSet};
pub use validate::{validate, Counterexample, Property, PropertyCheck, ValidationReport};

/// Worlds are numbered densely from 0 in insertion order; that order is the
/// "sorted id" order used wherever a deterministic choice is needed.
pub type WorldId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("L-relation is not an equivalence: {0}")]
    NotEquivalence(String),
    #[error("invalid component frame: {0}")]
    InvalidFrame(String),
    #[error("model dump line {line}: {msg}")]
    Dump { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameClass {
    CrossAxiom,
    S4xS5Commutator,
    K4xS5Commutator,
    S4xS5Product,
}

impl FrameClass {
    pub const ALL: [FrameClass; 4] = [
        FrameClass::CrossAxiom,
        FrameClass::S4xS5Commutator,
        FrameClass::K4xS5Commutator,
        FrameClass::S4xS5Product,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameClass::CrossAxiom => "CrossAxiom",
            FrameClass::S4xS5Commutator => "S4xS5Commutator",
            FrameClass::K4xS5Commutator => "K4xS5Commutator",
            FrameClass::S4xS5Product => "S4xS5Product",
        }
    }

    /// Whether the diamond relation must be reflexive.
    pub fn reflexive_d(self) -> bool {
        self != FrameClass::K4xS5Commutator
    }

    pub fn right_commutative(self) -> bool {
        self != FrameClass::CrossAxiom
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameClass {
    type Err = String;

    fn from_str(s: &str) -> Result<FrameClass, String> {
        FrameClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown frame class `{}`", s))
    }
}

/// A finite model `(W, ◊→, L→, σ)`.
///
/// Both relations are stored explicitly as successor sets, reflexive pairs
/// included. Atoms without a valuation entry are false everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BimodalModel {
    names: Vec<String>,
    by_name: HashMap<String, WorldId>,
    d_succ: Vec<BTreeSet<WorldId>>,
    l_succ: Vec<BTreeSet<WorldId>>,
    valuation: BTreeMap<AtomId, BTreeSet<WorldId>>,
    class: Option<FrameClass>,
    designated: Option<WorldId>,
    product: Option<(usize, usize)>,
}

impl BimodalModel {
    pub fn new() -> BimodalModel {
        BimodalModel::default()
    }

    pub fn add_world(&mut self, name: impl Into<String>) -> Result<WorldId, SemanticsError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(SemanticsError::Dump {
                line: 0,
                msg: format!("world name `{}` must be non-empty without whitespace", name),
            });
        }
        if self.by_name.contains_key(&name) {
            return Err(SemanticsError::DuplicateWorld(name));
        }
        let id = self.names.len();
        self.by_name.insert(name.clone(), id);
        self.names.push(name);
        self.d_succ.push(BTreeSet::new());
        self.l_succ.push(BTreeSet::new());
        Ok(id)
    }

    pub fn add_d(&mut self, a: WorldId, b: WorldId) {
        self.d_succ[a].insert(b);
    }

    pub fn add_l(&mut self, a: WorldId, b: WorldId) {
        self.l_succ[a].insert(b);
    }

    /// Makes `members` one L-equivalence class by adding every pair.
    pub fn add_cloud(&mut self, members: &[WorldId]) {
        for &a in members {
            for &b in members {
                self.add_l(a, b);
            }
        }
    }

    pub fn remove_d(&mut self, a: WorldId, b: WorldId) -> bool {
        self.d_succ[a].remove(&b)
    }

    pub fn remove_l(&mut self, a: WorldId, b: WorldId) -> bool {
        self.l_succ[a].remove(&b)
    }

    /// Sets the truth value of `atom` at `w`.
    pub fn set_atom(&mut self, atom: AtomId, w: WorldId, value: bool) {
        let set = self.valuation.entry(atom).or_default();
        if value {
            set.insert(w);
        } else {
            set.remove(&w);
        }
    }

    /// Registers `atom` in the valuation without making it true anywhere.
    pub fn declare_atom(&mut self, atom: AtomId) {
        self.valuation.entry(atom).or_default();
    }

    pub fn set_class(&mut self, class: Option<FrameClass>) {
        self.class = class;
    }

    pub fn set_designated(&mut self, w: Option<WorldId>) {
        self.designated = w;
    }

    /// Marks the model as the product of frames with `n1` and `n2` worlds,
    /// where world `v * n2 + x` is the pair `(v, x)`.
    pub fn set_product_shape(&mut self, shape: Option<(usize, usize)>) {
        self.product = shape;
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn worlds(&self) -> std::ops::Range<WorldId> {
        0..self.names.len()
    }

    pub fn name(&self, w: WorldId) -> &str {
        &self.names[w]
    }

    pub fn world(&self, name: &str) -> Result<WorldId, SemanticsError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| SemanticsError::UnknownPoint(name.to_string()))
    }

    pub fn d_successors(&self, w: WorldId) -> &BTreeSet<WorldId> {
        &self.d_succ[w]
    }

    pub fn l_successors(&self, w: WorldId) -> &BTreeSet<WorldId> {
        &self.l_succ[w]
    }

    pub fn has_d(&self, a: WorldId, b: WorldId) -> bool {
        self.d_succ[a].contains(&b)
    }

    pub fn has_l(&self, a: WorldId, b: WorldId) -> bool {
        self.l_succ[a].contains(&b)
    }

    /// All `◊→` pairs in sorted order.
    pub fn d_pairs(&self) -> impl Iterator<Item = (WorldId, WorldId)> + '_ {
        self.d_succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
    }

    /// All `L→` pairs in sorted order.
    pub fn l_pairs(&self) -> impl Iterator<Item = (WorldId, WorldId)> + '_ {
        self.l_succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
    }

    pub fn d_len(&self) -> usize {
        self.d_succ.iter().map(BTreeSet::len).sum()
    }

    pub fn l_len(&self) -> usize {
        self.l_succ.iter().map(BTreeSet::len).sum()
    }

    pub fn atom_true(&self, atom: AtomId, w: WorldId) -> bool {
        self.valuation.get(&atom).is_some_and(|s| s.contains(&w))
    }

    pub fn valuation(&self) -> &BTreeMap<AtomId, BTreeSet<WorldId>> {
        &self.valuation
    }

    pub fn class(&self) -> Option<FrameClass> {
        self.class
    }

    pub fn designated(&self) -> Option<WorldId> {
        self.designated
    }

    pub fn product_shape(&self) -> Option<(usize, usize)> {
        self.product
    }

    /// The L-equivalence classes, or an error naming the first violated
    /// equivalence property.
    pub fn clouds(&self) -> Result<Clouds, SemanticsError> {
        let report = validate::equivalence_checks(self);
        if let Some(bad) = report.iter().find(|c| !c.passed) {
            return Err(SemanticsError::NotEquivalence(bad.to_string()));
        }
        let mut cloud_of = vec![usize::MAX; self.len()];
        let mut members = Vec::new();
        for w in self.worlds() {
            if cloud_of[w] != usize::MAX {
                continue;
            }
            let id = members.len();
            let cloud: Vec<WorldId> = self.l_succ[w].iter().copied().collect();
            for &v in &cloud {
                cloud_of[v] = id;
            }
            members.push(cloud);
        }
        Ok(Clouds { members, cloud_of })
    }

    /// The relation on clouds induced by `◊→`: `C → D` iff some point of `C`
    /// has a `◊→`-successor in `D`.
    pub fn induced_cloud_relation(&self, clouds: &Clouds) -> BTreeSet<(usize, usize)> {
        self.d_pairs()
            .map(|(a, b)| (clouds.cloud_of[a], clouds.cloud_of[b]))
            .collect()
    }

    /// The submodel on `keep`, with worlds renumbered in increasing old-id
    /// order. Returns the model and the old-to-new id map.
    pub fn induced_submodel(&self, keep: &BTreeSet<WorldId>) -> (BimodalModel, Vec<Option<WorldId>>) {
        let mut out = BimodalModel::new();
        let mut map = vec![None; self.len()];
        for &w in keep {
            map[w] = Some(out.add_world(self.names[w].clone()).expect("names are unique"));
        }
        for &w in keep {
            let nw = map[w].unwrap();
            for &v in &self.d_succ[w] {
                if let Some(nv) = map[v] {
                    out.add_d(nw, nv);
                }
            }
            for &v in &self.l_succ[w] {
                if let Some(nv) = map[v] {
                    out.add_l(nw, nv);
                }
            }
        }
        for (&atom, set) in &self.valuation {
            out.declare_atom(atom);
            for &w in set {
                if let Some(nw) = map[w] {
                    out.set_atom(atom, nw, true);
                }
            }
        }
        out.class = self.class;
        out.designated = self.designated.and_then(|d| map[d]);
        (out, map)
    }

    /// Worlds reachable from `start` along either relation, breadth first.
    pub fn reachable(&self, start: WorldId) -> BTreeSet<WorldId> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            for &v in self.d_succ[w].iter().chain(self.l_succ[w].iter()) {
                if seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn dump(&self) -> String {
        dump::dump(self)
    }

    pub fn parse_dump(text: &str) -> Result<BimodalModel, SemanticsError> {
        dump::parse(text)
    }
}

/// A partition of the worlds into L-equivalence classes. Clouds are numbered
/// by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clouds {
    pub members: Vec<Vec<WorldId>>,
    pub cloud_of: Vec<usize>,
}

impl Clouds {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A single-relation frame used as a product component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub names: Vec<String>,
    pub rel: BTreeSet<(usize, usize)>,
}

impl Frame {
    pub fn new(names: Vec<String>) -> Frame {
        Frame {
            names,
            rel: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn reflexive(&self) -> Option<usize> {
        (0..self.len()).find(|&v| !self.rel.contains(&(v, v)))
    }

    fn transitive(&self) -> Option<(usize, usize, usize)> {
        for &(a, b) in &self.rel {
            for &(_, c) in self.rel.range((b, 0)..(b + 1, 0)) {
                if !self.rel.contains(&(a, c)) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    fn symmetric(&self) -> Option<(usize, usize)> {
        self.rel.iter().copied().find(|&(a, b)| !self.rel.contains(&(b, a)))
    }
}

/// The product of a preorder and an equivalence frame. World `(v, x)` gets id
/// `v * |W2| + x` and the name `v_name:x_name`.
pub fn product_model(
    frame1: &Frame,
    frame2: &Frame,
    valuation: &BTreeMap<AtomId, BTreeSet<(usize, usize)>>,
) -> Result<BimodalModel, SemanticsError> {
    if let Some(v) = frame1.reflexive() {
        return Err(SemanticsError::InvalidFrame(format!("first frame not reflexive at {}", v)));
    }
    if let Some((a, b, c)) = frame1.transitive() {
        return Err(SemanticsError::InvalidFrame(format!(
            "first frame not transitive at {} {} {}",
            a, b, c
        )));
    }
    if let Some(v) = frame2.reflexive() {
        return Err(SemanticsError::InvalidFrame(format!("second frame not reflexive at {}", v)));
    }
    if let Some((a, b)) = frame2.symmetric() {
        return Err(SemanticsError::InvalidFrame(format!("second frame not symmetric at {} {}", a, b)));
    }
    if let Some((a, b, c)) = frame2.transitive() {
        return Err(SemanticsError::InvalidFrame(format!(
            "second frame not transitive at {} {} {}",
            a, b, c
        )));
    }
    let n2 = frame2.len();
    let id = |v: usize, x: usize| v * n2 + x;
    let mut m = BimodalModel::new();
    for v in &frame1.names {
        for x in &frame2.names {
            m.add_world(format!("{}:{}", v, x))?;
        }
    }
    for &(v, v2) in &frame1.rel {
        for x in 0..n2 {
            m.add_d(id(v, x), id(v2, x));
        }
    }
    for &(x, x2) in &frame2.rel {
        for v in 0..frame1.len() {
            m.add_l(id(v, x), id(v, x2));
        }
    }
    for (&atom, points) in valuation {
        m.declare_atom(atom);
        for &(v, x) in points {
            if v >= frame1.len() || x >= n2 {
                return Err(SemanticsError::InvalidFrame(format!(
                    "valuation point ({}, {}) outside the product",
                    v, x
                )));
            }
            m.set_atom(atom, id(v, x), true);
        }
    }
    m.set_class(Some(FrameClass::S4xS5Product));
    m.set_product_shape(Some((frame1.len(), n2)));
    Ok(m)
}
