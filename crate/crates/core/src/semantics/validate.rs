use super::{BimodalModel, FrameClass, WorldId};
use crate::formula::AtomId;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    LReflexive,
    LSymmetric,
    LTransitive,
    DReflexive,
    DTransitive,
    LeftCommutativity,
    RightCommutativity,
    AtomPersistence,
    ProductStructure,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::LReflexive => "l-reflexive",
            Property::LSymmetric => "l-symmetric",
            Property::LTransitive => "l-transitive",
            Property::DReflexive => "d-reflexive",
            Property::DTransitive => "d-transitive",
            Property::LeftCommutativity => "left-commutativity",
            Property::RightCommutativity => "right-commutativity",
            Property::AtomPersistence => "atom-persistence",
            Property::ProductStructure => "product-structure",
        }
    }
}

/// The points (and possibly the atom) that refute a property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub points: Vec<WorldId>,
    pub atom: Option<AtomId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub property: Property,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

impl fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property.name(), if self.passed { "pass" } else { "fail" })?;
        if let Some(c) = &self.counterexample {
            write!(f, " at {:?}", c.points)?;
            if let Some(a) = c.atom {
                write!(f, " atom {}", a)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub class: FrameClass,
    pub checks: Vec<PropertyCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, p: Property) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == p)
    }
}

/// The failing checks joined by `; `, or `ok`.
impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "{}: ok", self.class);
        }
        let parts: Vec<String> = self.failures().map(|c| c.to_string()).collect();
        write!(f, "{}: {}", self.class, parts.join("; "))
    }
}

fn result(property: Property, cex: Option<(Vec<WorldId>, Option<AtomId>)>) -> PropertyCheck {
    PropertyCheck {
        property,
        passed: cex.is_none(),
        counterexample: cex.map(|(points, atom)| Counterexample { points, atom }),
    }
}

fn reflexive(m: &BimodalModel, succ: impl Fn(WorldId) -> bool) -> Option<(Vec<WorldId>, Option<AtomId>)> {
    m.worlds().find(|&w| !succ(w)).map(|w| (vec![w], None))
}

fn transitive<'m>(
    m: &'m BimodalModel,
    succ: impl Fn(WorldId) -> &'m std::collections::BTreeSet<WorldId>,
) -> Option<(Vec<WorldId>, Option<AtomId>)> {
    for a in m.worlds() {
        for &b in succ(a) {
            for &c in succ(b) {
                if !succ(a).contains(&c) {
                    return Some((vec![a, b, c], None));
                }
            }
        }
    }
    None
}

pub(super) fn equivalence_checks(m: &BimodalModel) -> Vec<PropertyCheck> {
    let symmetric = m
        .l_pairs()
        .find(|&(a, b)| !m.has_l(b, a))
        .map(|(a, b)| (vec![a, b], None));
    vec![
        result(Property::LReflexive, reflexive(m, |w| m.has_l(w, w))),
        result(Property::LSymmetric, symmetric),
        result(Property::LTransitive, transitive(m, |w| m.l_successors(w))),
    ]
}

/// `p ◊→ q L→ r` implies some `s` with `p L→ s ◊→ r`.
fn left_commutativity(m: &BimodalModel) -> Option<(Vec<WorldId>, Option<AtomId>)> {
    for p in m.worlds() {
        for &q in m.d_successors(p) {
            for &r in m.l_successors(q) {
                if !m.l_successors(p).iter().any(|&s| m.has_d(s, r)) {
                    return Some((vec![p, q, r], None));
                }
            }
        }
    }
    None
}

/// `p L→ q ◊→ r` implies some `s` with `p ◊→ s L→ r`.
fn right_commutativity(m: &BimodalModel) -> Option<(Vec<WorldId>, Option<AtomId>)> {
    for p in m.worlds() {
        for &q in m.l_successors(p) {
            for &r in m.d_successors(q) {
                if !m.d_successors(p).iter().any(|&s| m.has_l(s, r)) {
                    return Some((vec![p, q, r], None));
                }
            }
        }
    }
    None
}

fn atom_persistence(m: &BimodalModel) -> Option<(Vec<WorldId>, Option<AtomId>)> {
    for (&atom, set) in m.valuation() {
        for (a, b) in m.d_pairs() {
            if set.contains(&a) != set.contains(&b) {
                return Some((vec![a, b], Some(atom)));
            }
        }
    }
    None
}

fn product_structure(m: &BimodalModel) -> Option<(Vec<WorldId>, Option<AtomId>)> {
    let Some((n1, n2)) = m.product_shape() else {
        return Some((vec![], None));
    };
    if n1 * n2 != m.len() {
        return Some((vec![], None));
    }
    let id = |v: usize, x: usize| v * n2 + x;
    for (a, b) in m.d_pairs() {
        let (v, x) = (a / n2, a % n2);
        let (v2, x2) = (b / n2, b % n2);
        if x != x2 {
            return Some((vec![a, b], None));
        }
        if let Some(y) = (0..n2).find(|&y| !m.has_d(id(v, y), id(v2, y))) {
            return Some((vec![id(v, y), id(v2, y)], None));
        }
    }
    for (a, b) in m.l_pairs() {
        let (v, x) = (a / n2, a % n2);
        let (v2, x2) = (b / n2, b % n2);
        if v != v2 {
            return Some((vec![a, b], None));
        }
        if let Some(u) = (0..n1).find(|&u| !m.has_l(id(u, x), id(u, x2))) {
            return Some((vec![id(u, x), id(u, x2)], None));
        }
    }
    None
}

/// Checks every property required by `class` and reports the first
/// counterexample of each, scanning points in increasing id order.
pub fn validate(m: &BimodalModel, class: FrameClass) -> ValidationReport {
    let mut checks = equivalence_checks(m);
    if class.reflexive_d() {
        checks.push(result(Property::DReflexive, reflexive(m, |w| m.has_d(w, w))));
    }
    checks.push(result(Property::DTransitive, transitive(m, |w| m.d_successors(w))));
    checks.push(result(Property::LeftCommutativity, left_commutativity(m)));
    if class.right_commutative() {
        checks.push(result(Property::RightCommutativity, right_commutativity(m)));
    }
    if class == FrameClass::CrossAxiom {
        checks.push(result(Property::AtomPersistence, atom_persistence(m)));
    }
    if class == FrameClass::S4xS5Product {
        checks.push(result(Property::ProductStructure, product_structure(m)));
    }
    ValidationReport { class, checks }
}
