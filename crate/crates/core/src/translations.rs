//! The satisfiability-preserving translations SSL → S4×S5 and
//! S4×S5 → K4×S5, together with the model transformations that carry a
//! witness of the source formula to a witness of its translation and back.

use crate::formula::{AtomId, Formula, Kind};
use crate::semantics::{validate, BimodalModel, Evaluator, FrameClass, WorldId};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslationError {
    #[error("input model is not a {class} model: {detail}")]
    InvalidModel { class: FrameClass, detail: String },
    #[error("point {0} is not in the model")]
    NoSuchPoint(WorldId),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationResult {
    pub formula: Formula,
    /// The fresh atom `main` (SSL → S4×S5 only).
    pub main_atom: Option<AtomId>,
    /// The distinct `□`-rooted subformulas of the input in render order
    /// (S4×S5 → K4×S5 only).
    pub box_subformulas: Vec<Formula>,
}

/// The smallest atom index not occurring in `f`.
pub fn main_var(f: &Formula) -> AtomId {
    let used = f.atoms();
    (0..).find(|i| !used.contains(i)).expect("finitely many atoms are used")
}

fn guard(main: &Formula, body: &Formula) -> Formula {
    main.and(&body.not()).not()
}

/// The recursive part `T` of the SSL → S4×S5 translation.
pub fn t_ssl(f: &Formula, main: AtomId) -> Formula {
    let m = Formula::atom(main);
    match f.kind() {
        Kind::Atom(_) => f.clone(),
        Kind::Not(a) => t_ssl(a, main).not(),
        Kind::And(a, b) => t_ssl(a, main).and(&t_ssl(b, main)),
        Kind::K(a) => guard(&m, &t_ssl(a, main)).k(),
        Kind::Box(a) => guard(&m, &t_ssl(a, main)).boxed(),
    }
}

/// `persistent_main`, one conjunct per atom of `f` in ascending order.
fn persistent_main(f: &Formula, main: AtomId) -> Formula {
    let m = Formula::atom(main);
    Formula::conj(f.atoms().into_iter().map(|a| {
        let a = Formula::atom(a);
        m.implies(&a).boxed().or(&m.implies(&a.not()).boxed()).k()
    }))
}

/// `T̂(f) = main ∧ K□(¬main → □¬main) ∧ persistent_main ∧ T(f)`.
pub fn t_ssl_to_s4s5(f: &Formula) -> TranslationResult {
    let main = main_var(f);
    let m = Formula::atom(main);
    let closed = m.not().implies(&m.not().boxed()).boxed().k();
    TranslationResult {
        formula: Formula::conj([m, closed, persistent_main(f, main), t_ssl(f, main)]),
        main_atom: Some(main),
        box_subformulas: Vec::new(),
    }
}

/// The distinct `□`-rooted subformulas of `f`, sorted by rendering.
pub fn box_subformulas(f: &Formula) -> Vec<Formula> {
    let mut boxes: Vec<(String, Formula)> = f
        .subformulas()
        .into_iter()
        .filter(Formula::is_box)
        .map(|b| (b.render(), b))
        .collect();
    boxes.sort_by(|a, b| a.0.cmp(&b.0));
    boxes.dedup_by(|a, b| a.0 == b.0);
    boxes.into_iter().map(|(_, b)| b).collect()
}

/// `T̂(f) = f ∧ ⋀_{□ψ ∈ sf(f)} K((□ψ → ψ) ∧ □(□ψ → ψ))`. A `□`-free `f`
/// is returned unchanged.
pub fn t_s4s5_to_k4s5(f: &Formula) -> TranslationResult {
    let boxes = box_subformulas(f);
    let mut parts = vec![f.clone()];
    for b in &boxes {
        let Kind::Box(psi) = b.kind() else { unreachable!("filtered on □") };
        let refl = b.implies(psi);
        parts.push(refl.and(&refl.boxed()).k());
    }
    TranslationResult {
        formula: Formula::conj(parts),
        main_atom: None,
        box_subformulas: boxes,
    }
}

fn require(model: &BimodalModel, class: FrameClass) -> Result<(), TranslationError> {
    let report = validate(model, class);
    if report.passed() {
        return Ok(());
    }
    let detail = report.failures().map(|c| c.to_string()).collect::<Vec<_>>().join("; ");
    Err(TranslationError::InvalidModel { class, detail })
}

fn fresh_name(model: &BimodalModel, base: String) -> String {
    let mut name = base;
    while model.world(&name).is_ok() {
        name.push('\'');
    }
    name
}

/// Turns a cross axiom model into an S4×S5 commutator model by adding one
/// point `new.i` to every cloud `C_i`, reachable by `◊` from every point of
/// every cloud below `C_i`. `main` is made true exactly on the old points.
/// Point ids of the input are kept.
pub fn lift_model_ssl_to_s4s5(
    model: &BimodalModel,
    w: WorldId,
    main: AtomId,
) -> Result<(BimodalModel, WorldId), TranslationError> {
    require(model, FrameClass::CrossAxiom)?;
    if w >= model.len() {
        return Err(TranslationError::NoSuchPoint(w));
    }
    let clouds = model.clouds().map_err(|e| TranslationError::InvalidModel {
        class: FrameClass::CrossAxiom,
        detail: e.to_string(),
    })?;
    let lifted = model.induced_cloud_relation(&clouds);
    let mut out = model.clone();
    let mut new = Vec::with_capacity(clouds.len());
    for i in 0..clouds.len() {
        let name = fresh_name(&out, format!("new.{}", i));
        new.push(out.add_world(name).expect("fresh name"));
    }
    for (i, members) in clouds.members.iter().enumerate() {
        let mut cloud = members.clone();
        cloud.push(new[i]);
        out.add_cloud(&cloud);
    }
    for &(i, j) in &lifted {
        for &p in clouds.members[i].iter().chain([&new[i]]) {
            out.add_d(p, new[j]);
        }
    }
    out.declare_atom(main);
    for p in model.worlds() {
        out.set_atom(main, p, true);
    }
    for &p in &new {
        out.set_atom(main, p, false);
    }
    out.set_class(Some(FrameClass::S4xS5Commutator));
    out.set_product_shape(None);
    out.set_designated(Some(w));
    Ok((out, w))
}

fn check_point(
    model: &BimodalModel,
    w: WorldId,
    f: &Formula,
    what: &str,
) -> Result<(), TranslationError> {
    if w >= model.len() {
        return Err(TranslationError::NoSuchPoint(w));
    }
    if !Evaluator::new(model).holds(w, f) {
        return Err(TranslationError::Precondition(format!("{} is false at {}", what, model.name(w))));
    }
    Ok(())
}

/// Cuts a commutator model of `T̂(f)` down to a cross axiom model of `f`:
/// the `main` points `v` with `w L→ w′ ◊→ v` for some `w′`, with atoms
/// outside `sf(f) ∪ {main}` cleared.
pub fn restrict_model_s4s5_to_ssl(
    model: &BimodalModel,
    w: WorldId,
    f: &Formula,
) -> Result<(BimodalModel, WorldId), TranslationError> {
    let t = t_ssl_to_s4s5(f);
    check_point(model, w, &t.formula, "the translated formula")?;
    let main = t.main_atom.expect("set by the SSL translation");
    let keep: BTreeSet<WorldId> = model
        .l_successors(w)
        .iter()
        .flat_map(|&w2| model.d_successors(w2).iter().copied())
        .filter(|&v| model.atom_true(main, v))
        .collect();
    let (mut out, map) = model.induced_submodel(&keep);
    let allowed: BTreeSet<AtomId> = f.atoms().into_iter().chain([main]).collect();
    let atoms: Vec<AtomId> = out.valuation().keys().copied().collect();
    for a in atoms.into_iter().filter(|a| !allowed.contains(a)) {
        for p in out.worlds().collect::<Vec<_>>() {
            out.set_atom(a, p, false);
        }
    }
    let w = map[w].expect("w satisfies main and is reflexive");
    out.set_class(Some(FrameClass::CrossAxiom));
    out.set_product_shape(None);
    out.set_designated(Some(w));
    Ok((out, w))
}

/// Turns a K4×S5 commutator model of `T̂(f)` into an S4×S5 commutator model
/// of `f`: keeps the points `v` with `w L→ v` or `w L→ w′ ◊→ v` and adds
/// the missing `◊` loops.
pub fn k4_to_s4_model(
    model: &BimodalModel,
    w: WorldId,
    f: &Formula,
) -> Result<(BimodalModel, WorldId), TranslationError> {
    require(model, FrameClass::K4xS5Commutator)?;
    let t = t_s4s5_to_k4s5(f);
    check_point(model, w, &t.formula, "the translated formula")?;
    let mut keep: BTreeSet<WorldId> = model.l_successors(w).clone();
    for &w2 in model.l_successors(w) {
        keep.extend(model.d_successors(w2).iter().copied());
    }
    let (mut out, map) = model.induced_submodel(&keep);
    for p in out.worlds().collect::<Vec<_>>() {
        out.add_d(p, p);
    }
    let w = map[w].expect("L is reflexive");
    out.set_class(Some(FrameClass::S4xS5Commutator));
    out.set_product_shape(None);
    out.set_designated(Some(w));
    Ok((out, w))
}
