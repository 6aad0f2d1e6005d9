use crate::atm::{
    apply, initial_config, tree_size_bound, validate_tree, ComputationTree, Dir, NodeId, StateKind,
    Transition, TreeMode,
};
use crate::formula::{eq_binary, Formula};
use crate::reduction::{everywhere, Extraction, ReductionError, ReductionParams};
use crate::semantics::{validate, BimodalModel, Evaluator, FrameClass, WorldId};

use super::generate::{gen_f_s4s5, S4s5Vectors};

/// Condition 4: time, position, state and read symbol of `x`.
fn node_formula(v: &S4s5Vectors, params: &ReductionParams, tree: &ComputationTree, x: NodeId) -> Formula {
    let d = tree.node_data(x).expect("nodes of a growing tree are consistent");
    let pos = params.window_pos(d.pos).expect("window checked before insertion");
    Formula::conj([
        eq_binary(&v.a_time, d.time).expect("time inside the window"),
        eq_binary(&v.a_pos, pos).expect("position inside the window"),
        v.a_state.get(d.state).clone(),
        v.a_read.get(d.read).clone(),
    ])
}

/// Condition 3: previous head position and written symbol of a non-root `x`.
fn edge_formula(v: &S4s5Vectors, params: &ReductionParams, tree: &ComputationTree, x: NodeId) -> Option<Formula> {
    let d = tree.node_data(x).expect("nodes of a growing tree are consistent");
    let pred = d.pred?;
    let prev = params
        .window_pos(tree.config(pred).head)
        .expect("window checked before insertion");
    Some(
        eq_binary(&v.a_prevpos, prev)
            .expect("position inside the window")
            .and(v.a_written.get(d.written.expect("non-root nodes have a written symbol"))),
    )
}

/// Checks the four morphism conditions for `pi` from `tree` into a
/// commutator model with root point `r0`. Shared variables are constant on
/// clouds, so each condition is evaluated at `π(v)` itself.
pub fn check_morphism_s4s5(
    model: &BimodalModel,
    r0: WorldId,
    params: &ReductionParams,
    tree: &ComputationTree,
    pi: &[WorldId],
) -> Result<(), ReductionError> {
    let gen = gen_f_s4s5(params)?;
    let v = S4s5Vectors::new(&gen.catalog);
    let fail = |node: NodeId, condition: u8, detail: String| {
        Err(ReductionError::MorphismInvalid { node, condition, detail })
    };
    if pi.len() != tree.len() {
        return fail(0, 1, format!("{} images for {} nodes", pi.len(), tree.len()));
    }
    if pi[tree.root()] != r0 {
        return fail(tree.root(), 1, "the root is not mapped to the designated point".into());
    }
    let clouds = model.clouds().map_err(|e| ReductionError::ModelInvalid {
        class: "S4xS5Commutator".into(),
        detail: e.to_string(),
    })?;
    let lifted = model.induced_cloud_relation(&clouds);
    let mut ev = Evaluator::new(model);
    for x in tree.nodes() {
        if let Some(parent) = tree.parent(x) {
            if !lifted.contains(&(clouds.cloud_of[pi[parent]], clouds.cloud_of[pi[x]])) {
                return fail(x, 2, format!("no ◊ edge from the cloud of {} to the cloud of {}", parent, x));
            }
        }
        if let Some(f) = edge_formula(&v, params, tree, x) {
            if !ev.holds(pi[x], &f) {
                return fail(x, 3, "α^prevpos or α^written does not describe the step".into());
            }
        }
        if !ev.holds(pi[x], &node_formula(&v, params, tree, x)) {
            return fail(x, 4, "shared variables do not describe the configuration".into());
        }
    }
    Ok(())
}

/// Reads an accepting tree off an S4×S5 commutator model in which `r0`
/// satisfies `f_S4×S5(w)`. The model is first cut down to the points
/// generated from `r0`. Witnesses are searched in increasing point id and
/// `δ` entries in declaration order.
pub fn extract_accepting_tree_s4s5(
    model: &BimodalModel,
    r0: WorldId,
    params: &ReductionParams,
) -> Result<Extraction, ReductionError> {
    let report = validate(model, FrameClass::S4xS5Commutator);
    if !report.passed() {
        let detail = report
            .failures()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(ReductionError::ModelInvalid { class: "S4xS5Commutator".into(), detail });
    }
    if r0 >= model.len() {
        return Err(ReductionError::Params(format!("point {} is not in the model", r0)));
    }
    let keep = model.reachable(r0);
    let (sub, map) = model.induced_submodel(&keep);
    let back: Vec<WorldId> = keep.iter().copied().collect();
    let r = map[r0].expect("r0 reaches itself");

    let gen = gen_f_s4s5(params)?;
    let v = S4s5Vectors::new(&gen.catalog);
    let mut ev = Evaluator::new(&sub);
    for (name, f) in &gen.conjuncts {
        if ev.holds(r, f) {
            continue;
        }
        let mut subformula = name.to_string();
        if *name == "read_a_symbol" {
            if let Some((part, _)) = v.read_a_symbol_parts().iter().find(|(_, p)| !ev.holds(r, &everywhere(p))) {
                subformula = part.to_string();
            }
        }
        return Err(ReductionError::WitnessNotFound { node: None, subformula });
    }

    let atm = &params.atm;
    let big_n = params.big_n();
    let limit = tree_size_bound(atm.max_branching() as u64, params.max_time());
    let mut tree = ComputationTree::new(initial_config(atm, &params.w)?);
    let mut pi = vec![r];
    if !ev.holds(r, &node_formula(&v, params, &tree, 0)) {
        return Err(ReductionError::WitnessNotFound { node: Some(0), subformula: "start".into() });
    }

    let copy = v.step_copy();
    let mut steps = 0;
    loop {
        let open = tree
            .leaves()
            .find(|&x| matches!(atm.kind(tree.config(x).state), StateKind::Exists | StateKind::Forall));
        let Some(leaf) = open else { break };
        steps += 1;
        let d = tree.node_data(leaf)?;
        let config = tree.config(leaf).clone();
        let pos = params.window_pos(d.pos).expect("window checked before insertion");
        if d.time >= params.max_time() {
            return Err(ReductionError::WindowOverflow(format!(
                "node {} at time {} still has to move",
                leaf, d.time
            )));
        }
        let k = (0..big_n).find(|&k| (d.time >> k) & 1 == 0).expect("time below 2^N - 1");
        let entries: Vec<&Transition> = atm.transitions_from(d.state, d.read).collect();
        let existential = atm.kind(d.state) == StateKind::Exists;

        let mut chosen: Vec<(&Transition, WorldId)> = Vec::new();
        for t in &entries {
            let l = match t.dir {
                Dir::Left => (0..=big_n).find(|&l| (pos >> l) & 1 == 1),
                Dir::Right => (0..=big_n).find(|&l| (pos >> l) & 1 == 0),
            };
            let Some(l) = l else {
                return Err(ReductionError::WindowOverflow(format!(
                    "node {} at window position {} cannot move {:?}",
                    leaf, pos, t.dir
                )));
            };
            let next = apply(&config, t);
            if chosen.iter().any(|(c, _)| apply(&config, c) == next) {
                continue;
            }
            let landing = v.landing(k, l, t.dir, t.to, t.write);
            let witness = sub.l_successors(pi[leaf]).iter().find_map(|&y| {
                if !ev.holds(y, &copy) {
                    return None;
                }
                sub.d_successors(y).iter().copied().find(|&x| ev.holds(x, &landing))
            });
            match witness {
                Some(x) => {
                    chosen.push((t, x));
                    if existential {
                        break;
                    }
                }
                None if existential => continue,
                None => {
                    return Err(ReductionError::WitnessNotFound {
                        node: Some(leaf),
                        subformula: "computation".into(),
                    })
                }
            }
        }
        if chosen.is_empty() {
            return Err(ReductionError::WitnessNotFound { node: Some(leaf), subformula: "computation".into() });
        }

        for (t, x) in chosen {
            let child = tree.add_child(leaf, apply(&config, t))?;
            pi.push(x);
            if t.to == atm.reject_state() {
                return Err(ReductionError::WitnessNotFound { node: Some(child), subformula: "no_reject".into() });
            }
            if params.window_pos(tree.config(child).head).is_none() {
                return Err(ReductionError::WindowOverflow(format!("node {} leaves the window", child)));
            }
            if !ev.holds(x, &node_formula(&v, params, &tree, child)) {
                return Err(ReductionError::WitnessNotFound {
                    node: Some(child),
                    subformula: "read_a_symbol".into(),
                });
            }
        }
        if tree.len() as u128 > limit {
            return Err(ReductionError::BoundExceeded { limit });
        }
    }

    let report = validate_tree(atm, &params.w, &tree, TreeMode::Accepting);
    if !report.passed() {
        return Err(ReductionError::TreeInvalid(report.to_string()));
    }
    let morphism: Vec<WorldId> = pi.iter().map(|&y| back[y]).collect();
    check_morphism_s4s5(model, r0, params, &tree, &morphism)?;
    Ok(Extraction { tree, morphism, steps })
}
