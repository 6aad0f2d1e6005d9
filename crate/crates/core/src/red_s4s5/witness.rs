use crate::atm::{validate_tree, ComputationTree, NodeId, TreeMode};
use crate::formula::{ones, AtomId};
use crate::reduction::{time_after_previous_visit, ReductionError, ReductionParams};
use crate::semantics::{product_model, BimodalModel, Frame, WorldId};
use std::collections::{BTreeMap, BTreeSet};

use super::generate::f_s4s5_catalog;

type Sigma = BTreeMap<AtomId, BTreeSet<(usize, usize)>>;

/// Builds the product model of `f_S4×S5(w)` from an accepting tree. Both
/// coordinates range over the tree nodes; point `(v, x)` is named `v:x` and
/// `(root, root)` is designated.
pub fn build_f_s4s5_model(
    params: &ReductionParams,
    tree: &ComputationTree,
) -> Result<(BimodalModel, WorldId), ReductionError> {
    let report = validate_tree(&params.atm, &params.w, tree, TreeMode::Accepting);
    if !report.passed() {
        return Err(ReductionError::TreeInvalid(report.to_string()));
    }
    params.check_window(tree)?;
    let c = f_s4s5_catalog(params);
    let nodes: Vec<NodeId> = tree.nodes().collect();
    let names: Vec<String> = nodes.iter().map(|v| v.to_string()).collect();
    let mut w1 = Frame::new(names.clone());
    let mut w2 = Frame::new(names);
    for &x in &nodes {
        for &v in &tree.path_to(x) {
            w1.rel.insert((v, x));
        }
        for &y in &nodes {
            w2.rel.insert((x, y));
        }
    }

    let pos = |v: NodeId| -> u64 {
        params
            .window_pos(tree.config(v).head)
            .expect("window checked above")
    };
    let mut sigma: Sigma = c.atoms().map(|a| (a, BTreeSet::new())).collect();
    // Shared atoms read the first coordinate, persistent ones the second.
    let shared = |sigma: &mut Sigma, atom: AtomId, v: NodeId| {
        let set = sigma.get_mut(&atom).expect("catalog atom");
        set.extend(nodes.iter().map(|&x| (v, x)));
    };
    for &v in &nodes {
        let d = tree.node_data(v)?;
        for k in ones(d.time) {
            shared(&mut sigma, c.atom("A_time", k), v);
        }
        for k in ones(pos(v)) {
            shared(&mut sigma, c.atom("A_pos", k), v);
        }
        shared(&mut sigma, c.atom("A_state", d.state), v);
        shared(&mut sigma, c.atom("A_read", d.read), v);
        shared(&mut sigma, c.atom("A_written", d.written.unwrap_or(params.atm.blank())), v);
        if let Some(u) = d.pred {
            for k in ones(pos(u)) {
                shared(&mut sigma, c.atom("A_prevpos", k), v);
            }
        }
    }
    let persistent = |sigma: &mut Sigma, atom: AtomId, x: NodeId| {
        let set = sigma.get_mut(&atom).expect("catalog atom");
        set.extend(nodes.iter().map(|&v| (v, x)));
    };
    for &x in &nodes {
        let d = tree.node_data(x)?;
        if let Some(u) = d.pred {
            for k in ones(d.time - 1) {
                persistent(&mut sigma, c.atom("X_prevtime", k), x);
            }
            for k in ones(pos(u)) {
                persistent(&mut sigma, c.atom("X_prevpos", k), x);
            }
        }
        for k in ones(pos(x)) {
            persistent(&mut sigma, c.atom("X_pos", k), x);
        }
        for k in ones(time_after_previous_visit(tree, x)) {
            persistent(&mut sigma, c.atom("X_tapv", k), x);
        }
        persistent(&mut sigma, c.atom("X_read", d.read), x);
    }
    let active = c.atom("B_active", 0);
    for &x in &nodes {
        for v in tree.path_to(x) {
            sigma.get_mut(&active).expect("catalog atom").insert((v, x));
        }
    }

    let mut m = product_model(&w1, &w2, &sigma)
        .map_err(|e| ReductionError::TreeInvalid(format!("witness frame: {}", e)))?;
    let root = tree.root() * nodes.len() + tree.root();
    m.set_designated(Some(root));
    Ok((m, root))
}
