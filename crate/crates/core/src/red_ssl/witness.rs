use crate::atm::{validate_tree, ComputationTree, NodeId, TreeMode};
use crate::formula::{ones, AtomId};
use crate::reduction::{time_after_previous_visit, Catalog, ReductionError, ReductionParams};
use crate::semantics::{BimodalModel, FrameClass, WorldId};
use std::collections::BTreeMap;

use super::generate::f_ssl_catalog;

/// The index set `I` in order: time bits, position bits, states, written
/// symbols, read symbols. The first component is the shared-variable family.
pub(crate) fn index_set(params: &ReductionParams) -> Vec<(&'static str, usize)> {
    let big_n = params.big_n();
    let mut out = Vec::new();
    out.extend((0..big_n).map(|k| ("time", k)));
    out.extend((0..=big_n).map(|k| ("pos", k)));
    out.extend((0..params.atm.num_states()).map(|q| ("state", q)));
    out.extend((0..params.atm.num_symbols()).map(|g| ("written", g)));
    out.extend((0..params.atm.num_symbols()).map(|g| ("read", g)));
    out
}

pub(crate) fn family_atom(c: &Catalog, fam: &str, z: usize) -> AtomId {
    c.atom(&format!("A_{}", fam), z)
}

/// Per-node values in the window view.
struct NodeValues {
    time: u64,
    pos: u64,
    state: usize,
    read: usize,
    written: usize,
    tapv: u64,
}

fn node_values(
    params: &ReductionParams,
    tree: &ComputationTree,
) -> Result<Vec<NodeValues>, ReductionError> {
    tree.nodes()
        .map(|v| {
            let d = tree.node_data(v)?;
            let pos = params
                .window_pos(d.pos)
                .ok_or_else(|| ReductionError::WindowOverflow(format!("node {} leaves the window", v)))?;
            Ok(NodeValues {
                time: d.time,
                pos,
                state: d.state,
                read: d.read,
                written: d.written.unwrap_or(params.atm.blank()),
                tapv: time_after_previous_visit(tree, v),
            })
        })
        .collect()
}

impl NodeValues {
    /// Whether `s_{v,i}` exists for this node.
    fn has_s(&self, fam: &str, z: usize) -> bool {
        match fam {
            "time" => (self.time >> z) & 1 == 1,
            "pos" => (self.pos >> z) & 1 == 1,
            "state" => z == self.state,
            "written" => z == self.written,
            _ => z == self.read,
        }
    }
}

/// Builds the cross axiom model of `f_SSL(w)` from an accepting tree.
///
/// Worlds are named `p.v.x` (for `v` an ancestor of `x` or `x` itself),
/// `u.v.fam.z` and `u.T.fam.z` for the sentinel cloud, and `s.v.fam.z`.
/// The designated point is `p.root.root`.
pub fn build_f_ssl_model(
    params: &ReductionParams,
    tree: &ComputationTree,
) -> Result<(BimodalModel, WorldId), ReductionError> {
    let report = validate_tree(&params.atm, &params.w, tree, TreeMode::Accepting);
    if !report.passed() {
        return Err(ReductionError::TreeInvalid(report.to_string()));
    }
    params.check_window(tree)?;
    let values = node_values(params, tree)?;
    let catalog = f_ssl_catalog(params);
    let index = index_set(params);
    let paths: Vec<Vec<NodeId>> = tree.nodes().map(|x| tree.path_to(x)).collect();

    let mut m = BimodalModel::new();
    let add = |m: &mut BimodalModel, name: String| m.add_world(name).expect("fresh names");

    let mut p: BTreeMap<(NodeId, NodeId), WorldId> = BTreeMap::new();
    for x in tree.nodes() {
        for &v in &paths[x] {
            p.insert((v, x), WorldId::default());
        }
    }
    for (&(v, x), w) in p.iter_mut() {
        *w = add(&mut m, format!("p.{}.{}", v, x));
    }
    let top = tree.len();
    let mut u = vec![Vec::with_capacity(index.len()); top + 1];
    for (v, row) in u.iter_mut().enumerate() {
        let label = if v == top { "T".to_string() } else { v.to_string() };
        for &(fam, z) in &index {
            row.push(add(&mut m, format!("u.{}.{}.{}", label, fam, z)));
        }
    }
    let mut s: Vec<Vec<Option<WorldId>>> = vec![vec![None; index.len()]; top];
    for v in tree.nodes() {
        for (i, &(fam, z)) in index.iter().enumerate() {
            if values[v].has_s(fam, z) {
                s[v][i] = Some(add(&mut m, format!("s.{}.{}.{}", v, fam, z)));
            }
        }
    }

    for v in 0..=top {
        let mut cloud = u[v].clone();
        if v < top {
            cloud.extend(p.range((v, 0)..(v + 1, 0)).map(|(_, &w)| w));
            cloud.extend(s[v].iter().flatten());
        }
        m.add_cloud(&cloud);
    }

    for x in tree.nodes() {
        let path = &paths[x];
        for (a, &v) in path.iter().enumerate() {
            for &v2 in &path[a..] {
                m.add_d(p[&(v, x)], p[&(v2, x)]);
            }
        }
    }
    for v2 in tree.nodes() {
        for &v in &paths[v2] {
            for i in 0..index.len() {
                m.add_d(u[v][i], u[v2][i]);
                if let Some(w) = s[v2][i] {
                    m.add_d(u[v][i], w);
                }
            }
        }
    }
    for v in 0..=top {
        for i in 0..index.len() {
            m.add_d(u[v][i], u[top][i]);
        }
    }
    for w in s.iter().flatten().flatten() {
        m.add_d(*w, *w);
    }

    for a in catalog.atoms() {
        m.declare_atom(a);
    }
    let b = catalog.atom("B", 0);
    for (&(_, x), &w) in &p {
        m.set_atom(b, w, true);
        let xv = &values[x];
        for k in ones(xv.time) {
            m.set_atom(catalog.atom("X_time", k), w, true);
        }
        for k in ones(xv.tapv) {
            m.set_atom(catalog.atom("X_tapv", k), w, true);
        }
        for k in ones(xv.pos) {
            m.set_atom(catalog.atom("X_pos", k), w, true);
        }
        m.set_atom(catalog.atom("X_read", xv.read), w, true);
    }
    for (i, &(fam, z)) in index.iter().enumerate() {
        let atom = family_atom(&catalog, fam, z);
        for row in &u {
            m.set_atom(atom, row[i], true);
        }
        for row in &s {
            if let Some(w) = row[i] {
                m.set_atom(atom, w, true);
            }
        }
    }

    let root = p[&(tree.root(), tree.root())];
    m.set_class(Some(FrameClass::CrossAxiom));
    m.set_designated(Some(root));
    Ok((m, root))
}
