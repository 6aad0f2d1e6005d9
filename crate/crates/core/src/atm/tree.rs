use super::spec::{AtmError, AtmSpec, StateKind};
use super::{initial_config, successors, Configuration, State, Symbol};
use std::collections::HashMap;
use std::fmt::{self, Write};

pub type NodeId = usize;

/// A rooted tree of configurations. Node 0 is the root and every other node
/// is added below an existing one, so parents always precede children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationTree {
    configs: Vec<Configuration>,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
}

/// Derived data of a node. `written` and `pred` are absent at the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeData {
    pub time: u64,
    pub pos: i64,
    pub state: State,
    pub read: Symbol,
    pub written: Option<Symbol>,
    pub pred: Option<NodeId>,
}

impl ComputationTree {
    pub fn new(root: Configuration) -> ComputationTree {
        ComputationTree {
            configs: vec![root],
            parent: vec![None],
            children: vec![Vec::new()],
        }
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn add_child(&mut self, parent: NodeId, config: Configuration) -> Result<NodeId, AtmError> {
        if parent >= self.len() {
            return Err(AtmError::UnknownNode(parent));
        }
        let id = self.configs.len();
        self.configs.push(config);
        self.parent.push(Some(parent));
        self.children.push(Vec::new());
        self.children[parent].push(id);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.len()
    }

    pub fn config(&self, v: NodeId) -> &Configuration {
        &self.configs[v]
    }

    /// Replaces the label of `v`, leaving the shape unchanged.
    pub fn set_config(&mut self, v: NodeId, c: Configuration) {
        self.configs[v] = c;
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.children[v].is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter(|&v| self.is_leaf(v))
    }

    pub fn depth(&self, v: NodeId) -> u64 {
        let mut d = 0;
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            d += 1;
            cur = p;
        }
        d
    }

    /// Length of the longest root-to-leaf path.
    pub fn height(&self) -> u64 {
        let mut depth = vec![0u64; self.len()];
        for v in 1..self.len() {
            depth[v] = depth[self.parent[v].expect("non-root")] + 1;
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// The nodes on the path from the root to `v`, root first.
    pub fn path_to(&self, v: NodeId) -> Vec<NodeId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn node_data(&self, v: NodeId) -> Result<NodeData, AtmError> {
        if v >= self.len() {
            return Err(AtmError::UnknownNode(v));
        }
        let c = &self.configs[v];
        let pred = self.parent[v];
        Ok(NodeData {
            time: self.depth(v),
            pos: c.head,
            state: c.state,
            read: c.current(),
            written: pred.map(|p| c.read(self.configs[p].head)),
            pred,
        })
    }

    /// A node-id-free form; two trees have equal canonical forms exactly when
    /// they are isomorphic as labelled trees.
    pub fn canonical(&self) -> CanonicalTree {
        let mut built: Vec<Option<CanonicalTree>> = vec![None; self.len()];
        for v in (0..self.len()).rev() {
            let mut children: Vec<CanonicalTree> = self.children[v]
                .iter()
                .map(|&c| built[c].take().expect("children are built first"))
                .collect();
            children.sort();
            built[v] = Some(CanonicalTree {
                config: self.configs[v].clone(),
                children,
            });
        }
        built[0].take().expect("root")
    }

    /// One line per node: `id parent config`, with `-` as the root's parent.
    pub fn describe(&self, atm: &AtmSpec) -> String {
        let mut out = String::new();
        for v in self.nodes() {
            let p = self.parent[v].map_or("-".to_string(), |p| p.to_string());
            writeln!(out, "{} {} {}", v, p, self.configs[v].describe(atm)).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTree {
    pub config: Configuration,
    pub children: Vec<CanonicalTree>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeMode {
    Accepting,
    Partial,
}

/// The five tree conditions. `Leaves` is condition V in accepting mode and
/// V′ in partial mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    Root,
    Steps,
    DistinctSiblings,
    UniversalComplete,
    Leaves,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::Root,
        Condition::Steps,
        Condition::DistinctSiblings,
        Condition::UniversalComplete,
        Condition::Leaves,
    ];

    pub fn label(self, mode: TreeMode) -> &'static str {
        match (self, mode) {
            (Condition::Root, _) => "I",
            (Condition::Steps, _) => "II",
            (Condition::DistinctSiblings, _) => "III",
            (Condition::UniversalComplete, _) => "IV",
            (Condition::Leaves, TreeMode::Accepting) => "V",
            (Condition::Leaves, TreeMode::Partial) => "V'",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub passed: bool,
    /// The first offending node, if any.
    pub node: Option<NodeId>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeReport {
    pub mode: TreeMode,
    pub checks: Vec<ConditionCheck>,
}

impl TreeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, c: Condition) -> &ConditionCheck {
        self.checks.iter().find(|k| k.condition == c).expect("all conditions are checked")
    }
}

impl fmt::Display for TreeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{}: {}", c.condition.label(self.mode), if c.passed { "pass" } else { "fail" })?;
            if let Some(v) = c.node {
                write!(f, " at node {} ({})", v, c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn validate_tree(atm: &AtmSpec, w: &str, tree: &ComputationTree, mode: TreeMode) -> TreeReport {
    let mut checks = Vec::new();
    let mut push = |condition: Condition, failure: Option<(NodeId, String)>| {
        checks.push(ConditionCheck {
            condition,
            passed: failure.is_none(),
            node: failure.as_ref().map(|f| f.0),
            detail: failure.map(|f| f.1).unwrap_or_default(),
        });
    };

    let root_failure = match initial_config(atm, w) {
        Ok(c) if &c == tree.config(0) => None,
        Ok(_) => Some((0, "root is not the initial configuration".to_string())),
        Err(e) => Some((0, e.to_string())),
    };
    push(Condition::Root, root_failure);

    let internal: Vec<NodeId> = tree.nodes().filter(|&v| !tree.is_leaf(v)).collect();
    let succ: HashMap<NodeId, Vec<Configuration>> =
        internal.iter().map(|&v| (v, successors(atm, tree.config(v)))).collect();

    let steps = internal.iter().find_map(|&v| {
        tree.children(v)
            .iter()
            .find(|&&c| !succ[&v].contains(tree.config(c)))
            .map(|&c| (c, "label is not a successor of its parent".to_string()))
    });
    push(Condition::Steps, steps);

    let distinct = internal.iter().find_map(|&v| {
        let kids = tree.children(v);
        (0..kids.len())
            .find(|&i| kids[..i].iter().any(|&k| tree.config(k) == tree.config(kids[i])))
            .map(|i| (kids[i], "duplicate sibling label".to_string()))
    });
    push(Condition::DistinctSiblings, distinct);

    let universal = internal.iter().find_map(|&v| {
        if atm.kind(tree.config(v).state) != StateKind::Forall {
            return None;
        }
        let missing = succ[&v]
            .iter()
            .filter(|s| !tree.children(v).iter().any(|&k| tree.config(k) == *s))
            .count();
        (missing > 0).then(|| (v, format!("{} successor(s) missing", missing)))
    });
    push(Condition::UniversalComplete, universal);

    let leaves = tree.leaves().find_map(|v| {
        let q = tree.config(v).state;
        let ok = match mode {
            TreeMode::Accepting => q == atm.accept_state(),
            TreeMode::Partial => q != atm.reject_state(),
        };
        (!ok).then(|| (v, format!("leaf in state {}", atm.state_name(q))))
    });
    push(Condition::Leaves, leaves);

    TreeReport { mode, checks }
}

/// `Σ_{i=0}^{height} d^i`, the largest node count of a tree of the given
/// height whose nodes have at most `d` children. Saturates at `u128::MAX`.
pub fn tree_size_bound(d: u64, height: u64) -> u128 {
    let d = d as u128;
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=height {
        total = total.saturating_add(level);
        if d == 0 {
            break;
        }
        level = level.saturating_mul(d);
    }
    total
}

type Key = (Configuration, u64);

struct Frame {
    key: Key,
    exists: bool,
    succ: Vec<Configuration>,
    next: usize,
}

/// Decides whether `c` has an accepting tree of height at most `fuel`,
/// filling `memo` for every pair it evaluates.
fn accepts(atm: &AtmSpec, c: Configuration, fuel: u64, memo: &mut HashMap<Key, bool>) -> bool {
    let open = |key: Key, memo: &mut HashMap<Key, bool>| -> Option<Frame> {
        if memo.contains_key(&key) {
            return None;
        }
        let kind = atm.kind(key.0.state);
        let settled = match kind {
            StateKind::Accept => Some(true),
            StateKind::Reject => Some(false),
            _ if key.1 == 0 => Some(false),
            _ => None,
        };
        if let Some(r) = settled {
            memo.insert(key, r);
            return None;
        }
        Some(Frame {
            succ: successors(atm, &key.0),
            exists: kind == StateKind::Exists,
            next: 0,
            key,
        })
    };

    let root: Key = (c, fuel);
    let mut stack: Vec<Frame> = open(root.clone(), memo).into_iter().collect();
    while let Some(top) = stack.last_mut() {
        let done = if top.next < top.succ.len() {
            let child = (top.succ[top.next].clone(), top.key.1 - 1);
            match memo.get(&child) {
                None => {
                    if let Some(f) = open(child, memo) {
                        stack.push(f);
                    }
                    continue;
                }
                Some(&r) if r == top.exists => Some(r),
                Some(_) => {
                    top.next += 1;
                    None
                }
            }
        } else {
            Some(!top.exists)
        };
        if let Some(r) = done {
            let f = stack.pop().expect("non-empty");
            memo.insert(f.key, r);
        }
    }
    memo[&root]
}

/// Searches for an accepting tree of height at most `time_bound`.
/// Existential nodes keep the first accepting successor in transition order and
/// universal nodes keep every distinct successor.
pub fn find_accepting_tree(
    atm: &AtmSpec,
    w: &str,
    time_bound: u64,
) -> Result<Option<ComputationTree>, AtmError> {
    let start = initial_config(atm, w)?;
    let mut memo = HashMap::new();
    if !accepts(atm, start.clone(), time_bound, &mut memo) {
        return Ok(None);
    }
    let mut tree = ComputationTree::new(start);
    let mut work = vec![(0, time_bound)];
    while let Some((v, fuel)) = work.pop() {
        let c = tree.config(v).clone();
        let chosen: Vec<Configuration> = match atm.kind(c.state) {
            StateKind::Accept => continue,
            StateKind::Exists => successors(atm, &c)
                .into_iter()
                .find(|s| memo.get(&(s.clone(), fuel - 1)) == Some(&true))
                .into_iter()
                .collect(),
            StateKind::Forall => successors(atm, &c),
            StateKind::Reject => unreachable!("rejecting nodes are never accepted"),
        };
        for s in chosen {
            let id = tree.add_child(v, s)?;
            work.push((id, fuel - 1));
        }
    }
    Ok(Some(tree))
}
