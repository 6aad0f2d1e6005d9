//! Single-tape alternating Turing machines, their configurations, and
//! accepting and partial computation trees.

mod spec;
mod tree;

pub use spec::{AtmError, AtmSpec, Dir, StateKind, Transition};
pub use tree::{
    find_accepting_tree, tree_size_bound, validate_tree, CanonicalTree, ComputationTree, Condition,
    ConditionCheck, NodeData, NodeId, TreeMode, TreeReport,
};

use std::collections::BTreeMap;

pub type State = usize;
pub type Symbol = usize;

/// An instantaneous description `(q, z, γ)`. Only non-blank cells are stored,
/// so equal configurations compare and hash equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: State,
    pub head: i64,
    tape: BTreeMap<i64, Symbol>,
    blank: Symbol,
}

impl Configuration {
    pub fn new(state: State, head: i64, blank: Symbol) -> Configuration {
        Configuration {
            state,
            head,
            tape: BTreeMap::new(),
            blank,
        }
    }

    pub fn read(&self, cell: i64) -> Symbol {
        self.tape.get(&cell).copied().unwrap_or(self.blank)
    }

    pub fn write(&mut self, cell: i64, sym: Symbol) {
        if sym == self.blank {
            self.tape.remove(&cell);
        } else {
            self.tape.insert(cell, sym);
        }
    }

    /// The symbol under the head.
    pub fn current(&self) -> Symbol {
        self.read(self.head)
    }

    /// Non-blank cells in increasing order.
    pub fn support(&self) -> impl Iterator<Item = (i64, Symbol)> + '_ {
        self.tape.iter().map(|(&c, &s)| (c, s))
    }

    /// Renders as `state@head [cell:sym,...]` using the machine's names.
    pub fn describe(&self, atm: &AtmSpec) -> String {
        let cells: Vec<String> = self
            .support()
            .map(|(c, s)| format!("{}:{}", c, atm.symbol_name(s)))
            .collect();
        format!("{}@{} [{}]", atm.state_name(self.state), self.head, cells.join(","))
    }
}

/// `σ_M(w)`: head on cell 0, `w` in cells `1..=|w|`, blanks elsewhere.
pub fn initial_config(atm: &AtmSpec, w: &str) -> Result<Configuration, AtmError> {
    let word = atm.encode_input(w)?;
    let mut c = Configuration::new(atm.init(), 0, atm.blank());
    for (i, &s) in word.iter().enumerate() {
        c.write(i as i64 + 1, s);
    }
    Ok(c)
}

/// Successor configurations in transition order, write then move, without
/// duplicates.
pub fn successors(atm: &AtmSpec, c: &Configuration) -> Vec<Configuration> {
    let mut out: Vec<Configuration> = Vec::new();
    for t in atm.transitions_from(c.state, c.current()) {
        let next = apply(c, t);
        if !out.contains(&next) {
            out.push(next);
        }
    }
    out
}

/// The configuration reached from `c` by the transition `t`. The caller is
/// responsible for `t` matching the state and symbol of `c`.
pub fn apply(c: &Configuration, t: &Transition) -> Configuration {
    let mut next = c.clone();
    next.write(c.head, t.write);
    next.head += match t.dir {
        Dir::Left => -1,
        Dir::Right => 1,
    };
    next.state = t.to;
    next
}
