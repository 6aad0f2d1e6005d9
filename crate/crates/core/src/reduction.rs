//! Pieces shared by both machine reductions: parameters, variable catalogs,
//! the tape window, and errors.

use crate::atm::{AtmError, AtmSpec, ComputationTree, NodeId};
use crate::formula::{AtomId, Formula, FormulaVector};
use crate::semantics::{Evaluator, WorldId};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Atm(#[from] AtmError),
    #[error("tree is not an accepting tree: {0}")]
    TreeInvalid(String),
    #[error("window overflow: {0}")]
    WindowOverflow(String),
    #[error("model is not a {class} model: {detail}")]
    ModelInvalid { class: String, detail: String },
    #[error("no witness for {subformula} at {}", node.map_or("the designated point".to_string(), |v| format!("node {}", v)))]
    WitnessNotFound { node: Option<NodeId>, subformula: String },
    #[error("node {node} violates morphism condition {condition}: {detail}")]
    MorphismInvalid { node: NodeId, condition: u8, detail: String },
    #[error("partial tree grew past {limit} nodes")]
    BoundExceeded { limit: u128 },
    #[error("extraction failed at step {step}: {reason}")]
    ExtractionFailure { step: usize, reason: String },
}

/// An ATM, an input word and the polynomial `p(x) = Σ c_i x^i` fixing
/// `N = p(|w|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionParams {
    pub atm: AtmSpec,
    pub poly: Vec<u64>,
    pub w: String,
    word: Vec<usize>,
    big_n: usize,
}

/// Largest `N` accepted. Positions take `N + 1` bits and must fit in `i64`.
pub const MAX_N: usize = 40;

impl ReductionParams {
    pub fn new(atm: AtmSpec, poly: Vec<u64>, w: &str) -> Result<ReductionParams, ReductionError> {
        let word = atm.encode_input(w)?;
        let n = word.len() as u64;
        let mut value: u64 = 0;
        for &c in poly.iter().rev() {
            value = value
                .checked_mul(n)
                .and_then(|v| v.checked_add(c))
                .ok_or_else(|| ReductionError::Params("p(n) overflows".into()))?;
        }
        if value < n.max(1) {
            return Err(ReductionError::Params(format!(
                "p(n) = {} but p(n) >= max(n, 1) is required for n = {}",
                value, n
            )));
        }
        if value as usize > MAX_N {
            return Err(ReductionError::Params(format!("N = {} exceeds {}", value, MAX_N)));
        }
        Ok(ReductionParams {
            atm,
            poly,
            w: w.to_string(),
            word,
            big_n: value as usize,
        })
    }

    /// `|w|`.
    pub fn n(&self) -> usize {
        self.word.len()
    }

    /// `N = p(n)`.
    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// The head position `2^N − 1` of the initial configuration in the
    /// window view.
    pub fn start_pos(&self) -> u64 {
        (1u64 << self.big_n) - 1
    }

    /// Largest time stamp, `2^N − 1`.
    pub fn max_time(&self) -> u64 {
        (1u64 << self.big_n) - 1
    }

    /// Largest window cell, `2^{N+1} − 2`.
    pub fn max_pos(&self) -> u64 {
        (1u64 << (self.big_n + 1)) - 2
    }

    /// Converts a head position of the machine view (input at cells
    /// `1..=n`) to the window view.
    pub fn window_pos(&self, head: i64) -> Option<u64> {
        let p = head + self.start_pos() as i64;
        (p >= 0 && p as u64 <= self.max_pos()).then_some(p as u64)
    }

    /// Checks that every node of `tree` fits the window: time at most
    /// `2^N − 1`, head inside `[0, 2^{N+1} − 2]`.
    pub fn check_window(&self, tree: &ComputationTree) -> Result<(), ReductionError> {
        for v in tree.nodes() {
            let d = tree.node_data(v)?;
            if d.time > self.max_time() {
                return Err(ReductionError::WindowOverflow(format!(
                    "node {} has time {} > {}",
                    v,
                    d.time,
                    self.max_time()
                )));
            }
            if self.window_pos(d.pos).is_none() {
                return Err(ReductionError::WindowOverflow(format!(
                    "node {} has head {} outside the window",
                    v, d.pos
                )));
            }
        }
        Ok(())
    }
}

/// An accepting tree read off a model, with the morphism `π` from tree
/// nodes to points of the original model.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub tree: ComputationTree,
    pub morphism: Vec<WorldId>,
    /// Number of leaf expansions performed.
    pub steps: usize,
}

/// `1 + time(v′)` for the last node `v′` strictly before `x` on the root path
/// with the head on the same cell as at `x`, or 0 when there is none.
pub fn time_after_previous_visit(tree: &ComputationTree, x: NodeId) -> u64 {
    let pos = tree.config(x).head;
    let path = tree.path_to(x);
    path[..path.len() - 1]
        .iter()
        .enumerate()
        .rev()
        .find(|(_, &v)| tree.config(v).head == pos)
        .map_or(0, |(t, _)| 1 + t as u64)
}

/// The binary value of `v` at `w`, position 0 least significant.
pub fn decode(ev: &mut Evaluator, v: &FormulaVector, w: WorldId) -> u64 {
    (0..v.len())
        .filter(|&k| ev.holds(w, v.get(k)))
        .map(|k| 1u64 << k)
        .sum()
}

/// The indices of the true entries of a unary vector at `w`.
pub fn decode_unary(ev: &mut Evaluator, v: &FormulaVector, w: WorldId) -> Vec<usize> {
    (0..v.len()).filter(|&k| ev.holds(w, v.get(k))).collect()
}

/// A named family of atoms in a catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub name: &'static str,
    /// `ids[k]` is the atom of index `k`.
    pub ids: Vec<AtomId>,
}

/// A deterministic assignment of atom indices to the variable families of a
/// construction. Atoms are handed out consecutively in the order families and
/// indices are declared.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    families: Vec<Family>,
    next: AtomId,
}

impl Catalog {
    pub fn new() -> Catalog {
        Catalog::default()
    }

    fn push(&mut self, name: &'static str, order: impl Iterator<Item = usize>, len: usize) {
        let mut ids = vec![0; len];
        for k in order {
            ids[k] = self.next;
            self.next += 1;
        }
        self.families.push(Family { name, ids });
    }

    /// A family of `len` atoms numbered from index `len − 1` down to 0.
    pub fn msb_first(&mut self, name: &'static str, len: usize) -> &mut Catalog {
        self.push(name, (0..len).rev(), len);
        self
    }

    /// A family of `len` atoms numbered from index 0 up.
    pub fn lsb_first(&mut self, name: &'static str, len: usize) -> &mut Catalog {
        self.push(name, 0..len, len);
        self
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn family(&self, name: &str) -> &Family {
        self.families
            .iter()
            .find(|f| f.name == name)
            .unwrap_or_else(|| panic!("no family `{}` in catalog", name))
    }

    pub fn atom(&self, name: &str, k: usize) -> AtomId {
        self.family(name).ids[k]
    }

    pub fn var(&self, name: &str, k: usize) -> Formula {
        Formula::atom(self.atom(name, k))
    }

    /// The family as a vector of plain atoms.
    pub fn vector(&self, name: &str) -> FormulaVector {
        FormulaVector::atoms_lsb(&self.family(name).ids)
    }

    /// Number of atoms handed out.
    pub fn len(&self) -> usize {
        self.next as usize
    }

    pub fn is_empty(&self) -> bool {
        self.next == 0
    }

    /// Every atom in the catalog in id order.
    pub fn atoms(&self) -> impl Iterator<Item = AtomId> {
        0..self.next
    }

    /// One `name index atom` line per atom, in atom order.
    pub fn render(&self) -> String {
        let mut rows: Vec<(AtomId, &str, usize)> = self
            .families
            .iter()
            .flat_map(|f| f.ids.iter().enumerate().map(move |(k, &a)| (a, f.name, k)))
            .collect();
        rows.sort();
        let mut out = String::new();
        for (a, name, k) in rows {
            writeln!(out, "{} {} x{:b}", name, k, a).unwrap();
        }
        out
    }
}

/// A generated formula with its catalog and its top-level conjuncts by name.
#[derive(Debug, Clone)]
pub struct Generated {
    pub formula: Formula,
    pub catalog: Catalog,
    pub conjuncts: Vec<(&'static str, Formula)>,
}

impl Generated {
    pub fn conjunct(&self, name: &str) -> &Formula {
        &self
            .conjuncts
            .iter()
            .find(|(n, _)| *n == name)
            .unwrap_or_else(|| panic!("no conjunct `{}`", name))
            .1
    }
}

/// Conjunction that skips parts equal to the canonical TRUE, so that empty
/// sub-conjunctions vanish from a larger conjunction.
pub(crate) fn conj_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
    let top = Formula::top();
    Formula::conj(parts.into_iter().filter(|p| *p != top))
}

/// `K□φ`.
pub(crate) fn everywhere(f: &Formula) -> Formula {
    f.boxed().k()
}
