//! Bimodal formulas over atoms, negation, conjunction and the two boxes `K` and `[]`.
//!
//! The tree only ever contains the five core constructors. Disjunction,
//! implication, equivalence, `L` and `<>` are builder functions that expand
//! into core nodes when they are called.
//!
//! Nodes are reference counted and carry a precomputed structural hash and
//! symbol count, so large generated formulas with shared subtrees stay cheap
//! to compare, hash and measure.

mod bits;
mod macros;
mod syntax;

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use bits::{bin, bit, ones};
pub use macros::{
    compare, compare_binary, eq_binary, eq_vector, persistent_macro, rightmost, shared_var_s4s5,
    shared_var_ssl, BinaryOp, MacroError, Rightmost, VectorOp,
};
pub use syntax::{parse, ParseError, ParseErrorKind};

/// Atom indices. `x101` is atom 5.
pub type AtomId = u32;

/// A bimodal formula. Cloning is cheap.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

struct Node {
    kind: Kind,
    hash: u64,
    symbols: u64,
}

/// The five core constructors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    Atom(AtomId),
    Not(Formula),
    And(Formula, Formula),
    K(Formula),
    Box(Formula),
}

fn numeral_len(id: AtomId) -> u64 {
    if id == 0 {
        1
    } else {
        u64::from(32 - id.leading_zeros())
    }
}

impl Formula {
    fn from_kind(kind: Kind) -> Formula {
        let mut h = DefaultHasher::new();
        let symbols = match &kind {
            Kind::Atom(i) => {
                0u8.hash(&mut h);
                i.hash(&mut h);
                1 + numeral_len(*i)
            }
            Kind::Not(a) => {
                1u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                1 + a.symbol_count()
            }
            Kind::And(a, b) => {
                2u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                b.0.hash.hash(&mut h);
                3 + a.symbol_count() + b.symbol_count()
            }
            Kind::K(a) => {
                3u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                1 + a.symbol_count()
            }
            Kind::Box(a) => {
                4u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                1 + a.symbol_count()
            }
        };
        Formula(Arc::new(Node {
            kind,
            hash: h.finish(),
            symbols,
        }))
    }

    pub fn atom(id: AtomId) -> Formula {
        Formula::from_kind(Kind::Atom(id))
    }

    pub fn not(&self) -> Formula {
        Formula::from_kind(Kind::Not(self.clone()))
    }

    pub fn and(&self, other: &Formula) -> Formula {
        Formula::from_kind(Kind::And(self.clone(), other.clone()))
    }

    pub fn k(&self) -> Formula {
        Formula::from_kind(Kind::K(self.clone()))
    }

    pub fn boxed(&self) -> Formula {
        Formula::from_kind(Kind::Box(self.clone()))
    }

    /// `L φ = ¬K¬φ`.
    pub fn l(&self) -> Formula {
        self.not().k().not()
    }

    /// `◊φ = ¬□¬φ`.
    pub fn diamond(&self) -> Formula {
        self.not().boxed().not()
    }

    /// `φ ∨ ψ = ¬(¬φ ∧ ¬ψ)`.
    pub fn or(&self, other: &Formula) -> Formula {
        self.not().and(&other.not()).not()
    }

    /// `φ → ψ = ¬(φ ∧ ¬ψ)`.
    pub fn implies(&self, other: &Formula) -> Formula {
        self.and(&other.not()).not()
    }

    /// `φ ↔ ψ = (φ → ψ) ∧ (ψ → φ)`.
    pub fn iff(&self, other: &Formula) -> Formula {
        self.implies(other).and(&other.implies(self))
    }

    /// The canonical always-true formula `!(x0 & !x0)`.
    pub fn top() -> Formula {
        Formula::bottom().not()
    }

    /// The canonical always-false formula `(x0 & !x0)`.
    pub fn bottom() -> Formula {
        let x0 = Formula::atom(0);
        x0.and(&x0.not())
    }

    /// Right-nested conjunction; [`Formula::top`] when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let parts: Vec<Formula> = parts.into_iter().collect();
        Self::conj_opt(parts).unwrap_or_else(Formula::top)
    }

    /// Right-nested conjunction, `None` when empty.
    pub fn conj_opt(parts: Vec<Formula>) -> Option<Formula> {
        let mut it = parts.into_iter().rev();
        let last = it.next()?;
        Some(it.fold(last, |acc, f| f.and(&acc)))
    }

    /// `¬(¬φ1 ∧ … ∧ ¬φm)`, the single part itself when `m = 1`, and
    /// [`Formula::bottom`] when empty.
    pub fn disj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let parts: Vec<Formula> = parts.into_iter().collect();
        match parts.len() {
            0 => Formula::bottom(),
            1 => parts.into_iter().next().unwrap(),
            _ => Formula::conj(parts.iter().map(Formula::not)).not(),
        }
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn as_atom(&self) -> Option<AtomId> {
        match self.kind() {
            Kind::Atom(i) => Some(*i),
            _ => None,
        }
    }

    pub fn is_box(&self) -> bool {
        matches!(self.kind(), Kind::Box(_))
    }

    /// Number of symbols over the alphabet `( ) ¬ □ K ∧ x 0 1`.
    pub fn symbol_count(&self) -> u64 {
        self.0.symbols
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Direct children in left-to-right order.
    pub fn children(&self) -> Vec<&Formula> {
        match self.kind() {
            Kind::Atom(_) => vec![],
            Kind::Not(a) | Kind::K(a) | Kind::Box(a) => vec![a],
            Kind::And(a, b) => vec![a, b],
        }
    }

    /// Number of nodes of the formula as a tree (shared subtrees counted
    /// once per occurrence).
    pub fn tree_size(&self) -> u64 {
        let mut total = 0u64;
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            total += 1;
            stack.extend(f.children());
        }
        total
    }

    /// All distinct subformulas, including `self`, in post-order of first
    /// occurrence (children before parents).
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen: HashSet<Formula> = HashSet::new();
        let mut out = Vec::new();
        let mut stack: Vec<(&Formula, bool)> = vec![(self, false)];
        while let Some((f, expanded)) = stack.pop() {
            if seen.contains(f) {
                continue;
            }
            if expanded {
                seen.insert(f.clone());
                out.push(f.clone());
            } else {
                stack.push((f, true));
                for c in f.children().into_iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<AtomId> {
        self.subformulas()
            .iter()
            .filter_map(Formula::as_atom)
            .collect()
    }

    /// Canonical text.
    pub fn render(&self) -> String {
        syntax::render(self)
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.symbols != other.0.symbols {
            return false;
        }
        // Iterative comparison keeps deep conjunction chains off the call stack.
        let mut stack = vec![(self, other)];
        while let Some((a, b)) = stack.pop() {
            if Arc::ptr_eq(&a.0, &b.0) {
                continue;
            }
            if a.0.hash != b.0.hash {
                return false;
            }
            match (a.kind(), b.kind()) {
                (Kind::Atom(i), Kind::Atom(j)) if i == j => {}
                (Kind::Not(x), Kind::Not(y))
                | (Kind::K(x), Kind::K(y))
                | (Kind::Box(x), Kind::Box(y)) => stack.push((x, y)),
                (Kind::And(x1, x2), Kind::And(y1, y2)) => {
                    stack.push((x1, y1));
                    stack.push((x2, y2));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", self.render())
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Formula, ParseError> {
        parse(s)
    }
}

/// A vector of formulas `F_{l-1}, …, F_0`; position 0 is least significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaVector {
    lsb_first: Vec<Formula>,
}

impl FormulaVector {
    /// Builds a vector from entries listed most significant first.
    pub fn from_msb(entries: Vec<Formula>) -> FormulaVector {
        assert!(!entries.is_empty(), "formula vectors have length at least 1");
        let mut lsb_first = entries;
        lsb_first.reverse();
        FormulaVector { lsb_first }
    }

    /// Builds a vector from entries listed least significant first.
    pub fn from_lsb(entries: Vec<Formula>) -> FormulaVector {
        assert!(!entries.is_empty(), "formula vectors have length at least 1");
        FormulaVector { lsb_first: entries }
    }

    /// A vector of atoms; `ids[0]` is the least significant position.
    pub fn atoms_lsb(ids: &[AtomId]) -> FormulaVector {
        FormulaVector::from_lsb(ids.iter().map(|&i| Formula::atom(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.lsb_first.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entry `F_k`.
    pub fn get(&self, k: usize) -> &Formula {
        &self.lsb_first[k]
    }

    pub fn map(&self, f: impl Fn(&Formula) -> Formula) -> FormulaVector {
        FormulaVector {
            lsb_first: self.lsb_first.iter().map(f).collect(),
        }
    }
}
