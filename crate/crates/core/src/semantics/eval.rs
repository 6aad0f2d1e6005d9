use super::{BimodalModel, SemanticsError, WorldId};
use crate::formula::{Formula, Kind};
use std::collections::HashMap;
use std::rc::Rc;

/// A set of worlds as a bit vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    words: Vec<u64>,
    len: usize,
}

impl PointSet {
    pub fn empty(len: usize) -> PointSet {
        PointSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> PointSet {
        let mut s = PointSet::empty(len);
        for w in 0..len {
            s.insert(w);
        }
        s
    }

    pub fn contains(&self, w: WorldId) -> bool {
        (self.words[w / 64] >> (w % 64)) & 1 == 1
    }

    pub fn insert(&mut self, w: WorldId) {
        self.words[w / 64] |= 1 << (w % 64);
    }

    pub fn iter(&self) -> impl Iterator<Item = WorldId> + '_ {
        (0..self.len).filter(|&w| self.contains(w))
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn complement(&self) -> PointSet {
        let mut out = PointSet {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        let tail = self.len % 64;
        if tail != 0 {
            let last = out.words.len() - 1;
            out.words[last] &= (1u64 << tail) - 1;
        }
        out
    }

    fn intersect(&self, other: &PointSet) -> PointSet {
        PointSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }
}

/// Model checker with a cache of truth sets keyed by structural subformula.
///
/// Each subformula is evaluated once for all worlds; repeated queries for
/// overlapping formulas reuse the cache.
pub struct Evaluator<'m> {
    model: &'m BimodalModel,
    cache: HashMap<Formula, Rc<PointSet>>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m BimodalModel) -> Evaluator<'m> {
        Evaluator {
            model,
            cache: HashMap::new(),
        }
    }

    pub fn model(&self) -> &'m BimodalModel {
        self.model
    }

    /// The set of worlds where `f` holds.
    pub fn truth_set(&mut self, f: &Formula) -> Rc<PointSet> {
        if let Some(s) = self.cache.get(f) {
            return s.clone();
        }
        let mut stack: Vec<(&Formula, bool)> = vec![(f, false)];
        while let Some((g, ready)) = stack.pop() {
            if self.cache.contains_key(g) {
                continue;
            }
            if !ready {
                stack.push((g, true));
                for c in g.children() {
                    if !self.cache.contains_key(c) {
                        stack.push((c, false));
                    }
                }
                continue;
            }
            let set = self.compute(g);
            self.cache.insert(g.clone(), Rc::new(set));
        }
        self.cache[f].clone()
    }

    fn compute(&self, g: &Formula) -> PointSet {
        let m = self.model;
        let n = m.len();
        match g.kind() {
            Kind::Atom(a) => {
                let mut s = PointSet::empty(n);
                if let Some(ws) = m.valuation().get(a) {
                    for &w in ws {
                        s.insert(w);
                    }
                }
                s
            }
            Kind::Not(a) => self.cache[a].complement(),
            Kind::And(a, b) => self.cache[a].intersect(&self.cache[b]),
            Kind::K(a) => {
                let inner = &self.cache[a];
                let mut s = PointSet::empty(n);
                for w in 0..n {
                    if m.l_successors(w).iter().all(|&v| inner.contains(v)) {
                        s.insert(w);
                    }
                }
                s
            }
            Kind::Box(a) => {
                let inner = &self.cache[a];
                let mut s = PointSet::empty(n);
                for w in 0..n {
                    if m.d_successors(w).iter().all(|&v| inner.contains(v)) {
                        s.insert(w);
                    }
                }
                s
            }
        }
    }

    pub fn holds(&mut self, w: WorldId, f: &Formula) -> bool {
        self.truth_set(f).contains(w)
    }

    /// For `f` false at `w`, a chain of false subformulas ending at one that
    /// fails for a local reason: an atom, a negated true formula, or a
    /// diamond without witness. Each step enters a false conjunct or a
    /// refuting successor. Empty when `f` holds at `w`.
    pub fn failure_path(&mut self, w: WorldId, f: &Formula) -> Vec<(WorldId, Formula)> {
        let mut path = Vec::new();
        if self.holds(w, f) {
            return path;
        }
        let (mut w, mut f) = (w, f.clone());
        loop {
            path.push((w, f.clone()));
            let next = match f.kind() {
                Kind::And(a, b) => Some((w, if self.holds(w, a) { b.clone() } else { a.clone() })),
                Kind::K(a) => self.first_refuting(self.model.l_successors(w).iter().copied(), a),
                Kind::Box(a) => self.first_refuting(self.model.d_successors(w).iter().copied(), a),
                Kind::Not(g) => match g.kind() {
                    Kind::Not(h) => Some((w, h.clone())),
                    _ => None,
                },
                Kind::Atom(_) => None,
            };
            match next {
                Some((v, g)) => (w, f) = (v, g),
                None => return path,
            }
        }
    }

    fn first_refuting(
        &mut self,
        succ: impl Iterator<Item = WorldId>,
        a: &Formula,
    ) -> Option<(WorldId, Formula)> {
        let succ: Vec<WorldId> = succ.collect();
        succ.into_iter().find(|&v| !self.holds(v, a)).map(|v| (v, a.clone()))
    }

    /// Truth at every world of the model.
    pub fn valid(&mut self, f: &Formula) -> bool {
        self.truth_set(f).count() == self.model.len()
    }
}

/// Truth of `f` at the world named `point`.
pub fn eval(model: &BimodalModel, point: &str, f: &Formula) -> Result<bool, SemanticsError> {
    let w = model.world(point)?;
    Ok(Evaluator::new(model).holds(w, f))
}
