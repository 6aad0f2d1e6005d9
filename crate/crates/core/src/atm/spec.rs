//! Machine descriptions and their text format.
//!
//! ```text
//! symbols: # a b
//! input: a b
//! states: q0 acc rej
//! exists: q0
//! forall:
//! accept: acc
//! reject: rej
//! init: q0
//! delta: q0 # -> acc # R
//! ```
//!
//! Symbols are single characters and `#` is the blank. Transition lines are
//! kept in file order, which decides existential choices. Lines starting with
//! `%` are comments.

use super::{State, Symbol};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtmError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("input symbol `{0}` is not in the input alphabet")]
    NotInInput(char),
    #[error("unknown tree node {0}")]
    UnknownNode(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    Exists,
    Forall,
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: State,
    pub read: Symbol,
    pub to: State,
    pub write: Symbol,
    pub dir: Dir,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtmSpec {
    symbols: Vec<char>,
    input: Vec<Symbol>,
    states: Vec<String>,
    kinds: Vec<StateKind>,
    init: State,
    delta: Vec<Transition>,
}

impl AtmSpec {
    /// Builds a machine and checks the partition and transition invariants.
    /// Symbol 0 of `symbols` need not be the blank; the blank is `#`.
    pub fn new(
        symbols: Vec<char>,
        input: Vec<Symbol>,
        states: Vec<String>,
        kinds: Vec<StateKind>,
        init: State,
        delta: Vec<Transition>,
    ) -> Result<AtmSpec, AtmError> {
        let atm = AtmSpec {
            symbols,
            input,
            states,
            kinds,
            init,
            delta,
        };
        atm.check()?;
        Ok(atm)
    }

    fn check(&self) -> Result<(), AtmError> {
        let bad = |m: String| Err(AtmError::Invalid(m));
        let blanks = self.symbols.iter().filter(|&&c| c == '#').count();
        if blanks != 1 {
            return bad("the tape alphabet must contain the blank `#` exactly once".into());
        }
        for (i, a) in self.symbols.iter().enumerate() {
            if self.symbols[..i].contains(a) {
                return bad(format!("duplicate symbol `{}`", a));
            }
        }
        if self.input.is_empty() {
            return bad("the input alphabet must be non-empty".into());
        }
        if self.input.iter().any(|&s| s >= self.symbols.len() || s == self.blank()) {
            return bad("input symbols must be non-blank tape symbols".into());
        }
        if self.kinds.len() != self.states.len() || self.states.is_empty() {
            return bad("every state needs exactly one kind".into());
        }
        for (i, q) in self.states.iter().enumerate() {
            if self.states[..i].contains(q) {
                return bad(format!("duplicate state `{}`", q));
            }
        }
        for kind in [StateKind::Accept, StateKind::Reject] {
            if self.kinds.iter().filter(|&&k| k == kind).count() != 1 {
                return bad(format!("exactly one {:?} state is required", kind));
            }
        }
        if self.init >= self.states.len() {
            return bad("initial state out of range".into());
        }
        for t in &self.delta {
            if t.from >= self.states.len() || t.to >= self.states.len() {
                return bad("transition state out of range".into());
            }
            if t.read >= self.symbols.len() || t.write >= self.symbols.len() {
                return bad("transition symbol out of range".into());
            }
        }
        for q in 0..self.states.len() {
            let halting = matches!(self.kinds[q], StateKind::Accept | StateKind::Reject);
            for a in 0..self.symbols.len() {
                let n = self.transitions_from(q, a).count();
                if halting && n > 0 {
                    return bad(format!("halting state `{}` has transitions", self.states[q]));
                }
                if !halting && n == 0 {
                    return bad(format!(
                        "state `{}` has no transition on `{}`",
                        self.states[q], self.symbols[a]
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<AtmSpec, AtmError> {
        let mut symbols: Option<Vec<char>> = None;
        let mut input_names: Vec<(usize, Vec<String>)> = Vec::new();
        let mut states: Option<Vec<String>> = None;
        let mut kind_lines: Vec<(usize, StateKind, Vec<String>)> = Vec::new();
        let mut init: Option<(usize, String)> = None;
        let mut delta_lines: Vec<(usize, Vec<String>)> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            let Some((key, rest)) = trimmed.split_once(':') else {
                return Err(AtmError::Syntax { line, msg: "expected `key: value`".into() });
            };
            let items: Vec<String> = rest
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            match key.trim() {
                "symbols" => {
                    let mut out = Vec::new();
                    for s in &items {
                        let mut cs = s.chars();
                        match (cs.next(), cs.next()) {
                            (Some(c), None) => out.push(c),
                            _ => {
                                return Err(AtmError::Syntax {
                                    line,
                                    msg: format!("symbol `{}` must be a single character", s),
                                })
                            }
                        }
                    }
                    symbols = Some(out);
                }
                "input" => input_names.push((line, items)),
                "states" => states = Some(items),
                "exists" => kind_lines.push((line, StateKind::Exists, items)),
                "forall" => kind_lines.push((line, StateKind::Forall, items)),
                "accept" => kind_lines.push((line, StateKind::Accept, items)),
                "reject" => kind_lines.push((line, StateKind::Reject, items)),
                "init" => {
                    if items.len() != 1 {
                        return Err(AtmError::Syntax { line, msg: "init takes one state".into() });
                    }
                    init = Some((line, items[0].clone()));
                }
                "delta" => delta_lines.push((line, items)),
                other => {
                    return Err(AtmError::Syntax { line, msg: format!("unknown key `{}`", other) })
                }
            }
        }

        let missing = |what: &str| AtmError::Invalid(format!("missing `{}` line", what));
        let symbols = symbols.ok_or_else(|| missing("symbols"))?;
        let states = states.ok_or_else(|| missing("states"))?;
        let sym = |line: usize, s: &str| -> Result<Symbol, AtmError> {
            let mut cs = s.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => symbols.iter().position(|&x| x == c),
                _ => None,
            }
            .ok_or(AtmError::Syntax { line, msg: format!("unknown symbol `{}`", s) })
        };
        let state = |line: usize, s: &str| -> Result<State, AtmError> {
            states
                .iter()
                .position(|x| x == s)
                .ok_or(AtmError::Syntax { line, msg: format!("unknown state `{}`", s) })
        };

        let mut input = Vec::new();
        for (line, names) in &input_names {
            for n in names {
                input.push(sym(*line, n)?);
            }
        }
        let mut kinds: Vec<Option<StateKind>> = vec![None; states.len()];
        for (line, kind, names) in &kind_lines {
            for n in names {
                let q = state(*line, n)?;
                if kinds[q].is_some() {
                    return Err(AtmError::Syntax {
                        line: *line,
                        msg: format!("state `{}` listed twice", n),
                    });
                }
                kinds[q] = Some(*kind);
            }
        }
        let kinds = kinds
            .into_iter()
            .enumerate()
            .map(|(q, k)| k.ok_or_else(|| AtmError::Invalid(format!("state `{}` has no kind", states[q]))))
            .collect::<Result<Vec<_>, _>>()?;
        let (init_line, init_name) = init.ok_or_else(|| missing("init"))?;
        let init = state(init_line, &init_name)?;

        let mut delta = Vec::new();
        for (line, items) in &delta_lines {
            let line = *line;
            if items.len() != 6 || items[2] != "->" {
                return Err(AtmError::Syntax { line, msg: "expected `q a -> r b L|R`".into() });
            }
            let dir = match items[5].as_str() {
                "L" => Dir::Left,
                "R" => Dir::Right,
                other => {
                    return Err(AtmError::Syntax { line, msg: format!("bad direction `{}`", other) })
                }
            };
            delta.push(Transition {
                from: state(line, &items[0])?,
                read: sym(line, &items[1])?,
                to: state(line, &items[3])?,
                write: sym(line, &items[4])?,
                dir,
            });
        }
        AtmSpec::new(symbols, input, states.clone(), kinds, init, delta)
    }

    /// The text form accepted by [`AtmSpec::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names = |kind: StateKind| -> String {
            self.states
                .iter()
                .zip(&self.kinds)
                .filter(|(_, &k)| k == kind)
                .map(|(s, _)| s.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let syms: Vec<String> = self.symbols.iter().map(char::to_string).collect();
        writeln!(out, "symbols: {}", syms.join(" ")).unwrap();
        let input: Vec<String> = self.input.iter().map(|&s| self.symbols[s].to_string()).collect();
        writeln!(out, "input: {}", input.join(" ")).unwrap();
        writeln!(out, "states: {}", self.states.join(" ")).unwrap();
        writeln!(out, "{}", format!("exists: {}", names(StateKind::Exists)).trim_end()).unwrap();
        writeln!(out, "{}", format!("forall: {}", names(StateKind::Forall)).trim_end()).unwrap();
        writeln!(out, "{}", format!("accept: {}", names(StateKind::Accept)).trim_end()).unwrap();
        writeln!(out, "{}", format!("reject: {}", names(StateKind::Reject)).trim_end()).unwrap();
        writeln!(out, "init: {}", self.states[self.init]).unwrap();
        for t in &self.delta {
            writeln!(
                out,
                "delta: {} {} -> {} {} {}",
                self.states[t.from],
                self.symbols[t.read],
                self.states[t.to],
                self.symbols[t.write],
                if t.dir == Dir::Left { "L" } else { "R" }
            )
            .unwrap();
        }
        out
    }

    pub fn blank(&self) -> Symbol {
        self.symbols.iter().position(|&c| c == '#').expect("checked on construction")
    }

    pub fn init(&self) -> State {
        self.init
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn kind(&self, q: State) -> StateKind {
        self.kinds[q]
    }

    pub fn accept_state(&self) -> State {
        self.kinds.iter().position(|&k| k == StateKind::Accept).expect("checked")
    }

    pub fn reject_state(&self) -> State {
        self.kinds.iter().position(|&k| k == StateKind::Reject).expect("checked")
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.states[q]
    }

    pub fn symbol_name(&self, a: Symbol) -> char {
        self.symbols[a]
    }

    pub fn state(&self, name: &str) -> Option<State> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        let mut cs = name.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => self.symbols.iter().position(|&x| x == c),
            _ => None,
        }
    }

    pub fn delta(&self) -> &[Transition] {
        &self.delta
    }

    /// `δ(q, a)` in declaration order.
    pub fn transitions_from(&self, q: State, a: Symbol) -> impl Iterator<Item = &Transition> {
        self.delta.iter().filter(move |t| t.from == q && t.read == a)
    }

    /// `max |δ(q, a)|` over all state/symbol pairs.
    pub fn max_branching(&self) -> usize {
        (0..self.states.len())
            .flat_map(|q| (0..self.symbols.len()).map(move |a| (q, a)))
            .map(|(q, a)| self.transitions_from(q, a).count())
            .max()
            .unwrap_or(0)
    }

    /// Maps an input string to symbol ids, rejecting characters outside `Σ`.
    pub fn encode_input(&self, w: &str) -> Result<Vec<Symbol>, AtmError> {
        w.chars()
            .map(|c| {
                self.symbols
                    .iter()
                    .position(|&x| x == c)
                    .filter(|s| self.input.contains(s))
                    .ok_or(AtmError::NotInInput(c))
            })
            .collect()
    }
}
