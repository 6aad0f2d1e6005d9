use crate::atm::{Dir, StateKind};
use crate::formula::{
    compare, compare_binary, eq_binary, eq_vector, persistent_macro, rightmost, shared_var_s4s5, BinaryOp,
    Formula, FormulaVector, Rightmost, VectorOp,
};
use crate::reduction::{everywhere, Catalog, Generated, ReductionError, ReductionParams};
use std::collections::HashMap;

/// Atom layout of `f_S4×S5`: the shared families `A^time`, `A^pos`,
/// `A^state`, `A^written`, `A^read`, `A^prevpos`, then the persistent
/// `X^prevtime`, `X^prevpos`, `X^pos`, `X^tapv`, `X^read`, then `B^active`.
pub fn f_s4s5_catalog(params: &ReductionParams) -> Catalog {
    let big_n = params.big_n();
    let q = params.atm.num_states();
    let g = params.atm.num_symbols();
    let mut c = Catalog::new();
    c.msb_first("A_time", big_n)
        .msb_first("A_pos", big_n + 1)
        .lsb_first("A_state", q)
        .lsb_first("A_written", g)
        .lsb_first("A_read", g)
        .msb_first("A_prevpos", big_n + 1)
        .msb_first("X_prevtime", big_n)
        .msb_first("X_prevpos", big_n + 1)
        .msb_first("X_pos", big_n + 1)
        .msb_first("X_tapv", big_n)
        .lsb_first("X_read", g)
        .lsb_first("B_active", 1);
    c
}

#[derive(Debug, Clone)]
pub struct S4s5Vectors {
    pub a_time: FormulaVector,
    pub a_pos: FormulaVector,
    pub a_state: FormulaVector,
    pub a_written: FormulaVector,
    pub a_read: FormulaVector,
    pub a_prevpos: FormulaVector,
    pub x_prevtime: FormulaVector,
    pub x_prevpos: FormulaVector,
    pub x_pos: FormulaVector,
    pub x_tapv: FormulaVector,
    pub x_read: FormulaVector,
    pub active: Formula,
}

fn eq(f: &FormulaVector, g: &FormulaVector, k: i64) -> Formula {
    eq_vector(f, g, k).expect("catalog vectors of equal length")
}

fn cmp(f: &FormulaVector, g: &FormulaVector, op: VectorOp) -> Formula {
    compare(f, g, op).expect("catalog vectors of equal length")
}

fn cmp_bin(f: &FormulaVector, i: u64, op: BinaryOp) -> Formula {
    compare_binary(f, i, op).expect("constant fits the window")
}

fn is_bin(f: &FormulaVector, i: u64) -> Formula {
    eq_binary(f, i).expect("constant fits the window")
}

impl S4s5Vectors {
    pub fn new(c: &Catalog) -> S4s5Vectors {
        let shared =
            |name: &str| FormulaVector::from_lsb(c.family(name).ids.iter().map(|&a| shared_var_s4s5(a)).collect());
        S4s5Vectors {
            a_time: shared("A_time"),
            a_pos: shared("A_pos"),
            a_state: shared("A_state"),
            a_written: shared("A_written"),
            a_read: shared("A_read"),
            a_prevpos: shared("A_prevpos"),
            x_prevtime: c.vector("X_prevtime"),
            x_prevpos: c.vector("X_prevpos"),
            x_pos: c.vector("X_pos"),
            x_tapv: c.vector("X_tapv"),
            x_read: c.vector("X_read"),
            active: c.var("B_active", 0),
        }
    }

    /// The antecedent of one `(k, l)` instance of a compstep.
    pub(crate) fn step_guard(&self, k: usize, l: usize, dir: Dir) -> Formula {
        let pos_bit = match dir {
            Dir::Right => Rightmost::Zero,
            Dir::Left => Rightmost::One,
        };
        rightmost(&self.a_time, k, Rightmost::Zero)
            .expect("k < N")
            .and(&rightmost(&self.a_pos, l, pos_bit).expect("l <= N"))
    }

    /// What the `L`-successor of a compstep must satisfy, without the `◊`
    /// part: the persistent copies of the current time and position.
    pub(crate) fn step_copy(&self) -> Formula {
        eq(&self.x_prevtime, &self.a_time, -1).and(&eq(&self.x_prevpos, &self.a_pos, -1))
    }

    /// What the `◊`-successor of a compstep must satisfy.
    pub(crate) fn landing(&self, k: usize, l: usize, dir: Dir, r: usize, theta: usize) -> Formula {
        let pos_bit = match dir {
            Dir::Right => Rightmost::One,
            Dir::Left => Rightmost::Zero,
        };
        Formula::conj([
            eq(&self.a_time, &self.x_prevtime, k as i64),
            rightmost(&self.a_time, k, Rightmost::One).expect("k < N"),
            eq(&self.a_pos, &self.x_prevpos, l as i64),
            rightmost(&self.a_pos, l, pos_bit).expect("l <= N"),
            eq(&self.a_prevpos, &self.x_prevpos, -1),
            self.a_state.get(r).clone(),
            self.a_written.get(theta).clone(),
        ])
    }

    /// `compstep_right(r, θ)` or `compstep_left(r, θ)`.
    pub fn compstep(&self, dir: Dir, r: usize, theta: usize) -> Formula {
        let big_n = self.a_time.len();
        let copy = self.step_copy();
        Formula::conj((0..big_n).flat_map(|k| {
            let copy = copy.clone();
            (0..=big_n).map(move |l| {
                let body = copy.and(&self.landing(k, l, dir, r, theta).diamond());
                self.step_guard(k, l, dir).implies(&body.l())
            })
        }))
    }

    /// The five parts of `read_a_symbol`, named, in order.
    pub fn read_a_symbol_parts(&self) -> [(&'static str, Formula); 5] {
        let at_cell = eq(&self.x_pos, &self.a_pos, -1);
        let not_later = cmp(&self.x_tapv, &self.a_time, VectorOp::Leq);
        let reading = Formula::conj([at_cell, not_later, self.active.clone()]);
        let visit = Formula::conj([
            cmp_bin(&self.x_tapv, 0, BinaryOp::Gt),
            eq(&self.x_tapv, &self.a_time, -1),
            self.active.clone(),
        ]);
        let at_prev = eq(&self.x_pos, &self.a_prevpos, -1);
        let earlier = cmp(&self.x_tapv, &self.a_time, VectorOp::Lt);
        let inactive = self.active.not();
        [
            ("existence_of_a_reading_point", reading.l()),
            ("time_of_previous_visit", visit.implies(&at_prev)),
            ("becoming_inactive", at_prev.and(&earlier).implies(&inactive)),
            ("staying_inactive", inactive.implies(&inactive.boxed())),
            ("storing_the_read_symbol", reading.implies(&eq(&self.a_read, &self.x_read, -1))),
        ]
    }
}

/// Builds `f_S4×S5(w)`. The named conjuncts are `persistence`,
/// `uniqueness`, `start`, `initial_symbols`, `written_symbols`,
/// `read_a_symbol`, `computation` and `no_reject`; all but `persistence`
/// and `start` are under `K□`.
pub fn gen_f_s4s5(params: &ReductionParams) -> Result<Generated, ReductionError> {
    let atm = &params.atm;
    let catalog = f_s4s5_catalog(params);
    let v = S4s5Vectors::new(&catalog);
    let start_pos = params.start_pos();
    let blank = atm.blank();

    let persistence = Formula::conj(
        [&v.x_prevtime, &v.x_prevpos, &v.x_pos, &v.x_tapv, &v.x_read]
            .into_iter()
            .map(|x| persistent_macro(x, -1)),
    );

    let uniqueness = Formula::conj([
        cmp(&v.a_state, &v.a_state, VectorOp::Unique),
        cmp(&v.a_written, &v.a_written, VectorOp::Unique),
        cmp(&v.x_read, &v.x_read, VectorOp::Unique),
    ]);

    let start = Formula::conj([
        is_bin(&v.a_time, 0),
        is_bin(&v.a_pos, start_pos),
        v.a_state.get(atm.init()).clone(),
    ]);

    let n = params.n() as u64;
    let mut initial: Vec<Formula> = params
        .word()
        .iter()
        .enumerate()
        .map(|(i, &sym)| is_bin(&v.x_pos, start_pos + 1 + i as u64).implies(v.x_read.get(sym)))
        .collect();
    initial.push(
        cmp_bin(&v.x_pos, start_pos, BinaryOp::Leq)
            .or(&cmp_bin(&v.x_pos, start_pos + n, BinaryOp::Gt))
            .implies(v.x_read.get(blank)),
    );
    let initial_symbols = is_bin(&v.x_tapv, 0).implies(&Formula::conj(initial));

    let written_symbols = Formula::conj([
        cmp_bin(&v.x_tapv, 0, BinaryOp::Gt),
        eq(&v.x_tapv, &v.a_time, -1),
        v.active.clone(),
    ])
    .implies(&eq(&v.x_read, &v.a_written, -1));

    let read_a_symbol = Formula::conj(v.read_a_symbol_parts().into_iter().map(|(_, f)| f));

    let mut steps: HashMap<(Dir, usize, usize), Formula> = HashMap::new();
    let mut step = |dir: Dir, r: usize, theta: usize| {
        steps
            .entry((dir, r, theta))
            .or_insert_with(|| v.compstep(dir, r, theta))
            .clone()
    };
    let mut computation = Vec::new();
    for kind in [StateKind::Forall, StateKind::Exists] {
        for q in (0..atm.num_states()).filter(|&q| atm.kind(q) == kind) {
            for eta in 0..atm.num_symbols() {
                let ts: Vec<_> = atm.transitions_from(q, eta).collect();
                let entries: Vec<Formula> = [Dir::Left, Dir::Right]
                    .into_iter()
                    .flat_map(|dir| ts.iter().filter(move |t| t.dir == dir))
                    .map(|t| step(t.dir, t.to, t.write))
                    .collect();
                let body = match kind {
                    StateKind::Forall => Formula::conj(entries),
                    _ => Formula::disj(entries),
                };
                let guard = v.a_state.get(q).and(v.a_read.get(eta));
                computation.push(guard.implies(&body));
            }
        }
    }

    let no_reject = v.a_state.get(atm.reject_state()).not();

    let conjuncts = vec![
        ("persistence", persistence),
        ("uniqueness", everywhere(&uniqueness)),
        ("start", start),
        ("initial_symbols", everywhere(&initial_symbols)),
        ("written_symbols", everywhere(&written_symbols)),
        ("read_a_symbol", everywhere(&read_a_symbol)),
        ("computation", everywhere(&Formula::conj(computation))),
        ("no_reject", everywhere(&no_reject)),
    ];
    Ok(Generated {
        formula: Formula::conj(conjuncts.iter().map(|(_, f)| f.clone())),
        catalog,
        conjuncts,
    })
}
