use crate::atm::{Dir, StateKind};
use crate::formula::{
    compare, compare_binary, eq_binary, eq_vector, rightmost, shared_var_ssl, BinaryOp, Formula,
    FormulaVector, Rightmost, VectorOp,
};
use crate::reduction::{conj_all, everywhere, Catalog, Generated, ReductionError, ReductionParams};
use std::collections::HashMap;

/// Atom layout of `f_SSL`: `B`, then `A^time`, `A^pos`, `A^state`,
/// `A^written`, `A^read`, then `X^time`, `X^tapv`, `X^pos`, `X^read`.
/// Binary families are numbered from their most significant index, unary
/// families from index 0.
pub fn f_ssl_catalog(params: &ReductionParams) -> Catalog {
    let big_n = params.big_n();
    let q = params.atm.num_states();
    let g = params.atm.num_symbols();
    let mut c = Catalog::new();
    c.lsb_first("B", 1)
        .msb_first("A_time", big_n)
        .msb_first("A_pos", big_n + 1)
        .lsb_first("A_state", q)
        .lsb_first("A_written", g)
        .lsb_first("A_read", g)
        .msb_first("X_time", big_n)
        .msb_first("X_tapv", big_n)
        .msb_first("X_pos", big_n + 1)
        .lsb_first("X_read", g);
    c
}

/// The vectors `f_SSL` talks about: shared variables `α^fam` and the
/// persistent `X` vectors.
#[derive(Debug, Clone)]
pub struct SslVectors {
    pub b: Formula,
    pub a_time: FormulaVector,
    pub a_pos: FormulaVector,
    pub a_state: FormulaVector,
    pub a_written: FormulaVector,
    pub a_read: FormulaVector,
    pub x_time: FormulaVector,
    pub x_tapv: FormulaVector,
    pub x_pos: FormulaVector,
    pub x_read: FormulaVector,
}

impl SslVectors {
    pub fn new(c: &Catalog) -> SslVectors {
        let b = c.atom("B", 0);
        let shared = |name: &str| {
            FormulaVector::from_lsb(c.family(name).ids.iter().map(|&a| shared_var_ssl(a, b)).collect())
        };
        SslVectors {
            b: Formula::atom(b),
            a_time: shared("A_time"),
            a_pos: shared("A_pos"),
            a_state: shared("A_state"),
            a_written: shared("A_written"),
            a_read: shared("A_read"),
            x_time: c.vector("X_time"),
            x_tapv: c.vector("X_tapv"),
            x_pos: c.vector("X_pos"),
            x_read: c.vector("X_read"),
        }
    }

    /// The `L`-body of one `(k, l)` instance of a compstep, without the
    /// outer `L`.
    pub(crate) fn step_body(&self, k: usize, l: usize, dir: Dir, r: usize, theta: usize) -> Formula {
        let pos_bit = match dir {
            Dir::Right => Rightmost::One,
            Dir::Left => Rightmost::Zero,
        };
        conj_all([
            self.b.clone(),
            eq(&self.x_time, &self.a_time, k as i64),
            rightmost(&self.x_time, k, Rightmost::One).expect("k < N"),
            eq(&self.x_pos, &self.a_pos, l as i64),
            rightmost(&self.x_pos, l, pos_bit).expect("l <= N"),
            self.landing(r, theta).diamond(),
        ])
    }

    /// What a compstep demands of the `◊`-successor: the shared variables
    /// take over the new time, position and symbol, with state `r` and
    /// written symbol `θ`.
    pub(crate) fn landing(&self, r: usize, theta: usize) -> Formula {
        Formula::conj([
            eq(&self.a_time, &self.x_time, -1),
            eq(&self.a_pos, &self.x_pos, -1),
            self.a_state.get(r).clone(),
            self.a_written.get(theta).clone(),
            eq(&self.a_read, &self.x_read, -1),
        ])
    }

    /// The antecedent of one `(k, l)` instance of a compstep.
    pub(crate) fn step_guard(&self, k: usize, l: usize, dir: Dir) -> Formula {
        let pos_bit = match dir {
            Dir::Right => Rightmost::Zero,
            Dir::Left => Rightmost::One,
        };
        Formula::conj([
            self.b.clone(),
            rightmost(&self.a_time, k, Rightmost::Zero).expect("k < N"),
            rightmost(&self.a_pos, l, pos_bit).expect("l <= N"),
        ])
    }

    /// `compstep_right(r, θ)` or `compstep_left(r, θ)`.
    pub fn compstep(&self, dir: Dir, r: usize, theta: usize) -> Formula {
        let big_n = self.a_time.len();
        Formula::conj((0..big_n).flat_map(|k| {
            (0..=big_n).map(move |l| {
                self.step_guard(k, l, dir)
                    .implies(&self.step_body(k, l, dir, r, theta).l())
            })
        }))
    }
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

/// Builds `f_SSL(w)`. The named conjuncts are `uniqueness`, `start`,
/// `time_after_previous_visit`, `get_the_right_symbol`, `computation` and
/// `no_reject`, each already under `K□` except `start`.
pub fn gen_f_ssl(params: &ReductionParams) -> Result<Generated, ReductionError> {
    let atm = &params.atm;
    let catalog = f_ssl_catalog(params);
    let v = SslVectors::new(&catalog);
    let b = &v.b;
    let start_pos = params.start_pos();
    let blank = atm.blank();

    let uniqueness = b.implies(&Formula::conj([
        cmp(&v.a_state, &v.a_state, VectorOp::Unique),
        cmp(&v.a_written, &v.a_written, VectorOp::Unique),
        cmp(&v.a_read, &v.a_read, VectorOp::Unique),
    ]));

    let start = Formula::conj([
        b.clone(),
        is_bin(&v.a_time, 0),
        is_bin(&v.a_pos, start_pos),
        v.a_state.get(atm.init()).clone(),
        v.a_read.get(blank).clone(),
    ]);

    let earlier = cmp(&v.a_time, &v.x_time, VectorOp::Lt);
    let same_pos = eq(&v.a_pos, &v.x_pos, -1);
    let tapv = b.implies(&Formula::conj([
        cmp(&v.x_tapv, &v.x_time, VectorOp::Leq),
        earlier
            .and(&same_pos.not())
            .implies(&cmp(&v.x_tapv, &v.a_time, VectorOp::NeqPlus1)),
        earlier
            .and(&same_pos)
            .implies(&cmp(&v.a_time, &v.x_tapv, VectorOp::Lt)),
    ]));

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
    let right_symbol = Formula::conj([
        b.and(&is_bin(&v.x_tapv, 0)).implies(&Formula::conj(initial)),
        Formula::conj([
            b.clone(),
            cmp_bin(&v.x_tapv, 0, BinaryOp::Gt),
            eq(&v.a_time, &v.x_tapv, -1),
        ])
        .implies(&eq(&v.x_read, &v.a_written, -1)),
    ]);

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
        ("uniqueness", everywhere(&uniqueness)),
        ("start", start),
        ("time_after_previous_visit", everywhere(&tapv)),
        ("get_the_right_symbol", everywhere(&right_symbol)),
        ("computation", everywhere(&Formula::conj(computation))),
        ("no_reject", everywhere(&no_reject)),
    ];
    Ok(Generated {
        formula: Formula::conj(conjuncts.iter().map(|(_, f)| f.clone())),
        catalog,
        conjuncts,
    })
}
