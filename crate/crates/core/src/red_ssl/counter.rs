use crate::formula::{
    eq_binary, eq_vector, ones, rightmost, shared_var_ssl, Formula, FormulaVector, Rightmost,
};
use crate::reduction::{conj_all, decode, everywhere, Catalog, Generated, ReductionError};
use crate::semantics::{BimodalModel, Evaluator, FrameClass, WorldId};

/// `B = x0`, `A_k = x(1+k)`, `X_k = x(1+n+k)`.
pub fn counter_ssl_catalog(n: usize) -> Catalog {
    let mut c = Catalog::new();
    c.lsb_first("B", 1).lsb_first("A", n).lsb_first("X", n);
    c
}

fn alpha(c: &Catalog) -> FormulaVector {
    let b = c.atom("B", 0);
    FormulaVector::from_lsb(c.family("A").ids.iter().map(|&a| shared_var_ssl(a, b)).collect())
}

/// The SSL binary counter over `n` bits.
pub fn gen_counter_ssl(n: usize) -> Result<Generated, ReductionError> {
    if n == 0 {
        return Err(ReductionError::Params("the counter needs n >= 1".into()));
    }
    let catalog = counter_ssl_catalog(n);
    let b = catalog.var("B", 0);
    let a = alpha(&catalog);
    let x = catalog.vector("X");
    let steps = Formula::conj((0..n).map(|k| {
        let guard = b.and(&rightmost(&a, k, Rightmost::Zero).expect("k < n"));
        let body = conj_all([
            b.clone(),
            eq_vector(&x, &a, k as i64).expect("same length"),
            rightmost(&x, k, Rightmost::One).expect("k < n"),
            eq_vector(&x, &a, -1).expect("same length").diamond(),
        ]);
        guard.implies(&body.l())
    }));
    let conjuncts = vec![
        ("B", b),
        ("start", eq_binary(&a, 0).expect("0 fits")),
        ("step", everywhere(&steps)),
    ];
    Ok(Generated {
        formula: Formula::conj(conjuncts.iter().map(|(_, f)| f.clone())),
        catalog,
        conjuncts,
    })
}

/// The cross axiom model of the counter, with `p_{0,0}` designated.
///
/// Worlds are `p{i}_{j}` for `i ≤ j < 2^n`, `u{i}_{k}` for `i ≤ 2^n`, `k < n`,
/// and `s{i}_{k}` for `k ∈ Ones(i)`, added in that order. Cloud `C_i` holds the
/// points with first index `i`.
pub fn build_counter_ssl_model(n: usize) -> Result<(BimodalModel, WorldId), ReductionError> {
    if n == 0 || n > 16 {
        return Err(ReductionError::Params("the counter model needs 1 <= n <= 16".into()));
    }
    let catalog = counter_ssl_catalog(n);
    let top = 1usize << n;
    let mut m = BimodalModel::new();
    let add = |m: &mut BimodalModel, name: String| m.add_world(name).expect("fresh names");

    let mut p = vec![vec![usize::MAX; top]; top];
    for (i, row) in p.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate().skip(i) {
            *slot = add(&mut m, format!("p{}_{}", i, j));
        }
    }
    let mut u = vec![vec![0; n]; top + 1];
    for (i, row) in u.iter_mut().enumerate() {
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = add(&mut m, format!("u{}_{}", i, k));
        }
    }
    let mut s: Vec<Vec<(usize, WorldId)>> = vec![Vec::new(); top];
    for (i, row) in s.iter_mut().enumerate() {
        for k in ones(i as u64) {
            row.push((k, add(&mut m, format!("s{}_{}", i, k))));
        }
    }

    for i in 0..=top {
        let mut cloud: Vec<WorldId> = u[i].clone();
        if i < top {
            cloud.extend(p[i][i..].iter().copied());
            cloud.extend(s[i].iter().map(|&(_, w)| w));
        }
        m.add_cloud(&cloud);
    }
    for j in 0..top {
        for i in 0..=j {
            for i2 in i..=j {
                m.add_d(p[i][j], p[i2][j]);
            }
        }
    }
    for k in 0..n {
        for i in 0..=top {
            for i2 in i..=top {
                m.add_d(u[i][k], u[i2][k]);
            }
            for row in s.iter().skip(i) {
                if let Some(&(_, w)) = row.iter().find(|(kk, _)| *kk == k) {
                    m.add_d(u[i][k], w);
                }
            }
        }
    }
    for row in &s {
        for &(_, w) in row {
            m.add_d(w, w);
        }
    }

    let b = catalog.atom("B", 0);
    m.declare_atom(b);
    for k in 0..n {
        let (ak, xk) = (catalog.atom("A", k), catalog.atom("X", k));
        m.declare_atom(ak);
        m.declare_atom(xk);
        for row in &u {
            m.set_atom(ak, row[k], true);
        }
        for row in &s {
            for &(kk, w) in row {
                if kk == k {
                    m.set_atom(ak, w, true);
                }
            }
        }
        for (i, row) in p.iter().enumerate() {
            for (j, &w) in row.iter().enumerate().skip(i) {
                if (j >> k) & 1 == 1 {
                    m.set_atom(xk, w, true);
                }
            }
        }
    }
    for (i, row) in p.iter().enumerate() {
        for &w in &row[i..] {
            m.set_atom(b, w, true);
        }
    }
    m.set_class(Some(FrameClass::CrossAxiom));
    m.set_designated(Some(p[0][0]));
    Ok((m, p[0][0]))
}

/// The staircase `p_0 L→ p′_0 ◊→ p_1 L→ … ◊→ p_{2^n−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterTrace {
    pub p: Vec<WorldId>,
    pub p_prime: Vec<WorldId>,
}

/// Walks the staircase of a counter model. `b` is the information marker
/// (present for SSL, absent for the product counter).
pub(crate) fn staircase(
    model: &BimodalModel,
    p0: WorldId,
    n: usize,
    alpha: &FormulaVector,
    x: &FormulaVector,
    b: Option<&Formula>,
) -> Result<CounterTrace, ReductionError> {
    let fail = |step: usize, reason: String| Err(ReductionError::ExtractionFailure { step, reason });
    if p0 >= model.len() {
        return fail(0, format!("point {} is not in the model", p0));
    }
    let mut ev = Evaluator::new(model);
    let marked = |ev: &mut Evaluator, w: WorldId| b.is_none_or(|b| ev.holds(w, b));
    if !marked(&mut ev, p0) || decode(&mut ev, alpha, p0) != 0 {
        return fail(0, "the start point does not hold the value 0".into());
    }
    let mut trace = CounterTrace { p: vec![p0], p_prime: Vec::new() };
    let last = (1u64 << n) - 1;
    for m in 0..last {
        let cur = *trace.p.last().expect("non-empty");
        let k = (0..n).find(|&k| (m >> k) & 1 == 0).expect("m < 2^n - 1");
        let stair = conj_all([
            eq_vector(x, alpha, k as i64).expect("same length"),
            rightmost(x, k, Rightmost::One).expect("k < n"),
        ]);
        let landing = eq_vector(x, alpha, -1).expect("same length");
        let found = model.l_successors(cur).iter().find_map(|&pp| {
            if !marked(&mut ev, pp) || !ev.holds(pp, &stair) {
                return None;
            }
            let next = model.d_successors(pp).iter().copied().find(|&q| ev.holds(q, &landing))?;
            Some((pp, next))
        });
        let Some((pp, next)) = found else {
            return fail(m as usize, format!("no L-then-◊ successor increments {} at bit {}", m, k));
        };
        if decode(&mut ev, x, pp) != m + 1 {
            return fail(m as usize, format!("X does not hold {} at {}", m + 1, model.name(pp)));
        }
        if !marked(&mut ev, next) || decode(&mut ev, alpha, next) != m + 1 {
            return fail(m as usize, format!("α does not hold {} at {}", m + 1, model.name(next)));
        }
        trace.p_prime.push(pp);
        trace.p.push(next);
    }
    Ok(trace)
}

/// Extracts the staircase from a cross axiom model of the SSL counter.
/// Witnesses are taken in increasing point id.
pub fn extract_counter_trace(model: &BimodalModel, p0: WorldId, n: usize) -> Result<CounterTrace, ReductionError> {
    if n == 0 {
        return Err(ReductionError::Params("the counter needs n >= 1".into()));
    }
    let c = counter_ssl_catalog(n);
    staircase(model, p0, n, &alpha(&c), &c.vector("X"), Some(&c.var("B", 0)))
}

/// The counter's shared-variable vector, for decoding values at points.
pub fn counter_ssl_alpha(n: usize) -> FormulaVector {
    alpha(&counter_ssl_catalog(n))
}
