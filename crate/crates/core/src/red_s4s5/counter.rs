use crate::formula::{
    eq_binary, eq_vector, ones, persistent_macro, rightmost, shared_var_s4s5, Formula, FormulaVector, Rightmost,
};
use crate::red_ssl::{staircase, CounterTrace};
use crate::reduction::{everywhere, Catalog, Generated, ReductionError};
use crate::semantics::{product_model, BimodalModel, Frame, WorldId};
use std::collections::{BTreeMap, BTreeSet};

/// `A_k = x(k)`, `X_k = x(n+k)`.
pub fn counter_s4s5_catalog(n: usize) -> Catalog {
    let mut c = Catalog::new();
    c.lsb_first("A", n).lsb_first("X", n);
    c
}

fn alpha(c: &Catalog) -> FormulaVector {
    FormulaVector::from_lsb(c.family("A").ids.iter().map(|&a| shared_var_s4s5(a)).collect())
}

/// The product binary counter over `n` bits.
pub fn gen_counter_s4s5(n: usize) -> Result<Generated, ReductionError> {
    if n == 0 {
        return Err(ReductionError::Params("the counter needs n >= 1".into()));
    }
    let catalog = counter_s4s5_catalog(n);
    let a = alpha(&catalog);
    let x = catalog.vector("X");
    let steps = Formula::conj((0..n).map(|k| {
        let body = Formula::conj([
            eq_vector(&x, &a, k as i64).expect("same length"),
            rightmost(&x, k, Rightmost::One).expect("k < n"),
            eq_vector(&x, &a, -1).expect("same length").diamond(),
        ]);
        rightmost(&a, k, Rightmost::Zero).expect("k < n").implies(&body.l())
    }));
    let conjuncts = vec![
        ("persistent", persistent_macro(&x, -1)),
        ("start", eq_binary(&a, 0).expect("0 fits")),
        ("step", everywhere(&steps)),
    ];
    Ok(Generated {
        formula: Formula::conj(conjuncts.iter().map(|(_, f)| f.clone())),
        catalog,
        conjuncts,
    })
}

/// The product model on `{0..2^n−1}²` with `≤` as the first relation and the
/// total relation as the second. `A` reads the first coordinate and `X`
/// the second; point `(i, j)` is named `i:j`, and `(0, 0)` is designated.
pub fn build_counter_s4s5_model(n: usize) -> Result<(BimodalModel, WorldId), ReductionError> {
    if n == 0 || n > 8 {
        return Err(ReductionError::Params("the counter model needs 1 <= n <= 8".into()));
    }
    let catalog = counter_s4s5_catalog(n);
    let top = 1usize << n;
    let names: Vec<String> = (0..top).map(|i| i.to_string()).collect();
    let mut w1 = Frame::new(names.clone());
    let mut w2 = Frame::new(names);
    for i in 0..top {
        for j in 0..top {
            w2.rel.insert((i, j));
            if i <= j {
                w1.rel.insert((i, j));
            }
        }
    }
    let mut sigma: BTreeMap<_, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for k in 0..n {
        sigma.insert(catalog.atom("A", k), BTreeSet::new());
        sigma.insert(catalog.atom("X", k), BTreeSet::new());
    }
    for i in 0..top {
        for k in ones(i as u64) {
            for j in 0..top {
                sigma.get_mut(&catalog.atom("A", k)).expect("declared").insert((i, j));
                sigma.get_mut(&catalog.atom("X", k)).expect("declared").insert((j, i));
            }
        }
    }
    let mut m = product_model(&w1, &w2, &sigma)
        .map_err(|e| ReductionError::Params(format!("counter frame: {}", e)))?;
    m.set_designated(Some(0));
    Ok((m, 0))
}

/// Extracts the staircase from a commutator model of the product counter.
/// Witnesses are taken in increasing point id.
pub fn extract_counter_trace_s4s5(
    model: &BimodalModel,
    p0: WorldId,
    n: usize,
) -> Result<CounterTrace, ReductionError> {
    if n == 0 {
        return Err(ReductionError::Params("the counter needs n >= 1".into()));
    }
    let c = counter_s4s5_catalog(n);
    staircase(model, p0, n, &alpha(&c), &c.vector("X"), None)
}

/// The counter's shared-variable vector `α_k = LA_k`.
pub fn counter_s4s5_alpha(n: usize) -> FormulaVector {
    alpha(&counter_s4s5_catalog(n))
}
