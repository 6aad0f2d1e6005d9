//! Arithmetic abbreviations over vectors of formulas.
//!
//! Every function returns a tree of core constructors. Empty conjunctions
//! become [`Formula::top`] and empty disjunctions [`Formula::bottom`], except
//! where an empty conjunction is one part of a larger conjunction, in which
//! case it is simply dropped.

use super::{ones, AtomId, Formula, FormulaVector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MacroError {
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("value {value} does not fit in {len} bits")]
    ValueOutOfRange { value: u64, len: usize },
    #[error("index {index} out of range for a vector of length {len}")]
    IndexOutOfRange { index: i64, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rightmost {
    Zero,
    One,
}

/// Comparisons between two vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorOp {
    Unique,
    Neq,
    Lt,
    Leq,
    Plus1,
    NeqPlus1,
}

/// Comparisons between a vector and a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Lt,
    Leq,
    Gt,
}

fn same_len(f: &FormulaVector, g: &FormulaVector) -> Result<(), MacroError> {
    if f.len() != g.len() {
        return Err(MacroError::LengthMismatch(f.len(), g.len()));
    }
    Ok(())
}

fn fits(f: &FormulaVector, i: u64) -> Result<(), MacroError> {
    if f.len() < 64 && i >> f.len() != 0 {
        return Err(MacroError::ValueOutOfRange { value: i, len: f.len() });
    }
    Ok(())
}

fn eq_parts(f: &FormulaVector, g: &FormulaVector, k: i64) -> Vec<Formula> {
    let l = f.len() as i64;
    ((k + 1)..l)
        .rev()
        .map(|h| f.get(h as usize).iff(g.get(h as usize)))
        .collect()
}

fn rightmost_parts(f: &FormulaVector, k: usize, which: Rightmost) -> Vec<Formula> {
    let mut parts = Vec::with_capacity(k + 1);
    match which {
        Rightmost::Zero => {
            parts.push(f.get(k).not());
            parts.extend((0..k).rev().map(|h| f.get(h).clone()));
        }
        Rightmost::One => {
            parts.push(f.get(k).clone());
            parts.extend((0..k).rev().map(|h| f.get(h).not()));
        }
    }
    parts
}

/// `(F=G,>k)`: positions above `k` agree. `k = -1` compares whole vectors.
pub fn eq_vector(f: &FormulaVector, g: &FormulaVector, k: i64) -> Result<Formula, MacroError> {
    same_len(f, g)?;
    if k < -1 || k > f.len() as i64 - 1 {
        return Err(MacroError::IndexOutOfRange { index: k, len: f.len() });
    }
    Ok(Formula::conj(eq_parts(f, g, k)))
}

/// `(F=bin_l(i))`, listed from the most significant position down.
pub fn eq_binary(f: &FormulaVector, i: u64) -> Result<Formula, MacroError> {
    fits(f, i)?;
    Ok(Formula::conj((0..f.len()).rev().map(|k| {
        if (i >> k) & 1 == 1 {
            f.get(k).clone()
        } else {
            f.get(k).not()
        }
    })))
}

/// `rightmost_zero(F,k)` or `rightmost_one(F,k)`.
pub fn rightmost(f: &FormulaVector, k: usize, which: Rightmost) -> Result<Formula, MacroError> {
    if k >= f.len() {
        return Err(MacroError::IndexOutOfRange { index: k as i64, len: f.len() });
    }
    Ok(Formula::conj(rightmost_parts(f, k, which)))
}

fn lt_vector(f: &FormulaVector, g: &FormulaVector) -> Formula {
    Formula::disj((0..f.len()).map(|k| {
        let mut parts = eq_parts(f, g, k as i64);
        parts.push(f.get(k).not());
        parts.push(g.get(k).clone());
        Formula::conj(parts)
    }))
}

fn plus1_vector(f: &FormulaVector, g: &FormulaVector) -> Formula {
    Formula::disj((0..f.len()).map(|k| {
        let mut parts = eq_parts(f, g, k as i64);
        parts.extend(rightmost_parts(f, k, Rightmost::One));
        parts.extend(rightmost_parts(g, k, Rightmost::Zero));
        Formula::conj(parts)
    }))
}

/// Vector comparisons. `G` is ignored by [`VectorOp::Unique`].
pub fn compare(f: &FormulaVector, g: &FormulaVector, op: VectorOp) -> Result<Formula, MacroError> {
    if op != VectorOp::Unique {
        same_len(f, g)?;
    }
    let l = f.len();
    Ok(match op {
        VectorOp::Unique => {
            let mut parts = vec![Formula::disj((0..l).map(|k| f.get(k).clone()))];
            for k in 0..l {
                for m in (k + 1)..l {
                    parts.push(f.get(k).and(f.get(m)).not());
                }
            }
            Formula::conj(parts)
        }
        VectorOp::Neq => Formula::conj(eq_parts(f, g, -1)).not(),
        VectorOp::Lt => lt_vector(f, g),
        VectorOp::Leq => lt_vector(f, g).or(&Formula::conj(eq_parts(f, g, -1))),
        VectorOp::Plus1 => plus1_vector(f, g),
        VectorOp::NeqPlus1 => plus1_vector(f, g).not(),
    })
}

fn lt_binary(f: &FormulaVector, i: u64) -> Formula {
    let l = f.len();
    let one_positions = ones(i);
    Formula::disj(one_positions.iter().map(|&k| {
        let mut parts = vec![f.get(k).not()];
        parts.extend(
            ((k + 1)..l)
                .rev()
                .filter(|h| !one_positions.contains(h))
                .map(|h| f.get(h).not()),
        );
        Formula::conj(parts)
    }))
}

/// Comparisons against `bin_l(i)`.
pub fn compare_binary(f: &FormulaVector, i: u64, op: BinaryOp) -> Result<Formula, MacroError> {
    fits(f, i)?;
    let leq = || lt_binary(f, i).or(&eq_binary(f, i).expect("range checked"));
    Ok(match op {
        BinaryOp::Lt => lt_binary(f, i),
        BinaryOp::Leq => leq(),
        BinaryOp::Gt => leq().not(),
    })
}

/// `persistent(F,>k)`: every entry above position `k` keeps its value along `[]`-successors
/// of every point of the cloud.
pub fn persistent_macro(f: &FormulaVector, k: i64) -> Formula {
    let l = f.len() as i64;
    Formula::conj(((k + 1).max(0)..l).rev().map(|h| {
        let fh = f.get(h as usize);
        fh.boxed().or(&fh.not().boxed()).k()
    }))
}

/// The subset-space shared variable `L(A ∧ □LB)`.
pub fn shared_var_ssl(a: AtomId, b: AtomId) -> Formula {
    Formula::atom(a)
        .and(&Formula::atom(b).l().boxed())
        .l()
}

/// The product shared variable `LA`.
pub fn shared_var_s4s5(a: AtomId) -> Formula {
    Formula::atom(a).l()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn fv(l: usize) -> FormulaVector {
        FormulaVector::atoms_lsb(&(0..l as AtomId).map(|k| 10 + k).collect::<Vec<_>>())
    }

    fn gv(l: usize) -> FormulaVector {
        FormulaVector::atoms_lsb(&(0..l as AtomId).map(|k| 20 + k).collect::<Vec<_>>())
    }

    #[test]
    fn eq_vector_examples() {
        let (f, g) = (fv(2), gv(2));
        let expected = f.get(1).iff(g.get(1)).and(&f.get(0).iff(g.get(0)));
        assert_eq!(eq_vector(&f, &g, -1).unwrap(), expected);
        assert_eq!(eq_vector(&fv(3), &gv(3), 2).unwrap(), Formula::top());
        assert!(matches!(eq_vector(&fv(3), &gv(2), -1), Err(MacroError::LengthMismatch(3, 2))));
    }

    #[test]
    fn eq_binary_examples() {
        let f = fv(3);
        let expected = Formula::conj(vec![f.get(2).clone(), f.get(1).not(), f.get(0).clone()]);
        assert_eq!(eq_binary(&f, 5).unwrap(), expected);
        let f2 = fv(2);
        assert_eq!(eq_binary(&f2, 0).unwrap(), f2.get(1).not().and(&f2.get(0).not()));
        assert!(eq_binary(&f2, 4).is_err());
    }

    #[test]
    fn rightmost_examples() {
        let f = fv(3);
        assert_eq!(
            rightmost(&f, 1, Rightmost::Zero).unwrap(),
            f.get(1).not().and(f.get(0))
        );
        assert_eq!(rightmost(&f, 0, Rightmost::One).unwrap(), f.get(0).clone());
        assert!(rightmost(&f, 3, Rightmost::One).is_err());
    }

    #[test]
    fn compare_examples() {
        let (f, g) = (fv(2), gv(2));
        let lt = Formula::disj(vec![
            Formula::conj(vec![f.get(1).iff(g.get(1)), f.get(0).not(), g.get(0).clone()]),
            f.get(1).not().and(g.get(1)),
        ]);
        assert_eq!(compare(&f, &g, VectorOp::Lt).unwrap(), lt);
        assert_eq!(compare(&fv(1), &gv(1), VectorOp::Unique).unwrap(), fv(1).get(0).clone());
    }

    #[test]
    fn compare_binary_examples() {
        let f = fv(2);
        assert_eq!(compare_binary(&f, 2, BinaryOp::Lt).unwrap(), f.get(1).not());
        assert_eq!(compare_binary(&f, 0, BinaryOp::Lt).unwrap(), Formula::bottom());
    }

    #[test]
    fn persistent_examples() {
        let f = fv(1);
        let x = f.get(0);
        assert_eq!(persistent_macro(&f, -1), x.boxed().or(&x.not().boxed()).k());
        assert_eq!(persistent_macro(&fv(3), 2), Formula::top());
    }

    #[test]
    fn shared_variables() {
        assert_eq!(shared_var_ssl(1, 0), parse("!K!(x1 & []!K!x0)").unwrap());
        assert_eq!(shared_var_s4s5(1), parse("!K!x1").unwrap());
        // ¬α ≡ K(¬A ∨ ◊K¬B) once the derived connectives are expanded.
        let a = Formula::atom(1);
        let b = Formula::atom(0);
        let alt = a.not().or(&b.not().k().diamond()).k();
        assert_eq!(drop_double_negations(&shared_var_ssl(1, 0).not()), drop_double_negations(&alt));
    }

    fn drop_double_negations(f: &Formula) -> Formula {
        use crate::formula::Kind;
        match f.kind() {
            Kind::Atom(_) => f.clone(),
            Kind::Not(a) => match a.kind() {
                Kind::Not(b) => drop_double_negations(b),
                _ => drop_double_negations(a).not(),
            },
            Kind::And(a, b) => drop_double_negations(a).and(&drop_double_negations(b)),
            Kind::K(a) => drop_double_negations(a).k(),
            Kind::Box(a) => drop_double_negations(a).boxed(),
        }
    }
}
