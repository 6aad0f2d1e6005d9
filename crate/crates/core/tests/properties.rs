mod common;

use bimodal::atm::{find_accepting_tree, AtmSpec};
use bimodal::formula::{
    compare, compare_binary, eq_binary, eq_vector, parse, rightmost, BinaryOp, Formula,
    FormulaVector, Rightmost, VectorOp,
};
use bimodal::red_s4s5::{build_f_s4s5_model, f_s4s5_catalog};
use bimodal::reduction::ReductionParams;
use bimodal::satbound::{bounded_sat_with, Ceiling, SatVerdict};
use bimodal::semantics::{BimodalModel, FrameClass};
use bimodal::translations::{
    box_subformulas, lift_model_ssl_to_s4s5, main_var, restrict_model_s4s5_to_ssl, t_s4s5_to_k4s5,
    t_ssl_to_s4s5,
};
use common::{naive_frame_ok, naive_holds, naive_sat, prop_eval};
use proptest::prelude::*;

fn arb_formula(atoms: u32) -> impl Strategy<Value = Formula> {
    let leaf = (0..atoms).prop_map(Formula::atom);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| f.not()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(&b)),
            inner.clone().prop_map(|f| f.k()),
            inner.clone().prop_map(|f| f.boxed()),
            inner.clone().prop_map(|f| f.diamond()),
            inner.prop_map(|f| f.l()),
        ]
    })
}

fn arb_class() -> impl Strategy<Value = FrameClass> {
    prop::sample::select(FrameClass::ALL.to_vec())
}

fn vectors(l: usize) -> (FormulaVector, FormulaVector) {
    let f: Vec<u32> = (0..l as u32).collect();
    let g: Vec<u32> = (l as u32..2 * l as u32).collect();
    (FormulaVector::atoms_lsb(&f), FormulaVector::atoms_lsb(&g))
}

fn low_bits(x: u64, l: usize) -> u64 {
    x & ((1 << l) - 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_parse_round_trip(f in arb_formula(5)) {
        prop_assert_eq!(parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn vector_macros_match_arithmetic(l in 1usize..=7, fv in any::<u64>(), gv in any::<u64>()) {
        let (fvec, gvec) = vectors(l);
        let (a, b) = (low_bits(fv, l), low_bits(gv, l));
        let assign = a | (b << l);
        let ev = |f: &Formula| prop_eval(f, assign);
        prop_assert_eq!(ev(&compare(&fvec, &gvec, VectorOp::Unique).unwrap()), a.count_ones() == 1);
        prop_assert_eq!(ev(&compare(&fvec, &gvec, VectorOp::Neq).unwrap()), a != b);
        prop_assert_eq!(ev(&compare(&fvec, &gvec, VectorOp::Lt).unwrap()), a < b);
        prop_assert_eq!(ev(&compare(&fvec, &gvec, VectorOp::Leq).unwrap()), a <= b);
        prop_assert_eq!(ev(&compare(&fvec, &gvec, VectorOp::Plus1).unwrap()), a == b + 1);
        prop_assert_eq!(ev(&compare(&fvec, &gvec, VectorOp::NeqPlus1).unwrap()), a != b + 1);
        for k in -1..l as i64 {
            let shift = (k + 1) as u32;
            prop_assert_eq!(ev(&eq_vector(&fvec, &gvec, k).unwrap()), a >> shift == b >> shift);
        }
        for k in 0..l {
            let window = low_bits(a, k + 1);
            prop_assert_eq!(ev(&rightmost(&fvec, k, Rightmost::Zero).unwrap()), window == (1 << k) - 1);
            prop_assert_eq!(ev(&rightmost(&fvec, k, Rightmost::One).unwrap()), window == 1 << k);
        }
    }

    #[test]
    fn constant_comparisons_match_arithmetic(l in 1usize..=7, fv in any::<u64>(), iv in any::<u64>()) {
        let (fvec, _) = vectors(l);
        let (a, i) = (low_bits(fv, l), low_bits(iv, l));
        let ev = |f: &Formula| prop_eval(f, a);
        prop_assert_eq!(ev(&eq_binary(&fvec, i).unwrap()), a == i);
        prop_assert_eq!(ev(&compare_binary(&fvec, i, BinaryOp::Lt).unwrap()), a < i);
        prop_assert_eq!(ev(&compare_binary(&fvec, i, BinaryOp::Leq).unwrap()), a <= i);
        prop_assert_eq!(ev(&compare_binary(&fvec, i, BinaryOp::Gt).unwrap()), a > i);
    }

    #[test]
    fn main_var_never_collides(f in arb_formula(6)) {
        let main = main_var(&f);
        let atoms = f.atoms();
        prop_assert!(!atoms.contains(&main));
        prop_assert!((0..main).all(|a| atoms.contains(&a)));
        let t = t_ssl_to_s4s5(&f);
        prop_assert_eq!(t.main_atom, Some(main));
        let mut expected = atoms.clone();
        expected.insert(main);
        prop_assert_eq!(t.formula.atoms(), expected);
    }

    #[test]
    fn k4_translation_shape(f in arb_formula(3)) {
        let t = t_s4s5_to_k4s5(&f);
        let boxes = box_subformulas(&f);
        let rendered: Vec<String> = boxes.iter().map(Formula::render).collect();
        let mut sorted = rendered.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(&rendered, &sorted);
        prop_assert!(boxes.iter().all(|b| b.is_box()));
        prop_assert_eq!(t.formula.atoms(), f.atoms());
        if boxes.is_empty() {
            prop_assert_eq!(t.formula, f);
        }
    }

    #[test]
    fn bounded_sat_is_sound_and_complete_on_two_points(f in arb_formula(2), class in arb_class()) {
        let ceiling = Ceiling { max_points: 2, max_atoms: 2 };
        let verdict = bounded_sat_with(&f, class, 2, ceiling).unwrap();
        match &verdict {
            SatVerdict::Sat { model, point } => {
                prop_assert!(naive_frame_ok(model, class));
                prop_assert!(naive_holds(model, *point, &f));
            }
            SatVerdict::UnsatWithinBound { .. } => {}
        }
        prop_assert_eq!(verdict.is_sat(), naive_sat(&f, class, 2).is_some());
    }

    #[test]
    fn lift_and_restrict_preserve_satisfaction(f in arb_formula(2)) {
        let ceiling = Ceiling { max_points: 3, max_atoms: 2 };
        if let SatVerdict::Sat { model, point } = bounded_sat_with(&f, FrameClass::CrossAxiom, 3, ceiling).unwrap() {
            let t = t_ssl_to_s4s5(&f);
            let (lifted, w) = lift_model_ssl_to_s4s5(&model, point, t.main_atom.unwrap()).unwrap();
            prop_assert!(naive_frame_ok(&lifted, FrameClass::S4xS5Commutator));
            prop_assert!(naive_holds(&lifted, w, &t.formula));
            let (back, w2) = restrict_model_s4s5_to_ssl(&lifted, w, &f).unwrap();
            prop_assert!(naive_frame_ok(&back, FrameClass::CrossAxiom));
            prop_assert!(naive_holds(&back, w2, &f));
        }
    }

    #[test]
    fn model_dump_round_trip(f in arb_formula(2), class in arb_class()) {
        let ceiling = Ceiling { max_points: 2, max_atoms: 2 };
        if let SatVerdict::Sat { model, .. } = bounded_sat_with(&f, class, 2, ceiling).unwrap() {
            prop_assert_eq!(BimodalModel::parse_dump(&model.dump()).unwrap(), model);
        }
    }
}

fn inactivity_is_upward_closed(machine: &str, w: &str) {
    let atm = AtmSpec::parse(machine).unwrap();
    let params = ReductionParams::new(atm, vec![2, 1], w).unwrap();
    let tree = find_accepting_tree(&params.atm, w, params.max_time()).unwrap().unwrap();
    let (m, _) = build_f_s4s5_model(&params, &tree).unwrap();
    let active = f_s4s5_catalog(&params).atom("B_active", 0);
    for (a, b) in m.d_pairs() {
        assert!(
            m.atom_true(active, a) || !m.atom_true(active, b),
            "{} -> {} turns B_active back on",
            m.name(a),
            m.name(b)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn product_witness_inactivity_persists(
        case in prop::sample::select(vec![("m1", "a"), ("m1", "ab"), ("m1", "b"), ("m2", "a"), ("m2", "ab")])
    ) {
        let machine = match case.0 {
            "m1" => include_str!("../fixtures/m1.atm"),
            _ => include_str!("../fixtures/m2.atm"),
        };
        inactivity_is_upward_closed(machine, case.1);
    }
}
