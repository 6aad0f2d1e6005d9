//! The run report shared by all batch commands, and the full
//! generate → build → check → extract → translate → re-check chain.

use crate::atm::{find_accepting_tree, validate_tree, ComputationTree, TreeMode};
use crate::formula::Formula;
use crate::red_s4s5::{build_f_s4s5_model, extract_accepting_tree_s4s5, gen_f_s4s5};
use crate::red_ssl::{build_f_ssl_model, extract_accepting_tree_ssl, gen_f_ssl};
use crate::reduction::ReductionParams;
use crate::semantics::{validate, BimodalModel, Evaluator, FrameClass, WorldId};
use crate::translations::{
    k4_to_s4_model, lift_model_ssl_to_s4s5, restrict_model_s4s5_to_ssl, t_s4s5_to_k4s5,
    t_ssl_to_s4s5,
};
use sha2::{Digest, Sha256};
use std::time::{Duration, Instant};

/// Prefix of timing keys. Everything else in a report is deterministic.
pub const TIMING_PREFIX: &str = "time.";

/// Line-keyed `key: value` report. Keys appear in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    entries: Vec<(String, String)>,
    failures: usize,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        let mut r = RunReport::default();
        r.field("command", command);
        r
    }

    pub fn field(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string().replace('\n', " | ");
        self.entries.push((key.to_string(), value));
    }

    /// Records `sha256:<hex>` of an input under `input.<label>`.
    pub fn digest(&mut self, label: &str, bytes: &[u8]) {
        self.field(&format!("input.{}", label), format!("sha256:{}", sha256_hex(bytes)));
    }

    /// Records `check.<name>: pass|fail`, plus `counterexample.<name>` on
    /// failure.
    pub fn check(&mut self, name: &str, passed: bool, counterexample: &str) {
        self.field(&format!("check.{}", name), if passed { "pass" } else { "fail" });
        if !passed {
            self.failures += 1;
            self.field(&format!("counterexample.{}", name), counterexample);
        }
    }

    pub fn timing(&mut self, stage: &str, d: Duration) {
        self.field(&format!("{}{}_ms", TIMING_PREFIX, stage), d.as_millis());
    }

    pub fn output(&mut self, label: &str, path: &str) {
        self.field(&format!("output.{}", label), path);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{}: {}\n", k, v)).collect()
    }

    /// The report with timing lines dropped, for byte comparison of runs.
    pub fn render_stable(&self) -> String {
        self.entries
            .iter()
            .filter(|(k, _)| !k.starts_with(TIMING_PREFIX))
            .map(|(k, v)| format!("{}: {}\n", k, v))
            .collect()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Rendering of `f`, cut to `max` characters with the full symbol count
/// appended when longer.
pub fn abbreviate(f: &Formula, max: usize) -> String {
    let s = f.render();
    if s.chars().count() <= max {
        return s;
    }
    let head: String = s.chars().take(max).collect();
    format!("{}... ({} symbols)", head, f.symbol_count())
}

/// The chain of false subformulas under a failing check, one entry per
/// step, as `point formula`.
pub fn failure_trace(model: &BimodalModel, w: WorldId, f: &Formula) -> Vec<String> {
    Evaluator::new(model)
        .failure_path(w, f)
        .into_iter()
        .map(|(v, g)| format!("{} {}", model.name(v), abbreviate(&g, 160)))
        .collect()
}

fn stage<T>(
    report: &mut RunReport,
    name: &str,
    run: impl FnOnce() -> Result<T, String>,
) -> Option<T> {
    let t0 = Instant::now();
    let out = run();
    report.timing(name, t0.elapsed());
    match out {
        Ok(v) => {
            report.check(name, true, "");
            Some(v)
        }
        Err(e) => {
            report.check(name, false, &e);
            None
        }
    }
}

fn class_check(m: &BimodalModel, class: FrameClass) -> Result<(), String> {
    let r = validate(m, class);
    if r.passed() {
        Ok(())
    } else {
        Err(r.to_string())
    }
}

fn holds(m: &BimodalModel, w: WorldId, f: &Formula) -> Result<(), String> {
    if Evaluator::new(m).holds(w, f) {
        Ok(())
    } else {
        Err(failure_trace(m, w, f).join(" / "))
    }
}

fn same_labels(a: &ComputationTree, b: &ComputationTree) -> Result<(), String> {
    if a.canonical() == b.canonical() {
        Ok(())
    } else {
        Err(format!("extracted tree has {} nodes, input tree {}", a.len(), b.len()))
    }
}

/// Runs every stage of the chain for one machine, word and polynomial,
/// stopping at the first failing stage. Returns whether all stages passed.
pub fn verify_pipeline(params: &ReductionParams, report: &mut RunReport) -> bool {
    let atm = &params.atm;
    let Some(tree) = stage(report, "atm.accepting_tree", || {
        find_accepting_tree(atm, &params.w, params.max_time())
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no accepting tree within time {}", params.max_time()))
    }) else {
        return false;
    };
    report.field("tree.nodes", tree.len());

    let Some(f_ssl) = stage(report, "ssl.generate", || gen_f_ssl(params).map_err(|e| e.to_string()))
    else {
        return false;
    };
    report.field("ssl.formula_symbols", f_ssl.formula.symbol_count());
    let Some((m_ssl, r_ssl)) = stage(report, "ssl.witness", || {
        let (m, r) = build_f_ssl_model(params, &tree).map_err(|e| e.to_string())?;
        class_check(&m, FrameClass::CrossAxiom)?;
        Ok((m, r))
    }) else {
        return false;
    };
    report.field("ssl.model_points", m_ssl.len());
    if stage(report, "ssl.check", || holds(&m_ssl, r_ssl, &f_ssl.formula)).is_none() {
        return false;
    }
    let Some(ssl_tree) = stage(report, "ssl.extract", || {
        let ex = extract_accepting_tree_ssl(&m_ssl, r_ssl, params).map_err(|e| e.to_string())?;
        let v = validate_tree(atm, &params.w, &ex.tree, TreeMode::Accepting);
        if !v.passed() {
            return Err(v.to_string());
        }
        same_labels(&ex.tree, &tree)?;
        Ok(ex.tree)
    }) else {
        return false;
    };

    let Some(f_s4s5) = stage(report, "s4s5.generate", || gen_f_s4s5(params).map_err(|e| e.to_string()))
    else {
        return false;
    };
    report.field("s4s5.formula_symbols", f_s4s5.formula.symbol_count());
    let Some((m_s4s5, r_s4s5)) = stage(report, "s4s5.witness", || {
        let (m, r) = build_f_s4s5_model(params, &tree).map_err(|e| e.to_string())?;
        class_check(&m, FrameClass::S4xS5Product)?;
        Ok((m, r))
    }) else {
        return false;
    };
    report.field("s4s5.model_points", m_s4s5.len());
    if stage(report, "s4s5.check", || holds(&m_s4s5, r_s4s5, &f_s4s5.formula)).is_none() {
        return false;
    }
    if stage(report, "s4s5.extract", || {
        let ex = extract_accepting_tree_s4s5(&m_s4s5, r_s4s5, params).map_err(|e| e.to_string())?;
        same_labels(&ex.tree, &ssl_tree)
    })
    .is_none()
    {
        return false;
    }

    let t_ssl = t_ssl_to_s4s5(&f_ssl.formula);
    let main = t_ssl.main_atom.expect("SSL translation has a main atom");
    let Some((lifted, w_lift)) = stage(report, "translate.ssl_s4s5.lift", || {
        let (m, w) = lift_model_ssl_to_s4s5(&m_ssl, r_ssl, main).map_err(|e| e.to_string())?;
        class_check(&m, FrameClass::S4xS5Commutator)?;
        holds(&m, w, &t_ssl.formula)?;
        Ok((m, w))
    }) else {
        return false;
    };
    if stage(report, "translate.ssl_s4s5.restrict", || {
        let (m, w) = restrict_model_s4s5_to_ssl(&lifted, w_lift, &f_ssl.formula)
            .map_err(|e| e.to_string())?;
        class_check(&m, FrameClass::CrossAxiom)?;
        holds(&m, w, &f_ssl.formula)
    })
    .is_none()
    {
        return false;
    }

    let t_k4 = t_s4s5_to_k4s5(&f_s4s5.formula);
    report.field("translate.s4s5_k4s5.boxes", t_k4.box_subformulas.len());
    stage(report, "translate.s4s5_k4s5", || {
        class_check(&m_s4s5, FrameClass::K4xS5Commutator)?;
        holds(&m_s4s5, r_s4s5, &t_k4.formula)?;
        let (m, w) = k4_to_s4_model(&m_s4s5, r_s4s5, &f_s4s5.formula).map_err(|e| e.to_string())?;
        class_check(&m, FrameClass::S4xS5Commutator)?;
        holds(&m, w, &f_s4s5.formula)
    })
    .is_some()
}
