//! Constructions around the bimodal logics SSL, S4×S5 and K4×S5: formula
//! generators for binary counters and alternating Turing machine reductions,
//! the witness models that satisfy them, extraction of accepting trees from
//! arbitrary models, the satisfiability-preserving translations between the
//! logics, a finite model checker, and a bounded satisfiability oracle.

pub mod atm;
pub mod formula;
pub mod pipeline;
pub mod red_s4s5;
pub mod red_ssl;
pub mod reduction;
pub mod satbound;
pub mod semantics;
pub mod translations;
