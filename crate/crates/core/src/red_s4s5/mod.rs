//! The direct reduction from alternating machines to S4×S5 products: the
//! product counter, `f_S4×S5(w)`, product witness models and extraction.

mod counter;
mod extract;
mod generate;
mod witness;

pub use counter::{
    build_counter_s4s5_model, counter_s4s5_alpha, counter_s4s5_catalog, extract_counter_trace_s4s5,
    gen_counter_s4s5,
};
pub use extract::{check_morphism_s4s5, extract_accepting_tree_s4s5};
pub use generate::{f_s4s5_catalog, gen_f_s4s5, S4s5Vectors};
pub use witness::build_f_s4s5_model;
