//! The reduction from alternating machines to satisfiability over cross
//! axiom models, with its binary counter, witness models and extraction.

mod counter;
mod extract;
mod generate;
mod witness;

pub use counter::{
    build_counter_ssl_model, counter_ssl_alpha, counter_ssl_catalog, extract_counter_trace,
    gen_counter_ssl, CounterTrace,
};
pub(crate) use counter::staircase;
pub use extract::{check_morphism, extract_accepting_tree_ssl};
pub use generate::{f_ssl_catalog, gen_f_ssl, SslVectors};
pub use witness::build_f_ssl_model;
