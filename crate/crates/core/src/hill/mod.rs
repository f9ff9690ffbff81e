//! The linear calculus: syntax, parsing and graph formulas.

pub mod graph_formula;
pub mod parse;
pub mod syntax;

pub use graph_formula::{is_graph_formula, normal_form, NormalForm};
pub use parse::{parse_formula, parse_hill, parse_sequent, parse_term, HillFile, ParseError};
pub use syntax::{
    alpha_eq, alpha_eq_term, desugar_let, fresh_name, name, subst_checked, Arg, Formula, Name, Pattern, Sequent, Subst, SubstError, Term,
};
