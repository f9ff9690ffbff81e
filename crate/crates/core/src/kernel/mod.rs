//! Proof objects, the checker and proof search.

pub mod check;
pub mod cut;
pub mod prf;
pub mod proof;
pub mod search;

pub use check::check;
pub use cut::{cut_corpus, invariant_violations, loc_map, location_balance, verify_cut_admissibility, Balance};
pub use prf::{parse_prf, write_prf};
pub use proof::{CheckReport, Failure, Instantiation, ProofTree, RuleTag};
pub use search::{identity, identity_lolli, prove, prove_counting, Prover};
