//! Double-pushout rewriting of typed hypergraphs, certified by derivations in
//! a linear logic with a resource-bound quantifier and location types.

pub mod dpo;
pub mod encoder;
pub mod format;
pub mod gen;
pub mod hill;
pub mod hypergraph;
pub mod kernel;
