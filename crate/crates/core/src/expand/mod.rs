// SPDX-License-Identifier: Apache-2.0

//! Any Hermitian operator as a nonnegative combination of pseudoprojections
//! acting on two-level subspaces.

mod basis;
mod expansion;

pub use basis::{
    antisym_generator, block_identity, decompose, diag_difference, diag_generator, diag_norm,
    gellmann_basis, index_pairs, sym_generator, PauliDecomposition,
};
pub use expansion::{
    embed_block, expand_operator, subspace_pseudoprojections, Expansion, ExpansionTerm,
    SubspacePseudoprojections, TermKind,
};
