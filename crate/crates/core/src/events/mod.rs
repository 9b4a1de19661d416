// SPDX-License-Identifier: Apache-2.0

//! Event algebra over local dichotomic observables.
//!
//! Events are immutable trees of atomic outcomes, equality chains,
//! conjunctions and exclusive disjunctions. They reduce to a disjunctive
//! normal form of exclusive total assignments, which serves both the
//! operator compiler (symmetrized products per party, tensor products across
//! parties, sums across alternatives) and deterministic indicator evaluation.

mod ast;
mod compile;
mod parser;
pub mod presets;

pub use ast::{equality_event, Event, EventExpr, Observable, Term};
pub use compile::{
    compile_event, event_pseudoprobability, event_pseudoprobability_fast, expr_value_fast,
    Binding, CompiledEvent, EventCompiler,
};
pub use parser::{parse_event, parse_expr};
