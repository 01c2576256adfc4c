//! Recursive McCormick linearizations of unconstrained multilinear programs.
//!
//! A multilinear program minimizes a sum of monomials over the unit box or
//! the binary cube. Replacing bilinear products by artificial variables along
//! a *proper triple set* and relaxing each substitution with its McCormick
//! envelopes yields an LP relaxation; both the number of artificial variables
//! and the bound quality depend on which triples are chosen. This crate
//! provides:
//!
//! * instance and triple-set representations with text formats ([`mlp`],
//!   [`triple`]);
//! * the sequential, greedy and all-triples linearization heuristics
//!   ([`linearize`]);
//! * LP relaxation and dual-bound machinery ([`relax`]);
//! * exact MIP models for minimum-size and best-bound linearizations, the
//!   binary exact solve and QCP export ([`models`]);
//! * a self-contained bounded-variable simplex and branch-and-bound
//!   ([`solver`]);
//! * the degree-3 cover-graph specialization with kernelization and an FPT
//!   decision procedure ([`kernel`]);
//! * reproducible benchmark instance generators ([`instances`]).

pub mod error;
pub mod index_set;
pub mod instances;
pub mod kernel;
pub mod linearize;
pub mod mlp;
pub mod models;
pub mod relax;
pub mod solver;
pub mod triple;

pub use error::{Error, Result};
pub use index_set::IndexSet;
pub use mlp::{Domain, MlpInstance, Monomial};
pub use triple::{Triple, TripleSet, TripleUniverse};
