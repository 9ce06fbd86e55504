//! Sparse approximations of Vietoris–Rips persistence with certified error
//! bounds.
//!
//! The pipeline orders a finite metric space with a cover tree
//! ([`covertree`]), keeps a sparse set of edges whose flag filtration is
//! interleaved with the full one ([`sparsify`]), computes persistence of the
//! result ([`persistence`]), and turns the diagram into boxes that must
//! contain the exact diagram ([`diagram`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covertree;
pub mod diagram;
pub mod error;
pub mod field;
pub mod generators;
pub mod graph;
pub mod io;
pub mod metric;
pub mod persistence;
pub mod sparsify;

pub use error::{Error, Result};
