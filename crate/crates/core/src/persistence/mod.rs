//! Desk-scale persistent homology of flag filtrations, plus the interval
//! decomposition of explicitly given persistence modules.
//!
//! Diagrams use half-open lifetimes `(b, d]`: a feature exists in `V(r)` for
//! `b < r <= d`, where `V(r)` holds the simplices of diameter `< r`. Vertex
//! classes are born at 0 rather than at minus infinity.

mod filtration;
mod normal_form;
mod reduce;

use serde::{Deserialize, Serialize};

pub use filtration::{build_filtration, Filtration, FiltrationOptions, Simplex, DEFAULT_MAX_SIMPLICES};
pub use normal_form::{
    barcode_from_ranks, normal_form, ranks_from_barcode, ExplicitModule, Generator, Interval, NormalForm, RankTable,
};
pub use reduce::reduce;

use crate::error::Result;
use crate::sparsify::SparseLengthMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramEntry {
    pub dim: usize,
    pub birth: f64,
    #[serde(with = "crate::io::float")]
    pub death: f64,
}

impl DiagramEntry {
    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }
}

/// Multiset of `(dim, birth, death)` entries over Z/pZ, kept sorted by
/// `(dim, birth, death)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    field: u32,
    entries: Vec<DiagramEntry>,
}

impl PersistenceDiagram {
    pub fn new(field: u32, mut entries: Vec<DiagramEntry>) -> Self {
        entries.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        PersistenceDiagram { field, entries }
    }

    pub fn field(&self) -> u32 {
        self.field
    }

    pub fn entries(&self) -> &[DiagramEntry] {
        &self.entries
    }

    pub fn dimension(&self, dim: usize) -> impl Iterator<Item = &DiagramEntry> + '_ {
        self.entries.iter().filter(move |e| e.dim == dim)
    }

    /// Sub-diagram of a single homological dimension.
    pub fn restrict(&self, dim: usize) -> PersistenceDiagram {
        PersistenceDiagram {
            field: self.field,
            entries: self.dimension(dim).copied().collect(),
        }
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.entries.iter().map(|e| e.dim).max()
    }

    /// Drops entries above homological dimension `dim`.
    pub fn truncate_dim(&mut self, dim: usize) {
        self.entries.retain(|e| e.dim <= dim);
    }
}

/// Persistence of the flag filtration of `lengths` in homological dimensions
/// `0..=max_dim` (simplices are enumerated up to `max_dim + 1`).
pub fn persistence(
    lengths: &SparseLengthMatrix,
    max_dim: usize,
    p: u32,
    options: &FiltrationOptions,
) -> Result<PersistenceDiagram> {
    let options = FiltrationOptions {
        dim_cap: max_dim + 1,
        ..*options
    };
    let filtration = build_filtration(lengths, &options)?;
    let mut diagram = reduce(&filtration, p)?;
    diagram.truncate_dim(max_dim);
    Ok(diagram)
}
