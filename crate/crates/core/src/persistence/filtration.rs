use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::EdgeGraph;
use crate::sparsify::SparseLengthMatrix;

/// Cap used when the caller does not configure one.
pub const DEFAULT_MAX_SIMPLICES: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub diameter: f64,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

fn filtration_order(a: &Simplex, b: &Simplex) -> Ordering {
    a.diameter
        .total_cmp(&b.diameter)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiltrationOptions {
    /// Largest simplex dimension enumerated.
    pub dim_cap: usize,
    /// Only simplices with diameter `<= threshold` are kept.
    pub threshold: Option<f64>,
    pub max_simplices: u64,
}

impl FiltrationOptions {
    pub fn new(dim_cap: usize) -> Self {
        FiltrationOptions {
            dim_cap,
            threshold: None,
            max_simplices: DEFAULT_MAX_SIMPLICES,
        }
    }
}

/// Flag filtration sorted by `(diameter, dimension, vertices)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    dim_cap: usize,
}

impl Filtration {
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }
}

/// Enumerates every clique of the edge graph of `lengths` with at most
/// `dim_cap + 1` vertices. Missing edges block cliques.
///
/// The clique count is computed before anything is materialized; if it exceeds
/// `max_simplices` the call fails with [`Error::ResourceLimit`].
pub fn build_filtration(lengths: &SparseLengthMatrix, options: &FiltrationOptions) -> Result<Filtration> {
    let edges = lengths
        .edges
        .iter()
        .filter(|e| options.threshold.is_none_or(|t| e.len <= t))
        .map(|e| (e.i, e.j, e.len));
    let graph = EdgeGraph::new(lengths.size, edges);
    let projected: u64 = graph.count_cliques(options.dim_cap).iter().sum();
    if projected > options.max_simplices {
        return Err(Error::ResourceLimit {
            projected,
            cap: options.max_simplices,
        });
    }
    let mut simplices = Vec::with_capacity(projected as usize);
    graph.for_each_clique(options.dim_cap, |vertices, diameter| {
        simplices.push(Simplex {
            vertices: vertices.to_vec(),
            diameter,
        })
    });
    simplices.sort_by(filtration_order);
    Ok(Filtration {
        simplices,
        dim_cap: options.dim_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::EuclideanOracle;
    use crate::sparsify::{Edge, PrecisionProfile};
    use std::collections::HashMap;

    fn matrix(n: usize, edges: &[(usize, usize, f64)]) -> SparseLengthMatrix {
        SparseLengthMatrix {
            size: n,
            edges: edges.iter().map(|&(i, j, len)| Edge { i, j, len }).collect(),
            profile: PrecisionProfile::identity(n),
        }
    }

    fn by_dim(f: &Filtration) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new(); f.dim_cap() + 1];
        for s in f.simplices() {
            out[s.dim()].push(s.diameter);
        }
        out
    }

    #[test]
    fn triangle_is_complete() {
        let m = matrix(3, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
        let f = build_filtration(&m, &FiltrationOptions::new(2)).unwrap();
        assert_eq!(by_dim(&f), vec![vec![0.0; 3], vec![1.0; 3], vec![1.0]]);
    }

    #[test]
    fn missing_edge_blocks_triangle() {
        let m = matrix(3, &[(0, 2, 1.0), (1, 2, 1.0)]);
        let f = build_filtration(&m, &FiltrationOptions::new(2)).unwrap();
        assert_eq!(by_dim(&f)[1].len(), 2);
        assert!(by_dim(&f)[2].is_empty());
    }

    #[test]
    fn square_diameters() {
        let o = EuclideanOracle::new(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let f = build_filtration(&SparseLengthMatrix::full(&o), &FiltrationOptions::new(1)).unwrap();
        let d = by_dim(&f);
        assert_eq!(d[0].len(), 4);
        let s = 2f64.sqrt();
        assert_eq!(d[1], vec![1.0, 1.0, 1.0, 1.0, s, s]);
    }

    #[test]
    fn faces_precede_cofaces() {
        let pts: Vec<[f64; 2]> = (0..9).map(|k| [(k as f64 * 2.3).sin(), (k as f64 * 1.1).cos()]).collect();
        let o = EuclideanOracle::new(&pts).unwrap();
        let f = build_filtration(&SparseLengthMatrix::full(&o), &FiltrationOptions::new(3)).unwrap();
        let index: HashMap<&[usize], usize> =
            f.simplices().iter().enumerate().map(|(k, s)| (s.vertices.as_slice(), k)).collect();
        for (k, s) in f.simplices().iter().enumerate() {
            if s.vertices.len() < 2 {
                continue;
            }
            for drop in 0..s.vertices.len() {
                let mut face = s.vertices.clone();
                face.remove(drop);
                let at = index[face.as_slice()];
                assert!(at < k);
            }
        }
        for w in f.simplices().windows(2) {
            assert_ne!(filtration_order(&w[0], &w[1]), Ordering::Greater);
        }
    }

    #[test]
    fn threshold_and_guard() {
        let m = matrix(3, &[(0, 1, 1.0), (0, 2, 3.0), (1, 2, 1.0)]);
        let mut opts = FiltrationOptions::new(2);
        opts.threshold = Some(2.0);
        let f = build_filtration(&m, &opts).unwrap();
        assert_eq!(f.len(), 5);

        opts.max_simplices = 4;
        match build_filtration(&m, &opts) {
            Err(Error::ResourceLimit { projected, cap }) => assert_eq!((projected, cap), (5, 4)),
            other => panic!("expected resource error, got {other:?}"),
        }
    }
}
