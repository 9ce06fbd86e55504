//! Sparse length matrices from contraction trees.
//!
//! Given a contraction tree with times `r_n` and a relative precision `eps1`,
//! positions below `keep` are relabelled to `t_n = (2 + 2/eps1) r_n`. A
//! depth-first walk of the dual tree of pairs then keeps exactly the edges
//! `(x_i, x_j)`, `i < j`, whose parent pair was kept and for which
//! `t_j >= max(d(x_i, x_j), d(x_i, parent x_j))`. Every kept edge carries
//! its true distance; all others are missing.
//!
//! The resulting Rips filtration is interleaved with the full one under
//! `psi(r) = min(R, r + max(eps0, eps1 r))`, where `eps0 = 2 r_keep` accounts
//! for the dropped points and `R = r_1`.

use serde::{Deserialize, Serialize};

use crate::covertree::ContractionTree;
use crate::error::{Error, Result};
use crate::graph::EdgeGraph;
use crate::metric::DistanceOracle;

/// Error budget of a sparsified filtration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionProfile {
    /// Total number of points in the tree.
    pub n: usize,
    /// Retained points, positions `0..keep`.
    pub keep: usize,
    pub eps0: f64,
    pub eps1: f64,
    /// Radius bound `R`; `psi` saturates here.
    #[serde(rename = "R", with = "crate::io::float")]
    pub radius: f64,
    /// Edge-length cutoff applied after the traversal, if any.
    #[serde(rename = "T")]
    pub threshold: Option<f64>,
}

impl PrecisionProfile {
    /// The exact profile: `psi` is the identity.
    pub fn identity(n: usize) -> Self {
        PrecisionProfile {
            n,
            keep: n,
            eps0: 0.0,
            eps1: 0.0,
            radius: f64::INFINITY,
            threshold: None,
        }
    }

    /// Multiplier `Q(r) / r = 2 + 2/eps1`; infinite when `eps1 == 0`.
    pub fn q_factor(&self) -> f64 {
        if self.eps1 == 0.0 {
            f64::INFINITY
        } else {
            2.0 + 2.0 / self.eps1
        }
    }

    /// Time of the first discarded point, `eps0 / 2`.
    fn dropped_time(&self) -> f64 {
        self.eps0 / 2.0
    }

    /// Relabelled contraction time for position `n` with tree time `rad`.
    pub fn relabel(&self, n: usize, rad: f64) -> f64 {
        if n == 0 || n >= self.keep {
            return rad;
        }
        if self.eps1 == 0.0 {
            return f64::INFINITY;
        }
        self.q_factor() * rad
    }

    /// Inverse of the metric precision function of the relabelled tree.
    pub fn q_inv(&self, r: f64) -> f64 {
        let q = self.q_factor();
        let rn = self.dropped_time();
        if rn == 0.0 {
            return if q.is_infinite() { 0.0 } else { r / q };
        }
        if r <= rn {
            r
        } else if q.is_finite() && r >= q * rn {
            r / q
        } else {
            rn
        }
    }

    /// Unsaturated error map `r + max(eps0, eps1 r)`.
    fn grow(&self, r: f64) -> f64 {
        r + self.eps0.max(self.eps1 * r)
    }

    /// `psi(r) = min(R, r + max(eps0, eps1 r))`, with `psi(inf) = inf`.
    pub fn psi(&self, r: f64) -> f64 {
        if r == f64::INFINITY {
            return r;
        }
        self.radius.min(self.grow(r))
    }

    /// `psi` made into an admissible interleaving map (never below the
    /// identity): beyond `R` both filtrations are contractible, so scales
    /// there are mapped to themselves.
    pub fn interleaving_psi(&self, r: f64) -> f64 {
        r.max(self.psi(r))
    }

    /// Closed-form inverse of the unsaturated branches of `psi`:
    /// the least `r >= 0` with `r + max(eps0, eps1 r) >= y`.
    pub fn psi_inv(&self, y: f64) -> f64 {
        if y == f64::INFINITY {
            return y;
        }
        if y <= self.eps0 {
            return 0.0;
        }
        // the relative branch wins once eps1 r >= eps0, i.e. y >= eps0 (1 + 1/eps1)
        if self.eps1 > 0.0 && y >= self.eps0 + self.eps0 / self.eps1 {
            y / (1.0 + self.eps1)
        } else {
            y - self.eps0
        }
    }

    pub fn is_identity(&self) -> bool {
        self.eps0 == 0.0 && self.eps1 == 0.0
    }
}

/// Builds the profile for keeping the first `keep` positions of `tree` at
/// relative precision `eps1`, together with the relabelled times.
pub fn make_profile(tree: &ContractionTree, keep: usize, eps1: f64) -> Result<(PrecisionProfile, Vec<f64>)> {
    let n = tree.len();
    if keep == 0 || keep > n {
        return Err(Error::input(format!("keep must be in 1..={n}, got {keep}")));
    }
    if !(eps1 >= 0.0) || !eps1.is_finite() {
        return Err(Error::input(format!("eps1 must be finite and >= 0, got {eps1}")));
    }
    let eps0 = if keep < n { 2.0 * tree.time(keep) } else { 0.0 };
    let profile = PrecisionProfile {
        n,
        keep,
        eps0,
        eps1,
        radius: tree.radius(),
        threshold: None,
    };
    let times = (0..n).map(|k| profile.relabel(k, tree.time(k))).collect();
    Ok((profile, times))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub len: f64,
}

/// Symmetric sparse matrix of kept edges over positions `0..size`, stored
/// once per pair with `i < j` and sorted by `(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseLengthMatrix {
    pub size: usize,
    pub edges: Vec<Edge>,
    pub profile: PrecisionProfile,
}

impl SparseLengthMatrix {
    /// Every pair of an oracle, unsparsified, in input index order.
    pub fn full(oracle: &impl DistanceOracle) -> Self {
        let n = oracle.len();
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push(Edge {
                    i,
                    j,
                    len: oracle.dist(i, j),
                });
            }
        }
        SparseLengthMatrix {
            size: n,
            edges,
            profile: PrecisionProfile::identity(n),
        }
    }

    pub fn graph(&self) -> EdgeGraph {
        EdgeGraph::new(self.size, self.edges.iter().map(|e| (e.i, e.j, e.len)))
    }

    /// Drops edges longer than `threshold` and records it in the profile.
    pub fn apply_threshold(&mut self, threshold: f64) {
        self.edges.retain(|e| e.len <= threshold);
        self.profile.threshold = Some(threshold);
    }
}

/// Which rule decided the length of a pair `(x_i, x_j)`, `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// Parent pair missing; inherits the implied length of the parent pair.
    A,
    /// `t_j <= d(x_i, parent x_j)`.
    B,
    /// `d(x_i, parent x_j) < t_j < d(x_i, x_j)`.
    C,
    /// `t_j >= max(d(x_i, x_j), d(x_i, parent x_j))`: edge kept.
    D,
}

/// Decides a pair whose parent pair is present, given
/// `d_parent = d(x_i, parent x_j)` and a lazily evaluated `d(x_i, x_j)`.
#[inline]
fn classify(t_j: f64, d_parent: f64, d_pair: impl FnOnce() -> f64) -> (Case, f64) {
    if t_j <= d_parent {
        return (Case::B, d_parent);
    }
    let d = d_pair();
    if t_j < d {
        (Case::C, t_j)
    } else {
        (Case::D, d)
    }
}

/// Runs the pruned dual-tree traversal from `(x_0, x_0)` over the retained
/// positions and returns the kept edges, indexed by tree position.
pub fn sparsify(tree: &ContractionTree, oracle: &impl DistanceOracle, profile: &PrecisionProfile) -> SparseLengthMatrix {
    let keep = profile.keep.min(tree.len());
    let times: Vec<f64> = (0..keep).map(|k| profile.relabel(k, tree.time(k))).collect();
    let mut edges = Vec::new();
    let mut stack = vec![(0usize, 0usize)];
    while let Some((a, b)) = stack.pop() {
        if a != b {
            let parent_b = tree.parent(b).expect("non-root position");
            let d_parent = if parent_b == a { 0.0 } else { tree.dist(oracle, a, parent_b) };
            let (case, len) = classify(times[b], d_parent, || tree.dist(oracle, a, b));
            if case != Case::D {
                continue;
            }
            edges.push(Edge { i: a, j: b, len });
        }
        // children of (a, b) in the dual tree, restricted to retained positions
        for &c in tree.children(b).iter().take_while(|&&c| c < keep) {
            stack.push((a, c));
        }
        if a != b {
            for &c in tree.children(a).iter().take_while(|&&c| c < keep) {
                if c >= b {
                    stack.push((b, c));
                }
            }
        }
    }
    edges.sort_by_key(|e| (e.i, e.j));
    let mut matrix = SparseLengthMatrix {
        size: keep,
        edges,
        profile: *profile,
    };
    if let Some(t) = profile.threshold {
        matrix.apply_threshold(t);
    }
    matrix
}

/// Sparse length `l` and implied length `l_bar` for every pair of positions,
/// computed by the unpruned recursion. Quadratic memory; meant as an oracle.
#[derive(Clone, Debug)]
pub struct ImpliedLengths {
    n: usize,
    sparse: Vec<f64>,
    implied: Vec<f64>,
    cases: Vec<Option<Case>>,
}

impl ImpliedLengths {
    fn at(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `l(x_i, x_j)`: the distance, or infinity for a missing edge.
    pub fn sparse(&self, i: usize, j: usize) -> f64 {
        self.sparse[self.at(i, j)]
    }

    pub fn implied(&self, i: usize, j: usize) -> f64 {
        self.implied[self.at(i, j)]
    }

    /// Deciding case for an off-diagonal pair.
    pub fn case(&self, i: usize, j: usize) -> Option<Case> {
        self.cases[self.at(i, j)]
    }
}

pub fn implied_lengths(tree: &ContractionTree, oracle: &impl DistanceOracle, profile: &PrecisionProfile) -> ImpliedLengths {
    let n = tree.len();
    let mut out = ImpliedLengths {
        n,
        sparse: vec![f64::INFINITY; n * n],
        implied: vec![0.0; n * n],
        cases: vec![None; n * n],
    };
    for k in 0..n {
        let at = out.at(k, k);
        out.sparse[at] = 0.0;
    }
    for j in 1..n {
        let t_j = profile.relabel(j, tree.time(j));
        let parent_j = tree.parent(j).expect("non-root position");
        for i in 0..j {
            let parent_pair = out.at(i, parent_j);
            let (case, implied, sparse) = if out.sparse[parent_pair] == f64::INFINITY {
                (Case::A, out.implied[parent_pair], f64::INFINITY)
            } else {
                let d_parent = tree.dist(oracle, i, parent_j);
                match classify(t_j, d_parent, || tree.dist(oracle, i, j)) {
                    (Case::D, d) => (Case::D, d, d),
                    (case, implied) => (case, implied, f64::INFINITY),
                }
            };
            for (a, b) in [(i, j), (j, i)] {
                let at = out.at(a, b);
                out.sparse[at] = sparse;
                out.implied[at] = implied;
                out.cases[at] = Some(case);
            }
        }
    }
    out
}

/// Simplex counts per dimension `0..=dim_cap` of the flag complex of `matrix`.
pub fn count_simplices(matrix: &SparseLengthMatrix, dim_cap: usize) -> Vec<u64> {
    matrix.graph().count_cliques(dim_cap)
}
