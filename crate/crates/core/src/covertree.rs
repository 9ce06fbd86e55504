//! Simplified cover trees and the contraction trees derived from them.
//!
//! Points are inserted in input order. Each new point `x` is attached below the
//! closest existing node `y` satisfying `d(x, y) <= d(y, parent y) / 2` (the
//! root is always eligible), which keeps `d(x, parent x)` at most half of
//! `d(parent x, grandparent x)`. On inputs satisfying the triangle inequality
//! this yields density at most 4.
//!
//! [`CoverTree::tighten`] then replaces the a-priori radii `r(x) = 2 d(x, parent x)`
//! by the subtree radii `rad(x)` and reorders the nodes by decreasing `rad`,
//! giving a [`ContractionTree`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::metric::DistanceOracle;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoverTree {
    parent: Vec<Option<usize>>,
    parent_dist: Vec<f64>,
    // sorted by descending radius, ties by ascending insertion index
    children: Vec<Vec<usize>>,
}

impl CoverTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts every point of `oracle` in index order.
    pub fn build(oracle: &impl DistanceOracle) -> Self {
        let mut tree = CoverTree::new();
        for x in 0..oracle.len() {
            tree.insert(oracle, x);
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn children(&self, x: usize) -> &[usize] {
        &self.children[x]
    }

    /// A-priori radius `r(x) = 2 d(x, parent x)`; infinite at the root.
    pub fn radius(&self, x: usize) -> f64 {
        match self.parent[x] {
            None => f64::INFINITY,
            Some(_) => 2.0 * self.parent_dist[x],
        }
    }

    /// Whether `y` may adopt a point at distance `d` from it.
    #[inline]
    pub fn accepts(&self, y: usize, d: f64) -> bool {
        match self.parent[y] {
            None => true,
            Some(_) => d <= self.parent_dist[y] / 2.0,
        }
    }

    /// Closest eligible parent for point `x` (an index of `oracle` not yet in
    /// the tree). Ties on distance go to the lowest node index.
    ///
    /// Children are visited in decreasing radius order; a child `c` of `y` is
    /// skipped together with all later siblings once `d(x, y) > r(c)`.
    pub fn find_parent(&self, oracle: &impl DistanceOracle, x: usize) -> (usize, f64) {
        assert!(!self.is_empty(), "find_parent on an empty tree");
        let mut best = (usize::MAX, f64::INFINITY);
        let mut candidates = vec![0usize];
        while let Some(y) = candidates.pop() {
            let d = oracle.dist(x, y);
            if self.accepts(y, d) && (d < best.1 || (d == best.1 && y < best.0)) {
                best = (y, d);
            }
            for &c in &self.children[y] {
                if d <= self.radius(c) {
                    candidates.push(c);
                } else {
                    break;
                }
            }
        }
        best
    }

    /// Appends point `x`, which must be the next index (`x == self.len()`).
    pub fn insert(&mut self, oracle: &impl DistanceOracle, x: usize) {
        assert_eq!(x, self.len(), "points must be inserted in index order");
        if self.is_empty() {
            self.parent.push(None);
            self.parent_dist.push(f64::INFINITY);
            self.children.push(Vec::new());
            return;
        }
        let (p, d) = self.find_parent(oracle, x);
        self.parent.push(Some(p));
        self.parent_dist.push(d);
        self.children.push(Vec::new());
        let r = 2.0 * d;
        let siblings = &self.children[p];
        // after every sibling with radius >= r, so equal radii stay in insertion order
        let at = siblings.partition_point(|&c| 2.0 * self.parent_dist[c] >= r);
        self.children[p].insert(at, x);
    }

    /// Replaces a-priori radii by a-posteriori subtree radii and reorders.
    ///
    /// `R0(x) = max { d(y, parent x) : y descendant of x }` and
    /// `rad(x) = max { R0(y) : y descendant of x }`, with `rad(root) = inf`.
    pub fn tighten(&self, oracle: &impl DistanceOracle) -> ContractionTree {
        let n = self.len();
        assert!(n > 0, "tighten on an empty tree");
        let mut r0 = vec![0.0f64; n];
        for y in 1..n {
            let mut x = y;
            while let Some(p) = self.parent[x] {
                let d = if x == y { self.parent_dist[y] } else { oracle.dist(y, p) };
                if d > r0[x] {
                    r0[x] = d;
                }
                x = p;
            }
        }
        let mut rad = r0;
        rad[0] = f64::INFINITY;
        for x in (1..n).rev() {
            let p = self.parent[x].expect("non-root has a parent");
            if p != 0 && rad[x] > rad[p] {
                rad[p] = rad[x];
            }
        }

        // Rank by (rad desc, index asc); then emit parents before children.
        // rad is monotone along the tree, so the second pass keeps the ranking.
        let mut ranked: Vec<usize> = (0..n).collect();
        ranked.sort_by(|&a, &b| rad[b].total_cmp(&rad[a]).then(a.cmp(&b)));
        let mut rank = vec![0usize; n];
        for (k, &x) in ranked.iter().enumerate() {
            rank[x] = k;
        }
        let mut ready = BinaryHeap::new();
        ready.push(Reverse((rank[0], 0usize)));
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse((_, x))) = ready.pop() {
            order.push(x);
            for &c in &self.children[x] {
                ready.push(Reverse((rank[c], c)));
            }
        }

        let mut position = vec![0usize; n];
        for (k, &x) in order.iter().enumerate() {
            position[x] = k;
        }
        let parent = order
            .iter()
            .map(|&x| self.parent[x].map(|p| position[p]))
            .collect();
        let times = order.iter().map(|&x| rad[x]).collect();
        ContractionTree::from_parts(order, parent, times)
            .expect("tightened tree satisfies the contraction-tree invariants")
    }
}

/// Ordered rooted tree with nonincreasing contraction times.
///
/// Positions `0..len()` index the ordering `x_0, x_1, ...`; `point(n)` maps a
/// position back to the input index. `time(0)` is infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionTree {
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    times: Vec<f64>,
    children: Vec<Vec<usize>>,
}

impl ContractionTree {
    pub fn from_parts(order: Vec<usize>, parent: Vec<Option<usize>>, times: Vec<f64>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::input("empty contraction tree"));
        }
        if parent.len() != n || times.len() != n {
            return Err(Error::input("order, parent and times differ in length"));
        }
        let mut seen = vec![false; n];
        for &x in &order {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::input("order is not a permutation"));
            }
        }
        if parent[0].is_some() || times[0] != f64::INFINITY {
            return Err(Error::input("position 0 must be the root with time inf"));
        }
        for k in 1..n {
            match parent[k] {
                Some(p) if p < k => {}
                _ => return Err(Error::input(format!("parent of position {k} must precede it"))),
            }
            if !(times[k] <= times[k - 1]) || times[k] < 0.0 {
                return Err(Error::input(format!("times must be nonincreasing and >= 0 at position {k}")));
            }
        }
        let mut children = vec![Vec::new(); n];
        for (k, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(k);
            }
        }
        Ok(ContractionTree {
            order,
            parent,
            times,
            children,
        })
    }

    pub fn build(oracle: &impl DistanceOracle) -> Self {
        CoverTree::build(oracle).tighten(oracle)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Input index of the point at position `n`.
    pub fn point(&self, n: usize) -> usize {
        self.order[n]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn parent(&self, n: usize) -> Option<usize> {
        self.parent[n]
    }

    /// Child positions of `n`, ascending.
    pub fn children(&self, n: usize) -> &[usize] {
        &self.children[n]
    }

    pub fn time(&self, n: usize) -> f64 {
        self.times[n]
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `R = t_1`, a bound on `d(x_0, x)` for all `x`; zero for a single point.
    pub fn radius(&self) -> f64 {
        self.times.get(1).copied().unwrap_or(0.0)
    }

    /// Distance between the points at positions `i` and `j`.
    #[inline]
    pub fn dist(&self, oracle: &impl DistanceOracle, i: usize, j: usize) -> f64 {
        oracle.dist(self.order[i], self.order[j])
    }

    /// `pi_n(x)`: the first ancestor of `x` (or `x` itself) at position `<= n`.
    pub fn project(&self, mut x: usize, n: usize) -> usize {
        while x > n {
            x = self.parent[x].expect("only the root lacks a parent");
        }
        x
    }

    /// `n(t) = max { k : t_k >= t }`.
    pub fn n_of_t(&self, t: f64) -> usize {
        self.times.partition_point(|&tk| tk >= t).saturating_sub(1)
    }

    /// First pair `(i, j)`, `i < j`, with `d(x_i, x_j) < t_j / rho`.
    pub fn density_violation(&self, oracle: &impl DistanceOracle, rho: f64) -> Option<(usize, usize)> {
        for j in 1..self.len() {
            let bound = self.times[j] / rho;
            for i in 0..j {
                if self.dist(oracle, i, j) < bound {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.len()).unwrap();
        for k in 0..self.len() {
            match self.parent[k] {
                None => writeln!(out, "{} - {}", self.order[k], self.times[k]).unwrap(),
                Some(p) => writeln!(out, "{} {} {}", self.order[k], p, self.times[k]).unwrap(),
            }
        }
        out
    }

    /// Parses the format written by [`to_text`](Self::to_text): a count line,
    /// then one `point parent_position time` line per position in tree order.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing point count".into(),
        })?;
        let n: usize = header.parse().map_err(|_| Error::Parse {
            line: hline,
            msg: format!("bad point count {header:?}"),
        })?;
        let mut order = Vec::with_capacity(n);
        let mut parent = Vec::with_capacity(n);
        let mut times = Vec::with_capacity(n);
        for (line, l) in lines {
            let fields: Vec<&str> = l.split_whitespace().collect();
            let bad = |msg: &str| Error::Parse {
                line,
                msg: msg.to_string(),
            };
            if fields.len() != 3 {
                return Err(bad("expected `point parent time`"));
            }
            order.push(fields[0].parse().map_err(|_| bad("bad point index"))?);
            parent.push(match fields[1] {
                "-" => None,
                s => Some(s.parse().map_err(|_| bad("bad parent index"))?),
            });
            times.push(fields[2].parse().map_err(|_| bad("bad time"))?);
        }
        if order.len() != n {
            return Err(Error::input(format!("header says {n} nodes, found {}", order.len())));
        }
        ContractionTree::from_parts(order, parent, times)
    }
}
