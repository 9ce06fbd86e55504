//! Weighted graphs and clique enumeration for flag complexes.

/// Undirected graph on `0..n` with edge lengths; each vertex stores its
/// higher-indexed neighbors sorted ascending.
#[derive(Clone, Debug)]
pub struct EdgeGraph {
    higher: Vec<Vec<(usize, f64)>>,
}

impl EdgeGraph {
    /// Builds from `(i, j, length)` triples; `i == j` entries are ignored and
    /// a repeated pair keeps its last length.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut higher = vec![Vec::new(); n];
        for (i, j, len) in edges {
            if i == j {
                continue;
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            higher[a].push((b, len));
        }
        for row in higher.iter_mut() {
            row.sort_by_key(|&(b, _)| b);
            let mut dedup: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for &(b, len) in row.iter() {
                match dedup.last_mut() {
                    Some(last) if last.0 == b => last.1 = len,
                    _ => dedup.push((b, len)),
                }
            }
            *row = dedup;
        }
        EdgeGraph { higher }
    }

    pub fn vertex_count(&self) -> usize {
        self.higher.len()
    }

    pub fn edge_count(&self) -> usize {
        self.higher.iter().map(Vec::len).sum()
    }

    /// Number of cliques with `k + 1` vertices, for `k = 0..=max_dim`.
    pub fn count_cliques(&self, max_dim: usize) -> Vec<u64> {
        let mut counts = vec![0u64; max_dim + 1];
        self.for_each_clique(max_dim, |vertices, _| counts[vertices.len() - 1] += 1);
        counts
    }

    /// Calls `f(vertices, diameter)` for every clique of at most `max_dim + 1`
    /// vertices. Vertices are ascending; singletons have diameter 0.
    pub fn for_each_clique(&self, max_dim: usize, mut f: impl FnMut(&[usize], f64)) {
        let mut stack = Vec::with_capacity(max_dim + 1);
        for v in 0..self.vertex_count() {
            stack.push(v);
            f(&stack, 0.0);
            if max_dim > 0 {
                let candidates = self.higher[v].clone();
                self.extend(&mut stack, 0.0, &candidates, max_dim, &mut f);
            }
            stack.pop();
        }
    }

    // `candidates` holds vertices adjacent to every clique member, each with
    // its longest edge into the clique.
    fn extend(
        &self,
        stack: &mut Vec<usize>,
        diam: f64,
        candidates: &[(usize, f64)],
        max_dim: usize,
        f: &mut impl FnMut(&[usize], f64),
    ) {
        for (k, &(v, reach)) in candidates.iter().enumerate() {
            let d = diam.max(reach);
            stack.push(v);
            f(stack, d);
            if stack.len() <= max_dim {
                let next = intersect(&candidates[k + 1..], &self.higher[v]);
                if !next.is_empty() {
                    self.extend(stack, d, &next, max_dim, f);
                }
            }
            stack.pop();
        }
    }
}

fn intersect(candidates: &[(usize, f64)], neighbors: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let (mut a, mut b) = (0, 0);
    while a < candidates.len() && b < neighbors.len() {
        match candidates[a].0.cmp(&neighbors[b].0) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => b += 1,
            std::cmp::Ordering::Equal => {
                out.push((candidates[a].0, candidates[a].1.max(neighbors[b].1)));
                a += 1;
                b += 1;
            }
        }
    }
    out
}
