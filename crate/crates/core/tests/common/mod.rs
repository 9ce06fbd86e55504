//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's linear algebra or reduction code.

#![allow(dead_code)]

use ripsparse::metric::DistanceOracle;
use ripsparse::persistence::{DiagramEntry, PersistenceDiagram};

pub mod linalg {
    pub fn inv(a: u32, p: u32) -> u32 {
        (1..p).find(|&x| (a as u64 * x as u64) % p as u64 == 1).expect("invertible")
    }

    /// Row echelon in place; returns the rank.
    pub fn echelon(rows: &mut Vec<Vec<u32>>, p: u32) -> usize {
        let cols = rows.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(r, sel);
            let f = inv(rows[r][c], p);
            for x in rows[r].iter_mut() {
                *x = (*x as u64 * f as u64 % p as u64) as u32;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let g = rows[i][c] as u64;
                    for k in 0..cols {
                        let sub = g * rows[r][k] as u64 % p as u64;
                        rows[i][k] = ((rows[i][k] as u64 + p as u64 - sub) % p as u64) as u32;
                    }
                }
            }
            r += 1;
        }
        r
    }

    pub fn rank(vectors: &[Vec<u32>], p: u32) -> usize {
        let mut rows = vectors.to_vec();
        echelon(&mut rows, p)
    }

    /// Null space of the linear map whose columns are `columns` (each of
    /// length `rows`), as coefficient vectors over the columns.
    pub fn kernel_of_columns(columns: &[Vec<u32>], rows: usize, p: u32) -> Vec<Vec<u32>> {
        let n = columns.len();
        // augment [A^T | I] and reduce: rows that vanish on the left give kernel vectors
        let mut aug: Vec<Vec<u32>> = columns
            .iter()
            .enumerate()
            .map(|(k, col)| {
                let mut row = col.clone();
                row.resize(rows, 0);
                row.extend((0..n).map(|i| u32::from(i == k)));
                row
            })
            .collect();
        let r = {
            // eliminate only on the left block
            let mut r = 0;
            for c in 0..rows {
                let Some(sel) = (r..aug.len()).find(|&i| aug[i][c] != 0) else { continue };
                aug.swap(r, sel);
                let f = inv(aug[r][c], p);
                for x in aug[r].iter_mut() {
                    *x = (*x as u64 * f as u64 % p as u64) as u32;
                }
                for i in 0..aug.len() {
                    if i != r && aug[i][c] != 0 {
                        let g = aug[i][c] as u64;
                        for k in 0..rows + n {
                            let sub = g * aug[r][k] as u64 % p as u64;
                            aug[i][k] = ((aug[i][k] as u64 + p as u64 - sub) % p as u64) as u32;
                        }
                    }
                }
                r += 1;
            }
            r
        };
        aug[r..].iter().map(|row| row[rows..].to_vec()).collect()
    }

    pub fn mat_mul(a: &[Vec<u32>], b: &[Vec<u32>], inner: usize, cols: usize, p: u32) -> Vec<Vec<u32>> {
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| ((0..inner).map(|k| row[k] as u64 * b[k][j] as u64).sum::<u64>() % p as u64) as u32)
                    .collect()
            })
            .collect()
    }

    pub fn identity(n: usize) -> Vec<Vec<u32>> {
        (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect()
    }

    /// Inverse by Gauss–Jordan, or `None` if singular.
    pub fn inverse(m: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
        let n = m.len();
        let mut aug: Vec<Vec<u32>> = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        let rank = {
            let mut left: Vec<Vec<u32>> = aug.clone();
            let r = echelon(&mut left, p);
            aug = left;
            r
        };
        if rank < n || (0..n).any(|i| aug[i][i] != 1) {
            return None;
        }
        Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
    }
}

/// Persistence diagram by brute force: homology ranks of the maps between
/// all pairs of critical sublevel complexes, then inclusion–exclusion.
///
/// Simplices are enumerated from all vertex subsets, so keep `n` small.
pub fn brute_force_diagram(oracle: &impl DistanceOracle, max_dim: usize, p: u32) -> PersistenceDiagram {
    let n = oracle.len();
    let mut by_dim: Vec<Vec<(Vec<usize>, f64)>> = vec![Vec::new(); max_dim + 2];
    for mask in 1u64..(1u64 << n) {
        let verts: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if verts.len() > max_dim + 2 {
            continue;
        }
        let mut diam = 0.0f64;
        for a in 0..verts.len() {
            for b in a + 1..verts.len() {
                diam = diam.max(oracle.dist(verts[a], verts[b]));
            }
        }
        by_dim[verts.len() - 1].push((verts, diam));
    }
    let mut crit: Vec<f64> = by_dim.iter().flatten().map(|s| s.1).collect();
    crit.sort_by(f64::total_cmp);
    crit.dedup();
    let m = crit.len();

    let boundary = |simplex: &[usize], faces: &[(Vec<usize>, f64)]| -> Vec<u32> {
        let mut col = vec![0u32; faces.len()];
        for drop in 0..simplex.len() {
            let face: Vec<usize> = simplex.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
            let at = faces.iter().position(|f| f.0 == face).expect("face present");
            col[at] = if drop % 2 == 0 { 1 } else { p - 1 };
        }
        col
    };

    let mut entries = Vec::new();
    for q in 0..=max_dim {
        let faces = &by_dim[q];
        // cycles of K_s, as vectors over all q-simplices
        let cycles: Vec<Vec<Vec<u32>>> = (0..m)
            .map(|s| {
                let members: Vec<usize> = (0..faces.len()).filter(|&k| faces[k].1 <= crit[s]).collect();
                let coeffs = if q == 0 {
                    linalg::identity(members.len())
                } else {
                    let columns: Vec<Vec<u32>> =
                        members.iter().map(|&k| boundary(&faces[k].0, &by_dim[q - 1])).collect();
                    linalg::kernel_of_columns(&columns, by_dim[q - 1].len(), p)
                };
                coeffs
                    .iter()
                    .map(|c| {
                        let mut v = vec![0u32; faces.len()];
                        for (x, &k) in c.iter().zip(&members) {
                            v[k] = *x;
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let boundaries: Vec<Vec<Vec<u32>>> = (0..m)
            .map(|t| {
                by_dim[q + 1]
                    .iter()
                    .filter(|s| s.1 <= crit[t])
                    .map(|s| boundary(&s.0, faces))
                    .collect()
            })
            .collect();
        let mut rank = vec![vec![0i64; m]; m];
        for t in 0..m {
            let b_rank = linalg::rank(&boundaries[t], p);
            for s in 0..=t {
                let mut both = cycles[s].clone();
                both.extend(boundaries[t].iter().cloned());
                rank[t][s] = (linalg::rank(&both, p) - b_rank) as i64;
            }
        }
        let r = |t: i64, s: i64| -> i64 {
            if s < 0 || t >= m as i64 || s > t {
                0
            } else {
                rank[t as usize][s as usize]
            }
        };
        for b in -1..m as i64 - 1 {
            for d in b + 1..m as i64 {
                let mult = r(d, b + 1) - r(d + 1, b + 1) - r(d, b) + r(d + 1, b);
                assert!(mult >= 0, "negative multiplicity");
                let birth = crit[(b + 1) as usize];
                let death = if d + 1 < m as i64 { crit[(d + 1) as usize] } else { f64::INFINITY };
                for _ in 0..mult {
                    entries.push(DiagramEntry { dim: q, birth, death });
                }
            }
        }
    }
    PersistenceDiagram::new(p, entries)
}

/// Closest valid parent by exhaustive search: `y` accepts `x` if `y` is the
/// root or `d(x, y) <= d(y, parent y) / 2`; ties go to the lowest index.
pub fn brute_find_parent(oracle: &impl DistanceOracle, parents: &[Option<usize>], x: usize) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for (y, parent) in parents.iter().enumerate() {
        let d = oracle.dist(x, y);
        let ok = match parent {
            None => true,
            Some(py) => d <= oracle.dist(y, *py) / 2.0,
        };
        if ok && d < best.1 {
            best = (y, d);
        }
    }
    best
}

/// Ranks `r^{t,s}` of composed maps of a module given by its maps
/// (`maps[c]` is `dims[c+1] x dims[c]`).
pub fn module_ranks(dims: &[usize], maps: &[Vec<Vec<u32>>], p: u32) -> Vec<Vec<usize>> {
    let len = dims.len();
    let mut out = vec![vec![0; len]; len];
    for s in 0..len {
        let mut acc = linalg::identity(dims[s]);
        out[s][s] = dims[s];
        for t in s + 1..len {
            acc = linalg::mat_mul(&maps[t - 1], &acc, dims[t - 1], dims[s], p);
            out[t][s] = if dims[s] == 0 { 0 } else { linalg::rank(&acc, p) };
        }
    }
    out
}

pub fn same_diagram(a: &PersistenceDiagram, b: &PersistenceDiagram, tol: f64) -> bool {
    a.entries().len() == b.entries().len()
        && a.entries().iter().zip(b.entries()).all(|(x, y)| {
            x.dim == y.dim
                && (x.birth - y.birth).abs() <= tol
                && (x.death == y.death || (x.death - y.death).abs() <= tol)
        })
}
