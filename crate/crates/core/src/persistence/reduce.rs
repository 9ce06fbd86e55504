use std::collections::HashMap;

use super::{DiagramEntry, Filtration, PersistenceDiagram};
use crate::error::Result;
use crate::field::PrimeField;

// Sparse column: (row, nonzero coefficient), rows ascending.
type Column = Vec<(usize, u32)>;

fn boundary(filtration: &Filtration, index: &HashMap<&[usize], usize>, k: usize, field: &PrimeField) -> Column {
    let vertices = &filtration.simplices()[k].vertices;
    if vertices.len() < 2 {
        return Vec::new();
    }
    let mut face = Vec::with_capacity(vertices.len() - 1);
    let mut col: Column = (0..vertices.len())
        .map(|drop| {
            face.clear();
            face.extend(vertices.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v));
            let sign = if drop % 2 == 0 { 1 } else { -1 };
            (index[face.as_slice()], field.from_i64(sign))
        })
        .collect();
    col.sort_unstable_by_key(|&(row, _)| row);
    col
}

/// `target -= factor * source`, dropping zeros.
fn eliminate(target: &Column, source: &Column, factor: u32, field: &PrimeField) -> Column {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < source.len() {
        let next = match (target.get(a), source.get(b)) {
            (Some(&(ra, ca)), Some(&(rb, cb))) if ra == rb => {
                a += 1;
                b += 1;
                (ra, field.sub(ca, field.mul(factor, cb)))
            }
            (Some(&(ra, ca)), Some(&(rb, _))) if ra < rb => {
                a += 1;
                (ra, ca)
            }
            (Some(&(ra, ca)), None) => {
                a += 1;
                (ra, ca)
            }
            (_, Some(&(rb, cb))) => {
                b += 1;
                (rb, field.neg(field.mul(factor, cb)))
            }
            (None, None) => unreachable!(),
        };
        if next.1 != 0 {
            out.push(next);
        }
    }
    out
}

/// Standard left-to-right column reduction of the boundary matrix over Z/pZ.
///
/// Pairs with equal birth and death are dropped. Essential classes are
/// reported for dimensions below the filtration's simplex dimension cap (and
/// always for dimension 0), since top-dimensional cycles have nothing that
/// could kill them.
pub fn reduce(filtration: &Filtration, p: u32) -> Result<PersistenceDiagram> {
    let field = PrimeField::new(p)?;
    let simplices = filtration.simplices();
    let index: HashMap<&[usize], usize> = simplices
        .iter()
        .enumerate()
        .map(|(k, s)| (s.vertices.as_slice(), k))
        .collect();

    let mut reduced: Vec<Column> = Vec::with_capacity(simplices.len());
    let mut pivot_owner: Vec<Option<usize>> = vec![None; simplices.len()];
    let mut entries = Vec::new();
    for j in 0..simplices.len() {
        let mut col = boundary(filtration, &index, j, &field);
        while let Some(&(low, coeff)) = col.last() {
            let Some(k) = pivot_owner[low] else { break };
            let (_, pivot_coeff) = *reduced[k].last().expect("pivot column is nonzero");
            let factor = field.mul(coeff, field.inv(pivot_coeff));
            col = eliminate(&col, &reduced[k], factor, &field);
        }
        if let Some(&(low, _)) = col.last() {
            pivot_owner[low] = Some(j);
            let birth = simplices[low].diameter;
            let death = simplices[j].diameter;
            if birth < death {
                entries.push(DiagramEntry {
                    dim: simplices[low].dim(),
                    birth,
                    death,
                });
            }
        }
        reduced.push(col);
    }

    let essential_dims = filtration.dim_cap().max(1);
    for (k, s) in simplices.iter().enumerate() {
        if reduced[k].is_empty() && pivot_owner[k].is_none() && s.dim() < essential_dims {
            entries.push(DiagramEntry {
                dim: s.dim(),
                birth: s.diameter,
                death: f64::INFINITY,
            });
        }
    }
    Ok(PersistenceDiagram::new(p, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{CircleOracle, EuclideanOracle};
    use crate::persistence::{build_filtration, FiltrationOptions};
    use crate::sparsify::SparseLengthMatrix;

    fn diagram(oracle: &impl crate::metric::DistanceOracle, dim_cap: usize, p: u32) -> PersistenceDiagram {
        let f = build_filtration(&SparseLengthMatrix::full(oracle), &FiltrationOptions::new(dim_cap)).unwrap();
        reduce(&f, p).unwrap()
    }

    fn entries(d: &PersistenceDiagram, dim: usize) -> Vec<(f64, f64)> {
        d.dimension(dim).map(|e| (e.birth, e.death)).collect()
    }

    #[test]
    fn unit_square() {
        let o = EuclideanOracle::new(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        for p in [2, 3] {
            let d = diagram(&o, 2, p);
            let inf = f64::INFINITY;
            assert_eq!(entries(&d, 0), vec![(0.0, 1.0), (0.0, 1.0), (0.0, 1.0), (0.0, inf)]);
            assert_eq!(entries(&d, 1), vec![(1.0, 2f64.sqrt())]);
            assert_eq!(d.dimension(2).count(), 0);
        }
    }

    #[test]
    fn circle_32() {
        let angles = (0..32).map(|k| k as f64 / 32.0).collect();
        let o = CircleOracle::new(angles).unwrap();
        let d = diagram(&o, 2, 2);
        assert_eq!(entries(&d, 1), vec![(1.0 / 32.0, 11.0 / 32.0)]);
        assert_eq!(d.dimension(0).count(), 32);
    }

    #[test]
    fn single_point() {
        let o = EuclideanOracle::new(&[[0.5]]).unwrap();
        let d = diagram(&o, 1, 2);
        assert_eq!(entries(&d, 0), vec![(0.0, f64::INFINITY)]);
        assert_eq!(d.entries().len(), 1);
    }

    #[test]
    fn rejects_composite_characteristic() {
        let o = EuclideanOracle::new(&[[0.5]]).unwrap();
        let f = build_filtration(&SparseLengthMatrix::full(&o), &FiltrationOptions::new(1)).unwrap();
        assert!(reduce(&f, 4).is_err());
    }
}
