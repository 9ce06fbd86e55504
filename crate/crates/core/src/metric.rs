//! Distance oracles over finite point sets.
//!
//! An oracle is an immutable, symmetric, finite distance function on the
//! indices `0..len()`. The triangle inequality is not assumed here; the cover
//! tree only relies on it for its density guarantee.

use crate::error::{Error, Result};

pub trait DistanceOracle: Sync {
    fn len(&self) -> usize;

    fn dist(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: DistanceOracle + ?Sized> DistanceOracle for &T {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        (**self).dist(i, j)
    }
}

/// Euclidean distance between rows of a coordinate table.
#[derive(Clone, Debug)]
pub struct EuclideanOracle {
    n: usize,
    dim: usize,
    coords: Vec<f64>,
}

impl EuclideanOracle {
    pub fn new<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::input("no points"));
        };
        let dim = first.as_ref().len();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (k, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::input(format!(
                    "point {k} has dimension {} but point 0 has dimension {dim}",
                    p.len()
                )));
            }
            if let Some(x) = p.iter().find(|x| !x.is_finite()) {
                return Err(Error::input(format!("point {k} has non-finite coordinate {x}")));
            }
            coords.extend_from_slice(p);
        }
        Ok(EuclideanOracle {
            n: points.len(),
            dim,
            coords,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }
}

impl DistanceOracle for EuclideanOracle {
    fn len(&self) -> usize {
        self.n
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        // Accumulate in a fixed (lower, higher) order so dist(i,j) == dist(j,i) bitwise.
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.point(a)
            .iter()
            .zip(self.point(b))
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }
}

/// Geodesic distance on the circle R/Z; angles are given as fractions of a turn.
#[derive(Clone, Debug)]
pub struct CircleOracle {
    angles: Vec<f64>,
}

impl CircleOracle {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::input("no points"));
        }
        if let Some((k, a)) = angles
            .iter()
            .enumerate()
            .find(|(_, a)| !(0.0..1.0).contains(*a))
        {
            return Err(Error::input(format!("angle {k} = {a} is outside [0, 1)")));
        }
        Ok(CircleOracle { angles })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

impl DistanceOracle for CircleOracle {
    fn len(&self) -> usize {
        self.angles.len()
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        let delta = (self.angles[i] - self.angles[j]).abs();
        delta.min(1.0 - delta)
    }
}

/// Explicit distances stored as a row-major lower triangle:
/// `d(1,0), d(2,0), d(2,1), d(3,0), ...`.
#[derive(Clone, Debug)]
pub struct MatrixOracle {
    n: usize,
    lower: Vec<f64>,
}

impl MatrixOracle {
    pub fn from_lower_triangle(lower: Vec<f64>) -> Result<Self> {
        let n = triangular_side(lower.len()).ok_or_else(|| {
            Error::input(format!(
                "{} entries is not a triangular number n(n-1)/2",
                lower.len()
            ))
        })?;
        if let Some((k, x)) = lower.iter().enumerate().find(|(_, x)| !(**x >= 0.0) || !x.is_finite()) {
            return Err(Error::input(format!(
                "entry {k} = {x} is not a finite nonnegative distance"
            )));
        }
        Ok(MatrixOracle { n, lower })
    }

    /// Materializes any oracle as an explicit matrix.
    pub fn from_oracle(oracle: &impl DistanceOracle) -> Self {
        let n = oracle.len();
        let mut lower = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 1..n {
            for j in 0..i {
                lower.push(oracle.dist(i, j));
            }
        }
        MatrixOracle { n, lower }
    }

    pub fn lower_triangle(&self) -> &[f64] {
        &self.lower
    }
}

impl DistanceOracle for MatrixOracle {
    fn len(&self) -> usize {
        self.n
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        self.lower[hi * (hi - 1) / 2 + lo]
    }
}

/// Side length `n` with `n(n-1)/2 == len`, if any.
fn triangular_side(len: usize) -> Option<usize> {
    let mut n = ((2.0 * len as f64).sqrt() as usize).max(1);
    while n * (n - 1) / 2 < len {
        n += 1;
    }
    while n > 1 && (n - 1) * (n - 2) / 2 >= len {
        n -= 1;
    }
    (n * (n - 1) / 2 == len).then_some(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn euclidean_examples() {
        let o = EuclideanOracle::new(&[[0.0, 0.0], [3.0, 4.0]]).unwrap();
        assert_eq!(o.dist(0, 1), 5.0);
        let o = EuclideanOracle::new(&[[1.0, 1.0]]).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o.dist(0, 0), 0.0);
        let o = EuclideanOracle::new(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(o.dist(1, 2), 2f64.sqrt());
    }

    #[test]
    fn euclidean_rejects_mixed_dimensions() {
        let pts: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0]];
        assert!(matches!(EuclideanOracle::new(&pts), Err(Error::InvalidInput(_))));
        let empty: Vec<Vec<f64>> = vec![];
        assert!(EuclideanOracle::new(&empty).is_err());
    }

    #[test]
    fn circle_examples() {
        let o = CircleOracle::new(vec![0.0, 0.5]).unwrap();
        assert_eq!(o.dist(0, 1), 0.5);
        let o = CircleOracle::new(vec![0.0, 0.9]).unwrap();
        assert!((o.dist(0, 1) - 0.1).abs() < 1e-15);
        let o = CircleOracle::new(vec![0.25, 0.25]).unwrap();
        assert_eq!(o.dist(0, 1), 0.0);
        assert!(CircleOracle::new(vec![1.0]).is_err());
        assert!(CircleOracle::new(vec![-0.1]).is_err());
    }

    #[test]
    fn matrix_examples() {
        let o = MatrixOracle::from_lower_triangle(vec![]).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o.dist(0, 0), 0.0);
        let o = MatrixOracle::from_lower_triangle(vec![2.0]).unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(o.dist(0, 1), 2.0);
        let o = MatrixOracle::from_lower_triangle(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(o.len(), 3);
        assert_eq!(o.dist(2, 1), 3.0);
        assert_eq!(o.dist(1, 2), 3.0);
        assert_eq!(o.dist(0, 2), 2.0);
    }

    #[test]
    fn matrix_rejects_bad_input() {
        assert!(MatrixOracle::from_lower_triangle(vec![1.0, 2.0]).is_err());
        assert!(MatrixOracle::from_lower_triangle(vec![1.0, -2.0, 3.0]).is_err());
        assert!(MatrixOracle::from_lower_triangle(vec![f64::NAN]).is_err());
    }

    #[test]
    fn triangular_sides() {
        for n in 1..50 {
            assert_eq!(triangular_side(n * (n - 1) / 2), Some(n));
        }
        assert_eq!(triangular_side(2), None);
        assert_eq!(triangular_side(4), None);
    }

    fn cloud() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..4).prop_flat_map(|dim| {
            prop::collection::vec(prop::collection::vec(-10.0f64..10.0, dim), 1..20)
        })
    }

    proptest! {
        #[test]
        fn oracles_are_symmetric_with_zero_diagonal(pts in cloud(), seed in any::<u64>()) {
            let e = EuclideanOracle::new(&pts).unwrap();
            let m = MatrixOracle::from_oracle(&e);
            let angles: Vec<f64> = pts.iter().map(|p| p[0].rem_euclid(1.0)).filter(|a| *a < 1.0).collect();
            let n = e.len();
            let (i, j) = ((seed % n as u64) as usize, ((seed >> 32) % n as u64) as usize);
            for o in [&e as &dyn DistanceOracle, &m] {
                prop_assert_eq!(o.dist(i, j), o.dist(j, i));
                prop_assert_eq!(o.dist(i, i), 0.0);
            }
            if !angles.is_empty() {
                let c = CircleOracle::new(angles).unwrap();
                let (i, j) = (i % c.len(), j % c.len());
                prop_assert_eq!(c.dist(i, j), c.dist(j, i));
                prop_assert_eq!(c.dist(i, i), 0.0);
            }
        }

        #[test]
        fn euclidean_triangle_inequality(pts in cloud()) {
            let e = EuclideanOracle::new(&pts).unwrap();
            let n = e.len();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        prop_assert!(e.dist(i, k) <= e.dist(i, j) + e.dist(j, k) + 1e-12);
                    }
                }
            }
        }
    }
}
