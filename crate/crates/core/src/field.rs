//! Arithmetic and dense linear algebra over the prime field Z/pZ.
//!
//! Everything here is sized for desk-scale problems: vectors are plain
//! `Vec<u32>` with entries in `0..p`, matrices are row-major `Vec<Vec<u32>>`.

use crate::error::{Error, Result};

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u32;
    while (k as u64) * (k as u64) <= p as u64 {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("field characteristic {p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Reduces a signed integer into `0..p`.
    pub fn from_i64(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// Multiplicative inverse by Fermat's little theorem. `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        let mut base = a as u64 % self.p as u64;
        let mut exp = self.p as u64 - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            exp >>= 1;
        }
        acc as u32
    }

    /// `y += c * x`, entrywise.
    pub fn axpy(&self, y: &mut [u32], c: u32, x: &[u32]) {
        if c == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = self.add(*yi, self.mul(c, xi));
        }
    }

    pub fn mat_vec(&self, m: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
        m.iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % self.p as u64)
                    as u32
            })
            .collect()
    }

    /// Product `a * b` where `a` is `r x k` and `b` is `k x c` (`cols_b` = c is
    /// passed explicitly so that empty inner dimensions are well defined).
    pub fn mat_mul(&self, a: &[Vec<u32>], b: &[Vec<u32>], cols_b: usize) -> Vec<Vec<u32>> {
        a.iter()
            .map(|row| {
                let mut out = vec![0u32; cols_b];
                for (k, &aik) in row.iter().enumerate() {
                    self.axpy(&mut out, aik, &b[k]);
                }
                out
            })
            .collect()
    }

    pub fn identity(&self, n: usize) -> Vec<Vec<u32>> {
        (0..n)
            .map(|i| {
                let mut row = vec![0; n];
                row[i] = 1;
                row
            })
            .collect()
    }

    pub fn rank(&self, m: &[Vec<u32>]) -> usize {
        let mut basis = EchelonBasis::new(*self);
        m.iter().filter(|row| basis.insert(row)).count()
    }

    /// Basis of the null space of `m` (`rows x cols`), as vectors of length `cols`.
    pub fn kernel(&self, m: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
        // Reduced row echelon form, then read off one kernel vector per free column.
        let mut rows: Vec<Vec<u32>> = m.to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, sel);
            let inv = self.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let f = self.neg(row[c]);
                    self.axpy(row, f, &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        let mut out = Vec::new();
        for free in (0..cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = self.neg(rows[row][free]);
            }
            out.push(v);
        }
        out
    }
}

/// Incrementally maintained row-echelon basis of a subspace, supporting
/// membership tests and independent insertion.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: PrimeField,
    // (pivot column, normalized row with a 1 at the pivot)
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub fn new(field: PrimeField) -> Self {
        EchelonBasis {
            field,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after eliminating against the current basis.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        for (pc, row) in &self.rows {
            if w[*pc] != 0 {
                let f = self.field.neg(w[*pc]);
                self.field.axpy(&mut w, f, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` if it is independent of the current span; returns whether it was added.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(w[pc]);
        for x in w.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        // Keep existing rows reduced at the new pivot so `reduce` stays single-pass.
        for (_, row) in self.rows.iter_mut() {
            if row[pc] != 0 {
                let f = self.field.neg(row[pc]);
                self.field.axpy(row, f, &w);
            }
        }
        self.rows.push((pc, w));
        true
    }
}
