use crate::error::{Error, Result};
use crate::field::{EchelonBasis, PrimeField};

type Matrix = Vec<Vec<u32>>;

/// Lifetime `(birth, death]` on the index set `0..len` of a module: the
/// feature is present at indices `birth + 1 ..= death`. `birth == -1` means
/// present from the first index; `death == len - 1` means never killed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub birth: i64,
    pub death: i64,
}

impl Interval {
    pub fn new(birth: i64, death: i64) -> Self {
        Interval { birth, death }
    }

    pub fn contains(&self, c: i64) -> bool {
        self.birth < c && c <= self.death
    }
}

/// Sequence of spaces `V(0..len)` over Z/pZ with maps `V(c) -> V(c+1)`.
#[derive(Clone, Debug)]
pub struct ExplicitModule {
    field: PrimeField,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl ExplicitModule {
    /// `maps[c]` is a `dims[c+1] x dims[c]` matrix, given as rows. Entries are
    /// reduced mod p.
    pub fn new(p: u32, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if dims.is_empty() {
            return Err(Error::input("module needs at least one space"));
        }
        if maps.len() + 1 != dims.len() {
            return Err(Error::input(format!(
                "{} spaces need {} maps, got {}",
                dims.len(),
                dims.len() - 1,
                maps.len()
            )));
        }
        let mut reduced = Vec::with_capacity(maps.len());
        for (c, m) in maps.into_iter().enumerate() {
            if m.len() != dims[c + 1] || m.iter().any(|row| row.len() != dims[c]) {
                return Err(Error::input(format!(
                    "map {c} must be {} x {}",
                    dims[c + 1],
                    dims[c]
                )));
            }
            reduced.push(
                m.into_iter()
                    .map(|row| row.into_iter().map(|x| x % p).collect())
                    .collect(),
            );
        }
        Ok(ExplicitModule {
            field,
            dims,
            maps: reduced,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn map(&self, c: usize) -> &Matrix {
        &self.maps[c]
    }

    /// Composite `V(s) -> V(t)` for `s <= t`.
    pub fn compose(&self, t: usize, s: usize) -> Matrix {
        assert!(s <= t && t < self.len());
        let mut acc = self.field.identity(self.dims[s]);
        for c in s..t {
            acc = self.field.mat_mul(&self.maps[c], &acc, self.dims[s]);
        }
        acc
    }

    pub fn apply(&self, c: usize, v: &[u32]) -> Vec<u32> {
        self.field.mat_vec(&self.maps[c], v)
    }

    /// Returns a module with each `V(c)` re-coordinatized by `basis[c]`
    /// (invertible `dims[c] x dims[c]`), i.e. maps become `B(c+1)^-1 φ B(c)`.
    /// `inverses[c]` must be the inverse of `basis[c]`.
    pub fn change_basis(&self, basis: &[Matrix], inverses: &[Matrix]) -> ExplicitModule {
        let maps = (0..self.maps.len())
            .map(|c| {
                let right = self.field.mat_mul(&self.maps[c], &basis[c], self.dims[c]);
                self.field.mat_mul(&inverses[c + 1], &right, self.dims[c])
            })
            .collect();
        ExplicitModule {
            field: self.field,
            dims: self.dims.clone(),
            maps,
        }
    }
}

/// A normal-form generator: `vectors[k]` lives in `V(birth + 1 + k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub interval: Interval,
    pub vectors: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub generators: Vec<Generator>,
}

impl NormalForm {
    /// Intervals with repetition, sorted.
    pub fn intervals(&self) -> Vec<Interval> {
        let mut out: Vec<Interval> = self.generators.iter().map(|g| g.interval).collect();
        out.sort();
        out
    }

    /// `(interval, multiplicity)` pairs, sorted.
    pub fn multiplicities(&self) -> Vec<(Interval, usize)> {
        let mut out: Vec<(Interval, usize)> = Vec::new();
        for iv in self.intervals() {
            match out.last_mut() {
                Some((last, m)) if *last == iv => *m += 1,
                _ => out.push((iv, 1)),
            }
        }
        out
    }
}

/// Sweeps births ascending and, for each birth, deaths ascending; at `(b, d)`
/// extends the current collection in `V(b+1)` by vectors killed on the way to
/// `V(d+1)` and records their forward orbits.
pub fn normal_form(module: &ExplicitModule) -> NormalForm {
    let field = module.field;
    let len = module.len();
    let mut spans: Vec<EchelonBasis> = (0..len).map(|_| EchelonBasis::new(field)).collect();
    let mut generators = Vec::new();

    for start in 0..len {
        let b = start as i64 - 1;
        let dim = module.dims[start];
        // Composite V(start) -> V(d+1), advanced one step per death index.
        let mut forward = field.identity(dim);
        for d in start..len {
            let kernel = if d + 1 < len {
                forward = field.mat_mul(&module.maps[d], &forward, dim);
                field.kernel(&forward, dim)
            } else {
                field.identity(dim)
            };
            for xi in kernel {
                if spans[start].dim() == dim {
                    break;
                }
                if !spans[start].insert(&xi) {
                    continue;
                }
                let mut vectors = vec![xi];
                for c in start + 1..=d {
                    let next = module.apply(c - 1, vectors.last().unwrap());
                    spans[c].insert(&next);
                    vectors.push(next);
                }
                generators.push(Generator {
                    interval: Interval::new(b, d as i64),
                    vectors,
                });
            }
        }
    }
    NormalForm { generators }
}

/// Table of ranks `r^{t,s}` of the composites `V(s) -> V(t)`, `0 <= s <= t < len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    len: usize,
    // ranks[t][s] for s <= t
    ranks: Vec<Vec<usize>>,
}

impl RankTable {
    pub fn zeros(len: usize) -> Self {
        RankTable {
            len,
            ranks: (0..len).map(|t| vec![0; t + 1]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `r^{t,s}`; zero whenever an index lies outside `0..len` or `s > t`.
    pub fn get(&self, t: i64, s: i64) -> usize {
        if s < 0 || s > t || t >= self.len as i64 {
            return 0;
        }
        self.ranks[t as usize][s as usize]
    }

    pub fn set(&mut self, t: usize, s: usize, r: usize) {
        self.ranks[t][s] = r;
    }

    /// Ranks computed directly from composed maps.
    pub fn of_module(module: &ExplicitModule) -> Self {
        let mut table = RankTable::zeros(module.len());
        for t in 0..module.len() {
            for s in 0..=t {
                let m = module.compose(t, s);
                table.set(t, s, module.field.rank(&m));
            }
        }
        table
    }
}

/// `r^{t,s}` = number of intervals with `b < s <= t <= d`.
pub fn ranks_from_barcode(intervals: &[Interval], len: usize) -> Result<RankTable> {
    let mut table = RankTable::zeros(len);
    for iv in intervals {
        if iv.birth < -1 || iv.birth >= iv.death || iv.death >= len as i64 {
            return Err(Error::input(format!(
                "interval ({}, {}] does not fit indices 0..{len}",
                iv.birth, iv.death
            )));
        }
        let first = (iv.birth + 1) as usize;
        let last = iv.death as usize;
        for t in first..=last {
            for s in first..=t {
                table.ranks[t][s] += 1;
            }
        }
    }
    Ok(table)
}

/// Inclusion–exclusion `N_{d,b} = r^{d,b+1} − r^{d+1,b+1} − r^{d,b} + r^{d+1,b}`.
pub fn barcode_from_ranks(table: &RankTable) -> Result<Vec<Interval>> {
    let len = table.len() as i64;
    let mut out = Vec::new();
    for b in -1..len - 1 {
        for d in b + 1..len {
            let n = table.get(d, b + 1) as i64 - table.get(d + 1, b + 1) as i64 - table.get(d, b) as i64
                + table.get(d + 1, b) as i64;
            if n < 0 {
                return Err(Error::input(format!(
                    "inconsistent rank table: multiplicity {n} for ({b}, {d}]"
                )));
            }
            out.extend(std::iter::repeat_n(Interval::new(b, d), n as usize));
        }
    }
    Ok(out)
}
