//! Exact rational scalars and dense/sparse linear algebra.
//!
//! All coordinates in the crate are [`Rat`] values (arbitrary-precision
//! rationals, always in lowest terms with positive denominator). Rank and
//! kernel computations run a fraction-free row echelon over big integers:
//! rows are content-stripped after every combination step, which keeps
//! entries at the size of minors, and rows whose leading column differs are
//! never touched, so near-triangular inputs eliminate in linear time.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;

/// Exact rational scalar for every coordinate in the system.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratq(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses "p/q" or "p".
pub fn parse_rat(s: &str) -> Result<Rat, CoreError> {
    let s = s.trim();
    let mk_err = || CoreError::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| mk_err())?;
            let d: BigInt = d.trim().parse().map_err(|_| mk_err())?;
            if d.is_zero() {
                return Err(mk_err());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| mk_err())?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// Canonical display: "p/q", or "p" when the denominator is one.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Smallest integer >= r.
pub fn rat_ceil(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

/// Largest integer <= r.
pub fn rat_floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

fn strip_content(row: &mut Vec<(usize, BigInt)>) {
    row.retain(|(_, v)| !v.is_zero());
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Sparse merge r' = a*r - b*p over matching column indices.
fn combine(
    a: &BigInt,
    r: &[(usize, BigInt)],
    b: &BigInt,
    p: &[(usize, BigInt)],
) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = p.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, a * &r[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(b * &p[j].1)));
            j += 1;
        } else {
            let v = a * &r[i].1 - b * &p[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form keyed by leading column index.
///
/// Rows are inserted one at a time; a row colliding with an existing pivot
/// is reduced against it (fraction-free cross-multiplication, then content
/// strip) until its leading index is fresh or it vanishes.
pub struct Echelon {
    cols: usize,
    rows: BTreeMap<usize, Vec<(usize, BigInt)>>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn insert_int(&mut self, mut row: Vec<(usize, BigInt)>) {
        loop {
            strip_content(&mut row);
            let Some(&(lead, ref lv)) = row.first() else {
                return;
            };
            debug_assert!(lead < self.cols);
            match self.rows.get(&lead) {
                None => {
                    let lv_neg = lv.is_negative();
                    if lv_neg {
                        for (_, v) in row.iter_mut() {
                            *v = -std::mem::take(v);
                        }
                    }
                    self.rows.insert(lead, row);
                    return;
                }
                Some(pivot) => {
                    let a = pivot[0].1.clone();
                    let b = row[0].1.clone();
                    row = combine(&a, &row, &b, pivot);
                }
            }
        }
    }

    /// Inserts a dense rational row (denominators cleared on ingest).
    pub fn insert_rat_row(&mut self, row: &[Rat]) {
        self.insert_sparse(
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        );
    }

    /// Inserts a sparse rational row (entries sorted by column index).
    pub fn insert_sparse(&mut self, row: Vec<(usize, Rat)>) {
        if row.is_empty() {
            return;
        }
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        let mut lcm = BigInt::one();
        for (_, v) in &row {
            lcm = lcm.lcm(v.denom());
        }
        let int_row = row
            .into_iter()
            .map(|(i, v)| (i, v.numer() * (&lcm / v.denom())))
            .collect();
        self.insert_int(int_row);
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot (leading) column indices in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Basis of the right kernel; each vector v satisfies row . v = 0 for
    /// every inserted row. Count equals cols - rank.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.rows.contains_key(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            // Back-substitute pivot rows from the largest leading index down.
            for (&lead, row) in self.rows.iter().rev() {
                if lead > f {
                    continue;
                }
                let mut acc = Rat::zero();
                for (c, coef) in row.iter().skip(1) {
                    if !v[*c].is_zero() {
                        acc += Rat::from_integer(coef.clone()) * &v[*c];
                    }
                }
                if !acc.is_zero() {
                    v[lead] = -acc / Rat::from_integer(row[0].1.clone());
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Immutable dense matrix over [`Rat`]; operations return fresh values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for r in 0..self.rows {
            ech.insert_rat_row(self.row(r));
        }
        ech.rank()
    }

    /// Basis of the right kernel: every returned v satisfies self . v = 0.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut ech = Echelon::new(self.cols);
        for r in 0..self.rows {
            ech.insert_rat_row(self.row(r));
        }
        ech.kernel_basis()
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |acc, x| acc + x)
            })
            .collect()
    }
}

/// Dot product of a sparse row against a dense vector.
pub fn sparse_dot(row: &[(usize, Rat)], dense: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (c, v) in row {
        if !dense[*c].is_zero() {
            acc += v * &dense[*c];
        }
    }
    acc
}
