//! Dense matrices and sparse linear systems over a [`FieldCtx`].

use std::collections::BTreeMap;

use crate::coeffs::{Elem, FieldCtx};
use crate::poly::Field;

/// A dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn scalar(ctx: &FieldCtx, n: usize, c: &Elem) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<Elem>>, cols: usize) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self, ctx: &FieldCtx) -> bool {
        self.data.iter().all(|x| ctx.is_zero(x))
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ctx.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ctx.is_zero(b) {
                        continue;
                    }
                    let v = ctx.add(out.get(i, j), &ctx.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(ctx.zero(), |acc, (a, b)| ctx.add(&acc, &ctx.mul(a, b))))
            .collect()
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ctx.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ctx.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, ctx: &FieldCtx, c: &Elem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| ctx.mul(a, c)).collect() }
    }

    /// Multiplies row `i` by `d[i]` (left multiplication by a diagonal).
    pub fn scale_rows(&self, ctx: &FieldCtx, d: &[Elem]) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, ctx.mul(self.get(i, j), &d[i]));
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, ctx: &FieldCtx) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !ctx.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = ctx.inv(m.get(r, c)).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = ctx.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || ctx.is_zero(m.get(i, c)) {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = ctx.sub(m.get(i, j), &ctx.mul(&f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        self.rref(ctx).1.len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self, ctx: &FieldCtx) -> Vec<Vec<Elem>> {
        let (r, pivots) = self.rref(ctx);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![ctx.zero(); self.cols];
                v[f] = ctx.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = ctx.neg(r.get(row, f));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, ctx.one());
        }
        let (r, pivots) = aug.rref(ctx);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self, ctx: &FieldCtx) -> bool {
        self.rows == self.cols && self.rank(ctx) == self.rows
    }
}

/// Basis of the row space of `vectors` in reduced echelon form.
pub fn span_basis(ctx: &FieldCtx, vectors: &[Vec<Elem>], dim: usize) -> Vec<Vec<Elem>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec(), dim).expect("uniform vector length");
    let (r, pivots) = m.rref(ctx);
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// A sparse linear equation `sum coeffs[j] * x_j = rhs`.
pub type SparseRow = BTreeMap<usize, Elem>;

/// An incrementally reduced linear system over a field.
///
/// Equations are added one at a time; the first inconsistent equation is
/// reported to the caller so conflicts can be located precisely.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    ctx: FieldCtx,
    nvars: usize,
    /// pivot column -> (row with coefficient 1 at pivot, rhs). Kept fully
    /// reduced: no row mentions another row's pivot.
    pivots: BTreeMap<usize, (SparseRow, Elem)>,
}

/// Solution set of a consistent [`LinearSystem`].
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Vec<Elem>,
    pub homogeneous: Vec<Vec<Elem>>,
    pub free_vars: Vec<usize>,
}

impl LinearSystem {
    pub fn new(ctx: &FieldCtx, nvars: usize) -> Self {
        LinearSystem { ctx: ctx.clone(), nvars, pivots: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn axpy(&self, row: &mut SparseRow, rhs: &mut Elem, f: &Elem, other: &SparseRow, other_rhs: &Elem) {
        let ctx = &self.ctx;
        for (&j, c) in other {
            let v = ctx.sub(row.get(&j).unwrap_or(&ctx.zero()), &ctx.mul(f, c));
            if ctx.is_zero(&v) {
                row.remove(&j);
            } else {
                row.insert(j, v);
            }
        }
        *rhs = ctx.sub(rhs, &ctx.mul(f, other_rhs));
    }

    /// Adds an equation. Returns `false` (leaving the system unchanged) if it
    /// contradicts the equations already present.
    pub fn add(&mut self, row: SparseRow, rhs: Elem) -> bool {
        let ctx = self.ctx.clone();
        let mut row: SparseRow = row.into_iter().filter(|(_, c)| !ctx.is_zero(c)).collect();
        let mut rhs = rhs;
        let hits: Vec<usize> = row.keys().filter(|j| self.pivots.contains_key(j)).copied().collect();
        for j in hits {
            let Some(f) = row.get(&j).cloned() else { continue };
            let (prow, prhs) = &self.pivots[&j];
            let (prow, prhs) = (prow.clone(), prhs.clone());
            self.axpy(&mut row, &mut rhs, &f, &prow, &prhs);
        }
        let Some((&pc, lead)) = row.iter().next() else {
            return ctx.is_zero(&rhs);
        };
        let inv = ctx.inv(lead).expect("nonzero");
        let row: SparseRow = row.iter().map(|(&j, c)| (j, ctx.mul(c, &inv))).collect();
        let rhs = ctx.mul(&rhs, &inv);
        let keys: Vec<usize> = self.pivots.keys().copied().collect();
        for k in keys {
            let f = self.pivots[&k].0.get(&pc).cloned();
            if let Some(f) = f {
                let (mut r, mut b) = self.pivots.remove(&k).unwrap();
                self.axpy(&mut r, &mut b, &f, &row, &rhs);
                self.pivots.insert(k, (r, b));
            }
        }
        self.pivots.insert(pc, (row, rhs));
        true
    }

    /// Would `row = rhs` be consistent, without adding it.
    pub fn is_consistent_with(&self, row: &SparseRow, rhs: &Elem) -> bool {
        let mut copy = self.clone();
        copy.add(row.clone(), rhs.clone())
    }

    pub fn solve(&self) -> Solution {
        let ctx = &self.ctx;
        let free_vars: Vec<usize> = (0..self.nvars).filter(|j| !self.pivots.contains_key(j)).collect();
        let mut particular = vec![ctx.zero(); self.nvars];
        for (&pc, (_, rhs)) in &self.pivots {
            particular[pc] = rhs.clone();
        }
        let homogeneous = free_vars
            .iter()
            .map(|&f| {
                let mut v = vec![ctx.zero(); self.nvars];
                v[f] = ctx.one();
                for (&pc, (row, _)) in &self.pivots {
                    if let Some(c) = row.get(&f) {
                        v[pc] = ctx.neg(c);
                    }
                }
                v
            })
            .collect();
        Solution { particular, homogeneous, free_vars }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::FieldSpec;
    use num_rational::BigRational;

    fn qq() -> FieldCtx {
        FieldCtx::new(FieldSpec::Rational { q: BigRational::from_integer(2.into()) }).unwrap()
    }

    fn m(ctx: &FieldCtx, rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| ctx.from_int(x)).collect()).collect(), cols).unwrap()
    }

    #[test]
    fn inverse_roundtrip() {
        let f = qq();
        let a = m(&f, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&f, &inv), Matrix::identity(&f, 2));
        assert!(m(&f, &[&[1, 2], &[2, 4]]).inverse(&f).is_none());
    }

    #[test]
    fn nullspace_annihilates() {
        let f = qq();
        let a = m(&f, &[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace(&f);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.apply(&f, &v).iter().all(|x| f.is_zero(x)));
        }
    }

    #[test]
    fn system_detects_conflict() {
        let f = qq();
        let mut s = LinearSystem::new(&f, 2);
        let row = |a: i64, b: i64| -> SparseRow { [(0, f.from_int(a)), (1, f.from_int(b))].into_iter().collect() };
        assert!(s.add(row(1, 1), f.from_int(2)));
        assert!(s.add(row(2, 2), f.from_int(4)));
        assert!(!s.add(row(1, 1), f.from_int(3)));
        let sol = s.solve();
        assert_eq!(sol.homogeneous.len(), 1);
        assert_eq!(f.add(&sol.particular[0], &sol.particular[1]), f.from_int(2));
    }

    #[test]
    fn system_unique_solution() {
        let f = qq();
        let mut s = LinearSystem::new(&f, 2);
        assert!(s.add([(0, f.from_int(1)), (1, f.from_int(-1))].into_iter().collect(), f.from_int(1)));
        assert!(s.add([(1, f.from_int(3))].into_iter().collect(), f.from_int(6)));
        let sol = s.solve();
        assert!(sol.homogeneous.is_empty());
        assert_eq!(sol.particular, vec![f.from_int(3), f.from_int(2)]);
    }
}
