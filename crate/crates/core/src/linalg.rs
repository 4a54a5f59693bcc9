//! Dense exact matrices and the RREF kernel behind every rank, kernel and
//! solve in the crate.
//!
//! Matrices act on column vectors: column `j` holds the image of the `j`-th
//! basis vector.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: Field, len: usize) -> Vector {
    vec![field.zero(); len]
}

pub fn basis_vector(field: Field, len: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, len);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_into(acc: &mut [Scalar], v: &[Scalar]) {
    debug_assert_eq!(acc.len(), v.len());
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += b;
        }
    }
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    debug_assert_eq!(acc.len(), v.len());
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += &(c * b);
        }
    }
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}[", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn scalar(field: Field, n: usize, c: &Scalar) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal(field: Field, diag: &[i64]) -> Matrix {
        let mut m = Matrix::zeros(field, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, field.int(*d));
        }
        m
    }

    pub fn from_entries(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::shape(alloc::format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { field, rows, cols, entries })
    }

    /// Row-major integer literal; handy for fixtures and tests.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged matrix literal");
                row.iter().map(|x| field.int(*x))
            })
            .collect();
        Matrix { field, rows: r, cols: c, entries }
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.entries)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// `self · v`
    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector shape");
        let mut out = zero_vector(self.field, self.rows);
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let e = self.get(r, c);
                if !e.is_zero() {
                    *o += &(e * x);
                }
            }
        }
        out
    }

    pub fn try_apply(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::shape(alloc::format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.apply(v))
    }

    /// `self · rhs`
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| c * x).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-self.field.one())
    }

    /// Block-diagonal `[[self, 0], [0, other]]`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Stacks `[self; lower]` vertically.
    pub fn vstack(&self, lower: &Matrix) -> Matrix {
        assert_eq!(self.cols, lower.cols, "vstack shape");
        let mut entries = self.entries.clone();
        entries.extend(lower.entries.iter().cloned());
        Matrix { field: self.field, rows: self.rows + lower.rows, cols: self.cols, entries }
    }

    /// `[self | right]`
    pub fn hstack(&self, right: &Matrix) -> Matrix {
        assert_eq!(self.rows, right.rows, "hstack shape");
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + right.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..right.cols {
                m.set(r, self.cols + c, right.get(r, c).clone());
            }
        }
        m
    }

    /// Reduced row echelon form with pivots chosen left to right, first
    /// nonzero row from the top.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let pv = m.get(row, c);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&factor * pv);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Rank and the canonical RREF kernel basis: one vector per free column,
    /// in increasing column order, with a 1 in that free position.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vector>) {
        let Echelon { reduced, pivots } = self.rref();
        let mut kernel = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vector(self.field, self.cols);
            v[free] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -reduced.get(r, free);
            }
            kernel.push(v);
        }
        (pivots.len(), kernel)
    }

    pub fn kernel(&self) -> Vec<Vector> {
        self.rank_and_kernel().1
    }

    /// A particular solution of `self · x = b` with all free variables set
    /// to zero, or `None` when `b` is outside the image.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::shape(alloc::format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = self.hstack(&Matrix::from_columns(self.field, self.rows, &[b.to_vec()]));
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = zero_vector(self.field, self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = reduced.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let Echelon { reduced, pivots } = self.hstack(&Matrix::identity(self.field, n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, reduced.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    /// RREF basis of the column space (as row vectors of the transpose).
    pub fn image_basis(&self) -> Vec<Vector> {
        let Echelon { reduced, pivots } = self.transpose().rref();
        (0..pivots.len()).map(|r| reduced.row(r).to_vec()).collect()
    }
}

/// Incrementally maintained echelon basis of a subspace; used to pick
/// canonical complements and to test membership.
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    field: Field,
    dim: usize,
    /// `(pivot column, row)` pairs; each row is 1 at its pivot and zero at
    /// every other stored pivot.
    rows: Vec<(usize, Vector)>,
}

impl EchelonSpan {
    pub fn new(field: Field, dim: usize) -> EchelonSpan {
        EchelonSpan { field, dim, rows: Vec::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.dim, "span dimension");
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            let c = w[*p].clone();
            if !c.is_zero() {
                axpy(&mut w, &-c, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Adds `v` to the span; returns the normalized residue when it was new.
    pub fn insert(&mut self, v: &[Scalar]) -> Option<Vector> {
        let mut w = self.reduce(v);
        let p = w.iter().position(|x| !x.is_zero())?;
        let inv = w[p].inv().expect("nonzero");
        w = scale_vector(&inv, &w);
        for (_, row) in self.rows.iter_mut() {
            let c = row[p].clone();
            if !c.is_zero() {
                axpy(row, &-c, &w);
            }
        }
        self.rows.push((p, w.clone()));
        Some(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn identity_has_full_rank() {
        let (rank, ker) = Matrix::identity(q(), 3).rank_and_kernel();
        assert_eq!(rank, 3);
        assert!(ker.is_empty());
    }

    #[test]
    fn zero_map_kernel_is_standard_basis() {
        let (rank, ker) = Matrix::zeros(q(), 2, 4).rank_and_kernel();
        assert_eq!(rank, 0);
        let expected: Vec<Vector> = (0..4).map(|i| basis_vector(q(), 4, i)).collect();
        assert_eq!(ker, expected);
    }

    #[test]
    fn rank_one_kernel_by_hand() {
        // [[1,2],[2,4]] reduces to [[1,2],[0,0]]; the free column gives (-2, 1).
        let m = Matrix::from_ints(q(), &[&[1, 2], &[2, 4]]);
        let (rank, ker) = m.rank_and_kernel();
        assert_eq!(rank, 1);
        assert_eq!(ker, vec![vec![q().int(-2), q().int(1)]]);
    }

    #[test]
    fn solve_cases() {
        let b = vec![q().int(3), q().int(-1)];
        assert_eq!(Matrix::identity(q(), 2).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Matrix::zeros(q(), 2, 2).solve(&b).unwrap(), None);
        let row = Matrix::from_ints(q(), &[&[1, 1]]);
        assert_eq!(row.solve(&[q().int(3)]).unwrap(), Some(vec![q().int(3), q().int(0)]));
        assert!(matches!(row.solve(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let m = Matrix::zeros(q(), 0, 0);
        assert_eq!(m.rank_and_kernel(), (0, vec![]));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_ints(q(), &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(q(), 2));
        assert!(Matrix::from_ints(q(), &[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    fn f5_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0i64..5, r * c).prop_map(move |xs| {
                let f = Field::Prime(5);
                Matrix::from_entries(f, r, c, xs.into_iter().map(|x| f.int(x)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn rank_nullity_over_f5(m in f5_matrix()) {
            let (rank, ker) = m.rank_and_kernel();
            prop_assert_eq!(rank + ker.len(), m.cols());
            for v in &ker {
                prop_assert!(is_zero_vector(&m.apply(v)));
            }
        }

        #[test]
        fn solve_is_sound_and_complete(m in f5_matrix(), seed in proptest::collection::vec(0i64..5, 6)) {
            let f = Field::Prime(5);
            let b: Vector = seed.iter().take(m.rows()).map(|x| f.int(*x)).chain(core::iter::repeat(f.zero())).take(m.rows()).collect();
            match m.solve(&b).unwrap() {
                Some(x) => prop_assert_eq!(m.apply(&x), b),
                None => {
                    let aug = m.hstack(&Matrix::from_columns(f, m.rows(), &[b]));
                    prop_assert!(aug.rank() > m.rank());
                }
            }
        }
    }
}
