//! Coordinate tensors of multilinear maps `V_1 × … × V_k → W`.
//!
//! Entries are stored lexicographically over the argument basis indices,
//! with the output coordinate varying fastest: the entry for
//! `(i_1, …, i_k, j)` sits at `((i_1·d_2 + i_2)·d_3 + …)·m + j`.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::linalg::{axpy, zero_vector, Matrix, Vector};
use crate::scalar::{Field, Scalar};

/// Default cap on the number of scalar entries in a single tensor.
pub const DEFAULT_MAX_ENTRIES: usize = 1_000_000;

static MAX_ENTRIES: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_ENTRIES);

pub fn max_entries() -> usize {
    MAX_ENTRIES.load(Ordering::Relaxed)
}

/// Process-wide entry cap; exceeding it is reported as [`Error::TooLarge`].
pub fn set_max_entries(cap: usize) {
    MAX_ENTRIES.store(cap, Ordering::Relaxed);
}

pub(crate) fn check_size(shape: &[usize], cod: usize) -> Result<usize> {
    let mut n: u128 = cod as u128;
    for &d in shape {
        n = n.saturating_mul(d as u128);
    }
    let cap = max_entries();
    if n > cap as u128 {
        return Err(Error::TooLarge { entries: n, cap });
    }
    Ok(n as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiTensor {
    field: Field,
    shape: Vec<usize>,
    cod: usize,
    entries: Vec<Scalar>,
}

impl MultiTensor {
    pub fn zeros(field: Field, shape: &[usize], cod: usize) -> Result<MultiTensor> {
        let n = check_size(shape, cod)?;
        Ok(MultiTensor {
            field,
            shape: shape.to_vec(),
            cod,
            entries: vec![field.zero(); n],
        })
    }

    /// A cochain `A^{⊗k} → M` with `dim A = dom`, `dim M = cod`.
    pub fn cochain(field: Field, arity: usize, dom: usize, cod: usize) -> Result<MultiTensor> {
        MultiTensor::zeros(field, &vec![dom; arity], cod)
    }

    pub fn from_flat(field: Field, shape: &[usize], cod: usize, entries: Vec<Scalar>) -> Result<MultiTensor> {
        let n = check_size(shape, cod)?;
        if entries.len() != n {
            return Err(Error::shape(alloc::format!(
                "{} entries for a tensor with {n} slots",
                entries.len()
            )));
        }
        Ok(MultiTensor { field, shape: shape.to_vec(), cod, entries })
    }

    /// Builds a tensor from its values on basis tuples.
    pub fn from_fn(
        field: Field,
        shape: &[usize],
        cod: usize,
        mut f: impl FnMut(&[usize]) -> Vector,
    ) -> Result<MultiTensor> {
        let mut t = MultiTensor::zeros(field, shape, cod)?;
        for idx in BasisTuples::new(shape) {
            let v = f(&idx);
            debug_assert_eq!(v.len(), cod);
            t.value_mut(&idx).clone_from_slice(&v);
        }
        Ok(t)
    }

    /// Linear map `V → W` as an arity-1 tensor.
    pub fn from_matrix(m: &Matrix) -> MultiTensor {
        let mut t = MultiTensor::zeros(m.field(), &[m.cols()], m.rows()).expect("matrix-sized tensor");
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                t.entries[j * m.rows() + i] = m.get(i, j).clone();
            }
        }
        t
    }

    /// Arity-1 tensor as a matrix.
    pub fn to_matrix(&self) -> Matrix {
        assert_eq!(self.arity(), 1, "to_matrix needs arity 1");
        let cols: Vec<Vector> = (0..self.shape[0]).map(|j| self.value(&[j]).to_vec()).collect();
        Matrix::from_columns(self.field, self.cod, &cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut o = 0;
        for (i, d) in idx.iter().zip(&self.shape) {
            debug_assert!(i < d);
            o = o * d + i;
        }
        o * self.cod
    }

    /// Output vector on a basis tuple.
    pub fn value(&self, idx: &[usize]) -> &[Scalar] {
        let o = self.offset(idx);
        &self.entries[o..o + self.cod]
    }

    pub fn value_mut(&mut self, idx: &[usize]) -> &mut [Scalar] {
        let o = self.offset(idx);
        &mut self.entries[o..o + self.cod]
    }

    /// Multilinear evaluation; checks arity and argument lengths.
    pub fn eval(&self, args: &[&[Scalar]]) -> Result<Vector> {
        if args.len() != self.arity() {
            return Err(Error::shape(alloc::format!(
                "{} arguments for an arity-{} tensor",
                args.len(),
                self.arity()
            )));
        }
        for (k, (a, d)) in args.iter().zip(&self.shape).enumerate() {
            if a.len() != *d {
                return Err(Error::shape(alloc::format!(
                    "argument {k} has length {} but the slot has dimension {d}",
                    a.len()
                )));
            }
        }
        Ok(self.apply(args))
    }

    /// Multilinear evaluation without shape checks (panics on mismatch).
    pub fn apply(&self, args: &[&[Scalar]]) -> Vector {
        let mut out = zero_vector(self.field, self.cod);
        let mut idx = vec![0usize; args.len()];
        self.accumulate(args, 0, &self.field.one(), &mut idx, &mut out);
        out
    }

    fn accumulate(&self, args: &[&[Scalar]], k: usize, coeff: &Scalar, idx: &mut Vec<usize>, out: &mut [Scalar]) {
        if k == args.len() {
            axpy(out, coeff, self.value(idx));
            return;
        }
        for (i, x) in args[k].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            idx[k] = i;
            let c = if x.is_one() { coeff.clone() } else { coeff * x };
            self.accumulate(args, k + 1, &c, idx, out);
        }
    }

    pub fn add(&self, other: &MultiTensor) -> MultiTensor {
        self.assert_same_shape(other);
        MultiTensor {
            field: self.field,
            shape: self.shape.clone(),
            cod: self.cod,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &MultiTensor) -> MultiTensor {
        self.assert_same_shape(other);
        MultiTensor {
            field: self.field,
            shape: self.shape.clone(),
            cod: self.cod,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> MultiTensor {
        MultiTensor {
            field: self.field,
            shape: self.shape.clone(),
            cod: self.cod,
            entries: self.entries.iter().map(|x| c * x).collect(),
        }
    }

    pub fn neg(&self) -> MultiTensor {
        self.scale(&-self.field.one())
    }

    /// `m ∘ self` (post-composition with a linear map on the output).
    pub fn post_compose(&self, m: &Matrix) -> MultiTensor {
        assert_eq!(m.cols(), self.cod, "post-composition shape");
        let mut out = MultiTensor::zeros(self.field, &self.shape, m.rows()).expect("same slot count scale");
        for idx in BasisTuples::new(&self.shape) {
            let v = m.apply(self.value(&idx));
            out.value_mut(&idx).clone_from_slice(&v);
        }
        out
    }

    pub fn same_shape(&self, other: &MultiTensor) -> bool {
        self.shape == other.shape && self.cod == other.cod && self.field == other.field
    }

    fn assert_same_shape(&self, other: &MultiTensor) {
        assert!(self.same_shape(other), "tensor shapes differ");
    }

    pub fn check_shape(&self, shape: &[usize], cod: usize, what: &str) -> Result<()> {
        if self.shape != shape || self.cod != cod {
            return Err(Error::shape(alloc::format!(
                "{what}: expected shape {shape:?}->{cod}, found {:?}->{}",
                self.shape,
                self.cod
            )));
        }
        Ok(())
    }
}

/// Lexicographic iterator over all basis tuples of a shape.
#[derive(Clone, Debug)]
pub struct BasisTuples {
    shape: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl BasisTuples {
    pub fn new(shape: &[usize]) -> BasisTuples {
        let next = if shape.iter().any(|&d| d == 0) {
            None
        } else {
            Some(vec![0; shape.len()])
        };
        BasisTuples { shape: shape.to_vec(), next }
    }

    pub fn uniform(dim: usize, arity: usize) -> BasisTuples {
        BasisTuples::new(&vec![dim; arity])
    }
}

impl Iterator for BasisTuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.shape[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(cur)
    }
}

/// Realizes a linear operator between coordinate spaces as a matrix whose
/// `j`-th column is the image of the `j`-th basis vector.
pub fn flatten_linear_operator(
    field: Field,
    domain_dim: usize,
    codomain_dim: usize,
    mut op: impl FnMut(&[Scalar]) -> Result<Vector>,
) -> Result<Matrix> {
    check_size(&[domain_dim], codomain_dim)?;
    let mut cols = Vec::with_capacity(domain_dim);
    for j in 0..domain_dim {
        let e = crate::linalg::basis_vector(field, domain_dim, j);
        let col = op(&e)?;
        if col.len() != codomain_dim {
            return Err(Error::shape(alloc::format!(
                "operator produced {} coordinates, expected {codomain_dim}",
                col.len()
            )));
        }
        cols.push(col);
    }
    Ok(Matrix::from_columns(field, codomain_dim, &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis_vector;

    #[test]
    fn tuples_are_lexicographic() {
        let all: Vec<Vec<usize>> = BasisTuples::new(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert_eq!(BasisTuples::new(&[]).count(), 1);
        assert_eq!(BasisTuples::new(&[2, 0]).count(), 0);
    }

    #[test]
    fn arity_zero_is_a_vector() {
        let f = Field::Rationals;
        let t = MultiTensor::from_flat(f, &[], 2, vec![f.int(3), f.int(4)]).unwrap();
        assert_eq!(t.eval(&[]).unwrap(), vec![f.int(3), f.int(4)]);
    }

    #[test]
    fn eval_zero_argument_gives_zero() {
        let f = Field::Rationals;
        let t = MultiTensor::from_fn(f, &[2, 2], 2, |i| vec![f.int(i[0] as i64 + 1), f.int(i[1] as i64)]).unwrap();
        let z = zero_vector(f, 2);
        let e = basis_vector(f, 2, 1);
        assert!(crate::linalg::is_zero_vector(&t.eval(&[&z, &e]).unwrap()));
        assert!(t.eval(&[&e]).is_err());
        assert!(t.eval(&[&e, &[f.one()]]).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let f = Field::Prime(5);
        assert!(matches!(
            MultiTensor::cochain(f, 12, 4, 4),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn matrix_round_trip() {
        let f = Field::Rationals;
        let m = Matrix::from_ints(f, &[&[1, 2, 3], &[4, 5, 6]]);
        let t = MultiTensor::from_matrix(&m);
        assert_eq!(t.to_matrix(), m);
        assert_eq!(t.value(&[2]), &[f.int(3), f.int(6)]);
    }

    #[test]
    fn identity_operator_flattens_to_identity() {
        let f = Field::Rationals;
        let m = flatten_linear_operator(f, 4, 4, |v| Ok(v.to_vec())).unwrap();
        assert_eq!(m, Matrix::identity(f, 4));
        let z = flatten_linear_operator(f, 3, 2, |_| Ok(zero_vector(f, 2))).unwrap();
        assert!(z.is_zero());
    }
}
