//! Row-compressed copies of operators for the integrators' inner loops.
//!
//! The Hamiltonians here are dense in storage but sparse in content (a few
//! percent of entries are non-zero), so every repeated product goes through
//! this form. Accumulation order is fixed by the row layout, which keeps the
//! results bit-reproducible.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::hilbert::OperatorMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    /// Row of each stored entry, for the triplet loops of the dense products.
    rows: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrices only");
        let dim = m.nrows();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for r in 0..dim {
            for c in 0..dim {
                let v = m[(r, c)];
                if v.re != 0.0 || v.im != 0.0 {
                    rows.push(r);
                    cols.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        CsrMatrix { dim, row_ptr, rows, cols, values }
    }

    pub fn from_operator(op: &OperatorMatrix) -> Self {
        Self::from_dense(op.entries())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `out = scale * (A v)`.
    pub fn apply_into(&self, v: &[C64], scale: C64, out: &mut [C64]) {
        for (r, o) in out.iter_mut().enumerate().take(self.dim) {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * v[self.cols[k]];
            }
            *o = scale * acc;
        }
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim);
        self.apply_into(v.as_slice(), C64::new(1.0, 0.0), out.as_mut_slice());
        out
    }

    /// `A M` for a dense square `M`.
    pub fn mul_dense(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.dim, m.ncols());
        self.mul_dense_into(m, &mut out);
        out
    }

    /// `out = A M`, reusing `out`'s storage. Column by column (nalgebra is
    /// column-major), visiting only stored entries.
    pub fn mul_dense_into(&self, m: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let d = self.dim;
        let (src, dst) = (m.as_slice(), out.as_mut_slice());
        for (s, o) in src.chunks_exact(d).zip(dst.chunks_exact_mut(d)) {
            o.fill(C64::new(0.0, 0.0));
            for ((&r, &c), &v) in self.rows.iter().zip(&self.cols).zip(&self.values) {
                o[r] += v * s[c];
            }
        }
    }

    /// Stored `(column, value)` pairs of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.cols[k], self.values[k]))
    }

    /// `out += scale (A v)`.
    pub fn apply_add(&self, v: &[C64], scale: C64, out: &mut [C64]) {
        for ((&r, &c), &a) in self.rows.iter().zip(&self.cols).zip(&self.values) {
            out[r] += scale * a * v[c];
        }
    }

    /// `<v| A |v>`.
    pub fn quadratic_form(&self, v: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..self.dim {
            let mut row = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                row += self.values[k] * v[self.cols[k]];
            }
            acc += v[r].conj() * row;
        }
        acc
    }

    /// `Tr(A rho)`.
    pub fn trace_product(&self, rho: &DMatrix<C64>) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * rho[(self.cols[k], r)];
            }
        }
        acc
    }
}
