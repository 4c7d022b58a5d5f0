//! Compressed-row complex sparse matrices used for superoperators.

use faer::sparse::{SparseColMat, Triplet};
use num_complex::Complex64;

use crate::fock::CMatrix;

/// Square complex matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl CsrMatrix {
    /// Assembles from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; dim + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            debug_assert!(r < dim && c < dim);
            if rows.last() == Some(&r) && indices.last() == Some(&c) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                indices.push(c);
                values.push(v);
            }
        }
        let mut keep_rows = Vec::with_capacity(rows.len());
        let mut keep_cols = Vec::with_capacity(rows.len());
        let mut keep_vals = Vec::with_capacity(rows.len());
        for ((r, c), v) in rows.into_iter().zip(indices).zip(values) {
            if v != Complex64::new(0.0, 0.0) {
                keep_rows.push(r);
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for &r in &keep_rows {
            indptr[r + 1] += 1;
        }
        for i in 0..dim {
            indptr[i + 1] += indptr[i];
        }
        Self { dim, indptr, indices: keep_cols, values: keep_vals }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, indptr: vec![0; dim + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterator over stored `(row, col, value)` entries.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.indptr[r]..self.indptr[r + 1]).map(move |k| (r, self.indices[k], self.values[k]))
        })
    }

    /// `y = A x`.
    pub fn mul_vec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            *out = acc;
        }
    }

    /// `y += scale * A x`.
    pub fn mul_vec_add(&self, scale: Complex64, x: &[Complex64], y: &mut [Complex64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            *out += scale * acc;
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `x^T A` for a row vector `x`.
    pub fn left_mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for (r, xr) in x.iter().enumerate() {
            for k in self.indptr[r]..self.indptr[r + 1] {
                y[self.indices[k]] += xr * self.values[k];
            }
        }
        y
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    /// Copy into faer's compressed-column layout, replacing row `replace_row`
    /// (if any) by `replacement` given as `(col, value)` pairs.
    pub(crate) fn to_faer_with_row(
        &self,
        replace_row: Option<(usize, &[(usize, Complex64)])>,
    ) -> SparseColMat<usize, Complex64> {
        let mut entries: Vec<Triplet<usize, usize, Complex64>> = Vec::with_capacity(self.nnz() + self.dim);
        for (r, c, v) in self.triplets() {
            if replace_row.is_some_and(|(row, _)| row == r) {
                continue;
            }
            entries.push(Triplet::new(r, c, v));
        }
        if let Some((row, cols)) = replace_row {
            for &(c, v) in cols {
                entries.push(Triplet::new(row, c, v));
            }
        }
        SparseColMat::try_new_from_triplets(self.dim, self.dim, &entries)
            .expect("triplet indices are in range")
    }
}

/// Appends the nonzero entries of `scale * (a (x) b)` to `out`.
pub(crate) fn kron_triplets(a: &CMatrix, b: &CMatrix, scale: Complex64, out: &mut Vec<(usize, usize, Complex64)>) {
    let zero = Complex64::new(0.0, 0.0);
    let (br, bc) = (b.nrows(), b.ncols());
    let b_nz: Vec<(usize, usize, Complex64)> = (0..bc)
        .flat_map(|j| (0..br).map(move |i| (i, j)))
        .filter_map(|(i, j)| {
            let v = b[(i, j)];
            (v != zero).then_some((i, j, v))
        })
        .collect();
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let av = a[(i, j)];
            if av == zero {
                continue;
            }
            let s = av * scale;
            for &(k, l, bv) in &b_nz {
                out.push((i * br + k, j * bc + l, s * bv));
            }
        }
    }
}
