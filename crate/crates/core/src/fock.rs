//! Truncated bosonic Fock spaces and the dense operators acting on them.
//!
//! Basis ordering is lexicographic in the occupations with the first mode
//! varying slowest, i.e. `|n1 n2 ...> = |n1> (x) |n2> (x) ...` and the flat
//! index of `|n1 n2>` is `n1 * dim2 + n2`.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockSpace {
    mode_dims: Vec<usize>,
    total_dim: usize,
}

impl FockSpace {
    pub fn new(mode_dims: &[usize]) -> Result<Self> {
        if mode_dims.is_empty() {
            return Err(Error::InvalidParameter("a Fock space needs at least one mode".into()));
        }
        if let Some(&bad) = mode_dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(bad));
        }
        Ok(Self { mode_dims: mode_dims.to_vec(), total_dim: mode_dims.iter().product() })
    }

    /// Space whose modes hold at most `n_max[i]` quanta each.
    pub fn with_max_occupations(n_max: &[usize]) -> Result<Self> {
        let dims: Vec<usize> = n_max.iter().map(|n| n + 1).collect();
        Self::new(&dims)
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn n_modes(&self) -> usize {
        self.mode_dims.len()
    }

    /// Flat basis index of the occupation pattern `occupations`.
    pub fn index(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.n_modes() {
            return Err(Error::DimensionMismatch { expected: self.n_modes(), found: occupations.len() });
        }
        let mut idx = 0;
        for (&n, &d) in occupations.iter().zip(&self.mode_dims) {
            if n >= d {
                return Err(Error::DimensionMismatch { expected: d - 1, found: n });
            }
            idx = idx * d + n;
        }
        Ok(idx)
    }

    /// Inverse of [`FockSpace::index`].
    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.n_modes()];
        for (slot, &d) in occ.iter_mut().zip(&self.mode_dims).rev() {
            *slot = index % d;
            index /= d;
        }
        occ
    }
}

/// A dense complex matrix tied to the Fock space it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: FockSpace,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: FockSpace, matrix: CMatrix) -> Result<Self> {
        let n = space.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.nrows().max(matrix.ncols()) });
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: &FockSpace) -> Self {
        let n = space.total_dim();
        Self { space: space.clone(), matrix: CMatrix::identity(n, n) }
    }

    pub fn zeros(space: &FockSpace) -> Self {
        let n = space.total_dim();
        Self { space: space.clone(), matrix: CMatrix::zeros(n, n) }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dagger(&self) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    /// `<row| self |col>` in the flat basis.
    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// Largest elementwise `|X - X^dagger|`.
    pub fn hermiticity_error(&self) -> f64 {
        max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn scaled(&self, factor: impl Into<Complex64>) -> Self {
        Self { space: self.space.clone(), matrix: &self.matrix * factor.into() }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix })
    }

    /// Product `self * other` on a shared space.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix * &other.matrix })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self { space: self.space.clone(), matrix: &self.matrix + &other.matrix })
    }

    /// Largest elementwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator addition across different spaces")
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator subtraction across different spaces");
        Operator { space: self.space.clone(), matrix: &self.matrix - &rhs.matrix }
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.try_mul(rhs).expect("operator product across different spaces")
    }
}

impl Mul<Complex64> for &Operator {
    type Output = Operator;

    fn mul(self, rhs: Complex64) -> Operator {
        self.scaled(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;

    fn mul(self, rhs: f64) -> Operator {
        self.scaled(Complex64::new(rhs, 0.0))
    }
}

/// Single-mode annihilation operator truncated to `dim` Fock levels.
pub fn annihilation(dim: usize) -> Result<Operator> {
    let space = FockSpace::new(&[dim])?;
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(Operator { space, matrix: m })
}

/// Lift a single-mode operator to `I (x) .. (x) op (x) .. (x) I` on `space`.
pub fn embed(op: &Operator, mode_index: usize, space: &FockSpace) -> Result<Operator> {
    let dims = space.mode_dims();
    if mode_index >= dims.len() {
        return Err(Error::ModeIndexOutOfRange { index: mode_index, modes: dims.len() });
    }
    if op.dim() != dims[mode_index] {
        return Err(Error::DimensionMismatch { expected: dims[mode_index], found: op.dim() });
    }
    let mut m = CMatrix::identity(1, 1);
    for (k, &d) in dims.iter().enumerate() {
        m = if k == mode_index { m.kronecker(op.matrix()) } else { m.kronecker(&CMatrix::identity(d, d)) };
    }
    Ok(Operator { space: space.clone(), matrix: m })
}

/// Annihilation operator of mode `mode_index` on a multi-mode space.
pub fn mode_annihilation(space: &FockSpace, mode_index: usize) -> Result<Operator> {
    let dims = space.mode_dims();
    if mode_index >= dims.len() {
        return Err(Error::ModeIndexOutOfRange { index: mode_index, modes: dims.len() });
    }
    embed(&annihilation(dims[mode_index])?, mode_index, space)
}

/// `Tr(op * rho)`.
pub fn expectation(rho: &DensityMatrix, op: &Operator) -> Result<Complex64> {
    if rho.space != op.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(trace_of_product(op.matrix(), rho.matrix()))
}

/// `Tr(a * b)` without forming the product.
pub(crate) fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// System state: Hermitian, unit trace, positive semidefinite within
/// [`tolerances`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: FockSpace,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(space: FockSpace, matrix: CMatrix) -> Result<Self> {
        let op = Operator::new(space, matrix)?;
        let rho = Self { space: op.space, matrix: op.matrix };
        rho.validate()?;
        Ok(rho)
    }


    /// Projector onto the Fock state with the given occupations.
    pub fn fock(space: &FockSpace, occupations: &[usize]) -> Result<Self> {
        let n = space.total_dim();
        let idx = space.index(occupations)?;
        let mut m = CMatrix::zeros(n, n);
        m[(idx, idx)] = Complex64::new(1.0, 0.0);
        Ok(Self { space: space.clone(), matrix: m })
    }

    pub fn vacuum(space: &FockSpace) -> Self {
        let occ = vec![0; space.n_modes()];
        Self::fock(space, &occ).expect("vacuum is always inside the space")
    }

    /// Projector onto a normalised pure state given by its amplitudes.
    pub fn pure(space: &FockSpace, amplitudes: &[Complex64]) -> Result<Self> {
        let n = space.total_dim();
        if amplitudes.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: amplitudes.len() });
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let psi = nalgebra::DVector::from_iterator(n, amplitudes.iter().map(|z| z / norm));
        let m = &psi * psi.adjoint();
        Ok(Self { space: space.clone(), matrix: m })
    }

    /// Truncated coherent state `|beta>` of a single-mode space, renormalised
    /// after truncation.
    pub fn coherent(space: &FockSpace, beta: Complex64) -> Result<Self> {
        if space.n_modes() != 1 {
            return Err(Error::InvalidParameter("coherent state needs a single-mode space".into()));
        }
        let dim = space.total_dim();
        let mut amps = Vec::with_capacity(dim);
        let mut term = Complex64::new(1.0, 0.0);
        for n in 0..dim {
            if n > 0 {
                term = term * beta / (n as f64).sqrt();
            }
            amps.push(term);
        }
        Self::pure(space, &amps)
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Checks the three density-matrix invariants.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > tolerances::HERMITICITY {
            return Err(Error::InvalidState(format!("not Hermitian (max deviation {herm:e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > tolerances::TRACE {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < tolerances::MIN_EIGENVALUE {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(())
    }

    /// Column-stacked `vec(rho)`.
    pub fn to_vec(&self) -> Vec<Complex64> {
        self.matrix.as_slice().to_vec()
    }

    /// Rebuilds a state from a column-stacked vector, Hermitising and
    /// normalising the trace.
    pub fn from_vec_normalized(space: &FockSpace, v: &[Complex64]) -> Result<Self> {
        let n = space.total_dim();
        if v.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: v.len() });
        }
        let m = CMatrix::from_column_slice(n, n, v);
        let mut herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let tr = herm.trace().re;
        if !(tr.is_finite() && tr.abs() > 0.0) {
            return Err(Error::InvalidState(format!("cannot normalise state with trace {tr}")));
        }
        herm /= Complex64::new(tr, 0.0);
        Ok(Self { space: space.clone(), matrix: herm })
    }

    /// Real part of `<op>`; for Hermitian observables this is the full value.
    pub fn mean(&self, op: &Operator) -> Result<f64> {
        Ok(expectation(self, op)?.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn annihilation_two_levels() {
        let a = annihilation(2).unwrap();
        assert_eq!(a.element(0, 1), c(1.0));
        assert_eq!(a.element(0, 0), c(0.0));
        assert_eq!(a.element(1, 0), c(0.0));
        assert_eq!(a.element(1, 1), c(0.0));
    }

    #[test]
    fn annihilation_sqrt_rule() {
        let a = annihilation(3).unwrap();
        assert_eq!(a.element(0, 1), c(1.0));
        assert_eq!(a.element(1, 2), c(2f64.sqrt()));
        let nonzero = a.matrix().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn number_operator_diagonal() {
        let a = annihilation(4).unwrap();
        let n = &a.dagger() * &a;
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { c(i as f64) } else { c(0.0) };
                assert!((n.element(i, j) - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn annihilation_rejects_single_level() {
        assert!(matches!(annihilation(1), Err(Error::InvalidDimension(1))));
        assert!(matches!(FockSpace::new(&[3, 1]), Err(Error::InvalidDimension(1))));
    }

    #[test]
    fn commutator_is_identity_below_cutoff() {
        for dim in 2..8 {
            let a = annihilation(dim).unwrap();
            let comm = a.commutator(&a.dagger()).unwrap();
            for i in 0..dim - 1 {
                for j in 0..dim - 1 {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((comm.element(i, j) - c(expected)).norm() < 1e-14);
                }
            }
            // only the top level deviates
            assert!((comm.element(dim - 1, dim - 1) - c(1.0 - dim as f64)).norm() < 1e-12);
        }
    }

    #[test]
    fn basis_ordering_is_slow_first() {
        let space = FockSpace::new(&[3, 4]).unwrap();
        assert_eq!(space.index(&[0, 1]).unwrap(), 1);
        assert_eq!(space.index(&[1, 0]).unwrap(), 4);
        assert_eq!(space.index(&[2, 3]).unwrap(), 11);
        for i in 0..12 {
            assert_eq!(space.index(&space.occupations(i)).unwrap(), i);
        }
    }

    #[test]
    fn embed_first_mode_of_two_qubit_space() {
        let space = FockSpace::new(&[2, 2]).unwrap();
        let a0 = embed(&annihilation(2).unwrap(), 0, &space).unwrap();
        let mut nonzero: Vec<(usize, usize)> = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if a0.element(i, j).norm() > 0.0 {
                    assert_eq!(a0.element(i, j), c(1.0));
                    nonzero.push((i, j));
                }
            }
        }
        assert_eq!(nonzero, vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn embed_identity_and_distinct_modes_commute() {
        let space = FockSpace::new(&[3, 4]).unwrap();
        let id = Operator::identity(&FockSpace::new(&[4]).unwrap());
        assert_eq!(embed(&id, 1, &space).unwrap(), Operator::identity(&space));
        let a2 = mode_annihilation(&space, 0).unwrap();
        let a3 = mode_annihilation(&space, 1).unwrap();
        assert_eq!(a2.commutator(&a3).unwrap().max_abs(), 0.0);
        assert_eq!(a2.commutator(&a3.dagger()).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn embed_errors() {
        let space = FockSpace::new(&[3, 4]).unwrap();
        let a = annihilation(3).unwrap();
        assert!(matches!(embed(&a, 2, &space), Err(Error::ModeIndexOutOfRange { .. })));
        assert!(matches!(embed(&a, 1, &space), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn expectation_values() {
        let space = FockSpace::new(&[4]).unwrap();
        let a = annihilation(4).unwrap();
        let ad = a.dagger();
        let n = &ad * &a;
        let pairs = &(&ad * &ad) * &(&a * &a);
        let one = DensityMatrix::fock(&space, &[1]).unwrap();
        assert!((expectation(&one, &n).unwrap() - c(1.0)).norm() < 1e-15);
        let vac = DensityMatrix::vacuum(&space);
        assert_eq!(expectation(&vac, &n).unwrap(), c(0.0));
        assert_eq!(expectation(&vac, &pairs).unwrap(), c(0.0));
        let two = DensityMatrix::fock(&space, &[2]).unwrap();
        assert!((expectation(&two, &pairs).unwrap() - c(2.0)).norm() < 1e-14);
    }

    #[test]
    fn expectation_space_mismatch() {
        let rho = DensityMatrix::vacuum(&FockSpace::new(&[3]).unwrap());
        let a = annihilation(4).unwrap();
        assert!(matches!(expectation(&rho, &a), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn density_matrix_validation() {
        let space = FockSpace::new(&[2]).unwrap();
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.5);
        assert!(DensityMatrix::new(space.clone(), m.clone()).is_err());
        m[(1, 1)] = c(0.5);
        assert!(DensityMatrix::new(space.clone(), m.clone()).is_ok());
        m[(0, 1)] = Complex64::new(0.0, 0.1);
        assert!(DensityMatrix::new(space.clone(), m.clone()).is_err());
        m[(1, 0)] = Complex64::new(0.0, -0.1);
        assert!(DensityMatrix::new(space.clone(), m.clone()).is_ok());
        // off-diagonal coherence too large for a positive matrix
        m[(0, 1)] = c(0.9);
        m[(1, 0)] = c(0.9);
        assert!(DensityMatrix::new(space, m).is_err());
    }

    #[test]
    fn vec_is_column_stacked() {
        let space = FockSpace::new(&[2]).unwrap();
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.25);
        m[(1, 1)] = c(0.75);
        m[(1, 0)] = Complex64::new(0.1, 0.2);
        m[(0, 1)] = Complex64::new(0.1, -0.2);
        let rho = DensityMatrix::new(space, m).unwrap();
        let v = rho.to_vec();
        assert_eq!(v[1], Complex64::new(0.1, 0.2));
        assert_eq!(v[2], Complex64::new(0.1, -0.2));
    }
}
