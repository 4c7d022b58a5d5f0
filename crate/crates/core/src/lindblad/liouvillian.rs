use num_complex::Complex64;

use super::sparse::{kron_triplets, CsrMatrix};
use crate::error::{Error, Result};
use crate::fock::{CMatrix, FockSpace, Operator};
use crate::tolerances;

/// Jump operator with its rate. Rates are angular frequencies in the same
/// units as the Hamiltonian handed to [`build_liouvillian`].
#[derive(Debug, Clone)]
pub struct DecayChannel {
    pub operator: Operator,
    pub rate: f64,
}

impl DecayChannel {
    pub fn new(operator: Operator, rate: f64) -> Result<Self> {
        if !(rate >= 0.0) {
            return Err(Error::NegativeRate(rate));
        }
        Ok(Self { operator, rate })
    }
}

/// Vectorised Lindblad generator acting on column-stacked density matrices:
/// the element `rho[i, j]` lives at index `i + j * n`.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    space: FockSpace,
    matrix: CsrMatrix,
}

/// Assembles `L` such that `d vec(rho)/dt = L vec(rho)` for
/// `d rho/dt = -i[H, rho] + sum_k g_k (A rho A^+ - {A^+ A, rho}/2)`.
///
/// With column stacking `vec(X rho Y) = (Y^T (x) X) vec(rho)`, so
/// `L = -i (I (x) H - H^T (x) I) + sum_k g_k (A^* (x) A - I (x) A^+A / 2 - (A^+A)^T (x) I / 2)`.
pub fn build_liouvillian(hamiltonian: &Operator, channels: &[DecayChannel]) -> Result<Liouvillian> {
    let herm = hamiltonian.hermiticity_error();
    if herm > tolerances::HAMILTONIAN_HERMITICITY {
        return Err(Error::NonHermitian(herm));
    }
    let space = hamiltonian.space().clone();
    let n = space.total_dim();
    let id = CMatrix::identity(n, n);
    let mut triplets = Vec::new();
    let minus_i = Complex64::new(0.0, -1.0);
    let h = hamiltonian.matrix();
    kron_triplets(&id, h, minus_i, &mut triplets);
    kron_triplets(&h.transpose(), &id, -minus_i, &mut triplets);
    for ch in channels {
        if ch.operator.space() != &space {
            return Err(Error::SpaceMismatch);
        }
        if !(ch.rate >= 0.0) {
            return Err(Error::NegativeRate(ch.rate));
        }
        if ch.rate == 0.0 {
            continue;
        }
        let a = ch.operator.matrix();
        let ada = a.adjoint() * a;
        let g = Complex64::new(ch.rate, 0.0);
        kron_triplets(&a.map(|z| z.conj()), a, g, &mut triplets);
        kron_triplets(&id, &ada, -0.5 * g, &mut triplets);
        kron_triplets(&ada.transpose(), &id, -0.5 * g, &mut triplets);
    }
    Ok(Liouvillian { space, matrix: CsrMatrix::from_triplets(n * n, triplets) })
}

impl Liouvillian {
    /// Purely coherent part `-i[H, .]`; `H` need not be Hermitian here, which
    /// allows drive terms to be stored separately and rescaled in time.
    pub fn coherent(hamiltonian: &Operator) -> Self {
        let space = hamiltonian.space().clone();
        let n = space.total_dim();
        let id = CMatrix::identity(n, n);
        let mut triplets = Vec::new();
        let minus_i = Complex64::new(0.0, -1.0);
        kron_triplets(&id, hamiltonian.matrix(), minus_i, &mut triplets);
        kron_triplets(&hamiltonian.matrix().transpose(), &id, -minus_i, &mut triplets);
        Self { space, matrix: CsrMatrix::from_triplets(n * n, triplets) }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    /// Number of vectorised unknowns, `total_dim^2`.
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(v)
    }

    /// `L(X)` for an operator-valued `X`.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let n = self.space.total_dim();
        CMatrix::from_column_slice(n, n, &self.matrix.mul_vec(x.as_slice()))
    }

    /// Column-stacked identity, the trace functional `Tr(X) = vec(I)^T vec(X)`.
    pub fn trace_functional(&self) -> Vec<Complex64> {
        let n = self.space.total_dim();
        let mut v = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            v[i * (n + 1)] = Complex64::new(1.0, 0.0);
        }
        v
    }

    /// Largest `|(vec I)^T L|` entry; zero for a trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        self.matrix
            .left_mul_vec(&self.trace_functional())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}
