//! Dense complex-matrix substrate: the few linear-algebra primitives every
//! other module is built on. Everything is `f64`-based and dimension-dynamic.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::tol::SUPPORT_CLAMP_REL;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Iteration cap handed to nalgebra's iterative decompositions.
const EIG_MAX_ITER: usize = 100_000;

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn zeros(dim: usize) -> CMatrix {
    CMatrix::zeros(dim, dim)
}

/// Max |a_ij - conj(a_ji)| over all entries; zero for exactly Hermitian input.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

pub fn max_entry_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    max_entry_norm(&(a - b))
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn trace_re(m: &CMatrix) -> f64 {
    trace(m).re
}

/// Re Tr(a b) without forming the full product.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let mut acc = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Hermitian part (m + m^dagger)/2.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted ascending
/// with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// Assumes `m` is Hermitian; callers check `hermitian_defect` first where
    /// the input is not Hermitian by construction.
    pub fn new(m: &CMatrix) -> Result<Self> {
        debug_assert_eq!(m.nrows(), m.ncols());
        if m.nrows() == 1 {
            return Ok(HermitianEigen {
                values: vec![m[(0, 0)].re],
                vectors: identity(1),
            });
        }
        let se = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIG_MAX_ITER)
            .ok_or(Error::EigenFailed)?;
        let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
        let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let dim = m.nrows();
        let mut vectors = CMatrix::zeros(dim, dim);
        for (col, &src) in order.iter().enumerate() {
            vectors.set_column(col, &se.eigenvectors.column(src));
        }
        Ok(HermitianEigen { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Sum_i f(lambda_i) v_i v_i^dagger.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for (i, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            let v = self.vectors.column(i);
            for r in 0..dim {
                for c in 0..dim {
                    out[(r, c)] += v[r] * v[c].conj() * w;
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| x)
    }

    /// Clamp threshold: SUPPORT_CLAMP_REL times the largest |eigenvalue|.
    pub fn clamp_threshold(&self) -> f64 {
        let max_abs = self.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        SUPPORT_CLAMP_REL * max_abs
    }

    /// Eigenvalues with |lambda| below the clamp threshold snapped to 0.
    pub fn clamped_values(&self) -> Vec<f64> {
        let thr = self.clamp_threshold();
        self.values
            .iter()
            .map(|&v| if v.abs() < thr { 0.0 } else { v })
            .collect()
    }

    /// Projector onto the span of eigenvectors with clamped eigenvalue != 0.
    pub fn support_projector(&self) -> CMatrix {
        let thr = self.clamp_threshold();
        self.apply(|lam| if lam.abs() < thr { 0.0 } else { 1.0 })
    }

    /// Projector onto the clamped kernel (complement of the support).
    pub fn kernel_projector(&self) -> CMatrix {
        let thr = self.clamp_threshold();
        self.apply(|lam| if lam.abs() < thr { 1.0 } else { 0.0 })
    }
}

/// Singular values of an arbitrary complex matrix, descending.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    let svd = nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, EIG_MAX_ITER)
        .ok_or(Error::EigenFailed)?;
    Ok(svd.singular_values.iter().copied().collect())
}

/// Sum of |lambda_i| for a Hermitian matrix via eigendecomposition.
pub fn abs_eigenvalue_sum(m: &CMatrix) -> Result<f64> {
    Ok(HermitianEigen::new(m)?.values.iter().map(|v| v.abs()).sum())
}
