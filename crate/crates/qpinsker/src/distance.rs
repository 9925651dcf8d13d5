//! Statistical (Kolmogorov) distance and trace distance, including the
//! optimal discriminating projector and the block-structured
//! classical-quantum trace distance.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianEigen};
use crate::states::{CQState, DensityOperator, ProbDist};

/// A quantum distance value together with the projector achieving it:
/// Tr(Pi_opt (rho - sigma)) equals the trace distance.
#[derive(Debug, Clone)]
pub struct DistanceResult {
    /// Delta_q = (1/2) ||rho - sigma||_1.
    pub value: f64,
    /// Projector onto the nonnegative eigenspace of rho - sigma
    /// (eigenvalues within the clamp of zero are assigned to it).
    pub optimal_projector: CMatrix,
}

/// ||p - q||_c = sum_x |p(x) - q(x)|, kept un-halved exactly as the raw
/// Kolmogorov form (range [0, 2]); see [`delta_c`] for the halved variant.
pub fn statistical_distance(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    Ok(p.as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(a, b)| (a - b).abs())
        .sum())
}

/// Delta_c = (1/2) ||p - q||_c.
pub fn delta_c(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    Ok(0.5 * statistical_distance(p, q)?)
}

/// Splits a Hermitian difference into the halved absolute eigenvalue sum and
/// the projector onto its nonnegative eigenspace.
fn half_trace_norm_with_projector(diff: &CMatrix) -> Result<(f64, CMatrix)> {
    let eig = HermitianEigen::new(&linalg::hermitian_part(diff))?;
    let value = 0.5 * eig.values.iter().map(|l| l.abs()).sum::<f64>();
    let thr = eig.clamp_threshold();
    // zero (clamped) eigenvalues break ties into the positive eigenspace
    let projector = eig.apply(|lam| if lam >= -thr { 1.0 } else { 0.0 });
    Ok((value, projector))
}

/// Trace distance Delta_q = (1/2) sum |lambda_i(rho - sigma)| with the
/// optimal discriminating projector attached.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<DistanceResult> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let diff = rho.matrix() - sigma.matrix();
    let (value, optimal_projector) = half_trace_norm_with_projector(&diff)?;
    Ok(DistanceResult {
        value,
        optimal_projector,
    })
}

/// Trace distance between the dense realization of a classical-quantum state
/// and its decoupled partner sum_x p(x)|x><x| (x) rho_bar, computed blockwise
/// (exact by block diagonality): (1/2) sum_x p(x) ||rho^x - rho_bar||_1.
///
/// The returned projector is the block-diagonal assembly of the per-block
/// optimal projectors and acts on the dense (classical_dim * dim) space.
pub fn cq_trace_distance(c: &CQState) -> Result<DistanceResult> {
    let m = c.classical_dim();
    let d = c.quantum_dim();
    let avg = c.avg();
    let mut value = 0.0;
    let mut projector = CMatrix::zeros(m * d, m * d);
    for (x, (p, s)) in c.ensemble().iter().enumerate() {
        let diff = (s.matrix() - avg.matrix()).map(|z| z * p);
        let (block_value, block_proj) = half_trace_norm_with_projector(&diff)?;
        value += block_value;
        for r in 0..d {
            for col in 0..d {
                projector[(x * d + r, x * d + col)] = block_proj[(r, col)];
            }
        }
    }
    Ok(DistanceResult {
        value,
        optimal_projector: projector,
    })
}

/// Trace norm: the sum of singular values (for Hermitian input, the sum of
/// absolute eigenvalues -- the ||.||_q of the bound expressions).
pub fn trace_norm(m: &CMatrix) -> f64 {
    linalg::singular_values(m)
        .expect("SVD convergence")
        .iter()
        .sum()
}
