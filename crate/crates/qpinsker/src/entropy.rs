//! Entropic functionals, classical and quantum, all in bits (base-2 logs,
//! so the Pinsker constants 1/(2 ln 2) and 2/ln 2 come out exactly).
//!
//! Relative entropies return `f64::INFINITY` when the support condition
//! supp(rho) <= supp(sigma) fails ("extended" convention); the `_mode`
//! variants can instead surface the violation as an error.

use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix};
use crate::states::{CQState, DensityOperator, Ensemble, JointDist, ProbDist, Subsystem};
use crate::tol::SUPPORT_CLAMP_REL;

/// What to do when a relative entropy hits a support violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupportMode {
    /// Return the +infinity sentinel.
    #[default]
    Extended,
    /// Raise [`Error::SupportViolation`].
    Strict,
}

/// Probability mass below this threshold is treated as an exact zero when
/// deciding support membership (the spectrum clamp carried over to
/// probability space; total mass is always 1, so the scale is absolute).
const SUPPORT_MASS_TOL: f64 = SUPPORT_CLAMP_REL;

fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// H(X) = -sum_x p(x) log2 p(x), with 0 log 0 := 0.
pub fn shannon_entropy(p: &ProbDist) -> f64 {
    -p.as_slice().iter().map(|&x| xlog2x(x)).sum::<f64>()
}

/// Binary entropy h2(p).
pub fn binary_entropy(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// Shannon entropy of a raw nonnegative vector (used for spectra).
fn entropy_of_weights(w: &[f64]) -> f64 {
    -w.iter().map(|&x| xlog2x(x)).sum::<f64>()
}

/// H(X|Y) = sum_y P(y) H(X | Y=y); columns with P(y) = 0 contribute 0.
pub fn conditional_entropy(j: &JointDist) -> f64 {
    let mut h = 0.0;
    for y in 0..j.ny() {
        let py: f64 = (0..j.nx()).map(|x| j.get(x, y)).sum();
        if py <= 0.0 {
            continue;
        }
        for x in 0..j.nx() {
            let pxy = j.get(x, y);
            if pxy > 0.0 {
                h -= pxy * (pxy / py).log2();
            }
        }
    }
    h
}

/// I(X, Y) = H(X) + H(Y) - H(X, Y).
pub fn mutual_information(j: &JointDist) -> f64 {
    shannon_entropy(&j.row_marginal()) + shannon_entropy(&j.col_marginal())
        - shannon_entropy(&j.flattened())
}

/// D_c(p || q) = sum_x p(x) log2(p(x)/q(x)).
pub fn classical_relative_entropy(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    classical_relative_entropy_mode(p, q, SupportMode::Extended)
}

pub fn classical_relative_entropy_mode(
    p: &ProbDist,
    q: &ProbDist,
    mode: SupportMode,
) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    let mut d = 0.0;
    for (&pi, &qi) in p.as_slice().iter().zip(q.as_slice()) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return match mode {
                SupportMode::Extended => Ok(f64::INFINITY),
                SupportMode::Strict => Err(Error::SupportViolation),
            };
        }
        d += pi * (pi / qi).log2();
    }
    Ok(d)
}

/// S(rho) = -Tr rho log2 rho, evaluated on the clamped spectrum.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    entropy_of_weights(&rho.clamped_eigenvalues())
}

/// Umegaki relative entropy D_q(rho || sigma) = Tr rho (log2 rho - log2 sigma),
/// computed spectrally on supports. Requires supp(rho) <= supp(sigma).
pub fn quantum_relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    quantum_relative_entropy_mode(rho, sigma, SupportMode::Extended)
}

pub fn quantum_relative_entropy_mode(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    mode: SupportMode,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    // Tr rho log2 rho from rho's own spectrum.
    let rho_term: f64 = rho.clamped_eigenvalues().iter().map(|&l| xlog2x(l)).sum();

    // Tr rho log2 sigma = sum_j <v_j| rho |v_j> log2 s_j over sigma's support;
    // mass on the clamped kernel of sigma is a support violation.
    let svals = sigma.clamped_eigenvalues();
    let svecs = sigma.eigenvectors();
    let mut sigma_term = 0.0;
    let mut kernel_mass = 0.0;
    for (j, &s) in svals.iter().enumerate() {
        let v = svecs.column(j);
        // <v| rho |v>
        let mut mass = 0.0;
        for r in 0..rho.dim() {
            for c in 0..rho.dim() {
                mass += (v[r].conj() * rho.matrix()[(r, c)] * v[c]).re;
            }
        }
        if s > 0.0 {
            sigma_term += mass * s.log2();
        } else {
            kernel_mass += mass.max(0.0);
        }
    }
    if kernel_mass > SUPPORT_MASS_TOL {
        return match mode {
            SupportMode::Extended => Ok(f64::INFINITY),
            SupportMode::Strict => Err(Error::SupportViolation),
        };
    }
    Ok(rho_term - sigma_term)
}

/// S(AB) from the joint spectrum; `dims` must factor the dimension.
pub fn quantum_joint_entropy(rho_ab: &DensityOperator, dims: (usize, usize)) -> Result<f64> {
    if dims.0 * dims.1 != rho_ab.dim() {
        return Err(Error::DimensionMismatch(dims.0 * dims.1, rho_ab.dim()));
    }
    Ok(von_neumann_entropy(rho_ab))
}

/// I_q(A, B) = S(A) + S(B) - S(AB) via partial traces.
pub fn quantum_mutual_information(rho_ab: &DensityOperator, dims: (usize, usize)) -> Result<f64> {
    if dims.0 * dims.1 != rho_ab.dim() {
        return Err(Error::DimensionMismatch(dims.0 * dims.1, rho_ab.dim()));
    }
    let a = rho_ab.partial_trace(dims, Subsystem::A)?;
    let b = rho_ab.partial_trace(dims, Subsystem::B)?;
    Ok(von_neumann_entropy(&a) + von_neumann_entropy(&b) - von_neumann_entropy(rho_ab))
}

/// Holevo information chi = S(rho_bar) - sum_x p(x) S(rho^x).
pub fn holevo_information(e: &Ensemble) -> f64 {
    let avg = e.average();
    let conditional: f64 = e.iter().map(|(p, s)| p * von_neumann_entropy(s)).sum();
    von_neumann_entropy(&avg) - conditional
}

/// Joint entropy of a classical-quantum state, computed structurally:
/// S(X, Y) = H(priors) + sum_x p(x) S(rho^x).
pub fn cq_joint_entropy(c: &CQState) -> f64 {
    let e = c.ensemble();
    shannon_entropy(e.priors()) + e.iter().map(|(p, s)| p * von_neumann_entropy(s)).sum::<f64>()
}

/// The Eq-18 route to chi: prior-weighted relative entropies of the members
/// against the average state. Exposed for the identity suites.
pub fn holevo_information_via_relative_entropy(e: &Ensemble) -> Result<f64> {
    let avg = e.average();
    let mut chi = 0.0;
    for (p, s) in e.iter() {
        if p <= 0.0 {
            continue;
        }
        let d = quantum_relative_entropy(s, &avg)?;
        if d.is_infinite() {
            return Ok(f64::INFINITY);
        }
        chi += p * d;
    }
    Ok(chi)
}

/// I_q via the relative-entropy representation
/// D_q(rho_AB || rho_A (x) rho_B).
pub fn quantum_mutual_information_via_relative_entropy(
    rho_ab: &DensityOperator,
    dims: (usize, usize),
) -> Result<f64> {
    if dims.0 * dims.1 != rho_ab.dim() {
        return Err(Error::DimensionMismatch(dims.0 * dims.1, rho_ab.dim()));
    }
    let a = rho_ab.partial_trace(dims, Subsystem::A)?;
    let b = rho_ab.partial_trace(dims, Subsystem::B)?;
    let product: CMatrix = kron(a.matrix(), b.matrix());
    let sigma = DensityOperator::from_matrix_unchecked(product);
    quantum_relative_entropy(rho_ab, &sigma)
}
