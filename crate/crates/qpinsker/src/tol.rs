/// Validation tolerances shared by every constructor.
///
/// All four default to 1e-9 absolute: double-precision eigendecomposition at
/// the dimensions this crate targets (<= 64) keeps residuals well below that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max allowed |a_ij - conj(a_ji)| for Hermiticity.
    pub herm: f64,
    /// Most negative eigenvalue tolerated as "positive semidefinite".
    pub psd: f64,
    /// Max allowed |trace - 1| before a state/distribution is rejected.
    pub trace: f64,
    /// Max-entry tolerance for reconstruction/completeness checks.
    pub recon: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-9,
            psd: 1e-9,
            trace: 1e-9,
            recon: 1e-9,
        }
    }
}

/// Relative clamp for support determination: eigenvalues with
/// |lambda| < SUPPORT_CLAMP_REL * max|lambda| are treated as exact zeros.
/// Separates numerical dust from genuine support.
pub const SUPPORT_CLAMP_REL: f64 = 1e-12;
