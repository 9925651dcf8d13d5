//! State-like objects and their construction, validation, composition, and
//! random generation: probability vectors and joints, density operators,
//! ensembles, classical-quantum composites, and POVMs.
//!
//! Everything is immutable after construction and every operation is a pure
//! function of its inputs (plus an explicit seed), so values can be shared
//! freely across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_defect, identity, kron, max_entry_diff, C64, CMatrix, CVector, HermitianEigen,
};
use crate::tol::Tolerances;

/// Dust threshold for measurement outcome probabilities: values in
/// [-MEAS_DUST, 0) are rounding noise and get clamped to zero.
const MEAS_DUST: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Probability distributions
// ---------------------------------------------------------------------------

/// A finite probability distribution: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    /// Validates and exactly renormalizes (the sum must already be within
    /// `tol.trace` of one).
    pub fn new(probs: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::NotNormalized(0.0));
        }
        for &p in &probs {
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
            if p < 0.0 {
                return Err(Error::NegativeProbability(p));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol.trace {
            return Err(Error::NotNormalized(sum));
        }
        Ok(ProbDist {
            probs: probs.into_iter().map(|p| p / sum).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1);
        ProbDist {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Builds a distribution from raw measurement statistics, clamping
    /// negative rounding dust (>= -1e-12) to zero before renormalizing.
    pub fn from_measurement(raw: Vec<f64>) -> Result<Self> {
        let mut probs = Vec::with_capacity(raw.len());
        for p in raw {
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
            if p < -MEAS_DUST {
                return Err(Error::NegativeProbability(p));
            }
            probs.push(p.max(0.0));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(sum));
        }
        Ok(ProbDist {
            probs: probs.into_iter().map(|p| p / sum).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn max(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let u = 1.0 / self.len() as f64;
        self.probs.iter().all(|&p| (p - u).abs() <= tol)
    }
}

/// A joint distribution P(x, y); rows indexed by x, columns by y.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    probs: nalgebra::DMatrix<f64>,
}

impl JointDist {
    pub fn new(probs: nalgebra::DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::NotNormalized(0.0));
        }
        for &p in probs.iter() {
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
            if p < 0.0 {
                return Err(Error::NegativeProbability(p));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol.trace {
            return Err(Error::NotNormalized(sum));
        }
        Ok(JointDist {
            probs: probs.map(|p| p / sum),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], tol: &Tolerances) -> Result<Self> {
        let nx = rows.len();
        if nx == 0 {
            return Err(Error::NotNormalized(0.0));
        }
        let ny = rows[0].len();
        for r in rows {
            if r.len() != ny {
                return Err(Error::LengthMismatch(ny, r.len()));
            }
        }
        let m = nalgebra::DMatrix::from_fn(nx, ny, |i, j| rows[i][j]);
        Self::new(m, tol)
    }

    /// From raw measurement statistics, clamping negative dust like
    /// [`ProbDist::from_measurement`].
    pub fn from_measurement(raw: nalgebra::DMatrix<f64>) -> Result<Self> {
        let mut m = raw;
        for p in m.iter_mut() {
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
            if *p < -MEAS_DUST {
                return Err(Error::NegativeProbability(*p));
            }
            *p = p.max(0.0);
        }
        let sum: f64 = m.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(sum));
        }
        Ok(JointDist {
            probs: m.map(|p| p / sum),
        })
    }

    pub fn nx(&self) -> usize {
        self.probs.nrows()
    }

    pub fn ny(&self) -> usize {
        self.probs.ncols()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.probs[(x, y)]
    }

    /// P(x) = sum_y P(x, y).
    pub fn row_marginal(&self) -> ProbDist {
        ProbDist {
            probs: (0..self.nx()).map(|x| self.probs.row(x).sum()).collect(),
        }
    }

    /// P(y) = sum_x P(x, y).
    pub fn col_marginal(&self) -> ProbDist {
        ProbDist {
            probs: (0..self.ny()).map(|y| self.probs.column(y).sum()).collect(),
        }
    }

    /// The entries read as one flat distribution (row-major).
    pub fn flattened(&self) -> ProbDist {
        let mut probs = Vec::with_capacity(self.nx() * self.ny());
        for x in 0..self.nx() {
            for y in 0..self.ny() {
                probs.push(self.probs[(x, y)]);
            }
        }
        ProbDist { probs }
    }

    /// The independent joint P(x)P(y) with the same marginals.
    pub fn product_of_marginals(&self) -> JointDist {
        let px = self.row_marginal();
        let py = self.col_marginal();
        JointDist {
            probs: nalgebra::DMatrix::from_fn(self.nx(), self.ny(), |x, y| {
                px.get(x) * py.get(y)
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Density operators
// ---------------------------------------------------------------------------

/// A validated density operator: Hermitian, positive semidefinite, unit
/// trace, with its spectral decomposition cached at construction.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    mat: CMatrix,
    eigen: HermitianEigen,
    trace_deviation: f64,
}

impl DensityOperator {
    /// Validates `m` as a density operator. The trace is exactly renormalized
    /// when its deviation from one is within `tol.trace` (the deviation is
    /// recorded); larger deviations are rejected.
    pub fn new(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare(m.nrows(), m.ncols()));
        }
        for z in m.iter() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let defect = hermitian_defect(&m);
        if defect > tol.herm {
            return Err(Error::NotHermitian(defect));
        }
        let tr = linalg::trace(&m);
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::TraceOutOfRange(tr.re));
        }
        let deviation = tr.re - 1.0;
        let mat = m.map(|z| z / tr.re);
        let eigen = HermitianEigen::new(&linalg::hermitian_part(&mat))?;
        if let Some(&min) = eigen.values.first() {
            if min < -tol.psd {
                return Err(Error::NotPsd(min));
            }
        }
        let recon = eigen.reconstruct();
        let recon_err = max_entry_diff(&recon, &mat);
        debug_assert!(recon_err <= tol.recon, "spectral cache residual {recon_err}");
        Ok(DensityOperator {
            mat,
            eigen,
            trace_deviation: deviation,
        })
    }

    /// Constructor for matrices valid by construction (mixtures, marginals,
    /// Kronecker products of valid states). Invariants are still checked in
    /// debug builds.
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        debug_assert!(hermitian_defect(&m) <= 1e-9, "non-Hermitian construction");
        let tr = linalg::trace(&m);
        debug_assert!((tr.re - 1.0).abs() <= 1e-9, "trace drifted: {}", tr.re);
        let deviation = tr.re - 1.0;
        let mat = m.map(|z| z / tr.re);
        let eigen =
            HermitianEigen::new(&linalg::hermitian_part(&mat)).expect("eigendecomposition failed");
        debug_assert!(
            eigen.values.first().copied().unwrap_or(0.0) >= -1e-9,
            "negative eigenvalue in construction: {:?}",
            eigen.values.first()
        );
        DensityOperator {
            mat,
            eigen,
            trace_deviation: deviation,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Cached spectrum, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    /// Orthonormal eigenvector columns matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigen.vectors
    }

    pub(crate) fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    /// Spectrum with sub-clamp dust snapped to exact zeros.
    pub fn clamped_eigenvalues(&self) -> Vec<f64> {
        self.eigen.clamped_values()
    }

    /// Trace deviation of the raw input recorded at validation time.
    pub fn trace_deviation(&self) -> f64 {
        self.trace_deviation
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator::from_matrix_unchecked(kron(&self.mat, &other.mat))
    }

    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<DensityOperator> {
        let (da, db) = dims;
        if da * db != self.dim() {
            return Err(Error::DimensionMismatch(da * db, self.dim()));
        }
        let mat = match keep {
            Subsystem::A => CMatrix::from_fn(da, da, |i, ip| {
                (0..db).map(|j| self.mat[(i * db + j, ip * db + j)]).sum()
            }),
            Subsystem::B => CMatrix::from_fn(db, db, |j, jp| {
                (0..da).map(|i| self.mat[(i * db + j, i * db + jp)]).sum()
            }),
        };
        Ok(DensityOperator::from_matrix_unchecked(mat))
    }
}

/// Which marginal a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Validates a complex matrix as a density operator (spec name for
/// [`DensityOperator::new`]).
pub fn validate_density(m: CMatrix, tol: &Tolerances) -> Result<DensityOperator> {
    DensityOperator::new(m, tol)
}

/// vv^dagger / ||v||^2 for a nonzero vector.
pub fn pure_state(v: &CVector) -> Result<DensityOperator> {
    let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if norm_sq <= 0.0 || !norm_sq.is_finite() {
        return Err(Error::ZeroVector);
    }
    let dim = v.len();
    let mat = CMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj() / norm_sq);
    Ok(DensityOperator::from_matrix_unchecked(mat))
}

/// Kronecker product of two states.
pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> DensityOperator {
    a.tensor(b)
}

/// Marginal of a bipartite state on the kept subsystem.
pub fn partial_trace(
    rho: &DensityOperator,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityOperator> {
    rho.partial_trace(dims, keep)
}

/// Computational-basis ket |k> in the given dimension.
pub fn basis_ket(dim: usize, k: usize) -> CVector {
    assert!(k < dim);
    let mut v = CVector::zeros(dim);
    v[k] = C64::new(1.0, 0.0);
    v
}

/// |k><k| in the given dimension.
pub fn basis_projector(dim: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(k, k)] = C64::new(1.0, 0.0);
    m
}

/// The maximally mixed state I/d.
pub fn maximally_mixed(dim: usize) -> DensityOperator {
    DensityOperator::from_matrix_unchecked(identity(dim).map(|z| z / dim as f64))
}

// ---------------------------------------------------------------------------
// Ensembles and classical-quantum states
// ---------------------------------------------------------------------------

/// Prior probabilities paired with density operators of a common dimension.
#[derive(Debug, Clone)]
pub struct Ensemble {
    priors: ProbDist,
    states: Vec<DensityOperator>,
}

impl Ensemble {
    pub fn new(priors: ProbDist, states: Vec<DensityOperator>) -> Result<Self> {
        if priors.len() != states.len() {
            return Err(Error::LengthMismatch(priors.len(), states.len()));
        }
        let dim = states[0].dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch(dim, s.dim()));
            }
        }
        Ok(Ensemble { priors, states })
    }

    pub fn uniform(states: Vec<DensityOperator>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::LengthMismatch(1, 0));
        }
        Ensemble::new(ProbDist::uniform(n), states)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn priors(&self) -> &ProbDist {
        &self.priors
    }

    pub fn prior(&self, x: usize) -> f64 {
        self.priors.get(x)
    }

    pub fn state(&self, x: usize) -> &DensityOperator {
        &self.states[x]
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityOperator)> {
        self.priors.as_slice().iter().copied().zip(self.states.iter())
    }

    /// The ensemble average sum_x p(x) rho^x.
    pub fn average(&self) -> DensityOperator {
        let dim = self.dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for (p, s) in self.iter() {
            acc += s.matrix().map(|z| z * p);
        }
        DensityOperator::from_matrix_unchecked(acc)
    }
}

/// Block-diagonal classical-quantum composite sum_x p(x) |x><x| (x) rho^x,
/// stored structurally as the ensemble plus its precomputed average.
#[derive(Debug, Clone)]
pub struct CQState {
    ensemble: Ensemble,
    avg: DensityOperator,
}

impl CQState {
    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    /// The mixture sum_x p(x) rho^x.
    pub fn avg(&self) -> &DensityOperator {
        &self.avg
    }

    pub fn classical_dim(&self) -> usize {
        self.ensemble.len()
    }

    pub fn quantum_dim(&self) -> usize {
        self.ensemble.dim()
    }

    pub fn dense_dim(&self) -> usize {
        self.classical_dim() * self.quantum_dim()
    }

    /// Materializes the dense block-diagonal realization, block x equal to
    /// p(x) rho^x.
    pub fn dense(&self) -> DensityOperator {
        let m = self.classical_dim();
        let d = self.quantum_dim();
        let mut mat = CMatrix::zeros(m * d, m * d);
        for (x, (p, s)) in self.ensemble.iter().enumerate() {
            for r in 0..d {
                for c in 0..d {
                    mat[(x * d + r, x * d + c)] = s.matrix()[(r, c)] * p;
                }
            }
        }
        DensityOperator::from_matrix_unchecked(mat)
    }

    /// The decoupled partner with the same priors but every block equal to
    /// the average state (its dense form is sum_x p(x)|x><x| (x) rho_bar).
    pub fn decoupled(&self) -> CQState {
        let states = vec![self.avg.clone(); self.classical_dim()];
        let ensemble = Ensemble::new(self.ensemble.priors().clone(), states)
            .expect("priors/states lengths match by construction");
        CQState {
            avg: self.avg.clone(),
            ensemble,
        }
    }
}

/// Assembles the classical-quantum composite for an ensemble, caching the
/// average state.
pub fn build_cq_state(e: Ensemble) -> CQState {
    let avg = e.average();
    CQState { ensemble: e, avg }
}

// ---------------------------------------------------------------------------
// POVMs
// ---------------------------------------------------------------------------

/// A positive operator valued measure: Hermitian PSD elements of a common
/// dimension summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::LengthMismatch(1, 0));
        }
        let dim = elements[0].nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        for el in &elements {
            if el.nrows() != el.ncols() {
                return Err(Error::NotSquare(el.nrows(), el.ncols()));
            }
            if el.nrows() != dim {
                return Err(Error::DimensionMismatch(dim, el.nrows()));
            }
            let defect = hermitian_defect(el);
            if defect > tol.herm {
                return Err(Error::NotHermitian(defect));
            }
            let eig = HermitianEigen::new(&linalg::hermitian_part(el))?;
            if let Some(&min) = eig.values.first() {
                if min < -tol.psd {
                    return Err(Error::NotPsd(min));
                }
            }
            sum += el;
        }
        let completeness = max_entry_diff(&sum, &identity(dim));
        if completeness > tol.recon {
            return Err(Error::IncompleteMeasurement(completeness));
        }
        Ok(Povm { elements })
    }

    /// For POVMs valid by construction; invariants checked in debug builds.
    pub(crate) fn from_elements_unchecked(elements: Vec<CMatrix>) -> Self {
        #[cfg(debug_assertions)]
        {
            let dim = elements[0].nrows();
            let mut sum = CMatrix::zeros(dim, dim);
            for el in &elements {
                debug_assert!(hermitian_defect(el) <= 1e-8);
                sum += el;
            }
            debug_assert!(max_entry_diff(&sum, &identity(dim)) <= 1e-8);
        }
        Povm { elements }
    }

    /// A two-outcome test {effect, I - effect}.
    pub fn two_outcome(effect: CMatrix, tol: &Tolerances) -> Result<Self> {
        let dim = effect.nrows();
        let complement = identity(dim) - &effect;
        Povm::new(vec![effect, complement], tol)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn element(&self, i: usize) -> &CMatrix {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    /// Born probabilities Tr(Pi_i rho) for one state.
    pub fn outcome_probabilities(&self, rho: &DensityOperator) -> Vec<f64> {
        self.elements
            .iter()
            .map(|el| linalg::trace_product_re(el, rho.matrix()))
            .collect()
    }

    /// Outcome joint P(x, y) = p(x) Tr(Pi_y rho^x) for an ensemble.
    pub fn outcome_joint(&self, e: &Ensemble) -> Result<JointDist> {
        if e.dim() != self.dim() {
            return Err(Error::DimensionMismatch(e.dim(), self.dim()));
        }
        let raw = nalgebra::DMatrix::from_fn(e.len(), self.len(), |x, y| {
            e.prior(x) * linalg::trace_product_re(self.element(y), e.state(x).matrix())
        });
        JointDist::from_measurement(raw)
    }
}

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Ginibre matrix: independent standard complex Gaussian entries.
pub fn ginibre_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| standard_complex(rng))
}

/// Haar-uniform random pure state (normalized complex Gaussian vector).
pub fn random_pure_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    assert!(dim >= 1);
    loop {
        let v = CVector::from_fn(dim, |_, _| standard_complex(rng));
        if let Ok(s) = pure_state(&v) {
            return s;
        }
    }
}

/// Hilbert-Schmidt random mixed state G G^dagger / Tr(G G^dagger).
pub fn random_mixed_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    assert!(dim >= 1);
    let g = ginibre_with(dim, rng);
    let w = &g * g.adjoint();
    DensityOperator::from_matrix_unchecked(w.map(|z| z / linalg::trace_re(&w)))
}

/// Seeded convenience wrapper around [`random_pure_with`]; deterministic
/// given the seed.
pub fn random_pure(dim: usize, seed: u64) -> DensityOperator {
    random_pure_with(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Seeded convenience wrapper around [`random_mixed_with`].
pub fn random_mixed(dim: usize, seed: u64) -> DensityOperator {
    random_mixed_with(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Haar-random unitary: QR of a Ginibre matrix with the phase convention
/// fixed by the R diagonal.
pub fn random_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = ginibre_with(dim, rng);
    let qr = g.qr();
    let r_diag: Vec<C64> = (0..dim).map(|i| qr.r()[(i, i)]).collect();
    let mut q = qr.q();
    for (j, r) in r_diag.iter().enumerate() {
        let phase = if r.norm() > 0.0 {
            r / r.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random probability vector (normalized exponentials, Dirichlet(1)).
pub fn random_prob_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProbDist {
    assert!(n >= 1);
    let mut probs: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let sum: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= sum;
    }
    ProbDist { probs }
}

/// Random probability vector kept away from zero entries by mixing in a
/// uniform floor (min entry >= 0.1/n); keeps relative-entropy identities
/// clear of clamped supports in the property suites.
pub fn random_prob_floored_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProbDist {
    let raw = random_prob_with(n, rng);
    let u = 1.0 / n as f64;
    let probs = raw.as_slice().iter().map(|&p| 0.9 * p + 0.1 * u).collect();
    ProbDist { probs }
}

/// Random joint distribution over nx * ny cells.
pub fn random_joint_with<R: Rng + ?Sized>(nx: usize, ny: usize, rng: &mut R) -> JointDist {
    let flat = random_prob_with(nx * ny, rng);
    JointDist {
        probs: nalgebra::DMatrix::from_fn(nx, ny, |x, y| flat.get(x * ny + y)),
    }
}

/// Random POVM with `outcomes` elements: S^{-1/2} A_i S^{-1/2} for Ginibre
/// Wisharts A_i and S = sum A_i.
pub fn random_povm_with<R: Rng + ?Sized>(dim: usize, outcomes: usize, rng: &mut R) -> Povm {
    assert!(outcomes >= 1);
    let wisharts: Vec<CMatrix> = (0..outcomes)
        .map(|_| {
            let g = ginibre_with(dim, rng);
            &g * g.adjoint()
        })
        .collect();
    let mut total = CMatrix::zeros(dim, dim);
    for w in &wisharts {
        total += w;
    }
    let eig = HermitianEigen::new(&linalg::hermitian_part(&total)).expect("PSD sum");
    let inv_sqrt = eig.apply(|lam| {
        if lam > eig.clamp_threshold() {
            lam.powf(-0.5)
        } else {
            0.0
        }
    });
    let elements: Vec<CMatrix> = wisharts
        .iter()
        .map(|w| {
            let e = &inv_sqrt * w * &inv_sqrt;
            linalg::hermitian_part(&e)
        })
        .collect();
    Povm::from_elements_unchecked(elements)
}
