//! Minimum-error quantum detection: the binary Helstrom closed form, the
//! pretty-good measurement, a fixed-point search for the optimal POVM with a
//! necessary-and-sufficient optimality certificate, guessing probability, and
//! a lower-bound search for accessible information.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::entropy::mutual_information;
use crate::error::{Error, Result};
use crate::linalg::{self, identity, CMatrix, HermitianEigen};
use crate::states::{ginibre_with, random_unitary_with, DensityOperator, Ensemble, Povm};

/// Outcome of a detection problem: error/detection probabilities, the
/// measurement achieving them, and the optimality-condition residual of that
/// measurement (zero certifies a global optimum).
#[derive(Debug, Clone)]
pub struct DetectionResult {
    pub p_e: f64,
    pub p_d: f64,
    pub povm: Povm,
    pub certificate_residual: f64,
}

/// Average detection probability sum_x p(x) Tr(Pi_x rho^x) of labeling
/// outcome x as signal x.
pub fn detection_probability(e: &Ensemble, povm: &Povm) -> f64 {
    e.iter()
        .enumerate()
        .map(|(x, (p, s))| p * linalg::trace_product_re(povm.element(x), s.matrix()))
        .sum()
}

/// Exact binary minimum-error discrimination:
/// P_e = (1/2)(1 - ||p0 rho0 - p1 rho1||_1), achieved by the projector onto
/// the nonnegative eigenspace of p0 rho0 - p1 rho1.
pub fn helstrom_binary(
    p0: f64,
    rho0: &DensityOperator,
    rho1: &DensityOperator,
) -> Result<DetectionResult> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::InvalidPrior(p0));
    }
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch(rho0.dim(), rho1.dim()));
    }
    let p1 = 1.0 - p0;
    let weighted = rho0.matrix().map(|z| z * p0) - rho1.matrix().map(|z| z * p1);
    let eig = HermitianEigen::new(&linalg::hermitian_part(&weighted))?;
    let norm1: f64 = eig.values.iter().map(|l| l.abs()).sum();
    let thr = eig.clamp_threshold();
    let plus = eig.apply(|lam| if lam >= -thr { 1.0 } else { 0.0 });
    let complement = identity(rho0.dim()) - &plus;
    let povm = Povm::from_elements_unchecked(vec![plus, complement]);
    let p_e = 0.5 * (1.0 - norm1);
    Ok(DetectionResult {
        p_e,
        p_d: 1.0 - p_e,
        povm,
        certificate_residual: 0.0,
    })
}

/// Pretty-good measurement: rho_bar^{-1/2} p(x) rho^x rho_bar^{-1/2} on the
/// support of rho_bar, with the kernel projector folded into element 0 so the
/// POVM stays exactly complete.
pub fn pretty_good_measurement(e: &Ensemble) -> Povm {
    let avg = e.average();
    let eig = avg.eigen();
    let thr = eig.clamp_threshold();
    let inv_sqrt = eig.apply(|lam| if lam > thr { lam.powf(-0.5) } else { 0.0 });
    let kernel = eig.apply(|lam| if lam > thr { 0.0 } else { 1.0 });
    let mut elements: Vec<CMatrix> = e
        .iter()
        .map(|(p, s)| {
            let scaled = s.matrix().map(|z| z * p);
            linalg::hermitian_part(&(&inv_sqrt * scaled * &inv_sqrt))
        })
        .collect();
    elements[0] += kernel;
    Povm::from_elements_unchecked(elements)
}

/// Optimality residual for the multi-hypothesis detection criterion: with
/// Upsilon = sum_i p(i) Pi_i rho_i, the POVM is optimal iff Upsilon is
/// Hermitian and Upsilon >= p(j) rho_j for every j. The residual is the
/// trace norm of Upsilon's anti-Hermitian part plus the largest trace norm
/// of the negative part among the dominance gaps; it vanishes (within
/// tolerance) exactly at the optimum.
pub fn optimality_residual(e: &Ensemble, povm: &Povm) -> Result<f64> {
    if povm.dim() != e.dim() {
        return Err(Error::DimensionMismatch(povm.dim(), e.dim()));
    }
    if povm.len() != e.len() {
        return Err(Error::LengthMismatch(povm.len(), e.len()));
    }
    let dim = e.dim();
    let mut upsilon = CMatrix::zeros(dim, dim);
    for (i, (p, s)) in e.iter().enumerate() {
        upsilon += (povm.element(i) * s.matrix()).map(|z| z * p);
    }
    let anti = (&upsilon - upsilon.adjoint()).map(|z| z * 0.5);
    // i * anti is Hermitian, so its absolute eigenvalue sum is ||anti||_1
    let anti_norm = linalg::abs_eigenvalue_sum(&anti.map(|z| z * num_complex::Complex::i()))?;
    let herm = linalg::hermitian_part(&upsilon);
    let mut worst_gap = 0.0f64;
    for (p, s) in e.iter() {
        let gap = &herm - s.matrix().map(|z| z * p);
        let eig = HermitianEigen::new(&linalg::hermitian_part(&gap))?;
        let neg: f64 = eig.values.iter().map(|&l| (-l).max(0.0)).sum();
        worst_gap = worst_gap.max(neg);
    }
    Ok(worst_gap + anti_norm)
}

/// One fixed-point update: Pi_i <- R^{-1/2} (p_i rho_i) Pi_i (p_i rho_i)
/// R^{-1/2} with R = sum_j (p_j rho_j) Pi_j (p_j rho_j); the kernel of R is
/// folded into element 0 to keep completeness exact.
fn fixed_point_step(e: &Ensemble, povm: &Povm) -> Result<Povm> {
    let dim = e.dim();
    let weighted: Vec<CMatrix> = e.iter().map(|(p, s)| s.matrix().map(|z| z * p)).collect();
    let mut r = CMatrix::zeros(dim, dim);
    for (i, a) in weighted.iter().enumerate() {
        r += a * povm.element(i) * a;
    }
    let eig = HermitianEigen::new(&linalg::hermitian_part(&r))?;
    let thr = eig.clamp_threshold();
    let inv_sqrt = eig.apply(|lam| if lam > thr { lam.powf(-0.5) } else { 0.0 });
    let kernel = eig.apply(|lam| if lam > thr { 0.0 } else { 1.0 });
    let mut elements: Vec<CMatrix> = weighted
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let m = &inv_sqrt * a * povm.element(i) * a * &inv_sqrt;
            linalg::hermitian_part(&m)
        })
        .collect();
    elements[0] += kernel;
    Ok(Povm::from_elements_unchecked(elements))
}

/// A detection optimization run with its per-iteration detection
/// probabilities (non-decreasing by construction: the loop halts rather than
/// accept a worse iterate).
#[derive(Debug, Clone)]
pub struct DetectionTrace {
    pub result: DetectionResult,
    pub history: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Decrease below the running best by more than this is treated as the
/// numerical noise floor and stops the iteration.
const MONOTONE_SLACK: f64 = 1e-13;

/// Fixed-point POVM search seeded with the pretty-good measurement, halting
/// when the optimality residual drops to `tol` or `max_iter` is reached.
/// Never fails outright: the best feasible POVM found is always returned,
/// with `converged` telling whether the certificate closed.
pub fn optimize_detection_traced(e: &Ensemble, tol: f64, max_iter: usize) -> DetectionTrace {
    let mut current = pretty_good_measurement(e);
    let mut current_pd = detection_probability(e, &current);
    let mut history = vec![current_pd];
    let mut best_pd = current_pd;
    let mut best_povm = current.clone();
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..=max_iter {
        iterations = iter;
        let residual = optimality_residual(e, &current).unwrap_or(f64::INFINITY);
        if current_pd >= best_pd {
            best_pd = current_pd;
            best_povm = current.clone();
        }
        if residual <= tol {
            converged = true;
            break;
        }
        if iter == max_iter {
            break;
        }
        let next = match fixed_point_step(e, &current) {
            Ok(p) => p,
            Err(_) => break,
        };
        let next_pd = detection_probability(e, &next);
        if next_pd < current_pd - MONOTONE_SLACK {
            break;
        }
        current = next;
        current_pd = next_pd;
        history.push(current_pd);
    }

    // guessing the most likely signal is always feasible; never return less
    let max_prior = e.priors().max();
    if best_pd < max_prior {
        let argmax = (0..e.len())
            .max_by(|&a, &b| e.prior(a).total_cmp(&e.prior(b)))
            .unwrap_or(0);
        let dim = e.dim();
        let mut elements = vec![CMatrix::zeros(dim, dim); e.len()];
        elements[argmax] = identity(dim);
        let blind = Povm::from_elements_unchecked(elements);
        let blind_pd = detection_probability(e, &blind);
        if blind_pd > best_pd {
            best_pd = blind_pd;
            best_povm = blind;
            converged = false;
        }
    }

    let certificate_residual = optimality_residual(e, &best_povm).unwrap_or(f64::INFINITY);
    let converged = converged || certificate_residual <= tol;
    DetectionTrace {
        result: DetectionResult {
            p_e: 1.0 - best_pd,
            p_d: best_pd,
            povm: best_povm,
            certificate_residual,
        },
        history,
        converged,
        iterations,
    }
}

pub const DEFAULT_DETECTION_TOL: f64 = 1e-7;
pub const DEFAULT_DETECTION_MAX_ITER: usize = 5_000;

/// [`optimize_detection_traced`] with the residual certificate required:
/// returns `Error::NoConvergence` (carrying the best result found) if it
/// stays above `tol` after `max_iter` iterations.
pub fn optimize_detection(e: &Ensemble, tol: f64, max_iter: usize) -> Result<DetectionResult> {
    let trace = optimize_detection_traced(e, tol, max_iter);
    if trace.converged {
        Ok(trace.result)
    } else {
        let residual = trace.result.certificate_residual;
        let iters = trace.iterations;
        Err(Error::NoConvergence {
            result: Box::new(trace.result),
            residual,
            tol,
            iters,
        })
    }
}

/// P_guess = P_d of the optimal detection (the guessing probability and the
/// detection probability coincide).
pub fn guessing_probability(e: &Ensemble, tol: f64) -> Result<f64> {
    optimize_detection(e, tol, DEFAULT_DETECTION_MAX_ITER).map(|r| r.p_d)
}

/// Search configuration for [`accessible_information`].
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Sphere grid size for the dim-2 projective sweep.
    pub grid_points: usize,
    /// Pattern-search refinement steps after the grid sweep.
    pub refine_steps: usize,
    /// Random-restart count for dimensions above 2.
    pub restarts: usize,
    /// Hill-climbing proposals per restart.
    pub ascent_steps: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_points: 2048,
            refine_steps: 60,
            restarts: 32,
            ascent_steps: 300,
            seed: 0,
        }
    }
}

/// Shannon mutual information of the outcome joint P(x, y) = p(x) Tr(Pi_y
/// rho^x) induced by measuring the ensemble.
pub fn measurement_mutual_information(e: &Ensemble, povm: &Povm) -> Result<f64> {
    Ok(mutual_information(&povm.outcome_joint(e)?))
}

fn bloch_projective_povm(theta: f64, phi: f64) -> Povm {
    let (nx, ny, nz) = (
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    );
    let c = num_complex::Complex::new;
    let plus = CMatrix::from_row_slice(
        2,
        2,
        &[
            c(0.5 * (1.0 + nz), 0.0),
            c(0.5 * nx, -0.5 * ny),
            c(0.5 * nx, 0.5 * ny),
            c(0.5 * (1.0 - nz), 0.0),
        ],
    );
    let minus = identity(2) - &plus;
    Povm::from_elements_unchecked(vec![plus, minus])
}

/// Projective measurement onto the columns of a unitary.
fn basis_povm(u: &CMatrix) -> Povm {
    let dim = u.nrows();
    let elements = (0..dim)
        .map(|k| {
            let col = u.column(k);
            CMatrix::from_fn(dim, dim, |i, j| col[i] * col[j].conj())
        })
        .collect();
    Povm::from_elements_unchecked(elements)
}

/// Best mutual information over a projective grid on the Bloch sphere
/// (Fibonacci lattice) followed by local pattern-search refinement.
fn accessible_information_qubit(e: &Ensemble, cfg: &SearchConfig) -> f64 {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    let n = cfg.grid_points.max(8);
    let mut best = (0.0f64, 0.0f64, 0.0f64); // (value, theta, phi)
    for k in 0..n {
        let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
        let theta = z.acos();
        let phi = golden * k as f64;
        let povm = bloch_projective_povm(theta, phi);
        let mi = measurement_mutual_information(e, &povm).unwrap_or(0.0);
        if mi > best.0 {
            best = (mi, theta, phi);
        }
    }
    // pattern search around the best grid point
    let mut step = std::f64::consts::PI / (n as f64).sqrt();
    let (mut value, mut theta, mut phi) = best;
    for _ in 0..cfg.refine_steps {
        let mut improved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let povm = bloch_projective_povm(theta + dt, phi + dp);
            let mi = measurement_mutual_information(e, &povm).unwrap_or(0.0);
            if mi > value {
                value = mi;
                theta += dt;
                phi += dp;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-10 {
                break;
            }
        }
    }
    value
}

/// Hill climb over projective bases via QR retraction of random tangent
/// perturbations.
fn accessible_information_ascent(e: &Ensemble, cfg: &SearchConfig) -> f64 {
    let dim = e.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = 0.0f64;

    // deterministic candidates: the average-state eigenbasis and the PGM
    let avg_basis = e.average().eigenvectors().clone();
    if let Ok(mi) = measurement_mutual_information(e, &basis_povm(&avg_basis)) {
        best = best.max(mi);
    }
    if let Ok(mi) = measurement_mutual_information(e, &pretty_good_measurement(e)) {
        best = best.max(mi);
    }

    for restart in 0..cfg.restarts {
        let mut u = if restart == 0 {
            avg_basis.clone()
        } else {
            random_unitary_with(dim, &mut rng)
        };
        let mut value = measurement_mutual_information(e, &basis_povm(&u)).unwrap_or(0.0);
        let mut eps = 0.3;
        let mut stale = 0usize;
        for _ in 0..cfg.ascent_steps {
            let g = ginibre_with(dim, &mut rng);
            let candidate = &u + g.map(|z| z * eps);
            let q = candidate.qr().q();
            let mi = measurement_mutual_information(e, &basis_povm(&q)).unwrap_or(0.0);
            if mi > value {
                value = mi;
                u = q;
                stale = 0;
            } else {
                stale += 1;
                if stale >= 8 {
                    eps *= 0.6;
                    stale = 0;
                    if eps < 1e-7 {
                        break;
                    }
                }
            }
        }
        best = best.max(value);
    }
    best
}

/// Lower bound on the accessible information max_Pi I(X; Y): the best
/// Shannon mutual information found over a parameterized measurement family
/// (exhaustive projective grid for qubits, random-restart ascent above).
/// The true maximum can only exceed the returned value.
pub fn accessible_information(e: &Ensemble, cfg: &SearchConfig) -> f64 {
    if e.dim() == 2 {
        accessible_information_qubit(e, cfg)
    } else {
        accessible_information_ascent(e, cfg)
    }
}
