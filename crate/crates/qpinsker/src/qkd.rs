//! Key-vs-eavesdropper machinery: classical-quantum key ensembles, the
//! guessing-probability sandwich 1/M <= P_guess <= 1/M + Delta_q, the
//! sub-optimal composite POVM behind its proof, and the perfect-case check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::detection::{
    optimize_detection_traced, DetectionTrace, DEFAULT_DETECTION_MAX_ITER, DEFAULT_DETECTION_TOL,
};
use crate::distance::trace_distance;
use crate::entropy::mutual_information;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianEigen};
use crate::states::{
    build_cq_state, random_povm_with, CQState, DensityOperator, Ensemble, JointDist, Povm,
    ProbDist,
};

/// Uniformity tolerance when deciding whether key priors count as uniform.
const PRIOR_TOL: f64 = 1e-12;

/// A key ensemble: the classical-quantum state between M key values and the
/// eavesdropper's conditional states, plus the ideal decoupled partner
/// rho_K (x) rho_E with rho_K the uniform key mixture.
#[derive(Debug, Clone)]
pub struct KeyEnsemble {
    cq: CQState,
    key_bits: Option<u32>,
}

impl KeyEnsemble {
    /// Builds from explicit priors; pass `None` for the uniform key.
    pub fn new(eve_states: Vec<DensityOperator>, priors: Option<ProbDist>) -> Result<Self> {
        let m = eve_states.len();
        let priors = match priors {
            Some(p) => {
                if p.len() != m {
                    return Err(Error::LengthMismatch(p.len(), m));
                }
                p
            }
            None => ProbDist::uniform(m),
        };
        let ensemble = Ensemble::new(priors, eve_states)?;
        Ok(KeyEnsemble {
            cq: build_cq_state(ensemble),
            key_bits: None,
        })
    }

    /// Uniform key over M = 2^bits values; the state count must match.
    pub fn from_key_bits(bits: u32, eve_states: Vec<DensityOperator>) -> Result<Self> {
        let m = 1usize << bits;
        if eve_states.len() != m {
            return Err(Error::LengthMismatch(m, eve_states.len()));
        }
        let mut ke = KeyEnsemble::new(eve_states, None)?;
        ke.key_bits = Some(bits);
        Ok(ke)
    }

    /// Number of key values M.
    pub fn m(&self) -> usize {
        self.cq.classical_dim()
    }

    pub fn key_bits(&self) -> Option<u32> {
        self.key_bits
    }

    pub fn eve_dim(&self) -> usize {
        self.cq.quantum_dim()
    }

    pub fn cq(&self) -> &CQState {
        &self.cq
    }

    /// The Eve-side ensemble {p(k), rho^k}.
    pub fn eve_ensemble(&self) -> &Ensemble {
        self.cq.ensemble()
    }

    pub fn has_uniform_priors(&self) -> bool {
        self.cq.ensemble().priors().is_uniform(PRIOR_TOL)
    }

    /// Dense realization of the real protocol state sum_k p(k)|k><k| (x) rho^k.
    pub fn real_dense(&self) -> DensityOperator {
        self.cq.dense()
    }

    /// Dense realization of the ideal state rho_K (x) rho_E
    /// = sum_k (1/M)|k><k| (x) rho_bar.
    pub fn ideal_dense(&self) -> DensityOperator {
        let m = self.m();
        let d = self.eve_dim();
        let avg = self.cq.avg();
        let w = 1.0 / m as f64;
        let mut mat = CMatrix::zeros(m * d, m * d);
        for k in 0..m {
            for r in 0..d {
                for c in 0..d {
                    mat[(k * d + r, k * d + c)] = avg.matrix()[(r, c)] * w;
                }
            }
        }
        DensityOperator::from_matrix_unchecked(mat)
    }
}

/// Spec-level constructor name for [`KeyEnsemble::new`].
pub fn build_key_ensemble(
    eve_states: Vec<DensityOperator>,
    priors: Option<ProbDist>,
) -> Result<KeyEnsemble> {
    KeyEnsemble::new(eve_states, priors)
}

/// Trace distance between the real protocol state and the ideal decoupled
/// one. For a uniform key this is computed blockwise as
/// (1/2) sum_k (1/M) ||rho^k - rho_bar||_1; nonuniform keys go through the
/// dense matrices (the blocks are p(k) rho^k - (1/M) rho_bar).
pub fn qkd_delta(k: &KeyEnsemble) -> f64 {
    if k.has_uniform_priors() {
        let avg = k.cq.avg();
        let w = 1.0 / k.m() as f64;
        let mut total = 0.0;
        for (_, s) in k.eve_ensemble().iter() {
            let diff = s.matrix() - avg.matrix();
            let eig = HermitianEigen::new(&linalg::hermitian_part(&diff))
                .expect("eigendecomposition of Hermitian difference");
            total += 0.5 * w * eig.values.iter().map(|l| l.abs()).sum::<f64>();
        }
        total
    } else {
        trace_distance(&k.real_dense(), &k.ideal_dense())
            .expect("equal dims by construction")
            .value
    }
}

/// The sub-optimal composite detector Lambda+ = sum_k |k><k| (x) Pi_k with
/// {Pi_k} the optimized Eve-side POVM, and its detection probabilities on
/// the real and ideal states.
#[derive(Debug, Clone)]
pub struct SuboptimalPovm {
    pub povm: Povm,
    /// Tr Lambda+ sum_k p(k) rho^k_KE (the summed form).
    pub p_d_real: f64,
    /// Tr Lambda+ (rho_K (x) rho_E); equals 1/M exactly.
    pub p_d_ideal: f64,
    /// Optimality residual of the Eve-side POVM used to assemble Lambda+.
    pub residual: f64,
}

fn assemble_composite_effect(m: usize, d: usize, blocks: &[CMatrix]) -> CMatrix {
    let mut effect = CMatrix::zeros(m * d, m * d);
    for (k, b) in blocks.iter().enumerate() {
        for r in 0..d {
            for c in 0..d {
                effect[(k * d + r, k * d + c)] = b[(r, c)];
            }
        }
    }
    effect
}

fn composite_from_trace(k: &KeyEnsemble, trace: &DetectionTrace) -> SuboptimalPovm {
    let eve_povm = &trace.result.povm;
    let m = k.m();
    let d = k.eve_dim();
    let effect = assemble_composite_effect(m, d, eve_povm.elements());
    let complement = linalg::identity(m * d) - &effect;
    let povm = Povm::from_elements_unchecked(vec![effect.clone(), complement]);

    let p_d_real = linalg::trace_product_re(&effect, k.real_dense().matrix());
    let p_d_ideal = linalg::trace_product_re(&effect, k.ideal_dense().matrix());
    debug_assert!(
        (p_d_ideal - 1.0 / m as f64).abs() <= 1e-9,
        "ideal detection probability must be exactly 1/M, got {p_d_ideal}"
    );
    SuboptimalPovm {
        povm,
        p_d_real,
        p_d_ideal,
        residual: trace.result.certificate_residual,
    }
}

/// Builds Lambda+ for a uniform-prior key ensemble. A non-converged Eve-side
/// optimization surfaces as a nonzero residual inside the result rather than
/// dropping the POVM.
pub fn suboptimal_povm(k: &KeyEnsemble) -> Result<SuboptimalPovm> {
    if !k.has_uniform_priors() {
        return Err(Error::NonUniformPriors);
    }
    let trace = optimize_detection_traced(k.eve_ensemble(), DEFAULT_DETECTION_TOL, DEFAULT_DETECTION_MAX_ITER);
    Ok(composite_from_trace(k, &trace))
}

/// One inequality of the derivation chain, with its two sides.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChainCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl ChainCheck {
    fn le(name: &'static str, lhs: f64, rhs: f64, tol: f64) -> Self {
        ChainCheck {
            name,
            lhs,
            rhs,
            pass: lhs <= rhs + tol,
        }
    }
}

/// The guessing-probability sandwich report: bounds, the certified-feasible
/// estimate, the sub-optimal detector value, and the derivation chain.
#[derive(Debug, Clone)]
pub struct GuessBoundReport {
    pub m: usize,
    /// Trace distance to the ideal protocol (statistical distance Delta_c on
    /// the classical path).
    pub delta_q: f64,
    /// 1/M, the pure-guessing floor.
    pub lower: f64,
    /// 1/M + Delta_q.
    pub upper: f64,
    /// Certified-feasible estimate of P(K)_guess.
    pub p_guess: f64,
    /// Detection probability of the sub-optimal composite POVM on the real
    /// state (equals `p_guess` on the quantum path by construction).
    pub p_d_sub: f64,
    /// Detection probability of the same POVM on the ideal state (1/M).
    pub p_d_ideal: f64,
    /// Optimality residual of the estimate's POVM.
    pub residual: f64,
    pub chain: Vec<ChainCheck>,
}

impl GuessBoundReport {
    pub fn all_pass(&self) -> bool {
        self.chain.iter().all(|c| c.pass)
    }
}

/// Inequality tolerance for the sandwich chain; a failure beyond this is an
/// implementation bug, not a physics event.
const CHAIN_TOL: f64 = 1e-7;

/// Assembles the full Theorem-7 sandwich for a key ensemble: Delta_q, the
/// 1/M bounds, the Lambda+ feasible detection probability, and the
/// optimized estimate of P_guess; validates every link of the chain.
pub fn guess_bound(k: &KeyEnsemble) -> Result<GuessBoundReport> {
    guess_bound_with(k, DEFAULT_DETECTION_TOL, DEFAULT_DETECTION_MAX_ITER)
}

pub fn guess_bound_with(k: &KeyEnsemble, tol: f64, max_iter: usize) -> Result<GuessBoundReport> {
    let m = k.m();
    let delta_q = qkd_delta(k);
    let lower = 1.0 / m as f64;
    let upper = lower + delta_q;

    let trace = optimize_detection_traced(k.eve_ensemble(), tol, max_iter);
    let sub = composite_from_trace(k, &trace);
    let p_guess = trace.result.p_d;

    let chain = vec![
        ChainCheck::le("ideal-detection-is-1-over-m", (sub.p_d_ideal - lower).abs(), 1e-9, 0.0),
        ChainCheck::le(
            "suboptimal-bias-below-delta",
            sub.p_d_real - sub.p_d_ideal,
            delta_q,
            1e-9,
        ),
        ChainCheck::le("suboptimal-below-upper", sub.p_d_real, upper, 1e-9),
        ChainCheck::le("suboptimal-feasible", sub.p_d_real, p_guess, CHAIN_TOL),
        ChainCheck::le("lower-bound", lower, p_guess, 1e-9),
        ChainCheck::le("upper-bound", p_guess, upper, CHAIN_TOL),
    ];

    let report = GuessBoundReport {
        m,
        delta_q,
        lower,
        upper,
        p_guess,
        p_d_sub: sub.p_d_real,
        p_d_ideal: sub.p_d_ideal,
        residual: trace.result.certificate_residual,
        chain,
    };
    if let Some(bad) = report.chain.iter().find(|c| !c.pass) {
        return Err(Error::SandwichViolation(format!(
            "{}: lhs {} vs rhs {}",
            bad.name, bad.lhs, bad.rhs
        )));
    }
    Ok(report)
}

/// Classical guessing bound: P_guess = sum_y max_x P(x, y) (exact
/// maximum-a-posteriori enumeration) against 1/M + Delta_c, with the key
/// marginal fixed to uniform 1/M as in the QKD setting. Ties at the max
/// posterior go to the lowest key index (which the sum is insensitive to).
pub fn classical_guess_bound(j: &JointDist) -> GuessBoundReport {
    let m = j.nx();
    let lower = 1.0 / m as f64;
    let mut p_guess = 0.0;
    for y in 0..j.ny() {
        let mut best = 0.0f64;
        for x in 0..m {
            if j.get(x, y) > best {
                best = j.get(x, y);
            }
        }
        p_guess += best;
    }
    // Delta_c against uniform-key product: (1/2) sum |P(x,y) - P(y)/M|
    let py = j.col_marginal();
    let mut norm = 0.0;
    for x in 0..m {
        for y in 0..j.ny() {
            norm += (j.get(x, y) - py.get(y) * lower).abs();
        }
    }
    let delta_c = 0.5 * norm;
    let upper = lower + delta_c;
    let chain = vec![
        ChainCheck::le("lower-bound", lower, p_guess, 1e-12),
        ChainCheck::le("upper-bound", p_guess, upper, 1e-12),
    ];
    GuessBoundReport {
        m,
        delta_q: delta_c,
        lower,
        upper,
        p_guess,
        p_d_sub: p_guess,
        p_d_ideal: lower,
        residual: 0.0,
        chain,
    }
}

/// Result of the perfect-case condition: Delta_q = 0 means the real and
/// ideal protocols coincide, and then no measurement can correlate the key
/// with Eve's data.
#[derive(Debug, Clone)]
pub struct PerfectCaseReport {
    pub perfect: bool,
    pub delta_q: f64,
    pub sampled_povms: usize,
    /// Largest I(K; E) over the sampled measurements (0 when none sampled).
    pub max_mutual_information: f64,
    /// True unless a sampled measurement extracted information beyond tol in
    /// a supposedly perfect case.
    pub pass: bool,
}

/// Checks Delta_q <= tol; when it holds, additionally verifies on sampled
/// random POVMs that the induced outcome joint carries no key information.
pub fn perfect_case_check(k: &KeyEnsemble, tol: f64, seed: u64) -> PerfectCaseReport {
    const POVM_SAMPLES: usize = 16;
    let delta_q = qkd_delta(k);
    let perfect = delta_q <= tol;
    if !perfect {
        return PerfectCaseReport {
            perfect,
            delta_q,
            sampled_povms: 0,
            max_mutual_information: 0.0,
            pass: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = k.eve_dim();
    let mut max_mi = 0.0f64;
    for _ in 0..POVM_SAMPLES {
        let povm = random_povm_with(d, d + 1, &mut rng);
        if let Ok(joint) = povm.outcome_joint(k.eve_ensemble()) {
            max_mi = max_mi.max(mutual_information(&joint));
        }
    }
    PerfectCaseReport {
        perfect,
        delta_q,
        sampled_povms: POVM_SAMPLES,
        max_mutual_information: max_mi,
        pass: max_mi <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVector;
    use crate::states::{basis_ket, maximally_mixed, pure_state};
    use crate::tol::Tolerances;
    use num_complex::Complex;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn zero_state() -> DensityOperator {
        pure_state(&basis_ket(2, 0)).unwrap()
    }

    fn one_state() -> DensityOperator {
        pure_state(&basis_ket(2, 1)).unwrap()
    }

    fn plus_state() -> DensityOperator {
        pure_state(&CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)])).unwrap()
    }

    fn minus_state() -> DensityOperator {
        pure_state(&CVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)])).unwrap()
    }

    fn zero_plus_key() -> KeyEnsemble {
        KeyEnsemble::new(vec![zero_state(), plus_state()], None).unwrap()
    }

    #[test]
    fn build_key_ensemble_examples() {
        let same = KeyEnsemble::new(vec![maximally_mixed(2); 2], None).unwrap();
        assert_eq!(same.m(), 2);
        assert!(qkd_delta(&same) < 1e-12);

        let leaky = KeyEnsemble::new(vec![zero_state(), one_state()], None).unwrap();
        assert!((qkd_delta(&leaky) - 0.5).abs() < 1e-12);

        // BB84-like four states average to I/2
        let bb84 = KeyEnsemble::from_key_bits(
            2,
            vec![zero_state(), one_state(), plus_state(), minus_state()],
        )
        .unwrap();
        assert_eq!(bb84.m(), 4);
        assert_eq!(bb84.key_bits(), Some(2));
        let avg = bb84.cq().avg();
        assert!(
            crate::linalg::max_entry_diff(avg.matrix(), maximally_mixed(2).matrix()) < 1e-12
        );

        assert!(matches!(
            KeyEnsemble::from_key_bits(2, vec![zero_state()]),
            Err(Error::LengthMismatch(4, 1))
        ));
    }

    #[test]
    fn qkd_delta_examples() {
        assert!((qkd_delta(&zero_plus_key()) - 0.353_553_390_593_273_7).abs() < 1e-12);

        // nonuniform priors route through the dense computation
        let priors = ProbDist::new(vec![0.7, 0.3], &tol()).unwrap();
        let ke = KeyEnsemble::new(vec![zero_state(), plus_state()], Some(priors)).unwrap();
        let dense = trace_distance(&ke.real_dense(), &ke.ideal_dense()).unwrap().value;
        assert!((qkd_delta(&ke) - dense).abs() < 1e-12);
    }

    #[test]
    fn uniform_delta_matches_dense() {
        let ke = zero_plus_key();
        let dense = trace_distance(&ke.real_dense(), &ke.ideal_dense()).unwrap().value;
        assert!((qkd_delta(&ke) - dense).abs() < 1e-12);
    }

    #[test]
    fn suboptimal_povm_examples() {
        let same = KeyEnsemble::new(vec![maximally_mixed(2); 2], None).unwrap();
        let sub = suboptimal_povm(&same).unwrap();
        assert!((sub.p_d_real - 0.5).abs() < 1e-9);
        assert!((sub.p_d_ideal - 0.5).abs() < 1e-12);

        let sub = suboptimal_povm(&zero_plus_key()).unwrap();
        assert!((sub.p_d_real - 0.853_553_390_593_273_7).abs() < 1e-7);
        assert!((sub.p_d_ideal - 0.5).abs() < 1e-12);

        let leaky = KeyEnsemble::new(vec![zero_state(), one_state()], None).unwrap();
        let sub = suboptimal_povm(&leaky).unwrap();
        assert!((sub.p_d_real - 1.0).abs() < 1e-9);
        assert!((sub.p_d_ideal - 0.5).abs() < 1e-12);

        let priors = ProbDist::new(vec![0.7, 0.3], &tol()).unwrap();
        let nonuniform = KeyEnsemble::new(vec![zero_state(), one_state()], Some(priors)).unwrap();
        assert!(matches!(
            suboptimal_povm(&nonuniform),
            Err(Error::NonUniformPriors)
        ));
    }

    #[test]
    fn guess_bound_examples() {
        let same = KeyEnsemble::new(vec![maximally_mixed(2); 4], None).unwrap();
        let r = guess_bound(&same).unwrap();
        assert!((r.lower - 0.25).abs() < 1e-15);
        assert!((r.upper - 0.25).abs() < 1e-12);
        assert!((r.p_guess - 0.25).abs() < 1e-9);
        assert!(r.all_pass());

        // binary equal-prior saturation: upper bound equals P_guess
        let r = guess_bound(&zero_plus_key()).unwrap();
        assert!((r.p_guess - 0.853_553_390_593_273_7).abs() < 1e-7);
        assert!((r.upper - 0.853_553_390_593_273_7).abs() < 1e-12);
        assert!((r.upper - r.p_guess).abs() < 1e-7);

        let leaky = KeyEnsemble::new(vec![zero_state(), one_state()], None).unwrap();
        let r = guess_bound(&leaky).unwrap();
        assert!((r.p_guess - 1.0).abs() < 1e-9);
        assert!((r.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_guess_bound_examples() {
        let indep = JointDist::from_rows(&[vec![0.25, 0.25], vec![0.25, 0.25]], &tol()).unwrap();
        let r = classical_guess_bound(&indep);
        assert!((r.p_guess - 0.5).abs() < 1e-15);
        assert!(r.delta_q.abs() < 1e-15);
        assert!(r.all_pass());

        // saturation: columnwise max 0.8, termwise norm 0.6
        let j = JointDist::from_rows(&[vec![0.4, 0.1], vec![0.1, 0.4]], &tol()).unwrap();
        let r = classical_guess_bound(&j);
        assert!((r.p_guess - 0.8).abs() < 1e-12);
        assert!((r.delta_q - 0.3).abs() < 1e-12);
        assert!((r.upper - 0.8).abs() < 1e-12);
        assert!(r.all_pass());

        // diag(1/M): p_guess = 1, Delta_c = 1 - 1/M
        for m in [2usize, 4] {
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|x| (0..m).map(|y| if x == y { 1.0 / m as f64 } else { 0.0 }).collect())
                .collect();
            let j = JointDist::from_rows(&rows, &tol()).unwrap();
            let r = classical_guess_bound(&j);
            assert!((r.p_guess - 1.0).abs() < 1e-12);
            assert!((r.delta_q - (1.0 - 1.0 / m as f64)).abs() < 1e-12);
            assert!((r.upper - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn perfect_case_examples() {
        let same = KeyEnsemble::new(vec![maximally_mixed(2); 2], None).unwrap();
        let r = perfect_case_check(&same, 1e-9, 7);
        assert!(r.perfect);
        assert!(r.pass);
        assert!(r.max_mutual_information <= 1e-9);

        let r = perfect_case_check(&zero_plus_key(), 1e-9, 7);
        assert!(!r.perfect);

        // epsilon-perturbed identical states: Delta_q scales linearly
        let eps = 1e-3;
        let mix_eps = |eps: f64| {
            let m = zero_state().matrix().map(|z| z * (1.0 - eps))
                + maximally_mixed(2).matrix().map(|z| z * eps);
            DensityOperator::from_matrix_unchecked(m)
        };
        let ke = KeyEnsemble::new(vec![zero_state(), mix_eps(eps)], None).unwrap();
        let r = perfect_case_check(&ke, 1e-9, 7);
        assert!(!r.perfect);
        let ratio = r.delta_q / eps;
        let ke2 = KeyEnsemble::new(vec![zero_state(), mix_eps(eps / 10.0)], None).unwrap();
        let ratio2 = qkd_delta(&ke2) / (eps / 10.0);
        assert!(
            (ratio - ratio2).abs() < 1e-3,
            "blockwise norm should scale linearly: {ratio} vs {ratio2}"
        );
    }
}
