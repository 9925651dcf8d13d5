//! Randomized verification suites: sweep random instances through every
//! bound and identity, track the worst margin, and report enough data
//! (seed, instance index, serialized instance) to re-run any failure in
//! isolation. Instances are generated from one explicit seed and visited
//! sequentially, so reports are deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digest::InstanceDigest;
use crate::entropy::{
    classical_relative_entropy, cq_joint_entropy, holevo_information,
    holevo_information_via_relative_entropy, mutual_information, quantum_mutual_information,
    quantum_mutual_information_via_relative_entropy, von_neumann_entropy,
};
use crate::error::Error;
use crate::inequalities::{
    holevo_vs_trace, pinsker_classical, pinsker_mutual, pinsker_quantum, pinsker_quantum_mutual,
    BoundCheck, SLACK_TOL,
};
use crate::io;
use crate::qkd::{guess_bound_with, KeyEnsemble};
use crate::states::{
    build_cq_state, random_joint_with, random_mixed_with, random_prob_floored_with,
    random_prob_with, random_pure_with, DensityOperator, Ensemble, ProbDist,
};

/// Knobs for the randomized suites. Defaults match the crate's acceptance
/// configuration; the CLI overrides samples, seed, and state dims.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    /// State dimensions swept by the quantum Pinsker suite.
    pub state_dims: Vec<usize>,
    /// Distribution sizes swept by the classical Pinsker suite.
    pub prob_sizes: Vec<usize>,
    /// Largest classical label count for ensemble suites.
    pub max_classical: usize,
    /// Largest quantum dimension for ensemble/key suites.
    pub max_quantum: usize,
    /// Key counts M swept by the guessing-probability suite.
    pub key_counts: Vec<usize>,
    /// Residual target handed to the detection optimizer.
    pub detection_tol: f64,
    pub max_iter: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples: 1000,
            seed: 0,
            state_dims: vec![2, 3, 4, 8],
            prob_sizes: vec![2, 4, 8, 16],
            max_classical: 8,
            max_quantum: 4,
            key_counts: vec![2, 4, 8],
            detection_tol: 1e-7,
            max_iter: 5_000,
        }
    }
}

/// Outcome of one bound suite: instance count, the minimum slack seen, and a
/// pointer (index + digest + serialized form) to the argmin instance.
#[derive(Debug, Clone)]
pub struct BoundSuiteReport {
    pub suite: &'static str,
    pub instances: usize,
    pub seed: u64,
    pub min_slack: f64,
    pub argmin_index: usize,
    pub argmin_digest: String,
    /// Serialized argmin instance, populated when the suite fails.
    pub argmin_instance: Option<String>,
    pub pass: bool,
}

/// Outcome of one identity suite: the largest |lhs - rhs| seen.
#[derive(Debug, Clone)]
pub struct IdentitySuiteReport {
    pub suite: &'static str,
    pub instances: usize,
    pub seed: u64,
    pub max_abs_diff: f64,
    pub argmax_index: usize,
    pub argmax_digest: String,
    pub argmax_instance: Option<String>,
    pub pass: bool,
}

/// Identity suites must agree to this tolerance.
pub const IDENTITY_TOL: f64 = 1e-9;

fn stream(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(tag))
}

/// Zeroes a random subset of entries (keeping at least one) and
/// renormalizes; exercises the +infinity / vacuous-pass paths.
fn sparsify<R: Rng + ?Sized>(p: &ProbDist, rng: &mut R) -> ProbDist {
    let n = p.len();
    let mut kept: Vec<f64> = p.as_slice().to_vec();
    for v in kept.iter_mut() {
        if rng.random::<f64>() < 0.3 {
            *v = 0.0;
        }
    }
    if kept.iter().all(|&v| v == 0.0) {
        kept[rng.random_range(0..n)] = 1.0;
    }
    let sum: f64 = kept.iter().sum();
    ProbDist::new(kept.into_iter().map(|v| v / sum).collect(), &Default::default())
        .expect("renormalized vector is a distribution")
}

fn random_ensemble<R: Rng + ?Sized>(
    classical: usize,
    dim: usize,
    uniform_priors: bool,
    rng: &mut R,
) -> Ensemble {
    let states: Vec<DensityOperator> = (0..classical)
        .map(|_| {
            if rng.random::<f64>() < 0.3 {
                random_pure_with(dim, rng)
            } else {
                random_mixed_with(dim, rng)
            }
        })
        .collect();
    let priors = if uniform_priors {
        ProbDist::uniform(classical)
    } else {
        random_prob_floored_with(classical, rng)
    };
    Ensemble::new(priors, states).expect("lengths match by construction")
}

struct BoundTracker {
    suite: &'static str,
    seed: u64,
    instances: usize,
    min_slack: f64,
    argmin_index: usize,
    argmin_digest: String,
    argmin_json: String,
}

impl BoundTracker {
    fn new(suite: &'static str, seed: u64) -> Self {
        BoundTracker {
            suite,
            seed,
            instances: 0,
            min_slack: f64::INFINITY,
            argmin_index: 0,
            argmin_digest: String::new(),
            argmin_json: String::new(),
        }
    }

    /// Feeds one instance; infinite slack counts as a vacuous pass and never
    /// becomes the argmin unless nothing finite was seen.
    fn push(&mut self, check: &BoundCheck, instance_json: impl FnOnce() -> String) {
        let index = self.instances;
        self.instances += 1;
        if check.slack < self.min_slack {
            self.min_slack = check.slack;
            self.argmin_index = index;
            self.argmin_digest = check.inputs_digest.clone();
            self.argmin_json = instance_json();
        }
    }

    fn finish(self) -> BoundSuiteReport {
        let pass = self.min_slack >= -SLACK_TOL;
        BoundSuiteReport {
            suite: self.suite,
            instances: self.instances,
            seed: self.seed,
            min_slack: self.min_slack,
            argmin_index: self.argmin_index,
            argmin_digest: self.argmin_digest,
            argmin_instance: if pass { None } else { Some(self.argmin_json) },
            pass,
        }
    }
}

/// Classical Pinsker over random distribution pairs at every configured size.
pub fn suite_theorem1(cfg: &SuiteConfig) -> BoundSuiteReport {
    let mut rng = stream(cfg.seed, 1);
    let mut tracker = BoundTracker::new("theorem-1", cfg.seed);
    for _ in 0..cfg.samples {
        for &n in &cfg.prob_sizes {
            let p = random_prob_with(n, &mut rng);
            let mut q = random_prob_with(n, &mut rng);
            if rng.random::<f64>() < 0.15 {
                q = sparsify(&q, &mut rng);
            }
            let check = pinsker_classical(&p, &q).expect("equal lengths");
            tracker.push(&check, || {
                format!("{{\"p\":{},\"q\":{}}}", io::probs_to_json(&p), io::probs_to_json(&q))
            });
        }
    }
    tracker.finish()
}

/// Mutual-information Pinsker over random joints up to 8x8.
pub fn suite_theorem2(cfg: &SuiteConfig) -> BoundSuiteReport {
    let mut rng = stream(cfg.seed, 2);
    let mut tracker = BoundTracker::new("theorem-2", cfg.seed);
    for _ in 0..cfg.samples {
        let nx = rng.random_range(2..=8);
        let ny = rng.random_range(2..=8);
        let j = random_joint_with(nx, ny, &mut rng);
        let check = pinsker_mutual(&j);
        tracker.push(&check, || io::joint_to_json(&j));
    }
    tracker.finish()
}

/// Quantum Pinsker over random state pairs at every configured dimension.
pub fn suite_theorem3(cfg: &SuiteConfig) -> BoundSuiteReport {
    let mut rng = stream(cfg.seed, 3);
    let mut tracker = BoundTracker::new("theorem-3", cfg.seed);
    for _ in 0..cfg.samples {
        for &dim in &cfg.state_dims {
            let rho = if rng.random::<f64>() < 0.1 {
                random_pure_with(dim, &mut rng)
            } else {
                random_mixed_with(dim, &mut rng)
            };
            let sigma = if rng.random::<f64>() < 0.1 {
                random_pure_with(dim, &mut rng)
            } else {
                random_mixed_with(dim, &mut rng)
            };
            let check = pinsker_quantum(&rho, &sigma).expect("equal dims");
            tracker.push(&check, || {
                format!(
                    "{{\"rho\":{},\"sigma\":{}}}",
                    io::operator_to_json(&rho),
                    io::operator_to_json(&sigma)
                )
            });
        }
    }
    tracker.finish()
}

/// Quantum mutual-information Pinsker over random bipartite states.
pub fn suite_theorem4(cfg: &SuiteConfig) -> BoundSuiteReport {
    let mut rng = stream(cfg.seed, 4);
    let mut tracker = BoundTracker::new("theorem-4", cfg.seed);
    for _ in 0..cfg.samples {
        let da = rng.random_range(2..=4);
        let db = rng.random_range(2..=4);
        let rho = random_mixed_with(da * db, &mut rng);
        let check = pinsker_quantum_mutual(&rho, (da, db)).expect("dims factor");
        tracker.push(&check, || {
            format!(
                "{{\"rho_ab\":{},\"dims\":[{da},{db}]}}",
                io::operator_to_json(&rho)
            )
        });
    }
    tracker.finish()
}

/// Holevo vs classical-quantum trace distance over random ensembles.
pub fn suite_theorem5(cfg: &SuiteConfig) -> BoundSuiteReport {
    let mut rng = stream(cfg.seed, 5);
    let mut tracker = BoundTracker::new("theorem-5", cfg.seed);
    for _ in 0..cfg.samples {
        let classical = rng.random_range(2..=cfg.max_classical);
        let dim = rng.random_range(2..=cfg.max_quantum);
        let uniform = rng.random::<f64>() < 0.5;
        let e = random_ensemble(classical, dim, uniform, &mut rng);
        let check = holevo_vs_trace(&e);
        tracker.push(&check, || io::ensemble_to_json(&e));
    }
    tracker.finish()
}

/// Classical guessing bound over random joints with M rows.
pub fn suite_theorem6(cfg: &SuiteConfig) -> BoundSuiteReport {
    let mut rng = stream(cfg.seed, 6);
    let mut tracker = BoundTracker::new("theorem-6", cfg.seed);
    for i in 0..cfg.samples {
        let m = cfg.key_counts[i % cfg.key_counts.len()];
        let ny = rng.random_range(2..=8);
        let j = random_joint_with(m, ny, &mut rng);
        let report = crate::qkd::classical_guess_bound(&j);
        let digest = InstanceDigest::new("thm6").push_joint(&j).finish();
        let check = BoundCheck {
            theorem: "theorem-6",
            lhs: report.upper,
            rhs: report.p_guess,
            slack: report.upper - report.p_guess,
            inputs_digest: digest,
        };
        tracker.push(&check, || io::joint_to_json(&j));
    }
    tracker.finish()
}

/// Theorem-7 sandwich over random key ensembles; the slack is the tightest
/// margin among the sandwich sides and the derivation-chain inequalities.
pub fn suite_theorem7(cfg: &SuiteConfig) -> BoundSuiteReport {
    let mut rng = stream(cfg.seed, 7);
    let mut tracker = BoundTracker::new("theorem-7", cfg.seed);
    for i in 0..cfg.samples {
        let m = cfg.key_counts[i % cfg.key_counts.len()];
        let dim = rng.random_range(2..=cfg.max_quantum);
        let uniform = rng.random::<f64>() < 0.8;
        let e = random_ensemble(m, dim, uniform, &mut rng);
        let priors = e.priors().clone();
        let ke = KeyEnsemble::new(e.states().to_vec(), Some(priors))
            .expect("valid ensemble parts");
        let digest = InstanceDigest::new("thm7").push_ensemble(&e).finish();
        let (slack, lhs, rhs) = match guess_bound_with(&ke, cfg.detection_tol, cfg.max_iter) {
            Ok(report) => {
                let upper_margin = report.upper - report.p_guess;
                let lower_margin = report.p_guess - report.lower;
                let chain_margin = report
                    .chain
                    .iter()
                    .map(|c| c.rhs - c.lhs)
                    .fold(f64::INFINITY, f64::min);
                (
                    upper_margin.min(lower_margin).min(chain_margin),
                    report.p_guess,
                    report.upper,
                )
            }
            Err(Error::SandwichViolation(_)) => (f64::NEG_INFINITY, f64::NAN, f64::NAN),
            Err(_) => (f64::NEG_INFINITY, f64::NAN, f64::NAN),
        };
        let check = BoundCheck {
            theorem: "theorem-7",
            lhs,
            rhs,
            slack,
            inputs_digest: digest,
        };
        tracker.push(&check, || io::ensemble_to_json(&e));
    }
    tracker.finish()
}

struct IdentityTracker {
    suite: &'static str,
    seed: u64,
    instances: usize,
    max_abs_diff: f64,
    argmax_index: usize,
    argmax_digest: String,
    argmax_json: String,
}

impl IdentityTracker {
    fn new(suite: &'static str, seed: u64) -> Self {
        IdentityTracker {
            suite,
            seed,
            instances: 0,
            max_abs_diff: 0.0,
            argmax_index: 0,
            argmax_digest: String::new(),
            argmax_json: String::new(),
        }
    }

    fn push(&mut self, lhs: f64, rhs: f64, digest: String, instance_json: impl FnOnce() -> String) {
        let diff = if lhs.is_infinite() && rhs.is_infinite() {
            0.0
        } else {
            (lhs - rhs).abs()
        };
        let index = self.instances;
        self.instances += 1;
        if diff > self.max_abs_diff || self.instances == 1 {
            self.max_abs_diff = diff;
            self.argmax_index = index;
            self.argmax_digest = digest;
            self.argmax_json = instance_json();
        }
    }

    fn finish(self) -> IdentitySuiteReport {
        let pass = self.max_abs_diff <= IDENTITY_TOL;
        IdentitySuiteReport {
            suite: self.suite,
            instances: self.instances,
            seed: self.seed,
            max_abs_diff: self.max_abs_diff,
            argmax_index: self.argmax_index,
            argmax_digest: self.argmax_digest,
            argmax_instance: if pass { None } else { Some(self.argmax_json) },
            pass,
        }
    }
}

/// Relative entropy of a joint against its marginal product equals the
/// mutual information.
pub fn suite_identity_eq5(cfg: &SuiteConfig) -> IdentitySuiteReport {
    let mut rng = stream(cfg.seed, 105);
    let mut tracker = IdentityTracker::new("identity-eq5", cfg.seed);
    for _ in 0..cfg.samples {
        let nx = rng.random_range(2..=8);
        let ny = rng.random_range(2..=8);
        let j = random_joint_with(nx, ny, &mut rng);
        let lhs = classical_relative_entropy(&j.flattened(), &j.product_of_marginals().flattened())
            .expect("equal lengths");
        let rhs = mutual_information(&j);
        let digest = InstanceDigest::new("eq5").push_joint(&j).finish();
        tracker.push(lhs, rhs, digest, || io::joint_to_json(&j));
    }
    tracker.finish()
}

fn random_cq_instance<R: Rng + ?Sized>(cfg: &SuiteConfig, rng: &mut R) -> Ensemble {
    let classical = rng.random_range(2..=cfg.max_classical.min(4));
    let dim = rng.random_range(2..=cfg.max_quantum.min(4));
    let uniform = rng.random::<f64>() < 0.5;
    random_ensemble(classical, dim, uniform, rng)
}

/// Structured classical-quantum joint entropy equals the dense spectrum
/// entropy.
pub fn suite_identity_eq15(cfg: &SuiteConfig) -> IdentitySuiteReport {
    let mut rng = stream(cfg.seed, 115);
    let mut tracker = IdentityTracker::new("identity-eq15", cfg.seed);
    for _ in 0..cfg.samples {
        let e = random_cq_instance(cfg, &mut rng);
        let cq = build_cq_state(e.clone());
        let lhs = cq_joint_entropy(&cq);
        let rhs = von_neumann_entropy(&cq.dense());
        let digest = InstanceDigest::new("eq15").push_ensemble(&e).finish();
        tracker.push(lhs, rhs, digest, || io::ensemble_to_json(&e));
    }
    tracker.finish()
}

/// Holevo information equals the quantum mutual information of the dense
/// classical-quantum state.
pub fn suite_identity_eq16(cfg: &SuiteConfig) -> IdentitySuiteReport {
    let mut rng = stream(cfg.seed, 116);
    let mut tracker = IdentityTracker::new("identity-eq16", cfg.seed);
    for _ in 0..cfg.samples {
        let e = random_cq_instance(cfg, &mut rng);
        let cq = build_cq_state(e.clone());
        let lhs = holevo_information(&e);
        let rhs = quantum_mutual_information(&cq.dense(), (cq.classical_dim(), cq.quantum_dim()))
            .expect("dims factor");
        let digest = InstanceDigest::new("eq16").push_ensemble(&e).finish();
        tracker.push(lhs, rhs, digest, || io::ensemble_to_json(&e));
    }
    tracker.finish()
}

/// Quantum mutual information equals the relative entropy against the
/// marginal product.
pub fn suite_identity_eq17(cfg: &SuiteConfig) -> IdentitySuiteReport {
    let mut rng = stream(cfg.seed, 117);
    let mut tracker = IdentityTracker::new("identity-eq17", cfg.seed);
    for _ in 0..cfg.samples {
        let da = rng.random_range(2..=4);
        let db = rng.random_range(2..=4);
        let rho = random_mixed_with(da * db, &mut rng);
        let lhs = quantum_mutual_information(&rho, (da, db)).expect("dims factor");
        let rhs =
            quantum_mutual_information_via_relative_entropy(&rho, (da, db)).expect("dims factor");
        let digest = InstanceDigest::new("eq17")
            .push_state(&rho)
            .push_usize(da)
            .push_usize(db)
            .finish();
        tracker.push(lhs, rhs, digest, || io::operator_to_json(&rho));
    }
    tracker.finish()
}

/// Holevo information equals the prior-weighted relative entropies against
/// the average state.
pub fn suite_identity_eq18(cfg: &SuiteConfig) -> IdentitySuiteReport {
    let mut rng = stream(cfg.seed, 118);
    let mut tracker = IdentityTracker::new("identity-eq18", cfg.seed);
    for _ in 0..cfg.samples {
        let e = random_cq_instance(cfg, &mut rng);
        let lhs = holevo_information(&e);
        let rhs = holevo_information_via_relative_entropy(&e).expect("well-formed ensemble");
        let digest = InstanceDigest::new("eq18").push_ensemble(&e).finish();
        tracker.push(lhs, rhs, digest, || io::ensemble_to_json(&e));
    }
    tracker.finish()
}

/// Which suites a verify run covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteSelection {
    All,
    Theorems(Vec<u8>),
    Identities,
}

/// Aggregated verify run.
#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub bound_suites: Vec<BoundSuiteReport>,
    pub identity_suites: Vec<IdentitySuiteReport>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.bound_suites.iter().all(|s| s.pass)
            && self.identity_suites.iter().all(|s| s.pass)
    }
}

pub fn run_verify(selection: &SuiteSelection, cfg: &SuiteConfig) -> VerifyReport {
    let mut report = VerifyReport::default();
    let theorems: Vec<u8> = match selection {
        SuiteSelection::All => vec![1, 2, 3, 4, 5, 6, 7],
        SuiteSelection::Theorems(list) => list.clone(),
        SuiteSelection::Identities => vec![],
    };
    for t in theorems {
        let suite = match t {
            1 => suite_theorem1(cfg),
            2 => suite_theorem2(cfg),
            3 => suite_theorem3(cfg),
            4 => suite_theorem4(cfg),
            5 => suite_theorem5(cfg),
            6 => suite_theorem6(cfg),
            7 => suite_theorem7(cfg),
            other => panic!("no such theorem suite: {other}"),
        };
        report.bound_suites.push(suite);
    }
    if matches!(selection, SuiteSelection::All | SuiteSelection::Identities) {
        report.identity_suites.push(suite_identity_eq5(cfg));
        report.identity_suites.push(suite_identity_eq15(cfg));
        report.identity_suites.push(suite_identity_eq16(cfg));
        report.identity_suites.push(suite_identity_eq17(cfg));
        report.identity_suites.push(suite_identity_eq18(cfg));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> SuiteConfig {
        SuiteConfig {
            samples: 25,
            seed: 7,
            state_dims: vec![2, 3],
            prob_sizes: vec![2, 4],
            max_classical: 4,
            max_quantum: 3,
            key_counts: vec![2, 4],
            detection_tol: 1e-7,
            max_iter: 2_000,
        }
    }

    #[test]
    fn bound_suites_pass_on_small_sweeps() {
        let cfg = small_cfg();
        for report in [
            suite_theorem1(&cfg),
            suite_theorem2(&cfg),
            suite_theorem3(&cfg),
            suite_theorem4(&cfg),
            suite_theorem5(&cfg),
            suite_theorem6(&cfg),
        ] {
            assert!(
                report.pass,
                "{} failed: min slack {} at {}",
                report.suite, report.min_slack, report.argmin_index
            );
            assert!(report.instances >= cfg.samples);
            assert!(!report.argmin_digest.is_empty());
        }
    }

    #[test]
    fn theorem7_suite_passes_on_small_sweep() {
        let report = suite_theorem7(&small_cfg());
        assert!(report.pass, "min slack {}", report.min_slack);
    }

    #[test]
    fn identity_suites_agree() {
        let cfg = small_cfg();
        for report in [
            suite_identity_eq5(&cfg),
            suite_identity_eq15(&cfg),
            suite_identity_eq16(&cfg),
            suite_identity_eq17(&cfg),
            suite_identity_eq18(&cfg),
        ] {
            assert!(
                report.pass,
                "{} disagreed by {}",
                report.suite, report.max_abs_diff
            );
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let cfg = small_cfg();
        let a = suite_theorem3(&cfg);
        let b = suite_theorem3(&cfg);
        assert_eq!(a.min_slack.to_bits(), b.min_slack.to_bits());
        assert_eq!(a.argmin_digest, b.argmin_digest);
    }
}
