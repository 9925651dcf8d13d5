//! Randomized and property-based invariants across the crate: metric axioms,
//! variational characterizations, nonnegativity, cross-theorem consistency,
//! and the measurement-versus-quantum-guessing dominance chain.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpinsker::linalg::{max_entry_diff, trace_product_re, CMatrix, C64};
use qpinsker::prelude::*;
use qpinsker::states::{
    ginibre_with, random_joint_with, random_mixed_with, random_povm_with,
    random_prob_floored_with, random_prob_with, random_pure_with,
};

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn trace_distance_metric_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..60 {
        let dim = rng.random_range(2..=8);
        let a = random_mixed_with(dim, &mut rng);
        let b = random_mixed_with(dim, &mut rng);
        let c = random_mixed_with(dim, &mut rng);
        let dab = trace_distance(&a, &b).unwrap().value;
        let dba = trace_distance(&b, &a).unwrap().value;
        let dac = trace_distance(&a, &c).unwrap().value;
        let dcb = trace_distance(&c, &b).unwrap().value;
        assert!((dab - dba).abs() < 1e-9, "symmetry");
        assert!(dab <= dac + dcb + 1e-9, "triangle inequality");
        assert!(trace_distance(&a, &a).unwrap().value < 1e-9, "identity");
        assert!((-1e-9..=1.0 + 1e-9).contains(&dab), "range");
    }
}

#[test]
fn variational_dominance_over_two_outcome_tests() {
    // Delta_q is the max of Tr(Lambda (rho - sigma)) over tests Lambda
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let rho = random_mixed_with(4, &mut rng);
    let sigma = random_mixed_with(4, &mut rng);
    let delta = trace_distance(&rho, &sigma).unwrap().value;
    let diff = rho.matrix() - sigma.matrix();
    for _ in 0..100 {
        let test = random_povm_with(4, 2, &mut rng);
        let bias = trace_product_re(test.element(0), &diff);
        assert!(bias <= delta + 1e-9, "bias {bias} exceeds Delta_q {delta}");
    }
}

#[test]
fn pure_state_trace_distance_overlap_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..50 {
        let dim = rng.random_range(2..=6);
        let psi = random_pure_with(dim, &mut rng);
        let phi = random_pure_with(dim, &mut rng);
        let overlap = trace_product_re(psi.matrix(), phi.matrix());
        let expected = (1.0 - overlap).max(0.0).sqrt();
        let got = trace_distance(&psi, &phi).unwrap().value;
        assert!((got - expected).abs() < 1e-9);
    }
}

#[test]
fn random_mixed_mean_approaches_maximally_mixed() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut acc = CMatrix::zeros(2, 2);
    let n = 10_000;
    for _ in 0..n {
        acc += random_mixed_with(2, &mut rng).matrix();
    }
    let mean = acc.map(|z| z / n as f64);
    assert!(max_entry_diff(&mean, maximally_mixed(2).matrix()) < 0.02);
}

#[test]
fn random_mixed_full_rank_over_many_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    for dim in [2usize, 4, 8] {
        for _ in 0..10_000 / dim {
            let rho = random_mixed_with(dim, &mut rng);
            assert!(rho.eigenvalues()[0] > 0.0, "rank-deficient sample at dim {dim}");
        }
    }
}

#[test]
fn entropic_nonnegativity_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    for _ in 0..100 {
        let n = rng.random_range(2..=8);
        let p = random_prob_with(n, &mut rng);
        let q = random_prob_with(n, &mut rng);
        assert!(classical_relative_entropy(&p, &q).unwrap() >= -1e-9);

        let j = random_joint_with(rng.random_range(2..=6), rng.random_range(2..=6), &mut rng);
        assert!(mutual_information(&j) >= -1e-9);

        let dim = rng.random_range(2..=6);
        let rho = random_mixed_with(dim, &mut rng);
        let sigma = random_mixed_with(dim, &mut rng);
        assert!(quantum_relative_entropy(&rho, &sigma).unwrap() >= -1e-9);

        let da = rng.random_range(2..=3);
        let db = rng.random_range(2..=3);
        let ab = random_mixed_with(da * db, &mut rng);
        assert!(quantum_mutual_information(&ab, (da, db)).unwrap() >= -1e-9);
    }
}

#[test]
fn conditional_entropy_symmetry_identity() {
    // H(X) - H(X|Y) = H(Y) - H(Y|X) = H(X) + H(Y) - H(X,Y)
    let mut rng = ChaCha8Rng::seed_from_u64(131);
    for _ in 0..100 {
        let j = random_joint_with(rng.random_range(2..=8), rng.random_range(2..=8), &mut rng);
        let hx = shannon_entropy(&j.row_marginal());
        let hy = shannon_entropy(&j.col_marginal());
        let hxy = shannon_entropy(&j.flattened());
        let via_x = hx - conditional_entropy(&j);
        // H(Y|X) is the conditional entropy of the transposed joint
        let rows: Vec<Vec<f64>> = (0..j.ny())
            .map(|y| (0..j.nx()).map(|x| j.get(x, y)).collect())
            .collect();
        let jt = JointDist::from_rows(&rows, &tol()).unwrap();
        let via_y = hy - conditional_entropy(&jt);
        let via_joint = hx + hy - hxy;
        assert!((via_x - via_joint).abs() < 1e-9);
        assert!((via_y - via_joint).abs() < 1e-9);
        assert!((mutual_information(&j) - via_joint).abs() < 1e-9);
    }
}

#[test]
fn commuting_case_reduces_to_classical_pinsker() {
    let mut rng = ChaCha8Rng::seed_from_u64(137);
    for _ in 0..50 {
        let n = rng.random_range(2..=6);
        let p = random_prob_floored_with(n, &mut rng);
        let q = random_prob_floored_with(n, &mut rng);
        let diag = |v: &ProbDist| {
            let m = CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(v.get(i), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            validate_density(m, &tol()).unwrap()
        };
        let quantum = pinsker_quantum(&diag(&p), &diag(&q)).unwrap();
        let classical = pinsker_classical(&p, &q).unwrap();
        assert!((quantum.lhs - classical.lhs).abs() < 1e-9);
        assert!((quantum.rhs - classical.rhs).abs() < 1e-9);
    }
}

#[test]
fn theorem5_sides_match_quantum_pinsker_on_dense_cq_pair() {
    // chi = D_q(dense real || dense decoupled) and the Eq-26 distance is the
    // trace distance of the same pair, so Theorem 5 is Theorem 3 on cq states
    let mut rng = ChaCha8Rng::seed_from_u64(139);
    for _ in 0..20 {
        let m = rng.random_range(2..=4);
        let d = rng.random_range(2..=3);
        let states: Vec<_> = (0..m).map(|_| random_mixed_with(d, &mut rng)).collect();
        let e = Ensemble::new(random_prob_floored_with(m, &mut rng), states).unwrap();
        let through_thm5 = holevo_vs_trace(&e);
        let cq = build_cq_state(e);
        let dense_check = pinsker_quantum(&cq.dense(), &cq.decoupled().dense()).unwrap();
        assert!((through_thm5.lhs - dense_check.lhs).abs() < 1e-9);
        assert!((through_thm5.rhs - dense_check.rhs).abs() < 1e-9);
    }
}

#[test]
fn pinsker_slack_vanishes_monotonically_along_mixture_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(149);
    for _ in 0..20 {
        let dim = rng.random_range(2..=4);
        let rho = random_mixed_with(dim, &mut rng);
        let sigma = random_mixed_with(dim, &mut rng);
        let slack_at = |t: f64| {
            let mat = rho.matrix().map(|z| z * t) + sigma.matrix().map(|z| z * (1.0 - t));
            let step = validate_density(mat, &tol()).unwrap();
            pinsker_quantum(&step, &sigma).unwrap().slack
        };
        // walk rho toward sigma; slack must decrease monotonically
        let mut last = f64::INFINITY;
        for k in (1..=10).rev() {
            let slack = slack_at(k as f64 / 10.0);
            assert!(slack <= last + 1e-9, "slack increased along path");
            assert!(slack >= -1e-9);
            last = slack;
        }
        // and vanish quadratically at the endpoint
        assert!(slack_at(1e-3) < 1e-2, "slack did not vanish near sigma");
    }
}

#[test]
fn detection_chain_dominance() {
    // P_d(optimal) >= P_d(PGM) >= max prior on uniform ensembles, and the
    // optimized result never loses to blind guessing on any ensemble
    let mut rng = ChaCha8Rng::seed_from_u64(151);
    for i in 0..30 {
        let m = rng.random_range(2..=5);
        let dim = rng.random_range(2..=4);
        let uniform = i % 2 == 0;
        let states: Vec<_> = (0..m)
            .map(|_| {
                if rng.random::<f64>() < 0.3 {
                    random_pure_with(dim, &mut rng)
                } else {
                    random_mixed_with(dim, &mut rng)
                }
            })
            .collect();
        let priors = if uniform {
            ProbDist::uniform(m)
        } else {
            random_prob_floored_with(m, &mut rng)
        };
        let e = Ensemble::new(priors, states).unwrap();
        let pgm = pretty_good_measurement(&e);
        let pgm_pd = detection_probability(&e, &pgm);
        let trace = optimize_detection_traced(&e, 1e-7, 2_000);
        assert!(trace.result.p_d >= pgm_pd - 1e-9);
        assert!(trace.result.p_d >= e.priors().max() - 1e-9);
        if uniform {
            assert!(pgm_pd >= e.priors().max() - 1e-9);
        }
        assert!((trace.result.p_e + trace.result.p_d - 1.0).abs() < 1e-9);

        // outcome statistics of the optimized POVM form a distribution
        let probs = trace.result.povm.outcome_probabilities(e.state(0));
        assert!(probs.iter().all(|&p| p >= -1e-12));
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn accessible_information_below_holevo() {
    let mut rng = ChaCha8Rng::seed_from_u64(157);
    let cfg = SearchConfig {
        grid_points: 512,
        refine_steps: 40,
        restarts: 6,
        ascent_steps: 120,
        seed: 3,
    };
    for _ in 0..10 {
        let m = rng.random_range(2..=4);
        let dim = rng.random_range(2..=3);
        let states: Vec<_> = (0..m).map(|_| random_mixed_with(dim, &mut rng)).collect();
        let e = Ensemble::uniform(states).unwrap();
        let acc = accessible_information(&e, &cfg);
        assert!(acc >= -1e-12);
        assert!(acc <= holevo_information(&e) + 1e-7);
    }
}

#[test]
fn measurement_never_beats_quantum_guessing() {
    // Theorem 6 consistency: measuring first can only lose
    let mut rng = ChaCha8Rng::seed_from_u64(163);
    for _ in 0..15 {
        let m = rng.random_range(2..=4);
        let dim = rng.random_range(2..=3);
        let states: Vec<_> = (0..m).map(|_| random_mixed_with(dim, &mut rng)).collect();
        let ke = KeyEnsemble::new(states, None).unwrap();
        let quantum = guess_bound(&ke).unwrap();
        for _ in 0..4 {
            let povm = random_povm_with(dim, rng.random_range(2..=4), &mut rng);
            let joint = povm.outcome_joint(ke.eve_ensemble()).unwrap();
            let classical = classical_guess_bound(&joint);
            assert!(classical.all_pass());
            assert!(
                classical.p_guess <= quantum.p_guess + 1e-7,
                "measured guess {} beats quantum {}",
                classical.p_guess,
                quantum.p_guess
            );
        }
        // Theorem 5 link: chi >= (2/ln 2) Delta_q^2 on key ensembles
        let chi = holevo_information(ke.eve_ensemble());
        let delta = qkd_delta(&ke);
        assert!(chi >= (2.0 / std::f64::consts::LN_2) * delta * delta - 1e-9);
    }
}

#[test]
fn binary_saturation_of_the_sandwich() {
    // M = 2 with uniform priors: the upper bound is the Helstrom value
    let mut rng = ChaCha8Rng::seed_from_u64(167);
    for _ in 0..20 {
        let dim = rng.random_range(2..=4);
        let a = random_mixed_with(dim, &mut rng);
        let b = random_mixed_with(dim, &mut rng);
        let ke = KeyEnsemble::new(vec![a, b], None).unwrap();
        let r = guess_bound(&ke).unwrap();
        assert!(
            (r.upper - r.p_guess).abs() < 1e-7,
            "binary equal-prior sandwich must saturate: upper {} p_guess {}",
            r.upper,
            r.p_guess
        );
    }
}

#[test]
fn povm_completion_of_random_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(173);
    let g = ginibre_with(4, &mut rng);
    assert_eq!(g.nrows(), 4);
    for outcomes in 2..=5 {
        let povm = random_povm_with(3, outcomes, &mut rng);
        assert!(Povm::new(povm.elements().to_vec(), &tol()).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shannon_entropy_bounds(raw in proptest::collection::vec(1e-6..1.0f64, 2..10)) {
        let sum: f64 = raw.iter().sum();
        let p = ProbDist::new(raw.iter().map(|x| x / sum).collect(), &tol()).unwrap();
        let h = shannon_entropy(&p);
        prop_assert!(h >= -1e-12);
        prop_assert!(h <= (p.len() as f64).log2() + 1e-9);
    }

    #[test]
    fn statistical_distance_range_and_symmetry(
        raw_p in proptest::collection::vec(1e-6..1.0f64, 4),
        raw_q in proptest::collection::vec(1e-6..1.0f64, 4),
    ) {
        let sp: f64 = raw_p.iter().sum();
        let sq: f64 = raw_q.iter().sum();
        let p = ProbDist::new(raw_p.iter().map(|x| x / sp).collect(), &tol()).unwrap();
        let q = ProbDist::new(raw_q.iter().map(|x| x / sq).collect(), &tol()).unwrap();
        let d = statistical_distance(&p, &q).unwrap();
        prop_assert!((0.0..=2.0 + 1e-12).contains(&d));
        prop_assert!((d - statistical_distance(&q, &p).unwrap()).abs() < 1e-12);
        prop_assert!((delta_c(&p, &q).unwrap() - 0.5 * d).abs() < 1e-12);
    }

    #[test]
    fn classical_pinsker_always_holds(
        raw_p in proptest::collection::vec(0.0..1.0f64, 3..8),
        raw_q in proptest::collection::vec(0.0..1.0f64, 3..8),
    ) {
        let n = raw_p.len().min(raw_q.len());
        let norm = |raw: &[f64]| {
            let s: f64 = raw[..n].iter().sum();
            if s <= 0.0 {
                ProbDist::uniform(n)
            } else {
                ProbDist::new(raw[..n].iter().map(|x| x / s).collect(), &tol()).unwrap()
            }
        };
        let check = pinsker_classical(&norm(&raw_p), &norm(&raw_q)).unwrap();
        prop_assert!(check.holds(1e-9));
    }

    #[test]
    fn seeded_states_are_reproducible(seed in 0u64..1000, dim in 1usize..6) {
        let a = random_mixed(dim, seed);
        let b = random_mixed(dim, seed);
        prop_assert_eq!(a.matrix(), b.matrix());
    }
}
