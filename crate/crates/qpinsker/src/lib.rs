//! # qpinsker
//!
//! Entropic quantities, statistical and trace distances, minimum-error
//! quantum detection, and numerical verification of the Pinsker-type
//! inequality chain over finite-dimensional quantum states:
//!
//! - classical and quantum Pinsker bounds (relative entropy vs distance),
//! - the Holevo-information bound on the classical-quantum trace distance,
//! - the guessing-probability sandwich `1/M <= P_guess <= 1/M + Delta_q`
//!   for key-vs-eavesdropper ensembles, with the sub-optimal composite
//!   detector behind its derivation chain,
//! - brute-force and closed-form oracles plus randomized suites checking
//!   all of the above on thousands of random instances.
//!
//! Everything works in bits (base-2 logarithms) on dense complex matrices
//! at desk scale (dimension <= 64). All values are immutable after
//! construction and every operation is a pure function of its inputs plus
//! an explicit seed, so computations parallelize and reproduce exactly.
//!
//! ## Quick tour
//!
//! ```rust
//! use qpinsker::prelude::*;
//!
//! // |0> and |+> with equal priors
//! let zero = pure_state(&basis_ket(2, 0)).unwrap();
//! let plus = pure_state(&CVector::from_vec(vec![
//!     Complex::new(1.0, 0.0),
//!     Complex::new(1.0, 0.0),
//! ]))
//! .unwrap();
//! let e = Ensemble::uniform(vec![zero, plus]).unwrap();
//!
//! // Holevo information and the trace-distance bound it dominates
//! let chi = holevo_information(&e);
//! let check = holevo_vs_trace(&e);
//! assert!((chi - check.lhs).abs() < 1e-12);
//! assert!(check.slack >= 0.0);
//!
//! // optimal detection: P_d = (1 + 1/sqrt(2)) / 2
//! let det = optimize_detection(&e, 1e-8, 1000).unwrap();
//! assert!((det.p_d - 0.8535533905932737).abs() < 1e-7);
//! ```

pub mod detection;
pub mod digest;
pub mod distance;
pub mod entropy;
pub mod error;
pub mod inequalities;
pub mod io;
pub mod linalg;
pub mod qkd;
pub mod states;
pub mod suites;
pub mod tol;

pub use error::{Error, Result};
pub use tol::{Tolerances, SUPPORT_CLAMP_REL};

/// The commonly used names in one import.
pub mod prelude {
    pub use num_complex::Complex;

    pub use crate::detection::{
        accessible_information, detection_probability, guessing_probability, helstrom_binary,
        optimality_residual, optimize_detection, optimize_detection_traced,
        pretty_good_measurement, DetectionResult, SearchConfig,
    };
    pub use crate::distance::{
        cq_trace_distance, delta_c, statistical_distance, trace_distance, trace_norm,
        DistanceResult,
    };
    pub use crate::entropy::{
        binary_entropy, classical_relative_entropy, conditional_entropy, cq_joint_entropy,
        holevo_information, mutual_information, quantum_joint_entropy,
        quantum_mutual_information, quantum_relative_entropy, shannon_entropy,
        von_neumann_entropy, SupportMode,
    };
    pub use crate::error::{Error, Result};
    pub use crate::inequalities::{
        holevo_vs_trace, pinsker_classical, pinsker_mutual, pinsker_quantum,
        pinsker_quantum_mutual, pinsker_quantum_mutual_printed, BoundCheck, SLACK_TOL,
    };
    pub use crate::linalg::{CMatrix, CVector, C64};
    pub use crate::qkd::{
        build_key_ensemble, classical_guess_bound, guess_bound, perfect_case_check, qkd_delta,
        suboptimal_povm, GuessBoundReport, KeyEnsemble,
    };
    pub use crate::states::{
        basis_ket, basis_projector, build_cq_state, maximally_mixed, partial_trace, pure_state,
        random_mixed, random_pure, tensor, validate_density, CQState, DensityOperator, Ensemble,
        JointDist, Povm, ProbDist, Subsystem,
    };
    pub use crate::suites::{run_verify, SuiteConfig, SuiteSelection, VerifyReport};
    pub use crate::tol::Tolerances;
}
