//! Slack evaluators for the Pinsker family and the Holevo-vs-trace-distance
//! bound: compute both sides, return a verdict record.
//!
//! All right-hand sides use the coefficient consistent with the quantum
//! Pinsker inequality, (1/(2 ln 2)) ||.||^2 on raw norms, equivalently
//! (2/ln 2) Delta^2 on halved distances. The "printed middle" variant of the
//! quantum mutual-information bound, (1/ln 2) ||.||^2, is provided separately
//! because it is numerically false (the Bell state gives 3.246 > 2.0) and is
//! kept only as a regression artifact.

use crate::digest::InstanceDigest;
use crate::distance::{cq_trace_distance, statistical_distance, trace_norm};
use crate::entropy::{
    classical_relative_entropy, holevo_information, mutual_information,
    quantum_mutual_information, quantum_relative_entropy,
};
use crate::error::{Error, Result};
use crate::linalg::kron;
use crate::states::{
    build_cq_state, DensityOperator, Ensemble, JointDist, ProbDist, Subsystem,
};

/// Both sides of one bound instance. `slack = lhs - rhs` is nonnegative
/// (within numerical tolerance) whenever the theorem holds; the suites
/// assert that, not the constructor.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub theorem: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub inputs_digest: String,
}

impl BoundCheck {
    fn new(theorem: &'static str, lhs: f64, rhs: f64, inputs_digest: String) -> Self {
        BoundCheck {
            theorem,
            lhs,
            rhs,
            slack: lhs - rhs,
            inputs_digest,
        }
    }

    /// True when the inequality holds within `tol` (an infinite left side
    /// holds vacuously).
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs.is_infinite() || self.slack >= -tol
    }
}

/// Default slack tolerance used by the verification suites.
pub const SLACK_TOL: f64 = 1e-9;

const HALF_INV_LN2: f64 = 0.5 / std::f64::consts::LN_2;
const TWO_OVER_LN2: f64 = 2.0 / std::f64::consts::LN_2;

/// Classical Pinsker: D_c(p || q) >= (1/(2 ln 2)) ||p - q||_c^2 with the raw
/// (un-halved) Kolmogorov norm.
pub fn pinsker_classical(p: &ProbDist, q: &ProbDist) -> Result<BoundCheck> {
    let lhs = classical_relative_entropy(p, q)?;
    let norm = statistical_distance(p, q)?;
    let rhs = HALF_INV_LN2 * norm * norm;
    let digest = InstanceDigest::new("thm1")
        .push_prob(p)
        .push_prob(q)
        .finish();
    Ok(BoundCheck::new("theorem-1", lhs, rhs, digest))
}

/// Mutual-information Pinsker: I(X, Y) >= (2/ln 2) Delta_c^2 with
/// Delta_c = (1/2) ||P(x,y) - P(x)P(y)||_c.
pub fn pinsker_mutual(j: &JointDist) -> BoundCheck {
    let lhs = mutual_information(j);
    let product = j.product_of_marginals();
    let norm = statistical_distance(&j.flattened(), &product.flattened())
        .expect("flattened joints have equal length");
    let delta = 0.5 * norm;
    let rhs = TWO_OVER_LN2 * delta * delta;
    let digest = InstanceDigest::new("thm2").push_joint(j).finish();
    BoundCheck::new("theorem-2", lhs, rhs, digest)
}

/// Quantum Pinsker: D_q(rho || sigma) >= (1/(2 ln 2)) ||rho - sigma||_q^2.
pub fn pinsker_quantum(rho: &DensityOperator, sigma: &DensityOperator) -> Result<BoundCheck> {
    let lhs = quantum_relative_entropy(rho, sigma)?;
    let norm = trace_norm(&(rho.matrix() - sigma.matrix()));
    let rhs = HALF_INV_LN2 * norm * norm;
    let digest = InstanceDigest::new("thm3")
        .push_state(rho)
        .push_state(sigma)
        .finish();
    Ok(BoundCheck::new("theorem-3", lhs, rhs, digest))
}

fn bipartite_delta(rho_ab: &DensityOperator, dims: (usize, usize)) -> Result<f64> {
    let a = rho_ab.partial_trace(dims, Subsystem::A)?;
    let b = rho_ab.partial_trace(dims, Subsystem::B)?;
    let product = kron(a.matrix(), b.matrix());
    Ok(trace_norm(&(rho_ab.matrix() - product)))
}

/// Quantum mutual-information Pinsker: I_q(A, B) >= (2/ln 2) Delta_q^2 with
/// Delta_q = (1/2) ||rho_AB - rho_A (x) rho_B||_q.
pub fn pinsker_quantum_mutual(
    rho_ab: &DensityOperator,
    dims: (usize, usize),
) -> Result<BoundCheck> {
    let lhs = quantum_mutual_information(rho_ab, dims)?;
    let norm = bipartite_delta(rho_ab, dims)?;
    let delta = 0.5 * norm;
    let rhs = TWO_OVER_LN2 * delta * delta;
    let digest = InstanceDigest::new("thm4")
        .push_state(rho_ab)
        .push_usize(dims.0)
        .push_usize(dims.1)
        .finish();
    Ok(BoundCheck::new("theorem-4", lhs, rhs, digest))
}

/// The bound exactly as its middle expression is printed,
/// I_q >= (1/ln 2) ||rho_AB - rho_A (x) rho_B||_q^2. Numerically false
/// (Bell state: rhs 3.246 > lhs 2.0); retained as a regression artifact
/// documenting why the Delta_q form is the one verified.
pub fn pinsker_quantum_mutual_printed(
    rho_ab: &DensityOperator,
    dims: (usize, usize),
) -> Result<BoundCheck> {
    let lhs = quantum_mutual_information(rho_ab, dims)?;
    let norm = bipartite_delta(rho_ab, dims)?;
    let rhs = 2.0 * HALF_INV_LN2 * norm * norm;
    let digest = InstanceDigest::new("thm4-printed")
        .push_state(rho_ab)
        .push_usize(dims.0)
        .push_usize(dims.1)
        .finish();
    Ok(BoundCheck::new("theorem-4-printed", lhs, rhs, digest))
}

/// Holevo vs trace distance: chi(ensemble) >= (2/ln 2) Delta_q^2 with
/// Delta_q the classical-quantum trace distance.
pub fn holevo_vs_trace(e: &Ensemble) -> BoundCheck {
    let lhs = holevo_information(e);
    let cq = build_cq_state(e.clone());
    let delta = cq_trace_distance(&cq).expect("eigendecomposition").value;
    let rhs = TWO_OVER_LN2 * delta * delta;
    let digest = InstanceDigest::new("thm5").push_ensemble(e).finish();
    BoundCheck::new("theorem-5", lhs, rhs, digest)
}

/// Dimension check shared with the CLI: bipartite inputs must factor.
pub fn check_bipartite_dims(rho_ab: &DensityOperator, dims: (usize, usize)) -> Result<()> {
    if dims.0 * dims.1 != rho_ab.dim() {
        return Err(Error::DimensionMismatch(dims.0 * dims.1, rho_ab.dim()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CVector, C64};
    use crate::states::{basis_ket, maximally_mixed, pure_state, validate_density};
    use crate::tol::Tolerances;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn theorem1_examples() {
        let half = ProbDist::new(vec![0.5, 0.5], &tol()).unwrap();
        let check = pinsker_classical(&half, &half).unwrap();
        assert_eq!(check.lhs, 0.0);
        assert_eq!(check.rhs, 0.0);

        let point = ProbDist::new(vec![1.0, 0.0], &tol()).unwrap();
        let check = pinsker_classical(&point, &half).unwrap();
        assert!((check.lhs - 1.0).abs() < 1e-12);
        assert!((check.rhs - 0.721_347_520_444_481_7).abs() < 1e-12);
        assert!((check.slack - 0.278_652_479_555_518_3).abs() < 1e-12);
        assert!(check.holds(SLACK_TOL));

        let other = ProbDist::new(vec![0.0, 1.0], &tol()).unwrap();
        let check = pinsker_classical(&point, &other).unwrap();
        assert_eq!(check.lhs, f64::INFINITY);
        assert!(check.holds(SLACK_TOL));
    }

    #[test]
    fn theorem2_examples() {
        let indep = JointDist::from_rows(&[vec![0.25, 0.25], vec![0.25, 0.25]], &tol()).unwrap();
        let check = pinsker_mutual(&indep);
        assert!(check.lhs.abs() < 1e-12);
        assert!(check.rhs.abs() < 1e-12);

        // delta_c = 0.3, termwise norm 0.6 (oracle: (2/ln2) * 0.09)
        let j = JointDist::from_rows(&[vec![0.4, 0.1], vec![0.1, 0.4]], &tol()).unwrap();
        let check = pinsker_mutual(&j);
        assert!((check.lhs - 0.278_071_905_112_637_9).abs() < 1e-12);
        assert!((check.rhs - 0.259_685_107_360_013_5).abs() < 1e-12);
        assert!((check.slack - 0.018_386_797_752_624_4).abs() < 1e-12);

        let diag = JointDist::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]], &tol()).unwrap();
        let check = pinsker_mutual(&diag);
        assert!((check.lhs - 1.0).abs() < 1e-12);
        assert!((check.rhs - 0.721_347_520_444_481_7).abs() < 1e-12);
    }

    #[test]
    fn theorem3_examples() {
        let mixed = maximally_mixed(2);
        let check = pinsker_quantum(&mixed, &mixed).unwrap();
        assert!(check.lhs.abs() < 1e-9);
        assert!(check.rhs.abs() < 1e-18);

        let zero = pure_state(&basis_ket(2, 0)).unwrap();
        let check = pinsker_quantum(&zero, &mixed).unwrap();
        assert!((check.lhs - 1.0).abs() < 1e-12);
        assert!((check.rhs - 0.721_347_520_444_481_7).abs() < 1e-9);

        let check = pinsker_quantum(&mixed, &zero).unwrap();
        assert_eq!(check.lhs, f64::INFINITY);
        assert!(check.holds(SLACK_TOL));
    }

    #[test]
    fn theorem4_examples() {
        let bell = pure_state(&CVector::from_vec(vec![
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]))
        .unwrap();
        // difference spectrum {0.75, -0.25 x3}: Delta_q = 0.75
        let check = pinsker_quantum_mutual(&bell, (2, 2)).unwrap();
        assert!((check.lhs - 2.0).abs() < 1e-12);
        assert!((check.rhs - 1.623_031_921_000_082_8).abs() < 1e-9);
        assert!((check.slack - 0.376_968_078_999_917_2).abs() < 1e-9);
        assert!(check.holds(SLACK_TOL));

        // the printed middle expression fails on the same instance
        let printed = pinsker_quantum_mutual_printed(&bell, (2, 2)).unwrap();
        assert!((printed.rhs - 3.246_063_842_000_165_5).abs() < 1e-9);
        assert!(!printed.holds(SLACK_TOL));

        // classically correlated (1/2)(|00><00| + |11><11|): Delta_q = 0.5
        let mut m = crate::linalg::zeros(4);
        m[(0, 0)] = c(0.5, 0.0);
        m[(3, 3)] = c(0.5, 0.0);
        let cc = validate_density(m, &tol()).unwrap();
        let check = pinsker_quantum_mutual(&cc, (2, 2)).unwrap();
        assert!((check.lhs - 1.0).abs() < 1e-12);
        assert!((check.rhs - 0.721_347_520_444_481_7).abs() < 1e-9);

        let product = maximally_mixed(4);
        let check = pinsker_quantum_mutual(&product, (2, 2)).unwrap();
        assert!(check.lhs.abs() < 1e-9);
        assert!(check.rhs.abs() < 1e-15);
    }

    #[test]
    fn theorem5_examples() {
        let zero = pure_state(&basis_ket(2, 0)).unwrap();
        let plus = pure_state(&CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)])).unwrap();
        let one = pure_state(&basis_ket(2, 1)).unwrap();

        let same = Ensemble::uniform(vec![zero.clone(), zero.clone()]).unwrap();
        let check = holevo_vs_trace(&same);
        assert!(check.lhs.abs() < 1e-12);
        assert!(check.rhs.abs() < 1e-12);

        let mix = Ensemble::uniform(vec![zero.clone(), plus]).unwrap();
        let check = holevo_vs_trace(&mix);
        assert!((check.lhs - 0.600_876_036_692_856_2).abs() < 1e-12);
        assert!((check.rhs - 0.360_673_760_222_240_8).abs() < 1e-9);
        assert!((check.slack - 0.240_202_276_470_615_4).abs() < 1e-9);

        let orth = Ensemble::uniform(vec![zero, one]).unwrap();
        let check = holevo_vs_trace(&orth);
        assert!((check.lhs - 1.0).abs() < 1e-12);
        assert!((check.rhs - 0.721_347_520_444_481_7).abs() < 1e-9);
    }
}
