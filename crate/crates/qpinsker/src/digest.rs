//! Canonical short digests of instances, used to label bound checks and to
//! point at the argmin instance of a randomized suite.

use sha2::{Digest, Sha256};

use crate::linalg::CMatrix;
use crate::states::{DensityOperator, Ensemble, JointDist, ProbDist};

/// First 16 hex chars of SHA-256 over the given bytes.
pub fn hex_digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Accumulates the exact bit patterns of the numbers making up an instance,
/// so the digest is stable across runs and platforms.
#[derive(Default)]
pub struct InstanceDigest {
    bytes: Vec<u8>,
}

impl InstanceDigest {
    pub fn new(tag: &str) -> Self {
        let mut d = InstanceDigest { bytes: Vec::new() };
        d.bytes.extend_from_slice(tag.as_bytes());
        d
    }

    pub fn push_f64(&mut self, x: f64) -> &mut Self {
        self.bytes.extend_from_slice(&x.to_bits().to_le_bytes());
        self
    }

    pub fn push_usize(&mut self, x: usize) -> &mut Self {
        self.bytes.extend_from_slice(&(x as u64).to_le_bytes());
        self
    }

    pub fn push_slice(&mut self, xs: &[f64]) -> &mut Self {
        self.push_usize(xs.len());
        for &x in xs {
            self.push_f64(x);
        }
        self
    }

    pub fn push_matrix(&mut self, m: &CMatrix) -> &mut Self {
        self.push_usize(m.nrows());
        self.push_usize(m.ncols());
        for z in m.iter() {
            self.push_f64(z.re);
            self.push_f64(z.im);
        }
        self
    }

    pub fn push_prob(&mut self, p: &ProbDist) -> &mut Self {
        self.push_slice(p.as_slice())
    }

    pub fn push_joint(&mut self, j: &JointDist) -> &mut Self {
        self.push_usize(j.nx());
        self.push_usize(j.ny());
        for x in 0..j.nx() {
            for y in 0..j.ny() {
                self.push_f64(j.get(x, y));
            }
        }
        self
    }

    pub fn push_state(&mut self, s: &DensityOperator) -> &mut Self {
        self.push_matrix(s.matrix())
    }

    pub fn push_ensemble(&mut self, e: &Ensemble) -> &mut Self {
        self.push_prob(e.priors());
        for s in e.states() {
            self.push_state(s);
        }
        self
    }

    pub fn finish(&self) -> String {
        hex_digest(&self.bytes)
    }
}
