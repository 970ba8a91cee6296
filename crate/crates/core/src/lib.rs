//! Exact and sampled verification of Poisson-Lie identities on SU(n), twist conjugates
//! σ(c,m), and covariant Poisson structures on complex Grassmannians.

pub mod double;
pub mod homogeneous;
pub mod lie;
pub mod linalg;
pub mod par;
pub mod poisson;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod wedge;
